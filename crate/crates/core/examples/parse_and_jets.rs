//! Parse a scalar field, take its second-order jet and an adapted-frame
//! derivative.
//!
//! cargo run --example parse_and_jets

use hyperfinsler::calculus::{delta_derivative, eval_jet2, ChartPoint};
use hyperfinsler::expr::parse_expression;
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_expression("exp(x1)*(y1^2 + y2^2) - sin(x2)*y1*y2", 1)?;
    println!("f = {f}");

    let p = ChartPoint::new(vec![0.5, -0.25], vec![1.0, 2.0])?;
    let jet = eval_jet2(&f, &p)?;
    println!("f(p) = {:.6}", jet.value);
    println!("grad (x1, x2, y1, y2) = {:?}", jet.grad());
    println!("hessian =\n{:.4}", jet.hessian());

    // δ_1 = ∂/∂x1 − N^j_1 ∂/∂y^j with a constant connection.
    let n = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, -1.0, 0.25]);
    println!("δ_1 f = {:.6}", delta_derivative(&f, &n, 0, &p)?);

    match parse_expression("y1^2 + z3", 1) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
