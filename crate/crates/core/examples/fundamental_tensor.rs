//! Fundamental tensor, signature and homogeneity of a few metrics.
//!
//! cargo run --example fundamental_tensor

use hyperfinsler::calculus::ChartPoint;
use hyperfinsler::expr::{validate_fieldset, FieldSetSource};
use hyperfinsler::metric::Geometry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = ChartPoint::new(vec![1.0, 0.0], vec![0.6, -0.8])?;
    for fstar in [
        "y1^2 + y2^2",
        "y1^2 - y2^2",
        "exp(x1)*(y1^2 + y2^2)",
        "exp(0.5*x1)*(y1^2 + y2^2) + 0.2*(y1^4 + y2^4)/(y1^2 + y2^2)",
        "y1^2 + y2^2 + y1",
    ] {
        let geometry = Geometry::new(validate_fieldset(&FieldSetSource::new(1, fstar))?);
        let vm = geometry.fundamental_tensor(&p)?;
        let h = geometry.check_homogeneity(&p, &[0.5, 2.0, 3.0])?;
        println!("F* = {fstar}");
        println!("  g = {:?}", vm.g.as_slice());
        println!("  signature {} ({})", vm.signature, vm.signature.regime());
        println!("  homogeneity residual {:.2e}", h.max_relative());
    }
    Ok(())
}
