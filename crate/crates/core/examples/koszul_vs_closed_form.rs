//! Construct ∇¹ and ∇³ twice, by solving the Koszul identities and from the
//! explicit coefficient formulas, and compare.
//!
//! cargo run --example koszul_vs_closed_form

use hyperfinsler::calculus::ChartPoint;
use hyperfinsler::connections::{
    coeffs_closed_form, koszul_solve, metricity_residual, Indicant, PointData,
};
use hyperfinsler::expr::{validate_fieldset, FieldSetSource};
use hyperfinsler::metric::Geometry;
use hyperfinsler::nlconn::NonlinearConnection;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut src = FieldSetSource::new(
        1,
        "exp(0.5*x1)*(y1^2 + y2^2) + 0.2*(1 + x2^2)*(y1^4 + y2^4)/(y1^2 + y2^2)",
    );
    src.s_coeffs.insert((1, 1, 2), "0.3".into());
    src.s_coeffs.insert((2, 1, 2), "-0.5*x1".into());
    src.t_coeffs.insert((1, 1, 2), "0.7".into());
    src.t_coeffs.insert((2, 1, 2), "0.1*y1*x2".into());
    let geometry = Geometry::new(validate_fieldset(&src)?);
    let nc = NonlinearConnection::for_geometry(&geometry);
    let pd = PointData::evaluate(
        &geometry,
        &nc,
        &ChartPoint::new(vec![0.2, -0.4], vec![1.0, 0.3])?,
    )?;

    for a in Indicant::BOTH {
        let closed = coeffs_closed_form(&pd, a);
        let koszul = koszul_solve(&pd, a)?;
        println!("a = {}", a.index());
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    println!(
                        "  F^{}_{}{} = {:+.10}   (Koszul {:+.10})",
                        k + 1,
                        i + 1,
                        j + 1,
                        closed.f[(k, i, j)],
                        koszul.f[(k, i, j)]
                    );
                }
            }
        }
        println!("  relative deviation {:.2e}", closed.relative_diff(&koszul));
        println!(
            "  metricity residual {:.2e}",
            metricity_residual(&closed, &pd.metric)
        );
    }
    Ok(())
}
