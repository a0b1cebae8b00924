//! Assemble D¹, D³ and D, then check torsion conditions and parallelism.
//!
//! cargo run --example twisted_connections

use hyperfinsler::calculus::ChartPoint;
use hyperfinsler::connections::{
    build_d, build_da, coeffs_closed_form, horizontal_torsion_residual, mixed_torsion_magnitude,
    parallelism_residual, torsion_da, vertical_torsion_residual, Indicant, PointData,
};
use hyperfinsler::expr::{validate_fieldset, FieldSetSource};
use hyperfinsler::hypercomplex::build_triple;
use hyperfinsler::metric::Geometry;
use hyperfinsler::nlconn::NonlinearConnection;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut src = FieldSetSource::new(
        2,
        "exp(0.3*x1)*(y1^2 + y2^2) + y3^2 - (1 + 0.2*x4^2)*y4^2 + 0.1*(y1^4 + y2^4)/(y1^2 + y2^2)",
    );
    src.s_coeffs.insert((3, 1, 4), "0.4 - x2".into());
    src.t_coeffs.insert((1, 2, 3), "0.25*y1".into());
    src.t_coeffs.insert((4, 1, 2), "-0.6".into());
    let geometry = Geometry::new(validate_fieldset(&src)?);
    let nc = NonlinearConnection::for_geometry(&geometry);
    let p = ChartPoint::new(vec![0.1, -0.3, 0.7, 0.2], vec![0.5, 1.0, -0.4, 0.8])?;
    let pd = PointData::evaluate(&geometry, &nc, &p)?;
    let triple = build_triple(2);
    println!(
        "signature {} ({})",
        pd.metric.signature,
        pd.metric.signature.regime()
    );

    for a in Indicant::BOTH {
        let cf = coeffs_closed_form(&pd, a);
        let da = build_da(&cf, &triple, a);
        let t = torsion_da(&da, &pd.brackets);
        println!("D{}:", a.index());
        println!(
            "  T(∂, ∂) - S            {:.2e}",
            vertical_torsion_residual(&t, &pd.s)
        );
        println!(
            "  hT(δ, δ) - J T(Jδ, Jδ) {:.2e}",
            horizontal_torsion_residual(&t, &pd.t, &triple, a)
        );
        println!(
            "  |T(δ, ∂)|              {:.3}",
            mixed_torsion_magnitude(&t)
        );
        println!(
            "  D{0} J{0}                {1:.2e}",
            a.index(),
            parallelism_residual(&da, &triple.get_f64(a.index()))
        );
    }

    let d = build_d(&coeffs_closed_form(&pd, Indicant::One), &triple);
    for b in 1..=3 {
        println!(
            "D J{b} {:.2e}",
            parallelism_residual(&d, &triple.get_f64(b))
        );
    }
    Ok(())
}
