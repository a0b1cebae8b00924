//! Load a configuration file and run every check, as the CLI does.
//!
//! cargo run --example verify_config -- configs/finsler.toml

use hyperfinsler::config::load_config;
use hyperfinsler::connections::{verify_all, VerifyOptions};
use hyperfinsler::expr::validate_fieldset;
use hyperfinsler::metric::Geometry;
use hyperfinsler::nlconn::NonlinearConnection;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/finsler.toml").into());
    let config = load_config(path.as_ref())?;
    let geometry = Geometry::new(validate_fieldset(&config.source)?);
    let nc = NonlinearConnection::for_geometry(&geometry);
    let report = verify_all(&geometry, &nc, &config.points, &VerifyOptions::default());
    report.write_human(&mut std::io::stdout().lock())?;
    for prefix in ["uniqueness", "metricity", "torsion_horizontal", "parallel"] {
        println!(
            "max {prefix}: {:.2e}",
            report.max_residual(prefix).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
