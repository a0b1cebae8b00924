//! The canonical nonlinear connection of a metric and the brackets of the
//! adapted frame it induces.
//!
//! cargo run --example spray_and_brackets

use hyperfinsler::calculus::ChartPoint;
use hyperfinsler::expr::{validate_fieldset, FieldSetSource};
use hyperfinsler::metric::Geometry;
use hyperfinsler::nlconn::{frame_brackets, NonlinearConnection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let geometry = Geometry::new(validate_fieldset(&FieldSetSource::new(
        1,
        "exp(x1)*(y1^2 + y2^2)",
    ))?);
    let nc = NonlinearConnection::canonical(&geometry);
    let p = ChartPoint::new(vec![0.3, 0.1], vec![1.0, 2.0])?;
    let at = nc.evaluate(&p)?;
    // For this conformal metric N = ½ [[y1, -y2], [y2, y1]].
    println!("N^i_j at {p}:\n{:.6}", at.n);

    let br = frame_brackets(&at);
    for (a, b) in [(0, 1), (0, 2), (1, 3)] {
        println!("[E{}, E{}] = {:?}", a + 1, b + 1, br.bracket(a, b));
    }

    for k in [2.0, 3.0] {
        let scaled = nc.evaluate(&p.scaled(k))?.n;
        println!(
            "N(x, {k}y) - {k}N(x, y): {:.2e}",
            (scaled - &at.n * k).amax()
        );
    }
    Ok(())
}
