//! The `hyperfinsler` command: load a configuration, verify every point and
//! print the report.

use std::io::Write;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::calculus::ChartPoint;
use crate::config::load_config;
use crate::connections::{verify_all, Indicant, VerifyOptions};
use crate::error::Result;
use crate::expr::{validate_fieldset, FieldSetSource};
use crate::metric::Geometry;
use crate::nlconn::NonlinearConnection;
use crate::report::Tolerances;

/// Points sampled when neither the config nor `--points` supplies any.
pub const DEFAULT_POINT_COUNT: usize = 10;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Human,
    Machine,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub config_path: PathBuf,
    /// `(family, tolerance)` overrides, applied in order.
    pub tolerance_overrides: Vec<(String, f64)>,
    /// Random points added after the configured ones.
    pub point_count: Option<usize>,
    pub seed: u64,
    pub output: OutputMode,
    pub random_tensors: bool,
    pub dump_coeffs: bool,
    pub perturbation: Option<f64>,
    pub expected_q: Option<usize>,
    pub d_input: Indicant,
}

impl RunConfig {
    pub fn new(config_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            config_path: config_path.into(),
            tolerance_overrides: Vec::new(),
            point_count: None,
            seed: 0,
            output: OutputMode::Human,
            random_tensors: false,
            dump_coeffs: false,
            perturbation: None,
            expected_q: None,
            d_input: Indicant::One,
        }
    }
}

/// `x` uniform in `[−1, 1]^{2n}`; `y` uniform on the unit sphere scaled by a
/// uniform factor in `[0.5, 2]`.
pub fn random_point(n: usize, rng: &mut impl Rng) -> ChartPoint {
    let m = 2 * n;
    let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..=1.0)).collect();
    loop {
        let dir: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let r: f64 = rng.random_range(0.5..=2.0);
        let y = dir.iter().map(|v| v * r / norm).collect();
        return ChartPoint::new(x, y).expect("sampled point is off the zero section");
    }
}

/// Constant skew entries uniform in `[−1, 1]` for every `(k, i < j)`.
pub fn random_skew_sources(
    n: usize,
    rng: &mut impl Rng,
) -> std::collections::BTreeMap<(usize, usize, usize), String> {
    let m = 2 * n;
    let mut out = std::collections::BTreeMap::new();
    for k in 1..=m {
        for i in 1..=m {
            for j in (i + 1)..=m {
                let v: f64 = rng.random_range(-1.0..=1.0);
                out.insert((k, i, j), v.to_string());
            }
        }
    }
    out
}

struct Prepared {
    geometry: Geometry,
    points: Vec<ChartPoint>,
    options: VerifyOptions,
}

fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    let config = load_config(&cfg.config_path)?;
    let mut tolerances = Tolerances::default();
    for (family, value) in &cfg.tolerance_overrides {
        tolerances
            .set(family, *value)
            .map_err(|e| crate::Error::Config(format!("--tol: {e}")))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut source: FieldSetSource = config.source;
    let n = source.n;
    if cfg.random_tensors {
        if source.s_coeffs.is_empty() {
            source.s_coeffs = random_skew_sources(n, &mut rng);
        }
        if source.t_coeffs.is_empty() {
            source.t_coeffs = random_skew_sources(n, &mut rng);
        }
    }
    let geometry = Geometry::new(validate_fieldset(&source)?);
    let mut points = config.points;
    for p in &points {
        if p.dim() != 2 * n {
            return Err(crate::Error::PointDimension {
                expected: 4 * n,
                found: 2 * p.dim(),
            });
        }
    }
    let extra = match cfg.point_count {
        Some(k) => k,
        None if points.is_empty() => DEFAULT_POINT_COUNT,
        None => 0,
    };
    points.extend((0..extra).map(|_| random_point(n, &mut rng)));
    Ok(Prepared {
        geometry,
        points,
        options: VerifyOptions {
            tolerances,
            d_input: cfg.d_input,
            expected_q: cfg.expected_q,
            perturbation: cfg.perturbation,
            dump_coeffs: cfg.dump_coeffs,
            ..VerifyOptions::default()
        },
    })
}

/// Runs the pipeline, writing the report to `out` and configuration errors
/// to `err`. Returns the process exit code.
pub fn run(cfg: &RunConfig, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let prepared = match prepare(cfg) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let nc = NonlinearConnection::for_geometry(&prepared.geometry);
    let report = verify_all(&prepared.geometry, &nc, &prepared.points, &prepared.options);
    let written = match cfg.output {
        OutputMode::Human => report.write_human(out),
        OutputMode::Machine => report.write_machine(out),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing report: {e}");
        return EXIT_CONFIG;
    }
    if report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
