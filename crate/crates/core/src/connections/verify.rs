//! Runs every check over a list of points and collects a report.

use rayon::prelude::*;

use super::{
    build_d, build_da, cartan_coefficients, coeffs_closed_form, display_discrepancy,
    horizontal_torsion_residual, koszul_solve, metricity_residual, mixed_torsion_magnitude,
    parallelism_residual, torsion_da, torsion_from_nabla, vertical_torsion_residual,
    FullConnectionCoeffs, Indicant, PointData, VerticalConnectionCoeffs,
};
use crate::calculus::ChartPoint;
use crate::hypercomplex::{build_triple, quaternion_defect, HypercomplexTriple};
use crate::metric::{check_signature, Geometry};
use crate::nlconn::NonlinearConnection;
use crate::report::{CheckRecord, CoeffDump, Tolerances, VerificationReport};

/// Scaling factors used by the homogeneity check.
pub const HOMOGENEITY_SCALES: [f64; 3] = [0.5, 2.0, 3.0];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub indicants: Vec<Indicant>,
    pub tolerances: Tolerances,
    /// Which constructed `∇^a` feeds `D`.
    pub d_input: Indicant,
    /// Required number of negative eigenvalues of `g`, if any.
    pub expected_q: Option<usize>,
    /// Negative control: adds this amount to one constrained `F` entry and
    /// to one assembled frame coefficient before checking.
    pub perturbation: Option<f64>,
    pub dump_coeffs: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            indicants: Indicant::BOTH.to_vec(),
            tolerances: Tolerances::default(),
            d_input: Indicant::One,
            expected_q: None,
            perturbation: None,
            dump_coeffs: false,
        }
    }
}

/// Checks that depend on the constructed connections at a point. Used to
/// report each of them as failed when the point cannot be evaluated.
fn dependent_checks(opts: &VerifyOptions, s_empty: bool) -> Vec<(String, &'static str)> {
    let mut out = vec![("signature".to_string(), "signature")];
    for a in &opts.indicants {
        let i = a.index();
        out.push((format!("uniqueness.a{i}"), "uniqueness"));
        out.push((format!("metricity.a{i}"), "metricity"));
        out.push((format!("torsion_vertical.a{i}"), "torsion_vertical"));
        out.push((format!("torsion_horizontal.a{i}"), "torsion_horizontal"));
        out.push((format!("torsion_skew.a{i}"), "torsion_skew"));
        out.push((format!("parallel.D{i}"), "parallel"));
    }
    out.push(("c_symmetry".to_string(), "c_symmetry"));
    if s_empty {
        out.push(("cartan".to_string(), "cartan"));
    }
    for b in 1..=3 {
        out.push((format!("parallel.D.J{b}"), "parallel"));
    }
    out
}

fn perturb_frame(d: &mut FullConnectionCoeffs, delta: f64) {
    d.coeffs[(0, 0, 0)] += delta;
}

fn check_point(
    geometry: &Geometry,
    nc: &NonlinearConnection,
    triple: &HypercomplexTriple,
    idx: usize,
    p: &ChartPoint,
    opts: &VerifyOptions,
) -> (Vec<CheckRecord>, Vec<CoeffDump>) {
    let tol = |family: &str| opts.tolerances.get(family);
    let at = Some(idx);
    let mut records = Vec::new();
    let mut dumps = Vec::new();

    match geometry.check_homogeneity(p, &HOMOGENEITY_SCALES) {
        Ok(h) => records.push(CheckRecord::measured(
            "homogeneity",
            at,
            h.max_relative(),
            tol("homogeneity"),
        )),
        Err(e) => records.push(CheckRecord::failed(
            "homogeneity",
            at,
            tol("homogeneity"),
            e.to_string(),
        )),
    }

    let s_empty = geometry.fieldset().s_coeffs.is_empty();
    let pd = match PointData::evaluate(geometry, nc, p) {
        Ok(pd) => pd,
        Err(e) => {
            let why = e.to_string();
            for (name, family) in dependent_checks(opts, s_empty) {
                records.push(CheckRecord::failed(name, at, tol(family), why.clone()));
            }
            return (records, dumps);
        }
    };

    let sig = &pd.metric.signature;
    let sig_ok = check_signature(&pd.metric, opts.expected_q);
    records.push(
        CheckRecord::measured(
            "signature",
            at,
            if sig_ok { 0.0 } else { 1.0 },
            tol("signature"),
        )
        .with_detail(format!("{sig} {}", sig.regime())),
    );

    let scale = pd.metric.max_abs().max(1.0);
    let mut closed: Vec<(Indicant, VerticalConnectionCoeffs)> = Vec::new();
    for &a in &opts.indicants {
        let i = a.index();
        let mut cf = coeffs_closed_form(&pd, a);
        if let Some(delta) = opts.perturbation {
            let (k, ii, j) = a.sensitive_entry();
            cf = cf.perturbed(k, ii, j, delta);
        }
        match koszul_solve(&pd, a) {
            Ok(ks) => {
                records.push(CheckRecord::measured(
                    format!("uniqueness.a{i}"),
                    at,
                    cf.relative_diff(&ks),
                    tol("uniqueness"),
                ));
                if opts.dump_coeffs {
                    dumps.push(CoeffDump {
                        point: idx,
                        a: i,
                        route: "koszul",
                        f: ks.f,
                        c: ks.c,
                    });
                }
            }
            Err(e) => records.push(CheckRecord::failed(
                format!("uniqueness.a{i}"),
                at,
                tol("uniqueness"),
                e.to_string(),
            )),
        }
        if opts.dump_coeffs {
            dumps.push(CoeffDump {
                point: idx,
                a: i,
                route: "closed_form",
                f: cf.f.clone(),
                c: cf.c.clone(),
            });
        }

        records.push(
            CheckRecord::measured(
                format!("metricity.a{i}"),
                at,
                metricity_residual(&cf, &pd.metric),
                tol("metricity") * scale,
            )
            .with_detail(format!("scale {scale:.3e}")),
        );

        let mut da = build_da(&cf, triple, a);
        let torsion = torsion_da(&da, &pd.brackets);
        records.push(CheckRecord::measured(
            format!("torsion_vertical.a{i}"),
            at,
            vertical_torsion_residual(&torsion, &pd.s),
            tol("torsion_vertical"),
        ));
        records.push(CheckRecord::measured(
            format!("torsion_horizontal.a{i}"),
            at,
            horizontal_torsion_residual(&torsion, &pd.t, triple, a),
            tol("torsion_horizontal"),
        ));
        records.push(CheckRecord::measured(
            format!("torsion_skew.a{i}"),
            at,
            torsion.skew_defect(),
            tol("torsion_skew"),
        ));
        records.push(CheckRecord::info(
            format!("torsion_mixed.a{i}"),
            at,
            mixed_torsion_magnitude(&torsion),
        ));
        let literal = torsion_from_nabla(&cf, triple, a, &pd.brackets);
        let disc = display_discrepancy(&literal, &cf, triple, a, &pd.brackets)
            .max(literal.t.max_abs_diff(&torsion.t));
        records.push(CheckRecord::info(format!("torsion_forms.a{i}"), at, disc));

        if let Some(delta) = opts.perturbation {
            perturb_frame(&mut da, delta);
        }
        records.push(CheckRecord::measured(
            format!("parallel.D{i}"),
            at,
            parallelism_residual(&da, &triple.get_f64(i)),
            tol("parallel"),
        ));
        closed.push((a, cf));
    }

    let c1 = coeffs_closed_form(&pd, Indicant::One).c;
    let c3 = coeffs_closed_form(&pd, Indicant::Three).c;
    records.push(CheckRecord::measured(
        "c_symmetry",
        at,
        c1.max_abs_diff(&c3),
        tol("c_symmetry"),
    ));
    if s_empty {
        records.push(CheckRecord::measured(
            "cartan",
            at,
            c1.relative_diff(&cartan_coefficients(&pd)),
            tol("cartan"),
        ));
    }

    let d_input = closed
        .iter()
        .find(|(a, _)| *a == opts.d_input)
        .map(|(_, cf)| cf.clone())
        .unwrap_or_else(|| coeffs_closed_form(&pd, opts.d_input));
    let mut d = build_d(&d_input, triple);
    if let Some(delta) = opts.perturbation {
        perturb_frame(&mut d, delta);
    }
    for b in 1..=3 {
        records.push(CheckRecord::measured(
            format!("parallel.D.J{b}"),
            at,
            parallelism_residual(&d, &triple.get_f64(b)),
            tol("parallel"),
        ));
    }
    (records, dumps)
}

/// Verifies every property at every point. Points are processed in
/// parallel; the report is ordered by (point, check name).
pub fn verify_all(
    geometry: &Geometry,
    nc: &NonlinearConnection,
    points: &[ChartPoint],
    opts: &VerifyOptions,
) -> VerificationReport {
    let triple = build_triple(geometry.fieldset().n);
    let per_point: Vec<_> = points
        .par_iter()
        .enumerate()
        .map(|(idx, p)| check_point(geometry, nc, &triple, idx, p, opts))
        .collect();

    let mut report = VerificationReport::default();
    report.records.push(CheckRecord::measured(
        "quaternion",
        None,
        f64::from(quaternion_defect(&triple)),
        opts.tolerances.get("quaternion"),
    ));
    for (records, dumps) in per_point {
        report.records.extend(records);
        report.dumps.extend(dumps);
    }
    report.sort();
    report
}
