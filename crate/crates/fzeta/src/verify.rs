//! Invariant suites: every module's documented identities and tolerances,
//! runnable as a batch (the CLI `verify` subcommand and CI both call these).

use crate::cantor::{gcs_create, quasiperiodic_drum_build, OmegaRule};
use crate::embed;
use crate::error::Result;
use crate::mero::{
    audit_dirichlet_zeros, classify_fractality, contour_principal_part, poles_in_window,
    residue_analytic, Fractality, Window, DEFAULT_QMAX,
};
use crate::numeric::rational::RelationScan;
use crate::numeric::{quad, real_pow_c};
use crate::rfd::{
    box_dimension_fit, build_rfd, check_scaling, check_tube_scaling, check_union,
    distance_zeta_numeric, log_grid, mellin_zeta_numeric, tube_function_numeric,
    tube_zeta_numeric, window_slopes, FitRange, QuadCfg, Rfd, StringGeom,
};
use crate::sprays::{catalog_example, catalog_names, validate_generator, ZetaRepr};
use crate::strings::{build_named, cantor_string, FractalString, NamedString};
use crate::tol;
use num_complex::Complex64;
use std::sync::Arc;

/// One named check with its outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// All checks of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: Vec::new() }
    }

    fn residual(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            pass: residual <= tolerance,
            detail: format!("residual {residual:.3e} <= {tolerance:.1e}"),
        });
    }

    fn flag(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Deterministic list of sample abscissas strictly right of `lo`.
fn sample_s(lo: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let re = lo + 0.1 + 0.35 * (k % 5) as f64;
            let im = ((k as f64) * 1.7).sin() * 8.0;
            c(re, im)
        })
        .collect()
}

pub fn strings_suite() -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    // Scaling identity on a spread of truncated strings.
    // Truncated (tail-free) specimens: the identities are then exact and
    // testable at 1e-12; tailed evaluation is exercised by the unit tests.
    let specimens: Vec<FractalString> = vec![
        cantor_string(25).materialize(1e-25),
        build_named(&NamedString::AString { a: 1.0, count: 400 })
            .unwrap()
            .materialize(1e-9),
        FractalString::new("mix", &[(0.9, 1), (0.31, 2), (0.11, 5), (0.007, 3)], None).unwrap(),
    ];
    let mut worst = 0.0_f64;
    for string in &specimens {
        for &lambda in &[1.0 / 3.0, 0.5, 2.0] {
            let scaled = string.scale(lambda).unwrap();
            for s in sample_s(string.abscissa().max(0.0), 20) {
                let (z, _) = string.geometric_zeta(s, 1e-12).unwrap();
                let (zs, _) = scaled.geometric_zeta(s, 1e-12).unwrap();
                let resid = (zs - real_pow_c(lambda, s) * z).norm() / (1.0 + z.norm());
                worst = worst.max(resid);
            }
        }
    }
    r.residual("strings: scaling identity", worst, tol::STRING_SCALING);
    // Tensor factorization within the reported tail bounds.
    let cs = cantor_string(30);
    let sq = cs.tensor_product(&cs, 100_000).unwrap();
    let mut pass = true;
    let mut worst_excess = 0.0_f64;
    for &sig in &[1.5, 2.0, 2.5, 3.0] {
        let bound = cs.tensor_tail_bound(&cs, &sq, sig).unwrap();
        let (z, _) = sq.geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
        let (z1, _) = cs.geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
        let excess = (z.re - z1.re * z1.re).abs() - bound - 1e-13;
        worst_excess = worst_excess.max(excess);
        pass &= excess <= 0.0;
    }
    r.flag(
        "strings: tensor factorization within tail bounds",
        pass,
        format!("worst excess {worst_excess:.3e}"),
    );
    // Union additivity, exact on explicit entries.
    let a = build_named(&NamedString::AString { a: 1.0, count: 60 })
        .unwrap()
        .materialize(0.0);
    let u = FractalString::disjoint_union(&[a.clone(), cs.clone()], &[1.0, 0.5]).unwrap();
    let mut worst = 0.0_f64;
    for &sig in &[0.9, 1.4, 2.2] {
        let (zu, _) = u.geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
        let (za, _) = a.geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
        let (zb, _) = cs.scale(0.5).unwrap().geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
        worst = worst.max((zu - za - zb).norm() / (1.0 + zu.norm()));
    }
    r.residual("strings: union additivity", worst, 1e-13);
    // Monotonicity on the real axis.
    let mut pass = true;
    for string in &specimens {
        let mut prev = f64::INFINITY;
        for k in 0..12 {
            let sig = string.abscissa().max(0.0) + 0.2 + 0.3 * k as f64;
            let (z, _) = string.geometric_zeta(c(sig, 0.0), 1e-12).unwrap();
            pass &= z.re > 0.0 && z.re <= prev + 1e-12;
            prev = z.re;
        }
    }
    r.flag("strings: real-axis monotonicity", pass, "12-point descent per string");
    SuiteReport {
        suite: "strings".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn cantor_suite() -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    // Closed tube formula vs interval-merge oracle, 50 log-uniform t.
    for (m, a) in [(2u32, 1.0 / 3.0), (3, 0.2), (2, 0.25)] {
        let (set, inv) = gcs_create(m, a).unwrap();
        let mut worst = 0.0_f64;
        for &t in log_grid(1e-8, set.c * 0.999, 50).iter() {
            let closed = set.tube_volume_closed(t).unwrap();
            let oracle = set
                .tube_volume_oracle(t, set.oracle_depth_for(t))
                .unwrap();
            worst = worst.max((closed - oracle).abs() / (1.0 + oracle));
        }
        r.residual(
            format!("cantor({m},{a:.3}): closed tube vs oracle (50 pts)"),
            worst,
            tol::CANTOR_TUBE,
        );
        // Monotonicity and the 1 + 2t cap.
        let mut pass = true;
        let mut prev = 0.0;
        for &t in log_grid(1e-8, 1.0, 80).iter() {
            let v = set.tube_volume_closed(t).unwrap();
            pass &= v + 1e-15 >= prev && v <= 1.0 + 2.0 * t + 1e-15;
            prev = v;
        }
        r.flag(
            format!("cantor({m},{a:.3}): tube monotone and capped"),
            pass,
            "80-point grid",
        );
        // Multiplicative periodicity of the normalized volume.
        let mut worst = 0.0_f64;
        for k in 1..20 {
            let t = set.c * 0.98 * (0.83_f64).powi(k);
            if t * set.a <= 1e-12 {
                break;
            }
            let g1 = set.tube_volume_closed(t).unwrap() / t.powf(1.0 - set.d);
            let at = set.a * t;
            let g2 = set.tube_volume_closed(at).unwrap() / at.powf(1.0 - set.d);
            worst = worst.max((g1 - g2).abs() / g1);
        }
        r.residual(
            format!("cantor({m},{a:.3}): multiplicative periodicity"),
            worst,
            tol::CANTOR_PERIOD,
        );
        // Extrema of the normalized volume against the closed contents.
        let (lo, hi) = set.normalized_tube_extrema();
        r.residual(
            format!("cantor({m},{a:.3}): min of G vs lower content"),
            (lo - inv.m_lower).abs() / inv.m_lower,
            tol::CANTOR_CONTENT,
        );
        r.residual(
            format!("cantor({m},{a:.3}): max of G vs upper content"),
            (hi - inv.m_upper).abs() / inv.m_upper,
            tol::CANTOR_CONTENT,
        );
        // Average content strictly inside the bracket.
        let avg = set.average_content_numeric();
        r.flag(
            format!("cantor({m},{a:.3}): average content strictly bracketed"),
            inv.m_lower < avg && avg < inv.m_upper && (avg - inv.res_tube_at_d).abs() < 1e-9,
            format!("{:.6} in ({:.6}, {:.6})", avg, inv.m_lower, inv.m_upper),
        );
    }
    // Content scaling of the oracle under lambda = 1/3 at r = D.
    let rfd = build_rfd("cantor:2:1/3:0").unwrap();
    let report = check_tube_scaling(&rfd, 1.0 / 3.0, &[1e-5, 1e-4, 1e-3, 1e-2], tol::CONTENT_SCALING)
        .unwrap();
    r.residual(
        "cantor: oracle content scaling lambda=1/3",
        report.max_residual,
        report.tolerance,
    );
    SuiteReport {
        suite: "cantor".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn merozeta_suite() -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    for name in catalog_names() {
        let entry = catalog_example(name).unwrap();
        let expr = match entry.zeta.closed() {
            Some(e) => e,
            None => continue,
        };
        let dims = poles_in_window(expr, &entry.window).unwrap();
        // Every enumerated Dirichlet zero satisfies its equation.
        let mut worst = 0.0_f64;
        for term in &expr.terms {
            for (f, _) in &term.dirichlet {
                for (z, _) in f.zeros_in_window(&entry.window, DEFAULT_QMAX).unwrap() {
                    worst = worst.max(f.eval(z).norm());
                }
            }
        }
        r.residual(
            format!("{name}: Dirichlet zero residuals"),
            worst,
            tol::DIRICHLET_ZERO,
        );
        // Argument-principle audit per denominator.
        let audits = audit_dirichlet_zeros(expr, &entry.window, DEFAULT_QMAX).unwrap();
        r.flag(
            format!("{name}: argument-principle pole count"),
            audits.iter().all(|&(w, e)| w == e),
            format!("{audits:?}"),
        );
        // Analytic vs contour residues on the simple poles.
        let mut worst = 0.0_f64;
        let mut compared = 0;
        for dim in dims.iter().filter(|d| d.order == 1 && !d.cancelled).take(6) {
            if let Ok(analytic) = residue_analytic(expr, dim.s) {
                if let Ok(cont) = contour_principal_part(expr, dim.s, 1, 1e-3) {
                    worst = worst.max((analytic - cont[0]).norm());
                    compared += 1;
                }
            }
        }
        if compared > 0 {
            r.residual(
                format!("{name}: analytic vs contour residues ({compared} poles)"),
                worst,
                tol::RESIDUE_CONTOUR,
            );
        }
        // Lattice spacing of principal poles.
        if let Some((line, period)) = entry.principal_lattice {
            let lattice: Vec<&crate::mero::ComplexDimension> = dims
                .iter()
                .filter(|d| (d.s.re - line).abs() < 1e-9 && !d.cancelled)
                .collect();
            let mut worst = 0.0_f64;
            for pair in lattice.windows(2) {
                worst = worst.max(((pair[1].s.im - pair[0].s.im) - period).abs());
            }
            r.residual(format!("{name}: lattice spacing"), worst, tol::LATTICE_SPACING);
        }
        // Measure anchor at s = N.
        let v = expr.eval(c(entry.ambient as f64, 0.0)).unwrap();
        r.residual(
            format!("{name}: zeta(N) = region measure"),
            (v.re - entry.region_measure).abs() / entry.region_measure,
            tol::MEASURE_ANCHOR,
        );
    }
    // Mellin strip identity on drums with exact tube volumes.
    for (name, t_sat) in [
        ("ball-2", 1.0),
        ("cantor-set", 0.5),
        ("sierpinski-gasket", 0.15),
    ] {
        let entry = catalog_example(name).unwrap();
        let rfd = entry.drum().unwrap();
        let expr = entry.zeta.closed().unwrap();
        let nf = entry.ambient as f64;
        let mut worst = 0.0_f64;
        for k in 0..10 {
            // Interior strip points: the truncated Mellin tail decays like
            // t_min^(sig - D), so a positive margin from D is required.
            let sig = entry.expected_dim + (nf - entry.expected_dim) * (k as f64 + 1.0) / 11.0;
            let s = c(sig, 0.0);
            let mellin = mellin_zeta_numeric(&rfd, s, t_sat).unwrap();
            let want = expr.eval(s).unwrap();
            worst = worst.max(((nf - s) * mellin - want).norm() / (1.0 + want.norm()));
        }
        r.residual(format!("{name}: Mellin strip identity"), worst, tol::MELLIN_STRIP);
    }
    // Torus collar drum Mellin check (tube saturates at the collar width).
    {
        let entry = catalog_example("torus").unwrap();
        let expr = entry.zeta.closed().unwrap();
        let delta = 0.25;
        let vol = |t: f64| {
            let t = t.min(delta);
            2.0 * std::f64::consts::PI * 2.0 * (2.0 * 0.5 * t - t * t)
        };
        let mut worst = 0.0_f64;
        for k in 0..10 {
            let sig = 2.0 + (k as f64 + 1.0) / 11.0;
            let s = c(sig, 0.0);
            let head =
                quad::integrate_tube_power(vol, s, 3.0, delta * 1e-280, delta, 1e-12).value;
            let tail = entry.region_measure * real_pow_c(delta, s - 3.0) / (3.0 - s);
            let want = expr.eval(s).unwrap();
            worst = worst.max(((3.0 - s) * (head + tail) - want).norm() / (1.0 + want.norm()));
        }
        r.residual("torus: Mellin strip identity", worst, tol::MELLIN_STRIP);
    }
    SuiteReport {
        suite: "merozeta".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn rfd_suite(cfg: &QuadCfg) -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    // Monotone tube samples and region cap.
    for spec in ["cantor:2:1/3:0.5", "ball:2", "torus:2:0.5", "cusp:2", "dust"] {
        let rfd = build_rfd(spec).unwrap();
        let grid = log_grid(1e-4, 0.4, 32);
        let samples = tube_function_numeric(&rfd, &grid, cfg).unwrap();
        let measure = rfd.geometry().region_measure().unwrap();
        let cap_ok = samples
            .pairs
            .iter()
            .zip(&samples.stderr)
            .all(|(&(_, v), &e)| v <= measure + 3.0 * e + 1e-12);
        r.flag(
            format!("{spec}: tube samples monotone and capped"),
            samples.monotone_violation(3.0) == 0.0 && cap_ok,
            format!("{} points", samples.pairs.len()),
        );
    }
    // s = N anchor for the numeric distance zeta.
    for (spec, tol_rel) in [
        ("cantor:2:1/3:0.5", 1e-8),
        ("ball:2", 5e-3),
        ("gasket", 5e-3),
        ("cusp:2", 5e-3),
    ] {
        let rfd = build_rfd(spec).unwrap();
        let n = rfd.ambient as f64;
        let (v, e) = distance_zeta_numeric(&rfd, c(n, 0.0), cfg).unwrap();
        let measure = rfd.geometry().region_measure().unwrap();
        let resid = (v.re - measure).abs();
        r.flag(
            format!("{spec}: zeta(N) anchors the region measure"),
            resid <= 4.0 * e + tol_rel * measure,
            format!("value {} vs {measure}, err {e:.2e}", v.re),
        );
    }
    // Functional equation at the full collar width per geometry.
    for (name, delta) in [
        ("ball-2", 1.0),
        ("cantor-set", 0.5),
        ("sierpinski-gasket", 1.0 / (4.0 * S3_CONST)),
    ] {
        let entry = catalog_example(name).unwrap();
        let rfd = entry.drum().unwrap();
        let expr = entry.zeta.closed().unwrap();
        let nf = entry.ambient as f64;
        let mut worst = 0.0_f64;
        for k in 0..6 {
            let s = c(entry.expected_dim + 0.2 + 0.12 * k as f64, (k as f64 - 2.0) * 1.5);
            let (tube, terr) = tube_zeta_numeric(&rfd, s, delta, cfg).unwrap();
            let lhs = expr.eval(s).unwrap();
            let rhs = real_pow_c(delta, s - nf) * entry.region_measure + (nf - s) * tube;
            let combined = 5.0 * (terr * (nf - s).norm() + 1e-12 * (1.0 + lhs.norm()));
            worst = worst.max(((lhs - rhs).norm() - combined).max(0.0) / (1.0 + lhs.norm()));
        }
        r.residual(
            format!("{name}: tube/distance functional equation"),
            worst,
            1e-9,
        );
    }
    // Torus functional equation with the served collar.
    {
        let entry = catalog_example("torus").unwrap();
        let rfd = entry.drum().unwrap();
        let expr = entry.zeta.closed().unwrap();
        let delta = 0.25;
        let mut worst = 0.0_f64;
        for k in 0..6 {
            let s = c(2.2 + 0.12 * k as f64, (k as f64 - 2.0) * 1.2);
            let (tube, terr) = tube_zeta_numeric(&rfd, s, delta, cfg).unwrap();
            let lhs = expr.eval(s).unwrap();
            let rhs = real_pow_c(delta, s - 3.0) * entry.region_measure + (3.0 - s) * tube;
            let combined = 5.0 * (terr * (3.0 - s).norm() + 1e-12 * (1.0 + lhs.norm()));
            worst = worst.max(((lhs - rhs).norm() - combined).max(0.0) / (1.0 + lhs.norm()));
        }
        r.residual("torus: tube/distance functional equation", worst, 1e-9);
    }
    // Embedding-invariant box dimension: C on the line vs C x {0} in the plane.
    {
        let (set, _) = gcs_create(2, 1.0 / 3.0).unwrap();
        let rfd = build_rfd("cantor:2:1/3:0.5").unwrap();
        let grid = log_grid(1e-6, 1e-1, 64);
        let line_fit = box_dimension_fit(
            &tube_function_numeric(&rfd, &grid, cfg).unwrap(),
            1,
            FitRange::exact_1d(),
        )
        .unwrap();
        let planar: Vec<(f64, f64)> = grid
            .iter()
            .map(|&t| {
                (
                    t,
                    embed::embedded_tube_volume(|u| set.tube_volume_closed(u).unwrap(), t),
                )
            })
            .collect();
        let samples = crate::rfd::TubeSamples {
            stderr: vec![0.0; planar.len()],
            pairs: planar,
            method: crate::rfd::SampleMethod::Exact,
        };
        let plane_fit = box_dimension_fit(&samples, 2, FitRange::exact_1d()).unwrap();
        r.residual(
            "embedding-invariant box dimension (line vs plane)",
            (line_fit.d - plane_fit.d).abs(),
            tol::FIT_EMBED,
        );
    }
    // Lipschitz spot-checks of the distance oracles.
    for spec in ["cantor:2:1/3:0.5", "ball:2", "torus:2:0.5", "gasket", "dust", "cusp:2"] {
        let rfd = build_rfd(spec).unwrap();
        let worst = rfd.lipschitz_spot_check(10_000, 2024);
        r.flag(
            format!("{spec}: 1-Lipschitz distance oracle"),
            worst <= 1e-9,
            format!("worst violation {worst:.2e}"),
        );
    }
    // Flatness: the exponential cusp never stabilizes a slope.
    {
        let rfd = build_rfd("exp-cusp").unwrap();
        let grid = log_grid(0.05, 0.5, 48);
        let samples = tube_function_numeric(&rfd, &grid, cfg).unwrap();
        let slopes = window_slopes(&samples);
        let decreasing = slopes.windows(2).all(|w| w[1].1 < w[0].1);
        r.flag(
            "exp-cusp: slopes keep growing (flatness +infinity candidate)",
            decreasing && slopes.len() >= 2,
            format!("implied dimensions {:?}", slopes.iter().map(|s| 2.0 - s.1).collect::<Vec<_>>()),
        );
    }
    // Cone sign check: a cusp with an interior cone has D >= 0.
    {
        let rfd = build_rfd("cusp:0.5").unwrap();
        let grid = log_grid(1e-6, 1e-1, 48);
        let samples = tube_function_numeric(&rfd, &grid, cfg).unwrap();
        let fit = box_dimension_fit(&samples, 2, FitRange::exact_1d()).unwrap();
        r.flag(
            "cusp(1/2): cone property implies nonnegative dimension",
            fit.d >= 0.0,
            format!("fit {:.4} (expect 1 - alpha = 0.5)", fit.d),
        );
    }
    // Scaling and union identities on the exact 1D drum.
    {
        let rfd = build_rfd("cantor:2:1/3:0.5").unwrap();
        let s_list = sample_s(0.7, 20);
        let rep = check_scaling(&rfd, 1.0 / 3.0, &s_list, cfg, tol::EXACT_1D).unwrap();
        r.residual("cantor: zeta scaling identity (20 s)", rep.max_residual, rep.tolerance);
        let whole = build_rfd("cantor:2:1/3:0").unwrap();
        let left = whole.scaled(1.0 / 3.0).unwrap();
        let right = left.translated(&[2.0 / 3.0]);
        let gap = Rfd::from_geometry(
            "middle-gap",
            Arc::new(StringGeom::new(
                &FractalString::new("gap", &[(1.0 / 3.0, 1)], None).unwrap(),
            )),
        )
        .translated(&[1.0 / 3.0]);
        let rep = check_union(&[left, gap, right], &s_list, cfg, tol::EXACT_1D).unwrap();
        r.residual("cantor: union additivity (20 s)", rep.max_residual, rep.tolerance);
    }
    SuiteReport {
        suite: "rfd".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

const S3_CONST: f64 = 1.732050807568877293527446341505872367_f64;

pub fn sprays_suite(cfg: &QuadCfg) -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    for name in catalog_names() {
        let entry = catalog_example(name).unwrap();
        // Generator validation against the independent quadrature.
        if entry.gen_quadrature.is_some() {
            r.flag(
                format!("{name}: generator validated against quadrature"),
                validate_generator(&entry).is_ok(),
                "5 real abscissas at 1e-6 relative",
            );
        }
        // Self-similar identity for spray entries.
        if let (Some(spray), Some(expr)) = (&entry.spray, entry.zeta.closed()) {
            let mut worst = 0.0_f64;
            for s in sample_s(entry.expected_dim.max(spray.generator_dim), 20) {
                let lhs = expr.eval(s).unwrap() * spray.ratios.eval(s);
                let rhs = spray.generator_zeta.eval(s).unwrap();
                worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            }
            r.residual(format!("{name}: self-similar identity (20 s)"), worst, tol::SELF_SIMILAR);
        }
        // Classification.
        if let ZetaRepr::Closed(expr) = &entry.zeta {
            let got = classify_fractality(expr, &entry.window).unwrap();
            let matches = match (&got, &entry.expected_class) {
                (
                    Fractality::StrictlySubcriticallyFractal { dims: a },
                    Fractality::StrictlySubcriticallyFractal { dims: b },
                ) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9),
                (x, y) => x == y,
            };
            r.flag(
                format!("{name}: fractality classification"),
                matches,
                format!("{got:?}"),
            );
        }
    }
    // N-gasket dichotomy on declared dimensions.
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=6u32 {
        let entry = catalog_example(&format!("ngasket-{n}")).unwrap();
        let want = if n == 2 {
            3.0_f64.ln() / 2.0_f64.ln()
        } else {
            n as f64 - 1.0
        };
        pass &= (entry.expected_dim - want).abs() < 1e-12;
        detail.push_str(&format!("N={n}: {:.4}; ", entry.expected_dim));
    }
    r.flag("ngasket: declared dimension dichotomy N=2..6", pass, detail);
    // Double poles where the similarity dimension meets a generator pole.
    for (name, at) in [("ngasket-3", 2.0), ("ngasket-7", 3.0), ("half-square", 1.0)] {
        let entry = catalog_example(name).unwrap();
        let expr = entry.zeta.closed().unwrap();
        let w = Window::new(at - 0.5, at + 0.5, 2.0).unwrap();
        let dims = poles_in_window(expr, &w).unwrap();
        let found = dims
            .iter()
            .find(|d| (d.s - c(at, 0.0)).norm() < 1e-9)
            .map(|d| d.order);
        r.flag(
            format!("{name}: pole at {at} has order exactly 2"),
            found == Some(2),
            format!("order {found:?}"),
        );
    }
    // Monte Carlo cross-check of two generators.
    for name in ["sierpinski-gasket", "fractal-nest"] {
        let entry = catalog_example(name).unwrap();
        let spray = entry.spray.clone().unwrap();
        let (rows, _) =
            crate::sprays::generator_crosscheck(&spray, &[2.0, 2.5, 3.0], cfg).unwrap();
        let pass = rows
            .iter()
            .all(|row| (row.numeric - row.closed).abs() <= 4.0 * row.stderr + 2e-3 * row.closed);
        r.flag(
            format!("{name}: Monte Carlo generator cross-check"),
            pass,
            rows.iter()
                .map(|row| format!("s={}: {:.5} vs {:.5}; ", row.s, row.closed, row.numeric))
                .collect::<String>(),
        );
    }
    SuiteReport {
        suite: "sprays".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn embed_suite() -> SuiteReport {
    let start = std::time::Instant::now();
    let mut r = Recorder::new();
    // Gamma-ratio pole parity at k = 0..4.
    let mut pass = true;
    for m in 1..=4u32 {
        for k in 0..5u32 {
            let res = embed::gamma_ratio_residue(1, m, k).norm();
            let should_vanish = m % 2 == 0 && k >= m / 2;
            pass &= if should_vanish { res < 1e-9 } else { res > 1e-7 };
        }
    }
    r.flag("gamma ratio: embedding pole parity (k = 0..4)", pass, "M = 1..4");
    // Composition identity.
    let mut worst = 0.0_f64;
    for &s in &[c(0.7, 0.0), c(1.3, 2.0), c(-0.5, 1.0), c(0.2, -4.0)] {
        for (m1, m2) in [(1u32, 1u32), (1, 2), (2, 2)] {
            let lhs = embed::gamma_ratio_factor(1, m1 + m2, s).unwrap();
            let rhs = embed::gamma_ratio_factor(1, m1, s).unwrap()
                * embed::gamma_ratio_factor(1 + m1, m2, s).unwrap();
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
    }
    r.residual("gamma ratio: composition identity", worst, tol::GAMMA_COMPOSE);
    // Embedding functional equation on the segment (exact) and Cantor set.
    {
        let delta = 0.4;
        let mut worst = 0.0_f64;
        for &s in &[c(1.5, 0.0), c(0.7, -2.0)] {
            let tube = |d: f64| real_pow_c(d, s - 1.0) / (s - 1.0) + 2.0 * real_pow_c(d, s) / s;
            let lhs = embed::embed_tube_zeta(tube, s, delta, 1).unwrap();
            let want = 2.0 * real_pow_c(delta, s - 1.0) / (s - 1.0)
                + std::f64::consts::PI * real_pow_c(delta, s) / s;
            worst = worst.max((lhs - want).norm() / (1.0 + want.norm()));
        }
        r.residual("segment: embedding functional equation", worst, 1e-8);
    }
    {
        let (set, _) = gcs_create(2, 1.0 / 3.0).unwrap();
        let delta = 1.0 / 3.0;
        let s = c(0.9, 0.0);
        let vol = |t: f64| set.tube_volume_closed(t).unwrap();
        let full = quad::integrate_tube_power(vol, s, 1.0, delta * 1e-26, delta, 1e-11).value;
        let tube_1d = |dp: f64| -> Complex64 {
            full - quad::integrate_tube_power(vol, s, 1.0, dp, delta, 1e-9).value
        };
        let via_tau = embed::embed_tube_zeta(tube_1d, s, delta, 1).unwrap();
        let direct = quad::integrate_tube_power(
            |t| embed::embedded_tube_volume(vol, t),
            s,
            2.0,
            delta * 1e-26,
            delta,
            1e-9,
        )
        .value;
        r.residual(
            "cantor set: embedding functional equation",
            (via_tau - direct).norm() / (1.0 + direct.norm()),
            tol::EMBED_EQ,
        );
    }
    // Dust: measure anchor through the embedded assembly, and the two error
    // term routes in the overlap strip.
    {
        let dust = embed::DustZeta::new();
        let anchor = dust.eval(c(2.0, 0.0)).unwrap();
        r.residual(
            "cantor dust: zeta(2) = unit square measure",
            (anchor.re - 1.0).abs(),
            1e-5,
        );
        let via_eq = dust.error_term_via_equation(c(0.8, 0.0)).unwrap();
        let direct = dust.error_term_direct(c(0.8, 0.0)).unwrap();
        r.residual(
            "cantor dust: error-term routes agree in the strip",
            (via_eq - direct).norm() / (1.0 + direct.norm()),
            2e-4,
        );
    }
    // Quasiperiodic drum: quasiperiods and the independence certificate.
    {
        let drum = quasiperiodic_drum_build(0.5, 4, 1.0, &OmegaRule::TwoPowNegI).unwrap();
        let want: Vec<f64> = [2.0_f64, 3.0, 5.0, 7.0].iter().map(|p| 2.0 * p.ln()).collect();
        let worst = drum
            .quasiperiods
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        r.residual("quasiperiodic drum: T_i = 2 log p_i", worst, 1e-13);
        r.flag(
            "quasiperiodic drum: independence certificate at Qmax = 10^4",
            matches!(drum.independence_certificate(10_000), RelationScan::Independent),
            "log 2, log 3, log 5, log 7",
        );
    }
    SuiteReport {
        suite: "embed".into(),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Run one suite by name, or all of them.
pub fn run(suite: &str, cfg: &QuadCfg) -> Result<Vec<SuiteReport>> {
    let all = ["strings", "cantor", "merozeta", "rfd", "sprays", "embed"];
    let selected: Vec<&str> = if suite == "all" {
        all.to_vec()
    } else if all.contains(&suite) {
        vec![suite]
    } else {
        return Err(crate::error::Error::InvalidParameter(format!(
            "unknown suite `{suite}` (expected one of strings|cantor|merozeta|rfd|sprays|embed|all)"
        )));
    };
    Ok(selected
        .into_iter()
        .map(|name| match name {
            "strings" => strings_suite(),
            "cantor" => cantor_suite(),
            "merozeta" => merozeta_suite(),
            "rfd" => rfd_suite(cfg),
            "sprays" => sprays_suite(cfg),
            "embed" => embed_suite(),
            _ => unreachable!(),
        })
        .collect())
}
