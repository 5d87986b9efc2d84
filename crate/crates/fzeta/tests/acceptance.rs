//! Acceptance suite: every release criterion at its pinned tolerance, one
//! printed pass/fail line per criterion. Run with
//! `cargo test --release --test acceptance -- --nocapture`.

use fzeta::cantor::{gcs_create, quasiperiodic_drum_build, OmegaRule};
use fzeta::embed;
use fzeta::mero::{
    classify_fractality, contour_principal_part, poles_in_window, residue_analytic, residue_at,
    tube_distance_transfer, DirichletPolynomial, Fractality, LatticeClass, TransferDirection,
    Window,
};
use fzeta::numeric::rational::RelationScan;
use fzeta::numeric::{quad, real_pow_c};
use fzeta::rfd::{
    box_dimension_fit, build_rfd, check_scaling, check_union, log_grid, tube_function_numeric,
    tube_zeta_numeric, FitRange, QuadCfg, Rfd, SampleMethod, StringGeom, TubeSamples,
};
use fzeta::sprays::{catalog_example, catalog_names};
use fzeta::strings::FractalString;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Gate {
            failures: Vec::new(),
        }
    }

    fn criterion(&mut self, id: &str, pass: bool, detail: String) {
        println!(
            "criterion {id}: {} — {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(format!("{id}: {detail}"));
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "acceptance failures:\n{}",
            self.failures.join("\n")
        );
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();
    criterion_1(&mut gate);
    criterion_2(&mut gate);
    criterion_3(&mut gate);
    criterion_4(&mut gate);
    criterion_5(&mut gate);
    criterion_6(&mut gate);
    criterion_7(&mut gate);
    criterion_8(&mut gate);
    criterion_9(&mut gate);
    criterion_10(&mut gate);
    gate.finish();
}

/// Cantor tube oracle vs closed form: three parameter pairs, 50 log-uniform
/// t in (1e-8, c), relative disagreement <= 1e-12, under 5 seconds.
fn criterion_1(gate: &mut Gate) {
    let started = Instant::now();
    let mut worst = 0.0_f64;
    for (m, a) in [(2u32, 1.0 / 3.0), (3, 0.2), (2, 0.25)] {
        let (set, _) = gcs_create(m, a).unwrap();
        for &t in log_grid(1e-8, set.c * 0.999, 50).iter() {
            let closed = set.tube_volume_closed(t).unwrap();
            let oracle = set.tube_volume_oracle(t, set.oracle_depth_for(t)).unwrap();
            worst = worst.max((closed - oracle).abs() / (1.0 + oracle));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    gate.criterion(
        "1 (tube oracle)",
        worst <= 1e-12 && elapsed < 5.0,
        format!("worst relative {worst:.3e} <= 1e-12, {elapsed:.2}s < 5s"),
    );
}

/// Box-dimension fits: Cantor set, power cusp, Cantor dust (Monte Carlo).
fn criterion_2(gate: &mut Gate) {
    let started = Instant::now();
    let cfg = QuadCfg::default();
    let cantor = build_rfd("cantor:2:1/3:0.5").unwrap();
    let grid = log_grid(1e-6, 1e-1, 64);
    let fit_cantor = box_dimension_fit(
        &tube_function_numeric(&cantor, &grid, &cfg).unwrap(),
        1,
        FitRange::exact_1d(),
    )
    .unwrap();
    let cusp = build_rfd("cusp:2").unwrap();
    let fit_cusp = box_dimension_fit(
        &tube_function_numeric(&cusp, &grid, &cfg).unwrap(),
        2,
        FitRange::exact_1d(),
    )
    .unwrap();
    let dust = build_rfd("dust").unwrap();
    // Saturation of the unit square bends the log-log curve above t ~ 1e-2,
    // so the fit range stops there; 10^6 points keep the relative sampling
    // error below ~2.5% down to t = 1e-5.
    let dust_grid = log_grid(1e-5, 1e-1, 40);
    let dust_samples = tube_function_numeric(&dust, &dust_grid, &cfg).unwrap();
    assert!(matches!(
        dust_samples.method,
        SampleMethod::MonteCarlo { samples, .. } if samples >= 1_000_000
    ));
    let fit_dust = box_dimension_fit(
        &dust_samples,
        2,
        FitRange {
            t_min: 1e-5,
            t_max: 1e-2,
        },
    )
    .unwrap();
    let d_cantor = 2.0_f64.ln() / 3.0_f64.ln();
    let d_dust = 4.0_f64.ln() / 3.0_f64.ln();
    let elapsed = started.elapsed().as_secs_f64();
    let e1 = (fit_cantor.d - d_cantor).abs();
    let e2 = (fit_cusp.d - (-1.0)).abs();
    let e3 = (fit_dust.d - d_dust).abs();
    gate.criterion(
        "2 (box fits)",
        e1 <= 0.01 && e2 <= 0.05 && e3 <= 0.03 && elapsed < 60.0,
        format!(
            "cantor {:.4} (err {e1:.1e} <= 0.01), cusp {:.4} (err {e2:.1e} <= 0.05), dust {:.4} (err {e3:.1e} <= 0.03), {elapsed:.1}s < 60s",
            fit_cantor.d, fit_cusp.d, fit_dust.d
        ),
    );
}

/// Moran roots and lattice periods.
fn criterion_3(gate: &mut Gate) {
    let f1 = DirichletPolynomial::single(3.0, 0.5);
    let f2 = DirichletPolynomial::single(8.0, 1.0 / 3.0);
    let d1 = f1.moran_root().unwrap();
    let d2 = f2.moran_root().unwrap();
    let r1 = (3.0 * 0.5_f64.powf(d1) - 1.0).abs();
    let r2 = (8.0 * (1.0_f64 / 3.0).powf(d2) - 1.0).abs();
    let p1 = match f1.lattice_analysis(10_000) {
        LatticeClass::Lattice { period, .. } => period,
        _ => f64::NAN,
    };
    let p2 = match f2.lattice_analysis(10_000) {
        LatticeClass::Lattice { period, .. } => period,
        _ => f64::NAN,
    };
    let pe1 = (p1 - 2.0 * PI / 2.0_f64.ln()).abs();
    let pe2 = (p2 - 2.0 * PI / 3.0_f64.ln()).abs();
    gate.criterion(
        "3 (Moran roots)",
        (d1 - 3.0_f64.ln() / 2.0_f64.ln()).abs() < 1e-12
            && (d2 - 8.0_f64.ln() / 3.0_f64.ln()).abs() < 1e-12
            && r1 <= 1e-13
            && r2 <= 1e-13
            && pe1 <= 1e-12
            && pe2 <= 1e-12,
        format!(
            "log2(3) residual {r1:.1e}, log3(8) residual {r2:.1e}, period errors {pe1:.1e}/{pe2:.1e}"
        ),
    );
}

/// Residue identities: Cantor string at D, torus tube at 2, and the
/// tube/distance transfer on both.
fn criterion_4(gate: &mut Gate) {
    // Cantor string distance zeta at D against the closed-form residue.
    let (set, inv) = gcs_create(2, 1.0 / 3.0).unwrap();
    let entry = catalog_example("cantor-set").unwrap();
    let expr = entry.zeta.closed().unwrap();
    let d = c(set.d, 0.0);
    let analytic = residue_analytic(expr, d).unwrap();
    let contour = contour_principal_part(expr, d, 1, 1e-3).unwrap()[0];
    let ea = (analytic.re - inv.res_distance_at_d).abs();
    let ec = (contour.re - inv.res_distance_at_d).abs();
    // Torus tube residue at 2: exactly 4 pi R r in the closed form.
    let torus = catalog_example("torus").unwrap();
    let tube = torus.tube_zeta.clone().unwrap();
    let res_tube = residue_analytic(&tube, c(2.0, 0.0)).unwrap();
    let res_tube_contour = contour_principal_part(&tube, c(2.0, 0.0), 1, 1e-3).unwrap()[0];
    let want = 4.0 * PI * 2.0 * 0.5;
    let et = (res_tube.re - want).abs();
    let etc = (res_tube_contour.re - want).abs();
    // Transfer: res(zeta, w) = (N - w) res(tube, w) on torus and Cantor set.
    let dist_from_tube = tube_distance_transfer(
        &tube,
        TransferDirection::TubeToDistance,
        3,
        0.25,
        torus.region_measure,
        2.0,
    )
    .unwrap();
    let res_dist = residue_at(&dist_from_tube, c(2.0, 0.0)).unwrap()[0];
    let etr = (res_dist.re - (3.0 - 2.0) * want).abs();
    let cantor_tube = tube_distance_transfer(
        expr,
        TransferDirection::DistanceToTube,
        1,
        0.5,
        entry.region_measure,
        set.d,
    )
    .unwrap();
    let res_cantor_tube = residue_at(&cantor_tube, d).unwrap()[0];
    let ect = (res_cantor_tube.re - inv.res_distance_at_d / (1.0 - set.d)).abs();
    gate.criterion(
        "4 (residues)",
        ea <= 1e-10 && ec <= 1e-8 && et <= 1e-14 && etc <= 1e-8 && etr <= 1e-8 && ect <= 1e-8,
        format!(
            "cantor analytic {ea:.1e} <= 1e-10, contour {ec:.1e} <= 1e-8; torus closed {et:.1e}, contour {etc:.1e} <= 1e-8; transfers {etr:.1e}/{ect:.1e} <= 1e-8"
        ),
    );
}

/// Average Minkowski content of (the drum of) the ternary Cantor set sits
/// strictly inside the content bracket, reproduced by three routes.
fn criterion_5(gate: &mut Gate) {
    let (set, inv) = gcs_create(2, 1.0 / 3.0).unwrap();
    // Route (a): closed form res(tube, D) = res(zeta, D)/(1 - D).
    let closed = inv.res_tube_at_d;
    // Route (b): extrema and mean of the normalized tube volume.
    let (lo, hi) = set.normalized_tube_extrema();
    let mean = set.average_content_numeric();
    // Route (c): Cesaro estimator on the interval-merge oracle over an
    // integer number of multiplicative periods.
    let t_hi = set.c;
    let t_lo = set.c * set.a.powi(12);
    let cesaro = set.average_content_cesaro(t_lo, t_hi).unwrap();
    let bracket_ok = inv.m_lower < closed && closed < inv.m_upper;
    // The acceptance pins the three-decimal values 2.524 in (2.495, 2.583).
    let printed_ok = (closed - 2.524).abs() < 1e-3
        && (inv.m_lower - 2.495).abs() < 5e-4
        && (inv.m_upper - 2.583).abs() < 5e-4;
    let routes_ok = (lo - inv.m_lower).abs() < 1e-10
        && (hi - inv.m_upper).abs() < 1e-10
        && (mean - closed).abs() < 1e-9
        && (cesaro - closed).abs() / closed < 0.01;
    gate.criterion(
        "5 (content bracket)",
        bracket_ok && printed_ok && routes_ok,
        format!(
            "{closed:.5} in ({:.5}, {:.5}); oracle mean {mean:.5}, Cesaro {cesaro:.5} (rel {:.2e} < 1%)",
            inv.m_lower,
            inv.m_upper,
            (cesaro - closed).abs() / closed
        ),
    );
}

/// Scaling identity and union additivity on exact 1D drums at 20 sampled s.
fn criterion_6(gate: &mut Gate) {
    let cfg = QuadCfg::default();
    let s_list: Vec<Complex64> = (0..20)
        .map(|k| c(0.75 + 0.1 * (k % 10) as f64, ((k as f64) * 1.3).sin() * 5.0))
        .collect();
    let rfd = build_rfd("cantor:2:1/3:0.5").unwrap();
    let scaling = check_scaling(&rfd, 1.0 / 3.0, &s_list, &cfg, 1e-8).unwrap();
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
    let union = check_union(&[left, gap, right], &s_list, &cfg, 1e-8).unwrap();
    gate.criterion(
        "6 (scaling and union)",
        scaling.pass && union.pass,
        format!(
            "scaling residual {:.2e} <= 1e-8, union residual {:.2e} <= 1e-8 (20 s-points)",
            scaling.max_residual, union.max_residual
        ),
    );
}

/// Tube/distance functional equation on ball, torus, Cantor set and gasket
/// at 10 sampled s, within 5x the combined quadrature error.
fn criterion_7(gate: &mut Gate) {
    let cfg = QuadCfg::default();
    let s3 = 3.0_f64.sqrt();
    let cases = [
        ("ball-2", 1.0),
        ("torus", 0.25),
        ("cantor-set", 0.5),
        ("sierpinski-gasket", 1.0 / (4.0 * s3)),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, delta) in cases {
        let entry = catalog_example(name).unwrap();
        let rfd = entry.drum().unwrap();
        let expr = entry.zeta.closed().unwrap();
        let nf = entry.ambient as f64;
        let mut worst = 0.0_f64;
        for k in 0..10 {
            let s = c(
                entry.expected_dim + 0.15 + 0.1 * k as f64,
                (k as f64 - 4.5) * 0.8,
            );
            let (tube, terr) = tube_zeta_numeric(&rfd, s, delta, &cfg).unwrap();
            let lhs = expr.eval(s).unwrap();
            let rhs = real_pow_c(delta, s - nf) * entry.region_measure + (nf - s) * tube;
            let combined = terr * (nf - s).norm() + 1e-12 * (1.0 + lhs.norm());
            let excess = ((lhs - rhs).norm() - 5.0 * combined).max(0.0) / (1.0 + lhs.norm());
            worst = worst.max(excess);
        }
        pass &= worst <= 1e-9;
        detail.push_str(&format!("{name} excess {worst:.1e}; "));
    }
    gate.criterion("7 (functional equation)", pass, detail);
}

/// Spray catalog: measure anchors, the N-gasket dichotomy, double poles,
/// and the argument-principle audit on every catalog window.
fn criterion_8(gate: &mut Gate) {
    let mut pass = true;
    let mut notes = String::new();
    for name in catalog_names() {
        if name == "cantor-dust" {
            continue; // anchored at Monte Carlo tolerance in criterion 9's module
        }
        let entry = catalog_example(name).unwrap();
        let v = entry.zeta.eval(c(entry.ambient as f64, 0.0)).unwrap();
        if (v.re - entry.region_measure).abs() > 1e-6 * entry.region_measure {
            pass = false;
            notes.push_str(&format!("{name} anchor off: {} vs {}; ", v.re, entry.region_measure));
        }
        if let Some(expr) = entry.zeta.closed() {
            let audits =
                fzeta::mero::audit_dirichlet_zeros(expr, &entry.window, 10_000).unwrap();
            if !audits.iter().all(|&(w, e)| w == e) {
                pass = false;
                notes.push_str(&format!("{name} audit mismatch {audits:?}; "));
            }
        }
    }
    for n in 2..=6u32 {
        let entry = catalog_example(&format!("ngasket-{n}")).unwrap();
        let want = if n == 2 {
            3.0_f64.ln() / 2.0_f64.ln()
        } else {
            n as f64 - 1.0
        };
        if (entry.expected_dim - want).abs() > 1e-12 {
            pass = false;
            notes.push_str(&format!("ngasket-{n} dim {}; ", entry.expected_dim));
        }
    }
    for (name, at) in [("ngasket-3", 2.0), ("half-square", 1.0)] {
        let entry = catalog_example(name).unwrap();
        let dims = poles_in_window(
            entry.zeta.closed().unwrap(),
            &Window::new(at - 0.5, at + 0.5, 2.0).unwrap(),
        )
        .unwrap();
        let order = dims
            .iter()
            .find(|d| (d.s - c(at, 0.0)).norm() < 1e-9)
            .map(|d| d.order);
        if order != Some(2) {
            pass = false;
            notes.push_str(&format!("{name} order at {at}: {order:?}; "));
        }
    }
    if notes.is_empty() {
        notes = "all anchors at 1e-6, dichotomy N=2..6, double poles, audits clean".into();
    }
    gate.criterion("8 (spray catalog)", pass, notes);
}

/// Embedding: the one-step functional equation on the Cantor set, the
/// Gamma-ratio composition identity, and embedded-vs-ambient box fits.
fn criterion_9(gate: &mut Gate) {
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
    let e_eq = (via_tau - direct).norm() / (1.0 + direct.norm());
    let mut e_comp = 0.0_f64;
    for &s in &[c(0.7, 0.0), c(1.3, 2.0), c(-0.5, 1.0)] {
        for (m1, m2) in [(1u32, 1u32), (2, 2), (1, 3)] {
            let lhs = embed::gamma_ratio_factor(1, m1 + m2, s).unwrap();
            let rhs = embed::gamma_ratio_factor(1, m1, s).unwrap()
                * embed::gamma_ratio_factor(1 + m1, m2, s).unwrap();
            e_comp = e_comp.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
    }
    // Box fits of C and of C x {0} agree within 0.02.
    let cfg = QuadCfg::default();
    let rfd = build_rfd("cantor:2:1/3:0.5").unwrap();
    let grid = log_grid(1e-6, 1e-1, 64);
    let line_fit = box_dimension_fit(
        &tube_function_numeric(&rfd, &grid, &cfg).unwrap(),
        1,
        FitRange::exact_1d(),
    )
    .unwrap();
    let planar: Vec<(f64, f64)> = grid
        .iter()
        .map(|&t| (t, embed::embedded_tube_volume(vol, t)))
        .collect();
    let samples = TubeSamples {
        stderr: vec![0.0; planar.len()],
        pairs: planar,
        method: SampleMethod::Exact,
    };
    let plane_fit = box_dimension_fit(&samples, 2, FitRange::exact_1d()).unwrap();
    let e_fit = (line_fit.d - plane_fit.d).abs();
    gate.criterion(
        "9 (embedding)",
        e_eq <= 1e-3 && e_comp <= 1e-12 && e_fit <= 0.02,
        format!(
            "functional equation {e_eq:.1e} <= 1e-3, composition {e_comp:.1e} <= 1e-12, fits {:.4} vs {:.4} (diff {e_fit:.1e} <= 0.02)",
            line_fit.d, plane_fit.d
        ),
    );
}

/// Classification of the key examples, the quasiperiodic drum construction,
/// and the full verification run under its time budget.
fn criterion_10(gate: &mut Gate) {
    let started = Instant::now();
    let mut pass = true;
    let mut notes = String::new();
    let expectations = [
        ("sierpinski-gasket", Fractality::CriticallyFractal),
        ("sierpinski-carpet", Fractality::CriticallyFractal),
        ("ball-2", Fractality::NotFractal),
        ("torus", Fractality::NotFractal),
    ];
    for (name, want) in expectations {
        let entry = catalog_example(name).unwrap();
        let got = classify_fractality(entry.zeta.closed().unwrap(), &entry.window).unwrap();
        if got != want {
            pass = false;
            notes.push_str(&format!("{name}: {got:?}; "));
        }
    }
    let graph = catalog_example("cantor-graph").unwrap();
    match classify_fractality(graph.zeta.closed().unwrap(), &graph.window).unwrap() {
        Fractality::StrictlySubcriticallyFractal { dims }
            if dims.len() == 1 && (dims[0] - 2.0_f64.ln() / 3.0_f64.ln()).abs() < 1e-9 => {}
        other => {
            pass = false;
            notes.push_str(&format!("cantor-graph: {other:?}; "));
        }
    }
    let drum = quasiperiodic_drum_build(0.5, 4, 1.0, &OmegaRule::TwoPowNegI).unwrap();
    let want_t: Vec<f64> = [2.0_f64, 3.0, 5.0, 7.0].iter().map(|p| 2.0 * p.ln()).collect();
    if drum
        .quasiperiods
        .iter()
        .zip(&want_t)
        .any(|(a, b)| (a - b).abs() > 1e-13)
    {
        pass = false;
        notes.push_str("quasiperiods off; ");
    }
    if !matches!(
        drum.independence_certificate(10_000),
        RelationScan::Independent
    ) {
        pass = false;
        notes.push_str("independence certificate failed; ");
    }
    let reports = fzeta::verify::run("all", &QuadCfg::default()).unwrap();
    let all_pass = reports.iter().all(|r| r.passed());
    let n_checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    if !all_pass {
        pass = false;
        for r in &reports {
            for ch in r.checks.iter().filter(|ch| !ch.pass) {
                notes.push_str(&format!("[{}] {}; ", r.suite, ch.name));
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 600.0 {
        pass = false;
        notes.push_str("verify overran 10 minutes; ");
    }
    if notes.is_empty() {
        notes = format!(
            "classifications as expected; quasiperiods 2 log p_i; verify --suite all: {n_checks} checks in {elapsed:.1}s < 600s"
        );
    }
    gate.criterion("10 (classification + verify)", pass, notes);
}
