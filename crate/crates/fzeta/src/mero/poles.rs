//! Pole enumeration with orders, residues and principal parts, and the
//! fractality classification derived from them.

use crate::error::{Error, Result};
use crate::mero::{MeroExpr, MeroTerm, Window};
use crate::tol;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Default coefficient bound for the lattice/nonlattice rational tests.
pub const DEFAULT_QMAX: i64 = 10_000;

/// Contour radius and node count for principal-part extraction.
const CONTOUR_RADIUS: f64 = 1e-3;
const CONTOUR_NODES: usize = 512;

/// A complex dimension: pole location, order, principal-part coefficients
/// `c_{-order} .. c_{-1}`, and the principal / possibly-cancelled flags.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexDimension {
    pub s: Complex64,
    pub order: u32,
    pub principal_part: Vec<Complex64>,
    pub principal: bool,
    pub cancelled: bool,
}

impl ComplexDimension {
    /// Residue (the `c_{-1}` coefficient).
    pub fn residue(&self) -> Complex64 {
        *self.principal_part.last().unwrap_or(&Complex64::new(0.0, 0.0))
    }
}

/// Fractality classification of an expression over a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Fractality {
    NotFractal,
    CriticallyFractal,
    StrictlySubcriticallyFractal { dims: Vec<f64> },
}

fn merge_candidate(list: &mut Vec<(Complex64, u32)>, s: Complex64, order: u32) {
    for (p, k) in list.iter_mut() {
        if (*p - s).norm() < tol::POLE_DEDUP {
            *k += order;
            return;
        }
    }
    list.push((s, order));
}

/// Candidate poles of one term inside the window, with nominal orders
/// (denominator orders summed; numerator cancellation handled later).
fn term_candidates(
    term: &MeroTerm,
    window: &Window,
    q_max: i64,
) -> Result<Vec<(Complex64, u32)>> {
    let mut out: Vec<(Complex64, u32)> = Vec::new();
    for &(p, k) in &term.rational_poles {
        if window.contains(p) {
            merge_candidate(&mut out, p, k);
        }
    }
    for (f, m) in &term.dirichlet {
        for (z, mult) in f.zeros_in_window(window, q_max)? {
            merge_candidate(&mut out, z, mult * m);
        }
    }
    Ok(out)
}

/// Nominal order of one term at a specific point (no window search).
fn term_order_at(term: &MeroTerm, s: Complex64) -> u32 {
    let mut order = 0u32;
    for &(p, k) in &term.rational_poles {
        if (p - s).norm() < tol::POLE_DEDUP {
            order += k;
        }
    }
    for (f, m) in &term.dirichlet {
        if f.eval(s).norm() < 1e-8 {
            order += m;
        }
    }
    order
}

/// Analytic residue of one term at a simple pole: either a single rational
/// factor `(s-p)^-1` (residue is the rest evaluated at `p`) or a single
/// simple Dirichlet zero (divide by `f'`). Returns `None` when the local
/// structure is not a clean simple pole.
fn term_simple_residue(term: &MeroTerm, s: Complex64) -> Result<Option<Complex64>> {
    let mut rational_hit: Option<(usize, u32)> = None;
    for (i, &(p, k)) in term.rational_poles.iter().enumerate() {
        if (p - s).norm() < tol::POLE_DEDUP {
            if rational_hit.is_some() {
                return Ok(None);
            }
            rational_hit = Some((i, k));
        }
    }
    let mut dirichlet_hit: Option<(usize, u32)> = None;
    for (j, (f, m)) in term.dirichlet.iter().enumerate() {
        if f.eval(s).norm() < 1e-8 {
            if dirichlet_hit.is_some() {
                return Ok(None);
            }
            dirichlet_hit = Some((j, *m));
        }
    }
    match (rational_hit, dirichlet_hit) {
        (None, None) => Ok(Some(Complex64::new(0.0, 0.0))),
        (Some((i, 1)), None) => {
            let p = term.rational_poles[i].0;
            Ok(Some(term.eval_excluding(p, Some(i), None)?))
        }
        (None, Some((j, 1))) => {
            let f = &term.dirichlet[j].0;
            let fp = f.deriv(s);
            if fp.norm() < 1e-8 {
                return Ok(None); // multiple zero; contour route
            }
            // Polish the pole location before dividing.
            let g = term.eval_excluding(s, None, Some(j))?;
            Ok(Some(g / fp))
        }
        _ => Ok(None),
    }
}

/// Principal part `c_{-order} .. c_{-1}` of the whole expression at `s0` by
/// trapezoid contour integrals on a circle of the given radius.
pub fn contour_principal_part(
    e: &MeroExpr,
    s0: Complex64,
    order: u32,
    radius: f64,
) -> Result<Vec<Complex64>> {
    // A nearby second pole would corrupt every coefficient.
    for term in &e.terms {
        for &(p, _) in &term.rational_poles {
            let d = (p - s0).norm();
            if d > tol::POLE_DEDUP && d < 3.0 * radius {
                return Err(Error::ContourContainsOtherPole { center: s0, radius });
            }
        }
    }
    let mut vals = Vec::with_capacity(CONTOUR_NODES);
    for k in 0..CONTOUR_NODES {
        let theta = 2.0 * PI * k as f64 / CONTOUR_NODES as f64;
        let z = s0 + radius * Complex64::new(theta.cos(), theta.sin());
        for term in &e.terms {
            for (f, _) in &term.dirichlet {
                if f.eval(z).norm() < 1e-9 {
                    return Err(Error::ContourContainsOtherPole { center: s0, radius });
                }
            }
        }
        vals.push(e.eval(z)?);
    }
    let mut coeffs = Vec::with_capacity(order as usize);
    for k in (1..=order).rev() {
        // c_{-k} = radius^k / M * sum f(s0 + radius e^{i theta}) e^{i k theta}
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, v) in vals.iter().enumerate() {
            let theta = 2.0 * PI * m as f64 / CONTOUR_NODES as f64;
            acc += v * Complex64::new(0.0, k as f64 * theta).exp();
        }
        coeffs.push(acc * radius.powi(k as i32) / CONTOUR_NODES as f64);
    }
    Ok(coeffs)
}

/// Principal part at a declared pole. Simple poles take the analytic route
/// (product rule / Dirichlet derivative); higher orders use the contour.
pub fn residue_at(e: &MeroExpr, s0: Complex64) -> Result<Vec<Complex64>> {
    let nominal: u32 = e.terms.iter().map(|t| term_order_at(t, s0)).max().unwrap_or(0);
    if nominal == 0 {
        return Err(Error::NotAPole(s0));
    }
    if nominal == 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut analytic_ok = true;
        for term in &e.terms {
            match term_simple_residue(term, s0)? {
                Some(r) => acc += r,
                None => {
                    analytic_ok = false;
                    break;
                }
            }
        }
        if analytic_ok {
            return Ok(vec![acc]);
        }
    }
    contour_principal_part(e, s0, nominal, CONTOUR_RADIUS)
}

/// Analytic simple residue (errors when any term lacks clean simple-pole
/// structure at `s0`); used to cross-validate the contour route.
pub fn residue_analytic(e: &MeroExpr, s0: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for term in &e.terms {
        match term_simple_residue(term, s0)? {
            Some(r) => acc += r,
            None => {
                return Err(Error::InvalidParameter(format!(
                    "no analytic simple-pole structure at {s0}"
                )))
            }
        }
    }
    Ok(acc)
}

/// Enumerate the complex dimensions of `e` inside the window: rational poles
/// listed directly, Dirichlet zeros by lattice enumeration or seeded Newton,
/// deduplicated at 1e-9; each pole carries its order, principal part and the
/// principal / possibly-cancelled flags.
pub fn poles_in_window(e: &MeroExpr, window: &Window) -> Result<Vec<ComplexDimension>> {
    poles_in_window_qmax(e, window, DEFAULT_QMAX)
}

pub fn poles_in_window_qmax(
    e: &MeroExpr,
    window: &Window,
    q_max: i64,
) -> Result<Vec<ComplexDimension>> {
    let mut candidates: Vec<(Complex64, u32)> = Vec::new();
    for term in &e.terms {
        for (s, order) in term_candidates(term, window, q_max)? {
            // Across terms the nominal order is the worst single term.
            let mut merged = false;
            for (p, k) in candidates.iter_mut() {
                if (*p - s).norm() < tol::POLE_DEDUP {
                    *k = (*k).max(order);
                    merged = true;
                    break;
                }
            }
            if !merged {
                candidates.push((s, order));
            }
        }
    }
    let mut dims = Vec::with_capacity(candidates.len());
    for &(s, nominal) in &candidates {
        let principal_part = residue_at(e, s)?;
        let scale: f64 = 1.0 + principal_part.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // Effective order: leading nonvanishing principal coefficient.
        let mut order = 0u32;
        for (i, c) in principal_part.iter().enumerate() {
            if c.norm() > tol::CANCEL_EPS * scale {
                order = (principal_part.len() - i) as u32;
                break;
            }
        }
        let cancelled = order == 0;
        let trimmed = if cancelled {
            principal_part
        } else {
            principal_part[principal_part.len() - order as usize..].to_vec()
        };
        dims.push(ComplexDimension {
            s,
            order: if cancelled { nominal } else { order },
            principal_part: trimmed,
            principal: false,
            cancelled,
        });
    }
    // Principal = on the rightmost line through a non-cancelled pole.
    if let Some(d_max) = dims
        .iter()
        .filter(|d| !d.cancelled)
        .map(|d| d.s.re)
        .max_by(f64::total_cmp)
    {
        for d in dims.iter_mut() {
            d.principal = !d.cancelled && (d.s.re - d_max).abs() <= tol::POLE_DEDUP;
        }
    }
    dims.sort_by(|a, b| a.s.re.total_cmp(&b.s.re).then(a.s.im.total_cmp(&b.s.im)));
    Ok(dims)
}

/// Per-denominator argument-principle audit: for every distinct Dirichlet
/// denominator of `e`, compare the winding count over the window boundary to
/// the zero enumeration (with multiplicity).
pub fn audit_dirichlet_zeros(
    e: &MeroExpr,
    window: &Window,
    q_max: i64,
) -> Result<Vec<(i64, i64)>> {
    let mut denoms: Vec<&crate::mero::DirichletPolynomial> = Vec::new();
    for term in &e.terms {
        for (f, _) in &term.dirichlet {
            if !denoms.contains(&f) {
                denoms.push(f);
            }
        }
    }
    let mut out = Vec::new();
    for f in denoms {
        let enumerated: i64 = f
            .zeros_in_window(window, q_max)?
            .iter()
            .map(|&(_, m)| m as i64)
            .sum();
        let winding = f.winding_count(window, 4096);
        out.push((winding, enumerated));
    }
    Ok(out)
}

/// Classification per the complex-dimension theory: critically fractal when
/// a nonreal pole sits on the critical line `Re s = D`, strictly subcritical
/// when nonreal poles exist only strictly to the left (reporting the distinct
/// real parts), not fractal when every window pole is real.
pub fn classify_fractality(e: &MeroExpr, window: &Window) -> Result<Fractality> {
    let dims = poles_in_window(e, window)?;
    let live: Vec<&ComplexDimension> = dims.iter().filter(|d| !d.cancelled).collect();
    if live.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let d_max = live
        .iter()
        .map(|d| d.s.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let nonreal: Vec<&&ComplexDimension> =
        live.iter().filter(|d| d.s.im.abs() > tol::POLE_DEDUP).collect();
    if nonreal.is_empty() {
        return Ok(Fractality::NotFractal);
    }
    if nonreal.iter().any(|d| (d.s.re - d_max).abs() <= tol::POLE_DEDUP) {
        return Ok(Fractality::CriticallyFractal);
    }
    let mut dims_re: Vec<f64> = nonreal.iter().map(|d| d.s.re).collect();
    dims_re.sort_by(f64::total_cmp);
    dims_re.dedup_by(|a, b| (*a - *b).abs() <= tol::POLE_DEDUP);
    Ok(Fractality::StrictlySubcriticallyFractal { dims: dims_re })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mero::{DirichletPolynomial, MeroTerm};
    use crate::numeric::real_pow_c;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Distance zeta of the relative Sierpinski gasket,
    /// `6 sqrt(3) (4 sqrt 3)^-s / (s (s-1) (1 - 3 2^-s))`.
    fn gasket_expr() -> MeroExpr {
        MeroExpr::new(
            "gasket",
            vec![MeroTerm::new(6.0 * 3.0_f64.sqrt())
                .base(1.0 / (4.0 * 3.0_f64.sqrt()))
                .rational(0.0, 1)
                .rational(1.0, 1)
                .dirichlet(DirichletPolynomial::single(3.0, 0.5), 1)],
        )
    }

    #[test]
    fn gasket_value_is_region_area_at_two() {
        let v = gasket_expr().eval(c(2.0, 0.0)).unwrap();
        assert!((v.re - 3.0_f64.sqrt() / 4.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn gasket_pole_enumeration() {
        let w = Window::new(-1.0, 3.0, 30.0).unwrap();
        let dims = poles_in_window(&gasket_expr(), &w).unwrap();
        // {0, 1} and 7 lattice points on Re = log2(3).
        assert_eq!(dims.len(), 9);
        let d = 3.0_f64.ln() / 2.0_f64.ln();
        let p = 2.0 * PI / 2.0_f64.ln();
        let lattice: Vec<&ComplexDimension> =
            dims.iter().filter(|x| (x.s.re - d).abs() < 1e-9).collect();
        assert_eq!(lattice.len(), 7);
        for (i, dim) in lattice.iter().enumerate() {
            assert_eq!(dim.order, 1);
            assert!(dim.principal);
            assert!(!dim.cancelled);
            let k = i as i64 - 3;
            assert!((dim.s - c(d, k as f64 * p)).norm() < 1e-9);
        }
        for dim in dims.iter().filter(|x| x.s.im.abs() < 1e-12) {
            if (dim.s.re - d).abs() > 1e-9 {
                assert!(dim.s.re.abs() < 1e-12 || (dim.s.re - 1.0).abs() < 1e-12);
                assert!(!dim.principal);
            }
        }
    }

    #[test]
    fn gasket_residue_analytic_vs_contour() {
        let e = gasket_expr();
        let d = 3.0_f64.ln() / 2.0_f64.ln();
        let analytic = residue_analytic(&e, c(d, 0.0)).unwrap();
        let contour = contour_principal_part(&e, c(d, 0.0), 1, 1e-3).unwrap()[0];
        assert!((analytic - contour).norm() <= tol::RESIDUE_CONTOUR);
        // Closed form: 6 (sqrt3)^{1-D} 4^{-D} / (D (D-1) log 2) -- the
        // derivative of 1 - 3*2^-s at the root is log 2.
        let want = 6.0 * 3.0_f64.sqrt().powf(1.0 - d) * 4.0_f64.powf(-d)
            / (d * (d - 1.0) * 2.0_f64.ln());
        assert!((analytic.re - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn ngasket3_double_pole_at_two() {
        // 24 sqrt(3) (2 sqrt 6)^-s / (s (s-1) (s-2) (1 - 4 2^-s)).
        let e = MeroExpr::new(
            "ngasket-3",
            vec![MeroTerm::new(24.0 * 3.0_f64.sqrt())
                .base(1.0 / (2.0 * 6.0_f64.sqrt()))
                .rational(0.0, 1)
                .rational(1.0, 1)
                .rational(2.0, 1)
                .dirichlet(DirichletPolynomial::single(4.0, 0.5), 1)],
        );
        let w = Window::new(-0.5, 3.0, 10.0).unwrap();
        let dims = poles_in_window(&e, &w).unwrap();
        let at2 = dims
            .iter()
            .find(|d| (d.s - c(2.0, 0.0)).norm() < 1e-9)
            .expect("pole at 2");
        assert_eq!(at2.order, 2);
        assert!(!at2.cancelled);
        assert!(at2.principal);
        assert_eq!(at2.principal_part.len(), 2);
        // Everything else in the window is simple.
        for d in dims.iter().filter(|d| (d.s - c(2.0, 0.0)).norm() >= 1e-9) {
            assert_eq!(d.order, 1);
        }
    }

    #[test]
    fn residue_scaling_transfer() {
        // res(lambda^s e, w) = lambda^w res(e, w) for a simple pole.
        let e = gasket_expr();
        let d = 3.0_f64.ln() / 2.0_f64.ln();
        let w = c(d, 2.0 * PI / 2.0_f64.ln());
        let base = residue_at(&e, w).unwrap()[0];
        let scaled = e.scale(2.0).unwrap();
        let got = residue_at(&scaled, w).unwrap()[0];
        let want = real_pow_c(2.0, w) * base;
        assert!((got - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn cancelled_pole_is_flagged() {
        // (s-1)/(s(s-1)) : the pole at 1 is cancelled by the numerator.
        let e = MeroExpr::new(
            "cancelled",
            vec![MeroTerm::new(1.0)
                .numer(crate::mero::Polynomial::linear(-1.0, 1.0))
                .rational(0.0, 1)
                .rational(1.0, 1)],
        );
        let w = Window::new(-0.5, 2.0, 5.0).unwrap();
        let dims = poles_in_window(&e, &w).unwrap();
        let at1 = dims.iter().find(|d| (d.s - c(1.0, 0.0)).norm() < 1e-9).unwrap();
        assert!(at1.cancelled);
        let at0 = dims.iter().find(|d| d.s.norm() < 1e-9).unwrap();
        assert!(!at0.cancelled);
        // (s-1)/(s(s-1)) = 1/s has residue 1 at the origin.
        assert!((at0.residue() - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn not_a_pole_is_rejected() {
        assert!(matches!(
            residue_at(&gasket_expr(), c(0.5, 0.0)),
            Err(Error::NotAPole(_))
        ));
    }

    #[test]
    fn classify_catalog_shapes() {
        let w = Window::new(-1.0, 3.0, 30.0).unwrap();
        assert_eq!(
            classify_fractality(&gasket_expr(), &w).unwrap(),
            Fractality::CriticallyFractal
        );
        // Cantor graph: strictly subcritical, fractal in dimension log_3 2.
        let graph = MeroExpr::new(
            "cantor-graph",
            vec![MeroTerm::new(2.0)
                .base(1.0 / 3.0)
                .rational(0.0, 1)
                .rational(1.0, 1)
                .dirichlet(DirichletPolynomial::single(2.0, 1.0 / 3.0), 1)],
        );
        match classify_fractality(&graph, &w).unwrap() {
            Fractality::StrictlySubcriticallyFractal { dims } => {
                assert_eq!(dims.len(), 1);
                assert!((dims[0] - 2.0_f64.ln() / 3.0_f64.ln()).abs() < 1e-12);
            }
            other => panic!("expected strictly subcritical, got {other:?}"),
        }
        // Ball: not fractal.
        let ball = super::super::tests::ball2_expr(1.0);
        assert_eq!(
            classify_fractality(&ball, &w).unwrap(),
            Fractality::NotFractal
        );
    }

    #[test]
    fn dirichlet_audit_matches() {
        let e = gasket_expr();
        let w = Window::new(-1.0, 3.0, 30.0).unwrap();
        for (winding, enumerated) in audit_dirichlet_zeros(&e, &w, DEFAULT_QMAX).unwrap() {
            assert_eq!(winding, enumerated);
        }
    }
}
