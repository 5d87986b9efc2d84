//! Structured closed-form meromorphic functions: finite sums of terms
//!
//! ```text
//!   coeff * base^s * numer(s) * entire(s)
//!         / prod_i (s - p_i)^(k_i) / prod_j f_j(s)^(m_j)
//! ```
//!
//! with `f_j` Dirichlet polynomials `1 - sum b r^s`. This shape covers every
//! catalog zeta function (sprays, strings, balls, tori, Cantor sets, the
//! Cantor graph) and carries enough structure for exact pole enumeration,
//! residues and principal parts, scaling, and the tube/distance transfer.

mod dirichlet;
mod poles;

pub use dirichlet::{DirichletPolynomial, LatticeClass};
pub use poles::{
    audit_dirichlet_zeros, classify_fractality, contour_principal_part, poles_in_window,
    poles_in_window_qmax, residue_analytic, residue_at, ComplexDimension, Fractality,
    DEFAULT_QMAX,
};

use crate::error::{Error, Result};
use crate::numeric::{quad, real_pow_c};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Rectangular search region, symmetric about the real axis:
/// `Re s in [re_min, re_max]`, `|Im s| <= im_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max) || !(im_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "window needs re_min < re_max and im_max > 0 (got {re_min}:{re_max}:{im_max})"
            )));
        }
        Ok(Window {
            re_min,
            re_max,
            im_max,
        })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.re_min - 1e-12 && s.re <= self.re_max + 1e-12 && s.im.abs() <= self.im_max + 1e-12
    }
}

/// Polynomial in `s`, ascending coefficients; the default is the constant 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial(pub Vec<Complex64>);

impl Polynomial {
    pub fn one() -> Self {
        Polynomial(vec![Complex64::new(1.0, 0.0)])
    }

    /// `c0 + c1 s` from reals.
    pub fn linear(c0: f64, c1: f64) -> Self {
        Polynomial(vec![Complex64::new(c0, 0.0), Complex64::new(c1, 0.0)])
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial(out)
    }

    /// Order of the zero at `w` up to `max_order`, detected numerically.
    pub fn zero_order_at(&self, w: Complex64, max_order: u32) -> u32 {
        let scale: f64 = self.0.iter().map(|c| c.norm()).sum::<f64>().max(1e-30);
        let mut p = self.clone();
        for k in 0..max_order {
            if p.eval(w).norm() >= crate::tol::CANCEL_EPS * scale {
                return k;
            }
            p = p.derivative();
        }
        max_order
    }

    fn derivative(&self) -> Polynomial {
        if self.0.len() <= 1 {
            return Polynomial(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * (i as f64 + 1.0))
                .collect(),
        )
    }
}

/// Numeric entire-function handles backed by adaptive quadrature; the
/// closed-form catalog needs exactly these two integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntireFactor {
    /// `I(s) = int_0^{pi/4} cos(phi)^-s d phi` (incomplete-beta form).
    CosPowQuarter,
    /// `Z(s) = int_0^{pi/2} (cos t + sin t)^-s dt`.
    SinPlusCosHalfPi,
}

/// Evaluation tolerance for entire factors.
pub const ENTIRE_TOL: f64 = 1e-10;

impl EntireFactor {
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let (hi, f): (f64, fn(f64) -> f64) = match self {
            EntireFactor::CosPowQuarter => (std::f64::consts::FRAC_PI_4, |x: f64| x.cos()),
            EntireFactor::SinPlusCosHalfPi => {
                (std::f64::consts::FRAC_PI_2, |x: f64| x.cos() + x.sin())
            }
        };
        let mut integrand = |x: f64| (-s * f(x).ln()).exp();
        let v = quad::simpson(&mut integrand, 0.0, hi, ENTIRE_TOL, 48);
        if v.re.is_nan() || v.im.is_nan() {
            return Err(Error::EntireFactorFailure(format!("{self:?} at s = {s}")));
        }
        Ok(v)
    }
}

/// One meromorphic term; see the module docs for the factor layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeroTerm {
    pub coeff: Complex64,
    pub base: f64,
    pub numer: Polynomial,
    pub rational_poles: Vec<(Complex64, u32)>,
    pub dirichlet: Vec<(DirichletPolynomial, u32)>,
    pub entire: Option<EntireFactor>,
}

impl MeroTerm {
    pub fn new(coeff: f64) -> Self {
        MeroTerm {
            coeff: Complex64::new(coeff, 0.0),
            base: 1.0,
            numer: Polynomial::one(),
            rational_poles: Vec::new(),
            dirichlet: Vec::new(),
            entire: None,
        }
    }

    pub fn base(mut self, base: f64) -> Self {
        assert!(base > 0.0, "base^s needs base > 0");
        self.base = base;
        self
    }

    pub fn rational(mut self, pole: f64, order: u32) -> Self {
        self.rational_poles.push((Complex64::new(pole, 0.0), order));
        self
    }

    pub fn dirichlet(mut self, f: DirichletPolynomial, order: u32) -> Self {
        self.dirichlet.push((f, order));
        self
    }

    pub fn numer(mut self, p: Polynomial) -> Self {
        self.numer = p;
        self
    }

    pub fn entire(mut self, e: EntireFactor) -> Self {
        self.entire = Some(e);
        self
    }

    /// Evaluate, optionally skipping one rational or Dirichlet factor
    /// (used for analytic residues at simple poles).
    pub(crate) fn eval_excluding(
        &self,
        s: Complex64,
        skip_rational: Option<usize>,
        skip_dirichlet: Option<usize>,
    ) -> Result<Complex64> {
        let mut acc = self.coeff * real_pow_c(self.base, s) * self.numer.eval(s);
        if let Some(e) = &self.entire {
            acc *= e.eval(s)?;
        }
        for (i, &(p, k)) in self.rational_poles.iter().enumerate() {
            if Some(i) == skip_rational {
                continue;
            }
            acc /= (s - p).powu(k);
        }
        for (j, (f, m)) in self.dirichlet.iter().enumerate() {
            if Some(j) == skip_dirichlet {
                continue;
            }
            acc /= f.eval(s).powu(*m);
        }
        Ok(acc)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        self.eval_excluding(s, None, None)
    }
}

/// A finite sum of meromorphic terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeroExpr {
    pub label: String,
    pub terms: Vec<MeroTerm>,
}

impl MeroExpr {
    pub fn new(label: impl Into<String>, terms: Vec<MeroTerm>) -> Self {
        MeroExpr {
            label: label.into(),
            terms,
        }
    }

    /// Evaluate at `s`; refuses points within `1e-13` of a declared pole.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        for term in &self.terms {
            for &(p, _) in &term.rational_poles {
                let dist = (s - p).norm();
                if dist < crate::tol::POLE_HIT {
                    return Err(Error::PoleHit { s, dist });
                }
            }
            for (f, _) in &term.dirichlet {
                let v = f.eval(s).norm();
                if v < 1e-12 {
                    return Err(Error::PoleHit { s, dist: v });
                }
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for term in &self.terms {
            acc += term.eval(s)?;
        }
        Ok(acc)
    }

    /// `lambda^s *` this expression: multiply every base by `lambda`.
    /// The pole set is unchanged.
    pub fn scale(&self, lambda: f64) -> Result<MeroExpr> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveScale(lambda));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.base *= lambda;
                t
            })
            .collect();
        Ok(MeroExpr::new(format!("scaled({})", self.label), terms))
    }

    /// Divide by a Dirichlet polynomial (the spray factorization step).
    pub fn divide_by_dirichlet(&self, f: &DirichletPolynomial, order: u32) -> MeroExpr {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.dirichlet.push((f.clone(), order));
                t
            })
            .collect();
        MeroExpr::new(self.label.clone(), terms)
    }

    /// Add the terms of another expression.
    pub fn plus(&self, other: &MeroExpr) -> MeroExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        MeroExpr::new(format!("{}+{}", self.label, other.label), terms)
    }

    /// Multiply every term's numerator by `p`.
    pub fn mul_polynomial(&self, p: &Polynomial) -> MeroExpr {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.numer = t.numer.mul(p);
                t
            })
            .collect();
        MeroExpr::new(self.label.clone(), terms)
    }
}

/// Direction of the tube/distance functional-equation transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferDirection {
    TubeToDistance,
    DistanceToTube,
}

/// Exact expression transform along
/// `zeta(s) = delta^(s-N) |A_delta ∩ Omega| + (N - s) tube(s)`.
///
/// `d` is the declared (upper box) dimension of the input expression;
/// `sat_volume = |A_delta ∩ Omega|` is supplied by the caller. Residues then
/// obey `res(zeta, w) = (N - w) res(tube, w)`.
pub fn tube_distance_transfer(
    e: &MeroExpr,
    direction: TransferDirection,
    n: u32,
    delta: f64,
    sat_volume: f64,
    d: f64,
) -> Result<MeroExpr> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let nf = n as f64;
    match direction {
        TransferDirection::TubeToDistance => {
            // delta^(s-N) V + (N - s) * tube(s)
            let mut terms = vec![MeroTerm::new(sat_volume * delta.powi(-(n as i32))).base(delta)];
            let scaled = e.mul_polynomial(&Polynomial::linear(nf, -1.0));
            terms.extend(scaled.terms);
            Ok(MeroExpr::new(format!("distance({})", e.label), terms))
        }
        TransferDirection::DistanceToTube => {
            if (d - nf).abs() < 1e-12 {
                return Err(Error::DegenerateDimension { d, n });
            }
            // tube = (zeta - delta^(s-N) V) / (N - s)
            //      = -(zeta - delta^(s-N) V) * (s - N)^-1
            let mut terms: Vec<MeroTerm> = e
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.coeff = -t.coeff;
                    t.rational_poles.push((Complex64::new(nf, 0.0), 1));
                    t
                })
                .collect();
            let mut sat = MeroTerm::new(sat_volume * delta.powi(-(n as i32))).base(delta);
            sat.rational_poles.push((Complex64::new(nf, 0.0), 1));
            terms.push(sat);
            Ok(MeroExpr::new(format!("tube({})", e.label), terms))
        }
    }
}

/// Tube zeta of the boundary of a compact set of positive reach:
/// `tube(s) = sum_{c_k != 0} c_k delta^(s-k) / (s-k)` where
/// `|A_t| = sum c_k t^(N-k)`. All poles are simple; `D = max{k : c_k != 0}`.
pub fn positive_reach_zeta(coeffs: &[f64], n: u32, delta: f64) -> Result<(MeroExpr, f64)> {
    if coeffs.len() != n as usize {
        return Err(Error::InvalidParameter(format!(
            "need N = {n} Federer coefficients c_0..c_(N-1), got {}",
            coeffs.len()
        )));
    }
    if coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::AllZeroCoefficients);
    }
    let mut terms = Vec::new();
    let mut d = f64::NEG_INFINITY;
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        d = k as f64;
        terms.push(
            MeroTerm::new(c * delta.powi(-(k as i32)))
                .base(delta)
                .rational(k as f64, 1),
        );
    }
    Ok((MeroExpr::new("positive-reach-tube", terms), d))
}
