//! Dirichlet polynomials `f(s) = 1 - sum_j b_j r_j^s`: Moran roots,
//! lattice/nonlattice analysis, and zero enumeration in a window.

use crate::error::{Error, Result};
use crate::mero::Window;
use crate::numeric::rational::best_rational;
use crate::numeric::real_pow_c;
use crate::numeric::roots::{newton, poly_roots};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `f(s) = 1 - sum_j b_j r_j^s` with `b_j > 0` and `r_j in (0,1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletPolynomial {
    terms: Vec<(f64, f64)>,
}

/// Outcome of the lattice/nonlattice dichotomy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LatticeClass {
    /// All ratios are integer powers of a common multiplicative generator
    /// `r`; zeros repeat with period `2 pi / log(1/r)` on vertical lines.
    Lattice {
        generator: f64,
        period: f64,
        exponents: Vec<u32>,
    },
    /// No rational dependence among `log r_j` up to the scan bound.
    Nonlattice,
}

impl DirichletPolynomial {
    pub fn new(terms: &[(f64, f64)]) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter(
                "Dirichlet polynomial needs at least one term".into(),
            ));
        }
        for &(b, r) in terms {
            if !(b > 0.0) || !(0.0 < r && r < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "term (b = {b}, r = {r}) needs b > 0 and r in (0,1)"
                )));
            }
        }
        Ok(DirichletPolynomial {
            terms: terms.to_vec(),
        })
    }

    /// Single-ratio convenience: `1 - b r^s`.
    pub fn single(b: f64, r: f64) -> Self {
        Self::new(&[(b, r)]).expect("caller provides b > 0, r in (0,1)")
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for &(b, r) in &self.terms {
            acc -= b * real_pow_c(r, s);
        }
        acc
    }

    /// `f'(s) = -sum b_j r_j^s log r_j`.
    pub fn deriv(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(b, r) in &self.terms {
            acc -= b * r.ln() * real_pow_c(r, s);
        }
        acc
    }

    /// The unique real solution of the Moran equation `sum b_j r_j^D = 1`.
    ///
    /// `s -> sum b_j r_j^s` is strictly decreasing, so the root is unique;
    /// it is polished to `|sum b r^D - 1| <= 1e-13`. `sum b_j < 1` puts the
    /// root below zero, outside the spray regime, and is rejected.
    pub fn moran_root(&self) -> Result<f64> {
        let coeff_sum: f64 = self.terms.iter().map(|&(b, _)| b).sum();
        if coeff_sum < 1.0 - 1e-14 {
            return Err(Error::NoRealRoot { coeff_sum });
        }
        if (coeff_sum - 1.0).abs() <= 1e-14 {
            return Ok(0.0);
        }
        let g = |s: f64| -> f64 {
            self.terms
                .iter()
                .map(|&(b, r)| b * r.powf(s))
                .sum::<f64>()
                - 1.0
        };
        // g is decreasing with g(0) = coeff_sum - 1 > 0; expand the bracket.
        let mut hi = 1.0;
        while g(hi) > 0.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::NoRealRoot { coeff_sum });
            }
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut root = 0.5 * (lo + hi);
        // Newton polish on g.
        for _ in 0..8 {
            let gp: f64 = self
                .terms
                .iter()
                .map(|&(b, r)| b * r.powf(root) * r.ln())
                .sum();
            if gp == 0.0 {
                break;
            }
            root -= g(root) / gp;
        }
        debug_assert!(g(root).abs() <= 1e-13);
        Ok(root)
    }

    fn distinct_ratios(&self) -> Vec<f64> {
        let mut rs: Vec<f64> = self.terms.iter().map(|&(_, r)| r).collect();
        rs.sort_by(f64::total_cmp);
        rs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * *b);
        rs
    }

    /// Lattice iff every `log r_j / log r_1` is rational with denominator at
    /// most `q_max` (continued-fraction test at relative tolerance 1e-12).
    pub fn lattice_analysis(&self, q_max: i64) -> LatticeClass {
        let ratios = self.distinct_ratios();
        let logs: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
        let x1 = logs[0];
        let mut fracs: Vec<(i64, i64)> = Vec::with_capacity(logs.len());
        for &x in &logs {
            let ratio = x / x1;
            let (p, q, res) = best_rational(ratio, q_max);
            if q == 0 || res > 1e-12 * ratio.abs().max(1.0) {
                return LatticeClass::Nonlattice;
            }
            fracs.push((p, q));
        }
        // Common generator: log r_j = k_j * w with w = x1 / lcm(q_j), then
        // divide by the gcd of the k_j so the group is exactly w Z.
        let lcm = fracs.iter().fold(1i64, |acc, &(_, q)| lcm(acc, q));
        let mut ks: Vec<i64> = fracs.iter().map(|&(p, q)| p * (lcm / q)).collect();
        let g = ks.iter().fold(0i64, |acc, &k| gcd(acc, k.abs()));
        let g = g.max(1);
        ks.iter_mut().for_each(|k| *k /= g);
        let w = x1 * g as f64 / lcm as f64;
        let generator = w.exp();
        // Map back to the full term list (with repetitions).
        let exponents = self
            .terms
            .iter()
            .map(|&(_, r)| {
                let idx = ratios
                    .iter()
                    .position(|&rr| (rr - r).abs() <= 1e-15 * r.max(rr))
                    .expect("ratio present");
                ks[idx] as u32
            })
            .collect();
        LatticeClass::Lattice {
            generator,
            period: 2.0 * PI / (1.0 / generator).ln(),
            exponents,
        }
    }

    /// All zeros of `f` inside the window, with multiplicities. Lattice
    /// polynomials are enumerated exactly through the root lines of the
    /// associated algebraic polynomial; nonlattice ones fall back to Newton
    /// iteration from a seed grid, audited by the argument principle.
    pub fn zeros_in_window(&self, window: &Window, q_max: i64) -> Result<Vec<(Complex64, u32)>> {
        match self.lattice_analysis(q_max) {
            LatticeClass::Lattice {
                generator,
                exponents,
                ..
            } => Ok(self.lattice_zeros(window, generator, &exponents)),
            LatticeClass::Nonlattice => self.newton_zeros(window),
        }
    }

    fn lattice_zeros(
        &self,
        window: &Window,
        generator: f64,
        exponents: &[u32],
    ) -> Vec<(Complex64, u32)> {
        // f(s) = 1 - sum b_j z^(k_j) with z = generator^s.
        let deg = exponents.iter().copied().max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        for (&(b, _), &k) in self.terms.iter().zip(exponents) {
            coeffs[k as usize] -= b;
        }
        let w = generator.ln(); // negative
        let mut roots = poly_roots(&coeffs);
        // Cluster numerically equal roots into multiplicities.
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut clustered: Vec<(Complex64, u32)> = Vec::new();
        for z in roots {
            match clustered.last_mut() {
                Some((zc, m)) if (*zc - z).norm() < 1e-7 => *m += 1,
                _ => clustered.push((z, 1)),
            }
        }
        let mut out = Vec::new();
        for (z, mult) in clustered {
            if z.norm() < 1e-14 {
                continue;
            }
            let re = z.norm().ln() / w;
            if re < window.re_min - 1e-12 || re > window.re_max + 1e-12 {
                continue;
            }
            // s = (log|z| + i arg z + 2 pi i n)/w for all integers n.
            let base_im = z.arg() / w;
            let step = 2.0 * PI / w.abs();
            let n_lo = ((-window.im_max - base_im) / step).floor() as i64 - 1;
            let n_hi = ((window.im_max - base_im) / step).ceil() as i64 + 1;
            for n in n_lo..=n_hi {
                let im = base_im + n as f64 * step;
                if im.abs() > window.im_max + 1e-12 {
                    continue;
                }
                let mut s = Complex64::new(re, im);
                if mult == 1 {
                    if let Some(p) = newton(|z| self.eval(z), |z| self.deriv(z), s, 1e-13, 40) {
                        if (p - s).norm() < 1e-6 {
                            s = p;
                        }
                    }
                }
                out.push((s, mult));
            }
        }
        out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
        out
    }

    fn newton_zeros(&self, window: &Window) -> Result<Vec<(Complex64, u32)>> {
        const SEED_STEP: f64 = 0.25;
        let mut found: Vec<Complex64> = Vec::new();
        let mut re = window.re_min - SEED_STEP;
        while re <= window.re_max + SEED_STEP {
            let mut im = -window.im_max - SEED_STEP;
            while im <= window.im_max + SEED_STEP {
                if let Some(z) = newton(
                    |z| self.eval(z),
                    |z| self.deriv(z),
                    Complex64::new(re, im),
                    1e-12,
                    60,
                ) {
                    if z.re >= window.re_min - 1e-9
                        && z.re <= window.re_max + 1e-9
                        && z.im.abs() <= window.im_max + 1e-9
                        && found.iter().all(|f| (f - z).norm() > 1e-9)
                    {
                        found.push(z);
                    }
                }
                im += SEED_STEP;
            }
            re += SEED_STEP;
        }
        found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let expected = self.winding_count(window, 4096);
        if expected != found.len() as i64 {
            return Err(Error::SeedGridTooCoarse {
                expected,
                found: found.len() as i64,
            });
        }
        Ok(found.into_iter().map(|z| (z, 1)).collect())
    }

    /// Argument-principle zero count inside the window: the winding number of
    /// `f` along the rectangle boundary, traversed counterclockwise.
    pub fn winding_count(&self, window: &Window, nodes: usize) -> i64 {
        let corners = [
            Complex64::new(window.re_min, -window.im_max),
            Complex64::new(window.re_max, -window.im_max),
            Complex64::new(window.re_max, window.im_max),
            Complex64::new(window.re_min, window.im_max),
        ];
        let per_side = nodes / 4;
        let mut total_arg = 0.0;
        let mut prev = self.eval(corners[0]);
        for side in 0..4 {
            let from = corners[side];
            let to = corners[(side + 1) % 4];
            for i in 1..=per_side {
                let t = i as f64 / per_side as f64;
                let z = from + (to - from) * t;
                let cur = self.eval(z);
                total_arg += (cur / prev).arg();
                prev = cur;
            }
        }
        (total_arg / (2.0 * PI)).round() as i64
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    (a / gcd(a, b)).abs() * b.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    #[test]
    fn moran_roots_match_log_forms() {
        let f = DirichletPolynomial::single(3.0, 0.5);
        let d = f.moran_root().unwrap();
        assert!((d - 3.0_f64.ln() / 2.0_f64.ln()).abs() < 1e-13);
        assert!((d - 1.5849625007).abs() < 1e-9);

        let f = DirichletPolynomial::single(8.0, 1.0 / 3.0);
        let d = f.moran_root().unwrap();
        assert!((d - 8.0_f64.ln() / 3.0_f64.ln()).abs() < 1e-13);
        assert!((d - 1.8927892607).abs() < 1e-9);

        let f = DirichletPolynomial::single(2.0, 0.5);
        assert!((f.moran_root().unwrap() - 1.0).abs() < 1e-13);

        // Residual criterion.
        for f in [
            DirichletPolynomial::single(3.0, 0.5),
            DirichletPolynomial::new(&[(1.0, 0.5), (1.0, 1.0 / 3.0)]).unwrap(),
        ] {
            let d = f.moran_root().unwrap();
            let resid: f64 = f
                .terms()
                .iter()
                .map(|&(b, r)| b * r.powf(d))
                .sum::<f64>()
                - 1.0;
            assert!(resid.abs() <= tol::MORAN_RESIDUAL);
        }
    }

    #[test]
    fn moran_boundary_and_failure() {
        // sum b = 1: root at exactly 0 (single-ratio nest denominator).
        let f = DirichletPolynomial::single(1.0, 0.5);
        assert_eq!(f.moran_root().unwrap(), 0.0);
        let f = DirichletPolynomial::single(0.5, 0.5);
        assert!(matches!(f.moran_root(), Err(Error::NoRealRoot { .. })));
    }

    #[test]
    fn lattice_classification() {
        let f = DirichletPolynomial::new(&[(1.0, 0.5), (1.0, 0.5), (1.0, 0.5)]).unwrap();
        match f.lattice_analysis(10_000) {
            LatticeClass::Lattice {
                generator, period, ..
            } => {
                assert!((generator - 0.5).abs() < 1e-15);
                assert!((period - 9.06472).abs() < 1e-5);
                assert!((period - 2.0 * PI / 2.0_f64.ln()).abs() < tol::LATTICE_PERIOD);
            }
            other => panic!("expected lattice, got {other:?}"),
        }
        let f = DirichletPolynomial::new(&[(1.0, 0.25), (1.0, 0.5)]).unwrap();
        match f.lattice_analysis(10_000) {
            LatticeClass::Lattice {
                generator,
                exponents,
                ..
            } => {
                assert!((generator - 0.5).abs() < 1e-14);
                assert_eq!(exponents, vec![2, 1]);
            }
            other => panic!("expected lattice, got {other:?}"),
        }
        let f = DirichletPolynomial::new(&[(1.0, 0.5), (1.0, 1.0 / 3.0)]).unwrap();
        assert_eq!(f.lattice_analysis(10_000), LatticeClass::Nonlattice);
    }

    #[test]
    fn lattice_zero_enumeration() {
        // 1 - 3 * 2^-s: zeros at log2(3) + i k 2 pi / ln 2.
        let f = DirichletPolynomial::single(3.0, 0.5);
        let w = Window::new(-1.0, 3.0, 30.0).unwrap();
        let zeros = f.zeros_in_window(&w, 10_000).unwrap();
        assert_eq!(zeros.len(), 7);
        let d = 3.0_f64.ln() / 2.0_f64.ln();
        let p = 2.0 * PI / 2.0_f64.ln();
        for (i, &(z, m)) in zeros.iter().enumerate() {
            assert_eq!(m, 1);
            assert!(f.eval(z).norm() <= tol::DIRICHLET_ZERO);
            let k = i as i64 - 3;
            assert!((z - Complex64::new(d, k as f64 * p)).norm() < 1e-9);
        }
        // Spacing of consecutive imaginary parts equals the period.
        for pair in zeros.windows(2) {
            assert!(((pair[1].0.im - pair[0].0.im) - p).abs() <= tol::LATTICE_SPACING);
        }
        // Audit agrees.
        assert_eq!(f.winding_count(&w, 4096), 7);
    }

    #[test]
    fn nonlattice_zero_search_with_audit() {
        // 1 - (1/2) 2^-s - (1/2) 3^-s: nonlattice; D = 0 is a zero
        // (coefficients sum to 1), other zeros lie strictly left.
        let f = DirichletPolynomial::new(&[(0.5, 0.5), (0.5, 1.0 / 3.0)]).unwrap();
        assert_eq!(f.lattice_analysis(10_000), LatticeClass::Nonlattice);
        let w = Window::new(-2.0, 1.0, 12.0).unwrap();
        let zeros = f.zeros_in_window(&w, 10_000).unwrap();
        assert!(!zeros.is_empty());
        assert!(zeros.iter().any(|&(z, _)| (z).norm() < 1e-9));
        for &(z, _) in &zeros {
            assert!(f.eval(z).norm() <= tol::DIRICHLET_ZERO);
            assert!(z.re <= 1e-9);
        }
    }
}
