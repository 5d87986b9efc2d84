//! Ambient-embedding functional equations: the Gamma-ratio factor linking
//! tube zetas across ambient dimensions, the one-step embedding integral,
//! residue/content transfer, and the Cantor dust distance zeta assembled
//! from the embedded Cantor string.

use crate::cantor::{gcs_create, GeneralizedCantorSet};
use crate::error::{Error, Result};
use crate::numeric::quad;
use crate::numeric::real_pow_c;
use crate::numeric::special::{dist_to_gamma_pole, ln_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `pi^(M/2) Gamma((N-s)/2 + 1) / Gamma((N+M-s)/2 + 1)`, the factor relating
/// the tube zeta of `A` in `R^N` to that of `A x {0}^M` in `R^(N+M)`.
pub fn gamma_ratio_factor(n: u32, m: u32, s: Complex64) -> Result<Complex64> {
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let x = (n as f64 - s) / 2.0 + 1.0;
    let y = (n as f64 + m as f64 - s) / 2.0 + 1.0;
    // Poles of Gamma(x) at s = N+2+2k survive unless Gamma(y) blows up too.
    if dist_to_gamma_pole(x) < 1e-12 && dist_to_gamma_pole(y) > 1e-6 {
        return Err(Error::PoleHit {
            s,
            dist: dist_to_gamma_pole(x),
        });
    }
    Ok((0.5 * m as f64 * PI.ln() + ln_gamma(x) - ln_gamma(y)).exp())
}

/// Residue of `s -> gamma_ratio_factor(N, M, s)` at its candidate pole
/// `s_k = N + 2 + 2k`, via a small contour. Zero for even `M` once
/// `k >= M/2` (the poles cancel); nonzero for every `k` when `M` is odd.
pub fn gamma_ratio_residue(n: u32, m: u32, k: u32) -> Complex64 {
    let s0 = Complex64::new(n as f64 + 2.0 + 2.0 * k as f64, 0.0);
    let radius = 1e-3;
    let nodes = 256;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * j as f64 / nodes as f64;
        let z = s0 + radius * Complex64::new(theta.cos(), theta.sin());
        let x = (n as f64 - z) / 2.0 + 1.0;
        let y = (n as f64 + m as f64 - z) / 2.0 + 1.0;
        let v = (0.5 * m as f64 * PI.ln() + ln_gamma(x) - ln_gamma(y)).exp();
        acc += v * Complex64::new(0.0, theta).exp();
    }
    acc * radius / nodes as f64
}

/// One-step embedding of a tube zeta: given a handle for
/// `delta' -> tube(s; delta')` of `A` in `R^N`, computes
/// `2 int_0^{pi/2} tube(s; delta sin tau) sin(tau)^(N+1-s) d tau`,
/// which equals the tube zeta of `A x {0}` in `R^(N+1)`.
pub fn embed_tube_zeta<F>(tube: F, s: Complex64, delta: f64, n: u32) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let exponent = Complex64::new(n as f64 + 1.0, 0.0) - s;
    let r = quad::integrate(
        |tau| {
            let si = tau.sin();
            if si <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            tube(delta * si) * (exponent * si.ln()).exp()
        },
        0.0,
        PI / 2.0,
        1e-10,
        1e-14,
    );
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::ToleranceUnreachable {
            tol: 1e-10,
            best: f64::INFINITY,
        });
    }
    Ok(2.0 * r.value)
}

/// Residue transfer under an `M`-step embedding of a simple pole at `D`:
/// `res(tube_{A_M}, D) = gamma_ratio_factor(N, M, D) res(tube_A, D)`.
pub fn residue_transfer(res: f64, n: u32, m: u32, d: f64) -> Result<f64> {
    let factor = gamma_ratio_factor(n, m, Complex64::new(d, 0.0))?;
    Ok(factor.re * res)
}

/// Kneser-normalized content `M^D(A) / omega_(N-D)` with
/// `omega_d = pi^(d/2)/Gamma(d/2+1)` the d-dimensional unit-ball volume;
/// invariant under embedding (for a circle it recovers the circumference in
/// every ambient dimension).
pub fn kneser_normalized(content: f64, n: u32, d: f64) -> f64 {
    let g = ln_gamma(Complex64::new((n as f64 - d) / 2.0 + 1.0, 0.0))
        .exp()
        .re;
    content * g / PI.powf((n as f64 - d) / 2.0)
}

/// Tube volume of the planar embedding `A x {0}` of a 1D set from its line
/// tube volume: `|(A x {0})_t|_2 = 2 t int_0^{pi/2} |A_{t sin v}|_1 sin v dv`.
pub fn embedded_tube_volume<F>(line_tube: F, t: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let (v, _) = quad::integrate_real(
        |vangle| line_tube(t * vangle.sin()) * vangle.sin(),
        0.0,
        PI / 2.0,
        1e-11,
        1e-15,
    );
    2.0 * t * v
}

/// The Cantor dust RFD `(C x C, (0,1)^2)` for the classic ternary set:
/// distance zeta assembled from the middle-cross decomposition,
///
/// ```text
/// zeta(s) = 8/(s (3^s - 4)) * ( I(s)/6^s + zeta_{A2,Omega2}(s) )
/// ```
///
/// with `I(s) = int_0^{pi/4} cos^-s` and `(A2, Omega2)` the embedded scaled
/// Cantor string, itself expressible through the Gamma-ratio factor and the
/// embedding error term `E(s; 1/6)`.
pub struct DustZeta {
    _set: GeneralizedCantorSet,
}

/// `int_0^a (u^2 + y^2)^p dy`, split at `y = u` so the power-law region
/// above the split integrates in log coordinates.
pub(crate) fn strip_inner(u: f64, a: f64, p: Complex64) -> Complex64 {
    if u < 1e-280 {
        // exactly int_0^a y^(2p) dy
        return real_pow_c(a, 2.0 * p + 1.0) / (2.0 * p + 1.0);
    }
    let split = u.min(a);
    let part1 = quad::integrate(
        |y| (p * (u * u + y * y).ln()).exp(),
        0.0,
        split,
        1e-10,
        0.0,
    )
    .value;
    let part2 = if split < a {
        quad::integrate(
            |v| {
                let y = v.exp();
                (p * (u * u + y * y).ln()).exp() * y
            },
            split.ln(),
            a.ln(),
            1e-10,
            0.0,
        )
        .value
    } else {
        Complex64::new(0.0, 0.0)
    };
    part1 + part2
}

impl Default for DustZeta {
    fn default() -> Self {
        DustZeta::new()
    }
}

impl DustZeta {
    pub fn new() -> Self {
        let (set, _) = gcs_create(2, 1.0 / 3.0).expect("classic parameters");
        DustZeta { _set: set }
    }

    /// `D = log_3 4`.
    pub fn dimension(&self) -> f64 {
        4.0_f64.ln() / 3.0_f64.ln()
    }

    /// Oscillatory period `2 pi / log 3` shared by both candidate lattices.
    pub fn period(&self) -> f64 {
        2.0 * PI / 3.0_f64.ln()
    }

    /// Distance zeta of the scaled Cantor string drum
    /// `(3^-1 C, 3^-1 (0,1))`: `2 * 6^-s / (s (3^s - 2))`.
    fn scaled_string_zeta(&self, s: Complex64) -> Complex64 {
        2.0 * real_pow_c(6.0, -s) / (s * (real_pow_c(3.0, s) - 2.0))
    }

    /// `zeta_{A2,Omega2}(s)`: the drum with `A2 = 3^-1 C x {0}` and
    /// `Omega2 = (0,1/3) x (0,1/6)`, by exact-gap quadrature of
    /// `int (d(x)^2 + y^2)^((s-2)/2)`; converges for `Re s > log_3 2`.
    pub fn embedded_strip_zeta(&self, s: Complex64) -> Result<Complex64> {
        let a = 1.0 / 6.0;
        let p = (s - 2.0) / 2.0;
        // Inner integral over y; the integrand behaves like y^(s-2) near the
        // axis, so the range above `u` runs in log coordinates.
        let inner = |u: f64| -> Complex64 { strip_inner(u, a, p) };
        // Gap piece: 2 int_0^{g/2} inner(u) du. The integrand carries the
        // u^(s-1) line singularity, integrated in w = log u.
        let piece = |g: f64| -> Complex64 {
            let hi = g / 2.0;
            let r = quad::integrate(
                |w| {
                    let u = w.exp();
                    inner(u) * u
                },
                (hi * 1e-12).ln(),
                hi.ln(),
                1e-9,
                0.0,
            );
            2.0 * r.value
        };
        let mut acc = Complex64::new(0.0, 0.0);
        // Gaps of 3^-1 C: generation k has 2^(k-1) gaps of length 3^-(k+1).
        let mut gap = 1.0 / 9.0;
        let mut count = 1.0;
        let mut mass = 1.0 / 3.0;
        while mass > 1e-10 {
            acc += count * piece(gap);
            mass *= 2.0 / 3.0;
            gap /= 3.0;
            count *= 2.0;
        }
        if !acc.re.is_finite() {
            return Err(Error::QuadratureFailure("embedded strip zeta".into()));
        }
        Ok(acc)
    }

    /// The embedding error term `E(s; 1/6)` obtained from the functional
    /// equation: `E = zeta_{A2,Omega2} - ratio * zeta_{3^-1 C, 3^-1 (0,1)}`
    /// with `ratio = sqrt(pi) Gamma((1-s)/2) / (2 Gamma((2-s)/2))`.
    pub fn error_term_via_equation(&self, s: Complex64) -> Result<Complex64> {
        let ratio = PI.sqrt() / 2.0
            * (ln_gamma((1.0 - s) / 2.0) - ln_gamma((2.0 - s) / 2.0)).exp();
        Ok(self.embedded_strip_zeta(s)? - ratio * self.scaled_string_zeta(s))
    }

    /// Direct integral for `E(s; a)`, valid on `Re s < 1`:
    /// `E = (s-2) int_a^infty t^(s-3) W(t) dt`, where `W(t)` is the measure
    /// of the embedded neighborhood in excess of the strip `0 < y < a`
    /// (one half of the symmetric complement `|y| >= a`).
    pub fn error_term_direct(&self, s: Complex64) -> Result<Complex64> {
        if s.re >= 1.0 {
            return Err(Error::AbscissaViolation {
                re_s: s.re,
                abscissa: 1.0,
            });
        }
        let a = 1.0 / 6.0;
        // W(t) = int_{Omega_x} ( sqrt(t^2 - d(x)^2) - a )_+ dx
        let w = |t: f64| -> f64 {
            let f = |d: f64| -> f64 {
                if d >= t {
                    return 0.0;
                }
                ((t * t - d * d).sqrt() - a).max(0.0)
            };
            // Exact gap decomposition of 3^-1 C in [0, 1/3].
            let mut acc = 0.0;
            let mut gap = 1.0 / 9.0;
            let mut count = 1.0;
            let mut mass = 1.0 / 3.0;
            while mass > 1e-9 {
                let (piece, _) = quad::integrate_real(f, 0.0, gap / 2.0, 1e-9, 0.0);
                acc += count * 2.0 * piece;
                mass *= 2.0 / 3.0;
                gap /= 3.0;
                count *= 2.0;
            }
            acc
        };
        // Split at T beyond which d << t and W(t) ~ (1/3)(t - a) to machine
        // precision relative to the head (sqrt(t^2-d^2) = t + O(d^2/t)).
        let t_big = 64.0;
        let head = quad::integrate(|t| ((s - 3.0) * t.ln()).exp() * w(t), a, t_big, 1e-8, 0.0);
        // int_T^inf t^(s-3) (1/3)(t - a) dt, convergent for Re s < 1.
        let tail = (1.0 / 3.0) * real_pow_c(t_big, s - 1.0) / (1.0 - s)
            + (a / 3.0) * real_pow_c(t_big, s - 2.0) / (s - 2.0);
        Ok((s - 2.0) * (head.value + tail))
    }

    /// Evaluate the dust distance zeta,
    ///
    /// ```text
    /// zeta(s) = 8 * 3^s/(3^s - 4) * ( I(s)/(6^s s) + zeta_{A2,Omega2}(s) ).
    /// ```
    ///
    /// The scaling sum runs over copies at ratios `3^-(n-1)` — the first
    /// middle cross is the unscaled generator — which the measure anchor
    /// `zeta(2) = 1` pins down. Valid right of the strip abscissa `log_3 2`
    /// (the two-dimensional quadrature of the base drums diverges below it).
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let three_s = real_pow_c(3.0, s);
        if (three_s - 4.0).norm() < 1e-10 || s.norm() < 1e-13 {
            return Err(Error::PoleHit {
                s,
                dist: (three_s - 4.0).norm().min(s.norm()),
            });
        }
        let strip_abscissa = 2.0_f64.ln() / 3.0_f64.ln();
        if s.re <= strip_abscissa + 0.05 {
            return Err(Error::AbscissaViolation {
                re_s: s.re,
                abscissa: strip_abscissa,
            });
        }
        let i_s = crate::mero::EntireFactor::CosPowQuarter.eval(s)?;
        let bracket = i_s * real_pow_c(6.0, -s) / s + self.embedded_strip_zeta(s)?;
        Ok(8.0 * three_s / (three_s - 4.0) * bracket)
    }

    /// Candidate complex dimensions inside the window, with the paper's
    /// cancellation status: the sub-lattice `log_3 2 + i p Z` and the point
    /// `D = log_3 4` are established; the nonreal points of the critical
    /// lattice and `s = 0` are candidates that may suffer zero-pole
    /// cancellation (flagged `cancelled = true`, meaning "possibly").
    pub fn candidates(&self, window: &crate::mero::Window) -> Vec<crate::mero::ComplexDimension> {
        let mut out = Vec::new();
        let p = self.period();
        let d_hi = self.dimension();
        let d_lo = 2.0_f64.ln() / 3.0_f64.ln();
        let mut push = |re: f64, im: f64, cancelled: bool, principal: bool| {
            let s = Complex64::new(re, im);
            if window.contains(s) {
                out.push(crate::mero::ComplexDimension {
                    s,
                    order: 1,
                    principal_part: vec![],
                    principal,
                    cancelled,
                });
            }
        };
        let kmax = (window.im_max / p).floor() as i64;
        for k in -kmax..=kmax {
            push(d_hi, k as f64 * p, k != 0, true);
            push(d_lo, k as f64 * p, false, false);
        }
        push(0.0, 0.0, true, false);
        out.sort_by(|a, b| a.s.re.total_cmp(&b.s.re).then(a.s.im.total_cmp(&b.s.im)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_ratio_special_values() {
        // M = 0: identically 1.
        assert_eq!(
            gamma_ratio_factor(2, 0, c(1.3, 0.5)).unwrap(),
            c(1.0, 0.0)
        );
        // M = 1 at s = N: sqrt(pi) Gamma(1)/Gamma(3/2) = 2.
        for n in [1u32, 2, 3] {
            let v = gamma_ratio_factor(n, 1, c(n as f64, 0.0)).unwrap();
            assert!((v - c(2.0, 0.0)).norm() < 1e-12, "n={n}: {v}");
        }
        // M = 2 at s = N: pi Gamma(1)/Gamma(2) = pi.
        let v = gamma_ratio_factor(2, 2, c(2.0, 0.0)).unwrap();
        assert!((v - c(PI, 0.0)).norm() < 1e-12);
        // D = N-1, M = 1: sqrt(pi) Gamma(3/2)/Gamma(2) = pi/2.
        let v = gamma_ratio_factor(2, 1, c(1.0, 0.0)).unwrap();
        assert!((v - c(PI / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_ratio_composition() {
        // ratio(N, M1+M2, s) = ratio(N, M1, s) * ratio(N+M1, M2, s).
        for &s in &[c(0.7, 0.0), c(1.3, 2.0), c(-0.5, 1.0)] {
            for (m1, m2) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2)] {
                let lhs = gamma_ratio_factor(1, m1 + m2, s).unwrap();
                let rhs = gamma_ratio_factor(1, m1, s).unwrap()
                    * gamma_ratio_factor(1 + m1, m2, s).unwrap();
                assert!(
                    (lhs - rhs).norm() <= tol::GAMMA_COMPOSE * (1.0 + rhs.norm()),
                    "s={s} M1={m1} M2={m2}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn gamma_ratio_pole_parity() {
        // M even: residues vanish for k >= M/2; M odd: all k survive.
        for k in 0..5u32 {
            let res_odd = gamma_ratio_residue(1, 1, k);
            assert!(res_odd.norm() > 1e-6, "M=1 k={k}: {res_odd}");
            let res_even = gamma_ratio_residue(1, 2, k);
            if k >= 1 {
                assert!(res_even.norm() < 1e-9, "M=2 k={k}: {res_even}");
            } else {
                assert!(res_even.norm() > 1e-6);
            }
            let res_four = gamma_ratio_residue(1, 4, k);
            if k >= 2 {
                assert!(res_four.norm() < 1e-9, "M=4 k={k}: {res_four}");
            } else {
                assert!(res_four.norm() > 1e-6);
            }
        }
        // Pole hit reporting at a surviving pole.
        assert!(matches!(
            gamma_ratio_factor(1, 1, c(3.0, 0.0)),
            Err(Error::PoleHit { .. })
        ));
    }

    #[test]
    fn segment_embedding_is_exact() {
        // A = [0,1] in R: tube(s; d) = d^(s-1)/(s-1) + 2 d^s/s.
        // Embedded: 2 delta^{s-1}/(s-1) + pi delta^s/s, exactly.
        let delta = 0.4;
        for &s in &[c(1.5, 0.0), c(1.2, 1.0), c(0.7, -2.0)] {
            let tube = |d: f64| {
                real_pow_c(d, s - 1.0) / (s - 1.0) + 2.0 * real_pow_c(d, s) / s
            };
            let lhs = embed_tube_zeta(tube, s, delta, 1).unwrap();
            let want = 2.0 * real_pow_c(delta, s - 1.0) / (s - 1.0)
                + PI * real_pow_c(delta, s) / s;
            assert!(
                (lhs - want).norm() <= 1e-9 * (1.0 + want.norm()),
                "s={s}: {lhs} vs {want}"
            );
        }
    }

    #[test]
    fn cantor_embedding_functional_equation() {
        // Tube zeta of C x {0} two ways: the tau-integral of the 1D tube
        // zeta, and the direct t-integral of the embedded tube volume.
        let (set, _) = gcs_create(2, 1.0 / 3.0).unwrap();
        let delta = 1.0 / 3.0;
        let s = c(0.9, 0.0);
        // zeta_tilde(s; d') = zeta_tilde(s; delta) - int_{d'}^{delta}; the
        // incremental form keeps the per-node quadrature short.
        let vol = |t: f64| set.tube_volume_closed(t).unwrap();
        let full = quad::integrate_tube_power(vol, s, 1.0, delta * 1e-26, delta, 1e-11).value;
        let tube_1d = |dp: f64| -> Complex64 {
            full - quad::integrate_tube_power(vol, s, 1.0, dp, delta, 1e-9).value
        };
        let via_tau = embed_tube_zeta(tube_1d, s, delta, 1).unwrap();
        let direct = quad::integrate_tube_power(
            |t| embedded_tube_volume(vol, t),
            s,
            2.0,
            delta * 1e-26,
            delta,
            1e-9,
        )
        .value;
        assert!(
            (via_tau - direct).norm() <= tol::EMBED_EQ * (1.0 + direct.norm()),
            "{via_tau} vs {direct}"
        );
    }

    #[test]
    fn embedding_error_bound() {
        // |E(s;delta)| <= 2 delta^(Re s - N) |A_delta| (pi/2 - 1) for the
        // tube-zeta error of the Cantor set, Re s < N + 1 with N = 1.
        let (set, _) = gcs_create(2, 1.0 / 3.0).unwrap();
        let delta = 1.0 / 3.0;
        let vol = |t: f64| set.tube_volume_closed(t).unwrap();
        for &s in &[c(0.9, 0.0), c(0.5, 2.0), c(1.5, -1.0)] {
            let full =
                quad::integrate_tube_power(vol, s, 1.0, delta * 1e-26, delta, 1e-11).value;
            let tube_1d = |dp: f64| -> Complex64 {
                full - quad::integrate_tube_power(vol, s, 1.0, dp, delta, 1e-9).value
            };
            let embedded = embed_tube_zeta(&tube_1d, s, delta, 1).unwrap();
            let ratio = gamma_ratio_factor(1, 1, s).unwrap();
            let err = embedded - ratio * tube_1d(delta);
            let bound = 2.0 * delta.powf(s.re - 1.0)
                * set.tube_volume_closed(delta).unwrap()
                * (PI / 2.0 - 1.0);
            assert!(
                err.norm() <= bound * 1.0001,
                "s={s}: |E| = {} bound {bound}",
                err.norm()
            );
        }
    }

    #[test]
    fn dust_error_term_routes_agree_in_strip() {
        // Overlap strip log_3 2 < Re s < 1: direct t-integral vs the
        // functional-equation route.
        let dust = DustZeta::new();
        let s = c(0.8, 0.0);
        let via_eq = dust.error_term_via_equation(s).unwrap();
        let direct = dust.error_term_direct(s).unwrap();
        assert!(
            (via_eq - direct).norm() <= 2e-4 * (1.0 + direct.norm()),
            "{via_eq} vs {direct}"
        );
    }

    #[test]
    fn dust_dimension_and_candidates() {
        let dust = DustZeta::new();
        assert!((dust.dimension() - 1.2618595071429148).abs() < 1e-12);
        let w = crate::mero::Window::new(-0.5, 2.0, 12.0).unwrap();
        let cands = dust.candidates(&w);
        // Both lattices included; the Cantor sub-lattice is uncancelled.
        let d_lo = 2.0_f64.ln() / 3.0_f64.ln();
        assert!(cands
            .iter()
            .any(|d| (d.s.re - d_lo).abs() < 1e-12 && d.s.im.abs() > 1.0 && !d.cancelled));
        assert!(cands
            .iter()
            .any(|d| (d.s.re - dust.dimension()).abs() < 1e-12 && d.principal));
    }

    #[test]
    fn embedded_average_content_matches_residue_transfer() {
        // Average content of C x {0} in the plane (Cesaro over exact
        // multiplicative periods of the embedded tube volume) against the
        // Gamma-ratio transfer of the line residue.
        let (set, inv) = gcs_create(2, 1.0 / 3.0).unwrap();
        let d = set.d;
        let expected = residue_transfer(inv.res_tube_at_d, 1, 1, d).unwrap();
        let periods = 6;
        let t_hi = set.c;
        let t_lo = set.c * set.a.powi(periods);
        let (integral, _) = quad::integrate_real(
            |tau| {
                let t = (-tau).exp();
                embedded_tube_volume(|u| set.tube_volume_closed(u).unwrap(), t)
                    * (tau * (2.0 - d)).exp()
            },
            (1.0 / t_hi).ln(),
            (1.0 / t_lo).ln(),
            1e-8,
            0.0,
        );
        let average = integral / (periods as f64 * set.period);
        assert!(
            (average - expected).abs() / expected < 0.05,
            "average {average} vs transferred residue {expected}"
        );
    }

    #[test]
    fn residue_and_kneser_transfer() {
        let res = 2.5242;
        let d = 2.0_f64.ln() / 3.0_f64.ln();
        let moved = residue_transfer(res, 1, 1, d).unwrap();
        let ratio = gamma_ratio_factor(1, 1, c(d, 0.0)).unwrap().re;
        assert!((moved - ratio * res).abs() < 1e-12);
        // Kneser normalization is embedding-invariant.
        let k1 = kneser_normalized(res, 1, d);
        let k2 = kneser_normalized(moved, 2, d);
        assert!((k1 - k2).abs() < 1e-10 * k1.abs(), "{k1} vs {k2}");
    }
}
