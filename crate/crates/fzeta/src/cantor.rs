//! Generalized Cantor sets `C^(m,a)`: `m` copies at ratio `a` per generation
//! inside `[0,1]`, with `ma < 1`. Closed-form tube volume and distance zeta,
//! Minkowski contents, an independent interval-merge oracle, and the
//! quasiperiodic drum construction built from them.

use crate::error::{Error, Result};
use crate::numeric::interval::union_measure;
use crate::numeric::quad;
use crate::numeric::rational::{rational_relation_scan, RelationScan};
use crate::numeric::real_pow_c;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Cap on the number of intervals the oracle may materialize.
const INTERVAL_CAP: f64 = 1.0e7;

/// A generalized Cantor set `C^(m,a)` and its derived parameters:
/// dimension `D = log_{1/a} m`, period `T = log(1/a)`, oscillatory period
/// `p = 2 pi / T`, and half-gap width `c = (1 - ma)/(2(m-1))`.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralizedCantorSet {
    pub m: u32,
    pub a: f64,
    pub d: f64,
    pub period: f64,
    pub osc_period: f64,
    pub c: f64,
    /// Largest relative deviation seen when validating the closed tube
    /// formula against the interval oracle at construction.
    pub tube_validation: f64,
}

/// Closed-form invariants of `C^(m,a)`.
#[derive(Debug, Clone, Serialize)]
pub struct CantorInvariants {
    pub d: f64,
    pub period: f64,
    pub osc_period: f64,
    /// `min G = (1/D) (2D/(1-D))^(1-D)`, the lower Minkowski content.
    pub m_lower: f64,
    /// `max G = c^(D-1) m (1-a)/(m-1)`, the upper Minkowski content.
    pub m_upper: f64,
    /// `res(zeta_A, D) = (1-ma)/(D T) * c^(D-1)`.
    pub res_distance_at_d: f64,
    /// `res(tube zeta, D) = res(zeta_A, D)/(1-D)`, the average content.
    pub res_tube_at_d: f64,
}

/// Build the set and its invariants; the closed tube formula is validated
/// against the interval oracle on a log grid before being served.
pub fn gcs_create(m: u32, a: f64) -> Result<(GeneralizedCantorSet, CantorInvariants)> {
    if m < 2 || !(a > 0.0) || !(a.is_finite()) || m as f64 * a >= 1.0 {
        return Err(Error::InvalidCantorParameters { m, a });
    }
    let mf = m as f64;
    let d = mf.ln() / (1.0 / a).ln();
    let period = (1.0 / a).ln();
    let c = (1.0 - mf * a) / (2.0 * (mf - 1.0));
    let mut set = GeneralizedCantorSet {
        m,
        a,
        d,
        period,
        osc_period: 2.0 * PI / period,
        c,
        tube_validation: 0.0,
    };
    // Oracle validation of the closed form (the geometry is ground truth).
    let mut worst = 0.0_f64;
    for k in 0..8 {
        let t = c * 0.9 * a.powf(k as f64 / 3.0);
        let closed = set.tube_volume_closed(t)?;
        let depth = set.oracle_depth_for(t);
        let oracle = set.tube_volume_oracle(t, depth)?;
        worst = worst.max((closed - oracle).abs() / (1.0 + oracle));
    }
    set.tube_validation = worst;
    let m_lower = (1.0 / d) * (2.0 * d / (1.0 - d)).powf(1.0 - d);
    let m_upper = c.powf(d - 1.0) * mf * (1.0 - a) / (mf - 1.0);
    let res_distance_at_d = (1.0 - mf * a) / (d * period) * c.powf(d - 1.0);
    let inv = CantorInvariants {
        d,
        period,
        osc_period: set.osc_period,
        m_lower,
        m_upper,
        res_distance_at_d,
        res_tube_at_d: res_distance_at_d / (1.0 - d),
    };
    Ok((set, inv))
}

impl GeneralizedCantorSet {
    /// The `m^depth` closed intervals of generation `depth`.
    ///
    /// For rational `a = p/q` the endpoints are generated as exact integer
    /// numerators over `(m-1) q^depth` (one rounding at the end), keeping
    /// the oracle trustworthy at the 1e-12 level down to deep generations;
    /// irrational ratios fall back to floating accumulation.
    pub fn intervals(&self, depth: u32) -> Result<Vec<(f64, f64)>> {
        let count = (self.m as f64).powi(depth as i32);
        if count > INTERVAL_CAP {
            return Err(Error::DepthOverflow { count });
        }
        let len = self.a.powi(depth as i32);
        if let Some((p, q)) = self.rational_ratio() {
            let denom = (self.m - 1) as f64 * q.powi(depth as i32);
            if denom < 9.0e15 {
                // start = S / ((m-1) q^depth), with the recursion
                // S_k = q S_(k-1) + i (q - p) p^(k-1) on exact integers.
                let mut nums = vec![0.0_f64];
                for k in 0..depth {
                    let scale = (q - p) * p.powi(k as i32);
                    let q_up = q.powi((depth - k - 1) as i32);
                    let mut next = Vec::with_capacity(nums.len() * self.m as usize);
                    for &s in &nums {
                        for i in 0..self.m {
                            next.push(s + i as f64 * scale * q_up);
                        }
                    }
                    nums = next;
                }
                return Ok(nums
                    .into_iter()
                    .map(|n| {
                        let s = n / denom;
                        (s, s + len)
                    })
                    .collect());
            }
        }
        let step = self.a + 2.0 * self.c; // interval + gap pitch at unit scale
        let mut starts = vec![0.0_f64];
        let mut plen = 1.0;
        for _ in 0..depth {
            let pitch = step * plen;
            plen *= self.a;
            let mut next = Vec::with_capacity(starts.len() * self.m as usize);
            for &s in &starts {
                for i in 0..self.m {
                    next.push(s + i as f64 * pitch);
                }
            }
            starts = next;
        }
        Ok(starts.into_iter().map(|s| (s, s + len)).collect())
    }

    /// `a` as an exact small fraction `p/q`, when it is one.
    fn rational_ratio(&self) -> Option<(f64, f64)> {
        let (p, q, res) = crate::numeric::rational::best_rational(self.a, 64);
        if q > 0 && res < 1e-15 && (p as f64 / q as f64 - self.a).abs() < 1e-15 {
            Some((p as f64, q as f64))
        } else {
            None
        }
    }

    /// Exact distance from `x` to the set.
    pub fn distance(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return -x;
        }
        if x >= 1.0 {
            return x - 1.0;
        }
        let gap = 2.0 * self.c;
        let mut len = 1.0;
        let mut pos = x;
        loop {
            let pitch = (self.a + gap) * len;
            let i = (pos / pitch).floor().min(self.m as f64 - 1.0);
            let offset = pos - i * pitch;
            let sub = self.a * len;
            if offset <= sub {
                len = sub;
                pos = offset;
                if len < 1e-25 {
                    return 0.0;
                }
            } else {
                return (offset - sub).min(pitch - offset);
            }
        }
    }

    /// Smallest depth `k` with `a^k < t/10`, the oracle's resolution rule.
    pub fn oracle_depth_for(&self, t: f64) -> u32 {
        let mut depth = 0u32;
        let mut len = 1.0;
        while len >= t / 10.0 && depth < 64 {
            len *= self.a;
            depth += 1;
        }
        depth
    }

    /// `|C_t|` from the closed form: `1 + 2t` in the saturated regime
    /// `t >= c`, otherwise `m^n a^n + 2 t m^n` on the branch
    /// `t in [c a^n, c a^(n-1))`, which equals `t^(1-D) G(log 1/t)`.
    pub fn tube_volume_closed(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveT(t));
        }
        if t >= self.c {
            return Ok(1.0 + 2.0 * t);
        }
        let mut n = ((self.c / t).ln() / (1.0 / self.a).ln()).ceil();
        // Guard against boundary rounding: enforce c a^n <= t < c a^(n-1).
        while self.c * self.a.powf(n) > t {
            n += 1.0;
        }
        while n > 1.0 && self.c * self.a.powf(n - 1.0) <= t {
            n -= 1.0;
        }
        let man = (self.m as f64 * self.a).powf(n);
        let mn = (self.m as f64).powf(n);
        Ok(man + 2.0 * t * mn)
    }

    /// `|C_t|` by fattening the generation-`depth` intervals by `t` and
    /// merging; exact when the unresolved gaps are below `t`.
    /// `clip` restricts to a window (for relative tube volumes).
    ///
    /// For rational ratios the sweep runs on the exact integer numerators of
    /// the endpoints, so each merged cluster costs one rounding; otherwise a
    /// plain float sweep is used.
    pub fn tube_volume_oracle_clipped(
        &self,
        t: f64,
        depth: u32,
        clip: Option<(f64, f64)>,
    ) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveT(t));
        }
        if t < 0.5 && self.a.powi(depth as i32) >= t / 10.0 {
            return Err(Error::InsufficientDepth { depth, t });
        }
        if let Some((p, q)) = self.rational_ratio() {
            let denom = (self.m - 1) as f64 * q.powi(depth as i32);
            if denom < 9.0e15 {
                return self.oracle_rational(t, depth, clip, p, q, denom);
            }
        }
        let fattened: Vec<(f64, f64)> = self
            .intervals(depth)?
            .into_iter()
            .map(|(lo, hi)| match clip {
                Some((wlo, whi)) => ((lo - t).max(wlo), (hi + t).min(whi)),
                None => (lo - t, hi + t),
            })
            .collect();
        Ok(union_measure(&fattened))
    }

    fn oracle_rational(
        &self,
        t: f64,
        depth: u32,
        clip: Option<(f64, f64)>,
        p: f64,
        q: f64,
        denom: f64,
    ) -> Result<f64> {
        // Integer start numerators, ascending by construction.
        let mut nums = vec![0.0_f64];
        for k in 0..depth {
            let scale = (q - p) * p.powi(k as i32);
            let q_up = q.powi((depth - k - 1) as i32);
            let mut next = Vec::with_capacity(nums.len() * self.m as usize);
            for &s in &nums {
                for i in 0..self.m {
                    next.push(s + i as f64 * scale * q_up);
                }
            }
            nums = next;
        }
        let len_num = (self.m - 1) as f64 * p.powi(depth as i32);
        let merge_threshold = 2.0 * t * denom;
        // Sweep: clusters of intervals whose fattened copies overlap.
        let mut clusters: Vec<(f64, f64)> = Vec::new();
        let mut cur = (nums[0], nums[0] + len_num);
        for &s in &nums[1..] {
            if s - cur.1 <= merge_threshold {
                cur.1 = s + len_num;
            } else {
                clusters.push(cur);
                cur = (s, s + len_num);
            }
        }
        clusters.push(cur);
        let mut total = 0.0;
        for &(s_lo, s_hi) in &clusters {
            match clip {
                None => total += (s_hi - s_lo) / denom + 2.0 * t,
                Some((wlo, whi)) => {
                    let lo = (s_lo / denom - t).max(wlo);
                    let hi = (s_hi / denom + t).min(whi);
                    total += (hi - lo).max(0.0);
                }
            }
        }
        Ok(total)
    }

    /// Unclipped tube volume `|C_t|`.
    pub fn tube_volume_oracle(&self, t: f64, depth: u32) -> Result<f64> {
        self.tube_volume_oracle_clipped(t, depth, None)
    }

    /// Distance zeta of the set relative to `(-delta, 1+delta)`, `delta >= c`:
    /// `c^(s-1) (1-ma) / (s (1-m a^s)) + 2 delta^s / s`.
    pub fn distance_zeta_closed(&self, delta: f64, s: Complex64) -> Result<Complex64> {
        if delta < self.c {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} must be >= c = {}",
                self.c
            )));
        }
        let dist = self.pole_distance(s);
        if dist < crate::tol::POLE_HIT {
            return Err(Error::PoleHit { s, dist });
        }
        let mf = self.m as f64;
        let inner = real_pow_c(self.c, s - 1.0) * (1.0 - mf * self.a)
            / (s * (1.0 - mf * real_pow_c(self.a, s)));
        let outer = 2.0 * real_pow_c(delta, s) / s;
        Ok(inner + outer)
    }

    /// Distance from `s` to the pole set `{0} union (D + i p Z)`.
    pub fn pole_distance(&self, s: Complex64) -> f64 {
        let d0 = s.norm();
        let k = (s.im / self.osc_period).round();
        let lattice = Complex64::new(self.d, k * self.osc_period);
        d0.min((s - lattice).norm())
    }

    /// min/max of `G(tau) = |C_t| / t^(1-D)` over one multiplicative period,
    /// located exactly from the single closed-form branch.
    pub fn normalized_tube_extrema(&self) -> (f64, f64) {
        let g = |t: f64| self.tube_volume_closed(t).unwrap() / t.powf(1.0 - self.d);
        // Branch n = 1 covers t in [c a, c]; the one interior critical point
        // of (m a + 2 m t) t^(D-1) sits at t* = a (1-D) / (2 D).
        let mut candidates = vec![self.c * self.a, self.c];
        let t_star = self.a * (1.0 - self.d) / (2.0 * self.d);
        if t_star > self.c * self.a && t_star < self.c {
            candidates.push(t_star);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &t in &candidates {
            let v = g(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Average Minkowski content `(1/T) int_0^T G(tau) d tau` computed by
    /// quadrature of the tube volume over one period.
    pub fn average_content_numeric(&self) -> f64 {
        let lo = (1.0 / self.c).ln();
        let hi = lo + self.period;
        let (val, _) = quad::integrate_real(
            |tau| {
                let t = (-tau).exp();
                self.tube_volume_closed(t).unwrap() * (tau * (1.0 - self.d)).exp()
            },
            lo,
            hi,
            1e-13,
            0.0,
        );
        val / self.period
    }

    /// Cesaro average of `|C_t|/t^(1-D)` over `t in (1/tau_max, t_hi)`,
    /// the estimator form of the average content, using the oracle.
    pub fn average_content_cesaro(&self, t_lo: f64, t_hi: f64) -> Result<f64> {
        let lo = (1.0 / t_hi).ln();
        let hi = (1.0 / t_lo).ln();
        let (val, _) = quad::integrate_real(
            |tau| {
                let t = (-tau).exp();
                let depth = self.oracle_depth_for(t);
                self.tube_volume_oracle(t, depth).unwrap() * (tau * (1.0 - self.d)).exp()
            },
            lo,
            hi,
            1e-10,
            0.0,
        );
        Ok(val / (hi - lo))
    }
}

/// How the interval lengths of a quasiperiodic drum are chosen.
#[derive(Debug, Clone)]
pub enum OmegaRule {
    /// `c_i = 2^-i`.
    TwoPowNegI,
    /// Explicit summable weights.
    Custom(Vec<f64>),
}

/// A finite truncation of the quasiperiodic drum: disjoint scaled copies of
/// `C^(m_i, a_i)` with `m_i` the first `n` primes and `a_i = m_i^(-1/D)`.
///
/// Every point of the constructed singularity lattice
/// `union_i (D + (2 pi / T_i) i Z)` is a nonremovable singularity of the
/// distance zeta function; the full critical line is asserted by the
/// construction (maximal hyperfractality) but only the countable lattice is
/// exhibited here.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiperiodicDrum {
    pub n: usize,
    pub d: f64,
    pub m_list: Vec<u64>,
    pub a_list: Vec<f64>,
    pub omega_lengths: Vec<f64>,
    /// Quasiperiods `T_i = log(m_i) / D`, strictly increasing.
    pub quasiperiods: Vec<f64>,
    /// Oscillatory periods `2 pi / T_i` of the component lattices.
    pub lattice_periods: Vec<f64>,
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut cand = 2u64;
    while primes.len() < n {
        if primes.iter().all(|&p| !cand.is_multiple_of(p)) {
            primes.push(cand);
        }
        cand += 1;
    }
    primes
}

/// Build the truncated quasiperiodic drum for a target dimension `D`.
pub fn quasiperiodic_drum_build(
    d: f64,
    n: usize,
    c1: f64,
    rule: &OmegaRule,
) -> Result<QuasiperiodicDrum> {
    if !(0.0 < d && d < 1.0) {
        return Err(Error::InvalidParameter(format!("D = {d} must lie in (0,1)")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1 components".into()));
    }
    if !(c1 > 0.0) {
        return Err(Error::InvalidParameter("C1 must be positive".into()));
    }
    let m_list = first_primes(n);
    let weights: Vec<f64> = match rule {
        OmegaRule::TwoPowNegI => (1..=n).map(|i| 2f64.powi(-(i as i32))).collect(),
        OmegaRule::Custom(w) => {
            if w.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            w.clone()
        }
    };
    let mut a_list = Vec::with_capacity(n);
    let mut omega_lengths = Vec::with_capacity(n);
    let mut quasiperiods = Vec::with_capacity(n);
    for (&m, &ci) in m_list.iter().zip(&weights) {
        let mf = m as f64;
        let a = mf.powf(-1.0 / d);
        if mf * a >= 1.0 {
            return Err(Error::InvalidCantorParameters { m: m as u32, a });
        }
        a_list.push(a);
        omega_lengths.push(c1 * mf.powf(1.0 - 1.0 / d) * ci.powf(1.0 / d));
        quasiperiods.push(mf.ln() / d);
    }
    let lattice_periods = quasiperiods.iter().map(|t| 2.0 * PI / t).collect();
    Ok(QuasiperiodicDrum {
        n,
        d,
        m_list,
        a_list,
        omega_lengths,
        quasiperiods,
        lattice_periods,
    })
}

impl QuasiperiodicDrum {
    /// The constructed singularity lattice truncated to `|Im s| <= im_max`,
    /// sorted by (component, k).
    pub fn singularity_lattice(&self, im_max: f64) -> Vec<Complex64> {
        let mut out = Vec::new();
        for &p in &self.lattice_periods {
            let kmax = (im_max / p).floor() as i64;
            for k in -kmax..=kmax {
                out.push(Complex64::new(self.d, k as f64 * p));
            }
        }
        out.sort_by(|x, y| x.im.total_cmp(&y.im).then(x.re.total_cmp(&y.re)));
        out.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
        out
    }

    /// Rational-independence certificate for `{log m_i}` up to `q_max`.
    pub fn independence_certificate(&self, q_max: i64) -> RelationScan {
        let logs: Vec<f64> = self.m_list.iter().map(|&m| (m as f64).ln()).collect();
        rational_relation_scan(&logs, q_max)
    }
}

/// Re-export of the bounded integer-relation scan (certificate of absence up
/// to the bound, not a proof).
pub fn relation_scan(xs: &[f64], q_max: i64) -> RelationScan {
    rational_relation_scan(xs, q_max)
}
