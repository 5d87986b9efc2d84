//! Numeric fractal zeta functions of a drum: distance-zeta quadrature
//! (exact 1D decompositions, midpoint grids with Richardson extrapolation,
//! stratified Monte Carlo), tube-volume sampling, and the tube zeta.

use crate::error::{Error, Result};
use crate::numeric::quad;
use crate::rfd::geometry::Rfd;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Integration strategy selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact 1D decomposition when available, Monte Carlo otherwise.
    Auto,
    Exact1d,
    Grid,
    MonteCarlo,
}

/// Quadrature configuration shared by the numeric routes.
#[derive(Debug, Clone, Copy)]
pub struct QuadCfg {
    pub rel_tol: f64,
    pub mc_samples: u64,
    pub seed: u64,
    pub grid_n: usize,
    pub method: Method,
}

impl Default for QuadCfg {
    fn default() -> Self {
        QuadCfg {
            rel_tol: 1e-10,
            mc_samples: 1_000_000,
            seed: 42,
            grid_n: 256,
            method: Method::Auto,
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic per-stratum generator keyed by `(seed, stratum)`.
fn stratum_rng(seed: u64, stratum: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(stratum)))
}

fn strata_per_axis(ambient: usize) -> usize {
    match ambient {
        1 => 256,
        2 => 32,
        _ => 12,
    }
}

/// `int_Omega d(x,A)^(s-N) dx` with an error estimate.
pub fn distance_zeta_numeric(rfd: &Rfd, s: Complex64, cfg: &QuadCfg) -> Result<(Complex64, f64)> {
    let method = match cfg.method {
        Method::Auto => {
            if rfd.geometry().gaps_1d().is_some() {
                Method::Exact1d
            } else {
                Method::MonteCarlo
            }
        }
        m => m,
    };
    match method {
        Method::Exact1d => zeta_exact_1d(rfd, s, cfg),
        Method::Grid => zeta_grid(rfd, s, cfg),
        Method::MonteCarlo => zeta_montecarlo(rfd, s, cfg),
        Method::Auto => unreachable!(),
    }
}

/// Adaptive Gauss-Kronrod on the exact interval decomposition. A two-sided
/// gap of length `g` contributes `2 int_0^{g/2} u^(s-1) du`, a one-sided
/// piece `int_0^l u^(s-1) du`; both integrals run in `u = log t`.
fn zeta_exact_1d(rfd: &Rfd, s: Complex64, cfg: &QuadCfg) -> Result<(Complex64, f64)> {
    let gaps = rfd
        .geometry()
        .gaps_1d()
        .ok_or_else(|| Error::UnsupportedKind("no exact 1D decomposition".into()))?;
    if s.re <= 0.0 {
        return Err(Error::NonIntegrable(s));
    }
    let piece = |len: f64| -> quad::QuadResult {
        quad::integrate_tube_power(|_| 1.0, s, 0.0, len * 1e-280, len, cfg.rel_tol)
    };
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut contributions: Vec<f64> = Vec::new();
    let mut sorted = gaps.two_sided.clone();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(g, m) in &sorted {
        let r = piece(g / 2.0);
        value += m * 2.0 * r.value;
        err += m * 2.0 * r.error;
        contributions.push(m * 2.0 * r.value.norm());
    }
    for &(l, m) in &gaps.one_sided {
        let r = piece(l);
        value += m * r.value;
        err += m * r.error;
    }
    // Divergence check: below the convergence abscissa the per-generation
    // contributions stop decaying.
    if contributions.len() >= 12 {
        let head = contributions[..3].iter().sum::<f64>() / 3.0;
        let k = contributions.len();
        let tail = contributions[k - 3..].iter().sum::<f64>() / 3.0;
        if tail > 0.5 * head {
            return Err(Error::NonIntegrable(s));
        }
    }
    Ok((value, err))
}

fn zeta_grid(rfd: &Rfd, s: Complex64, cfg: &QuadCfg) -> Result<(Complex64, f64)> {
    let n = rfd.ambient;
    let (lo, hi) = rfd.geometry().bbox();
    let sum_on_grid = |cells: usize| -> Complex64 {
        let step: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| (h - l) / cells as f64)
            .collect();
        let cellvol: f64 = step.iter().product();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; n];
        loop {
            let x: Vec<f64> = (0..n)
                .map(|k| lo[k] + (idx[k] as f64 + 0.5) * step[k])
                .collect();
            if rfd.geometry().in_region(&x) {
                let d = rfd.geometry().distance(&x);
                if d > 0.0 {
                    acc += ((s - n as f64) * d.ln()).exp();
                }
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < cells {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == n {
                    return acc * cellvol;
                }
            }
        }
    };
    let coarse = sum_on_grid(cfg.grid_n);
    let fine = sum_on_grid(cfg.grid_n * 2);
    if fine.norm() > 10.0 * coarse.norm().max(1e-300) {
        return Err(Error::NonIntegrable(s));
    }
    // Midpoint rule is second order on the smooth part.
    let extrap = fine + (fine - coarse) / 3.0;
    Ok((extrap, (fine - coarse).norm() / 3.0))
}

fn zeta_montecarlo(rfd: &Rfd, s: Complex64, cfg: &QuadCfg) -> Result<(Complex64, f64)> {
    let n = rfd.ambient;
    let (lo, hi) = rfd.geometry().bbox();
    let boxvol: f64 = lo.iter().zip(&hi).map(|(&l, &h)| h - l).product();
    let per_axis = strata_per_axis(n);
    let strata = per_axis.pow(n as u32);
    let per_stratum = (cfg.mc_samples as usize).div_ceil(strata).max(4);
    let stepvec: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| (h - l) / per_axis as f64)
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut var_acc = 0.0;
    for stratum in 0..strata {
        let mut rng = stratum_rng(cfg.seed, stratum as u64);
        let mut cell_lo = vec![0.0; n];
        let mut rem = stratum;
        for k in 0..n {
            cell_lo[k] = lo[k] + (rem % per_axis) as f64 * stepvec[k];
            rem /= per_axis;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum2 = 0.0;
        for _ in 0..per_stratum {
            let x: Vec<f64> = (0..n)
                .map(|k| cell_lo[k] + rng.gen::<f64>() * stepvec[k])
                .collect();
            let f = if rfd.geometry().in_region(&x) {
                let d = rfd.geometry().distance(&x);
                if d > 0.0 {
                    ((s - n as f64) * d.ln()).exp()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            } else {
                Complex64::new(0.0, 0.0)
            };
            sum += f;
            sum2 += f.norm_sqr();
        }
        let mean = sum / per_stratum as f64;
        let var = (sum2 / per_stratum as f64 - mean.norm_sqr()).max(0.0);
        total += mean;
        var_acc += var / per_stratum as f64;
    }
    let cellvol = boxvol / strata as f64;
    let value = total * cellvol;
    let stderr = var_acc.sqrt() * cellvol;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::QuadratureFailure("Monte Carlo overflow".into()));
    }
    Ok((value, stderr))
}

/// How a tube-sample table was produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleMethod {
    Exact,
    MonteCarlo { seed: u64, samples: u64 },
}

/// Samples `(t, |A_t ∩ Omega|)` on a grid, with per-point standard errors
/// for the Monte Carlo route.
#[derive(Debug, Clone)]
pub struct TubeSamples {
    pub pairs: Vec<(f64, f64)>,
    pub stderr: Vec<f64>,
    pub method: SampleMethod,
}

impl TubeSamples {
    /// Largest monotonicity violation beyond `k` standard errors (0 = clean).
    pub fn monotone_violation(&self, k: f64) -> f64 {
        let mut worst = 0.0_f64;
        for i in 1..self.pairs.len() {
            let slack = k * (self.stderr[i] + self.stderr[i - 1]);
            worst = worst.max(self.pairs[i - 1].1 - self.pairs[i].1 - slack);
        }
        worst
    }
}

/// Log-uniform grid of `points` values on `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1).max(1) as f64).exp())
        .collect()
}

/// Tube function `t -> |A_t ∩ Omega|` on the grid: exact where the geometry
/// provides it, stratified Monte Carlo otherwise (one distance pass serves
/// the whole grid).
pub fn tube_function_numeric(rfd: &Rfd, t_grid: &[f64], cfg: &QuadCfg) -> Result<TubeSamples> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| w[0] >= w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter(
            "t grid must be positive and ascending".into(),
        ));
    }
    if t_grid
        .iter()
        .all(|&t| rfd.geometry().tube_volume_exact(t).is_some())
    {
        let pairs: Vec<(f64, f64)> = t_grid
            .iter()
            .map(|&t| (t, rfd.geometry().tube_volume_exact(t).unwrap()))
            .collect();
        let stderr = vec![0.0; pairs.len()];
        return Ok(TubeSamples {
            pairs,
            stderr,
            method: SampleMethod::Exact,
        });
    }
    let distances = mc_distances(rfd, cfg);
    let n_tot = distances.total_samples as f64;
    let boxvol = distances.boxvol;
    let mut pairs = Vec::with_capacity(t_grid.len());
    let mut stderr = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let hits = distances.count_le(t) as f64;
        let p = hits / n_tot;
        pairs.push((t, boxvol * p));
        stderr.push(boxvol * (p * (1.0 - p) / n_tot).sqrt());
    }
    Ok(TubeSamples {
        pairs,
        stderr,
        method: SampleMethod::MonteCarlo {
            seed: cfg.seed,
            samples: distances.total_samples,
        },
    })
}

/// Sorted in-region distance sample, reusable across a whole t-grid.
pub struct DistanceSample {
    sorted: Vec<f64>,
    pub total_samples: u64,
    pub boxvol: f64,
}

impl DistanceSample {
    pub fn count_le(&self, t: f64) -> usize {
        self.sorted.partition_point(|&d| d <= t)
    }

    /// Monte Carlo tube volume at `t`.
    pub fn volume(&self, t: f64) -> f64 {
        self.boxvol * self.count_le(t) as f64 / self.total_samples as f64
    }
}

/// One stratified distance pass over the drum.
pub fn mc_distances(rfd: &Rfd, cfg: &QuadCfg) -> DistanceSample {
    let n = rfd.ambient;
    let (lo, hi) = rfd.geometry().bbox();
    let boxvol: f64 = lo.iter().zip(&hi).map(|(&l, &h)| h - l).product();
    let per_axis = strata_per_axis(n);
    let strata = per_axis.pow(n as u32);
    let per_stratum = (cfg.mc_samples as usize).div_ceil(strata).max(4);
    let stepvec: Vec<f64> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| (h - l) / per_axis as f64)
        .collect();
    let mut sorted = Vec::with_capacity(strata * per_stratum / 2);
    for stratum in 0..strata {
        let mut rng = stratum_rng(cfg.seed, stratum as u64);
        let mut cell_lo = vec![0.0; n];
        let mut rem = stratum;
        for k in 0..n {
            cell_lo[k] = lo[k] + (rem % per_axis) as f64 * stepvec[k];
            rem /= per_axis;
        }
        for _ in 0..per_stratum {
            let x: Vec<f64> = (0..n)
                .map(|k| cell_lo[k] + rng.gen::<f64>() * stepvec[k])
                .collect();
            if rfd.geometry().in_region(&x) {
                sorted.push(rfd.geometry().distance(&x));
            }
        }
    }
    sorted.sort_by(f64::total_cmp);
    DistanceSample {
        sorted,
        total_samples: (strata * per_stratum) as u64,
        boxvol,
    }
}

/// Tube zeta `int_0^delta t^(s-N-1) |A_t ∩ Omega| dt` by adaptive quadrature
/// in `u = log t` (uniform handling of the power-law endpoint).
pub fn tube_zeta_numeric(
    rfd: &Rfd,
    s: Complex64,
    delta: f64,
    cfg: &QuadCfg,
) -> Result<(Complex64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let nf = rfd.ambient as f64;
    let exact = rfd.geometry().tube_volume_exact(delta).is_some();
    let result = if exact {
        // The integrand decays like t^(Re s - D) near zero; a very deep
        // cutoff keeps the truncated mass below 1e-13 even when Re s sits
        // 0.05 above the dimension.
        let t_min = delta * 1e-280;
        quad::integrate_tube_power(
            |t| rfd.geometry().tube_volume_exact(t).unwrap_or(0.0),
            s,
            nf,
            t_min,
            delta,
            cfg.rel_tol,
        )
    } else {
        let sample = mc_distances(rfd, cfg);
        let t_min = delta * 1e-6;
        quad::integrate_tube_power(|t| sample.volume(t), s, nf, t_min, delta, 1e-8)
    };
    if !result.value.re.is_finite() || !result.value.im.is_finite() {
        return Err(Error::ToleranceUnreachable {
            tol: cfg.rel_tol,
            best: f64::INFINITY,
        });
    }
    Ok((result.value, result.error))
}

/// Numeric Mellin zeta `int_0^infty t^(s-N-1)|A_t ∩ Omega| dt` for a drum
/// with an exact tube volume that saturates at `|Omega|` beyond `t_sat`;
/// valid in the strip `dim < Re s < N`.
pub fn mellin_zeta_numeric(rfd: &Rfd, s: Complex64, t_sat: f64) -> Result<Complex64> {
    let nf = rfd.ambient as f64;
    if s.re >= nf {
        return Err(Error::AbscissaViolation {
            re_s: s.re,
            abscissa: nf,
        });
    }
    let measure = rfd
        .geometry()
        .region_measure()
        .ok_or_else(|| Error::UnsupportedKind("unknown region measure".into()))?;
    let head = quad::integrate_tube_power(
        |t| rfd.geometry().tube_volume_exact(t).unwrap_or(0.0),
        s,
        nf,
        t_sat * 1e-280,
        t_sat,
        1e-12,
    );
    // Beyond saturation the volume is constant |Omega|:
    // int_T^infty t^(s-N-1) |Omega| dt = |Omega| T^(s-N) / (N-s).
    let tail = measure * ((s - nf) * t_sat.ln()).exp() / (nf - s);
    Ok(head.value + tail)
}
