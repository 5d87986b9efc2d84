//! Box-dimension fits and Minkowski content estimators on tube samples.
//!
//! The relative box dimension is estimated from the log-log slope of the
//! tube volume, `|A_t ∩ Omega| ~ t^(N-D)`; the upper/lower variants come
//! from extremal slopes over sliding half-decade windows, and contents from
//! the normalized volume `|A_t ∩ Omega| / (t^(N-D) h(t))` with the power-log
//! gauge `h(t) = (log 1/t)^m`.

use crate::error::{Error, Result};
use crate::rfd::zeta::TubeSamples;
use serde::Serialize;

/// Fit range policy (defaults per geometry class: `[1e-6, 1e-1]` for exact
/// 1D tube functions, `[1e-3, 1e-1]` for sampled 2D/3D ones).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitRange {
    pub t_min: f64,
    pub t_max: f64,
}

impl FitRange {
    pub fn exact_1d() -> Self {
        FitRange {
            t_min: 1e-6,
            t_max: 1e-1,
        }
    }
    pub fn sampled() -> Self {
        FitRange {
            t_min: 1e-3,
            t_max: 1e-1,
        }
    }
}

/// Result of a box-dimension fit.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionFit {
    pub d: f64,
    pub d_lower: f64,
    pub d_upper: f64,
    pub slope: f64,
    pub slope_stderr: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub residual_rms: f64,
    pub points: usize,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = if xs.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, stderr, (ss_res / n).sqrt())
}

/// Least-squares slope of `log V` against `log t` over the selected range;
/// `D = N - slope`. Upper/lower variants use the extremal slopes over
/// sliding half-decade windows.
pub fn box_dimension_fit(
    samples: &TubeSamples,
    ambient: usize,
    range: FitRange,
) -> Result<DimensionFit> {
    // The precondition is on the input table: at least 8 positive samples
    // spanning 3 decades. The fit itself runs over the selected range.
    let input: Vec<f64> = samples
        .pairs
        .iter()
        .filter(|&&(_, v)| v > 0.0)
        .map(|&(t, _)| t)
        .collect();
    let input_span = if input.is_empty() {
        0.0
    } else {
        (input.last().unwrap() / input[0]).log10()
    };
    if input.len() < 8 || input_span < 3.0 - 1e-12 {
        return Err(Error::InsufficientRange {
            need: 8,
            decades: 3.0,
            got: input.len(),
            span: input_span,
        });
    }
    let pts: Vec<(f64, f64)> = samples
        .pairs
        .iter()
        .filter(|&&(t, v)| t >= range.t_min && t <= range.t_max && v > 0.0)
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 8 {
        return Err(Error::InsufficientRange {
            need: 8,
            decades: 3.0,
            got: pts.len(),
            span: input_span,
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, slope_stderr, residual_rms) = least_squares(&xs, &ys);
    let nf = ambient as f64;
    // Sliding half-decade windows for the upper/lower dimensions.
    let half_decade = 0.5 * std::f64::consts::LN_10;
    let mut slope_min = f64::INFINITY;
    let mut slope_max = f64::NEG_INFINITY;
    for i in 0..xs.len() {
        let hi = xs[i] + half_decade;
        let wx: Vec<f64> = xs.iter().copied().filter(|&x| x >= xs[i] && x <= hi).collect();
        if wx.len() < 3 {
            continue;
        }
        let wy: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .filter(|(&x, _)| x >= xs[i] && x <= hi)
            .map(|(_, &y)| y)
            .collect();
        let (w_slope, _, _) = least_squares(&wx, &wy);
        slope_min = slope_min.min(w_slope);
        slope_max = slope_max.max(w_slope);
    }
    if !slope_min.is_finite() {
        slope_min = slope;
        slope_max = slope;
    }
    let d = nf - slope;
    let d_upper = (nf - slope_min).min(nf);
    let d_lower = (nf - slope_max).min(d_upper);
    Ok(DimensionFit {
        d,
        d_lower,
        d_upper,
        slope,
        slope_stderr,
        t_min: range.t_min,
        t_max: range.t_max,
        residual_rms,
        points: pts.len(),
    })
}

/// Slopes over consecutive half-decade windows (coarse-to-fine), used for
/// the flatness diagnostic where no single dimension stabilizes.
pub fn window_slopes(samples: &TubeSamples) -> Vec<(f64, f64)> {
    let half_decade = 0.5 * std::f64::consts::LN_10;
    let pts: Vec<(f64, f64)> = samples
        .pairs
        .iter()
        .filter(|&&(_, v)| v > 0.0)
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    let mut out = Vec::new();
    if pts.is_empty() {
        return out;
    }
    let mut lo = pts[0].0;
    let hi_all = pts.last().unwrap().0;
    while lo < hi_all {
        let hi = lo + half_decade;
        let wx: Vec<f64> = pts.iter().filter(|p| p.0 >= lo && p.0 <= hi).map(|p| p.0).collect();
        let wy: Vec<f64> = pts.iter().filter(|p| p.0 >= lo && p.0 <= hi).map(|p| p.1).collect();
        if wx.len() >= 3 {
            let (slope, _, _) = least_squares(&wx, &wy);
            out.push(((lo + 0.25 * half_decade).exp(), slope));
        }
        lo = hi;
    }
    out
}

/// Lower/upper/average Minkowski contents from tube samples.
#[derive(Debug, Clone, Serialize)]
pub struct ContentEstimate {
    pub lower: f64,
    pub upper: f64,
    pub average: f64,
    pub gauge_m: u32,
    pub degenerate: bool,
}

/// Contents against the gauge `h(t) = (log 1/t)^m`: lower/upper are the
/// extrema of `V/(t^(N-D) h)` over the smallest sampled decade, the average
/// is the multiplicative Cesaro mean of `V/t^(N-D)` over the whole range.
pub fn minkowski_content_estimate(
    samples: &TubeSamples,
    ambient: usize,
    d: f64,
    gauge_m: u32,
) -> Result<ContentEstimate> {
    let nf = ambient as f64;
    let degenerate = (d - nf).abs() < 1e-12;
    if degenerate && gauge_m > 0 {
        return Err(Error::DegenerateD(d));
    }
    if samples.pairs.is_empty() {
        return Err(Error::InvalidParameter("no tube samples".into()));
    }
    let h = |t: f64| (1.0 / t).ln().powi(gauge_m as i32);
    let normalized = |t: f64, v: f64| v / (t.powf(nf - d) * h(t));
    let t0 = samples.pairs[0].0;
    let mut lower = f64::INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for &(t, v) in samples.pairs.iter().filter(|&&(t, _)| t <= 10.0 * t0) {
        let g = normalized(t, v);
        lower = lower.min(g);
        upper = upper.max(g);
    }
    // Cesaro mean (1/log tau) int V/t^(N-D) dt/t by trapezoid in log t
    // (no gauge in the average, per the definition).
    let mut acc = 0.0;
    let mut span = 0.0;
    for w in samples.pairs.windows(2) {
        let (t1, v1) = w[0];
        let (t2, v2) = w[1];
        let g1 = v1 / t1.powf(nf - d);
        let g2 = v2 / t2.powf(nf - d);
        let dlog = (t2 / t1).ln();
        acc += 0.5 * (g1 + g2) * dlog;
        span += dlog;
    }
    Ok(ContentEstimate {
        lower,
        upper,
        average: acc / span,
        gauge_m,
        degenerate,
    })
}
