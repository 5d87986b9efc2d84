//! Geometry strategies for relative fractal drums: an exact distance oracle
//! `x -> d(x, A)` plus a region indicator with bounding box, behind a common
//! trait so the quadrature and sampling code is generic over the shape.
//!
//! Every oracle is exact (closed-form distances to points, segments, circles
//! and interval unions); where the tube volume `|A_t ∩ Omega|` has a closed
//! form it is exposed as well, and 1D geometries expose their exact gap
//! decomposition.

use crate::cantor::{gcs_create, GeneralizedCantorSet};
use crate::error::{Error, Result};
use crate::numeric::quad;
use crate::numeric::real_pow_c;
use crate::strings::FractalString;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Exact 1D decomposition of a drum into gap pieces.
///
/// A two-sided piece of length `g` has boundary points of `A` at both ends
/// (distance profile `min(u, g-u)`); a one-sided piece of length `l` touches
/// `A` at one end only.
#[derive(Debug, Clone, Default)]
pub struct Gaps1d {
    pub two_sided: Vec<(f64, f64)>,
    pub one_sided: Vec<(f64, f64)>,
}

impl Gaps1d {
    /// Exact distance zeta `int d(x,A)^(s-1) dx` of the decomposition.
    pub fn zeta(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(g, m) in &self.two_sided {
            acc += m * 2.0 * real_pow_c(g / 2.0, s) / s;
        }
        for &(l, m) in &self.one_sided {
            acc += m * real_pow_c(l, s) / s;
        }
        acc
    }

    /// Exact tube volume `|A_t ∩ Omega|`.
    pub fn tube_volume(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &(g, m) in &self.two_sided {
            acc += m * g.min(2.0 * t);
        }
        for &(l, m) in &self.one_sided {
            acc += m * l.min(t);
        }
        acc
    }

    pub fn measure(&self) -> f64 {
        self.two_sided.iter().map(|&(g, m)| g * m).sum::<f64>()
            + self.one_sided.iter().map(|&(l, m)| l * m).sum::<f64>()
    }

    pub fn scaled(&self, lambda: f64) -> Gaps1d {
        Gaps1d {
            two_sided: self.two_sided.iter().map(|&(g, m)| (g * lambda, m)).collect(),
            one_sided: self.one_sided.iter().map(|&(l, m)| (l * lambda, m)).collect(),
        }
    }
}

/// A geometry strategy: ambient dimension, exact distance oracle, region
/// indicator with bounding box, and optional exact structure.
pub trait Geometry: Send + Sync {
    fn ambient(&self) -> usize;
    fn distance(&self, x: &[f64]) -> f64;
    fn in_region(&self, x: &[f64]) -> bool;
    /// Axis-aligned box covering the region.
    fn bbox(&self) -> (Vec<f64>, Vec<f64>);
    /// Exact region measure, when known.
    fn region_measure(&self) -> Option<f64> {
        None
    }
    /// Exact 1D gap decomposition, when available.
    fn gaps_1d(&self) -> Option<Gaps1d> {
        None
    }
    /// Closed-form `|A_t ∩ Omega|`, when available.
    fn tube_volume_exact(&self, _t: f64) -> Option<f64> {
        None
    }
}

/// A relative fractal drum: label, ambient dimension, geometry strategy.
#[derive(Clone)]
pub struct Rfd {
    pub label: String,
    pub ambient: usize,
    geom: Arc<dyn Geometry>,
}

impl std::fmt::Debug for Rfd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Rfd({}, N={})", self.label, self.ambient)
    }
}

impl Rfd {
    pub fn from_geometry(label: impl Into<String>, geom: Arc<dyn Geometry>) -> Self {
        let ambient = geom.ambient();
        Rfd {
            label: label.into(),
            ambient,
            geom,
        }
    }

    pub fn geometry(&self) -> &dyn Geometry {
        self.geom.as_ref()
    }

    pub fn geometry_arc(&self) -> Arc<dyn Geometry> {
        Arc::clone(&self.geom)
    }

    /// The scaled drum `(lambda A, lambda Omega)`.
    pub fn scaled(&self, lambda: f64) -> Result<Rfd> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveScale(lambda));
        }
        Ok(Rfd::from_geometry(
            format!("{}*{}", lambda, self.label),
            Arc::new(ScaledGeom {
                inner: Arc::clone(&self.geom),
                lambda,
            }),
        ))
    }

    /// Disjoint union of drums; the regions must be disjoint and satisfy the
    /// distance-compatibility condition (each region sees only its own set),
    /// which is spot-checked on a deterministic sample.
    pub fn union(parts: &[Rfd]) -> Result<Rfd> {
        if parts.is_empty() {
            return Err(Error::IncompatibleUnion("empty union".into()));
        }
        let ambient = parts[0].ambient;
        if parts.iter().any(|p| p.ambient != ambient) {
            return Err(Error::IncompatibleUnion("mixed ambient dimensions".into()));
        }
        let geoms: Vec<Arc<dyn Geometry>> = parts.iter().map(|p| Arc::clone(&p.geom)).collect();
        let union = UnionGeom { parts: geoms };
        // Compatibility spot-check: within each part's region, the union
        // distance must coincide with that part's own distance.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x666f6c64);
        for (i, part) in parts.iter().enumerate() {
            let (lo, hi) = part.geom.bbox();
            let mut checked = 0;
            let mut tries = 0;
            while checked < 64 && tries < 100_000 {
                tries += 1;
                let x: Vec<f64> = lo
                    .iter()
                    .zip(&hi)
                    .map(|(&l, &h)| rng.gen_range(l..h))
                    .collect();
                if !part.geom.in_region(&x) {
                    continue;
                }
                checked += 1;
                let own = part.geom.distance(&x);
                let all = union.distance(&x);
                if (own - all).abs() > 1e-9 * (1.0 + own) {
                    return Err(Error::IncompatibleUnion(format!(
                        "part {i} at {x:?}: own distance {own}, union distance {all}"
                    )));
                }
            }
        }
        let label = parts
            .iter()
            .map(|p| p.label.as_str())
            .collect::<Vec<_>>()
            .join("|");
        Ok(Rfd::from_geometry(label, Arc::new(union)))
    }

    /// Largest Lipschitz violation `|d(x)-d(y)| - |x-y|` over `pairs` random
    /// pairs in the bounding box (should be <= 0 up to roundoff).
    pub fn lipschitz_spot_check(&self, pairs: usize, seed: u64) -> f64 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = self.geom.bbox();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..pairs {
            let x: Vec<f64> = lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| rng.gen_range(l..h))
                .collect();
            let y: Vec<f64> = lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| rng.gen_range(l..h))
                .collect();
            let dx = self.geom.distance(&x);
            let dy = self.geom.distance(&y);
            let sep: f64 = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            worst = worst.max((dx - dy).abs() - sep * (1.0 + 1e-12));
        }
        worst
    }
}

struct ScaledGeom {
    inner: Arc<dyn Geometry>,
    lambda: f64,
}

impl Geometry for ScaledGeom {
    fn ambient(&self) -> usize {
        self.inner.ambient()
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|&v| v / self.lambda).collect();
        self.lambda * self.inner.distance(&y)
    }
    fn in_region(&self, x: &[f64]) -> bool {
        let y: Vec<f64> = x.iter().map(|&v| v / self.lambda).collect();
        self.inner.in_region(&y)
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.inner.bbox();
        (
            lo.iter().map(|&v| v * self.lambda).collect(),
            hi.iter().map(|&v| v * self.lambda).collect(),
        )
    }
    fn region_measure(&self) -> Option<f64> {
        self.inner
            .region_measure()
            .map(|m| m * self.lambda.powi(self.ambient() as i32))
    }
    fn gaps_1d(&self) -> Option<Gaps1d> {
        self.inner.gaps_1d().map(|g| g.scaled(self.lambda))
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        self.inner
            .tube_volume_exact(t / self.lambda)
            .map(|v| v * self.lambda.powi(self.ambient() as i32))
    }
}

struct UnionGeom {
    parts: Vec<Arc<dyn Geometry>>,
}

impl Geometry for UnionGeom {
    fn ambient(&self) -> usize {
        self.parts[0].ambient()
    }
    fn distance(&self, x: &[f64]) -> f64 {
        self.parts
            .iter()
            .map(|p| p.distance(x))
            .fold(f64::INFINITY, f64::min)
    }
    fn in_region(&self, x: &[f64]) -> bool {
        self.parts.iter().any(|p| p.in_region(x))
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.ambient()];
        let mut hi = vec![f64::NEG_INFINITY; self.ambient()];
        for p in &self.parts {
            let (l, h) = p.bbox();
            for i in 0..lo.len() {
                lo[i] = lo[i].min(l[i]);
                hi[i] = hi[i].max(h[i]);
            }
        }
        (lo, hi)
    }
    fn region_measure(&self) -> Option<f64> {
        self.parts.iter().map(|p| p.region_measure()).sum()
    }
    fn gaps_1d(&self) -> Option<Gaps1d> {
        let mut out = Gaps1d::default();
        for p in &self.parts {
            let g = p.gaps_1d()?;
            out.two_sided.extend(g.two_sided);
            out.one_sided.extend(g.one_sided);
        }
        Some(out)
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        self.parts.iter().map(|p| p.tube_volume_exact(t)).sum()
    }
}

/// Generalized Cantor set `C^(m,a)` relative to `(-delta, 1+delta)`
/// (`delta = 0` gives the canonical `(C, (0,1))` drum).
pub struct CantorSetGeom {
    pub set: GeneralizedCantorSet,
    pub delta: f64,
}

impl CantorSetGeom {
    pub fn new(m: u32, a: f64, delta: f64) -> Result<Self> {
        let (set, _) = gcs_create(m, a)?;
        Ok(CantorSetGeom { set, delta })
    }
}

impl Geometry for CantorSetGeom {
    fn ambient(&self) -> usize {
        1
    }
    fn distance(&self, x: &[f64]) -> f64 {
        self.set.distance(x[0])
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x[0] > -self.delta && x[0] < 1.0 + self.delta
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![-self.delta], vec![1.0 + self.delta])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(1.0 + 2.0 * self.delta)
    }
    fn gaps_1d(&self) -> Option<Gaps1d> {
        // Generations are listed until the unresolved mass (ma)^k drops
        // below 1e-12 of the unit interval.
        let m = self.set.m as f64;
        let mut two_sided = Vec::new();
        let mut gap = 2.0 * self.set.c;
        let mut count = m - 1.0;
        let mut mass_left = 1.0;
        while mass_left >= 1e-12 {
            two_sided.push((gap, count));
            mass_left *= m * self.set.a;
            gap *= self.set.a;
            count *= m;
        }
        let one_sided = if self.delta > 0.0 {
            vec![(self.delta, 2.0)]
        } else {
            Vec::new()
        };
        Some(Gaps1d {
            two_sided,
            one_sided,
        })
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        // |C_t| includes outer collars of width t; the region truncates them
        // at delta.
        let full = self.set.tube_volume_closed(t).ok()?;
        Some(full - 2.0 * t + 2.0 * t.min(self.delta))
    }
}

/// Canonical geometric realization of a fractal string: `A = {a_j}` with
/// `a_j = sum_{k>=j} l_k` and `Omega = (0, a_1) \ A`. Reading from the left,
/// the gaps appear in ascending length order, so equal lengths form
/// arithmetic runs of boundary points; distances are resolved per run.
pub struct StringGeom {
    /// Runs of points `start + i*step`, `i = 1..=count`, ascending.
    runs: Vec<(f64, f64, u64)>,
    gaps: Gaps1d,
    total: f64,
}

impl StringGeom {
    pub fn new(string: &FractalString) -> Self {
        let mat = string.materialize(1e-9);
        let mut entries: Vec<(f64, f64)> = mat.entries().to_vec();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0)); // ascending lengths
        let explicit: f64 = entries.iter().map(|&(l, m)| l * m).sum();
        let remainder = (string.total_length() - explicit).max(0.0);
        let mut gaps = Gaps1d::default();
        let mut runs = Vec::with_capacity(entries.len());
        let mut pos = remainder;
        for &(len, mult) in &entries {
            gaps.two_sided.push((len, mult));
            let count = mult.round() as u64;
            runs.push((pos, len, count));
            pos += len * count as f64;
        }
        if remainder > 0.0 {
            gaps.one_sided.push((remainder, 1.0));
        }
        StringGeom {
            runs,
            gaps,
            total: pos,
        }
    }
}

impl Geometry for StringGeom {
    fn ambient(&self) -> usize {
        1
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let x = x[0];
        if self.runs.is_empty() {
            return x.abs();
        }
        let first = self.runs[0].0 + self.runs[0].1;
        if x <= first {
            // Below the first explicit point: the set accumulates at 0 but
            // only the run boundary at `remainder` is materialized.
            return (first - x).min((x - self.runs[0].0).abs());
        }
        if x >= self.total {
            return x - self.total;
        }
        // Find the run whose span contains x; candidates are the nearest
        // points of that run and the boundary points of its neighbors.
        let idx = self
            .runs
            .partition_point(|&(start, step, count)| start + step * (count as f64) < x)
            .min(self.runs.len() - 1);
        let mut best = f64::INFINITY;
        for j in idx.saturating_sub(1)..=(idx + 1).min(self.runs.len() - 1) {
            let (start, step, count) = self.runs[j];
            let i = ((x - start) / step).round().clamp(1.0, count as f64);
            best = best.min((x - (start + i * step)).abs());
            best = best.min((x - start).abs());
            best = best.min((x - (start + count as f64 * step)).abs());
        }
        best
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x[0] > 0.0 && x[0] < self.total
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0], vec![self.total])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(self.total)
    }
    fn gaps_1d(&self) -> Option<Gaps1d> {
        Some(self.gaps.clone())
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        Some(self.gaps.tube_volume(t))
    }
}

/// Ball drum `(S^(N-1)_R, B_R)`: the boundary sphere relative to the open ball.
pub struct BallGeom {
    pub n: usize,
    pub radius: f64,
}

/// Volume of the unit ball in dimension `n` (n = 1, 2, 3).
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => unreachable!("ambient dimension restricted to 1..=3"),
    }
}

impl Geometry for BallGeom {
    fn ambient(&self) -> usize {
        self.n
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        (self.radius - r).abs()
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x.iter().map(|v| v * v).sum::<f64>() < self.radius * self.radius
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![-self.radius; self.n], vec![self.radius; self.n])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(unit_ball_volume(self.n) * self.radius.powi(self.n as i32))
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        // R^N - (R-t)^N in product form: the difference of powers loses all
        // precision for t below machine epsilon.
        let v = unit_ball_volume(self.n);
        let r = self.radius;
        let t = t.min(r);
        let vol = match self.n {
            1 => t,
            2 => t * (2.0 * r - t),
            _ => t * (3.0 * r * r - 3.0 * r * t + t * t),
        };
        Some(v * vol)
    }
}

/// Solid torus drum `(partial Omega, Omega)` with radii `R > r`.
pub struct TorusGeom {
    pub big_r: f64,
    pub small_r: f64,
}

impl Geometry for TorusGeom {
    fn ambient(&self) -> usize {
        3
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let dc = ((rho - self.big_r).powi(2) + x[2] * x[2]).sqrt();
        (self.small_r - dc).abs()
    }
    fn in_region(&self, x: &[f64]) -> bool {
        let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
        (rho - self.big_r).powi(2) + x[2] * x[2] < self.small_r * self.small_r
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let out = self.big_r + self.small_r;
        (vec![-out, -out, -self.small_r], vec![out, out, self.small_r])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(2.0 * PI * PI * self.big_r * self.small_r * self.small_r)
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        // Cavalieri: |A_t ∩ Omega| = 2 pi R (2 r t - t^2) for t <= r.
        let t = t.min(self.small_r);
        Some(2.0 * PI * self.big_r * (2.0 * self.small_r * t - t * t))
    }
}

/// Cusp profile for the origin drum `A = {0}`, `Omega = {0 < y < f(x)}`.
pub enum CuspProfile {
    /// `f(x) = x^alpha` with `alpha > 0`; `dim_B = 1 - alpha`.
    Power { alpha: f64 },
    /// `f(x) = exp(-1/x)`: infinite flatness, `dim_B = -infinity`.
    Exp,
}

impl CuspProfile {
    fn f(&self, x: f64) -> f64 {
        match self {
            CuspProfile::Power { alpha } => x.powf(*alpha),
            CuspProfile::Exp => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-1.0 / x).exp()
                }
            }
        }
    }
    /// `int_0^x f`.
    fn area_to(&self, x: f64) -> f64 {
        match self {
            CuspProfile::Power { alpha } => x.powf(alpha + 1.0) / (alpha + 1.0),
            CuspProfile::Exp => {
                if x <= 1e-8 {
                    0.0
                } else {
                    quad::integrate_real(|u| (-1.0 / u).exp(), 1e-12, x, 1e-13, 1e-300).0
                }
            }
        }
    }
}

pub struct CuspGeom {
    pub profile: CuspProfile,
}

impl Geometry for CuspGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        (x[0] * x[0] + x[1] * x[1]).sqrt()
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < self.profile.f(x[0])
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0, 0.0], vec![1.0, self.profile.f(1.0)])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(self.profile.area_to(1.0))
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        // Area of {x^2 + y^2 < t^2} ∩ {0 < y < f(x), 0 < x < 1}: below the
        // crossing x* the column is capped by f, above it by the circle.
        let xmax = t.min(1.0);
        let g = |x: f64| self.profile.f(x) - (t * t - x * x).max(0.0).sqrt();
        if g(xmax) <= 0.0 {
            return Some(self.profile.area_to(xmax));
        }
        let mut lo = 0.0;
        let mut hi = xmax;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let xc = 0.5 * (lo + hi);
        // int_xc^xmax sqrt(t^2 - x^2) dx in closed form.
        let seg = |x: f64| 0.5 * (x * (t * t - x * x).max(0.0).sqrt() + t * t * (x / t).asin());
        Some(self.profile.area_to(xc) + seg(xmax) - seg(xc))
    }
}

/// Sierpinski gasket relative to the open unit triangle.
pub struct GasketGeom;

const S3: f64 = 1.732050807568877293527446341505872367_f64; // sqrt(3)

fn seg_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

fn tri_contains(p: [f64; 2], v: [[f64; 2]; 3]) -> bool {
    let sign = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let d0 = sign(v[0], v[1], p);
    let d1 = sign(v[1], v[2], p);
    let d2 = sign(v[2], v[0], p);
    let has_neg = d0 < 0.0 || d1 < 0.0 || d2 < 0.0;
    let has_pos = d0 > 0.0 || d1 > 0.0 || d2 > 0.0;
    !(has_neg && has_pos)
}

fn tri_boundary_distance(p: [f64; 2], v: [[f64; 2]; 3]) -> f64 {
    seg_distance(p, v[0], v[1])
        .min(seg_distance(p, v[1], v[2]))
        .min(seg_distance(p, v[2], v[0]))
}

impl GasketGeom {
    fn unit_triangle() -> [[f64; 2]; 3] {
        [[0.0, 0.0], [1.0, 0.0], [0.5, S3 / 2.0]]
    }
}

impl Geometry for GasketGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let p = [x[0], x[1]];
        let mut v = Self::unit_triangle();
        if !tri_contains(p, v) {
            return tri_boundary_distance(p, v);
        }
        for _ in 0..64 {
            let m01 = [(v[0][0] + v[1][0]) / 2.0, (v[0][1] + v[1][1]) / 2.0];
            let m12 = [(v[1][0] + v[2][0]) / 2.0, (v[1][1] + v[2][1]) / 2.0];
            let m20 = [(v[2][0] + v[0][0]) / 2.0, (v[2][1] + v[0][1]) / 2.0];
            let middle = [m01, m12, m20];
            if tri_contains(p, middle) {
                return tri_boundary_distance(p, middle);
            }
            if tri_contains(p, [v[0], m01, m20]) {
                v = [v[0], m01, m20];
            } else if tri_contains(p, [m01, v[1], m12]) {
                v = [m01, v[1], m12];
            } else if tri_contains(p, [m20, m12, v[2]]) {
                v = [m20, m12, v[2]];
            } else {
                // On a subdivision edge: the edge belongs to the gasket.
                return 0.0;
            }
            let diam = ((v[0][0] - v[1][0]).powi(2) + (v[0][1] - v[1][1]).powi(2)).sqrt();
            if diam < 1e-15 {
                break;
            }
        }
        0.0
    }
    fn in_region(&self, x: &[f64]) -> bool {
        tri_contains([x[0], x[1]], Self::unit_triangle())
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0, 0.0], vec![1.0, S3 / 2.0])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(S3 / 4.0)
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        // Deleted triangles of side 2^-(j+1), 3^j of them. A triangle of
        // side l keeps an inner offset triangle of side l - 2 sqrt(3) t
        // uncovered; the covered band has area (sqrt3/4)(l^2 - inner^2) =
        // (sqrt3/4) l^2 (2 sqrt3 t/l)(2 - 2 sqrt3 t/l), summed in the
        // product form so small t cannot cancel catastrophically. Levels
        // below the resolution are fully covered, a closed geometric tail.
        let mut covered = 0.0;
        let mut side = 0.5;
        let mut area_scale = 0.25; // count * side^2
        while side > 2.0 * S3 * t {
            let frac = 2.0 * S3 * t / side;
            covered += area_scale * (S3 / 4.0) * frac * (2.0 - frac);
            side *= 0.5;
            area_scale *= 0.75;
        }
        // sum_{j >= J} count_j side_j^2 = area_scale / (1 - 3/4).
        covered += 4.0 * area_scale * (S3 / 4.0);
        Some(covered.min(S3 / 4.0))
    }
}

/// Multi-polygon drum: `A` is the union of the polygon boundaries, `Omega`
/// the union of the interiors.
pub struct PolygonGeom {
    pub polys: Vec<Vec<[f64; 2]>>,
}

impl PolygonGeom {
    pub fn new(polys: Vec<Vec<[f64; 2]>>) -> Self {
        PolygonGeom { polys }
    }

    fn contains(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
        // Ray casting.
        let mut inside = false;
        let n = poly.len();
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = (poly[i][0], poly[i][1]);
            let (xj, yj) = (poly[j][0], poly[j][1]);
            if ((yi > p[1]) != (yj > p[1]))
                && (p[0] < (xj - xi) * (p[1] - yi) / (yj - yi) + xi)
            {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    fn area(poly: &[[f64; 2]]) -> f64 {
        let n = poly.len();
        let mut acc = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            acc += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1];
        }
        acc.abs() / 2.0
    }
}

impl Geometry for PolygonGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let p = [x[0], x[1]];
        let mut best = f64::INFINITY;
        for poly in &self.polys {
            let n = poly.len();
            for i in 0..n {
                best = best.min(seg_distance(p, poly[i], poly[(i + 1) % n]));
            }
        }
        best
    }
    fn in_region(&self, x: &[f64]) -> bool {
        self.polys.iter().any(|poly| Self::contains(poly, [x[0], x[1]]))
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for poly in &self.polys {
            for v in poly {
                lo[0] = lo[0].min(v[0]);
                lo[1] = lo[1].min(v[1]);
                hi[0] = hi[0].max(v[0]);
                hi[1] = hi[1].max(v[1]);
            }
        }
        (lo.to_vec(), hi.to_vec())
    }
    fn region_measure(&self) -> Option<f64> {
        Some(self.polys.iter().map(|p| Self::area(p)).sum())
    }
}

/// Wedge drum: `Omega = {0 < x < width, 0 < y < slope x}` with `A` the base
/// segment on the x-axis. `zeta(s) = slope^(s-1) width^s / (s(s-1))`.
pub struct WedgeGeom {
    pub width: f64,
    pub slope: f64,
}

impl Geometry for WedgeGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        if x[0] < 0.0 {
            (x[0] * x[0] + x[1] * x[1]).sqrt()
        } else if x[0] > self.width {
            ((x[0] - self.width).powi(2) + x[1] * x[1]).sqrt()
        } else {
            x[1].abs()
        }
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x[0] > 0.0 && x[0] < self.width && x[1] > 0.0 && x[1] < self.slope * x[0]
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0, 0.0], vec![self.width, self.slope * self.width])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(self.slope * self.width * self.width / 2.0)
    }
}

/// Annulus drum `(both circles, {a < |x| < 1})`, the fractal-nest generator.
pub struct AnnulusGeom {
    pub inner: f64,
}

impl Geometry for AnnulusGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        (r - self.inner).abs().min((1.0 - r).abs())
    }
    fn in_region(&self, x: &[f64]) -> bool {
        let r2 = x[0] * x[0] + x[1] * x[1];
        r2 > self.inner * self.inner && r2 < 1.0
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![-1.0, -1.0], vec![1.0, 1.0])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(PI * (1.0 - self.inner * self.inner))
    }
}

/// Cantor dust `C^(m,a) x C^(m,a)` relative to the open unit square.
pub struct DustGeom {
    pub set: GeneralizedCantorSet,
}

impl DustGeom {
    pub fn new(m: u32, a: f64) -> Result<Self> {
        let (set, _) = gcs_create(m, a)?;
        Ok(DustGeom { set })
    }
}

impl Geometry for DustGeom {
    fn ambient(&self) -> usize {
        2
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let dx = self.set.distance(x[0]);
        let dy = self.set.distance(x[1]);
        (dx * dx + dy * dy).sqrt()
    }
    fn in_region(&self, x: &[f64]) -> bool {
        x.iter().all(|&v| v > 0.0 && v < 1.0)
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0, 0.0], vec![1.0, 1.0])
    }
    fn region_measure(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Build a drum from a named geometry spec (`name` or `name:p1:p2`), the
/// registry behind the CLI `--geometry` flag.
///
/// Known kinds: `cantor[:m:a[:delta]]`, `dust[:m:a]`, `ball:N[:R]`,
/// `torus[:R:r]`, `cusp[:alpha]`, `exp-cusp`, `gasket`, `a-string[:a[:count]]`,
/// `cantor-string`.
pub fn build_rfd(spec: &str) -> Result<Rfd> {
    let parts: Vec<&str> = spec.split(':').collect();
    let name = parts[0];
    let arg = |i: usize, default: f64| -> Result<f64> {
        match parts.get(i) {
            None => Ok(default),
            Some(v) => parse_number(v),
        }
    };
    let geom: Arc<dyn Geometry> = match name {
        "cantor" => Arc::new(CantorSetGeom::new(
            arg(1, 2.0)? as u32,
            arg(2, 1.0 / 3.0)?,
            arg(3, 0.5)?,
        )?),
        "dust" => Arc::new(DustGeom::new(arg(1, 2.0)? as u32, arg(2, 1.0 / 3.0)?)?),
        "ball" => {
            let n = arg(1, 2.0)? as usize;
            if !(1..=3).contains(&n) {
                return Err(Error::UnsupportedKind(format!("ball:{n}")));
            }
            Arc::new(BallGeom {
                n,
                radius: arg(2, 1.0)?,
            })
        }
        "torus" => Arc::new(TorusGeom {
            big_r: arg(1, 2.0)?,
            small_r: arg(2, 0.5)?,
        }),
        "cusp" => Arc::new(CuspGeom {
            profile: CuspProfile::Power { alpha: arg(1, 2.0)? },
        }),
        "exp-cusp" => Arc::new(CuspGeom {
            profile: CuspProfile::Exp,
        }),
        "gasket" => Arc::new(GasketGeom),
        "a-string" => {
            let s = crate::strings::build_named(&crate::strings::NamedString::AString {
                a: arg(1, 1.0)?,
                count: arg(2, 10_000.0)? as u64,
            })?;
            Arc::new(StringGeom::new(&s))
        }
        "cantor-string" => {
            let s = crate::strings::cantor_string(40);
            Arc::new(StringGeom::new(&s))
        }
        other => return Err(Error::UnsupportedKind(other.to_string())),
    };
    Ok(Rfd::from_geometry(spec, geom))
}

fn parse_number(v: &str) -> Result<f64> {
    // Accept plain decimals and simple fractions like 1/3.
    if let Some((num, den)) = v.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number `{v}`")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number `{v}`")))?;
        return Ok(n / d);
    }
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad number `{v}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_and_torus_basics() {
        let ball = BallGeom { n: 2, radius: 1.0 };
        assert!((ball.distance(&[0.5, 0.0]) - 0.5).abs() < 1e-15);
        assert!((ball.region_measure().unwrap() - PI).abs() < 1e-15);
        // Annulus area at t = 0.1: pi - pi*0.81.
        assert!((ball.tube_volume_exact(0.1).unwrap() - 0.19 * PI).abs() < 1e-14);
        let torus = TorusGeom {
            big_r: 2.0,
            small_r: 0.5,
        };
        assert!(torus.in_region(&[2.0, 0.0, 0.1]));
        assert!(!torus.in_region(&[0.0, 0.0, 0.0]));
        let t = 0.2;
        let want = 2.0 * PI * 2.0 * (2.0 * 0.5 * t - t * t);
        assert!((torus.tube_volume_exact(t).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn cusp_measures() {
        let cusp = CuspGeom {
            profile: CuspProfile::Power { alpha: 2.0 },
        };
        assert!((cusp.region_measure().unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // Small t: everything under the parabola inside the circle;
        // area ~ x(t)^3/3 + cap.
        let v = cusp.tube_volume_exact(0.01).unwrap();
        assert!(v > 0.0 && v < 0.01_f64.powi(2));
        // Exp profile has a finite region measure.
        let flat = CuspGeom {
            profile: CuspProfile::Exp,
        };
        let m = flat.region_measure().unwrap();
        assert!(m > 0.14 && m < 0.15, "measure {m}");
    }

    #[test]
    fn cusp_tube_volume_matches_montecarlo_shape() {
        // Sanity on the crossing logic: volume is increasing in t and
        // saturates at the region measure.
        let cusp = CuspGeom {
            profile: CuspProfile::Power { alpha: 2.0 },
        };
        let mut prev = 0.0;
        for k in 1..=20 {
            let t = k as f64 / 10.0;
            let v = cusp.tube_volume_exact(t).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
        assert!((prev - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gasket_distance_and_tube() {
        let g = GasketGeom;
        // Center of the first deleted triangle: distance = its inradius
        // times ... center of middle triangle at (0.5, sqrt3/4 - ...):
        // centroid of (0.5,0),(0.75,sqrt3/4),(0.25,sqrt3/4).
        let c = [0.5, S3 / 6.0];
        let d = g.distance(&c);
        // Inradius of the side-1/2 middle triangle.
        let want = 0.5 / (2.0 * S3);
        assert!((d - want).abs() < 1e-12, "d = {d} want {want}");
        // Boundary points are on the gasket.
        assert!(g.distance(&[0.5, 0.0]) < 1e-12);
        // Full area at saturation.
        let sat = g.tube_volume_exact(1.0).unwrap();
        assert!((sat - S3 / 4.0).abs() < 1e-15);
        // t -> 0: the tube volume follows t^(2 - log2 3).
        let t = 1e-9_f64;
        let v = g.tube_volume_exact(t).unwrap();
        let exponent = 2.0 - 3.0_f64.ln() / 2.0_f64.ln();
        assert!(v < 20.0 * t.powf(exponent) && v > 0.05 * t.powf(exponent), "v = {v}");
    }

    #[test]
    fn polygon_contains_and_area() {
        let square = PolygonGeom::new(vec![vec![
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
        ]]);
        assert!(square.in_region(&[0.5, 0.5]));
        assert!(!square.in_region(&[1.5, 0.5]));
        assert!((square.region_measure().unwrap() - 1.0).abs() < 1e-15);
        assert!((square.distance(&[0.5, 0.25]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cantor_geom_exact_routes_agree() {
        let g = CantorSetGeom::new(2, 1.0 / 3.0, 0.5).unwrap();
        let gaps = g.gaps_1d().unwrap();
        assert!((gaps.measure() - 2.0).abs() < 1e-12);
        for &t in &[1e-5, 1e-3, 0.04, 0.3] {
            let a = g.tube_volume_exact(t).unwrap();
            let b = gaps.tube_volume(t);
            assert!((a - b).abs() < 1e-12, "t={t}: {a} vs {b}");
        }
        // Exact zeta against the closed form of the module.
        let s = Complex64::new(1.3, 0.7);
        let closed = g.set.distance_zeta_closed(0.5, s).unwrap();
        let viagaps = gaps.zeta(s);
        assert!((closed - viagaps).norm() < 1e-10 * closed.norm());
    }

    #[test]
    fn string_geom_distance() {
        let s = crate::strings::cantor_string(20);
        let g = StringGeom::new(&s);
        assert!((g.region_measure().unwrap() - 1.0).abs() < 1e-6);
        // d to the nearest partial-sum point.
        let d = g.distance(&[0.5]);
        assert!(d > 0.0 && d <= 1.0 / 6.0 + 1e-12);
    }

    #[test]
    fn scaled_and_union_geometry() {
        let base = build_rfd("cantor:2:1/3:0.5").unwrap();
        let scaled = base.scaled(0.5).unwrap();
        assert!((scaled.geometry().region_measure().unwrap() - 1.0).abs() < 1e-12);
        let x = [0.25];
        let d1 = scaled.geometry().distance(&x);
        let d2 = 0.5 * base.geometry().distance(&[0.5]);
        assert!((d1 - d2).abs() < 1e-14);
    }

    #[test]
    fn registry_rejects_unknown() {
        assert!(matches!(
            build_rfd("dodecahedron"),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(build_rfd("ball:2:1").is_ok());
        assert!(build_rfd("torus:2:0.5").is_ok());
    }

    #[test]
    fn lipschitz_spot_checks_pass() {
        for spec in ["cantor:2:1/3:0.5", "ball:2", "gasket", "cusp:2", "dust"] {
            let rfd = build_rfd(spec).unwrap();
            let worst = rfd.lipschitz_spot_check(2000, 7);
            assert!(worst <= 1e-9, "{spec}: violation {worst}");
        }
    }
}
