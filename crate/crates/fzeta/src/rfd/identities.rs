//! Identity verification on numeric drums: distance-zeta scaling, union
//! additivity, and tube-volume scaling.

use crate::error::Result;
use crate::numeric::real_pow_c;
use crate::rfd::geometry::{Geometry, Rfd};
use crate::rfd::zeta::{distance_zeta_numeric, QuadCfg};
use num_complex::Complex64;
use std::sync::Arc;

/// Report of one identity check: the worst normalized residual over the
/// sampled points.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Vec<(String, f64)>,
}

impl IdentityReport {
    fn finish(name: String, tolerance: f64, details: Vec<(String, f64)>) -> Self {
        let max_residual = details.iter().map(|d| d.1).fold(0.0, f64::max);
        IdentityReport {
            name,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            details,
        }
    }
}

struct TranslatedGeom {
    inner: Arc<dyn Geometry>,
    offset: Vec<f64>,
}

impl Geometry for TranslatedGeom {
    fn ambient(&self) -> usize {
        self.inner.ambient()
    }
    fn distance(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.inner.distance(&y)
    }
    fn in_region(&self, x: &[f64]) -> bool {
        let y: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.inner.in_region(&y)
    }
    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.inner.bbox();
        (
            lo.iter().zip(&self.offset).map(|(a, b)| a + b).collect(),
            hi.iter().zip(&self.offset).map(|(a, b)| a + b).collect(),
        )
    }
    fn region_measure(&self) -> Option<f64> {
        self.inner.region_measure()
    }
    fn gaps_1d(&self) -> Option<crate::rfd::geometry::Gaps1d> {
        self.inner.gaps_1d()
    }
    fn tube_volume_exact(&self, t: f64) -> Option<f64> {
        self.inner.tube_volume_exact(t)
    }
}

impl Rfd {
    /// The drum rigidly translated by `offset` (distances are invariant).
    pub fn translated(&self, offset: &[f64]) -> Rfd {
        Rfd::from_geometry(
            format!("{}+{:?}", self.label, offset),
            Arc::new(TranslatedGeom {
                inner: self.geometry_arc(),
                offset: offset.to_vec(),
            }),
        )
    }
}

/// `|zeta_{lambda A, lambda Omega}(s) - lambda^s zeta_{A,Omega}(s)|`,
/// normalized by `1 + |zeta|`, over the sample points.
pub fn check_scaling(
    rfd: &Rfd,
    lambda: f64,
    s_list: &[Complex64],
    cfg: &QuadCfg,
    tolerance: f64,
) -> Result<IdentityReport> {
    let scaled = rfd.scaled(lambda)?;
    let mut details = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let (z, _) = distance_zeta_numeric(rfd, s, cfg)?;
        let (zs, _) = distance_zeta_numeric(&scaled, s, cfg)?;
        let want = real_pow_c(lambda, s) * z;
        details.push((format!("s={s}"), (zs - want).norm() / (1.0 + want.norm())));
    }
    Ok(IdentityReport::finish(
        format!("scaling lambda={lambda} on {}", rfd.label),
        tolerance,
        details,
    ))
}

/// `|zeta_union - sum zeta_parts|` over the sample points; the union drum is
/// built here and its distance-compatibility precondition checked.
pub fn check_union(
    parts: &[Rfd],
    s_list: &[Complex64],
    cfg: &QuadCfg,
    tolerance: f64,
) -> Result<IdentityReport> {
    let whole = Rfd::union(parts)?;
    let mut details = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let (zu, _) = distance_zeta_numeric(&whole, s, cfg)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for p in parts {
            let (zp, _) = distance_zeta_numeric(p, s, cfg)?;
            sum += zp;
        }
        details.push((format!("s={s}"), (zu - sum).norm() / (1.0 + sum.norm())));
    }
    Ok(IdentityReport::finish(
        format!("union additivity on {}", whole.label),
        tolerance,
        details,
    ))
}

/// Tube-volume scaling `|(lambda A)_t ∩ lambda Omega| = lambda^N |A_{t/lambda} ∩ Omega|`.
pub fn check_tube_scaling(
    rfd: &Rfd,
    lambda: f64,
    t_list: &[f64],
    tolerance: f64,
) -> Result<IdentityReport> {
    let scaled = rfd.scaled(lambda)?;
    let nf = rfd.ambient as f64;
    let mut details = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let lhs = scaled
            .geometry()
            .tube_volume_exact(t)
            .unwrap_or_else(|| {
                let g = scaled.geometry().gaps_1d().expect("1D decomposition");
                g.tube_volume(t)
            });
        let rhs = lambda.powf(nf)
            * rfd
                .geometry()
                .tube_volume_exact(t / lambda)
                .unwrap_or_else(|| {
                    let g = rfd.geometry().gaps_1d().expect("1D decomposition");
                    g.tube_volume(t / lambda)
                });
        details.push((format!("t={t}"), (lhs - rhs).abs() / (1.0 + rhs.abs())));
    }
    Ok(IdentityReport::finish(
        format!("tube scaling lambda={lambda} on {}", rfd.label),
        tolerance,
        details,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfd::geometry::{build_rfd, StringGeom};
    use crate::strings::FractalString;
    use crate::tol;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn cantor_scaling_identity() {
        let rfd = build_rfd("cantor:2:1/3:0.5").unwrap();
        let cfg = QuadCfg::default();
        let report = check_scaling(
            &rfd,
            1.0 / 3.0,
            &[c(1.2), c(1.5), Complex64::new(1.1, 2.0)],
            &cfg,
            tol::EXACT_1D,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
        // lambda = 1: identically zero.
        let trivial = check_scaling(&rfd, 1.0, &[c(1.5)], &cfg, 1e-14).unwrap();
        assert!(trivial.pass);
    }

    #[test]
    fn cantor_level_one_union() {
        // (C, (0,1)) = (1/3)(C,(0,1)) ⊔ middle gap ⊔ (1/3)(C,(0,1)) + 2/3.
        let whole = build_rfd("cantor:2:1/3:0").unwrap();
        let left = whole.scaled(1.0 / 3.0).unwrap();
        let right = left.translated(&[2.0 / 3.0]);
        let gap = Rfd::from_geometry(
            "middle-gap",
            std::sync::Arc::new(StringGeom::new(
                &FractalString::new("gap", &[(1.0 / 3.0, 1)], None).unwrap(),
            )),
        )
        .translated(&[1.0 / 3.0]);
        let parts = [left, gap, right];
        let cfg = QuadCfg::default();
        let report = check_union(&parts, &[c(1.5), c(1.2), c(0.9)], &cfg, tol::EXACT_1D).unwrap();
        assert!(report.pass, "{report:?}");
        // The sum must also equal the whole drum's closed form.
        let (zw, _) = distance_zeta_numeric(&whole, c(1.5), &cfg).unwrap();
        let mut sum = Complex64::new(0.0, 0.0);
        for p in &parts {
            sum += distance_zeta_numeric(p, c(1.5), &cfg).unwrap().0;
        }
        assert!((zw - sum).norm() < 1e-8 * (1.0 + zw.norm()));
    }

    #[test]
    fn tube_scaling_identity() {
        let rfd = build_rfd("cantor:2:1/3:0").unwrap();
        let report = check_tube_scaling(
            &rfd,
            1.0 / 3.0,
            &[1e-4, 1e-3, 1e-2, 0.05],
            tol::CONTENT_SCALING,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }
}
