//! Polynomial and general complex root finding: Durand–Kerner for dense
//! polynomials (lattice pole enumeration) and damped Newton for isolated
//! zeros of analytic functions (nonlattice seeds).

use num_complex::Complex64;

/// All complex roots of `c[0] + c[1] z + ... + c[n] z^n` by Durand–Kerner
/// iteration. Leading zero coefficients are trimmed; the polynomial must not
/// be constant. Roots are returned unordered.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().map(|z| z.norm() < 1e-300).unwrap_or(false) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in monic.iter().rev() {
            acc = acc * z + ck;
        }
        acc
    };
    // Cauchy bound on root magnitude sets the initial circle.
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            0.5 * radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    for _ in 0..300 {
        let mut delta_max = 0.0_f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                // Perturb coincident iterates.
                roots[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Damped Newton iteration for a zero of `f` near `seed`.
/// Returns `None` if the iteration fails to reach `tol` within `max_iter`.
pub fn newton<F, G>(f: F, df: G, seed: Complex64, tol: f64, max_iter: u32) -> Option<Complex64>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let mut z = seed;
    for _ in 0..max_iter {
        let fz = f(z);
        if fz.norm() < tol {
            return Some(z);
        }
        let d = df(z);
        if d.norm() < 1e-300 {
            return None;
        }
        let mut step = fz / d;
        // Limit the step to keep the iteration inside the seed's basin.
        if step.norm() > 1.0 {
            step = step / step.norm();
        }
        z -= step;
    }
    if f(z).norm() < tol {
        Some(z)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_roots() {
        // z^2 - 3z + 2 = (z-1)(z-2)
        let mut roots = poly_roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)]);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((roots[1] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn complex_conjugate_pair() {
        // z^2 + 1
        let roots = poly_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        for r in &roots {
            assert!((r * r + 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn newton_finds_dirichlet_zero() {
        // 1 - 2*3^{-s} has a zero at log_3 2.
        let f = |s: Complex64| 1.0 - 2.0 * (-s * 3.0_f64.ln()).exp();
        let df = |s: Complex64| 2.0 * 3.0_f64.ln() * (-s * 3.0_f64.ln()).exp();
        let z = newton(f, df, c(0.5, 0.1), 1e-13, 60).unwrap();
        assert!((z - c(2.0_f64.ln() / 3.0_f64.ln(), 0.0)).norm() < 1e-12);
    }
}
