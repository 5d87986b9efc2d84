//! Adaptive quadrature on real intervals for complex-valued integrands.
//!
//! The workhorse is a 15-point Gauss–Kronrod rule with interval bisection;
//! power-law endpoint behaviour (integrands like `t^{s-1}` with `Re s` close
//! to zero) is handled by the callers via substitutions, typically `t = e^u`.

use num_complex::Complex64;

// 15-point Kronrod abscissae on [0,1] side (symmetric), with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod 15/7 panel. Returns (kronrod, |kronrod - gauss|).
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let v = if x == 0.0 {
            f(c)
        } else {
            f(c - h * x) + f(c + h * x)
        };
        kron += wk * v;
        if j % 2 == 1 {
            gauss += WG[j / 2] * v;
        }
    }
    (kron * h, (kron - gauss).norm() * h.abs())
}

/// Result of an adaptive integration: value plus an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Adaptively integrate `f` over `[a, b]` until the accumulated Kronrod error
/// estimate drops below `abs_tol + rel_tol * |value|`.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> QuadResult {
    // Worklist of (a, b, value, err), worst panel split first.
    let (v0, e0) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v0, e0)];
    for _ in 0..2000 {
        let total: Complex64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol + rel_tol * total.norm() {
            break;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty panel list");
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Interval exhausted at f64 resolution; keep the panel.
            let (v, e) = gk15(&mut f, pa, pb);
            panels.push((pa, pb, v, 0.05 * e));
            continue;
        }
        let (v1, e1) = gk15(&mut f, pa, mid);
        let (v2, e2) = gk15(&mut f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
    let value: Complex64 = panels.iter().map(|p| p.2).sum();
    let error: f64 = panels.iter().map(|p| p.3).sum();
    QuadResult {
        value,
        error,
        panels: panels.len(),
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> (f64, f64) {
    let r = integrate(
        |x| Complex64::new(f(x), 0.0),
        a,
        b,
        rel_tol,
        abs_tol,
    );
    (r.value.re, r.error)
}

/// Integrate `t^(s-n-1) * vol(t)` over `t in (t_min, t_max)` in the variable
/// `u = log t`, which turns the power-law weight into a smooth exponential.
/// `vol` is expected to behave like `t^w` with `w > n - Re s` near zero, so
/// the substituted integrand decays and `t_min` may be pushed to the noise
/// floor of `vol`.
pub fn integrate_tube_power<F: FnMut(f64) -> f64>(
    mut vol: F,
    s: Complex64,
    n: f64,
    t_min: f64,
    t_max: f64,
    rel_tol: f64,
) -> QuadResult {
    let lo = t_min.ln();
    let hi = t_max.ln();
    integrate(
        |u| {
            let t = u.exp();
            // t^{s-n-1} * vol * dt/du = t^{s-n} * vol; combined in log space
            // so a decaying volume can cancel a blowing-up power factor
            // without intermediate overflow.
            let v = vol(t);
            if v <= 0.0 || !v.is_finite() {
                Complex64::new(0.0, 0.0)
            } else {
                ((s - n) * u + v.ln()).exp()
            }
        },
        lo,
        hi,
        rel_tol,
        0.0,
    )
}

/// Adaptive Simpson rule for complex integrands, used for the entire-factor
/// integrals on fixed angular ranges.
pub fn simpson<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Complex64 {
    fn step<F: FnMut(f64) -> Complex64>(
        f: &mut F,
        a: f64,
        fa: Complex64,
        b: f64,
        fb: Complex64,
        c: f64,
        fc: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let lm = 0.5 * (a + c);
        let rm = 0.5 * (c + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (c - a) / 6.0 * (fa + 4.0 * flm + fc);
        let right = (b - c) / 6.0 * (fc + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, fa, c, fc, lm, flm, left, 0.5 * tol, depth - 1)
                + step(f, c, fc, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    step(f, a, fa, b, fb, c, fc, whole, tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Complex64::new(x * x * x - x, 0.0), 0.0, 2.0, 1e-14, 0.0);
        assert!((r.value.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        // int_0^pi sin(x) dx = 2
        let r = integrate(|x| Complex64::new(x.sin(), 0.0), 0.0, std::f64::consts::PI, 1e-13, 0.0);
        assert!((r.value.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn power_singularity_via_log_substitution() {
        // int_0^1 t^{s-1} dt = 1/s with s = 0.3: integrand singular at 0.
        let s = Complex64::new(0.3, 0.0);
        let r = integrate_tube_power(|_| 1.0, s, 0.0, 1e-300, 1.0, 1e-13);
        assert!((r.value - 1.0 / s).norm() < 1e-10, "value {}", r.value);
    }

    #[test]
    fn simpson_matches_gk() {
        let mut f = |x: f64| Complex64::new((3.0 * x).cos(), x.sin());
        let a = simpson(&mut f, 0.0, 1.3, 1e-12, 40);
        let b = integrate(|x| Complex64::new((3.0 * x).cos(), x.sin()), 0.0, 1.3, 1e-13, 0.0);
        assert!((a - b.value).norm() < 1e-10);
    }
}
