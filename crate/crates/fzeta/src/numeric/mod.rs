//! Shared numerical machinery: quadrature, special functions, root finding,
//! rational approximation, interval arithmetic.

pub mod interval;
pub mod quad;
pub mod rational;
pub mod roots;
pub mod special;

use num_complex::Complex64;

/// `base^s` for a positive real base and complex exponent.
#[inline]
pub fn real_pow_c(base: f64, s: Complex64) -> Complex64 {
    debug_assert!(base > 0.0, "real_pow_c needs a positive base, got {base}");
    (s * base.ln()).exp()
}

/// `x^s` restricted to real `s` and positive `x`.
#[inline]
pub fn powf(x: f64, s: f64) -> f64 {
    x.powf(s)
}
