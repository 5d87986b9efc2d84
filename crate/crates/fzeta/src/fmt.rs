//! Decimal formatting with 17 significant digits, enough for a lossless
//! f64 round-trip in every output artifact.

/// Format `x` with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    format!("{:.16e}", x)
}

#[cfg(test)]
mod tests {
    use super::fmt17;

    #[test]
    fn round_trips_exactly() {
        for &x in &[
            1.0,
            -1.0 / 3.0,
            std::f64::consts::PI,
            6.02e23,
            1.2345678901234567e-300,
        ] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
