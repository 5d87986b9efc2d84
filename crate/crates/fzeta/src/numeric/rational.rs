//! Continued-fraction rational approximation and bounded integer-relation
//! detection. The scan issues a *certificate of absence up to a coefficient
//! bound*, not a proof of independence.

/// Continued-fraction convergents `p/q` of `x` with `q <= q_max`,
/// in order of increasing `q`.
pub fn convergents(x: f64, q_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0) = (1_i64, 0_i64);
    let (mut p1, mut q1) = (x.floor() as i64, 1_i64);
    out.push((p1, q1));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i64;
        let (p2, q2) = (
            a.checked_mul(p1).and_then(|v| v.checked_add(p0)),
            a.checked_mul(q1).and_then(|v| v.checked_add(q0)),
        );
        let (p2, q2) = match (p2, q2) {
            (Some(p), Some(q)) => (p, q),
            _ => break,
        };
        if q2 > q_max {
            break;
        }
        out.push((p2, q2));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    out
}

/// Best rational approximation `p/q` of `x` with `q <= q_max` together with
/// the residual `|x - p/q|`.
pub fn best_rational(x: f64, q_max: i64) -> (i64, i64, f64) {
    let mut best = (x.round() as i64, 1, (x - x.round()).abs());
    for (p, q) in convergents(x, q_max) {
        if q == 0 {
            continue;
        }
        let res = (x - p as f64 / q as f64).abs();
        if res < best.2 {
            best = (p, q, res);
        }
    }
    best
}

/// Outcome of an integer-relation scan over positive reals.
#[derive(Debug, Clone, PartialEq)]
pub enum RelationScan {
    /// No relation with coefficients bounded by the scan limits was found.
    Independent,
    /// Integer coefficients `q` with `sum q_i x_i = 0` (within tolerance).
    Relation(Vec<i64>),
}

/// Relative residual tolerance for accepting a candidate relation.
pub const RELATION_TOL: f64 = 1e-12;

/// Cap on the coefficient range of the exhaustive n-way scan; pairwise
/// relations are searched up to the full `q_max` via continued fractions.
const NWAY_CAP: i64 = 24;

fn residual_ok(coeffs: &[i64], xs: &[f64]) -> bool {
    let mut sum = 0.0;
    let mut scale = 0.0;
    for (&q, &x) in coeffs.iter().zip(xs) {
        sum += q as f64 * x;
        scale += (q as f64 * x).abs();
    }
    scale > 0.0 && sum.abs() <= RELATION_TOL * scale
}

/// Search for an integer relation `sum q_i x_i = 0` with `|q_i| <= q_max`.
///
/// Pairs are tested through continued-fraction convergents of their ratios
/// (denominators up to `q_max`); relations involving three or more terms are
/// covered by a bounded exhaustive scan with `|q_i| <= min(q_max, 24)`.
pub fn rational_relation_scan(xs: &[f64], q_max: i64) -> RelationScan {
    let n = xs.len();
    // Pairwise continued-fraction tests.
    for i in 0..n {
        for j in (i + 1)..n {
            let (p, q, _) = best_rational(xs[i] / xs[j], q_max);
            if q == 0 || p.abs() > q_max {
                continue;
            }
            // q*x_i - p*x_j = 0 candidate.
            let mut coeffs = vec![0_i64; n];
            coeffs[i] = q;
            coeffs[j] = -p;
            if residual_ok(&coeffs, xs) {
                return RelationScan::Relation(coeffs);
            }
        }
    }
    // Bounded lattice scan for longer relations (n <= 5 keeps this cheap).
    if (3..=5).contains(&n) {
        let cap = q_max.min(NWAY_CAP);
        let mut coeffs = vec![0_i64; n];
        if scan_rec(xs, cap, 0, &mut coeffs) {
            return RelationScan::Relation(coeffs);
        }
    }
    RelationScan::Independent
}

fn scan_rec(xs: &[f64], cap: i64, idx: usize, coeffs: &mut Vec<i64>) -> bool {
    if idx == xs.len() {
        let nonzero = coeffs.iter().filter(|&&q| q != 0).count();
        return nonzero >= 3 && residual_ok(coeffs, xs);
    }
    // First nonzero coefficient is kept positive to halve the search.
    let lo = if coeffs[..idx].iter().all(|&q| q == 0) {
        0
    } else {
        -cap
    };
    for q in lo..=cap {
        coeffs[idx] = q;
        if scan_rec(xs, cap, idx + 1, coeffs) {
            return true;
        }
    }
    coeffs[idx] = 0;
    false
}
