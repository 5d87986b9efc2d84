//! Interval-union measure by sweep-line merge of sorted endpoints.

/// Total length of the union of closed intervals `[a, b]`.
/// Degenerate or inverted intervals contribute nothing.
pub fn union_measure(intervals: &[(f64, f64)]) -> f64 {
    let mut iv: Vec<(f64, f64)> = intervals
        .iter()
        .copied()
        .filter(|&(a, b)| b > a)
        .collect();
    iv.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Neumaier-compensated accumulation: merged runs can number in the
    // millions and the downstream checks sit at 1e-12 relative.
    let mut total = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut add = |x: f64| {
        let t = total + x;
        if total.abs() >= x.abs() {
            comp += (total - t) + x;
        } else {
            comp += (x - t) + total;
        }
        total = t;
    };
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            None => cur = Some((a, b)),
            Some((ca, cb)) => {
                if a <= cb {
                    cur = Some((ca, cb.max(b)));
                } else {
                    add(cb - ca);
                    cur = Some((a, b));
                }
            }
        }
    }
    if let Some((ca, cb)) = cur {
        add(cb - ca);
    }
    total + comp
}

#[cfg(test)]
mod tests {
    use super::union_measure;
    use proptest::prelude::*;

    #[test]
    fn disjoint_and_overlapping() {
        assert_eq!(union_measure(&[(0.0, 1.0), (2.0, 3.0)]), 2.0);
        assert_eq!(union_measure(&[(0.0, 2.0), (1.0, 3.0)]), 3.0);
        assert_eq!(union_measure(&[(0.0, 1.0), (0.25, 0.5)]), 1.0);
        assert_eq!(union_measure(&[]), 0.0);
    }

    proptest! {
        #[test]
        fn union_bounded_by_sum_and_hull(iv in prop::collection::vec((0.0f64..10.0, 0.0f64..1.0), 0..40)) {
            let intervals: Vec<(f64, f64)> = iv.iter().map(|&(a, len)| (a, a + len)).collect();
            let m = union_measure(&intervals);
            let sum: f64 = intervals.iter().map(|&(a, b)| b - a).sum();
            prop_assert!(m <= sum + 1e-12);
            if let Some(lo) = intervals.iter().map(|&(a, _)| a).min_by(f64::total_cmp) {
                let hi = intervals.iter().map(|&(_, b)| b).max_by(f64::total_cmp).unwrap();
                prop_assert!(m <= hi - lo + 1e-12);
            }
        }

        #[test]
        fn union_is_monotone_under_adding_intervals(
            iv in prop::collection::vec((0.0f64..10.0, 0.0f64..1.0), 1..30),
            extra in (0.0f64..10.0, 0.0f64..1.0),
        ) {
            let mut intervals: Vec<(f64, f64)> = iv.iter().map(|&(a, len)| (a, a + len)).collect();
            let before = union_measure(&intervals);
            intervals.push((extra.0, extra.0 + extra.1));
            prop_assert!(union_measure(&intervals) >= before - 1e-12);
        }
    }
}
