//! Bounded fractal strings: finite descending multisets of lengths plus an
//! analytic tail descriptor, their geometric zeta functions
//! `zeta_L(s) = sum_j l_j^s`, and the combinator algebra (scaling, disjoint
//! union, tensor product) used to assemble higher-order strings.

use crate::error::{Error, Result};
use crate::fmt::fmt17;
use crate::numeric::real_pow_c;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative gap under which two lengths are considered equal and coalesced.
const COALESCE_REL: f64 = 1e-15;

/// Tolerance on the omitted-mass fraction of a tensor truncation, checked at
/// the probe abscissa.
const TENSOR_PROBE_TOL: f64 = 1e-9;

/// Analytic description of the lengths omitted from the explicit entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Tail {
    /// Lengths `first_len * ratio^j` with counts `first_count * growth^j`,
    /// `j >= 0`. Closed-form zeta `first_count * first_len^s / (1 - growth * ratio^s)`.
    Geometric {
        first_len: f64,
        first_count: f64,
        ratio: f64,
        growth: f64,
    },
    /// a-string remainder `scale * (k^-a - (k+1)^-a)` for `k >= from`.
    /// Summed on demand; the remainder is bounded by
    /// `(scale * a)^sigma * from^(1-(1+a) sigma) / ((1+a) sigma - 1)`.
    PowerLaw { a: f64, from: u64, scale: f64 },
}

impl Tail {
    fn abscissa(&self) -> f64 {
        match self {
            Tail::Geometric { ratio, growth, .. } => {
                if *growth <= 1.0 {
                    0.0_f64.min(growth.ln() / (1.0 / ratio).ln())
                } else {
                    growth.ln() / (1.0 / ratio).ln()
                }
            }
            Tail::PowerLaw { a, .. } => 1.0 / (1.0 + a),
        }
    }

    fn total_length(&self) -> f64 {
        match self {
            Tail::Geometric {
                first_len,
                first_count,
                ratio,
                growth,
            } => first_count * first_len / (1.0 - growth * ratio),
            Tail::PowerLaw { a, from, scale } => scale * (*from as f64).powf(-a),
        }
    }

    fn scale(&self, lambda: f64) -> Tail {
        match self {
            Tail::Geometric {
                first_len,
                first_count,
                ratio,
                growth,
            } => Tail::Geometric {
                first_len: first_len * lambda,
                first_count: *first_count,
                ratio: *ratio,
                growth: *growth,
            },
            Tail::PowerLaw { a, from, scale } => Tail::PowerLaw {
                a: *a,
                from: *from,
                scale: scale * lambda,
            },
        }
    }
}

/// Truncation-error report attached to every zeta evaluation: the evaluation
/// abscissa and a bound on the modulus of the omitted sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub sigma: f64,
    pub bound: f64,
}

impl TailBound {
    pub fn zero(sigma: f64) -> Self {
        TailBound { sigma, bound: 0.0 }
    }
}

/// A bounded fractal string: explicit `(length, multiplicity)` entries in
/// strictly descending length order plus optional analytic tails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractalString {
    pub label: String,
    entries: Vec<(f64, f64)>,
    tails: Vec<Tail>,
}

/// Named constructions from the worked examples.
#[derive(Debug, Clone)]
pub enum NamedString {
    /// `l_k = k^-a - (k+1)^-a`, `k = 1..=count`, with a power-law tail.
    AString { a: f64, count: u64 },
    /// Gap lengths of the generalized Cantor set `C^(m,a)`:
    /// generation `k` has `(m-1) m^(k-1)` gaps of length `(1-ma)/(m-1) a^(k-1)`.
    Cantor { m: u32, a: f64, depth: u32 },
    /// `m`-fold tensor power of `base`, truncated to `truncation` entries.
    MthOrder {
        base: Box<NamedString>,
        m: u32,
        truncation: usize,
    },
    /// Union of `3^-m / m!` scaled m-th order Cantor strings, `m = 1..=order_cap`.
    InfiniteOrder {
        base: Box<NamedString>,
        order_cap: u32,
        truncation: usize,
    },
}

impl FractalString {
    /// Build a string from raw entries; lengths are validated, sorted
    /// descending and coalesced (equal within `1e-15` relative).
    pub fn new(
        label: impl Into<String>,
        entries: &[(f64, u64)],
        tail: Option<Tail>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("entries must be nonempty".into()));
        }
        for &(len, mult) in entries {
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::NonPositiveLength(len));
            }
            if mult == 0 {
                return Err(Error::InvalidParameter(
                    "multiplicities must be >= 1".into(),
                ));
            }
        }
        let entries: Vec<(f64, f64)> = entries
            .iter()
            .map(|&(len, mult)| (len, mult as f64))
            .collect();
        let mut tails = Vec::new();
        if let Some(t) = tail {
            if let Tail::Geometric { ratio, growth, .. } = &t {
                if !(0.0 < *ratio && *ratio < 1.0) || *growth <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "geometric tail needs ratio in (0,1) and growth > 0".into(),
                    ));
                }
                if growth * ratio >= 1.0 {
                    return Err(Error::DivergentTail {
                        growth: *growth,
                        ratio: *ratio,
                    });
                }
            }
            tails.push(t);
        }
        let mut s = FractalString {
            label: label.into(),
            entries,
            tails,
        };
        s.normalize();
        Ok(s)
    }

    fn normalize(&mut self) {
        self.entries.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(self.entries.len());
        for &(len, mult) in &self.entries {
            match merged.last_mut() {
                Some((plen, pmult)) if (*plen - len) <= COALESCE_REL * *plen => {
                    *pmult += mult;
                }
                _ => merged.push((len, mult)),
            }
        }
        self.entries = merged;
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn tails(&self) -> &[Tail] {
        &self.tails
    }

    /// Total length `sum_j mult_j * l_j` including the tails.
    pub fn total_length(&self) -> f64 {
        let explicit: f64 = self
            .entries
            .iter()
            .map(|&(len, mult)| len * mult)
            .sum();
        explicit + self.tails.iter().map(Tail::total_length).sum::<f64>()
    }

    /// Convergence abscissa estimate: `-inf` for finite strings, otherwise the
    /// largest tail abscissa.
    pub fn abscissa(&self) -> f64 {
        self.tails
            .iter()
            .map(Tail::abscissa)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Geometric zeta function `sum_j l_j^s`, with enough explicit terms that
    /// the reported omitted-tail bound is at most `rel_tol * |value|`
    /// (geometric tails are summed in closed form and contribute no error).
    pub fn geometric_zeta(&self, s: Complex64, rel_tol: f64) -> Result<(Complex64, TailBound)> {
        let sigma = s.re;
        if !self.tails.is_empty() && sigma <= self.abscissa() {
            return Err(Error::AbscissaViolation {
                re_s: sigma,
                abscissa: self.abscissa(),
            });
        }
        let mut value: Complex64 = self
            .entries
            .iter()
            .map(|&(len, mult)| mult * real_pow_c(len, s))
            .sum();
        let mut bound = 0.0;
        for tail in &self.tails {
            match tail {
                Tail::Geometric {
                    first_len,
                    first_count,
                    ratio,
                    growth,
                } => {
                    let q = growth * real_pow_c(*ratio, s);
                    // |q| = growth * ratio^sigma < 1 above the abscissa.
                    value += first_count * real_pow_c(*first_len, s) / (1.0 - q);
                }
                Tail::PowerLaw { a, from, scale } => {
                    let mut k = *from;
                    let remainder = |k: f64| -> f64 {
                        // sum_{j>=k} l_j^sigma <= (scale*a)^sigma * k^(1-(1+a)sigma) / ((1+a)sigma - 1)
                        (scale * a).powf(sigma) * k.powf(1.0 - (1.0 + a) * sigma)
                            / ((1.0 + a) * sigma - 1.0)
                    };
                    loop {
                        let rem = remainder(k as f64);
                        if rem <= rel_tol * value.norm().max(1e-300) {
                            bound += rem;
                            break;
                        }
                        if k > from + 2_000_000 {
                            return Err(Error::ToleranceUnreachable {
                                tol: rel_tol,
                                best: rem / value.norm().max(1e-300),
                            });
                        }
                        // Extend the explicit sum in blocks.
                        let block_end = k + 8192;
                        while k < block_end {
                            let len = scale * ((k as f64).powf(-a) - ((k + 1) as f64).powf(-a));
                            value += real_pow_c(len, s);
                            k += 1;
                        }
                    }
                }
            }
        }
        Ok((value, TailBound { sigma, bound }))
    }

    /// Scale every length by `lambda`; `zeta_{lambda L}(s) = lambda^s zeta_L(s)`.
    pub fn scale(&self, lambda: f64) -> Result<FractalString> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveScale(lambda));
        }
        let entries: Vec<(f64, f64)> = self
            .entries
            .iter()
            .map(|&(len, mult)| (len * lambda, mult))
            .collect();
        let mut s = FractalString {
            label: format!("{}*{}", fmt17(lambda), self.label),
            entries,
            tails: self.tails.iter().map(|t| t.scale(lambda)).collect(),
        };
        s.normalize();
        Ok(s)
    }

    /// Materialize tails into explicit entries until the omitted lengths drop
    /// below `len_floor`, leaving a tail-free string.
    pub fn materialize(&self, len_floor: f64) -> FractalString {
        let mut entries = self.entries.clone();
        for tail in &self.tails {
            match tail {
                Tail::Geometric {
                    first_len,
                    first_count,
                    ratio,
                    growth,
                } => {
                    let mut len = *first_len;
                    let mut count = *first_count;
                    while len >= len_floor && count < 9.0e15 {
                        entries.push((len, count));
                        len *= ratio;
                        count *= growth;
                    }
                }
                Tail::PowerLaw { a, from, scale } => {
                    let mut k = *from;
                    loop {
                        let len = scale * ((k as f64).powf(-a) - ((k + 1) as f64).powf(-a));
                        if len < len_floor || k > from + 4_000_000 {
                            break;
                        }
                        entries.push((len, 1.0));
                        k += 1;
                    }
                }
            }
        }
        let mut s = FractalString {
            label: self.label.clone(),
            entries,
            tails: Vec::new(),
        };
        s.normalize();
        s
    }

    /// Tensor product: the multiset of pairwise length products, truncated to
    /// the `truncation` largest coalesced entries. The omitted mass at the
    /// probe abscissa must stay below `1e-9` of the product zeta.
    pub fn tensor_product(
        &self,
        other: &FractalString,
        truncation: usize,
    ) -> Result<FractalString> {
        if truncation == 0 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        let a = self.materialize(1e-30);
        let b = other.materialize(1e-30);
        let mut products: Vec<(f64, f64)> =
            Vec::with_capacity(a.entries.len().saturating_mul(b.entries.len()).min(1 << 22));
        for &(l1, m1) in &a.entries {
            for &(l2, m2) in &b.entries {
                products.push((l1 * l2, m1 * m2));
            }
        }
        let mut result = FractalString {
            label: format!("{}(x){}", self.label, other.label),
            entries: products,
            tails: Vec::new(),
        };
        result.normalize();
        if result.entries.len() > truncation {
            result.entries.truncate(truncation);
        }
        // Omitted mass at the probe abscissa: product of the factor zetas
        // minus the kept sum, evaluated where both factors converge.
        let sigma = self.abscissa().max(other.abscissa()).max(0.0) + 0.5;
        let probe = Complex64::new(sigma, 0.0);
        let (za, _) = self.geometric_zeta(probe, 1e-12)?;
        let (zb, _) = other.geometric_zeta(probe, 1e-12)?;
        let (zk, _) = result.geometric_zeta(probe, 1e-12)?;
        let omitted = (za.re * zb.re - zk.re).max(0.0);
        if omitted > TENSOR_PROBE_TOL * (za.re * zb.re).abs() {
            return Err(Error::TruncationTooSmall {
                bound: omitted,
                tol: TENSOR_PROBE_TOL * (za.re * zb.re).abs(),
                sigma,
            });
        }
        Ok(result)
    }

    /// Exact omitted mass of a truncated tensor product at real `sigma`:
    /// `zeta_1(sigma) zeta_2(sigma) - zeta_kept(sigma)`.
    pub fn tensor_tail_bound(
        &self,
        other: &FractalString,
        kept: &FractalString,
        sigma: f64,
    ) -> Result<f64> {
        let probe = Complex64::new(sigma, 0.0);
        let (za, ba) = self.geometric_zeta(probe, 1e-12)?;
        let (zb, bb) = other.geometric_zeta(probe, 1e-12)?;
        let (zk, _) = kept.geometric_zeta(probe, 1e-12)?;
        Ok((za.re * zb.re - zk.re).abs() + ba.bound * zb.norm() + bb.bound * za.norm())
    }

    /// Disjoint union of scaled strings; the zeta of the union is the sum of
    /// the component zetas.
    pub fn disjoint_union(parts: &[FractalString], scales: &[f64]) -> Result<FractalString> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("union of no strings".into()));
        }
        if parts.len() != scales.len() {
            return Err(Error::ArityMismatch {
                expected: parts.len(),
                got: scales.len(),
            });
        }
        let mut entries = Vec::new();
        let mut tails = Vec::new();
        for (part, &lambda) in parts.iter().zip(scales) {
            let scaled = part.scale(lambda)?;
            entries.extend_from_slice(&scaled.entries);
            tails.extend(scaled.tails.iter().cloned());
        }
        let mut s = FractalString {
            label: parts
                .iter()
                .map(|p| p.label.as_str())
                .collect::<Vec<_>>()
                .join("+"),
            entries,
            tails,
        };
        s.normalize();
        Ok(s)
    }

    /// JSON export with 17-significant-digit decimals.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        out.push_str(&format!("\"label\":{:?},\"entries\":[", self.label));
        for (i, &(len, mult)) in self.entries.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{}]", fmt17(len), mult as u64));
        }
        out.push_str("],\"tail\":");
        match self.tails.len() {
            0 => out.push_str("{\"kind\":\"none\"}"),
            1 => out.push_str(&tail_json(&self.tails[0])),
            _ => {
                out.push_str("{\"kind\":\"union\",\"parts\":[");
                for (i, t) in self.tails.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&tail_json(t));
                }
                out.push_str("]}");
            }
        }
        out.push('}');
        out
    }
}

fn tail_json(t: &Tail) -> String {
    match t {
        Tail::Geometric {
            first_len,
            first_count,
            ratio,
            growth,
        } => format!(
            "{{\"kind\":\"geometric\",\"ratio\":{},\"growth\":{},\"first_len\":{},\"first_count\":{}}}",
            fmt17(*ratio),
            fmt17(*growth),
            fmt17(*first_len),
            fmt17(*first_count)
        ),
        Tail::PowerLaw { a, from, scale } => format!(
            "{{\"kind\":\"power_law\",\"a\":{},\"from\":{},\"scale\":{}}}",
            fmt17(*a),
            from,
            fmt17(*scale)
        ),
    }
}

/// The ternary Cantor string truncated at `depth` generations, with a
/// geometric tail carrying the rest: `zeta(s) = 1/(3^s - 2)`.
pub fn cantor_string(depth: u32) -> FractalString {
    generalized_cantor_string(2, 1.0 / 3.0, depth).expect("classic parameters are valid")
}

/// Gap string of the generalized Cantor set `C^(m,a)`:
/// `zeta(s) = (m-1) g^s / (1 - m a^s)` with `g = (1-ma)/(m-1)`.
pub fn generalized_cantor_string(m: u32, a: f64, depth: u32) -> Result<FractalString> {
    if m < 2 || !(a > 0.0) || m as f64 * a >= 1.0 {
        return Err(Error::InvalidCantorParameters { m, a });
    }
    let g = (1.0 - m as f64 * a) / (m as f64 - 1.0);
    let mut entries = Vec::new();
    let mut len = g;
    let mut count = (m - 1) as u64;
    for _ in 0..depth.max(1) {
        entries.push((len, count));
        len *= a;
        count = count.saturating_mul(m as u64);
    }
    FractalString::new(
        format!("cantor-string({m},{a})"),
        &entries,
        Some(Tail::Geometric {
            first_len: len,
            first_count: count as f64,
            ratio: a,
            growth: m as f64,
        }),
    )
}

/// Build one of the named strings from the examples catalog.
pub fn build_named(kind: &NamedString) -> Result<FractalString> {
    match kind {
        NamedString::AString { a, count } => {
            if !(*a > 0.0) {
                return Err(Error::InvalidParameter("a-string needs a > 0".into()));
            }
            if *count == 0 {
                return Err(Error::InvalidParameter("a-string needs count >= 1".into()));
            }
            let entries: Vec<(f64, u64)> = (1..=*count)
                .map(|k| ((k as f64).powf(-a) - ((k + 1) as f64).powf(-a), 1))
                .collect();
            FractalString::new(
                format!("a-string({a})"),
                &entries,
                Some(Tail::PowerLaw {
                    a: *a,
                    from: count + 1,
                    scale: 1.0,
                }),
            )
        }
        NamedString::Cantor { m, a, depth } => generalized_cantor_string(*m, *a, *depth),
        NamedString::MthOrder {
            base,
            m,
            truncation,
        } => {
            if *m == 0 {
                return Err(Error::InvalidParameter("order must be >= 1".into()));
            }
            let b = build_named(base)?;
            let mut acc = b.materialize(1e-30);
            for _ in 1..*m {
                acc = acc.tensor_product(&b, *truncation)?;
            }
            acc.label = format!("order-{m}({})", b.label);
            Ok(acc)
        }
        NamedString::InfiniteOrder {
            base,
            order_cap,
            truncation,
        } => {
            let mut parts = Vec::new();
            let mut scales = Vec::new();
            let mut factorial = 1.0;
            for m in 1..=*order_cap {
                factorial *= m as f64;
                parts.push(build_named(&NamedString::MthOrder {
                    base: base.clone(),
                    m,
                    truncation: *truncation,
                })?);
                scales.push(3.0_f64.powi(-(m as i32)) / factorial);
            }
            let mut s = FractalString::disjoint_union(&parts, &scales)?;
            s.label = format!("infinite-order({})", order_cap);
            Ok(s)
        }
    }
}
