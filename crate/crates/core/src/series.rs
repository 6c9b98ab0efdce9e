//! Convergent positive series with exact term and tail closed forms.
//!
//! Three families, all reducible to a multigeometric core: a block of
//! positive coefficients `k_1..k_L` repeated at ratio `q` (term
//! `(b-1)*L + j` is `k_j * q^b`), the `xm(m)` family whose block is
//! `[3, 2, ..., 2]` (m twos) at ratio `1/(2m+2)`, and the plain geometric
//! series `c*q^n`. Tails are always evaluated by closed form, never by
//! truncated summation.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SeriesKind {
    Multigeometric,
    XmFamily,
    Geometric,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::Multigeometric => "multigeometric",
            SeriesKind::XmFamily => "xm",
            SeriesKind::Geometric => "geometric",
        }
    }
}

/// A series description. `coeffs` and `ratio` always hold the expanded
/// multigeometric form, whatever the kind; `xm(1)` is term-for-term
/// identical to `mg(3,2;1/4)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesSpec {
    kind: SeriesKind,
    coeffs: Vec<Rational>,
    ratio: Rational,
    m: Option<u32>,
}

impl SeriesSpec {
    pub fn multigeometric(coeffs: Vec<Rational>, ratio: Rational) -> Result<Self> {
        Self::validated(SeriesKind::Multigeometric, coeffs, ratio, None)
    }

    /// The digit-set family: block `[3, 2 x m]` at ratio `1/(2m+2)`.
    pub fn xm(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidSeries("xm requires m >= 1".into()));
        }
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        coeffs.push(Rational::from_int(3));
        for _ in 0..m {
            coeffs.push(Rational::from_int(2));
        }
        let ratio = Rational::new(1, 2 * i64::from(m) + 2);
        Self::validated(SeriesKind::XmFamily, coeffs, ratio, Some(m))
    }

    pub fn geometric(scale: Rational, ratio: Rational) -> Result<Self> {
        Self::validated(SeriesKind::Geometric, alloc::vec![scale], ratio, None)
    }

    fn validated(
        kind: SeriesKind,
        coeffs: Vec<Rational>,
        ratio: Rational,
        m: Option<u32>,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("at least one coefficient".into()));
        }
        if coeffs.iter().any(|k| !k.is_positive()) {
            return Err(Error::InvalidSeries(
                "coefficients must be positive".into(),
            ));
        }
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::InvalidSeries(format!(
                "ratio must lie in (0,1), got {ratio}"
            )));
        }
        Ok(SeriesSpec {
            kind,
            coeffs,
            ratio,
            m,
        })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    /// Terms per coefficient block.
    pub fn block_len(&self) -> usize {
        self.coeffs.len()
    }

    fn coeff_sum(&self) -> Rational {
        let mut s = Rational::zero();
        for k in &self.coeffs {
            s += k;
        }
        s
    }

    /// The n-th term (1-based): `k_j * q^b` with `n = (b-1)*L + j`.
    ///
    /// Panics if `n == 0`.
    pub fn term(&self, n: u64) -> Rational {
        assert!(n >= 1, "terms are 1-indexed");
        let len = self.block_len() as u64;
        let block = (n - 1) / len + 1;
        let j = ((n - 1) % len) as usize;
        &self.coeffs[j] * &self.ratio.pow(block as i32)
    }

    /// Exact sum of the whole series: `(sum k_j) * q / (1 - q)`.
    pub fn total(&self) -> Rational {
        self.coeff_sum() * &self.ratio / (Rational::one() - &self.ratio)
    }

    /// Exact tail `sum_{i > n} a_i`, by closed form. `tail(0)` is the total.
    pub fn tail(&self, n: u64) -> Rational {
        let len = self.block_len() as u64;
        let full_blocks = n / len;
        let into_next = (n % len) as usize;
        // Rest of the partially consumed block...
        let mut rest = Rational::zero();
        for k in &self.coeffs[into_next..] {
            rest += k;
        }
        let q_b1 = self.ratio.pow(full_blocks as i32 + 1);
        // ...plus all blocks after it.
        let geom = self.coeff_sum() * &q_b1 * &self.ratio / (Rational::one() - &self.ratio);
        rest * q_b1 + geom
    }

    /// Distinct subset sums of a single coefficient block, sorted. For the
    /// `xm(m)` family these are exactly the digits `{0, 2, 3, ..., 2m+1, 2m+3}`.
    pub fn block_subset_sums(&self) -> Vec<Rational> {
        let mut sums = alloc::vec![Rational::zero()];
        for k in &self.coeffs {
            let shifted: Vec<Rational> = sums.iter().map(|s| s + k).collect();
            sums = merge_distinct(&sums, &shifted);
        }
        sums
    }

    /// Term/tail comparison flags for `n = 1..=depth`.
    pub fn kakeya_profile(&self, depth: u64) -> KakeyaProfile {
        let mut flags = Vec::with_capacity(depth as usize);
        let mut tail = self.total();
        for n in 1..=depth {
            let a_n = self.term(n);
            tail = tail - &a_n; // exact running tail; equals self.tail(n)
            flags.push(KakeyaFlag {
                n,
                term: a_n.clone(),
                tail: tail.clone(),
                interval_ok: a_n <= tail,
            });
        }
        KakeyaProfile { flags }
    }
}

/// Sorted merge of two sorted distinct lists, dropping duplicates.
pub(crate) fn merge_distinct(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// One row of a Kakeya term/tail comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KakeyaFlag {
    pub n: u64,
    pub term: Rational,
    pub tail: Rational,
    /// `a_n <= r_n`: the condition under which depth-n covers stay connected
    /// across this term.
    pub interval_ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KakeyaProfile {
    pub flags: Vec<KakeyaFlag>,
}

impl KakeyaProfile {
    pub fn pattern(&self) -> Vec<bool> {
        self.flags.iter().map(|f| f.interval_ok).collect()
    }
}

/// Parses the series DSL: `mg(k1,k2,...;p/q)` | `xm(m)` | `geom(c;p/q)`.
pub fn parse_series(dsl: &str) -> Result<SeriesSpec> {
    let s = dsl.trim();
    let (name, rest) = s
        .split_once('(')
        .ok_or_else(|| syntax_err(s, "expected `name(...)`"))?;
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| syntax_err(s, "missing closing `)`"))?;
    match name.trim() {
        "mg" => {
            let (coeff_part, ratio_part) = body
                .split_once(';')
                .ok_or_else(|| syntax_err(s, "mg needs `coeffs;ratio`"))?;
            let coeffs = coeff_part
                .split(',')
                .map(Rational::from_str)
                .collect::<Result<Vec<_>>>()?;
            SeriesSpec::multigeometric(coeffs, ratio_part.parse()?)
        }
        "xm" => {
            let m: u32 = body
                .trim()
                .parse()
                .map_err(|_| syntax_err(s, "xm needs a positive integer"))?;
            SeriesSpec::xm(m)
        }
        "geom" => {
            let (scale_part, ratio_part) = body
                .split_once(';')
                .ok_or_else(|| syntax_err(s, "geom needs `scale;ratio`"))?;
            SeriesSpec::geometric(scale_part.parse()?, ratio_part.parse()?)
        }
        other => Err(syntax_err(s, &format!("unknown series kind `{other}`"))),
    }
}

fn syntax_err(input: &str, msg: &str) -> Error {
    Error::InvalidSeries(format!("`{input}`: {msg}"))
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SeriesKind::XmFamily => write!(f, "xm({})", self.m.unwrap_or(0)),
            SeriesKind::Geometric => write!(f, "geom({};{})", self.coeffs[0], self.ratio),
            SeriesKind::Multigeometric => {
                write!(f, "mg(")?;
                for (i, k) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    // Integer coefficients read as integers.
                    if k.is_integer() {
                        write!(f, "{}", k.numer())?;
                    } else {
                        write!(f, "{k}")?;
                    }
                }
                write!(f, ";{})", self.ratio)
            }
        }
    }
}
