//! Closed intervals with rational endpoints and canonical sets of them.
//!
//! Every set in this crate is a finite union of closed intervals, kept
//! sorted, pairwise disjoint, and separated by strict gaps (touching or
//! overlapping intervals merge on construction). Subtraction takes the
//! closure of each remnant, so results stay inside the closed-set algebra.
//! Degenerate point intervals are legal and retained: loose points of an
//! achievement set are geometry, not noise.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;
use crate::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::MalformedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_int(2)
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed intervals intersect iff neither lies strictly to one side.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Exact affine image `x -> ratio * x + offset`. A negative ratio flips
    /// the endpoints.
    pub fn affine(&self, ratio: &Rational, offset: &Rational) -> Result<Self> {
        if ratio.is_zero() {
            return Err(Error::ZeroRatio);
        }
        let a = ratio * &self.lo + offset;
        let b = ratio * &self.hi + offset;
        if ratio.is_positive() {
            Ok(Interval { lo: a, hi: b })
        } else {
            Ok(Interval { lo: b, hi: a })
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A canonical finite union of closed intervals: items sorted by `lo`,
/// consecutive items separated by a strict gap (`a.hi < b.lo`).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    items: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { items: Vec::new() }
    }

    /// Canonical merged form of an arbitrary collection of intervals.
    /// Idempotent; the union of points is preserved exactly.
    pub fn normalize<I: IntoIterator<Item = Interval>>(raw: I) -> Self {
        let mut items: Vec<Interval> = raw.into_iter().collect();
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        Self::from_sorted(items)
    }

    /// Merge intervals already sorted by `lo`. Touching intervals collapse.
    pub(crate) fn from_sorted(items: Vec<Interval>) -> Self {
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalSet { items: merged }
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet {
            items: alloc::vec![iv],
        }
    }

    pub fn items(&self) -> &[Interval] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The number of connectivity components.
    pub fn components(&self) -> usize {
        self.items.len()
    }

    /// Total length, exact: `sum(hi - lo)`.
    pub fn measure(&self) -> Rational {
        let mut m = Rational::zero();
        for iv in &self.items {
            m += &iv.length();
        }
        m
    }

    /// Smallest interval containing the set, if nonempty.
    pub fn span(&self) -> Option<Interval> {
        match (self.items.first(), self.items.last()) {
            (Some(a), Some(b)) => Some(Interval {
                lo: a.lo.clone(),
                hi: b.hi.clone(),
            }),
            _ => None,
        }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        // Merge two sorted lists, then collapse.
        let mut items = Vec::with_capacity(self.items.len() + other.items.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            if self.items[i].lo <= other.items[j].lo {
                items.push(self.items[i].clone());
                i += 1;
            } else {
                items.push(other.items[j].clone());
                j += 1;
            }
        }
        items.extend_from_slice(&self.items[i..]);
        items.extend_from_slice(&other.items[j..]);
        Self::from_sorted(items)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            let a = &self.items[i];
            let b = &other.items[j];
            if a.intersects(b) {
                let lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
                let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
                out.push(Interval { lo, hi });
            }
            // Advance the side that ends first; on ties both can move, but
            // advancing one is enough for correctness.
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Intersections of a canonical set are sorted and disjoint, but two
        // adjacent results may touch at a point (e.g. point components), so
        // re-merge.
        Self::from_sorted(out)
    }

    /// Pointwise difference followed by componentwise closure, so the result
    /// is again a union of closed intervals. `[0,5/3] - [2/3,1]` is
    /// `[0,2/3] ∪ [1,5/3]`.
    pub fn subtract(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.items {
            let mut cursor = a.lo.clone();
            let mut covered_any = false;
            for b in &other.items {
                if b.hi < a.lo {
                    continue;
                }
                if b.lo > a.hi {
                    break;
                }
                covered_any = true;
                if b.lo > cursor {
                    out.push(Interval {
                        lo: cursor.clone(),
                        hi: b.lo.clone(),
                    });
                }
                if b.hi > cursor {
                    cursor = b.hi.clone();
                }
            }
            if !covered_any {
                out.push(a.clone());
            } else if cursor < a.hi {
                out.push(Interval {
                    lo: cursor,
                    hi: a.hi.clone(),
                });
            }
        }
        Self::from_sorted(out)
    }

    /// Bounded complementary intervals inside `within`. Errors unless
    /// `within` contains the whole set.
    pub fn gaps(&self, within: &Interval) -> Result<IntervalSet> {
        for iv in &self.items {
            if !within.contains(iv) {
                return Err(Error::NotContained);
            }
        }
        Ok(IntervalSet::from_interval(within.clone()).subtract(self))
    }

    /// Exact image under `x -> ratio * x + offset`.
    pub fn affine_image(&self, ratio: &Rational, offset: &Rational) -> Result<IntervalSet> {
        if ratio.is_zero() {
            return Err(Error::ZeroRatio);
        }
        let mut items: Vec<Interval> = self
            .items
            .iter()
            .map(|iv| iv.affine(ratio, offset))
            .collect::<Result<_>>()?;
        if ratio.is_negative() {
            items.reverse();
        }
        // An injective affine map preserves disjointness and order, so the
        // result is already canonical.
        Ok(IntervalSet { items })
    }

    /// Image under the reflection `x -> center_times_2 - x` (an involution).
    pub fn reflect(&self, center_times_2: &Rational) -> IntervalSet {
        self.affine_image(&-Rational::one(), center_times_2)
            .expect("ratio -1 is nonzero")
    }

    pub fn contains_interval(&self, iv: &Interval) -> bool {
        // Canonical form: iv fits iff a single item contains it.
        let idx = self.items.partition_point(|it| it.hi < iv.lo);
        self.items.get(idx).is_some_and(|it| it.contains(iv))
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let idx = self.items.partition_point(|it| &it.hi < x);
        self.items.get(idx).is_some_and(|it| it.contains_point(x))
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.items.iter().all(|iv| other.contains_interval(iv))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, iv) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        Self::normalize(iter)
    }
}
