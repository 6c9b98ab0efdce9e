//! Finite-depth interval covers of the achievement set `E(a_n)` and the
//! trichotomy classification built on them.
//!
//! The depth-n cover is the union of `[s, s + r_n]` over all distinct
//! subset sums `s` of the first n terms, where `r_n` is the exact tail.
//! Covers are nested in depth and converge to `E(a_n)` from outside.
//! Verdicts distinguish the three possible shapes of `E(a_n)`; because the
//! term/tail flag pattern of a multigeometric series is periodic in the
//! block, all-true and all-false patterns decide the shape outright, while
//! mixed patterns only ever yield an explicitly non-conclusive candidate.

use alloc::vec::Vec;
use core::fmt;

use crate::interval::{Interval, IntervalSet};
use crate::rational::Rational;
use crate::series::{KakeyaFlag, SeriesSpec};
use crate::{Error, Result};

/// Exact distinct subset sums of the first `depth` terms, ascending.
///
/// Generation folds one term at a time through a sorted two-way merge, so
/// duplicates collapse as they appear instead of after a 2^n blowup. The
/// number of *distinct* sums is capped by `budget`.
pub fn prefix_sums(spec: &SeriesSpec, depth: u64, budget: usize) -> Result<Vec<Rational>> {
    let mut sums = alloc::vec![Rational::zero()];
    for n in 1..=depth {
        let term = spec.term(n);
        let shifted: Vec<Rational> = sums.iter().map(|s| s + &term).collect();
        sums = crate::series::merge_distinct(&sums, &shifted);
        if sums.len() > budget {
            return Err(Error::BudgetExceeded {
                budget,
                needed: sums.len(),
            });
        }
    }
    Ok(sums)
}

/// A depth-n outer cover of the achievement set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LevelCover {
    pub depth: u64,
    pub cover: IntervalSet,
    pub tail_radius: Rational,
    /// Number of distinct prefix sums the cover was built from.
    pub prefix_count: usize,
}

pub fn level_cover(spec: &SeriesSpec, depth: u64, budget: usize) -> Result<LevelCover> {
    let sums = prefix_sums(spec, depth, budget)?;
    let tail = spec.tail(depth);
    let cover = cover_from_sums(&sums, &tail);
    Ok(LevelCover {
        depth,
        cover,
        tail_radius: tail,
        prefix_count: sums.len(),
    })
}

/// `normalize(U [s, s + tail])` for ascending `s`: a single sorted sweep.
fn cover_from_sums(sums: &[Rational], tail: &Rational) -> IntervalSet {
    let items = sums
        .iter()
        .map(|s| Interval::new(s.clone(), s + tail).expect("tail >= 0"))
        .collect();
    IntervalSet::from_sorted(items)
}

/// A gap of the depth-n cover, with the shallowest depth from which a gap
/// inside it has existed at every level since.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapEntry {
    pub gap: Interval,
    pub persistent_from: u64,
}

/// Gaps of the depth-`depth` cover inside `[0, total]`.
///
/// Covers are nested, so the gaps of successive covers grow; a gap of the
/// current cover is traced back to the shallowest depth at which some gap
/// inside it already existed. From that depth on it persists at every level
/// (a gap never closes as the cover shrinks).
pub fn gap_report(spec: &SeriesSpec, depth: u64, budget: usize) -> Result<Vec<GapEntry>> {
    let total_interval = Interval::new(Rational::zero(), spec.total())?;
    let deep = level_cover(spec, depth, budget)?;
    let deep_gaps = deep.cover.gaps(&total_interval)?;

    let mut entries: Vec<GapEntry> = deep_gaps
        .items()
        .iter()
        .map(|gap| GapEntry {
            gap: gap.clone(),
            persistent_from: depth,
        })
        .collect();

    // Walk back through shallower covers, recording for each current gap the
    // first depth at which a sub-gap appears.
    for d in (1..depth).rev() {
        let shallow = level_cover(spec, d, budget)?;
        let shallow_gaps = shallow.cover.gaps(&total_interval)?;
        for entry in entries.iter_mut() {
            if entry.persistent_from == d + 1
                && shallow_gaps
                    .items()
                    .iter()
                    .any(|g| entry.gap.contains(g))
            {
                entry.persistent_from = d;
            }
        }
    }
    Ok(entries)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    FiniteUnionOfIntervals,
    CantorLike,
    CantorvalCandidate,
    Undetermined,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::FiniteUnionOfIntervals => "finite-union-of-intervals",
            Verdict::CantorLike => "cantor-like",
            Verdict::CantorvalCandidate => "cantorval-candidate",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Machine-checkable evidence backing a verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    /// Term/tail flags for the first coefficient block. The flag pattern of
    /// a multigeometric series repeats with the block (terms and tails both
    /// scale by `q` per block), so this block decides every depth.
    pub kakeya_block: Vec<KakeyaFlag>,
    pub block_len: usize,
    /// True when the block pattern is all-true or all-false, making the
    /// verdict a theorem rather than finite-depth evidence.
    pub conclusive: bool,
    /// An interval contained in the cover at every checked depth (the
    /// largest component of the deepest cover; nesting makes containment at
    /// shallower depths automatic, and it is re-checked anyway).
    pub persistent_interval: Option<Interval>,
    /// A gap that has persisted across at least two depths.
    pub persistent_gap: Option<GapEntry>,
    /// `(depth, component count)` per checked depth.
    pub component_counts: Vec<(u64, usize)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Classifies the achievement set of `spec`, examining covers up to
/// `max_depth` terms. `max_depth` should span at least one full coefficient
/// block; anything shorter yields `Undetermined`.
pub fn classify(spec: &SeriesSpec, max_depth: u64, budget: usize) -> Result<Classification> {
    let block_len = spec.block_len();
    let profile = spec.kakeya_profile(block_len as u64);
    let kakeya_block = profile.flags.clone();

    let mut certificate = Certificate {
        kakeya_block,
        block_len,
        conclusive: false,
        persistent_interval: None,
        persistent_gap: None,
        component_counts: Vec::new(),
    };

    if max_depth < block_len as u64 {
        return Ok(Classification {
            verdict: Verdict::Undetermined,
            certificate,
        });
    }

    let all_true = certificate.kakeya_block.iter().all(|f| f.interval_ok);
    let all_false = certificate.kakeya_block.iter().all(|f| !f.interval_ok);
    if all_true {
        certificate.conclusive = true;
        return Ok(Classification {
            verdict: Verdict::FiniteUnionOfIntervals,
            certificate,
        });
    }
    if all_false {
        certificate.conclusive = true;
        return Ok(Classification {
            verdict: Verdict::CantorLike,
            certificate,
        });
    }

    // Mixed flags: gather finite-depth evidence. Nested covers mean the
    // deepest cover's components are contained in every shallower cover.
    let mut component_counts = Vec::new();
    let mut deepest: Option<LevelCover> = None;
    for d in 1..=max_depth {
        let lc = level_cover(spec, d, budget)?;
        component_counts.push((d, lc.cover.components()));
        deepest = Some(lc);
    }
    certificate.component_counts = component_counts;
    let deepest = deepest.expect("max_depth >= 1");

    // Largest component of the deepest cover, re-checked against every
    // shallower cover.
    let witness = deepest
        .cover
        .items()
        .iter()
        .max_by(|a, b| a.length().cmp(&b.length()))
        .cloned();
    if let Some(w) = &witness {
        for d in 1..=max_depth {
            let lc = level_cover(spec, d, budget)?;
            if !lc.cover.contains_interval(w) {
                return Ok(Classification {
                    verdict: Verdict::Undetermined,
                    certificate,
                });
            }
        }
    }
    certificate.persistent_interval = witness;

    // A gap that predates the deepest cover.
    let gaps = gap_report(spec, max_depth, budget)?;
    certificate.persistent_gap = gaps
        .iter()
        .filter(|g| g.persistent_from < max_depth)
        .min_by_key(|g| g.persistent_from)
        .cloned();

    let verdict = if certificate.persistent_interval.is_some()
        && certificate
            .persistent_interval
            .as_ref()
            .is_some_and(|w| w.length().is_positive())
        && certificate.persistent_gap.is_some()
    {
        Verdict::CantorvalCandidate
    } else {
        Verdict::Undetermined
    };
    Ok(Classification {
        verdict,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::parse_series;

    const BUDGET: usize = crate::DEFAULT_BUDGET;

    fn gn() -> SeriesSpec {
        parse_series("mg(3,2;1/4)").unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
        Interval::new(r(lo.0, lo.1), r(hi.0, hi.1)).unwrap()
    }

    /// Brute-force oracle: all 2^depth subset sums via bitmask, deduplicated
    /// through a sorted vec. Only for small depths.
    fn brute_force_sums(spec: &SeriesSpec, depth: u32) -> Vec<Rational> {
        let terms: Vec<Rational> = (1..=u64::from(depth)).map(|n| spec.term(n)).collect();
        let mut all = Vec::new();
        for mask in 0u64..(1 << depth) {
            let mut s = Rational::zero();
            for (i, t) in terms.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s += t;
                }
            }
            all.push(s);
        }
        all.sort();
        all.dedup();
        all
    }

    #[test]
    fn prefix_sums_match_brute_force() {
        for depth in 0..=8 {
            let fast = prefix_sums(&gn(), depth, BUDGET).unwrap();
            let slow = brute_force_sums(&gn(), depth as u32);
            assert_eq!(fast, slow, "depth {depth}");
        }
        let spec = SeriesSpec::xm(2).unwrap();
        for depth in 0..=6 {
            assert_eq!(
                prefix_sums(&spec, depth, BUDGET).unwrap(),
                brute_force_sums(&spec, depth as u32)
            );
        }
    }

    #[test]
    fn prefix_sums_examples() {
        assert_eq!(
            prefix_sums(&gn(), 2, BUDGET).unwrap(),
            alloc::vec![r(0, 1), r(1, 2), r(3, 4), r(5, 4)]
        );
        assert_eq!(prefix_sums(&gn(), 0, BUDGET).unwrap(), alloc::vec![r(0, 1)]);
        // All 16 subsets of {3/4, 1/2, 3/16, 1/8} give distinct sums: a
        // collision would need digit differences (values in {±1,±2,±3,±5})
        // to telescope to a multiple of 4, which they cannot. Verified by
        // the brute-force oracle above.
        assert_eq!(
            prefix_sums(&gn(), 4, BUDGET).unwrap(),
            brute_force_sums(&gn(), 4)
        );
        assert_eq!(prefix_sums(&gn(), 4, BUDGET).unwrap().len(), 16);
    }

    #[test]
    fn budget_guard_fires() {
        let err = prefix_sums(&gn(), 8, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 10, .. }));
    }

    #[test]
    fn level_cover_examples() {
        let c0 = level_cover(&gn(), 0, BUDGET).unwrap();
        assert_eq!(c0.cover.items(), &[iv((0, 1), (5, 3))]);
        assert_eq!(c0.tail_radius, r(5, 3));

        let c2 = level_cover(&gn(), 2, BUDGET).unwrap();
        assert_eq!(
            c2.cover.items(),
            &[iv((0, 1), (5, 12)), iv((1, 2), (7, 6)), iv((5, 4), (5, 3))]
        );
        assert_eq!(c2.cover.measure(), r(3, 2));
        assert_eq!(c2.prefix_count, 4);
    }

    #[test]
    fn covers_nest() {
        for spec in [gn(), SeriesSpec::xm(2).unwrap(), parse_series("geom(2;1/3)").unwrap()] {
            let mut prev: Option<IntervalSet> = None;
            for d in 0..=10 {
                let cover = level_cover(&spec, d, BUDGET).unwrap().cover;
                if let Some(p) = &prev {
                    assert!(cover.is_subset_of(p), "{spec} depth {d}");
                }
                prev = Some(cover);
            }
        }
    }

    #[test]
    fn prefix_sums_stay_inside_all_covers() {
        let spec = gn();
        let sums = prefix_sums(&spec, 6, BUDGET).unwrap();
        for k in 0..=6 {
            let cover = level_cover(&spec, k, BUDGET).unwrap().cover;
            for s in &sums {
                assert!(cover.contains_point(s), "sum {s} escaped cover {k}");
            }
        }
    }

    #[test]
    fn block_aligned_covers_are_symmetric() {
        // At depths that are multiples of the block length, the consumed
        // terms form whole blocks and the cover is invariant under
        // reflection about the total.
        for m in 1..=3u32 {
            let spec = SeriesSpec::xm(m).unwrap();
            let total = spec.total();
            let block = spec.block_len() as u64;
            for k in 1..=3 {
                let cover = level_cover(&spec, block * k, BUDGET).unwrap().cover;
                assert_eq!(cover.reflect(&total), cover, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn cover_measure_monotone_and_at_least_one() {
        for m in 1..=3u32 {
            let spec = SeriesSpec::xm(m).unwrap();
            let mut prev: Option<Rational> = None;
            for d in 0..=8 {
                let measure = level_cover(&spec, d, BUDGET).unwrap().cover.measure();
                assert!(measure >= r(1, 1), "m={m} d={d} measure={measure}");
                if let Some(p) = prev {
                    assert!(measure <= p, "m={m} d={d}");
                }
                prev = Some(measure);
            }
        }
    }

    #[test]
    fn gap_report_examples() {
        let gaps = gap_report(&gn(), 2, BUDGET).unwrap();
        assert_eq!(gaps.len(), 2);
        assert_eq!(gaps[0].gap, iv((5, 12), (1, 2)));
        assert_eq!(gaps[1].gap, iv((7, 6), (5, 4)));
        assert_eq!(gaps[0].persistent_from, 2);
        assert_eq!(gaps[1].persistent_from, 2);

        // Deeper covers keep those gaps, now persistent from depth 2.
        let deeper = gap_report(&gn(), 6, BUDGET).unwrap();
        let first = deeper
            .iter()
            .find(|g| g.gap.contains(&iv((5, 12), (1, 2))))
            .expect("first gap persists");
        assert_eq!(first.persistent_from, 2);

        assert!(gap_report(&parse_series("geom(1;1/2)").unwrap(), 8, BUDGET)
            .unwrap()
            .is_empty());

        let ternary = gap_report(&parse_series("geom(2;1/3)").unwrap(), 1, BUDGET).unwrap();
        assert_eq!(ternary.len(), 1);
        assert_eq!(ternary[0].gap, iv((1, 3), (2, 3)));
    }

    #[test]
    fn classify_the_three_examples() {
        let c = classify(&gn(), 12, BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::CantorvalCandidate);
        assert!(!c.certificate.conclusive);
        let witness = c.certificate.persistent_interval.as_ref().unwrap();
        assert!(witness.contains(&iv((2, 3), (1, 1))), "witness {witness}");
        let gap = c.certificate.persistent_gap.as_ref().unwrap();
        assert!(gap.persistent_from < 12);

        let fu = classify(&parse_series("geom(1;1/2)").unwrap(), 12, BUDGET).unwrap();
        assert_eq!(fu.verdict, Verdict::FiniteUnionOfIntervals);
        assert!(fu.certificate.conclusive);

        let cantor = classify(&parse_series("geom(2;1/3)").unwrap(), 12, BUDGET).unwrap();
        assert_eq!(cantor.verdict, Verdict::CantorLike);
        assert!(cantor.certificate.conclusive);
    }

    #[test]
    fn classify_short_depth_is_undetermined() {
        let c = classify(&SeriesSpec::xm(3).unwrap(), 2, BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Undetermined);
    }
}
