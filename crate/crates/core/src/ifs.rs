//! The iterated function system whose attractor is the Cantorval `X(m)`.
//!
//! For `m >= 1` the system has `2m+2` orientation-preserving similarities
//! on the base interval `I = [0, (2m+3)/(2m+1)]`, all with ratio
//! `1/(2m+2)` and offsets `d/(2m+2)` for `d` running over the digit set
//! `{0, 2, 3, ..., 2m+1, 2m+3}`. The attractor equation unions the images
//! of all `2m+2` maps. The operator `W` acts on interval sets by unioning
//! the images; `Wⁿ(I)` is the depth-n outer approximation of the attractor
//! and splits into an explicit disjoint assembly of left pieces, a central
//! interval, and right pieces, which [`SimilaritySystem::bt_assembly`]
//! materializes and cross-checks against the iterated operator.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::interval::{Interval, IntervalSet};
use crate::rational::Rational;
use crate::{Error, Result};

/// An orientation-preserving affine contraction `x -> ratio*x + offset`
/// with `ratio` in `(0,1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimilarityMap {
    ratio: Rational,
    offset: Rational,
}

impl SimilarityMap {
    pub fn new(ratio: Rational, offset: Rational) -> Result<Self> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(Error::InvalidParameter(
                "similarity ratio must lie in (0,1)".into(),
            ));
        }
        Ok(SimilarityMap { ratio, offset })
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.offset
    }

    pub fn image(&self, iv: &Interval) -> Interval {
        iv.affine(&self.ratio, &self.offset)
            .expect("similarity ratio is nonzero")
    }

    pub fn image_set(&self, s: &IntervalSet) -> IntervalSet {
        s.affine_image(&self.ratio, &self.offset)
            .expect("similarity ratio is nonzero")
    }

    /// Composition `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &SimilarityMap) -> SimilarityMap {
        SimilarityMap {
            ratio: &self.ratio * &other.ratio,
            offset: &self.ratio * &other.offset + &self.offset,
        }
    }

    /// `self` composed with itself `n` times (`n = 0` gives the identity).
    fn iterate(&self, n: u32) -> AffineWord {
        let mut word = AffineWord::identity();
        for _ in 0..n {
            word = word.then_inner(self);
        }
        word
    }
}

/// An affine map that may be the identity (ratio 1), used for composed
/// words of similarities.
#[derive(Clone, PartialEq, Eq, Debug)]
struct AffineWord {
    ratio: Rational,
    offset: Rational,
}

impl AffineWord {
    fn identity() -> Self {
        AffineWord {
            ratio: Rational::one(),
            offset: Rational::zero(),
        }
    }

    /// `self ∘ map`: apply `map` first.
    fn then_inner(&self, map: &SimilarityMap) -> AffineWord {
        AffineWord {
            ratio: &self.ratio * &map.ratio,
            offset: &self.ratio * &map.offset + &self.offset,
        }
    }

    fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.offset
    }

    fn image_set(&self, s: &IntervalSet) -> IntervalSet {
        s.affine_image(&self.ratio, &self.offset)
            .expect("word ratio is positive")
    }
}

/// The full system for a given `m`: ordered maps plus the base interval.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimilaritySystem {
    m: u32,
    maps: Vec<SimilarityMap>,
    base: Interval,
}

/// Builds the system for `X(m)`: ratio `1/(2m+2)`, offsets `0`,
/// `i/(2m+2)` for `2 <= i <= 2m+1`, and `(2m+3)/(2m+2)`.
pub fn build_ifs(m: u32) -> Result<SimilaritySystem> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let mm = i64::from(m);
    let denom = 2 * mm + 2;
    let ratio = Rational::new(1, denom);
    let mut digits: Vec<i64> = Vec::with_capacity(denom as usize);
    digits.push(0);
    digits.extend(2..=(2 * mm + 1));
    digits.push(2 * mm + 3);
    let maps = digits
        .into_iter()
        .map(|d| SimilarityMap::new(ratio.clone(), Rational::new(d, denom)))
        .collect::<Result<Vec<_>>>()?;
    let base = Interval::new(Rational::zero(), Rational::new(2 * mm + 3, 2 * mm + 1))?;
    Ok(SimilaritySystem { m, maps, base })
}

/// `[2/(2m+1), 1]`, the interval certain to lie inside the attractor.
pub fn central_interval(m: u32) -> Interval {
    let mm = i64::from(m);
    Interval::new(Rational::new(2, 2 * mm + 1), Rational::one())
        .expect("2/(2m+1) <= 1 for m >= 1")
}

impl SimilaritySystem {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn maps(&self) -> &[SimilarityMap] {
        &self.maps
    }

    pub fn base(&self) -> &Interval {
        &self.base
    }

    pub fn total(&self) -> Rational {
        self.base.hi().clone()
    }

    /// 1-based map accessor matching the usual numbering `w_1 .. w_{2m+2}`.
    fn w(&self, i: usize) -> &SimilarityMap {
        &self.maps[i - 1]
    }

    /// The operator `W`: union of the images of all maps.
    pub fn apply_operator(&self, s: &IntervalSet) -> IntervalSet {
        let mut out = IntervalSet::empty();
        for map in &self.maps {
            out = out.union(&map.image_set(s));
        }
        out
    }

    /// Exact `Wⁿ(I)`, iterating on merged interval sets. `budget` caps the
    /// component count of any level.
    pub fn iterate_cover(&self, n: u32, budget: usize) -> Result<IntervalSet> {
        let mut cover = IntervalSet::from_interval(self.base.clone());
        for _ in 0..n {
            cover = self.apply_operator(&cover);
            if cover.components() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    needed: cover.components(),
                });
            }
        }
        Ok(cover)
    }

    /// The explicit disjoint assembly of `Wⁿ(I)`: left pieces
    /// `w_2^k ∘ w_1 (W^{n-1-k}(I))` for `k = 0..n-1`, the central interval
    /// `[w_2^n(0), w_{2m+1}^n(max I)]`, and the mirrored right pieces
    /// `w_{2m+1}^{n-1-k} ∘ w_{2m+2} (W^k(I))`.
    ///
    /// Verifies that the pieces are pairwise disjoint before unioning; an
    /// overlap is reported as an error carrying the offending pieces (it
    /// would falsify this implementation, not the decomposition).
    pub fn bt_assembly(&self, n: u32, budget: usize) -> Result<IntervalSet> {
        if n < 1 {
            return Err(Error::InvalidParameter("assembly depth must be >= 1".into()));
        }
        // W^0(I) .. W^{n-1}(I); the deepest level needed by a piece is n-1.
        let mut levels: Vec<IntervalSet> = Vec::with_capacity(n as usize);
        levels.push(IntervalSet::from_interval(self.base.clone()));
        for _ in 1..n {
            let next = self.apply_operator(levels.last().expect("nonempty"));
            if next.components() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    needed: next.components(),
                });
            }
            levels.push(next);
        }

        let last = 2 * self.m as usize + 2;
        let mut pieces: Vec<IntervalSet> = Vec::with_capacity(2 * n as usize + 1);
        for k in 0..n {
            let word = self.w(2).iterate(k).then_inner(self.w(1));
            pieces.push(word.image_set(&levels[(n - 1 - k) as usize]));
        }
        pieces.push(IntervalSet::from_interval(self.central_piece(n)));
        for k in 0..n {
            let word = self.w(last - 1).iterate(n - 1 - k).then_inner(self.w(last));
            pieces.push(word.image_set(&levels[k as usize]));
        }

        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                let overlap = pieces[i].intersect(&pieces[j]);
                if !overlap.is_empty() {
                    return Err(Error::DisjointnessViolation {
                        piece_a: pieces[i].to_string(),
                        piece_b: pieces[j].to_string(),
                        witness: overlap.items()[0].to_string(),
                    });
                }
            }
        }

        let mut union = IntervalSet::empty();
        for p in &pieces {
            union = union.union(p);
        }
        Ok(union)
    }

    /// `[w_2^n(0), w_{2m+1}^n(max I)]`, the central piece of the depth-n
    /// assembly; these nest down to the central interval.
    pub fn central_piece(&self, n: u32) -> Interval {
        let last = 2 * self.m as usize + 2;
        let lo = self.w(2).iterate(n).apply(&Rational::zero());
        let hi = self.w(last - 1).iterate(n).apply(self.base.hi());
        Interval::new(lo, hi).expect("central piece is nonempty")
    }

    /// Checks `[2/(2m+1), 1] ⊆ Wⁿ(I)` exactly for every `n <= max_level`.
    pub fn central_containment(&self, max_level: u32, budget: usize) -> Result<bool> {
        let central = central_interval(self.m);
        let mut cover = IntervalSet::from_interval(self.base.clone());
        for _ in 0..=max_level {
            if !cover.contains_interval(&central) {
                return Ok(false);
            }
            cover = self.apply_operator(&cover);
            if cover.components() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    needed: cover.components(),
                });
            }
        }
        Ok(true)
    }

    /// Certified inner approximation: the union of the central interval's
    /// images under all map words of length `<= n`. Every point returned
    /// lies in the attractor. Computed incrementally as
    /// `inner_0 = central`, `inner_{k+1} = central ∪ W(inner_k)`.
    pub fn inner_approx(&self, n: u32, budget: usize) -> Result<IntervalSet> {
        let central = IntervalSet::from_interval(central_interval(self.m));
        let mut inner = central.clone();
        for _ in 0..n {
            inner = central.union(&self.apply_operator(&inner));
            if inner.components() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    needed: inner.components(),
                });
            }
        }
        Ok(inner)
    }

    /// Exact measure of the depth-n inner approximation; non-decreasing in n.
    pub fn inner_measure(&self, n: u32, budget: usize) -> Result<Rational> {
        Ok(self.inner_approx(n, budget)?.measure())
    }

    /// Verifies the five exact min/max relations the maps satisfy on the
    /// attractor, using `min = 0` and `max = (2m+3)/(2m+1)`.
    pub fn ordering_check(&self) -> OrderingReport {
        let mm = i64::from(self.m);
        let count = self.maps.len();
        let max_attr = self.base.hi();
        let mins: Vec<Rational> = self.maps.iter().map(|w| w.apply(&Rational::zero())).collect();
        let maxs: Vec<Rational> = self.maps.iter().map(|w| w.apply(max_attr)).collect();

        let mut relations = Vec::new();
        for i in 0..count - 1 {
            relations.push(OrderingRelation {
                name: alloc::format!("min w_{} < min w_{}", i + 1, i + 2),
                lhs: mins[i].clone(),
                rhs: mins[i + 1].clone(),
                holds: mins[i] < mins[i + 1],
            });
            relations.push(OrderingRelation {
                name: alloc::format!("max w_{} < max w_{}", i + 1, i + 2),
                lhs: maxs[i].clone(),
                rhs: maxs[i + 1].clone(),
                holds: maxs[i] < maxs[i + 1],
            });
        }
        // Closed forms for the interior maps: min w_i = i/(2m+2),
        // max w_i = (i(2m+1) + 2m+3) / ((2m+1)(2m+2)).
        for i in 2..=(2 * mm + 1) {
            let expect_min = Rational::new(i, 2 * mm + 2);
            let expect_max = Rational::new(i * (2 * mm + 1) + 2 * mm + 3, (2 * mm + 1) * (2 * mm + 2));
            let idx = i as usize - 1;
            relations.push(OrderingRelation {
                name: alloc::format!("min w_{i} = {expect_min}"),
                lhs: mins[idx].clone(),
                rhs: expect_min.clone(),
                holds: mins[idx] == expect_min,
            });
            relations.push(OrderingRelation {
                name: alloc::format!("max w_{i} = {expect_max}"),
                lhs: maxs[idx].clone(),
                rhs: expect_max.clone(),
                holds: maxs[idx] == expect_max,
            });
        }
        // Endpoint maps.
        let w1_max = Rational::new(2 * mm + 3, (2 * mm + 1) * (2 * mm + 2));
        relations.push(OrderingRelation {
            name: "min w_1 = 0".into(),
            lhs: mins[0].clone(),
            rhs: Rational::zero(),
            holds: mins[0].is_zero(),
        });
        relations.push(OrderingRelation {
            name: alloc::format!("max w_1 = {w1_max}"),
            lhs: maxs[0].clone(),
            rhs: w1_max.clone(),
            holds: maxs[0] == w1_max,
        });
        let wl_min = Rational::new(2 * mm + 3, 2 * mm + 2);
        relations.push(OrderingRelation {
            name: alloc::format!("min w_{count} = {wl_min}"),
            lhs: mins[count - 1].clone(),
            rhs: wl_min.clone(),
            holds: mins[count - 1] == wl_min,
        });
        relations.push(OrderingRelation {
            name: alloc::format!("max w_{count} = {max_attr}"),
            lhs: maxs[count - 1].clone(),
            rhs: max_attr.clone(),
            holds: &maxs[count - 1] == max_attr,
        });

        let all_hold = relations.iter().all(|r| r.holds);
        OrderingReport {
            m: self.m,
            relations,
            all_hold,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderingRelation {
    pub name: alloc::string::String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderingReport {
    pub m: u32,
    pub relations: Vec<OrderingRelation>,
    pub all_hold: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesSpec;
    use crate::subsum::level_cover;
    use proptest::prelude::*;

    const BUDGET: usize = crate::DEFAULT_BUDGET;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> Interval {
        Interval::new(r(lo.0, lo.1), r(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn build_examples() {
        let sys = build_ifs(1).unwrap();
        let offsets: Vec<Rational> = sys.maps().iter().map(|w| w.offset().clone()).collect();
        assert_eq!(offsets, alloc::vec![r(0, 1), r(1, 2), r(3, 4), r(5, 4)]);
        assert!(sys.maps().iter().all(|w| w.ratio() == &r(1, 4)));
        assert_eq!(sys.base(), &iv((0, 1), (5, 3)));

        assert_eq!(build_ifs(2).unwrap().base(), &iv((0, 1), (7, 5)));
        assert!(build_ifs(0).is_err());
    }

    #[test]
    fn offsets_reproduce_digit_set() {
        // offset * (2m+2) runs over {0, 2, ..., 2m+1, 2m+3}, the block
        // subset sums of the matching series.
        for m in 1..=5u32 {
            let sys = build_ifs(m).unwrap();
            let denom = Rational::from_int(2 * i64::from(m) + 2);
            let digits: Vec<Rational> = sys
                .maps()
                .iter()
                .map(|w| w.offset() * &denom)
                .collect();
            let expected = SeriesSpec::xm(m).unwrap().block_subset_sums();
            assert_eq!(digits, expected, "m={m}");
        }
    }

    #[test]
    fn iterate_cover_examples() {
        let sys = build_ifs(1).unwrap();
        assert_eq!(
            sys.iterate_cover(0, BUDGET).unwrap().items(),
            &[iv((0, 1), (5, 3))]
        );
        let w1 = sys.iterate_cover(1, BUDGET).unwrap();
        assert_eq!(
            w1.items(),
            &[iv((0, 1), (5, 12)), iv((1, 2), (7, 6)), iv((5, 4), (5, 3))]
        );
        assert_eq!(w1.measure(), r(3, 2));
    }

    #[test]
    fn component_count_follows_assembly_recurrence() {
        // The disjoint assembly forces exactly 3^n components at level n.
        for m in 1..=2u32 {
            let sys = build_ifs(m).unwrap();
            for n in 0..=6u32 {
                let cover = sys.iterate_cover(n, BUDGET).unwrap();
                assert_eq!(cover.components(), 3usize.pow(n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn bt_assembly_matches_iterated_operator() {
        for m in 1..=3u32 {
            let sys = build_ifs(m).unwrap();
            for n in 1..=6u32 {
                let assembled = sys.bt_assembly(n, BUDGET).unwrap();
                let iterated = sys.iterate_cover(n, BUDGET).unwrap();
                assert_eq!(assembled, iterated, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn bt_assembly_level_one_pieces() {
        let sys = build_ifs(1).unwrap();
        let got = sys.bt_assembly(1, BUDGET).unwrap();
        assert_eq!(
            got.items(),
            &[iv((0, 1), (5, 12)), iv((1, 2), (7, 6)), iv((5, 4), (5, 3))]
        );
        // m = 2: central piece [w_2(0), w_5(7/5)] = [1/3, 16/15].
        let sys2 = build_ifs(2).unwrap();
        assert_eq!(sys2.central_piece(1), iv((1, 3), (16, 15)));
    }

    #[test]
    fn central_interval_examples() {
        assert_eq!(central_interval(1), iv((2, 3), (1, 1)));
        assert_eq!(central_interval(2), iv((2, 5), (1, 1)));
        assert!(build_ifs(1).unwrap().central_containment(12, BUDGET).unwrap());
    }

    #[test]
    fn central_pieces_nest_onto_central_interval() {
        let sys = build_ifs(1).unwrap();
        let central = central_interval(1);
        let mut prev = sys.central_piece(1);
        assert!(prev.contains(&central));
        for n in 2..=10 {
            let piece = sys.central_piece(n);
            assert!(prev.contains(&piece), "n={n}");
            assert!(piece.contains(&central), "n={n}");
            prev = piece;
        }
    }

    #[test]
    fn series_and_ifs_views_agree() {
        // level_cover(xm(m), (m+1)k) equals W^k(I): the series-side and
        // IFS-side outer approximations are the same sets.
        for m in 1..=3u32 {
            let spec = SeriesSpec::xm(m).unwrap();
            let sys = build_ifs(m).unwrap();
            for k in 0..=4u32 {
                let depth = u64::from(m + 1) * u64::from(k);
                let series_view = level_cover(&spec, depth, BUDGET).unwrap().cover;
                let ifs_view = sys.iterate_cover(k, BUDGET).unwrap();
                assert_eq!(series_view, ifs_view, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn inner_approx_examples() {
        let sys = build_ifs(1).unwrap();
        assert_eq!(sys.inner_measure(0, BUDGET).unwrap(), r(1, 3));
        let inner1 = sys.inner_approx(1, BUDGET).unwrap();
        assert!(inner1.contains_interval(&iv((1, 6), (1, 4))));
    }

    #[test]
    fn bracketing_is_monotone() {
        let sys = build_ifs(1).unwrap();
        let one = Rational::one();
        let mut prev_inner = Rational::zero();
        let mut prev_outer = Rational::from_int(2);
        for d in 0..=7u32 {
            let inner = sys.inner_measure(d, BUDGET).unwrap();
            let outer = sys.iterate_cover(d, BUDGET).unwrap().measure();
            assert!(inner <= one && one <= outer, "d={d}");
            assert!(inner > prev_inner || d == 0, "inner stalled at d={d}");
            assert!(outer < prev_outer || d == 0, "outer stalled at d={d}");
            prev_inner = inner;
            prev_outer = outer;
        }
    }

    #[test]
    fn reflection_symmetry() {
        for m in 1..=3u32 {
            let sys = build_ifs(m).unwrap();
            let total = sys.total();
            for n in 0..=5u32 {
                let cover = sys.iterate_cover(n, BUDGET).unwrap();
                assert_eq!(cover.reflect(&total), cover, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn ordering_relations_hold() {
        for m in 1..=4u32 {
            let report = build_ifs(m).unwrap().ordering_check();
            for rel in &report.relations {
                assert!(rel.holds, "m={m}: {} ({} vs {})", rel.name, rel.lhs, rel.rhs);
            }
            assert!(report.all_hold);
        }
        // Spot values: max w_2 = 11/12 and max w_1 = 5/12 for m = 1,
        // min w_6 = 7/6 for m = 2.
        let r1 = build_ifs(1).unwrap().ordering_check();
        assert!(r1
            .relations
            .iter()
            .any(|rel| rel.name == "max w_2 = 11/12" && rel.holds));
        assert!(r1
            .relations
            .iter()
            .any(|rel| rel.name == "max w_1 = 5/12" && rel.holds));
        let r2 = build_ifs(2).unwrap().ordering_check();
        assert!(r2
            .relations
            .iter()
            .any(|rel| rel.name == "min w_6 = 7/6" && rel.holds));
    }

    prop_compose! {
        fn arb_subset_of_base()(ivs in prop::collection::vec((0i64..100, 0i64..100), 1..6)) -> IntervalSet {
            // Intervals inside [0, 5/3], endpoints on a /60 grid.
            IntervalSet::normalize(ivs.into_iter().map(|(a, b)| {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                Interval::new(Rational::new(lo, 60), Rational::new(hi, 60)).unwrap()
            }))
        }
    }

    proptest! {
        #[test]
        fn operator_is_monotone(a in arb_subset_of_base(), b in arb_subset_of_base()) {
            let sys = build_ifs(1).unwrap();
            let joined = a.union(&b);
            let wa = sys.apply_operator(&a);
            let wjoined = sys.apply_operator(&joined);
            prop_assert!(wa.is_subset_of(&wjoined));
        }
    }
}
