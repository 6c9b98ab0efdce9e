//! The self-similar decomposition of the Cantorval boundary.
//!
//! Write `D = (2m+3)/(2m+1)` for the diameter of `X(m)` and `q = 1/(2m+2)`.
//! The boundary splits into countably many pairwise disjoint affine copies
//! of itself: for each level `n >= 1` a left copy at offset
//! `sum_{i<n} 2 q^i` with ratio `q^n`, and its mirror image under the
//! involution `x -> D - x`. The copies accumulate from both sides on the
//! endpoints `2/(2m+1)` and `1` of the central interval. All geometry here
//! (distances between copies, extents, ε-covers for box counting) is
//! derived from the exact copy extents; closed forms quoted from the
//! literature are compared against the derived values and flagged when
//! they disagree, never trusted over the geometry.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::interval::{Interval, IntervalSet};
use crate::rational::Rational;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// One affine copy of the boundary set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryCopy {
    pub m: u32,
    pub side: Side,
    pub level: u32,
    /// Image of 0 under the copy map (left copies only; right copies are
    /// reflections and record the reflected offset).
    pub offset: Rational,
    pub ratio: Rational,
    pub extent: Interval,
}

fn q(m: u32) -> Rational {
    Rational::new(1, 2 * i64::from(m) + 2)
}

/// Diameter of `X(m)`: `(2m+3)/(2m+1)`.
pub fn diameter(m: u32) -> Rational {
    Rational::new(2 * i64::from(m) + 3, 2 * i64::from(m) + 1)
}

/// `sum_{i=1}^{n-1} 2 q^i`, the offset of the level-n left copy.
fn left_offset(m: u32, n: u32) -> Rational {
    let q = q(m);
    // 2q (1 - q^{n-1}) / (1 - q), exact.
    Rational::from_int(2) * &q * (Rational::one() - q.pow(n as i32 - 1))
        / (Rational::one() - &q)
}

/// Exact reflection `x -> (2m+3)/(2m+1) - x`.
pub fn involution(m: u32, x: &Rational) -> Rational {
    diameter(m) - x
}

/// Exact extent (min/max span) of the level-n copy on the given side.
/// The copy has diameter `D * q^n`.
pub fn copy_extent(m: u32, side: Side, n: u32) -> Interval {
    let ratio = q(m).pow(n as i32);
    let lo = left_offset(m, n);
    let hi = &lo + &(diameter(m) * &ratio);
    let left = Interval::new(lo, hi).expect("positive diameter");
    match side {
        Side::Left => left,
        Side::Right => {
            let lo = involution(m, left.hi());
            let hi = involution(m, left.lo());
            Interval::new(lo, hi).expect("reflection preserves order")
        }
    }
}

pub fn boundary_copy(m: u32, side: Side, n: u32) -> BoundaryCopy {
    let extent = copy_extent(m, side, n);
    BoundaryCopy {
        m,
        side,
        level: n,
        offset: extent.lo().clone(),
        ratio: q(m).pow(n as i32),
        extent,
    }
}

/// Distance between the level-n and level-(n+1) copies on the same side,
/// computed from extents: `min C_{n+1} - max C_n = (2m-1)/((2m+1)(2m+2)^n)`.
pub fn neighbor_distance(m: u32, n: u32) -> Rational {
    let cur = copy_extent(m, Side::Left, n);
    let next = copy_extent(m, Side::Left, n + 1);
    next.lo() - cur.hi()
}

/// The closed form for the neighbor distance as stated in the literature:
/// `1/((2m+1)(2m+2)^n)`. Matches the derived value only at `m = 1`.
pub fn neighbor_distance_stated(m: u32, n: u32) -> Rational {
    Rational::new(1, 2 * i64::from(m) + 1) * q(m).pow(n as i32)
}

/// Distance between the mirrored level-n copies, from extents:
/// `min C_n^r - max C_n^l`. Tends to the central interval length
/// `(2m-1)/(2m+1)` as `n` grows.
pub fn symmetric_distance(m: u32, n: u32) -> Rational {
    let left = copy_extent(m, Side::Left, n);
    let right = copy_extent(m, Side::Right, n);
    right.lo() - left.hi()
}

/// Closed form `D - 2 (sum_{i=1}^{n-1} 2 q^i + q^n D)` for the symmetric
/// distance (the variant summing to `n-1`; it agrees with the extents).
pub fn symmetric_distance_formula(m: u32, n: u32) -> Rational {
    let two = Rational::from_int(2);
    diameter(m) - two * (left_offset(m, n) + q(m).pow(n as i32) * diameter(m))
}

/// The variant of the symmetric-distance closed form with the sum running
/// to `n` instead of `n-1`, found in one statement of the formula; it
/// disagrees with the geometry (at `m=1, n=1` it yields `-1/6`).
pub fn symmetric_distance_stated_variant(m: u32, n: u32) -> Rational {
    let two = Rational::from_int(2);
    diameter(m) - two * (left_offset(m, n + 1) + q(m).pow(n as i32) * diameter(m))
}

/// The intermediate expression `2 q^{n+1} - q^n D` appearing in one
/// derivation of the neighbor distance; inconsistent with both the final
/// closed form and the extents (the correct first term is `2 q^n`).
pub fn neighbor_distance_intermediate_variant(m: u32, n: u32) -> Rational {
    Rational::from_int(2) * q(m).pow(n as i32 + 1) - q(m).pow(n as i32) * diameter(m)
}

/// A recorded disagreement between a quoted closed form and the exact
/// geometry derived from copy extents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeometryDiscrepancy {
    pub id: &'static str,
    pub description: String,
    pub derived: Rational,
    pub stated: Rational,
    pub agree: bool,
}

/// The three recorded statement/derivation conflicts, instantiated at the
/// smallest parameters that expose them.
pub fn known_discrepancies() -> Vec<GeometryDiscrepancy> {
    let mut out = Vec::new();

    let derived = symmetric_distance(1, 1);
    let stated = symmetric_distance_stated_variant(1, 1);
    out.push(GeometryDiscrepancy {
        id: "symmetric-distance-upper-bound",
        description: String::from(
            "symmetric-distance closed form with the sum taken to n instead of n-1, at m=1, n=1",
        ),
        agree: derived == stated,
        derived,
        stated,
    });

    let derived = neighbor_distance(2, 1);
    let stated = neighbor_distance_stated(2, 1);
    out.push(GeometryDiscrepancy {
        id: "neighbor-distance-general-m",
        description: String::from(
            "neighbor-distance closed form 1/((2m+1)(2m+2)^n) vs derived (2m-1)/((2m+1)(2m+2)^n), at m=2, n=1",
        ),
        agree: derived == stated,
        derived,
        stated,
    });

    let derived = neighbor_distance(1, 1);
    let stated = neighbor_distance_intermediate_variant(1, 1);
    out.push(GeometryDiscrepancy {
        id: "neighbor-distance-intermediate-line",
        description: String::from(
            "intermediate expression 2q^(n+1) - q^n*D in one neighbor-distance derivation, at m=1, n=1",
        ),
        agree: derived == stated,
        derived,
        stated,
    });

    out
}

/// An ε-cover of the boundary set by closed boxes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryCover {
    pub epsilon: Rational,
    pub boxes: IntervalSet,
    pub count: usize,
}

/// Builds an ε-cover of the boundary of `X(m)` by recursive expansion of
/// the self-similar decomposition.
///
/// A (scaled) copy whose extent has length `<= ε` becomes a single box.
/// Otherwise its children up to a cutoff level are expanded recursively,
/// and each side's infinite tail of deeper children, together with the
/// accumulation endpoint it converges to, is closed off by one box
/// spanning from the first unexpanded child to the accumulation point.
/// The cutoff level is minimal with that tail box not longer than `ε`.
pub fn boundary_cover(m: u32, epsilon: &Rational, budget: usize) -> Result<BoundaryCover> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let geo = CoverGeometry::new(m);
    let mut boxes = Vec::new();
    geo.cover_copy(&Rational::zero(), &Rational::one(), epsilon, budget, &mut boxes)?;
    // Boxes of disjoint copies are separated by the gaps between copies, so
    // normalization merges nothing; it only re-sorts siblings emitted out
    // of order across recursion levels.
    let boxes = IntervalSet::normalize(boxes);
    Ok(BoundaryCover {
        epsilon: epsilon.clone(),
        count: boxes.components(),
        boxes,
    })
}

struct CoverGeometry {
    q: Rational,
    diameter: Rational,
    /// `2/(2m+1)`: the left accumulation point (scaled copy coordinates).
    left_acc: Rational,
    /// `2 / ((2m+1) q)`: tail-box length prefactor, so that the level-n
    /// tail box has length `scale * prefactor * q^n`.
    tail_prefactor: Rational,
}

impl CoverGeometry {
    fn new(m: u32) -> Self {
        let q = q(m);
        let left_acc = Rational::new(2, 2 * i64::from(m) + 1);
        let tail_prefactor = &left_acc / &q;
        CoverGeometry {
            q,
            diameter: diameter(m),
            left_acc,
            tail_prefactor,
        }
    }

    /// Length of the box closing one side's tail when children `>= n` stay
    /// unexpanded: `scale * sum_{i>=n} 2 q^i`.
    fn tail_len(&self, scale: &Rational, n: u32) -> Rational {
        scale * &(&self.tail_prefactor * &self.q.pow(n as i32))
    }

    fn cover_copy(
        &self,
        offset: &Rational,
        scale: &Rational,
        epsilon: &Rational,
        budget: usize,
        out: &mut Vec<Interval>,
    ) -> Result<()> {
        let extent_len = scale * &self.diameter;
        if &extent_len <= epsilon {
            out.push(Interval::new(offset.clone(), offset + &extent_len)?);
            return self.check_budget(out, budget);
        }

        let mut cutoff = 1u32;
        while self.tail_len(scale, cutoff) > *epsilon {
            cutoff += 1;
        }

        // Children strictly below the cutoff, both sides.
        let mut left_child_offset = offset.clone();
        for n in 1..cutoff {
            let child_scale = scale * &self.q.pow(n as i32);
            // Left child occupies [left_child_offset, +child_scale*D].
            self.cover_copy(&left_child_offset, &child_scale, epsilon, budget, out)?;
            // Right child: the mirror image; by the reflection symmetry of
            // the boundary it is itself an unmirrored copy at the mirrored
            // offset.
            let local = &left_child_offset - offset;
            let right_offset = offset + &(scale * &self.diameter)
                - &local
                - &(&child_scale * &self.diameter);
            self.cover_copy(&right_offset, &child_scale, epsilon, budget, out)?;
            left_child_offset += &(Rational::from_int(2) * scale * &self.q.pow(n as i32));
        }

        // Tail boxes: from the first unexpanded child to the accumulation
        // point, one per side. After the loop `left_child_offset` is the
        // minimum of the level-`cutoff` left child.
        let left_acc_point = offset + &(scale * &self.left_acc);
        out.push(Interval::new(left_child_offset.clone(), left_acc_point)?);
        let right_acc_point = offset + scale; // image of 1
        let right_tail_hi = offset + &(scale * &self.diameter)
            - &(&left_child_offset - offset);
        out.push(Interval::new(right_acc_point, right_tail_hi)?);
        self.check_budget(out, budget)
    }

    fn check_budget(&self, out: &[Interval], budget: usize) -> Result<()> {
        if out.len() > budget {
            Err(Error::BudgetExceeded {
                budget,
                needed: out.len(),
            })
        } else {
            Ok(())
        }
    }
}
