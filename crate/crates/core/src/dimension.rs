//! Dimension of the Cantorval boundary: the exact Moran-equation root, a
//! high-precision bisection solver, and box-counting as a numerical proxy.
//!
//! The boundary of `X(m)` decomposes into two affine copies of itself at
//! ratio `(2m+2)^-n` for every `n >= 1`, so its dimension solves
//! `sum_n 2 t^(n x) = 1` with `t = 1/(2m+2)`; the geometric closed form
//! collapses this to `(2m+2)^x = 3`, i.e. `x = log 3 / log (2m+2)`. The
//! solver never assumes the collapse: it bisects the strictly decreasing
//! Moran sum directly, and the closed form is used as an independent check.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::boundary::{boundary_cover, diameter};
use crate::hiprec::Fixed;
use crate::rational::Rational;
use crate::{Error, Result};

/// A family of similarity ratios for a Moran equation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RatioFamily {
    /// Two copies at ratio `t^n` for every `n >= 1`; the Moran sum has the
    /// closed form `2 t^x / (1 - t^x)` for `x > 0`.
    GeometricPairs { ratio: Rational },
    /// A finite explicit list of ratios.
    ExplicitFinite { ratios: Vec<Rational> },
}

impl RatioFamily {
    pub fn geometric_pairs(ratio: Rational) -> Result<Self> {
        check_ratio(&ratio)?;
        Ok(RatioFamily::GeometricPairs { ratio })
    }

    pub fn explicit(ratios: Vec<Rational>) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::InvalidParameter("empty ratio family".into()));
        }
        for r in &ratios {
            check_ratio(r)?;
        }
        Ok(RatioFamily::ExplicitFinite { ratios })
    }

    /// The pairs family of the boundary of `X(m)`: `t = 1/(2m+2)`.
    pub fn for_boundary(m: u32) -> Self {
        RatioFamily::GeometricPairs {
            ratio: Rational::new(1, 2 * i64::from(m) + 2),
        }
    }
}

fn check_ratio(r: &Rational) -> Result<()> {
    if !r.is_positive() || *r >= Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "similarity ratio must lie in (0,1), got {r}"
        )));
    }
    Ok(())
}

/// The exact characterization `x = log(arg) / log(base)` of a dimension.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ClosedFormDimension {
    pub base: u32,
    pub arg: u32,
}

impl ClosedFormDimension {
    pub fn value(&self) -> Fixed {
        &Fixed::ln_rational(&Rational::from_int(i64::from(self.arg)))
            / &Fixed::ln_rational(&Rational::from_int(i64::from(self.base)))
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    pub fn display(&self) -> String {
        format!("log({})/log({})", self.arg, self.base)
    }
}

/// The boundary dimension in closed form: `(2m+2)^x = 3`.
pub fn nss_dimension_closed(m: u32) -> ClosedFormDimension {
    ClosedFormDimension {
        base: 2 * m + 2,
        arg: 3,
    }
}

/// Moran sum `sum_i k_i^x` at `x > 0`, evaluated at working precision.
fn moran_sum(family: &RatioFamily, x: &Fixed) -> Fixed {
    match family {
        RatioFamily::GeometricPairs { ratio } => {
            let u = Fixed::pow_rational_base(ratio, x);
            let two_u = &u + &u;
            &two_u / &(&Fixed::one() - &u)
        }
        RatioFamily::ExplicitFinite { ratios } => {
            let mut sum = Fixed::zero();
            for r in ratios {
                sum = &sum + &Fixed::pow_rational_base(r, x);
            }
            sum
        }
    }
}

/// Solves `sum_i k_i^x = 1` by bisection on the strictly decreasing Moran
/// sum, to bracket width `tol`. Errors with [`Error::NoSignChange`] when the
/// family cannot cross 1 (for instance a single ratio).
pub fn nss_dimension_solve(family: &RatioFamily, tol: &Rational) -> Result<Fixed> {
    if !tol.is_positive() {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let tol = Fixed::from_rational(tol);
    let one = Fixed::one();

    // f(x) = moran_sum(x) - 1, strictly decreasing. The sum exceeds 1 for
    // small positive x whenever a root exists.
    let mut lo = Fixed::from_rational(&Rational::new(1, 1_000_000_000_000i64));
    if moran_sum(family, &lo) <= one {
        return Err(Error::NoSignChange);
    }
    let mut hi = Fixed::one();
    let mut doublings = 0;
    while moran_sum(family, &hi) > one {
        hi = &hi + &hi;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::NoSignChange);
        }
    }

    while (&hi - &lo) > tol {
        let mid = (&lo + &hi).half();
        if moran_sum(family, &mid) > one {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((&lo + &hi).half())
}

/// Roots of the N-level truncations of the pairs family
/// (`sum_{n<=N} 2 t^(n x) = 1` for `N = 1..=n_max`), the fallback reading
/// of the dimension for families without an exact countable root. The
/// sequence increases toward the full root; no convergence rate is claimed.
pub fn truncated_roots(ratio: &Rational, n_max: u32, tol: &Rational) -> Result<Vec<Fixed>> {
    check_ratio(ratio)?;
    let mut roots = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mut ratios = Vec::with_capacity(2 * n as usize);
        for i in 1..=n {
            let r = ratio.pow(i as i32);
            ratios.push(r.clone());
            ratios.push(r);
        }
        roots.push(nss_dimension_solve(
            &RatioFamily::ExplicitFinite { ratios },
            tol,
        )?);
    }
    Ok(roots)
}

/// One row of a box-count table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoxTableRow {
    pub k: u32,
    pub epsilon: Rational,
    pub count: usize,
}

/// Box counts of the boundary cover on the aligned geometric grid
/// `epsilon_k = diameter * (2m+2)^-k`, `k = 1..=k_max`.
pub fn box_table(m: u32, k_max: u32, budget: usize) -> Result<Vec<BoxTableRow>> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let d = diameter(m);
    let q = Rational::new(1, 2 * i64::from(m) + 2);
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let epsilon = &d * &q.pow(k as i32);
        let cover = boundary_cover(m, &epsilon, budget)?;
        rows.push(BoxTableRow {
            k,
            epsilon,
            count: cover.count,
        });
    }
    Ok(rows)
}

/// Levels excluded from the slope fit: the first two are transients of the
/// tail-box construction, the asymptotic slope is the target.
pub const FIT_SKIP_LEVELS: u32 = 2;

/// A dimension estimate assembled from the closed form, the numeric Moran
/// root, and a box-count slope fit.
#[derive(Clone, PartialEq, Debug)]
pub struct DimensionEstimate {
    pub m: u32,
    pub closed_form: Option<ClosedFormDimension>,
    /// Bisection root of the boundary's Moran equation, at working
    /// precision (report with [`Fixed::to_decimal_string`]).
    pub numeric_root: Fixed,
    pub box_table: Vec<BoxTableRow>,
    /// Least-squares slope of `ln(count)` against `ln(1/epsilon)` over the
    /// rows with `k > FIT_SKIP_LEVELS`.
    pub fitted_slope: f64,
    /// Largest absolute fit residual (in `ln(count)` units) over the
    /// fitted rows.
    pub residual: f64,
}

/// Solver tolerance used inside [`box_dimension`].
fn default_tol() -> Rational {
    Rational::new(1, 10).pow(20)
}

pub fn box_dimension(m: u32, k_max: u32, budget: usize) -> Result<DimensionEstimate> {
    if k_max < 3 {
        return Err(Error::InvalidParameter("k_max must be >= 3".into()));
    }
    let rows = box_table(m, k_max, budget)?;
    let (fitted_slope, residual) = fit_log_slope(&rows)?;
    let closed = nss_dimension_closed(m);
    let root = nss_dimension_solve(&RatioFamily::for_boundary(m), &default_tol())?;
    Ok(DimensionEstimate {
        m,
        closed_form: Some(closed),
        numeric_root: root,
        box_table: rows,
        fitted_slope,
        residual,
    })
}

/// Least squares of `ln(count)` on `ln(1/epsilon)`, skipping transients.
fn fit_log_slope(rows: &[BoxTableRow]) -> Result<(f64, f64)> {
    let pts: Vec<(Fixed, Fixed)> = rows
        .iter()
        .filter(|r| r.k > FIT_SKIP_LEVELS)
        .map(|r| {
            let x = -Fixed::ln_rational(&r.epsilon);
            let y = Fixed::ln_rational(&Rational::from_int(r.count as i64));
            (x, y)
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two box-count levels beyond the transients".into(),
        ));
    }
    let n = Fixed::from_int(pts.len() as i64);
    let mut sx = Fixed::zero();
    let mut sy = Fixed::zero();
    let mut sxx = Fixed::zero();
    let mut sxy = Fixed::zero();
    for (x, y) in &pts {
        sx = &sx + x;
        sy = &sy + y;
        sxx = &sxx + &(x * x);
        sxy = &sxy + &(x * y);
    }
    let det = &(&n * &sxx) - &(&sx * &sx);
    let slope = &(&(&n * &sxy) - &(&sx * &sy)) / &det;
    let intercept = &(&sy - &(&slope * &sx)) / &n;
    let mut max_resid = Fixed::zero();
    for (x, y) in &pts {
        let err = (y - &(&(&slope * x) + &intercept)).abs();
        if err > max_resid {
            max_resid = err;
        }
    }
    Ok((slope.to_f64(), max_resid.to_f64()))
}

/// One weighted sequence `count_k * epsilon_k^alpha` and its shape.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalingSequence {
    pub alpha: f64,
    /// `(k, count_k * epsilon_k^alpha)`.
    pub weighted: Vec<(u32, f64)>,
    /// max/min of the weighted values over the non-transient levels.
    pub band_ratio: f64,
    /// Strictly decreasing over the non-transient levels.
    pub monotone_decreasing: bool,
    /// Strictly increasing over the non-transient levels.
    pub monotone_increasing: bool,
}

/// The scaling bookkeeping behind the dimension value, restated at the
/// countable-cover level: at the critical exponent the weighted counts
/// stay in a bounded band, while perturbing the exponent by ±0.1 sends
/// them monotonically to 0 or infinity.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalingReport {
    pub m: u32,
    pub k_max: u32,
    pub critical: ScalingSequence,
    pub supercritical: ScalingSequence,
    pub subcritical: ScalingSequence,
}

pub fn scaling_identity_check(
    m: u32,
    alpha: &Rational,
    k_max: u32,
    budget: usize,
) -> Result<ScalingReport> {
    if k_max < 3 {
        return Err(Error::InvalidParameter("k_max must be >= 3".into()));
    }
    let rows = box_table(m, k_max, budget)?;
    let tenth = Rational::new(1, 10);
    Ok(ScalingReport {
        m,
        k_max,
        critical: weighted_sequence(&rows, alpha),
        supercritical: weighted_sequence(&rows, &(alpha + &tenth)),
        subcritical: weighted_sequence(&rows, &(alpha - &tenth)),
    })
}

fn weighted_sequence(rows: &[BoxTableRow], alpha: &Rational) -> ScalingSequence {
    let alpha_fixed = Fixed::from_rational(alpha);
    let weighted: Vec<(u32, f64)> = rows
        .iter()
        .map(|r| {
            let w = &Fixed::from_int(r.count as i64)
                * &Fixed::pow_rational_base(&r.epsilon, &alpha_fixed);
            (r.k, w.to_f64())
        })
        .collect();
    let steady: Vec<f64> = weighted
        .iter()
        .filter(|(k, _)| *k > FIT_SKIP_LEVELS)
        .map(|(_, w)| *w)
        .collect();
    let max = steady.iter().cloned().fold(f64::MIN, f64::max);
    let min = steady.iter().cloned().fold(f64::MAX, f64::min);
    ScalingSequence {
        alpha: alpha.to_f64(),
        band_ratio: max / min,
        monotone_decreasing: steady.windows(2).all(|w| w[1] < w[0]),
        monotone_increasing: steady.windows(2).all(|w| w[1] > w[0]),
        weighted,
    }
}
