//! Fixed-point big-decimal arithmetic for the dimension solver.
//!
//! Values are `units * 10^-SCALE` with `SCALE = 60` decimal digits, giving
//! roughly ten guard digits beyond the 50 significant digits the solver
//! needs. `ln` uses the atanh series after multiplicative range reduction,
//! `exp` a Taylor series after reduction modulo `ln 2`; both truncate below
//! one unit in the last place, so accumulated error across a full solve
//! stays far under the guard digits.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Decimal digits after the point.
pub const SCALE: u32 = 60;

fn pow10(n: u32) -> BigInt {
    BigInt::from(10u32).pow(n)
}

fn scale_factor() -> BigInt {
    pow10(SCALE)
}

/// Division rounding half away from zero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let two_n = n * 2;
    let adjusted = if n.is_negative() {
        two_n - d
    } else {
        two_n + d
    };
    adjusted / (d * 2)
}

/// A fixed-point decimal with `SCALE` fractional digits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Fixed {
    units: BigInt,
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed {
            units: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        Fixed {
            units: scale_factor(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Fixed {
            units: BigInt::from(n) * scale_factor(),
        }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Fixed {
            units: n * scale_factor(),
        }
    }

    /// Nearest fixed-point value to `r` (error at most half an ulp).
    pub fn from_rational(r: &Rational) -> Self {
        Fixed {
            units: div_round(&(r.numer() * scale_factor()), r.denom()),
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.units.clone(), scale_factor())
    }

    pub fn to_f64(&self) -> f64 {
        // Split off the integer part so the fractional residue converts at
        // full f64 precision.
        let (int, frac) = self.units.div_rem(&scale_factor());
        let mut denom = 1f64;
        for _ in 0..SCALE {
            denom *= 10.0;
        }
        int.to_f64().unwrap_or(f64::NAN) + frac.to_f64().unwrap_or(f64::NAN) / denom
    }

    pub fn is_zero(&self) -> bool {
        self.units.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.units.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.units.is_negative()
    }

    pub fn abs(&self) -> Self {
        Fixed {
            units: self.units.abs(),
        }
    }

    pub fn half(&self) -> Self {
        Fixed {
            units: div_round(&self.units, &BigInt::from(2)),
        }
    }

    fn mul_units(&self, other: &Fixed) -> BigInt {
        div_round(&(&self.units * &other.units), &scale_factor())
    }

    fn div_units(&self, other: &Fixed) -> BigInt {
        let denom = other.units.abs();
        assert!(!denom.is_zero(), "division by zero");
        let num = &self.units * scale_factor();
        let q = div_round(&num.abs(), &denom);
        if self.units.is_negative() != other.units.is_negative() {
            -q
        } else {
            q
        }
    }

    fn div_int(&self, k: i64) -> Fixed {
        let d = BigInt::from(k.unsigned_abs());
        let q = div_round(&self.units.abs(), &d);
        Fixed {
            units: if self.units.is_negative() != (k < 0) {
                -q
            } else {
                q
            },
        }
    }

    /// Nearest integer (ties away from zero).
    fn round_to_bigint(&self) -> BigInt {
        div_round(&self.units, &scale_factor())
    }

    /// `ln 2` to full working precision: `2 atanh(1/3)`.
    pub fn ln2() -> Fixed {
        let third = Fixed {
            units: div_round(&scale_factor(), &BigInt::from(3)),
        };
        third.atanh_series()
    }

    /// `2 * (z + z^3/3 + z^5/5 + ...)`, for `|z| < 1`.
    fn atanh_series(&self) -> Fixed {
        let z2 = self * self;
        let mut power = self.clone();
        let mut sum = self.clone();
        let mut k = 1i64;
        loop {
            power = &power * &z2;
            if power.is_zero() {
                break;
            }
            k += 2;
            let term = power.div_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        &sum + &sum
    }

    /// Natural logarithm; panics unless `self > 0`.
    pub fn ln(&self) -> Fixed {
        assert!(self.is_positive(), "ln of non-positive value");
        let ln2 = Fixed::ln2();
        self.ln_with(&ln2)
    }

    fn ln_with(&self, ln2: &Fixed) -> Fixed {
        // Reduce to [3/4, 3/2] by powers of two: x = m * 2^e.
        let three_halves = Fixed {
            units: scale_factor() * 3 / 2,
        };
        let three_quarters = Fixed {
            units: scale_factor() * 3 / 4,
        };
        let mut m = self.clone();
        let mut e = 0i64;
        while m > three_halves {
            m = m.half();
            e += 1;
        }
        while m < three_quarters {
            m = &m + &m;
            e -= 1;
        }
        let z = &(&m - &Fixed::one()) / &(&m + &Fixed::one());
        let series = z.atanh_series();
        &series + &(ln2 * &Fixed::from_int(e))
    }

    /// Exponential, via reduction `x = n ln2 + r` with `|r| <= ln2 / 2`.
    pub fn exp(&self) -> Fixed {
        let ln2 = Fixed::ln2();
        self.exp_with(&ln2)
    }

    fn exp_with(&self, ln2: &Fixed) -> Fixed {
        let n = (self / ln2).round_to_bigint();
        let r = self - &(ln2 * &Fixed { units: &n * scale_factor() });
        // Taylor around 0.
        let mut term = Fixed::one();
        let mut sum = Fixed::one();
        let mut k = 1i64;
        loop {
            term = (&term * &r).div_int(k);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        // Scale by 2^n.
        match n.to_i64().expect("exp exponent fits i64") {
            sh if sh >= 0 => Fixed {
                units: sum.units << sh as u32,
            },
            sh => Fixed {
                units: div_round(&sum.units, &(BigInt::from(1) << (-sh) as u32)),
            },
        }
    }

    /// Square root; panics if negative.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.is_negative(), "sqrt of negative value");
        Fixed {
            units: (&self.units * scale_factor()).sqrt(),
        }
    }

    /// `ln(p/q)` exactly reduced to `ln p - ln q` on integer inputs.
    pub fn ln_rational(r: &Rational) -> Fixed {
        assert!(r.is_positive(), "ln of non-positive rational");
        let ln2 = Fixed::ln2();
        let num = Fixed::from_bigint(r.numer());
        let den = Fixed::from_bigint(r.denom());
        &num.ln_with(&ln2) - &den.ln_with(&ln2)
    }

    /// `base^exponent` for positive rational base: `exp(exponent * ln base)`.
    pub fn pow_rational_base(base: &Rational, exponent: &Fixed) -> Fixed {
        let ln2 = Fixed::ln2();
        let ln_base = {
            let num = Fixed::from_bigint(base.numer());
            let den = Fixed::from_bigint(base.denom());
            &num.ln_with(&ln2) - &den.ln_with(&ln2)
        };
        (exponent * &ln_base).exp_with(&ln2)
    }

    /// Decimal rendering with `sig` significant digits, round half away
    /// from zero; trailing zeros are kept (they are significant).
    pub fn to_decimal_string(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.units.is_zero() {
            return String::from("0");
        }
        let sign = if self.units.is_negative() { "-" } else { "" };
        let digits = self.units.abs().to_string();
        let len = digits.len();
        // Value = D.DDD... * 10^exp10 where exp10 = len - 1 - SCALE.
        let mut exp10 = len as i64 - 1 - i64::from(SCALE);
        let mut kept: Vec<u8> = if len <= sig {
            let mut v = digits.into_bytes();
            v.resize(sig, b'0');
            v
        } else {
            let mut v: Vec<u8> = digits.as_bytes()[..sig].to_vec();
            if digits.as_bytes()[sig] >= b'5' {
                // Increment with carry.
                let mut i = sig;
                loop {
                    if i == 0 {
                        v.insert(0, b'1');
                        v.pop();
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if v[i] == b'9' {
                        v[i] = b'0';
                    } else {
                        v[i] += 1;
                        break;
                    }
                }
            }
            v
        };

        let mut out = String::from(sign);
        if exp10 < 0 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(core::str::from_utf8(&kept).expect("digits"));
        } else if (exp10 as usize) < kept.len() - 1 {
            let split = exp10 as usize + 1;
            let frac = kept.split_off(split);
            out.push_str(core::str::from_utf8(&kept).expect("digits"));
            out.push('.');
            out.push_str(core::str::from_utf8(&frac).expect("digits"));
        } else {
            out.push_str(core::str::from_utf8(&kept).expect("digits"));
            for _ in 0..(exp10 as usize + 1 - kept.len()) {
                out.push('0');
            }
        }
        out
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(20))
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(15))
    }
}

macro_rules! fixed_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait for &Fixed {
            type Output = Fixed;
            fn $method(self, rhs: &Fixed) -> Fixed {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait for Fixed {
            type Output = Fixed;
            fn $method(self, rhs: Fixed) -> Fixed {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

fixed_binop!(Add, add, |a, b| Fixed {
    units: &a.units + &b.units
});
fixed_binop!(Sub, sub, |a, b| Fixed {
    units: &a.units - &b.units
});
fixed_binop!(Mul, mul, |a, b| Fixed {
    units: a.mul_units(b)
});
fixed_binop!(Div, div, |a, b| Fixed {
    units: a.div_units(b)
});

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed {
            units: -&self.units,
        }
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed { units: -self.units }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(p: i64, q: i64) -> Fixed {
        Fixed::from_rational(&Rational::new(p, q))
    }

    /// |a - b| < 10^-digits.
    fn assert_close(a: &Fixed, b: &Fixed, digits: u32) {
        let diff = (a - b).abs();
        let bound = Fixed {
            units: pow10(SCALE - digits),
        };
        assert!(
            diff < bound,
            "difference {} exceeds 1e-{digits}",
            diff.to_decimal_string(5)
        );
    }

    #[test]
    fn arithmetic_round_trip() {
        // Denominators dividing 10^SCALE are represented exactly.
        let a = fixed(3, 8);
        let b = fixed(-2, 5);
        assert_eq!((&a + &b).to_rational(), Rational::new(-1, 40));
        assert_eq!((&a - &b).to_rational(), Rational::new(31, 40));
        assert_eq!((&a * &b).to_rational(), Rational::new(-3, 20));
        assert_eq!((&a / &b).to_rational(), Rational::new(-15, 16));
        // 3/7 is not representable; conversion and arithmetic stay within
        // one unit in the last place.
        let ulp = Rational::new(1, 1) / Rational::from_int(10).pow(SCALE as i32);
        let c = fixed(3, 7);
        assert!((c.to_rational() - Rational::new(3, 7)).abs() <= ulp);
        let prod = (&c * &b).to_rational() - Rational::new(-6, 35);
        assert!(prod.abs() <= ulp);
    }

    #[test]
    fn ln_exp_inverse_each_other() {
        for (p, q) in [(1i64, 3i64), (5, 3), (22, 7), (1, 40), (97, 13)] {
            let x = fixed(p, q);
            let back = x.ln().exp();
            assert_close(&back, &x, 55);
        }
        // exp(ln2) = 2: exercises both routines against each other.
        assert_close(&Fixed::ln2().exp(), &Fixed::from_int(2), 55);
        assert_eq!(Fixed::one().ln(), Fixed::zero());
    }

    #[test]
    fn ln_matches_f64_coarsely() {
        for (p, q) in [(2i64, 1i64), (3, 1), (10, 1), (5, 3), (1, 4)] {
            let ours = fixed(p, q).ln().to_f64();
            let std = (p as f64 / q as f64).ln();
            assert!((ours - std).abs() < 1e-13, "ln({p}/{q}): {ours} vs {std}");
        }
    }

    #[test]
    fn exp_additivity() {
        // exp(a + b) = exp(a) exp(b) ties together different reduction paths.
        let a = fixed(7, 5);
        let b = fixed(-13, 4);
        let lhs = (&a + &b).exp();
        let rhs = &a.exp() * &b.exp();
        assert_close(&lhs, &rhs, 54);
    }

    #[test]
    fn sqrt_squares_back() {
        for (p, q) in [(2i64, 1i64), (3, 2), (1, 7), (1000, 1)] {
            let x = fixed(p, q);
            let s = x.sqrt();
            assert_close(&(&s * &s), &x, 55);
        }
    }

    #[test]
    fn pow_rational_base_matches_integer_powers() {
        let base = Rational::new(3, 4);
        let cube = Fixed::pow_rational_base(&base, &Fixed::from_int(3));
        assert_close(&cube, &fixed(27, 64), 55);
        let root = Fixed::pow_rational_base(&Rational::from_int(9), &fixed(1, 2));
        assert_close(&root, &Fixed::from_int(3), 55);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(fixed(1, 8).to_decimal_string(3), "0.125");
        assert_eq!(fixed(5, 4).to_decimal_string(3), "1.25");
        assert_eq!(fixed(-1, 3).to_decimal_string(4), "-0.3333");
        assert_eq!(fixed(2, 3).to_decimal_string(4), "0.6667");
        assert_eq!(Fixed::from_int(1234).to_decimal_string(2), "1200");
        assert_eq!(Fixed::from_int(1299).to_decimal_string(2), "1300");
        assert_eq!(fixed(9996, 10000).to_decimal_string(3), "1.00");
        assert_eq!(fixed(1, 1000).to_decimal_string(2), "0.0010");
        assert_eq!(Fixed::zero().to_decimal_string(5), "0");
        assert_eq!(Fixed::from_int(7).to_decimal_string(3), "7.00");
    }

    #[test]
    fn known_value_log4_of_3() {
        // ln3/ln4 to 16 digits; the f64 route independently agrees to ~1e-15.
        let val = &Fixed::ln_rational(&Rational::from_int(3))
            / &Fixed::ln_rational(&Rational::from_int(4));
        assert_eq!(val.to_decimal_string(16), "0.7924812503605781");
        assert!((val.to_f64() - 3f64.ln() / 4f64.ln()).abs() < 1e-14);
    }
}
