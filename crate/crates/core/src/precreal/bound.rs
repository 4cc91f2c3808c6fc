use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

const BOUND_PREC: usize = 64;
const UP: RoundingMode = RoundingMode::Up;

/// A nonnegative error bound. Every operation rounds toward `+inf`, so a
/// `Bound` computed from upper bounds is itself an upper bound.
#[derive(Clone)]
pub struct Bound(BigFloat);

impl Bound {
    pub fn zero() -> Self {
        Bound(BigFloat::from_word(0, BOUND_PREC))
    }

    /// `2^e`, exact.
    pub fn pow2(e: i64) -> Self {
        let e = e.clamp(i32::MIN as i64 + 2, i32::MAX as i64 - 2) as i32;
        let mut one = BigFloat::from_word(1, BOUND_PREC);
        // 1 = 0.1b * 2^1
        one.set_exponent(e + 1);
        Bound(one)
    }

    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "bound must be a finite nonnegative value, got {x}");
        Bound(BigFloat::from_f64(x, BOUND_PREC))
    }

    /// `|x|` rounded up.
    pub fn from_abs(x: &BigFloat) -> Self {
        if x.is_zero() {
            return Bound::zero();
        }
        let mut a = x.abs();
        a.set_precision(BOUND_PREC, UP).expect("bound precision");
        Bound(a)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Bound) -> Bound {
        Bound(self.0.add(&o.0, BOUND_PREC, UP))
    }

    pub fn mul(&self, o: &Bound) -> Bound {
        Bound(self.0.mul(&o.0, BOUND_PREC, UP))
    }

    /// `self / d` where `d` must be a lower bound of the true divisor.
    pub fn div_by_lower(&self, d: &BigFloat) -> Bound {
        assert!(d.is_positive(), "division by nonpositive lower bound");
        let mut q = self.0.div(d, BOUND_PREC, UP);
        q.set_precision(BOUND_PREC, UP).expect("bound precision");
        Bound(q)
    }

    pub fn mul_u64(&self, k: u64) -> Bound {
        Bound(self.0.mul(&BigFloat::from_u64(k, BOUND_PREC), BOUND_PREC, UP))
    }

    pub fn sqrt(&self) -> Bound {
        Bound(self.0.sqrt(BOUND_PREC, UP))
    }

    pub fn max(&self, o: &Bound) -> Bound {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.0
    }

    /// Binary exponent `e` with `2^(e-1) <= self < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.0.exponent().map(i64::from)
        }
    }

    /// Nearest f64 at or above the bound (saturates to `f64::MAX`, flushes
    /// values below the f64 range to the smallest subnormal).
    pub fn to_f64_up(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exponent().unwrap_or(0);
        if e > 1023 {
            return f64::MAX;
        }
        if e < -1070 {
            return f64::from_bits(1);
        }
        let (m, e2) = super::convert::mantissa_f64(&self.0);
        let v = m * 2f64.powi(e2 as i32);
        v.next_up()
    }

    /// `log10` of the bound, accurate to about 1e-12.
    pub fn log10(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e2) = super::convert::mantissa_f64(&self.0);
        m.log10() + e2 as f64 * std::f64::consts::LOG10_2
    }

    /// Scientific rendering with three significant digits, rounded up.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let l = self.log10();
        let mut e10 = l.floor() as i64;
        let mut cents = (10f64.powf(l - e10 as f64) * 100.0 - 1e-6).ceil() as i64;
        // f64 guess, then fixed up exactly so the rendering is never below the bound
        let exact = super::convert::bf_to_rational(&self.0);
        let ten = BigInt::from(10);
        let value_of = |c: i64, e: i64| {
            let c = BigRational::from_integer(BigInt::from(c));
            let scale = e - 2;
            if scale >= 0 {
                c * BigRational::from_integer(ten.pow(scale as u32))
            } else {
                c / BigRational::from_integer(ten.pow((-scale) as u32))
            }
        };
        while value_of(cents, e10) < exact {
            cents += 1;
        }
        if cents >= 1000 {
            cents = (cents + 9) / 10;
            e10 += 1;
        }
        format!("{}.{:02}e{}", cents / 100, cents % 100, e10)
    }
}

impl PartialEq for Bound {
    fn eq(&self, o: &Self) -> bool {
        self.0.cmp(&o.0) == Some(0)
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.0.cmp(&o.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bound({})", self.render())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Ulp of `x` at precision `p` (an over-estimate of the rounding error of a
/// correctly rounded result).
pub(crate) fn ulp(x: &BigFloat, p: usize) -> Bound {
    if x.is_zero() {
        return Bound::zero();
    }
    let e = x.exponent().map(i64::from).unwrap_or(0);
    Bound::pow2(e - p as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_and_render() {
        assert_eq!(Bound::pow2(0).to_f64_up(), 1f64.next_up());
        assert_eq!(Bound::pow2(-3).render(), "1.25e-1");
        assert_eq!(Bound::from_f64(0.75).render(), "7.50e-1");
        assert_eq!(Bound::from_f64(1e-10).render(), "1.01e-10");
        assert_eq!(Bound::zero().render(), "0");
        let tiny = Bound::pow2(-4000);
        assert!(tiny.render().ends_with("e-1205"), "{}", tiny.render());
    }

    #[test]
    fn rounding_is_upward() {
        let third = Bound::from_f64(1.0).div_by_lower(&BigFloat::from_word(3, 64));
        let back = third.mul(&Bound::from_f64(3.0));
        assert!(back >= Bound::from_f64(1.0));
    }
}
