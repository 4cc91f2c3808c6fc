//! Arbitrary-precision reals with a certified absolute-error bound.
//!
//! An [`ErrReal`] is a value `v` at working precision `p` together with a
//! [`Bound`] `e` such that the true quantity lies in `[v - e, v + e]`.
//! Values are rounded to nearest by the backend (correctly rounded), and
//! every operation charges one ulp of its result to the bound, which is
//! accumulated with upward rounding.

mod bound;
pub mod convert;

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use bound::Bound;
use bound::ulp;
use convert::{bf_floor, bf_to_f64, bf_to_rational, bigint_to_bf, rational_to_bf};

const RM: RoundingMode = RoundingMode::ToEven;

/// Hard ceiling on working precision unless a caller asks for another one.
pub const DEFAULT_MAX_PRECISION_BITS: usize = 1 << 22;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Real number with a certified absolute-error bound.
#[derive(Clone)]
pub struct ErrReal {
    value: BigFloat,
    err: Bound,
    prec: usize,
}

impl ErrReal {
    pub fn new(value: BigFloat, err: Bound, prec: usize) -> Self {
        ErrReal { value, err, prec }
    }

    pub fn zero(prec: usize) -> Self {
        ErrReal::new(BigFloat::from_word(0, prec), Bound::zero(), prec)
    }

    /// `x` exactly (f64 values are dyadic).
    pub fn from_f64(x: f64, prec: usize) -> Self {
        ErrReal::new(BigFloat::from_f64(x, prec.max(64)), Bound::zero(), prec)
    }

    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        let exact = bigint_to_bf(x);
        if (x.bits() as usize) <= prec {
            return ErrReal::new(exact, Bound::zero(), prec);
        }
        let mut v = exact;
        v.set_precision(prec, RM).expect("precision");
        let err = ulp(&v, prec);
        ErrReal::new(v, err, prec)
    }

    pub fn from_biguint(x: &BigUint, prec: usize) -> Self {
        ErrReal::from_bigint(&BigInt::from(x.clone()), prec)
    }

    pub fn from_u64(x: u64, prec: usize) -> Self {
        ErrReal::from_biguint(&BigUint::from(x), prec)
    }

    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        if r.is_integer() {
            return ErrReal::from_bigint(r.numer(), prec);
        }
        let v = rational_to_bf(r, prec);
        let err = ulp(&v, prec);
        ErrReal::new(v, err, prec)
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn abs_err(&self) -> &Bound {
        &self.err
    }

    pub fn precision_bits(&self) -> usize {
        self.prec
    }

    /// Same value and bound, different working precision for later operations.
    pub fn with_precision(mut self, prec: usize) -> Self {
        self.prec = prec;
        self
    }

    /// Widens the bound by `extra`.
    pub fn widen(mut self, extra: &Bound) -> Self {
        self.err = self.err.add(extra);
        self
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    fn bound_prec(&self) -> usize {
        self.prec + 64
    }

    /// Lower end of the error interval, rounded down.
    pub fn lo(&self) -> BigFloat {
        self.value.sub(self.err.as_bigfloat(), self.bound_prec(), RoundingMode::Down)
    }

    /// Upper end of the error interval, rounded up.
    pub fn hi(&self) -> BigFloat {
        self.value.add(self.err.as_bigfloat(), self.bound_prec(), RoundingMode::Up)
    }

    pub fn to_f64(&self) -> f64 {
        bf_to_f64(&self.value)
    }

    /// Upper bound on `|x|`.
    pub fn abs_upper(&self) -> Bound {
        Bound::from_abs(&self.value).add(&self.err)
    }

    /// True when the error interval contains `x`.
    pub fn contains(&self, x: &BigFloat) -> bool {
        let d = self.value.sub_full_prec(x);
        Bound::from_abs(&d) <= self.err
    }

    /// True when the two error intervals intersect.
    pub fn overlaps(&self, o: &ErrReal) -> bool {
        let d = self.value.sub_full_prec(&o.value);
        Bound::from_abs(&d) <= self.err.add(&o.err)
    }

    /// `|self - o|` as an upper bound on the distance between the two centres.
    pub fn center_distance(&self, o: &ErrReal) -> Bound {
        let p = self.prec.max(o.prec) + 64;
        let d = self.value.sub(&o.value, p, RoundingMode::Up).abs();
        Bound::from_abs(&d).add(&ulp(&d, p))
    }

    pub fn neg(&self) -> ErrReal {
        ErrReal::new(self.value.neg(), self.err.clone(), self.prec)
    }

    pub fn abs(&self) -> ErrReal {
        ErrReal::new(self.value.abs(), self.err.clone(), self.prec)
    }

    pub fn add(&self, o: &ErrReal) -> ErrReal {
        let p = self.prec.max(o.prec);
        let v = self.value.add(&o.value, p, RM);
        let err = self.err.add(&o.err).add(&ulp(&v, p));
        ErrReal::new(v, err, p)
    }

    pub fn sub(&self, o: &ErrReal) -> ErrReal {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ErrReal) -> ErrReal {
        let p = self.prec.max(o.prec);
        let v = self.value.mul(&o.value, p, RM);
        let err = Bound::from_abs(&self.value)
            .mul(&o.err)
            .add(&Bound::from_abs(&o.value).mul(&self.err))
            .add(&self.err.mul(&o.err))
            .add(&ulp(&v, p));
        ErrReal::new(v, err, p)
    }

    /// Division; fails when the divisor's interval touches zero.
    pub fn div(&self, o: &ErrReal) -> Result<ErrReal> {
        let p = self.prec.max(o.prec);
        let denom_lo = o.value.abs().sub(o.err.as_bigfloat(), p + 64, RoundingMode::Down);
        if !denom_lo.is_positive() {
            return Err(Error::InvalidInput("divisor interval contains zero".into()));
        }
        let v = self.value.div(&o.value, p, RM);
        let r_abs = Bound::from_abs(&v).add(&ulp(&v, p));
        let err = self.err.add(&r_abs.mul(&o.err)).div_by_lower(&denom_lo).add(&ulp(&v, p));
        Ok(ErrReal::new(v, err, p))
    }

    pub fn mul_bigint(&self, k: &BigInt) -> ErrReal {
        self.mul(&ErrReal::from_bigint(k, (k.bits() as usize).max(64)))
    }

    pub fn mul_biguint(&self, k: &BigUint) -> ErrReal {
        self.mul_bigint(&BigInt::from(k.clone()))
    }

    pub fn div_u64(&self, k: u64) -> ErrReal {
        assert!(k > 0, "division by zero");
        self.div(&ErrReal::from_u64(k, 64)).expect("nonzero exact divisor")
    }

    /// Natural logarithm; requires the whole interval to be positive.
    pub fn ln(&self) -> Result<ErrReal> {
        let p = self.prec;
        let lo = self.lo();
        if !lo.is_positive() {
            return Err(Error::InvalidInput("logarithm of an interval touching zero".into()));
        }
        let v = with_consts(|cc| self.value.ln(p, RM, cc));
        let err = self.err.div_by_lower(&lo).add(&ulp(&v, p));
        Ok(ErrReal::new(v, err, p))
    }

    /// Exponential; requires `abs_err <= 1`.
    pub fn exp(&self) -> Result<ErrReal> {
        if self.err > Bound::from_f64(1.0) {
            return Err(Error::InvalidInput("exp of an interval wider than 2".into()));
        }
        let p = self.prec;
        let v = with_consts(|cc| self.value.exp(p, RM, cc));
        // |e^(x+d) - e^x| <= e^x (e^|d| - 1) <= 3 e^x |d| for |d| <= 1
        let err = Bound::from_abs(&v).mul(&self.err).mul_u64(3).add(&ulp(&v, p).mul_u64(2));
        Ok(ErrReal::new(v, err, p))
    }

    pub fn sqrt(&self) -> Result<ErrReal> {
        let p = self.prec;
        if self.hi().is_negative() {
            return Err(Error::InvalidInput("square root of a negative interval".into()));
        }
        let v = if self.value.is_negative() { BigFloat::from_word(0, p) } else { self.value.sqrt(p, RM) };
        let lo = self.lo();
        let mut prop = self.err.sqrt();
        if lo.is_positive() {
            let s = lo.sqrt(64, RoundingMode::Down);
            let alt = self.err.div_by_lower(&s);
            if alt < prop {
                prop = alt;
            }
        }
        let err = prop.add(&ulp(&v, p));
        Ok(ErrReal::new(v, err, p))
    }

    /// Fixed-point decimal rendering with `digits` fractional digits,
    /// rounded to nearest (ties away from zero).
    pub fn render_fixed(&self, digits: usize) -> String {
        render_fixed(&self.value, digits)
    }

    pub fn render_err(&self) -> String {
        self.err.render()
    }
}

/// Decimal rendering of `x` with `digits` digits after the point.
pub fn render_fixed(x: &BigFloat, digits: usize) -> String {
    let scaled = bf_to_rational(x) * BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let n: BigInt = if scaled.is_negative() {
        -((-scaled) + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    };
    let neg = n.is_negative();
    let s = n.magnitude().to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl fmt::Debug for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {} [{} bits]", self.to_f64(), self.err.render(), self.prec)
    }
}

impl fmt::Display for ErrReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(f, "{} ± {}", self.render_fixed(digits), self.err.render())
    }
}

/// `log x` with `abs_err <= 2^-target_bits`.
pub fn log_of_int_bits(x: &BigUint, target_bits: usize, ceiling_bits: usize) -> Result<ErrReal> {
    assert!(!x.is_zero(), "log of zero");
    if x.is_one() {
        return Ok(ErrReal::zero(target_bits.max(64)));
    }
    // log x < bits(x), so the value has at most log2(bits)+1 integer bits
    let int_bits = 64 - (x.bits().max(2)).leading_zeros() as usize;
    let target = Bound::pow2(-(target_bits as i64));
    let mut p = target_bits + int_bits + 8;
    loop {
        if p > ceiling_bits {
            return Err(Error::PrecisionExhausted { needed_bits: p, ceiling_bits });
        }
        let r = ErrReal::from_biguint(x, p).ln()?;
        if *r.abs_err() <= target {
            return Ok(r);
        }
        p *= 2;
    }
}

/// `log x` with `abs_err <= target`.
pub fn log_of_int(x: &BigUint, target: f64) -> Result<ErrReal> {
    assert!(target > 0.0, "target must be positive");
    let bits = (-target.log2()).ceil().max(1.0) as usize;
    log_of_int_bits(x, bits, DEFAULT_MAX_PRECISION_BITS)
}

/// Sum with every term's error and every rounding accounted.
pub fn big_sum(terms: impl IntoIterator<Item = ErrReal>) -> ErrReal {
    let mut it = terms.into_iter();
    let Some(first) = it.next() else {
        return ErrReal::zero(64);
    };
    it.fold(first, |acc, t| acc.add(&t))
}

/// `floor(x)`, certified: fails when the error interval straddles an integer.
pub fn certified_floor(x: &ErrReal) -> Result<BigInt> {
    if *x.abs_err() >= Bound::from_f64(0.25) {
        return Err(ambiguous(x));
    }
    let lo = bf_floor(&x.lo());
    let hi = bf_floor(&x.hi());
    if lo != hi {
        return Err(ambiguous(x));
    }
    Ok(lo)
}

/// `{x}` in `[0, 1)` with the bound of `x` (plus subtraction rounding).
pub fn certified_frac(x: &ErrReal) -> Result<ErrReal> {
    let k = certified_floor(x)?;
    let int = ErrReal::from_bigint(&k, (k.bits() as usize).max(64));
    let f = x.sub(&int);
    Ok(f)
}

/// `||x||` in `[0, 1/2]`. Fails when the error interval contains an
/// integer; a half-integer inside the interval is harmless.
pub fn certified_dist(x: &ErrReal) -> Result<ErrReal> {
    let f = certified_frac(x)?;
    // exact integers give an exact zero distance
    if !x.is_exact() && bf_to_rational(&x.lo()).is_integer() {
        return Err(ambiguous(x));
    }
    let half = BigFloat::from_f64(0.5, 64);
    if f.value().cmp(&half).is_some_and(|c| c <= 0) {
        Ok(f)
    } else {
        Ok(ErrReal::from_f64(1.0, f.precision_bits()).sub(&f))
    }
}

fn ambiguous(x: &ErrReal) -> Error {
    Error::AmbiguousBoundary { lo: format!("{:e}", bf_to_f64(&x.lo())), hi: format!("{:e}", bf_to_f64(&x.hi())) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(x: &ErrReal, want: f64, tol: f64) {
        assert!((x.to_f64() - want).abs() <= tol, "{x:?} vs {want}");
    }

    #[test]
    fn log_examples() {
        let z = log_of_int(&BigUint::from(1u32), 1e-30).unwrap();
        assert!(z.value().is_zero() && z.is_exact());
        let l16 = log_of_int(&BigUint::from(16u32), 1e-20).unwrap();
        approx(&l16, 2.772588722239781, 1e-15);
        assert!(l16.abs_err().to_f64_up() <= 1e-20);
        let l = log_of_int(&BigUint::from(2520u32), 1e-20).unwrap();
        approx(&l, 7.832014180505, 1e-11);
    }

    #[test]
    fn log_of_huge_integer() {
        let x = BigUint::from(3u32).pow(5000);
        let l = log_of_int_bits(&x, 100, DEFAULT_MAX_PRECISION_BITS).unwrap();
        approx(&l, 5000.0 * 3f64.ln(), 1e-9);
    }

    #[test]
    fn sums() {
        let s = big_sum(Vec::<ErrReal>::new());
        assert!(s.value().is_zero() && s.is_exact());
        let a = log_of_int(&BigUint::from(7u32), 1e-30).unwrap();
        let s = big_sum([a.clone(), a.neg()]);
        assert!(s.value().is_zero());
        assert!(*s.abs_err() <= a.abs_err().mul_u64(2).add(&Bound::pow2(-200)));
        let one = log_of_int(&BigUint::from(1u32), 1e-30).unwrap();
        let s = big_sum(std::iter::repeat_n(one, 50));
        assert!(s.value().is_zero());
    }

    #[test]
    fn frac_examples() {
        let x = ErrReal::from_f64(3.25, 128).widen(&Bound::from_f64(1e-10));
        let f = certified_frac(&x).unwrap();
        approx(&f, 0.25, 0.0);
        assert!(f.abs_err().to_f64_up() <= 1.0001e-10);

        let l16 = log_of_int(&BigUint::from(16u32), 1e-30).unwrap().widen(&Bound::from_f64(1e-10));
        approx(&certified_frac(&l16).unwrap(), 0.772588722239781, 1e-14);
        approx(&certified_dist(&l16).unwrap(), 0.227411277760219, 1e-14);

        let five = ErrReal::from_f64(5.0, 128).widen(&Bound::from_f64(1e-3));
        assert!(matches!(certified_frac(&five), Err(Error::AmbiguousBoundary { .. })));
        let seven = ErrReal::from_f64(7.0, 128).widen(&Bound::from_f64(1e-12));
        assert!(matches!(certified_dist(&seven), Err(Error::AmbiguousBoundary { .. })));
    }

    #[test]
    fn dist_at_half_keeps_error() {
        let x = ErrReal::from_f64(0.5, 128).widen(&Bound::from_f64(1e-12));
        let d = certified_dist(&x).unwrap();
        approx(&d, 0.5, 0.0);
        assert!(d.abs_err().to_f64_up() <= 1.0001e-12);
    }

    #[test]
    fn dist_of_exact_integer_is_zero() {
        let d = certified_dist(&ErrReal::from_f64(7.0, 64)).unwrap();
        assert!(d.value().is_zero() && d.is_exact());
    }

    #[test]
    fn fixed_rendering() {
        let p = 128;
        assert_eq!(render_fixed(&BigFloat::from_f64(-0.6676950, p), 6), "-0.667695");
        assert_eq!(render_fixed(&BigFloat::from_f64(2.5, p), 0), "3");
        assert_eq!(render_fixed(&BigFloat::from_f64(0.0, p), 3), "0.000");
        assert_eq!(render_fixed(&BigFloat::from_f64(-0.0001, p), 3), "0.000");
        assert_eq!(render_fixed(&BigFloat::from_f64(12.03125, p), 2), "12.03");
    }

    #[test]
    fn division_and_roots() {
        let p = 256;
        let two = ErrReal::from_u64(2, p);
        let r = two.sqrt().unwrap();
        let sq = r.mul(&r);
        assert!(sq.contains(&BigFloat::from_word(2, 64)));
        let third = ErrReal::from_u64(1, p).div(&ErrReal::from_u64(3, p)).unwrap();
        assert!(third.mul(&ErrReal::from_u64(3, p)).contains(&BigFloat::from_word(1, 64)));
        assert!(ErrReal::from_u64(1, p).div(&ErrReal::zero(p)).is_err());
    }
}
