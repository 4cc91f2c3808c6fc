//! Exact integers of the shape `c * 2^E`, where `E` may itself be such a
//! tower. Enough to hold `T_n = 2^(n T_{n-1})` and to compare it exactly
//! with anything else of that shape.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Values below `2^SMALL_BITS` are always stored as plain integers.
const SMALL_BITS: u64 = 1 << 12;

/// Deepest `T_n` handed out.
pub const TOWER_DEPTH_CAP: usize = 6;

#[derive(Clone, PartialEq, Eq)]
pub enum TowerInt {
    Int(BigUint),
    /// `coeff * 2^exp`, only used when the value is at least `2^SMALL_BITS`.
    Pow2 { coeff: u64, exp: Box<TowerInt> },
}

enum Diff {
    Exact(BigInt),
    Huge(Ordering),
}

impl TowerInt {
    pub fn from_u64(x: u64) -> TowerInt {
        TowerInt::Int(BigUint::from(x))
    }

    /// `coeff * 2^exp`.
    pub fn pow2_times(coeff: u64, exp: TowerInt) -> TowerInt {
        assert!(coeff >= 1, "tower coefficient must be positive");
        if let Some(e) = exp.materialize(64) {
            let e = e.to_u64().expect("fits in 64 bits");
            if e + 64 <= SMALL_BITS {
                return TowerInt::Int(BigUint::from(coeff) << e);
            }
        }
        TowerInt::Pow2 { coeff, exp: Box::new(exp) }
    }

    /// `k * self` for a small `k`.
    pub fn mul_small(&self, k: u64) -> TowerInt {
        assert!(k >= 1);
        match self {
            TowerInt::Int(x) => {
                let v = x * k;
                if v.bits() <= SMALL_BITS {
                    return TowerInt::Int(v);
                }
                // move to c * 2^e with c < 2^64, exactly
                let tz = v.trailing_zeros().unwrap_or(0);
                let c = &v >> tz;
                let c = c.to_u64().expect("large plain integers only arise as small multiples of powers of two");
                TowerInt::Pow2 { coeff: c, exp: Box::new(TowerInt::from_u64(tz)) }
            }
            TowerInt::Pow2 { coeff, exp } => TowerInt::Pow2 {
                coeff: coeff.checked_mul(k).expect("tower coefficient overflow"),
                exp: exp.clone(),
            },
        }
    }

    /// The value as a plain integer when it has at most `max_bits` bits.
    pub fn materialize(&self, max_bits: u64) -> Option<BigUint> {
        match self {
            TowerInt::Int(x) => (x.bits() <= max_bits).then(|| x.clone()),
            TowerInt::Pow2 { coeff, exp } => {
                let e = exp.materialize(64)?.to_u64()?;
                let bits = e.checked_add(64 - coeff.leading_zeros() as u64)?;
                if bits > max_bits {
                    return None;
                }
                Some(BigUint::from(*coeff) << e)
            }
        }
    }

    /// `log2` when the value is a power of two and the result fits the
    /// representation.
    pub fn log2_exact(&self) -> Option<TowerInt> {
        match self {
            TowerInt::Int(x) => {
                let tz = x.trailing_zeros()?;
                (x >> tz).is_one().then(|| TowerInt::Int(BigUint::from(tz)))
            }
            TowerInt::Pow2 { coeff, exp } => {
                if !coeff.is_power_of_two() {
                    return None;
                }
                let s = coeff.trailing_zeros() as u64;
                if s == 0 {
                    return Some((**exp).clone());
                }
                match &**exp {
                    TowerInt::Int(e) => Some(TowerInt::Int(e + s)),
                    TowerInt::Pow2 { .. } => None,
                }
            }
        }
    }

    /// Number of `2^` levels above the integers.
    pub fn height(&self) -> usize {
        match self {
            TowerInt::Int(_) => 0,
            TowerInt::Pow2 { exp, .. } => 1 + exp.height(),
        }
    }

    /// `self - other`, exact when it is small enough to matter.
    fn diff(&self, other: &TowerInt, limit: u64) -> Diff {
        match (self.materialize(limit), other.materialize(limit)) {
            (Some(a), Some(b)) => Diff::Exact(BigInt::from(a) - BigInt::from(b)),
            (None, Some(b)) => match self.materialize(2 * limit) {
                Some(a) => Diff::Exact(BigInt::from(a) - BigInt::from(b)),
                // self >= 2^(2 limit), other < 2^limit
                None => Diff::Huge(Ordering::Greater),
            },
            (Some(_), None) => match other.diff(self, limit) {
                Diff::Exact(d) => Diff::Exact(-d),
                Diff::Huge(o) => Diff::Huge(o.reverse()),
            },
            (None, None) => {
                let (TowerInt::Pow2 { coeff: ca, exp: ea }, TowerInt::Pow2 { coeff: cb, exp: eb }) = (self, other)
                else {
                    unreachable!("plain integers always materialize above SMALL_BITS")
                };
                // both values exceed 2^limit, so both exponents exceed limit - 64
                match ea.diff(eb, limit) {
                    Diff::Exact(k) if k.abs() <= BigInt::from(128) => {
                        let k = k.to_i64().expect("small");
                        let (l, r) = if k >= 0 {
                            (BigUint::from(*ca) << k as u64, BigUint::from(*cb))
                        } else {
                            (BigUint::from(*ca), BigUint::from(*cb) << (-k) as u64)
                        };
                        match l.cmp(&r) {
                            Ordering::Equal => Diff::Exact(BigInt::zero()),
                            // a nonzero multiple of 2^min(ea, eb), far beyond any small number
                            o => Diff::Huge(o),
                        }
                    }
                    Diff::Exact(k) => Diff::Huge(if k.is_positive() { Ordering::Greater } else { Ordering::Less }),
                    Diff::Huge(o) => Diff::Huge(o),
                }
            }
        }
    }
}

impl Ord for TowerInt {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.diff(other, SMALL_BITS + 64) {
            Diff::Exact(d) => d.sign().cmp_zero(),
            Diff::Huge(o) => o,
        }
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

impl PartialOrd for TowerInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerInt::Int(x) if x.bits() <= 32 => write!(f, "{x}"),
            TowerInt::Int(x) => match self.log2_exact() {
                Some(e) => write!(f, "2^{e}"),
                None if x.bits() <= 64 => write!(f, "{x}"),
                None => write!(f, "<{}-bit integer>", x.bits()),
            },
            TowerInt::Pow2 { coeff: 1, exp } => write!(f, "2^({exp})"),
            TowerInt::Pow2 { coeff, exp } => write!(f, "{coeff}*2^({exp})"),
        }
    }
}

impl fmt::Debug for TowerInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerInt({self})")
    }
}

fn tower_unchecked(n: usize) -> TowerInt {
    let mut t = TowerInt::from_u64(2);
    for k in 2..=n {
        t = TowerInt::pow2_times(1, t.mul_small(k as u64));
    }
    t
}

/// `T_1 = 2`, `T_n = (2^n)^(T_{n-1})`.
pub fn tower_t(n: usize) -> Result<TowerInt> {
    if n == 0 {
        return Err(Error::InvalidInput("towers start at n = 1".into()));
    }
    if n > TOWER_DEPTH_CAP {
        return Err(Error::DepthCap { depth: n, cap: TOWER_DEPTH_CAP });
    }
    Ok(tower_unchecked(n))
}

/// `s_n = sum_{k<=n} 1/T_k`: exact while the denominator fits, otherwise
/// only `log2` of the denominator.
#[derive(Debug, Clone)]
pub struct PartialSum {
    pub n: usize,
    pub exact: Option<BigRational>,
    /// `s_n = p / T_n` in lowest terms (the numerator is odd).
    pub log2_denominator: TowerInt,
}

pub fn tower_partial(n: usize) -> Result<PartialSum> {
    let t_n = tower_t(n)?;
    let log2_denominator = t_n.log2_exact().expect("T_n is a power of two");
    let exact = if n <= 3 {
        let mut s = BigRational::zero();
        for k in 1..=n {
            let t = tower_unchecked(k).materialize(SMALL_BITS).expect("small tower");
            s += BigRational::new(BigInt::one(), BigInt::from(t));
        }
        Some(s)
    } else {
        None
    };
    Ok(PartialSum { n, exact, log2_denominator })
}

/// `0 < T - s_n < lambda^(-T_n)`, decided exactly.
///
/// `T - s_n` lies strictly between `2^{-(n+1) T_n}` and
/// `2^{-(n+1) T_n} (1 + 2^{1 - T_{n+1}})`, so the claim fails when
/// `lambda >= 2^(n+1)` and holds when `r = 2^(n+1)/lambda` exceeds
/// `1 + 2^{1 - T_{n+1}}`.
pub fn verify_super_liouville(n: usize, lambda: &BigRational) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if n > TOWER_DEPTH_CAP {
        return Err(Error::DepthCap { depth: n, cap: TOWER_DEPTH_CAP });
    }
    if *lambda <= BigRational::one() {
        return Err(Error::InvalidInput("lambda must exceed 1".into()));
    }
    let two_pow = BigRational::from_integer(BigInt::one() << (n + 1));
    if *lambda >= two_pow {
        return Ok(false);
    }
    let r = two_pow / lambda;
    let inv = (r.clone() - BigRational::one()).recip();
    // 1/(r-1) < 2^m
    let m = inv.ceil().to_integer().bits() + 1;
    let t_next = tower_unchecked(n + 1);
    if TowerInt::Int(BigUint::from(m + 1)) < t_next {
        Ok(true)
    } else {
        Err(Error::InvalidInput(format!("lambda is too close to 2^{} to decide", n + 1)))
    }
}

/// Irrationality base of `T` seen through `s_n`: `log2 beta` lies in
/// `(beta_log2 - 4 * 2^-deficit_exp, beta_log2)`.
#[derive(Debug, Clone)]
pub struct TowerBeta {
    pub n: usize,
    /// `q = T_n`
    pub q: TowerInt,
    pub beta_log2: u64,
    pub deficit_exp: TowerInt,
}

impl TowerBeta {
    /// `2^beta_log2`, the value `beta` rounds to.
    pub fn beta_rounded(&self) -> BigUint {
        BigUint::one() << self.beta_log2
    }
}

pub fn beta_at_partial(n: usize) -> Result<TowerBeta> {
    let q = tower_t(n)?;
    Ok(TowerBeta { n, q, beta_log2: n as u64 + 1, deficit_exp: tower_unchecked(n + 1) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn small_towers() {
        assert_eq!(tower_t(1).unwrap(), TowerInt::from_u64(2));
        assert_eq!(tower_t(2).unwrap(), TowerInt::from_u64(16));
        assert_eq!(tower_t(3).unwrap(), TowerInt::Int(BigUint::one() << 48u32));
        assert_eq!(tower_t(3).unwrap().log2_exact().unwrap(), TowerInt::from_u64(48));
        assert!(matches!(tower_t(7), Err(Error::DepthCap { .. })));
    }

    #[test]
    fn big_towers_are_ordered() {
        let ts: Vec<TowerInt> = (1..=6).map(|n| tower_t(n).unwrap()).collect();
        for w in ts.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(ts[3].to_string(), "2^(2^50)");
        assert_eq!(ts[3].log2_exact().unwrap(), TowerInt::Int(BigUint::one() << 50u32));
        assert_eq!(ts[5].height(), 3);
        assert_eq!(ts[5].cmp(&ts[5].clone()), Ordering::Equal);
    }

    #[test]
    fn close_values_compare_exactly() {
        let big = TowerInt::pow2_times(3, TowerInt::from_u64(5000));
        let bigger = TowerInt::pow2_times(1, TowerInt::from_u64(5002));
        assert!(big < bigger);
        assert_eq!(
            TowerInt::pow2_times(4, TowerInt::from_u64(5000)).cmp(&TowerInt::pow2_times(1, TowerInt::from_u64(5002))),
            Ordering::Equal
        );
        let huge = tower_t(5).unwrap();
        assert!(huge.mul_small(3) > huge);
    }

    #[test]
    fn partial_sums() {
        let s2 = tower_partial(2).unwrap();
        assert_eq!(s2.exact.unwrap(), rat(9, 16));
        assert_eq!(s2.log2_denominator, TowerInt::from_u64(4));
        assert!(tower_partial(4).unwrap().exact.is_none());
    }

    #[test]
    fn super_liouville_inequality() {
        assert!(verify_super_liouville(2, &rat(4, 1)).unwrap());
        assert!(verify_super_liouville(3, &rat(8, 1)).unwrap());
        assert!(!verify_super_liouville(2, &rat(8, 1)).unwrap());
        assert!(verify_super_liouville(2, &rat(79, 10)).unwrap());
        assert!(verify_super_liouville(5, &rat(63, 1)).unwrap());
        assert!(verify_super_liouville(1, &rat(399, 100)).unwrap());
    }

    #[test]
    fn beta_at_partials() {
        assert_eq!(beta_at_partial(2).unwrap().beta_rounded(), BigUint::from(8u32));
        assert_eq!(beta_at_partial(3).unwrap().beta_rounded(), BigUint::from(16u32));
    }
}
