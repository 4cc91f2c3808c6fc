//! Certified constants: Euler's `gamma`, `e`, `ln 2` and `pi`.
//!
//! Everything here runs in binary fixed point on exact integers: a quantity
//! `x` is held as `floor(x * 2^P)` plus a count of ulps it may be off by.
//! `gamma` uses the Brent-McMillan Bessel-function formula
//!
//! ```text
//! gamma = S/V - log n + O(pi e^{-4n}),  V = sum (n^k/k!)^2,  S = sum (n^k/k!)^2 H_k
//! ```
//!
//! with `n` a power of two so that `log n` is a multiple of `ln 2`. The result
//! is cross-checked against the bundled reference digits in `data/gamma.txt`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::precreal::convert::bigint_to_bf;
use crate::precreal::{Bound, ErrReal};

/// Largest digit count served unless a caller raises it.
pub const DEFAULT_MAX_DIGITS: usize = 10_000;

const REFERENCE_GAMMA: &str = include_str!("../data/gamma.txt");
const STARTUP_CHECK_DIGITS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstName {
    Gamma,
    E,
    Ln2,
    Pi,
}

impl ConstName {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstName::Gamma => "gamma",
            ConstName::E => "e",
            ConstName::Ln2 => "ln2",
            ConstName::Pi => "pi",
        }
    }

    pub fn parse(s: &str) -> Option<ConstName> {
        [ConstName::Gamma, ConstName::E, ConstName::Ln2, ConstName::Pi].into_iter().find(|c| c.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstRequest {
    pub name: ConstName,
    pub digits: usize,
}

impl ConstRequest {
    pub fn new(name: ConstName, digits: usize) -> Self {
        ConstRequest { name, digits }
    }
}

/// A fixed-point value `mant * 2^-bits`, low by at most `err_ulps` ulps
/// (or high, the sign is not tracked).
struct Fixed {
    mant: BigUint,
    bits: usize,
    err_ulps: BigUint,
}

impl Fixed {
    fn into_errreal(self, extra: Bound) -> ErrReal {
        let mut v = bigint_to_bf(&BigInt::from(self.mant));
        if let Some(e) = v.exponent() {
            v.set_exponent(e - self.bits as i32);
        }
        let err = Bound::from_abs(&bigint_to_bf(&BigInt::from(self.err_ulps)))
            .mul(&Bound::pow2(-(self.bits as i64)))
            .add(&extra);
        ErrReal::new(v, err, self.bits + 64)
    }
}

fn digits_to_bits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize
}

/// `ln 2 = 2 atanh(1/3) = sum_j 2 / ((2j+1) 3^(2j+1))`.
fn ln2_fixed(bits: usize) -> Fixed {
    let one = BigUint::one() << bits;
    let mut t = (&one * 2u32) / 3u32;
    let mut sum = BigUint::zero();
    let mut j = 0u64;
    while !t.is_zero() {
        sum += &t / (2 * j + 1);
        t /= 9u32;
        j += 1;
    }
    // each term off by < 2 ulps, tail < 1 ulp
    Fixed { mant: sum, bits, err_ulps: BigUint::from(2 * j + 2) }
}

/// `e = sum 1/k!`.
fn e_fixed(bits: usize) -> Fixed {
    let mut t = BigUint::one() << bits;
    let mut sum = BigUint::zero();
    let mut k = 1u64;
    while !t.is_zero() {
        sum += &t;
        t /= k;
        k += 1;
    }
    Fixed { mant: sum, bits, err_ulps: BigUint::from(k + 2) }
}

/// `atan(1/x) * 2^bits` by the alternating series.
fn atan_inv_fixed(x: u64, bits: usize) -> (BigInt, u64) {
    let x2 = BigUint::from(x) * x;
    let mut t = (BigUint::one() << bits) / x;
    let mut sum = BigInt::zero();
    let mut j = 0u64;
    while !t.is_zero() {
        let term = BigInt::from(&t / (2 * j + 1));
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        t /= &x2;
        j += 1;
    }
    (sum, 2 * j + 2)
}

/// Machin: `pi = 16 atan(1/5) - 4 atan(1/239)`.
fn pi_fixed(bits: usize) -> Fixed {
    let (a, ea) = atan_inv_fixed(5, bits);
    let (b, eb) = atan_inv_fixed(239, bits);
    let v: BigInt = a * 16 - b * 4;
    Fixed { mant: v.to_biguint().expect("pi > 0"), bits, err_ulps: BigUint::from(16 * ea + 4 * eb) }
}

/// Brent-McMillan with `n = 2^m`, accurate to about `2^-target_bits`.
fn gamma_brent_mcmillan(target_bits: usize) -> ErrReal {
    // pi e^{-4n} < 2^{-target-2}
    let n_min = ((target_bits + 4) as f64 / (4.0 * std::f64::consts::LOG2_E)).ceil().max(2.0) as u64;
    let m = 64 - (n_min - 1).leading_zeros() as u64;
    let n = 1u64 << m;
    let k_max = (3.6 * n as f64).ceil() as u64 + 10;
    let guard = 2 * (64 - k_max.leading_zeros() as usize) + 24;
    let bits = target_bits + guard;
    let nn = BigUint::from(n) * n;

    let mut b = BigUint::one() << bits;
    let mut c = BigUint::zero();
    let mut v = b.clone();
    let mut s = BigUint::zero();
    for k in 1..=k_max {
        b = (&b * &nn) / (k * k);
        c = ((&c * &nn) / k + &b) / k;
        v += &b;
        s += &c;
        if b.is_zero() && c.is_zero() {
            break;
        }
    }

    // S/V in fixed point; floors keep both sums low by a relative
    // 4K(ln K + 3) 2^-bits plus 8K^2 ulps, see module docs
    let ratio = (&s << bits) / &v;
    let kf = k_max as f64;
    let ratio_ulps = 2.0 * 4.0 * kf * (kf.ln() + 3.0) * (m as f64 + 1.0) + 32.0 * kf * kf * (m as f64 + 2.0) + 2.0;
    let ln2 = ln2_fixed(bits);
    let log_n = &ln2.mant * m;
    let log_n_ulps = &ln2.err_ulps * m;

    let val = BigInt::from(ratio) - BigInt::from(log_n);
    let fixed_err = BigUint::from(ratio_ulps.ceil() as u64) + log_n_ulps;
    let fixed = Fixed { mant: val.to_biguint().expect("gamma > 0"), bits, err_ulps: fixed_err };
    // K_0(2n)/I_0(2n) < pi e^{-4n}, plus the truncated tails
    let trunc = Bound::pow2(-((4.0 * n as f64 * std::f64::consts::LOG2_E).floor() as i64) + 2);
    fixed.into_errreal(trunc)
}

/// Parsed reference digits file.
#[derive(Debug, Clone)]
pub struct ReferenceDigits {
    pub name: String,
    pub digits: usize,
    pub source: String,
    /// Decimal expansion, e.g. `0.5772...`.
    pub expansion: String,
}

impl ReferenceDigits {
    /// Header line `<name> <count> <source note...>`, then the expansion on
    /// any number of lines (whitespace ignored).
    pub fn parse(text: &str) -> Result<ReferenceDigits> {
        let bad = |detail: &str| Error::Format { what: "reference digits file", detail: detail.to_string() };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty file"))?;
        let mut fields = header.splitn(3, ' ');
        let name = fields.next().filter(|s| !s.is_empty()).ok_or_else(|| bad("missing name"))?;
        let digits: usize = fields.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad("missing digit count"))?;
        let source = fields.next().unwrap_or("").to_string();
        let expansion: String = lines.flat_map(|l| l.chars()).filter(|c| !c.is_whitespace()).collect();
        let (int, frac) = expansion.split_once('.').ok_or_else(|| bad("no decimal point"))?;
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("non-digit characters"));
        }
        if frac.len() != digits {
            return Err(bad(&format!("header says {digits} digits, found {}", frac.len())));
        }
        Ok(ReferenceDigits { name: name.to_string(), digits, source, expansion })
    }

    /// The first `d` fractional digits as an interval `[r, r + 10^-d]`
    /// (the file is truncated, not rounded).
    pub fn prefix(&self, d: usize) -> ErrReal {
        let d = d.min(self.digits);
        let (int, frac) = self.expansion.split_once('.').expect("validated");
        let num: BigInt = format!("{int}{}", &frac[..d]).parse().expect("validated digits");
        let den = BigInt::from(10u32).pow(d as u32);
        let half_ulp = BigRational::new(BigInt::one(), den.clone() * 2);
        let mid = BigRational::new(num, den) + &half_ulp;
        let prec = digits_to_bits(d) + 64;
        let r = ErrReal::from_rational(&mid, prec);
        let w = ErrReal::from_rational(&half_ulp, 64);
        r.widen(&w.abs_upper())
    }
}

pub fn bundled_gamma_reference() -> Result<ReferenceDigits> {
    ReferenceDigits::parse(REFERENCE_GAMMA)
}

/// Read-only provider with a cache of the most precise value computed so far.
pub struct ConstProvider {
    reference: ReferenceDigits,
    max_digits: usize,
    cache: RwLock<HashMap<ConstName, (usize, ErrReal)>>,
}

static GLOBAL: OnceLock<std::result::Result<ConstProvider, String>> = OnceLock::new();

impl ConstProvider {
    /// Builds a provider and validates the bundled reference file against a
    /// fresh computation of its first 100 digits.
    pub fn new(max_digits: usize) -> Result<ConstProvider> {
        let reference = bundled_gamma_reference()?;
        if reference.name != "gamma" {
            return Err(Error::SelfCheckFailed { name: "gamma", detail: format!("reference file is for {}", reference.name) });
        }
        let provider = ConstProvider { reference, max_digits, cache: RwLock::new(HashMap::new()) };
        let fresh = gamma_brent_mcmillan(digits_to_bits(STARTUP_CHECK_DIGITS + 10));
        provider.cross_check(&fresh, STARTUP_CHECK_DIGITS)?;
        Ok(provider)
    }

    /// Process-wide provider with the default digit cap.
    pub fn global() -> Result<&'static ConstProvider> {
        GLOBAL
            .get_or_init(|| ConstProvider::new(DEFAULT_MAX_DIGITS).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|detail| Error::SelfCheckFailed { name: "gamma", detail: detail.clone() })
    }

    pub fn reference(&self) -> &ReferenceDigits {
        &self.reference
    }

    fn cross_check(&self, value: &ErrReal, digits: usize) -> Result<()> {
        let r = self.reference.prefix(digits);
        if value.overlaps(&r) {
            Ok(())
        } else {
            Err(Error::SelfCheckFailed {
                name: "gamma",
                detail: format!("computed value disagrees with bundled digits within {digits} digits"),
            })
        }
    }

    /// The constant with `abs_err <= 10^-digits`.
    pub fn value(&self, req: ConstRequest) -> Result<ErrReal> {
        if req.digits == 0 {
            return Err(Error::InvalidInput("digits must be at least 1".into()));
        }
        if req.digits > self.max_digits {
            return Err(Error::OverCap { what: "constant digits", value: req.digits as u64, cap: self.max_digits as u64 });
        }
        if let Some((d, v)) = self.cache.read().expect("cache lock").get(&req.name) {
            if *d >= req.digits {
                return Ok(v.clone());
            }
        }
        let bits = digits_to_bits(req.digits) + 8;
        let v = match req.name {
            ConstName::Gamma => {
                let v = gamma_brent_mcmillan(bits);
                self.cross_check(&v, req.digits)?;
                v
            }
            ConstName::E => e_fixed(bits + 16).into_errreal(Bound::zero()),
            ConstName::Ln2 => ln2_fixed(bits + 16).into_errreal(Bound::zero()),
            ConstName::Pi => pi_fixed(bits + 16).into_errreal(Bound::zero()),
        };
        let target = Bound::from_abs(&crate::precreal::convert::rational_to_bf(
            &BigRational::new(BigInt::one(), BigInt::from(10u32).pow(req.digits as u32)),
            64,
        ));
        if *v.abs_err() > target {
            return Err(Error::SelfCheckFailed {
                name: req.name_str(),
                detail: format!("error bound {} above target", v.abs_err()),
            });
        }
        let mut cache = self.cache.write().expect("cache lock");
        let slot = cache.entry(req.name).or_insert_with(|| (req.digits, v.clone()));
        if slot.0 < req.digits {
            *slot = (req.digits, v.clone());
        }
        Ok(v)
    }
}

impl ConstRequest {
    fn name_str(&self) -> &'static str {
        self.name.as_str()
    }
}

/// Shorthand for the global provider.
pub fn const_value(req: ConstRequest) -> Result<ErrReal> {
    ConstProvider::global()?.value(req)
}
