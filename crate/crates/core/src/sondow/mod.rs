//! `log S_n`, the series `F(n)`, the integral `I_n` and the linear forms
//! built from them.
//!
//! `S_n` itself is never built: `log S_n` is a sum of `exponent * log(base)`
//! with exact integer exponents.

mod integral;
mod linear;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{grouped_factors, prime_exponents, sn_factor_stream, SnParse};
use crate::precreal::{
    big_sum, certified_dist, certified_frac, log_of_int_bits, Bound, ErrReal, DEFAULT_MAX_PRECISION_BITS,
};

pub use integral::{
    asymptotic_monitor, criterion_gap, integral_in, integral_in_detail, relation_check, Monitor, RelationReport,
    DualIntegral, DUAL_AGREEMENT,
};
pub use linear::{
    linear_form_sequence, scan_records, subsequence_scan, FormVariant, LinearFormRecord, ScanHit, ScanResult, SubsequenceFit,
};

/// `log10(2e)`: `log S_n` has about `2n log10(2e)` integer digits.
pub const LOG10_2E: f64 = 0.735_365_569_019_227_4;
/// Guard digits on top of the integer part and the requested output.
pub const GUARD_DIGITS: usize = 40;

/// Knobs shared by the `S_n` computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub parse: SnParse,
    pub ceiling_bits: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { parse: SnParse::default(), ceiling_bits: DEFAULT_MAX_PRECISION_BITS }
    }
}

fn bits_for_digits(d: f64) -> usize {
    (d * std::f64::consts::LOG2_10).ceil() as usize
}

/// `log S_n` with `abs_err <= 2^-abs_bits`, summed over primes `p <= 2n`.
pub fn log_sn(n: u64, abs_bits: usize, opts: &Options) -> Result<ErrReal> {
    sum_logs(prime_exponents(n, opts.parse).into_iter().map(|(p, e)| (BigUint::from(p), e)), abs_bits, opts)
}

/// `log S_n` summed over the distinct bases left after the harmonic-window
/// grouping.
pub fn log_sn_grouped(n: u64, abs_bits: usize, opts: &Options) -> Result<ErrReal> {
    sum_logs(grouped_factors(n, opts.parse), abs_bits, opts)
}

/// `log S_n` by the literal triple product, one logarithm per factor.
pub fn log_sn_naive(n: u64, abs_bits: usize, opts: &Options) -> Result<ErrReal> {
    sum_logs(sn_factor_stream(n, opts.parse).map(|f| (f.base, f.exponent)), abs_bits, opts)
}

fn sum_logs(
    terms: impl IntoIterator<Item = (BigUint, BigUint)>,
    abs_bits: usize,
    opts: &Options,
) -> Result<ErrReal> {
    let terms: Vec<(BigUint, BigUint)> = terms.into_iter().collect();
    // split the budget evenly over the terms
    let spread = 64 - (terms.len().max(1) as u64).leading_zeros() as usize + 1;
    let mut out = Vec::with_capacity(terms.len());
    for (base, e) in terms {
        let bits = abs_bits + spread + e.bits() as usize + 1;
        let l = log_of_int_bits(&base, bits, opts.ceiling_bits)?;
        out.push(l.mul_biguint(&e));
    }
    let s = big_sum(out);
    let target = Bound::pow2(-(abs_bits as i64));
    if *s.abs_err() > target {
        return Err(Error::PrecisionExhausted { needed_bits: abs_bits, ceiling_bits: opts.ceiling_bits });
    }
    Ok(s)
}

/// One point of the `F(n)` series.
#[derive(Debug, Clone)]
pub struct FRecord {
    pub n: u64,
    /// `{log S_n}`
    pub frac: ErrReal,
    /// `||log S_n||`
    pub dist: ErrReal,
    /// `F(n) = (1/n) log ||log S_n||`
    pub f: ErrReal,
    /// `floor(log10 log S_n)`
    pub magnitude: i64,
    pub precision_bits: usize,
}

/// Working digits for `n` before any escalation.
pub fn working_digits(n: u64, out_digits: usize) -> usize {
    (2.0 * n as f64 * LOG10_2E).ceil() as usize + GUARD_DIGITS + out_digits
}

/// `{log S_n}`, `||log S_n||` and `F(n)`, each certified to `out_digits`
/// decimals. Precision doubles whenever the result is not yet certified.
pub fn log_sn_reduced(n: u64, out_digits: usize, opts: &Options) -> Result<FRecord> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let int_digits = (2.0 * n as f64 * LOG10_2E).ceil() as usize;
    let mut digits = working_digits(n, out_digits);
    let want = Bound::from_abs(&crate::precreal::convert::rational_to_bf(
        &num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(out_digits as u32) * 2),
        64,
    ));
    loop {
        let total_bits = bits_for_digits(digits as f64);
        if total_bits > opts.ceiling_bits {
            return Err(Error::PrecisionExhausted { needed_bits: total_bits, ceiling_bits: opts.ceiling_bits });
        }
        let abs_bits = bits_for_digits(digits.saturating_sub(int_digits).max(out_digits + 8) as f64);
        match attempt(n, abs_bits, opts) {
            Ok((frac, dist, f, log_s)) if *f.abs_err() <= want && *dist.abs_err() <= want => {
                let magnitude = magnitude_of(&log_s);
                return Ok(FRecord { n, frac, dist, f, magnitude, precision_bits: total_bits });
            }
            Ok(_) | Err(Error::AmbiguousBoundary { .. }) | Err(Error::InvalidInput(_)) => digits *= 2,
            Err(e) => return Err(e),
        }
    }
}

type Attempt = (ErrReal, ErrReal, ErrReal, ErrReal);

fn attempt(n: u64, abs_bits: usize, opts: &Options) -> Result<Attempt> {
    let log_s = log_sn(n, abs_bits, opts)?;
    let frac = certified_frac(&log_s)?;
    let dist = certified_dist(&log_s)?;
    let f = dist.ln()?.div_u64(n);
    Ok((frac, dist, f, log_s))
}

fn magnitude_of(x: &ErrReal) -> i64 {
    let (m, e) = crate::precreal::convert::mantissa_f64(x.value());
    (m.log10() + e as f64 * std::f64::consts::LOG10_2).floor() as i64
}

/// `F(n)` alone.
pub fn f_of_n(n: u64, out_digits: usize, opts: &Options) -> Result<ErrReal> {
    log_sn_reduced(n, out_digits, opts).map(|r| r.f)
}
