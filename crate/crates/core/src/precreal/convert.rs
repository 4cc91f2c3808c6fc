//! Conversions between `BigFloat` and exact integers/rationals.

use astro_float::{BigFloat, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const WORD_BYTES: usize = WORD_BIT_SIZE / 8;

fn words_to_biguint(words: &[Word]) -> BigUint {
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    BigUint::from_bytes_le(&bytes)
}

fn biguint_to_words(x: &BigUint) -> Vec<Word> {
    let mut bytes = x.to_bytes_le();
    bytes.resize(bytes.len().div_ceil(WORD_BYTES) * WORD_BYTES, 0);
    bytes
        .chunks_exact(WORD_BYTES)
        .map(|c| {
            let mut b = [0u8; WORD_BYTES];
            b.copy_from_slice(c);
            Word::from_le_bytes(b)
        })
        .collect()
}

/// Exact `BigFloat` holding `x` (precision = bit length rounded up to words).
pub fn bigint_to_bf(x: &BigInt) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_word(0, WORD_BIT_SIZE);
    }
    let mag = x.magnitude();
    let words = biguint_to_words(mag);
    let sign = if x.is_negative() { Sign::Neg } else { Sign::Pos };
    BigFloat::from_words(&words, sign, (words.len() * WORD_BIT_SIZE) as i32)
}

pub fn biguint_to_bf(x: &BigUint) -> BigFloat {
    bigint_to_bf(&BigInt::from(x.clone()))
}

/// `(M, s, shift)` with `|x| = M * 2^shift`; `None` for zero or non-finite.
fn integer_parts(x: &BigFloat) -> Option<(BigUint, Sign, i64)> {
    if x.is_zero() {
        return None;
    }
    let (words, _bits, sign, e, _) = x.as_raw_parts()?;
    let m = words_to_biguint(words);
    let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    Some((m, sign, shift))
}

/// Exact rational value of a finite `BigFloat`.
pub fn bf_to_rational(x: &BigFloat) -> BigRational {
    let Some((m, sign, shift)) = integer_parts(x) else {
        return BigRational::zero();
    };
    let m = BigInt::from_biguint(if sign == Sign::Neg { BigSign::Minus } else { BigSign::Plus }, m);
    if shift >= 0 {
        BigRational::from_integer(m << shift as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-shift) as usize)
    }
}

/// `floor(x)` as an exact integer.
pub fn bf_floor(x: &BigFloat) -> BigInt {
    let Some((m, sign, shift)) = integer_parts(x) else {
        return BigInt::zero();
    };
    if shift >= 0 {
        let v = BigInt::from(m << shift as usize);
        return if sign == Sign::Neg { -v } else { v };
    }
    let s = (-shift) as usize;
    let q = &m >> s;
    let exact = (&q << s) == m;
    let q = BigInt::from(q);
    match sign {
        Sign::Pos => q,
        Sign::Neg if exact => -q,
        Sign::Neg => -q - 1,
    }
}

/// Nearest integer, ties toward `+inf`.
pub fn bf_round(x: &BigFloat) -> BigInt {
    let r = bf_to_rational(x) + BigRational::new(BigInt::one(), BigInt::from(2));
    r.floor().to_integer()
}

/// Rational to `BigFloat` at precision `p`, rounded to nearest.
pub fn rational_to_bf(r: &BigRational, p: usize) -> BigFloat {
    let n = bigint_to_bf(r.numer());
    if r.denom().is_one() {
        let mut n = n;
        n.set_precision(p, RoundingMode::ToEven).expect("precision");
        return n;
    }
    let d = bigint_to_bf(r.denom());
    n.div(&d, p, RoundingMode::ToEven)
}

/// `|x| ~ m * 2^e2` with `m` in `[0.5, 1)`.
pub fn mantissa_f64(x: &BigFloat) -> (f64, i64) {
    let Some((words, _, _, e, _)) = x.as_raw_parts() else {
        return (0.0, 0);
    };
    // top 64 bits of the mantissa
    let top = words_to_biguint(&words[words.len().saturating_sub(64 / WORD_BIT_SIZE)..]);
    let bits = top.bits() as i32;
    let mut m = 0f64;
    for d in top.iter_u64_digits().rev() {
        m = m * 18446744073709551616.0 + d as f64;
    }
    (m * 2f64.powi(-bits), e as i64)
}

/// Nearest f64 (may under/overflow).
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    let (m, e) = mantissa_f64(x);
    let v = if e > 1100 {
        f64::INFINITY
    } else if e < -1100 {
        0.0
    } else {
        m * 2f64.powi(e as i32)
    };
    if x.is_negative() {
        -v
    } else {
        v
    }
}
