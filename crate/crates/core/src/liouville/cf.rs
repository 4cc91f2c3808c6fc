use astro_float::RoundingMode;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::precreal::convert::{bf_to_f64, bf_to_rational};
use crate::precreal::{with_consts, ErrReal};

/// One convergent `p_k / q_k` of a continued fraction and how well it
/// approximates the expanded number.
#[derive(Debug, Clone)]
pub struct ConvergentRecord {
    pub k: usize,
    pub a_k: BigInt,
    pub p_k: BigInt,
    pub q_k: BigUint,
    /// `|alpha - p_k/q_k|`
    pub err: ErrReal,
    /// `-log err / log q_k`; `None` while `q_k = 1` or when `err` is not
    /// certified positive.
    pub mu_k: Option<f64>,
    /// `err^(-1/q_k)`; `None` when `err` is not certified positive.
    pub beta_k: Option<f64>,
    /// `-log err`, kept for callers that need more range than `f64` ratios.
    pub neg_log_err: Option<f64>,
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Partial quotients of `alpha` that are certified by its error interval.
///
/// Stops early (without error) when an exact rational terminates. Fails with
/// `AmbiguousQuotient` when the interval no longer pins down the next
/// quotient before `depth` quotients are produced.
pub fn cf_expand(alpha: &ErrReal, depth: usize) -> Result<Vec<BigInt>> {
    let lo = bf_to_rational(&alpha.lo());
    let hi = bf_to_rational(&alpha.hi());
    cf_expand_interval(lo, hi, depth)
}

/// Partial quotients of an exact rational (terminating).
pub fn cf_expand_rational(r: &BigRational, depth: usize) -> Vec<BigInt> {
    cf_expand_interval(r.clone(), r.clone(), depth).expect("an exact rational is never ambiguous")
}

fn cf_expand_interval(mut lo: BigRational, mut hi: BigRational, depth: usize) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    while out.len() < depth {
        let a = floor_rat(&lo);
        if floor_rat(&hi) != a {
            return Err(Error::AmbiguousQuotient { index: out.len(), certified: out.len() });
        }
        let a_r = BigRational::from_integer(a.clone());
        let flo = &lo - &a_r;
        let fhi = &hi - &a_r;
        out.push(a);
        if fhi.is_zero() {
            // exact integer reached
            break;
        }
        if flo.is_zero() {
            // the interval touches the integer, next quotient unbounded
            if out.len() < depth {
                return Err(Error::AmbiguousQuotient { index: out.len(), certified: out.len() });
            }
            break;
        }
        // x -> 1/x reverses the interval
        lo = fhi.recip();
        hi = flo.recip();
    }
    Ok(out)
}

/// `(p_k, q_k)` by the standard recurrence.
pub fn convergent_pairs(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(quotients.len());
    for a in quotients {
        let p = a * &p0 + &p1;
        let q = a * &q0 + &q1;
        p1 = std::mem::replace(&mut p0, p.clone());
        q1 = std::mem::replace(&mut q0, q.clone());
        out.push((p, q));
    }
    out
}

/// Convergents of `alpha` with approximation diagnostics.
pub fn cf_convergents(quotients: &[BigInt], alpha: &ErrReal) -> Vec<ConvergentRecord> {
    convergent_pairs(quotients)
        .into_iter()
        .zip(quotients)
        .enumerate()
        .map(|(k, ((p, q), a))| {
            let q_u = q.to_biguint().expect("denominators are positive");
            let prec = alpha.precision_bits().max(p.bits() as usize + q.bits() as usize + 128);
            let approx = ErrReal::from_bigint(&p, prec).div(&ErrReal::from_bigint(&q, prec)).expect("q > 0");
            let err = alpha.sub(&approx).abs();
            let (neg_log_err, mu_k, beta_k) = diagnostics(&err, &q_u);
            ConvergentRecord { k, a_k: a.clone(), p_k: p, q_k: q_u, err, mu_k, beta_k, neg_log_err }
        })
        .collect()
}

fn diagnostics(err: &ErrReal, q: &BigUint) -> (Option<f64>, Option<f64>, Option<f64>) {
    let lo = err.lo();
    if !lo.is_positive() {
        return (None, None, None);
    }
    let neg_log = -with_consts(|cc| err.value().ln(64, RoundingMode::ToEven, cc));
    let nl = bf_to_f64(&neg_log);
    let log_q = log_biguint(q);
    let mu = if q.is_one() { None } else { Some(nl / log_q) };
    // err^(-1/q) = exp(-log err / q)
    let beta = match q.to_f64() {
        Some(qf) if qf.is_finite() => Some((nl / qf).exp()),
        _ => Some(1.0),
    };
    (Some(nl), mu, beta)
}

/// `log x` in f64 for integers of any size.
pub(crate) fn log_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `p_k q_{k-1} - p_{k-1} q_k` for every `k >= 1`.
pub fn determinants(records: &[ConvergentRecord]) -> Vec<BigInt> {
    records
        .windows(2)
        .map(|w| {
            let q0 = BigInt::from_biguint(Sign::Plus, w[0].q_k.clone());
            let q1 = BigInt::from_biguint(Sign::Plus, w[1].q_k.clone());
            &w[1].p_k * q0 - &w[0].p_k * q1
        })
        .collect()
}

/// Value of a finite continued fraction.
pub fn cf_value(quotients: &[BigInt]) -> BigRational {
    let mut acc: Option<BigRational> = None;
    for a in quotients.iter().rev() {
        let a = BigRational::from_integer(a.clone());
        acc = Some(match acc {
            None => a,
            Some(t) => a + t.recip(),
        });
    }
    acc.unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn exact_rational_terminates() {
        let x = ErrReal::from_f64(3.25, 64);
        assert_eq!(cf_expand(&x, 10).unwrap(), ints(&[3, 4]));
        let r = BigRational::new(BigInt::from(-7), BigInt::from(3));
        assert_eq!(cf_expand_rational(&r, 10), ints(&[-3, 1, 2]));
        assert_eq!(cf_value(&ints(&[-3, 1, 2])), r);
    }

    #[test]
    fn sqrt2_quotients_and_convergents() {
        let s = ErrReal::from_u64(2, 256).sqrt().unwrap();
        let q = cf_expand(&s, 5).unwrap();
        assert_eq!(q, ints(&[1, 2, 2, 2, 2]));
        let recs = cf_convergents(&q, &s);
        let pq: Vec<(i64, u64)> = recs.iter().map(|r| (r.p_k.to_i64().unwrap(), r.q_k.to_u64().unwrap())).collect();
        assert_eq!(&pq[..4], &[(1, 1), (3, 2), (7, 5), (17, 12)]);
        for d in determinants(&recs) {
            assert!(d.abs().is_one());
        }
    }

    #[test]
    fn ambiguity_is_reported() {
        let s = ErrReal::from_u64(2, 64).sqrt().unwrap();
        match cf_expand(&s, 200) {
            Err(Error::AmbiguousQuotient { index, .. }) => assert!(index > 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sqrt2_mu_tends_to_two() {
        let s = ErrReal::from_u64(2, 512).sqrt().unwrap();
        let q = cf_expand(&s, 50).unwrap();
        let recs = cf_convergents(&q, &s);
        for r in &recs[25..] {
            let mu = r.mu_k.unwrap();
            assert!((1.9..=2.1).contains(&mu), "k={} mu={mu}", r.k);
        }
        // beta_k = exp((2 log q_k + log(2 sqrt 2)) / q_k) drops below 1.01 near q_k = 2000
        for r in recs.iter().filter(|r| r.q_k > BigUint::from(2000u32)) {
            assert!(r.beta_k.unwrap() < 1.01);
        }
        let b169 = recs.iter().find(|r| r.q_k == BigUint::from(169u32)).unwrap().beta_k.unwrap();
        assert!((b169 - 1.06915).abs() < 1e-4);
        assert!(recs[3..].windows(2).all(|w| w[1].beta_k <= w[0].beta_k));
    }
}
