//! `L = [0; 10^{1!}, 10^{2!}, 10^{3!}, ...]`, a Liouville number whose
//! irrationality base is 1.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::cf::{cf_convergents, convergent_pairs, ConvergentRecord};
use crate::error::{Error, Result};
use crate::precreal::{Bound, ErrReal};

/// Deepest convergent index handed out.
pub const L_DEPTH_CAP: usize = 6;

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `[0, 10^{1!}, ..., 10^{m!}]`
pub fn l_quotients(m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    out.extend((1..=m).map(|k| BigInt::from(10u32).pow(factorial(k) as u32)));
    out
}

/// `(p_k, q_k)` for `k = 0..=m`.
pub fn l_pairs(m: usize) -> Vec<(BigInt, BigUint)> {
    convergent_pairs(&l_quotients(m))
        .into_iter()
        .map(|(p, q)| (p, q.to_biguint().expect("positive")))
        .collect()
}

/// `L` from the convergent `p_m/q_m`, widened by the truncation bound
/// `1/(q_m q_{m+1}) < 1/(q_m^2 10^{(m+1)!})`.
pub fn l_alpha(m: usize) -> ErrReal {
    let pairs = l_pairs(m);
    let (p, q) = pairs.last().expect("m >= 0");
    let next = factorial(m + 1);
    // 10^{-next} <= 2^{-floor(next log2 10)}
    let tail_bits = (next as f64 * std::f64::consts::LOG2_10).floor() as i64 - 1;
    let prec = 2 * q.bits() as usize + tail_bits as usize + 128;
    let center = ErrReal::from_rational(&BigRational::new(p.clone(), BigInt::from(q.clone())), prec);
    let trunc = Bound::pow2(-(2 * (q.bits() as i64 - 1) + tail_bits));
    center.widen(&trunc)
}

/// Convergent records of `L` for `k = 0..=n_max`.
pub fn l_convergents(n_max: usize) -> Result<Vec<ConvergentRecord>> {
    if n_max > L_DEPTH_CAP {
        return Err(Error::DepthCap { depth: n_max, cap: L_DEPTH_CAP });
    }
    let alpha = l_alpha(n_max + 1);
    Ok(cf_convergents(&l_quotients(n_max), &alpha))
}

/// Each link of
/// `|L - p_n/q_n| > 1/(q_n q_{n+2}) > 10^{-2(n!+(n+2)!)} > (1+eps)^{-10^{n!}}`
/// together with `10^{n!} < q_n < 10^{2 n!}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LChain {
    pub n: usize,
    pub bracket: bool,
    pub alternating: bool,
    pub denominators: bool,
    pub base_one: bool,
}

impl LChain {
    pub fn holds(&self) -> bool {
        self.bracket && self.alternating && self.denominators && self.base_one
    }
}

/// `2(n! + (n+2)!) log 10 < 10^{n!} log(1 + eps)`, decided in log space.
pub fn l_base_link(n: usize, eps: f64) -> Result<bool> {
    if !eps.is_finite() || eps <= 0.0 {
        return Ok(false);
    }
    if n > 20 {
        return Err(Error::DepthCap { depth: n, cap: 20 });
    }
    let prec = 256;
    let ln10 = ErrReal::from_u64(10, prec).ln()?;
    let lhs = ErrReal::from_u64(2 * (factorial(n) + factorial(n + 2)), prec).mul(&ln10).ln()?;
    let l1e = ErrReal::from_f64(eps, prec).add(&ErrReal::from_u64(1, prec)).ln()?.ln()?;
    let rhs = ErrReal::from_u64(factorial(n), prec).mul(&ln10).add(&l1e);
    let d = rhs.sub(&lhs);
    if Bound::from_abs(d.value()) <= *d.abs_err() {
        return Err(Error::AmbiguousBoundary { lo: d.lo().to_string(), hi: d.hi().to_string() });
    }
    Ok(d.value().is_positive())
}

/// Checks the chain for `L` at index `n` (`2 <= n <= 6`).
pub fn verify_l_chain(n: usize, eps: f64) -> Result<LChain> {
    if n > L_DEPTH_CAP {
        return Err(Error::DepthCap { depth: n, cap: L_DEPTH_CAP });
    }
    if n < 2 {
        return Err(Error::InvalidInput("the chain starts at n = 2".into()));
    }
    let pairs = l_pairs(n + 2);
    let q = |k: usize| &pairs[k].1;
    let ten = BigUint::from(10u32);
    let nf = factorial(n) as u32;
    let bracket = ten.pow(nf) < *q(n) && *q(n) < ten.pow(2 * nf);
    // alternating tail: |L - p_n/q_n| > 1/(q_n q_{n+1}) - 1/(q_{n+1} q_{n+2})
    let alternating = q(n + 2) > q(n) && q(n + 2) - q(n) > *q(n + 1);
    let denominators = q(n) * q(n + 2) < ten.pow(2 * (nf + factorial(n + 2) as u32));
    let base_one = l_base_link(n, eps)?;
    Ok(LChain { n, bracket, alternating, denominators, base_one })
}

/// First `n >= 2` where `10^{-2(n!+(n+2)!)} > (1+eps)^{-10^{n!}}` holds.
pub fn l_chain_start(eps: f64) -> Result<Option<usize>> {
    for n in 2..=20 {
        if l_base_link(n, eps)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn first_denominators() {
        let p = l_pairs(3);
        assert_eq!(p[0].1, BigUint::one());
        assert_eq!(p[1].1, BigUint::from(10u32));
        assert_eq!(p[2].1, BigUint::from(1001u32));
        assert_eq!(p[3].1, BigUint::from(1_001_000_010u64));
    }

    #[test]
    fn convergents_are_sound() {
        let recs = l_convergents(5).unwrap();
        for r in &recs[1..] {
            // |L - p/q| < 1/q^2
            let q2 = ErrReal::from_biguint(&(&r.q_k * &r.q_k), 64);
            let bound = ErrReal::from_u64(1, 64).div(&q2).unwrap();
            assert!(r.err.hi() < bound.lo(), "k={}", r.k);
        }
        assert!(matches!(l_convergents(7), Err(Error::DepthCap { .. })));
    }

    #[test]
    fn beta_near_one_and_growing_mu() {
        let recs = l_convergents(5).unwrap();
        assert!(recs[3].beta_k.unwrap() < 1.000001);
        let mu = |k: usize| recs[k].mu_k.unwrap();
        assert!(mu(2) < mu(3) && mu(3) < mu(4) && mu(4) < mu(5));
        let mu4 = recs[4].mu_k.unwrap();
        let q5 = recs[5].q_k.bits().to_f64().unwrap();
        let q4 = recs[4].q_k.bits().to_f64().unwrap();
        assert!((mu4 - (1.0 + q5 / q4)).abs() < 0.1);
    }

    #[test]
    fn chain_holds() {
        for n in 2..=5 {
            let c = verify_l_chain(n, 0.5).unwrap();
            assert!(c.bracket && c.alternating && c.denominators, "n={n}");
        }
        assert!(verify_l_chain(3, 0.5).unwrap().holds());
        assert!(!verify_l_chain(2, 0.5).unwrap().base_one);
        assert_eq!(l_chain_start(0.5).unwrap(), Some(3));
        assert_eq!(l_chain_start(1e-12).unwrap(), Some(4));
        assert_eq!(l_chain_start(1e-30).unwrap(), Some(5));
        assert!(!l_base_link(4, 0.0).unwrap());
    }
}
