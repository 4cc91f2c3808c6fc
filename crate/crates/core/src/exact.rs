//! Exact integer and rational combinatorics behind `S_n`.
//!
//! `S_n` is a triple product over `(m, k, j)` with `1 <= m <= n`,
//! `0 <= k <= min(m-1, n-m)` and `k+1 <= j <= n-k`. Its typeset form leaves
//! the split between base and exponent ambiguous, so the split is a
//! [`SnParse`] policy. Only the default policy satisfies the integrality
//! relation checked in [`crate::sondow::relation_check`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type ExactInt = BigUint;
pub type ExactRat = BigRational;

/// Primes `<= n` by a plain sieve.
pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        out.push(p as u64);
        let mut q = p * p;
        while q <= n {
            composite[q] = true;
            q += p;
        }
    }
    out
}

/// `lcm(1, 2, ..., n)`, built as the product of `p^floor(log_p n)` over primes.
pub fn lcm_upto(n: u64) -> ExactInt {
    assert!(n >= 1, "lcm_upto requires n >= 1");
    let mut acc = BigUint::one();
    for p in primes_upto(n) {
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        acc *= pk;
    }
    acc
}

/// Exact binomial coefficient. Panics when `k > n`.
pub fn binomial(n: u64, k: u64) -> ExactInt {
    assert!(k <= n, "binomial({n}, {k}): k > n");
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `H_{n-k} - H_k`, the sum of `1/j` for `k < j <= n-k`; zero for an empty window.
pub fn harmonic_window(k: u64, n: u64) -> ExactRat {
    assert!(k <= n, "harmonic_window({k}, {n}): k > n");
    let mut acc = BigRational::zero();
    for j in (k + 1)..=n.saturating_sub(k) {
        acc += BigRational::new(BigInt::one(), BigInt::from(j));
    }
    acc
}

/// How the printed triple product is split into base and exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnParse {
    /// `(n+m) ^ (C(n,k)^2 * 2 d_2n / j)`.
    #[default]
    ExponentCarriesBinomial,
    /// `((n+m) C(n,k)^2) ^ (2 d_2n / j)`.
    BaseCarriesBinomial,
}

impl SnParse {
    pub const ALL: [SnParse; 2] = [SnParse::ExponentCarriesBinomial, SnParse::BaseCarriesBinomial];

    /// Stable identifier written into output headers.
    pub fn id(self) -> &'static str {
        match self {
            SnParse::ExponentCarriesBinomial => "base-nm.exp-c2d/j.v1",
            SnParse::BaseCarriesBinomial => "base-nmc2.exp-d/j.v1",
        }
    }

    pub fn from_id(id: &str) -> Option<SnParse> {
        SnParse::ALL.into_iter().find(|p| p.id() == id)
    }
}

/// One factor `base^exponent` of `S_n`, tagged with its index triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnFactor {
    pub m: u64,
    pub k: u64,
    pub j: u64,
    pub base: ExactInt,
    pub exponent: ExactInt,
}

/// Shared per-`n` data for the factor stream.
struct SnContext {
    n: u64,
    two_d2n: BigUint,
    binom_sq: Vec<BigUint>,
}

impl SnContext {
    fn new(n: u64) -> Self {
        let two_d2n = lcm_upto(2 * n) * 2u32;
        let binom_sq = (0..=n).map(|k| binomial(n, k).pow(2)).collect();
        SnContext { n, two_d2n, binom_sq }
    }

    fn factor(&self, parse: SnParse, m: u64, k: u64, j: u64) -> SnFactor {
        let c2 = &self.binom_sq[k as usize];
        let (base, numerator) = match parse {
            SnParse::ExponentCarriesBinomial => (BigUint::from(self.n + m), &self.two_d2n * c2),
            SnParse::BaseCarriesBinomial => (BigUint::from(self.n + m) * c2, self.two_d2n.clone()),
        };
        let (exponent, rem) = numerator.div_rem(&BigUint::from(j));
        assert!(rem.is_zero(), "S_{} factor ({m},{k},{j}): exponent not integral", self.n);
        SnFactor { m, k, j, base, exponent }
    }
}

/// Largest `k` for a given `m`.
fn k_max(n: u64, m: u64) -> u64 {
    (m - 1).min(n - m)
}

/// Every factor of `S_n`, in lexicographic `(m, k, j)` order.
pub fn sn_factor_stream(n: u64, parse: SnParse) -> impl Iterator<Item = SnFactor> {
    assert!(n >= 1, "S_n needs n >= 1");
    let ctx = SnContext::new(n);
    (1..=n).flat_map(move |m| (0..=k_max(n, m)).map(move |k| (m, k))).flat_map(move |(m, k)| {
        ((k + 1)..=(n - k)).map(move |j| (m, k, j))
    })
    .map(move |(m, k, j)| ctx.factor(parse, m, k, j))
}

/// Exponent of every base after summing over `j` with [`harmonic_window`].
///
/// This collapses the `O(n^3)` triple loop to `O(n^2)` exact products.
pub fn grouped_factors(n: u64, parse: SnParse) -> Vec<(ExactInt, ExactInt)> {
    assert!(n >= 1, "S_n needs n >= 1");
    let ctx = SnContext::new(n);
    let two_d2n = BigRational::from_integer(BigInt::from(ctx.two_d2n.clone()));
    // windows depend on k only
    let windows: Vec<BigUint> = (0..=n / 2)
        .map(|k| {
            let w = &two_d2n * harmonic_window(k, n);
            assert!(w.is_integer(), "2 d_2n (H_(n-k) - H_k) not integral at n={n}, k={k}");
            w.to_integer().to_biguint().expect("window is nonnegative")
        })
        .collect();

    let mut out: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    for m in 1..=n {
        for k in 0..=k_max(n, m) {
            let window = &windows[k as usize];
            if window.is_zero() {
                continue;
            }
            let c2 = &ctx.binom_sq[k as usize];
            let (base, exponent) = match parse {
                SnParse::ExponentCarriesBinomial => (BigUint::from(n + m), c2 * window),
                SnParse::BaseCarriesBinomial => (BigUint::from(n + m) * c2, window.clone()),
            };
            *out.entry(base).or_default() += exponent;
        }
    }
    out.into_iter().collect()
}

/// `S_n = prod p^{e_p}` over primes `p <= 2n`.
pub fn prime_exponents(n: u64, parse: SnParse) -> Vec<(u64, ExactInt)> {
    let primes = primes_upto(2 * n);
    let mut acc: BTreeMap<u64, BigUint> = BTreeMap::new();
    for (base, exponent) in grouped_factors(n, parse) {
        let mut rest = base;
        for &p in &primes {
            let mut v = 0u64;
            loop {
                let (q, r) = rest.div_rem(&BigUint::from(p));
                if !r.is_zero() {
                    break;
                }
                rest = q;
                v += 1;
            }
            if v > 0 {
                *acc.entry(p).or_default() += &exponent * v;
            }
        }
        assert!(rest.is_one(), "S_{n}: base has a prime factor above 2n");
    }
    acc.into_iter().collect()
}

/// Low-precision estimate of `log10 S_n`, rounded up.
pub fn sn_digit_estimate(n: u64, parse: SnParse) -> f64 {
    prime_exponents(n, parse)
        .iter()
        .map(|(p, e)| biguint_to_f64_up(e) * (*p as f64).log10())
        .sum::<f64>()
        * (1.0 + 1e-12)
}

fn biguint_to_f64_up(x: &BigUint) -> f64 {
    let v = x.to_f64().unwrap_or(f64::INFINITY);
    v * (1.0 + 1e-15)
}

/// The exact integer `S_n`, refused when its digit count would exceed `cap_digits`.
pub fn sn_exact_small(n: u64, cap_digits: u64, parse: SnParse) -> Result<ExactInt> {
    let digits = sn_digit_estimate(n, parse).ceil() + 1.0;
    if !digits.is_finite() || digits > cap_digits as f64 {
        return Err(Error::OverCap {
            what: "digits of S_n",
            value: if digits.is_finite() { digits as u64 } else { u64::MAX },
            cap: cap_digits,
        });
    }
    let mut acc = BigUint::one();
    for (p, e) in prime_exponents(n, parse) {
        let e = e.to_u32().ok_or_else(|| Error::InvalidInput(format!("exponent of {p} too large")))?;
        acc *= BigUint::from(p).pow(e);
    }
    Ok(acc)
}

/// An exact rational from `p/q`, an integer, or a plain decimal like `3.99`.
pub fn parse_rational(s: &str) -> Result<ExactRat> {
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}
