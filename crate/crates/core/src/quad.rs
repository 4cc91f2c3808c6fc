//! Double-exponential (tanh-sinh) quadrature on `(0, 1)` and `(0, 1)^2`.
//!
//! The map is `x = 1/(1 + e^{-s})`, `s = pi sinh t`, so both `x` and
//! `u = 1 - x` are computed without cancellation, and `-log x` comes from a
//! `log1p`. Levels halve the step `h`; each level only adds the odd nodes.
//!
//! The truncation error of a level is estimated from the last three level
//! sums (`d1^2 / d2`, the usual quadratic-convergence heuristic); rounding
//! errors are bounded rigorously and added on top.

use astro_float::{BigFloat, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, lcm_upto};
use crate::precreal::convert::bigint_to_bf;
use crate::precreal::{with_consts, Bound, ErrReal};

const RM: RoundingMode = RoundingMode::ToEven;

/// Finest level tried before giving up (`h = 2^-(MAX_LEVEL+1)`).
pub const MAX_LEVEL: u32 = 8;

#[derive(Clone)]
pub(crate) struct Node {
    pub x: BigFloat,
    pub u: BigFloat,
    /// `-log x`
    pub l: BigFloat,
    /// `dx/dt = pi cosh t * x * u`
    pub w: BigFloat,
}

fn log1p(z: &BigFloat, p: usize) -> BigFloat {
    let small = z.exponent().is_none_or(|e| e < -8);
    if !small {
        let one = BigFloat::from_word(1, p);
        return with_consts(|cc| one.add(z, p + 8, RM).ln(p, RM, cc));
    }
    // z - z^2/2 + z^3/3 - ...
    let q = p + 16;
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k = 2u64;
    loop {
        pow = pow.mul(z, q, RM).neg();
        let term = pow.div(&BigFloat::from_u64(k, 64), q, RM);
        if term.is_zero() {
            break;
        }
        let small_enough = match (term.exponent(), sum.exponent()) {
            (Some(te), Some(se)) => (te as i64) < se as i64 - q as i64,
            _ => true,
        };
        sum = sum.add(&term, q, RM);
        if small_enough {
            break;
        }
        k += 1;
    }
    sum
}

/// Largest `t` worth sampling: beyond it `min(x, u) < 2^-(p+16)`.
fn t_max(p: usize) -> f64 {
    ((p as f64 + 16.0) * std::f64::consts::LN_2 / std::f64::consts::PI).asinh() + 0.25
}

fn node_at(t: f64, p: usize) -> Node {
    let (x, u, w, ems) = with_consts(|cc| {
        let q = p + 32;
        let tb = BigFloat::from_f64(t, 64);
        let pi = cc.pi(q, RM);
        let s = pi.mul(&tb.sinh(q, RM, cc), q, RM);
        let one = BigFloat::from_word(1, q);
        let es = s.exp(q, RM, cc);
        let ems = s.neg().exp(q, RM, cc);
        let x = one.div(&one.add(&ems, q, RM), p, RM);
        let u = one.div(&one.add(&es, q, RM), p, RM);
        let w = pi.mul(&tb.cosh(q, RM, cc), q, RM).mul(&x, q, RM).mul(&u, p, RM);
        (x, u, w, ems)
    });
    let l = log1p(&ems, p);
    Node { x, u, l, w }
}

/// Nodes new at `level`: level 0 has step 1/2, level `k` adds the odd
/// multiples of `2^-(k+1)`.
pub(crate) fn level_nodes(level: u32, p: usize) -> Vec<Node> {
    let h = 0.5f64.powi(level as i32 + 1);
    let tmax = t_max(p);
    let jmax = (tmax / h).floor() as i64;
    let (start, stride) = if level == 0 { (0, 1) } else { (1, 2) };
    let mut out = Vec::new();
    let mut j = start;
    while j <= jmax {
        let t = j as f64 * h;
        out.push(node_at(t, p));
        if j != 0 {
            out.push(node_at(-t, p));
        }
        j += stride;
    }
    out
}

/// One level's contribution: the full (unscaled) sum so far and a bound on
/// its accumulated rounding error.
pub(crate) struct LevelState {
    pub sum: BigFloat,
    pub rounding: Bound,
}

/// Outcome of a converged quadrature.
#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: ErrReal,
    pub levels: u32,
    pub nodes: usize,
}

/// Runs levels until the estimated error is below `target`.
///
/// `step(level)` returns the running unscaled sum after including that
/// level's nodes; `dims` is 1 or 2 (the sum is scaled by `h^dims`).
pub(crate) fn converge(
    p: usize,
    dims: u32,
    target: &Bound,
    mut step: impl FnMut(u32) -> LevelState,
    mut count: impl FnMut() -> usize,
) -> Result<QuadResult> {
    let mut history: Vec<BigFloat> = Vec::new();
    for level in 0..=MAX_LEVEL {
        let st = step(level);
        let mut s = st.sum;
        if let Some(e) = s.exponent() {
            s.set_exponent(e - (dims * (level + 1)) as i32);
        }
        let mut rounding = st.rounding;
        for _ in 0..dims * (level + 1) {
            rounding = rounding.mul(&Bound::from_f64(0.5));
        }
        history.push(s.clone());
        if history.len() < 3 {
            continue;
        }
        let k = history.len();
        let d1 = Bound::from_abs(&history[k - 1].sub(&history[k - 2], p + 64, RM));
        let d2 = history[k - 2].sub(&history[k - 3], p + 64, RM).abs();
        let trunc = if d1.is_zero() {
            Bound::zero()
        } else if !d2.is_zero() && d1 < Bound::from_abs(&d2) {
            d1.mul(&d1).div_by_lower(&d2)
        } else {
            d1.clone()
        };
        let err = trunc.add(&rounding);
        if err <= *target {
            return Ok(QuadResult { value: ErrReal::new(s, err, p), levels: level + 1, nodes: count() });
        }
    }
    Err(Error::PrecisionExhausted { needed_bits: p, ceiling_bits: p })
}

/// Bits needed so that `2^-bits <= target`.
pub(crate) fn target_bits(target: &Bound) -> usize {
    target.exponent().map_or(64, |e| (-e).max(1) as usize + 1)
}

/// `I_n` by tanh-sinh on the literal double integrand
/// `-(x(1-x)y(1-y))^n / ((1-xy) log xy)`.
pub fn integral_2d(n: u64, target: &Bound) -> Result<QuadResult> {
    assert!(n >= 1);
    // relative precision: I_n > 4^{-3n} comfortably, so absolute target bits
    // minus 6n is the relative need
    let bits = target_bits(target).saturating_sub(4 * n as usize).max(32);
    let p = bits + 48;
    let mut nodes: Vec<Node> = Vec::new();
    let mut a: Vec<BigFloat> = Vec::new();
    let mut sum = BigFloat::from_word(0, p);
    let count = std::cell::Cell::new(0usize);
    converge(
        p,
        2,
        target,
        |level| {
            let fresh = level_nodes(level, p);
            a.extend(fresh.iter().map(|nd| nd.x.mul(&nd.u, p, RM).powi(n as usize, p, RM).mul(&nd.w, p, RM)));
            let old = nodes.len();
            nodes.extend(fresh);
            // the integrand is symmetric: row i adds f_ii + 2 sum_{j<i} f_ij
            let row = |i: usize| -> BigFloat {
                let ni = &nodes[i];
                let f = |j: usize| {
                    let nj = &nodes[j];
                    let d = ni.u.add(&nj.u, p, RM).sub(&ni.u.mul(&nj.u, p, RM), p, RM);
                    let l = ni.l.add(&nj.l, p, RM);
                    a[i].mul(&a[j], p, RM).div(&d.mul(&l, p, RM), p, RM)
                };
                let mut acc = BigFloat::from_word(0, p);
                for j in 0..i {
                    acc = acc.add(&f(j), p, RM);
                }
                acc.mul(&BigFloat::from_word(2, 64), p, RM).add(&f(i), p, RM)
            };
            let rows: Vec<usize> = (old..nodes.len()).collect();
            for r in crate::par_map(&rows, |&i| row(i)) {
                sum = sum.add(&r, p, RM);
            }
            let len = nodes.len() as u64;
            count.set(nodes.len());
            // each term: a handful of roundings plus node errors; each
            // addition adds at most one ulp of the running sum
            let rel = Bound::pow2(-(p as i64)).mul_u64(64 + len * len);
            LevelState { sum: sum.clone(), rounding: Bound::from_abs(&sum).mul(&rel) }
        },
        || count.get(),
    )
}

/// Coefficients of the one-dimensional form of `I_n`.
///
/// Substituting `w = xy` and integrating out `x` gives
/// `I_n = int_0^1 w^n K(w) / ((1-w)(-log w)) dw` with
/// `K(w) = R(w) + (-log w) Q(w)`, `Q(w) = sum_a C(n,a)^2 w^a` and `R` a
/// polynomial with rational coefficients. `R` is returned scaled by `d_n`.
pub fn reduced_kernel(n: u64) -> (BigUint, Vec<BigInt>, Vec<BigUint>) {
    let d = lcm_upto(n.max(1));
    let di = BigInt::from(d.clone());
    let nu = n as usize;
    let c: Vec<BigInt> = (0..=n).map(|k| BigInt::from(binomial(n, k))).collect();
    let mut r = vec![BigInt::zero(); nu + 1];
    for a in 0..=nu {
        for b in 0..=nu {
            let s = a as i64 + b as i64 - n as i64;
            if s == 0 {
                continue;
            }
            let mut v = &c[a] * &c[b] * &di;
            let (q, rem) = v.div_rem(&BigInt::from(s));
            debug_assert!(rem.is_zero());
            v = q;
            if (a + nu - b) % 2 == 1 {
                v = -v;
            }
            r[nu - b] += &v;
            r[a] -= &v;
        }
    }
    let q = (0..=n).map(|k| binomial(n, k).pow(2)).collect();
    (d, r, q)
}

/// `I_n` through the one-dimensional reduced form.
pub fn integral_1d(n: u64, target: &Bound) -> Result<QuadResult> {
    assert!(n >= 1);
    let (d, r, q) = reduced_kernel(n);
    let pt = target_bits(target);
    let coef_bits = r.iter().map(|c| c.bits()).max().unwrap_or(1) as usize + d.bits() as usize;
    let p = 2 * pt + coef_bits + 32;
    // the integrand is at most (1-w)^{2n-1}, so nodes with u < 2^-m carry
    // less than 2^{-2nm}/(2n) in total
    let m = (pt + 8).div_ceil(2 * n as usize) as i64;
    let skip_below = Bound::pow2(-m);
    let tail = Bound::pow2(-(2 * n as i64) * m);

    let rb: Vec<BigFloat> = r.iter().map(bigint_to_bf).collect();
    let qb: Vec<BigFloat> = q.iter().map(|v| bigint_to_bf(&BigInt::from(v.clone()))).collect();
    let r_abs: Vec<BigFloat> = r.iter().map(|c| bigint_to_bf(&c.abs())).collect();
    let db = bigint_to_bf(&BigInt::from(d));

    let mut sum = BigFloat::from_word(0, p);
    let mut rounding = Bound::zero();
    let mut count = 0usize;
    let state = std::cell::Cell::new(0usize);
    let per_node_ops = 8 * n + 32;
    converge(
        p,
        1,
        target,
        |level| {
            for nd in level_nodes(level, p) {
                count += 1;
                if Bound::from_abs(&nd.u) < skip_below {
                    continue;
                }
                let mut rv = BigFloat::from_word(0, p);
                let mut qv = BigFloat::from_word(0, p);
                let mut av = BigFloat::from_word(0, 64);
                let mut xp = BigFloat::from_word(1, p);
                for e in 0..=n as usize {
                    rv = rv.add(&rb[e].mul(&xp, p, RM), p, RM);
                    qv = qv.add(&qb[e].mul(&xp, p, RM), p, RM);
                    av = av.add(&r_abs[e].add(&qb[e].mul(&db, 64, RoundingMode::Up), 64, RoundingMode::Up).mul(&xp, 64, RoundingMode::Up), 64, RoundingMode::Up);
                    xp = xp.mul(&nd.x, p, RM);
                }
                // xp is now x^{n+1}
                let xn = xp.div(&nd.x, p, RM);
                let k = rv.add(&db.mul(&nd.l, p, RM).mul(&qv, p, RM), p, RM);
                let denom = db.mul(&nd.u, p, RM).mul(&nd.l, p, RM);
                let scale = xn.mul(&nd.w, p, RM).div(&denom, p, RM);
                let f = k.mul(&scale, p, RM);
                sum = sum.add(&f, p, RM);
                // cancellation in K: error relative to the sum of absolute terms
                let node_err = Bound::from_abs(&av)
                    .mul(&Bound::from_abs(&scale))
                    .mul(&Bound::pow2(-(p as i64)).mul_u64(per_node_ops))
                    .add(&Bound::from_abs(&f).mul(&Bound::pow2(-(p as i64)).mul_u64(16)));
                rounding = rounding.add(&node_err);
            }
            state.set(count);
            let sum_err = Bound::from_abs(&sum).mul(&Bound::pow2(-(p as i64)).mul_u64(count as u64 + 1));
            // the skipped tail is a property of the integral, independent of h;
            // scale it up so that after the h division it is still covered
            let mut tail_scaled = tail.clone();
            for _ in 0..level + 1 {
                tail_scaled = tail_scaled.mul_u64(2);
            }
            LevelState { sum: sum.clone(), rounding: rounding.add(&sum_err).add(&tail_scaled) }
        },
        || state.get(),
    )
}

/// `I_1 = 2 gamma + 2 log 2 - 5/2`, handy as a closed-form check.
pub fn i1_closed_form(gamma: &ErrReal, ln2: &ErrReal) -> ErrReal {
    let two = ErrReal::from_u64(2, 64);
    gamma.add(ln2).mul(&two).sub(&ErrReal::from_f64(2.5, 64))
}
