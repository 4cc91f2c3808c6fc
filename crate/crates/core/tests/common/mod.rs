//! Random expression trees over `ErrReal`, shared by the property tests
//! and the acceptance run.
#![allow(dead_code)]

use irrbase::precreal::convert::bf_to_rational;
use irrbase::precreal::ErrReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub enum Expr {
    Leaf(BigRational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

pub fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        let p: i64 = rng.gen_range(-60..=60);
        let q: i64 = rng.gen_range(1..=24);
        return Expr::Leaf(BigRational::new(BigInt::from(p), BigInt::from(q)));
    }
    let sub = |rng: &mut ChaCha8Rng| Box::new(random_expr(rng, depth - 1));
    match rng.gen_range(0..7) {
        0 => Expr::Add(sub(rng), sub(rng)),
        1 => Expr::Sub(sub(rng), sub(rng)),
        2 => Expr::Mul(sub(rng), sub(rng)),
        3 => Expr::Div(sub(rng), sub(rng)),
        4 => Expr::Ln(sub(rng)),
        5 => Expr::Exp(sub(rng)),
        _ => Expr::Sqrt(sub(rng)),
    }
}

impl Expr {
    /// `None` outside the domain (or where the interval cannot decide it).
    pub fn eval(&self, prec: usize) -> Option<ErrReal> {
        Some(match self {
            Expr::Leaf(r) => ErrReal::from_rational(r, prec),
            Expr::Add(a, b) => a.eval(prec)?.add(&b.eval(prec)?),
            Expr::Sub(a, b) => a.eval(prec)?.sub(&b.eval(prec)?),
            Expr::Mul(a, b) => a.eval(prec)?.mul(&b.eval(prec)?),
            Expr::Div(a, b) => a.eval(prec)?.div(&b.eval(prec)?).ok()?,
            Expr::Ln(a) => a.eval(prec)?.ln().ok()?,
            Expr::Exp(a) => {
                let x = a.eval(prec)?;
                if x.to_f64().abs() > 40.0 {
                    return None;
                }
                x.exp().ok()?
            }
            Expr::Sqrt(a) => a.eval(prec)?.sqrt().ok()?,
        })
    }

    /// Exact value when the tree is purely rational.
    pub fn exact(&self) -> Option<BigRational> {
        Some(match self {
            Expr::Leaf(r) => r.clone(),
            Expr::Add(a, b) => a.exact()? + b.exact()?,
            Expr::Sub(a, b) => a.exact()? - b.exact()?,
            Expr::Mul(a, b) => a.exact()? * b.exact()?,
            Expr::Div(a, b) => {
                let d = b.exact()?;
                if d.is_zero() {
                    return None;
                }
                a.exact()? / d
            }
            _ => return None,
        })
    }
}

/// Outcome of one soundness sweep.
#[derive(Debug, Default)]
pub struct Soundness {
    pub checked: usize,
    pub exact_checked: usize,
    pub violations: Vec<String>,
}

/// Evaluates random trees at `prec` and `4 prec` until `count` of them are
/// defined. Intervals must overlap, and must contain the exact value when
/// there is one.
pub fn errreal_soundness(seed: u64, count: usize, prec: usize) -> Soundness {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Soundness::default();
    while out.checked < count {
        let e = random_expr(&mut rng, 4);
        let (Some(lo), Some(hi)) = (e.eval(prec), e.eval(4 * prec)) else { continue };
        out.checked += 1;
        if !lo.overlaps(&hi) {
            out.violations.push(format!("{e:?}: {lo:?} vs {hi:?}"));
            continue;
        }
        if let Some(x) = e.exact() {
            out.exact_checked += 1;
            for r in [&lo, &hi] {
                let (a, b) = (bf_to_rational(&r.lo()), bf_to_rational(&r.hi()));
                if x < a || x > b {
                    out.violations.push(format!("{e:?}: exact {x} outside {r:?}"));
                }
            }
        }
        if hi.abs_err() > lo.abs_err() && !lo.abs_err().is_zero() {
            out.violations.push(format!("{e:?}: radius grew with precision"));
        }
    }
    out
}

pub fn abs_rational(x: &BigRational) -> BigRational {
    x.abs()
}
