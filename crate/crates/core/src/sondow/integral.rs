use num_bigint::BigInt;

use super::{log_sn, Options};
use crate::error::{Error, Result};
use crate::exact::{binomial, lcm_upto};
use crate::gamma_const::{const_value, ConstName, ConstRequest};
use crate::precreal::convert::bf_round;
use crate::precreal::{certified_frac, log_of_int_bits, Bound, ErrReal};
use crate::quad::{integral_1d, integral_2d, QuadResult};

/// Both evaluations of `I_n` and the value handed on.
#[derive(Debug, Clone)]
pub struct DualIntegral {
    pub n: u64,
    pub value: ErrReal,
    pub reduced: QuadResult,
    pub literal: QuadResult,
}

impl DualIntegral {
    /// `|reduced - literal|`, rounded up.
    pub fn difference(&self) -> Bound {
        self.reduced.value.center_distance(&self.literal.value)
    }
}

/// `I_n` by the reduced one-dimensional form and by the literal double
/// integral; a disagreement beyond the summed error bounds is a fault.
pub fn integral_in_detail(n: u64, target: &Bound) -> Result<DualIntegral> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let half = target.mul(&Bound::from_f64(0.5));
    let reduced = integral_1d(n, &half)?;
    let literal = integral_2d(n, &half)?;
    if !reduced.value.overlaps(&literal.value) {
        let allowed = reduced.value.abs_err().add(literal.value.abs_err());
        return Err(Error::MethodDisagreement {
            n,
            diff: reduced.value.center_distance(&literal.value).to_f64_up(),
            allowed: allowed.to_f64_up(),
        });
    }
    let value = reduced.value.clone();
    Ok(DualIntegral { n, value, reduced, literal })
}

/// `I_n` with `abs_err <= target`, cross-checked by two methods.
pub fn integral_in(n: u64, target: &Bound) -> Result<ErrReal> {
    integral_in_detail(n, target).map(|d| d.value)
}

/// Outcome of the integrality check `d_2n A_n in Z`.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub n: u64,
    pub i_n: ErrReal,
    /// `d_2n C(2n,n) gamma + log S_n - d_2n I_n`
    pub da_candidate: ErrReal,
    pub nearest_int: BigInt,
    pub residual: ErrReal,
    /// `|reduced - literal|` of the two `I_n` evaluations.
    pub dual_difference: Bound,
}

/// Largest admissible `I_n` error in the integrality pipeline, whatever the
/// tolerance.
pub const DUAL_AGREEMENT: f64 = 1e-30;

fn digits_for(bits: f64) -> usize {
    (bits * std::f64::consts::LOG10_2).ceil() as usize
}

/// Reconstructs `d_2n A_n` and checks that it is an integer within `tolerance`.
pub fn relation_check(n: u64, tolerance: f64, opts: &Options) -> Result<RelationReport> {
    if n == 0 || !(tolerance > 0.0 && tolerance < 0.5) {
        return Err(Error::InvalidInput("need n >= 1 and 0 < tolerance < 1/2".into()));
    }
    let tol = Bound::from_f64(tolerance);
    let quarter = tol.mul(&Bound::from_f64(0.25));
    let tol_bits = (-tolerance.log2()).ceil() as usize + 2;

    let d = lcm_upto(2 * n);
    let dc = &d * binomial(2 * n, n);
    // d_2n C(2n,n) err(gamma) <= tol/4
    let gamma_digits = digits_for(dc.bits() as f64 + tol_bits as f64) + 2;
    let gamma = const_value(ConstRequest::new(ConstName::Gamma, gamma_digits))?;
    let log_s = log_sn(n, tol_bits, opts)?;
    let i_target = quarter.div_by_lower(&crate::precreal::convert::biguint_to_bf(&d));
    let i_target = if i_target > Bound::from_f64(DUAL_AGREEMENT) { Bound::from_f64(DUAL_AGREEMENT) } else { i_target };
    let dual = integral_in_detail(n, &i_target)?;
    let dual_difference = dual.difference();
    let i_n = dual.value;

    let da = gamma.mul_biguint(&dc).add(&log_s).sub(&i_n.mul_biguint(&d));
    let nearest = bf_round(da.value());
    let residual = da.sub(&ErrReal::from_bigint(&nearest, (nearest.bits() as usize).max(64)));
    if residual.abs_upper() > tol {
        return Err(Error::IntegralityFailure {
            n,
            residual: residual.abs_upper().to_f64_up(),
            tolerance,
        });
    }
    Ok(RelationReport { n, i_n, da_candidate: da, nearest_int: nearest, residual, dual_difference })
}

/// `d_2n I_n - {log S_n}`. Refined until it is certified nonzero or the
/// precision ceiling is reached; a zero-straddling interval is returned
/// as is.
pub fn criterion_gap(n: u64, opts: &Options) -> Result<ErrReal> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let d = lcm_upto(2 * n);
    let db = crate::precreal::convert::biguint_to_bf(&d);
    let mut bits = 96usize;
    loop {
        let target = Bound::pow2(-(bits as i64 + 2));
        let i_n = integral_in(n, &target.div_by_lower(&db))?;
        let frac = certified_frac(&log_sn(n, bits + 2, opts)?)?;
        let gap = i_n.mul_biguint(&d).sub(&frac);
        let certified_nonzero = Bound::from_abs(gap.value()) > *gap.abs_err();
        if certified_nonzero || 2 * bits > opts.ceiling_bits.min(4096) {
            return Ok(gap);
        }
        bits *= 2;
    }
}

/// Normalized growth exponents at `n`.
#[derive(Debug, Clone)]
pub struct Monitor {
    pub n: u64,
    /// `(1/n) log d_n`
    pub log_dn_over_n: ErrReal,
    /// `(1/(2n)) log C(2n, n)`
    pub log_binom_over_2n: ErrReal,
    /// `(1/n) log I_n`
    pub log_in_over_n: ErrReal,
    /// `(1/n) log(d_2n I_n)`
    pub log_d2n_in_over_n: ErrReal,
}

/// The growth exponents that govern the linear forms, to about 25 digits.
pub fn asymptotic_monitor(n: u64, opts: &Options) -> Result<Monitor> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let bits = 96;
    let dn = log_of_int_bits(&lcm_upto(n), bits, opts.ceiling_bits)?.div_u64(n);
    let cb = log_of_int_bits(&binomial(2 * n, n), bits, opts.ceiling_bits)?.div_u64(2 * n);
    // I_n > 2^{-5n}, so this target leaves ~100 relative bits
    let i_n = integral_in(n, &Bound::pow2(-(5 * n as i64 + bits as i64)))?;
    let log_i = i_n.with_precision(bits + 64).ln()?;
    let log_d2n = log_of_int_bits(&lcm_upto(2 * n), bits, opts.ceiling_bits)?;
    Ok(Monitor {
        n,
        log_dn_over_n: dn,
        log_binom_over_2n: cb,
        log_in_over_n: log_i.div_u64(n),
        log_d2n_in_over_n: log_d2n.add(&log_i).div_u64(n),
    })
}
