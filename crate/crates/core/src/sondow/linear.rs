use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::{log_sn, log_sn_reduced, relation_check, FRecord, Options};
use crate::error::{Error, Result};
use crate::exact::{binomial, lcm_upto};
use crate::gamma_const::{const_value, ConstName, ConstRequest};
use crate::precreal::{log_of_int_bits, Bound, ErrReal};

/// Which distance the subsequence tracks: `{log S_n}` or `||log S_n||`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormVariant {
    Frac,
    Dist,
}

impl FormVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            FormVariant::Frac => "frac",
            FormVariant::Dist => "dist",
        }
    }
}

/// One element `q_k gamma - p_k` of the sequence of linear forms.
#[derive(Debug, Clone)]
pub struct LinearFormRecord {
    pub k: usize,
    pub n_k: u64,
    pub p_k: BigInt,
    pub q_k: BigUint,
    /// `(q_k gamma - p_k) / b`
    pub residual: ErrReal,
    /// The same quantity through `d_2n I_n` and `log S_n`.
    pub residual_alt: ErrReal,
    /// `n_k / k`
    pub sigma_est: f64,
    /// `-(1/k) log |residual|`
    pub tau_est: f64,
    /// `(1/k) log q_k`
    pub log_q_over_k: f64,
}

fn check_ab(a: i64, b: u64) -> Result<()> {
    if b == 0 || a < 0 || a as u64 > b {
        return Err(Error::InvalidInput(format!("need b >= 1 and 0 <= a/b <= 1, got {a}/{b}")));
    }
    Ok(())
}

/// `p_k`, `q_k` and the residual, computed directly and through the integral.
pub fn linear_form_sequence(
    n_list: &[u64],
    a: i64,
    b: u64,
    variant: FormVariant,
    opts: &Options,
) -> Result<Vec<LinearFormRecord>> {
    check_ab(a, b)?;
    let ab = ErrReal::from_rational(&BigRational::new(BigInt::from(a), BigInt::from(b)), 192);
    let mut out = Vec::with_capacity(n_list.len());
    for (idx, &n) in n_list.iter().enumerate() {
        let k = idx + 1;
        let rel = relation_check(n, 1e-20, opts)?;
        let d = lcm_upto(2 * n);
        let q = BigUint::from(b) * &d * binomial(2 * n, n);
        let log_s = log_sn(n, 128, opts)?;
        let fl = crate::precreal::certified_floor(&log_s)?;
        let bi = BigInt::from(b);
        let (p, alt) = match variant {
            FormVariant::Frac => {
                let p = &bi * &rel.nearest_int - &bi * &fl - a;
                let frac = log_s.sub(&ErrReal::from_bigint(&fl, (fl.bits() as usize).max(64)));
                (p, rel.i_n.mul_biguint(&d).add(&ab).sub(&frac))
            }
            FormVariant::Dist => {
                let ceil = &fl + 1;
                let p = &bi * &rel.nearest_int - &bi * &ceil + a;
                let up = ErrReal::from_bigint(&ceil, (ceil.bits() as usize).max(64)).sub(&log_s);
                (p, rel.i_n.mul_biguint(&d).add(&up).sub(&ab))
            }
        };
        let gamma_digits = ((q.bits() as f64 + 100.0) * std::f64::consts::LOG10_2).ceil() as usize;
        let gamma = const_value(ConstRequest::new(ConstName::Gamma, gamma_digits))?;
        let direct = gamma
            .mul_biguint(&q)
            .sub(&ErrReal::from_bigint(&p, (p.bits() as usize).max(64)))
            .div(&ErrReal::from_u64(b, 64))?;
        if !direct.overlaps(&alt) {
            return Err(Error::IdentityMismatch {
                n,
                diff: direct.center_distance(&alt).to_f64_up(),
                bound: direct.abs_err().add(alt.abs_err()).to_f64_up(),
            });
        }
        let mag = direct.abs().to_f64();
        let tau_est = if mag > 0.0 { -mag.ln() / k as f64 } else { f64::INFINITY };
        let log_q = log_of_int_bits(&q, 40, opts.ceiling_bits)?.to_f64();
        out.push(LinearFormRecord {
            k,
            n_k: n,
            p_k: p,
            q_k: q,
            residual: direct,
            residual_alt: alt,
            sigma_est: n as f64 / k as f64,
            tau_est,
            log_q_over_k: log_q / k as f64,
        });
    }
    Ok(out)
}

/// An `n` whose `{log S_n}` (or `||log S_n||`) lies near `a/b`.
#[derive(Debug, Clone)]
pub struct ScanHit {
    pub n: u64,
    /// `|{log S_n} - a/b|` or `|(||log S_n||) - a/b|`
    pub deviation: ErrReal,
}

/// Least-squares slopes of `n_k` and `-log|deviation_k|` against `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsequenceFit {
    pub sigma: f64,
    pub tau: f64,
    /// `sigma < tau`, which the growth of `q_k` rules out for an irrational
    /// limit point.
    pub sigma_below_tau: bool,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub a: i64,
    pub b: u64,
    pub threshold: f64,
    pub frac_hits: Vec<ScanHit>,
    pub dist_hits: Vec<ScanHit>,
    /// Minimizer over every scanned `n`, whether or not it is a hit.
    pub frac_best: Option<ScanHit>,
    pub dist_best: Option<ScanHit>,
    pub frac_fit: Option<SubsequenceFit>,
    pub dist_fit: Option<SubsequenceFit>,
    /// `n` whose record could not be certified.
    pub skipped: Vec<u64>,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn fit(hits: &[ScanHit]) -> Option<SubsequenceFit> {
    if hits.len() < 2 {
        return None;
    }
    let ks: Vec<f64> = (1..=hits.len()).map(|k| k as f64).collect();
    let ns: Vec<f64> = hits.iter().map(|h| h.n as f64).collect();
    let logs: Vec<f64> = hits.iter().map(|h| h.deviation.to_f64().ln()).collect();
    if logs.iter().any(|l| !l.is_finite()) {
        return None;
    }
    let sigma = slope(&ks, &ns);
    let tau = -slope(&ks, &logs);
    Some(SubsequenceFit { sigma, tau, sigma_below_tau: sigma < tau, points: hits.len() })
}

/// Scan precomputed records for `{log S_n}` and `||log S_n||` near `a/b`.
pub fn scan_records(records: &[FRecord], a: i64, b: u64, threshold: f64) -> Result<ScanResult> {
    check_ab(a, b)?;
    let ab = ErrReal::from_rational(&BigRational::new(BigInt::from(a), BigInt::from(b)), 192);
    let thr = if threshold > 0.0 { Some(Bound::from_f64(threshold)) } else { None };
    let mut res = ScanResult {
        a,
        b,
        threshold,
        frac_hits: Vec::new(),
        dist_hits: Vec::new(),
        frac_best: None,
        dist_best: None,
        frac_fit: None,
        dist_fit: None,
        skipped: Vec::new(),
    };
    for r in records {
        for (x, hits, best) in [
            (&r.frac, &mut res.frac_hits, &mut res.frac_best),
            (&r.dist, &mut res.dist_hits, &mut res.dist_best),
        ] {
            let dev = x.sub(&ab).abs();
            let hit = ScanHit { n: r.n, deviation: dev };
            let centre = Bound::from_abs(hit.deviation.value());
            if thr.as_ref().is_some_and(|t| centre <= *t) {
                hits.push(hit.clone());
            }
            let better = match best {
                None => true,
                Some(prev) => centre < Bound::from_abs(prev.deviation.value()),
            };
            if better {
                *best = Some(hit);
            }
        }
    }
    res.frac_fit = fit(&res.frac_hits);
    res.dist_fit = fit(&res.dist_hits);
    Ok(res)
}

/// Computes the records for `1..=n_max` and scans them.
pub fn subsequence_scan(n_max: u64, a: i64, b: u64, threshold: f64, opts: &Options) -> Result<ScanResult> {
    check_ab(a, b)?;
    let ns: Vec<u64> = (1..=n_max).collect();
    let computed = crate::par_map(&ns, |&n| log_sn_reduced(n, 12, opts));
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in ns.iter().zip(computed) {
        match r {
            Ok(r) => records.push(r),
            Err(Error::PrecisionExhausted { .. }) => skipped.push(*n),
            Err(e) => return Err(e),
        }
    }
    let mut res = scan_records(&records, a, b, threshold)?;
    res.skipped = skipped;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_holds_both_variants() {
        let o = Options::default();
        for v in [FormVariant::Frac, FormVariant::Dist] {
            let recs = linear_form_sequence(&[1, 2, 3, 4], 1, 3, v, &o).unwrap();
            for r in &recs {
                assert!(r.q_k > BigUint::from(0u32));
                assert!(r.residual.overlaps(&r.residual_alt));
            }
        }
    }

    #[test]
    fn zero_threshold_gives_no_hits() {
        let s = subsequence_scan(10, 0, 1, 0.0, &Options::default()).unwrap();
        assert!(s.frac_hits.is_empty() && s.dist_hits.is_empty());
        assert!(s.frac_best.is_some());
    }

    #[test]
    fn bad_ratio_rejected() {
        assert!(subsequence_scan(5, 3, 2, 0.1, &Options::default()).is_err());
        assert!(linear_form_sequence(&[1], 1, 0, FormVariant::Frac, &Options::default()).is_err());
    }

    #[test]
    fn fit_recovers_slopes() {
        let hits: Vec<ScanHit> = (1..=6u64)
            .map(|k| ScanHit { n: 3 * k, deviation: ErrReal::from_f64((-0.5 * k as f64).exp(), 128) })
            .collect();
        let f = fit(&hits).unwrap();
        assert!((f.sigma - 3.0).abs() < 1e-9 && (f.tau - 0.5).abs() < 1e-9);
        assert!(!f.sigma_below_tau);
    }
}
