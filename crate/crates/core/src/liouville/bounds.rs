//! Closed-form bounds on irrationality exponents and bases.

use std::f64::consts::{E, LN_2};

use crate::error::{Error, Result};

/// `log(4/e)`
pub const LOG_4_OVER_E: f64 = 2.0 * LN_2 - 1.0;
/// `log 8 / (log 4 - 1)`
pub const MU_UPPER_BRANCH: f64 = 3.0 * LN_2 / (2.0 * LN_2 - 1.0);
/// `2e`
pub const TWO_E: f64 = 2.0 * E;

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {x}")))
    }
}

/// `mu(alpha) <= 1 + sigma/tau` for linear forms with `q_n = e^{sigma n + o(n)}`
/// and `|q_n alpha - p_n| = e^{-tau n + o(n)}`.
pub fn chudnovsky_hata_bound(sigma: f64, tau: f64) -> Result<f64> {
    positive("sigma", sigma)?;
    positive("tau", tau)?;
    Ok(1.0 + sigma / tau)
}

/// Exponent bound for the subsequence growth `(sigma, tau)`:
/// `1 + (2 sigma/tau) log(2e)` below `tau = 2 sigma log(4/e)`,
/// `log 8/(log 4 - 1)` above.
pub fn mu_sigma_tau(sigma: f64, tau: f64) -> Result<f64> {
    positive("sigma", sigma)?;
    positive("tau", tau)?;
    let edge = 2.0 * sigma * LOG_4_OVER_E;
    if (tau - edge).abs() <= 4.0 * f64::EPSILON * edge {
        return Err(Error::BranchBoundary { sigma, tau });
    }
    if tau < edge {
        Ok(1.0 + (2.0 * sigma / tau) * (1.0 + LN_2))
    } else {
        Ok(MU_UPPER_BRANCH)
    }
}

/// `2 e^{1 + delta/2}`, the base bound under the `delta`-relaxed condition.
pub fn theorem_bounds(delta: f64) -> Result<f64> {
    if !(0.0..2.0 * LOG_4_OVER_E).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta must lie in [0, 2 log(4/e)), got {delta}")));
    }
    Ok(2.0 * (1.0 + delta / 2.0).exp())
}

/// `e^{-1-eps} min(4, lambda/2)`; a value above 1 is what the base bound needs.
pub fn m_lambda_eps(lambda: f64, eps: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be nonnegative, got {eps}")));
    }
    Ok((-1.0 - eps).exp() * (lambda / 2.0).min(4.0))
}

/// `q log(beta + eps) / log q`: the exponent `x` with `q^x = (beta+eps)^q`.
pub fn equivalent_exponent(beta: f64, eps: f64, q: f64) -> Result<f64> {
    positive("beta + eps", beta + eps)?;
    if q.is_nan() || q <= 1.0 {
        return Err(Error::InvalidInput(format!("q must exceed 1, got {q}")));
    }
    Ok(q * (beta + eps).ln() / q.ln())
}

/// Inputs for a batch of bound evaluations; each calculator uses the fields
/// it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundInputs {
    pub sigma: Option<f64>,
    pub tau: Option<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
    pub eps: Option<f64>,
    /// Target ratio `a/b` of the linear forms.
    pub a: Option<i64>,
    pub b: Option<u64>,
}

/// Every calculator whose inputs are present, as `(name, value)`.
pub fn evaluate_bounds(inputs: &BoundInputs) -> Result<Vec<(&'static str, f64)>> {
    let mut out = Vec::new();
    if let Some(d) = inputs.delta {
        out.push(("beta_bound", theorem_bounds(d)?));
    }
    if let (Some(s), Some(t)) = (inputs.sigma, inputs.tau) {
        out.push(("chudnovsky_hata", chudnovsky_hata_bound(s, t)?));
        out.push(("mu_sigma_tau", mu_sigma_tau(s, t)?));
    }
    if let Some(l) = inputs.lambda {
        out.push(("m_lambda_eps", m_lambda_eps(l, inputs.eps.unwrap_or(0.0))?));
    }
    if let (Some(a), Some(b)) = (inputs.a, inputs.b) {
        if b == 0 || a < 0 || a as u64 > b {
            return Err(Error::InvalidInput(format!("need b >= 1 and 0 <= a/b <= 1, got {a}/{b}")));
        }
        out.push(("target_ratio", a as f64 / b as f64));
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no bound inputs given".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hata() {
        assert_eq!(chudnovsky_hata_bound(0.7, 0.7).unwrap(), 2.0);
        assert_eq!(chudnovsky_hata_bound(2.0, 1.0).unwrap(), 3.0);
        for s in [0.3, 1.0, 4.0] {
            let v = chudnovsky_hata_bound(2.0 * s * (1.0 + LN_2), 2.0 * s * LOG_4_OVER_E).unwrap();
            assert!((v - MU_UPPER_BRANCH).abs() < 1e-12);
        }
        assert!(chudnovsky_hata_bound(0.0, 1.0).is_err());
        assert!(chudnovsky_hata_bound(1.0, -1.0).is_err());
    }

    #[test]
    fn mu_branches() {
        assert!((MU_UPPER_BRANCH - 5.383_05).abs() < 1e-5);
        assert_eq!(mu_sigma_tau(1.0, 1.0).unwrap(), MU_UPPER_BRANCH);
        let v = mu_sigma_tau(1.0, 0.5).unwrap();
        assert!((v - 7.7726).abs() < 1e-4);
        let edge = 2.0 * LOG_4_OVER_E;
        assert!(matches!(mu_sigma_tau(1.0, edge), Err(Error::BranchBoundary { .. })));
        let below = mu_sigma_tau(1.0, edge * (1.0 - 1e-14)).unwrap();
        assert!((below - MU_UPPER_BRANCH).abs() < 1e-12);
    }

    #[test]
    fn base_bounds() {
        assert!((theorem_bounds(0.0).unwrap() - 5.436_563_656_918_09).abs() < 1e-12);
        let near = theorem_bounds(2.0 * LOG_4_OVER_E - 1e-12).unwrap();
        assert!(near < 8.0 && near > 8.0 - 1e-9);
        assert!(theorem_bounds(2.0 * LOG_4_OVER_E).is_err());
        assert!(theorem_bounds(-0.1).is_err());
        assert!((m_lambda_eps(8.0, 0.0).unwrap() - 4.0 / E).abs() < 1e-15);
        assert!((m_lambda_eps(2.0, 0.0).unwrap() - 1.0 / E).abs() < 1e-15);
    }

    #[test]
    fn equivalent_exponent_round_trips() {
        let x = equivalent_exponent(2.0, 0.0, 16.0).unwrap();
        assert!((16f64.powf(x) - 2f64.powi(16)).abs() < 1e-6);
        assert!(equivalent_exponent(2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn batch() {
        let b = BoundInputs { delta: Some(0.0), sigma: Some(1.0), tau: Some(0.5), ..Default::default() };
        let v = evaluate_bounds(&b).unwrap();
        assert_eq!(v[0].0, "beta_bound");
        assert_eq!(v.len(), 3);
        assert!(evaluate_bounds(&BoundInputs::default()).is_err());
        assert!((TWO_E - theorem_bounds(0.0).unwrap()).abs() < 1e-15);
    }
}
