use super::cf::ConvergentRecord;
use crate::error::{Error, Result};

/// Per-index values of one diagnostic together with finite-data summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSeries {
    /// `(k, value)` for every record where the value is defined.
    pub values: Vec<(usize, f64)>,
    /// Running maximum over `values`.
    pub running_max: Vec<f64>,
    /// Maximum over the last `window` values.
    pub tail_max: f64,
    pub window: usize,
}

fn summarize(values: Vec<(usize, f64)>, window: usize) -> Result<EstimateSeries> {
    if values.is_empty() {
        return Err(Error::InvalidInput("no record has a defined value".into()));
    }
    let mut running_max = Vec::with_capacity(values.len());
    let mut m = f64::NEG_INFINITY;
    for &(_, v) in &values {
        m = m.max(v);
        running_max.push(m);
    }
    let window = window.clamp(1, values.len());
    let tail_max = values[values.len() - window..].iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    Ok(EstimateSeries { values, running_max, tail_max, window })
}

fn check(records: &[ConvergentRecord]) -> Result<()> {
    if records.len() < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 records, got {}", records.len())));
    }
    Ok(())
}

/// `mu_k = -log|alpha - p_k/q_k| / log q_k`
pub fn mu_estimate(records: &[ConvergentRecord], window: usize) -> Result<EstimateSeries> {
    check(records)?;
    summarize(records.iter().filter_map(|r| r.mu_k.map(|v| (r.k, v))).collect(), window)
}

/// `beta_k = |alpha - p_k/q_k|^{-1/q_k}`
pub fn beta_estimate(records: &[ConvergentRecord], window: usize) -> Result<EstimateSeries> {
    check(records)?;
    summarize(records.iter().filter_map(|r| r.beta_k.map(|v| (r.k, v))).collect(), window)
}
