//! Browser bindings: the `F(n)` plot, the `mu_{sigma,tau}` bound and
//! continued-fraction convergents.

use irrbase::exact::parse_rational;
use irrbase::liouville::{cf_convergents, cf_expand, l_convergents, mu_sigma_tau, ConvergentRecord, LOG_4_OVER_E};
use irrbase::precreal::ErrReal;
use irrbase::report::{f_series, render_figure1, FRow, SeriesOptions};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest `n` the page will compute; beyond this a browser tab stalls.
pub const MAX_N: u64 = 120;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `{svg, rows}` for `F(n)`, `n_lo <= n <= n_hi`.
pub fn f_series_report(n_lo: u64, n_hi: u64, digits: usize) -> Result<String, String> {
    if n_hi > MAX_N {
        return Err(format!("n is capped at {MAX_N} in the browser"));
    }
    let rows = f_series(n_lo, n_hi, digits, None, &SeriesOptions::default()).map_err(err)?;
    let svg = render_figure1(&rows).map_err(err)?;
    let table: Vec<_> = rows
        .iter()
        .map(|r: &FRow| json!({ "n": r.n, "status": r.status, "F": r.f, "F_err": r.f_err, "dist": r.dist }))
        .collect();
    Ok(json!({ "svg": svg, "rows": table }).to_string())
}

/// `mu_{sigma,tau}` at one point plus the curve `tau -> mu` on `(0, tau_max]`.
pub fn mu_curve(sigma: f64, tau: f64, tau_max: f64, points: usize) -> Result<String, String> {
    let at = mu_sigma_tau(sigma, tau).map_err(err)?;
    let points = points.clamp(2, 2000);
    let curve: Vec<[f64; 2]> = (1..=points)
        .map(|i| tau_max * i as f64 / points as f64)
        .filter_map(|t| mu_sigma_tau(sigma, t).ok().map(|m| [t, m]))
        .collect();
    Ok(json!({ "mu": at, "edge": 2.0 * sigma * LOG_4_OVER_E, "curve": curve }).to_string())
}

fn record_json(r: &ConvergentRecord) -> serde_json::Value {
    let p = r.p_k.to_string();
    let q = r.q_k.to_string();
    let short = |s: String| if s.len() > 60 { format!("<{} digits>", s.len()) } else { s };
    json!({
        "k": r.k,
        "a_k": short(r.a_k.to_string()),
        "p_k": short(p),
        "q_k": short(q),
        "mu_k": r.mu_k,
        "beta_k": r.beta_k,
    })
}

/// Convergents of `sqrt2`, `golden`, `L`, or a rational/decimal literal.
pub fn convergents(alpha: &str, depth: usize) -> Result<String, String> {
    let depth = depth.clamp(1, 200);
    let recs = match alpha.trim() {
        "L" => l_convergents(depth.min(7) - 1).map_err(err)?,
        name @ ("sqrt2" | "golden") => {
            let mut bits = 4 * depth + 64;
            loop {
                let five = ErrReal::from_u64(5, bits);
                let x = if name == "sqrt2" {
                    ErrReal::from_u64(2, bits).sqrt()
                } else {
                    five.sqrt().map(|s| s.add(&ErrReal::from_u64(1, bits)).div_u64(2))
                }
                .map_err(err)?;
                match cf_expand(&x, depth) {
                    Ok(q) => break cf_convergents(&q, &x),
                    Err(_) if bits < 1 << 16 => bits *= 2,
                    Err(e) => return Err(err(e)),
                }
            }
        }
        lit => {
            let r = parse_rational(lit).map_err(err)?;
            let x = ErrReal::from_rational(&r, 256);
            let q = irrbase::liouville::cf_expand_rational(&r, depth);
            cf_convergents(&q, &x)
        }
    };
    Ok(serde_json::Value::Array(recs.iter().map(record_json).collect()).to_string())
}

#[wasm_bindgen(js_name = fSeries)]
pub fn f_series_js(n_lo: u32, n_hi: u32, digits: u32) -> Result<String, JsValue> {
    f_series_report(n_lo as u64, n_hi as u64, digits as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = muCurve)]
pub fn mu_curve_js(sigma: f64, tau: f64, tau_max: f64, points: u32) -> Result<String, JsValue> {
    mu_curve(sigma, tau, tau_max, points as usize).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = convergents)]
pub fn convergents_js(alpha: &str, depth: u32) -> Result<String, JsValue> {
    convergents(alpha, depth as usize).map_err(|e| JsValue::from_str(&e))
}
