use irrbase_wasm::{convergents, f_series_report, mu_curve, MAX_N};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn f_series_plot_and_rows() {
    let v = parse(&f_series_report(1, 10, 6).unwrap());
    let svg = v["svg"].as_str().unwrap();
    assert_eq!(svg.matches("<circle").count(), 10);
    assert_eq!(v["rows"][4]["F"], "-0.667695");
    assert!(f_series_report(1, MAX_N + 1, 6).is_err());
    assert!(f_series_report(0, 3, 6).is_err());
}

#[test]
fn mu_curve_branches() {
    let v = parse(&mu_curve(1.0, 0.5, 4.0, 100).unwrap());
    assert!((v["mu"].as_f64().unwrap() - 7.772589).abs() < 1e-6);
    let curve = v["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 100);
    let last = curve.last().unwrap()[1].as_f64().unwrap();
    assert!((last - 5.383_05).abs() < 1e-4);
    let edge = v["edge"].as_f64().unwrap();
    assert!(mu_curve(1.0, edge, 4.0, 10).is_err());
}

#[test]
fn convergent_tables() {
    let v = parse(&convergents("355/113", 10).unwrap());
    let a: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["a_k"].as_str().unwrap()).collect();
    assert_eq!(a, ["3", "7", "16"]);
    let s = parse(&convergents("sqrt2", 8).unwrap());
    assert_eq!(s[3]["p_k"], "17");
    assert_eq!(s[3]["q_k"], "12");
    let l = parse(&convergents("L", 4).unwrap());
    assert_eq!(l[2]["q_k"], "1001");
    assert!(convergents("nonsense", 5).is_err());
}
