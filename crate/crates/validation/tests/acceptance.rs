//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::Instant;

use irrbase::exact::{binomial, lcm_upto};
use irrbase::gamma_const::{const_value, ConstName, ConstRequest};
use irrbase::liouville::{
    beta_at_partial, cf_convergents, cf_expand, cf_expand_rational, determinants, l_convergents, l_pairs,
    m_lambda_eps, mu_sigma_tau, theorem_bounds, verify_super_liouville, LOG_4_OVER_E,
};
use irrbase::precreal::{log_of_int_bits, Bound, ErrReal, DEFAULT_MAX_PRECISION_BITS};
use irrbase::report::{f_series, render_figure1, FRow, OutputMeta, SeriesOptions};
use irrbase::sondow::{
    asymptotic_monitor, f_of_n, integral_in, log_sn, log_sn_grouped, log_sn_naive, relation_check, Options,
    DUAL_AGREEMENT,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn lt(a: &ErrReal, b: &ErrReal) -> bool {
    a.hi() < b.lo()
}

fn anchors() -> Outcome {
    let o = Options::default();
    let f1 = f_of_n(1, 6, &o).map_err(err)?.to_f64();
    let f5 = f_of_n(5, 6, &o).map_err(err)?.to_f64();
    check(
        (f1 + 1.480).abs() <= 0.005 && (f5 + 0.667).abs() <= 0.005,
        format!("F(1) = {f1:.6}, F(5) = {f5:.6}"),
    )
}

fn minimum_structure() -> Outcome {
    let rows = f_series(2, 200, 4, None, &SeriesOptions::default()).map_err(err)?;
    let skipped: Vec<u64> = rows.iter().filter(|r| !r.is_ok()).map(|r| r.n).collect();
    if !skipped.is_empty() {
        return Err(format!("uncertified n: {skipped:?}"));
    }
    let (n_min, f_min) = rows
        .iter()
        .filter_map(|r| r.f_value().map(|f| (r.n, f)))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    check(n_min == 5 && f_min >= -0.675, format!("min F(n) over 2..200 is {f_min} at n = {n_min}"))
}

fn integrality() -> Outcome {
    let o = Options::default();
    let mut worst = 0f64;
    let mut worst_dual = 0f64;
    for n in 1..=40 {
        let r = relation_check(n, 1e-20, &o).map_err(|e| format!("n = {n}: {e}"))?;
        worst = worst.max(r.residual.abs_upper().to_f64_up());
        worst_dual = worst_dual.max(r.dual_difference.to_f64_up());
        if r.dual_difference > Bound::from_f64(DUAL_AGREEMENT) {
            return Err(format!("n = {n}: evaluators differ by {:e}", r.dual_difference.to_f64_up()));
        }
    }
    check(
        worst <= 1e-20,
        format!("n = 1..40: max residual {worst:.2e}, max evaluator difference {worst_dual:.2e}"),
    )
}

fn growth_bounds() -> Outcome {
    for n in 1..=40u64 {
        let i_n = integral_in(n, &Bound::pow2(-(4 * n as i64 + 64))).map_err(err)?;
        let zero = ErrReal::zero(64);
        let cap = ErrReal::from_rational(&BigRational::new(BigInt::one(), BigInt::one() << (4 * n)), 64);
        if !(lt(&zero, &i_n) && lt(&i_n, &cap)) {
            return Err(format!("I_{n} = {} not in (0, 4^-{})", i_n.to_f64(), 2 * n));
        }
    }
    for n in 1..=500u64 {
        if binomial(2 * n, n) >= BigUint::one() << (2 * n) {
            return Err(format!("C({}, {n}) >= 4^{n}", 2 * n));
        }
    }
    let c = BigRational::new(103_883.into(), 100_000.into());
    let (mut arg, mut best) = (0, 0f64);
    for n in 1..=500u64 {
        let log_d = log_of_int_bits(&lcm_upto(n), 64, DEFAULT_MAX_PRECISION_BITS).map_err(err)?;
        let cap = ErrReal::from_rational(&(&c * BigInt::from(n)), 128);
        if !lt(&log_d, &cap) {
            return Err(format!("log d_{n} = {} exceeds 1.03883 n", log_d.to_f64()));
        }
        let r = log_d.to_f64() / n as f64;
        if r > best {
            (arg, best) = (n, r);
        }
    }
    check(
        arg == 113,
        format!("0 < I_n < 4^-2n for n <= 40; C(2n,n) < 4^n for n <= 500; max (log d_n)/n = {best:.7} at n = {arg}"),
    )
}

fn trend() -> Outcome {
    let o = Options::default();
    let dist = |n| -> Result<f64, String> {
        Ok((asymptotic_monitor(n, &o).map_err(err)?.log_d2n_in_over_n.to_f64() + 2.0 * LOG_4_OVER_E).abs())
    };
    let (d10, d40) = (dist(10)?, dist(40)?);
    check(d40 < d10 && d40 < 0.2, format!("distance to -2 log(4/e): {d10:.4} at n = 10, {d40:.4} at n = 40"))
}

fn tower() -> Outcome {
    let holds = |n, l: u64| verify_super_liouville(n, &BigRational::from_integer(l.into())).map_err(err);
    let (a, b) = (holds(2, 4)?, holds(3, 8)?);
    let b2 = beta_at_partial(2).map_err(err)?.beta_rounded();
    let b3 = beta_at_partial(3).map_err(err)?.beta_rounded();
    check(
        a && b && b2 == BigUint::from(8u32) && b3 == BigUint::from(16u32),
        format!("inequality at (2, 4): {a}, (3, 8): {b}; beta at s_2 = {b2}, s_3 = {b3}"),
    )
}

fn liouville_number() -> Outcome {
    let pairs = l_pairs(5);
    let q2 = pairs[2].1.clone();
    let ten = BigUint::from(10u32);
    let fact = |n: u32| (1..=n).product::<u32>();
    let brackets = (2..=5).all(|n| {
        let q = &pairs[n as usize].1;
        ten.pow(fact(n)) < *q && *q < ten.pow(2 * fact(n))
    });
    let recs = l_convergents(4).map_err(err)?;
    let mu_max = recs.iter().filter(|r| r.k <= 4).filter_map(|r| r.mu_k).fold(0f64, f64::max);
    let beta3 = recs.iter().find(|r| r.k == 3).and_then(|r| r.beta_k).ok_or("beta_3 not certified")?;
    check(
        q2 == BigUint::from(1001u32) && brackets && mu_max >= 20.0 && beta3 < 1.000001,
        format!("q_2 = {q2}, brackets 2..5: {brackets}, max mu_k for k <= 4 = {mu_max:.4} (need >= 20), beta_3 = {beta3:.10}"),
    )
}

fn bound_calculators() -> Outcome {
    let t0 = theorem_bounds(0.0).map_err(err)?;
    let upper = mu_sigma_tau(1.0, 1.0).map_err(err)?;
    let edge = 2.0 * LOG_4_OVER_E;
    // nearest points outside the boundary guard on either side
    let h = 8.0 * f64::EPSILON * edge;
    let below = mu_sigma_tau(1.0, edge - h).map_err(err)?;
    let above = mu_sigma_tau(1.0, edge + h).map_err(err)?;
    let limit = (below - above).abs();
    let mle = m_lambda_eps(8.0, 0.0).map_err(err)?;
    let four_e = 4.0 / std::f64::consts::E;
    check(
        (t0 - 5.43656).abs() < 1e-5 && upper > 5.383 && upper < 5.384 && limit < 1e-12 && (mle - four_e).abs() < 1e-12,
        format!("theorem_bounds(0) = {t0:.6}, upper branch = {upper:.6}, jump at edge {limit:.1e}, m(8, 0) = {mle:.12}"),
    )
}

fn property_suites() -> Outcome {
    let s = common::errreal_soundness(20_251_015, 10_000, 96);
    if let Some(v) = s.violations.first() {
        return Err(format!("{} soundness violations, first: {v}", s.violations.len()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut dets = 0;
    for _ in 0..500 {
        let r = BigRational::new(rng.gen_range(-1_000_000i64..1_000_000).into(), rng.gen_range(1i64..1_000_000).into());
        let recs = cf_convergents(&cf_expand_rational(&r, 200), &ErrReal::from_rational(&r, 128));
        for d in determinants(&recs) {
            dets += 1;
            if !d.abs().is_one() {
                return Err(format!("determinant {d} for {r}"));
            }
        }
    }
    for name in [ConstName::E, ConstName::Pi, ConstName::Gamma] {
        let x = const_value(ConstRequest::new(name, 200)).map_err(err)?;
        let recs = cf_convergents(&cf_expand(&x, 100).map_err(err)?, &x);
        for d in determinants(&recs) {
            dets += 1;
            if !d.abs().is_one() || d.is_zero() {
                return Err(format!("determinant {d} for {}", name.as_str()));
            }
        }
    }

    let o = Options::default();
    for n in 1..=30 {
        let p = log_sn(n, 128, &o).map_err(err)?;
        let g = log_sn_grouped(n, 128, &o).map_err(err)?;
        let v = log_sn_naive(n, 128, &o).map_err(err)?;
        if !(p.overlaps(&g) && p.overlaps(&v)) {
            return Err(format!("log S_{n} summations disagree"));
        }
    }

    let meta = OutputMeta { version: "acceptance".into(), parse_id: "default".into(), config_hash: "0".into() };
    let opts = SeriesOptions { batch: 4, ..Default::default() };
    let a = f_series(1, 30, 6, None, &opts).map_err(err)?;
    let b = f_series(1, 30, 6, None, &opts).map_err(err)?;
    let csv = FRow::table(&a).to_csv(&meta);
    if csv != FRow::table(&b).to_csv(&meta) || render_figure1(&a).map_err(err)? != render_figure1(&b).map_err(err)? {
        return Err("reruns differ".into());
    }
    let dir = tempfile::tempdir().map_err(err)?;
    let ck = dir.path().join("series.ckpt");
    f_series(1, 17, 6, Some(&ck), &opts).map_err(err)?;
    let mut text = std::fs::read_to_string(&ck).map_err(err)?;
    text.push_str("18,ok,2");
    std::fs::write(&ck, text).map_err(err)?;
    let resumed = f_series(1, 30, 6, Some(&ck), &opts).map_err(err)?;
    check(
        FRow::table(&resumed).to_csv(&meta) == csv,
        format!(
            "{} expressions ({} exact), {dets} determinants, log S_n n <= 30, reruns and resume identical",
            s.checked, s.exact_checked
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("F(1), F(5) anchors", anchors),
        ("minimum of F(n) over 2..200", minimum_structure),
        ("integrality of d_2n A_n, n <= 40", integrality),
        ("I_n, C(2n,n) and d_n bounds", growth_bounds),
        ("trend of (1/n) log(d_2n I_n)", trend),
        ("tower T", tower),
        ("Liouville number L", liouville_number),
        ("bound calculators", bound_calculators),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("criterion {} PASS {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {d} ({secs:.1}s)", i + 1)
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
