use irrbase::exact::{parse_rational, sn_digit_estimate};
use irrbase::gamma_const::{const_value, ConstName, ConstRequest};
use irrbase::liouville::{
    beta_at_partial, beta_estimate, cf_convergents, cf_expand, evaluate_bounds, l_chain_start, l_convergents,
    mu_estimate, tower_partial, tower_t, verify_l_chain, verify_super_liouville, BoundInputs, ConvergentRecord,
    LOG_4_OVER_E, L_DEPTH_CAP, TOWER_DEPTH_CAP,
};
use irrbase::precreal::{Bound, ErrReal};
use irrbase::report::{f_series, Cell, ColumnKind, FRow, SeriesOptions, Table};
use irrbase::sondow::{
    asymptotic_monitor, criterion_gap, integral_in_detail, log_sn, log_sn_reduced, relation_check, subsequence_scan,
    Options, ScanHit, SubsequenceFit,
};
use irrbase::{Error, Result};

use crate::args::{Alpha, Cli, Command, Which};

use ColumnKind::{Plain, Real};

fn fmt_f(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{x:.digits$}")
    } else {
        x.to_string()
    }
}

fn sondow_opts(cli: &Cli) -> Options {
    Options { parse: cli.common.parse.into(), ceiling_bits: cli.common.precision_ceiling }
}

pub fn series_rows(cli: &Cli) -> Result<Vec<FRow>> {
    let c = &cli.common;
    let opts = SeriesOptions { sondow: sondow_opts(cli), ..SeriesOptions::default() };
    f_series(c.n.lo, c.n.hi, c.digits, cli.io.checkpoint.as_deref(), &opts)
}

/// The table a subcommand prints; `plot` is handled by the caller.
pub fn table(cli: &Cli) -> Result<Table> {
    match &cli.command {
        Command::FSeries | Command::Plot => Ok(FRow::table(&series_rows(cli)?)),
        Command::Sn => sn(cli),
        Command::Integral => integral(cli),
        Command::RelationCheck { tolerance } => relation(cli, *tolerance),
        Command::CriterionGap => gap(cli),
        Command::Estimate { alpha, depth, window } => estimate(cli, *alpha, *depth, *window),
        Command::Examples { which, lambda, eps } => examples(cli, *which, lambda.as_deref(), *eps),
        Command::Bounds { delta, sigma, tau, lambda, eps, a, b } => {
            let inputs = BoundInputs { sigma: *sigma, tau: *tau, delta: *delta, lambda: *lambda, eps: *eps, a: *a, b: *b };
            let mut t = Table::new(&[("bound", Plain), ("value", Plain)]);
            for (name, v) in evaluate_bounds(&inputs)? {
                t.push(vec![Cell::text(name), Cell::Text(fmt_f(v, cli.common.digits))]);
            }
            Ok(t)
        }
        Command::Scan { a, b, threshold } => scan(cli, *a, *b, *threshold),
    }
}

fn digits_bits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
}

fn sn(cli: &Cli) -> Result<Table> {
    let d = cli.common.digits;
    let opts = sondow_opts(cli);
    let mut t = Table::new(&[
        ("n", Plain),
        ("log_sn", Real),
        ("frac", Real),
        ("dist", Real),
        ("magnitude", Plain),
        ("sn_digits", Plain),
    ]);
    for n in cli.common.n.iter() {
        let rec = log_sn_reduced(n, d, &opts)?;
        let l = log_sn(n, digits_bits(d), &opts)?;
        t.push(vec![
            Cell::Int(n as i64),
            Cell::real(&l, d),
            Cell::real(&rec.frac, d),
            Cell::real(&rec.dist, d),
            Cell::Int(rec.magnitude),
            Cell::Text(fmt_f(sn_digit_estimate(n, opts.parse), 1)),
        ]);
    }
    Ok(t)
}

/// Decimals needed to show `digits` significant digits of a value below `16^-n`.
fn integral_decimals(n: u64, digits: usize) -> usize {
    (n as f64 * 16f64.log10()).floor() as usize + digits
}

fn integral(cli: &Cli) -> Result<Table> {
    let d = cli.common.digits;
    let mut t = Table::new(&[
        ("n", Plain),
        ("I_n", Real),
        ("reduced", Real),
        ("literal", Real),
        ("difference", Plain),
        ("levels_reduced", Plain),
        ("levels_literal", Plain),
    ]);
    for n in cli.common.n.iter() {
        let dec = integral_decimals(n, d);
        let target = irrbase::report::half_decimal_ulp(dec + 1);
        let r = integral_in_detail(n, &target)?;
        t.push(vec![
            Cell::Int(n as i64),
            Cell::real(&r.value, dec),
            Cell::real(&r.reduced.value, dec),
            Cell::real(&r.literal.value, dec),
            Cell::Text(r.difference().render()),
            Cell::Int(r.reduced.levels as i64),
            Cell::Int(r.literal.levels as i64),
        ]);
    }
    Ok(t)
}

fn relation(cli: &Cli, tolerance: f64) -> Result<Table> {
    let opts = sondow_opts(cli);
    let mut t = Table::new(&[("n", Plain), ("d2n_an", Plain), ("residual_bound", Plain), ("tolerance", Plain)]);
    for n in cli.common.n.iter() {
        let r = relation_check(n, tolerance, &opts)?;
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Text(r.nearest_int.to_string()),
            Cell::Text(r.residual.abs_upper().render()),
            Cell::Text(format!("{tolerance:e}")),
        ]);
    }
    Ok(t)
}

fn gap(cli: &Cli) -> Result<Table> {
    let d = cli.common.digits;
    let opts = sondow_opts(cli);
    let mut t = Table::new(&[
        ("n", Plain),
        ("gap", Real),
        ("certified_nonzero", Plain),
        ("log_dn_over_n", Real),
        ("log_binom_over_2n", Real),
        ("log_in_over_n", Real),
        ("log_d2n_in_over_n", Real),
        ("distance_to_limit", Plain),
    ]);
    for n in cli.common.n.iter() {
        let g = criterion_gap(n, &opts)?;
        let nonzero = Bound::from_abs(g.value()) > *g.abs_err();
        let m = asymptotic_monitor(n, &opts)?;
        let dist = (m.log_d2n_in_over_n.to_f64() + 2.0 * LOG_4_OVER_E).abs();
        t.push(vec![
            Cell::Int(n as i64),
            Cell::real(&g, d),
            Cell::text(nonzero.to_string()),
            Cell::real(&m.log_dn_over_n, d),
            Cell::real(&m.log_binom_over_2n, d),
            Cell::real(&m.log_in_over_n, d),
            Cell::real(&m.log_d2n_in_over_n, d),
            Cell::Text(fmt_f(dist, d)),
        ]);
    }
    Ok(t)
}

fn alpha_value(alpha: Alpha, bits: usize) -> Result<ErrReal> {
    let digits = (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    let c = |name| const_value(ConstRequest::new(name, digits));
    match alpha {
        Alpha::Sqrt2 => ErrReal::from_u64(2, bits).sqrt(),
        Alpha::Golden => Ok(ErrReal::from_u64(5, bits).sqrt()?.add(&ErrReal::from_u64(1, bits)).div_u64(2)),
        Alpha::E => c(ConstName::E),
        Alpha::Pi => c(ConstName::Pi),
        Alpha::Ln2 => c(ConstName::Ln2),
        Alpha::Gamma => c(ConstName::Gamma),
        Alpha::L => unreachable!("L is expanded from its quotients"),
    }
}

fn convergents(alpha: Alpha, depth: usize, ceiling: usize) -> Result<Vec<ConvergentRecord>> {
    if alpha == Alpha::L {
        return l_convergents(depth.saturating_sub(1));
    }
    let mut bits = 4 * depth + 64;
    loop {
        let x = alpha_value(alpha, bits)?;
        match cf_expand(&x, depth) {
            Ok(q) => return Ok(cf_convergents(&q, &x)),
            Err(Error::AmbiguousQuotient { .. }) if 2 * bits <= ceiling => bits *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn opt_f(x: Option<f64>, digits: usize) -> Cell {
    x.map(|v| Cell::Text(fmt_f(v, digits))).unwrap_or(Cell::Empty)
}

fn estimate(cli: &Cli, alpha: Alpha, depth: usize, window: usize) -> Result<Table> {
    let d = cli.common.digits;
    let recs = convergents(alpha, depth, cli.common.precision_ceiling)?;
    let mu = mu_estimate(&recs, window)?;
    let beta = beta_estimate(&recs, window)?;
    let mut t = Table::new(&[
        ("k", Plain),
        ("a_k", Plain),
        ("q_k_digits", Plain),
        ("mu_k", Plain),
        ("beta_k", Plain),
        ("mu_running_max", Plain),
        ("beta_running_max", Plain),
    ]);
    let running = |s: &irrbase::liouville::EstimateSeries, k: usize| {
        s.values.iter().position(|&(kk, _)| kk == k).map(|i| s.running_max[i])
    };
    let beta_digits = d.max(12);
    for r in &recs {
        let a = r.a_k.to_string();
        let a = if a.len() > 40 { format!("10^{}", a.len() - 1) } else { a };
        t.push(vec![
            Cell::Int(r.k as i64),
            Cell::Text(a),
            Cell::Int(r.q_k.to_string().len() as i64),
            opt_f(r.mu_k, d),
            opt_f(r.beta_k, beta_digits),
            opt_f(running(&mu, r.k), d),
            opt_f(running(&beta, r.k), beta_digits),
        ]);
    }
    t.push(vec![
        Cell::text(format!("tail_max({})", mu.window)),
        Cell::Empty,
        Cell::Empty,
        Cell::Text(fmt_f(mu.tail_max, d)),
        Cell::Text(fmt_f(beta.tail_max, beta_digits)),
        Cell::Empty,
        Cell::Empty,
    ]);
    Ok(t)
}

fn examples(cli: &Cli, which: Which, lambda: Option<&str>, eps: f64) -> Result<Table> {
    let d = cli.common.digits;
    let range = &cli.common.n;
    let mut t = Table::new(&[("example", Plain), ("n", Plain), ("quantity", Plain), ("value", Plain)]);
    let mut row = |ex: &str, n: Option<u64>, q: &str, v: String| {
        t.push(vec![Cell::text(ex), n.map(|n| Cell::Int(n as i64)).unwrap_or(Cell::Empty), Cell::text(q), Cell::Text(v)]);
    };
    if matches!(which, Which::Tower | Which::All) {
        if range.lo > TOWER_DEPTH_CAP as u64 {
            return Err(Error::DepthCap { depth: range.lo as usize, cap: TOWER_DEPTH_CAP });
        }
        for n in range.lo..=range.hi.min(TOWER_DEPTH_CAP as u64) {
            let nu = n as usize;
            row("T", Some(n), "T_n", tower_t(nu)?.to_string());
            let s = tower_partial(nu)?;
            let sv = match &s.exact {
                Some(r) => r.to_string(),
                None => format!("odd/2^({})", s.log2_denominator),
            };
            row("T", Some(n), "s_n", sv);
            let lam = match lambda {
                Some(l) => parse_rational(l)?,
                None => parse_rational(&(1u64 << n).to_string())?,
            };
            let verdict = match verify_super_liouville(nu, &lam) {
                Ok(b) => b.to_string(),
                Err(Error::InvalidInput(msg)) => format!("undecided: {msg}"),
                Err(e) => return Err(e),
            };
            row("T", Some(n), &format!("0 < T - s_n < {lam}^-T_n"), verdict);
            let b = beta_at_partial(nu)?;
            row("T", Some(n), "beta at s_n", format!("2^{} (log2 deficit < 4*2^-({}))", b.beta_log2, b.deficit_exp));
        }
    }
    if matches!(which, Which::L | Which::All) {
        if range.lo > L_DEPTH_CAP as u64 {
            return Err(Error::DepthCap { depth: range.lo as usize, cap: L_DEPTH_CAP });
        }
        let top = range.hi.min(L_DEPTH_CAP as u64) as usize;
        let recs = l_convergents(top)?;
        for r in &recs {
            let q = r.q_k.to_string();
            let q = if q.len() > 40 { format!("<{} digits>", q.len()) } else { q };
            let k = Some(r.k as u64);
            row("L", k, "q_k", q);
            if let Some(m) = r.mu_k {
                row("L", k, "mu_k", fmt_f(m, d));
            }
            if let Some(b) = r.beta_k {
                row("L", k, "beta_k", fmt_f(b, d.max(12)));
            }
        }
        for n in 2..=top {
            let c = verify_l_chain(n, eps)?;
            row(
                "L",
                Some(n as u64),
                "chain",
                format!(
                    "bracket={} alternating={} denominators={} base_one={}",
                    c.bracket, c.alternating, c.denominators, c.base_one
                ),
            );
        }
        let start = l_chain_start(eps)?.map(|n| n.to_string()).unwrap_or_else(|| "none below 20".into());
        row("L", None, &format!("first n with base link at eps={eps}"), start);
    }
    Ok(t)
}

fn hit_row(kind: &str, h: &ScanHit, d: usize) -> Vec<Cell> {
    vec![Cell::text(kind), Cell::Int(h.n as i64), Cell::real(&h.deviation, d), Cell::Empty]
}

fn fit_row(kind: &str, f: &Option<SubsequenceFit>, d: usize) -> Vec<Cell> {
    let note = match f {
        Some(f) => format!(
            "sigma={} tau={} sigma_below_tau={} points={}",
            fmt_f(f.sigma, d),
            fmt_f(f.tau, d),
            f.sigma_below_tau,
            f.points
        ),
        None => "fewer than 2 hits".into(),
    };
    vec![Cell::text(kind), Cell::Empty, Cell::Empty, Cell::Text(note)]
}

fn scan(cli: &Cli, a: i64, b: u64, threshold: f64) -> Result<Table> {
    let d = cli.common.digits;
    if cli.common.n.lo != 1 {
        return Err(Error::InvalidInput("scan always starts at n = 1; pass --n 1..N".into()));
    }
    let s = subsequence_scan(cli.common.n.hi, a, b, threshold, &sondow_opts(cli))?;
    let mut t = Table::new(&[("kind", Plain), ("n", Plain), ("deviation", Real), ("note", Plain)]);
    for h in &s.frac_hits {
        t.push(hit_row("frac", h, d));
    }
    for h in &s.dist_hits {
        t.push(hit_row("dist", h, d));
    }
    if let Some(h) = &s.frac_best {
        t.push(hit_row("frac_best", h, d));
    }
    if let Some(h) = &s.dist_best {
        t.push(hit_row("dist_best", h, d));
    }
    t.push(fit_row("frac_fit", &s.frac_fit, d));
    t.push(fit_row("dist_fit", &s.dist_fit, d));
    if !s.skipped.is_empty() {
        let list: Vec<String> = s.skipped.iter().map(|n| n.to_string()).collect();
        t.push(vec![Cell::text("skipped"), Cell::Empty, Cell::Empty, Cell::Text(list.join(" "))]);
    }
    Ok(t)
}
