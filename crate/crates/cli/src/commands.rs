use crate::error::{usage, CliResult};
use crate::parse::Real;
use crate::table::{complex, num, opt, Table};
use crate::{
    CriticalArgs, DualityArgs, ExactArgs, FreeEnergyArgs, GeometryArgs, LdpArgs, OpArgs, ReportArgs, TwArgs,
};
use cginibre::exact::{
    duality_check, eval_poly, exact_logz, exact_op, log_eval_poly, lue_gap_probability, moment_table,
    reference_logz_exact, ExactContext,
};
use cginibre::freeenergy::{energy, expansion, first_omitted_tail_term};
use cginibre::geometry::{a_cri, c_cri, droplet_boundary, post_geometry, ModelParams, PreGeometry, Regime};
use cginibre::ldp::{kc_action, ldp_log_probability, phi, psi, LueParams};
use cginibre::opasymp::{p_asymp, GEvaluator};
use cginibre::painleve::{airy_ai, critical_a, critical_expansion, hastings_mcleod, left_tail_log, right_tail};
use cginibre::verify::CRITERIA;
use rayon::prelude::*;
use serde_json::{json, Value};

/// A finished table plus an identity-check failure message, if any.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None }
    }
}

fn check_bits(bits: u32) -> CliResult<()> {
    if bits < 128 {
        return usage(format!("--bits must be at least 128, got {bits}"));
    }
    Ok(())
}

fn charge(c: &Real, n: usize) -> CliResult<usize> {
    match c.times_integer(n) {
        Some(m) => Ok(m),
        None => usage(format!("cN must be a nonnegative integer for exact values (c={}, N={n})", c.value)),
    }
}

/// Rows computed in parallel, kept in input order.
fn par_rows<T: Sync, F>(items: &[T], f: F) -> CliResult<Vec<Vec<Value>>>
where
    F: Fn(&T) -> CliResult<Vec<Value>> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

pub fn geometry(args: &GeometryArgs) -> CliResult<Outcome> {
    let (a, c) = (args.a.value, args.c.value);
    let params = ModelParams::with_tol(a, c, args.tol)?;
    let mut t = Table::new("geometry", vec!["component", "theta", "z"]);
    t.meta("a", a);
    t.meta("c", c);
    t.meta("regime", params.regime.to_string());
    t.meta("a_cri", num(a_cri(c)));
    t.meta("c_cri", num(c_cri(a)));
    match params.regime {
        Regime::Pre => {
            let g = PreGeometry::new(a, c)?;
            t.meta("q", g.q);
            t.meta("R", g.r);
            t.meta("kappa", g.kappa);
            t.meta("beta", complex(g.beta));
            t.meta("b", g.b);
        }
        Regime::Post => {
            let g = post_geometry(a, c)?;
            t.meta("outer_radius", g.outer_radius);
            t.meta("inner_center", g.inner_center);
            t.meta("inner_radius", g.inner_radius);
            t.meta("beta", g.beta);
            t.meta("b", num(g.b));
        }
        Regime::AtCriticality => {}
    }
    if params.regime != Regime::AtCriticality {
        let b = droplet_boundary(&params, args.points)?;
        t.meta("chi", b.chi);
        for (k, comp) in b.components.iter().enumerate() {
            for (th, z) in comp.theta.iter().zip(&comp.points) {
                t.rows.push(vec![json!(k), json!(th), complex(*z)]);
            }
        }
    }
    Ok(t.into())
}

pub fn free_energy(args: &FreeEnergyArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    let c = args.c;
    let avals: Vec<Real> = match (&args.grid, &args.a) {
        (Some(g), _) => g.points().into_iter().map(|value| Real { value, ratio: None }).collect(),
        (None, Some(a)) => vec![*a],
        (None, None) => return usage("give --a or --grid"),
    };
    if args.n.iter().any(|&n| n == 0) {
        return usage("--n values must be positive");
    }
    let jobs: Vec<(u64, f64)> = avals.iter().flat_map(|a| args.n.iter().map(move |&n| (n, a.value))).collect();
    let mut t = Table::new(
        "free-energy",
        vec!["N", "a", "c", "regime", "energy", "expansion", "tail_bound", "exact_logZ", "residual"],
    );
    t.meta("order", args.order);
    t.meta("bits", args.bits);
    t.rows = par_rows(&jobs, |&(n, a)| {
        let p = ModelParams::new(a, c.value)?;
        if p.regime == Regime::AtCriticality {
            return usage(format!("a={a} is critical for c={}; use the critical subcommand", c.value));
        }
        let e = expansion(n, a, c.value, p.regime, args.order)?;
        let bound = if p.regime == Regime::Post { Some(first_omitted_tail_term(n, args.order)) } else { None };
        let exact = if args.exact {
            let m = charge(&c, n as usize)?;
            Some(exact_logz(&ExactContext::new(n as usize, m, a, args.bits)?)?.to_f64())
        } else {
            None
        };
        Ok(vec![
            json!(n),
            json!(a),
            json!(c.value),
            json!(p.regime.to_string()),
            num(energy(a, c.value, p.regime)?),
            num(e.value),
            opt(bound),
            opt(exact),
            opt(exact.map(|x| x - e.value)),
        ])
    })?;
    Ok(t.into())
}

pub fn exact(args: &ExactArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    let m = match (args.m, &args.c) {
        (Some(m), _) => m,
        (None, Some(c)) => charge(c, args.n)?,
        (None, None) => return usage("give --m or --c"),
    };
    let ctx = ExactContext::new(args.n, m, args.a.value, args.bits)?;
    let logz = exact_logz(&ctx)?;
    let op = exact_op(&ctx)?;
    let table = moment_table(&ctx)?;
    let mut t = Table::new("exact", vec!["k", "coefficient", "coefficient_decimal"]);
    t.meta("N", args.n);
    t.meta("m", m);
    t.meta("a", args.a.value);
    t.meta("bits", args.bits);
    t.meta("logZ", num(logz.to_f64()));
    t.meta("logZ_decimal", logz.to_string());
    t.meta("reference_logZ", num(reference_logz_exact(args.n, m, args.bits).to_f64()));
    t.meta("A11", num(op[args.n - 1].to_f64()));
    t.meta("hankel_sign", table.hankel_sign);
    for (k, ck) in op.iter().enumerate() {
        t.rows.push(vec![json!(k), num(ck.to_f64()), json!(ck.to_string())]);
    }
    Ok(t.into())
}

pub fn duality(args: &DualityArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    if !(args.tol > 0.0) {
        return usage("--tol must be positive");
    }
    let mut t = Table::new("duality-check", vec!["N", "m", "x", "lhs", "rhs", "residual", "pass"]);
    t.meta("bits", args.bits);
    t.meta("tol", args.tol);
    t.rows = par_rows(&args.x, |&x| {
        let d = duality_check(args.n, args.m, x, args.bits)?;
        let r = d.residual.to_f64();
        Ok(vec![
            json!(args.n),
            json!(args.m),
            json!(x),
            json!(d.lhs.to_f64()),
            json!(d.rhs.to_f64()),
            json!(r),
            json!(r < args.tol),
        ])
    })?;
    let bad: Vec<f64> = t.rows.iter().filter(|r| r[6] == json!(false)).map(|r| r[2].as_f64().unwrap()).collect();
    let failure = (!bad.is_empty()).then(|| format!("residual above {:e} at x = {bad:?}", args.tol));
    Ok(Outcome { table: t, failure })
}

pub fn tw(args: &TwArgs) -> CliResult<Outcome> {
    let ts = match args.t {
        Some(t) => vec![t],
        None => args.grid.points(),
    };
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // past s = 16 the Airy tail is exact to double precision, while backward
    // integration from further out amplifies rounding like exp(4/3 s^1.5)
    let sol = hastings_mcleod(lo.min(0.0), hi.clamp(8.0, 16.0), args.tol)?;
    let mut t = Table::new("tw", vec!["t", "F", "log_F", "hm_q", "left_tail_log", "right_tail"]);
    t.meta("ode_tol", args.tol);
    t.meta("s_min", sol.s_min());
    t.meta("s_max", sol.s_max());
    t.meta("steps", sol.steps);
    t.rows = par_rows(&ts, |&x| {
        let lf = sol.log_cdf(x)?;
        let q = if x < sol.s_max() { sol.hm_q(x)? } else { airy_ai(x) };
        Ok(vec![
            json!(x),
            num(lf.exp()),
            num(lf),
            num(q),
            opt((x < 0.0).then(|| left_tail_log(x, true))),
            opt((x > 0.0).then(|| right_tail(x))),
        ])
    })?;
    Ok(t.into())
}

pub fn critical(args: &CriticalArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    let c = args.c;
    let ss = match (&args.grid, args.s) {
        (Some(g), _) => g.points(),
        (None, Some(s)) => vec![s],
        (None, None) => return usage("give --s or --grid"),
    };
    let scale = c.value.powf(-2.0 / 3.0);
    let lo = ss.iter().cloned().fold(f64::INFINITY, f64::min) * scale;
    let hi = ss.iter().cloned().fold(f64::NEG_INFINITY, f64::max) * scale;
    // past s = 16 the Airy tail is exact to double precision, while backward
    // integration from further out amplifies rounding like exp(4/3 s^1.5)
    let sol = hastings_mcleod(lo.min(0.0), hi.clamp(8.0, 16.0), args.tol)?;
    let jobs: Vec<(u64, f64)> = args.n.iter().flat_map(|&n| ss.iter().map(move |&s| (n, s))).collect();
    let mut t = Table::new("critical", vec!["N", "c", "s", "a", "smooth", "log_tw", "value", "exact_logZ", "residual"]);
    t.meta("ode_tol", args.tol);
    t.meta("a_cri", a_cri(c.value));
    t.rows = par_rows(&jobs, |&(n, s)| {
        let e = critical_expansion(&sol, n, c.value, s)?;
        let exact = if args.exact {
            let m = charge(&c, n as usize)?;
            let a = critical_a(s, c.value, n)?;
            Some(exact_logz(&ExactContext::new(n as usize, m, a, args.bits)?)?.to_f64())
        } else {
            None
        };
        Ok(vec![
            json!(n),
            json!(c.value),
            json!(s),
            json!(e.a),
            num(e.smooth),
            num(e.log_tw),
            num(e.value),
            opt(exact),
            opt(exact.map(|x| x - e.value)),
        ])
    })?;
    Ok(t.into())
}

pub fn ldp(args: &LdpArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    let al = args.alpha;
    let lp = LueParams::new(al.value)?;
    let ts = match (args.t, &args.grid) {
        (Some(t), _) => vec![t],
        (None, Some(g)) => g.points(),
        (None, None) => {
            crate::parse::Grid { lo: lp.lambda_minus + 0.05, hi: lp.lambda_minus + 5.0, steps: 50 }.points()
        }
    };
    let exact_n = match (args.exact, args.n) {
        (true, Some(n)) => match al.times_integer(n as usize) {
            Some(an) => Some((n as usize, an)),
            None => return usage(format!("alpha n must be an integer for --exact (alpha={}, n={n})", al.value)),
        },
        (true, None) => return usage("--exact needs --n"),
        _ => None,
    };
    let s0 = kc_action(lp.lambda_minus, al.value)?;
    let mut t = Table::new(
        "ldp",
        vec!["t", "phi", "psi", "kc_difference", "kc_residual", "log_p_asymp", "log_p_exact"],
    );
    t.meta("alpha", al.value);
    t.meta("lambda_minus", lp.lambda_minus);
    t.meta("lambda_plus", lp.lambda_plus);
    t.meta("tol", args.tol);
    t.rows = par_rows(&ts, |&x| {
        let ph = phi(x, al.value)?;
        let kc = kc_action(x, al.value)? - s0;
        let asym = match args.n {
            Some(n) => Some(ldp_log_probability(n, al.value, x, true)?.value),
            None => None,
        };
        let exact = match exact_n {
            Some((n, an)) => Some(lue_gap_probability(n, an, x, n, args.bits)?.ln().to_f64()),
            None => None,
        };
        Ok(vec![json!(x), num(ph), num(psi(x, al.value)?), num(kc), num((ph - kc).abs()), opt(asym), opt(exact)])
    })?;
    let mut failure = None;
    if args.check_kc {
        let bad: Vec<f64> = t
            .rows
            .iter()
            .filter(|r| !(r[4].as_f64().unwrap_or(f64::INFINITY) < args.tol))
            .map(|r| r[0].as_f64().unwrap())
            .collect();
        if !bad.is_empty() {
            failure = Some(format!("Phi differs from the action difference by more than {:e} at t = {bad:?}", args.tol));
        }
    }
    Ok(Outcome { table: t, failure })
}

pub fn op_compare(args: &OpArgs) -> CliResult<Outcome> {
    check_bits(args.bits)?;
    let (a, c, z) = (args.a.value, args.c.value, args.x);
    let ge = GEvaluator::new(ModelParams::new(a, c)?)?;
    if !ge.is_exterior(z) {
        return usage(format!("z={z} is inside the exterior radius {}", ge.exterior_radius()));
    }
    let mut t = Table::new("op-compare", vec!["N", "z", "exact", "asymptotic", "log_exact", "log_asymptotic", "rel_error"]);
    t.meta("a", a);
    t.meta("c", c);
    t.meta("regime", ge.params.regime.to_string());
    t.meta("bits", args.bits);
    t.rows = par_rows(&args.n, |&n| {
        let m = charge(&args.c, n)?;
        let co = exact_op(&ExactContext::new(n, m, a, args.bits)?)?;
        let le = log_eval_poly(&co, z, args.bits);
        let pa = p_asymp(&ge, z, n as u64)?;
        let rel = ((pa.log_value - le).exp() - 1.0).norm();
        Ok(vec![
            json!(n),
            complex(z),
            complex(eval_poly(&co, z, args.bits)),
            complex(pa.value),
            complex(le),
            complex(pa.log_value),
            num(rel),
        ])
    })?;
    Ok(t.into())
}

pub fn report(args: &ReportArgs) -> CliResult<Outcome> {
    for s in &args.skip {
        if !CRITERIA.iter().any(|c| c.skipped_by(std::slice::from_ref(s))) {
            return usage(format!("--skip: unknown criterion or group '{s}'"));
        }
    }
    let selected: Vec<_> = CRITERIA.iter().filter(|c| !c.skipped_by(&args.skip)).collect();
    let reports: Vec<_> = selected.par_iter().map(|c| c.run()).collect();
    let mut t = Table::new("report", vec!["id", "name", "group", "pass", "metrics", "error", "elapsed_s"]);
    t.meta("skipped", args.skip.clone());
    t.meta("all_pass", reports.iter().all(|r| r.pass));
    for r in &reports {
        let metrics: Vec<Value> = r
            .metrics
            .iter()
            .map(|m| json!({ "label": m.label, "value": num(m.value), "lo": opt(m.lo), "hi": opt(m.hi), "ok": m.ok() }))
            .collect();
        t.rows.push(vec![
            json!(r.id),
            json!(r.name),
            json!(r.group),
            json!(r.pass),
            json!(metrics),
            json!(r.error),
            if args.timings { json!(r.elapsed_s) } else { Value::Null },
        ]);
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    let failure = (!failed.is_empty()).then(|| format!("criteria {failed:?} failed"));
    Ok(Outcome { table: t, failure })
}
