//! Acceptance run: one line per criterion. Exits non-zero on a failing
//! criterion only when `HARDYLAB_ACCEPTANCE_STRICT=1`.

use hardylab::constants::{geometric_hardy_constant, geometric_rellich_constant, hardy_constant, rellich_product_constant};
use hardylab::suites::{run, Case, Report, Suite, SuiteConfig};
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn cases<'a>(r: &'a Report, prefix: &'a str) -> impl Iterator<Item = &'a Case> + 'a {
    r.cases.iter().filter(move |c| c.key.starts_with(prefix))
}

/// Pass count and largest metric over the cases under `prefix`.
fn tally(r: &Report, prefix: &str) -> (usize, usize, f64) {
    let (mut total, mut passed, mut worst) = (0, 0, f64::NEG_INFINITY);
    for c in cases(r, prefix) {
        total += 1;
        passed += c.verdict.pass as usize;
        worst = worst.max(c.verdict.metric.unwrap_or(f64::NAN));
    }
    (total, passed, worst)
}

fn all_pass(r: &Report, prefix: &str) -> bool {
    let (t, p, _) = tally(r, prefix);
    t > 0 && t == p
}

fn metric(r: &Report, key: &str) -> f64 {
    r.cases.iter().find(|c| c.key == key).and_then(|c| c.verdict.metric).unwrap_or(f64::NAN)
}

fn catalogue() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut check = |got: f64, want: f64| worst = worst.max((got - want).abs() / want);
    check(hardy_constant(5, 2.0, 2.0).unwrap(), 2.25);
    check(geometric_hardy_constant(2.0, 2.0).unwrap(), 0.25);
    for n in 5..=10u32 {
        let nf = n as f64;
        check(rellich_product_constant(2, 2.0, 4.0, n), nf * (nf - 4.0) / 4.0);
    }
    check(geometric_rellich_constant(2, 2.0), 0.5625);
    Outcome { pass: worst <= 1e-12, detail: format!("max relative error {worst:.1e} (≤ 1e-12)") }
}

fn main() {
    let cfg = SuiteConfig::default();
    let mut lines: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let timed = |f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed())
    };

    let (o, d) = timed(&mut catalogue);
    lines.push((1, "constant catalogue", o, d));

    let t = Instant::now();
    let identity = run(Suite::Identity, &cfg);
    let identity_time = t.elapsed();
    let (o, d) = timed(&mut || {
        let (total, passed, worst) = tally(&identity, "identity/residual-");
        let ps: std::collections::BTreeSet<String> = cases(&identity, "identity/residual-").map(|c| c.params["p"].to_string()).collect();
        let ok = total == 50 && passed == total && identity_time < Duration::from_secs(60);
        Outcome { pass: ok, detail: format!("{passed}/{total} residuals < 1e-8, worst {worst:.1e}, p ∈ {{{}}}", ps.into_iter().collect::<Vec<_>>().join(", ")) }
    });
    lines.push((2, "remainder identity", o, d + identity_time));

    let t = Instant::now();
    let ineq = run(Suite::Inequalities, &cfg);
    let ineq_time = t.elapsed();
    let forms: Vec<&Case> = ineq.cases.iter().filter(|c| !c.key.contains("/constant-") && !c.key.contains("/divergence-")).collect();
    let passed = forms.iter().filter(|c| c.verdict.pass).count();
    let o = Outcome { pass: passed == forms.len() && !forms.is_empty(), detail: format!("{passed}/{} form × profile and chain cases with gap ≥ −1e-8", forms.len()) };
    lines.push((3, "inequalities hold", o, ineq_time));

    let t = Instant::now();
    let limits = run(Suite::Limits, &cfg);
    let limits_time = t.elapsed();
    let hardy = metric(&limits, "limits/sharpness-improved-hardy");
    let rellich = metric(&limits, "limits/sharpness-improved-rellich-rad");
    let o = Outcome {
        pass: all_pass(&limits, "limits/sharpness-") && limits_time < Duration::from_secs(30),
        detail: format!("last gap {hardy:.3e} (< 0.02) for Hardy, {rellich:.3e} (< 0.05) for Rellich"),
    };
    lines.push((4, "sharpness from above", o, limits_time));

    let (att_t, att_p, att_worst) = tally(&identity, "identity/attainment-");
    let (cross_t, cross_p, cross_worst) = tally(&identity, "identity/cross-");
    let o = Outcome {
        pass: att_t == 5 && att_p == 5 && cross_t > 0 && cross_p == cross_t,
        detail: format!("{att_p}/{att_t} minimizers within {att_worst:.1e} (< 1e-6), cross identity {cross_worst:.1e} (< 1e-10)"),
    };
    lines.push((5, "attainment", o, identity_time));

    let t = Instant::now();
    let transplant = run(Suite::Transplant, &cfg);
    let scaling = run(Suite::Scaling, &cfg);
    let tr_time = t.elapsed();
    let (tt, tp, tw) = tally(&transplant, "transplant/");
    let (st, sp, sw) = tally(&scaling, "scaling/critical-");
    let (ot, op, _) = tally(&scaling, "scaling/off-critical-");
    let min_off = cases(&scaling, "scaling/off-critical-").filter_map(|c| c.verdict.metric).fold(f64::INFINITY, f64::min);
    let o = Outcome {
        pass: tt == tp && st == sp && ot == op && tt > 0 && st > 0 && ot > 0,
        detail: format!("charts {tp}/{tt} (worst {tw:.1e}), scaling {sp}/{st} (worst {sw:.1e}), off-critical {op}/{ot} (least deviation {min_off:.2e} > 1e-3)"),
    };
    lines.push((6, "transplantation", o, tr_time));

    let t = Instant::now();
    let var = run(Suite::Variational, &cfg);
    let var_time = t.elapsed();
    let n3 = metric(&var, "variational/improved-hardy-n3");
    let n4 = metric(&var, "variational/improved-hardy-n4");
    let conc = metric(&var, "variational/refinement");
    let el = var.cases.iter().find(|c| c.key.starts_with("variational/el-") && !c.key.ends_with("gap-at-1e-3"));
    let extrapolated = el.and_then(|c| c.verdict.metric).unwrap_or(f64::NAN);
    let raw = cases(&var, "variational/el-").find(|c| c.key.ends_with("gap-at-1e-3")).and_then(|c| c.verdict.metric).unwrap_or(f64::NAN);
    let o = Outcome {
        pass: var.passed() && var_time < Duration::from_secs(120),
        detail: format!(
            "{}/{} cases; infimum gap N=3 {n3:.2e}, N=4 {n4:.2e}; concentration {conc:.3}; λ₁ gap at ε=1e-3 {raw:.4} (bound 0.02), extrapolated {extrapolated:.2e}",
            var.summary.passed, var.summary.total
        ),
    };
    lines.push((7, "variational sharpness", o, var_time));

    let t = Instant::now();
    let rec = run(Suite::Recursion, &cfg);
    let rec_time = t.elapsed();
    let (rt, rp, rw) = tally(&rec, "recursion/t");
    let logged = rec.summary.notes.iter().any(|n| n.contains("γ-corrected"));
    let o = Outcome { pass: rt == 120 && rp == rt && logged && all_pass(&rec, "recursion/power-"), detail: format!("{rp}/{rt} expansions within {rw:.1e} (< 1e-6), printed-branch deviation logged: {logged}") };
    lines.push((8, "derivative recursion", o, rec_time));

    let (dt, dp, _) = tally(&ineq, "inequalities/divergence-");
    let o = Outcome { pass: dt > 0 && dp == dt, detail: format!("{dp}/{dt} integrals classified divergent") };
    lines.push((9, "divergence", o, ineq_time));

    let ih = cases(&limits, "limits/gamma-improved-hardy").next().and_then(|c| c.verdict.metric).unwrap_or(f64::NAN);
    let ir = cases(&limits, "limits/gamma-improved-rellich-p2").next().and_then(|c| c.verdict.metric).unwrap_or(f64::NAN);
    let o = Outcome { pass: all_pass(&limits, "limits/gamma-"), detail: format!("difference at γ = 1e-3: Hardy {ih:.2e}, Rellich {ir:.2e} (< 1e-2), decreasing") };
    lines.push((10, "γ → 0 limits", o, limits_time));

    let mut failed = 0;
    for (id, title, o, d) in &lines {
        failed += !o.pass as usize;
        println!("criterion {id:>2} {} {title}: {} [{:.2} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, d.as_secs_f64());
    }
    for c in var.failures() {
        println!("  failing: {} metric {:?} bound {:?}: {}", c.key, c.verdict.metric, c.verdict.bound, c.verdict.note.as_deref().unwrap_or(""));
    }
    println!("acceptance: {}/{} criteria pass", lines.len() - failed, lines.len());
    if failed > 0 && std::env::var("HARDYLAB_ACCEPTANCE_STRICT").as_deref() == Ok("1") {
        std::process::exit(1);
    }
}
