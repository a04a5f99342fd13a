//! One line per acceptance criterion; exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use catalan_core::exact::{
    catalan_exact, catalan_hypergeometric, catalan_segner, count_balanced_parentheses,
    count_polygon_triangulations, ln_exact,
};
use catalan_core::gamma::{
    binet_catalan_kernel, binet_theta, log_gamma_difference_kernel, log_gamma_malmsten,
    log_gamma_reference, malmsten_catalan_kernel, stirling_main_terms,
};
use catalan_core::quadrature::{integrate_finite, integrate_half_line};
use catalan_core::representations::{catalan_malmsten, compare_representations};
use catalan_core::series::{glaisher_from_integral, stewart_partial, stewart_sum};
use catalan_core::{Integrand, QuadConfig, SumRule, Transform};

const EXACT_BUDGET: Duration = Duration::from_secs(1);
const LN_C_TOL: f64 = 1e-9;
const LN_C_BUDGET: Duration = Duration::from_secs(30);
const AGREEMENT_TOL: f64 = 1e-8;
const AGREEMENT_BUDGET: Duration = Duration::from_secs(120);
const MALMSTEN_TOL: f64 = 1e-10;
const BINET_TOL: f64 = 1e-10;
const SUM_RULE_TOL: f64 = 2e-6;
const SUM_RULE_BUDGET: Duration = Duration::from_secs(30);
const SUM_RULE_CHECKPOINTS: [usize; 3] = [10, 100, 1000];
const GLAISHER_TOL: f64 = 1e-8;
const GLAISHER_BUDGET: Duration = Duration::from_secs(10);
const HONESTY_FACTOR: f64 = 10.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.pass &= elapsed < budget;
    o.detail = format!("{}; {:.2?} (budget {:?})", o.detail, elapsed, budget);
    o
}

fn exact_anchors() -> Outcome {
    timed(EXACT_BUDGET, || {
        let cli = |n: &str| {
            let out = Command::new(env!("CARGO_BIN_EXE_catalan")).args(["exact", n]).output().unwrap();
            let text = String::from_utf8(out.stdout).unwrap();
            out.status.success().then(|| text.lines().next().unwrap_or("").to_string())
        };
        let c3 = cli("3");
        let c5 = cli("5");
        let parens = count_balanced_parentheses(3).unwrap().to_u64();
        let heptagon = count_polygon_triangulations(7).unwrap().to_u64();
        let pass = c3.as_deref() == Some("5")
            && c5.as_deref() == Some("42")
            && parens == Some(5)
            && heptagon == Some(42);
        outcome(pass, format!("exact 3 = {c3:?}, exact 5 = {c5:?}, parentheses(3) = {parens:?}, triangulations(7) = {heptagon:?}"))
    })
}

fn malmsten_ln_c() -> Outcome {
    timed(LN_C_BUDGET, || {
        let cfg = QuadConfig::default();
        let mut worst = 0.0f64;
        let mut pass = true;
        for n in 0..=50 {
            match catalan_malmsten(n, &cfg) {
                Ok(r) => {
                    let err = (r.ln_value - ln_exact(n)).abs();
                    pass &= err <= LN_C_TOL;
                    worst = worst.max(err);
                }
                Err(_) => pass = false,
            }
        }
        outcome(pass, format!("max |ln C_n - exact| over n = 0..=50: {worst:.3e} (tol {LN_C_TOL:e})"))
    })
}

fn agreement() -> Outcome {
    timed(AGREEMENT_BUDGET, || {
        let rows = compare_representations(50, &QuadConfig::default());
        let converged = rows.iter().filter(|r| r.converged).count();
        let worst = rows.iter().filter(|r| r.converged).map(|r| r.abs_err_ln).fold(0.0, f64::max);
        let pass = converged == rows.len() && rows.len() == 51 * 5 && worst <= AGREEMENT_TOL;
        outcome(pass, format!("{converged}/{} rows converged, max abs_err_ln {worst:.3e} (tol {AGREEMENT_TOL:e})", rows.len()))
    })
}

fn malmsten_self_check() -> Outcome {
    let cfg = QuadConfig::default();
    let mut worst = 0.0f64;
    let mut pass = true;
    for x in [0.0, 0.25, 0.5, 1.0, 2.5, 7.0, 20.0] {
        match (log_gamma_malmsten(x, &cfg), log_gamma_reference(x + 1.0)) {
            (Ok(q), Ok(r)) => {
                let err = (q.value - r).abs();
                pass &= err <= MALMSTEN_TOL;
                worst = worst.max(err);
            }
            _ => pass = false,
        }
    }
    outcome(pass, format!("max |ln G(x+1) integral - reference| {worst:.3e} (tol {MALMSTEN_TOL:e})"))
}

fn binet_closure() -> Outcome {
    let cfg = QuadConfig::default();
    let mut worst = 0.0f64;
    let mut pass = true;
    for x in [1.0, 2.0, 5.0, 10.0] {
        match (binet_theta(x, &cfg), log_gamma_reference(x + 1.0)) {
            (Ok(theta), Ok(r)) => {
                let err = (stirling_main_terms(x) + theta.value - r).abs();
                pass &= err <= BINET_TOL && theta.value > 0.0 && theta.value < 1.0 / (12.0 * x);
                worst = worst.max(err);
            }
            _ => pass = false,
        }
    }
    outcome(pass, format!("max reconstruction error {worst:.3e} (tol {BINET_TOL:e}), theta bounds checked"))
}

fn sum_rule(rule: SumRule) -> Outcome {
    timed(SUM_RULE_BUDGET, || {
        let (certified, err) = match stewart_sum(rule, SUM_RULE_TOL / 2.0) {
            Ok(r) => (r.certified_value, r.abs_err),
            Err(e) => return outcome(false, format!("{e}")),
        };
        let brackets: Vec<bool> = SUM_RULE_CHECKPOINTS
            .iter()
            .map(|&k| stewart_partial(rule, k).interval_contains_target())
            .collect();
        let pass = err <= SUM_RULE_TOL && brackets.iter().all(|&b| b);
        outcome(
            pass,
            format!(
                "{}: certified {certified:.12}, target {:.12}, abs_err {err:.3e} (tol {SUM_RULE_TOL:e}), brackets at {SUM_RULE_CHECKPOINTS:?}: {brackets:?}",
                rule.as_str(),
                rule.target()
            ),
        )
    })
}

fn sum_rules() -> Outcome {
    let parts = [sum_rule(SumRule::OddWeight), sum_rule(SumRule::Plain)];
    outcome(
        parts.iter().all(|o| o.pass),
        parts.iter().map(|o| format!("[{}] {}", if o.pass { "ok" } else { "FAIL" }, o.detail)).collect::<Vec<_>>().join(" "),
    )
}

fn glaisher() -> Outcome {
    timed(GLAISHER_BUDGET, || match glaisher_from_integral(&QuadConfig::default()) {
        Ok(g) => outcome(
            g.converged && g.abs_err <= GLAISHER_TOL,
            format!("ln A = {:.15}, oracle {:.15}, abs_err {:.3e} (tol {GLAISHER_TOL:e})", g.ln_a, g.oracle_ln_a, g.abs_err),
        ),
        Err(e) => outcome(false, format!("{e}")),
    })
}

/// Integrand, finite range (or half-line), transform, exact value.
type Case = (Integrand, Option<(f64, f64)>, Transform, f64);

fn honesty_corpus() -> Vec<Case> {
    let finite = |f: Integrand, a, b, exact| (f, Some((a, b)), Transform::None, exact);
    let half = |f: Integrand, tr, exact| (f, None, tr, exact);
    let mut cases = vec![
        finite(Integrand::new(|t: f64| ((1.0 - t) * (1.0 + t)).sqrt()), -1.0, 1.0, PI / 2.0),
        finite(Integrand::new(|t: f64| t * t * ((1.0 - t) * (1.0 + t)).sqrt()), -1.0, 1.0, PI / 8.0),
        finite(Integrand::new(|t: f64| t.ln_1p()), 0.0, 1.0, 2.0 * 2f64.ln() - 1.0),
        finite(Integrand::new(f64::sin), 0.0, PI, 2.0),
        finite(Integrand::new(|t: f64| 1.0 / t.sqrt()), 0.0, 1.0, 2.0),
    ];
    for tr in [Transform::ExpDecayMap, Transform::DoubleExponential, Transform::AlgebraicMap] {
        cases.push(half(Integrand::new(|t: f64| (-t).exp()).with_tail_bound(1.0, 1.0), tr, 1.0));
        cases.push(half(Integrand::new(|t: f64| (-t * t).exp()).with_tail_bound(1.0, 1.0), tr, PI.sqrt() / 2.0));
    }
    cases.push(half(Integrand::new(|t: f64| t.sqrt() / (4.0 * t + 1.0).powi(2)), Transform::AlgebraicMap, PI / 16.0));
    cases
}

fn property_suites() -> Outcome {
    let triple = (0..=200).all(|n| {
        let c = catalan_exact(n);
        catalan_segner(n) == c && catalan_hypergeometric(n) == c
    });

    let cfg = QuadConfig::default();
    let honest = honesty_corpus().into_iter().all(|(f, range, tr, exact)| {
        let r = match range {
            Some((a, b)) => integrate_finite(&f, a, b, &cfg),
            None => integrate_half_line(&f, &cfg.with_transform(tr)),
        };
        r.map(|r| (r.value - exact).abs() <= HONESTY_FACTOR * r.error_estimate).unwrap_or(false)
    });

    let ns = [0usize, 1, 2, 3, 5, 10, 20, 50, 100];
    let origins = ns.iter().all(|&n| {
        [malmsten_catalan_kernel(n), binet_catalan_kernel(n), log_gamma_difference_kernel(n)]
            .iter()
            .all(|k| k.integrand.origin_is_consistent())
    });

    let ts = [1e-7, 1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0];
    let pointwise = ns.iter().all(|&n| {
        let (a, b) = (malmsten_catalan_kernel(n), log_gamma_difference_kernel(n));
        ts.iter().all(|&t| {
            // Both forms divide a difference by t, so rounding grows like eps/t.
            let (va, vb) = (a.integrand.eval(t), b.integrand.eval(t));
            (va - vb).abs() <= 1e-13 * (1.0 + va.abs()) * t.recip().max(1.0)
        })
    });

    outcome(
        triple && honest && origins && pointwise,
        format!("triple equality {triple}, estimate honesty {honest}, origin limits {origins}, kernel pointwise {pointwise}"),
    )
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("anchor values", exact_anchors),
        ("Malmsten representation of ln C_n", malmsten_ln_c),
        ("cross-representation agreement", agreement),
        ("Malmsten log-Gamma self-check", malmsten_self_check),
        ("Binet closure", binet_closure),
        ("sum rules", sum_rules),
        ("Glaisher-Kinkelin constant", glaisher),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
