//! Catalan sum rules with rigorous tail bounds, and the Glaisher-Kinkelin
//! constant recovered from `int_0^{1/2} ln Gamma(x + 1) dx`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::exact::{BigCount, CatalanStream};
use crate::gamma::log_gamma_reference;
use crate::quadrature::{integrate_finite, Integrand, QuadConfig, QuadResult};

/// Upper limit on terms a sum-rule evaluation may need.
pub const TERM_BUDGET: u64 = 10_000_000;
/// Terms summed for the partial result carried by a budget failure.
pub const PARTIAL_TERMS: usize = 10_000;
/// Smallest starting index accepted by the tail bounds.
pub const TAIL_START_MIN: usize = 4;

const LN_64: f64 = 6.0 * LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumRule {
    /// `sum C_{2n} C_n / ((2n + 1) 64^n)` against `8 sqrt(2) / (3 pi)`.
    OddWeight,
    /// `sum C_{2n} C_n / 64^n` against `(4/pi) ln(3 + 2 sqrt 2) - 8 sqrt(2) / (3 pi)`.
    Plain,
}

impl SumRule {
    pub fn target(&self) -> f64 {
        let odd = 8.0 * SQRT_2 / (3.0 * PI);
        match self {
            SumRule::OddWeight => odd,
            SumRule::Plain => 4.0 / PI * (3.0 + 2.0 * SQRT_2).ln() - odd,
        }
    }

    fn weight(&self, n: usize) -> f64 {
        match self {
            SumRule::OddWeight => 1.0 / (2 * n + 1) as f64,
            SumRule::Plain => 1.0,
        }
    }

    /// Bound on the sum of all terms with index `>= n_start`.
    pub fn tail_bound(&self, n_start: usize) -> f64 {
        let plain = series_tail_bound(n_start);
        match self {
            SumRule::OddWeight => plain / (2 * n_start + 1) as f64,
            SumRule::Plain => plain,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SumRule::OddWeight => "odd_weight",
            SumRule::Plain => "plain",
        }
    }
}

/// Bound on `sum_{n >= n_start} C_{2n} C_n / 64^n`.
///
/// `C_m <= 4^m / (sqrt(pi) m^{3/2})` for `m >= 1` makes every term at most
/// `n^{-3} / (pi 2^{3/2})`, and `sum_{n >= N} n^{-3} <= 1 / (2 (N - 1)^2)`.
pub fn series_tail_bound(n_start: usize) -> f64 {
    assert!(
        n_start >= TAIL_START_MIN,
        "tail bound needs n_start >= {TAIL_START_MIN}"
    );
    let nm1 = (n_start - 1) as f64;
    1.0 / (PI * 2.0 * SQRT_2) / (2.0 * nm1 * nm1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub rule: SumRule,
    pub partial_sum: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub certified_value: f64,
    pub target: f64,
    pub abs_err: f64,
}

impl SeriesResult {
    /// Whether `[partial_sum, partial_sum + tail_bound]` contains the target.
    pub fn interval_contains_target(&self) -> bool {
        self.partial_sum <= self.target && self.target <= self.partial_sum + self.tail_bound
    }
}

/// `ln(C_{2n} C_n / 64^n)` for `n = 0, 1, ...`, from exact integers.
#[derive(Debug, Clone, Default)]
pub struct LogTermStream {
    n: usize,
    single: CatalanStream,
    double: CatalanStream,
}

impl Iterator for LogTermStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let c_n = BigCount::new(self.single.next()?);
        let c_2n = BigCount::new(self.double.next()?);
        // skip C_{2n+1}
        self.double.next();
        let ln = c_2n.ln() + c_n.ln() - self.n as f64 * LN_64;
        self.n += 1;
        Some(ln)
    }
}

/// The individual terms of a sum rule, in ascending `n`.
pub fn sum_rule_terms(rule: SumRule) -> impl Iterator<Item = f64> {
    LogTermStream::default()
        .enumerate()
        .map(move |(n, ln)| ln.exp() * rule.weight(n))
}

/// Sum of the first `terms` terms, certified with the tail bound.
pub fn stewart_partial(rule: SumRule, terms: usize) -> SeriesResult {
    assert!(terms >= TAIL_START_MIN, "need at least {TAIL_START_MIN} terms");
    // Neumaier-compensated, strictly ascending order.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for term in sum_rule_terms(rule).take(terms) {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    let partial_sum = sum + comp;
    let tail_bound = rule.tail_bound(terms);
    let certified_value = partial_sum + 0.5 * tail_bound;
    let target = rule.target();
    SeriesResult {
        rule,
        partial_sum,
        terms_used: terms,
        tail_bound,
        certified_value,
        target,
        abs_err: (certified_value - target).abs(),
    }
}

/// Smallest term count whose tail bound is at most `tol`.
pub fn terms_needed(rule: SumRule, tol: f64) -> u64 {
    let fits = |n: u64| rule.tail_bound(n as usize) <= tol;
    let mut hi = TAIL_START_MIN as u64;
    while !fits(hi) {
        if hi > u64::MAX / 4 {
            return u64::MAX;
        }
        hi *= 2;
    }
    let mut lo = TAIL_START_MIN as u64;
    if fits(lo) {
        return lo;
    }
    // invariant: !fits(lo), fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Sums a rule until the tail bound drops to `tol`.
pub fn stewart_sum(rule: SumRule, tol: f64) -> Result<SeriesResult> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            requirement: "tol > 0",
        });
    }
    let needed = terms_needed(rule, tol);
    if needed > TERM_BUDGET {
        return Err(Error::TermBudget {
            tol,
            needed,
            budget: TERM_BUDGET,
            partial: Box::new(stewart_partial(rule, PARTIAL_TERMS)),
        });
    }
    Ok(stewart_partial(rule, needed as usize))
}

pub fn stewart_sum_odd_weight(tol: f64) -> Result<SeriesResult> {
    stewart_sum(SumRule::OddWeight, tol)
}

pub fn stewart_sum_plain(tol: f64) -> Result<SeriesResult> {
    stewart_sum(SumRule::Plain, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlaisherResult {
    pub integral_value: f64,
    pub integral_error_estimate: f64,
    pub ln_a: f64,
    pub oracle_ln_a: f64,
    pub abs_err: f64,
    pub converged: bool,
}

/// Inverts `int_0^{1/2} ln Gamma(x+1) dx = -1/2 - (7/24) ln 2 + (1/4) ln pi + (3/2) ln A`.
pub fn ln_a_from_integral(integral: f64) -> f64 {
    2.0 / 3.0 * (integral + 0.5 + 7.0 / 24.0 * LN_2 - 0.25 * PI.ln())
}

pub fn integral_from_ln_a(ln_a: f64) -> f64 {
    -0.5 - 7.0 / 24.0 * LN_2 + 0.25 * PI.ln() + 1.5 * ln_a
}

/// `int_0^{1/2} ln Gamma(x + 1) dx` over the Stirling reference.
pub fn log_gamma_integral(cfg: &QuadConfig) -> Result<QuadResult> {
    let f = Integrand::new(|x: f64| {
        log_gamma_reference(x + 1.0).expect("x + 1 > 0 on the integration range")
    });
    integrate_finite(&f, 0.0, 0.5, cfg)
}

/// Glaisher-Kinkelin constant from the log-Gamma integral, compared with
/// [`glaisher_oracle`] at `m = 1000`.
pub fn glaisher_from_integral(cfg: &QuadConfig) -> Result<GlaisherResult> {
    let q = log_gamma_integral(cfg)?;
    let ln_a = ln_a_from_integral(q.value);
    let oracle_ln_a = glaisher_oracle(1000);
    Ok(GlaisherResult {
        integral_value: q.value,
        integral_error_estimate: q.error_estimate,
        ln_a,
        oracle_ln_a,
        abs_err: (ln_a - oracle_ln_a).abs(),
        converged: q.converged,
    })
}

/// `a_{j+1} - a_j`, where
/// `a_m = sum_{k<=m} k ln k - (m^2/2 + m/2 + 1/12) ln m + m^2/4`.
///
/// the difference is `(2j + 1)/4 - P(j) ln(1 + 1/j)` with
/// `P(j) = j^2/2 + j/2 + 1/12`. In `u = 1/j` the `u^{-1}`, `u^0`, `u^1`, `u^2` terms of
/// `P ln(1+u)` cancel against `(2j+1)/4`, leaving `-sum_{m>=3} c_m u^m` with
/// `c_m = (-1)^{m+1} (1/(2(m+2)) - 1/(2(m+1)) + 1/(12m))`.
fn hyperfactorial_step(j: u64) -> f64 {
    let jf = j as f64;
    if j < 8 {
        let p = 0.5 * jf * jf + 0.5 * jf + 1.0 / 12.0;
        return (2.0 * jf + 1.0) / 4.0 - p * (1.0 / jf).ln_1p();
    }
    let u = 1.0 / jf;
    let mut acc = 0.0;
    for m in (3..=40u32).rev() {
        let mf = m as f64;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        let c = sign * (0.5 / (mf + 2.0) - 0.5 / (mf + 1.0) + 1.0 / (12.0 * mf));
        acc = (acc + c) * u;
    }
    // acc = sum_{m>=3} c_m u^{m-2}; scale the rest of the way.
    -acc * u * u
}

/// The raw sequence `a_m`, which decreases to `ln A` like `1/(720 m^2)`.
pub fn hyperfactorial_sequence(m: u64) -> f64 {
    assert!(m >= 1);
    let mut sum = 0.25; // a_1
    let mut comp = 0.0;
    for j in 1..m {
        let y = hyperfactorial_step(j) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `ln A` from `a_m`, `a_{2m}`, `a_{4m}`: two Richardson passes remove the
/// `m^{-2}` and `m^{-4}` terms of the error expansion.
pub fn glaisher_oracle(m: u64) -> f64 {
    assert!(m >= 10, "oracle needs m >= 10");
    let (a1, a2, a4) = (
        hyperfactorial_sequence(m),
        hyperfactorial_sequence(2 * m),
        hyperfactorial_sequence(4 * m),
    );
    let r1 = (4.0 * a2 - a1) / 3.0;
    let r2 = (4.0 * a4 - a2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::catalan_exact;
    use num_traits::ToPrimitive;

    // mpmath, 40 digits.
    const LN_GLAISHER: f64 = 0.248_754_477_033_784_262_547_252_993_576_1;

    #[test]
    fn log_terms_match_exact_values() {
        let terms: Vec<f64> = LogTermStream::default().take(40).collect();
        for (n, ln) in terms.iter().enumerate() {
            let c2n = catalan_exact(2 * n).as_biguint().to_f64().unwrap();
            let cn = catalan_exact(n).as_biguint().to_f64().unwrap();
            let direct = (c2n * cn).ln() - n as f64 * LN_64;
            assert!((ln - direct).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn first_terms() {
        let odd: Vec<f64> = sum_rule_terms(SumRule::OddWeight).take(2).collect();
        assert!((odd[0] - 1.0).abs() < 1e-15);
        assert!((odd[1] - 1.0 / 96.0).abs() < 1e-16);
        let plain: Vec<f64> = sum_rule_terms(SumRule::Plain).take(2).collect();
        assert!((plain[0] - 1.0).abs() < 1e-15);
        assert!((plain[1] - 1.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn targets() {
        assert!((SumRule::OddWeight.target() - 1.200_421_754_876_141_4).abs() < 1e-15);
        assert!((SumRule::Plain.target() - 1.043_977_654_480_579_1).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_is_decreasing_and_positive() {
        let mut prev = f64::INFINITY;
        for n in 4..2000 {
            let b = series_tail_bound(n);
            assert!(b > 0.0 && b < prev);
            prev = b;
        }
    }

    #[test]
    fn tail_bound_dominates_bruteforce_tail() {
        // Terms from n = 1000 up to 10^6 by a floating recurrence on the
        // term ratio, independent of the exact-integer stream.
        // t_{n+1} / t_n = (C_{2n+2}/C_{2n}) (C_{n+1}/C_n) / 64.
        let start = 1000usize;
        let exact: Vec<f64> = sum_rule_terms(SumRule::Plain).skip(start).take(1).collect();
        let mut t = exact[0];
        let mut tail = 0.0;
        for n in start..1_000_000 {
            tail += t;
            let nf = n as f64;
            let r2 = (2.0 * (4.0 * nf + 1.0) / (2.0 * nf + 2.0))
                * (2.0 * (4.0 * nf + 3.0) / (2.0 * nf + 3.0));
            let r1 = 2.0 * (2.0 * nf + 1.0) / (nf + 2.0);
            t *= r2 * r1 / 64.0;
        }
        assert!(tail <= series_tail_bound(start), "{tail} vs {}", series_tail_bound(start));
    }

    #[test]
    fn tail_bound_asymptotics() {
        let limit = 1.0 / (PI * 2f64.powf(2.5));
        for n in [10_000usize, 100_000] {
            let scaled = series_tail_bound(n) * (n * n) as f64;
            assert!((scaled - limit).abs() <= 0.1 * limit);
        }
    }

    #[test]
    fn plain_rule_converges() {
        let r = stewart_sum_plain(1e-6).unwrap();
        assert!(r.tail_bound <= 1e-6);
        assert!(r.abs_err <= 2e-6, "{r:?}");
        assert!(r.interval_contains_target());
        assert!((r.certified_value - r.partial_sum).abs() <= r.tail_bound);
    }

    #[test]
    fn plain_checkpoints_bracket_target() {
        for n in [10, 100, 1000] {
            assert!(stewart_partial(SumRule::Plain, n).interval_contains_target(), "n = {n}");
        }
    }

    #[test]
    fn terms_needed_is_minimal() {
        for rule in [SumRule::Plain, SumRule::OddWeight] {
            for tol in [1e-3, 1e-6, 1e-9] {
                let n = terms_needed(rule, tol) as usize;
                assert!(rule.tail_bound(n) <= tol);
                assert!(n == TAIL_START_MIN || rule.tail_bound(n - 1) > tol);
            }
        }
    }

    #[test]
    fn unreachable_tolerance_hits_budget() {
        match stewart_sum_odd_weight(1e-30) {
            Err(Error::TermBudget { partial, needed, .. }) => {
                assert!(needed > TERM_BUDGET);
                assert_eq!(partial.terms_used, PARTIAL_TERMS);
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
        assert!(stewart_sum_plain(0.0).is_err());
    }

    #[test]
    fn hyperfactorial_steps_match_direct_sequence() {
        let direct = |m: u64| -> f64 {
            let mf = m as f64;
            let s: f64 = (1..=m).map(|k| k as f64 * (k as f64).ln()).sum();
            s - (0.5 * mf * mf + 0.5 * mf + 1.0 / 12.0) * mf.ln() + 0.25 * mf * mf
        };
        for m in [1u64, 2, 7, 8, 9, 20, 60] {
            assert!((hyperfactorial_sequence(m) - direct(m)).abs() < 1e-11, "m = {m}");
        }
    }

    #[test]
    fn oracle_properties() {
        let m = 500;
        let (a1, a2) = (hyperfactorial_sequence(m), hyperfactorial_sequence(2 * m));
        let extrapolated = glaisher_oracle(m);
        // The raw sequence decreases toward the limit from above.
        assert!(extrapolated < a2 && a2 < a1);
        assert!((a1 - extrapolated - 1.0 / (720.0 * (m * m) as f64)).abs() < 1e-10);
        assert!((glaisher_oracle(500) - glaisher_oracle(1000)).abs() < 1e-10);
        assert!((glaisher_oracle(1000) - LN_GLAISHER).abs() < 1e-12);
    }

    #[test]
    fn glaisher_integral_examples() {
        assert!(log_gamma_reference(1.0).unwrap().abs() < 1e-14);
        let half = log_gamma_reference(1.5).unwrap();
        assert!((half - (PI.sqrt() / 2.0).ln()).abs() < 1e-14);
        let r = glaisher_from_integral(&QuadConfig::default()).unwrap();
        assert!(r.integral_value < 0.0);
        assert!(r.ln_a > 0.0);
        assert!(r.abs_err <= 1e-8, "{r:?}");
    }

    #[test]
    fn odd_weight_sum_converges_to_its_own_limit() {
        // mpmath, 40 digits: sum_{n<4000} C_{2n} C_n / ((2n+1) 64^n) + tail < 1e-11.
        let r = stewart_sum_odd_weight(1e-9).unwrap();
        assert!((r.certified_value - 1.012_419_737_803_564).abs() < 2e-9, "{r:?}");
    }

    #[test]
    fn odd_weight_closed_form_matches_numerator_weight() {
        // sum (2n+1) C_{2n} C_n / 64^n: terms <= (2n+1) n^{-3} / (pi 2^{3/2}), so
        // the tail from N is at most (2/(N-1) + 1/(2(N-1)^2)) / (pi 2^{3/2}).
        let n = 2000usize;
        let partial: f64 = sum_rule_terms(SumRule::Plain)
            .take(n)
            .enumerate()
            .map(|(k, t)| (2 * k + 1) as f64 * t)
            .sum();
        let nm1 = (n - 1) as f64;
        let tail = (2.0 / nm1 + 0.5 / (nm1 * nm1)) / (PI * 2.0 * SQRT_2);
        let target = SumRule::OddWeight.target();
        assert!(partial <= target && target <= partial + tail);
    }

    #[test]
    fn inversion_round_trips() {
        for v in [-0.05, -0.042_853_740_650_290_94, 0.0, 1.0] {
            assert!((integral_from_ln_a(ln_a_from_integral(v)) - v).abs() <= 1e-13);
        }
    }
}
