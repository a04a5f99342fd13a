//! Log-Gamma integrands and a Stirling-series reference evaluator.
//!
//! The integrands here all have a removable singularity at `t = 0`. Each
//! constructor hard-codes the limit and first Taylor coefficient derived
//! below; tests recover the same numbers by numeric extrapolation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, Integrand, QuadConfig, QuadResult, TailBound};

/// `1 / (1 - e^{-1})`: bound on `(1 - e^{-a t}) / (1 - e^{-t})`-type ratios for
/// `t >= 1`, `0 <= a <= 1`, and on `1/(1 - e^{-t})` itself.
const INV_ONE_MINUS_EXP_NEG1: f64 = 1.581_976_706_869_326_4;

/// Below this shift threshold the argument is moved up before the
/// asymptotic series is applied.
const STIRLING_SHIFT: f64 = 10.0;

// B_{2k} / (2k (2k - 1)) for k = 1..=6. The first omitted term,
// 1 / (156 x^13), is below 6.5e-16 for x >= 10.
const STIRLING_COEFFS: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
];

/// `ln Gamma(x)` for `x > 0`: upward shift to `x >= 10`, then the Stirling
/// series. Independent of every quadrature route in the crate.
pub fn log_gamma_reference(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            requirement: "x > 0",
        });
    }
    let mut z = x;
    let mut shift = 1.0;
    while z < STIRLING_SHIFT {
        shift *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        series += c * power;
        power *= inv2;
    }
    let main = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    Ok(main + series - shift.ln())
}

/// Leading Stirling terms of `ln Gamma(x + 1)`: `x ln x - x + ln(2 pi x) / 2`.
pub fn stirling_main_terms(x: f64) -> f64 {
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln()
}

/// `1/(e^t - 1) - 1/t + 1/2`. Odd Bernoulli series below 0.25, where the
/// direct form cancels; the first omitted term there is below 1e-19.
pub fn binet_bracket(t: f64) -> f64 {
    if t.abs() < 0.25 {
        // B_{2k} / (2k)!
        const C: [f64; 6] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30_240.0,
            -1.0 / 1_209_600.0,
            1.0 / 47_900_160.0,
            -691.0 / 1_307_674_368_000.0,
        ];
        let t2 = t * t;
        let mut acc = 0.0;
        for c in C.iter().rev() {
            acc = acc * t2 + c;
        }
        acc * t
    } else {
        1.0 / t.exp_m1() - 1.0 / t + 0.5
    }
}

/// An integrand together with its parameter and tail constants.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub name: &'static str,
    pub parameter: f64,
    pub integrand: Integrand,
    pub tail: TailBound,
}

impl KernelSpec {
    fn new(name: &'static str, parameter: f64, integrand: Integrand) -> Self {
        let tail = integrand
            .tail_bound()
            .expect("every kernel carries a tail bound");
        KernelSpec {
            name,
            parameter,
            integrand,
            tail,
        }
    }

    /// `|f(t)| <= K e^{-ct}` at the given sample points.
    pub fn tail_holds_at(&self, points: &[f64]) -> bool {
        points.iter().all(|&t| {
            let v = self.integrand.raw(t).abs();
            v <= self.tail.k * (-self.tail.c * t).exp()
        })
    }
}

/// `[x - (1 - e^{-xt}) / (1 - e^{-t})] e^{-t} / t` without the origin guard.
fn malmsten_raw(x: f64, t: f64) -> f64 {
    let decay = (-t).exp();
    // ratio * e^{-t}; for x < 0 and large t the e^{-xt} factor would overflow
    // on its own, so it is folded into the decay.
    let scaled_ratio = if x * t < -1.0 {
        (decay - (-(1.0 + x) * t).exp()) / -(-t).exp_m1()
    } else {
        (-x * t).exp_m1() / (-t).exp_m1() * decay
    };
    (x * decay - scaled_ratio) / t
}

/// `x (x - 1) / 2`: the bracket is `-x(1-x) t / 2 + O(t^2)`.
fn malmsten_origin(x: f64) -> f64 {
    0.5 * x * (x - 1.0)
}

/// Next Taylor coefficient: `-x (x - 1) (2x + 5) / 12`.
fn malmsten_origin_slope(x: f64) -> f64 {
    -x * (x - 1.0) * (2.0 * x + 5.0) / 12.0
}

fn malmsten_tail(x: f64) -> TailBound {
    TailBound {
        k: x.abs() + INV_ONE_MINUS_EXP_NEG1,
        c: (1.0 + x).min(1.0),
    }
}

/// Malmstén's integrand for `ln Gamma(x + 1)`, `x > -1`.
pub fn malmsten_integrand(x: f64) -> Result<Integrand> {
    if !(x > -1.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            requirement: "x > -1",
        });
    }
    let tail = malmsten_tail(x);
    Ok(Integrand::new(move |t| malmsten_raw(x, t))
        .with_origin_limit(malmsten_origin(x), malmsten_origin_slope(x))
        .with_tail_bound(tail.k, tail.c))
}

/// `ln Gamma(x + 1)` by Malmstén's half-line integral.
pub fn log_gamma_malmsten(x: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_half_line(&malmsten_integrand(x)?, cfg)
}

/// Binet's remainder `theta(x)` in `ln Gamma(x+1) = x ln x - x + ln(2 pi x)/2 + theta(x)`.
pub fn binet_theta(x: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            name: "x",
            value: x,
            requirement: "x > 0",
        });
    }
    // bracket(t)/t = sum_k 2 / (t^2 + 4 pi^2 k^2) decreases from 1/12.
    let f = Integrand::new(move |t| binet_bracket(t) * (-x * t).exp() / t)
        .with_origin_limit(1.0 / 12.0, -x / 12.0)
        .with_tail_bound(1.0 / 12.0, x);
    integrate_half_line(&f, cfg)
}

/// Catalan kernel in its simplified form,
/// `[(e^{3t/2} - 1)/(e^t - 1) e^{-nt} - 3/2] e^{-t} / t`.
///
/// Evaluated as `[q(t) e^{-(n+1/2)t} - 3/2 e^{-t}] / t` with
/// `q(t) = (1 - e^{-3t/2}) / (1 - e^{-t})`, which never overflows.
///
/// Near the origin `q = 3/2 - 3t/8 + O(t^2)`, so the kernel tends to
/// `3/8 - 3n/2`. For `t >= 1`, `q <= 1/(1 - e^{-1})` and the kernel is
/// bounded by `(1.582 + 1.5) e^{-min(n+1/2, 1) t}`.
pub fn malmsten_catalan_kernel(n: usize) -> KernelSpec {
    let nf = n as f64;
    let a = nf + 0.5;
    let f = move |t: f64| {
        let q = (-1.5 * t).exp_m1() / (-t).exp_m1();
        (q * (-a * t).exp() - 1.5 * (-t).exp()) / t
    };
    let origin = 0.375 - 1.5 * nf;
    let slope = malmsten_origin_slope(nf - 0.5) - malmsten_origin_slope(nf + 1.0);
    let integrand = Integrand::new(f)
        .with_origin_limit(origin, slope)
        .with_tail_bound(INV_ONE_MINUS_EXP_NEG1 + 1.5, a.min(1.0));
    KernelSpec::new("malmsten", nf, integrand)
}

/// The Shi-Liu-Qi integrand with `x = n`:
/// `(1/(e^t - 1) - 1/t + 1/2) (e^{-t/2} - e^{-2t}) / t e^{-nt}`.
///
/// Its integral is `theta(n + 1/2) - theta(n + 2)`. The bracket is
/// `t/12 + O(t^3)` and `(e^{-t/2} - e^{-2t})/t -> 3/2`, so the product starts
/// as `t/8`. The bracket is at most 1/2 and `(1 - e^{-3t/2})/t <= 1` for
/// `t >= 1`, giving the tail `0.5 e^{-(n+1/2) t}`.
pub fn binet_catalan_kernel(n: usize) -> KernelSpec {
    let nf = n as f64;
    let a = nf + 0.5;
    let f = move |t: f64| binet_bracket(t) * (-a * t).exp() * -(-1.5 * t).exp_m1() / t;
    let integrand = Integrand::new(f)
        .with_origin_limit(0.0, 0.125)
        .with_tail_bound(0.5, a);
    KernelSpec::new("binet", nf, integrand)
}

/// `ln Gamma(n + 1/2) - ln Gamma(n + 2)` as the difference of two Malmstén
/// integrands (arguments `n - 1/2` and `n + 1`), before any simplification.
pub fn log_gamma_difference_kernel(n: usize) -> KernelSpec {
    let nf = n as f64;
    let (lo, hi) = (nf - 0.5, nf + 1.0);
    let f = move |t: f64| malmsten_raw(lo, t) - malmsten_raw(hi, t);
    let origin = malmsten_origin(lo) - malmsten_origin(hi);
    let slope = malmsten_origin_slope(lo) - malmsten_origin_slope(hi);
    let (tl, th) = (malmsten_tail(lo), malmsten_tail(hi));
    let integrand = Integrand::new(f)
        .with_origin_limit(origin, slope)
        .with_tail_bound(tl.k + th.k, tl.c.min(th.c));
    KernelSpec::new("log_gamma_difference", nf, integrand)
}
