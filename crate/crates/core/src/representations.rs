//! `ln C_n` by every route: the Gamma closed form, Malmstén's kernel, the
//! Binet-remainder formula of Shi, Liu and Qi, and both Penson integrals.
//!
//! Everything is assembled in the log domain: `4^n` leaves double range near
//! `n = 512` and `C_n` itself near `n = 260`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::ln_exact;
use crate::gamma::{
    binet_catalan_kernel, log_gamma_reference, malmsten_catalan_kernel,
};
use crate::quadrature::{
    integrate_finite, integrate_half_line, Integrand, QuadConfig, QuadResult, Transform,
};

/// Largest index accepted by the two Penson routes.
pub const PENSON_MAX_N: usize = 200;

/// Per-row acceptance floor on `|ln_value - exact_ln|`.
pub const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GammaClosedForm,
    Malmsten,
    Binet,
    PensonMoment,
    PensonMellin,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::GammaClosedForm,
        Method::Malmsten,
        Method::Binet,
        Method::PensonMoment,
        Method::PensonMellin,
    ];

    /// Command-line spelling.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Method::GammaClosedForm => "gamma",
            Method::Malmsten => "malmsten",
            Method::Binet => "binet",
            Method::PensonMoment => "penson-moment",
            Method::PensonMellin => "penson-mellin",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::GammaClosedForm => "gamma_closed_form",
            Method::Malmsten => "malmsten",
            Method::Binet => "binet",
            Method::PensonMoment => "penson_moment",
            Method::PensonMellin => "penson_mellin",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.cli_name() == s || m.as_str() == s)
            .ok_or_else(|| format!("unknown method '{s}'"))
    }
}

/// One `ln C_n` evaluation and its comparison with the exact value.
///
/// `quad_error_estimate` is expressed in the log domain: the absolute
/// integral error for the exponent-type routes, the relative integral error
/// for the Penson routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationResult {
    pub n: usize,
    pub method: Method,
    pub ln_value: f64,
    pub exact_ln: f64,
    pub abs_err_ln: f64,
    pub quad_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl RepresentationResult {
    fn new(n: usize, method: Method, ln_value: f64, quad: Option<(f64, usize, bool)>) -> Self {
        let exact_ln = ln_exact(n);
        let (quad_error_estimate, evaluations, converged) = quad.unwrap_or((0.0, 0, true));
        RepresentationResult {
            n,
            method,
            ln_value,
            exact_ln,
            abs_err_ln: (ln_value - exact_ln).abs(),
            quad_error_estimate,
            evaluations,
            converged,
        }
    }

    fn failed(n: usize, method: Method) -> Self {
        RepresentationResult {
            n,
            method,
            ln_value: f64::NAN,
            exact_ln: ln_exact(n),
            abs_err_ln: f64::INFINITY,
            quad_error_estimate: f64::INFINITY,
            evaluations: 0,
            converged: false,
        }
    }

    /// The Malmstén representation is stated for `n >= 1`; `n = 0` is evaluated anyway.
    pub fn extends_stated_hypothesis(&self) -> bool {
        self.method == Method::Malmsten && self.n == 0
    }

    /// Converged, and within `max(1e-9, 50 * quad_error_estimate)` of exact.
    pub fn within_row_tolerance(&self) -> bool {
        self.converged && self.abs_err_ln <= ROW_TOLERANCE.max(50.0 * self.quad_error_estimate)
    }

    /// `C_n` in linear scale when it fits in a double.
    pub fn linear_value(&self) -> Option<f64> {
        let v = self.ln_value.exp();
        v.is_finite().then_some(v)
    }
}

fn gamma_prefactor(n: usize) -> f64 {
    2.0 * n as f64 * LN_2 - 0.5 * PI.ln()
}

/// `ln C_n = 2n ln 2 - ln(pi)/2 + ln Gamma(n + 1/2) - ln Gamma(n + 2)`.
pub fn catalan_gamma_closed_form(n: usize) -> Result<RepresentationResult> {
    let nf = n as f64;
    let ln_value =
        gamma_prefactor(n) + log_gamma_reference(nf + 0.5)? - log_gamma_reference(nf + 2.0)?;
    Ok(RepresentationResult::new(n, Method::GammaClosedForm, ln_value, None))
}

fn log_domain(q: &QuadResult) -> Option<(f64, usize, bool)> {
    Some((q.error_estimate, q.evaluations, q.converged))
}

/// `C_n = 4^n / sqrt(pi) * exp(int_0^inf [(e^{3t/2}-1)/(e^t-1) e^{-nt} - 3/2] e^{-t}/t dt)`.
pub fn catalan_malmsten(n: usize, cfg: &QuadConfig) -> Result<RepresentationResult> {
    let kernel = malmsten_catalan_kernel(n);
    let q = integrate_half_line(&kernel.integrand, cfg)?;
    Ok(RepresentationResult::new(
        n,
        Method::Malmsten,
        gamma_prefactor(n) + q.value,
        log_domain(&q),
    ))
}

/// Binet-remainder form with `x = n`:
/// `ln C_n = 3/2 + 2n ln 2 + n ln(n + 1/2) - ln(pi)/2 - (n + 3/2) ln(n + 2)
///           + theta(n + 1/2) - theta(n + 2)`.
///
/// The prefactor follows from applying
/// `ln Gamma(x+1) = x ln x - x + ln(2 pi x)/2 + theta(x)` at `x = n + 1/2` and
/// `x = n + 2` to `C_n = 4^n Gamma(n+3/2) (n+2) / (sqrt(pi) (n+1/2) Gamma(n+3))`:
/// the linear terms leave `-(n + 1/2) + (n + 2) = 3/2`, and the logarithms
/// collect into `n ln(n + 1/2) - (n + 3/2) ln(n + 2)`.
pub fn catalan_binet(n: usize, cfg: &QuadConfig) -> Result<RepresentationResult> {
    let kernel = binet_catalan_kernel(n);
    let q = integrate_half_line(&kernel.integrand, cfg)?;
    Ok(RepresentationResult::new(
        n,
        Method::Binet,
        binet_prefactor(n) + q.value,
        log_domain(&q),
    ))
}

/// Log of the closed-form factor in the Binet-remainder representation.
pub fn binet_prefactor(n: usize) -> f64 {
    let nf = n as f64;
    1.5 + gamma_prefactor(n) + nf * (nf + 0.5).ln() - (nf + 1.5) * (nf + 2.0).ln()
}

fn check_penson_range(n: usize) -> Result<()> {
    if n > PENSON_MAX_N {
        return Err(Error::OutOfRange {
            what: "Penson index n",
            value: n,
            limit: PENSON_MAX_N,
        });
    }
    Ok(())
}

fn relative(q: &QuadResult) -> Option<(f64, usize, bool)> {
    Some((q.error_estimate / q.value.abs(), q.evaluations, q.converged))
}

/// `C_n = (2/pi) 4^n int_{-1}^{1} t^{2n} sqrt(1 - t^2) dt`.
pub fn catalan_penson_moment(n: usize, cfg: &QuadConfig) -> Result<RepresentationResult> {
    check_penson_range(n)?;
    let power = 2 * n as i32;
    let f = Integrand::new(move |t: f64| t.powi(power) * ((1.0 - t) * (1.0 + t)).sqrt());
    let q = integrate_finite(&f, -1.0, 1.0, cfg)?;
    let ln_value = (2.0 / PI).ln() + 2.0 * n as f64 * LN_2 + q.value.ln();
    Ok(RepresentationResult::new(n, Method::PensonMoment, ln_value, relative(&q)))
}

/// `C_n = 4^{n+2} / pi int_0^inf sqrt(t) / (4t + 1)^{n+2} dt`.
///
/// The integrand decays like `t^{-(n + 3/2)}`, so the exp-decay truncation
/// does not apply; `ExpDecayMap` and `None` are replaced by `AlgebraicMap`.
pub fn catalan_penson_mellin(n: usize, cfg: &QuadConfig) -> Result<RepresentationResult> {
    check_penson_range(n)?;
    let power = n as i32 + 2;
    let f = Integrand::new(move |t: f64| t.sqrt() / (4.0 * t + 1.0).powi(power));
    let cfg = QuadConfig {
        transform: mellin_transform(cfg.transform),
        ..*cfg
    };
    let q = integrate_half_line(&f, &cfg)?;
    let ln_value = 2.0 * (n as f64 + 2.0) * LN_2 - PI.ln() + q.value.ln();
    Ok(RepresentationResult::new(n, Method::PensonMellin, ln_value, relative(&q)))
}

/// Transform actually used for the algebraically decaying Penson integral.
pub fn mellin_transform(requested: Transform) -> Transform {
    match requested {
        Transform::DoubleExponential => Transform::DoubleExponential,
        _ => Transform::AlgebraicMap,
    }
}

pub fn evaluate(method: Method, n: usize, cfg: &QuadConfig) -> Result<RepresentationResult> {
    match method {
        Method::GammaClosedForm => catalan_gamma_closed_form(n),
        Method::Malmsten => catalan_malmsten(n, cfg),
        Method::Binet => catalan_binet(n, cfg),
        Method::PensonMoment => catalan_penson_moment(n, cfg),
        Method::PensonMellin => catalan_penson_mellin(n, cfg),
    }
}

/// Every method for every `n` in `0..=n_max`, ordered by `(n, method)`.
/// Rows run in parallel; a failed row is kept with `converged = false`.
pub fn compare_representations(n_max: usize, cfg: &QuadConfig) -> Vec<RepresentationResult> {
    let pairs: Vec<(usize, Method)> = (0..=n_max)
        .flat_map(|n| Method::ALL.into_iter().map(move |m| (n, m)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(n, m)| evaluate(m, n, cfg).unwrap_or_else(|_| RepresentationResult::failed(n, m)))
        .collect()
}
