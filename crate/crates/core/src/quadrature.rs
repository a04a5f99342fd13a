//! Adaptive Gauss-Kronrod integration on finite intervals and on the half-line.
//!
//! Finite intervals use a globally adaptive 10/21-point Gauss-Kronrod pair:
//! the panel with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)` or the panel budget runs
//! out. Half-line integrals go through one of three transforms:
//!
//! | transform            | requirement on `f`               | method                              |
//! |----------------------|----------------------------------|-------------------------------------|
//! | `ExpDecayMap`        | tail bound `K e^{-ct}` for t >= 1 | truncate at `T`, adaptive on `[0,T]` |
//! | `DoubleExponential`  | decay, any rate                  | exp-sinh trapezoid, step halving    |
//! | `AlgebraicMap`       | algebraic decay is enough        | `[0,1]` plus `t = 1/u` on `(0,1]`   |
//!
//! Every sample passes through [`Integrand::eval`], which substitutes the
//! analytic origin limit below the integrand's small-`t` threshold.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_REL_TOL: f64 = 1e-11;
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;
pub const DEFAULT_SMALL_T_THRESHOLD: f64 = 1e-6;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_338,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Analytic value of the integrand as `t -> 0+`, with an optional first-order
/// Taylor coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginLimit {
    pub value: f64,
    pub slope: f64,
}

/// `|f(t)| <= k * exp(-c t)` for all `t >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub k: f64,
    pub c: f64,
}

impl TailBound {
    /// Bound on `int_T^inf |f|` for `T >= 1`.
    pub fn integral_beyond(&self, cutoff: f64) -> f64 {
        self.k * (-self.c * cutoff).exp() / self.c
    }

    /// Smallest cutoff `T >= 1` whose tail integral bound is at most `target`.
    pub fn cutoff_for(&self, target: f64) -> f64 {
        let t = (self.k / (self.c * target)).ln() / self.c;
        t.max(1.0)
    }
}

/// A real function of `t` packaged with its removable-singularity guard.
#[derive(Clone)]
pub struct Integrand {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    origin: Option<OriginLimit>,
    small_t_threshold: f64,
    tail: Option<TailBound>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("origin", &self.origin)
            .field("small_t_threshold", &self.small_t_threshold)
            .field("tail", &self.tail)
            .finish_non_exhaustive()
    }
}

impl Integrand {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Integrand {
            eval: Arc::new(f),
            origin: None,
            small_t_threshold: DEFAULT_SMALL_T_THRESHOLD,
            tail: None,
        }
    }

    pub fn with_origin_limit(mut self, value: f64, slope: f64) -> Self {
        self.origin = Some(OriginLimit { value, slope });
        self
    }

    pub fn with_small_t_threshold(mut self, threshold: f64) -> Self {
        self.small_t_threshold = threshold;
        self
    }

    pub fn with_tail_bound(mut self, k: f64, c: f64) -> Self {
        self.tail = Some(TailBound { k, c });
        self
    }

    pub fn origin(&self) -> Option<OriginLimit> {
        self.origin
    }

    pub fn origin_limit(&self) -> Option<f64> {
        self.origin.map(|o| o.value)
    }

    pub fn small_t_threshold(&self) -> f64 {
        self.small_t_threshold
    }

    pub fn tail_bound(&self) -> Option<TailBound> {
        self.tail
    }

    /// The bare formula, with no origin guard.
    pub fn raw(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// Guarded evaluation: below the threshold the Taylor polynomial of the
    /// origin limit replaces the formula.
    pub fn eval(&self, t: f64) -> f64 {
        match self.origin {
            Some(o) if t.abs() < self.small_t_threshold => o.value + o.slope * t,
            _ => (self.eval)(t),
        }
    }

    /// `|raw(threshold) - limit| <= 0.01 (1 + |limit|)`; vacuous without a limit.
    pub fn origin_is_consistent(&self) -> bool {
        match self.origin {
            None => true,
            Some(o) => {
                let v = self.raw(self.small_t_threshold);
                v.is_finite() && (v - o.value).abs() <= 0.01 * (1.0 + o.value.abs())
            }
        }
    }

    fn sample(&self, t: f64) -> Result<f64> {
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { abscissa: t })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// No half-line transform; rejected by [`integrate_half_line`].
    None,
    #[default]
    ExpDecayMap,
    DoubleExponential,
    AlgebraicMap,
}

impl Transform {
    pub fn as_str(&self) -> &'static str {
        match self {
            Transform::None => "none",
            Transform::ExpDecayMap => "exp_decay_map",
            Transform::DoubleExponential => "double_exponential",
            Transform::AlgebraicMap => "algebraic_map",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub transform: Transform,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
            transform: Transform::default(),
        }
    }
}

impl QuadConfig {
    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::InvalidConfig("tolerances must be nonnegative"));
        }
        if self.abs_tol + self.rel_tol <= 0.0 {
            return Err(Error::InvalidConfig("abs_tol + rel_tol must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidConfig("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gauss_kronrod_21<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center)?;
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = f_center.abs() * WGK[10];

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error })
}

const KRONROD_POINTS: usize = 21;

fn adaptive<F>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let first = gauss_kronrod_21(f, a, b)?;
    let mut evaluations = KRONROD_POINTS;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions + 1);
    heap.push(first);

    while error > cfg.target(value) && heap.len() < cfg.max_subdivisions {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Panel is at floating-point resolution; nothing left to split.
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod_21(f, worst.a, mid)?;
        let right = gauss_kronrod_21(f, mid, worst.b)?;
        evaluations += 2 * KRONROD_POINTS;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in abscissa order so the result does not carry update drift.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error_estimate: error,
        evaluations,
        converged: error <= cfg.target(value),
    })
}

/// Integrates `f` over `[a, b]`.
///
/// Non-convergence within `max_subdivisions` panels is reported through
/// `converged = false`; a non-finite sample is an error naming the abscissa.
pub fn integrate_finite(f: &Integrand, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    adaptive(&|t| f.sample(t), a, b, cfg)
}

/// Integrates `f` over `[0, inf)` with the transform selected in `cfg`.
pub fn integrate_half_line(f: &Integrand, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    match cfg.transform {
        Transform::None => Err(Error::InvalidConfig(
            "half-line integration needs a transform",
        )),
        Transform::ExpDecayMap => exp_decay_truncated(f, cfg),
        Transform::DoubleExponential => exp_sinh(f, cfg),
        Transform::AlgebraicMap => algebraic_split(f, cfg),
    }
}

fn exp_decay_truncated(f: &Integrand, cfg: &QuadConfig) -> Result<QuadResult> {
    let tail = f.tail_bound().ok_or(Error::MissingTailBound)?;
    let base = if cfg.abs_tol > 0.0 { cfg.abs_tol } else { cfg.rel_tol };
    let cutoff = tail.cutoff_for(base / 10.0);
    let mut res = adaptive(&|t| f.sample(t), 0.0, cutoff, cfg)?;
    res.error_estimate += tail.integral_beyond(cutoff);
    res.converged = res.converged && res.error_estimate <= cfg.target(res.value);
    Ok(res)
}

fn algebraic_split(f: &Integrand, cfg: &QuadConfig) -> Result<QuadResult> {
    let half_cfg = QuadConfig {
        abs_tol: 0.5 * cfg.abs_tol,
        rel_tol: 0.5 * cfg.rel_tol,
        ..*cfg
    };
    let head = adaptive(&|t| f.sample(t), 0.0, 1.0, &half_cfg)?;
    // int_1^inf f(t) dt = int_0^1 f(1/u) / u^2 du
    let inverted = |u: f64| -> Result<f64> {
        if u == 0.0 {
            return Ok(0.0);
        }
        let v = f.sample(1.0 / u)? / (u * u);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { abscissa: 1.0 / u })
        }
    };
    let tail = adaptive(&inverted, 0.0, 1.0, &half_cfg)?;
    let value = head.value + tail.value;
    let error_estimate = head.error_estimate + tail.error_estimate;
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations: head.evaluations + tail.evaluations,
        converged: head.converged && tail.converged && error_estimate <= cfg.target(value),
    })
}

// Trapezoid nodes cover s in [-DE_RANGE, DE_RANGE]; at the ends t = exp(+-521),
// far past both the origin threshold and any decay scale used here.
const DE_RANGE: f64 = 6.5;
const DE_FIRST_STEP: f64 = 0.5;
const DE_MIN_LEVELS: usize = 4;
const DE_MAX_LEVELS: usize = 12;

/// Exp-sinh rule: `t = exp(pi/2 sinh s)`, trapezoid in `s` with step halving.
/// The estimate is the change between the last two levels, which overstates
/// the error once the rule is in its doubly-exponential regime.
fn exp_sinh(f: &Integrand, cfg: &QuadConfig) -> Result<QuadResult> {
    let node = |s: f64| -> Result<f64> {
        let u = FRAC_PI_2 * s.sinh();
        let t = u.exp();
        let w = t * FRAC_PI_2 * s.cosh();
        if w == 0.0 {
            return Ok(0.0);
        }
        let v = f.sample(t)?;
        Ok(if v == 0.0 { 0.0 } else { v * w })
    };

    let mut h = DE_FIRST_STEP;
    let steps = (DE_RANGE / h) as i64;
    let mut sum = 0.0;
    let mut evaluations = 0;
    for k in -steps..=steps {
        sum += node(k as f64 * h)?;
        evaluations += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;

    for level in 1..=DE_MAX_LEVELS {
        h *= 0.5;
        let steps = (DE_RANGE / h) as i64;
        let mut k = -steps + if steps % 2 == 0 { 1 } else { 0 };
        while k <= steps {
            sum += node(k as f64 * h)?;
            evaluations += 1;
            k += 2;
        }
        let next = sum * h;
        // Floor at the rounding level, as the Kronrod estimate does.
        error = (next - estimate).abs().max(50.0 * f64::EPSILON * next.abs());
        estimate = next;
        if level >= DE_MIN_LEVELS && error <= cfg.target(estimate) {
            converged = true;
            break;
        }
    }

    Ok(QuadResult {
        value: estimate,
        error_estimate: error,
        evaluations,
        converged,
    })
}
