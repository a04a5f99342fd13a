use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use catalan_cli::{num, Format, Report, Row};
use catalan_core::exact::catalan_exact;
use catalan_core::gamma::{binet_catalan_kernel, log_gamma_difference_kernel, malmsten_catalan_kernel};
use catalan_core::quadrature::{
    DEFAULT_ABS_TOL, DEFAULT_MAX_SUBDIVISIONS, DEFAULT_REL_TOL,
};
use catalan_core::representations::{compare_representations, evaluate};
use catalan_core::series::{glaisher_from_integral, stewart_sum};
use catalan_core::{Error, Method, QuadConfig, SumRule, Transform};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

const GLAISHER_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "catalan", version, about = "Catalan numbers from their integral representations, checked against exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact decimal digits of C_n and ln C_n.
    Exact { n: usize },
    /// Evaluate ln C_n by one representation.
    Rep {
        method: MethodArg,
        n: usize,
        /// Largest accepted |ln_value - ln C_n|.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Compare every representation for n = 0..=n_max against exact values.
    Verify {
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Rows with abs_err_ln above this count as failures.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Sum a Catalan series rule until its tail bound is below --tol.
    Sumrule {
        which: RuleArg,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recover the Glaisher-Kinkelin constant from the log-Gamma integral.
    Glaisher {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        quad: QuadArgs,
    },
    /// Emit (t, integrand) samples as CSV. The grid is log-spaced when
    /// t_min > 0 and linear when t_min = 0.
    DumpKernel {
        kernel: KernelArg,
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        t_min: f64,
        #[arg(long, default_value_t = 50.0)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

#[derive(Debug, Args)]
struct QuadArgs {
    #[arg(long, default_value_t = DEFAULT_ABS_TOL)]
    abs_tol: f64,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBDIVISIONS)]
    max_subdivisions: usize,
    #[arg(long, value_enum, default_value_t = TransformArg::ExpDecay)]
    transform: TransformArg,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadConfig, String> {
        let cfg = QuadConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            transform: self.transform.into(),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    None,
    ExpDecay,
    DoubleExponential,
    Algebraic,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::None => Transform::None,
            TransformArg::ExpDecay => Transform::ExpDecayMap,
            TransformArg::DoubleExponential => Transform::DoubleExponential,
            TransformArg::Algebraic => Transform::AlgebraicMap,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Gamma,
    Malmsten,
    Binet,
    PensonMoment,
    PensonMellin,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Gamma => Method::GammaClosedForm,
            MethodArg::Malmsten => Method::Malmsten,
            MethodArg::Binet => Method::Binet,
            MethodArg::PensonMoment => Method::PensonMoment,
            MethodArg::PensonMellin => Method::PensonMellin,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    OddWeight,
    Plain,
}

impl From<RuleArg> for SumRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::OddWeight => SumRule::OddWeight,
            RuleArg::Plain => SumRule::Plain,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KernelArg {
    Malmsten,
    Binet,
    LogGammaDifference,
}

/// Outcome of a subcommand before it becomes an exit status.
enum Failure {
    Verification,
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn verdict(ok: bool) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_exact(n: usize) -> Result<(), Failure> {
    let c = catalan_exact(n);
    emit(&format!("{c}\nln {}\n", num(c.ln())), None)
}

fn cmd_rep(method: Method, n: usize, tol: f64, format: Format, quad: &QuadArgs) -> Result<(), Failure> {
    let cfg = quad.config().map_err(usage)?;
    let row = evaluate(method, n, &cfg).map_err(|e| match e {
        Error::OutOfRange { .. } | Error::Domain { .. } | Error::InvalidConfig(_) => usage(e),
        _ => Failure::Verification,
    })?;
    let report = Report::new(cfg, tol, vec![Row::Representation(row)]);
    emit(&report.render(format), None)?;
    verdict(report.passed())
}

fn cmd_verify(
    n_max: usize,
    format: Format,
    tol: f64,
    output: Option<&PathBuf>,
    quad: &QuadArgs,
) -> Result<(), Failure> {
    let cfg = quad.config().map_err(usage)?;
    let rows = compare_representations(n_max, &cfg)
        .into_iter()
        .map(Row::Representation)
        .collect();
    let report = Report::new(cfg, tol, rows);
    emit(&report.render(format), output)?;
    verdict(report.passed())
}

fn cmd_sumrule(rule: SumRule, tol: f64, format: Format) -> Result<(), Failure> {
    let (result, budget_ok) = match stewart_sum(rule, tol) {
        Ok(r) => (r, true),
        Err(Error::TermBudget { partial, needed, budget, .. }) => {
            eprintln!("tolerance needs {needed} terms, budget is {budget}; reporting partial sum");
            (*partial, false)
        }
        Err(e) => return Err(usage(e)),
    };
    let report = Report::new(QuadConfig::default(), tol, vec![Row::Series(result)]);
    emit(&report.render(format), None)?;
    verdict(budget_ok && report.passed())
}

fn cmd_glaisher(format: Format, quad: &QuadArgs) -> Result<(), Failure> {
    let cfg = quad.config().map_err(usage)?;
    let result = glaisher_from_integral(&cfg).map_err(|_| Failure::Verification)?;
    let report = Report::new(cfg, GLAISHER_TOLERANCE, vec![Row::Glaisher(result)]);
    emit(&report.render(format), None)?;
    verdict(report.passed())
}

fn cmd_dump_kernel(kernel: KernelArg, n: usize, t_min: f64, t_max: f64, points: usize) -> Result<(), Failure> {
    if !(t_min >= 0.0 && t_min < t_max && t_max.is_finite()) {
        return Err(usage(format!("need 0 <= t_min < t_max, got [{t_min}, {t_max}]")));
    }
    if points < 2 {
        return Err(usage("need at least 2 points"));
    }
    let spec = match kernel {
        KernelArg::Malmsten => malmsten_catalan_kernel(n),
        KernelArg::Binet => binet_catalan_kernel(n),
        KernelArg::LogGammaDifference => log_gamma_difference_kernel(n),
    };
    let last = (points - 1) as f64;
    let mut out = String::from("t,value\n");
    for i in 0..points {
        let frac = i as f64 / last;
        let t = if t_min > 0.0 {
            t_min * (t_max / t_min).powf(frac)
        } else {
            t_max * frac
        };
        out.push_str(&format!("{},{}\n", num(t), num(spec.integrand.eval(t))));
    }
    emit(&out, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Exact { n } => cmd_exact(*n),
        Command::Rep { method, n, tol, format, quad } => cmd_rep((*method).into(), *n, *tol, *format, quad),
        Command::Verify { n_max, format, tol, output, quad } => {
            cmd_verify(*n_max, *format, *tol, output.as_ref(), quad)
        }
        Command::Sumrule { which, tol, format } => cmd_sumrule((*which).into(), *tol, *format),
        Command::Glaisher { format, quad } => cmd_glaisher(*format, quad),
        Command::DumpKernel { kernel, n, t_min, t_max, points } => {
            cmd_dump_kernel(*kernel, *n, *t_min, *t_max, *points)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_FAILURE),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
