//! Command-line interface. Exit codes: 0 success or agreement, 1 a
//! verification disagreement or a paradox that fails to appear, 2 usage or
//! domain errors.

pub mod grid;
pub mod lcg;

use std::ffi::OsString;
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::params::{
    canonicalize_theta, classify_domain, format_complex, parse_complex, DomainKind, IntegrandSpec,
    UpperLimit,
};
use crate::partial_fractions::decompose;
use crate::series::{series_contracted, series_imaginary, series_one_sided};
use crate::verify::{
    eval_method, paradox_imaginary_n, paradox_periodicity, verify_grid, verify_point, EvalReport,
    Method, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CSV_HEADER: [&str; 13] = [
    "n", "p_re", "p_im", "theta", "zeta", "upper", "domain", "closed", "pf", "quad", "series",
    "max_abs_err", "verdict",
];

#[derive(Debug, Parser)]
#[command(name = "eulerint", version, about = "Closed forms, cross-checks and counterexamples for ∫ (x^(n+p) − 2xⁿ cos ζ + x^(n−p)) / (x^(2n) − 2xⁿ cos θ + 1) dx/x")]
struct Cli {
    /// Read angles (θ, ζ) in degrees
    #[arg(long, global = true)]
    deg: bool,
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one spec
    Eval(EvalArgs),
    /// Cross-check every evaluation path over a grid, one JSON report per line
    Verify(VerifyArgs),
    /// Partial-fraction decomposition for integer exponents
    Decompose(DecomposeArgs),
    /// Series expansions of the (0, 1] integral
    Series(SeriesArgs),
    /// Cartesian sweep written as CSV
    Table(TableArgs),
    /// Demonstrate where the closed form fails
    Paradox(ParadoxArgs),
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long)]
    n: f64,
    /// `RE`, `RE+IMi`, `RE-IMi` or `IMi`
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    /// Defaults to π/2
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Pf,
    Quad,
    Series,
    All,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// 1, inf, or a positive number X
    #[arg(long, default_value = "1")]
    upper: String,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Reduce θ into (0, 2π) before evaluating
    #[arg(long)]
    canonicalize: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// JSON array of specs, or JSON lines
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    grid: Option<PathBuf>,
    /// Number of random specs
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the report stream here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reduce θ into (0, 2π) before verifying
    #[arg(long)]
    canonicalize: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    OneSided,
    Contracted,
    Imaginary,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    #[arg(long)]
    n: f64,
    /// Real p; for `imaginary` either `IMi` or the real q
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Grid: `start:step:stop`, comma list, or a single value
    #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    p: String,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    zeta: Option<String>,
    #[arg(long, default_value = "1")]
    upper: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Use N random specs instead of the Cartesian grid
    #[arg(long, conflicts_with_all = ["n", "theta", "zeta"])]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParadoxArg {
    Periodicity,
    ImaginaryN,
}

#[derive(Debug, Args)]
struct ParadoxArgs {
    #[arg(long, value_enum)]
    kind: ParadoxArg,
    /// n, or the modulus m of n = mi for `imaginary-n`
    #[command(flatten)]
    spec: SpecArgs,
    /// Number of full turns added to θ
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    k: i64,
    #[arg(long, default_value = "1")]
    upper: String,
}

struct Ctx<'a> {
    pool: rayon::ThreadPool,
    deg: bool,
    json: bool,
    out: &'a mut dyn Write,
}

type CmdResult = Result<i32, String>;

impl Ctx<'_> {
    fn angle(&self, x: f64) -> f64 {
        if self.deg {
            x.to_radians()
        } else {
            x
        }
    }

    fn line(&mut self, s: impl AsRef<str>) -> Result<(), String> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| e.to_string())
    }

    fn json_line<T: Serialize>(&mut self, v: &T) -> Result<(), String> {
        let s = serde_json::to_string(v).map_err(|e| e.to_string())?;
        self.line(s)
    }

    fn spec(&self, a: &SpecArgs, upper: UpperLimit) -> Result<IntegrandSpec, String> {
        let p = parse_complex(&a.p).map_err(|e| e.to_string())?;
        let zeta = a.zeta.map_or(FRAC_PI_2, |z| self.angle(z));
        IntegrandSpec::new(a.n, p, self.angle(a.theta), zeta, upper).map_err(|e| e.to_string())
    }
}

fn parse_upper(s: &str) -> Result<UpperLimit, String> {
    UpperLimit::parse(s).map_err(|e| e.to_string())
}

fn fmt_value(z: Complex64) -> String {
    format_complex(z)
}

fn canonical(spec: IntegrandSpec) -> Result<IntegrandSpec, String> {
    match canonicalize_theta(spec.theta) {
        Ok((t, _)) => Ok(spec.with_theta(t)),
        Err(e) => Err(e.to_string()),
    }
}

/// Reject specs the formulas do not cover, with the one-line reason.
fn check_domain(spec: &IntegrandSpec) -> Result<(), String> {
    let d = classify_domain(spec);
    match d.kind {
        DomainKind::Valid | DomainKind::BoundaryA => Ok(()),
        DomainKind::ParadoxOnly => Err(format!("{}; pass --canonicalize to reduce θ", d.detail)),
        _ => Err(d.detail),
    }
}

fn cmd_eval(ctx: &mut Ctx, a: &EvalArgs) -> CmdResult {
    let mut spec = ctx.spec(&a.spec, parse_upper(&a.upper)?)?;
    if a.canonicalize {
        spec = canonical(spec)?;
    }
    check_domain(&spec)?;
    if ctx.json {
        let report = verify_point(&spec, a.tol);
        ctx.json_line(&report)?;
        return Ok(if report.verdict == Verdict::Disagree { EXIT_DISAGREE } else { EXIT_OK });
    }
    let single = match a.method {
        MethodArg::Closed => Some(Method::Closed),
        MethodArg::Pf => Some(Method::Pf),
        MethodArg::Quad => Some(Method::Quad),
        MethodArg::Series => Some(Method::Series),
        MethodArg::All => None,
    };
    if let Some(m) = single {
        let v = eval_method(&spec, m, a.tol).map_err(|e| e.to_string())?;
        ctx.line(fmt_value(v))?;
        return Ok(EXIT_OK);
    }
    let mut values = Vec::new();
    for m in Method::ALL {
        match eval_method(&spec, m, a.tol) {
            Ok(v) => {
                ctx.line(format!("{:<7}{}", m.name(), fmt_value(v)))?;
                values.push(v);
            }
            Err(e) => ctx.line(format!("{:<7}- ({e})", m.name()))?,
        }
    }
    let spread = values
        .iter()
        .flat_map(|x| values.iter().map(move |y| (x - y).norm()))
        .fold(0.0, f64::max);
    ctx.line(format!("spread {spread:e}"))?;
    Ok(if values.len() >= 2 && spread > a.tol { EXIT_DISAGREE } else { EXIT_OK })
}

fn exit_for(reports: &[EvalReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Disagree) {
        EXIT_DISAGREE
    } else {
        EXIT_OK
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Option<fs::File>, String> {
    path.as_ref()
        .map(|p| fs::File::create(p).map_err(|e| format!("{}: {e}", p.display())))
        .transpose()
}

fn cmd_verify(ctx: &mut Ctx, a: &VerifyArgs) -> CmdResult {
    let mut specs = match (&a.grid, a.random) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            grid::read_specs(&text)?
        }
        (None, Some(count)) => lcg::random_specs(count, a.seed),
        (None, None) => return Err("need --grid or --random".into()),
    };
    if ctx.deg {
        for s in &mut specs {
            s.theta = s.theta.to_radians();
            s.zeta = s.zeta.to_radians();
        }
    }
    if a.canonicalize {
        // singular angles stay as they are and are reported as skipped
        for s in &mut specs {
            if let Ok(c) = canonical(*s) {
                *s = c;
            }
        }
    }
    let reports = ctx.pool.install(|| verify_grid(&specs, a.tol));
    let mut file = open_out(&a.out)?;
    let sink: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => &mut *ctx.out,
    };
    let mut w = io::BufWriter::new(sink);
    for r in &reports {
        let s = serde_json::to_string(r).map_err(|e| e.to_string())?;
        writeln!(w, "{s}").map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;
    Ok(exit_for(&reports))
}

fn cmd_decompose(ctx: &mut Ctx, a: &DecomposeArgs) -> CmdResult {
    let spec = ctx.spec(&a.spec, UpperLimit::One)?;
    let d = decompose(&spec).map_err(|e| e.to_string())?;
    if ctx.json || matches!(a.format, Format::Json) {
        ctx.json_line(&d.terms)?;
    } else {
        ctx.line(format!("{:>4}  {:>24}  {:>24}", "k", "omega", "coeff"))?;
        for t in &d.terms {
            ctx.line(format!("{:>4}  {:>24}  {:>24}", t.k, t.omega, t.coeff))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_series(ctx: &mut Ctx, a: &SeriesArgs) -> CmdResult {
    let theta = ctx.angle(a.theta);
    let p = parse_complex(&a.p).map_err(|e| e.to_string())?;
    let r = match a.variant {
        Variant::OneSided | Variant::Contracted if p.im != 0.0 => {
            return Err("this variant needs a real p".into())
        }
        Variant::OneSided => series_one_sided(a.n, p.re, theta, a.tol),
        Variant::Contracted => series_contracted(a.n, p.re, theta, a.tol),
        Variant::Imaginary if p.re != 0.0 && p.im != 0.0 => {
            return Err("imaginary variant needs p = qi".into())
        }
        Variant::Imaginary => series_imaginary(a.n, if p.im != 0.0 { p.im } else { p.re }, theta, a.tol),
    }
    .map_err(|e| e.to_string())?;
    if ctx.json {
        ctx.json_line(&r)?;
    } else {
        ctx.line(format!("value          {}", r.value))?;
        ctx.line(format!("terms_used     {}", r.terms_used))?;
        ctx.line(format!("tail_estimate  {:e}", r.tail_estimate))?;
    }
    Ok(EXIT_OK)
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cmd_table(ctx: &mut Ctx, a: &TableArgs) -> CmdResult {
    let upper = parse_upper(&a.upper)?;
    let specs = match a.random {
        Some(count) => lcg::random_specs(count, a.seed)
            .into_iter()
            .map(|s| s.with_upper(upper))
            .collect(),
        None => {
            let ns = grid::parse_real_grid(a.n.as_deref().unwrap_or_default())?;
            let ps = grid::parse_complex_grid(&a.p)?;
            let thetas = grid::parse_real_grid(a.theta.as_deref().unwrap_or_default())?;
            let zetas = match &a.zeta {
                Some(z) => grid::parse_real_grid(z)?.into_iter().map(|z| ctx.angle(z)).collect(),
                None => vec![FRAC_PI_2],
            };
            let mut specs = Vec::with_capacity(ns.len() * ps.len() * thetas.len() * zetas.len());
            for &n in &ns {
                for &p in &ps {
                    for &t in &thetas {
                        for &z in &zetas {
                            let s = IntegrandSpec::new(n, p, ctx.angle(t), z, upper)
                                .map_err(|e| e.to_string())?;
                            specs.push(s);
                        }
                    }
                }
            }
            specs
        }
    };
    let reports = ctx.pool.install(|| verify_grid(&specs, a.tol));
    let mut file = open_out(&a.out)?;
    let sink: &mut dyn Write = match file.as_mut() {
        Some(f) => f,
        None => &mut *ctx.out,
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
    for r in &reports {
        let s = &r.spec;
        w.write_record([
            s.n.to_string(),
            s.p.re.to_string(),
            s.p.im.to_string(),
            s.theta.to_string(),
            s.zeta.to_string(),
            s.upper.to_string(),
            r.domain.kind.to_string(),
            opt_cell(r.closed),
            opt_cell(r.pf),
            opt_cell(r.quad),
            opt_cell(r.series),
            r.max_abs_err.to_string(),
            r.verdict.to_string(),
        ])
        .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())?;
    Ok(exit_for(&reports))
}

fn cmd_paradox(ctx: &mut Ctx, a: &ParadoxArgs) -> CmdResult {
    let report = match a.kind {
        ParadoxArg::Periodicity => {
            let spec = ctx.spec(&a.spec, parse_upper(&a.upper)?)?;
            paradox_periodicity(&spec, a.k)
        }
        ParadoxArg::ImaginaryN => {
            let p = parse_complex(&a.spec.p).map_err(|e| e.to_string())?;
            if p.im != 0.0 {
                return Err("imaginary-n needs a real p".into());
            }
            paradox_imaginary_n(a.spec.n, p.re, ctx.angle(a.spec.theta))
        }
    }
    .map_err(|e| e.to_string())?;
    if ctx.json {
        ctx.json_line(&report)?;
    } else {
        ctx.line(format!("formula  {}", fmt_value(report.formula_value)))?;
        if let Some(v) = report.oracle_value {
            ctx.line(format!("integral {v}"))?;
        }
        if let Some(m) = report.mismatch {
            ctx.line(format!("mismatch {m:e}"))?;
        }
        if let Some(m) = report.restored_mismatch {
            ctx.line(format!("restored {m:e}"))?;
        }
        if let Some(t) = report.pole_location {
            ctx.line(format!("pole     t = {t}"))?;
        }
        ctx.line(&report.explanation)?;
    }
    Ok(if report.manifests { EXIT_OK } else { EXIT_DISAGREE })
}

/// Parse `args` (including the program name) and run, writing to `out`.
/// Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let pool = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx { pool, deg: cli.deg, json: cli.json, out };
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(&mut ctx, a),
        Command::Verify(a) => cmd_verify(&mut ctx, a),
        Command::Decompose(a) => cmd_decompose(&mut ctx, a),
        Command::Series(a) => cmd_series(&mut ctx, a),
        Command::Table(a) => cmd_table(&mut ctx, a),
        Command::Paradox(a) => cmd_paradox(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            EXIT_USAGE
        }
    }
}

/// [`run_with`] on the process arguments and stdout.
pub fn run() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    run_with(std::env::args_os(), &mut lock)
}
