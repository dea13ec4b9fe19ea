//! Batch verification suites behind the `slice-dirac` binary.
//!
//! Every command returns an [`Outcome`]: the rendered report plus whether all
//! of its checks passed. Reports contain no timestamps or timings unless
//! `--timing` is given, so a fixed seed reproduces them byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtins::{builtin_stem, is_shell_only, parse_constant};
use crate::cauchy::{cauchy, pompeiu, slice_cauchy, CauchyOptions};
use crate::dirac::{cf_check, check_ode_pair, example44_pair, quintic_pair, split_regularity, Derivatives};
use crate::error::{Error, Result};
use crate::fueter::{laurent, taylor, CoefficientSource, SeriesExpansion};
use crate::geometry::{Frame, R4Point, ShellSpec};
use crate::octonion::{cayley_dickson_mul, Octonion, QuaternionPair, StructureTable};
use crate::quadrature::QuadCounts;
use crate::scalar::{CF_TOLERANCE_ANALYTIC, CF_TOLERANCE_FD, DEFAULT_TOLERANCE};
use crate::stem::json::parse_stem_json;
use crate::stem::{check_intrinsic, recover_stem, represent, sample_point, RepMatrix, SliceFunction, StemFunction};

type O = Octonion<f64>;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "SLICE_DIRAC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "slice-dirac", version, about = "Verification suites for octonionic slice Dirac analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Algebraic laws of the octonion product on random operands.
    VerifyAlgebra(RunArgs),
    /// Intrinsicness and the representation formula for a stem.
    VerifyStem(RunArgs),
    /// Cauchy–Fueter system, ODE pair and splitting for a stem.
    VerifyDirac(RunArgs),
    /// Cauchy (or Cauchy–Pompeiu) reconstruction over a quadrature sweep.
    Cauchy(RunArgs),
    /// Taylor expansion residual over a degree sweep.
    Taylor(RunArgs),
    /// Laurent expansion residual over a degree sweep.
    Laurent(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefficientMode {
    Analytic,
    Boundary,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Built-in stem name, `constant:<c0,..,c7>`, or a path to a JSON stem.
    #[arg(long)]
    pub stem: Option<String>,
    /// `canonical`, `random`, an axis unit `e1`..`e7`, or eight coordinates of I.
    #[arg(long, default_value = "canonical", allow_hyphen_values = true)]
    pub frame: String,
    /// Ball radius.
    #[arg(long, conflicts_with = "shell")]
    pub ball: Option<f64>,
    /// Shell radii `R1,R2`.
    #[arg(long)]
    pub shell: Option<String>,
    /// Domain centre, up to eight coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Evaluation point `x0,x1,x2,x3` in slice coordinates relative to the frame.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Expansion degree N.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Quadrature counts `N1,N2,N3[,Nr]`.
    #[arg(long)]
    pub quad: Option<String>,
    /// Pass threshold for the command's main check.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of random samples.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report destination; `-` is standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Second frame 𝕀′ for slice-Cauchy and series evaluation off the expansion slice.
    #[arg(long, allow_hyphen_values = true)]
    pub eval_frame: Option<String>,
    /// Source of Taylor coefficients.
    #[arg(long, value_enum, default_value = "analytic")]
    pub coefficients: CoefficientMode,
    /// Write expansion coefficients as CSV.
    #[arg(long)]
    pub coef_out: Option<PathBuf>,
    /// Write the expansion manifest as JSON.
    #[arg(long)]
    pub manifest_out: Option<PathBuf>,
    /// Fill the `runtime_ms` column with wall-clock times.
    #[arg(long)]
    pub timing: bool,
    /// Negate one structure constant before checking the algebra laws.
    #[arg(long)]
    pub inject_fault: bool,
    /// Number of quadrature levels in the Cauchy sweep, each doubling the last.
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
}

/// Rendered report and overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub report: String,
}

/// One named check with its worst residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRow {
    fn at_most(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), max_residual, tolerance, pass: max_residual <= tolerance, detail: None }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckRow>,
    pub pass: bool,
}

impl SuiteReport {
    fn new(command: &str, stem: Option<String>, seed: u64, trials: usize, checks: Vec<CheckRow>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { command: command.into(), stem, seed, trials, checks, pass }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = String::from("check,max_residual,tolerance,pass\n");
                for c in &self.checks {
                    s.push_str(&format!("{},{:?},{:?},{}\n", c.name, c.max_residual, c.tolerance, c.pass));
                }
                s
            }
        }
    }
}

/// Table cell: counts print as integers, measurements in shortest round-trip form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub command: String,
    pub stem: String,
    pub method: String,
    pub tolerance: f64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub pass: bool,
}

impl SweepReport {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut s = self.columns.join(",");
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.iter().map(Cell::to_string).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn to_json<S: Serialize>(v: &S) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidConfig(format!("{what} `{s}`: {e}")))
}

/// `canonical`, `random` (seeded), `e1`..`e7`, or explicit coordinates of I.
pub fn parse_frame(spec: &str, seed: u64) -> Result<Frame<f64>> {
    let tol = 1e-10;
    match spec {
        "canonical" => Ok(Frame::canonical()),
        "random" => Ok(Frame::random(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x66_7261_6d65))),
        _ => {
            if let Some(k) = spec.strip_prefix('e').and_then(|k| k.parse::<usize>().ok()) {
                if !(1..=7).contains(&k) {
                    return Err(Error::InvalidConfig(format!("axis unit `{spec}` must be e1..e7")));
                }
                return Frame::complete(O::basis(k), tol);
            }
            let i = parse_constant(spec)?;
            Frame::complete(i.scale(1.0 / i.norm()), tol)
        }
    }
}

fn parse_point(spec: &str) -> Result<R4Point<f64>> {
    match parse_list(spec, "point")?[..] {
        [a, b, c, d] => Ok(R4Point::new([a, b, c, d])),
        _ => Err(Error::InvalidConfig(format!("expected x0,x1,x2,x3, got `{spec}`"))),
    }
}

/// Reads a stem by built-in name or from a JSON file.
pub fn load_stem(spec: &str) -> Result<Arc<dyn StemFunction<f64>>> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{spec}: {e}")))?;
        Ok(Arc::new(parse_stem_json::<f64>(&text)?))
    } else {
        builtin_stem(spec)
    }
}

/// Parsed and validated run configuration.
struct Config {
    args: RunArgs,
    stem_name: String,
    frame: Frame<f64>,
    domain: Option<ShellSpec<f64>>,
}

impl Config {
    fn new(args: &RunArgs, default_stem: &str, default_domain: Option<(f64, f64)>) -> Result<Self> {
        if args.trials == Some(0) {
            return Err(Error::InvalidConfig("--trials must be at least 1".into()));
        }
        if let Some(t) = args.tol {
            if t.is_nan() || t <= 0.0 {
                return Err(Error::InvalidConfig("--tol must be positive".into()));
            }
        }
        let stem_name = args.stem.clone().unwrap_or_else(|| default_stem.into());
        let frame = parse_frame(&args.frame, args.seed)?;
        let center = args.center.as_deref().map(parse_constant).transpose()?.unwrap_or_else(O::zero);
        let domain = match (&args.ball, &args.shell, default_domain) {
            (Some(r), _, _) => Some(ShellSpec::ball(frame, center, *r)?),
            (None, Some(s), _) => match parse_list(s, "shell")?[..] {
                [r1, r2] => Some(ShellSpec::shell(frame, center, r1, r2)?),
                _ => return Err(Error::InvalidConfig(format!("expected R1,R2, got `{s}`"))),
            },
            (None, None, Some((r1, r2))) if r1 > 0.0 => Some(ShellSpec::shell(frame, center, r1, r2)?),
            (None, None, Some((_, r))) => Some(ShellSpec::ball(frame, center, r)?),
            (None, None, None) if args.center.is_some() => {
                return Err(Error::InvalidConfig("--center needs --ball or --shell".into()))
            }
            (None, None, None) => None,
        };
        if is_shell_only(&stem_name) && domain.as_ref().is_none_or(|d| d.is_ball()) {
            return Err(Error::InvalidConfig(format!("stem `{stem_name}` is singular at the origin; pass --shell R1,R2")));
        }
        Ok(Self { args: args.clone(), stem_name, frame, domain })
    }

    fn stem(&self) -> Result<Arc<dyn StemFunction<f64>>> {
        load_stem(&self.stem_name)
    }

    fn slice(&self) -> Result<SliceFunction<f64>> {
        let f = SliceFunction::new(self.stem()?);
        Ok(match self.domain {
            Some(d) => f.with_domain(d),
            None => f,
        })
    }

    fn trials(&self, default: usize) -> usize {
        self.args.trials.unwrap_or(default)
    }

    fn tol(&self, default: f64) -> f64 {
        self.args.tol.unwrap_or(default)
    }

    fn counts(&self) -> Result<QuadCounts> {
        self.args.quad.as_deref().map_or(Ok(QuadCounts::default()), str::parse)
    }

    fn format(&self, default: Format) -> Format {
        self.args.format.unwrap_or(default)
    }

    fn eval_frame(&self) -> Result<Option<Frame<f64>>> {
        self.args.eval_frame.as_deref().map(|s| parse_frame(s, self.args.seed.wrapping_add(1))).transpose()
    }
}

/// Runs one command without touching the report destination.
pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::VerifyAlgebra(a) => verify_algebra(a),
        Command::VerifyStem(a) => verify_stem(a),
        Command::VerifyDirac(a) => verify_dirac(a),
        Command::Cauchy(a) => cauchy_sweep(a),
        Command::Taylor(a) => taylor_sweep(a),
        Command::Laurent(a) => laurent_sweep(a),
    }
}

fn args_of(command: &Command) -> &RunArgs {
    match command {
        Command::VerifyAlgebra(a)
        | Command::VerifyStem(a)
        | Command::VerifyDirac(a)
        | Command::Cauchy(a)
        | Command::Taylor(a)
        | Command::Laurent(a) => a,
    }
}

/// Exit status for a failed check.
pub const EXIT_FAILED: i32 = 1;
/// Exit status for configuration, parse and I/O errors.
pub const EXIT_ERROR: i32 = 2;

/// Runs a command, writes its report, and returns the process exit status.
pub fn execute(cli: &Cli) -> i32 {
    let result = run(&cli.command).and_then(|o| {
        write_output(&args_of(&cli.command).out, &o.report)?;
        Ok(o.pass)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn write_output(dest: &str, text: &str) -> Result<()> {
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::Io(e.to_string()))
    } else {
        write_file(Path::new(dest), text)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Builds the global thread pool with at most `SLICE_DIRAC_THREADS` workers.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV}=`{v}` is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    Ok(())
}

fn unit_scale_octonion<R: Rng>(rng: &mut R) -> O {
    let c: [f64; 8] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
    O::from_f64(c).scale(1.0 / 8f64.sqrt())
}

fn verify_algebra(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "", None)?;
    let trials = cfg.trials(10_000);
    let tol = cfg.tol(DEFAULT_TOLERANCE);
    let standard = StructureTable::standard();
    let table = if args.inject_fault { standard.with_flipped_entry(1, 2, 3) } else { standard.clone() };
    let m = |x: &O, y: &O| table.mul(x, y);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut r = [0.0f64; 9];
    for _ in 0..trials {
        let (x, y, z) = (unit_scale_octonion(&mut rng), unit_scale_octonion(&mut rng), unit_scale_octonion(&mut rng));
        let xx = m(&x, &x);
        r[0] = r[0].max(m(&x, &m(&x, &y)).dist(&m(&xx, &y)));
        r[1] = r[1].max(m(&m(&y, &x), &x).dist(&m(&y, &xx)));
        r[2] = r[2].max(m(&z, &m(&x, &m(&z, &y))).dist(&m(&m(&m(&z, &x), &z), &y)));
        r[3] = r[3].max(m(&x, &m(&z, &m(&y, &z))).dist(&m(&m(&m(&x, &z), &y), &z)));
        r[4] = r[4].max(m(&m(&z, &x), &m(&y, &z)).dist(&m(&m(&z, &m(&x, &y)), &z)));
        let scale = x.norm() * y.norm();
        if scale > 0.0 {
            r[5] = r[5].max((m(&x, &y).norm() - scale).abs() / scale);
        }
        let (px, py) = (QuaternionPair::from_octonion(&x), QuaternionPair::from_octonion(&y));
        r[6] = r[6].max(cayley_dickson_mul(&px, &py, 1e-12)?.to_octonion().dist(&m(&x, &y)));
        let xc = m(&x, &x.conj());
        for k in 0..8 {
            let e = O::basis(k);
            r[7] = r[7].max(m(&x, &m(&x.conj(), &e)).dist(&m(&xc, &e)));
        }
        let inv = x.conj().scale(1.0 / x.norm_sq());
        r[8] = r[8].max(m(&x, &inv).dist(&O::one()));
    }
    let names = [
        "alternativity-left",
        "alternativity-right",
        "moufang-left",
        "moufang-right",
        "moufang-middle",
        "norm-multiplicativity",
        "cayley-dickson-agreement",
        "left-multiplication-conjugate",
        "inverse",
    ];
    let mut checks: Vec<CheckRow> = names.iter().zip(r).map(|(n, v)| CheckRow::at_most(n, v, tol)).collect();
    checks.push(CheckRow {
        name: "table-antisymmetry".into(),
        max_residual: if table.is_totally_antisymmetric() { 0.0 } else { 1.0 },
        tolerance: 0.0,
        pass: table.is_totally_antisymmetric(),
        detail: None,
    });
    let (e1, e2, e4) = (O::basis(1), O::basis(2), O::basis(4));
    let gap = m(&m(&e1, &e2), &e4).dist(&m(&e1, &m(&e2, &e4)));
    checks.push(CheckRow {
        name: "non-associativity-witness".into(),
        max_residual: gap,
        tolerance: tol,
        pass: gap > tol,
        detail: Some("(e1e2)e4 must differ from e1(e2e4)".into()),
    });
    if args.inject_fault {
        checks.iter_mut().for_each(|c| {
            if !c.pass && c.detail.is_none() {
                c.detail = Some("failed with ε(1,2,3) negated".into());
            }
        });
    }
    let report = SuiteReport::new("verify-algebra", None, args.seed, trials, checks);
    Ok(Outcome { pass: report.pass, report: report.render(cfg.format(Format::Json)) })
}

/// Default pass threshold of `verify-stem`, applied to relative residuals.
pub const STEM_TOLERANCE: f64 = 1e-10;

fn verify_stem(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "example44", None)?;
    let trials = cfg.trials(1000);
    let stem = cfg.stem()?;
    let f = cfg.slice()?;
    let domain = cfg.domain.as_ref();
    let mut checks = Vec::new();

    let tol = cfg.tol(STEM_TOLERANCE);
    let intr = check_intrinsic(stem.as_ref(), trials, tol, args.seed, domain)?;
    let mut row = CheckRow::at_most("intrinsic", intr.max_residual, tol);
    if let Some((x, _)) = intr.worst_sample.filter(|_| !intr.pass) {
        row = row.detail(format!("compatibility fails near x = {:?}", x.x));
    }
    checks.push(row);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(1));
    let (mut rep, mut indep, mut orth) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let (fa, fb) = (Frame::random(&mut rng), Frame::random(&mut rng));
        let x = sample_point(&mut rng, domain);
        let exact = f.eval_in_frame(&fb, &x);
        let scale = exact.max_abs().max(1.0);
        rep = rep.max(represent(&f, &fa, &x, &fb)?.dist(&exact) / scale);
        let (sa, sb) = (recover_stem(&f, &fa, &x)?, recover_stem(&f, &fb, &x)?);
        indep = indep.max((0..4).fold(0.0, |m: f64, k| m.max(sa[k].dist(&sb[k]))) / scale);
        orth = orth.max(RepMatrix::new(&fa).orthogonality_residual());
    }
    checks.push(CheckRow::at_most("representation-formula", rep, tol));
    checks.push(CheckRow::at_most("representation-frame-independence", indep, tol));
    checks.push(CheckRow::at_most("representation-matrix-orthogonality", orth, DEFAULT_TOLERANCE));

    let report = SuiteReport::new("verify-stem", Some(cfg.stem_name.clone()), args.seed, trials, checks);
    Ok(Outcome { pass: report.pass, report: report.render(cfg.format(Format::Json)) })
}

fn verify_dirac(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "example44", None)?;
    let trials = cfg.trials(1000);
    let stem = cfg.stem()?;
    let f = cfg.slice()?;
    let domain = cfg.domain.as_ref();
    let analytic = stem.has_analytic_derivatives();
    let tol = cfg.tol(if analytic { CF_TOLERANCE_ANALYTIC } else { CF_TOLERANCE_FD });
    let mut checks = Vec::new();

    let cf = cf_check(stem.as_ref(), trials, tol, args.seed, domain, Derivatives::Auto)?;
    let rows = cf.worst.rows.map(|r| r.max_abs());
    checks.push(
        CheckRow::at_most("cauchy-fueter", cf.max_residual, tol)
            .detail(format!("row residuals {:?} at x = {:?}", rows, cf.worst_point.x)),
    );

    let pair = match cfg.stem_name.as_str() {
        "quintic" => Some(quintic_pair()),
        "example44" => Some(example44_pair()),
        _ => None,
    };
    if let Some(pair) = pair {
        let ode = check_ode_pair(&pair, trials, DEFAULT_TOLERANCE, args.seed);
        checks.push(CheckRow::at_most("ode-pair", ode.max_residual, DEFAULT_TOLERANCE));
    }

    if cf.pass {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(2));
        let mut worst = 0.0f64;
        for _ in 0..trials.min(64) {
            let frame = Frame::random(&mut rng);
            let e4 = frame.perpendicular_unit();
            let x = sample_point(&mut rng, domain);
            let (g1, g2) = split_regularity(&f, &frame, &e4, &x)?;
            worst = worst.max(g1).max(g2);
        }
        checks.push(CheckRow::at_most("splitting-regularity", worst, 1e-6));
    }

    let report = SuiteReport::new("verify-dirac", Some(cfg.stem_name.clone()), args.seed, trials, checks);
    Ok(Outcome { pass: report.pass, report: report.render(cfg.format(Format::Json)) })
}

/// Seeded points with `|x − x_c| ≤ fraction · R` (and `≥` the inner radius
/// plus the same margin for shells).
fn interior_points(domain: &ShellSpec<f64>, count: usize, seed: u64, lo: f64, hi: f64) -> Vec<R4Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = domain.center_coords();
    (0..count)
        .map(|_| loop {
            let d: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(1e-3..=1.0).contains(&n) {
                continue;
            }
            let r = lo + (hi - lo) * rng.random_range(0.0f64..1.0).powf(0.25);
            break c.add(&R4Point::new(d.map(|v| v / n * r)));
        })
        .collect()
}

fn elapsed_ms(start: Instant, timing: bool) -> Cell {
    Cell::Int(if timing { start.elapsed().as_millis() as u64 } else { 0 })
}

fn cauchy_sweep(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "example44", Some((0.0, 1.0)))?;
    let domain = cfg.domain.expect("cauchy always has a domain");
    if !domain.is_ball() {
        return Err(Error::InvalidConfig("cauchy needs a ball".into()));
    }
    let f = cfg.slice()?;
    let stem = f.stem();
    let tol = cfg.tol(1e-6);
    let regular = {
        let t = if stem.has_analytic_derivatives() { CF_TOLERANCE_ANALYTIC } else { CF_TOLERANCE_FD };
        cf_check(stem, 64, t, args.seed, Some(&domain), Derivatives::Auto)?.pass
    };
    let points = match &args.q {
        Some(q) => vec![parse_point(q)?],
        None => interior_points(&domain, cfg.trials(8), args.seed, 0.0, 0.8 * domain.outer()),
    };
    let eval_frame = cfg.eval_frame()?;
    let base = cfg.counts()?;
    if args.levels == 0 {
        return Err(Error::InvalidConfig("--levels must be at least 1".into()));
    }
    let method = match (&eval_frame, regular) {
        (Some(_), _) => "slice-cauchy",
        (None, true) => "cauchy",
        (None, false) => "cauchy-pompeiu",
    };
    let mut rows = Vec::new();
    let mut last = f64::INFINITY;
    for level in (0..args.levels).rev() {
        let shrink = |n: usize| (n >> level).max(1);
        let counts = QuadCounts::new(shrink(base.n1), shrink(base.n2), shrink(base.n3), shrink(base.nr))?;
        let opts = CauchyOptions::with_counts(counts);
        let start = Instant::now();
        let mut err = 0.0f64;
        for x in &points {
            let (value, exact) = match &eval_frame {
                Some(fp) => (slice_cauchy(&f, &domain, x, fp, &opts)?, f.eval(&fp.compose(x))?),
                None if regular => (cauchy(&f, &domain, x, &opts)?, f.eval_in_frame(&cfg.frame, x)),
                None => (pompeiu(&f, &domain, x, &opts)?.value, f.eval_in_frame(&cfg.frame, x)),
            };
            err = err.max(value.dist(&exact));
        }
        last = err;
        rows.push(vec![
            Cell::Int(counts.n1 as u64),
            Cell::Int(counts.n2 as u64),
            Cell::Int(counts.n3 as u64),
            Cell::Int(counts.nr as u64),
            Cell::Float(err),
            elapsed_ms(start, args.timing),
        ]);
    }
    let report = SweepReport {
        command: "cauchy".into(),
        stem: cfg.stem_name.clone(),
        method: method.into(),
        tolerance: tol,
        columns: ["N1", "N2", "N3", "Nr", "max_error", "runtime_ms"].map(String::from).to_vec(),
        rows,
        pass: last <= tol,
    };
    Ok(Outcome { pass: report.pass, report: report.render(cfg.format(Format::Csv)) })
}

fn series_residual(
    s: &SeriesExpansion<f64>,
    f: &SliceFunction<f64>,
    frame: &Frame<f64>,
    points: &[R4Point<f64>],
    eval_frame: Option<&Frame<f64>>,
) -> Result<f64> {
    let mut err = 0.0f64;
    for x in points {
        let (v, exact) = match eval_frame {
            Some(fp) => (s.eval_in_frame(x, fp)?, f.eval(&fp.compose(x))?),
            None => (s.eval(x)?, f.eval_in_frame(frame, x)),
        };
        err = err.max(v.dist(&exact));
    }
    Ok(err)
}

fn degree_sweep(
    cfg: &Config,
    command: &str,
    method: &str,
    tol: f64,
    full: &SeriesExpansion<f64>,
    points: &[R4Point<f64>],
    build_ms: u64,
) -> Result<Outcome> {
    let f = cfg.slice()?;
    let eval_frame = cfg.eval_frame()?;
    let mut rows = Vec::new();
    let mut last = f64::INFINITY;
    for n in 0..=full.degree {
        let start = Instant::now();
        let err = series_residual(&full.truncated(n), &f, &cfg.frame, points, eval_frame.as_ref())?;
        last = err;
        let ms = if cfg.args.timing { build_ms + start.elapsed().as_millis() as u64 } else { 0 };
        rows.push(vec![Cell::Int(n as u64), Cell::Int(points.len() as u64), Cell::Float(err), Cell::Int(ms)]);
    }
    if let Some(p) = &cfg.args.coef_out {
        write_file(p, &full.coefficients_csv())?;
    }
    if let Some(p) = &cfg.args.manifest_out {
        write_file(p, &to_json(&full.manifest()))?;
    }
    let report = SweepReport {
        command: command.into(),
        stem: cfg.stem_name.clone(),
        method: method.into(),
        tolerance: tol,
        columns: ["degree", "points", "max_residual", "runtime_ms"].map(String::from).to_vec(),
        rows,
        pass: last <= tol,
    };
    Ok(Outcome { pass: report.pass, report: report.render(cfg.format(Format::Csv)) })
}

fn taylor_sweep(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "quintic", Some((0.0, 1.0)))?;
    let domain = cfg.domain.expect("taylor always has a domain");
    let f = cfg.slice()?;
    let degree = args.degree.unwrap_or(5);
    let (source, method, default_tol) = match args.coefficients {
        CoefficientMode::Analytic => (CoefficientSource::Analytic, "analytic", 1e-8),
        CoefficientMode::Boundary => (CoefficientSource::Boundary(cfg.counts()?), "boundary", 1e-4),
    };
    let start = Instant::now();
    let series = taylor(&f, &domain, degree, source)?;
    let build_ms = start.elapsed().as_millis() as u64;
    let points = interior_points(&domain, cfg.trials(1000), args.seed, 0.0, 0.9 * domain.outer());
    degree_sweep(&cfg, "taylor", method, cfg.tol(default_tol), &series, &points, build_ms)
}

fn laurent_sweep(args: &RunArgs) -> Result<Outcome> {
    let cfg = Config::new(args, "kernelV", Some((0.5, 2.0)))?;
    let domain = cfg.domain.expect("laurent always has a domain");
    let f = cfg.slice()?;
    let degree = args.degree.unwrap_or(4);
    let start = Instant::now();
    let series = laurent(&f, &domain, degree, &cfg.counts()?)?;
    let build_ms = start.elapsed().as_millis() as u64;
    let (r1, r2) = (domain.inner(), domain.outer());
    let margin = (r2 - r1) / 4.0;
    let points = interior_points(&domain, cfg.trials(1000), args.seed, r1 + margin, r2 - margin);
    degree_sweep(&cfg, "laurent", "boundary", cfg.tol(1e-4), &series, &points, build_ms)
}
