use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_zeros::bounds::max_zero_bound;
use harmonic_zeros::dynamics::Window;
use harmonic_zeros::gallery::{catalog, random_instance, CatalogParams};
use harmonic_zeros::instance::InstanceFile;
use harmonic_zeros::workflow::{
    caustic_scan, fuzz_campaign_with_bound, run_pipeline, sweep, FuzzConfig, PipelineConfig, SweepPath,
};
use harmonic_zeros::{Complex64, Error, RationalFunction};
use serde::Serialize;

const THREADS_ENV: &str = "HARMONIC_ZEROS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "harmonic-zeros", version, about = "Zeros of rational harmonic functions r(z) - conj(z) - c")]
struct Cli {
    #[command(flatten)]
    tolerances: Tolerances,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Base seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Tolerances {
    /// Relative residual at which a polynomial root counts as converged.
    #[arg(long, global = true)]
    tol_root: Option<f64>,
    /// Residual below which a candidate is accepted as a zero, scaled by 1 + |z|.
    #[arg(long, global = true)]
    tol_accept: Option<f64>,
    /// Half-width of the singular band around |r'| = 1.
    #[arg(long, global = true)]
    tau_sing: Option<f64>,
    /// Contour radius as a multiple of the root enclosure.
    #[arg(long, global = true)]
    radius_factor: Option<f64>,
    /// Iteration cap of the polynomial root finder.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
}

impl Tolerances {
    fn pipeline(&self) -> Result<PipelineConfig, Failure> {
        let mut cfg = PipelineConfig::default();
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Failure::Input(format!("--{name} must be positive, got {v}")))
            }
        };
        if let Some(v) = self.tol_root {
            cfg.solver.root_tol = positive("tol-root", v)?;
        }
        if let Some(v) = self.tol_accept {
            cfg.solver.accept_tol = positive("tol-accept", v)?;
        }
        if let Some(v) = self.tau_sing {
            cfg.solver.tau_sing = positive("tau-sing", v)?;
        }
        if let Some(v) = self.radius_factor {
            cfg.radius_factor = positive("radius-factor", v)?;
        }
        if let Some(v) = self.max_iter {
            if v == 0 {
                return Err(Failure::Input("--max-iter must be at least 1".into()));
            }
            cfg.solver.max_iter = v;
        }
        Ok(cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Instance file (JSON) or gallery:NAME, e.g. gallery:mpw2.
    instance: String,
    /// Polygon radius for gallery lenses.
    #[arg(long)]
    a: Option<f64>,
    /// Central mass for gallery Rhie lenses.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one instance and report zeros, counts, bound and cross-checks.
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Override the shift c ("re,im").
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        c: Option<Complex64>,
    },
    /// Count zeros along a segment or over a grid of shifts c.
    Sweep {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Segment start ("re,im").
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        from: Complex64,
        /// Segment end ("re,im").
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "2,0")]
        to: Complex64,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        /// Sweep a grid "x_min,x_max,y_min,y_max" instead of a segment.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        grid: Option<Window>,
        #[arg(long, default_value_t = 21)]
        nx: usize,
        #[arg(long, default_value_t = 21)]
        ny: usize,
    },
    /// Sample the critical curve |r'| = 1 and its caustic.
    Caustic {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Sampling window "x_min,x_max,y_min,y_max".
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
        window: Window,
        /// Grid nodes per axis.
        #[arg(long = "grid", default_value_t = 400)]
        grid_n: usize,
    },
    /// Check every invariant on seeded random instances.
    Fuzz {
        /// Numerator degrees: "a..b" (inclusive), "a,b,c" or "a".
        #[arg(long, value_parser = parse_degrees, default_value = "0..4")]
        np: Degrees,
        /// Denominator degrees, same syntax as --np.
        #[arg(long, value_parser = parse_degrees, default_value = "0..4")]
        nq: Degrees,
        /// Instances per degree pair.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Where failing seeds are written.
        #[arg(long, default_value = "fuzz-failures.json")]
        repro: PathBuf,
        /// Adds this to every bound; for exercising the failure path.
        #[arg(long, hide = true, default_value_t = 0, allow_hyphen_values = true)]
        bound_offset: i64,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected \"re,im\", got {s:?}")),
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

fn parse_window(s: &str) -> Result<Window, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x0, x1, y0, y1] => Window::new(*x0, *x1, *y0, *y1).map_err(|e| e.to_string()),
        _ => Err(format!("expected \"x_min,x_max,y_min,y_max\", got {s:?}")),
    }
}

#[derive(Clone, Debug)]
struct Degrees(Vec<usize>);

fn parse_degrees(s: &str) -> Result<Degrees, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("not a degree: {t:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Degrees((lo..=hi).collect()))
    } else {
        s.split(',').map(num).collect::<Result<_, _>>().map(Degrees)
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Invariant(String),
    Empty(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => 1,
            Self::Invariant(_) => 2,
            Self::Empty(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Invariant(m) | Self::Empty(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::EmptyWindow => Self::Empty(e.to_string()),
            other => Self::Input(other.to_string()),
        }
    }
}

struct Loaded {
    name: Option<String>,
    r: RationalFunction,
    c: Complex64,
}

fn load(args: &InstanceArgs) -> Result<Loaded, Failure> {
    if let Some(name) = args.instance.strip_prefix("gallery:") {
        let params = CatalogParams {
            a: args.a,
            epsilon: args.epsilon,
        };
        let spec = catalog(name, &params)?;
        return Ok(Loaded {
            name: Some(spec.name),
            r: spec.r,
            c: spec.c,
        });
    }
    let path = Path::new(&args.instance);
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {}", path.display(), e.to_string().to_lowercase())))?;
    let file = InstanceFile::from_json(&text)?;
    let (r, c) = file.to_instance()?;
    Ok(Loaded {
        name: file.name.clone(),
        r,
        c,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Failure::Input(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct ZeroRow {
    re: f64,
    im: f64,
    r_prime_abs: f64,
    orientation: &'static str,
    residual: f64,
}

fn cmd_solve(cli: &Cli, args: &InstanceArgs, c: Option<Complex64>) -> Result<(), Failure> {
    let cfg = cli.tolerances.pipeline()?;
    let loaded = load(args)?;
    let c = c.unwrap_or(loaded.c);
    let report = run_pipeline(loaded.name, &loaded.r, c, &cfg)?;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &report
                .zeros
                .iter()
                .map(|z| ZeroRow {
                    re: z.location[0],
                    im: z.location[1],
                    r_prime_abs: z.r_prime_abs,
                    orientation: z.orientation.label(),
                    residual: z.residual,
                })
                .collect::<Vec<_>>(),
        )?,
    };
    emit(&text, cli.out.as_deref())?;
    let violations = report.invariants.violations();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(violations.join("; ")))
    }
}

fn cmd_sweep(cli: &Cli, args: &InstanceArgs, path: SweepPath) -> Result<(), Failure> {
    let cfg = cli.tolerances.pipeline()?;
    let loaded = load(args)?;
    let rows = sweep(&loaded.r, &path, &cfg.solver)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&rows),
    };
    emit(&text, cli.out.as_deref())
}

fn cmd_caustic(cli: &Cli, args: &InstanceArgs, window: &Window, grid_n: usize) -> Result<(), Failure> {
    let loaded = load(args)?;
    let rows = caustic_scan(&loaded.r, window, grid_n)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&rows),
    };
    emit(&text, cli.out.as_deref())
}

#[derive(Serialize)]
struct Reproduction {
    n_p: usize,
    n_q: usize,
    seed: u64,
    problems: Vec<String>,
    instance: Option<InstanceFile>,
}

#[derive(Serialize)]
struct FuzzRow {
    n_p: usize,
    n_q: usize,
    seed: u64,
    n: Option<usize>,
    n_plus: Option<usize>,
    n_minus: Option<usize>,
    n_zero: Option<usize>,
    bound: Option<usize>,
    violations: String,
    error: Option<String>,
}

struct FuzzArgs<'a> {
    np: &'a [usize],
    nq: &'a [usize],
    count: usize,
    seed: u64,
    repro: &'a Path,
    bound_offset: i64,
}

fn cmd_fuzz(cli: &Cli, args: FuzzArgs<'_>) -> Result<(), Failure> {
    let pipeline = cli.tolerances.pipeline()?;
    let pairs: Vec<(usize, usize)> = args
        .np
        .iter()
        .flat_map(|&p| args.nq.iter().map(move |&q| (p, q)))
        .filter(|(p, q)| (*p).max(*q) >= 2)
        .collect();
    if pairs.is_empty() || args.count == 0 {
        return Err(Failure::Empty("no degree pair with max(n_p, n_q) >= 2 to test".into()));
    }
    let cfg = FuzzConfig {
        pairs,
        count: args.count,
        seed: args.seed,
        pipeline,
    };
    let offset = args.bound_offset;
    let bound = move |p: usize, q: usize| {
        max_zero_bound(p, q).map(|b| (b as i64 + offset).max(0) as usize)
    };
    let (summary, outcomes) = fuzz_campaign_with_bound(&cfg, &bound)?;

    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&summary),
        Format::Csv => to_csv(
            &outcomes
                .iter()
                .map(|o| {
                    let report = o.report.as_ref();
                    FuzzRow {
                        n_p: o.n_p,
                        n_q: o.n_q,
                        seed: o.seed,
                        n: report.map(|r| r.counts.total),
                        n_plus: report.map(|r| r.counts.n_plus),
                        n_minus: report.map(|r| r.counts.n_minus),
                        n_zero: report.map(|r| r.counts.n_zero),
                        bound: report.map(|r| r.bound),
                        violations: report.map(|r| r.invariants.violations().join("; ")).unwrap_or_default(),
                        error: o.error.clone(),
                    }
                })
                .collect::<Vec<_>>(),
        )?,
    };
    emit(&text, cli.out.as_deref())?;

    if summary.violations.is_empty() && summary.errors.is_empty() {
        return Ok(());
    }
    let repro: Vec<Reproduction> = summary
        .violations
        .iter()
        .chain(&summary.errors)
        .map(|f| Reproduction {
            n_p: f.n_p,
            n_q: f.n_q,
            seed: f.seed,
            problems: f.problems.clone(),
            instance: random_instance(f.n_p, f.n_q, f.seed).ok().map(|s| InstanceFile::from(&s)),
        })
        .collect();
    fs::write(args.repro, to_json(&repro))
        .map_err(|e| Failure::Input(format!("{}: {e}", args.repro.display())))?;
    if summary.violations.is_empty() {
        Err(Failure::Input(format!(
            "{} instances failed to solve; seeds written to {}",
            summary.errors.len(),
            args.repro.display()
        )))
    } else {
        Err(Failure::Invariant(format!(
            "{} invariant violations; seeds written to {}",
            summary.violations.len(),
            args.repro.display()
        )))
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Input(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Solve { instance, c } => cmd_solve(cli, instance, *c),
        Command::Sweep {
            instance,
            from,
            to,
            samples,
            grid,
            nx,
            ny,
        } => {
            let path = match grid {
                Some(w) => SweepPath::Grid {
                    lower: Complex64::new(w.x_min, w.y_min),
                    upper: Complex64::new(w.x_max, w.y_max),
                    nx: *nx,
                    ny: *ny,
                },
                None => SweepPath::Segment {
                    start: *from,
                    end: *to,
                    samples: *samples,
                },
            };
            cmd_sweep(cli, instance, path)
        }
        Command::Caustic {
            instance,
            window,
            grid_n,
        } => cmd_caustic(cli, instance, window, *grid_n),
        Command::Fuzz {
            np,
            nq,
            count,
            repro,
            bound_offset,
        } => cmd_fuzz(
            cli,
            FuzzArgs {
                np: &np.0,
                nq: &nq.0,
                count: *count,
                seed: cli.seed,
                repro,
                bound_offset: *bound_offset,
            },
        ),
    }
}

fn main() -> ExitCode {
    // Usage errors share exit code 1 with other input errors; clap would use 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("harmonic-zeros: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
