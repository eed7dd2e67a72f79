use clap::{Args, Parser, Subcommand, ValueEnum};
use hardylab::constants::{Form, InequalityParams, RawParams};
use hardylab::quadrature::QuadratureConfig;
use hardylab::suites::{self, Report, Suite, SuiteConfig};
use hardylab::sweep::{run_sweep, SweepParam, CSV_HEADER};
use hardylab::HardyError;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

/// Sharp constants, verification suites and sharpness sweeps for Hardy and
/// Rellich type inequalities.
#[derive(Parser)]
#[command(name = "hardylab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the sharp constant of a form with its hypothesis checklist.
    Constant {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run a verification suite and write its report.
    Verify(VerifyArgs),
    /// Evaluate a form along a one-parameter family and print CSV rows.
    Sweep(SweepArgs),
}

/// Parameters of a form. Anything left out takes the form's own default.
#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long)]
    form: String,
    #[arg(short = 'N', long = "dim")]
    n: Option<u32>,
    #[arg(short = 'p', long)]
    p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(short = 'R', long)]
    radius: Option<f64>,
    #[arg(short = 'k', long)]
    k: Option<u32>,
}

impl ParamArgs {
    fn raw(&self) -> Result<RawParams, HardyError> {
        let d = self.form.parse::<Form>()?.defaults();
        Ok(RawParams {
            n: self.n.unwrap_or(d.n),
            p: self.p.unwrap_or(d.p),
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            gamma: self.gamma.unwrap_or(d.gamma),
            radius: self.radius.unwrap_or(d.radius),
            k: self.k.unwrap_or(d.k),
            ..d
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    /// inequalities, identity, recursion, transplant, scaling, limits,
    /// variational or all.
    suite: String,
    #[arg(long, env = "HARDYLAB_SEED", default_value_t = 7)]
    seed: u64,
    /// Random profiles per corpus family.
    #[arg(long)]
    profiles: Option<usize>,
    /// Override a tolerance, e.g. `--tol identity=1e-9`. Repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// `el` restricts the variational suite to the Euler-Lagrange sweep.
    #[arg(long)]
    form: Option<String>,
    /// Exponent of the Euler-Lagrange potential.
    #[arg(long)]
    gamma: Option<f64>,
    /// Dimension of the Euler-Lagrange problem.
    #[arg(short = 'N', long = "dim")]
    n: Option<u32>,
    /// Elements of the variational meshes.
    #[arg(long)]
    mesh_n: Option<usize>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// a (boundary exponent), b (origin exponent) or gamma.
    #[arg(long)]
    param: String,
    /// Comma separated grid.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Cutoff width of the test functions.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Exit codes: 0 all pass, 1 a check failed, 2 inadmissible input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::Inadmissible { .. } | HardyError::Invalid(_) | HardyError::Domain { .. } | HardyError::Unsupported(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Constant { params } => constant(&params),
        Command::Verify(args) => verify(&args),
        Command::Sweep(args) => sweep(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Write to stdout, treating a closed pipe as a normal end.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn constant(args: &ParamArgs) -> Result<(), Failure> {
    let raw = args.raw()?;
    let hyps = raw.form.hypotheses(&raw);
    let verdict = InequalityParams::new(raw);
    let mut out = String::new();
    let _ = writeln!(out, "form        {}", raw.form);
    let _ = writeln!(out, "parameters  N={} p={} α={} β={} γ={} R={} k={}", raw.n, raw.p, raw.alpha, raw.beta, raw.gamma, raw.radius, raw.k);
    match &verdict {
        Ok(p) => {
            let _ = writeln!(out, "constant    {}", p.sharp_constant());
            let _ = writeln!(out, "admissible  yes");
        }
        Err(_) => {
            let _ = writeln!(out, "constant    -");
            let _ = writeln!(out, "admissible  no");
        }
    }
    let _ = writeln!(out, "hypotheses");
    for h in &hyps {
        let _ = writeln!(out, "  [{}] {}", if h.holds { "x" } else { " " }, h.text);
    }
    emit(&out);
    verdict.map(|_| ()).map_err(Failure::from)
}

fn suite_config(args: &VerifyArgs) -> Result<SuiteConfig, Failure> {
    let mut cfg = SuiteConfig { seed: args.seed, ..SuiteConfig::default() };
    if let Some(n) = args.profiles {
        cfg.profiles = n;
    }
    if !args.tolerances.is_empty() {
        let mut tol = serde_json::to_value(cfg.tolerances).expect("tolerances serialize");
        for spec in &args.tolerances {
            let (name, value) = spec.split_once('=').ok_or_else(|| Failure::Input(format!("expected NAME=VALUE, got `{spec}`")))?;
            let value: f64 = value.trim().parse().map_err(|_| Failure::Input(format!("tolerance `{name}` is not a number")))?;
            let slot = tol.get_mut(name.trim()).ok_or_else(|| Failure::Input(format!("unknown tolerance `{name}`")))?;
            *slot = value.into();
        }
        cfg.tolerances = serde_json::from_value(tol).map_err(|e| Failure::Input(e.to_string()))?;
    }
    let v = &mut cfg.variational;
    match args.form.as_deref() {
        None => {}
        Some("el") => v.el_only = true,
        Some(f) => return Err(Failure::Input(format!("unknown variational form `{f}` (el)"))),
    }
    if let Some(g) = args.gamma {
        v.el_gamma = g;
    }
    if let Some(n) = args.n {
        v.el_n = n;
    }
    if let Some(m) = args.mesh_n {
        v.mesh_n = m;
        v.el_mesh_n = m;
    }
    if v.el_gamma.is_nan() || v.el_gamma <= 0.0 {
        return Err(Failure::Input("el: γ > 0 required".into()));
    }
    if v.el_gamma > v.el_n as f64 - 2.0 {
        return Err(Failure::Input("el: γ ≤ N − 2 required".into()));
    }
    Ok(cfg)
}

fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let cfg = suite_config(args)?;
    let report = suites::run(suite, &cfg);
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => emit(&text),
    }
    eprint!("{}", summary(&report));
    if report.passed() {
        return Ok(());
    }
    let failing: Vec<String> = report.failures().map(|c| serde_json::to_string(c).expect("cases serialize")).collect();
    Err(Failure::Check(format!("{} failing case(s):\n{}", failing.len(), failing.join("\n"))))
}

fn summary(report: &Report) -> String {
    let s = &report.summary;
    let mut out = format!("{}: {}/{} passed (seed {})\n", report.suite, s.passed, s.total, report.seed);
    for note in &s.notes {
        let _ = writeln!(out, "note: {note}");
    }
    // the Euler-Lagrange sweep doubles as a λ₁ table
    for case in &report.cases {
        if let Some(sweep) = case.verdict.result.get("sweep").and_then(|s| s.as_array()) {
            let _ = writeln!(out, "{}: bound {}", case.key, case.verdict.result["bound"]);
            let _ = writeln!(out, "  epsilon      lambda1           concentration");
            for row in sweep {
                let f = |k: &str| row[k].as_f64().unwrap_or(f64::NAN);
                let _ = writeln!(out, "  {:<12e} {:<17.12} {:.6}", f("epsilon"), f("lambda"), f("concentration"));
            }
            let _ = writeln!(out, "  extrapolated {:.12}", case.verdict.result["extrapolated"].as_f64().unwrap_or(f64::NAN));
        }
    }
    out
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let base = args.params.raw()?;
    let param: SweepParam = args.param.parse()?;
    let values = args
        .values
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Failure::Input(format!("`{s}` is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = run_sweep(&base, param, &values, args.delta, &QuadratureConfig::default())?;
    let text = match args.format {
        Format::Csv => rows.iter().fold(format!("{CSV_HEADER}\n"), |mut s, r| {
            s.push_str(&r.csv());
            s.push('\n');
            s
        }),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => emit(&text),
    }
    Ok(())
}
