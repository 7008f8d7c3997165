//! Command-line front end. Exit codes: 0 success, 10/20 all TRUE / some
//! FALSE for `solve`, 1 usage, 2 unreadable or malformed input, 3 engine
//! cannot handle the instance.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qxor::exp::{
    compare, read_sweep_csv, read_theory_csv, render_svg, run_sweep, with_threads,
    write_comparison_csv, write_sweep_csv, write_theory_csv, Engine, MMode, Property, Series,
    SweepConfig,
};
use qxor::theory::{tabulate, CurveId, DensityGrid};
use qxor::{derive_seed, generate, Error, GenConfig, QxorInstance};

#[derive(Parser)]
#[command(name = "qxor", version, about = "Random quantified XOR formulas")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate random instances.
    Gen(GenArgs),
    /// Decide instance files.
    Solve(SolveArgs),
    /// Estimate a property's probability along a density grid.
    Sweep(SweepArgs),
    /// Tabulate a limiting curve.
    Theory(TheoryArgs),
    /// Juxtapose a sweep with a theory curve.
    Compare(CompareArgs),
    /// Draw sweep and theory CSV files as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Number of clauses.
    #[arg(long = "L")]
    clauses: usize,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    e: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory, or `-` for standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `-` writes a single instance to standard output.
    #[arg(value_name = "DEST")]
    dest: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value = "auto")]
    engine: Engine,
    #[arg(long, default_value = "qxor")]
    property: Property,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.05)]
    c_from: f64,
    #[arg(long, default_value_t = 1.0)]
    c_to: f64,
    #[arg(long, default_value_t = 0.05)]
    c_step: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<DensityGrid, Error> {
        DensityGrid::new(self.c_from, self.c_to, self.c_step)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "qxor")]
    property: Property,
    #[arg(long, default_value_t = 1)]
    a: usize,
    #[arg(long, default_value_t = 2)]
    e: usize,
    #[arg(long)]
    n: usize,
    /// eq-n, const=K or ratio=R.
    #[arg(long, default_value = "eq-n")]
    m_mode: MMode,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "auto")]
    engine: Engine,
    /// Report all three properties on shared instances.
    #[arg(long)]
    matched: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CurveName {
    H0,
    H1,
    Hm,
    Hinf,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long, value_enum)]
    curve: CurveName,
    /// Universal count for `hm`.
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    sweep: PathBuf,
    #[arg(long)]
    theory: PathBuf,
    /// Which property to take from a matched sweep.
    #[arg(long)]
    property: Option<Property>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long = "in", required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Input(String),
    Capability(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::Capability(_) => Failure::Capability(e.to_string()),
            Error::Parse { .. } | Error::Io(_) | Error::Csv(_) => Failure::Input(e.to_string()),
        }
    }
}

fn input_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_failure(path, e))
}

/// Writes to `path`, or to standard output when it is absent or `-`.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let result = match path {
        Some(p) if p != Path::new("-") => fs::write(p, bytes),
        _ => io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| Failure::Input(e.to_string()))
}

fn cmd_gen(args: GenArgs) -> Result<u8, Failure> {
    let target = args.out.or(args.dest);
    let to_stdout = target.as_deref().is_none_or(|p| p == Path::new("-"));
    if to_stdout && args.count != 1 {
        return Err(Failure::Usage("standard output takes exactly one instance; use --out DIR".into()));
    }
    let mut instances = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let cfg = GenConfig {
            m: args.m,
            n: args.n,
            clauses: args.clauses,
            a: args.a,
            e: args.e,
            seed: derive_seed(args.seed, "gen", i as u64),
        };
        instances.push(generate(&cfg)?);
    }
    match target {
        Some(dir) if !to_stdout => {
            fs::create_dir_all(&dir).map_err(|e| input_failure(&dir, e))?;
            for (i, inst) in instances.iter().enumerate() {
                let path = dir.join(format!("inst-{i:03}.qxor"));
                fs::write(&path, inst.serialize()).map_err(|e| input_failure(&path, e))?;
            }
        }
        _ => emit(None, instances[0].serialize().as_bytes())?,
    }
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<u8, Failure> {
    let mut all_true = true;
    let mut stdout = io::stdout().lock();
    for path in &args.files {
        let text = read_input(path)?;
        let inst = QxorInstance::parse(&text).map_err(|e| input_failure(path, e))?;
        let holds = args.property.of(&args.engine.verdicts(&inst)?);
        all_true &= holds;
        let verdict = if holds { "TRUE" } else { "FALSE" };
        writeln!(stdout, "{} {verdict}", path.display()).map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(if all_true { 10 } else { 20 })
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, Failure> {
    let cfg = SweepConfig {
        property: args.property,
        a: args.a,
        e: args.e,
        n: args.n,
        m_mode: args.m_mode,
        grid: args.grid.grid()?,
        samples: args.samples,
        seed: args.seed,
        engine: args.engine,
        matched: args.matched,
    };
    let points = with_threads(args.threads, || run_sweep(&cfg))??;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &points)?;
    emit(args.out.as_deref(), &buf)?;
    Ok(0)
}

fn cmd_theory(args: TheoryArgs) -> Result<u8, Failure> {
    let id = match args.curve {
        CurveName::H0 => CurveId::H0,
        CurveName::H1 => CurveId::H1,
        CurveName::Hm if args.m == 0 => return Err(Failure::Usage("--m must be at least 1".into())),
        CurveName::Hm => CurveId::Hm(args.m),
        CurveName::Hinf => CurveId::HInf,
    };
    let curve = tabulate(id, &args.grid.grid()?)?;
    let mut buf = Vec::new();
    write_theory_csv(&mut buf, &[curve])?;
    emit(args.out.as_deref(), &buf)?;
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<u8, Failure> {
    let mut points = read_sweep_csv(read_input(&args.sweep)?.as_bytes())
        .map_err(|e| input_failure(&args.sweep, e))?;
    if let Some(p) = args.property {
        points.retain(|pt| pt.property == p);
    }
    let curves = read_theory_csv(read_input(&args.theory)?.as_bytes())
        .map_err(|e| input_failure(&args.theory, e))?;
    let curve = curves
        .first()
        .ok_or_else(|| input_failure(&args.theory, "no theory rows"))?;
    // misaligned grids are a property of the input files
    let report = compare(&points, curve).map_err(|e| Failure::Input(e.to_string()))?;
    let mut buf = Vec::new();
    write_comparison_csv(&mut buf, &report)?;
    emit(args.out.as_deref(), &buf)?;
    eprintln!(
        "max |residual| {:.4}, {} of {} intervals exclude {}",
        report.max_abs_residual,
        report.excluded_count,
        report.rows.len(),
        curve.id
    );
    Ok(0)
}

fn cmd_plot(args: PlotArgs) -> Result<u8, Failure> {
    let mut series = Vec::new();
    for path in &args.inputs {
        let text = read_input(path)?;
        let header = text.lines().next().unwrap_or("");
        if header.starts_with("c,curve,") {
            let curves = read_theory_csv(text.as_bytes()).map_err(|e| input_failure(path, e))?;
            series.extend(curves.iter().map(Series::from_curve));
        } else if header.starts_with("c,n,") {
            let points = read_sweep_csv(text.as_bytes()).map_err(|e| input_failure(path, e))?;
            series.extend(Series::from_sweep(&points));
        } else {
            return Err(input_failure(path, "neither a sweep nor a theory CSV"));
        }
    }
    let svg = render_svg(&series)?;
    emit(Some(&args.out), svg.as_bytes())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Theory(a) => cmd_theory(a),
        Cmd::Compare(a) => cmd_compare(a),
        Cmd::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Input(m) => (2, m),
                Failure::Capability(m) => (3, m),
            };
            eprintln!("qxor: {msg}");
            ExitCode::from(code)
        }
    }
}
