use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lexgraph::l0::{outlier_approx, outlier_exact};
use lexgraph::solver::{
    comp_fast_lex_min, comp_inf_min, comp_lex_min, directed_lex_min, verify_max_min, Violation,
};
use lexgraph::synth::{cube_knn, gauss1d, random_regular, SynthInstance};
use lexgraph::{Error, SolveOptions, SolverResult};
use lexgraph_cli::{format_value, EdgeList, ParseError};

const EXIT_ILL_POSED: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "lexgraph",
    version,
    about = "Lipschitz extensions of vertex labels on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assignment minimizing the largest edge gradient.
    Infmin(SolveArgs),
    /// Lex-minimal assignment, one steepest path at a time.
    Lexmin(SolveArgs),
    /// Lex-minimal assignment via recursive pressure thresholds.
    Fastlexmin(SolveArgs),
    /// Lex-minimal positive gradients on a directed graph.
    Dirlexmin(SolveArgs),
    /// Drop up to k labels to minimize the Lipschitz constant.
    L0(L0Args),
    /// Check that an assignment is the lex-minimizer.
    Verify(VerifyArgs),
    /// Write a synthetic instance.
    Synth(SynthArgs),
    /// Time inf-min and fast lex-min on synthetic instances (CSV on stdout).
    Bench(BenchArgs),
}

#[derive(Args)]
struct Seed {
    /// Random seed [env: LEXGRAPH_SEED, default 0].
    #[arg(long, env = "LEXGRAPH_SEED", default_value_t = 0, hide_env = true)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Edge list (`#directed` or `#undirected` header, rows `u<TAB>v<TAB>len`).
    graph: PathBuf,
    /// Labels (rows `id<TAB>value`).
    labels: PathBuf,
    #[command(flatten)]
    seed: Seed,
    /// Relative tolerance for gradient comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum L0Mode {
    Exact,
    Approx,
}

#[derive(Args)]
struct L0Args {
    graph: PathBuf,
    labels: PathBuf,
    /// Number of labels that may be dropped.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = L0Mode::Exact)]
    mode: L0Mode,
    #[command(flatten)]
    seed: Seed,
    /// Output file; removed labels and alpha go to `<out>.removed.tsv`
    /// (stdout and stderr if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    labels: PathBuf,
    /// Complete assignment (rows `id<TAB>value`).
    assignment: PathBuf,
    /// Relative tolerance of the max-min averaging check.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gauss1d,
    CubeKnn,
    RandomRegular,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of vertices (gauss1d: total over both clusters, default 200).
    #[arg(long)]
    n: Option<usize>,
    /// Number of labeled vertices (cube-knn default 100, random-regular
    /// default n/100; gauss1d always labels two).
    #[arg(long)]
    labels: Option<usize>,
    /// Dimension of the cube.
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// Neighbours per point (cube-knn) or degree (random-regular).
    #[arg(long, default_value_t = 8)]
    knn: usize,
    /// Bandwidth of the gauss1d edge lengths.
    #[arg(long, default_value_t = 0.4)]
    sigma: f64,
    #[command(flatten)]
    seed: Seed,
    /// Writes `<prefix>.edges.tsv`, `<prefix>.labels.tsv` and, when known,
    /// `<prefix>.truth.tsv`.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Kind::RandomRegular)]
    kind: Kind,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 30_000, 100_000])]
    sizes: Vec<usize>,
    #[command(flatten)]
    seed: Seed,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(graph: &Path, labels: &Path) -> Result<(EdgeList, lexgraph::PartialAssignment)> {
    let el =
        EdgeList::parse(&read(graph)?).with_context(|| format!("parsing {}", graph.display()))?;
    let v0 = el
        .parse_labels(&read(labels)?)
        .with_context(|| format!("parsing {}", labels.display()))?;
    Ok((el, v0))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report(res: &SolverResult, start: Instant) {
    eprintln!(
        "inf_norm={} iterations={} wall={:.3}s",
        format_value(res.inf_norm),
        res.iterations,
        start.elapsed().as_secs_f64()
    );
}

enum Solver {
    Inf,
    Lex,
    FastLex,
    Directed,
}

fn cmd_solve(args: SolveArgs, solver: Solver) -> Result<ExitCode> {
    let (el, v0) = load(&args.graph, &args.labels)?;
    let opts = SolveOptions::new(args.seed.seed).with_tol(args.tol);
    let start = Instant::now();
    let res = match solver {
        Solver::Inf => comp_inf_min(&el.graph, &v0, &opts)?,
        Solver::Lex => comp_lex_min(&el.graph, &v0, &opts)?,
        Solver::FastLex => comp_fast_lex_min(&el.graph, &v0, &opts)?,
        Solver::Directed => {
            let d = directed_lex_min(&el.graph, &v0, &opts)?;
            eprintln!(
                "ambiguous={} violations={}",
                d.ambiguous.len(),
                d.violations.len()
            );
            d.result
        }
    };
    report(&res, start);
    let mut w = output(args.out.as_deref())?;
    el.write_assignment(&mut w, &res.assignment)?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_l0(args: L0Args) -> Result<ExitCode> {
    let (el, v0) = load(&args.graph, &args.labels)?;
    let opts = SolveOptions::new(args.seed.seed);
    let start = Instant::now();
    let res = match args.mode {
        L0Mode::Exact => outlier_exact(&el.graph, &v0, args.k, &opts)?,
        L0Mode::Approx => outlier_approx(&el.graph, &v0, args.k, &opts)?,
    };
    report(&res.result, start);
    let mut w = output(args.out.as_deref())?;
    el.write_assignment(&mut w, &res.result.assignment)?;
    w.flush()?;
    let mut side = String::new();
    side.push_str(&format!("#alpha\t{}\n", format_value(res.alpha)));
    for &t in &res.removed {
        side.push_str(&format!(
            "{}\t{}\n",
            el.ids[t],
            format_value(v0.get(t).expect("terminal"))
        ));
    }
    match &args.out {
        Some(p) => {
            let mut name = p.clone().into_os_string();
            name.push(".removed.tsv");
            fs::write(&name, side)
                .with_context(|| format!("writing {}", name.to_string_lossy()))?;
        }
        None => eprint!("{side}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (el, v0) = load(&args.graph, &args.labels)?;
    let v = el
        .parse_assignment(&read(&args.assignment)?)
        .with_context(|| format!("parsing {}", args.assignment.display()))?;
    let bad = verify_max_min(&el.graph, &v0, &v, args.tol)?;
    if bad.is_empty() {
        eprintln!("ok: {} vertices", el.graph.n());
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = io::stdout().lock();
    for violation in &bad {
        match violation {
            Violation::Label {
                vertex,
                expected,
                actual,
            } => writeln!(
                out,
                "{}\tlabel\texpected {}\tfound {}",
                el.ids[*vertex],
                format_value(*expected),
                format_value(*actual)
            )?,
            Violation::Averaging {
                vertex,
                max_gradient,
                min_gradient,
            } => writeln!(
                out,
                "{}\taveraging\tmax {}\tmin {}",
                el.ids[*vertex],
                format_value(*max_gradient),
                format_value(*min_gradient)
            )?,
        }
    }
    eprintln!("{} violations", bad.len());
    Ok(ExitCode::from(EXIT_VERIFY))
}

fn synthesize(
    kind: Kind,
    n: Option<usize>,
    labels: Option<usize>,
    args: &SynthArgs,
) -> Result<SynthInstance> {
    let seed = args.seed.seed;
    Ok(match kind {
        Kind::Gauss1d => {
            if labels.is_some() {
                bail!("gauss1d always labels one sample per cluster; drop --labels");
            }
            let n = n.unwrap_or(200);
            if n % 2 == 1 || n == 0 {
                bail!("gauss1d needs an even, positive --n, got {n}");
            }
            gauss1d(n / 2, args.sigma, seed)?
        }
        Kind::CubeKnn => {
            let n = n.context("cube-knn needs --n")?;
            cube_knn(n, args.dim, args.knn, labels.unwrap_or(100), seed)?
        }
        Kind::RandomRegular => {
            let n = n.context("random-regular needs --n")?;
            random_regular(n, args.knn, labels.unwrap_or((n / 100).max(1)), seed)?
        }
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_synth(args: SynthArgs) -> Result<ExitCode> {
    let inst = synthesize(args.kind, args.n, args.labels, &args)?;
    let el = EdgeList::numbered(inst.graph);
    let mut w = create(&with_suffix(&args.out_prefix, ".edges.tsv"))?;
    el.write_edges(&mut w)?;
    w.flush()?;
    let mut w = create(&with_suffix(&args.out_prefix, ".labels.tsv"))?;
    el.write_labels(&mut w, &inst.labels)?;
    w.flush()?;
    if let Some(truth) = &inst.truth {
        let mut w = create(&with_suffix(&args.out_prefix, ".truth.tsv"))?;
        el.write_assignment(&mut w, truth)?;
        w.flush()?;
    }
    eprintln!(
        "n={} m={} labels={}",
        el.graph.n(),
        el.graph.m(),
        inst.labels.num_terminals()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    if args.repeats == 0 {
        bail!("--repeats must be positive");
    }
    let synth = SynthArgs {
        kind: args.kind,
        n: None,
        labels: None,
        dim: 4,
        knn: match args.kind {
            Kind::RandomRegular => 4,
            _ => 8,
        },
        sigma: 0.4,
        seed: Seed {
            seed: args.seed.seed,
        },
        out_prefix: PathBuf::new(),
    };
    let mut out = io::stdout().lock();
    writeln!(out, "algorithm,n,m,repeat,seconds")?;
    for &n in &args.sizes {
        let labels = match args.kind {
            Kind::Gauss1d => None,
            _ => Some((n / 100).max(2)),
        };
        let inst = synthesize(args.kind, Some(n), labels, &synth)?;
        let opts = SolveOptions::new(args.seed.seed);
        for repeat in 0..args.repeats {
            for (name, solve) in [
                ("infmin", comp_inf_min as fn(_, _, _) -> _),
                ("fastlexmin", comp_fast_lex_min),
            ] {
                let start = Instant::now();
                solve(&inst.graph, &inst.labels, &opts)?;
                let secs = start.elapsed().as_secs_f64();
                writeln!(
                    out,
                    "{name},{},{},{repeat},{secs:.6}",
                    inst.graph.n(),
                    inst.graph.m()
                )?;
                out.flush()?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Infmin(a) => cmd_solve(a, Solver::Inf),
        Command::Lexmin(a) => cmd_solve(a, Solver::Lex),
        Command::Fastlexmin(a) => cmd_solve(a, Solver::FastLex),
        Command::Dirlexmin(a) => cmd_solve(a, Solver::Directed),
        Command::L0(a) => cmd_l0(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ParseError>().is_some() {
                ExitCode::from(EXIT_PARSE)
            } else if let Some(Error::NotWellPosed(_)) = err.downcast_ref::<Error>() {
                ExitCode::from(EXIT_ILL_POSED)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
