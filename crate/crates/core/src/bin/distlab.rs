use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distlab::graph::{Graph, Structured};
use distlab::harness::{
    bench, encode_graph, generate, lowerbound, verify, write_bench_csv, BenchSpec, EncodeRequest,
    GenKind, HarnessError, VerifyMode,
};
use distlab::label::{LabelSet, SchemeTag};

#[derive(Parser)]
#[command(name = "distlab", version, about = "Distance labeling schemes: generate, encode, verify, bench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
    /// Encode a graph into a label file.
    Encode(EncodeArgs),
    /// Check a label file against BFS distances.
    Verify(VerifyArgs),
    /// Sweep G(n, m) graphs and write label sizes as CSV.
    Bench(BenchArgs),
    /// Reconstruct lower-bound family adjacency bits from full-scheme labels.
    Lowerbound(LowerboundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gnm,
    Path,
    Cycle,
    Grid,
    Star,
    Lowerbound,
}

#[derive(Args)]
struct GenArgs {
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Grid width (`--n` is the height).
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; standard output when omitted. The lower-bound sidecar goes
    /// to `<out>.family`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    scheme: SchemeTag,
    /// Threshold D for warmup, medium and full.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    /// Additive-scheme D override.
    #[arg(long)]
    dd: Option<u32>,
    /// Degree bound for bdeg; defaults to the maximum degree.
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    resample_cap: Option<u32>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// `exhaustive` or `sampled:<count>`.
    #[arg(long, default_value = "exhaustive")]
    mode: VerifyMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write violations as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    scheme: SchemeTag,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Edges per node: m = round(m_factor * n).
    #[arg(long, default_value_t = 2.0)]
    m_factor: f64,
    #[arg(long, value_delimiter = ',')]
    d: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    dd: Option<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LowerboundArgs {
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 8)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

fn need<T>(x: Option<T>, flag: &str) -> Result<T, HarnessError> {
    x.ok_or_else(|| HarnessError::Usage(format!("missing --{flag}")))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, HarnessError> {
    let file = fs::File::open(path)?;
    Ok(Graph::read_edge_list(io::BufReader::new(file))?)
}

fn cmd_gen(a: GenArgs) -> Result<u8, HarnessError> {
    let kind = match a.kind {
        Kind::Gnm => GenKind::Gnm { n: need(a.n, "n")?, m: need(a.m, "m")? },
        Kind::Path => GenKind::Structured(Structured::Path(need(a.n, "n")?)),
        Kind::Cycle => GenKind::Structured(Structured::Cycle(need(a.n, "n")?)),
        Kind::Grid => {
            let rows = need(a.n, "n")?;
            GenKind::Structured(Structured::Grid(rows, a.cols.unwrap_or(rows)))
        }
        Kind::Star => GenKind::Structured(Structured::Star(need(a.n, "n")?)),
        Kind::Lowerbound => GenKind::LowerBound { k: need(a.k, "k")?, d: need(a.d, "d")? },
    };
    let out = generate(kind, a.seed)?;
    write_out(a.out.as_deref(), &out.graph.to_edge_list())?;
    if let Some(side) = out.sidecar {
        match &a.out {
            Some(p) => {
                let mut name = p.clone().into_os_string();
                name.push(".family");
                fs::write(name, side)?;
            }
            None => eprint!("{side}"),
        }
    }
    Ok(0)
}

fn cmd_encode(a: EncodeArgs) -> Result<u8, HarnessError> {
    let g = read_graph(&a.graph)?;
    let mut req = EncodeRequest::new(a.scheme, a.seed);
    req.threshold = if a.scheme == SchemeTag::Additive { a.dd } else { a.d };
    req.r = a.r;
    req.t = a.t;
    req.delta = a.delta;
    if let Some(cap) = a.resample_cap {
        req.resample_cap = cap;
    }
    let start = Instant::now();
    let labels = encode_graph(&g, &req)?;
    let secs = start.elapsed().as_secs_f64();
    fs::write(&a.out, labels.to_bytes())?;
    let s = labels.size_stats();
    println!(
        "{} labels: max {} bits, mean {:.1} bits, encode {:.3}s",
        labels.scheme.tag, s.max_bits, s.mean_bits, secs
    );
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, HarnessError> {
    let g = read_graph(&a.graph)?;
    let labels = LabelSet::from_bytes(&fs::read(&a.labels)?)?;
    let report = verify(&a.graph.display().to_string(), &g, &labels, a.mode, a.seed)?;
    print!("{report}");
    if let Some(p) = a.csv {
        let mut w = csv::Writer::from_path(p)?;
        for v in &report.violations {
            w.serialize(v)?;
        }
        w.flush()?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn cmd_bench(a: BenchArgs) -> Result<u8, HarnessError> {
    let params = if a.scheme == SchemeTag::Additive { a.r } else { a.d };
    let spec = BenchSpec {
        ns: a.n,
        m_factor: a.m_factor,
        scheme: a.scheme,
        params,
        t: a.t,
        additive_threshold: a.dd,
        seeds: a.seeds,
    };
    // Rows are complete before any output is written.
    let rows = bench(&spec)?;
    let mut buf = Vec::new();
    write_bench_csv(&rows, &mut buf)?;
    match a.out {
        Some(p) => fs::write(p, buf)?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(0)
}

fn cmd_lowerbound(a: LowerboundArgs) -> Result<u8, HarnessError> {
    let report = lowerbound(a.k, a.d, a.seed, a.trials)?;
    print!("{report}");
    Ok(if report.all_recovered() { 0 } else { 1 })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(threads) = std::env::var("DISTLAB_THREADS").ok().and_then(|s| s.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Lowerbound(a) => cmd_lowerbound(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
