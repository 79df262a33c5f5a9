use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cds_enum::analysis::{optimize_weights, summarize, Bound, Mode, WeightSet};
use cds_enum::engine::{enumerate_parallel, enumerate_with, EnumOptions, Stats};
use cds_enum::generators::{
    gen_base_gt, gen_gtk, gen_hs_split, gen_random_degenerate, gen_sat_gadget,
};
use cds_enum::io::{parse_cnf, parse_dimacs, parse_hypergraph, write_dimacs, Dimacs};
use cds_enum::oracle::{enumerate_bruteforce, extension_exists, DEFAULT_CAP};
use cds_enum::verify::fast_suite;
use cds_enum::{Error, Graph, VertexSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Enumerate minimal connected dominating sets.
///
/// Exit codes: 0 success, 1 internal error or failed verification, 2 bad
/// input or parameters, 3 disconnected graph, 4 size cap or search budget
/// exceeded. Solutions and generated files go to stdout, everything else to
/// stderr.
#[derive(Parser)]
#[command(name = "cds", version)]
struct Cli {
    /// Print reports as a single JSON record.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every minimal connected dominating set, one per line, 1-based.
    Enumerate(EnumArgs),
    /// Like enumerate, without listing.
    Count(EnumArgs),
    /// Decide whether some minimal connected dominating set contains U.
    Extend {
        /// DIMACS edge file, `-` for stdin.
        file: PathBuf,
        /// Comma-separated 1-based ids; defaults to the file's `c U` line.
        #[arg(short, long, value_delimiter = ',')]
        u: Option<Vec<usize>>,
        /// Search budget in candidates or search nodes.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Write a generated graph in DIMACS edge format.
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Output file instead of stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Print the branching-vector table at the given weights.
    Analyze {
        #[arg(long, default_value = "2deg")]
        mode: Mode,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Search for the weights minimizing the largest branching number.
        #[arg(long)]
        optimize: bool,
    },
    /// Run a quick version of the acceptance checks.
    Verify,
}

#[derive(Args)]
struct EnumArgs {
    /// DIMACS edge file, `-` for stdin.
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Engine::Branching)]
    engine: Engine,
    /// Run the branching engine on this many threads (output is sorted).
    #[arg(long)]
    threads: Option<usize>,
    /// Sort the listing.
    #[arg(long)]
    sort: bool,
    /// Stop with exit code 4 after this many search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Largest order accepted by the brute-force engine.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Branching,
    Bruteforce,
}

#[derive(Subcommand)]
enum Family {
    /// Lower-bound graph G_t, with X as a clique unless --no-clique.
    Gt {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        no_clique: bool,
    },
    /// k copies of G_t joined at a hub.
    Gtk {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
    },
    /// Extension gadget for a DIMACS cnf formula.
    Sat { cnf: PathBuf },
    /// Split graph of a hypergraph file.
    Hssplit {
        file: PathBuf,
        /// Comma-separated 0-based elements to mark as U.
        #[arg(short, long, value_delimiter = ',')]
        u: Vec<usize>,
    },
    /// Random connected d-degenerate graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Lib(Error),
    Input(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Disconnected) => 3,
            Failure::Lib(Error::CapExceeded { .. } | Error::BudgetExceeded { .. }) => 4,
            Failure::Lib(Error::Internal(_)) | Failure::Verify => 1,
            Failure::Lib(_) | Failure::Input(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Verify => {}
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Enumerate(args) => enumerate(args, true, cli.json),
        Command::Count(args) => enumerate(args, false, cli.json),
        Command::Extend { file, u, budget } => extend(file, u.as_deref(), *budget, cli.json),
        Command::Generate { family, output } => generate(family, output.as_deref()),
        Command::Analyze {
            mode,
            alpha,
            beta,
            delta,
            optimize,
        } => analyze(*mode, [*alpha, *beta, *delta], *optimize, cli.json),
        Command::Verify => verify(cli.json),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn read_graph(path: &Path) -> Result<Dimacs, Failure> {
    Ok(parse_dimacs(&read_input(path)?)?)
}

fn solution_line(s: &VertexSet) -> String {
    let ids: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    ids.join(" ")
}

fn report(json: bool, record: Value, text: String) {
    if json {
        eprintln!("{record}");
    } else {
        eprint!("{text}");
    }
}

fn stats_json(stats: &Stats) -> Value {
    let rules: serde_json::Map<String, Value> = stats
        .per_rule()
        .into_iter()
        .map(|(r, c)| (r.label().to_string(), json!(c)))
        .collect();
    json!({"nodes": stats.nodes, "leaves": stats.leaves, "prunes": stats.prunes, "rules": rules})
}

fn stats_text(stats: &Stats) -> String {
    let fired: Vec<String> = stats
        .per_rule()
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .map(|(r, c)| format!("{}={c}", r.label()))
        .collect();
    format!(
        "nodes: {}\nleaves: {}\nprunes: {}\nrules: {}\n",
        stats.nodes,
        stats.leaves,
        stats.prunes,
        fired.join(" ")
    )
}

fn enumerate(args: &EnumArgs, list: bool, json: bool) -> Result<(), Failure> {
    let Dimacs { graph: g, .. } = read_graph(&args.file)?;
    let start = Instant::now();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut write_err = None;
    let mut emit = |s: &VertexSet| {
        if list && write_err.is_none() {
            if let Err(e) = writeln!(out, "{}", solution_line(s)) {
                write_err = Some(e);
            }
        }
    };
    let options = EnumOptions {
        required: VertexSet::new(),
        node_budget: args.budget,
    };
    let (count, stats) = match (args.engine, args.threads) {
        (Engine::Bruteforce, _) => {
            let sols = enumerate_bruteforce(&g, args.cap)?;
            sols.iter().for_each(&mut emit);
            (sols.len() as u64, None)
        }
        (Engine::Branching, Some(threads)) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Failure::Input(format!("cannot start {threads} threads: {e}")))?;
            let (sols, stats) = pool.install(|| enumerate_parallel(&g, &options))?;
            sols.iter().for_each(&mut emit);
            (sols.len() as u64, Some(stats))
        }
        (Engine::Branching, None) if args.sort => {
            let mut sols = Vec::new();
            let outcome = enumerate_with(&g, &options, None, |s| {
                sols.push(s.clone());
                ControlFlow::Continue(())
            })?;
            sols.sort();
            sols.iter().for_each(&mut emit);
            (outcome.count, Some(outcome.stats))
        }
        (Engine::Branching, None) => {
            let outcome = enumerate_with(&g, &options, None, |s| {
                emit(s);
                ControlFlow::Continue(())
            })?;
            (outcome.count, Some(outcome.stats))
        }
    };
    if let Some(e) = write_err {
        return Err(Failure::Input(format!("cannot write output: {e}")));
    }
    out.flush()
        .map_err(|e| Failure::Input(format!("cannot write output: {e}")))?;
    let seconds = start.elapsed().as_secs_f64();
    let engine = match args.engine {
        Engine::Branching => "branching",
        Engine::Bruteforce => "bruteforce",
    };
    let mut record = json!({
        "schema": 1,
        "command": if list { "enumerate" } else { "count" },
        "engine": engine,
        "n": g.order(),
        "m": g.edge_count(),
        "count": count,
        "seconds": seconds,
    });
    let mut text = format!(
        "engine: {engine}\nvertices: {}\nedges: {}\ncount: {count}\nseconds: {seconds:.3}\n",
        g.order(),
        g.edge_count()
    );
    if let Some(stats) = &stats {
        record["stats"] = stats_json(stats);
        text.push_str(&stats_text(stats));
    }
    report(json, record, text);
    Ok(())
}

fn extend(file: &Path, u: Option<&[usize]>, budget: u64, json: bool) -> Result<(), Failure> {
    let Dimacs { graph: g, marked } = read_graph(file)?;
    let u: VertexSet = match u {
        Some(ids) => ids
            .iter()
            .map(|&id| {
                if id == 0 || id > g.order() {
                    Err(Failure::Input(format!(
                        "vertex id {id} outside 1..={}",
                        g.order()
                    )))
                } else {
                    Ok(id - 1)
                }
            })
            .collect::<Result<_, _>>()?,
        None => marked.unwrap_or_default(),
    };
    let answer = match extension_exists(&g, &u, budget) {
        Ok(w) => w,
        Err(e @ Error::BudgetExceeded { .. }) => {
            report(
                json,
                json!({"schema": 1, "command": "extend", "u": ids_json(&u), "answer": "unknown"}),
                format!("answer: unknown ({e})\n"),
            );
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(w) = &answer {
        println!("{}", solution_line(w));
    }
    let verdict = if answer.is_some() { "yes" } else { "no" };
    report(
        json,
        json!({
            "schema": 1,
            "command": "extend",
            "u": ids_json(&u),
            "answer": verdict,
            "witness": answer.as_ref().map(ids_json),
        }),
        format!("answer: {verdict}\n"),
    );
    Ok(())
}

fn ids_json(s: &VertexSet) -> Value {
    json!(s.iter().map(|v| v + 1).collect::<Vec<_>>())
}

fn generate(family: &Family, output: Option<&Path>) -> Result<(), Failure> {
    let (g, marked): (Graph, Option<VertexSet>) = match family {
        Family::Gt { t, no_clique } => (gen_base_gt(*t, !no_clique)?, None),
        Family::Gtk { t, k } => (gen_gtk(*t, *k)?.0, None),
        Family::Sat { cnf } => {
            let f = parse_cnf(&read_input(cnf)?)?;
            let (g, u) = gen_sat_gadget(&f)?;
            (g, Some(u))
        }
        Family::Hssplit { file, u } => {
            let h = parse_hypergraph(&read_input(file)?)?;
            let u: VertexSet = u.iter().copied().collect();
            let (g, marked) = gen_hs_split(h.ground, &h.sets, &u)?;
            (g, Some(marked))
        }
        Family::Random { n, d, seed } => (gen_random_degenerate(*n, *d, *seed)?, None),
    };
    let text = write_dimacs(&g, marked.as_ref());
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analyze(mode: Mode, given: [Option<f64>; 3], optimize: bool, json: bool) -> Result<(), Failure> {
    let default = match mode {
        Mode::TwoDegenerate => WeightSet::TWO_DEGENERATE,
        Mode::General => WeightSet::GENERAL,
    };
    if mode == Mode::TwoDegenerate && given[1].is_some_and(|b| b != 1.0) {
        return Err(Failure::Input(
            "beta is fixed to 1 for 2-degenerate inputs".into(),
        ));
    }
    let w = WeightSet::new(
        given[0].unwrap_or(default.alpha),
        given[1].unwrap_or(default.beta),
        given[2].unwrap_or(default.delta),
    )?;
    let summary = summarize(mode, &w);
    let mut text = format!("weights: {w}\n");
    for row in &summary.rows {
        let bound = match row.entry.bound {
            Bound::Below(b) => format!("< {b}"),
            Bound::Equal(b) => format!("= {b}"),
            Bound::None => "-".into(),
        };
        let vector: Vec<String> = row
            .entry
            .vector
            .decreases
            .iter()
            .map(|r| format!("{r:.6}"))
            .collect();
        text.push_str(&format!(
            "{:<22} ({}) {:.7} {} {}\n",
            row.entry.vector.label,
            vector.join(", "),
            row.number,
            bound,
            if row.pass { "ok" } else { "FAIL" }
        ));
    }
    text.push_str(&format!(
        "max: {:.7} ({})\nall bounds hold: {}\n",
        summary.max, summary.argmax, summary.all_pass
    ));
    let mut record = json!({"schema": 1, "command": "analyze", "summary": summary});
    if optimize {
        let best = optimize_weights(mode);
        text.push_str(&format!("optimum: {:.7} at {}\n", best.value, best.weights));
        record["optimum"] = json!(best);
    }
    report(json, record, text);
    Ok(())
}

fn verify(json: bool) -> Result<(), Failure> {
    let checks = fast_suite();
    let text: String = checks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            format!("{} {}: {verdict} {}\n", i + 1, c.name, c.detail)
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    report(
        json,
        json!({"schema": 1, "command": "verify", "checks": checks, "passed": passed}),
        text,
    );
    if passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
