use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entgraph::io::{parse_state_json, report_to_json, state_to_json};
use entgraph::selftest::{self, SelftestConfig};
use entgraph::statesynth::{general_construction, CatalogState, SynthesisParams};
use entgraph::{
    emit_dot, parse_graph, realized_graph, synthesize, verify_realization, AnalysisError,
    AnalysisReport, EntangledGraph, IoError, LoadedState, StateError, StateRef, StateVector,
};

#[derive(Parser)]
#[command(name = "entgraph", version, about = "Build and analyze pure states with prescribed entangled graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a state realizing a graph file.
    Synth {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Use the general construction with this alpha instead of the defaults.
        #[arg(long)]
        alpha: Option<f64>,
        /// Gamma for the general construction; defaults to alpha * sqrt(2 / k).
        #[arg(long, requires = "alpha")]
        gamma: Option<f64>,
    },
    /// Print the concurrence and partial-transpose table of a state file.
    Analyze {
        #[arg(short, long)]
        state: PathBuf,
        /// Write the realized graph in DOT format, edges labeled by concurrence.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the analysis report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that a state realizes a graph.
    Verify {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        state: PathBuf,
    },
    /// Write a named catalog state.
    Catalog {
        /// One of: zero, bell, w, ghz, chain3, bells3, star, dur-star, star4.
        name: String,
        /// Qubit count, for the families that take one.
        n: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Entangled pair for `bell`, as `i,j`.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// Run the reproduction checks.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 2002)]
        seed: u64,
        /// Directory for the first failing graph and state.
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_MISMATCH,
            message: message.into(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match e {
            AnalysisError::BadPair { .. }
            | AnalysisError::InvalidDensity(_)
            | AnalysisError::QubitMismatch { .. }
            | AnalysisError::Graph(_)
            | AnalysisError::WrongPairKind { .. }
            | AnalysisError::StarTooSmall(_)
            | AnalysisError::AlphaRange(_) => EXIT_INPUT,
            _ => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        match e {
            StateError::NotRealized { .. } => Failure::mismatch(e.to_string()),
            StateError::Analysis(inner) => (*inner).into(),
            other => Failure::input(other.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::input(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<EntangledGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path) -> Result<LoadedState, Failure> {
    parse_state_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_table(report: &AnalysisReport) {
    println!("   i   j   concurrence        pt_min  verdict");
    for p in report.pairs() {
        let verdict = if p.is_entangled { "entangled" } else { "separable" };
        println!(
            "{:>4}{:>4}  {:>12.6e}  {:>12.6e}  {verdict}",
            p.pair.0, p.pair.1, p.concurrence, p.pt_min_eigenvalue
        );
    }
}

fn format_edges(edges: &[(usize, usize)]) -> String {
    if edges.is_empty() {
        return "none".into();
    }
    edges
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_synth(graph: &Path, out: &Path, alpha: Option<f64>, gamma: Option<f64>) -> Outcome {
    let g = load_graph(graph)?;
    let state = match alpha {
        None => {
            let synth = synthesize(&g)?;
            println!("construction: {:?}", synth.construction);
            synth.state
        }
        Some(alpha) => {
            let k = g.edge_count();
            if k == 0 {
                return Err(Failure::input("--alpha needs a graph with at least one edge"));
            }
            let gamma = gamma.unwrap_or(alpha * (2.0 / k as f64).sqrt());
            let p = SynthesisParams::from_alpha_gamma(alpha, gamma, k)?;
            println!(
                "construction: general, alpha = {}, beta = {}, gamma = {}",
                p.alpha, p.beta, p.gamma
            );
            general_construction(&g, &p)?
        }
    };
    write(out, &state_to_json(&state))?;
    let report = verify_realization(&g, &StateRef::Pure(&state))?;
    report_verdict(&report)
}

fn report_verdict(report: &AnalysisReport) -> Outcome {
    if report.matches() {
        println!("match");
        Ok(0)
    } else {
        println!("mismatch");
        println!("missing edges: {}", format_edges(&report.missing_edges()));
        println!("extra edges: {}", format_edges(&report.extra_edges()));
        Ok(EXIT_MISMATCH)
    }
}

fn cmd_analyze(state: &Path, dot: Option<&Path>, json: Option<&Path>) -> Outcome {
    let loaded = load_state(state)?;
    let report = realized_graph(&loaded.as_state_ref())?;
    print_table(&report);
    println!("realized edges: {}", format_edges(&report.realized_graph().edges().iter().copied().collect::<Vec<_>>()));
    if let Some(path) = dot {
        let labels: BTreeMap<_, _> = report
            .pairs()
            .iter()
            .filter(|p| p.is_entangled)
            .map(|p| (p.pair, p.concurrence))
            .collect();
        let dot = emit_dot(report.realized_graph(), Some(&labels))
            .map_err(|e| Failure::input(e.to_string()))?;
        write(path, &dot)?;
    }
    if let Some(path) = json {
        write(path, &report_to_json(&report))?;
    }
    Ok(0)
}

fn cmd_verify(graph: &Path, state: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let loaded = load_state(state)?;
    let report = verify_realization(&g, &loaded.as_state_ref())?;
    report_verdict(&report)
}

struct CatalogArgs {
    n: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    pair: Option<(usize, usize)>,
}

fn catalog_entry(name: &str, a: &CatalogArgs) -> Result<CatalogState, Failure> {
    let need_n = || a.n.ok_or_else(|| Failure::input(format!("catalog state {name} needs a qubit count")));
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| Failure::input(format!("catalog state {name} needs --{flag}")))
    };
    Ok(match name {
        "zero" => CatalogState::SeparableZero { n: need_n()? },
        "bell" => {
            let (i, j) = a.pair.unwrap_or((1, 2));
            CatalogState::BellPair { n: need_n()?, i, j }
        }
        "w" => CatalogState::W { n: need_n()? },
        "ghz" => CatalogState::Ghz { n: need_n()? },
        "chain3" => CatalogState::Chain3 {
            alpha: need(a.alpha, "alpha")?,
            beta: need(a.beta, "beta")?,
            gamma: need(a.gamma, "gamma")?,
        },
        "bells3" => CatalogState::SuperposedBells3 {
            alpha: need(a.alpha, "alpha")?,
        },
        "star" => CatalogState::Star {
            n: need_n()?,
            alpha: need(a.alpha, "alpha")?,
        },
        "dur-star" => CatalogState::DurStar { n: need_n()? },
        "star4" => CatalogState::Star4,
        other => {
            return Err(Failure::input(format!(
                "unknown catalog state {other:?}; expected one of {}",
                CatalogState::NAMES.join(", ")
            )))
        }
    })
}

fn cmd_catalog(name: &str, args: &CatalogArgs, out: &Path) -> Outcome {
    let state: StateVector = catalog_entry(name, args)?.build()?;
    write(out, &state_to_json(&state))?;
    println!("wrote {} ({} qubits)", out.display(), state.n_qubits());
    Ok(0)
}

fn cmd_selftest(cfg: &SelftestConfig, out: &Path) -> Outcome {
    let report = selftest::run(cfg).map_err(|e| Failure::input(e.to_string()))?;
    print!("{}", report.render());
    if report.all_passed() {
        println!("all criteria passed");
        return Ok(0);
    }
    if let Some(f) = &report.first_failure {
        println!("first failure (criterion {}): {}", f.criterion, f.description);
        if let Some(g) = &f.graph {
            let path = out.join("selftest_failure.graph");
            write(&path, &g.serialize())?;
            println!("wrote {}", path.display());
        }
        if let Some(s) = &f.state {
            let path = out.join("selftest_failure.json");
            write(&path, &state_to_json(s))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(EXIT_MISMATCH)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Synth {
            graph,
            out,
            alpha,
            gamma,
        } => cmd_synth(&graph, &out, alpha, gamma),
        Command::Analyze { state, dot, json } => cmd_analyze(&state, dot.as_deref(), json.as_deref()),
        Command::Verify { graph, state } => cmd_verify(&graph, &state),
        Command::Catalog {
            name,
            n,
            out,
            alpha,
            beta,
            gamma,
            pair,
        } => cmd_catalog(
            &name,
            &CatalogArgs {
                n,
                alpha,
                beta,
                gamma,
                pair,
            },
            &out,
        ),
        Command::Selftest {
            max_n,
            samples,
            seed,
            out,
        } => cmd_selftest(&SelftestConfig { max_n, samples, seed }, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
