use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hamtsp::harness::{self, CampaignConfig, WeightModel};
use hamtsp::oracle;
use hamtsp::{parse_graph, run_one_one, Graph, Status};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_HAMILTONIAN: u8 = 3;
const EXIT_UNFINISHED: u8 = 4;

#[derive(Parser)]
#[command(name = "hamtsp", version, about = "Minimum Hamilton cycles by cycle-basis deletion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the deletion solver on an edge-list file.
    Solve {
        file: PathBuf,
        /// Print the full result, trace included, as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compute the exact optimum with Held–Karp.
    Oracle { file: PathBuf },
    /// Run solver and oracle and print one comparison record.
    Compare {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate random graphs and compare solver against oracle on each.
    Mine {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = WeightModel::default())]
        weights: WeightModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
        /// Record wall-clock time per instance; reports stop being reproducible.
        #[arg(long)]
        timing: bool,
    },
}

fn load(path: &Path) -> Result<Graph, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_USAGE)
    })?;
    parse_graph(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })
}

fn status_code(status: Status) -> ExitCode {
    match status {
        Status::Ok => ExitCode::SUCCESS,
        Status::NotHamiltonianInput => ExitCode::from(EXIT_NOT_HAMILTONIAN),
        Status::NoSolution | Status::Stuck => ExitCode::from(EXIT_UNFINISHED),
    }
}

fn join(tour: &[usize]) -> String {
    tour.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn solve(file: &Path, json: bool) -> Result<ExitCode, ExitCode> {
    let g = load(file)?;
    let result = run_one_one(&g);
    if json {
        println!("{}", serde_json::to_string_pretty(&result).expect("result serializes"));
    } else {
        let status = serde_json::to_value(result.status).expect("status serializes");
        println!("status: {}", status.as_str().unwrap_or_default());
        println!("vertices: {} edges: {}", g.vertex_count(), g.edge_count());
        if let (Some(tour), Some(w)) = (&result.tour, result.weight) {
            println!("tour: {}", join(tour));
            println!("weight: {w}");
        }
        println!(
            "deletions: {} candidates tested: {} partitions tried: {}",
            result.counters.deletions, result.counters.candidates_tested, result.solutions_tried
        );
    }
    Ok(status_code(result.status))
}

fn run_oracle(file: &Path) -> Result<ExitCode, ExitCode> {
    let g = load(file)?;
    let answer = oracle::solve(&g).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_UNFINISHED)
    })?;
    match (answer.optimum_tour, answer.optimum_weight) {
        (Some(tour), Some(w)) => {
            println!("hamiltonian: true");
            println!("tour: {}", join(&tour));
            println!("weight: {w}");
            if let Some(count) = answer.tours_enumerated {
                println!("distinct tours: {count}");
            }
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            println!("hamiltonian: false");
            Ok(ExitCode::from(EXIT_NOT_HAMILTONIAN))
        }
    }
}

fn compare(file: &Path, json: bool) -> Result<ExitCode, ExitCode> {
    let g = load(file)?;
    let id = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let report = harness::compare(&g, &id, 0, false).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_UNFINISHED)
    })?;
    if json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        let show = |w: Option<hamtsp::Weight>| w.map_or("none".to_string(), |w| w.to_string());
        println!("instance: {}", report.instance_id);
        println!("status: {}", report.status);
        println!("solver weight: {}", show(report.algo_weight));
        println!("optimum weight: {}", show(report.opt_weight));
        let matched = report.matched.map_or("none".to_string(), |m| m.to_string());
        println!("match: {matched}");
    }
    Ok(match report.status.as_str() {
        "ok" => ExitCode::SUCCESS,
        "not_hamiltonian_input" => ExitCode::from(EXIT_NOT_HAMILTONIAN),
        _ => ExitCode::from(EXIT_UNFINISHED),
    })
}

fn mine(config: CampaignConfig) -> Result<ExitCode, ExitCode> {
    let outcome = harness::run_campaign(&config).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_USAGE)
    })?;
    let dumps = harness::write_campaign(&config, &outcome).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", config.report_path.display());
        ExitCode::from(EXIT_USAGE)
    })?;
    let s = &outcome.summary;
    println!(
        "generated {} graphs, {} Hamiltonian, {} ok, {} matched",
        s.generated, s.hamiltonian, s.ok, s.matches
    );
    if let Some(rate) = s.match_rate {
        println!("match rate: {rate:.4}");
    }
    for path in dumps {
        println!("counterexample: {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve { file, json } => solve(&file, json),
        Command::Oracle { file } => run_oracle(&file),
        Command::Compare { file, json } => compare(&file, json),
        Command::Mine {
            count,
            n_min,
            n_max,
            edge_prob,
            weights,
            seed,
            report,
            timing,
        } => mine(CampaignConfig {
            count,
            n_min,
            n_max,
            edge_probability: edge_prob,
            weight_model: weights,
            seed,
            report_path: report,
            timing,
        }),
    };
    outcome.unwrap_or_else(|code| code)
}
