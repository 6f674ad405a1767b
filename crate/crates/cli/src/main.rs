mod commands;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use report::RunReport;
use stablepairs::recognize::{Algorithm, Limits};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "smp", version, about = "Graphs of stably matchable pairs")]
pub struct Cli {
    /// Seed for randomized generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search states (path search) or states per tree node (DP).
    #[arg(long, global = true)]
    pub max_states: Option<usize>,
    /// Perfect or stable matchings enumerated.
    #[arg(long, global = true)]
    pub max_matchings: Option<usize>,
    /// Print only the one-line JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Alg {
    Oracle,
    Path,
    Dp,
}

impl From<Alg> for Algorithm {
    fn from(a: Alg) -> Self {
        match a {
            Alg::Oracle => Algorithm::Oracle,
            Alg::Path => Algorithm::Path,
            Alg::Dp => Algorithm::Dp,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Proposers {
    Students,
    Residencies,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether a graph is a graph of stably matchable pairs.
    /// Exit 0 when it is, 1 when it is not, 2 on errors or exhausted limits.
    Recognize {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "path")]
        algorithm: Alg,
        /// Where to write a witness rotation system.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Write graphs and rotation systems for a family.
    ///
    /// grid <a> <b> | product <g.bg> <g.rsys> <h.bg> <h.rsys> | lattice <p.poset>
    /// | regular <g.bg> | regularize <g.bg> | nae3sat <f.nae> | nae3sat <vars> <clauses>
    /// | all-small <max-edges>
    Generate {
        family: String,
        params: Vec<String>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Report on an instance (.smi) or a graph (any other extension).
    Analyze { input: PathBuf },
    /// Check a rotation system against a graph. Exit 0 when valid, 1 when not.
    Validate { graph: PathBuf, system: PathBuf },
    /// Gale-Shapley matching of an instance.
    Gs {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "students")]
        proposers: Proposers,
    },
    /// All stable matchings of an instance and its rotation poset.
    Lattice { instance: PathBuf },
    /// Run recognizers over graph files and tabulate states and time.
    Bench {
        graphs: Vec<PathBuf>,
        /// Comma-separated algorithms.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "path,dp")]
        algorithms: Vec<Alg>,
    },
}

impl Cli {
    pub fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(s) = self.max_states {
            l.max_states = s;
        }
        if let Some(m) = self.max_matchings {
            l.max_matchings = m;
        }
        l
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut rep = RunReport::new(commands::name(&cli.command));
    if let Err(e) = commands::run(&cli, &mut rep) {
        rep.fail(&e);
    }
    rep.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if cli.json {
        println!("{}", rep.json());
    } else {
        for l in &rep.text {
            println!("{l}");
        }
        eprintln!("{}", rep.json());
    }
    ExitCode::from(rep.exit_code as u8)
}
