use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracfield_cli::{Engine, Kind, Overrides};

#[derive(Parser)]
#[command(name = "fracfield", version, about = "Fractional vector calculus experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an operator on a grid
    Op(Common),
    /// Run the identity checks
    Verify {
        #[command(flatten)]
        common: Common,
        /// Only run identities with this name (repeatable)
        #[arg(long)]
        filter: Vec<String>,
    },
    /// Resolution sweep of one operator value
    Convergence(Common),
    /// Ball-mass decay table of a divergence measure
    Decay(Common),
    /// Time the two engines on a shared point set
    Bench(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment file (TOML, or JSON by extension)
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding [output] dir
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long, env = "FRACFIELD_JOBS")]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, common, filter) = match cli.command {
        Command::Op(c) => (Kind::Op, c, Vec::new()),
        Command::Verify { common, filter } => (Kind::Verify, common, filter),
        Command::Convergence(c) => (Kind::Convergence, c, Vec::new()),
        Command::Decay(c) => (Kind::Decay, c, Vec::new()),
        Command::Bench(c) => (Kind::Bench, c, Vec::new()),
    };
    let ov = Overrides { out: common.out, engine: common.engine, seed: common.seed, jobs: common.jobs, filter };
    match fracfield_cli::run(kind, &common.config, &ov) {
        Ok(res) => {
            for line in &res.summary {
                println!("{line}");
            }
            for p in &res.written {
                println!("wrote {}", p.display());
            }
            if res.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("fracfield: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
