use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tau_trigger::cli::{execute, Command, RunConfig};
use tau_trigger::select::Addressing;
use tau_trigger::{Architecture, DEFAULT_BUFFERING_CYCLES};

#[derive(Parser)]
#[command(
    name = "tau-trigger",
    version,
    about = "Tau-trigger front-end simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate deterministic synthetic events.
    Gen(Opts),
    /// Run one step-1 architecture and check it against the oracle.
    Run(Opts),
    /// Run every architecture, compare seeds and latencies.
    Compare(Opts),
    /// Run step 2 candidate selection and report selector fan-in.
    Select(Opts),
}

#[derive(Args)]
struct Opts {
    #[arg(long, default_value_t = 100)]
    events: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[arg(long, default_value = "spatial")]
    arch: Architecture,
    #[arg(long, default_value = "parity")]
    addressing: Addressing,
    #[arg(long, default_value_t = DEFAULT_BUFFERING_CYCLES)]
    buffering_cycles: u32,
    #[arg(long)]
    reference_s: Option<u32>,
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, o) = match cli.command {
        Cmd::Gen(o) => (Command::Gen, o),
        Cmd::Run(o) => (Command::Run, o),
        Cmd::Compare(o) => (Command::Compare, o),
        Cmd::Select(o) => (Command::Select, o),
    };
    let cfg = RunConfig {
        command,
        input: o.input,
        output: o.output,
        arch: o.arch,
        addressing: o.addressing,
        events: o.events,
        seed: o.seed,
        buffering_cycles: o.buffering_cycles,
        reference_s: o.reference_s,
        verify: o.verify,
    };
    match execute(&cfg) {
        Ok(out) => {
            print!("{}", out.text);
            for f in &out.failures {
                eprintln!("FAIL: {f}");
            }
            if out.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
