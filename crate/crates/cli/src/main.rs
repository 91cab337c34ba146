use clap::{Parser, Subcommand};

use parcover_cli::run::{cmd_bench, cmd_generate, cmd_solve, BenchArgs, GenerateArgs, SolveArgs};

#[derive(Parser)]
#[command(
    name = "parcover",
    version,
    about = "Round-synchronous approximate minimum-weight covers with verifiable certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance, certify the result, and emit a result document.
    Solve(SolveArgs),
    /// Run a suite and check measured rounds and work against their bounds.
    Bench(BenchArgs),
    /// Emit a seeded instance file.
    Generate(GenerateArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Generate(args) => cmd_generate(args),
    };
    std::process::exit(code);
}
