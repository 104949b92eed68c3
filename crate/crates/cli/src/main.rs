use clap::{Args, Parser, Subcommand};
use lienard_cli::commands::{self, Options};
use lienard_cli::sample::SampleRegion;
use lienard_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lienard", version, about = "Limit cycles of planar quadratic systems via Liénard reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a coefficient file to a Liénard equation.
    Reduce(Common),
    /// Run every applicable cycle-existence test.
    Certify(Common),
    /// Search for limit cycles on the line y = 0.
    Cycles(Common),
    /// Build and check the closed transversal curve.
    Transversal(Common),
    /// Sample coefficient space and count certificates and cycles.
    Sample(Common),
    /// Render a cycles, transversal or trajectory artifact as SVG and CSV.
    Plot(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory for `<command>.json` (stdout otherwise).
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    /// Search interval `x0,x1` on y = 0.
    #[arg(long = "box", value_parser = parse_pair, allow_hyphen_values = true)]
    search_box: Option<[f64; 2]>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "theorem5")]
    region: SampleRegion,
    /// Also integrate from `x,y` (cycles only).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    trajectory: Option<[f64; 2]>,
    #[arg(long, default_value_t = 50.0)]
    t_max: f64,
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
            Ok([a, b])
        }
        _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (cmd, c): (fn(&Options) -> _, Common) = match cli.command {
        Command::Reduce(c) => (commands::run_reduce, c),
        Command::Certify(c) => (commands::run_certify, c),
        Command::Cycles(c) => (commands::run_cycles, c),
        Command::Transversal(c) => (commands::run_transversal, c),
        Command::Sample(c) => (commands::run_sample_cmd, c),
        Command::Plot(c) => (commands::run_plot, c),
    };
    let opts = Options {
        input: c.input,
        epsilon: c.epsilon,
        search_box: c.search_box,
        n: c.n,
        seed: c.seed,
        tol: c.tol,
        region: c.region,
        trajectory: c.trajectory,
        t_max: c.t_max,
    };
    let outputs = cmd(&opts)?;
    commands::emit(&outputs, c.output.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lienard: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
