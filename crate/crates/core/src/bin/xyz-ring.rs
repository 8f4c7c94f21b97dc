use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use xyz_ring::sweep::{
    cmd_ed_compare, cmd_figure1, cmd_figure2, cmd_sweep, Command, ConfigFile, SweepConfig,
};
use xyz_ring::verify::cmd_verify;
use xyz_ring::Sign;

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "xyz-ring", version, about = "Exact MPS ground states of XYZ rings: checks, sweeps and figure data")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run every invariant check; JSON-lines records, summary on stderr.
    Verify(Flags),
    /// Closed-form observables over a g grid as CSV.
    Sweep(Flags),
    /// Scaled concurrence N*C(g/N) for several ring sizes, plus the limit.
    Figure1(Flags),
    /// Magnetization versus g for several ring sizes, plus the limit.
    Figure2(Flags),
    /// Dense ED ground energy and ground-space membership of the exact state.
    EdCompare(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// Sign epsilon: +1 or -1.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<Sign>,
    /// Sign eta: +1 or -1.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<Sign>,
    #[arg(long)]
    j: Option<f64>,
    /// Single ring size.
    #[arg(long, conflicts_with = "n_list")]
    n: Option<usize>,
    /// Comma-separated ring sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long, allow_negative_numbers = true)]
    g_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g_max: Option<f64>,
    /// Number of intervals; the grid has g-steps + 1 points.
    #[arg(long)]
    g_steps: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Enable brute-force cross-checks.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// JSON file with any of the above; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn resolve(&self, cmd: Command) -> Result<SweepConfig, String> {
        let mut cfg = SweepConfig::defaults_for(cmd);
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            ConfigFile::parse(&text)
                .and_then(|f| f.apply(&mut cfg))
                .map_err(|e| e.to_string())?;
        }
        if self.epsilon.is_some() {
            cfg.epsilon = self.epsilon;
        }
        if self.eta.is_some() {
            cfg.eta = self.eta;
        }
        if let Some(v) = self.j {
            cfg.j = v;
        }
        if let Some(v) = self.n {
            cfg.n_list = vec![v];
        }
        if let Some(v) = &self.n_list {
            cfg.n_list = v.clone();
        }
        if let Some(v) = self.g_min {
            cfg.g_min = v;
        }
        if let Some(v) = self.g_max {
            cfg.g_max = v;
        }
        if let Some(v) = self.g_steps {
            cfg.g_steps = v;
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        cfg.check |= self.check;
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        cfg.validate(cmd).map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

fn emit(cfg: &SweepConfig, text: &str) -> Result<(), String> {
    match &cfg.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn run(cli: Cli) -> Result<bool, (u8, String)> {
    let (cmd, flags) = match &cli.command {
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Figure1(f) => (Command::Figure1, f),
        Sub::Figure2(f) => (Command::Figure2, f),
        Sub::EdCompare(f) => (Command::EdCompare, f),
    };
    let invalid = |m: String| (EXIT_INVALID, m);
    let failed = |e: xyz_ring::Error| (EXIT_FAILURE, e.to_string());
    let cfg = flags.resolve(cmd).map_err(invalid)?;

    if cmd == Command::Verify {
        let report = cmd_verify(&cfg).map_err(failed)?;
        emit(&cfg, &report.jsonl()).map_err(invalid)?;
        eprint!("{}", report.human());
        return Ok(report.passed());
    }
    let out = match cmd {
        Command::Sweep => cmd_sweep(&cfg),
        Command::Figure1 => cmd_figure1(&cfg),
        Command::Figure2 => cmd_figure2(&cfg),
        _ => cmd_ed_compare(&cfg),
    }
    .map_err(failed)?;
    emit(&cfg, &out.text).map_err(invalid)?;
    for f in &out.failures {
        eprintln!("FAIL {f}");
    }
    Ok(out.ok())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILURE),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
