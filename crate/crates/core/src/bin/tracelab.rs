use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use tracelab::lab::{ExperimentConfig, Format, Registry};
use tracelab::Error;

#[derive(Parser, Debug)]
#[command(name = "tracelab", version, about = "Exact L-series and Hecke experiments over small finite fields")]
struct Cli {
    /// Experiment to run, or `list`.
    command: String,
    /// Curve descriptor, e.g. `ell:q=3;a=1;b=0`.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    dmax: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,
    /// Comma-separated weights for the Hecke kernel.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    weights: Option<Vec<i64>>,
    #[arg(long)]
    tower: Option<u32>,
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cap: Option<u64>,
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall-clock duration in the report.
    #[arg(long)]
    timing: bool,
}

impl Cli {
    fn config(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { cfg.$f = Some(v); } )* };
        }
        over!(curve, d, dmax, m, weights, tower, m_max, out);
        if let Some(f) = &self.format {
            cfg.format = f.parse::<Format>()?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(c) = self.cap {
            cfg.cap = c;
        }
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let registry = Registry::default();
    if cli.command == "list" {
        for e in registry.iter() {
            println!("{:<16}{}", e.name(), e.about());
        }
        return Ok(true);
    }
    let cfg = cli.config()?;
    if let Some(dir) = cfg.out.as_ref().and_then(|p| p.parent()).filter(|d| !d.as_os_str().is_empty()) {
        if !dir.is_dir() {
            return Err(Error::Io(format!("output directory {} does not exist", dir.display())));
        }
    }
    let start = Instant::now();
    let mut report = registry.run(&cli.command, &cfg)?;
    if cli.timing {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    if let Some(text) = report.emit()? {
        print!("{text}");
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tracelab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
