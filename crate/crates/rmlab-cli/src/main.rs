//! Command-line front end for the Reed-Muller code laboratory.
//!
//! Subcommands: `encode`, `decode`, `complexity`, `simulate`, `sweep`, and
//! `pareto`. Exit codes: 0 on success, 1 on usage errors, 2 on runtime
//! errors. Every command is deterministic under a fixed seed.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use rmlab::channel::RngStream;
use rmlab::complexity::report;
use rmlab::llr::analog_weight;
use rmlab::sim::{
    estimate_bler, gap_to_csl_db, pareto_frontier, SimOptions, SnrSearch, SweepPoint,
};
use rmlab::{BitVec, Decoder, DecoderSpec, RmCode};

#[derive(Parser)]
#[command(
    name = "rmlab",
    version,
    about = "Reed-Muller code laboratory: encoders, soft-decision decoders, \
             operation-count models, and Monte Carlo BLER campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message (ASCII 0/1 string of length k) with RM(r, m)
    Encode { r: i32, m: u32, message: String },
    /// Decode 2^m whitespace-separated LLRs (decimals, `inf`, `-inf`)
    Decode {
        r: i32,
        m: u32,
        /// Decoder spec: gmc | ml | scl:<L> | ae:<N> | ca:{(<addr>,<n>),...}
        spec: String,
        #[arg(allow_hyphen_values = true, num_args = 1.., required = true)]
        llrs: Vec<String>,
        /// Seed for ensemble sampling (ae/ca decoders)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Worst-case basic-operation counts for a decoder on RM(r, m)
    Complexity {
        r: i32,
        m: u32,
        spec: String,
        /// Emit the full machine-readable report
        #[arg(long)]
        json: bool,
    },
    /// Estimate BLER over an SNR list; emits CSV rows
    /// (decoder_spec,snr_db,trials,errors,bler)
    Simulate {
        #[command(flatten)]
        overrides: ConfigArgs,
    },
    /// Measure each decoder's gap to the constrained Shannon limit and its
    /// normalized complexity; emits JSON campaign records
    Sweep {
        #[command(flatten)]
        overrides: ConfigArgs,
    },
    /// Filter campaign records down to the Pareto frontier
    Pareto {
        /// JSON file of records: [{decoder_spec, ops_per_info_bit, gap_db}]
        #[arg(long)]
        input: PathBuf,
        /// Output path (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Flags mirroring `RunConfig`; explicit flags override config-file values.
#[derive(Args)]
struct ConfigArgs {
    /// JSON config file mirroring the run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code parameters as `r,m`
    #[arg(long, value_parser = parse_code)]
    code: Option<(i32, u32)>,
    /// Decoder spec (repeatable)
    #[arg(long = "decoder")]
    decoders: Vec<String>,
    /// SNR points in dB (comma separated, repeatable)
    #[arg(long = "snr-db", value_delimiter = ',', allow_hyphen_values = true)]
    snr_db: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
    /// Target BLER for sweep threshold searches
    #[arg(long)]
    target_bler: Option<f64>,
    /// Transmit the all-zero codeword (valid for ensemble-symmetric setups)
    #[arg(long)]
    all_zero: bool,
    /// Redraw AE/CA ensembles per trial instead of fixing them per run
    #[arg(long)]
    resample_per_trial: bool,
    /// Lower edge of the sweep SNR bracket (dB)
    #[arg(long, allow_hyphen_values = true)]
    snr_low_db: Option<f64>,
    /// Upper edge of the sweep SNR bracket (dB)
    #[arg(long, allow_hyphen_values = true)]
    snr_high_db: Option<f64>,
    /// CSV output path for simulate (stdout when omitted)
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// JSON output path for sweep (stdout when omitted)
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn parse_code(s: &str) -> Result<(i32, u32), String> {
    let (r, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected r,m pair, got {s:?}"))?;
    Ok((
        r.trim().parse().map_err(|e| format!("bad order: {e}"))?,
        m.trim()
            .parse()
            .map_err(|e| format!("bad log-length: {e}"))?,
    ))
}

/// On-disk run configuration; flags override file values field by field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    code: (i32, u32),
    decoders: Vec<String>,
    snr_db: Vec<f64>,
    target_bler: f64,
    seed: u64,
    max_trials: u64,
    min_errors: u64,
    all_zero: bool,
    resample_ensembles_per_trial: bool,
    snr_low_db: f64,
    snr_high_db: f64,
    csv_out: Option<PathBuf>,
    json_out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            code: (2, 4),
            decoders: Vec::new(),
            snr_db: Vec::new(),
            target_bler: 1e-3,
            seed: 0,
            max_trials: 1_000_000,
            min_errors: 100,
            all_zero: false,
            resample_ensembles_per_trial: false,
            snr_low_db: -10.0,
            snr_high_db: 15.0,
            csv_out: None,
            json_out: None,
        }
    }
}

impl RunConfig {
    fn assemble(args: &ConfigArgs) -> Result<RunConfig, AppError> {
        let mut config = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| AppError::Runtime(format!("reading {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| AppError::Usage(format!("config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(code) = args.code {
            config.code = code;
        }
        if !args.decoders.is_empty() {
            config.decoders = args.decoders.clone();
        }
        if !args.snr_db.is_empty() {
            config.snr_db = args.snr_db.clone();
        }
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        if let Some(v) = args.max_trials {
            config.max_trials = v;
        }
        if let Some(v) = args.min_errors {
            config.min_errors = v;
        }
        if let Some(v) = args.target_bler {
            config.target_bler = v;
        }
        if args.all_zero {
            config.all_zero = true;
        }
        if args.resample_per_trial {
            config.resample_ensembles_per_trial = true;
        }
        if let Some(v) = args.snr_low_db {
            config.snr_low_db = v;
        }
        if let Some(v) = args.snr_high_db {
            config.snr_high_db = v;
        }
        if args.csv_out.is_some() {
            config.csv_out = args.csv_out.clone();
        }
        if args.json_out.is_some() {
            config.json_out = args.json_out.clone();
        }
        if config.decoders.is_empty() {
            return Err(AppError::Usage("no decoders given (--decoder)".into()));
        }
        Ok(config)
    }

    fn specs(&self) -> Result<Vec<DecoderSpec>, AppError> {
        self.decoders
            .iter()
            .map(|s| DecoderSpec::from_str(s).map_err(AppError::usage))
            .collect()
    }

    fn sim_options(&self) -> SimOptions {
        SimOptions {
            seed: self.seed,
            max_trials: self.max_trials,
            min_errors: self.min_errors,
            all_zero: self.all_zero,
            resample_ensembles_per_trial: self.resample_ensembles_per_trial,
            ..SimOptions::default()
        }
    }
}

enum AppError {
    Usage(String),
    Runtime(String),
}

impl AppError {
    fn usage(e: impl fmt::Display) -> Self {
        AppError::Usage(e.to_string())
    }

    fn from_lib(e: rmlab::Error) -> Self {
        match e {
            rmlab::Error::BracketNotFound { .. } => AppError::Runtime(e.to_string()),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Encode { r, m, message } => cmd_encode(r, m, &message),
        Command::Decode {
            r,
            m,
            spec,
            llrs,
            seed,
        } => cmd_decode(r, m, &spec, &llrs, seed),
        Command::Complexity { r, m, spec, json } => cmd_complexity(r, m, &spec, json),
        Command::Simulate { overrides } => cmd_simulate(&RunConfig::assemble(&overrides)?),
        Command::Sweep { overrides } => cmd_sweep(&RunConfig::assemble(&overrides)?),
        Command::Pareto { input, output } => cmd_pareto(&input, output.as_deref()),
    }
}

fn cmd_encode(r: i32, m: u32, message: &str) -> Result<(), AppError> {
    let code = RmCode::new(r, m);
    let message: BitVec = message.parse().map_err(AppError::usage)?;
    let codeword = code.encode(&message).map_err(AppError::usage)?;
    println!("{codeword}");
    Ok(())
}

fn cmd_decode(r: i32, m: u32, spec: &str, llrs: &[String], seed: u64) -> Result<(), AppError> {
    let code = RmCode::new(r, m);
    let spec: DecoderSpec = spec.parse().map_err(AppError::usage)?;
    let llrs: Vec<f64> = llrs
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| AppError::Usage(format!("bad LLR value {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if llrs.len() != code.length() {
        return Err(AppError::Usage(format!(
            "expected {} LLR values, got {}",
            code.length(),
            llrs.len()
        )));
    }
    let decoder =
        Decoder::prepare(code, &spec, RngStream::new(seed, 0)).map_err(AppError::from_lib)?;
    let codeword = decoder.decode(&llrs).map_err(AppError::from_lib)?;
    let weight = analog_weight(&codeword, &llrs).map_err(AppError::from_lib)?;
    println!("{codeword} {weight}");
    Ok(())
}

fn cmd_complexity(r: i32, m: u32, spec: &str, json: bool) -> Result<(), AppError> {
    let code = RmCode::new(r, m);
    let spec: DecoderSpec = spec.parse().map_err(AppError::usage)?;
    let rep = report(&spec, code).map_err(AppError::from_lib)?;
    if json {
        let text =
            serde_json::to_string_pretty(&rep).map_err(|e| AppError::Runtime(e.to_string()))?;
        println!("{text}");
    } else {
        println!("decoder:           {}", rep.decoder_spec);
        println!("code:              RM({},{})", rep.code.0, rep.code.1);
        println!("total_ops:         {}", rep.total_ops);
        println!("dimension:         {}", rep.dimension);
        println!("ops_per_info_bit:  {:.3}", rep.ops_per_info_bit);
        if rep.uses_selection_bound {
            println!(
                "note: selection costs fall back to the comparator-count lower bound (optimistic)"
            );
        }
    }
    Ok(())
}

fn cmd_simulate(config: &RunConfig) -> Result<(), AppError> {
    let code = RmCode::new(config.code.0, config.code.1);
    let specs = config.specs()?;
    let opts = config.sim_options();
    if config.snr_db.is_empty() {
        return Err(AppError::Usage("no SNR points given (--snr-db)".into()));
    }
    let mut csv = String::from("decoder_spec,snr_db,trials,errors,bler\n");
    for spec in &specs {
        for &snr in &config.snr_db {
            let est = estimate_bler(spec, code, snr, &opts).map_err(AppError::from_lib)?;
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                spec, snr, est.trials, est.errors, est.bler
            ));
        }
    }
    match &config.csv_out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| AppError::Runtime(format!("writing {}: {e}", path.display())))?;
            println!(
                "wrote {} rows to {}",
                specs.len() * config.snr_db.len(),
                path.display()
            );
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_sweep(config: &RunConfig) -> Result<(), AppError> {
    let code = RmCode::new(config.code.0, config.code.1);
    let specs = config.specs()?;
    let opts = config.sim_options();
    let search = SnrSearch {
        low_db: config.snr_low_db,
        high_db: config.snr_high_db,
        ..SnrSearch::default()
    };
    let mut points = Vec::with_capacity(specs.len());
    for spec in &specs {
        let ops = report(spec, code)
            .map_err(AppError::from_lib)?
            .ops_per_info_bit;
        let gap = gap_to_csl_db(spec, code, config.target_bler, &search, &opts)
            .map_err(AppError::from_lib)?;
        points.push(SweepPoint {
            decoder_spec: spec.to_string(),
            ops_per_info_bit: ops,
            gap_db: gap,
        });
    }
    let text =
        serde_json::to_string_pretty(&points).map_err(|e| AppError::Runtime(e.to_string()))?;
    match &config.json_out {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| AppError::Runtime(format!("writing {}: {e}", path.display())))?;
            println!(
                "wrote {} campaign records to {}",
                points.len(),
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_pareto(input: &std::path::Path, output: Option<&std::path::Path>) -> Result<(), AppError> {
    let text = fs::read_to_string(input)
        .map_err(|e| AppError::Runtime(format!("reading {}: {e}", input.display())))?;
    let points: Vec<SweepPoint> = serde_json::from_str(&text)
        .map_err(|e| AppError::Usage(format!("{}: {e}", input.display())))?;
    let frontier = pareto_frontier(&points);
    let text =
        serde_json::to_string_pretty(&frontier).map_err(|e| AppError::Runtime(e.to_string()))?;
    match output {
        Some(path) => {
            fs::write(path, format!("{text}\n"))
                .map_err(|e| AppError::Runtime(format!("writing {}: {e}", path.display())))?;
            println!(
                "kept {} of {} points; wrote {}",
                frontier.len(),
                points.len(),
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_round_trips_through_json() {
        let config = RunConfig {
            code: (4, 9),
            decoders: vec!["gmc".into(), "ca:{(11,3)}".into()],
            snr_db: vec![3.0, 4.0],
            target_bler: 1e-3,
            seed: 7,
            max_trials: 50_000,
            min_errors: 100,
            all_zero: false,
            resample_ensembles_per_trial: true,
            snr_low_db: 2.0,
            snr_high_db: 8.0,
            csv_out: Some(PathBuf::from("out.csv")),
            json_out: None,
        };
        let text = serde_json::to_string(&config).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn code_pairs_parse() {
        assert_eq!(parse_code("4,9").unwrap(), (4, 9));
        assert_eq!(parse_code("-1, 5").unwrap(), (-1, 5));
        assert!(parse_code("4;9").is_err());
    }
}
