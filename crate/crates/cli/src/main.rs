//! `fuzzgate`: check definition files, trace one reading through the
//! cascade, or replay a telemetry CSV and write the comparison reports.
//!
//! Exit status: 0 on success, 1 on validation or domain errors, 2 on I/O
//! errors.

mod definitions;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzgate_core::dsl;
use fuzzgate_core::energy::{PacketSpec, REFERENCE_JOULES_PER_PACKET};
use fuzzgate_core::report::{render_table, write_reports, Summary};
use fuzzgate_core::telemetry::{
    compare, load_telemetry, run_fuzzy, run_traditional, ColumnMapping, FailsafePolicy, HumidityScale,
    LoadPolicy, TelemetryError,
};
use fuzzgate_core::{Cascade, DecisionTrace, EnergyMode, RadioSpec, Reading};

use definitions::{render_diagnostics, Source};

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "fuzzgate", version, about = "Fuzzy send/suppress gate for IoT telemetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate definition files.
    Check(CheckArgs),
    /// Evaluate one reading and print the decision trace.
    Eval(EvalArgs),
    /// Replay a telemetry CSV and compare against sending every reading.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DefinitionArgs {
    /// Cascade manifest; definition paths are relative to it.
    #[arg(long, conflicts_with_all = ["fis1", "fis2", "fis3"])]
    manifest: Option<PathBuf>,
    #[arg(long)]
    fis1: Option<PathBuf>,
    #[arg(long)]
    fis2: Option<PathBuf>,
    #[arg(long)]
    fis3: Option<PathBuf>,
    /// Directory holding the definitions, used when no file flags are given.
    #[arg(long, env = "FUZZGATE_FIS_DIR")]
    fis_dir: Option<PathBuf>,
}

impl DefinitionArgs {
    fn source(&self) -> Result<Source, CliError> {
        Source::resolve(
            self.manifest.clone(),
            [self.fis1.clone(), self.fis2.clone(), self.fis3.clone()],
            self.fis_dir.clone(),
        )
    }

    fn cascade(&self, threshold: Option<f64>) -> Result<Cascade, CliError> {
        let c = self.source()?.cascade()?;
        match threshold {
            Some(t) => c.with_threshold(t).map_err(|e| CliError::Domain(e.to_string())),
            None => Ok(c),
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Files to check; defaults to the resolved definition set.
    paths: Vec<PathBuf>,
    #[command(flatten)]
    defs: DefinitionArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    defs: DefinitionArgs,
    /// Indoor temperature, °C.
    #[arg(long = "temp", allow_negative_numbers = true)]
    temperature: f64,
    /// Relative humidity as a fraction in [0, 1].
    #[arg(long)]
    humidity: f64,
    /// Appliance energy in the interval, Wh.
    #[arg(long, allow_negative_numbers = true)]
    energy: f64,
    /// Time of day in fractional hours.
    #[arg(long, allow_negative_numbers = true)]
    time: f64,
    /// Clamp out-of-universe readings instead of failing.
    #[arg(long)]
    clamp: bool,
    #[arg(long)]
    threshold: Option<f64>,
    /// Print the trace as one JSON object.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Physical,
    Calibrated,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Percent,
    Fraction,
}

#[derive(Clone, Copy, ValueEnum)]
enum FailsafeArg {
    Send,
    Drop,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    defs: DefinitionArgs,
    /// Telemetry CSV with a header row.
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long, default_value = "date")]
    map_timestamp: String,
    #[arg(long, default_value = "T1")]
    map_temp: String,
    #[arg(long, default_value = "RH_1")]
    map_humidity: String,
    #[arg(long, default_value = "Appliances")]
    map_energy: String,
    #[arg(long, value_enum, default_value = "percent")]
    humidity_scale: ScaleArg,
    #[arg(long, value_enum, default_value = "physical")]
    energy_mode: ModeArg,
    /// Joules per packet in calibrated mode.
    #[arg(long)]
    per_packet_joules: Option<f64>,
    /// Radio current, A.
    #[arg(long)]
    current: Option<f64>,
    /// Radio supply voltage, V.
    #[arg(long)]
    voltage: Option<f64>,
    #[arg(long)]
    header_bits: Option<u64>,
    #[arg(long)]
    data_bits: Option<u64>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Decision when no rule fires for a record.
    #[arg(long, value_enum, default_value = "send")]
    failsafe: FailsafeArg,
    /// Abort on the first malformed row (default).
    #[arg(long, conflicts_with = "skip_bad")]
    strict: bool,
    /// Skip malformed rows and count them.
    #[arg(long)]
    skip_bad: bool,
    /// Directory for summary.json, decisions.csv and cumulative.csv.
    #[arg(long, default_value = "fuzzgate-report")]
    out: PathBuf,
    /// Print summary.json to stdout instead of the table.
    #[arg(long)]
    json: bool,
}

impl SimulateArgs {
    fn energy_mode(&self) -> Result<EnergyMode, CliError> {
        let domain = |e: fuzzgate_core::energy::EnergyError| CliError::Domain(e.to_string());
        match self.energy_mode {
            ModeArg::Calibrated => {
                if self.current.is_some() || self.voltage.is_some() || self.header_bits.is_some() || self.data_bits.is_some() {
                    return Err(CliError::Domain(
                        "radio and packet flags apply to --energy-mode physical only".into(),
                    ));
                }
                EnergyMode::calibrated(self.per_packet_joules.unwrap_or(REFERENCE_JOULES_PER_PACKET)).map_err(domain)
            }
            ModeArg::Physical => {
                if self.per_packet_joules.is_some() {
                    return Err(CliError::Domain(
                        "--per-packet-joules applies to --energy-mode calibrated only".into(),
                    ));
                }
                let d = RadioSpec::default();
                let radio = RadioSpec::new(
                    self.current.unwrap_or(d.current()),
                    self.voltage.unwrap_or(d.voltage()),
                    d.header_rate(),
                    d.data_rate(),
                )
                .map_err(domain)?;
                let p = PacketSpec::default();
                let packet = PacketSpec {
                    header_bits: self.header_bits.unwrap_or(p.header_bits),
                    data_bits: self.data_bits.unwrap_or(p.data_bits),
                };
                Ok(EnergyMode::physical(radio, packet))
            }
        }
    }

    fn mapping(&self) -> ColumnMapping {
        ColumnMapping {
            timestamp: self.map_timestamp.clone(),
            temperature: self.map_temp.clone(),
            humidity: self.map_humidity.clone(),
            energy: self.map_energy.clone(),
            humidity_scale: match self.humidity_scale {
                ScaleArg::Percent => HumidityScale::Percent,
                ScaleArg::Fraction => HumidityScale::Fraction,
            },
        }
    }
}

fn check(args: &CheckArgs) -> Result<(), CliError> {
    let explicit = !args.paths.is_empty();
    let source = if explicit { None } else { Some(args.defs.source()?) };
    let texts = match &source {
        Some(s) => s.texts(),
        None => args
            .paths
            .iter()
            .map(|p| (p.display().to_string(), definitions::read(p)))
            .collect(),
    };

    let (mut io_failed, mut invalid) = (false, false);
    let mut counts = Vec::new();
    for (name, text) in texts {
        let text = match text {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{name}: {}", message(&e));
                io_failed |= matches!(e, CliError::Io(_));
                invalid |= matches!(e, CliError::Domain(_));
                continue;
            }
        };
        match dsl::compile::<f64>(&text) {
            Ok(v) => {
                print!("{}", render_diagnostics(&name, &v.warnings));
                println!("{name}: ok, {} rules", v.subsystem.rules().len());
                counts.push(v.subsystem.rules().len().to_string());
            }
            Err(diags) => {
                print!("{}", render_diagnostics(&name, &diags));
                invalid = true;
            }
        }
    }
    if let (Some(s), false, false) = (&source, io_failed, invalid) {
        if let Err(e) = s.cascade() {
            eprintln!("cascade: {}", message(&e));
            return Err(e);
        }
    }
    if io_failed {
        return Err(CliError::Io(String::new()));
    }
    if invalid {
        return Err(CliError::Domain(String::new()));
    }
    println!("{} rules", counts.join("/"));
    Ok(())
}

fn print_trace(trace: &DecisionTrace, clamped: &[String]) {
    let ext: Vec<String> = trace.externals.iter().map(|(n, x)| format!("{n}={x}")).collect();
    println!("inputs: {}", ext.join(" "));
    if !clamped.is_empty() {
        println!("clamped: {}", clamped.join(" "));
    }
    for node in &trace.nodes {
        let ins: Vec<String> = node.inputs.iter().map(|(n, x)| format!("{n}={x:.4}")).collect();
        println!("{} ({}) -> {} = {:.4}", node.node, ins.join(", "), node.output, node.crisp);
        for r in &node.fired {
            println!("  {:.4}  #{} {}", r.activation, r.index + 1, r.rule);
        }
    }
    println!("score {:.4}, threshold {}: {}", trace.score, trace.threshold, trace.label);
}

fn eval(args: &EvalArgs) -> Result<(), CliError> {
    let cascade = args.defs.cascade(args.threshold)?;
    let reading = Reading {
        temperature: args.temperature,
        humidity: args.humidity,
        energy: args.energy,
        time: args.time,
    };
    let (inputs, moved) = if args.clamp {
        cascade.clamp_externals(&reading.externals())
    } else {
        (reading.externals().iter().map(|(n, x)| (n.to_string(), *x)).collect(), Vec::new())
    };
    let refs: Vec<(&str, f64)> = inputs.iter().map(|(n, x)| (n.as_str(), *x)).collect();
    let trace = cascade.evaluate(&refs).map_err(|e| CliError::Domain(e.to_string()))?;
    if args.json {
        println!("{}", serde_json::to_string(&trace).expect("trace serialises"));
        if !moved.is_empty() {
            eprintln!("clamped: {}", moved.join(" "));
        }
    } else {
        print_trace(&trace, &moved);
    }
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let cascade = args.defs.cascade(args.threshold)?;
    let mode = args.energy_mode()?;
    let policy = if args.skip_bad { LoadPolicy::SkipBad } else { LoadPolicy::Strict };
    let failsafe = match args.failsafe {
        FailsafeArg::Send => FailsafePolicy::Send,
        FailsafeArg::Drop => FailsafePolicy::Drop,
    };
    let telemetry = load_telemetry(&args.dataset, &args.mapping(), policy).map_err(|e| match e {
        TelemetryError::Io { .. } => CliError::Io(e.to_string()),
        other => CliError::Domain(other.to_string()),
    })?;
    let trad = run_traditional(&telemetry, &mode);
    let fuzzy = run_fuzzy(&telemetry, &cascade, &mode, failsafe).map_err(|e| CliError::Domain(e.to_string()))?;
    let cmp = compare(&trad, &fuzzy).map_err(|e| CliError::Domain(e.to_string()))?;
    let summary = Summary::new(&trad, &fuzzy, &cmp, &mode, &cascade, failsafe);
    let paths = write_reports(&args.out, &summary, &fuzzy, &cmp, &cascade)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;

    if args.json {
        print!("{}", summary.to_json());
    } else {
        print!("{}", render_table(&cmp));
        println!("per-packet energy: {:e} J ({})", summary.per_packet_joules, mode.name());
        println!(
            "records: {} loaded, {} skipped, {} clamped, {} fail-safe",
            summary.records_loaded, summary.records_skipped, fuzzy.clamped, fuzzy.failsafe_fallbacks
        );
    }
    for p in [&paths.summary, &paths.decisions, &paths.cumulative] {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn message(e: &CliError) -> &str {
    match e {
        CliError::Domain(m) | CliError::Io(m) => m,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(a) => check(a),
        Command::Eval(a) => eval(a),
        Command::Simulate(a) => simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !message(&e).is_empty() {
                eprintln!("error: {}", message(&e));
            }
            ExitCode::from(e.code())
        }
    }
}
