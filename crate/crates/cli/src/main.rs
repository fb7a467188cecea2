//! `lmpcirc`: solve DC OPF instances and inspect their prices as a DC circuit.

mod text;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lmpcirc_core::analysis::{
    congestion_impact, predict_negative_prices_with, recover_lmps, LimitedInfoFile,
};
use lmpcirc_core::circuit::{build_circuit, kvl_loop_sums, solve_circuit, to_voltage_sources};
use lmpcirc_core::dcopf::{solve_opf_with, verify_optimality_with, OpfOptions};
use lmpcirc_core::network::{generate_random_network, parse_network, NetworkFile};
use lmpcirc_core::report::{
    netlist, to_json, CheckJson, CircuitReport, ImpactReport, NegativeReport, RecoverReport, SolutionReport,
};
use lmpcirc_core::{DcopfSolution64, Error, Network64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Solve,
    Circuit,
    Check,
    Superpose,
    PredictNegative,
    Recover,
    Gen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// DC OPF prices read as node voltages of an equivalent DC circuit.
///
/// Exit codes: 0 ok, 1 bad input, 2 infeasible, 3 unbounded,
/// 4 no congestion, 5 a check failed, 6 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "lmpcirc", version)]
struct Cli {
    command: Command,
    /// Network JSON (LimitedInfo JSON for `recover`); stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Destination file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for `check` (default 1e-7) and `predict-negative` (default 1e-6).
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    /// Bus whose angle is fixed to zero.
    #[arg(long, default_value_t = 0)]
    ref_bus: usize,
    /// Show congestion as series voltage sources instead of parallel current sources.
    #[arg(long)]
    voltage_sources: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bus count for `gen`.
    #[arg(short = 'n', default_value_t = 10)]
    n: usize,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Exit code plus message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidNetwork(_) | Error::Disconnected { .. } | Error::DimensionMismatch(_) => 1,
            Error::Infeasible(_) => 2,
            Error::Unbounded => 3,
            Error::NoCongestion => 4,
            Error::Singular { .. } | Error::IterationLimit(_) | Error::NoMarginalInjector => 6,
        };
        Failure::new(code, e.to_string())
    }
}

fn no_congestion(sol: &DcopfSolution64) -> Failure {
    Failure::new(
        4,
        format!(
            "no congestion: no line flow limit binds, so LMPs throughout the network are all equal \
             (λ = {} at every bus) and the equivalent circuit has no source",
            text::num(sol.lmp[0])
        ),
    )
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = fs::read_to_string(p).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            io::stdin().read_to_string(&mut text).map_err(|e| Failure::new(1, format!("cannot read stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load(cli: &Cli) -> Result<(Network64, DcopfSolution64), Failure> {
    let net: Network64 = parse_network(&read_input(&cli.input)?)?;
    if cli.ref_bus >= net.bus_count() {
        return Err(Failure::new(1, format!("reference bus {} out of range (0..{})", cli.ref_bus, net.bus_count())));
    }
    let sol = solve_opf_with(&net, &OpfOptions { reference_bus: cli.ref_bus, ..Default::default() })?;
    Ok((net, sol))
}

/// Builds the circuit, mapping `NoCongestion` to the uniform-price explanation.
fn circuit_of(net: &Network64, sol: &DcopfSolution64) -> Result<lmpcirc_core::EquivalentCircuit64, Failure> {
    build_circuit(net, sol).map_err(|e| if e == Error::NoCongestion { no_congestion(sol) } else { e.into() })
}

/// Produces the report text and whether every check passed.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let json = cli.format == Format::Json;
    match cli.command {
        Command::Solve => {
            let (net, sol) = load(cli)?;
            let out = if json { to_json(&SolutionReport::new(&net, &sol)) } else { text::solution(&net, &sol) };
            Ok((out, true))
        }
        Command::Circuit => {
            let (net, sol) = load(cli)?;
            let c = circuit_of(&net, &sol)?;
            let view = to_voltage_sources(&c);
            let out = if json {
                to_json(&CircuitReport::new(&c, &view))
            } else {
                netlist(&c, cli.voltage_sources.then_some(&view))
            };
            Ok((out, true))
        }
        Command::Check => {
            let (net, sol) = load(cli)?;
            let tol = cli.tol.unwrap_or(1e-7);
            let report = verify_optimality_with(&net, &sol, tol)?;
            let circuit = match build_circuit(&net, &sol) {
                Ok(c) => {
                    let s = solve_circuit(&c)?;
                    Some((c, s))
                }
                Err(Error::NoCongestion) => None,
                Err(e) => return Err(e.into()),
            };
            let loops = kvl_loop_sums(&net, &sol.lmp);
            let summary = CheckJson::new(&report, circuit.as_ref().map(|(c, s)| (c, s)), &loops, tol);
            let out = if json {
                to_json(&summary)
            } else {
                text::check(&report, circuit.as_ref().map(|(c, s)| (c, s)), &summary, &loops, &sol.lmp)
            };
            Ok((out, summary.all_pass))
        }
        Command::Superpose => {
            let (net, sol) = load(cli)?;
            let c = circuit_of(&net, &sol)?;
            let impact = congestion_impact(&c)?;
            let out = if json { to_json(&ImpactReport::new(&c, &impact)) } else { text::superpose(&c, &impact) };
            Ok((out, true))
        }
        Command::PredictNegative => {
            let (net, sol) = load(cli)?;
            let c = circuit_of(&net, &sol)?;
            let s = solve_circuit(&c)?;
            let verdict = predict_negative_prices_with(&c, &s, cli.tol.unwrap_or(1e-6));
            let out = if json { to_json(&NegativeReport::new(&c, &verdict)) } else { text::negative(&c, &verdict) };
            Ok((out, true))
        }
        Command::Recover => {
            let info = LimitedInfoFile::from_json(&read_input(&cli.input)?)?.into_info::<f64>()?;
            let recovered = recover_lmps(&info)?;
            let out = if json { to_json(&RecoverReport::new(&recovered)) } else { text::recovered(&recovered) };
            Ok((out, true))
        }
        Command::Gen => {
            let p = (3.0 / cli.n as f64).min(0.6);
            let net: Network64 = generate_random_network(cli.seed, cli.n, p)?;
            Ok((NetworkFile::from(&net).to_json(), true))
        }
    }
}

fn emit(cli: &Cli, out: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => fs::write(p, out).map_err(|e| Failure::new(1, format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::new(1, e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|(out, pass)| emit(&cli, &out).map(|_| pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks exceed the tolerance");
            ExitCode::from(5)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
