// SPDX-License-Identifier: Apache-2.0

//! `aop`: optimize, bound, verify and benchmark And-Or path circuits.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 when an
//! invariant is violated (including a circuit that fails verification).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aop_core::baselines::parse_families;
use aop_core::bounds::{exact_optimum, oracle_eligible};
use aop_core::harness::write_summary;
use aop_core::io::{circuit_to_string, instance_to_string, read_circuit, read_instance};
use aop_core::normalize::{read_netlist, round_trip_equivalent};
use aop_core::{
    emit_dot, lower_bound, normalize, optimize, run_bench, verify, BenchConfig, DelayModel, Error,
    Mode, Result,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aop", version, about = "Delay optimization of And-Or paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Delay,
    DelaySize,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Delay => Mode::Delay,
            CliMode::DelaySize => Mode::DelaySize,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Circuit,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize an instance file and print the circuit.
    Optimize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "delay")]
        mode: CliMode,
        #[arg(long, value_enum, default_value = "circuit")]
        emit: Emit,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the random-instance benchmark.
    Bench {
        #[arg(long, default_value_t = 4)]
        m_min: usize,
        #[arg(long, default_value_t = 28)]
        m_max: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of r2006,hs2017,immediate; empty for none.
        #[arg(long, default_value = "r2006,hs2017,immediate")]
        baselines: String,
        #[arg(long, value_enum, default_value = "delay")]
        mode: CliMode,
        /// Skip the extra delay-size run.
        #[arg(long)]
        no_size_mode: bool,
        /// Skip the exact optimum on small instances.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long, default_value_t = aop_core::harness::DEFAULT_M_CEILING)]
        m_ceiling: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Print lower bounds (and the exact optimum when cheap).
    Lb {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a circuit file against an instance file.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Turn a placed netlist path into an instance file and a mapping file.
    Normalize {
        #[arg(long)]
        netlist: PathBuf,
        #[arg(long)]
        critical_input: String,
        /// Gate delay in ps.
        #[arg(long)]
        dgate: f64,
        /// Wire delay in ps per µm.
        #[arg(long)]
        ddist: f64,
        /// Instance file to write; stdout when omitted.
        #[arg(long)]
        instance_out: Option<PathBuf>,
        /// Mapping file (JSON) to write.
        #[arg(long)]
        mapping_out: Option<PathBuf>,
    },
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Optimize { input, mode, emit: what, output } => {
            let inst = read_instance(&input)?;
            let r = optimize(&inst, mode.into())?;
            eprintln!("delay {} size {} ({} µs)", r.delay, r.size, r.elapsed_us);
            let text = match what {
                Emit::Circuit => circuit_to_string(&r.circuit) + "\n",
                Emit::Dot => emit_dot(&r.circuit),
            };
            emit(&text, output.as_deref())
        }
        Command::Bench {
            m_min,
            m_max,
            count,
            seed,
            baselines,
            mode,
            no_size_mode,
            no_oracle,
            m_ceiling,
            csv,
            summary,
        } => {
            let mut cfg = BenchConfig::new(m_min, m_max, count, seed);
            cfg.baselines = parse_families(&baselines)?;
            cfg.mode = mode.into();
            cfg.size_mode = !no_size_mode;
            cfg.oracle = !no_oracle;
            cfg.m_ceiling = m_ceiling;
            cfg.csv = csv;
            cfg.summary = summary;
            let report = run_bench(&cfg)?;
            write_summary(&report.summaries, &mut std::io::stdout().lock())
        }
        Command::Lb { input } => {
            let inst = read_instance(&input)?;
            let mut v = serde_json::to_value(lower_bound(&inst)).expect("reports serialize");
            if oracle_eligible(&inst) {
                v["exact_optimum"] = exact_optimum(&inst)?.into();
            }
            emit(&json(&v), None)
        }
        Command::Verify { circuit, instance } => {
            let inst = read_instance(&instance)?;
            let c = read_circuit(&circuit)?;
            let report = verify(&c, inst.root_ref(), inst.m())?;
            emit(&json(&report), None)?;
            if report.structural_ok && report.equivalent {
                Ok(())
            } else {
                Err(Error::Invariant("circuit does not realize the instance".into()))
            }
        }
        Command::Normalize { netlist, critical_input, dgate, ddist, instance_out, mapping_out } => {
            let n = read_netlist(&netlist)?;
            let model = DelayModel::new(dgate, ddist)?;
            let res = normalize(&n, &critical_input, model)?;
            if !round_trip_equivalent(&n, &res)? {
                return Err(Error::Invariant("normalized instance does not match the netlist".into()));
            }
            if res.multiple_paths {
                eprintln!("warning: `{critical_input}` reaches the output along several paths; took the first");
            }
            emit(&instance_to_string(&res.instance), instance_out.as_deref())?;
            if let Some(path) = mapping_out {
                std::fs::write(path, json(&res))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
