mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coring_core::error::Error;
use coring_core::instance::{self, Instance, DEFAULT_MAX_DEGREE};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "coring-lab", version, about = "Exact checks for corings, Amitsur complexes and connections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance definition (JSON)
    file: PathBuf,
    /// Print machine-readable JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check algebra, bimodule, coring, grouplike and comodule axioms
    Validate(Common),
    /// Amitsur cohomology of the distinguished (semi-)grouplike
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        /// Use the complex Ω(C/S) built on ker ε
        #[arg(long)]
        reduced: bool,
    },
    /// Galois verdict, free basis certificate and contracting homotopy
    Galois {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Connection existence, projectivity and the comodule round trip
    Connections {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        module: Option<String>,
    },
    /// Every applicable check, as one JSON document
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(usize) -> String) -> Result<(), Error> {
    let out = if json {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Inconsistent(e.to_string()))?;
        s.push('\n');
        s
    } else {
        text(render::width())
    };
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Inconsistent(e.to_string())),
        _ => Ok(()),
    }
}

fn load(common: &Common) -> Result<Instance, Error> {
    Instance::from_file(&common.file)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Validate(common) => {
            let inst = load(&common)?;
            let report = instance::validate(&inst)?;
            emit(common.json, &report, |w| render::report(&report, w))?;
            Ok(report.passed())
        }
        Command::Cohomology {
            common,
            max_degree,
            reduced,
        } => {
            let inst = load(&common)?;
            let out = instance::cohomology(&inst, max_degree, reduced)?;
            emit(common.json, &out, |w| render::cohomology(&out, w))?;
            Ok(out.passed())
        }
        Command::Galois { common, max_degree } => {
            let inst = load(&common)?;
            let out = instance::galois(&inst, max_degree)?;
            emit(common.json, &out, |w| render::galois(&out, w))?;
            Ok(out.passed())
        }
        Command::Connections { common, module } => {
            let inst = load(&common)?;
            let out = instance::connections(&inst, module.as_deref())?;
            emit(common.json, &out, |w| render::connections(&out, w))?;
            Ok(out.iter().all(|m| m.passed()))
        }
        Command::Report { common, max_degree } => {
            let inst = load(&common)?;
            let out = instance::full_report(&inst, max_degree)?;
            emit(true, &out, |_| String::new())?;
            Ok(out.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
