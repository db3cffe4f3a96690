//! File formats and the command-line driver for `slhnet-core`.

pub mod commands;
pub mod error;
pub mod examples;
pub mod network;
pub mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use commands::{CheckFlags, LoadSpec, Scale, SweepSpec, DEFAULT_TOL};
pub use error::{CliError, CliResult, SchemaIssue};
pub use schema::{parse_network, serialize_network, NetworkDescription};

#[derive(Debug, Parser)]
#[command(name = "slhnet", version, about = "Compose and analyse quantum feedback networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Network description (JSON)
    #[arg(long)]
    pub input: PathBuf,
    /// Write here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub omega_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub omega_max: f64,
    #[arg(long, default_value_t = 201)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Scale::Lin)]
    pub scale: Scale,
}

impl Sweep {
    fn spec(&self) -> SweepSpec {
        SweepSpec { omega_min: self.omega_min, omega_max: self.omega_max, count: self.count, scale: self.scale }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-loop (S, L, H) of an operator-level network
    Compose {
        #[command(flatten)]
        io: Io,
    },
    /// Transfer function sweep of a linear component, as CSV
    Tf {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        component: Option<String>,
    },
    /// Chain-scattering sweep of the linear components in cascade, as CSV
    Chain {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        sweep: Sweep,
        /// Lead split `Y/X`, by lead name or channel index
        #[arg(long)]
        partition: Option<String>,
    },
    /// Close the right lead of a device on a load
    Terminate {
        #[command(flatten)]
        io: Io,
        /// Load description (JSON with d, and optionally a, b, c)
        #[arg(long)]
        load: PathBuf,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        component: Option<String>,
    },
    /// Inner, lossless, Hurwitz and flat-lossless checks
    Check {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        inner: bool,
        #[arg(long)]
        lossless: bool,
        #[arg(long)]
        hurwitz: bool,
        #[arg(long)]
        flat_lossless: bool,
        /// `default` or `log:MIN:MAX`
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        component: Option<String>,
    },
    /// Write a bundled example and its expected values
    Example {
        name: String,
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn load_network(path: &Path) -> CliResult<NetworkDescription> {
    parse_network(&read(path)?)
}

fn sink(output: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match output {
        Some(p) => Ok(Box::new(std::fs::File::create(p).map_err(|e| CliError::io(p.display().to_string(), e))?)),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn emit_json<T: serde::Serialize>(value: &T, output: Option<&Path>) -> CliResult<()> {
    let mut w = sink(output)?;
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    writeln!(w, "{text}").map_err(|e| CliError::io("output", e))
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compose { io } => {
            let out = commands::compose(&load_network(&io.input)?, io.tol)?;
            emit_json(&out, io.output.as_deref())
        }
        Command::Tf { io, sweep, component } => {
            let desc = load_network(&io.input)?;
            let g = network::linear_model(&desc, network::select_linear(&desc, component.as_deref())?)?;
            commands::tf(&g, &sweep.spec(), io.tol)?.write_csv(sink(io.output.as_deref())?)
        }
        Command::Chain { io, sweep, partition } => {
            let desc = load_network(&io.input)?;
            commands::chain(&desc, partition.as_deref(), &sweep.spec())?.write_csv(sink(io.output.as_deref())?)
        }
        Command::Terminate { io, load, partition, component } => {
            let desc = load_network(&io.input)?;
            let load = LoadSpec::parse(&read(&load)?)?;
            let out = commands::terminate(&desc, component.as_deref(), partition.as_deref(), &load, io.tol)?;
            emit_json(&out, io.output.as_deref())
        }
        Command::Check { io, inner, lossless, hurwitz, flat_lossless, grid, partition, component } => {
            let desc = load_network(&io.input)?;
            let flags = CheckFlags { inner, lossless, hurwitz, flat_lossless };
            let out = commands::check(&desc, component.as_deref(), flags, grid.as_deref(), partition.as_deref(), io.tol)?;
            emit_json(&out, io.output.as_deref())
        }
        Command::Example { name, output } => {
            for path in examples::write_example(&name, &output)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
