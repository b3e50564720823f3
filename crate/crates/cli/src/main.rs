//! `horoscope`: sphere growth, horofunction counts, monotone path covers,
//! horofunction orbits and ray rerooting from JSON input files.
//!
//! Exit codes: 0 success, 2 usage, 3 malformed input, 4 budget exhausted,
//! 5 unmet precondition, 6 failed theory check, 7 I/O error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use horoscope::spec::GraphSpec;
use horoscope::{Error, Limits};
use serde_json::Value;

use commands::Config;
use report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "horoscope",
    version,
    about = "Horofunction experiments on graphs of linear growth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere sizes and a linear-growth verdict
    Growth(Common),
    /// Distinct horofunction restrictions for r = 1..radius
    Horo(Common),
    /// Monotone path cover of a layered graph, with verification
    Cover(Common),
    /// Horofunction orbit, stabilizer sample and homomorphism witness
    Orbit(Common),
    /// Reroot a geodesic ray at the basepoint
    Reroot(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON input: a cayley, explicit or layered spec
    input: PathBuf,

    /// Horofunction domain radius r
    #[arg(long, default_value_t = 8)]
    radius: u64,

    /// Sphere depth N₁ [default: 4r]
    #[arg(long)]
    depth: Option<u64>,

    /// Depth window W
    #[arg(long, default_value_t = 8)]
    window: u64,

    /// Sampling ball radius R [default: r / 2]
    #[arg(long)]
    ball: Option<u64>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Vertex exploration cap
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,

    /// Seed for randomly drawn rays
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Malformed(String),
    Budget(String),
    Precondition(String),
    Theory(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Malformed(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Precondition(_) => 5,
            Failure::Theory(_) => 6,
            Failure::Io(_) => 7,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Malformed(m)
            | Failure::Budget(m)
            | Failure::Precondition(m)
            | Failure::Theory(m)
            | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::BudgetExhausted { .. } => Failure::Budget(m),
            Error::MalformedSpec { .. } | Error::NonConsecutiveEdge { .. } | Error::GeneratorsDoNotGenerate(_) => {
                Failure::Malformed(m)
            }
            Error::NotInvariant(_)
            | Error::AdditivityViolation { .. }
            | Error::TrivialImage
            | Error::EmptyStabilizer
            | Error::NotStabilized { .. } => Failure::Theory(m),
            Error::Unreachable { .. }
            | Error::InvalidParameter(_)
            | Error::EmptySphere { .. }
            | Error::NotGeodesic { .. }
            | Error::RayNotExtendable { .. }
            | Error::RayTooShort { .. }
            | Error::PrefixTooShort { .. }
            | Error::UnequalLayers { .. }
            | Error::NoMatching { .. }
            | Error::EmptyGraph
            | Error::RecursionDepth(_)
            | Error::LayerTooLarge(_)
            | Error::NoConstantSubsequence { .. }
            | Error::DomainTooSmall { .. } => Failure::Precondition(m),
        }
    }
}

fn config(c: &Common) -> Result<Config, Failure> {
    if c.radius == 0 || c.window == 0 || c.budget == 0 {
        return Err(Failure::Usage(
            "--radius, --window and --budget must be positive".into(),
        ));
    }
    if let Some(depth) = c.depth {
        if c.window >= depth {
            return Err(Failure::Usage(format!(
                "--window {} must be smaller than --depth {depth}",
                c.window
            )));
        }
    }
    if c.ball == Some(0) {
        return Err(Failure::Usage("--ball must be positive".into()));
    }
    Ok(Config {
        radius: c.radius,
        depth: c.depth,
        window: c.window,
        ball: c.ball,
        seed: c.seed,
        limits: Limits::with_cap(c.budget),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (name, common) = match &cli.command {
        Command::Growth(c) => ("growth", c),
        Command::Horo(c) => ("horo", c),
        Command::Cover(c) => ("cover", c),
        Command::Orbit(c) => ("orbit", c),
        Command::Reroot(c) => ("reroot", c),
    };
    let cfg = config(common)?;
    let text =
        std::fs::read_to_string(&common.input).map_err(|e| Failure::Io(format!("{}: {e}", common.input.display())))?;

    // A reroot input may carry the ray next to the graph description.
    let (text, ray) = if name == "reroot" {
        let mut doc: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Malformed(format!("line {} column {}: {e}", e.line(), e.column())))?;
        let ray = doc.as_object_mut().and_then(|m| m.remove("ray"));
        (doc.to_string(), ray)
    } else {
        (text, None)
    };
    let graph = GraphSpec::from_json(&text)?.build()?;
    let report = match &cli.command {
        Command::Growth(_) => commands::growth(&graph, &cfg)?,
        Command::Horo(_) => commands::horo(&graph, &cfg)?,
        Command::Cover(_) => commands::cover(&graph, &cfg)?,
        Command::Orbit(_) => commands::orbit(&graph, &cfg)?,
        Command::Reroot(_) => commands::reroot(&graph, ray.as_ref(), &cfg)?,
    };
    report
        .write(common.format, common.out.as_deref())
        .map_err(|e| Failure::Io(format!("writing report: {e}")))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("horoscope: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
