use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use weilform_cli::{parse_level_degree, run, Command, CurvingMode, Flags, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "weilform", version, about = "Weil-complex computations on polynomial Lie algebroids")]
struct Cli {
    /// Seed for --random cochains.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Use one random cochain in W^{P,Q} instead of the spec's cochains.
    #[arg(long, global = true, value_name = "P:Q", value_parser = parse_level_degree)]
    random: Option<(usize, usize)>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArg {
    /// Spec file (JSON).
    spec: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every applicable checker.
    Validate {
        #[command(flatten)]
        spec: SpecArg,
        /// Print the canonical form of the spec instead of a report.
        #[arg(long)]
        emit: bool,
    },
    /// Weil differential of the spec's cochains.
    Delta(SpecArg),
    /// Covariant exterior derivative of the spec's cochains.
    Dnabla(SpecArg),
    /// Horizontal projection along the IM connection.
    Hproj(SpecArg),
    /// Horizontal differential along the IM connection.
    Dhor(SpecArg),
    /// Curvature of the IM connection.
    Curvature(SpecArg),
    /// Bianchi identity for the IM connection.
    Bianchi(SpecArg),
    /// Deform the IM connection by a horizontal IM form.
    Deform {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// 1-based index into the spec's cochains, or a JSON file with one cochain.
        #[arg(long)]
        with: String,
    },
    /// Obstruction cocycle of a splitting and a horizontal corrector.
    Obstruction {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Check or solve for a curving.
    Curving {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, conflicts_with = "solve", required_unless_present = "solve")]
        check: bool,
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Build a named example.
    Fixture {
        #[arg(long)]
        name: String,
        /// Print the example as a spec file.
        #[arg(long)]
        emit: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags {
        seed: cli.seed,
        random: cli.random,
    };
    let (command, path) = match cli.cmd {
        Cmd::Validate { spec, emit } => (Command::Validate { emit }, Some(spec.spec)),
        Cmd::Delta(s) => (Command::Delta, Some(s.spec)),
        Cmd::Dnabla(s) => (Command::Dnabla, Some(s.spec)),
        Cmd::Hproj(s) => (Command::Hproj, Some(s.spec)),
        Cmd::Dhor(s) => (Command::Dhor, Some(s.spec)),
        Cmd::Curvature(s) => (Command::Curvature, Some(s.spec)),
        Cmd::Bianchi(s) => (Command::Bianchi, Some(s.spec)),
        Cmd::Deform { spec, lambda, with } => (Command::Deform { lambda, with }, Some(spec.spec)),
        Cmd::Obstruction { spec, bound } => (Command::Obstruction { bound }, Some(spec.spec)),
        Cmd::Curving {
            spec, solve, bound, ..
        } => {
            let mode = if solve { CurvingMode::Solve } else { CurvingMode::Check };
            (Command::Curving { mode, bound }, Some(spec.spec))
        }
        Cmd::Fixture { name, emit } => (Command::Fixture { name, emit }, None),
    };
    let src = match path.as_ref().map(std::fs::read_to_string).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.unwrap().display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let out = run(&command, src.as_deref(), &flags);
    print!("{}", out.stdout);
    ExitCode::from(out.code as u8)
}
