mod cli;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

/// Exit status for an error: 2 bad input, 3 unsatisfiable, 4 resource
/// limit, 1 anything else (I/O included).
fn exit_code(err: &anyhow::Error) -> u8 {
    use qwmc::Error as E;
    match err.downcast_ref::<qwmc::Error>() {
        Some(
            E::Parse { .. }
            | E::VariableOutOfRange { .. }
            | E::EmptyClause
            | E::LengthMismatch { .. }
            | E::ZeroWeightSum { .. }
            | E::InvalidWeight { .. }
            | E::InvalidArgument(_),
        ) => 2,
        Some(E::Unsatisfiable) => 3,
        Some(E::EnumerationLimit { .. } | E::QubitCount { .. } | E::AncillaBudget { .. }) => 4,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Wmc { common, samples } => commands::wmc(&common, samples),
        Command::Sample { common, qwmc_shots } => commands::sample(&common, qwmc_shots),
        Command::Mpe { common } => commands::mpe(&common),
        Command::Map { common } => commands::map(&common),
        Command::Count { common, samples } => commands::count(&common, samples),
        Command::ReproSprinkler {
            out_dir,
            seed,
            shots,
            t_bits,
            format,
        } => commands::repro_sprinkler(&out_dir, seed, shots, t_bits, format),
        Command::Circuit {
            input,
            kind,
            t_bits,
        } => commands::circuit(&input, kind, t_bits),
        Command::Curve {
            input,
            seed,
            instance,
            t_values,
            samples,
            errors,
        } => commands::curve(&input, seed, instance.as_deref(), &t_values, &samples, &errors),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
