mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let outcome = match &cli.command {
        Some(Command::Synth(args)) => commands::synth(args),
        None => commands::evaluate(&cli.eval),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("novelty-eval: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn subcommand_does_not_need_eval_flags() {
        let cli = Cli::try_parse_from(["novelty-eval", "synth", "--out-dir", "x"]).unwrap();
        assert!(matches!(cli.command, Some(Command::Synth(_))));
    }

    #[test]
    fn missing_qrels_is_reported() {
        let err = Cli::try_parse_from(["novelty-eval", "--runs", "r"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::MissingRequiredArgument);
        assert!(err.to_string().contains("--qrels"));
    }

    #[test]
    fn flag_values_parse() {
        let cli = Cli::try_parse_from([
            "novelty-eval", "--runs", "r", "--qrels", "q", "--log-base", "2", "--agg", "mean",
            "--epsilon-policy", "custom:0.001", "--grade-map", "r=3,p=1,i=0", "--format", "json",
        ])
        .unwrap();
        assert_eq!(cli.eval.log_base(), novelty_eval::metrics::LogBase::Other(2.0));
        assert!(Cli::try_parse_from(["novelty-eval", "--runs", "r", "--qrels", "q", "--log-base", "3"]).is_err());
        assert!(Cli::try_parse_from(["novelty-eval", "--runs", "r", "--qrels", "q", "--bogus"]).is_err());
    }
}
