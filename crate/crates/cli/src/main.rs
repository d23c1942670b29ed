use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use mathpar_cli::{run_repl, run_script, Config, Format};

/// Evaluates mathpar scripts, or starts a REPL when no script is given.
#[derive(Parser, Debug)]
#[command(name = "mathpar", version)]
struct Args {
    /// Script file to evaluate.
    file: Option<PathBuf>,
    /// Evaluate this script instead of a file.
    #[arg(short, long, conflicts_with = "file")]
    eval: Option<String>,
    #[arg(short, long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Initial FLOATPOS.
    #[arg(long)]
    floatpos: Option<u32>,
    /// Initial SPACE, for example `Q[x,y]`.
    #[arg(long)]
    space: Option<String>,
    /// Time limit in seconds for the whole run.
    #[arg(long, value_parser = parse_timeout)]
    timeout: Option<f64>,
}

fn parse_timeout(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err("timeout must be a positive number of seconds".into()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = Config {
        format: args.format,
        floatpos: args.floatpos,
        space: args.space,
        timeout: args.timeout.map(Duration::from_secs_f64),
    };
    let source = match (&args.eval, &args.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, None) => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            let result = run_repl(
                &config,
                &mut stdin.lock(),
                &mut io::stdout(),
                &mut io::stderr(),
                prompt,
            );
            return match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    let mut session = match config.session() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run_script(
        &mut session,
        &source,
        config.format,
        &mut io::stdout(),
        &mut io::stderr(),
    ) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
