use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minibqml::cli::{repl, run_script, OutputFormat, SessionConfig};

#[derive(Parser)]
#[command(name = "minibqml", version, about = "SQL with in-database binary classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script of `;`-terminated statements
    Run {
        script: PathBuf,
        #[command(flatten)]
        session: SessionArgs,
    },
    /// Interactive session
    Repl {
        #[command(flatten)]
        session: SessionArgs,
    },
}

#[derive(Args)]
struct SessionArgs {
    /// Seed for models without a `seed` option
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    /// Where trained models are saved and looked up
    #[arg(long, env = "MINIBQML_MODEL_DIR")]
    model_dir: Option<PathBuf>,
}

impl SessionArgs {
    fn config(self) -> SessionConfig {
        // the environment variable wins over the flag
        let model_dir = std::env::var_os("MINIBQML_MODEL_DIR")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(self.model_dir);
        SessionConfig {
            seed: self.seed,
            output_format: self.format,
            model_dir,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let code = match cli.command {
        Command::Run { script, session } => {
            run_script(&script, &session.config(), &mut stdout.lock(), &mut stderr.lock())
        }
        Command::Repl { session } => {
            let stdin = io::stdin();
            let interactive = stdin.is_terminal();
            repl(
                &session.config(),
                &mut stdin.lock(),
                &mut stdout.lock(),
                &mut stderr.lock(),
                interactive,
            )
        }
    };
    ExitCode::from(code as u8)
}
