use clap::Parser;
use kgrec_service::cli::{run, Cli, CliError};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = if matches!(e, CliError::Usage(_)) {
            2
        } else {
            1
        };
        std::process::exit(code);
    }
}
