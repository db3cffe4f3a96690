use clap::error::ErrorKind;
use clap::Parser;
use slhnet::{run, Cli, CliError};

fn main() {
    let result = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => Err(CliError::Usage(e.to_string().trim_end().to_string())),
    };
    if let Err(e) = result {
        if matches!(&e, CliError::Io { source, .. } if source.kind() == std::io::ErrorKind::BrokenPipe) {
            return;
        }
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
