use std::fs::File;
use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use waveguide_cli::args::Cli;
use waveguide_cli::{run, EXIT_IO, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(f.code);
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path)
            .map_err(csv::Error::from)
            .and_then(|f| outcome.table.write_csv(BufWriter::new(f)))
            .map(|()| println!("{}", outcome.summary)),
        None => outcome
            .table
            .write_csv(io::stdout().lock())
            .map(|()| eprintln!("{}", outcome.summary)),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::from(outcome.code)
}
