#![forbid(unsafe_code)]

pub mod args;
pub mod commands;
pub mod output;
pub mod record;

pub use record::OutputRecord;

pub mod exit {
    pub const PASS: u8 = 0;
    pub const FAIL: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
    pub const INCONCLUSIVE: u8 = 3;
}

/// Overrides the default weight cap when `--max-weight` is absent.
pub const MAX_WEIGHT_ENV: &str = "WCI_DEFAULT_MAX_WEIGHT";

pub fn run() -> u8 {
    use clap::error::ErrorKind;
    use clap::Parser;

    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::PASS,
                _ => exit::INPUT_ERROR,
            };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wci: {e}");
            e.exit_code()
        }
    }
}
