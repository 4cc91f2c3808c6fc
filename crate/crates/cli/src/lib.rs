//! `irrbase` command-line front end.

pub mod args;
mod commands;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use irrbase::report::{emit_figure1, Format, OutputMeta};
use irrbase::Error;
use sha2::{Digest, Sha256};

use args::{Cli, Command, OutFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAULT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// First 16 hex digits of the SHA-256 of everything that affects the numbers.
pub fn config_hash(cli: &Cli) -> String {
    let canon = format!("{:?}|{:?}", cli.common, cli.command);
    Sha256::digest(canon.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::DepthCap { .. } | Error::BranchBoundary { .. } | Error::OverCap { .. } => {
            EXIT_USAGE
        }
        _ => EXIT_FAULT,
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Error> {
    let meta = OutputMeta {
        version: env!("CARGO_PKG_VERSION").to_string(),
        parse_id: irrbase::exact::SnParse::from(cli.common.parse).id().to_string(),
        config_hash: config_hash(cli),
    };
    if let Command::Plot = cli.command {
        let Some(path) = &cli.io.out else {
            return Err(Error::InvalidInput("plot needs --out <file.svg>".into()));
        };
        let rows = commands::series_rows(cli)?;
        return emit_figure1(&rows, path);
    }
    let table = commands::table(cli)?;
    let format = match cli.common.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    let text = format.render(&table, &meta);
    match &cli.io.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io { path: path.clone(), source: e }),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io { path: "<stdout>".into(), source: e }),
    }
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "irrbase {}: {e}", cli.command.name());
            exit_code(&e)
        }
    }
}
