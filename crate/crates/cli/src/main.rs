//! `netcorr`: generate, ingest, correlate and analyze network trajectories.

mod args;
mod config;
mod manifest;
mod run;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use netcorr::formats::atomic_write;

use args::Cli;

fn category(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<netcorr::Error>() {
        return e.category();
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return "io";
    }
    "config"
}

fn real_main() -> anyhow::Result<()> {
    let argv = config::expand(std::env::args().collect())?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let text = e.render().to_string();
            eprint!(
                "error[usage]: {}",
                text.strip_prefix("error: ").unwrap_or(&text)
            );
            std::process::exit(2);
        }
    };
    let start = Instant::now();
    let touched = netcorr::par::with_threads(cli.threads, || run::execute(&cli))?;
    let primary = touched.outputs.first().cloned();
    if let Some(out) = primary {
        let m = manifest::build(&cli, touched, start.elapsed().as_secs_f64())?;
        let json = serde_json::to_string_pretty(&m)?;
        atomic_write(&manifest::manifest_path(&out), |w| {
            writeln!(w, "{json}").map_err(|e| netcorr::Error::io("writing manifest", e))
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e:#}", category(&e));
            ExitCode::FAILURE
        }
    }
}
