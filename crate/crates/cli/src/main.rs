mod config;
mod experiments;
mod report;

use clap::Parser;

use config::{Args, Experiment, Format};
use experiments::Failure;

fn main() {
    let args = Args::parse();
    if let Some(threads) = args.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            std::process::exit(2);
        }
        // ignore failure if a pool already exists (repeated init in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match run(&args) {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: numerical validity failure: {msg}");
            std::process::exit(3);
        }
    }
}

fn run(args: &Args) -> Result<(), Failure> {
    let report = match args.experiment {
        Experiment::HeraldSurface => experiments::herald_surface(args)?,
        Experiment::Wigner => experiments::wigner(args)?,
        Experiment::Entropy => experiments::entropy(args)?,
        Experiment::KerrDemo => experiments::kerr_demo(args)?,
        Experiment::MinusConvert => experiments::minus_convert(args)?,
    };
    let payload = match args.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    // assemble fully in memory first so a failed run leaves no partial file
    if let Err(e) = std::fs::write(&args.out, payload) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        std::process::exit(1);
    }
    Ok(())
}
