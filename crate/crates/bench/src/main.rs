use clap::{CommandFactory, FromArgMatches};
use semiglobal_bench::cli::Cli;
use semiglobal_bench::{emit_results, run_sweep, BenchError};

fn run() -> Result<(), BenchError> {
    let matches = Cli::command().get_matches();
    let cli = Cli::from_arg_matches(&matches).map_err(|e| BenchError::Config(e.to_string()))?;
    let (out, format) = (cli.out.clone(), cli.format);
    let config = cli.into_config(&matches)?;
    let curve = run_sweep(&config)?;
    emit_results(&config, &curve, format, out.as_deref())?;
    match (&curve.fit, &curve.fit_error) {
        (Some(f), _) => eprintln!(
            "slope {:.3} over Δt ∈ [{}, {}] ({} points)",
            f.slope, f.dt_range[0], f.dt_range[1], f.points
        ),
        (None, Some(e)) => eprintln!("no fit: {e}"),
        _ => {}
    }
    if let Some(e) = curve.min_error() {
        eprintln!("minimum error {e:.3e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
