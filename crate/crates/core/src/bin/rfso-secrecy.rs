use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rfso_secrecy::cli::{
    figure_preset, load_config, parse_list, run_sweep, validate, write_csv, Axis, Curve, ResultRow, SweepSpec,
};
use rfso_secrecy::Error;

/// Secrecy outage and strictly positive secrecy capacity sweeps for a
/// dual-hop η-μ / DGG RF-FSO link.
#[derive(Parser, Debug)]
#[command(name = "rfso-secrecy", version)]
struct Args {
    /// Config file with [scenario] and [sweep] sections.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// fig1 .. fig10, st, mt, wt or lognormal.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated subset of sop1, sop2, spsc1, spsc2.
    #[arg(long)]
    metrics: Option<String>,
    /// Comma-separated subset of closed, asymptotic, exact_quadrature, mc, mc_exact.
    #[arg(long)]
    evaluators: Option<String>,
    #[arg(long)]
    mc_samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file, or - for standard output.
    #[arg(long, value_name = "PATH|-", default_value = "-")]
    out: String,
}

fn configure(args: &Args) -> Result<(Vec<Curve>, SweepSpec), Error> {
    let (curves, mut sweep) = match (&args.config, &args.preset) {
        (Some(path), None) => {
            let (sc, sw) = load_config(path)?;
            (vec![Curve { label: "config".into(), scenario: sc }], sw)
        }
        (None, Some(name)) => {
            let p = figure_preset(name)?;
            (p.curves, p.sweep)
        }
        _ => return Err(Error::Config("exactly one of --config or --preset is required".into())),
    };
    if let Some(a) = &args.axis {
        sweep.axis = a.parse::<Axis>()?;
    }
    if let Some(v) = args.start {
        sweep.start = v;
    }
    if let Some(v) = args.stop {
        sweep.stop = v;
    }
    if let Some(v) = args.points {
        sweep.points = v;
    }
    if let Some(v) = &args.metrics {
        sweep.metrics = parse_list(v)?;
    }
    if let Some(v) = &args.evaluators {
        sweep.evaluators = parse_list(v)?;
    }
    if let Some(v) = args.mc_samples {
        sweep.mc_samples = v;
    }
    if let Some(v) = args.seed {
        sweep.seed = v;
    }
    validate(&curves, &sweep)?;
    Ok((curves, sweep))
}

fn summary(rows: &[ResultRow]) {
    let failed: Vec<&ResultRow> = rows.iter().filter(|r| r.failed()).collect();
    let clamped = rows.iter().filter(|r| r.error_flag == "clamped").count();
    eprintln!("{} rows, {} failed, {} clamped", rows.len(), failed.len(), clamped);
    for r in failed {
        eprintln!(
            "  {} {}={} {} {}: {}",
            r.curve,
            r.axis,
            r.axis_value,
            r.metric,
            r.evaluator,
            r.error.as_deref().unwrap_or("")
        );
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (curves, sweep) = match configure(&args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("rfso-secrecy: {e}");
            return ExitCode::from(2);
        }
    };
    let rows = run_sweep(&curves, &sweep);
    let written = if args.out == "-" {
        write_csv(&rows, io::stdout().lock())
    } else {
        File::create(&args.out).and_then(|f| {
            let mut w = BufWriter::new(f);
            write_csv(&rows, &mut w)?;
            w.flush()
        })
    };
    if let Err(e) = written {
        eprintln!("rfso-secrecy: cannot write {}: {e}", args.out);
        return ExitCode::from(2);
    }
    summary(&rows);
    if rows.iter().any(ResultRow::failed) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
