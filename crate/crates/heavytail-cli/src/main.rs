//! Command line driver for the heavytail random matrix laboratory.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use heavytail::error::Error;
use heavytail::experiment::{
    self, freeprob_check, poisson_limit_probe, run_figure, saturation_probe, transition_scan,
    RunConfig,
};

const USAGE: &str = "\
heavytail - Monte Carlo laboratory for heavy-tailed unitarily invariant
random matrix ensembles

USAGE:
  heavytail figure <name> [FLAGS]      figure-level experiment; names:
                                       macro, softedge, tail, tail-individual,
                                       spacing-sum-vs-direct, cauchy-compare,
                                       stable-density, stable-spacing
  heavytail transition-scan [FLAGS]    spacing statistics near N^gamma base
                                       points (needs --m >= 2)
  heavytail poisson-probe [FLAGS]      within-cluster spacings vs e^{-s}
                                       across an L grid
  heavytail saturation-probe [FLAGS]   mean unfolded extreme positions
                                       across an N grid
  heavytail freeprob-check [FLAGS]     empirical R/S-transform deviations
  heavytail reference <curve> [FLAGS]  emit an analytic curve as CSV; curves:
                                       mp, inv-mp, airy-edge, bessel-hard-edge,
                                       inverse-bessel, tail, fuss-catalan,
                                       macro, meijer-kernel, inverse-meijer,
                                       poisson-spacing, wigner-surmise,
                                       averaged-semicircle, cauchy,
                                       unfolding-map

FLAGS (flag wins over --config):
  --config PATH     flat key=value experiment file
  --seed U64        master seed (trial t derives its own stream)
  --trials N        Monte Carlo trials
  --n DIM           matrix dimension
  --m M             product chain length
  --l L             summand count (single value)
  --l-grid LIST     comma separated summand counts
  --n-grid LIST     comma separated dimensions (saturation probe)
  --alpha LIST      stability exponents (stable GUE experiments)
  --gamma-grid LIST scan exponents (transition scan)
  --sigma S         GUE standard deviation
  --bin-macro W     macroscopic bin width   (default 0.1)
  --bin-micro W     microscopic bin width   (default 0.2)
  --bin-spacing W   spacing bin width       (default 0.1)
  --workers N|auto  worker threads
  --out DIR         output directory        (default runs)
  --no-cache        disable the eigenvalue cache
  --min X --max X --points N   reference grid (default 0..4, 401 points)

EXIT CODES:
  0 success, 2 configuration error, 3 numerical non-convergence
";

struct Cli {
    config: RunConfig,
    min: f64,
    max: f64,
    points: usize,
}

fn parse_flags(mut args: std::env::Args, defaults: &[(&str, &str)]) -> Result<Cli, Error> {
    let mut pending: Vec<(String, String)> = Vec::new();
    let mut config_path: Option<PathBuf> = None;
    let mut min = 0.0f64;
    let mut max = 4.0f64;
    let mut points = 401usize;
    while let Some(arg) = args.next() {
        let mut take = |name: &str| -> Result<String, Error> {
            args.next().ok_or_else(|| Error::InvalidConfig {
                detail: format!("{name} needs a value"),
            })
        };
        match arg.as_str() {
            "--config" => config_path = Some(PathBuf::from(take("--config")?)),
            "--no-cache" => pending.push(("cache".into(), "off".into())),
            "--seed" | "--trials" | "--n" | "--m" | "--l" | "--l-grid" | "--n-grid"
            | "--alpha" | "--alpha-grid" | "--gamma-grid" | "--sigma" | "--workers" | "--out"
            | "--bin-macro" | "--bin-micro" | "--bin-spacing" => {
                let value = take(&arg)?;
                pending.push((arg.trim_start_matches("--").to_string(), value));
            }
            "--min" => {
                min = take("--min")?.parse().map_err(|_| Error::InvalidConfig {
                    detail: "--min expects a number".into(),
                })?
            }
            "--max" => {
                max = take("--max")?.parse().map_err(|_| Error::InvalidConfig {
                    detail: "--max expects a number".into(),
                })?
            }
            "--points" => {
                points = take("--points")?.parse().map_err(|_| Error::InvalidConfig {
                    detail: "--points expects a count".into(),
                })?
            }
            other => {
                return Err(Error::InvalidConfig {
                    detail: format!("unknown flag '{other}'"),
                })
            }
        }
    }
    let mut config = match &config_path {
        Some(p) => RunConfig::from_file(Path::new(p))?,
        None => RunConfig::default(),
    };
    // probe defaults sit under the config file, which sits under flags
    if config_path.is_none() {
        for (k, v) in defaults {
            config.set(k, v)?;
        }
    }
    for (k, v) in &pending {
        config.set(k, v)?;
    }
    Ok(Cli {
        config,
        min,
        max,
        points,
    })
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::InvalidConfig { .. } => ExitCode::from(2),
        Error::NonConvergence { .. } | Error::ContourSeparation { .. } => ExitCode::from(3),
        _ => ExitCode::from(1),
    }
}

fn run() -> Result<(), Error> {
    let mut args = std::env::args();
    let _bin = args.next();
    let sub = args.next().unwrap_or_default();
    match sub.as_str() {
        "figure" => {
            let name = args.next().ok_or_else(|| Error::InvalidConfig {
                detail: "figure needs an experiment name".into(),
            })?;
            if !experiment::EXPERIMENTS.contains(&name.as_str()) {
                return Err(Error::InvalidConfig {
                    detail: format!("unknown figure '{name}'"),
                });
            }
            let mut cli = parse_flags(args, &[])?;
            cli.config.experiment = name;
            let summary = run_figure(&cli.config)?;
            println!(
                "wrote {} comparison(s) under {}",
                summary.comparisons.len(),
                cli.config.out_dir.display()
            );
            Ok(())
        }
        "transition-scan" => {
            let mut cli = parse_flags(args, &[("m", "2"), ("l", "2"), ("trials", "2000")])?;
            cli.config.experiment = "transition-scan".into();
            let report = transition_scan(&cli.config)?;
            println!(
                "scanned {} gamma points; report under {}",
                report.points.len(),
                cli.config.out_dir.display()
            );
            Ok(())
        }
        "poisson-probe" => {
            let mut cli = parse_flags(
                args,
                &[("n", "200"), ("l-grid", "2,4,8,16"), ("trials", "2000")],
            )?;
            cli.config.experiment = "poisson-probe".into();
            let report = poisson_limit_probe(&cli.config)?;
            println!(
                "probed {} summand counts; decreasing trend: {}",
                report.points.len(),
                report.ks_within_strictly_decreasing
            );
            Ok(())
        }
        "saturation-probe" => {
            let mut cli = parse_flags(args, &[("trials", "400")])?;
            cli.config.experiment = "saturation-probe".into();
            let report = saturation_probe(&cli.config)?;
            println!(
                "measured {} (alpha, N) points; report under {}",
                report.points.len(),
                cli.config.out_dir.display()
            );
            Ok(())
        }
        "freeprob-check" => {
            let mut cli =
                parse_flags(args, &[("n", "200"), ("trials", "1000"), ("l-grid", "1,2,4")])?;
            cli.config.experiment = "freeprob-check".into();
            let report = freeprob_check(&cli.config)?;
            let worst = report
                .r_checks
                .iter()
                .map(|c| c.max_r_deviation)
                .fold(0.0f64, f64::max);
            println!("worst R-transform deviation: {worst:.4}");
            Ok(())
        }
        "reference" => {
            let name = args.next().ok_or_else(|| Error::InvalidConfig {
                detail: "reference needs a curve name".into(),
            })?;
            let mut cli = parse_flags(args, &[])?;
            cli.config.experiment = format!("reference-{name}");
            let path =
                experiment::write_reference_csv(&cli.config, &name, cli.min, cli.max, cli.points)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(())
        }
        "" => {
            eprint!("{USAGE}");
            Err(Error::InvalidConfig {
                detail: "missing subcommand".into(),
            })
        }
        other => Err(Error::InvalidConfig {
            detail: format!("unknown subcommand '{other}'"),
        }),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::InvalidConfig { .. }) {
                eprintln!("run `heavytail help` for usage");
            }
            exit_code_for(&e)
        }
    }
}
