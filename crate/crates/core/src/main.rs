use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use toric_exc::cohomology::CohomologyEngine;
use toric_exc::dataset::{load_fixture_file, load_fixtures, validate_fixture, FieldStatus, Fixture};
use toric_exc::divisor::DivisorClass;
use toric_exc::intersection::{bondal_criterion, FailureReason, WallCriterion};
use toric_exc::quiver::emit_dot;
use toric_exc::report::{analyze_fixture, render_markdown, AnalyzeOptions};

/// Exceptional-collection analysis on smooth complete toric varieties.
#[derive(Parser)]
#[command(name = "toric-exc", version)]
struct Cli {
    /// Fixture directory (falls back to TORIC_EXC_FIXTURES, then ./fixtures).
    #[arg(long, global = true)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one fixture: verdict, ordering or cycle witness, wall
    /// criterion, expectation check.
    Analyze {
        /// Fixture id (e.g. F.4D.0123) or a path to a fixture file.
        fixture: String,
        /// Always compute the full Hom tensor (implied by --dot).
        #[arg(long)]
        full_tensor: bool,
        /// Re-run cohomology with a wider enumeration box and compare.
        #[arg(long)]
        paranoid: bool,
        /// Write the degree-0 Hom quiver in DOT format to this file.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Print the cohomology table of a line bundle on a fixture's variety.
    Cohomology {
        fixture: String,
        /// Divisor class, comma-separated integers of length n - d.
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Run every fixture in a directory and tally verdicts.
    Batch {
        /// Fixture directory (defaults to the global fixture path).
        path: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print only the tally, not per-fixture lines.
        #[arg(long)]
        summary: bool,
    },
    /// Evaluate the numerical wall criterion on a fixture.
    Bondal { fixture: String },
    /// Recompute the pipeline for every fixture and cross-check each stored
    /// field.
    ValidateFixtures { path: Option<PathBuf> },
}

fn fixture_dir(cli_path: &Option<PathBuf>) -> PathBuf {
    if let Some(p) = cli_path {
        return p.clone();
    }
    if let Ok(p) = std::env::var("TORIC_EXC_FIXTURES") {
        return PathBuf::from(p);
    }
    PathBuf::from("fixtures")
}

fn load_one(dir: &Path, ident: &str) -> Result<Fixture> {
    let as_path = Path::new(ident);
    if as_path.is_file() {
        return Ok(load_fixture_file(as_path)?);
    }
    let fixtures = load_fixtures(dir)
        .with_context(|| format!("loading fixtures from {}", dir.display()))?;
    fixtures
        .into_iter()
        .find(|f| f.id == ident)
        .ok_or_else(|| anyhow!("no fixture named {ident:?} under {}", dir.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let dir = fixture_dir(&cli.fixtures);
    match &cli.command {
        Command::Analyze { fixture, full_tensor, paranoid, dot } => {
            let f = load_one(&dir, fixture)?;
            let opts = AnalyzeOptions {
                full_tensor: *full_tensor || dot.is_some(),
                paranoid: *paranoid,
                parallel: false,
            };
            let started = std::time::Instant::now();
            let analysis = analyze_fixture(&f, opts).map_err(|e| anyhow!(e))?;
            print!("{}", render_markdown(&analysis, &f.collection));
            eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
            if let Some(dot_path) = dot {
                let tensor = analysis.tensor.as_ref().expect("full tensor forced by --dot");
                let collection = toric_exc::quiver::Collection::new(f.collection_classes())
                    .map_err(|e| anyhow!(e.to_string()))?;
                std::fs::write(dot_path, emit_dot(&collection, tensor))
                    .with_context(|| format!("writing {}", dot_path.display()))?;
            }
            Ok(if analysis.matches_expectations() {
                ExitCode::from(0)
            } else {
                ExitCode::from(2)
            })
        }
        Command::Cohomology { fixture, class } => {
            let f = load_one(&dir, fixture)?;
            let variety = f.variety().map_err(|e| anyhow!(e))?;
            let coords: Vec<i64> = class
                .split(',')
                .map(|x| x.trim().parse::<i64>().context("class coordinates must be integers"))
                .collect::<Result<_>>()?;
            let expected = variety.picard_rank();
            if coords.len() != expected {
                return Err(anyhow!(
                    "class has {} coordinates, expected {expected}",
                    coords.len()
                ));
            }
            let engine = CohomologyEngine::new(&variety).map_err(|e| anyhow!(e.to_string()))?;
            let table = engine
                .cohomology_table(&DivisorClass(coords))
                .map_err(|e| anyhow!(e.to_string()))?;
            if table.is_zero() {
                println!("all zero");
            } else {
                for (deg, rank) in table.entries() {
                    println!("{deg}: {rank}");
                }
            }
            Ok(ExitCode::from(0))
        }
        Command::Batch { path, jobs, summary } => {
            let dir = path.clone().unwrap_or(dir);
            let fixtures = load_fixtures(&dir)
                .with_context(|| format!("loading fixtures from {}", dir.display()))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads((*jobs).max(1))
                .build()
                .context("building thread pool")?;
            let opts = AnalyzeOptions { full_tensor: false, paranoid: false, parallel: false };
            let results: Vec<(String, Result<toric_exc::report::Analysis, String>)> =
                pool.install(|| {
                    use rayon::prelude::*;
                    fixtures
                        .par_iter()
                        .map(|f| (f.id.clone(), analyze_fixture(f, opts)))
                        .collect()
                });
            let mut orderable = 0usize;
            let mut total = 0usize;
            let mut all_match = true;
            let mut errors = 0usize;
            for (id, res) in &results {
                match res {
                    Ok(a) => {
                        let counted = !a.flags.iter().any(|f| f == "coordinates_unverifiable");
                        if counted {
                            total += 1;
                            if a.verdict_name() == "Orderable" {
                                orderable += 1;
                            }
                        }
                        let status = if !a.matches_expectations() {
                            all_match = false;
                            "MISMATCH"
                        } else if !counted {
                            "FLAGGED"
                        } else {
                            "MATCH"
                        };
                        if !summary {
                            println!("{id}: {} [{status}]", a.verdict_name());
                        }
                    }
                    Err(e) => {
                        errors += 1;
                        all_match = false;
                        if !summary {
                            println!("{id}: ERROR ({e})");
                        }
                    }
                }
            }
            println!("orderable {orderable} / total {total}");
            if errors > 0 {
                println!("errors: {errors}");
            }
            Ok(if all_match { ExitCode::from(0) } else { ExitCode::from(2) })
        }
        Command::Bondal { fixture } => {
            let f = load_one(&dir, fixture)?;
            let variety = f.variety().map_err(|e| anyhow!(e))?;
            match bondal_criterion(&variety).map_err(|e| anyhow!(e.to_string()))? {
                WallCriterion::Pass => println!("Pass"),
                WallCriterion::Fail { relation, reason } => {
                    let rays: Vec<String> = relation
                        .wall
                        .iter()
                        .map(|&r| format!("{:?}", variety.fan.rays[r]))
                        .collect();
                    println!("Fail");
                    println!("wall: {}", rays.join(", "));
                    match reason {
                        FailureReason::CoefficientBelowMinusOne { ray, value } => {
                            println!(
                                "coefficient {value} on ray {:?}",
                                variety.fan.rays[ray]
                            );
                        }
                        FailureReason::MultipleMinusOnes { rays } => {
                            for r in rays {
                                println!("coefficient -1 on ray {:?}", variety.fan.rays[r]);
                            }
                        }
                    }
                }
            }
            Ok(ExitCode::from(0))
        }
        Command::ValidateFixtures { path } => {
            let dir = path.clone().unwrap_or(dir);
            let fixtures = load_fixtures(&dir)
                .with_context(|| format!("loading fixtures from {}", dir.display()))?;
            let mut clean = true;
            for f in &fixtures {
                let report = validate_fixture(&f);
                println!("{}:", report.id);
                for (field, status) in &report.fields {
                    let line = match status {
                        FieldStatus::Match => format!("  {field}: MATCH"),
                        FieldStatus::Mismatch(r) => {
                            clean = false;
                            format!("  {field}: MISMATCH ({r})")
                        }
                        FieldStatus::Flagged(r) => format!("  {field}: FLAGGED ({r})"),
                        FieldStatus::Skipped(r) => format!("  {field}: skipped ({r})"),
                    };
                    println!("{line}");
                }
            }
            Ok(if clean { ExitCode::from(0) } else { ExitCode::from(2) })
        }
    }
}
