use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use qspline_core::decomp::{decompose_block, pauli_decompose, reconstruct, COEFFICIENT_CUTOFF};
use qspline_core::linalg::Matrix;
use qspline_core::pipeline::SplineProblem;
use qspline_core::report::format_value;
use qspline_core::{fit, FitReport, TargetKind};

use crate::args::{DecomposeArgs, RunArgs, Settings};
use crate::error::{exit, CliError};
use crate::svg;

/// Published NRMSE of the static QSplines model (20 knots); it was not run on sin.
pub const QSPLINES_BASELINE: [Option<f64>; 4] = [Some(0.4874), Some(0.5240), Some(0.1589), None];
/// Published NRMSE of the variational model at 16 knots.
pub const REPORTED: [f64; 4] = [0.0126, 0.0111, 0.0156, 0.0099];

fn io<T>(path: &Path, r: std::io::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    io(path, fs::write(path, contents))
}

pub fn fit_stem(function: TargetKind, knots: usize, seed: u64) -> String {
    format!("fit_{function}_K{knots}_seed{seed}")
}

/// Writes the CSV, the replay config and optionally the SVG; returns the CSV path.
fn write_fit_files(report: &FitReport, settings: &Settings) -> Result<PathBuf, CliError> {
    let stem = fit_stem(report.function, report.knots, settings.seed);
    let csv = settings.out.join(format!("{stem}.csv"));
    write_file(&csv, &report.to_csv())?;
    write_file(&settings.out.join(format!("{stem}.cfg")), &report.to_config_text())?;
    if settings.svg {
        write_file(&settings.out.join(format!("{stem}.svg")), &svg::render(report))?;
    }
    Ok(csv)
}

fn console(r: std::io::Result<()>) -> Result<(), CliError> {
    io(Path::new("<stdout>"), r)
}

pub fn fit_cmd(args: &RunArgs, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::resolve(args, env_seed)?;
    let function = settings.function.ok_or_else(|| CliError::Usage("fit needs --function (sigmoid, relu, elu or sin)".into()))?;
    let report = fit::<f64>(&settings.fit_config(function))?;
    io(&settings.out, fs::create_dir_all(&settings.out))?;
    let csv = write_fit_files(&report, &settings)?;
    console(writeln!(out, "function: {function}  K={}  seed={}", report.knots, settings.seed))?;
    console(writeln!(out, "NRMSE: {:.4e}", report.nrmse))?;
    console(writeln!(out, "classical NRMSE: {:.4e}", report.classical_nrmse))?;
    if let Some(c) = report.final_cost {
        console(writeln!(out, "final cost: {c:.4e}  converged: {}", report.converged))?;
    }
    console(writeln!(out, "mean bias: {:+.4e}", report.mean_bias))?;
    console(writeln!(out, "wrote {}", csv.display()))?;
    Ok(if report.converged { exit::OK } else { exit::NOT_CONVERGED })
}

fn cell(v: Option<f64>) -> String {
    match v {
        None => "—".to_string(),
        Some(v) if v.is_nan() => "NaN".to_string(),
        Some(v) if v != 0.0 && v.abs() < 1e-4 => format!("{v:.1e}"),
        Some(v) => format!("{v:.4}"),
    }
}

fn table_row(model: &str, knots: usize, values: [Option<f64>; 4]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| format!("{:>9}", cell(v))).collect();
    format!("{model:<30}{knots:>6}{}", cells.concat())
}

pub fn bench_cmd(args: &RunArgs, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::resolve(args, env_seed)?;
    io(&settings.out, fs::create_dir_all(&settings.out))?;
    let started = std::time::Instant::now();
    let results: Vec<Result<FitReport, CliError>> = TargetKind::ALL
        .par_iter()
        .map(|&kind| {
            let report = fit::<f64>(&settings.fit_config(kind))?;
            write_fit_files(&report, &settings)?;
            Ok(report)
        })
        .collect();
    let elapsed = started.elapsed().as_secs_f64();

    let pick = |f: fn(&FitReport) -> f64| -> [Option<f64>; 4] {
        let mut row = [None; 4];
        for (slot, r) in row.iter_mut().zip(&results) {
            *slot = Some(r.as_ref().map(f).unwrap_or(f64::NAN));
        }
        row
    };
    let header: String = ["Elu", "Relu", "Sigmoid", "Sin"].iter().map(|h| format!("{h:>9}")).collect();
    console(writeln!(out, "{:<30}{:>6}{header}", "Model", "Knots"))?;
    console(writeln!(out, "{}", table_row("QSplines (reported)", 20, QSPLINES_BASELINE)))?;
    console(writeln!(out, "{}", table_row("GHQSplines (reported)", 16, REPORTED.map(Some))))?;
    let label = if settings.classical_only {
        "Classical only (this run)".to_string()
    } else {
        format!("GHQSplines ({}, this run)", if settings.mode == crate::args::ModeArg::Exact { "exact" } else { "shots" })
    };
    console(writeln!(out, "{}", table_row(&label, settings.knots, pick(|r| r.nrmse))))?;
    console(writeln!(out, "{}", table_row("Classical oracle", settings.knots, pick(|r| r.classical_nrmse))))?;
    console(writeln!(out, "{}", table_row("Mean bias (this run)", settings.knots, pick(|r| r.mean_bias))))?;

    let mut summary = String::from("function,knots,nrmse,classical_nrmse,final_cost,converged,mean_bias\n");
    let mut code = exit::OK;
    for (kind, result) in TargetKind::ALL.iter().zip(&results) {
        match result {
            Ok(r) => {
                let cost = r.final_cost.map(format_value).unwrap_or_default();
                summary.push_str(&format!(
                    "{kind},{},{},{},{cost},{},{}\n",
                    r.knots,
                    format_value(r.nrmse),
                    format_value(r.classical_nrmse),
                    r.converged,
                    format_value(r.mean_bias)
                ));
                if !r.converged && code == exit::OK {
                    code = exit::NOT_CONVERGED;
                }
            }
            Err(e) => {
                summary.push_str(&format!("{kind},{},NaN,NaN,,false,NaN\n", settings.knots));
                console(writeln!(out, "{kind} failed: {e}"))?;
                code = match e {
                    CliError::Io { .. } => exit::IO,
                    _ => exit::FAILED,
                };
            }
        }
    }
    let path = settings.out.join(format!("bench_K{}_seed{}.csv", settings.knots, settings.seed));
    write_file(&path, &summary)?;
    console(writeln!(out, "total {elapsed:.2}s; wrote {}", path.display()))?;
    Ok(code)
}

pub fn decompose_cmd(args: &DecomposeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (decomposition, matrix) = match (&args.block, args.function.as_deref(), args.knots) {
        (Some(ab), None, None) => {
            let (a, b) = (ab[0], ab[1]);
            let m = Matrix::from_rows(&[vec![1.0 - a, a], vec![0.0, 1.0 - b]])?;
            (decompose_block(a, b), m)
        }
        (None, Some(f), Some(k)) => {
            let kind: TargetKind = f.parse()?;
            if !k.is_power_of_two() || !(2..=qspline_core::pipeline::MAX_KNOTS).contains(&k) {
                return Err(CliError::Usage(format!("--knots must be a power of two between 2 and 64, got {k}")));
            }
            let problem = SplineProblem::<f64>::build(kind, k, 1)?;
            (pauli_decompose(&problem.design.entries)?, problem.design.entries)
        }
        _ => return Err(CliError::Usage("decompose needs either --block A B or --function F --knots K".into())),
    };
    let terms: Vec<_> = decomposition.terms.iter().filter(|t| t.coefficient.abs() >= COEFFICIENT_CUTOFF).collect();
    for t in &terms {
        console(writeln!(out, "{}: {}", t.label(), format_value(t.coefficient)))?;
    }
    let error = reconstruct(&decomposition)?.max_abs_diff(&matrix);
    console(writeln!(out, "terms: {}", terms.len()))?;
    console(writeln!(out, "max reconstruction error: {error:.3e}"))?;
    Ok(exit::OK)
}
