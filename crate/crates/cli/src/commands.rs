use std::fmt::Write;
use std::path::Path;

use galois_core::lab::{run_experiment, LabOptions, LabResult};
use galois_core::{apply_b, apply_bstar, solve, ExtReal, Side, Status};

use crate::error::{CliError, EXIT_FAILURE, EXIT_NO_SOLUTION};
use crate::problem_file::{ProblemFile, Values};
use crate::report::{fmt_ext, fmt_sig, render_human, ReportFile};

/// Text for stdout and the process exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn cmd_solve(path: &Path, x_restrict: Option<&[String]>, json: bool, tol: Option<f64>) -> Result<Outcome, CliError> {
    let file = ProblemFile::load(path)?;
    let problem = file.build(x_restrict, tol)?;
    let sol = solve(&problem)?;
    let report = ReportFile::new(&problem, &sol);
    let stdout = if json {
        let mut s = serde_json::to_string_pretty(&report).map_err(CliError::Json)?;
        s.push('\n');
        s
    } else {
        render_human(&problem, &sol, &report)
    };
    let code = if sol.status == Status::NoSolution { EXIT_NO_SOLUTION } else { 0 };
    Ok(Outcome { code, stdout })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    B,
    Bstar,
}

/// Parses inline JSON, a comma-separated list, or a path to a JSON file.
pub fn parse_values(arg: &str) -> Result<Values, CliError> {
    let t = arg.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return serde_json::from_str(t).map_err(CliError::Json);
    }
    let path = Path::new(t);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(t.to_owned(), e))?;
        return serde_json::from_str(&text).map_err(CliError::Json);
    }
    t.split(',')
        .map(|tok| parse_ext(tok.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(Values::List)
}

fn parse_ext(tok: &str) -> Result<ExtReal, CliError> {
    match tok {
        "+inf" | "inf" => Ok(ExtReal::POS_INF),
        "-inf" => Ok(ExtReal::NEG_INF),
        _ => tok
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(ExtReal::finite)
            .ok_or_else(|| CliError::Usage(format!("cannot read {tok:?} as a value; use a number, +inf or -inf"))),
    }
}

pub fn cmd_apply(path: &Path, direction: Direction, f: Option<&str>, g: Option<&str>, json: bool) -> Result<Outcome, CliError> {
    let file = ProblemFile::load(path)?;
    let kernel = file.build_kernel()?;
    let result = match direction {
        Direction::B => {
            let f = f.ok_or_else(|| CliError::Usage("--direction B needs --f".into()))?;
            apply_b(&kernel, &parse_values(f)?.to_function(&kernel, Side::Y)?)?
        }
        Direction::Bstar => {
            let g = match g {
                Some(g) => parse_values(g)?,
                None => file.g.clone().ok_or_else(|| CliError::Usage("--direction Bstar needs --g or a g in the file".into()))?,
            };
            apply_bstar(&kernel, &g.to_function(&kernel, Side::X)?)?
        }
    };
    let pairs = result.labeled(&kernel);
    let stdout = if json {
        let map: indexmap::IndexMap<&str, ExtReal> = pairs.into_iter().collect();
        let mut s = serde_json::to_string_pretty(&map).map_err(CliError::Json)?;
        s.push('\n');
        s
    } else {
        let width = pairs.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        pairs.iter().fold(String::new(), |mut s, (l, v)| {
            let _ = writeln!(s, "{l:<width$}  {}", fmt_ext(*v));
            s
        })
    };
    Ok(Outcome { code: 0, stdout })
}

pub fn cmd_lab(name: &str, opts: &LabOptions, json: bool, csv: Option<&Path>) -> Result<Outcome, CliError> {
    let result = run_experiment(name, opts)?;
    if let Some(path) = csv {
        write_csv(&result, path)?;
    }
    let stdout = if json {
        let mut s = serde_json::to_string_pretty(&result).map_err(CliError::Json)?;
        s.push('\n');
        s
    } else {
        render_lab(&result)
    };
    Ok(Outcome { code: if result.pass { 0 } else { EXIT_FAILURE }, stdout })
}

fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        fmt_sig(v)
    } else if v > 0.0 {
        "+inf".into()
    } else {
        "-inf".into()
    }
}

pub fn render_lab(r: &LabResult) -> String {
    let mut out = String::new();
    let verdict = |p: bool| if p { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "experiment: {}", r.name);
    let _ = writeln!(out, "result: {}", verdict(r.pass));
    let _ = writeln!(out, "max error: {} (tolerance {})", fmt_f(r.max_abs_error), fmt_f(r.tolerance));
    out.push_str("checks:\n");
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &r.checks {
        let _ = writeln!(
            out,
            "  {} {:<width$}  error {}  tolerance {}",
            verdict(c.pass),
            c.name,
            fmt_f(c.max_abs_error),
            fmt_f(c.tolerance)
        );
    }
    out.push_str("fields:\n");
    for (k, v) in &r.fields {
        let v = match v {
            galois_core::lab::FieldValue::Flag(b) => b.to_string(),
            galois_core::lab::FieldValue::Number(n) => fmt_ext(*n),
            galois_core::lab::FieldValue::Text(t) => t.clone(),
        };
        let _ = writeln!(out, "  {k}: {v}");
    }
    out
}

/// Writes each series as CSV; series after the first get a `-name` suffix.
fn write_csv(r: &LabResult, path: &Path) -> Result<(), CliError> {
    for (k, s) in r.series.iter().enumerate() {
        let target = if k == 0 {
            path.to_path_buf()
        } else {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
            path.with_file_name(format!("{stem}-{}.csv", s.name))
        };
        let mut text = s.columns.join(",");
        text.push('\n');
        for row in &s.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|&v| if v.is_finite() { v.to_string() } else { fmt_f(v) })
                .collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        std::fs::write(&target, text).map_err(|e| CliError::Io(target.display().to_string(), e))?;
    }
    Ok(())
}
