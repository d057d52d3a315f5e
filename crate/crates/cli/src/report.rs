//! Solver reports: the JSON record and the human-readable rendering.

use std::fmt::Write;

use galois_core::{Caveat, ExtReal, FunctionOnSpace, Kernel, Problem, Residual, Solution, Status};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub status: Status,
    pub f_min: IndexMap<String, ExtReal>,
    pub cover: CoverSection,
    pub witness_alt: Option<IndexMap<String, ExtReal>>,
    pub residual: IndexMap<String, Residual>,
    pub caveats: Vec<Caveat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    /// `(∂°g)⁻¹(y)` for y in ldom(B°g).
    pub sets: IndexMap<String, Vec<String>>,
    /// X′ ∩ udom(g)
    pub universe: Vec<String>,
    pub is_cover: bool,
    pub essential: Vec<String>,
    pub privately_covered: IndexMap<String, String>,
    pub minimal: bool,
    pub uncovered: Vec<String>,
    pub irredundant: Option<Vec<String>>,
}

fn labeled(kernel: &Kernel, f: &FunctionOnSpace) -> IndexMap<String, ExtReal> {
    f.labeled(kernel).into_iter().map(|(l, v)| (l.to_owned(), v)).collect()
}

impl ReportFile {
    pub fn new(problem: &Problem, sol: &Solution) -> Self {
        let k = problem.kernel();
        let (xl, yl) = (k.x_labels(), k.y_labels());
        let xs = |v: &[usize]| v.iter().map(|&i| xl[i].clone()).collect::<Vec<_>>();
        let ys = |v: &[usize]| v.iter().map(|&j| yl[j].clone()).collect::<Vec<_>>();
        let cover = CoverSection {
            sets: sol.index_pool.iter().map(|&y| (yl[y].clone(), xs(sol.inverse_sets.get(y)))).collect(),
            universe: xs(&sol.universe),
            is_cover: sol.cover.is_cover,
            essential: ys(&sol.cover.essential),
            privately_covered: sol.cover.privately_covered.iter().map(|&(y, x)| (yl[y].clone(), xl[x].clone())).collect(),
            minimal: sol.cover.is_minimal,
            uncovered: xs(&sol.cover.uncovered),
            irredundant: sol.irredundant.as_deref().map(ys),
        };
        Self {
            status: sol.status,
            f_min: labeled(k, &sol.f_min),
            cover,
            witness_alt: sol.witness_alt.as_ref().map(|w| labeled(k, w)),
            residual: xl.iter().cloned().zip(sol.residual.iter().copied()).collect(),
            caveats: sol.caveats.clone(),
        }
    }
}

/// `v` with 12 significant digits, trailing zeros dropped.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    let s = if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, v)
    } else {
        let s = format!("{v:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{e}", trim_zeros(mantissa));
    };
    trim_zeros(&s).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn fmt_ext(v: ExtReal) -> String {
    match v.finite_value() {
        Some(f) => fmt_sig(f),
        None => v.to_string(),
    }
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// Largest kernel for which the adjoint term table is printed.
const TABLE_LIMIT: usize = 2_500;

pub fn render_human(problem: &Problem, sol: &Solution, report: &ReportFile) -> String {
    let k = problem.kernel();
    let mut out = String::new();
    let _ = writeln!(out, "kernel: {} x points, {} y points", k.nx(), k.ny());
    if k.nx() * k.ny() <= TABLE_LIMIT {
        out.push_str(&adjoint_table(problem, sol));
    } else {
        let _ = writeln!(out, "(term table omitted for a {}x{} kernel)", k.nx(), k.ny());
    }
    let _ = writeln!(out, "status: {:?}", report.status);
    out.push_str("f_min = B°g:\n");
    pairs(&mut out, &report.f_min);

    let c = &report.cover;
    let _ = writeln!(out, "covering of X' ∩ udom(g) = {} by (∂°g)^-1(y), y in ldom(B°g):", set(&c.universe));
    let width = c.sets.keys().map(|l| l.chars().count()).max().unwrap_or(0);
    for (y, xs) in &c.sets {
        let private = c.privately_covered.get(y).map(|x| format!("  essential, privately covers {x}")).unwrap_or_default();
        let _ = writeln!(out, "  {y:<width$} -> {}{private}", set(xs));
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "  cover: {}  minimal: {}", yes(c.is_cover), yes(c.minimal));
    let _ = writeln!(out, "  essential: {}", set(&c.essential));
    let _ = writeln!(out, "  uncovered: {}", set(&c.uncovered));
    if let Some(irr) = &c.irredundant {
        let _ = writeln!(out, "  irredundant subcover: {}", set(irr));
    }
    if let Some(w) = &report.witness_alt {
        out.push_str("second solution:\n");
        pairs(&mut out, w);
    }
    out.push_str("residual (g vs BB°g):\n");
    let width = report.residual.keys().map(|l| l.chars().count()).max().unwrap_or(0);
    for (x, r) in &report.residual {
        let mark = if r.projected.approx_eq(r.g, problem.tolerance()) { "" } else { "  <" };
        let _ = writeln!(out, "  {x:<width$}  g = {}  BB°g = {}{mark}", fmt_ext(r.g), fmt_ext(r.projected));
    }
    let caveats: Vec<String> = report.caveats.iter().map(|c| format!("{c:?}")).collect();
    let _ = writeln!(out, "caveats: {}", if caveats.is_empty() { "none".into() } else { caveats.join(", ") });
    out
}

fn pairs(out: &mut String, m: &IndexMap<String, ExtReal>) {
    let width = m.keys().map(|l| l.chars().count()).max().unwrap_or(0);
    for (l, v) in m {
        let _ = writeln!(out, "  {l:<width$}  {}", fmt_ext(*v));
    }
}

/// Rows y, columns x: b°(y, x, g(x)), with `*` on the members of (∂°g)⁻¹(y).
fn adjoint_table(problem: &Problem, sol: &Solution) -> String {
    let k = problem.kernel();
    let g = problem.g();
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(k.ny() + 1);
    let mut head = vec![String::new()];
    head.extend(k.x_labels().iter().cloned());
    head.push("B°g(y)".into());
    cells.push(head);
    for y in 0..k.ny() {
        let mut row = vec![k.y_labels()[y].clone()];
        for x in 0..k.nx() {
            let cell = if k.in_support(x, y) {
                let star = if sol.inverse_sets.get(y).contains(&x) { "*" } else { " " };
                format!("{star}{}", fmt_ext(k.eval_adjoint(y, x, g.get(x))))
            } else {
                " .".into()
            };
            row.push(cell);
        }
        row.push(format!(" {}", fmt_ext(sol.f_min.get(y))));
        cells.push(row);
    }
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::from("adjoint terms b°(y, x, g(x)); * marks maximizers:\n");
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", line.join("  ").trim_end());
    }
    out
}
