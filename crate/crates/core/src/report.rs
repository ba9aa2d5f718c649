//! Running a configuration and rendering the results.
//!
//! Reports come in two formats: a human-readable text table and a
//! versioned JSON document (`"format": "tamed-index-report"`). Both are
//! deterministic, so the same configuration always produces the same bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{analytic_modes, window_weights, AnalyticError, KernelDims};
use crate::characters::{Character, CharacterError, Rational, Weight};
use crate::config::{ConfigError, ProblemConfig};
use crate::fixed_point::{topological_index, FixedPointError};
use crate::taming::Verdict;

pub const FORMAT_NAME: &str = "tamed-index-report";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    FixedPoint(#[from] FixedPointError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Character(#[from] CharacterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// Kernel dimensions of one mode, or the reason they are unavailable.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub weight: Weight,
    pub dims: Result<KernelDims, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Topological,
    Analytic,
}

impl IndexKind {
    fn name(self) -> &'static str {
        match self {
            IndexKind::Topological => "topological",
            IndexKind::Analytic => "analytic",
        }
    }
}

/// The outcome of `topo` or `analytic`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub kind: IndexKind,
    pub taming: Vec<Rational>,
    pub window: (Rational, Rational),
    pub character: Character,
    /// Per-mode detail for the analytic side.
    pub modes: Vec<ModeRow>,
    pub admissibility: Option<Verdict>,
}

pub fn run_topological(cfg: &ProblemConfig) -> Result<IndexReport, RunError> {
    let character = topological_index(&cfg.components, &cfg.v, &cfg.window(), &cfg.tables)?;
    Ok(IndexReport {
        kind: IndexKind::Topological,
        taming: cfg.v.vector().to_vec(),
        window: cfg.window.clone(),
        character,
        modes: Vec::new(),
        admissibility: None,
    })
}

fn no_analytic() -> RunError {
    RunError::Usage("configuration has no [analytic] section".into())
}

pub fn run_analytic(cfg: &ProblemConfig) -> Result<IndexReport, RunError> {
    let a = cfg.analytic.as_ref().ok_or_else(no_analytic)?;
    let model = a.plane_model()?;
    let window = cfg.window();
    let verdict = model.admissibility(&cfg.v).verdict;
    let modes = analytic_modes(&model, &cfg.v, &window, a.tol)?;
    let mut entries = Vec::with_capacity(modes.len());
    let mut rows = Vec::with_capacity(modes.len());
    for m in modes {
        let dims = m.dims?;
        entries.push((m.weight.clone(), BigInt::from(dims.index())));
        rows.push(ModeRow { weight: m.weight, dims: Ok(dims) });
    }
    let character = Character::from_entries(1, entries, window)?;
    Ok(IndexReport {
        kind: IndexKind::Analytic,
        taming: cfg.v.vector().to_vec(),
        window: cfg.window.clone(),
        character,
        modes: rows,
        admissibility: Some(verdict),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ComparisonVerdict {
    Match,
    Mismatch,
    Partial,
}

impl ComparisonVerdict {
    /// Process exit status: 0 MATCH, 3 MISMATCH, 2 PARTIAL.
    pub fn exit_code(self) -> i32 {
        match self {
            ComparisonVerdict::Match => 0,
            ComparisonVerdict::Partial => 2,
            ComparisonVerdict::Mismatch => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ComparisonVerdict::Match => "MATCH",
            ComparisonVerdict::Mismatch => "MISMATCH",
            ComparisonVerdict::Partial => "PARTIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub weight: Weight,
    pub topological: BigInt,
    /// `Err` holds the reason the analytic count is unavailable.
    pub analytic: Result<KernelDims, String>,
}

impl ComparisonRow {
    pub fn matches(&self) -> Option<bool> {
        self.analytic.as_ref().ok().map(|d| BigInt::from(d.index()) == self.topological)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub taming: Vec<Rational>,
    pub window: (Rational, Rational),
    pub support_bound: Option<Rational>,
    pub admissibility: Verdict,
    pub rows: Vec<ComparisonRow>,
    pub verdict: ComparisonVerdict,
}

/// Both indices weight by weight. Any disagreement is a MISMATCH; otherwise
/// a missing analytic count or a failed admissibility check makes the
/// result PARTIAL.
pub fn run_compare(cfg: &ProblemConfig) -> Result<ComparisonReport, RunError> {
    let a = cfg.analytic.as_ref().ok_or_else(no_analytic)?;
    let model = a.plane_model()?;
    let window = cfg.window();
    let topo = topological_index(&cfg.components, &cfg.v, &window, &cfg.tables)?;
    let admissibility = model.admissibility(&cfg.v).verdict;
    let analytic: Vec<Result<KernelDims, String>> = match analytic_modes(&model, &cfg.v, &window, a.tol) {
        Ok(modes) => modes.into_iter().map(|m| m.dims.map_err(|e| e.to_string())).collect(),
        Err(AnalyticError::AdmissibilityFailed) => {
            let n = window_weights(&cfg.v, &window)?.len();
            vec![Err(AnalyticError::AdmissibilityFailed.to_string()); n]
        }
        Err(e) => return Err(e.into()),
    };
    let weights = window_weights(&cfg.v, &window)?;
    let mut rows = Vec::with_capacity(weights.len());
    for (alpha, dims) in weights.into_iter().zip(analytic) {
        let weight = Weight::new(vec![alpha]);
        let topological = topo.mult(&weight)?;
        rows.push(ComparisonRow { weight, topological, analytic: dims });
    }
    let verdict = if rows.iter().any(|r| r.matches() == Some(false)) {
        ComparisonVerdict::Mismatch
    } else if admissibility != Verdict::Pass || rows.iter().any(|r| r.matches().is_none()) {
        ComparisonVerdict::Partial
    } else {
        ComparisonVerdict::Match
    };
    Ok(ComparisonReport {
        taming: cfg.v.vector().to_vec(),
        window: cfg.window.clone(),
        support_bound: topo.support_bound().map(|b| b.c.clone()),
        admissibility,
        rows,
        verdict,
    })
}

fn join(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct MachineWindow {
    lo: String,
    hi: String,
}

impl MachineWindow {
    fn new(w: &(Rational, Rational)) -> Self {
        MachineWindow { lo: w.0.to_string(), hi: w.1.to_string() }
    }
}

#[derive(Serialize)]
struct MachineDims {
    even: usize,
    odd: usize,
}

#[derive(Serialize)]
struct MachineEntry<'a> {
    weight: &'a [i64],
    mult: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel: Option<MachineDims>,
}

#[derive(Serialize)]
struct MachineIndex<'a> {
    format: &'static str,
    version: u32,
    kind: &'static str,
    taming_vector: Vec<String>,
    window: MachineWindow,
    support_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    admissibility: Option<Verdict>,
    entries: Vec<MachineEntry<'a>>,
}

#[derive(Serialize)]
struct MachineRow<'a> {
    weight: &'a [i64],
    topological: String,
    analytic: Option<String>,
    kernel: Option<MachineDims>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'a str>,
}

#[derive(Serialize)]
struct MachineComparison<'a> {
    format: &'static str,
    version: u32,
    kind: &'static str,
    taming_vector: Vec<String>,
    window: MachineWindow,
    support_bound: Option<String>,
    admissibility: Verdict,
    rows: Vec<MachineRow<'a>>,
    verdict: ComparisonVerdict,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

impl IndexReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Machine => self.render_machine(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} index", self.kind.name());
        let _ = writeln!(out, "taming vector: {}", join(&self.taming));
        let _ = writeln!(out, "window: {} : {}", self.window.0, self.window.1);
        if let Some(b) = self.character.support_bound() {
            let _ = writeln!(out, "support bound: {}", b.c);
        }
        if let Some(v) = self.admissibility {
            let _ = writeln!(out, "admissibility: {v}");
        }
        if self.modes.is_empty() {
            out.push_str(&self.character.render());
        } else {
            for row in &self.modes {
                let m = self.character.mult(&row.weight).unwrap_or_default();
                match &row.dims {
                    Ok(d) => {
                        let _ = writeln!(out, "{} {} (ker+ {}, ker- {})", row.weight, m, d.even, d.odd);
                    }
                    Err(reason) => {
                        let _ = writeln!(out, "{} unavailable: {}", row.weight, reason);
                    }
                }
            }
        }
        out
    }

    fn render_machine(&self) -> String {
        let entries = if self.modes.is_empty() {
            self.character
                .entries()
                .map(|(w, m)| MachineEntry { weight: w.coords(), mult: m.to_string(), kernel: None })
                .collect()
        } else {
            self.modes
                .iter()
                .filter_map(|row| {
                    let d = row.dims.as_ref().ok()?;
                    Some(MachineEntry {
                        weight: row.weight.coords(),
                        mult: d.index().to_string(),
                        kernel: Some(MachineDims { even: d.even, odd: d.odd }),
                    })
                })
                .collect()
        };
        to_json(&MachineIndex {
            format: FORMAT_NAME,
            version: FORMAT_VERSION,
            kind: self.kind.name(),
            taming_vector: self.taming.iter().map(|x| x.to_string()).collect(),
            window: MachineWindow::new(&self.window),
            support_bound: self.character.support_bound().map(|b| b.c.to_string()),
            admissibility: self.admissibility,
            entries,
        })
    }
}

impl ComparisonReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Machine => self.render_machine(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "comparison");
        let _ = writeln!(out, "taming vector: {}", join(&self.taming));
        let _ = writeln!(out, "window: {} : {}", self.window.0, self.window.1);
        match &self.support_bound {
            Some(c) => {
                let _ = writeln!(out, "support bound: {c}");
            }
            None => {
                let _ = writeln!(out, "support bound: none");
            }
        }
        let _ = writeln!(out, "admissibility: {}", self.admissibility);
        let _ = writeln!(out, "{:<10} {:>12} {:>12}  status", "weight", "topological", "analytic");
        for r in &self.rows {
            let (analytic, status) = match (&r.analytic, r.matches()) {
                (Ok(d), Some(true)) => (d.index().to_string(), "match".to_string()),
                (Ok(d), _) => (d.index().to_string(), "MISMATCH".to_string()),
                (Err(reason), _) => ("-".to_string(), format!("unavailable: {reason}")),
            };
            let _ = writeln!(out, "{:<10} {:>12} {:>12}  {}", r.weight.to_string(), r.topological, analytic, status);
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.name());
        out
    }

    fn render_machine(&self) -> String {
        let rows = self
            .rows
            .iter()
            .map(|r| MachineRow {
                weight: r.weight.coords(),
                topological: r.topological.to_string(),
                analytic: r.analytic.as_ref().ok().map(|d| d.index().to_string()),
                kernel: r.analytic.as_ref().ok().map(|d| MachineDims { even: d.even, odd: d.odd }),
                status: match r.matches() {
                    Some(true) => "match",
                    Some(false) => "mismatch",
                    None => "unavailable",
                },
                reason: r.analytic.as_ref().err().map(|s| s.as_str()),
            })
            .collect();
        to_json(&MachineComparison {
            format: FORMAT_NAME,
            version: FORMAT_VERSION,
            kind: "compare",
            taming_vector: self.taming.iter().map(|x| x.to_string()).collect(),
            window: MachineWindow::new(&self.window),
            support_bound: self.support_bound.as_ref().map(|c| c.to_string()),
            admissibility: self.admissibility,
            rows,
            verdict: self.verdict,
        })
    }
}
