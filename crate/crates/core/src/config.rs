//! The problem configuration: a flat, sectioned `key = value` format.
//!
//! ```text
//! rank = 1
//! v = 1
//! window = -4 : 0
//! [component pt]
//! dim = 0
//! normal_weights = (1)
//! summand = weight (0), parity +, rank 1
//! [analytic]
//! model = plane_rotation
//! n = 1
//! f0 = 4.0
//! R = 12.0
//! N = 2048
//! tol = 1e-6
//! ```
//!
//! Every number on the topological side is parsed exactly (integers,
//! `p/q` fractions or finite decimals); only the analytic model block holds
//! floating-point values. Unknown keys, duplicate keys and malformed values
//! are errors. See the book chapter on the command line for the full
//! grammar.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::analytic::PlaneRotationModel;
use crate::characters::{CharacterError, Rational, Weight, Window};
use crate::fixed_point::{
    FixedComponent, FixedPointError, LocalIndexTable, LocalIndexTables, NormalWeight, Parity, Summand,
};
use crate::taming::TamingData;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError::Syntax { line, message: message.into() })
}

fn semantic(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    PlaneRotation,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::PlaneRotation => "plane_rotation",
        }
    }
}

/// Parameters of the built-in analytic model.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticConfig {
    pub model: ModelKind,
    pub n: u32,
    pub f0: f64,
    pub radius: f64,
    pub points: usize,
    pub tol: Option<f64>,
    pub module: Parity,
}

impl AnalyticConfig {
    pub fn plane_model(&self) -> Result<PlaneRotationModel, crate::analytic::AnalyticError> {
        Ok(PlaneRotationModel::new(self.n, self.f0, self.radius, self.points)?.with_module_parity(self.module))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub rank: usize,
    pub v: TamingData,
    pub window: (Rational, Rational),
    pub components: Vec<FixedComponent>,
    pub tables: LocalIndexTables,
    pub analytic: Option<AnalyticConfig>,
}

impl ProblemConfig {
    pub fn window(&self) -> Window {
        Window::slab(&self.v, Some(self.window.0.clone()), Some(self.window.1.clone()))
    }

    /// Replace the window bounds, rechecking `lo ≤ hi`.
    pub fn set_window(&mut self, lo: Rational, hi: Rational) -> Result<(), ConfigError> {
        if lo > hi {
            return Err(semantic("window", "lower bound exceeds upper bound"));
        }
        self.window = (lo, hi);
        Ok(())
    }

    /// Render in the documented format; `parse_config` reads it back to an
    /// equal value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rank = {}", self.rank);
        let v: Vec<String> = self.v.vector().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "v = {}", v.join(", "));
        let _ = writeln!(out, "window = {} : {}", self.window.0, self.window.1);
        for c in &self.components {
            let _ = writeln!(out, "[component {}]", c.label);
            let _ = writeln!(out, "dim = {}", c.dim);
            if c.dim == 2 {
                let _ = writeln!(out, "genus = {}", c.genus);
            }
            let normals: Vec<String> = c
                .normal_weights
                .iter()
                .map(|n| if n.degree != 0 { format!("{} deg {}", n.weight, n.degree) } else { n.weight.to_string() })
                .collect();
            let _ = writeln!(out, "normal_weights = {}", normals.join(", "));
            for s in &c.summands {
                let parity = if s.parity == Parity::Even { "+" } else { "-" };
                let _ = write!(out, "summand = weight {}, parity {}, rank {}", s.weight, parity, s.rank);
                if s.twist_degree != 0 {
                    let _ = write!(out, ", twist {}", s.twist_degree);
                }
                out.push('\n');
            }
        }
        for (label, table) in &self.tables {
            let _ = writeln!(out, "[table {label}]");
            for (w, m) in &table.0 {
                let _ = writeln!(out, "{w} = {m}");
            }
        }
        if let Some(a) = &self.analytic {
            let _ = writeln!(out, "[analytic]");
            let _ = writeln!(out, "model = {}", a.model.name());
            let _ = writeln!(out, "n = {}", a.n);
            let _ = writeln!(out, "f0 = {:?}", a.f0);
            let _ = writeln!(out, "R = {:?}", a.radius);
            let _ = writeln!(out, "N = {}", a.points);
            if let Some(t) = a.tol {
                let _ = writeln!(out, "tol = {t:e}");
            }
            if a.module == Parity::Odd {
                let _ = writeln!(out, "module = odd");
            }
        }
        out
    }
}

impl fmt::Display for ProblemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Exact rational from an integer, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            d if d.chars().all(|c| c.is_ascii_digit()) => d.parse().ok()?,
            _ => return None,
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().ok()?;
        let magnitude = Rational::new(int_part * &scale + frac_part, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(p))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Option<T> {
    s.trim().parse().ok()
}

fn parse_real(s: &str) -> Option<f64> {
    let x: f64 = s.trim().parse().ok()?;
    x.is_finite().then_some(x)
}

/// `(c1, ..., cr)`.
fn parse_tuple(s: &str) -> Option<Weight> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let coords: Option<Vec<i64>> = inner.split(',').map(|c| c.trim().parse().ok()).collect();
    let coords = coords?;
    (!coords.is_empty()).then(|| Weight::new(coords))
}

/// Split at commas outside parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// `1`, `1, 3` or `(1, 3)`.
fn parse_vector(s: &str) -> Option<Vec<Rational>> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    inner.split(',').map(parse_rational).collect()
}

fn parse_normals(s: &str, line: usize) -> Result<Vec<NormalWeight>, ConfigError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for item in split_top_level(s) {
        let item = item.trim();
        let close = match item.find(')') {
            Some(i) => i,
            None => return syntax(line, format!("expected a weight tuple, found `{item}`")),
        };
        let weight = match parse_tuple(&item[..=close]) {
            Some(w) => w,
            None => return syntax(line, format!("malformed weight `{}`", &item[..=close])),
        };
        let rest = item[close + 1..].trim();
        let degree = if rest.is_empty() {
            0
        } else if let Some(d) = rest.strip_prefix("deg") {
            match parse_int(d) {
                Some(d) => d,
                None => return syntax(line, format!("malformed degree `{}`", d.trim())),
            }
        } else {
            return syntax(line, format!("unexpected `{rest}` after normal weight"));
        };
        out.push(NormalWeight { weight, degree });
    }
    Ok(out)
}

fn parse_summand(s: &str, line: usize) -> Result<Summand, ConfigError> {
    let (mut weight, mut parity, mut rank, mut twist) = (None, None, None, None);
    for field in split_top_level(s) {
        let field = field.trim();
        let (key, value) = match field.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => return syntax(line, format!("summand field `{field}` has no value")),
        };
        let slot_taken = match key {
            "weight" => match parse_tuple(value) {
                Some(w) => weight.replace(w).is_some(),
                None => return syntax(line, format!("malformed weight `{value}`")),
            },
            "parity" => {
                let p = match value {
                    "+" | "even" => Parity::Even,
                    "-" | "odd" => Parity::Odd,
                    _ => return syntax(line, format!("parity must be + or -, found `{value}`")),
                };
                parity.replace(p).is_some()
            }
            "rank" => match parse_int::<u32>(value) {
                Some(r) => rank.replace(r).is_some(),
                None => return syntax(line, format!("malformed rank `{value}`")),
            },
            "twist" => match parse_int::<i64>(value) {
                Some(t) => twist.replace(t).is_some(),
                None => return syntax(line, format!("malformed twist `{value}`")),
            },
            other => return syntax(line, format!("unknown summand field `{other}`")),
        };
        if slot_taken {
            return syntax(line, format!("summand field `{key}` given twice"));
        }
    }
    match (weight, parity, rank) {
        (Some(weight), Some(parity), Some(rank)) => {
            Ok(Summand { weight, parity, rank, twist_degree: twist.unwrap_or(0) })
        }
        _ => syntax(line, "summand needs weight, parity and rank"),
    }
}

#[derive(Debug)]
enum Section {
    Top,
    Component(usize),
    Table(String),
    Analytic,
}

#[derive(Default)]
struct ComponentDraft {
    label: String,
    dim: Option<u32>,
    genus: Option<u32>,
    normals: Option<Vec<NormalWeight>>,
    summands: Vec<Summand>,
}

#[derive(Default)]
struct AnalyticDraft {
    model: Option<ModelKind>,
    n: Option<u32>,
    f0: Option<f64>,
    radius: Option<f64>,
    points: Option<usize>,
    tol: Option<f64>,
    module: Option<Parity>,
}

/// Strict parse of the configuration text.
pub fn parse_config(text: &str) -> Result<ProblemConfig, ConfigError> {
    let mut section = Section::Top;
    let mut rank: Option<(usize, usize)> = None;
    let mut v: Option<(Vec<Rational>, usize)> = None;
    let mut window: Option<(Rational, Rational)> = None;
    let mut components: Vec<ComponentDraft> = Vec::new();
    let mut tables: Vec<(String, Vec<(Weight, BigInt)>)> = Vec::new();
    let mut analytic: Option<AnalyticDraft> = None;
    let mut seen_keys: BTreeSet<String> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let Some(header) = header.strip_suffix(']') else {
                return syntax(line, "unterminated section header");
            };
            let mut words = header.split_whitespace();
            section = match (words.next(), words.next(), words.next()) {
                (Some("component"), Some(label), None) => {
                    if components.iter().any(|c| c.label == label) {
                        return syntax(line, format!("duplicate component `{label}`"));
                    }
                    components.push(ComponentDraft { label: label.to_string(), ..Default::default() });
                    Section::Component(components.len() - 1)
                }
                (Some("table"), Some(label), None) => {
                    if tables.iter().any(|t| t.0 == label) {
                        return syntax(line, format!("duplicate table `{label}`"));
                    }
                    tables.push((label.to_string(), Vec::new()));
                    Section::Table(label.to_string())
                }
                (Some("analytic"), None, None) => {
                    if analytic.is_some() {
                        return syntax(line, "duplicate [analytic] section");
                    }
                    analytic = Some(AnalyticDraft::default());
                    Section::Analytic
                }
                _ => return syntax(line, format!("unknown section `[{header}]`")),
            };
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return syntax(line, "expected `key = value`");
        };
        let (key, value) = (key.trim(), value.trim());
        if let Section::Table(label) = &section {
            let Some(weight) = parse_tuple(key) else {
                return syntax(line, format!("table keys are weights, found `{key}`"));
            };
            let Some(m) = parse_int::<BigInt>(value) else {
                return syntax(line, format!("table values are integers, found `{value}`"));
            };
            let entries = &mut tables.iter_mut().find(|t| &t.0 == label).expect("table exists").1;
            if entries.iter().any(|e| e.0 == weight) {
                return syntax(line, format!("duplicate table entry for {weight}"));
            }
            entries.push((weight, m));
            continue;
        }
        let scope = match &section {
            Section::Top => String::new(),
            Section::Component(i) => format!("component {}", components[*i].label),
            Section::Analytic => "analytic".to_string(),
            Section::Table(_) => unreachable!(),
        };
        let repeatable = matches!(section, Section::Component(_)) && key == "summand";
        if !repeatable && !seen_keys.insert(format!("{scope}/{key}")) {
            return syntax(line, format!("duplicate key `{key}`"));
        }
        let bad = |what: &str| -> Result<(), ConfigError> { syntax(line, format!("malformed {what} `{value}`")) };
        match &section {
            Section::Top => match key {
                "rank" => match parse_int::<usize>(value) {
                    Some(r) => rank = Some((r, line)),
                    None => bad("rank")?,
                },
                "v" => match parse_vector(value) {
                    Some(x) => v = Some((x, line)),
                    None => bad("taming vector")?,
                },
                "window" => {
                    let Some((lo, hi)) = value.split_once(':') else {
                        return syntax(line, "window must be `lo : hi`");
                    };
                    match (parse_rational(lo), parse_rational(hi)) {
                        (Some(lo), Some(hi)) => window = Some((lo, hi)),
                        _ => bad("window")?,
                    }
                }
                other => return syntax(line, format!("unknown key `{other}`")),
            },
            Section::Component(i) => {
                let c = &mut components[*i];
                match key {
                    "dim" => match parse_int(value) {
                        Some(d) => c.dim = Some(d),
                        None => bad("dimension")?,
                    },
                    "genus" => match parse_int(value) {
                        Some(g) => c.genus = Some(g),
                        None => bad("genus")?,
                    },
                    "normal_weights" => c.normals = Some(parse_normals(value, line)?),
                    "summand" => c.summands.push(parse_summand(value, line)?),
                    other => return syntax(line, format!("unknown key `{other}`")),
                }
            }
            Section::Analytic => {
                let a = analytic.as_mut().expect("analytic section open");
                match key {
                    "model" => match value {
                        "plane_rotation" => a.model = Some(ModelKind::PlaneRotation),
                        other => return syntax(line, format!("unknown model `{other}`")),
                    },
                    "n" => match parse_int(value) {
                        Some(n) => a.n = Some(n),
                        None => bad("rotation weight")?,
                    },
                    "f0" => match parse_real(value) {
                        Some(x) => a.f0 = Some(x),
                        None => bad("f0")?,
                    },
                    "R" => match parse_real(value) {
                        Some(x) => a.radius = Some(x),
                        None => bad("radius")?,
                    },
                    "N" => match parse_int(value) {
                        Some(x) => a.points = Some(x),
                        None => bad("point count")?,
                    },
                    "tol" => match parse_real(value) {
                        Some(x) => a.tol = Some(x),
                        None => bad("tolerance")?,
                    },
                    "module" => match value {
                        "even" => a.module = Some(Parity::Even),
                        "odd" => a.module = Some(Parity::Odd),
                        _ => bad("module parity")?,
                    },
                    other => return syntax(line, format!("unknown key `{other}`")),
                }
            }
            Section::Table(_) => unreachable!(),
        }
    }

    let (rank, _) = rank.ok_or_else(|| semantic("rank", "missing"))?;
    if rank == 0 {
        return Err(semantic("rank", "torus rank must be at least 1"));
    }
    let (v, _) = v.ok_or_else(|| semantic("v", "missing"))?;
    if v.len() != rank {
        return Err(semantic("v", format!("expected {rank} coordinates, found {}", v.len())));
    }
    let v = TamingData::new(v).map_err(|_| semantic("v", "taming vector must be nonzero"))?;
    let window = window.ok_or_else(|| semantic("window", "missing"))?;
    if window.0 > window.1 {
        return Err(semantic("window", "lower bound exceeds upper bound"));
    }

    let mut built = Vec::with_capacity(components.len());
    for c in components {
        let path = format!("components.{}", c.label);
        let dim = c.dim.ok_or_else(|| semantic(format!("{path}.dim"), "missing"))?;
        if c.genus.is_some() && dim != 2 {
            return Err(semantic(format!("{path}.genus"), "genus is only allowed on dim = 2 components"));
        }
        let component = FixedComponent {
            label: c.label.clone(),
            dim,
            genus: c.genus.unwrap_or(0),
            normal_weights: c.normals.unwrap_or_default(),
            summands: c.summands,
        };
        for (i, n) in component.normal_weights.iter().enumerate() {
            let p = format!("{path}.normal_weights[{i}]");
            if n.weight.rank() != rank {
                return Err(semantic(p, format!("weight {} has rank {}, expected {rank}", n.weight, n.weight.rank())));
            }
            if v.pair(&n.weight).is_zero() {
                return Err(semantic(p, format!("weight {} is orthogonal to the taming vector", n.weight)));
            }
        }
        for (i, s) in component.summands.iter().enumerate() {
            if s.weight.rank() != rank {
                return Err(semantic(
                    format!("{path}.summand[{i}]"),
                    format!("weight {} has rank {}, expected {rank}", s.weight, s.weight.rank()),
                ));
            }
        }
        component.validate(&v).map_err(|e| match e {
            FixedPointError::InvalidComponent { reason, .. } => semantic(path.clone(), reason),
            FixedPointError::Character(CharacterError::Orthogonal { weight }) => {
                semantic(format!("{path}.normal_weights"), format!("weight {weight} is orthogonal to the taming vector"))
            }
            other => semantic(path.clone(), other.to_string()),
        })?;
        built.push(component);
    }

    let mut table_map = LocalIndexTables::new();
    for (label, entries) in tables {
        let path = format!("tables.{label}");
        if !built.iter().any(|c| c.label == label) {
            return Err(semantic(path, "table refers to an unknown component"));
        }
        let mut table = LocalIndexTable::default();
        for (w, m) in entries {
            if w.rank() != rank {
                return Err(semantic(path, format!("weight {w} has rank {}, expected {rank}", w.rank())));
            }
            table.0.insert(w, m);
        }
        table_map.insert(label, table);
    }

    let analytic = match analytic {
        None => None,
        Some(a) => {
            let need = |field: &str| semantic(format!("analytic.{field}"), "missing");
            let cfg = AnalyticConfig {
                model: a.model.ok_or_else(|| need("model"))?,
                n: a.n.ok_or_else(|| need("n"))?,
                f0: a.f0.ok_or_else(|| need("f0"))?,
                radius: a.radius.ok_or_else(|| need("R"))?,
                points: a.points.ok_or_else(|| need("N"))?,
                tol: a.tol,
                module: a.module.unwrap_or(Parity::Even),
            };
            if rank != 1 {
                return Err(semantic("analytic.model", "the plane rotation model needs rank = 1"));
            }
            if let Some(t) = cfg.tol {
                if t <= 0.0 {
                    return Err(semantic("analytic.tol", "tolerance must be positive"));
                }
            }
            cfg.plane_model().map_err(|e| semantic("analytic", e.to_string()))?;
            Some(cfg)
        }
    };

    Ok(ProblemConfig { rank, v, window, components: built, tables: table_map, analytic })
}

/// `LO:HI` as given to `--window`.
pub fn parse_window_flag(s: &str) -> Option<(Rational, Rational)> {
    let (lo, hi) = s.split_once(':')?;
    Some((parse_rational(lo)?, parse_rational(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const PLANE_N1: &str = "rank = 1
v = 1
window = -4 : 0
[component pt]
dim = 0
normal_weights = (1)
summand = weight (0), parity +, rank 1
[analytic]
model = plane_rotation
n = 1
f0 = 4.0
R = 12.0
N = 2048
tol = 1e-6
";

    #[test]
    fn documented_example_parses_and_round_trips() {
        let cfg = parse_config(PLANE_N1).unwrap();
        assert_eq!(cfg.rank, 1);
        assert_eq!(cfg.components.len(), 1);
        assert_eq!(cfg.components[0].dim, 0);
        assert_eq!(cfg.components[0].normal_weights[0].weight, Weight::new(vec![1]));
        let a = cfg.analytic.as_ref().unwrap();
        assert_eq!((a.n, a.f0, a.radius, a.points, a.tol), (1, 4.0, 12.0, 2048, Some(1e-6)));
        let again = parse_config(&cfg.to_text()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn zero_taming_vector_is_rejected() {
        let text = PLANE_N1.replace("v = 1", "v = 0");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err.to_string(), "v: taming vector must be nonzero");
    }

    #[test]
    fn orthogonal_normal_weight_is_named() {
        let text = "rank = 2\nv = 1, 1\nwindow = -2 : 0\n[component p]\ndim = 0\nnormal_weights = (1, 0), (1,-1)\nsummand = weight (0,0), parity +, rank 1\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(
            err.to_string(),
            "components.p.normal_weights[1]: weight (1,-1) is orthogonal to the taming vector"
        );
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = PLANE_N1.replace("dim = 0", "dim = 0\ncolour = blue");
        let err = parse_config(&text).unwrap_err();
        assert_eq!(err, ConfigError::Syntax { line: 6, message: "unknown key `colour`".into() });
    }

    #[test]
    fn duplicate_key_is_an_error() {
        let text = PLANE_N1.replace("rank = 1\n", "rank = 1\nrank = 1\n");
        assert!(matches!(parse_config(&text), Err(ConfigError::Syntax { line: 2, .. })));
    }

    #[test]
    fn exact_rationals() {
        assert_eq!(parse_rational("1/2"), Some(Rational::new(BigInt::from(1), BigInt::from(2))));
        assert_eq!(parse_rational("-0.25"), Some(Rational::new(BigInt::from(-1), BigInt::from(4))));
        assert_eq!(parse_rational("3"), Some(Rational::from_integer(BigInt::from(3))));
        assert_eq!(parse_rational("1e-3"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn surface_and_table_sections() {
        let text = "rank = 1
v = 1/2
window = -3/2 : 1
[component s]
dim = 2
genus = 1
normal_weights = (1) deg -1
summand = weight (0), parity +, rank 2, twist 3
summand = weight (1), parity -, rank 1
[component f]
dim = 4
normal_weights = (2)
summand = weight (0), parity +, rank 1
[table f]
(0) = 5
(-2) = -1
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.components[0].genus, 1);
        assert_eq!(cfg.components[0].normal_weights[0].degree, -1);
        assert_eq!(cfg.components[0].summands[0].twist_degree, 3);
        assert_eq!(cfg.tables["f"].0.len(), 2);
        assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn analytic_block_needs_rank_one() {
        let text = "rank = 2\nv = 1, 0\nwindow = -1 : 0\n[analytic]\nmodel = plane_rotation\nn = 1\nf0 = 4\nR = 12\nN = 256\n";
        assert!(matches!(parse_config(text), Err(ConfigError::Semantic { .. })));
    }

    #[test]
    fn malformed_summand() {
        let text = PLANE_N1.replace("parity +", "parity ?");
        assert!(matches!(parse_config(&text), Err(ConfigError::Syntax { line: 7, .. })));
    }
}
