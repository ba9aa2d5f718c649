//! Exact arithmetic in the formal character ring of a torus.
//!
//! A [`Character`] is a virtual representation `Σ m(α)·V_α` with integer
//! multiplicities, known exactly on a [`Window`]: a slab
//! `lo ≤ ⟨α, v⟩ ≤ hi` in the pairing with a fixed direction `v`. Infinite
//! characters (the symmetric series, every index of a non-compact problem)
//! are only ever materialized on such a window, and comparisons are only
//! made where both operands are known.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::taming::TamingData;

/// Exact rational number used for taming vectors and window bounds.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("windows use different pairing directions")]
    DirectionMismatch,
    #[error("weight {weight} lies outside the window of the character")]
    OutsideWindow { weight: Weight },
    #[error("tensor factor must be a finite character known on every weight")]
    NotFinite,
    #[error("input window of the series factor does not cover the requested output window")]
    InsufficientWindow,
    #[error("window must be bounded below in the pairing with the taming vector")]
    UnboundedBelow,
    #[error("weight {weight} has pairing {pairing} with the taming vector; it must be positive")]
    NotOriented { weight: Weight, pairing: Rational },
    #[error("weight {weight} is orthogonal to the taming vector")]
    Orthogonal { weight: Weight },
    #[error("window lower bound exceeds upper bound")]
    EmptyWindow,
}

/// A lattice point of `ℤʳ`, i.e. a character of the torus `Tʳ`.
///
/// Ordered lexicographically on coordinates, which fixes the canonical
/// ordering of rendered characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(coords: Vec<i64>) -> Self {
        Weight(coords)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `⟨α, v⟩` as an exact rational.
pub fn pairing(weight: &Weight, direction: &[Rational]) -> Rational {
    weight
        .0
        .iter()
        .zip(direction)
        .fold(Rational::zero(), |acc, (a, v)| acc + v * BigInt::from(*a))
}

/// The region of the weight lattice on which a character is known exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    /// Known on every weight (finite characters given literally).
    All,
    /// Known on `lo ≤ ⟨α, direction⟩ ≤ hi`; a missing bound is unbounded.
    Slab {
        direction: Vec<Rational>,
        lo: Option<Rational>,
        hi: Option<Rational>,
    },
}

impl Window {
    pub fn slab(direction: &TamingData, lo: Option<Rational>, hi: Option<Rational>) -> Self {
        Window::Slab {
            direction: direction.vector().to_vec(),
            lo,
            hi,
        }
    }

    /// Closed slab `[lo, hi]` in the pairing with `v`.
    pub fn closed(v: &TamingData, lo: Rational, hi: Rational) -> Result<Self, CharacterError> {
        if lo > hi {
            return Err(CharacterError::EmptyWindow);
        }
        Ok(Window::slab(v, Some(lo), Some(hi)))
    }

    pub fn contains(&self, weight: &Weight) -> bool {
        match self {
            Window::All => true,
            Window::Slab { direction, lo, hi } => {
                let p = pairing(weight, direction);
                lo.as_ref().is_none_or(|l| &p >= l) && hi.as_ref().is_none_or(|h| &p <= h)
            }
        }
    }

    pub fn lower(&self) -> Option<&Rational> {
        match self {
            Window::All => None,
            Window::Slab { lo, .. } => lo.as_ref(),
        }
    }

    pub fn upper(&self) -> Option<&Rational> {
        match self {
            Window::All => None,
            Window::Slab { hi, .. } => hi.as_ref(),
        }
    }

    pub fn direction(&self) -> Option<&[Rational]> {
        match self {
            Window::All => None,
            Window::Slab { direction, .. } => Some(direction),
        }
    }

    pub fn intersect(&self, other: &Window) -> Result<Window, CharacterError> {
        match (self, other) {
            (Window::All, w) | (w, Window::All) => Ok(w.clone()),
            (
                Window::Slab { direction: d1, lo: l1, hi: h1 },
                Window::Slab { direction: d2, lo: l2, hi: h2 },
            ) => {
                if d1 != d2 {
                    return Err(CharacterError::DirectionMismatch);
                }
                let lo = match (l1, l2) {
                    (Some(a), Some(b)) => Some(a.max(b).clone()),
                    (a, b) => a.clone().or_else(|| b.clone()),
                };
                let hi = match (h1, h2) {
                    (Some(a), Some(b)) => Some(a.min(b).clone()),
                    (a, b) => a.clone().or_else(|| b.clone()),
                };
                Ok(Window::Slab { direction: d1.clone(), lo, hi })
            }
        }
    }

    /// Whether `self ⊆ other`.
    pub fn is_within(&self, other: &Window) -> Result<bool, CharacterError> {
        match (self, other) {
            (_, Window::All) => Ok(true),
            (Window::All, Window::Slab { lo, hi, .. }) => Ok(lo.is_none() && hi.is_none()),
            (
                Window::Slab { direction: d1, lo: l1, hi: h1 },
                Window::Slab { direction: d2, lo: l2, hi: h2 },
            ) => {
                if d1 != d2 {
                    return Err(CharacterError::DirectionMismatch);
                }
                let lo_ok = match (l1, l2) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(a), Some(b)) => a >= b,
                };
                let hi_ok = match (h1, h2) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some(a), Some(b)) => a <= b,
                };
                Ok(lo_ok && hi_ok)
            }
        }
    }

    fn shifted(&self, by: &Rational) -> Window {
        match self {
            Window::All => Window::All,
            Window::Slab { direction, lo, hi } => Window::Slab {
                direction: direction.clone(),
                lo: lo.as_ref().map(|l| l + by),
                hi: hi.as_ref().map(|h| h + by),
            },
        }
    }
}

/// Half-space support bound: every entry satisfies `⟨α, direction⟩ ≤ c`,
/// also outside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBound {
    pub direction: Vec<Rational>,
    pub c: Rational,
}

/// A virtual character `Σ m(α)·V_α`, complete on its window.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    rank: usize,
    entries: BTreeMap<Weight, BigInt>,
    window: Window,
    bound: Option<SupportBound>,
}

impl Character {
    pub fn zero(rank: usize, window: Window) -> Self {
        Character { rank, entries: BTreeMap::new(), window, bound: None }
    }

    /// The unit `{0: 1}`, known everywhere.
    pub fn unit(rank: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Weight::zero(rank), BigInt::from(1));
        Character { rank, entries, window: Window::All, bound: None }
    }

    /// Builds a character from `(weight, multiplicity)` pairs; repeated
    /// weights accumulate and zero totals are dropped. Every weight must
    /// lie in `window`.
    pub fn from_entries<I, M>(rank: usize, entries: I, window: Window) -> Result<Self, CharacterError>
    where
        I: IntoIterator<Item = (Weight, M)>,
        M: Into<BigInt>,
    {
        let mut map: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (w, m) in entries {
            if w.rank() != rank {
                return Err(CharacterError::RankMismatch { expected: rank, found: w.rank() });
            }
            if !window.contains(&w) {
                return Err(CharacterError::OutsideWindow { weight: w });
            }
            *map.entry(w).or_default() += m.into();
        }
        map.retain(|_, m| !m.is_zero());
        Ok(Character { rank, entries: map, window, bound: None })
    }

    /// A finite character known on every weight.
    pub fn finite<I, M>(rank: usize, entries: I) -> Result<Self, CharacterError>
    where
        I: IntoIterator<Item = (Weight, M)>,
        M: Into<BigInt>,
    {
        Character::from_entries(rank, entries, Window::All)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn support_bound(&self) -> Option<&SupportBound> {
        self.bound.as_ref()
    }

    /// Attach a support bound. Fails if an existing entry violates it.
    pub fn with_support_bound(mut self, v: &TamingData, c: Rational) -> Result<Self, CharacterError> {
        if let Some(w) = self.entries.keys().find(|w| pairing(w, v.vector()) > c) {
            return Err(CharacterError::OutsideWindow { weight: w.clone() });
        }
        self.bound = Some(SupportBound { direction: v.vector().to_vec(), c });
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in lexicographic weight order.
    pub fn entries(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.entries.iter()
    }

    /// Multiplicity of `weight`; an error outside the window, where the
    /// value is not known.
    pub fn mult(&self, weight: &Weight) -> Result<BigInt, CharacterError> {
        if weight.rank() != self.rank {
            return Err(CharacterError::RankMismatch { expected: self.rank, found: weight.rank() });
        }
        if !self.window.contains(weight) {
            return Err(CharacterError::OutsideWindow { weight: weight.clone() });
        }
        Ok(self.entries.get(weight).cloned().unwrap_or_default())
    }

    /// Restrict to a smaller window.
    pub fn truncate(&self, window: &Window) -> Result<Character, CharacterError> {
        let window = self.window.intersect(window)?;
        let entries = self
            .entries
            .iter()
            .filter(|(w, _)| window.contains(w))
            .map(|(w, m)| (w.clone(), m.clone()))
            .collect();
        Ok(Character { rank: self.rank, entries, window, bound: self.bound.clone() })
    }

    pub fn neg(&self) -> Character {
        Character {
            rank: self.rank,
            entries: self.entries.iter().map(|(w, m)| (w.clone(), -m)).collect(),
            window: self.window.clone(),
            bound: self.bound.clone(),
        }
    }

    /// Pointwise sum on the intersection of the two windows.
    pub fn add(&self, other: &Character) -> Result<Character, CharacterError> {
        if self.rank != other.rank {
            return Err(CharacterError::RankMismatch { expected: self.rank, found: other.rank });
        }
        let window = self.window.intersect(&other.window)?;
        let mut entries: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (w, m) in self.entries.iter().chain(other.entries.iter()) {
            if window.contains(w) {
                *entries.entry(w.clone()).or_default() += m;
            }
        }
        entries.retain(|_, m| !m.is_zero());
        let bound = match (&self.bound, &other.bound) {
            (Some(a), Some(b)) if a.direction == b.direction => Some(SupportBound {
                direction: a.direction.clone(),
                c: a.c.clone().max(b.c.clone()),
            }),
            _ => None,
        };
        Ok(Character { rank: self.rank, entries, window, bound })
    }

    /// Convolution `self ⊗ series`, truncated to `output`.
    ///
    /// `self` must be finite and known everywhere. `series` must be known
    /// on every weight that can contribute to `output`; a support bound on
    /// `series` extends its completeness upwards.
    pub fn tensor(&self, series: &Character, output: &Window) -> Result<Character, CharacterError> {
        if self.rank != series.rank {
            return Err(CharacterError::RankMismatch { expected: self.rank, found: series.rank });
        }
        if self.window != Window::All {
            return Err(CharacterError::NotFinite);
        }
        let known = series.effective_window()?;
        for alpha in self.entries.keys() {
            let shift = match output.direction() {
                Some(d) => -pairing(alpha, d),
                None => Rational::zero(),
            };
            if !output.shifted(&shift).is_within(&known)? {
                return Err(CharacterError::InsufficientWindow);
            }
        }
        let entries = convolve(&self.entries, &series.entries, output);
        let bound = match (&series.bound, self.entries.keys().next()) {
            (Some(b), Some(_)) => {
                let top = self
                    .entries
                    .keys()
                    .map(|a| pairing(a, &b.direction))
                    .max()
                    .expect("nonempty");
                Some(SupportBound { direction: b.direction.clone(), c: &b.c + top })
            }
            _ => None,
        };
        Ok(Character { rank: self.rank, entries, window: output.clone(), bound })
    }

    /// The window on which entries are known, extended upwards when a
    /// support bound guarantees vanishing above it.
    fn effective_window(&self) -> Result<Window, CharacterError> {
        match (&self.window, &self.bound) {
            (Window::Slab { direction, lo, hi }, Some(b)) if *direction == b.direction => {
                let hi = match hi {
                    Some(h) if *h >= b.c => None,
                    other => other.clone(),
                };
                Ok(Window::Slab { direction: direction.clone(), lo: lo.clone(), hi })
            }
            (w, _) => Ok(w.clone()),
        }
    }

    /// Whether the two characters agree on the intersection of their
    /// windows. Fails if the windows cannot be intersected.
    pub fn agrees_with(&self, other: &Character) -> Result<bool, CharacterError> {
        if self.rank != other.rank {
            return Err(CharacterError::RankMismatch { expected: self.rank, found: other.rank });
        }
        let common = self.window.intersect(&other.window)?;
        let a = self.entries.iter().filter(|(w, _)| common.contains(w));
        let b = other.entries.iter().filter(|(w, _)| common.contains(w));
        Ok(a.eq(b))
    }

    /// Equality on an explicit window, which must lie inside both windows.
    pub fn equal_on(&self, other: &Character, window: &Window) -> Result<bool, CharacterError> {
        if !window.is_within(&self.window)? || !window.is_within(&other.window)? {
            return Err(CharacterError::InsufficientWindow);
        }
        let a = self.entries.iter().filter(|(w, _)| window.contains(w));
        let b = other.entries.iter().filter(|(w, _)| window.contains(w));
        Ok(a.eq(b))
    }

    /// Canonical text form: one `(<c1>,...,<cr>) <mult>` line per nonzero
    /// entry, lexicographic in the weight.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (w, m) in &self.entries {
            out.push_str(&format!("{w} {m}\n"));
        }
        out
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn convolve(
    a: &BTreeMap<Weight, BigInt>,
    b: &BTreeMap<Weight, BigInt>,
    output: &Window,
) -> BTreeMap<Weight, BigInt> {
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (wa, ma) in a {
        for (wb, mb) in b {
            let w = wa.add(wb);
            if output.contains(&w) {
                *out.entry(w).or_default() += ma * mb;
            }
        }
    }
    out.retain(|_, m| !m.is_zero());
    out
}

/// Flip each weight so that it pairs positively with `v`, preserving order.
pub fn orient_normal_weights(raw: &[Weight], v: &TamingData) -> Result<Vec<Weight>, CharacterError> {
    raw.iter()
        .map(|w| {
            if w.rank() != v.rank() {
                return Err(CharacterError::RankMismatch { expected: v.rank(), found: w.rank() });
            }
            let p = v.pair(w);
            if p.is_zero() {
                Err(CharacterError::Orthogonal { weight: w.clone() })
            } else if p.is_negative() {
                Ok(w.neg())
            } else {
                Ok(w.clone())
            }
        })
        .collect()
}

/// Character of `S(N*) = ⊕ₖ Sᵏ(N*)` for a sum of lines with oriented
/// weights `nⱼ`: the product of geometric series `Σₖ V_{-k nⱼ}`, computed by
/// iterated truncated convolution on `window`. The result carries the
/// support bound `⟨α, v⟩ ≤ 0`.
pub fn sym_series(
    oriented: &[Weight],
    v: &TamingData,
    window: &Window,
) -> Result<Character, CharacterError> {
    let rank = v.rank();
    let lo = window.lower().ok_or(CharacterError::UnboundedBelow)?.clone();
    if let Some(d) = window.direction() {
        if d != v.vector() {
            return Err(CharacterError::DirectionMismatch);
        }
    }
    let mut steps = Vec::with_capacity(oriented.len());
    for n in oriented {
        if n.rank() != rank {
            return Err(CharacterError::RankMismatch { expected: rank, found: n.rank() });
        }
        let p = v.pair(n);
        if !p.is_positive() {
            return Err(CharacterError::NotOriented { weight: n.clone(), pairing: p });
        }
        steps.push((n, p));
    }
    // Everything is computed on [lo, +inf); nothing lies above 0.
    let working = Window::slab(v, Some(lo.clone()), None);
    let mut acc: BTreeMap<Weight, BigInt> = BTreeMap::new();
    acc.insert(Weight::zero(rank), BigInt::from(1));
    for (n, p) in steps {
        let mut geometric = BTreeMap::new();
        let mut k: i64 = 0;
        loop {
            let drop = &p * BigInt::from(k);
            if -drop < lo {
                break;
            }
            geometric.insert(n.scale(-k), BigInt::from(1));
            k += 1;
        }
        acc = convolve(&acc, &geometric, &working);
    }
    acc.retain(|w, _| window.contains(w));
    Ok(Character {
        rank,
        entries: acc,
        window: window.clone(),
        bound: Some(SupportBound { direction: v.vector().to_vec(), c: Rational::zero() }),
    })
}
