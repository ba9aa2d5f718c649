//! The topological side: the linearization formula for the index.
//!
//! Each fixed component `F` contributes `K_F = W|_F ⊗ S((N^{1,0})*)`,
//! split into finite-rank weight blocks `E_α`. The index of the block
//! Dirac operator over `F` is the multiplicity of `V_α`:
//!
//! * a point: the superdimension of the fiber;
//! * a closed surface: `Σ ± deg` (twisted spin Riemann–Roch; the surface
//!   `Â`-class has no degree-two part, so rank and genus drop out);
//! * higher dimension: an externally supplied [`LocalIndexTable`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::characters::{orient_normal_weights, Character, CharacterError, Rational, Weight, Window};
use crate::taming::{support_bound, TamingData};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedPointError {
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("component `{label}`: no local index table entry for weight {weight}")]
    MissingTableEntry { label: String, weight: Weight },
    #[error("component `{label}`: {reason}")]
    InvalidComponent { label: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A normal line of `F` with its torus weight and first Chern number.
///
/// `degree` refers to the complex structure in which `weight` is stated;
/// reorienting the line conjugates it and negates both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalWeight {
    pub weight: Weight,
    pub degree: i64,
}

/// One equivariant summand of the module factor `W|_F`.
///
/// `twist_degree` is the degree (first Chern number) of the summand bundle
/// over a surface component; it is ignored on points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub weight: Weight,
    pub parity: Parity,
    pub rank: u32,
    pub twist_degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComponent {
    pub label: String,
    /// Real dimension: 0, 2, or an even number ≥ 4.
    pub dim: u32,
    /// Genus of a surface component; carried for reporting only.
    pub genus: u32,
    pub normal_weights: Vec<NormalWeight>,
    pub summands: Vec<Summand>,
}

impl FixedComponent {
    /// An isolated fixed point.
    pub fn point(label: &str, normal_weights: Vec<Weight>, summands: Vec<(Weight, Parity, u32)>) -> Self {
        FixedComponent {
            label: label.to_string(),
            dim: 0,
            genus: 0,
            normal_weights: normal_weights
                .into_iter()
                .map(|weight| NormalWeight { weight, degree: 0 })
                .collect(),
            summands: summands
                .into_iter()
                .map(|(weight, parity, rank)| Summand { weight, parity, rank, twist_degree: 0 })
                .collect(),
        }
    }

    fn invalid(&self, reason: impl Into<String>) -> FixedPointError {
        FixedPointError::InvalidComponent { label: self.label.clone(), reason: reason.into() }
    }

    pub fn validate(&self, v: &TamingData) -> Result<(), FixedPointError> {
        if !self.dim.is_multiple_of(2) {
            return Err(self.invalid(format!("dimension {} is odd", self.dim)));
        }
        if self.dim != 2 && self.genus != 0 {
            return Err(self.invalid("genus is only meaningful for surface components"));
        }
        for n in &self.normal_weights {
            if n.weight.rank() != v.rank() {
                return Err(CharacterError::RankMismatch { expected: v.rank(), found: n.weight.rank() }.into());
            }
        }
        for s in &self.summands {
            if s.weight.rank() != v.rank() {
                return Err(CharacterError::RankMismatch { expected: v.rank(), found: s.weight.rank() }.into());
            }
            if s.rank == 0 {
                return Err(self.invalid("summand rank must be positive"));
            }
        }
        let raw: Vec<Weight> = self.normal_weights.iter().map(|n| n.weight.clone()).collect();
        orient_normal_weights(&raw, v)?;
        Ok(())
    }

    /// Normal lines reoriented so each weight pairs positively with `v`.
    pub fn oriented_normals(&self, v: &TamingData) -> Result<Vec<NormalWeight>, FixedPointError> {
        let raw: Vec<Weight> = self.normal_weights.iter().map(|n| n.weight.clone()).collect();
        let oriented = orient_normal_weights(&raw, v)?;
        Ok(self
            .normal_weights
            .iter()
            .zip(oriented)
            .map(|(n, w)| {
                let degree = if w == n.weight { n.degree } else { -n.degree };
                NormalWeight { weight: w, degree }
            })
            .collect())
    }

    /// The same component with every summand parity reversed.
    pub fn with_opposite_grading(&self) -> FixedComponent {
        let mut c = self.clone();
        for s in &mut c.summands {
            s.parity = s.parity.flip();
        }
        c
    }
}

/// One `W_a ⊗ Π Sᵏʲ` term of a weight block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub parity: Parity,
    pub rank: u32,
    pub degree: i64,
}

/// The finite-rank bundle `E_α` over a component, as a list of pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightBlock {
    pub weight: Weight,
    pub pieces: Vec<Piece>,
}

/// Externally supplied local indices, keyed by weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalIndexTable(pub BTreeMap<Weight, BigInt>);

impl LocalIndexTable {
    pub fn get(&self, w: &Weight) -> Option<&BigInt> {
        self.0.get(w)
    }
}

/// Local index tables keyed by component label.
pub type LocalIndexTables = BTreeMap<String, LocalIndexTable>;

/// Exponent vectors `k` with `Σ kⱼ pⱼ ≤ budget`, ordered by total drop and
/// then lexicographically.
fn monomials(pairings: &[Rational], budget: &Rational) -> Vec<(Rational, Vec<i64>)> {
    fn rec(
        pairings: &[Rational],
        j: usize,
        used: Rational,
        budget: &Rational,
        cur: &mut Vec<i64>,
        out: &mut Vec<(Rational, Vec<i64>)>,
    ) {
        if j == pairings.len() {
            out.push((used, cur.clone()));
            return;
        }
        let mut k = 0i64;
        let mut total = used;
        while &total <= budget {
            cur.push(k);
            rec(pairings, j + 1, total.clone(), budget, cur, out);
            cur.pop();
            k += 1;
            total += &pairings[j];
        }
    }
    let mut out = Vec::new();
    if budget.is_negative() {
        return out;
    }
    rec(pairings, 0, Rational::zero(), budget, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Expand `K_F` into weight blocks on `window`.
///
/// A summand `a` and monomial `k` give the weight `weight(a) − Σ kⱼ nⱼ` and
/// the piece `(parity(a), rank(a), twist(a) − rank(a)·Σ kⱼ deg(Nⱼ))`, using
/// `deg((N^{1,0})*) = −deg(N^{1,0})`.
pub fn component_blocks(
    c: &FixedComponent,
    v: &TamingData,
    window: &Window,
) -> Result<Vec<WeightBlock>, FixedPointError> {
    c.validate(v)?;
    let lo = window.lower().ok_or(CharacterError::UnboundedBelow)?;
    let normals = c.oriented_normals(v)?;
    let pairings: Vec<Rational> = normals.iter().map(|n| v.pair(&n.weight)).collect();
    let mut blocks: BTreeMap<Weight, Vec<Piece>> = BTreeMap::new();
    for s in &c.summands {
        let budget = v.pair(&s.weight) - lo;
        for (_, k) in monomials(&pairings, &budget) {
            let mut weight = s.weight.clone();
            let mut line_degree = 0i64;
            for (kj, n) in k.iter().zip(&normals) {
                weight = weight.add(&n.weight.scale(-kj));
                line_degree -= kj * n.degree;
            }
            if !window.contains(&weight) {
                continue;
            }
            blocks.entry(weight).or_default().push(Piece {
                parity: s.parity,
                rank: s.rank,
                degree: s.twist_degree + i64::from(s.rank) * line_degree,
            });
        }
    }
    Ok(blocks.into_iter().map(|(weight, pieces)| WeightBlock { weight, pieces }).collect())
}

/// Index of the block Dirac operator over the component. A table entry
/// for the block weight takes precedence over the built-in formulas.
pub fn local_index(
    c: &FixedComponent,
    b: &WeightBlock,
    table: Option<&LocalIndexTable>,
) -> Result<BigInt, FixedPointError> {
    if let Some(value) = table.and_then(|t| t.get(&b.weight)) {
        return Ok(value.clone());
    }
    match c.dim {
        0 => Ok(b.pieces.iter().map(|p| BigInt::from(p.parity.sign() * i64::from(p.rank))).sum()),
        2 => Ok(b.pieces.iter().map(|p| BigInt::from(p.parity.sign() * p.degree)).sum()),
        _ => Err(FixedPointError::MissingTableEntry { label: c.label.clone(), weight: b.weight.clone() }),
    }
}

fn component_contribution(
    c: &FixedComponent,
    v: &TamingData,
    window: &Window,
    table: Option<&LocalIndexTable>,
) -> Result<BTreeMap<Weight, BigInt>, FixedPointError> {
    let mut out = BTreeMap::new();
    for b in component_blocks(c, v, window)? {
        out.insert(b.weight.clone(), local_index(c, &b, table)?);
    }
    if let Some(t) = table {
        for (w, value) in &t.0 {
            if window.contains(w) {
                out.insert(w.clone(), value.clone());
            }
        }
    }
    Ok(out)
}

/// `Σ_α (Σᵢ ind D_{i,α})·V_α` on `window`, with the support bound of the
/// components attached.
pub fn topological_index(
    cs: &[FixedComponent],
    v: &TamingData,
    window: &Window,
    tables: &LocalIndexTables,
) -> Result<Character, FixedPointError> {
    if window.lower().is_none() {
        return Err(CharacterError::UnboundedBelow.into());
    }
    if let Some(d) = window.direction() {
        if d != v.vector() {
            return Err(CharacterError::DirectionMismatch.into());
        }
    }
    let parts: Vec<Result<BTreeMap<Weight, BigInt>, FixedPointError>> = cs
        .par_iter()
        .map(|c| component_contribution(c, v, window, tables.get(&c.label)))
        .collect();
    let mut total: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for part in parts {
        for (w, m) in part? {
            *total.entry(w).or_default() += m;
        }
    }
    let ch = Character::from_entries(v.rank(), total, window.clone())?;
    match support_bound(cs, v) {
        Some(c) => Ok(ch.with_support_bound(v, c)?),
        None => Ok(ch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::sym_series;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec())
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn v1() -> TamingData {
        TamingData::from_integers(&[1]).unwrap()
    }

    fn win(lo: i64, hi: i64) -> Window {
        Window::closed(&v1(), q(lo), q(hi)).unwrap()
    }

    fn simple_point() -> FixedComponent {
        FixedComponent::point("pt", vec![w(&[1])], vec![(w(&[0]), Parity::Even, 1)])
    }

    #[test]
    fn point_blocks_follow_geometric_series() {
        let blocks = component_blocks(&simple_point(), &v1(), &win(-2, 0)).unwrap();
        assert_eq!(blocks.len(), 3);
        for (b, alpha) in blocks.iter().zip([-2, -1, 0]) {
            assert_eq!(b.weight, w(&[alpha]));
            assert_eq!(b.pieces, vec![Piece { parity: Parity::Even, rank: 1, degree: 0 }]);
        }
    }

    #[test]
    fn point_blocks_with_odd_summand() {
        let c = FixedComponent::point(
            "pt",
            vec![w(&[1])],
            vec![(w(&[0]), Parity::Even, 1), (w(&[-1]), Parity::Odd, 1)],
        );
        let blocks = component_blocks(&c, &v1(), &win(-1, 0)).unwrap();
        assert_eq!(blocks[1].weight, w(&[0]));
        assert_eq!(blocks[1].pieces, vec![Piece { parity: Parity::Even, rank: 1, degree: 0 }]);
        assert_eq!(blocks[0].weight, w(&[-1]));
        assert_eq!(
            blocks[0].pieces,
            vec![
                Piece { parity: Parity::Even, rank: 1, degree: 0 },
                Piece { parity: Parity::Odd, rank: 1, degree: 0 },
            ]
        );
        assert_eq!(local_index(&c, &blocks[0], None).unwrap(), BigInt::from(0));
    }

    #[test]
    fn surface_degree_rule() {
        let c = FixedComponent {
            label: "sphere".into(),
            dim: 2,
            genus: 0,
            normal_weights: vec![NormalWeight { weight: w(&[1]), degree: -1 }],
            summands: vec![Summand { weight: w(&[0]), parity: Parity::Even, rank: 1, twist_degree: 0 }],
        };
        let blocks = component_blocks(&c, &v1(), &win(-2, 0)).unwrap();
        let degrees: Vec<(i64, i64)> =
            blocks.iter().map(|b| (b.weight.coords()[0], b.pieces[0].degree)).collect();
        assert_eq!(degrees, vec![(-2, 2), (-1, 1), (0, 0)]);
    }

    #[test]
    fn reorienting_a_normal_line_negates_its_degree() {
        let c = FixedComponent {
            label: "s".into(),
            dim: 2,
            genus: 1,
            normal_weights: vec![NormalWeight { weight: w(&[-1]), degree: 1 }],
            summands: vec![Summand { weight: w(&[0]), parity: Parity::Even, rank: 1, twist_degree: 0 }],
        };
        let blocks = component_blocks(&c, &v1(), &win(-2, 0)).unwrap();
        assert_eq!(blocks[0].pieces[0].degree, 2);
    }

    #[test]
    fn local_index_on_points() {
        let c = simple_point();
        let even = WeightBlock { weight: w(&[0]), pieces: vec![Piece { parity: Parity::Even, rank: 1, degree: 0 }] };
        assert_eq!(local_index(&c, &even, None).unwrap(), BigInt::from(1));
        let both = WeightBlock {
            weight: w(&[0]),
            pieces: vec![
                Piece { parity: Parity::Even, rank: 1, degree: 0 },
                Piece { parity: Parity::Odd, rank: 1, degree: 0 },
            ],
        };
        assert_eq!(local_index(&c, &both, None).unwrap(), BigInt::from(0));
    }

    /// ind of the spin Dirac operator on a surface twisted by T is deg T:
    /// with K^{1/2} of degree g - 1 absorbed, Riemann-Roch for the line
    /// L = T ⊗ K^{1/2} gives h0 - h1 = deg L + 1 - g = deg T.
    fn riemann_roch_twisted_spin(genus: i64, twist: i64) -> i64 {
        let deg_l = twist + (genus - 1);
        deg_l + 1 - genus
    }

    #[test]
    fn surface_local_index_matches_riemann_roch() {
        for genus in 0..4u32 {
            let c = FixedComponent {
                label: "s".into(),
                dim: 2,
                genus,
                normal_weights: vec![],
                summands: vec![],
            };
            let b = WeightBlock { weight: w(&[0]), pieces: vec![Piece { parity: Parity::Even, rank: 1, degree: 3 }] };
            assert_eq!(local_index(&c, &b, None).unwrap(), BigInt::from(riemann_roch_twisted_spin(genus.into(), 3)));
        }
    }

    #[test]
    fn higher_dimension_needs_a_table() {
        let c = FixedComponent {
            label: "f4".into(),
            dim: 4,
            genus: 0,
            normal_weights: vec![NormalWeight { weight: w(&[1]), degree: 0 }],
            summands: vec![Summand { weight: w(&[0]), parity: Parity::Even, rank: 1, twist_degree: 0 }],
        };
        let mut tables = LocalIndexTables::new();
        let err = topological_index(std::slice::from_ref(&c), &v1(), &win(-1, 0), &tables).unwrap_err();
        assert!(matches!(err, FixedPointError::MissingTableEntry { .. }));
        tables.insert(
            "f4".into(),
            LocalIndexTable([(w(&[0]), BigInt::from(2)), (w(&[-1]), BigInt::from(-1))].into_iter().collect()),
        );
        let ch = topological_index(&[c], &v1(), &win(-1, 0), &tables).unwrap();
        assert_eq!(ch.render(), "(-1) -1\n(0) 2\n");
    }

    #[test]
    fn empty_component_list_vanishes() {
        let ch = topological_index(&[], &v1(), &win(-5, 5), &LocalIndexTables::new()).unwrap();
        assert!(ch.is_zero());
    }

    #[test]
    fn single_point_index_equals_the_series() {
        let ch = topological_index(&[simple_point()], &v1(), &win(-4, 0), &LocalIndexTables::new()).unwrap();
        assert_eq!(ch.render(), "(-4) 1\n(-3) 1\n(-2) 1\n(-1) 1\n(0) 1\n");
        let s = sym_series(&[w(&[1])], &v1(), &win(-4, 0)).unwrap();
        assert!(ch.agrees_with(&s).unwrap());
        assert_eq!(ch.support_bound().unwrap().c, q(0));
    }

    #[test]
    fn disjoint_union_doubles() {
        let mut other = simple_point();
        other.label = "pt2".into();
        let ch = topological_index(&[simple_point(), other], &v1(), &win(-4, 0), &LocalIndexTables::new()).unwrap();
        assert_eq!(ch.render(), "(-4) 2\n(-3) 2\n(-2) 2\n(-1) 2\n(0) 2\n");
    }

    #[test]
    fn orthogonal_normal_weight_is_rejected() {
        let v = TamingData::from_integers(&[1, 1]).unwrap();
        let c = FixedComponent::point("pt", vec![w(&[1, -1])], vec![(w(&[0, 0]), Parity::Even, 1)]);
        let window = Window::closed(&v, q(-2), q(0)).unwrap();
        assert!(matches!(
            component_blocks(&c, &v, &window),
            Err(FixedPointError::Character(CharacterError::Orthogonal { .. }))
        ));
    }

    #[test]
    fn monomial_order_is_graded_then_lexicographic() {
        let m = monomials(&[q(1), q(1)], &q(2));
        let ks: Vec<Vec<i64>> = m.into_iter().map(|(_, k)| k).collect();
        assert_eq!(
            ks,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
    }
}
