//! The deformed Dolbeault–Dirac operator on the plane with a rotation.
//!
//! The circle acts on `ℂ` by `z ↦ e^{inθ} z` and on sections by pull-back,
//! so `z^l` has weight `−l·n` and `dz̄` has weight `+n`. A section of weight
//! `α = −l·n` is `u = g(r) e^{ilθ}` in `Λ^{0,0}` paired with
//! `w = h(r) e^{i(l+1)θ} dz̄` in `Λ^{0,1}`; weights not divisible by `n`
//! carry no sections at all.
//!
//! With `λ = f0·n·v` the deformed operator on the mode is
//!
//! ```text
//!        A = d/dr + λr − κ/r,      A* = −d/dr + λr − κ/r,      κ = l + 1/2,
//! ```
//!
//! acting on `p = √r·g`, `q = √r·h` (the unitary map to `L²(dr)`), with
//! `D_{fv}` the block operator `[[0, A*], [A, 0]]`. Since
//! `A = r^κ ∘ (d/dr + λr) ∘ r^{−κ}`, the discretization differences the
//! gauge-transformed unknown `p / r^κ`, which is smooth at the origin, on a
//! staggered grid: `p` and `q` alternate on the half-lattice `k·h/2`.
//!
//! Boundary conditions are set per mode:
//!
//! * at the origin the component with the lower vanishing order (`p`, of
//!   order `|l| + 1/2`, when `l ≥ 0`; otherwise `q`, of order `|l+1| + 1/2`)
//!   takes the first half-node, the other one is Dirichlet at `r = 0`;
//! * at `r = R` the component whose formal kernel grows like `e^{|λ|r²/2}`
//!   (`q` for `λ > 0`, `p` for `λ < 0`) is Dirichlet.
//!
//! The assembled operator is a symmetric tridiagonal matrix with zero
//! diagonal. It reproduces the kernels `z^l e^{−λr²/2}` (`λ > 0`, `l ≥ 0`)
//! to second order in `h` and keeps every other mode gapped.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::tridiag::{jacobi_eigenvalues, SymTridiag};
use super::AnalyticError;
use crate::characters::{Character, Rational, Weight, Window};
use crate::fixed_point::Parity;
use crate::taming::{
    admissibility_report, AdmissibilityCriteria, AdmissibilityProfile, AdmissibilityReport, TamingData, Verdict,
};

/// Smallest allowed value of `f0·n·R`.
pub const MIN_BOUNDARY_DEFORMATION: f64 = 20.0;
/// Smallest allowed number of radial cells.
pub const MIN_POINTS: usize = 64;
/// Norm fraction an eigenvector must carry in one component to be graded.
pub const GRADING_PURITY: f64 = 0.99;

/// `ℂ` with the circle acting by rotation with weight `n`, deformed by the
/// constant function `f ≡ f0`, truncated to the disc of radius `R` with `N`
/// radial cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRotationModel {
    n: u32,
    f0: f64,
    radius: f64,
    points: usize,
    module: Parity,
}

impl PlaneRotationModel {
    pub fn new(n: u32, f0: f64, radius: f64, points: usize) -> Result<Self, AnalyticError> {
        let invalid = |s: String| Err(AnalyticError::InvalidModel(s));
        if n == 0 {
            return invalid("rotation weight must be positive".into());
        }
        if !(f0 > 0.0 && f0.is_finite()) {
            return invalid(format!("f0 must be positive, got {f0}"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid(format!("radius must be positive, got {radius}"));
        }
        if points < MIN_POINTS {
            return invalid(format!("need at least {MIN_POINTS} points, got {points}"));
        }
        if f0 * f64::from(n) * radius < MIN_BOUNDARY_DEFORMATION {
            return invalid(format!(
                "f0·n·R = {} is below {MIN_BOUNDARY_DEFORMATION}",
                f0 * f64::from(n) * radius
            ));
        }
        Ok(PlaneRotationModel { n, f0, radius, points, module: Parity::Even })
    }

    /// Grade the module the other way round: `Λ^{0,1}` even, `Λ^{0,0}` odd.
    pub fn with_module_parity(mut self, parity: Parity) -> Self {
        self.module = parity;
        self
    }

    pub fn with_points(&self, points: usize) -> Result<Self, AnalyticError> {
        PlaneRotationModel::new(self.n, self.f0, self.radius, points).map(|m| m.with_module_parity(self.module))
    }

    pub fn with_f0(&self, f0: f64) -> Result<Self, AnalyticError> {
        PlaneRotationModel::new(self.n, f0, self.radius, self.points).map(|m| m.with_module_parity(self.module))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn module_parity(&self) -> Parity {
        self.module
    }

    pub fn spacing(&self) -> f64 {
        self.radius / self.points as f64
    }

    /// `λ = f0·n·v`: the coefficient of `r` in the deformation term.
    pub fn deformation_rate(&self, v: f64) -> f64 {
        self.f0 * f64::from(self.n) * v
    }

    /// Admissibility samples on the solver grid `r = k·h`.
    ///
    /// For the flat plane `|v| = n|𝐯| r`, `‖∇v‖ = n|𝐯|`, and the moment
    /// term on `Λ^{0,•}` is bounded by `n|𝐯|`, so
    /// `ν(r) = |𝐯| + 2n|𝐯| + n|𝐯| r + 1`.
    pub fn admissibility_profile(&self, v: &TamingData) -> AdmissibilityProfile {
        let vn = v.norm_f64();
        let n = f64::from(self.n);
        let h = self.spacing();
        let radii: Vec<f64> = (1..=self.points).map(|k| k as f64 * h).collect();
        let len = radii.len();
        let v_norm: Vec<f64> = radii.iter().map(|r| n * vn * r).collect();
        let nu: Vec<f64> = radii.iter().map(|r| vn + 2.0 * n * vn + n * vn * r + 1.0).collect();
        AdmissibilityProfile::new(radii, vec![self.f0; len], vec![0.0; len], v_norm, nu)
            .expect("plane profile is well formed")
    }

    pub fn admissibility(&self, v: &TamingData) -> AdmissibilityReport {
        admissibility_report(&self.admissibility_profile(v), &AdmissibilityCriteria::default())
    }

    /// Angular number `l` of the `Λ^{0,0}` component for weight `α`, if the
    /// mode carries sections.
    pub fn angular_number(&self, weight: i64) -> Option<i64> {
        let n = i64::from(self.n);
        (weight % n == 0).then(|| -weight / n)
    }
}

/// A tridiagonal matrix stored by bands, assembled entry by entry so that
/// symmetry is a property of the assembly rather than of the storage.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BandMatrix {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.lower == self.upper
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn to_sym_tridiag(&self) -> Result<SymTridiag, AnalyticError> {
        if !self.is_symmetric() {
            return Err(AnalyticError::NotSymmetric);
        }
        Ok(SymTridiag::new(self.diag.clone(), self.upper.clone()))
    }
}

/// Which radial function an unknown samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// `p = √r·g`, the `Λ^{0,0}` component.
    Scalar,
    /// `q = √r·h`, the `Λ^{0,1}` component.
    Form,
}

impl Field {
    fn other(self) -> Field {
        match self {
            Field::Scalar => Field::Form,
            Field::Form => Field::Scalar,
        }
    }
}

/// Boundary data of a mode operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeBoundary {
    /// Field on the first half-node `h/2`; the other one vanishes at `r = 0`.
    pub origin_first: Field,
    /// Field held at zero at `r = R`.
    pub dirichlet_at_radius: Field,
}

/// The mode-`α` block of `D_{fv}` on the staggered radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    pub mode: i64,
    /// `l` for the `Λ^{0,0}` component; `None` when the mode is empty.
    pub angular: Option<i64>,
    pub h: f64,
    pub lambda: f64,
    pub matrix: BandMatrix,
    pub fields: Vec<Field>,
    pub positions: Vec<f64>,
    pub grading: Vec<Parity>,
    pub boundary: Option<ModeBoundary>,
}

impl ModeOperator {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    /// Smallest eigenvalue of the squared operator.
    pub fn lowest_square_eigenvalue(&self) -> Result<f64, AnalyticError> {
        if self.is_empty() {
            return Err(AnalyticError::EmptyMode { mode: self.mode });
        }
        let t = self.matrix.to_sym_tridiag()?;
        let k = t.count_below(0.0);
        let above = t.eigenvalue(k.min(t.len() - 1), 1e-13)?;
        let mut best = above.abs();
        if k > 0 {
            best = best.min(t.eigenvalue(k - 1, 1e-13)?.abs());
        }
        Ok(best * best)
    }

    /// `‖Op·s‖ / ‖s‖`.
    pub fn relative_residual(&self, s: &[f64]) -> f64 {
        let r = self.matrix.matvec(s);
        let num = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let den = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        num / den
    }
}

/// Assemble the mode-`mode` block of the deformed operator for taming
/// value `v` (the circle is rank one, so `v` is a scalar).
pub fn build_mode_operator(model: &PlaneRotationModel, v: f64, mode: i64) -> ModeOperator {
    let h = model.spacing();
    let lambda = model.deformation_rate(v);
    let Some(l) = model.angular_number(mode) else {
        return ModeOperator {
            mode,
            angular: None,
            h,
            lambda,
            matrix: BandMatrix { lower: vec![], diag: vec![], upper: vec![] },
            fields: vec![],
            positions: vec![],
            grading: vec![],
            boundary: None,
        };
    };
    let kappa = l as f64 + 0.5;
    let origin_first = if l >= 0 { Field::Scalar } else { Field::Form };
    let dirichlet_at_radius = if lambda > 0.0 { Field::Form } else { Field::Scalar };
    let mut fields = Vec::with_capacity(2 * model.points);
    let mut positions = Vec::with_capacity(2 * model.points);
    for k in 1..=2 * model.points {
        let field = if k % 2 == 1 { origin_first } else { origin_first.other() };
        if k == 2 * model.points && field == dirichlet_at_radius {
            break;
        }
        fields.push(field);
        positions.push(k as f64 * h / 2.0);
    }
    // Entry of A (rows on q, columns on p) between neighbours.
    let a_entry = |r_q: f64, r_p: f64| {
        let side = if r_p > r_q { 1.0 } else { -1.0 };
        (r_q / r_p).powf(kappa) * (side / h + 0.5 * lambda * r_q)
    };
    let size = fields.len();
    let mut lower = vec![0.0; size.saturating_sub(1)];
    let mut upper = vec![0.0; size.saturating_sub(1)];
    for i in 0..size.saturating_sub(1) {
        let (ri, rj) = (positions[i], positions[i + 1]);
        match fields[i] {
            // Row i is q: A[q, p]; the transpose entry is A*[p, q].
            Field::Form => {
                upper[i] = a_entry(ri, rj);
                lower[i] = a_entry(ri, rj);
            }
            Field::Scalar => {
                upper[i] = a_entry(rj, ri);
                lower[i] = a_entry(rj, ri);
            }
        }
    }
    let scalar_parity = model.module;
    let grading = fields
        .iter()
        .map(|f| match f {
            Field::Scalar => scalar_parity,
            Field::Form => scalar_parity.flip(),
        })
        .collect();
    ModeOperator {
        mode,
        angular: Some(l),
        h,
        lambda,
        matrix: BandMatrix { lower, diag: vec![0.0; size], upper },
        fields,
        positions,
        grading,
        boundary: Some(ModeBoundary { origin_first, dirichlet_at_radius }),
    }
}

/// Samples of `z^l e^{−λr²/2}` in the operator's unknowns (`p = r^{l+1/2}
/// e^{−λr²/2}` on scalar nodes, zero on form nodes). `None` unless the mode
/// has `l ≥ 0` and `λ > 0`.
pub fn bargmann_candidate(op: &ModeOperator) -> Option<Vec<f64>> {
    let l = op.angular?;
    if l < 0 || op.lambda <= 0.0 {
        return None;
    }
    let exponent = l as f64 + 0.5;
    Some(
        op.fields
            .iter()
            .zip(&op.positions)
            .map(|(f, r)| match f {
                Field::Scalar => r.powf(exponent) * (-0.5 * op.lambda * r * r).exp(),
                Field::Form => 0.0,
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelDims {
    pub even: usize,
    pub odd: usize,
}

impl KernelDims {
    pub fn index(&self) -> i64 {
        self.even as i64 - self.odd as i64
    }
}

/// Dimensions of the even and odd kernel: eigenvalues of `op²` below
/// `tol²`, attributed to a grading by which component carries at least
/// 99% of the eigenvector's norm.
///
/// Fails when an eigenvalue of `op²` lies in `[tol², 100·tol²]`, or when a
/// near-kernel vector is not graded.
pub fn kernel_dims(op: &ModeOperator, tol: f64) -> Result<KernelDims, AnalyticError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(AnalyticError::InvalidTolerance(tol));
    }
    if op.is_empty() {
        return Ok(KernelDims { even: 0, odd: 0 });
    }
    let t = op.matrix.to_sym_tridiag()?;
    let ambiguous = t.count_in(tol, 10.0 * tol) + t.count_in(-10.0 * tol, -tol);
    if ambiguous > 0 {
        return Err(AnalyticError::AmbiguousGap { mode: op.mode, count: ambiguous, tol });
    }
    let first = t.count_below(-tol);
    let cluster = t.count_in(-tol, tol);
    if cluster == 0 {
        return Ok(KernelDims { even: 0, odd: 0 });
    }
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(cluster);
    for k in first..first + cluster {
        let value = t.eigenvalue(k, tol * 1e-6)?;
        let x = t.eigenvector(value, &vectors, 0.1 * tol)?;
        vectors.push(x);
    }
    // Grading operator restricted to the cluster.
    let signs: Vec<f64> = op.grading.iter().map(|p| p.sign() as f64).collect();
    let gram: Vec<Vec<f64>> = vectors
        .iter()
        .map(|xi| {
            vectors
                .iter()
                .map(|xj| xi.iter().zip(xj).zip(&signs).map(|((a, b), s)| a * b * s).sum())
                .collect()
        })
        .collect();
    let mut dims = KernelDims { even: 0, odd: 0 };
    for gamma in jacobi_eigenvalues(gram) {
        let even_fraction = 0.5 * (1.0 + gamma);
        if even_fraction >= GRADING_PURITY {
            dims.even += 1;
        } else if even_fraction <= 1.0 - GRADING_PURITY {
            dims.odd += 1;
        } else {
            return Err(AnalyticError::AmbiguousGrading { mode: op.mode, even_fraction });
        }
    }
    Ok(dims)
}

/// Kernel dimensions at `N` and `2N` points; they must agree.
pub fn kernel_dims_refined(
    model: &PlaneRotationModel,
    v: f64,
    mode: i64,
    tol: f64,
) -> Result<KernelDims, AnalyticError> {
    let coarse = kernel_dims(&build_mode_operator(model, v, mode), tol)?;
    let fine_model = model.with_points(2 * model.points())?;
    let fine = kernel_dims(&build_mode_operator(&fine_model, v, mode), tol)?;
    if coarse != fine {
        return Err(AnalyticError::GridUnstable { mode, coarse, fine });
    }
    Ok(coarse)
}

/// Default kernel tolerance: `10⁻⁶` times the continuum gap `2√|λ|`.
pub fn default_tolerance(model: &PlaneRotationModel, v: f64) -> f64 {
    1e-6 * 2.0 * model.deformation_rate(v).abs().sqrt()
}

fn scalar_taming(v: &TamingData) -> Result<Rational, AnalyticError> {
    if v.rank() != 1 {
        return Err(AnalyticError::RankNotOne(v.rank()));
    }
    Ok(v.vector()[0].clone())
}

/// Integer weights `α` with `lo ≤ α·v ≤ hi`, ascending.
pub fn window_weights(v: &TamingData, window: &Window) -> Result<Vec<i64>, AnalyticError> {
    let s = scalar_taming(v)?;
    let (Some(lo), Some(hi)) = (window.lower(), window.upper()) else {
        return Err(AnalyticError::UnboundedWindow);
    };
    if let Some(d) = window.direction() {
        if d != v.vector() {
            return Err(AnalyticError::UnboundedWindow);
        }
    }
    let (a, b) = if s.is_positive() { (lo / &s, hi / &s) } else { (hi / &s, lo / &s) };
    let first = a.ceil().to_integer();
    let last = b.floor().to_integer();
    let mut out = Vec::new();
    let mut k = first;
    while k <= last {
        out.push(k.to_i64().ok_or(AnalyticError::UnboundedWindow)?);
        k += BigInt::from(1);
    }
    debug_assert!(out.iter().all(|x| window.contains(&Weight::new(vec![*x]))));
    Ok(out)
}

/// Result of the analytic computation for one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    pub weight: Weight,
    pub dims: Result<KernelDims, AnalyticError>,
}

/// Per-weight kernel dimensions over the window. Fails as a whole when the
/// configuration is unusable (rank, window, admissibility); per-mode
/// spectral failures are reported in the rows.
pub fn analytic_modes(
    model: &PlaneRotationModel,
    v: &TamingData,
    window: &Window,
    tol: Option<f64>,
) -> Result<Vec<ModeResult>, AnalyticError> {
    let s = scalar_taming(v)?.to_f64().ok_or(AnalyticError::RankNotOne(1))?;
    let weights = window_weights(v, window)?;
    if model.admissibility(v).verdict != Verdict::Pass {
        return Err(AnalyticError::AdmissibilityFailed);
    }
    let tol = tol.unwrap_or_else(|| default_tolerance(model, s));
    Ok(weights
        .par_iter()
        .map(|&alpha| ModeResult {
            weight: Weight::new(vec![alpha]),
            dims: kernel_dims_refined(model, s, alpha, tol),
        })
        .collect())
}

/// The analytic index `Σ (dim Ker⁺ − dim Ker⁻)·V_α` on the window.
pub fn analytic_index(
    model: &PlaneRotationModel,
    v: &TamingData,
    window: &Window,
    tol: Option<f64>,
) -> Result<Character, AnalyticError> {
    let rows = analytic_modes(model, v, window, tol)?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let dims = row.dims?;
        entries.push((row.weight, BigInt::from(dims.index())));
    }
    Ok(Character::from_entries(1, entries, window.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> PlaneRotationModel {
        PlaneRotationModel::new(1, 4.0, 12.0, 512).unwrap()
    }

    #[test]
    fn invariant_checks() {
        assert!(PlaneRotationModel::new(1, 1.0, 12.0, 512).is_err());
        assert!(PlaneRotationModel::new(1, 4.0, 12.0, 32).is_err());
        assert!(PlaneRotationModel::new(0, 4.0, 12.0, 512).is_err());
    }

    #[test]
    fn assembled_matrix_is_symmetric() {
        for mode in -3..=3 {
            for v in [1.0, -1.0] {
                let op = build_mode_operator(&model(), v, mode);
                assert!(op.matrix.is_symmetric());
                assert!(op.matrix.diag.iter().all(|d| *d == 0.0));
            }
        }
    }

    #[test]
    fn layout_follows_regularity_and_growth() {
        let a = build_mode_operator(&model(), 1.0, 0);
        assert_eq!(a.fields[0], Field::Scalar);
        assert_eq!(a.len(), 2 * 512 - 1);
        let b = build_mode_operator(&model(), 1.0, 2);
        assert_eq!(b.fields[0], Field::Form);
        assert_eq!(b.len(), 2 * 512);
        let c = build_mode_operator(&model(), -1.0, 2);
        assert_eq!(c.len(), 2 * 512 - 1);
        assert_eq!(*c.fields.last().unwrap(), Field::Form);
    }

    #[test]
    fn indivisible_weights_have_no_sections() {
        let m = PlaneRotationModel::new(3, 4.0, 12.0, 256).unwrap();
        let op = build_mode_operator(&m, 1.0, -2);
        assert!(op.is_empty());
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 0, odd: 0 });
    }

    #[test]
    fn ground_mode_has_one_even_kernel_vector() {
        let op = build_mode_operator(&model(), 1.0, 0);
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 1, odd: 0 });
        let s = bargmann_candidate(&op).unwrap();
        assert!(op.relative_residual(&s) < 1e-2);
    }

    #[test]
    fn positive_weight_is_gapped() {
        let op = build_mode_operator(&model(), 1.0, 1);
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 0, odd: 0 });
        // continuum: A*A ≥ 4λ|l|, AA* ≥ 4λ|l|
        assert!(op.lowest_square_eigenvalue().unwrap() > 8.0);
    }

    #[test]
    fn degenerate_tolerance() {
        let op = build_mode_operator(&model(), 1.0, 0);
        assert!(matches!(kernel_dims(&op, 0.0), Err(AnalyticError::InvalidTolerance(_))));
    }

    #[test]
    fn huge_tolerance_is_ambiguous() {
        let op = build_mode_operator(&model(), 1.0, 0);
        assert!(matches!(kernel_dims(&op, 1.0), Err(AnalyticError::AmbiguousGap { .. })));
    }

    #[test]
    fn odd_module_swaps_grading() {
        let m = model().with_module_parity(Parity::Odd);
        let op = build_mode_operator(&m, 1.0, -1);
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 0, odd: 1 });
    }

    #[test]
    fn negative_taming_moves_kernel_to_forms() {
        let op = build_mode_operator(&model(), -1.0, 1);
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 0, odd: 1 });
        let op = build_mode_operator(&model(), -1.0, 0);
        assert_eq!(kernel_dims(&op, 1e-6).unwrap(), KernelDims { even: 0, odd: 0 });
    }

    #[test]
    fn window_weights_respect_sign_of_taming() {
        let v = TamingData::new(vec![Rational::new(BigInt::from(-1), BigInt::from(2))]).unwrap();
        let w = Window::closed(&v, Rational::from_integer(BigInt::from(-2)), Rational::from_integer(BigInt::from(0)))
            .unwrap();
        assert_eq!(window_weights(&v, &w).unwrap(), vec![0, 1, 2, 3, 4]);
    }
}
