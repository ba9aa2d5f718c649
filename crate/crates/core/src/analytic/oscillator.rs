//! The cylinder model operator `−d²/dt² ± (Π₁ − Π₀) + t²` on one factor.
//!
//! On `Λ⁰` the projector difference acts by `∓1`, so each branch is a
//! shifted harmonic oscillator with spectrum `2k + 1 ∓ 1`. The minus branch
//! has the one-dimensional kernel spanned by `e^{−t²/2}`.

use super::tridiag::SymTridiag;
use super::AnalyticError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `−d²/dt² + t² − 1`: spectrum `0, 2, 4, …`.
    Minus,
    /// `−d²/dt² + t² + 1`: spectrum `2, 4, 6, …`.
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorModel {
    pub half_width: f64,
    pub points: usize,
    pub branch: Branch,
}

pub const MIN_HALF_WIDTH: f64 = 8.0;
pub const MIN_OSCILLATOR_POINTS: usize = 1000;

impl OscillatorModel {
    pub fn new(half_width: f64, points: usize, branch: Branch) -> Result<Self, AnalyticError> {
        if !(half_width >= MIN_HALF_WIDTH && half_width.is_finite()) {
            return Err(AnalyticError::InvalidModel(format!(
                "half width must be at least {MIN_HALF_WIDTH}, got {half_width}"
            )));
        }
        if points < MIN_OSCILLATOR_POINTS {
            return Err(AnalyticError::InvalidModel(format!(
                "need at least {MIN_OSCILLATOR_POINTS} points, got {points}"
            )));
        }
        Ok(OscillatorModel { half_width, points, branch })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.points as f64 + 1.0)
    }

    /// Interior grid points of `[−T, T]`; the ends carry the Dirichlet data.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.points).map(|i| -self.half_width + i as f64 * h).collect()
    }

    /// Three-point finite-difference matrix.
    pub fn matrix(&self) -> SymTridiag {
        let h = self.spacing();
        let shift = match self.branch {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        };
        let diag = self.grid().iter().map(|t| 2.0 / (h * h) + t * t + shift).collect();
        SymTridiag::new(diag, vec![-1.0 / (h * h); self.points - 1])
    }
}

/// The `k` smallest eigenvalues, ascending.
pub fn oscillator_spectrum(model: &OscillatorModel, k: usize) -> Result<Vec<f64>, AnalyticError> {
    Ok(model.matrix().lowest_eigenvalues(k, 1e-12)?)
}

/// Unit-norm ground state of the minus branch, positive at the centre.
pub fn ground_state_profile(model: &OscillatorModel) -> Result<Vec<f64>, AnalyticError> {
    if model.branch != Branch::Minus {
        return Err(AnalyticError::InvalidModel("ground state profile needs the minus branch".into()));
    }
    let t = model.matrix();
    let value = t.eigenvalue(0, 1e-13)?;
    let mut x = t.eigenvector(value, &[], 1e-8)?;
    let mid = x.len() / 2;
    if x[mid] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(x)
}

/// Unit-norm samples of `e^{−t²/2}` on the model grid.
pub fn sampled_gaussian(model: &OscillatorModel) -> Vec<f64> {
    let g: Vec<f64> = model.grid().iter().map(|t| (-0.5 * t * t).exp()).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    g.into_iter().map(|x| x / norm).collect()
}
