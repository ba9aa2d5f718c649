//! The taming vector, the half-space support bound of the index, and the
//! sampled admissibility check for deformation functions.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::characters::{pairing, Rational, Weight};
use crate::fixed_point::FixedComponent;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TamingError {
    #[error("taming vector must be nonzero")]
    ZeroVector,
    #[error("taming vector must have rank at least 1")]
    EmptyVector,
    #[error("admissibility profile arrays must share one length (radii {radii}, found {found})")]
    LengthMismatch { radii: usize, found: usize },
    #[error("admissibility radii must be strictly increasing")]
    RadiiNotIncreasing,
    #[error("admissibility samples must be finite and nonnegative")]
    NegativeSample,
}

/// The value `v ∈ ℝʳ` of the taming map on the fixed set, kept exact.
#[derive(Debug, Clone, PartialEq)]
pub struct TamingData {
    v: Vec<Rational>,
}

impl TamingData {
    pub fn new(v: Vec<Rational>) -> Result<Self, TamingError> {
        if v.is_empty() {
            return Err(TamingError::EmptyVector);
        }
        if v.iter().all(Zero::is_zero) {
            return Err(TamingError::ZeroVector);
        }
        Ok(TamingData { v })
    }

    pub fn from_integers(v: &[i64]) -> Result<Self, TamingError> {
        TamingData::new(v.iter().map(|x| Rational::from_integer(BigInt::from(*x))).collect())
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    pub fn vector(&self) -> &[Rational] {
        &self.v
    }

    pub fn pair(&self, w: &Weight) -> Rational {
        pairing(w, &self.v)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub fn norm_f64(&self) -> f64 {
        self.to_f64().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `C = max ⟨weight(a), v⟩` over every module summand of every component.
///
/// Symmetric powers of the oriented conormal weights only lower the
/// pairing, so every weight of the index satisfies `⟨α, v⟩ ≤ C`. `None`
/// when there are no summands at all (the index then vanishes).
pub fn support_bound(components: &[FixedComponent], v: &TamingData) -> Option<Rational> {
    components
        .iter()
        .flat_map(|c| c.summands.iter())
        .map(|s| v.pair(&s.weight))
        .max()
}

/// Samples of the deformation function and the geometric quantities it is
/// weighed against, on increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityProfile {
    radii: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    v_norm: Vec<f64>,
    nu: Vec<f64>,
}

impl AdmissibilityProfile {
    pub fn new(
        radii: Vec<f64>,
        f: Vec<f64>,
        df: Vec<f64>,
        v_norm: Vec<f64>,
        nu: Vec<f64>,
    ) -> Result<Self, TamingError> {
        let n = radii.len();
        for arr in [&f, &df, &v_norm, &nu] {
            if arr.len() != n {
                return Err(TamingError::LengthMismatch { radii: n, found: arr.len() });
            }
        }
        if radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(TamingError::RadiiNotIncreasing);
        }
        if [&f, &df, &v_norm, &nu]
            .iter()
            .any(|arr| arr.iter().any(|x| !x.is_finite() || *x < 0.0))
        {
            return Err(TamingError::NegativeSample);
        }
        Ok(AdmissibilityProfile { radii, f, df, v_norm, nu })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Scale `f` and `|df|` pointwise by `lambda`.
    pub fn scaled(&self, lambda: f64) -> AdmissibilityProfile {
        AdmissibilityProfile {
            radii: self.radii.clone(),
            f: self.f.iter().map(|x| x * lambda).collect(),
            df: self.df.iter().map(|x| x * lambda).collect(),
            v_norm: self.v_norm.clone(),
            nu: self.nu.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Thresholds for the sampled tail test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityCriteria {
    /// Minimum value of the last ratio.
    pub threshold: f64,
    /// Fraction of trailing samples over which the ratio must increase.
    pub tail_fraction: f64,
}

impl Default for AdmissibilityCriteria {
    fn default() -> Self {
        AdmissibilityCriteria { threshold: 10.0, tail_fraction: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
}

/// `ρₖ = f²|v|² / (|df||v| + f·ν + 1)` at every sample, with a PASS verdict
/// when the trailing `tail_fraction` of the ratios is strictly increasing
/// and the last one reaches `threshold`.
pub fn admissibility_report(
    p: &AdmissibilityProfile,
    criteria: &AdmissibilityCriteria,
) -> AdmissibilityReport {
    let ratios: Vec<f64> = (0..p.len())
        .map(|k| {
            let (f, df, v, nu) = (p.f[k], p.df[k], p.v_norm[k], p.nu[k]);
            f * f * v * v / (df * v + f * nu + 1.0)
        })
        .collect();
    let n = ratios.len();
    let tail_len = ((n as f64) * criteria.tail_fraction).ceil() as usize;
    let tail_start = n.saturating_sub(tail_len.max(2));
    let increasing = ratios[tail_start..].windows(2).all(|w| w[1] > w[0]);
    let last_ok = ratios.last().is_some_and(|&r| r >= criteria.threshold);
    let verdict = if n >= 2 && increasing && last_ok { Verdict::Pass } else { Verdict::Fail };
    AdmissibilityReport { ratios, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_point::{FixedComponent, Parity, Summand};

    fn point(weights: &[Vec<i64>]) -> FixedComponent {
        FixedComponent {
            label: "p".into(),
            dim: 0,
            genus: 0,
            normal_weights: vec![],
            summands: weights
                .iter()
                .map(|w| Summand {
                    weight: Weight::new(w.clone()),
                    parity: Parity::Even,
                    rank: 1,
                    twist_degree: 0,
                })
                .collect(),
        }
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(TamingData::from_integers(&[0, 0]), Err(TamingError::ZeroVector));
    }

    #[test]
    fn support_bound_examples() {
        let v = TamingData::from_integers(&[1]).unwrap();
        assert_eq!(support_bound(&[point(&[vec![0]])], &v), Some(q(0)));
        assert_eq!(support_bound(&[point(&[vec![2], vec![-5]])], &v), Some(q(2)));
        let v = TamingData::from_integers(&[1, 3]).unwrap();
        assert_eq!(support_bound(&[point(&[vec![1, 0], vec![0, 1]])], &v), Some(q(3)));
        assert_eq!(support_bound(&[], &v), None);
    }

    fn radii(n: usize) -> Vec<f64> {
        (1..=n).map(|k| k as f64 * 0.1).collect()
    }

    #[test]
    fn constant_deformation_on_growing_field_passes() {
        let r = radii(120);
        let (c, n, a) = (4.0, 1.0, 3.0);
        let p = AdmissibilityProfile::new(
            r.clone(),
            vec![c; r.len()],
            vec![0.0; r.len()],
            r.iter().map(|x| n * x).collect(),
            r.iter().map(|x| a + n * x).collect(),
        )
        .unwrap();
        let rep = admissibility_report(&p, &AdmissibilityCriteria::default());
        assert_eq!(rep.verdict, Verdict::Pass);
        // closed form c^2 n^2 r^2 / (c (A + n r) + 1)
        let rr = r[50];
        let expected = c * c * n * n * rr * rr / (c * (a + n * rr) + 1.0);
        assert!((rep.ratios[50] - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_deformation_fails() {
        let r = radii(40);
        let p = AdmissibilityProfile::new(
            r.clone(),
            vec![0.0; 40],
            vec![0.0; 40],
            r.clone(),
            vec![2.0; 40],
        )
        .unwrap();
        let rep = admissibility_report(&p, &AdmissibilityCriteria::default());
        assert!(rep.ratios.iter().all(|x| *x == 0.0));
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn linear_deformation_bounded_field() {
        let r: Vec<f64> = (1..=200).map(|k| k as f64 * 0.5).collect();
        let p = AdmissibilityProfile::new(
            r.clone(),
            r.clone(),
            vec![1.0; 200],
            vec![1.0; 200],
            vec![2.0; 200],
        )
        .unwrap();
        let rep = admissibility_report(&p, &AdmissibilityCriteria::default());
        for (k, rr) in r.iter().enumerate() {
            assert!((rep.ratios[k] - rr * rr / (2.0 + 2.0 * rr)).abs() < 1e-12);
        }
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn profile_validation() {
        assert_eq!(
            AdmissibilityProfile::new(vec![1.0, 0.5], vec![1.0; 2], vec![0.0; 2], vec![1.0; 2], vec![1.0; 2]),
            Err(TamingError::RadiiNotIncreasing)
        );
        assert!(matches!(
            AdmissibilityProfile::new(vec![1.0, 2.0], vec![1.0], vec![0.0; 2], vec![1.0; 2], vec![1.0; 2]),
            Err(TamingError::LengthMismatch { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn scaling_up_increases_every_ratio(
                samples in prop::collection::vec((0.01f64..10.0, 0.0f64..5.0, 0.01f64..10.0, 0.0f64..10.0), 2..30),
                lambda in 1.01f64..8.0,
            ) {
                let n = samples.len();
                let r: Vec<f64> = (1..=n).map(|k| k as f64).collect();
                let p = AdmissibilityProfile::new(
                    r,
                    samples.iter().map(|s| s.0).collect(),
                    samples.iter().map(|s| s.1).collect(),
                    samples.iter().map(|s| s.2).collect(),
                    samples.iter().map(|s| s.3).collect(),
                ).unwrap();
                let crit = AdmissibilityCriteria::default();
                let base = admissibility_report(&p, &crit);
                let up = admissibility_report(&p.scaled(lambda), &crit);
                for (a, b) in base.ratios.iter().zip(&up.ratios) {
                    prop_assert!(b > a);
                }
            }

            #[test]
            fn adding_a_summand_never_lowers_the_bound(
                ws in prop::collection::vec(prop::collection::vec(-5i64..5, 2), 1..6),
                extra in prop::collection::vec(-5i64..5, 2),
                v in prop::collection::vec(-3i64..4, 2),
            ) {
                prop_assume!(v.iter().any(|x| *x != 0));
                let v = TamingData::from_integers(&v).unwrap();
                let before = support_bound(&[point(&ws)], &v).unwrap();
                let mut more = ws.clone();
                more.push(extra);
                let after = support_bound(&[point(&more)], &v).unwrap();
                prop_assert!(after >= before);
            }
        }
    }
}
