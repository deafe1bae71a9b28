//! Random fields on the dual: samplers, exact second-moment oracles and
//! stationarity checks.
//!
//! Every field is decomposable: values at reducible elements are evaluated
//! from the irreducible values through [`Sample::evaluate`] or
//! [`second_moment_of`], never sampled directly.

mod checks;
mod cramer;

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::central_measures::{parse_measure, CentralMeasure, CoordinateSampler};
use crate::dual_hypergroup::{Dual, DualVector, GroupPoint, Label};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::monte_carlo::{self, rng_from_seed, Estimate, Rng};

pub use checks::{
    check_hypergroup_stationarity, check_stationarity, StationarityReport, Witness,
    STATDEF_TAG,
};
pub use cramer::{cramer_decompose_finite, ScatteredMeasure};

/// Exact `E(Y_a conj(Y_b))` for irreducible labels of a dual.
pub trait SecondMomentOracle: Send + Sync {
    fn dual(&self) -> &Dual;

    fn second_moment(&self, a: Label, b: Label) -> Result<Complex64>;
}

/// Decomposable extension: `E(Y_u conj(Y_v)) = Σ u_a conj(v_b) E(Y_a conj(Y_b))`.
pub fn second_moment_of(
    oracle: &dyn SecondMomentOracle,
    u: &DualVector,
    v: &DualVector,
) -> Result<Complex64> {
    let mut total = Complex64::default();
    for (a, ca) in u.iter() {
        for (b, cb) in v.iter() {
            total += ca * cb.conj() * oracle.second_moment(a, b)?;
        }
    }
    Ok(total)
}

/// One joint draw of a field over a finite label set.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub values: BTreeMap<Label, Complex64>,
    /// Class coordinate drawn by a Kolmogorov field.
    pub point: Option<GroupPoint>,
}

impl Sample {
    pub fn value(&self, label: Label) -> Option<Complex64> {
        self.values.get(&label).copied()
    }

    /// Value at a reducible element, `Σ M(π, π′) Y_{π′}`.
    pub fn evaluate(&self, v: &DualVector) -> Result<Complex64> {
        let missing: Vec<Label> = v.support().filter(|l| !self.values.contains_key(l)).collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteData { missing });
        }
        Ok(v.iter().map(|(l, c)| c * self.values[&l]).sum())
    }
}

#[derive(Debug, Clone)]
enum Law {
    WhiteNoise,
    Kolmogorov {
        measure: CentralMeasure,
        sampler: CoordinateSampler,
    },
    Translated {
        base: Box<Law>,
        by: Label,
    },
}

impl Law {
    fn draw(&self, dual: &Dual, rng: &mut Rng, labels: &BTreeSet<Label>) -> Result<Sample> {
        match self {
            Law::WhiteNoise => Ok(Sample {
                values: labels.iter().map(|&l| (l, circular_gaussian(rng))).collect(),
                point: None,
            }),
            Law::Kolmogorov { sampler, .. } => {
                let point = sampler.sample(rng);
                let values = labels
                    .iter()
                    .map(|&l| Ok((l, dual.character(l, point)?)))
                    .collect::<Result<_>>()?;
                Ok(Sample { values, point: Some(point) })
            }
            Law::Translated { base, by } => {
                let shifted = labels
                    .iter()
                    .map(|&l| Ok((l, dual.tensor_decompose(l, *by)?)))
                    .collect::<Result<Vec<_>>>()?;
                let needed: BTreeSet<Label> = shifted.iter().flat_map(|(_, v)| v.support()).collect();
                let inner = base.draw(dual, rng, &needed)?;
                let values = shifted
                    .iter()
                    .map(|(l, v)| Ok((*l, inner.evaluate(v)?)))
                    .collect::<Result<_>>()?;
                Ok(Sample { values, point: inner.point })
            }
        }
    }

    fn second_moment(&self, dual: &Dual, a: Label, b: Label) -> Result<Complex64> {
        dual.check(a)?;
        dual.check(b)?;
        match self {
            Law::WhiteNoise => Ok(Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0)),
            Law::Kolmogorov { measure, .. } => {
                measure.fourier_vector(&dual.tensor_decompose(a, dual.conjugate(b)?)?)
            }
            Law::Translated { base, by } => {
                let u = dual.tensor_decompose(a, *by)?;
                let v = dual.tensor_decompose(b, *by)?;
                let mut total = Complex64::default();
                for (x, cx) in u.iter() {
                    for (y, cy) in v.iter() {
                        total += cx * cy.conj() * base.second_moment(dual, x, y)?;
                    }
                }
                Ok(total)
            }
        }
    }
}

/// Standard circular complex Gaussian: independent real and imaginary
/// parts, each with mean 0 and variance 1/2.
pub fn circular_gaussian(rng: &mut Rng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// A source of joint samples of a decomposable field with an exact
/// second-moment oracle.
///
/// The sampler owns its RNG stream; identical seeds and label sets give
/// identical samples.
#[derive(Debug, Clone)]
pub struct FieldSampler {
    dual: Dual,
    law: Law,
    rng: Rng,
    descriptor: String,
}

/// Uncorrelated unit-variance field: one circular Gaussian per irreducible.
pub fn white_noise(dual: &Dual, seed: u64) -> FieldSampler {
    FieldSampler {
        dual: dual.clone(),
        law: Law::WhiteNoise,
        rng: rng_from_seed(seed),
        descriptor: "whitenoise(circular-gaussian)".into(),
    }
}

/// The field `Y_π = χ_π(g)` with `g` drawn from a central probability
/// measure; its covariance function is the transform of `μ`.
pub fn kolmogorov_field(measure: &CentralMeasure, seed: u64) -> Result<FieldSampler> {
    let mass = measure.total_mass();
    if (mass - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("Kolmogorov fields need a probability measure, mass is {mass}")));
    }
    Ok(FieldSampler {
        dual: measure.dual(),
        descriptor: format!("kolmogorov:{}", measure.descriptor()),
        law: Law::Kolmogorov { measure: measure.clone(), sampler: measure.coordinate_sampler()? },
        rng: rng_from_seed(seed),
    })
}

/// `τ_{π′}`: the field `π ↦ Y_{π ⊗ π′}`. The returned sampler continues
/// from a copy of the original stream.
pub fn translate(field: &FieldSampler, by: Label) -> Result<FieldSampler> {
    field.dual.check(by)?;
    Ok(FieldSampler {
        dual: field.dual.clone(),
        law: Law::Translated { base: Box::new(field.law.clone()), by },
        rng: field.rng.clone(),
        descriptor: format!("translate({}, {})", field.descriptor, field.dual.label_name(by)),
    })
}

/// Parses `whitenoise` or `kolmogorov:<measure-spec>`.
pub fn parse_field(spec: &str, dual: &Dual, seed: u64) -> Result<FieldSampler> {
    if spec == "whitenoise" {
        return Ok(white_noise(dual, seed));
    }
    match spec.strip_prefix("kolmogorov:") {
        Some(m) => kolmogorov_field(&parse_measure(m, dual)?, seed),
        None => Err(Error::InvalidParameter(format!("unknown field {spec:?}"))),
    }
}

impl FieldSampler {
    pub fn dual(&self) -> &Dual {
        &self.dual
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// The spectral measure of an untranslated Kolmogorov field.
    pub fn kolmogorov_measure(&self) -> Option<&CentralMeasure> {
        match &self.law {
            Law::Kolmogorov { measure, .. } => Some(measure),
            _ => None,
        }
    }

    /// Joint values at `labels`.
    pub fn sample(&mut self, labels: &[Label]) -> Result<BTreeMap<Label, Complex64>> {
        self.sample_detailed(labels).map(|s| s.values)
    }

    pub fn sample_detailed(&mut self, labels: &[Label]) -> Result<Sample> {
        let set = self.label_set(labels)?;
        self.law.draw(&self.dual, &mut self.rng, &set)
    }

    fn label_set(&self, labels: &[Label]) -> Result<BTreeSet<Label>> {
        for &l in labels {
            self.dual.check(l)?;
        }
        Ok(labels.iter().copied().collect())
    }

    /// Monte Carlo estimate of `E(statistic(sample))` over `samples` joint
    /// draws at `labels`, sharded by [`monte_carlo::estimate_means`].
    /// Independent of this sampler's own stream.
    pub fn estimate<F>(
        &self,
        labels: &[Label],
        samples: usize,
        seed: u64,
        exec: Execution,
        statistic: F,
    ) -> Result<Estimate>
    where
        F: Fn(&Sample) -> Complex64 + Sync + Send,
    {
        let set = self.label_set(labels)?;
        // Surface label errors before the draws, which then cannot fail.
        let probe = self.law.draw(&self.dual, &mut rng_from_seed(seed), &set)?;
        statistic(&probe);
        let est = monte_carlo::estimate_means(samples, seed, 1, exec, |rng, out| {
            let s = self.law.draw(&self.dual, rng, &set).expect("labels validated");
            out[0] = statistic(&s);
        });
        Ok(est[0])
    }
}

impl SecondMomentOracle for FieldSampler {
    fn dual(&self) -> &Dual {
        &self.dual
    }

    fn second_moment(&self, a: Label, b: Label) -> Result<Complex64> {
        self.law.second_moment(&self.dual, a, b)
    }
}

/// Monte Carlo `E(Y_{π₁} conj(Y_{π₂}))` with a jackknife standard error.
pub fn estimate_covariance(
    field: &FieldSampler,
    pi1: Label,
    pi2: Label,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    estimate_covariance_with(field, pi1, pi2, samples, seed, Execution::default())
}

pub fn estimate_covariance_with(
    field: &FieldSampler,
    pi1: Label,
    pi2: Label,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Estimate> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    field.estimate(&[pi1, pi2], samples, seed, exec, |s| {
        s.values[&pi1] * s.values[&pi2].conj()
    })
}
