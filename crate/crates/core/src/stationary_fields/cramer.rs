//! Constructive Cramer decomposition for Kolmogorov fields on finite groups.
//!
//! The field lives on the probability space `(classes, μ)` with
//! `Y_π(ω) = χ_π(ω)`. The isometry `V: Σ α_j Y_j ↦ Σ α_j χ_j` onto
//! `L²_c(G, μ)` is inverted by solving the character-table system, so
//! `Γ({c}) = V*1_{c}` is an explicit combination of the `Y_j` and therefore
//! an explicit random variable on the classes.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{FieldSampler, SecondMomentOracle};
use crate::dual_hypergroup::{FiniteGroup, Label};
use crate::error::{Error, Result};

/// An orthogonally scattered measure on the classes of a finite group.
#[derive(Debug, Clone)]
pub struct ScatteredMeasure {
    group: Arc<FiniteGroup>,
    mu: Vec<f64>,
    // coefficients[c][j]: Γ({c}) = Σ_j coefficients[c][j] Y_j
    coefficients: Vec<Vec<Complex64>>,
    // values[c][ω]: Γ({c}) as a function on the sample space
    values: Vec<Vec<Complex64>>,
    null_classes: Vec<usize>,
    descriptor: String,
}

/// Builds `Γ` for a Kolmogorov field over a finite group. Classes of
/// `μ`-measure zero carry `Γ = 0` and are listed in the descriptor.
pub fn cramer_decompose_finite(field: &FieldSampler) -> Result<ScatteredMeasure> {
    let measure = field.kolmogorov_measure().ok_or_else(|| {
        Error::Unsupported("Cramer decomposition needs an untranslated Kolmogorov field".into())
    })?;
    let (Some(group), Some(weights)) = (field.dual().as_finite(), measure.class_weights()) else {
        return Err(Error::Unsupported("Cramer decomposition is built for finite groups only".into()));
    };
    let k = group.num_classes();
    // table[ω][j] = χ_j(ω); solving table·α = 1_c gives V*1_c = Σ α_j Y_j.
    let table = DMatrix::from_fn(k, k, |omega, j| group.character(j, omega));
    let lu = table.clone().lu();
    let null_classes: Vec<usize> = (0..k).filter(|&c| weights[c] == 0.0).collect();

    let mut coefficients = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for c in 0..k {
        if null_classes.contains(&c) {
            coefficients.push(vec![Complex64::default(); k]);
            values.push(vec![Complex64::default(); k]);
            continue;
        }
        let indicator = DVector::from_fn(k, |omega, _| Complex64::new(if omega == c { 1.0 } else { 0.0 }, 0.0));
        let alpha = lu
            .solve(&indicator)
            .ok_or_else(|| Error::DataIntegrity("character table is singular".into()))?;
        values.push((&table * &alpha).iter().copied().collect());
        coefficients.push(alpha.iter().copied().collect());
    }

    let descriptor = format!(
        "cramer({}); null classes: {:?}",
        field.descriptor(),
        null_classes
    );
    Ok(ScatteredMeasure {
        group: group.clone(),
        mu: weights.to_vec(),
        coefficients,
        values,
        null_classes,
        descriptor,
    })
}

impl ScatteredMeasure {
    pub fn num_classes(&self) -> usize {
        self.mu.len()
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn null_classes(&self) -> &[usize] {
        &self.null_classes
    }

    /// `μ(A)` for a set of classes.
    pub fn measure_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&c| self.mu[c]).sum()
    }

    /// `Γ(A)` as a function on the sample space.
    pub fn gamma(&self, set: &[usize]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.num_classes()];
        for &c in set {
            for (o, v) in out.iter_mut().zip(&self.values[c]) {
                *o += v;
            }
        }
        out
    }

    /// `Γ(A)` as coefficients over `Y_0, …, Y_{k-1}`.
    pub fn gamma_coefficients(&self, set: &[usize]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.num_classes()];
        for &c in set {
            for (o, v) in out.iter_mut().zip(&self.coefficients[c]) {
                *o += v;
            }
        }
        out
    }

    /// `E(Γ(A) conj(Γ(B)))` in `L²(classes, μ)`.
    pub fn inner(&self, a: &[usize], b: &[usize]) -> Complex64 {
        let (ga, gb) = (self.gamma(a), self.gamma(b));
        self.mu.iter().zip(ga.iter().zip(&gb)).map(|(&m, (x, y))| m * x * y.conj()).sum()
    }

    /// `E(Γ(A) conj(Γ(B)))` through the field's second moments instead of
    /// the sample-space representation.
    pub fn inner_via_oracle(&self, oracle: &dyn SecondMomentOracle, a: &[usize], b: &[usize]) -> Result<Complex64> {
        let (ca, cb) = (self.gamma_coefficients(a), self.gamma_coefficients(b));
        let mut total = Complex64::default();
        for (i, x) in ca.iter().enumerate() {
            for (j, y) in cb.iter().enumerate() {
                total += x * y.conj() * oracle.second_moment(Label(i as i64), Label(j as i64))?;
            }
        }
        Ok(total)
    }

    /// `max_π ‖Y_π − Σ_c χ_π(c) Γ({c})‖`, measured pointwise on the support
    /// of `μ`.
    pub fn reconstruction_residual(&self) -> f64 {
        let k = self.num_classes();
        let mut worst: f64 = 0.0;
        for pi in 0..self.group.num_irreps() {
            for omega in (0..k).filter(|&o| self.mu[o] > 0.0) {
                let rebuilt: Complex64 = (0..k)
                    .map(|c| self.group.character(pi, c) * self.values[c][omega])
                    .sum();
                worst = worst.max((self.group.character(pi, omega) - rebuilt).norm());
            }
        }
        worst
    }
}
