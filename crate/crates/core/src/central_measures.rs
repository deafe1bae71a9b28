//! Central measures on the group side and their transforms on the dual.
//!
//! A central measure is stored in conjugacy-class coordinates: class weights
//! for a finite group, atoms plus an optional density in the angle
//! coordinate for SU(2) and the circle. Its transform
//! `π ↦ ∫ χ_π dμ` is a positive definite function on the dual, and on
//! finite groups the transform can be inverted exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng as _;
use serde::Serialize;

use crate::dual_hypergroup::{su2_character, Dual, DualVector, FiniteGroup, GroupPoint, Label};
use crate::error::{Error, Result};
use crate::monte_carlo::Rng;
use crate::quadrature::{self, GaussLegendre};

/// Mass tolerance for probability measures given by weights.
pub const PROBABILITY_TOL: f64 = 1e-12;
/// Weights in `[-BOCHNER_CLAMP, 0)` are round-off and clamp to zero.
pub const BOCHNER_CLAMP: f64 = 1e-10;
/// Default relative tolerance of [`is_positive_definite`].
pub const PD_TOL: f64 = 1e-10;
/// Heat-kernel character series stops once a term drops below this.
pub const HEAT_TAIL: f64 = 1e-14;

const MAX_HEAT_TERMS: usize = 100_000;
const SAMPLER_CELLS: usize = 4096;

/// A real density in the angle coordinate.
///
/// On SU(2) it is taken against the normalized Weyl measure
/// `(2/π) sin²θ dθ` on `[0, π]`, on the circle against `dθ/2π`.
#[derive(Clone)]
pub struct AngleDensity {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    name: String,
}

impl AngleDensity {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { f: Arc::new(f), name: name.into() }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        (self.f)(theta)
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for AngleDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngleDensity").field("name", &self.name).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AngleGroup {
    Su2,
    Circle,
}

impl AngleGroup {
    fn period(self) -> f64 {
        match self {
            AngleGroup::Su2 => PI,
            AngleGroup::Circle => 2.0 * PI,
        }
    }

    fn point(self, theta: f64) -> GroupPoint {
        match self {
            AngleGroup::Su2 => GroupPoint::Su2(theta),
            AngleGroup::Circle => GroupPoint::Circle(theta),
        }
    }

    // Reference-measure density w.r.t. dθ.
    fn reference(self, theta: f64) -> f64 {
        match self {
            AngleGroup::Su2 => 2.0 / PI * theta.sin().powi(2),
            AngleGroup::Circle => 0.5 / PI,
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    FiniteClass {
        group: Arc<FiniteGroup>,
        weights: Vec<f64>,
    },
    Angle {
        group: AngleGroup,
        atoms: Vec<(f64, f64)>,
        density: Option<AngleDensity>,
    },
}

/// A finite nonnegative central measure.
///
/// Centrality is structural: only class coordinates are representable.
#[derive(Debug, Clone)]
pub struct CentralMeasure {
    repr: Repr,
    descriptor: String,
}

impl CentralMeasure {
    /// Class weights on a finite group, one per conjugacy class.
    pub fn finite(group: Arc<FiniteGroup>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != group.num_classes() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} classes",
                weights.len(),
                group.num_classes()
            )));
        }
        check_weights(weights.iter().copied())?;
        let descriptor = format!("classes:{}", join(&weights));
        Ok(Self { repr: Repr::FiniteClass { group, weights }, descriptor })
    }

    /// Atoms `(θ, w)` with `θ ∈ [0, π]` plus an optional Weyl-measure density.
    pub fn su2(atoms: Vec<(f64, f64)>, density: Option<AngleDensity>) -> Result<Self> {
        Self::angle(AngleGroup::Su2, atoms, density)
    }

    /// Atoms `(θ, w)` with `θ ∈ [0, 2π)` plus an optional `dθ/2π` density.
    pub fn circle(atoms: Vec<(f64, f64)>, density: Option<AngleDensity>) -> Result<Self> {
        Self::angle(AngleGroup::Circle, atoms, density)
    }

    fn angle(group: AngleGroup, atoms: Vec<(f64, f64)>, density: Option<AngleDensity>) -> Result<Self> {
        check_weights(atoms.iter().map(|a| a.1))?;
        for &(theta, _) in &atoms {
            let ok = match group {
                AngleGroup::Su2 => (0.0..=PI).contains(&theta),
                AngleGroup::Circle => (0.0..2.0 * PI).contains(&theta),
            };
            if !ok {
                return Err(Error::InvalidParameter(format!("atom angle {theta} out of range")));
            }
        }
        let mut parts: Vec<String> = Vec::new();
        if !atoms.is_empty() {
            parts.push(format!(
                "atoms:{}",
                atoms.iter().map(|(t, w)| format!("{t}:{w}")).collect::<Vec<_>>().join(",")
            ));
        }
        if let Some(d) = &density {
            parts.push(d.name().to_string());
        }
        Ok(Self { repr: Repr::Angle { group, atoms, density }, descriptor: parts.join("+") })
    }

    /// Normalized Haar measure.
    pub fn haar(dual: &Dual) -> Self {
        let mut m = match dual {
            Dual::Finite(g) => Self::finite(g.clone(), g.haar_weights()).expect("haar weights"),
            Dual::Su2 => Self::su2(vec![], Some(AngleDensity::new("haar", |_| 1.0))).expect("haar"),
            Dual::Circle => {
                Self::circle(vec![], Some(AngleDensity::new("haar", |_| 1.0))).expect("haar")
            }
        };
        m.descriptor = "haar".into();
        m
    }

    /// Unit point mass at the identity.
    pub fn identity(dual: &Dual) -> Self {
        let mut m = match dual {
            Dual::Finite(g) => {
                let mut w = vec![0.0; g.num_classes()];
                w[0] = 1.0;
                Self::finite(g.clone(), w).expect("point mass")
            }
            Dual::Su2 => Self::su2(vec![(0.0, 1.0)], None).expect("point mass"),
            Dual::Circle => Self::circle(vec![(0.0, 1.0)], None).expect("point mass"),
        };
        m.descriptor = "identity".into();
        m
    }

    /// The dual on which this measure's transform lives.
    pub fn dual(&self) -> Dual {
        match &self.repr {
            Repr::FiniteClass { group, .. } => Dual::Finite(group.clone()),
            Repr::Angle { group: AngleGroup::Su2, .. } => Dual::Su2,
            Repr::Angle { group: AngleGroup::Circle, .. } => Dual::Circle,
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Class weights, for finite-group measures.
    pub fn class_weights(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::FiniteClass { weights, .. } => Some(weights),
            Repr::Angle { .. } => None,
        }
    }

    pub fn density(&self) -> Option<&AngleDensity> {
        match &self.repr {
            Repr::Angle { density, .. } => density.as_ref(),
            Repr::FiniteClass { .. } => None,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match &self.repr {
            Repr::FiniteClass { weights, .. } => weights.iter().sum(),
            Repr::Angle { group, atoms, density } => {
                atoms.iter().map(|a| a.1).sum::<f64>()
                    + density
                        .as_ref()
                        .map_or(0.0, |d| angle_integral(*group, quadrature::default_rule(), |t| d.eval(t)))
            }
        }
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        (self.total_mass() - 1.0).abs() <= tol
    }

    /// `∫ χ_π dμ` with the default quadrature.
    pub fn fourier(&self, label: Label) -> Result<Complex64> {
        self.fourier_with(quadrature::default_rule(), label)
    }

    /// `∫ χ_π dμ`; densities are integrated with `rule` (SU(2)) or an
    /// equispaced rule of the same size (circle).
    pub fn fourier_with(&self, rule: &GaussLegendre, label: Label) -> Result<Complex64> {
        let dual = self.dual();
        dual.check(label)?;
        match &self.repr {
            Repr::FiniteClass { group, weights } => Ok(weights
                .iter()
                .enumerate()
                .map(|(c, &w)| w * group.character(label.0 as usize, c))
                .sum()),
            Repr::Angle { group, atoms, density } => {
                let mut total = Complex64::default();
                for &(theta, w) in atoms {
                    total += w * dual.character(label, group.point(theta))?;
                }
                if let Some(d) = density {
                    total += match group {
                        AngleGroup::Su2 => {
                            let n = label.0 as u64;
                            Complex64::new(
                                quadrature::weyl_integral(rule, |t| d.eval(t) * su2_character(n, t)),
                                0.0,
                            )
                        }
                        AngleGroup::Circle => {
                            let n = rule.len().max(2 * label.0.unsigned_abs() as usize + 1);
                            quadrature::circle_points(n)
                                .map(|(t, w)| w * d.eval(t) * Complex64::from_polar(1.0, label.0 as f64 * t))
                                .sum()
                        }
                    };
                }
                Ok(total)
            }
        }
    }

    /// Decomposable extension of [`CentralMeasure::fourier`] to a formal sum.
    pub fn fourier_vector(&self, v: &DualVector) -> Result<Complex64> {
        v.iter().try_fold(Complex64::default(), |acc, (l, c)| Ok(acc + c * self.fourier(l)?))
    }

    /// Transform values on `labels` and on every irreducible in their
    /// pairwise products, ready for [`gram_matrix`].
    pub fn covariance(&self, labels: &[Label]) -> Result<CovarianceOnDual> {
        let dual = self.dual();
        let needed = dual.pairwise_closure(labels)?;
        CovarianceOnDual::from_fn(dual, needed, |l| self.fourier(l))
    }

    /// Builds a sampler of class coordinates distributed as this measure
    /// normalized to mass one.
    pub fn coordinate_sampler(&self) -> Result<CoordinateSampler> {
        let mass = self.total_mass();
        if mass <= 0.0 {
            return Err(Error::InvalidParameter("cannot sample a zero measure".into()));
        }
        Ok(CoordinateSampler(match &self.repr {
            Repr::FiniteClass { weights, .. } => SamplerRepr::Classes(cumulative(weights.iter().copied())),
            Repr::Angle { group, atoms, density } => {
                let atom_cdf = cumulative(atoms.iter().map(|a| a.1));
                let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
                let (cells, density_mass) = match density {
                    Some(d) => {
                        let h = group.period() / SAMPLER_CELLS as f64;
                        let local = GaussLegendre::new(4);
                        let masses: Vec<f64> = (0..SAMPLER_CELLS)
                            .map(|i| {
                                let a = i as f64 * h;
                                local.integrate(a, a + h, |t| d.eval(t).max(0.0) * group.reference(t))
                            })
                            .collect();
                        let total: f64 = masses.iter().sum();
                        (cumulative(masses.into_iter()), total)
                    }
                    None => (Vec::new(), 0.0),
                };
                SamplerRepr::Angle {
                    group: *group,
                    atoms: atoms.iter().map(|a| a.0).collect(),
                    atom_cdf,
                    cell_cdf: cells,
                    atom_fraction: atom_mass / (atom_mass + density_mass),
                }
            }
        }))
    }
}

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    for w in weights {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidParameter(format!("weight {w} is not a finite nonnegative number")));
        }
    }
    Ok(())
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn angle_integral<F: Fn(f64) -> f64>(group: AngleGroup, rule: &GaussLegendre, f: F) -> f64 {
    match group {
        AngleGroup::Su2 => quadrature::weyl_integral(rule, f),
        AngleGroup::Circle => quadrature::circle_points(rule.len()).map(|(t, w)| w * f(t)).sum(),
    }
}

// Normalized cumulative sums; empty input yields an empty table.
fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    if acc > 0.0 {
        out.iter_mut().for_each(|x| *x /= acc);
    }
    out
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Draws class coordinates from a central measure.
#[derive(Debug, Clone)]
pub struct CoordinateSampler(SamplerRepr);

#[derive(Debug, Clone)]
enum SamplerRepr {
    Classes(Vec<f64>),
    Angle {
        group: AngleGroup,
        atoms: Vec<f64>,
        atom_cdf: Vec<f64>,
        cell_cdf: Vec<f64>,
        atom_fraction: f64,
    },
}

impl CoordinateSampler {
    pub fn sample(&self, rng: &mut Rng) -> GroupPoint {
        match &self.0 {
            SamplerRepr::Classes(cdf) => GroupPoint::Class(pick(cdf, rng.random())),
            SamplerRepr::Angle { group, atoms, atom_cdf, cell_cdf, atom_fraction } => {
                let u: f64 = rng.random();
                if u < *atom_fraction || cell_cdf.is_empty() {
                    return group.point(atoms[pick(atom_cdf, rng.random())]);
                }
                // Uniform within a cell of the tabulated density.
                let cell = pick(cell_cdf, rng.random());
                let h = group.period() / cell_cdf.len() as f64;
                group.point((cell as f64 + rng.random::<f64>()) * h)
            }
        }
    }
}

/// SU(2) Casimir eigenvalue `κ_n = n(n+2)`.
pub fn su2_casimir(n: u64) -> f64 {
    (n * (n + 2)) as f64
}

/// Closed-form heat-kernel transform `(n+1) e^{-t κ_n}`.
pub fn heat_kernel_transform(t: f64, n: u64) -> f64 {
    (n + 1) as f64 * (-t * su2_casimir(n)).exp()
}

/// Coefficients `c_n = (n+1)e^{-tκ_n}` of the heat density in the
/// character basis, truncated once past the peak and below [`HEAT_TAIL`].
pub fn heat_kernel_coefficients(t: f64) -> Result<Vec<f64>> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("heat time must be positive, got {t}")));
    }
    let peak = (0.5 / t).sqrt();
    let mut coeffs = Vec::new();
    for n in 0.. {
        let term = heat_kernel_transform(t, n);
        if term < HEAT_TAIL && n as f64 > peak {
            break;
        }
        coeffs.push(term);
        if coeffs.len() > MAX_HEAT_TERMS {
            return Err(Error::InvalidParameter(format!("heat time {t} is too small to truncate")));
        }
    }
    Ok(coeffs)
}

/// The SU(2) heat kernel `k_t` as a Weyl-measure density
/// `Σ (n+1) e^{-t n(n+2)} χ_n(θ)`.
pub fn heat_kernel_measure(t: f64) -> Result<CentralMeasure> {
    let coeffs = heat_kernel_coefficients(t)?;
    let density = AngleDensity::new(format!("heat:{t}"), move |theta| {
        let x = 2.0 * theta.cos();
        let (mut prev, mut cur) = (0.0, 1.0);
        let mut sum = 0.0;
        for &c in &coeffs {
            sum += c * cur;
            let next = x * cur - prev;
            prev = cur;
            cur = next;
        }
        sum
    });
    CentralMeasure::su2(vec![], Some(density))
}

/// Parses `haar`, `identity`, `heat:<t>`, `atoms:θ1:w1,θ2:w2,...` or
/// `classes:w1,w2,...` for the given dual.
pub fn parse_measure(spec: &str, dual: &Dual) -> Result<CentralMeasure> {
    let bad = |msg: &str| Error::InvalidParameter(format!("measure {spec:?}: {msg}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("expected a number"));
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "haar" => Ok(CentralMeasure::haar(dual)),
        "identity" => Ok(CentralMeasure::identity(dual)),
        "heat" => {
            if *dual != Dual::Su2 {
                return Err(bad("heat kernels are available on su2 only"));
            }
            heat_kernel_measure(num(rest)?)
        }
        "atoms" => {
            let atoms = rest
                .split(',')
                .map(|pair| {
                    let (t, w) = pair.split_once(':').ok_or_else(|| bad("atoms are θ:w pairs"))?;
                    Ok((num(t)?, num(w)?))
                })
                .collect::<Result<Vec<_>>>()?;
            match dual {
                Dual::Su2 => CentralMeasure::su2(atoms, None),
                Dual::Circle => CentralMeasure::circle(atoms, None),
                Dual::Finite(_) => Err(bad("finite groups take class weights")),
            }
        }
        "classes" => match dual {
            Dual::Finite(g) => {
                let w = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
                CentralMeasure::finite(g.clone(), w)
            }
            _ => Err(bad("class weights need a finite dual")),
        },
        _ => Err(bad("unknown measure kind")),
    }
}

/// A function on the irreducibles, extended decomposably to formal sums.
#[derive(Debug, Clone)]
pub struct CovarianceOnDual {
    dual: Dual,
    values: BTreeMap<Label, Complex64>,
}

impl CovarianceOnDual {
    pub fn new<I>(dual: Dual, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, Complex64)>,
    {
        let values: BTreeMap<Label, Complex64> = values.into_iter().collect();
        for &l in values.keys() {
            dual.check(l)?;
        }
        Ok(Self { dual, values })
    }

    pub fn from_fn<I, F>(dual: Dual, labels: I, mut f: F) -> Result<Self>
    where
        I: IntoIterator<Item = Label>,
        F: FnMut(Label) -> Result<Complex64>,
    {
        let values = labels.into_iter().map(|l| Ok((l, f(l)?))).collect::<Result<Vec<_>>>()?;
        Self::new(dual, values)
    }

    pub fn dual(&self) -> &Dual {
        &self.dual
    }

    pub fn values(&self) -> &BTreeMap<Label, Complex64> {
        &self.values
    }

    pub fn value(&self, label: Label) -> Result<Complex64> {
        self.values
            .get(&label)
            .copied()
            .ok_or(Error::IncompleteData { missing: vec![label] })
    }

    /// `Σ_π v(π) Φ(π)`
    pub fn eval(&self, v: &DualVector) -> Result<Complex64> {
        let missing: Vec<Label> = v.support().filter(|l| !self.values.contains_key(l)).collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteData { missing });
        }
        Ok(v.iter().map(|(l, c)| c * self.values[&l]).sum())
    }
}

/// `G_{mn} = Φ(π_m ⊗ π_n*)`, the matrix of the positive-definiteness form.
pub fn gram_matrix(phi: &CovarianceOnDual, labels: &[Label]) -> Result<DMatrix<Complex64>> {
    let dual = phi.dual();
    for (i, a) in labels.iter().enumerate() {
        if labels[..i].contains(a) {
            return Err(Error::InvalidParameter(format!("label {a} repeated")));
        }
    }
    let n = labels.len();
    let mut g = DMatrix::zeros(n, n);
    let mut missing = std::collections::BTreeSet::new();
    for (m, &a) in labels.iter().enumerate() {
        for (k, &b) in labels.iter().enumerate() {
            let v = dual.tensor_decompose(a, dual.conjugate(b)?)?;
            match phi.eval(&v) {
                Ok(x) => g[(m, k)] = x,
                Err(Error::IncompleteData { missing: ls }) => missing.extend(ls),
                Err(e) => return Err(e),
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::IncompleteData { missing: missing.into_iter().collect() });
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityReport {
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
    pub spectral_radius: f64,
    /// `max |G − Gᴴ|`
    pub hermitian_defect: f64,
}

/// Checks the Gram matrix for positive semidefiniteness.
///
/// Passes when the smallest eigenvalue of the Hermitian part is at least
/// `-tol · max(1, ρ)` and the matrix is Hermitian to the same tolerance.
pub fn is_positive_definite(phi: &CovarianceOnDual, labels: &[Label], tol: f64) -> Result<PositivityReport> {
    let g = gram_matrix(phi, labels)?;
    Ok(matrix_positivity(&g, tol))
}

pub fn matrix_positivity(g: &DMatrix<Complex64>, tol: f64) -> PositivityReport {
    let adjoint = g.adjoint();
    let hermitian_defect = (g - &adjoint).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if g.nrows() == 0 {
        return PositivityReport {
            positive_definite: true,
            min_eigenvalue: 0.0,
            spectral_radius: 0.0,
            hermitian_defect,
        };
    }
    let h = (g + adjoint).map(|z| z * 0.5);
    let eig = SymmetricEigen::new(h).eigenvalues;
    let min_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let spectral_radius = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let scale = tol * spectral_radius.max(1.0);
    PositivityReport {
        positive_definite: min_eigenvalue >= -scale && hermitian_defect <= scale,
        min_eigenvalue,
        spectral_radius,
        hermitian_defect,
    }
}

/// Recovers class weights `w` from `Φ(π_i) = Σ_c χ_i(c) w_c` by solving the
/// character-table system.
pub fn bochner_invert_finite(phi: &CovarianceOnDual) -> Result<CentralMeasure> {
    let Dual::Finite(group) = phi.dual() else {
        return Err(Error::Unsupported("exact Bochner inversion needs a finite dual".into()));
    };
    let k = group.num_irreps();
    let missing: Vec<Label> =
        (0..k as i64).map(Label).filter(|l| !phi.values().contains_key(l)).collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteData { missing });
    }
    let table = DMatrix::from_fn(k, k, |i, c| group.character(i, c));
    let rhs = DVector::from_fn(k, |i, _| phi.values()[&Label(i as i64)]);
    let solution = table
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::DataIntegrity("character table is singular".into()))?;

    let max_imaginary = solution.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    let signed: Vec<f64> = solution.iter().map(|w| w.re).collect();
    if max_imaginary > BOCHNER_CLAMP || signed.iter().any(|&w| w < -BOCHNER_CLAMP) {
        return Err(Error::NotPositive { weights: signed, max_imaginary });
    }
    let weights = signed.into_iter().map(|w| w.max(0.0)).collect();
    CentralMeasure::finite(group.clone(), weights)
}
