//! The unitary dual of a compact group as a discrete commutative hypergroup.
//!
//! Three duals are supported: the integers (dual of the circle), the
//! nonnegative integers (dual of SU(2), label `n` having dimension `n + 1`)
//! and the irreps of a finite group read from a character table. Each
//! carries the neutral label, dimensions, conjugation and the tensor-product
//! multiplicities `M(a ⊗ b, π)`, from which both hypergroup convolutions are
//! built.

mod finite;
mod vector;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, GaussLegendre};

pub use finite::{
    builtin_names, CharacterTableDocument, FiniteGroup, ORTHOGONALITY_TOL, ROUNDING_TOL,
};
pub use vector::{format_coefficient, DualVector};

/// Canonical index of an irreducible class.
///
/// Signed integer for the circle, `n ≥ 0` for SU(2), table row for a finite
/// group. Label `0` is the trivial representation in every dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub i64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of a conjugacy-class coordinate chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupPoint {
    /// Angle `θ ∈ [0, 2π)` on the circle.
    Circle(f64),
    /// Half-angle `θ ∈ [0, π]` of an SU(2) element with eigenvalues `e^{±iθ}`.
    Su2(f64),
    /// Conjugacy class index of a finite group.
    Class(usize),
}

/// The two convolutions on point masses of the dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvolutionKind {
    /// `δ_a * δ_b = Σ M(a⊗b, π) δ_π`
    RepresentationRing,
    /// `δ_a *′ δ_b = Σ d_π/(d_a d_b) M(a⊗b, π) δ_π`
    Normalized,
}

impl ConvolutionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvolutionKind::RepresentationRing => "representation_ring",
            ConvolutionKind::Normalized => "normalized",
        }
    }
}

impl std::str::FromStr for ConvolutionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "representation_ring" | "ring" => Ok(Self::RepresentationRing),
            "normalized" => Ok(Self::Normalized),
            other => Err(Error::InvalidParameter(format!("unknown convolution kind {other:?}"))),
        }
    }
}

/// SU(2) character `χ_n(θ) = sin((n+1)θ)/sin θ` by the three-term
/// recurrence, which has no removable singularities at `θ ∈ {0, π}`.
pub fn su2_character(n: u64, theta: f64) -> f64 {
    let x = 2.0 * theta.cos();
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `χ_0(θ), …, χ_max(θ)` in one pass.
pub fn su2_characters(max: u64, theta: f64) -> Vec<f64> {
    let x = 2.0 * theta.cos();
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(1.0);
    if max >= 1 {
        out.push(x);
    }
    for n in 2..=max as usize {
        out.push(x * out[n - 1] - out[n - 2]);
    }
    out
}

/// A unitary dual with its hypergroup structure. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub enum Dual {
    /// `ℤ`, the dual of the circle group.
    Circle,
    /// `ℤ₊`, the dual of SU(2).
    Su2,
    Finite(Arc<FiniteGroup>),
}

impl Dual {
    pub fn finite(group: FiniteGroup) -> Self {
        Dual::Finite(Arc::new(group))
    }

    /// Resolves `"torus"`, `"su2"` or `"finite:<name-or-path>"`.
    ///
    /// Finite names are looked up among the built-ins, then as `<name>.json`
    /// in each directory of `search_path`, then as a file path.
    pub fn resolve(spec: &str, search_path: Option<&str>) -> Result<Self> {
        match spec {
            "torus" | "circle" => return Ok(Dual::Circle),
            "su2" => return Ok(Dual::Su2),
            _ => {}
        }
        let Some(name) = spec.strip_prefix("finite:") else {
            return Err(Error::InvalidParameter(format!("unknown dual {spec:?}")));
        };
        if let Some(g) = FiniteGroup::builtin(name) {
            return g.map(Dual::finite);
        }
        if let Some(dirs) = search_path {
            for dir in std::env::split_paths(dirs) {
                let candidate = dir.join(format!("{name}.json"));
                if candidate.is_file() {
                    return load_character_table_file(&candidate);
                }
            }
        }
        let path = Path::new(name);
        if path.is_file() {
            return load_character_table_file(path);
        }
        Err(Error::InvalidParameter(format!("no character table named {name:?}")))
    }

    pub fn name(&self) -> &str {
        match self {
            Dual::Circle => "torus",
            Dual::Su2 => "su2",
            Dual::Finite(g) => g.name(),
        }
    }

    pub fn neutral(&self) -> Label {
        Label(0)
    }

    pub fn as_finite(&self) -> Option<&Arc<FiniteGroup>> {
        match self {
            Dual::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn contains(&self, label: Label) -> bool {
        match self {
            Dual::Circle => true,
            Dual::Su2 => label.0 >= 0,
            Dual::Finite(g) => label.0 >= 0 && (label.0 as usize) < g.num_irreps(),
        }
    }

    pub fn check(&self, label: Label) -> Result<()> {
        if self.contains(label) {
            Ok(())
        } else {
            Err(Error::UnknownLabel {
                dual: self.name().to_string(),
                label: label.to_string(),
            })
        }
    }

    /// Labels in a window: `-bound..=bound` on the circle, `0..=bound` on
    /// SU(2), every irrep of a finite group (the bound is ignored there).
    pub fn labels(&self, bound: u32) -> Vec<Label> {
        let b = bound as i64;
        match self {
            Dual::Circle => (-b..=b).map(Label).collect(),
            Dual::Su2 => (0..=b).map(Label).collect(),
            Dual::Finite(g) => (0..g.num_irreps() as i64).map(Label).collect(),
        }
    }

    /// Human-readable label, using irrep names for finite groups.
    pub fn label_name(&self, label: Label) -> String {
        match self {
            Dual::Finite(g) if self.contains(label) => g.irrep_name(label.0 as usize).to_string(),
            _ => label.to_string(),
        }
    }

    /// Parses an integer label or, for finite groups, an irrep name.
    pub fn parse_label(&self, text: &str) -> Result<Label> {
        let text = text.trim();
        let label = match self {
            Dual::Finite(g) => match g.irrep_by_name(text) {
                Some(i) => Label(i as i64),
                None => Label(text.parse().map_err(|_| self.unknown(text))?),
            },
            _ => Label(text.parse().map_err(|_| self.unknown(text))?),
        };
        self.check(label)?;
        Ok(label)
    }

    fn unknown(&self, text: &str) -> Error {
        Error::UnknownLabel {
            dual: self.name().to_string(),
            label: text.to_string(),
        }
    }

    /// `d_π`
    pub fn dim(&self, label: Label) -> Result<u64> {
        self.check(label)?;
        Ok(match self {
            Dual::Circle => 1,
            Dual::Su2 => label.0 as u64 + 1,
            Dual::Finite(g) => g.dim(label.0 as usize),
        })
    }

    /// `π ↦ π*`
    pub fn conjugate(&self, label: Label) -> Result<Label> {
        self.check(label)?;
        Ok(match self {
            Dual::Circle => Label(-label.0),
            Dual::Su2 => label,
            Dual::Finite(g) => Label(g.conjugate(label.0 as usize) as i64),
        })
    }

    /// `χ_π` at a class coordinate.
    pub fn character(&self, label: Label, point: GroupPoint) -> Result<Complex64> {
        self.check(label)?;
        match (self, point) {
            (Dual::Circle, GroupPoint::Circle(theta)) => {
                Ok(Complex64::from_polar(1.0, label.0 as f64 * theta))
            }
            (Dual::Su2, GroupPoint::Su2(theta)) => {
                Ok(Complex64::new(su2_character(label.0 as u64, theta), 0.0))
            }
            (Dual::Finite(g), GroupPoint::Class(c)) if c < g.num_classes() => {
                Ok(g.character(label.0 as usize, c))
            }
            _ => Err(Error::Mismatch(format!(
                "point {point:?} is not a class coordinate of the {} dual",
                self.name()
            ))),
        }
    }

    /// `{π: M(a ⊗ b, π)}` with nonnegative integer coefficients.
    pub fn tensor_decompose(&self, a: Label, b: Label) -> Result<DualVector> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            Dual::Circle => DualVector::point(Label(a.0 + b.0)),
            Dual::Su2 => {
                let (lo, hi) = ((a.0 - b.0).abs(), a.0 + b.0);
                DualVector::from_real((lo..=hi).step_by(2).map(|k| (Label(k), 1.0)))
            }
            Dual::Finite(g) => {
                let (a, b) = (a.0 as usize, b.0 as usize);
                DualVector::from_real(
                    (0..g.num_irreps())
                        .map(|t| (Label(t as i64), g.multiplicity(a, b, t) as f64)),
                )
            }
        })
    }

    /// Character-integral value of `M(a ⊗ b, target) = ∫ χ_{a⊗b}(g⁻¹) χ_target(g) dg`
    /// with the default 256-node rule.
    pub fn multiplicity_by_integration(&self, a: Label, b: Label, target: Label) -> Result<f64> {
        self.multiplicity_by_integration_with(quadrature::default_rule(), a, b, target)
    }

    /// As [`Dual::multiplicity_by_integration`] with an explicit SU(2) rule.
    ///
    /// SU(2) integrates in the Weyl angle coordinate, the circle by an
    /// equispaced rule fine enough to be exact, and finite groups by the
    /// class sum using `g ↦ g⁻¹` through the inverse-class map.
    pub fn multiplicity_by_integration_with(
        &self,
        rule: &GaussLegendre,
        a: Label,
        b: Label,
        target: Label,
    ) -> Result<f64> {
        for l in [a, b, target] {
            self.check(l)?;
        }
        let value = match self {
            Dual::Su2 => {
                let (a, b, t) = (a.0 as u64, b.0 as u64, target.0 as u64);
                Complex64::new(
                    quadrature::weyl_integral(rule, |theta| {
                        su2_character(a, theta) * su2_character(b, theta) * su2_character(t, theta)
                    }),
                    0.0,
                )
            }
            Dual::Circle => {
                let degree = (a.0.abs() + b.0.abs() + target.0.abs()) as usize;
                let n = quadrature::DEFAULT_NODES.max(2 * degree + 1);
                quadrature::circle_points(n)
                    .map(|(theta, w)| {
                        let inv = -theta;
                        let chi_ab = Complex64::from_polar(1.0, (a.0 + b.0) as f64 * inv);
                        w * chi_ab * Complex64::from_polar(1.0, target.0 as f64 * theta)
                    })
                    .sum()
            }
            Dual::Finite(g) => {
                let (a, b, t) = (a.0 as usize, b.0 as usize, target.0 as usize);
                (0..g.num_classes())
                    .map(|c| {
                        let inv = g.inverse_class(c);
                        g.class_sizes()[c] as f64
                            * g.character(a, inv)
                            * g.character(b, inv)
                            * g.character(t, c)
                    })
                    .sum::<Complex64>()
                    / g.order() as f64
            }
        };
        if value.im.abs() > ROUNDING_TOL {
            return Err(Error::DataIntegrity(format!(
                "character integral {value} has a nonzero imaginary part"
            )));
        }
        Ok(value.re)
    }

    /// Bilinear extension of the point-mass convolution of the given kind.
    pub fn convolve(
        &self,
        m1: &DualVector,
        m2: &DualVector,
        kind: ConvolutionKind,
    ) -> Result<DualVector> {
        let mut out = DualVector::new();
        for (a, ca) in m1.iter() {
            for (b, cb) in m2.iter() {
                let mut point = self.tensor_decompose(a, b)?;
                if kind == ConvolutionKind::Normalized {
                    let denom = (self.dim(a)? * self.dim(b)?) as f64;
                    point = DualVector::from_pairs(
                        point
                            .iter()
                            .map(|(l, m)| Ok((l, m * self.dim(l)? as f64 / denom)))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                out.add_scaled(&point, ca * cb);
            }
        }
        Ok(out)
    }

    /// Pushes coefficients forward along `π ↦ π*` without conjugating them.
    pub fn conjugate_vector(&self, m: &DualVector) -> Result<DualVector> {
        m.iter()
            .map(|(l, c)| Ok((self.conjugate(l)?, c)))
            .collect::<Result<Vec<_>>>()
            .map(DualVector::from_pairs)
    }

    /// Every irreducible appearing in `a ⊗ b*` for `a, b` in `labels`,
    /// together with `labels` and the neutral label.
    pub fn pairwise_closure(&self, labels: &[Label]) -> Result<BTreeSet<Label>> {
        let mut out: BTreeSet<Label> = labels.iter().copied().collect();
        out.insert(self.neutral());
        for &a in labels {
            for &b in labels {
                out.extend(self.tensor_decompose(a, self.conjugate(b)?)?.support());
            }
        }
        Ok(out)
    }
}

/// Parses a character-table document into a finite dual, validating it.
pub fn load_character_table(document: &str) -> Result<Dual> {
    FiniteGroup::from_json(document).map(Dual::finite)
}

pub fn load_character_table_file(path: &Path) -> Result<Dual> {
    FiniteGroup::from_path(path).map(Dual::finite)
}
