use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::Label;

/// Finitely supported complex function on labels.
///
/// Doubles as a representation-ring element (nonnegative integer
/// coefficients) and as a bounded measure on the dual. Exact zeros are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DualVector {
    coeffs: BTreeMap<Label, Complex64>,
}

impl DualVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit point mass `δ_label`.
    pub fn point(label: Label) -> Self {
        let mut v = Self::new();
        v.add(label, Complex64::new(1.0, 0.0));
        v
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Label, Complex64)>,
    {
        let mut v = Self::new();
        for (l, c) in pairs {
            v.add(l, c);
        }
        v
    }

    pub fn from_real<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Label, f64)>,
    {
        Self::from_pairs(pairs.into_iter().map(|(l, c)| (l, Complex64::new(c, 0.0))))
    }

    /// Coefficient at `label`, zero off the support.
    pub fn get(&self, label: Label) -> Complex64 {
        self.coeffs.get(&label).copied().unwrap_or_default()
    }

    /// Adds `c` to the coefficient at `label`.
    pub fn add(&mut self, label: Label, c: Complex64) {
        let entry = self.coeffs.entry(label).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&label);
        }
    }

    /// `self += scale · other`
    pub fn add_scaled(&mut self, other: &DualVector, scale: Complex64) {
        for (&l, &c) in &other.coeffs {
            self.add(l, c * scale);
        }
    }

    pub fn scaled(&self, scale: Complex64) -> Self {
        let mut v = Self::new();
        v.add_scaled(self, scale);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, Complex64)> + '_ {
        self.coeffs.iter().map(|(&l, &c)| (l, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Label> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of coefficients (the total mass when read as a measure).
    pub fn total(&self) -> Complex64 {
        self.coeffs.values().sum()
    }

    pub fn max_abs_diff(&self, other: &DualVector) -> f64 {
        self.support()
            .chain(other.support())
            .map(|l| (self.get(l) - other.get(l)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DualVector, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Nonnegative real coefficients summing to one.
    pub fn is_probability(&self, tol: f64) -> bool {
        self.coeffs.values().all(|c| c.im.abs() <= tol && c.re >= -tol)
            && (self.total() - Complex64::new(1.0, 0.0)).norm() <= tol
    }
}

impl FromIterator<(Label, Complex64)> for DualVector {
    fn from_iter<T: IntoIterator<Item = (Label, Complex64)>>(iter: T) -> Self {
        Self::from_pairs(iter)
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, c) in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{l}:{}", format_coefficient(c))?;
        }
        Ok(())
    }
}

/// Shortest round-trip form; the imaginary part is shown only when nonzero.
pub fn format_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}
