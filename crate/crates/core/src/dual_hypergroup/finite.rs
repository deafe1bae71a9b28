//! Finite groups given by their character tables.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for row orthonormality and inverse-class consistency.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Largest allowed distance between a class-sum multiplicity and an integer.
pub const ROUNDING_TOL: f64 = 1e-6;

const BUILTINS: &[(&str, &str)] = &[
    ("c2", include_str!("../../groups/c2.json")),
    ("c3", include_str!("../../groups/c3.json")),
    ("c5", include_str!("../../groups/c5.json")),
    ("s3", include_str!("../../groups/s3.json")),
    ("q8", include_str!("../../groups/q8.json")),
];

/// Names of the character tables shipped with the crate.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

/// On-disk character table document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterTableDocument {
    pub name: String,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    pub inverse_class: Vec<usize>,
    /// Optional irrep names, parallel to `characters`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreps: Option<Vec<String>>,
    pub characters: Vec<Vec<[f64; 2]>>,
}

/// Validated character-table data of a finite group.
///
/// Besides the raw table this caches the conjugation map on irreps and the
/// full tensor multiplicity table, both derived at load time.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    name: String,
    order: u64,
    class_sizes: Vec<u64>,
    inverse_class: Vec<usize>,
    irrep_names: Vec<String>,
    characters: Vec<Vec<Complex64>>,
    dims: Vec<u64>,
    conjugates: Vec<usize>,
    // multiplicities[a][b][c] = M(a ⊗ b, c)
    multiplicities: Vec<Vec<Vec<u32>>>,
}

impl FiniteGroup {
    pub fn builtin(name: &str) -> Option<Result<Self>> {
        let key = name.to_ascii_lowercase();
        BUILTINS
            .iter()
            .find(|(n, _)| *n == key)
            .map(|(_, doc)| Self::from_json(doc))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CharacterTableDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_document(doc: CharacterTableDocument) -> Result<Self> {
        let k = doc.class_sizes.len();
        if k == 0 {
            return Err(Error::Schema("no conjugacy classes".into()));
        }
        if doc.order == 0 {
            return Err(Error::Schema("group order must be positive".into()));
        }
        if doc.characters.len() != k {
            return Err(Error::Schema(format!(
                "{} character rows for {k} classes",
                doc.characters.len()
            )));
        }
        if let Some(row) = doc.characters.iter().position(|r| r.len() != k) {
            return Err(Error::Schema(format!("row {row} does not have {k} entries")));
        }
        if doc.inverse_class.len() != k {
            return Err(Error::Schema("inverse_class must list one class per class".into()));
        }
        if doc.class_sizes.contains(&0) {
            return Err(Error::Schema("class sizes must be positive".into()));
        }
        let sum: u64 = doc.class_sizes.iter().sum();
        if sum != doc.order {
            return Err(Error::ClassSizes { sum, order: doc.order });
        }
        for (c, &inv) in doc.inverse_class.iter().enumerate() {
            if inv >= k || doc.inverse_class[inv] != c {
                return Err(Error::Schema(format!("inverse_class is not an involution at {c}")));
            }
            if doc.class_sizes[inv] != doc.class_sizes[c] {
                return Err(Error::Schema(format!("class {c} and its inverse differ in size")));
            }
        }
        if doc.inverse_class[0] != 0 || doc.class_sizes[0] != 1 {
            return Err(Error::Schema("column 0 must be the identity class".into()));
        }
        let irrep_names = match doc.irreps {
            Some(names) if names.len() == k => names,
            Some(names) => {
                return Err(Error::Schema(format!("{} irrep names for {k} rows", names.len())))
            }
            None => (0..k).map(|i| i.to_string()).collect(),
        };

        let characters: Vec<Vec<Complex64>> = doc
            .characters
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();

        let order = doc.order as f64;
        let sizes: Vec<f64> = doc.class_sizes.iter().map(|&s| s as f64).collect();
        for a in 0..k {
            for b in a..k {
                let ip: Complex64 = (0..k)
                    .map(|c| sizes[c] * characters[a][c] * characters[b][c].conj())
                    .sum::<Complex64>()
                    / order;
                let target = if a == b { 1.0 } else { 0.0 };
                let deviation = (ip - target).norm();
                if deviation > ORTHOGONALITY_TOL {
                    return Err(Error::Orthogonality { row_a: a, row_b: b, deviation });
                }
            }
        }
        if characters[0].iter().any(|&x| (x - 1.0).norm() > ORTHOGONALITY_TOL) {
            return Err(Error::Schema("row 0 must be the trivial character".into()));
        }

        let mut dims = Vec::with_capacity(k);
        for (i, row) in characters.iter().enumerate() {
            let d = row[0];
            let rounded = d.re.round();
            if d.im.abs() > ORTHOGONALITY_TOL || (d.re - rounded).abs() > ORTHOGONALITY_TOL || rounded < 1.0 {
                return Err(Error::DataIntegrity(format!(
                    "identity-class character of row {i} is {d}, not a positive integer"
                )));
            }
            dims.push(rounded as u64);
        }

        // χ_{π*}(c) = conj χ_π(c) = χ_π(c⁻¹)
        let mut conjugates = Vec::with_capacity(k);
        for (i, row) in characters.iter().enumerate() {
            for c in 0..k {
                let dev = (row[doc.inverse_class[c]] - row[c].conj()).norm();
                if dev > ORTHOGONALITY_TOL {
                    return Err(Error::DataIntegrity(format!(
                        "row {i} is inconsistent with inverse_class at class {c}"
                    )));
                }
            }
            let j = (0..k)
                .find(|&j| {
                    (0..k).all(|c| (characters[j][c] - row[c].conj()).norm() <= ORTHOGONALITY_TOL)
                })
                .ok_or_else(|| {
                    Error::DataIntegrity(format!("conjugate of row {i} is not a row of the table"))
                })?;
            conjugates.push(j);
        }

        let mut multiplicities = vec![vec![vec![0u32; k]; k]; k];
        for a in 0..k {
            for b in 0..k {
                for t in 0..k {
                    let m: Complex64 = (0..k)
                        .map(|c| {
                            sizes[c] * characters[a][c] * characters[b][c] * characters[t][c].conj()
                        })
                        .sum::<Complex64>()
                        / order;
                    multiplicities[a][b][t] = round_multiplicity(m)?;
                }
            }
        }

        let group = Self {
            name: doc.name,
            order: doc.order,
            class_sizes: doc.class_sizes,
            inverse_class: doc.inverse_class,
            irrep_names,
            characters,
            dims,
            conjugates,
            multiplicities,
        };
        group.check_dimension_counts()?;
        Ok(group)
    }

    fn check_dimension_counts(&self) -> Result<()> {
        for a in 0..self.num_irreps() {
            for b in 0..self.num_irreps() {
                let total: u64 = (0..self.num_irreps())
                    .map(|t| self.multiplicities[a][b][t] as u64 * self.dims[t])
                    .sum();
                if total != self.dims[a] * self.dims[b] {
                    return Err(Error::DataIntegrity(format!(
                        "dimension count fails for rows {a} ⊗ {b}: {total} ≠ {}",
                        self.dims[a] * self.dims[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// Equal to the number of classes.
    pub fn num_irreps(&self) -> usize {
        self.characters.len()
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn inverse_class(&self, class: usize) -> usize {
        self.inverse_class[class]
    }

    pub fn irrep_name(&self, irrep: usize) -> &str {
        &self.irrep_names[irrep]
    }

    pub fn irrep_by_name(&self, name: &str) -> Option<usize> {
        self.irrep_names.iter().position(|n| n == name)
    }

    pub fn character(&self, irrep: usize, class: usize) -> Complex64 {
        self.characters[irrep][class]
    }

    pub fn character_row(&self, irrep: usize) -> &[Complex64] {
        &self.characters[irrep]
    }

    pub fn dim(&self, irrep: usize) -> u64 {
        self.dims[irrep]
    }

    pub fn conjugate(&self, irrep: usize) -> usize {
        self.conjugates[irrep]
    }

    pub fn multiplicity(&self, a: usize, b: usize, target: usize) -> u32 {
        self.multiplicities[a][b][target]
    }

    /// Normalized Haar class weights `|c| / |G|`.
    pub fn haar_weights(&self) -> Vec<f64> {
        self.class_sizes.iter().map(|&s| s as f64 / self.order as f64).collect()
    }
}

pub(crate) fn round_multiplicity(m: Complex64) -> Result<u32> {
    let rounded = m.re.round();
    let residue = (m - rounded).norm();
    if residue > ROUNDING_TOL || rounded < 0.0 {
        return Err(Error::DataIntegrity(format!(
            "multiplicity {m} is not a nonnegative integer (residue {residue:e})"
        )));
    }
    Ok(rounded as u32)
}
