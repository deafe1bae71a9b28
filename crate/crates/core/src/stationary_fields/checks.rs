use num_complex::Complex64;
use serde::Serialize;

use super::SecondMomentOracle;
use crate::dual_hypergroup::{ConvolutionKind, DualVector, Label};
use crate::error::Result;

/// Tag for the group-dual stationarity condition.
pub const STATDEF_TAG: &str = "statdef";

/// A pair at which the checked identity fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub pi1: Label,
    pub pi2: Label,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
}

impl Witness {
    pub fn violation(&self) -> f64 {
        (c(self.lhs) - c(self.rhs)).norm()
    }
}

fn c([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    /// Which identity was checked: `statdef` or `stathyp:<kind>`.
    pub check: String,
    pub pass: bool,
    pub max_violation: f64,
    /// Every pair whose discrepancy exceeds the tolerance, in label order.
    pub witnesses: Vec<Witness>,
}

impl StationarityReport {
    pub fn witness(&self, pi1: Label, pi2: Label) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.pi1 == pi1 && w.pi2 == pi2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run<F>(check: String, labels: &[Label], tol: f64, mut pair: F) -> Result<StationarityReport>
where
    F: FnMut(Label, Label) -> Result<(Complex64, Complex64)>,
{
    let mut max_violation: f64 = 0.0;
    let mut witnesses = Vec::new();
    for &a in labels {
        for &b in labels {
            let (lhs, rhs) = pair(a, b)?;
            let violation = (lhs - rhs).norm();
            max_violation = max_violation.max(violation);
            if violation > tol {
                witnesses.push(Witness {
                    pi1: a,
                    pi2: b,
                    lhs: [lhs.re, lhs.im],
                    rhs: [rhs.re, rhs.im],
                });
            }
        }
    }
    Ok(StationarityReport { check, pass: max_violation <= tol, max_violation, witnesses })
}

/// Checks `E(Y_{π₁} conj(Y_{π₂})) = Σ_π M(π₁⊗π₂*, π) E(Y_π conj(Y_ε))` for
/// all pairs of `labels`.
pub fn check_stationarity(
    oracle: &dyn SecondMomentOracle,
    labels: &[Label],
    tol: f64,
) -> Result<StationarityReport> {
    let dual = oracle.dual();
    let eps = dual.neutral();
    run(STATDEF_TAG.into(), labels, tol, |a, b| {
        let lhs = oracle.second_moment(a, b)?;
        let decomposition = dual.tensor_decompose(a, dual.conjugate(b)?)?;
        let mut rhs = Complex64::default();
        for (pi, m) in decomposition.iter() {
            rhs += m * oracle.second_moment(pi, eps)?;
        }
        Ok((lhs, rhs))
    })
}

/// Checks `C(a, b) = Σ_π (δ_a ⋆ δ_{b′})({π}) C(π, ε)` with the requested
/// convolution. The representation-ring kind is equivalent to
/// [`check_stationarity`]; the normalized kind is a different condition.
pub fn check_hypergroup_stationarity(
    oracle: &dyn SecondMomentOracle,
    labels: &[Label],
    kind: ConvolutionKind,
    tol: f64,
) -> Result<StationarityReport> {
    let dual = oracle.dual();
    let eps = dual.neutral();
    run(format!("stathyp:{}", kind.as_str()), labels, tol, |a, b| {
        let lhs = oracle.second_moment(a, b)?;
        let b_prime = dual.conjugate_vector(&DualVector::point(b))?;
        let conv = dual.convolve(&DualVector::point(a), &b_prime, kind)?;
        let mut rhs = Complex64::default();
        for (pi, w) in conv.iter() {
            rhs += w * oracle.second_moment(pi, eps)?;
        }
        Ok((lhs, rhs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::central_measures::heat_kernel_measure;
    use crate::stationary_fields::{kolmogorov_field, white_noise};
    use crate::Dual;

    fn window(n: i64) -> Vec<Label> {
        (0..=n).map(Label).collect()
    }

    #[test]
    fn white_noise_is_stationary_both_ways() {
        let z = white_noise(&Dual::Su2, 0);
        let r = check_stationarity(&z, &window(4), 0.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_violation, 0.0);
        let h = check_hypergroup_stationarity(&z, &window(4), ConvolutionKind::RepresentationRing, 0.0).unwrap();
        assert!(h.pass && h.max_violation == 0.0);
        assert_eq!(h.check, "stathyp:representation_ring");
    }

    #[test]
    fn normalized_convolution_breaks_white_noise() {
        let z = white_noise(&Dual::Su2, 0);
        let r = check_hypergroup_stationarity(&z, &window(3), ConvolutionKind::Normalized, 1e-12).unwrap();
        assert!(!r.pass);
        let w = r.witness(Label(1), Label(1)).unwrap();
        assert_eq!(w.lhs, [1.0, 0.0]);
        assert_eq!(w.rhs, [0.25, 0.0]);
    }

    #[test]
    fn heat_kolmogorov_field_passes() {
        let field = kolmogorov_field(&heat_kernel_measure(1.0).unwrap(), 0).unwrap();
        let r = check_hypergroup_stationarity(&field, &window(4), ConvolutionKind::RepresentationRing, 1e-10).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(check_stationarity(&field, &window(4), 1e-12).unwrap().pass);
    }

    #[test]
    fn report_json_shape() {
        let z = white_noise(&Dual::Su2, 0);
        let r = check_hypergroup_stationarity(&z, &window(1), ConvolutionKind::Normalized, 1e-12).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["pass"], false);
        assert_eq!(v["witnesses"][0]["pi1"], 1);
        assert_eq!(v["witnesses"][0]["lhs"][0], 1.0);
        assert_eq!(v["check"], "stathyp:normalized");
    }
}
