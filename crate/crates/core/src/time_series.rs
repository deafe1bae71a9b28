//! AR(1) and MA(q) processes on the dual of SU(2).
//!
//! Labels `n ∈ ℤ₊` are ordered as time. Noise is the circular Gaussian
//! white noise of [`crate::stationary_fields::white_noise`]: a path
//! `Z_0..Z_n` drawn from seed `s` equals that field's joint sample at labels
//! `0..=n` with the same seed.

use num_complex::Complex64;
use serde::Serialize;

use crate::dual_hypergroup::{Dual, Label};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::monte_carlo::{self, rng_from_seed, Estimate, Rng};
use crate::stationary_fields::{circular_gaussian, SecondMomentOracle};

/// `| |λ| − 1 |` below which the AR(1) geometric sum uses the `(n+1)` branch.
pub const UNIT_MODULUS_TOL: f64 = 1e-8;

/// `Z_0, …, Z_len-1` from a stream.
pub fn noise_from_rng(rng: &mut Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| circular_gaussian(rng)).collect()
}

pub fn white_noise_path(n_max: usize, seed: u64) -> Vec<Complex64> {
    noise_from_rng(&mut rng_from_seed(seed), n_max + 1)
}

/// `Y_n = λY_{n−1} + Z_n` with `Y_{−1} = 0`.
pub fn ar1_from_noise(lambda: Complex64, noise: &[Complex64]) -> Vec<Complex64> {
    let mut prev = Complex64::default();
    noise
        .iter()
        .map(|&z| {
            prev = lambda * prev + z;
            prev
        })
        .collect()
}

/// `Y_n = Σ_{k=0}^{n} λ^k Z_{n−k}`; finite for every `λ`.
pub fn ar1_moving_average(lambda: Complex64, noise: &[Complex64]) -> Vec<Complex64> {
    (0..noise.len())
        .map(|n| (0..=n).map(|k| lambda.powu(k as u32) * noise[n - k]).sum())
        .collect()
}

/// AR(1) path `Y_0..Y_{n_max}`.
pub fn simulate_ar1(lambda: Complex64, n_max: usize, seed: u64) -> Vec<Complex64> {
    ar1_from_noise(lambda, &white_noise_path(n_max, seed))
}

/// `E(Y_{n+h} conj(Y_n)) = λ^h Σ_{l=0}^{n} |λ|^{2l}` under unit white noise.
pub fn ar1_covariance(lambda: Complex64, n: u64, h: u64) -> Complex64 {
    let r2 = lambda.norm_sqr();
    let sum = if (lambda.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
        (1.0 - r2.powi(n as i32 + 1)) / (1.0 - r2)
    } else {
        (n + 1) as f64
    };
    lambda.powu(h as u32) * sum
}

/// Steady-regime MA(q) covariance `Σ_{k=0}^{q−h} β_{k+h} conj(β_k)`, zero
/// for `h > q`.
pub fn ma_covariance(beta: &[Complex64], h: usize) -> Complex64 {
    if h >= beta.len() {
        return Complex64::default();
    }
    (0..beta.len() - h).map(|k| beta[k + h] * beta[k].conj()).sum()
}

/// Exact `E(Y_{n+h} conj(Y_n))` including the start-up regime `n < q`
/// where `Z_j = 0` for `j < 0`. Equals [`ma_covariance`] for `n ≥ q`.
pub fn ma_covariance_at(beta: &[Complex64], n: usize, h: usize) -> Complex64 {
    if h >= beta.len() {
        return Complex64::default();
    }
    (0..(beta.len() - h).min(n + 1)).map(|k| beta[k + h] * beta[k].conj()).sum()
}

/// `Y_n = Σ_{k=0}^{q} β_k Z_{n−k}` with `Z_j = 0` for `j < 0`.
pub fn ma_from_noise(beta: &[Complex64], noise: &[Complex64]) -> Vec<Complex64> {
    (0..noise.len())
        .map(|n| {
            beta.iter()
                .enumerate()
                .filter(|(k, _)| *k <= n)
                .map(|(k, &b)| b * noise[n - k])
                .sum()
        })
        .collect()
}

pub fn simulate_ma(beta: &[Complex64], n_max: usize, seed: u64) -> Result<Vec<Complex64>> {
    check_ma(beta)?;
    Ok(ma_from_noise(beta, &white_noise_path(n_max, seed)))
}

fn check_ma(beta: &[Complex64]) -> Result<()> {
    if beta.is_empty() {
        Err(Error::InvalidParameter("MA coefficients must be nonempty".into()))
    } else {
        Ok(())
    }
}

fn label_index(dual: &Dual, l: Label) -> Result<u64> {
    dual.check(l)?;
    Ok(l.0 as u64)
}

/// Exact two-index AR(1) second moments on `ℤ₊` labels.
#[derive(Debug, Clone)]
pub struct Ar1Oracle {
    lambda: Complex64,
    dual: Dual,
}

pub fn ar1_second_moment_oracle(lambda: Complex64) -> Ar1Oracle {
    Ar1Oracle { lambda, dual: Dual::Su2 }
}

impl SecondMomentOracle for Ar1Oracle {
    fn dual(&self) -> &Dual {
        &self.dual
    }

    fn second_moment(&self, a: Label, b: Label) -> Result<Complex64> {
        let (n1, n2) = (label_index(&self.dual, a)?, label_index(&self.dual, b)?);
        Ok(if n1 >= n2 {
            ar1_covariance(self.lambda, n2, n1 - n2)
        } else {
            ar1_covariance(self.lambda, n1, n2 - n1).conj()
        })
    }
}

/// Steady-regime MA(q) second moments `E(Y_{n₁} conj(Y_{n₂}))`.
#[derive(Debug, Clone)]
pub struct MaOracle {
    beta: Vec<Complex64>,
    dual: Dual,
}

pub fn ma_second_moment_oracle(beta: Vec<Complex64>) -> Result<MaOracle> {
    check_ma(&beta)?;
    Ok(MaOracle { beta, dual: Dual::Su2 })
}

impl SecondMomentOracle for MaOracle {
    fn dual(&self) -> &Dual {
        &self.dual
    }

    fn second_moment(&self, a: Label, b: Label) -> Result<Complex64> {
        let (n1, n2) = (label_index(&self.dual, a)?, label_index(&self.dual, b)?);
        Ok(if n1 >= n2 {
            ma_covariance(&self.beta, (n1 - n2) as usize)
        } else {
            ma_covariance(&self.beta, (n2 - n1) as usize).conj()
        })
    }
}

/// A series driven by white noise.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSpec {
    Ar1 { lambda: Complex64 },
    Ma { beta: Vec<Complex64> },
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::InvalidParameter(format!("expected <re>,<im>, got {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

impl SeriesSpec {
    /// Parses `ar1:<re>,<im>` or `ma:<re0>,<im0>;<re1>,<im1>;...`.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Some(rest) = spec.strip_prefix("ar1:") {
            return Ok(SeriesSpec::Ar1 { lambda: parse_complex(rest)? });
        }
        if let Some(rest) = spec.strip_prefix("ma:") {
            let beta = rest.split(';').map(parse_complex).collect::<Result<Vec<_>>>()?;
            check_ma(&beta)?;
            return Ok(SeriesSpec::Ma { beta });
        }
        Err(Error::InvalidParameter(format!("unknown series {spec:?}")))
    }

    pub fn is_series_spec(spec: &str) -> bool {
        spec.starts_with("ar1:") || spec.starts_with("ma:")
    }

    pub fn path_from_noise(&self, noise: &[Complex64]) -> Vec<Complex64> {
        match self {
            SeriesSpec::Ar1 { lambda } => ar1_from_noise(*lambda, noise),
            SeriesSpec::Ma { beta } => ma_from_noise(beta, noise),
        }
    }

    pub fn simulate(&self, n_max: usize, seed: u64) -> Vec<Complex64> {
        self.path_from_noise(&white_noise_path(n_max, seed))
    }

    /// Exact `E(Y_{n+h} conj(Y_n))` of the simulated process.
    pub fn covariance(&self, n: usize, h: usize) -> Complex64 {
        match self {
            SeriesSpec::Ar1 { lambda } => ar1_covariance(*lambda, n as u64, h as u64),
            SeriesSpec::Ma { beta } => ma_covariance_at(beta, n, h),
        }
    }

    pub fn oracle(&self) -> Box<dyn SecondMomentOracle> {
        match self {
            SeriesSpec::Ar1 { lambda } => Box::new(ar1_second_moment_oracle(*lambda)),
            SeriesSpec::Ma { beta } => Box::new(MaOracle { beta: beta.clone(), dual: Dual::Su2 }),
        }
    }
}

/// One row of a closed-form versus Monte Carlo covariance table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceRow {
    pub n: usize,
    pub h: usize,
    pub closed: Complex64,
    pub mc: Estimate,
}

/// Estimates `E(Y_{n+h} conj(Y_n))` for `n ≤ n_max`, `h ≤ h_max` from
/// `samples` independent paths.
pub fn covariance_table(
    spec: &SeriesSpec,
    n_max: usize,
    h_max: usize,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<CovarianceRow>> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two sample paths".into()));
    }
    let len = n_max + h_max + 1;
    let width = (n_max + 1) * (h_max + 1);
    let estimates = monte_carlo::estimate_means(samples, seed, width, exec, |rng, out| {
        let path = spec.path_from_noise(&noise_from_rng(rng, len));
        for n in 0..=n_max {
            for h in 0..=h_max {
                out[n * (h_max + 1) + h] = path[n + h] * path[n].conj();
            }
        }
    });
    Ok((0..=n_max)
        .flat_map(|n| (0..=h_max).map(move |h| (n, h)))
        .zip(estimates)
        .map(|((n, h), mc)| CovarianceRow { n, h, closed: spec.covariance(n, h), mc })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stationary_fields::{check_stationarity, white_noise};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn noise_path_matches_white_noise_field() {
        let labels: Vec<Label> = (0..=6).map(Label).collect();
        let field = white_noise(&Dual::Su2, 77).sample(&labels).unwrap();
        let path = white_noise_path(6, 77);
        for (n, z) in path.iter().enumerate() {
            assert_eq!(field[&Label(n as i64)], *z);
        }
    }

    #[test]
    fn ar1_examples() {
        let z = white_noise_path(8, 3);
        assert_eq!(ar1_from_noise(c(0.0, 0.0), &z), z);
        let ones = vec![c(1.0, 0.0); 6];
        let y = ar1_from_noise(c(1.0, 0.0), &ones);
        for (n, v) in y.iter().enumerate() {
            assert_eq!(*v, c(n as f64 + 1.0, 0.0));
        }
        let z = white_noise_path(3, 9);
        let rec = ar1_from_noise(c(2.0, 0.0), &z);
        let ma = ar1_moving_average(c(2.0, 0.0), &z);
        for (a, b) in rec.iter().zip(&ma) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn ar1_covariance_examples() {
        for n in 0..5 {
            assert_eq!(ar1_covariance(c(0.0, 0.0), n, 0), c(1.0, 0.0));
            assert_eq!(ar1_covariance(c(0.0, 0.0), n, 2), c(0.0, 0.0));
        }
        assert!((ar1_covariance(c(0.5, 0.0), 1, 0) - 1.25).norm() < 1e-15);
        assert!((ar1_covariance(c(0.0, 1.0), 2, 1) - c(0.0, 3.0)).norm() < 1e-15);
    }

    #[test]
    fn ma_covariance_examples() {
        let one = [c(1.0, 0.0)];
        assert_eq!(ma_covariance(&one, 0), c(1.0, 0.0));
        assert_eq!(ma_covariance(&one, 1), c(0.0, 0.0));
        assert_eq!(ma_covariance(&[c(1.0, 0.0), c(1.0, 0.0)], 1), c(1.0, 0.0));
        assert_eq!(ma_covariance(&[c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0)], 2), c(-1.0, 0.0));
        let beta = [c(1.0, 0.5), c(0.2, -1.0), c(0.3, 0.3)];
        for h in 0..4 {
            assert_eq!(ma_covariance_at(&beta, 2, h), ma_covariance(&beta, h));
        }
        assert_eq!(ma_covariance_at(&beta, 0, 0), beta[0].norm_sqr().into());
    }

    #[test]
    fn ma_boundary_convention() {
        let z = white_noise_path(5, 1);
        assert_eq!(ma_from_noise(&[c(1.0, 0.0)], &z), z);
        let shifted = ma_from_noise(&[c(0.0, 0.0), c(1.0, 0.0)], &z);
        assert_eq!(shifted[0], c(0.0, 0.0));
        assert_eq!(&shifted[1..], &z[..5]);
        assert!(simulate_ma(&[], 3, 0).is_err());
    }

    #[test]
    fn oracle_values() {
        let o = ar1_second_moment_oracle(c(0.9, 0.0));
        assert_eq!(o.second_moment(Label(0), Label(0)).unwrap(), c(1.0, 0.0));
        let geometric: f64 = (0..=10).map(|l| 0.81f64.powi(l)).sum();
        assert!((o.second_moment(Label(10), Label(10)).unwrap().re - geometric).abs() < 1e-12);
        assert!((geometric - 4.744857419903363).abs() < 1e-12);
        let w = ar1_second_moment_oracle(c(0.0, 0.0));
        assert_eq!(w.second_moment(Label(3), Label(2)).unwrap(), c(0.0, 0.0));
        assert!(o.second_moment(Label(-1), Label(0)).is_err());
    }

    // With the Clebsch-Gordan extension, the statdef identity for AR(1)
    // reduces to λ^h Σ|λ|^{2l} = Σ λ^{h+2l}; it holds exactly for real λ and
    // fails otherwise.
    #[test]
    fn ar1_stationarity_depends_on_the_phase_of_lambda() {
        let labels: Vec<Label> = (0..=5).map(Label).collect();
        for lambda in [0.5, 0.9, -0.5, 2.0] {
            let r = check_stationarity(&ar1_second_moment_oracle(c(lambda, 0.0)), &labels, 1e-9).unwrap();
            assert!(r.pass, "λ = {lambda}: {}", r.max_violation);
        }
        let lambda = c(0.0, 1.0);
        let r = check_stationarity(&ar1_second_moment_oracle(lambda), &labels, 1e-12).unwrap();
        assert!(!r.pass);
        // (1,1): lhs 1 + |λ|², rhs 1 + λ².
        let w = r.witness(Label(1), Label(1)).unwrap();
        assert_eq!(w.lhs, [2.0, 0.0]);
        assert!((w.violation() - (lambda.norm_sqr() - lambda * lambda).norm()).abs() < 1e-12);
    }

    // Steady MA oracle: rhs at (n, n) adds c(2), c(4), … to c(0), so only
    // q ≤ 1 (or c(k) = 0 for k ≥ 2) is stationary in the dual sense. SU(2)
    // labels are self-conjugate, so c(1) must also be real.
    #[test]
    fn ma_stationarity_holds_for_short_filters_only() {
        let labels: Vec<Label> = (0..=5).map(Label).collect();
        let short = ma_second_moment_oracle(vec![c(1.0, 0.0), c(0.4, 0.0)]).unwrap();
        assert!(check_stationarity(&short, &labels, 1e-12).unwrap().pass);
        let long = ma_second_moment_oracle(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = check_stationarity(&long, &labels, 1e-12).unwrap();
        assert!(!r.pass);
        let w = r.witness(Label(1), Label(1)).unwrap();
        assert_eq!((w.lhs, w.rhs), ([3.0, 0.0], [4.0, 0.0]));
    }

    #[test]
    fn series_specs() {
        assert_eq!(SeriesSpec::parse("ar1:0.9,0").unwrap(), SeriesSpec::Ar1 { lambda: c(0.9, 0.0) });
        assert_eq!(
            SeriesSpec::parse("ma:1,0;0,2;-1,0").unwrap(),
            SeriesSpec::Ma { beta: vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0)] }
        );
        assert!(SeriesSpec::parse("ma:").is_err());
        assert!(SeriesSpec::parse("ar1:1").is_err());
        assert!(SeriesSpec::parse("arma:1,0").is_err());
    }

    #[test]
    fn covariance_table_tracks_closed_form() {
        let spec = SeriesSpec::parse("ma:1,0;1,0").unwrap();
        let rows = covariance_table(&spec, 3, 2, 20_000, 5, Execution::Parallel).unwrap();
        assert_eq!(rows.len(), 12);
        for r in &rows {
            assert!(r.mc.within(r.closed, 4.5), "{r:?}");
        }
        let again = covariance_table(&spec, 3, 2, 20_000, 5, Execution::Sequential).unwrap();
        assert_eq!(rows, again);
    }
}
