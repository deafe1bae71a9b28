//! Acceptance criteria, run as a plain binary so that each prints a single
//! `criterion N: PASS|FAIL` line at the stated tolerances.
//!
//! Two clauses are unattainable under the Clebsch-Gordan decomposable
//! extension (see README, "Known deviations"). They are evaluated exactly as
//! stated and reported as FAIL. The binary exits nonzero unless precisely those
//! clauses fail, so any other regression still breaks the build and a
//! change in their verdict is noticed.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dualfield::central_measures::{
    bochner_invert_finite, heat_kernel_measure, heat_kernel_transform, is_positive_definite, CentralMeasure,
    CovarianceOnDual,
};
use dualfield::dual_hypergroup::FiniteGroup;
use dualfield::stationary_fields::{
    check_hypergroup_stationarity, check_stationarity, cramer_decompose_finite, estimate_covariance,
    kolmogorov_field, white_noise, SecondMomentOracle,
};
use dualfield::time_series::{
    ar1_covariance, ar1_moving_average, ar1_second_moment_oracle, covariance_table, ma_covariance,
    ma_second_moment_oracle, simulate_ar1, white_noise_path, SeriesSpec,
};
use dualfield::{ConvolutionKind, Dual, Error, Execution, Label};

/// Clauses known to be unattainable, per criterion.
const EXPECTED_RED: &[(u32, &[&str])] = &[
    (7, &["lambda=0.9 oracle fails statdef with the (1,1) witness"]),
    (8, &["exact MA oracle passes statdef"]),
];

struct Criterion {
    number: u32,
    clauses: Vec<(&'static str, bool)>,
}

impl Criterion {
    fn new(number: u32) -> Self {
        Self { number, clauses: Vec::new() }
    }

    fn clause(&mut self, name: &'static str, ok: bool) {
        self.clauses.push((name, ok));
    }

    /// Prints the verdict line; true when the failing clauses are exactly
    /// the expected ones.
    fn finish(self) -> bool {
        let failed: Vec<&str> = self.clauses.iter().filter(|c| !c.1).map(|c| c.0).collect();
        if failed.is_empty() {
            println!("criterion {}: PASS", self.number);
        } else {
            println!("criterion {}: FAIL [{}]", self.number, failed.join("; "));
        }
        let expected: &[&str] = EXPECTED_RED
            .iter()
            .find(|(n, _)| *n == self.number)
            .map(|(_, c)| *c)
            .unwrap_or(&[]);
        if failed != expected {
            eprintln!("criterion {}: unexpected failing clauses {:?}, expected {:?}", self.number, failed, expected);
        }
        failed == expected
    }
}

fn finite(name: &str) -> Dual {
    Dual::finite(FiniteGroup::builtin(name).unwrap().unwrap())
}

fn group(dual: &Dual) -> Arc<FiniteGroup> {
    dual.as_finite().unwrap().clone()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ_π M(a ⊗ b*, π) E(Y_π conj(Y_ε))`
fn statdef_rhs(oracle: &dyn SecondMomentOracle, a: Label, b: Label) -> Complex64 {
    let dual = oracle.dual();
    let v = dual.tensor_decompose(a, dual.conjugate(b).unwrap()).unwrap();
    v.iter().map(|(p, m)| m * oracle.second_moment(p, dual.neutral()).unwrap()).sum()
}

fn criterion_1_conjugate_pairing() -> bool {
    let mut cr = Criterion::new(1);
    let duals = [
        ("su2 0..8", Dual::Su2),
        ("torus -8..8", Dual::Circle),
        ("s3", finite("s3")),
        ("c5", finite("c5")),
        ("q8", finite("q8")),
    ];
    let names = ["su2", "torus", "s3", "c5", "q8"];
    for ((_, dual), name) in duals.iter().zip(names) {
        let labels = dual.labels(8);
        let ok = labels.iter().all(|&a| {
            labels.iter().all(|&b| {
                let m = dual.tensor_decompose(a, dual.conjugate(b).unwrap()).unwrap().get(dual.neutral());
                m == c(if a == b { 1.0 } else { 0.0 }, 0.0)
            })
        });
        cr.clause(name, ok);
    }
    cr.finish()
}

fn criterion_2_clebsch_gordan_vs_integration() -> bool {
    let mut cr = Criterion::new(2);
    let dual = Dual::Su2;
    let mut worst: f64 = 0.0;
    let mut dims_ok = true;
    for a in 0..=12 {
        for b in 0..=12 {
            let v = dual.tensor_decompose(Label(a), Label(b)).unwrap();
            for t in 0..=24 {
                let m = dual.multiplicity_by_integration(Label(a), Label(b), Label(t)).unwrap();
                worst = worst.max((m - v.get(Label(t)).re).abs());
            }
            let count: f64 = v.iter().map(|(l, m)| m.re * dual.dim(l).unwrap() as f64).sum();
            dims_ok &= count == ((a + 1) * (b + 1)) as f64;
        }
    }
    cr.clause("integration agrees within 1e-6", worst <= 1e-6);
    cr.clause("dimension checksums exact", dims_ok);
    cr.finish()
}

fn criterion_3_white_noise() -> bool {
    let mut cr = Criterion::new(3);
    let dual = Dual::Su2;
    let labels = dual.labels(4);
    let field = white_noise(&dual, 3);
    let statdef = check_stationarity(&field, &labels, 0.0).unwrap();
    cr.clause("statdef zero violation", statdef.pass && statdef.max_violation == 0.0);
    let ring = check_hypergroup_stationarity(&field, &labels, ConvolutionKind::RepresentationRing, 0.0).unwrap();
    cr.clause("ring stathyp zero violation", ring.pass && ring.max_violation == 0.0);

    let window = dual.labels(2);
    let mut mc_ok = true;
    for (i, &a) in window.iter().enumerate() {
        for (j, &b) in window.iter().enumerate() {
            let est = estimate_covariance(&field, a, b, 200_000, 1000 + (3 * i + j) as u64).unwrap();
            let exact = c(if a == b { 1.0 } else { 0.0 }, 0.0);
            mc_ok &= (est.mean - exact).norm() <= (4.0 * est.stderr).max(0.02);
        }
    }
    cr.clause("Monte Carlo reproduces delta", mc_ok);

    let s3 = finite("s3");
    let noise = white_noise(&s3, 0);
    let phi = CovarianceOnDual::from_fn(s3.clone(), s3.labels(0), |l| noise.second_moment(l, s3.neutral())).unwrap();
    let weights = bochner_invert_finite(&phi).unwrap().class_weights().unwrap().to_vec();
    let haar = [1.0 / 6.0, 0.5, 1.0 / 3.0];
    cr.clause(
        "Bochner inversion gives Haar on s3",
        weights.iter().zip(haar).all(|(w, h)| (w - h).abs() <= 1e-12),
    );
    cr.finish()
}

fn criterion_4_kolmogorov_fidelity() -> bool {
    let mut cr = Criterion::new(4);
    let s3 = finite("s3");
    let g = group(&s3);
    let haar = g.haar_weights();
    let mixed: Vec<f64> = haar.iter().enumerate().map(|(i, h)| 0.5 * h + if i == 0 { 0.5 } else { 0.0 }).collect();
    let measures = [haar, vec![1.0, 0.0, 0.0], mixed];
    let labels = s3.labels(0);
    let mut fidelity = true;
    let mut stationary = true;
    for w in measures {
        let mu = CentralMeasure::finite(g.clone(), w.clone()).unwrap();
        let field = kolmogorov_field(&mu, 1).unwrap();
        for &a in &labels {
            for &b in &labels {
                // ∫ χ_a conj(χ_b) dμ straight from the table.
                let direct: Complex64 = (0..g.num_classes())
                    .map(|k| w[k] * g.character(a.0 as usize, k) * g.character(b.0 as usize, k).conj())
                    .sum();
                let got = field.second_moment(a, b).unwrap();
                fidelity &= (got - direct).norm() <= 1e-12;
            }
        }
        stationary &= check_stationarity(&field, &labels, 1e-12).unwrap().pass;
    }
    cr.clause("covariance equals fourier on 9 pairs", fidelity);
    cr.clause("statdef passes", stationary);
    cr.finish()
}

fn class_unions(k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << k).map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn criterion_5_cramer() -> bool {
    let mut cr = Criterion::new(5);
    let mut residual = true;
    let mut isometry = true;
    let mut scattering = true;
    for (name, w) in [("s3", vec![0.2, 0.5, 0.3]), ("c3", vec![0.6, 0.3, 0.1])] {
        let dual = finite(name);
        let mu = CentralMeasure::finite(group(&dual), w.clone()).unwrap();
        let field = kolmogorov_field(&mu, 9).unwrap();
        let gamma = cramer_decompose_finite(&field).unwrap();
        residual &= gamma.reconstruction_residual() <= 1e-12;
        let sets = class_unions(w.len());
        for a in &sets {
            let mass: f64 = a.iter().map(|&i| w[i]).sum();
            let e = gamma.inner_via_oracle(&field, a, a).unwrap();
            isometry &= (e - c(mass, 0.0)).norm() <= 1e-12;
            for b in &sets {
                if a.iter().all(|i| !b.contains(i)) {
                    scattering &= gamma.inner_via_oracle(&field, a, b).unwrap().norm() <= 1e-12;
                }
            }
        }
    }
    cr.clause("reconstruction residual", residual);
    cr.clause("E|Gamma(A)|^2 = mu(A)", isometry);
    cr.clause("orthogonal on disjoint sets", scattering);
    cr.finish()
}

fn criterion_6_heat_kernel() -> bool {
    let mut cr = Criterion::new(6);
    let labels = Dual::Su2.labels(6);
    let mut psd = true;
    let mut fourier = true;
    for t in [0.1, 1.0] {
        let phi = CovarianceOnDual::from_fn(Dual::Su2, Dual::Su2.labels(12), |l| {
            let n = l.0 as f64;
            Ok(c((n + 1.0) * (-t * n * (n + 2.0)).exp(), 0.0))
        })
        .unwrap();
        psd &= is_positive_definite(&phi, &labels, 1e-10).unwrap().min_eigenvalue >= -1e-10;
        let mu = heat_kernel_measure(t).unwrap();
        for n in 0..=6u64 {
            let closed = heat_kernel_transform(t, n);
            fourier &= (mu.fourier(Label(n as i64)).unwrap() - c(closed, 0.0)).norm() <= 1e-8;
        }
    }
    cr.clause("Gram min eigenvalue >= -1e-10", psd);
    cr.clause("quadrature fourier matches closed form", fourier);
    cr.finish()
}

/// `E(Y_{n+h} conj(Y_n))` for `Y_n = Σ_{j≤n} λ^j Z_{n-j}` by summing over
/// every pair of noise indices.
fn ar1_brute(lambda: Complex64, n: u64, h: u64) -> Complex64 {
    let mut total = Complex64::default();
    for j in 0..=n + h {
        for k in 0..=n {
            if n + h - j == n - k {
                total += lambda.powu(j as u32) * lambda.conj().powu(k as u32);
            }
        }
    }
    total
}

fn close_rel(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn criterion_7_ar1() -> bool {
    let mut cr = Criterion::new(7);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let lambdas = [c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.9, 0.0), c(r, r), c(0.0, 1.0), c(2.0, 0.0)];
    let mut closed = true;
    for &l in &lambdas {
        for n in 0..=20 {
            for h in 0..=10 {
                closed &= close_rel(ar1_covariance(l, n, h), ar1_brute(l, n, h), 1e-12);
            }
        }
    }
    cr.clause("closed form matches double sum", closed);

    let lambda = c(0.9, 0.0);
    let oracle = ar1_second_moment_oracle(lambda);
    let report = check_stationarity(&oracle, &Dual::Su2.labels(4), 1e-10).unwrap();
    let lhs = ar1_brute(lambda, 1, 0);
    let discrepancy = (lhs - statdef_rhs(&oracle, Label(1), Label(1))).norm();
    let witnessed = report
        .witness(Label(1), Label(1))
        .is_some_and(|w| (w.violation() - discrepancy).abs() <= 1e-12);
    cr.clause("lambda=0.9 oracle fails statdef with the (1,1) witness", !report.pass && witnessed);

    let mut expansion = true;
    for (i, &l) in lambdas.iter().enumerate() {
        let path = simulate_ar1(l, 20, 40 + i as u64);
        let ma = ar1_moving_average(l, &white_noise_path(20, 40 + i as u64));
        expansion &= path.iter().zip(&ma).all(|(a, b)| close_rel(*a, *b, 1e-12));
    }
    cr.clause("simulate_ar1 equals the moving-average expansion", expansion);
    cr.finish()
}

fn criterion_8_ma() -> bool {
    let mut cr = Criterion::new(8);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut matches = true;
    let mut steady = true;
    let mut oracle_pass = true;
    for len in 1..=4usize {
        let beta: Vec<Complex64> = (0..len).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let q = len - 1;
        let spec = SeriesSpec::Ma { beta: beta.clone() };
        let h_max = q + 1;
        let rows = covariance_table(&spec, q + 10, h_max, 100_000, 800 + len as u64, Execution::default()).unwrap();
        let row = |n: usize, h: usize| &rows[n * (h_max + 1) + h];
        for h in 0..=h_max {
            for n in [q, q + 10] {
                matches &= row(n, h).mc.within(ma_covariance(&beta, h), 4.0);
            }
            let (a, b) = (row(q, h).mc, row(q + 10, h).mc);
            steady &= (a.mean - b.mean).norm() <= 4.0 * a.stderr.hypot(b.stderr);
        }
        let oracle = ma_second_moment_oracle(beta).unwrap();
        oracle_pass &= check_stationarity(&oracle, &Dual::Su2.labels(4), 1e-10).unwrap().pass;
    }
    cr.clause("ma_covariance matches Monte Carlo within 4 sigma", matches);
    cr.clause("n-independent across q and q+10", steady);
    cr.clause("exact MA oracle passes statdef", oracle_pass);
    cr.finish()
}

fn criterion_9_two_convolutions() -> bool {
    let mut cr = Criterion::new(9);
    let field = white_noise(&Dual::Su2, 0);
    let labels = Dual::Su2.labels(4);
    let ring = check_hypergroup_stationarity(&field, &labels, ConvolutionKind::RepresentationRing, 1e-12).unwrap();
    let norm = check_hypergroup_stationarity(&field, &labels, ConvolutionKind::Normalized, 1e-12).unwrap();
    cr.clause("ring passes", ring.pass);
    cr.clause("normalized fails", !norm.pass);
    let w = norm.witness(Label(1), Label(1));
    cr.clause("(1,1) witness 1 vs 0.25", w.is_some_and(|w| w.lhs == [1.0, 0.0] && w.rhs == [0.25, 0.0]));
    cr.finish()
}

fn criterion_10_bochner_round_trip() -> bool {
    let mut cr = Criterion::new(10);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut round_trip = true;
    for name in ["s3", "q8"] {
        let dual = finite(name);
        let g = group(&dual);
        for _ in 0..100 {
            let w: Vec<f64> = (0..g.num_classes()).map(|_| rng.random_range(0.0..1.0)).collect();
            let mu = CentralMeasure::finite(g.clone(), w.clone()).unwrap();
            let phi = CovarianceOnDual::from_fn(dual.clone(), dual.labels(0), |l| mu.fourier(l)).unwrap();
            let back = bochner_invert_finite(&phi).unwrap();
            round_trip &= back.class_weights().unwrap().iter().zip(&w).all(|(a, b)| (a - b).abs() <= 1e-12);
        }
    }
    cr.clause("weights reproduced within 1e-12", round_trip);
    let s3 = finite("s3");
    let bad = CovarianceOnDual::new(s3, [(Label(0), c(1.0, 0.0)), (Label(1), c(2.0, 0.0)), (Label(2), c(0.0, 0.0))]).unwrap();
    cr.clause(
        "non-positive transform rejected",
        matches!(bochner_invert_finite(&bad), Err(Error::NotPositive { .. })),
    );
    cr.finish()
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_1_conjugate_pairing,
        criterion_2_clebsch_gordan_vs_integration,
        criterion_3_white_noise,
        criterion_4_kolmogorov_fidelity,
        criterion_5_cramer,
        criterion_6_heat_kernel,
        criterion_7_ar1,
        criterion_8_ma,
        criterion_9_two_convolutions,
        criterion_10_bochner_round_trip,
    ];
    let unexpected = criteria.iter().filter(|f| !f()).count();
    if unexpected > 0 {
        eprintln!("{unexpected} criteria deviated from their expected verdict");
        std::process::exit(1);
    }
}
