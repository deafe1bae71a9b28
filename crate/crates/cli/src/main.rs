//! `dualfield` command-line harness.
//!
//! Exit codes: 0 success, 1 a stationarity check failed, 2 usage or domain
//! error, 3 data-integrity error.

mod output;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use dualfield::central_measures::{bochner_invert_finite, parse_measure, CovarianceOnDual};
use dualfield::stationary_fields::{
    check_hypergroup_stationarity, check_stationarity, cramer_decompose_finite, kolmogorov_field,
    parse_field, SecondMomentOracle, StationarityReport,
};
use dualfield::time_series::{covariance_table, SeriesSpec};
use dualfield::{ConvolutionKind, Dual, DualVector, Error, Execution, Label};

use output::{complex_cells, json_complex, listing, num};

#[derive(Parser)]
#[command(name = "dualfield", version, about = "Stationary random fields on the unitary dual of a compact group")]
struct Cli {
    /// torus, su2, or finite:<name-or-path>
    #[arg(long, global = true, default_value = "su2")]
    dual: String,
    /// Seed for randomized commands; generated and recorded when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a ⊗ b into irreducibles.
    Tensor {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Convolve two finitely supported vectors, e.g. `1` or `0:0.5,2:0.5`.
    Convolve {
        #[arg(allow_hyphen_values = true)]
        m1: String,
        #[arg(allow_hyphen_values = true)]
        m2: String,
        /// representation_ring or normalized
        #[arg(long, default_value = "representation_ring")]
        kind: String,
    },
    /// Transform of a central measure over a label window.
    Spectral {
        /// haar, identity, heat:<t>, atoms:θ:w,..., classes:w,...
        measure: String,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Class weights of the central measure with the given transform.
    Invert {
        /// One value per irrep, `re` or `re:im`, comma separated.
        #[arg(allow_hyphen_values = true)]
        values: String,
    },
    /// Sample a field or a time series.
    Simulate {
        /// whitenoise, kolmogorov:<measure>, ar1:<re>,<im>, ma:<re>,<im>;...
        spec: String,
        /// Label window for fields, n_max for series.
        #[arg(long, default_value_t = 6)]
        bound: u32,
        /// Joint samples (fields) or Monte Carlo paths (series, ≥ 2 gives a covariance table).
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Largest lag h in a series covariance table.
        #[arg(long, default_value_t = 3)]
        lags: usize,
    },
    /// Exact stationarity check over a label window.
    Check {
        spec: String,
        #[arg(long, default_value_t = 4)]
        bound: u32,
        /// statdef, representation_ring or normalized
        #[arg(long, default_value = "statdef")]
        kind: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Orthogonally scattered measure of a Kolmogorov field on a finite group.
    Cramer { measure: String },
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text).map_err(Error::from),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(e) => fail(&e),
            }
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_data_integrity() { 3 } else { 2 })
}

fn resolve_seed(seed: Option<u64>) -> (u64, bool) {
    match seed {
        Some(s) => (s, false),
        None => (rand::random(), true),
    }
}

fn run(cli: &Cli) -> dualfield::Result<Outcome> {
    let search = std::env::var("DUALFIELD_GROUPS").ok();
    let dual = Dual::resolve(&cli.dual, search.as_deref())?;
    let json = cli.format == Some(Format::Json);
    match &cli.command {
        Command::Tensor { a, b } => {
            let (a, b) = (dual.parse_label(a)?, dual.parse_label(b)?);
            let v = dual.tensor_decompose(a, b)?;
            let expected = dual.dim(a)? * dual.dim(b)?;
            let mut counted = 0;
            for (l, m) in v.iter() {
                counted += m.re as u64 * dual.dim(l)?;
            }
            if json {
                let terms: Vec<_> = v
                    .iter()
                    .map(|(l, m)| json!({"label": l, "name": dual.label_name(l), "multiplicity": m.re, "dim": dual.dim(l).unwrap()}))
                    .collect();
                return Ok(Outcome::ok(format!(
                    "{}\n",
                    json!({"dual": dual.name(), "terms": terms, "dimcheck": [counted, expected]})
                )));
            }
            Ok(Outcome::ok(format!("{} (dimcheck {counted}={expected})\n", listing(&dual, &v))))
        }
        Command::Convolve { m1, m2, kind } => {
            let kind: ConvolutionKind = kind.parse()?;
            let v = dual.convolve(&parse_vector(&dual, m1)?, &parse_vector(&dual, m2)?, kind)?;
            if json {
                let terms: Vec<_> = v
                    .iter()
                    .map(|(l, c)| json!({"label": l, "name": dual.label_name(l), "coefficient": json_complex(c)}))
                    .collect();
                return Ok(Outcome::ok(format!("{}\n", json!({"kind": kind.as_str(), "terms": terms}))));
            }
            Ok(Outcome::ok(format!("{}\n", listing(&dual, &v))))
        }
        Command::Spectral { measure, bound } => {
            let mu = parse_measure(measure, &dual)?;
            let rows = dual
                .labels(*bound)
                .into_iter()
                .map(|l| Ok((l, mu.fourier(l)?)))
                .collect::<dualfield::Result<Vec<_>>>()?;
            if json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|&(l, z)| json!({"label": l, "name": dual.label_name(l), "value": json_complex(z)}))
                    .collect();
                return Ok(Outcome::ok(format!("{}\n", json!({"measure": mu.descriptor(), "fourier": rows}))));
            }
            let mut out = String::from("label,re,im\n");
            for (l, z) in rows {
                writeln!(out, "{},{}", dual.label_name(l), complex_cells(z)).unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Command::Invert { values } => {
            let parsed = values
                .split(',')
                .map(parse_coefficient)
                .collect::<dualfield::Result<Vec<_>>>()?;
            let phi = CovarianceOnDual::new(
                dual.clone(),
                parsed.into_iter().enumerate().map(|(i, z)| (Label(i as i64), z)),
            )?;
            let mu = bochner_invert_finite(&phi)?;
            let weights = mu.class_weights().expect("finite measure");
            if json {
                return Ok(Outcome::ok(format!("{}\n", json!({"weights": weights}))));
            }
            let mut out = String::from("class,weight\n");
            for (c, w) in weights.iter().enumerate() {
                writeln!(out, "{c},{}", num(*w)).unwrap();
            }
            Ok(Outcome::ok(out))
        }
        Command::Simulate { spec, bound, samples, lags } => {
            let (seed, generated) = resolve_seed(cli.seed);
            simulate(&dual, spec, *bound, *samples, *lags, seed, generated, json)
        }
        Command::Check { spec, bound, kind, tol } => {
            let labels = dual.labels(*bound);
            let oracle: Box<dyn SecondMomentOracle> = if SeriesSpec::is_series_spec(spec) {
                if dual != Dual::Su2 {
                    return Err(Error::InvalidParameter("time series live on the su2 dual".into()));
                }
                SeriesSpec::parse(spec)?.oracle()
            } else {
                Box::new(parse_field(spec, &dual, 0)?)
            };
            let report = match kind.as_str() {
                "statdef" => check_stationarity(oracle.as_ref(), &labels, *tol)?,
                other => check_hypergroup_stationarity(oracle.as_ref(), &labels, other.parse()?, *tol)?,
            };
            let text = if cli.format == Some(Format::Csv) { report_csv(&report) } else { report.to_json() + "\n" };
            Ok(Outcome { text, code: if report.pass { 0 } else { 1 } })
        }
        Command::Cramer { measure } => {
            let mu = parse_measure(measure, &dual)?;
            let field = kolmogorov_field(&mu, 0)?;
            let gamma = cramer_decompose_finite(&field)?;
            let classes: Vec<usize> = (0..gamma.num_classes()).collect();
            if cli.format == Some(Format::Csv) {
                let mut out = String::from("class,mu,second_moment\n");
                for &c in &classes {
                    writeln!(out, "{c},{},{}", num(gamma.measure_of(&[c])), num(gamma.inner(&[c], &[c]).re)).unwrap();
                }
                return Ok(Outcome::ok(out));
            }
            let rows: Vec<_> = classes
                .iter()
                .map(|&c| json!({"class": c, "mu": gamma.measure_of(&[c]), "second_moment": gamma.inner(&[c], &[c]).re}))
                .collect();
            let value = json!({
                "descriptor": gamma.descriptor(),
                "reconstruction_residual": gamma.reconstruction_residual(),
                "null_classes": gamma.null_classes(),
                "classes": rows,
            });
            Ok(Outcome::ok(serde_json::to_string_pretty(&value).unwrap() + "\n"))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    dual: &Dual,
    spec: &str,
    bound: u32,
    samples: usize,
    lags: usize,
    seed: u64,
    generated: bool,
    json: bool,
) -> dualfield::Result<Outcome> {
    let mut out = String::new();
    if generated && !json {
        writeln!(out, "# seed={seed}").unwrap();
    }
    if SeriesSpec::is_series_spec(spec) {
        if *dual != Dual::Su2 {
            return Err(Error::InvalidParameter("time series live on the su2 dual".into()));
        }
        let series = SeriesSpec::parse(spec)?;
        let n_max = bound as usize;
        if samples >= 2 {
            let rows = covariance_table(&series, n_max, lags, samples, seed, Execution::default())?;
            if json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|r| json!({"n": r.n, "h": r.h, "closed": json_complex(r.closed), "mc": json_complex(r.mc.mean), "stderr": r.mc.stderr}))
                    .collect();
                return Ok(Outcome::ok(format!("{}\n", json!({"seed": seed, "series": spec, "covariance": rows}))));
            }
            out.push_str("n,h,re_closed,im_closed,re_mc,im_mc,stderr\n");
            for r in rows {
                writeln!(out, "{},{},{},{},{}", r.n, r.h, complex_cells(r.closed), complex_cells(r.mc.mean), num(r.mc.stderr)).unwrap();
            }
            return Ok(Outcome::ok(out));
        }
        let path = series.simulate(n_max, seed);
        if json {
            let path: Vec<_> = path.iter().map(|&z| json_complex(z)).collect();
            return Ok(Outcome::ok(format!("{}\n", json!({"seed": seed, "series": spec, "path": path}))));
        }
        out.push_str("n,re,im\n");
        for (n, z) in path.iter().enumerate() {
            writeln!(out, "{n},{}", complex_cells(*z)).unwrap();
        }
        return Ok(Outcome::ok(out));
    }

    let mut field = parse_field(spec, dual, seed)?;
    let labels = dual.labels(bound);
    let draws = (0..samples.max(1))
        .map(|_| field.sample(&labels))
        .collect::<dualfield::Result<Vec<_>>>()?;
    if json {
        let draws: Vec<_> = draws
            .iter()
            .map(|s| s.iter().map(|(l, z)| json!({"label": l, "value": json_complex(*z)})).collect::<Vec<_>>())
            .collect();
        return Ok(Outcome::ok(format!(
            "{}\n",
            json!({"seed": seed, "field": field.descriptor(), "samples": draws})
        )));
    }
    out.push_str("sample,label,re,im\n");
    for (i, s) in draws.iter().enumerate() {
        for (l, z) in s {
            writeln!(out, "{i},{},{}", dual.label_name(*l), complex_cells(*z)).unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

fn report_csv(report: &StationarityReport) -> String {
    let mut out = format!("# check={} pass={} max_violation={}\n", report.check, report.pass, num(report.max_violation));
    out.push_str("pi1,pi2,re_lhs,im_lhs,re_rhs,im_rhs\n");
    for w in &report.witnesses {
        writeln!(out, "{},{},{},{},{},{}", w.pi1, w.pi2, num(w.lhs[0]), num(w.lhs[1]), num(w.rhs[0]), num(w.rhs[1])).unwrap();
    }
    out
}

fn parse_coefficient(text: &str) -> dualfield::Result<Complex64> {
    let bad = || Error::InvalidParameter(format!("bad coefficient {text:?}"));
    let mut parts = text.trim().splitn(2, ':');
    let re = parts.next().unwrap_or("").parse::<f64>().map_err(|_| bad())?;
    let im = match parts.next() {
        Some(im) => im.parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

/// `label[:re[:im]]` terms separated by commas; a bare label is a point mass.
fn parse_vector(dual: &Dual, text: &str) -> dualfield::Result<DualVector> {
    let mut v = DualVector::new();
    for term in text.split(',') {
        let (label, coeff) = match term.split_once(':') {
            Some((l, c)) => (l, parse_coefficient(c)?),
            None => (term, Complex64::new(1.0, 0.0)),
        };
        v.add(dual.parse_label(label)?, coeff);
    }
    Ok(v)
}
