use dualfield::{Dual, DualVector};
use num_complex::Complex64;

/// Fixed 17-significant-digit form used in every CSV cell.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex_cells(z: Complex64) -> String {
    format!("{},{}", num(z.re), num(z.im))
}

/// `label:coef` pairs with irrep names, space separated.
pub fn listing(dual: &Dual, v: &DualVector) -> String {
    v.iter()
        .map(|(l, c)| format!("{}:{}", dual.label_name(l), dualfield::dual_hypergroup::format_coefficient(c)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn json_complex(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}
