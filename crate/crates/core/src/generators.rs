//! Named driving sequences.

use crate::dft::unity_driver;
use crate::dtt::Driver;
use crate::error::{Error, Result};

pub const NAMES: &[&str] = &["harmonic", "inv-shift2", "catalan-shifted", "unity", "cos2", "cos", "sin"];

/// `1/(k+1)`.
pub fn harmonic(n: usize) -> Vec<f64> {
    (0..n).map(|k| 1.0 / (k + 1) as f64).collect()
}

/// `1/(k+2)`.
pub fn inv_shift2(n: usize) -> Vec<f64> {
    (0..n).map(|k| 1.0 / (k + 2) as f64).collect()
}

/// Catalan numbers `C_{k+1}`: 1, 2, 5, 14, 42, …
pub fn catalan_shifted(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 1.0f64;
    for k in 1..=n {
        // C_k = C_{k-1} · 2(2k−1)/(k+1)
        c = c * 2.0 * (2 * k - 1) as f64 / (k + 1) as f64;
        out.push(c.round());
    }
    out
}

/// `cos²(k+2)`.
pub fn cos2(n: usize) -> Vec<f64> {
    (0..n).map(|k| ((k + 2) as f64).cos().powi(2)).collect()
}

/// `cos(k+1)`.
pub fn cos(n: usize) -> Vec<f64> {
    (0..n).map(|k| ((k + 1) as f64).cos()).collect()
}

/// `sin(k+1)`.
pub fn sin(n: usize) -> Vec<f64> {
    (0..n).map(|k| ((k + 1) as f64).sin()).collect()
}

pub fn by_name(name: &str, n: usize) -> Result<Driver> {
    let v = match name {
        "harmonic" => harmonic(n),
        "inv-shift2" => inv_shift2(n),
        "catalan-shifted" => catalan_shifted(n),
        "cos2" => cos2(n),
        "cos" => cos(n),
        "sin" => sin(n),
        "unity" => return unity_driver(n),
        _ => return Err(Error::InvalidDriver(format!("unknown generator {name:?}; known: {}", NAMES.join(", ")))),
    };
    Driver::from_reals(&v)
}
