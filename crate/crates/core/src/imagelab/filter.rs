//! 3×3 neighborhood filters. Kernel entry `A[r][c]` weights pixel
//! `(i + r − 1, j + c − 1)`; neighbors outside the image contribute zero.

use rayon::prelude::*;

use super::{GrayImage, Raster};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel(pub [[f64; 3]; 3]);

impl Kernel {
    pub fn identity() -> Self {
        Kernel([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    }

    pub fn sobel() -> Self {
        Kernel([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
    }

    pub fn scharr() -> Self {
        Kernel([[-3.0, 0.0, 3.0], [-10.0, 0.0, 10.0], [-3.0, 0.0, 3.0]])
    }

    pub fn prewitt() -> Self {
        Kernel([[-1.0, 0.0, 1.0]; 3])
    }

    pub fn bump() -> Self {
        Kernel([[-10.0, 0.0, 10.0], [0.0, 1.0, 0.0], [-10.0, 0.0, 10.0]])
    }

    pub fn ones() -> Self {
        Kernel([[1.0; 3]; 3])
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name.to_ascii_lowercase().as_str() {
            "sobel" => Self::sobel(),
            "scharr" => Self::scharr(),
            "prewitt" => Self::prewitt(),
            "bump" => Self::bump(),
            "identity" => Self::identity(),
            "ones" | "box" => Self::ones(),
            _ => return None,
        })
    }

    pub fn builtin() -> [(&'static str, Kernel); 4] {
        [("sobel", Self::sobel()), ("scharr", Self::scharr()), ("prewitt", Self::prewitt()), ("bump", Self::bump())]
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.0[r][c]
    }
}

/// Three rows of three numbers separated by whitespace or commas; `#` comments.
pub fn parse_kernel(text: &str) -> Result<Kernel> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::MalformedLine { line: i + 1, reason: format!("bad weight {s:?}") })
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != 3 {
            return Err(Error::MalformedLine { line: i + 1, reason: format!("expected 3 weights, found {}", vals.len()) });
        }
        if rows.len() == 3 {
            return Err(Error::MalformedLine { line: i + 1, reason: "more than 3 rows".into() });
        }
        rows.push([vals[0], vals[1], vals[2]]);
    }
    if rows.len() != 3 {
        return Err(Error::MalformedLine { line: 0, reason: format!("expected 3 rows, found {}", rows.len()) });
    }
    Ok(Kernel([rows[0], rows[1], rows[2]]))
}

fn neighbors(rows: usize, cols: usize, i: usize, j: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..3).flat_map(move |r| (0..3).map(move |c| (r, c))).filter_map(move |(r, c)| {
        let ni = (i + r).checked_sub(1).filter(|&v| v < rows)?;
        let nj = (j + c).checked_sub(1).filter(|&v| v < cols)?;
        Some((r, c, ni, nj))
    })
}

fn per_pixel(img: &GrayImage, f: impl Fn(usize, usize) -> f64 + Sync) -> Vec<f64> {
    let cols = img.cols();
    (0..img.rows() * cols).into_par_iter().map(|p| f(p / cols, p % cols)).collect()
}

/// `g_k(t) = (1/t) Σ a_{rc} f_m / t^m` over in-range neighbors `m`, where `m`
/// is the neighbor's 1-based column-major index. At `t = 1` this is the
/// weighted 3×3 sum; for other `t` the result depends on absolute position.
pub fn neighbor_filter_raw(img: &GrayImage, kernel: &Kernel, t: f64) -> Result<Raster> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} must be finite and nonzero")));
    }
    let rows = img.rows();
    let data = per_pixel(img, |i, j| {
        let mut acc = 0.0;
        for (r, c, ni, nj) in neighbors(rows, img.cols(), i, j) {
            let a = kernel.0[r][c];
            if a == 0.0 {
                continue;
            }
            let term = a * img.get(ni, nj);
            acc += if t == 1.0 { term } else { term / t.powf((nj * rows + ni + 1) as f64) };
        }
        acc / t
    });
    Raster::new(rows, img.cols(), data)
}

/// [`neighbor_filter_raw`] followed by a min-max rescale to `[0, 1]`.
pub fn neighbor_filter(img: &GrayImage, kernel: &Kernel, t: f64) -> Result<GrayImage> {
    Ok(neighbor_filter_raw(img, kernel, t)?.rescaled())
}

/// The same filter written as a driven DTT: neighbor `m` enters as
/// `f_m γ^m / t^m` with `γ = a^{1/m}`. Only defined for nonnegative weights.
pub fn gamma_encoded_filter(img: &GrayImage, kernel: &Kernel, t: f64) -> Result<Raster> {
    if kernel.0.iter().flatten().any(|&a| a < 0.0) {
        return Err(Error::Domain("fractional powers of negative weights are not defined".into()));
    }
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} must be finite and nonzero")));
    }
    let rows = img.rows();
    let data = per_pixel(img, |i, j| {
        let mut acc = 0.0;
        for (r, c, ni, nj) in neighbors(rows, img.cols(), i, j) {
            let m = (nj * rows + ni + 1) as i32;
            let gamma = kernel.0[r][c].powf(1.0 / m as f64);
            acc += img.get(ni, nj) * (gamma / t).powi(m);
        }
        acc / t
    });
    Raster::new(rows, img.cols(), data)
}

/// Mean over the in-range 3×3 neighborhood.
pub fn smooth(img: &GrayImage) -> GrayImage {
    let rows = img.rows();
    let data = per_pixel(img, |i, j| {
        let (s, n) = neighbors(rows, img.cols(), i, j).fold((0.0, 0usize), |(s, n), (_, _, ni, nj)| (s + img.get(ni, nj), n + 1));
        (s / n as f64).clamp(0.0, 1.0)
    });
    GrayImage::new(rows, img.cols(), data).expect("means of [0, 1] values stay in range")
}
