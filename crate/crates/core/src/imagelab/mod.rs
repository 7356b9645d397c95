//! Grayscale images as DTT inputs: column-major vectorization, blockwise
//! transform and recovery, 3×3 neighborhood filters, blending and noise.
//!
//! Pixel `(i, j)` is row `i`, column `j`, stored row-major at `i·cols + j`.
//! The vectorized index is column-major, `k = j·rows + i`.

pub mod filter;
pub mod pgm;

pub use filter::{
    gamma_encoded_filter, neighbor_filter, neighbor_filter_raw, parse_kernel, smooth, Kernel,
};
pub use pgm::{pgm_decode, pgm_encode, pgm_encode_plain, pgm_read, pgm_write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dtt::{dtt_driven, dttmi, Driver};
use crate::error::{Error, Result};
use crate::scalar::{real, Scalar, ONE};

pub const DEFAULT_BLOCK_LEN: usize = 10;

/// An `rows × cols` grid of unconstrained reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Raster {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::SizeMismatch(format!("dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch(format!("{} values for a {rows}x{cols} grid", data.len())));
        }
        Ok(Raster { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn clamped(&self) -> GrayImage {
        GrayImage { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.clamp(0.0, 1.0)).collect() }
    }

    /// Min-max rescale to `[0, 1]`; a flat raster is clamped instead.
    pub fn rescaled(&self) -> GrayImage {
        let (lo, hi) = self.data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        if !(hi > lo) || !(hi - lo).is_finite() {
            return self.clamped();
        }
        GrayImage { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| (v - lo) / (hi - lo)).collect() }
    }
}

/// Pixels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        let r = Raster::new(rows, cols, data)?;
        if let Some(p) = r.data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain(format!("pixel {p} = {} is outside [0, 1]", r.data[p])));
        }
        Ok(GrayImage { rows, cols, data: r.data })
    }

    pub fn constant(rows: usize, cols: usize, v: f64) -> Result<Self> {
        Self::new(rows, cols, vec![v; rows * cols])
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn to_raster(&self) -> Raster {
        Raster { rows: self.rows, cols: self.cols, data: self.data.clone() }
    }

    pub fn max_abs_diff(&self, other: &GrayImage) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Column stacking: entry `j·rows + i` holds pixel `(i, j)`.
pub fn vectorize(img: &GrayImage) -> Vec<f64> {
    let mut v = Vec::with_capacity(img.data.len());
    for j in 0..img.cols {
        for i in 0..img.rows {
            v.push(img.get(i, j));
        }
    }
    v
}

pub fn devectorize_raster(v: &[f64], rows: usize, cols: usize) -> Result<Raster> {
    if v.len() != rows * cols {
        return Err(Error::SizeMismatch(format!("{} values for a {rows}x{cols} image", v.len())));
    }
    let mut data = vec![0.0; v.len()];
    for j in 0..cols {
        for i in 0..rows {
            data[i * cols + j] = v[j * rows + i];
        }
    }
    Raster::new(rows, cols, data)
}

pub fn devectorize(v: &[f64], rows: usize, cols: usize) -> Result<GrayImage> {
    let r = devectorize_raster(v, rows, cols)?;
    GrayImage::new(r.rows, r.cols, r.data)
}

fn check_block(driver: &Driver, l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::SizeMismatch("block length must be positive".into()));
    }
    if driver.len() < l {
        return Err(Error::SizeMismatch(format!("driver has {} nodes, block length is {l}", driver.len())));
    }
    Ok(())
}

/// Splits the vectorized image into blocks of `l` and applies the driven DTT
/// at `t = 1` to each; a short final block uses the driver's leading nodes.
pub fn block_transform(img: &GrayImage, driver: &Driver, l: usize) -> Result<Vec<Scalar>> {
    check_block(driver, l)?;
    let v = vectorize(img);
    let blocks: Vec<Vec<Scalar>> = v
        .par_chunks(l)
        .map(|b| {
            let d = driver.prefix(b.len())?;
            let f: Vec<Scalar> = b.iter().map(|&x| real(x)).collect();
            dtt_driven(&f, &d, ONE)
        })
        .collect::<Result<_>>()?;
    Ok(blocks.concat())
}

/// Inverse of [`block_transform`]; recovered pixels are clamped to `[0, 1]`.
pub fn block_recover(v: &[Scalar], driver: &Driver, l: usize, rows: usize, cols: usize) -> Result<GrayImage> {
    check_block(driver, l)?;
    if v.len() != rows * cols {
        return Err(Error::SizeMismatch(format!("{} values for a {rows}x{cols} image", v.len())));
    }
    let blocks: Vec<Vec<f64>> = v
        .par_chunks(l)
        .map(|b| {
            let d = driver.prefix(b.len())?;
            Ok(dttmi(b, &d)?.f.into_iter().map(|z| z.re).collect())
        })
        .collect::<Result<_>>()?;
    Ok(devectorize_raster(&blocks.concat(), rows, cols)?.clamped())
}

/// `w·orig + (1 − w)·filtered`, clamped.
pub fn blend(orig: &GrayImage, filtered: &GrayImage, w: f64) -> Result<GrayImage> {
    if (orig.rows, orig.cols) != (filtered.rows, filtered.cols) {
        return Err(Error::SizeMismatch(format!(
            "{}x{} vs {}x{}",
            orig.rows, orig.cols, filtered.rows, filtered.cols
        )));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("weight {w} is outside [0, 1]")));
    }
    let data = orig.data.iter().zip(&filtered.data).map(|(o, f)| (w * o + (1.0 - w) * f).clamp(0.0, 1.0)).collect();
    Ok(GrayImage { rows: orig.rows, cols: orig.cols, data })
}

/// `X_k ~ N(0, σ²)` for each vectorized index `k`, drawn from its own
/// ChaCha stream so the field does not depend on evaluation order.
pub fn noise_field(len: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("σ = {sigma} must be a finite nonnegative number")));
    }
    if sigma == 0.0 {
        return Ok(vec![0.0; len]);
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?;
    Ok((0..len)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            normal.sample(&mut rng)
        })
        .collect())
}

/// Pixel `k` multiplied by `1 + X_k`, before clamping.
pub fn gaussian_noise_raw(img: &GrayImage, sigma: f64, seed: u64) -> Result<Raster> {
    let x = noise_field(img.data.len(), sigma, seed)?;
    let v: Vec<f64> = vectorize(img).iter().zip(&x).map(|(p, xk)| p * (1.0 + xk)).collect();
    devectorize_raster(&v, img.rows, img.cols)
}

pub fn gaussian_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    Ok(gaussian_noise_raw(img, sigma, seed)?.clamped())
}
