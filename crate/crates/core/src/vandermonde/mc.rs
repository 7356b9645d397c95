//! Monte Carlo Vandermonde inverses from Gaussian sample covariances.
//!
//! Samples `X = Γ z` with `z ~ N(0, I)` have covariance `Γ Γᵀ`, so
//! `Γᵀ S⁺ → Γ⁻¹` as the sample count grows.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::VMatrix;
use crate::error::{Error, Result};

/// Relative eigenvalue cutoff for the pseudo-inverse of `S`.
pub const PINV_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Samples per RNG stream; fixes the work split independent of thread count.
    pub chunk: usize,
    /// Scale `S⁺` by `(p − r − 2)/p` when `S` has numerical rank `r < p − 2`.
    pub rank_adjusted: bool,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        McConfig { samples, seed, chunk: 1 << 14, rank_adjusted: false }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Domain("need at least two samples".into()));
        }
        if self.chunk == 0 {
            return Err(Error::Domain("chunk must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct McResult {
    pub inverse: DMatrix<f64>,
    pub covariance: DMatrix<f64>,
    /// `‖S − Γ Γᵀ‖_F`.
    pub d1: f64,
    /// `‖S − Γᵀ Γ‖_F`, logged alongside `d1`.
    pub d1_transposed: f64,
    /// `‖Γ − Γ Γ⁺ Γ‖_F` with `Γ⁺ = Γᵀ S⁺`.
    pub d2: f64,
    pub rank: usize,
}

/// Welford state for one chunk; `m2` holds the upper triangle.
struct Moments {
    n: f64,
    mean: DVector<f64>,
    m2: DMatrix<f64>,
}

impl Moments {
    fn empty(p: usize) -> Self {
        Moments { n: 0.0, mean: DVector::zeros(p), m2: DMatrix::zeros(p, p) }
    }

    /// Chan et al. pairwise merge.
    fn merge(mut self, other: Moments) -> Moments {
        if other.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return other;
        }
        let n = self.n + other.n;
        let delta = &other.mean - &self.mean;
        let f = self.n * other.n / n;
        let p = delta.len();
        for j in 0..p {
            for i in 0..=j {
                self.m2[(i, j)] += other.m2[(i, j)] + f * delta[i] * delta[j];
            }
        }
        self.mean += delta * (other.n / n);
        self.n = n;
        self
    }
}

/// Sample covariance of `factor · z`, `z ~ N(0, I_k)`, `factor` being `p × k`.
fn sample_covariance(factor: &DMatrix<f64>, cfg: &McConfig) -> DMatrix<f64> {
    let (p, k) = factor.shape();
    let chunks = cfg.samples.div_ceil(cfg.chunk);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let count = cfg.chunk.min(cfg.samples - c * cfg.chunk);
            let mut st = Moments::empty(p);
            let mut z = DVector::<f64>::zeros(k);
            let mut x = DVector::<f64>::zeros(p);
            let mut delta = DVector::<f64>::zeros(p);
            for _ in 0..count {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(&mut rng);
                }
                factor.mul_to(&z, &mut x);
                st.n += 1.0;
                delta.copy_from(&x);
                delta -= &st.mean;
                st.mean.axpy(1.0 / st.n, &delta, 1.0);
                for j in 0..p {
                    let dj = x[j] - st.mean[j];
                    for i in 0..=j {
                        st.m2[(i, j)] += delta[i] * dj;
                    }
                }
            }
            st
        })
        .collect();
    let total = parts.into_iter().fold(Moments::empty(p), Moments::merge);
    let mut s = total.m2 / (total.n - 1.0);
    for j in 0..p {
        for i in 0..j {
            s[(j, i)] = s[(i, j)];
        }
    }
    s
}

/// Moore–Penrose inverse of a symmetric matrix, with its numerical rank.
fn pinv_sym(s: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let eig = SymmetricEigen::new(s.clone());
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let cut = PINV_CUTOFF * lmax;
    let mut rank = 0;
    let inv_vals = eig.eigenvalues.map(|l| {
        if l.abs() > cut && l != 0.0 {
            rank += 1;
            1.0 / l
        } else {
            0.0
        }
    });
    let q = &eig.eigenvectors;
    (q * DMatrix::from_diagonal(&inv_vals) * q.transpose(), rank)
}

fn adjusted(s_pinv: DMatrix<f64>, rank: usize, cfg: &McConfig) -> DMatrix<f64> {
    let p = s_pinv.nrows();
    if cfg.rank_adjusted && rank + 2 < p {
        s_pinv * ((p - rank - 2) as f64 / p as f64)
    } else {
        s_pinv
    }
}

fn real_nodes_matrix(nodes: &[f64], cols: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nodes.len(), cols);
    for (i, &x) in nodes.iter().enumerate() {
        let mut pw = 1.0;
        for j in 0..cols {
            m[(i, j)] = pw;
            pw *= x;
        }
    }
    m
}

fn distinct_count(nodes: &[f64]) -> usize {
    let mut v = nodes.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v.len()
}

/// Monte Carlo estimate `Γᵀ S⁺` of the inverse of the square Vandermonde
/// matrix on real `nodes`.
pub fn inv_mc(nodes: &[f64], cfg: &McConfig) -> Result<McResult> {
    cfg.validate()?;
    let n = nodes.len();
    if n == 0 {
        return Err(Error::Domain("empty node vector".into()));
    }
    if distinct_count(nodes) != n {
        return Err(Error::SingularMatrix("duplicate nodes".into()));
    }
    let g = real_nodes_matrix(nodes, n);
    let s = sample_covariance(&g, cfg);
    let (s_pinv, rank) = pinv_sym(&s);
    let s_pinv = adjusted(s_pinv, rank, cfg);
    let inverse = g.transpose() * &s_pinv;
    let ggt = &g * g.transpose();
    let gtg = g.transpose() * &g;
    let d1 = (&s - ggt).norm();
    let d1_transposed = (&s - gtg).norm();
    let d2 = (&g - &g * &inverse * &g).norm();
    Ok(McResult { inverse, covariance: s, d1, d1_transposed, d2, rank })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `(XᵀX)⁻¹Xᵀ`, needs full column rank.
    Left,
    /// `Xᵀ(XXᵀ)⁻¹`, needs full row rank.
    Right,
}

/// Monte Carlo one-sided inverse of a rectangular real Vandermonde matrix.
pub fn rect_inverse_mc(x: &VMatrix, side: Side, cfg: &McConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    if !x.is_real() {
        return Err(Error::Domain("Monte Carlo inverses need real nodes".into()));
    }
    let nodes: Vec<f64> = x.nodes.iter().map(|z| z.re).collect();
    let (n, p) = (x.rows(), x.cols);
    let distinct = distinct_count(&nodes);
    let m = real_nodes_matrix(&nodes, p);
    match side {
        Side::Left => {
            if p > n || distinct < p {
                return Err(Error::RankDeficient(format!("{n}×{p} with {distinct} distinct nodes lacks full column rank")));
            }
            let s = sample_covariance(&m.transpose(), cfg);
            let (sp, rank) = pinv_sym(&s);
            Ok(adjusted(sp, rank, cfg) * m.transpose())
        }
        Side::Right => {
            if n > p || distinct < n {
                return Err(Error::RankDeficient(format!("{n}×{p} with {distinct} distinct nodes lacks full row rank")));
            }
            let s = sample_covariance(&m, cfg);
            let (sp, rank) = pinv_sym(&s);
            Ok(m.transpose() * adjusted(sp, rank, cfg))
        }
    }
}
