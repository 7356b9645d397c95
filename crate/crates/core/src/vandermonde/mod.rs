//! Vandermonde matrices `Γ_{ij} = γ_i^j`: construction, determinant, exact
//! inverse, an O(N²) solver, and Monte Carlo inverses.

pub mod mc;

pub use mc::{inv_mc, rect_inverse_mc, McConfig, McResult, Side};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ONE, ZERO};

#[derive(Debug, Clone, PartialEq)]
pub struct VMatrix {
    pub nodes: Vec<Scalar>,
    pub cols: usize,
}

impl VMatrix {
    pub fn rows(&self) -> usize {
        self.nodes.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        let mut p = ONE;
        for _ in 0..j {
            p *= self.nodes[i];
        }
        p
    }

    pub fn matrix(&self) -> DMatrix<Scalar> {
        let (n, p) = (self.rows(), self.cols);
        let mut m = DMatrix::from_element(n, p, ZERO);
        for i in 0..n {
            let mut pw = ONE;
            for j in 0..p {
                m[(i, j)] = pw;
                pw *= self.nodes[i];
            }
        }
        m
    }

    pub fn is_real(&self) -> bool {
        self.nodes.iter().all(|z| z.im == 0.0)
    }

    /// Real matrix; callers check [`VMatrix::is_real`] first.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        self.matrix().map(|z| z.re)
    }
}

/// Vandermonde matrix with powers built by repeated multiplication.
pub fn build(nodes: &[Scalar], cols: usize) -> Result<VMatrix> {
    if cols < 1 {
        return Err(Error::Domain("a Vandermonde matrix needs at least one column".into()));
    }
    Ok(VMatrix { nodes: nodes.to_vec(), cols })
}

/// `det Γ_N = Π_{i<j} (γ_j - γ_i)`.
pub fn det(nodes: &[Scalar]) -> Scalar {
    let mut d = ONE;
    for j in 0..nodes.len() {
        for i in 0..j {
            d *= nodes[j] - nodes[i];
        }
    }
    d
}

fn check_distinct(nodes: &[Scalar]) -> Result<()> {
    for j in 0..nodes.len() {
        for i in 0..j {
            if nodes[i] == nodes[j] {
                return Err(Error::SingularMatrix(format!("nodes {i} and {j} coincide")));
            }
        }
    }
    Ok(())
}

/// Leja ordering: start at the largest node, then greedily maximize the
/// product of distances to the nodes already chosen.
pub fn leja_order(nodes: &[Scalar]) -> Vec<usize> {
    let n = nodes.len();
    let mut order = Vec::with_capacity(n);
    if n == 0 {
        return order;
    }
    let mut used = vec![false; n];
    let first = (0..n).fold(0, |b, i| if nodes[i].norm() > nodes[b].norm() { i } else { b });
    order.push(first);
    used[first] = true;
    let mut score = vec![0.0f64; n];
    let mut last = first;
    for _ in 1..n {
        let mut best = usize::MAX;
        for i in 0..n {
            if used[i] {
                continue;
            }
            score[i] += (nodes[i] - nodes[last]).norm().ln();
            if best == usize::MAX || score[i] > score[best] {
                best = i;
            }
        }
        used[best] = true;
        order.push(best);
        last = best;
    }
    order
}

#[derive(Debug, Clone)]
pub struct ExactInverse {
    pub inverse: DMatrix<Scalar>,
    /// `‖Γ Γ⁻¹ − I‖_∞`.
    pub residual: f64,
}

/// Γ⁻¹ from the Lagrange basis: column `j` holds the monomial coefficients
/// of `ℓ_j(x) = Π_{m≠j} (x − γ_m)/(γ_j − γ_m)`.
pub fn inv_exact(nodes: &[Scalar]) -> Result<ExactInverse> {
    check_distinct(nodes)?;
    let n = nodes.len();
    let order = leja_order(nodes);
    let mut inv = DMatrix::from_element(n, n, ZERO);
    let mut poly = Vec::with_capacity(n);
    for j in 0..n {
        poly.clear();
        poly.push(ONE);
        let mut denom = ONE;
        for &m in order.iter().filter(|&&m| m != j) {
            // poly *= (x - γ_m)
            poly.push(ZERO);
            for i in (0..poly.len()).rev() {
                let lower = if i > 0 { poly[i - 1] } else { ZERO };
                poly[i] = lower - nodes[m] * poly[i];
            }
            denom *= nodes[j] - nodes[m];
        }
        for (i, c) in poly.iter().enumerate() {
            inv[(i, j)] = c / denom;
        }
    }
    let residual = residual_inf(&build(nodes, n.max(1))?.matrix(), &inv);
    Ok(ExactInverse { inverse: inv, residual })
}

/// `‖A B − I‖_∞` (max absolute row sum).
pub fn residual_inf(a: &DMatrix<Scalar>, b: &DMatrix<Scalar>) -> f64 {
    let mut p = a * b;
    for i in 0..p.nrows().min(p.ncols()) {
        p[(i, i)] -= ONE;
    }
    norm_inf(&p)
}

pub fn norm_inf(m: &DMatrix<Scalar>) -> f64 {
    m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `Γ c = rhs` (polynomial interpolation) with the Björck–Pereyra
/// algorithm on Leja-ordered nodes. O(N²), no inverse formed.
pub fn solve(nodes: &[Scalar], rhs: &[Scalar]) -> Result<Vec<Scalar>> {
    if rhs.len() != nodes.len() {
        return Err(Error::LengthMismatch { expected: nodes.len(), got: rhs.len() });
    }
    check_distinct(nodes)?;
    let order = leja_order(nodes);
    let x: Vec<Scalar> = order.iter().map(|&i| nodes[i]).collect();
    let mut c: Vec<Scalar> = order.iter().map(|&i| rhs[i]).collect();
    let n = x.len();
    // Newton divided differences.
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k - 1]);
        }
    }
    // Newton form to monomial coefficients.
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            let next = c[i + 1];
            c[i] -= x[k] * next;
        }
    }
    Ok(c)
}
