//! The discrete Taylor transform `𝒯_γ^s(t) = (1/t) Σ s_n (γ/t)^n`, its
//! driven form `g_k = 𝒯_{γ_k}^f(t)` and the inverse systems.

pub mod quadrature;
pub mod recurrence;

pub use quadrature::{dtt_polynomial, hadamard_dtt, invert_by_coeffs, invert_by_contour};
pub use recurrence::{closed_form_dtt, recurrence_dtt_residual, ClosedForm, Recurrence, RecurrenceReport};

use crate::error::{Error, Result};
use crate::scalar::{Neumaier, Scalar, ONE, ZERO};
use crate::taylor::{taylor_integral, Estimate, IndexSet, Sequence, TaylorMeasure};
use crate::vandermonde;

/// Condition estimate above which [`dttmi`] flags the result.
pub const ILL_CONDITIONED: f64 = 1e12;
pub const DEFAULT_IDTT_TOL: f64 = 1e-9;

/// Distinct, nonzero driving nodes `γ_0..γ_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Driver {
    nodes: Vec<Scalar>,
}

impl Driver {
    pub fn new(nodes: Vec<Scalar>) -> Result<Self> {
        for (i, z) in nodes.iter().enumerate() {
            if *z == ZERO {
                return Err(Error::InvalidDriver(format!("node {i} is zero")));
            }
            if !crate::scalar::is_finite(*z) {
                return Err(Error::InvalidDriver(format!("node {i} is not finite")));
            }
            if let Some(j) = nodes[..i].iter().position(|w| w == z) {
                return Err(Error::InvalidDriver(format!("nodes {j} and {i} coincide")));
            }
        }
        Ok(Driver { nodes })
    }

    pub fn from_reals(v: &[f64]) -> Result<Self> {
        Self::new(crate::scalar::reals(v))
    }

    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.nodes.iter().all(|z| z.im == 0.0)
    }

    /// The first `n` nodes.
    pub fn prefix(&self, n: usize) -> Result<Driver> {
        if n > self.len() {
            return Err(Error::LengthMismatch { expected: n, got: self.len() });
        }
        Ok(Driver { nodes: self.nodes[..n].to_vec() })
    }
}

/// `(1/t) Σ_{n∈B} s_n (γ/t)^n`, as the Taylor integral with `a_n(t) = n!/t^{n+1}`.
pub fn dtt_point(s: &Sequence, gamma: Scalar, t: Scalar, b: &IndexSet) -> Result<Estimate> {
    if t == ZERO {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    if gamma == ZERO {
        return Err(Error::Domain("γ must be nonzero".into()));
    }
    if !b.is_finite() && t.norm() <= gamma.norm() {
        return Err(Error::Domain(format!("infinite support needs |t| > |γ|, got |t| = {}, |γ| = {}", t.norm(), gamma.norm())));
    }
    let m = TaylorMeasure::dtt(gamma, t, b.clone());
    taylor_integral(s, &m, b)
}

/// DTT of a finite slice over its full index range.
pub fn dtt_finite(f: &[Scalar], gamma: Scalar, t: Scalar) -> Result<Scalar> {
    Ok(dtt_point(&Sequence::finite(f.to_vec()), gamma, t, &IndexSet::Prefix(f.len()))?.value)
}

/// `g_k(t) = (1/t) Σ_{n<N} f_n (γ_k/t)^n` for every node.
pub fn dtt_driven(f: &[Scalar], driver: &Driver, t: Scalar) -> Result<Vec<Scalar>> {
    if f.len() != driver.len() {
        return Err(Error::LengthMismatch { expected: driver.len(), got: f.len() });
    }
    if t == ZERO {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let inv_t = t.inv();
    Ok(driver
        .nodes
        .iter()
        .map(|&g| {
            let x = g * inv_t;
            let mut acc = Neumaier::new();
            let mut p = ONE;
            for &fn_ in f {
                acc.add(fn_ * p);
                p *= x;
            }
            acc.value() * inv_t
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct DttmiResult {
    pub f: Vec<Scalar>,
    /// `‖Γ‖_∞ ‖Γ⁻¹‖_∞`.
    pub condition: f64,
    pub ill_conditioned: bool,
}

/// `Γ_N⁻¹ g`, solved without forming the inverse; the condition estimate
/// comes from the exact inverse.
pub fn dttmi(g: &[Scalar], driver: &Driver) -> Result<DttmiResult> {
    if g.len() != driver.len() {
        return Err(Error::LengthMismatch { expected: driver.len(), got: g.len() });
    }
    let f = vandermonde::solve(&driver.nodes, g)?;
    let condition = condition_inf(driver)?;
    Ok(DttmiResult { f, condition, ill_conditioned: condition > ILL_CONDITIONED })
}

pub fn condition_inf(driver: &Driver) -> Result<f64> {
    let n = driver.len();
    if n == 0 {
        return Ok(1.0);
    }
    let gm = vandermonde::build(&driver.nodes, n)?.matrix();
    let inv = vandermonde::inv_exact(&driver.nodes)?.inverse;
    Ok(vandermonde::norm_inf(&gm) * vandermonde::norm_inf(&inv))
}

/// Inverse data `(ξ, w)` with `Σ_k γ_k^l ξ_n^k = w_n δ_{nl}`.
#[derive(Debug, Clone)]
pub struct InverseSystem {
    pub xi: Vec<Scalar>,
    pub weights: Vec<Scalar>,
    /// `max_{n,l} |Σ_k γ_k^l ξ_n^k − w_n δ_{nl}|`.
    pub residual: f64,
    /// Largest `|ψ_{n,k} − ψ_{n,0} ξ_n^k|`.
    pub structure_abs: f64,
    /// Same, relative to the largest entry of row `n`.
    pub structure_rel: f64,
}

impl InverseSystem {
    /// `f_n = (1/w_n) Σ_k g_k ξ_n^k`.
    pub fn idtt(&self, g: &[Scalar]) -> Result<Vec<Scalar>> {
        if g.len() != self.xi.len() {
            return Err(Error::LengthMismatch { expected: self.xi.len(), got: g.len() });
        }
        Ok(self
            .xi
            .iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| {
                let mut acc = Neumaier::new();
                let mut p = ONE;
                for &gk in g {
                    acc.add(gk * p);
                    p *= xi;
                }
                acc.value() / w
            })
            .collect())
    }
}

/// Builds `(ξ, w)` from `Ψ = Γ_N⁻¹` with `w_n = 1/ψ_{n,0}`, `ξ_n = ψ_{n,1}/ψ_{n,0}`,
/// after checking `ψ_{n,k} = ψ_{n,1}^k ψ_{n,0}^{1−k}` to relative tolerance `tol`.
pub fn idtt_system(driver: &Driver, tol: f64) -> Result<InverseSystem> {
    let n = driver.len();
    let psi = vandermonde::inv_exact(&driver.nodes)?.inverse;
    let mut xi = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let (mut abs, mut rel) = (0.0f64, 0.0f64);
    for r in 0..n {
        let p0 = psi[(r, 0)];
        if p0 == ZERO {
            return Err(Error::ZeroPivot { row: r });
        }
        // With one node any ξ satisfies the conditions; 1 matches the unity case.
        let x = if n > 1 { psi[(r, 1)] / p0 } else { ONE };
        let row_max = (0..n).map(|k| psi[(r, k)].norm()).fold(0.0, f64::max);
        let mut pw = ONE;
        for k in 0..n {
            let d = (psi[(r, k)] - p0 * pw).norm();
            abs = abs.max(d);
            rel = rel.max(d / row_max);
            pw *= x;
        }
        xi.push(x);
        weights.push(p0.inv());
    }
    if !(rel <= tol) {
        return Err(Error::NoVandermondeStructure { abs, rel });
    }
    let mut residual = 0.0f64;
    for nn in 0..n {
        for l in 0..n {
            let mut acc = Neumaier::new();
            let mut xp = ONE;
            for k in 0..n {
                acc.add(driver.nodes[k].powu(l as u32) * xp);
                xp *= xi[nn];
            }
            let want = if nn == l { weights[nn] } else { ZERO };
            residual = residual.max((acc.value() - want).norm());
        }
    }
    let wmax = weights.iter().map(|w| w.norm()).fold(1.0, f64::max);
    if residual > tol * wmax * n.max(1) as f64 {
        return Err(Error::NoVandermondeStructure { abs, rel: residual / wmax });
    }
    Ok(InverseSystem { xi, weights, residual, structure_abs: abs, structure_rel: rel })
}

#[derive(Debug, Clone)]
pub struct N3Driver {
    pub driver: Driver,
    /// Residuals of the three defining equations, in order.
    pub residuals: [Scalar; 3],
}

/// The N = 3 construction: `γ_2 = γ_0^{1/3}` and
/// `γ_1 = (γ_2(γ_2+γ_0)² − γ_0)/(1 − (γ_2+γ_0)²)`.
///
/// Real input takes the real cube root; complex input the principal branch.
/// The three defining residuals are reported, not asserted.
pub fn n3_driver(gamma0: Scalar) -> Result<N3Driver> {
    let g0 = gamma0;
    if g0 == ZERO || g0 == ONE {
        return Err(Error::Domain(format!("γ_0 = {g0} is excluded")));
    }
    let g2 = if g0.im == 0.0 { Scalar::new(g0.re.cbrt(), 0.0) } else { g0.powf(1.0 / 3.0) };
    let s = g2 + g0;
    let denom = ONE - s * s;
    if denom.norm() < 1e-12 {
        return Err(Error::Domain("γ_0^{1/3} + γ_0 = ±1 makes γ_1 undefined".into()));
    }
    let g1 = (g2 * s * s - g0) / denom;
    if g1.norm() < 1e-12 {
        return Err(Error::Domain("(γ_0^{1/3} + γ_0)² = γ_0^{2/3} makes γ_1 vanish".into()));
    }
    let driver = Driver::new(vec![g0, g1, g2]).map_err(|e| Error::Domain(e.to_string()))?;
    let d10 = g1 - g0;
    let lhs = d10 * d10 * d10 * (g2 - g1);
    let r1 = lhs - g0 * g2 * g2 * g2;
    let r2 = (g1 + g0) - (g2 + g1) * (g2 + g0) * (g2 + g0) / lhs;
    let r3 = lhs - ONE;
    Ok(N3Driver { driver, residuals: [r1, r2, r3] })
}
