//! Taylor measures and the Taylor integral.
//!
//! A Taylor measure places mass `a_n γ^n / n!` on the natural number `n`.
//! Integrating a sequence `s` against it gives `Σ s_n a_n γ^n / n!`.

pub mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Neumaier, Scalar, ONE, ZERO};

/// Default cutoff for factorial-weighted series.
pub const DEFAULT_CUTOFF: usize = 200;
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

const RATIO_MARGIN: f64 = 1e-6;
const RATIO_SLACK: f64 = 1e-9;
const GEOMETRIC_SPREAD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum IndexSet {
    /// Sorted, duplicate-free naturals.
    Explicit(Vec<usize>),
    /// `{0, .., n-1}`.
    Prefix(usize),
    /// All of ℕ, summed over `0..cutoff` with a certified tail.
    Truncated { cutoff: usize, tail_tol: f64 },
}

impl IndexSet {
    pub fn explicit(mut v: Vec<usize>) -> Result<Self> {
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIndexSet("duplicate index".into()));
        }
        Ok(IndexSet::Explicit(v))
    }

    pub fn truncated(cutoff: usize, tail_tol: f64) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidIndexSet("cutoff must be at least 1".into()));
        }
        if !(tail_tol > 0.0 && tail_tol.is_finite()) {
            return Err(Error::InvalidIndexSet("tail tolerance must be positive".into()));
        }
        Ok(IndexSet::Truncated { cutoff, tail_tol })
    }

    pub fn naturals() -> Self {
        IndexSet::Truncated { cutoff: DEFAULT_CUTOFF, tail_tol: DEFAULT_TAIL_TOL }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, IndexSet::Truncated { .. })
    }

    /// Indices that are summed explicitly, ascending.
    pub fn indices(&self) -> Vec<usize> {
        match self {
            IndexSet::Explicit(v) => v.clone(),
            IndexSet::Prefix(n) => (0..*n).collect(),
            IndexSet::Truncated { cutoff, .. } => (0..*cutoff).collect(),
        }
    }

    /// One past the largest summed index.
    pub fn extent(&self) -> usize {
        match self {
            IndexSet::Explicit(v) => v.last().map_or(0, |&m| m + 1),
            IndexSet::Prefix(n) => *n,
            IndexSet::Truncated { cutoff, .. } => *cutoff,
        }
    }

    pub fn contains(&self, n: usize) -> bool {
        match self {
            IndexSet::Explicit(v) => v.binary_search(&n).is_ok(),
            IndexSet::Prefix(m) => n < *m,
            IndexSet::Truncated { .. } => true,
        }
    }
}

type Rule = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;

#[derive(Clone)]
enum Base {
    Finite(Arc<[Scalar]>),
    Rule(Rule),
}

/// A sequence stored as `r_n · (n!)^k · ρ^n`.
///
/// Keeping the factorial power and geometric factor symbolic lets sequences
/// such as `n!/γ^n` be combined with Taylor weights without overflow.
/// Finite bases are zero beyond their length.
#[derive(Clone)]
pub struct Sequence {
    base: Base,
    fact_power: i32,
    geometric: Scalar,
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Sequence");
        match &self.base {
            Base::Finite(v) => d.field("finite", &v.len()),
            Base::Rule(_) => d.field("rule", &"<fn>"),
        };
        d.field("fact_power", &self.fact_power).field("geometric", &self.geometric).finish()
    }
}

impl Sequence {
    pub fn finite(v: impl Into<Vec<Scalar>>) -> Self {
        let v: Vec<Scalar> = v.into();
        Sequence { base: Base::Finite(v.into()), fact_power: 0, geometric: ONE }
    }

    pub fn from_reals(v: &[f64]) -> Self {
        Self::finite(crate::scalar::reals(v))
    }

    pub fn rule(f: impl Fn(usize) -> Scalar + Send + Sync + 'static) -> Self {
        Sequence { base: Base::Rule(Arc::new(f)), fact_power: 0, geometric: ONE }
    }

    pub fn constant(z: Scalar) -> Self {
        Self::rule(move |_| z)
    }

    pub fn ones() -> Self {
        Self::constant(ONE)
    }

    /// `n!`.
    pub fn factorial() -> Self {
        Self::ones().with_factorial_power(1)
    }

    /// Multiplies by `(n!)^k`.
    pub fn with_factorial_power(mut self, k: i32) -> Self {
        self.fact_power += k;
        self
    }

    /// Multiplies by `ρ^n`.
    pub fn with_geometric(mut self, rho: Scalar) -> Self {
        self.geometric *= rho;
        self
    }

    pub fn fact_power(&self) -> i32 {
        self.fact_power
    }

    pub fn geometric(&self) -> Scalar {
        self.geometric
    }

    pub fn finite_len(&self) -> Option<usize> {
        match &self.base {
            Base::Finite(v) => Some(v.len()),
            Base::Rule(_) => None,
        }
    }

    /// The reduced value `r_n`.
    pub fn base(&self, n: usize) -> Scalar {
        match &self.base {
            Base::Finite(v) => v.get(n).copied().unwrap_or(ZERO),
            Base::Rule(f) => f(n),
        }
    }

    /// The full value `r_n (n!)^k ρ^n`; may overflow for large `n`.
    pub fn get(&self, n: usize) -> Scalar {
        let r = self.base(n);
        if r == ZERO {
            return ZERO;
        }
        let mut f = 1.0f64;
        for m in 2..=n {
            f *= m as f64;
        }
        r * f.powi(self.fact_power) * self.geometric.powu(n as u32)
    }

    /// Elementwise product.
    pub fn mul(&self, other: &Sequence) -> Sequence {
        let base = match (&self.base, &other.base) {
            (Base::Finite(a), Base::Finite(b)) => {
                let v: Vec<Scalar> = a.iter().zip(b.iter()).map(|(x, y)| x * y).collect();
                Base::Finite(v.into())
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Base::Rule(Arc::new(move |n| a.base(n) * b.base(n)))
            }
        };
        Sequence {
            base,
            fact_power: self.fact_power + other.fact_power,
            geometric: self.geometric * other.geometric,
        }
    }

    /// Elementwise modulus.
    pub fn abs(&self) -> Sequence {
        let base = match &self.base {
            Base::Finite(v) => {
                let w: Vec<Scalar> = v.iter().map(|z| Scalar::new(z.norm(), 0.0)).collect();
                Base::Finite(w.into())
            }
            Base::Rule(_) => {
                let a = self.clone();
                Base::Rule(Arc::new(move |n| Scalar::new(a.base(n).norm(), 0.0)))
            }
        };
        Sequence {
            base,
            fact_power: self.fact_power,
            geometric: Scalar::new(self.geometric.norm(), 0.0),
        }
    }

    /// The shift `τ(s)_n = s_{n+1}`.
    pub fn shift(&self) -> Sequence {
        let k = self.fact_power;
        let rho = self.geometric;
        let base = match &self.base {
            Base::Finite(v) if k == 0 => {
                let w: Vec<Scalar> = v.iter().skip(1).map(|z| z * rho).collect();
                Base::Finite(w.into())
            }
            _ => {
                let a = self.clone();
                Base::Rule(Arc::new(move |n| {
                    a.base(n + 1) * ((n + 1) as f64).powi(k) * rho
                }))
            }
        };
        Sequence { base, fact_power: k, geometric: rho }
    }
}

#[derive(Debug, Clone)]
pub struct TaylorMeasure {
    pub gamma: Scalar,
    pub coeffs: Sequence,
    pub support: IndexSet,
}

impl TaylorMeasure {
    pub fn new(gamma: Scalar, coeffs: Sequence, support: IndexSet) -> Self {
        TaylorMeasure { gamma, coeffs, support }
    }

    pub fn with_coeffs(&self, coeffs: Sequence) -> Self {
        TaylorMeasure { gamma: self.gamma, coeffs, support: self.support.clone() }
    }

    /// The DTT integrator: `a_n(t) = n! / t^{n+1}`.
    pub fn dtt(gamma: Scalar, t: Scalar, support: IndexSet) -> Self {
        let inv_t = t.inv();
        let coeffs = Sequence::constant(inv_t).with_factorial_power(1).with_geometric(inv_t);
        TaylorMeasure { gamma, coeffs, support }
    }
}

/// Which condition certified convergence of a truncated sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convergence {
    /// `|s_n a_n| ≤ M` over the probe window.
    Bounded { m: f64 },
    /// `|s_n a_n| = M α^n` over the probe window.
    Geometric { alpha: f64 },
    /// Ratio test with the empirical limit at the end of the window.
    Ratio(f64),
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    Finite,
    Bounded,
    Geometric,
    Ratio,
    /// Real alternating terms of decreasing modulus.
    Alternating,
    /// A closed-form bound supplied by the caller (series module).
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Scalar,
    pub tail_bound: f64,
    pub certificate: Certificate,
}

/// Walks `T_n = s_n a_n γ^n / n!` for `n = 0..len`, with the weight
/// `(n!)^{K-1} (ργ)^n` built incrementally.
pub(crate) fn terms(q: &Sequence, gamma: Scalar, len: usize) -> Vec<Scalar> {
    let step = q.geometric * gamma;
    let kk = q.fact_power - 1;
    let mut w = ONE;
    let mut out = Vec::with_capacity(len);
    for n in 0..len {
        if n > 0 {
            w *= step;
            if kk != 0 {
                w *= (n as f64).powi(kk);
            }
        }
        let r = q.base(n);
        out.push(if r == ZERO { ZERO } else { r * w });
    }
    out
}

fn sum_over(t: &[Scalar], b: &IndexSet) -> Scalar {
    let mut acc = Neumaier::new();
    match b {
        IndexSet::Explicit(v) => v.iter().for_each(|&n| acc.add(t[n])),
        _ => t.iter().for_each(|&z| acc.add(z)),
    }
    acc.value()
}

fn ln_factorials(upto: usize) -> Vec<f64> {
    let mut lf = Vec::with_capacity(upto + 1);
    lf.push(0.0);
    for n in 1..=upto {
        lf.push(lf[n - 1] + (n as f64).ln());
    }
    lf
}

/// `ln |q_n|` for `n = 0..=upto`, using the symbolic factorial and geometric parts.
fn ln_magnitudes(q: &Sequence, lf: &[f64], upto: usize) -> Vec<f64> {
    let lrho = q.geometric.norm().ln();
    let k = q.fact_power as f64;
    (0..=upto)
        .map(|n| {
            let r = q.base(n).norm();
            if r == 0.0 {
                f64::NEG_INFINITY
            } else {
                let nr = if n == 0 { 0.0 } else { n as f64 * lrho };
                r.ln() + k * lf[n] + nr
            }
        })
        .collect()
}

fn ln_diff(a: f64, b: f64) -> f64 {
    // ln|q_{n+1}| - ln|q_n| with the zero cases resolved.
    match (a == f64::NEG_INFINITY, b == f64::NEG_INFINITY) {
        (true, true) => f64::NEG_INFINITY,
        (false, true) => f64::INFINITY,
        (true, false) => f64::NEG_INFINITY,
        _ => a - b,
    }
}

/// Classifies convergence of `Σ q_n γ^n/n!` from samples on `cutoff/2..=cutoff`,
/// and returns the matching tail bound for `Σ_{n ≥ cutoff}`.
fn certify(q: &Sequence, gamma: Scalar, cutoff: usize) -> (Convergence, f64) {
    let c = cutoff.max(2);
    let lf = ln_factorials(c + 1);
    let lu = ln_magnitudes(q, &lf, c + 1);
    let lg = gamma.norm().ln();
    let g = gamma.norm();
    let lo = c / 2;
    let split = (3 * c) / 4;

    // ln |T_c|
    let lt_c = if lu[c] == f64::NEG_INFINITY { f64::NEG_INFINITY } else { lu[c] + c as f64 * lg - lf[c] };

    let m_early = lu[..=split].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let m_late = lu[split + 1..=c + 1].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m_late <= m_early {
        let m = m_early.exp();
        let denom = 1.0 - g / (c as f64 + 1.0);
        let bound = if m == 0.0 || g == 0.0 {
            0.0
        } else if denom <= 0.0 {
            f64::INFINITY
        } else {
            (m_early + c as f64 * lg - lf[c]).exp() / denom
        };
        return (Convergence::Bounded { m }, bound);
    }

    let d: Vec<f64> = (lo..=c).map(|n| ln_diff(lu[n + 1], lu[n])).collect();
    if d.iter().all(|x| x.is_finite()) {
        let (dmin, dmax) = d.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        if dmax - dmin <= GEOMETRIC_SPREAD {
            let alpha = (0.5 * (dmin + dmax)).exp();
            let denom = 1.0 - alpha * g / (c as f64 + 1.0);
            let bound = if denom <= 0.0 { f64::INFINITY } else { lt_c.exp() / denom };
            return (Convergence::Geometric { alpha }, bound);
        }
    }

    let ratios: Vec<f64> = (lo..=c)
        .zip(&d)
        .map(|(n, &dn)| {
            if dn == f64::NEG_INFINITY || g == 0.0 {
                0.0
            } else {
                (lg + dn - ((n + 1) as f64).ln()).exp()
            }
        })
        .collect();
    let below = ratios.iter().all(|&r| r < 1.0 - RATIO_MARGIN);
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0] + RATIO_SLACK);
    if below && monotone {
        let limit = *ratios.last().unwrap();
        let bound = lt_c.exp() / (1.0 - limit);
        return (Convergence::Ratio(limit), bound);
    }
    (Convergence::Inconclusive, f64::INFINITY)
}

/// Real, sign-alternating, non-increasing terms on the probe window.
fn alternating_bound(t: &[Scalar], cutoff: usize) -> Option<f64> {
    let window = &t[cutoff / 2..=cutoff];
    if window.iter().any(|z| z.im != 0.0 || z.re == 0.0) {
        return None;
    }
    let alternates = window.windows(2).all(|w| (w[0].re > 0.0) != (w[1].re > 0.0));
    let shrinks = window.windows(2).all(|w| w[1].re.abs() <= w[0].re.abs());
    (alternates && shrinks).then(|| t[cutoff].re.abs())
}

/// Convergence certificate for `Σ s_n a_n γ^n/n!`.
///
/// Uses the measure's cutoff when its support is truncated, otherwise
/// [`DEFAULT_CUTOFF`].
pub fn convergence_check(s: &Sequence, m: &TaylorMeasure) -> Convergence {
    let cutoff = match m.support {
        IndexSet::Truncated { cutoff, .. } => cutoff,
        _ => DEFAULT_CUTOFF,
    };
    certify(&s.mul(&m.coeffs), m.gamma, cutoff).0
}

/// `T_{γ,a}(B) = Σ_{n∈B} a_n γ^n / n!`.
pub fn taylor_mass(m: &TaylorMeasure, b: &IndexSet) -> Result<Estimate> {
    let q = &m.coeffs;
    match b {
        IndexSet::Truncated { cutoff, tail_tol } => {
            let c = (*cutoff).max(2);
            let t = terms(q, m.gamma, c + 2);
            let value = sum_over(&t[..*cutoff], b);
            let (conv, mut bound) = certify(q, m.gamma, c);
            let mut certificate = match conv {
                Convergence::Bounded { .. } => Certificate::Bounded,
                Convergence::Geometric { .. } => Certificate::Geometric,
                Convergence::Ratio(_) => Certificate::Ratio,
                Convergence::Inconclusive => Certificate::Alternating,
            };
            if conv == Convergence::Inconclusive || !bound.is_finite() {
                match alternating_bound(&t, c) {
                    Some(ab) => {
                        bound = ab;
                        certificate = Certificate::Alternating;
                    }
                    None => {
                        return Err(Error::Divergence(format!(
                            "no condition holds on indices {}..={}",
                            c / 2,
                            c
                        )))
                    }
                }
            }
            if !is_finite(value) {
                return Err(Error::Divergence("partial sum is not finite".into()));
            }
            if bound > *tail_tol {
                return Err(Error::TailTooLarge { bound, tol: *tail_tol });
            }
            Ok(Estimate { value, tail_bound: bound, certificate })
        }
        _ => {
            let t = terms(q, m.gamma, b.extent());
            Ok(Estimate { value: sum_over(&t, b), tail_bound: 0.0, certificate: Certificate::Finite })
        }
    }
}

/// `I_{γ,a}^{s,B} = Σ_{n∈B} s_n a_n γ^n / n!`, evaluated as the mass of the
/// measure with coefficients `s·a`.
pub fn taylor_integral(s: &Sequence, m: &TaylorMeasure, b: &IndexSet) -> Result<Estimate> {
    taylor_mass(&m.with_coeffs(s.mul(&m.coeffs)), b)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct JordanSplit {
    pub pos: BTreeMap<usize, f64>,
    pub neg: BTreeMap<usize, f64>,
}

impl JordanSplit {
    /// Signed mass at `n`.
    pub fn signed(&self, n: usize) -> f64 {
        self.pos.get(&n).copied().unwrap_or(0.0) - self.neg.get(&n).copied().unwrap_or(0.0)
    }
}

/// Splits the point masses of `m` on a finite `B` into positive and negative parts.
pub fn jordan_split(m: &TaylorMeasure, b: &IndexSet) -> Result<JordanSplit> {
    if !b.is_finite() {
        return Err(Error::InvalidIndexSet("jordan_split needs a finite support".into()));
    }
    let t = terms(&m.coeffs, m.gamma, b.extent());
    let mut out = JordanSplit::default();
    for n in b.indices() {
        let z = t[n];
        if z.im != 0.0 {
            return Err(Error::NonRealMass { index: n });
        }
        if z.re > 0.0 {
            out.pos.insert(n, z.re);
        } else if z.re < 0.0 {
            out.neg.insert(n, -z.re);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Convolution {
    pub p: Vec<Scalar>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Cauchy product under the Taylor integral:
/// `p_n = Σ_k C(n,k) f_k a_k g_{n-k} a_{n-k} / a_n`, with `I^f · I^g = I^p`.
pub fn convolution_product(
    f: &[Scalar],
    g: &[Scalar],
    a: &Sequence,
    gamma: Scalar,
    cutoff: usize,
) -> Result<Convolution> {
    let r: Vec<Scalar> = (0..cutoff).map(|n| a.base(n)).collect();
    if let Some(index) = r.iter().position(|&z| z == ZERO) {
        return Err(Error::ZeroCoefficient { index });
    }
    let at = |v: &[Scalar], n: usize| v.get(n).copied().unwrap_or(ZERO);
    let power = 1 - a.fact_power();
    let mut p = Vec::with_capacity(cutoff);
    for n in 0..cutoff {
        let mut acc = Neumaier::new();
        let mut binom = 1.0f64;
        for k in 0..=n {
            let fk = at(f, k);
            let gk = at(g, n - k);
            if fk != ZERO && gk != ZERO {
                acc.add(fk * gk * r[k] * r[n - k] / r[n] * binom.powi(power));
            }
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        p.push(acc.value());
    }
    let m = TaylorMeasure::new(gamma, a.clone(), IndexSet::Prefix(cutoff));
    let b = IndexSet::Prefix(cutoff);
    let i_f = taylor_integral(&Sequence::finite(f.to_vec()), &m, &b)?.value;
    let i_g = taylor_integral(&Sequence::finite(g.to_vec()), &m, &b)?.value;
    let rhs = taylor_integral(&Sequence::finite(p.clone()), &m, &b)?.value;
    Ok(Convolution { p, lhs: i_f * i_g, rhs })
}

/// `d/dx I_{x,a}^{s,ℕ}`, computed as `I_{x,τ(s·a)}^{1,ℕ}`.
pub fn ti_derivative(s: &Sequence, a: &Sequence, x: Scalar, cutoff: usize) -> Result<Estimate> {
    let shifted = s.mul(a).shift();
    let m = TaylorMeasure::new(x, shifted, IndexSet::truncated(cutoff, 1e-9)?);
    taylor_mass(&m, &m.support)
}

/// The witness measure from the characterization of absolutely convergent
/// series: `a_0 = 0`, `a_n = n!/γ^n · (-1)^n/√n`. Returns the measure and
/// `I_{|γ|,|a|}^{|s|,ℕ} = Σ_{n≥1} |s_n|/√n` summed through `cutoff`.
pub fn abs_conv_witness(s: &Sequence, gamma: Scalar, cutoff: usize) -> Result<(TaylorMeasure, Scalar)> {
    if gamma == ZERO {
        return Err(Error::Domain("witness needs γ ≠ 0".into()));
    }
    let sign_rule = |n: usize| {
        if n == 0 {
            ZERO
        } else {
            let m = 1.0 / (n as f64).sqrt();
            Scalar::new(if n % 2 == 0 { m } else { -m }, 0.0)
        }
    };
    let a = Sequence::rule(sign_rule).with_factorial_power(1).with_geometric(gamma.inv());
    let measure = TaylorMeasure::new(gamma, a.clone(), IndexSet::truncated(cutoff.max(1), 1.0)?);
    let abs_m = TaylorMeasure::new(Scalar::new(gamma.norm(), 0.0), a.abs(), IndexSet::Prefix(cutoff + 1));
    let value = taylor_integral(&s.abs(), &abs_m, &IndexSet::Prefix(cutoff + 1))?.value;
    Ok((measure, value))
}
