//! DTTs of solutions of linear difference equations, checked against the
//! transformed relation, plus the Fibonacci and Catalan closed forms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Neumaier, Scalar, ONE, ZERO};

pub type Coeff = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;

pub fn constant(z: Scalar) -> Coeff {
    Arc::new(move |_| z)
}

/// `f_n = a_n f_{n−1} + b_n` (n ≥ 1), or `f_n = a_n f_{n−1} + b_n f_{n−2} + c_n` (n ≥ 2).
///
/// Coefficients below the first recurrence index are taken as zero.
#[derive(Clone)]
pub enum Recurrence {
    FirstOrder { a: Coeff, b: Coeff, f0: Scalar },
    SecondOrder { a: Coeff, b: Coeff, c: Coeff, f0: Scalar, f1: Scalar },
}

impl fmt::Debug for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recurrence::FirstOrder { f0, .. } => write!(f, "FirstOrder {{ f0: {f0} }}"),
            Recurrence::SecondOrder { f0, f1, .. } => write!(f, "SecondOrder {{ f0: {f0}, f1: {f1} }}"),
        }
    }
}

impl Recurrence {
    pub fn fibonacci() -> Self {
        Recurrence::SecondOrder { a: constant(ONE), b: constant(ONE), c: constant(ZERO), f0: ZERO, f1: ONE }
    }

    fn order(&self) -> usize {
        match self {
            Recurrence::FirstOrder { .. } => 1,
            Recurrence::SecondOrder { .. } => 2,
        }
    }

    fn a(&self, n: usize) -> Scalar {
        match self {
            Recurrence::FirstOrder { a, .. } | Recurrence::SecondOrder { a, .. } => {
                if n < self.order() {
                    ZERO
                } else {
                    a(n)
                }
            }
        }
    }

    fn b(&self, n: usize) -> Scalar {
        match self {
            Recurrence::FirstOrder { b, .. } | Recurrence::SecondOrder { b, .. } => {
                if n < self.order() {
                    ZERO
                } else {
                    b(n)
                }
            }
        }
    }

    fn c(&self, n: usize) -> Scalar {
        match self {
            Recurrence::SecondOrder { c, .. } if n >= 2 => c(n),
            _ => ZERO,
        }
    }

    /// `f_0..=f_len-1` by direct iteration.
    pub fn generate(&self, len: usize) -> Vec<Scalar> {
        let mut f = Vec::with_capacity(len);
        for n in 0..len {
            let v = match self {
                Recurrence::FirstOrder { f0, .. } => {
                    if n == 0 {
                        *f0
                    } else {
                        self.a(n) * f[n - 1] + self.b(n)
                    }
                }
                Recurrence::SecondOrder { f0, f1, .. } => match n {
                    0 => *f0,
                    1 => *f1,
                    _ => self.a(n) * f[n - 1] + self.b(n) * f[n - 2] + self.c(n),
                },
            };
            f.push(v);
        }
        f
    }
}

#[derive(Debug, Clone)]
pub struct RecurrenceReport {
    pub f: Vec<Scalar>,
    /// `𝒯_γ^f(t)` by partial sum over `0..=cutoff`.
    pub lhs: Scalar,
    /// The transformed relation evaluated on matching windows.
    pub rhs: Scalar,
    pub residual: f64,
    /// The variant with `a_{n+1}/n!` (and `b_{n+2}/n!`) inside the transforms.
    pub printed_rhs: Scalar,
    pub printed_residual: f64,
    /// Bound on the omitted tail of `lhs`.
    pub tail_bound: f64,
}

fn partial(terms: impl Iterator<Item = Scalar>, x: Scalar) -> Scalar {
    let mut acc = Neumaier::new();
    let mut p = ONE;
    for u in terms {
        acc.add(u * p);
        p *= x;
    }
    acc.value()
}

/// Ratio test on the last half of `|u_n|`; returns a geometric tail bound.
fn tail_certificate(u: &[f64]) -> Result<f64> {
    let c = u.len() - 1;
    let lo = c / 2;
    if u[lo..].iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let mut sup = 0.0f64;
    for n in lo..c {
        if u[n] == 0.0 {
            return Err(Error::Divergence(format!("zero term at {n} inside the ratio window")));
        }
        sup = sup.max(u[n + 1] / u[n]);
    }
    if !(sup < 1.0 - 1e-6) {
        return Err(Error::Divergence(format!("term ratio reaches {sup:.6} on indices {lo}..={c}")));
    }
    Ok(u[c] * sup / (1.0 - sup))
}

/// Generates `f`, evaluates `𝒯_γ^f(t)` by partial sums and compares with
///
/// `f_0/t + (γ/t) 𝒯^{a_{n+1} f_n} + 𝒯^{b}` (first order) or
/// `f_0/t + f_1 γ/t² + (γ/t) 𝒯^{a_{n+1} f_n} + (γ/t)² 𝒯^{b_{n+2} f_n} + 𝒯^{c}` (second order).
pub fn recurrence_dtt_residual(kind: &Recurrence, gamma: Scalar, t: Scalar, cutoff: usize) -> Result<RecurrenceReport> {
    if t == ZERO || gamma == ZERO {
        return Err(Error::Domain("γ and t must be nonzero".into()));
    }
    if t.norm() <= gamma.norm() {
        return Err(Error::Domain("need |t| > |γ|".into()));
    }
    let c = cutoff.max(4);
    let f = kind.generate(c + 1);
    let x = gamma / t;
    let inv_t = t.inv();
    let mags: Vec<f64> = {
        let lx = x.norm();
        let mut p = 1.0;
        f.iter()
            .map(|v| {
                let m = v.norm() * p;
                p *= lx;
                m
            })
            .collect()
    };
    let tail_bound = tail_certificate(&mags)?.abs() * inv_t.norm();
    let lhs = partial(f.iter().copied(), x) * inv_t;
    if !crate::scalar::is_finite(lhs) {
        return Err(Error::Divergence("partial sum is not finite".into()));
    }

    let fact = |n: usize| (1..=n).fold(1.0, |a, m| a * m as f64);
    let (rhs, printed_rhs) = match kind {
        Recurrence::FirstOrder { f0, .. } => {
            let ta = partial((0..c).map(|n| kind.a(n + 1) * f[n]), x) * inv_t;
            let ta_p = partial((0..c).map(|n| kind.a(n + 1) * f[n] / fact(n)), x) * inv_t;
            let tb = partial((0..=c).map(|n| kind.b(n)), x) * inv_t;
            let head = f0 * inv_t;
            (head + x * ta + tb, head + x * ta_p + tb)
        }
        Recurrence::SecondOrder { f0, f1, .. } => {
            let ta = partial((0..c).map(|n| kind.a(n + 1) * f[n]), x) * inv_t;
            let ta_p = partial((0..c).map(|n| kind.a(n + 1) * f[n] / fact(n)), x) * inv_t;
            let tb = partial((0..c - 1).map(|n| kind.b(n + 2) * f[n]), x) * inv_t;
            let tb_p = partial((0..c - 1).map(|n| kind.b(n + 2) * f[n] / fact(n)), x) * inv_t;
            let tc = partial((0..=c).map(|n| kind.c(n)), x) * inv_t;
            let head = f0 * inv_t + f1 * gamma * inv_t * inv_t;
            (head + x * ta + x * x * tb + tc, head + x * ta_p + x * x * tb_p + tc)
        }
    };
    Ok(RecurrenceReport {
        residual: (lhs - rhs).norm(),
        printed_residual: (lhs - printed_rhs).norm(),
        f,
        lhs,
        rhs,
        printed_rhs,
        tail_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Fibonacci,
    Catalan,
}

pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

/// Fibonacci: `γ/(t² − γt − γ²)` for `|t| > φ|γ|`.
/// Catalan: `(1 − √(1 − 4γ/t))/(2γ)` (principal root) for `|t| > 4|γ|`.
pub fn closed_form_dtt(kind: ClosedForm, gamma: Scalar, t: Scalar) -> Result<Scalar> {
    if t == ZERO {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    match kind {
        ClosedForm::Fibonacci => {
            if t.norm() <= GOLDEN_RATIO * gamma.norm() {
                return Err(Error::Domain(format!("Fibonacci DTT needs |t| > φ|γ| = {}", GOLDEN_RATIO * gamma.norm())));
            }
            Ok(gamma / (t * t - gamma * t - gamma * gamma))
        }
        ClosedForm::Catalan => {
            if gamma == ZERO {
                return Err(Error::Domain("Catalan DTT needs γ ≠ 0".into()));
            }
            if t.norm() <= 4.0 * gamma.norm() {
                return Err(Error::Domain(format!("Catalan DTT needs |t| > 4|γ| = {}", 4.0 * gamma.norm())));
            }
            Ok((ONE - (ONE - 4.0 * gamma / t).sqrt()) / (2.0 * gamma))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, real};

    fn catalan_partial(gamma: Scalar, t: Scalar, n: usize) -> Scalar {
        // C_{k+1} x^{k+1} = C_k x^k · x · 2(2k+1)/(k+2)
        let x = gamma / t;
        let mut term = ONE;
        let mut acc = ZERO;
        for k in 0..n {
            acc += term;
            term *= x * (2.0 * (2 * k + 1) as f64 / (k + 2) as f64);
        }
        acc / t
    }

    #[test]
    fn trivial_first_order() {
        let r = Recurrence::FirstOrder { a: constant(ZERO), b: constant(ZERO), f0: real(5.0) };
        let rep = recurrence_dtt_residual(&r, ONE, real(2.0), 50).unwrap();
        assert_eq!(&rep.f[..3], &[real(5.0), ZERO, ZERO]);
        assert!((rep.lhs - real(2.5)).norm() < 1e-15);
        assert!(rep.residual < 1e-15);
    }

    #[test]
    fn counting_sequence() {
        let r = Recurrence::FirstOrder { a: constant(ONE), b: constant(ONE), f0: ZERO };
        let rep = recurrence_dtt_residual(&r, ONE, real(2.0), 200).unwrap();
        assert_eq!(rep.f[7], real(7.0));
        assert!((rep.lhs - ONE).norm() < 1e-12);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn fibonacci_oracle() {
        let rep = recurrence_dtt_residual(&Recurrence::fibonacci(), ONE, real(3.0), 200).unwrap();
        assert_eq!(&rep.f[..9], &crate::scalar::reals(&[0.0, 1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0])[..]);
        assert!((rep.lhs - real(0.2)).norm() < 1e-12);
        assert!(rep.residual < 1e-12);
        // The printed 1/n! variant does not match.
        assert!(rep.printed_residual > 1e-3);
        let cf = closed_form_dtt(ClosedForm::Fibonacci, ONE, real(3.0)).unwrap();
        assert!((cf - rep.lhs).norm() < 1e-12);
        // The other sign gives 1/7.
        let printed = 1.0 / (9.0 - 3.0 + 1.0);
        assert!((rep.lhs.re - printed).abs() > 0.05);
    }

    #[test]
    fn fibonacci_small_gamma() {
        let cf = closed_form_dtt(ClosedForm::Fibonacci, real(0.1), ONE).unwrap();
        assert!((cf.re - 0.1 / 0.89).abs() < 1e-15);
        let rep = recurrence_dtt_residual(&Recurrence::fibonacci(), real(0.1), ONE, 100).unwrap();
        assert!((rep.lhs - cf).norm() < 1e-13);
    }

    #[test]
    fn catalan_closed_form() {
        let v = closed_form_dtt(ClosedForm::Catalan, ONE, real(5.0)).unwrap();
        assert!((v.re - 0.276_393_202_250_021).abs() < 1e-12);
        assert!((v - catalan_partial(ONE, real(5.0), 400)).norm() < 1e-12);
        let g = c(0.3, 0.4);
        let t = c(-1.0, 2.5);
        let v = closed_form_dtt(ClosedForm::Catalan, g, t).unwrap();
        assert!((v - catalan_partial(g, t, 2000)).norm() < 1e-10);
    }

    #[test]
    fn domains() {
        assert!(closed_form_dtt(ClosedForm::Catalan, ONE, real(4.0)).is_err());
        assert!(closed_form_dtt(ClosedForm::Fibonacci, ONE, real(1.6)).is_err());
        assert!(recurrence_dtt_residual(&Recurrence::fibonacci(), ONE, real(1.0), 50).is_err());
        assert!(matches!(
            recurrence_dtt_residual(&Recurrence::fibonacci(), ONE, real(1.5), 200),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn second_order_general() {
        let r = Recurrence::SecondOrder {
            a: Arc::new(|n| real(0.5 / n as f64)),
            b: constant(c(0.25, 0.1)),
            c: Arc::new(|n| real(1.0 / (n * n) as f64)),
            f0: real(2.0),
            f1: c(-1.0, 1.0),
        };
        let rep = recurrence_dtt_residual(&r, real(0.7), c(1.5, 0.5), 300).unwrap();
        assert!(rep.residual < 1e-12 * (1.0 + rep.lhs.norm()));
    }
}
