//! Coefficient and contour inversion of the DTT, and the Hadamard product
//! computed from two DTTs by a circle integral.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::scalar::{Neumaier, Scalar, ZERO};

const DOUBLING_TOL: f64 = 1e-9;

/// Coefficients of `P_f(t) = f_0 t + f_1 t² + …`, i.e. `[0, f_0, f_1, …]`.
pub fn dtt_polynomial(f: &[Scalar]) -> Vec<Scalar> {
    let mut p = Vec::with_capacity(f.len() + 1);
    p.push(ZERO);
    p.extend_from_slice(f);
    p
}

/// `f_k = P^{(k+1)}(0)/(k+1)!`, which for a polynomial is the coefficient of `t^{k+1}`.
pub fn invert_by_coeffs(p: &[Scalar]) -> Vec<Scalar> {
    let mut f = p.get(1..).map(<[Scalar]>::to_vec).unwrap_or_default();
    while f.last() == Some(&ZERO) {
        f.pop();
    }
    f
}

fn check_q(q: usize) -> Result<()> {
    if q == 0 || !q.is_power_of_two() {
        return Err(Error::QuadratureTooCoarse(format!("Q = {q} is not a power of two")));
    }
    Ok(())
}

fn contour_once(eval: &dyn Fn(Scalar) -> Scalar, gamma: Scalar, r: f64, k: usize, q: usize) -> Scalar {
    let mut acc = Neumaier::new();
    for j in 0..q {
        let theta = TAU * j as f64 / q as f64;
        let tau = gamma / r * Scalar::from_polar(1.0, -theta);
        acc.add(eval(tau) * Scalar::from_polar(1.0, -((k + 1) as f64) * theta));
    }
    acc.value() / q as f64 * gamma / r.powi(k as i32 + 1)
}

/// Recovers `f_k` from `τ ↦ 𝒯_γ^f(τ)` by the `Q`-point trapezoid rule on the circle
/// `τ = (γ/r) e^{−iθ}`. The result is cross-checked against `2Q` points.
pub fn invert_by_contour(eval: &dyn Fn(Scalar) -> Scalar, gamma: Scalar, r: f64, k: usize, q: usize) -> Result<Scalar> {
    check_q(q)?;
    if !(r > 0.0) || gamma == ZERO {
        return Err(Error::Domain("need r > 0 and γ ≠ 0".into()));
    }
    if q <= k + 1 {
        return Err(Error::QuadratureTooCoarse(format!("Q = {q} must exceed k + 1 = {}", k + 1)));
    }
    let v = contour_once(eval, gamma, r, k, q);
    let v2 = contour_once(eval, gamma, r, k, 2 * q);
    if (v - v2).norm() > DOUBLING_TOL * v2.norm().max(1.0) {
        return Err(Error::QuadratureTooCoarse(format!("Q = {q} and 2Q disagree by {:.3e}", (v - v2).norm())));
    }
    Ok(v)
}

fn horner_dtt(f: &[Scalar], gamma: Scalar, tau: Scalar) -> Scalar {
    let x = gamma / tau;
    f.iter().rev().fold(ZERO, |acc, &c| acc * x + c) / tau
}

fn hadamard_once(f: &[Scalar], g: &[Scalar], gamma: Scalar, s: Scalar, q: usize) -> Scalar {
    let mut acc = Neumaier::new();
    for j in 0..q {
        let e = Scalar::from_polar(1.0, TAU * j as f64 / q as f64);
        acc.add(horner_dtt(f, gamma, s * e.conj()) * horner_dtt(g, gamma, s * e));
    }
    gamma * acc.value() / q as f64
}

/// `(γ/2π) ∫ 𝒯_γ^f(√(γt) e^{−iu}) 𝒯_γ^g(√(γt) e^{iu}) du`, which equals `𝒯_γ^{f·g}(t)`.
///
/// Only `√(γt)²` enters the result, so the branch of the root does not matter.
pub fn hadamard_dtt(f: &[Scalar], g: &[Scalar], gamma: Scalar, t: Scalar, q: usize) -> Result<Scalar> {
    if f.len() != g.len() {
        return Err(Error::LengthMismatch { expected: f.len(), got: g.len() });
    }
    if gamma == ZERO || t == ZERO {
        return Err(Error::Domain("γ and t must be nonzero".into()));
    }
    check_q(q)?;
    if q <= 2 * f.len() {
        return Err(Error::QuadratureTooCoarse(format!("Q = {q} must exceed 2·len = {}", 2 * f.len())));
    }
    let s = (gamma * t).sqrt();
    let v = hadamard_once(f, g, gamma, s, q);
    let v2 = hadamard_once(f, g, gamma, s, 2 * q);
    if (v - v2).norm() > DOUBLING_TOL * v2.norm().max(1.0) {
        return Err(Error::QuadratureTooCoarse(format!("Q = {q} and 2Q disagree by {:.3e}", (v - v2).norm())));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::dtt_finite;
    use crate::scalar::{c, real, reals, ONE};
    use proptest::prelude::*;

    #[test]
    fn coeff_examples() {
        assert_eq!(invert_by_coeffs(&reals(&[0.0, 3.0, -1.0, 2.0])), reals(&[3.0, -1.0, 2.0]));
        assert!(invert_by_coeffs(&[]).is_empty());
        assert!(invert_by_coeffs(&[ZERO]).is_empty());
        let f = reals(&[1.0, -2.0, 0.5, 4.0, 9.0]);
        assert_eq!(invert_by_coeffs(&dtt_polynomial(&f)), f);
    }

    #[test]
    fn contour_recovers_short_sequence() {
        let f = reals(&[3.0, -1.0, 2.0]);
        let eval = |tau: Scalar| dtt_finite(&f, ONE, tau).unwrap();
        for k in 0..3 {
            let v = invert_by_contour(&eval, ONE, 1.0, k, 64).unwrap();
            assert!((v - f[k]).norm() < 1e-10);
        }
        let v = invert_by_contour(&eval, ONE, 1.0, 5, 64).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn contour_constant() {
        let f = [c(2.5, -1.0)];
        let eval = |tau: Scalar| dtt_finite(&f, real(0.7), tau).unwrap();
        for r in [0.3, 1.0, 4.0] {
            assert!((invert_by_contour(&eval, real(0.7), r, 0, 8).unwrap() - f[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn contour_flags_aliasing() {
        let f: Vec<Scalar> = (0..12).map(|n| real(n as f64 + 1.0)).collect();
        let eval = |tau: Scalar| dtt_finite(&f, ONE, tau).unwrap();
        assert!(matches!(invert_by_contour(&eval, ONE, 1.0, 0, 8), Err(Error::QuadratureTooCoarse(_))));
        assert!(matches!(invert_by_contour(&eval, ONE, 1.0, 3, 8), Err(Error::QuadratureTooCoarse(_))));
        assert!(matches!(invert_by_contour(&eval, ONE, 1.0, 9, 8), Err(Error::QuadratureTooCoarse(_))));
    }

    #[test]
    fn hadamard_examples() {
        let f = reals(&[1.0, 1.0, 1.0]);
        let v = hadamard_dtt(&f, &f, ONE, real(2.0), 8).unwrap();
        assert!((v - real(0.875)).norm() < 1e-14);
        assert_eq!(hadamard_dtt(&f, &[ZERO; 3], ONE, real(2.0), 8).unwrap(), ZERO);
        assert!(matches!(hadamard_dtt(&f, &f, ONE, real(2.0), 6), Err(Error::QuadratureTooCoarse(_))));
        assert!(matches!(hadamard_dtt(&f, &f, ONE, real(2.0), 4), Err(Error::QuadratureTooCoarse(_))));
    }

    #[test]
    fn hadamard_branch_independent() {
        let f = [c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)];
        let g = [c(0.3, -1.0), c(2.0, 2.0), c(1.0, 0.0)];
        let gamma = c(-1.0, 0.2);
        let t = c(-2.0, -0.1);
        let fg: Vec<Scalar> = f.iter().zip(&g).map(|(a, b)| a * b).collect();
        let v = hadamard_dtt(&f, &g, gamma, t, 16).unwrap();
        assert!((v - dtt_finite(&fg, gamma, t).unwrap()).norm() < 1e-12);
    }

    fn cvec(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b)), n)
    }

    proptest! {
        #[test]
        fn coeff_round_trip(mut f in cvec(5)) {
            f[4] += real(10.0);
            prop_assert_eq!(invert_by_coeffs(&dtt_polynomial(&f)), f);
        }

        #[test]
        fn contour_matches_direct(n in 1usize..=6, f in cvec(6), gr in 0.3f64..2.0, r in 0.5f64..1.5) {
            let f = &f[..n];
            let gamma = real(gr);
            let eval = |tau: Scalar| dtt_finite(f, gamma, tau).unwrap();
            for k in 0..n {
                let v = invert_by_contour(&eval, gamma, r, k, 64).unwrap();
                prop_assert!((v - f[k]).norm() < 1e-10);
            }
        }

        #[test]
        fn hadamard_matches_direct(f in cvec(5), g in cvec(5)) {
            let fg: Vec<Scalar> = f.iter().zip(&g).map(|(a, b)| a * b).collect();
            let v = hadamard_dtt(&f, &g, ONE, real(3.0), 32).unwrap();
            prop_assert!((v - dtt_finite(&fg, ONE, real(3.0)).unwrap()).norm() < 1e-10);
        }
    }
}
