//! Classical series as Taylor integrals: ζ, η, Dirichlet, hypergeometric,
//! and Euler's totient through a gcd-weighted DFT.

use super::{taylor_integral, Certificate, Estimate, IndexSet, Sequence, TaylorMeasure};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ONE, ZERO};

pub const DEFAULT_SERIES_CUTOFF: usize = 1_000_000;

#[derive(Debug, Clone)]
pub enum SeriesKind {
    Zeta(Scalar),
    Eta(Scalar),
    /// `Σ_{n≥1} s_n / n^z` with `|s_n| ≤ m · n^k`.
    Dirichlet { s: Sequence, z: Scalar, m: f64, k: f64 },
    Hypergeometric { a: Vec<Scalar>, b: Vec<Scalar>, gamma: Scalar },
}

/// `n^{-z}` for `n ≥ 1`, zero at `n = 0`.
fn inv_power(z: Scalar) -> impl Fn(usize) -> Scalar + Send + Sync + Clone {
    move |n| if n == 0 { ZERO } else { (-z * (n as f64).ln()).exp() }
}

fn nonpositive_integer(z: Scalar) -> Option<usize> {
    (z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0).then(|| (-z.re) as usize)
}

/// Evaluates a series kind as a partial sum through `cutoff` plus a rigorous
/// tail bound, routed through [`taylor_integral`].
pub fn series_eval(kind: &SeriesKind, cutoff: usize, tail_tol: f64) -> Result<Estimate> {
    if cutoff < 1 {
        return Err(Error::InvalidIndexSet("cutoff must be at least 1".into()));
    }
    let sum_through = IndexSet::Prefix(cutoff + 1);
    let (value, bound) = match kind {
        SeriesKind::Zeta(z) => {
            let sigma = z.re;
            if sigma <= 1.0 {
                return Err(Error::Domain(format!("ζ needs Re(z) > 1, got {sigma}")));
            }
            // s_n(z) = n!/n^z against a_n = 1 at γ = 1.
            let s = Sequence::rule(inv_power(*z)).with_factorial_power(1);
            let m = TaylorMeasure::new(ONE, Sequence::ones(), sum_through.clone());
            let v = taylor_integral(&s, &m, &sum_through)?.value;
            let c = cutoff as f64;
            (v, c.powf(1.0 - sigma) / (sigma - 1.0))
        }
        SeriesKind::Eta(z) => {
            let sigma = z.re;
            if sigma <= 0.0 {
                return Err(Error::Domain(format!("η needs Re(z) > 0, got {sigma}")));
            }
            // γ = -1 supplies the alternating sign; Σ (-1)^{n-1} n^{-z}.
            let s = Sequence::rule(inv_power(*z)).with_factorial_power(1);
            let m = TaylorMeasure::new(Scalar::new(-1.0, 0.0), Sequence::constant(-ONE), sum_through.clone());
            let v = taylor_integral(&s, &m, &sum_through)?.value;
            // Pairing consecutive tail terms: |n^{-z} - (n+1)^{-z}| ≤ |z| ∫ x^{-σ-1}.
            let bound = (z.norm() / sigma) * ((cutoff + 1) as f64).powf(-sigma);
            (v, bound)
        }
        SeriesKind::Dirichlet { s, z, m, k } => {
            let sigma = z.re;
            if sigma <= k + 1.0 {
                return Err(Error::Domain(format!("Dirichlet series with growth n^{k} needs Re(z) > {}", k + 1.0)));
            }
            let w = Sequence::rule(inv_power(*z)).with_factorial_power(1);
            let meas = TaylorMeasure::new(ONE, Sequence::ones(), sum_through.clone());
            let v = taylor_integral(&s.mul(&w), &meas, &sum_through)?.value;
            let c = cutoff as f64;
            (v, m * c.powf(k + 1.0 - sigma) / (sigma - k - 1.0))
        }
        SeriesKind::Hypergeometric { a, b, gamma } => hypergeometric(a, b, *gamma, cutoff)?,
    };
    if bound > tail_tol {
        return Err(Error::TailTooLarge { bound, tol: tail_tol });
    }
    Ok(Estimate { value, tail_bound: bound, certificate: Certificate::Analytic })
}

fn hypergeometric(a: &[Scalar], b: &[Scalar], gamma: Scalar, cutoff: usize) -> Result<(Scalar, f64)> {
    if let Some(bj) = b.iter().find(|&&bj| nonpositive_integer(bj).is_some()) {
        return Err(Error::Domain(format!("lower parameter {bj} is a nonpositive integer")));
    }
    let terminates = a.iter().filter_map(|&ai| nonpositive_integer(ai)).min();
    let (p, q) = (a.len() as i32, b.len() as i32);
    if terminates.is_none() {
        if p > q + 1 {
            return Err(Error::Domain("pFq with p > q+1 diverges".into()));
        }
        if p == q + 1 && gamma.norm() >= 1.0 {
            return Err(Error::Domain("pFq with p = q+1 needs |γ| < 1".into()));
        }
    }
    // s_n = Π(a)_n / Π(b)_n held as r_n (n!)^{p-q}, built as a running product.
    let len = cutoff + 2;
    let mut r = Vec::with_capacity(len);
    let mut cur = ONE;
    for n in 0..len {
        r.push(cur);
        let nf = n as f64;
        let num: Scalar = a.iter().map(|&ai| ai + nf).product();
        let den: Scalar = b.iter().map(|&bj| bj + nf).product();
        cur = cur * num / den / (nf + 1.0).powi(p - q);
    }
    let s = Sequence::finite(r).with_factorial_power(p - q);
    let through = IndexSet::Prefix(cutoff + 1);
    let m = TaylorMeasure::new(gamma, Sequence::ones(), through.clone());
    let value = taylor_integral(&s, &m, &through)?.value;

    if let Some(k) = terminates {
        if k <= cutoff {
            return Ok((value, 0.0));
        }
    }
    // Sup of |T_{n+1}/T_n| over n ≥ n0 = cutoff + 1.
    let n0 = (cutoff + 1) as f64;
    let g = gamma.norm();
    let mut ratio = g;
    let mut dens: Vec<f64> = b.iter().map(|bj| n0 - bj.norm()).collect();
    dens.push(n0 + 1.0);
    if dens.iter().any(|&d| d <= 0.0) {
        return Err(Error::Domain("cutoff too small for a ratio bound".into()));
    }
    for (i, ai) in a.iter().enumerate() {
        let num = n0 + ai.norm();
        let den = dens[i];
        let f = num / den;
        ratio *= if i == b.len() { f.max(1.0) } else { f };
    }
    for d in dens.iter().skip(a.len()) {
        ratio /= d;
    }
    if ratio >= 1.0 {
        return Err(Error::Divergence(format!("tail ratio bound {ratio} ≥ 1")));
    }
    let t_next = {
        let t = super::terms(&s, gamma, cutoff + 2);
        t[cutoff + 1].norm()
    };
    Ok((value, t_next / (1.0 - ratio)))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient from `φ(n) = Σ_{k=1}^{n} gcd(n,k) e^{-2πik/n}`, evaluated as a
/// Taylor integral with `γ = e^{-2πi/n}`, `a_k = k!`, `s_k = gcd(n,k)`.
pub fn totient_via_dft(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("totient needs n ≥ 1".into()));
    }
    let nn = n as usize;
    let theta = -2.0 * std::f64::consts::PI / n as f64;
    let gamma = Scalar::from_polar(1.0, theta);
    let s = Sequence::rule(move |k| Scalar::new(gcd(n, k as u64) as f64, 0.0));
    let b = IndexSet::explicit((1..=nn).collect())?;
    let m = TaylorMeasure::new(gamma, Sequence::factorial(), b.clone());
    let v = taylor_integral(&s, &m, &b)?.value;
    let tol = 1e-6 * n as f64;
    let rounded = v.re.round();
    let residual = (v.re - rounded).abs().max(v.im.abs());
    if residual > tol || rounded < 0.0 {
        return Err(Error::NonIntegerResult { value: v.re, residual });
    }
    Ok(rounded as u64)
}

/// Direct count of `1 ≤ k ≤ n` coprime to `n`.
pub fn totient_direct(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(n, k) == 1).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::real;
    use std::f64::consts::PI;

    #[test]
    fn zeta_values() {
        for (z, want) in [(2.0, PI * PI / 6.0), (3.0, 1.202_056_903_159_594_2), (4.0, PI.powi(4) / 90.0)] {
            let e = series_eval(&SeriesKind::Zeta(real(z)), DEFAULT_SERIES_CUTOFF, 1e-5).unwrap();
            let err = (e.value.re - want).abs();
            // The bound covers the tail only; allow a few ulps of summation rounding.
            assert!(err <= e.tail_bound + 8.0 * f64::EPSILON * want, "z={z} err={err} bound={}", e.tail_bound);
        }
    }

    #[test]
    fn eta_one_is_ln2() {
        let e = series_eval(&SeriesKind::Eta(real(1.0)), DEFAULT_SERIES_CUTOFF, 1e-5).unwrap();
        assert!((e.value.re - 2f64.ln()).abs() <= e.tail_bound);
    }

    #[test]
    fn domains() {
        assert!(matches!(series_eval(&SeriesKind::Zeta(real(1.0)), 10, 1.0), Err(Error::Domain(_))));
        assert!(matches!(series_eval(&SeriesKind::Eta(real(0.0)), 10, 1.0), Err(Error::Domain(_))));
        let bad = SeriesKind::Hypergeometric { a: vec![ONE], b: vec![real(-2.0)], gamma: real(0.1) };
        assert!(matches!(series_eval(&bad, 50, 1.0), Err(Error::Domain(_))));
        let div = SeriesKind::Hypergeometric { a: vec![ONE, ONE], b: vec![ONE], gamma: real(1.5) };
        assert!(matches!(series_eval(&div, 50, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn geometric_hypergeometric() {
        let k = SeriesKind::Hypergeometric { a: vec![ONE, ONE], b: vec![ONE], gamma: real(0.5) };
        let e = series_eval(&k, 200, 1e-12).unwrap();
        assert!((e.value.re - 2.0).abs() <= e.tail_bound + 1e-15);
    }

    #[test]
    fn hypergeometric_oracles() {
        // 0F0(;;x) = e^x
        let k = SeriesKind::Hypergeometric { a: vec![], b: vec![], gamma: real(1.3) };
        let e = series_eval(&k, 60, 1e-12).unwrap();
        assert!((e.value.re - 1.3f64.exp()).abs() <= e.tail_bound + 1e-14);
        // 1F0(a;;x) = (1-x)^{-a}
        let k = SeriesKind::Hypergeometric { a: vec![real(2.5)], b: vec![], gamma: real(0.3) };
        let e = series_eval(&k, 200, 1e-12).unwrap();
        assert!((e.value.re - 0.7f64.powf(-2.5)).abs() <= e.tail_bound + 1e-14);
        // Terminating: 2F1(-2, 1; 1; x) = (1-x)^2
        let k = SeriesKind::Hypergeometric { a: vec![real(-2.0), ONE], b: vec![ONE], gamma: real(3.0) };
        let e = series_eval(&k, 10, 1e-12).unwrap();
        assert_eq!(e.tail_bound, 0.0);
        assert!((e.value.re - 4.0).abs() < 1e-14);
    }

    #[test]
    fn dirichlet_with_bounded_coefficients() {
        // s_n = 1 reproduces ζ(3).
        let k = SeriesKind::Dirichlet { s: Sequence::ones(), z: real(3.0), m: 1.0, k: 0.0 };
        let e = series_eval(&k, 10_000, 1e-6).unwrap();
        assert!((e.value.re - 1.202_056_903_159_594_2).abs() <= e.tail_bound);
    }

    #[test]
    fn totients() {
        assert_eq!(totient_via_dft(1).unwrap(), 1);
        assert_eq!(totient_via_dft(10).unwrap(), 4);
        assert_eq!(totient_via_dft(12).unwrap(), 4);
        for n in 1..=100 {
            assert_eq!(totient_via_dft(n).unwrap(), totient_direct(n), "n={n}");
        }
    }
}
