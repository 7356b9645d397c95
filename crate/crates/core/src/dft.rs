//! DFT on the roots of unity and the number-theoretic transform over `ℤ_p`.

use std::f64::consts::TAU;

use crate::dtt::Driver;
use crate::error::{Error, Result};
use crate::scalar::{c, Neumaier, Scalar};

/// `e^{−2πi m/N}`, exact at multiples of a quarter turn.
pub fn unit_root(m: usize, n: usize) -> Scalar {
    let m = m % n;
    if (4 * m) % n == 0 {
        return match 4 * m / n {
            0 => c(1.0, 0.0),
            1 => c(0.0, -1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, 1.0),
        };
    }
    Scalar::from_polar(1.0, -TAU * m as f64 / n as f64)
}

pub fn unity_driver(n: usize) -> Result<Driver> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    Driver::new((0..n).map(|k| unit_root(k, n)).collect())
}

fn transform(f: &[Scalar], sign_conj: bool) -> Vec<Scalar> {
    let n = f.len();
    let table: Vec<Scalar> = (0..n).map(|m| {
        let z = unit_root(m, n);
        if sign_conj {
            z.conj()
        } else {
            z
        }
    }).collect();
    (0..n)
        .map(|k| {
            let mut acc = Neumaier::new();
            for (j, &fj) in f.iter().enumerate() {
                acc.add(fj * table[(k * j) % n]);
            }
            acc.value()
        })
        .collect()
}

/// `g_k = Σ_n f_n e^{−2πikn/N}`.
pub fn dft(f: &[Scalar]) -> Vec<Scalar> {
    transform(f, false)
}

/// `f_n = (1/N) Σ_k g_k e^{2πikn/N}`.
pub fn idft(g: &[Scalar]) -> Result<Vec<Scalar>> {
    if g.is_empty() {
        return Err(Error::Domain("IDFT needs at least one value".into()));
    }
    let n = g.len() as f64;
    Ok(transform(g, true).into_iter().map(|z| z / n).collect())
}

pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(p: u64) -> Result<()> {
    if p >= MAX_MODULUS || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `r^N ≡ 1` and `Σ_{j<N} r^{jk} ≡ 0 (mod p)` for `k = 1..N−1`.
pub fn principal_root_check(p: u64, r: u64, n: u64) -> Result<bool> {
    check_modulus(p)?;
    if n == 0 {
        return Ok(false);
    }
    if pow_mod(r, n, p) != 1 {
        return Ok(false);
    }
    for k in 1..n {
        let rk = pow_mod(r, k, p);
        let mut s = 0u64;
        let mut x = 1u64;
        for _ in 0..n {
            s = (s + x) % p;
            x = x * rk % p;
        }
        if s != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
    pub r: u64,
    pub n: u64,
    r_inv: u64,
    n_inv: u64,
}

impl PrimeField {
    pub fn new(p: u64, r: u64, n: u64) -> Result<Self> {
        if !principal_root_check(p, r, n)? {
            return Err(Error::NotPrincipalRoot(format!("{r} is not a principal {n}-th root of unity mod {p}")));
        }
        if n % p == 0 {
            return Err(Error::NoInverse { value: n, modulus: p });
        }
        Ok(PrimeField { p, r: r % p, n, r_inv: pow_mod(r, p - 2, p), n_inv: pow_mod(n % p, p - 2, p) })
    }

    fn apply(&self, f: &[u64], root: u64) -> Result<Vec<u64>> {
        if f.len() as u64 != self.n {
            return Err(Error::LengthMismatch { expected: self.n as usize, got: f.len() });
        }
        let p = self.p;
        Ok((0..self.n)
            .map(|k| {
                let rk = pow_mod(root, k, p);
                let mut x = 1u64;
                let mut s = 0u64;
                for &v in f {
                    s = (s + v % p * x) % p;
                    x = x * rk % p;
                }
                s
            })
            .collect())
    }

    /// `g_k = Σ_n f_n r^{kn} mod p`.
    pub fn ntt(&self, f: &[u64]) -> Result<Vec<u64>> {
        self.apply(f, self.r)
    }

    pub fn intt(&self, g: &[u64]) -> Result<Vec<u64>> {
        Ok(self.apply(g, self.r_inv)?.into_iter().map(|v| v * self.n_inv % self.p).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtt::{dtt_driven, idtt_system, DEFAULT_IDTT_TOL};
    use crate::scalar::{max_abs_diff, reals, ONE};
    use proptest::prelude::*;

    #[test]
    fn unity_examples() {
        assert_eq!(unity_driver(4).unwrap().nodes(), &[c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(unity_driver(1).unwrap().nodes(), &[ONE]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((unity_driver(8).unwrap().nodes()[1] - c(h, -h)).norm() < 1e-15);
        assert!(unity_driver(0).is_err());
    }

    #[test]
    fn dft_examples() {
        assert_eq!(dft(&reals(&[1.0, 0.0, 0.0, 0.0])), reals(&[1.0; 4]));
        assert_eq!(dft(&reals(&[1.0; 4])), reals(&[4.0, 0.0, 0.0, 0.0]));
        assert!(idft(&[]).is_err());
    }

    #[test]
    fn root_checks() {
        assert!(principal_root_check(17, 4, 4).unwrap());
        assert!(!principal_root_check(17, 2, 4).unwrap());
        assert!(principal_root_check(17, 1, 1).unwrap());
        assert!(principal_root_check(7681, 1, 1).unwrap());
        // 16 ≡ −1 has order 2, so r^4 = 1 but the k = 2 sum is 4.
        assert!(!principal_root_check(17, 16, 4).unwrap());
        assert!(matches!(principal_root_check(15, 2, 4), Err(Error::NotPrime(15))));
        assert!(matches!(principal_root_check(1 << 31, 2, 4), Err(Error::NotPrime(_))));
    }

    #[test]
    fn ntt_examples() {
        let fld = PrimeField::new(17, 4, 4).unwrap();
        let f = [1, 2, 3, 4];
        let g = fld.ntt(&f).unwrap();
        // Direct evaluation: g_1 = 1 + 2·4 + 3·16 + 4·64 = 313 ≡ 7.
        assert_eq!(g[0], 10);
        assert_eq!(g[1], 313 % 17);
        assert_eq!(fld.intt(&g).unwrap(), f);
        assert_eq!(fld.ntt(&[5, 0, 0, 0]).unwrap(), vec![5; 4]);
        assert_eq!(fld.ntt(&[0; 4]).unwrap(), vec![0; 4]);
        assert!(matches!(PrimeField::new(17, 2, 4), Err(Error::NotPrincipalRoot(_))));
        assert!(fld.ntt(&[1, 2]).is_err());
    }

    fn cvec(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b)), n)
    }

    proptest! {
        #[test]
        fn dft_is_driven_dtt(f in cvec(8)) {
            let g = dtt_driven(&f, &unity_driver(8).unwrap(), ONE).unwrap();
            prop_assert!(max_abs_diff(&dft(&f), &g) < 1e-12);
        }

        #[test]
        fn round_trip(n in 1usize..=64, f in cvec(64)) {
            let f = &f[..n];
            prop_assert!(max_abs_diff(&idft(&dft(f)).unwrap(), f) < 1e-12);
            prop_assert!(max_abs_diff(&dft(&idft(f).unwrap()), f) < 1e-12);
        }

        #[test]
        fn orthogonality(n in 1usize..=64) {
            let d = unity_driver(n).unwrap();
            let g = d.nodes();
            for l in 0..n {
                for m in 0..n {
                    let s: Scalar = (0..n).map(|k| g[k].powu(l as u32) * g[m].conj().powu(k as u32)).sum();
                    let want = if l == m { n as f64 } else { 0.0 };
                    prop_assert!((s - c(want, 0.0)).norm() < 1e-9);
                }
            }
        }

        #[test]
        fn convolution(n in 1usize..=32, f in cvec(32), g in cvec(32)) {
            let (f, g) = (&f[..n], &g[..n]);
            let conv: Vec<Scalar> = (0..n).map(|k| (0..n).map(|j| f[j] * g[(k + n - j) % n]).sum()).collect();
            let lhs = dft(&conv);
            let rhs: Vec<Scalar> = dft(f).iter().zip(dft(g)).map(|(a, b)| a * b).collect();
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        }

        #[test]
        fn ntt_round_trip(f in prop::collection::vec(0u64..7681, 16)) {
            let p = 7681u64;
            let r = (2..p).map(|x| pow_mod(x, (p - 1) / 16, p)).find(|&r| pow_mod(r, 8, p) != 1).unwrap();
            let fld = PrimeField::new(p, r, 16).unwrap();
            prop_assert_eq!(fld.intt(&fld.ntt(&f).unwrap()).unwrap(), f);
        }

        #[test]
        fn unity_inverse_system(n in 1usize..=32) {
            let d = unity_driver(n).unwrap();
            let sys = idtt_system(&d, DEFAULT_IDTT_TOL).unwrap();
            for k in 0..n {
                prop_assert!((sys.xi[k] - d.nodes()[k].conj()).norm() < 1e-9);
                prop_assert!((sys.weights[k] - c(n as f64, 0.0)).norm() < 1e-9 * n as f64);
            }
        }
    }
}
