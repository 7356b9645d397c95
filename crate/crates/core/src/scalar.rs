//! Complex scalars and compensated summation.

use num_complex::Complex64;

/// Every quantity in the crate is a complex double; reals carry `im = 0`.
pub type Scalar = Complex64;

pub const ZERO: Scalar = Scalar::new(0.0, 0.0);
pub const ONE: Scalar = Scalar::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Scalar {
    Scalar::new(re, 0.0)
}

pub fn reals(v: &[f64]) -> Vec<Scalar> {
    v.iter().map(|&x| real(x)).collect()
}

#[inline]
pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Neumaier's variant of Kahan summation, one lane per component.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: [f64; 2],
    comp: [f64; 2],
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Scalar) {
        for (lane, x) in [z.re, z.im].into_iter().enumerate() {
            let s = self.sum[lane];
            let t = s + x;
            if s.abs() >= x.abs() {
                self.comp[lane] += (s - t) + x;
            } else {
                self.comp[lane] += (x - t) + s;
            }
            self.sum[lane] = t;
        }
    }

    #[inline]
    pub fn value(&self) -> Scalar {
        c(self.sum[0] + self.comp[0], self.sum[1] + self.comp[1])
    }
}

pub fn neumaier_sum<I: IntoIterator<Item = Scalar>>(terms: I) -> Scalar {
    let mut acc = Neumaier::new();
    for z in terms {
        acc.add(z);
    }
    acc.value()
}

/// Real-valued compensated sum.
pub fn neumaier_sum_f64<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    neumaier_sum(terms.into_iter().map(real)).re
}

/// Largest componentwise absolute difference between two equal-length slices.
pub fn max_abs_diff(a: &[Scalar], b: &[Scalar]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn euclidean_diff(a: &[Scalar], b: &[Scalar]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}
