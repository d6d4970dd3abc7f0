//! Radix-2 discrete Fourier transforms.
//!
//! The inverse transform carries the `1/N` factor and the forward transform is
//! an unscaled sum:
//!
//! ```text
//! idft: x[k] = (1/N) Σ_m X[m] exp(+j 2π m k / N)
//! dft:  X[m] =       Σ_k x[k] exp(-j 2π m k / N)
//! ```
//!
//! so `dft(idft(X)) == X`. Plans (bit-reversal table and twiddles) are cached
//! per thread and per size.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;

/// Precomputed tables for an in-place iterative radix-2 transform of one size.
#[derive(Debug, Clone)]
pub struct Radix2Plan {
    n: usize,
    /// `exp(-j 2π k / n)` for `k < n/2`.
    twiddles: Vec<Complex64>,
    bit_reverse: Vec<usize>,
}

impl Radix2Plan {
    pub fn new(n: usize) -> Result<Radix2Plan> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::InvalidLength(n));
        }
        let bits = n.trailing_zeros();
        let twiddles = (0..n / 2)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        let bit_reverse = (0..n)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Ok(Radix2Plan {
            n,
            twiddles,
            bit_reverse,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unscaled forward transform, in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.process(buf, false);
    }

    /// Unscaled inverse transform (positive exponent), in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.process(buf, true);
    }

    fn process(&self, buf: &mut [Complex64], inverse: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        for (i, &j) in self.bit_reverse.iter().enumerate() {
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.n {
            let stride = self.n / (2 * half);
            for start in (0..self.n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Rc<Radix2Plan>>> = RefCell::new(HashMap::new());
}

fn with_plan<T>(n: usize, f: impl FnOnce(&Radix2Plan) -> T) -> Result<T> {
    let plan = PLANS.with(|plans| -> Result<Rc<Radix2Plan>> {
        if let Some(plan) = plans.borrow().get(&n) {
            return Ok(Rc::clone(plan));
        }
        let plan = Rc::new(Radix2Plan::new(n)?);
        plans.borrow_mut().insert(n, Rc::clone(&plan));
        Ok(plan)
    })?;
    Ok(f(&plan))
}

/// Inverse DFT with `1/N` scaling.
pub fn idft(spectrum: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    let mut buf = spectrum.to_vec();
    with_plan(n, |plan| plan.inverse(&mut buf))?;
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
    Ok(buf)
}

/// Inverse DFT keeping only the real part. Intended for Hermitian spectra.
pub fn idft_real(spectrum: &[Complex64]) -> Result<Vec<f64>> {
    Ok(idft(spectrum)?.into_iter().map(|x| x.re).collect())
}

/// Unscaled forward DFT.
pub fn dft(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut buf = samples.to_vec();
    with_plan(samples.len(), |plan| plan.forward(&mut buf))?;
    Ok(buf)
}

/// Unscaled forward DFT of a real sequence.
pub fn dft_real(samples: &[f64]) -> Result<Vec<Complex64>> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    with_plan(samples.len(), |plan| plan.forward(&mut buf))?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// O(N²) direct summation, sign = -1 for forward, +1 for inverse.
    fn direct(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|m| {
                x.iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let phase = sign * 2.0 * PI * ((m * k) % n) as f64 / n as f64;
                        v * Complex64::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect()
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(
            dft(&[Complex64::default(); 6]),
            Err(Error::InvalidLength(6))
        );
        assert_eq!(idft(&[]), Err(Error::InvalidLength(0)));
    }

    #[test]
    fn single_tone() {
        let mut x = vec![Complex64::default(); 8];
        x[2] = Complex64::new(8.0, 0.0);
        let t = idft(&x).unwrap();
        let expected = [(1., 0.), (0., 1.), (-1., 0.), (0., -1.)];
        for (k, v) in t.iter().enumerate() {
            let (re, im) = expected[k % 4];
            assert!((v.re - re).abs() < 1e-12 && (v.im - im).abs() < 1e-12);
        }
    }

    #[test]
    fn zeros_map_to_zeros() {
        let z = vec![Complex64::default(); 8];
        assert!(idft(&z).unwrap().iter().all(|v| v.norm() == 0.0));
        assert!(dft(&z).unwrap().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 4, 8, 16, 32] {
            for _ in 0..20 {
                let x = random_vec(&mut rng, n);
                let fwd = dft(&x).unwrap();
                let oracle = direct(&x, -1.0);
                for (a, b) in fwd.iter().zip(&oracle) {
                    assert!((a - b).norm() < 1e-9);
                }
                let inv = idft(&x).unwrap();
                let oracle = direct(&x, 1.0);
                for (a, b) in inv.iter().zip(&oracle) {
                    assert!((a - b / n as f64).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn round_trip_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [8, 64, 1024, 4096] {
            let x = random_vec(&mut rng, n);
            let back = dft(&idft(&x).unwrap()).unwrap();
            let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).norm() / scale < 1e-9);
            }
        }
    }

    #[test]
    fn parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [8, 16, 32] {
            let x = random_vec(&mut rng, n);
            let time: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let freq: f64 = dft(&x).unwrap().iter().map(|v| v.norm_sqr()).sum();
            assert!((freq / n as f64 - time).abs() < 1e-9 * time);
        }
    }
}
