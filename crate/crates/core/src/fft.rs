//! Iterative radix-2 FFT. Sizes are powers of two, which every grid in this
//! crate guarantees.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

#[derive(Debug, Clone)]
pub(crate) struct Fft {
    n: usize,
    // e^{-2 pi i k / n}, k < n / 2; each entry from its own sin/cos call so
    // the table carries no accumulated recurrence error.
    twiddles: Vec<Complex64>,
}

impl Fft {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT size must be a power of two");
        let twiddles = (0..n / 2)
            .map(|k| {
                let (s, c) = (-2.0 * PI * k as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { n, twiddles }
    }

    /// `X_k = sum_j x_j e^{-2 pi i j k / n}`
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, false);
    }

    /// `x_j = sum_k X_k e^{+2 pi i j k / n}` (no 1/n factor).
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, true);
    }

    fn run(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.n;
        assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
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
            len <<= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let (s, c) = (-2.0 * PI * (j * k) as f64 / n as f64).sin_cos();
                        v * Complex64::new(c, s)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 8, 64] {
            let x: Vec<Complex64> = (0..n)
                .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos() - 0.2))
                .collect();
            let mut y = x.clone();
            Fft::new(n).forward(&mut y);
            let reference = naive_dft(&x);
            for (a, b) in y.iter().zip(&reference) {
                assert!((a - b).norm() < 1e-11, "n = {n}");
            }
            Fft::new(n).inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a / n as f64 - b).norm() < 1e-13);
            }
        }
    }
}
