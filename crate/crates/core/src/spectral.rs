//! Fourier analysis of doubly periodic fields sampled in lattice
//! coordinates.
//!
//! Samples are stored row-major: index `k * n + j` holds the value at
//! `(s, t) = (j / n, k / n)`, i.e. at `z = s + t tau`. Rows run along `s`.
//! The `z` derivatives carry the `tau` dependence through the chain rule
//! `d/ds = d/dz + d/dzbar`, `d/dt = tau d/dz + conj(tau) d/dzbar`.

use std::f64::consts::PI;

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

use crate::moduli::Modulus;

pub fn is_valid_grid(n: usize) -> bool {
    n >= 4 && n.is_power_of_two()
}

/// Signed frequency of FFT bin `i`, or `None` for the unmatched Nyquist bin.
pub fn frequency(i: usize, n: usize) -> Option<i64> {
    let half = n / 2;
    if i < half {
        Some(i as i64)
    } else if i == half {
        None
    } else {
        Some(i as i64 - n as i64)
    }
}

fn transform(data: &mut [Complex64], n: usize, inverse: bool) {
    assert_eq!(data.len(), n * n);
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for k in 0..n {
            column[k] = data[k * n + j];
        }
        fft.process(&mut column);
        for k in 0..n {
            data[k * n + j] = column[k];
        }
    }
    if inverse {
        let norm = 1.0 / (n * n) as f64;
        data.iter_mut().for_each(|v| *v *= norm);
    }
}

pub fn forward(samples: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform(&mut data, n, false);
    data
}

pub fn inverse(spectrum: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut data = spectrum.to_vec();
    transform(&mut data, n, true);
    data
}

/// Fourier multipliers of the first-order operators on the torus of
/// modulus `tau`, for the mode `exp(2 pi i (k1 s + k2 t))`.
#[derive(Debug, Clone, Copy)]
pub struct Multipliers {
    tau: Complex64,
    im: f64,
}

impl Multipliers {
    pub fn new(tau: Modulus) -> Self {
        Self {
            tau: tau.as_complex(),
            im: tau.im(),
        }
    }

    /// `d/dz`: `2 pi i (conj(tau) k1 - k2) / (conj(tau) - tau)`.
    pub fn dz(&self, k1: i64, k2: i64) -> Complex64 {
        -PI * (self.tau.conj() * k1 as f64 - k2 as f64) / self.im
    }

    /// `d/dzbar`: `2 pi i (tau k1 - k2) / (tau - conj(tau))`.
    pub fn dzbar(&self, k1: i64, k2: i64) -> Complex64 {
        PI * (self.tau * k1 as f64 - k2 as f64) / self.im
    }

    /// `d^2/dz dzbar`, a quarter of the Laplacian; real and nonpositive.
    pub fn dzdzbar(&self, k1: i64, k2: i64) -> f64 {
        -PI * PI * (self.tau * k1 as f64 - k2 as f64).norm_sqr() / (self.im * self.im)
    }
}

/// Multiplies every bin by `symbol(k1, k2)`; Nyquist bins are zeroed.
pub fn apply_symbol(
    spectrum: &mut [Complex64],
    n: usize,
    symbol: impl Fn(i64, i64) -> Complex64,
) {
    for k in 0..n {
        for j in 0..n {
            let v = &mut spectrum[k * n + j];
            match (frequency(j, n), frequency(k, n)) {
                (Some(k1), Some(k2)) => *v *= symbol(k1, k2),
                _ => *v = Complex64::new(0.0, 0.0),
            }
        }
    }
}

/// Applies a spectral operator to grid samples.
pub fn apply(
    samples: &[Complex64],
    n: usize,
    symbol: impl Fn(i64, i64) -> Complex64,
) -> Vec<Complex64> {
    let mut spec = forward(samples, n);
    apply_symbol(&mut spec, n, symbol);
    inverse(&spec, n)
}

/// Trigonometric interpolation of an `n`-grid onto a finer `m`-grid.
/// A Nyquist bin of the source is split evenly between `+n/2` and `-n/2`.
pub fn upsample(samples: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    assert!(m >= n);
    if m == n {
        return samples.to_vec();
    }
    let spec = forward(samples, n);
    let half = (n / 2) as i64;
    let targets = |i: usize| -> Vec<(i64, f64)> {
        match frequency(i, n) {
            Some(f) => vec![(f, 1.0)],
            None => vec![(half, 0.5), (-half, 0.5)],
        }
    };
    let bin = |f: i64| -> usize {
        if f >= 0 {
            f as usize
        } else {
            (m as i64 + f) as usize
        }
    };
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    let scale = (m * m) as f64 / (n * n) as f64;
    for k in 0..n {
        for j in 0..n {
            let v = spec[k * n + j] * scale;
            for (f1, w1) in targets(j) {
                for (f2, w2) in targets(k) {
                    out[bin(f2) * m + bin(f1)] += v * (w1 * w2);
                }
            }
        }
    }
    inverse(&out, m)
}

pub fn mean(samples: &[Complex64]) -> Complex64 {
    samples.iter().sum::<Complex64>() / samples.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n * n);
        for k in 0..n {
            for j in 0..n {
                out.push(f(j as f64 / n as f64, k as f64 / n as f64));
            }
        }
        out
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn frequencies() {
        let f: Vec<_> = (0..8).map(|i| frequency(i, 8)).collect();
        assert_eq!(
            f,
            vec![Some(0), Some(1), Some(2), Some(3), None, Some(-3), Some(-2), Some(-1)]
        );
    }

    #[test]
    fn round_trip() {
        let n = 16;
        let g = grid(n, |s, t| Complex64::new((2.0 * PI * s).sin() + t, s * t));
        let back = inverse(&forward(&g, n), n);
        assert!(max_err(&g, &back) < 1e-14);
    }

    #[test]
    fn single_mode_sits_in_its_bin() {
        let n = 8;
        let g = grid(n, |s, t| Complex64::from_polar(1.0, 2.0 * PI * (2.0 * s - t)));
        let spec = forward(&g, n);
        // k1 = 2 (column 2), k2 = -1 (row n-1)
        let idx = (n - 1) * n + 2;
        assert!((spec[idx] - Complex64::new((n * n) as f64, 0.0)).norm() < 1e-10);
        let rest: f64 = spec
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.norm())
            .sum();
        assert!(rest < 1e-10);
    }

    #[test]
    fn multipliers_match_hand_derivatives_on_a_sheared_torus() {
        let tau = Modulus::new(0.4, 1.3).unwrap();
        let m = Multipliers::new(tau);
        let t = tau.as_complex();
        for (k1, k2) in [(1, 0), (0, 1), (2, -3)] {
            let ds = Complex64::new(0.0, 2.0 * PI * k1 as f64);
            let dt = Complex64::new(0.0, 2.0 * PI * k2 as f64);
            // d/ds = dz + dzbar, d/dt = tau dz + conj(tau) dzbar
            assert!((m.dz(k1, k2) + m.dzbar(k1, k2) - ds).norm() < 1e-12);
            assert!((t * m.dz(k1, k2) + t.conj() * m.dzbar(k1, k2) - dt).norm() < 1e-12);
            let lap = m.dz(k1, k2) * m.dzbar(k1, k2);
            assert!((lap - m.dzdzbar(k1, k2)).norm() < 1e-10);
        }
    }

    #[test]
    fn upsample_preserves_band_limited_fields() {
        let f = |s: f64, t: f64| {
            Complex64::new((2.0 * PI * s).cos(), 0.0)
                + Complex64::from_polar(0.5, 2.0 * PI * (s + 3.0 * t))
        };
        let coarse = grid(8, f);
        let fine = upsample(&coarse, 8, 32);
        assert!(max_err(&fine, &grid(32, f)) < 1e-13);

        // a Nyquist mode cos(pi n s) interpolates to the real cosine
        let g = |s: f64, _t: f64| Complex64::new((2.0 * PI * 4.0 * s).cos(), 0.0);
        let fine = upsample(&grid(8, g), 8, 16);
        assert!(max_err(&fine, &grid(16, g)) < 1e-13);
    }
}
