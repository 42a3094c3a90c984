//! FFT-based helpers for periodic fields: forward/inverse transforms with
//! amplitude normalization, spectral differentiation, and trigonometric
//! interpolation at off-grid points.
//!
//! Conventions: samples live at `x_j = x0 + j L / n`, and `modes[k]` is the
//! amplitude of `exp(i kappa_k (x - x0))` with `kappa_k = 2 pi k' / L`,
//! `k'` the signed mode index. The Nyquist multiplier is zeroed for odd
//! derivatives, which keeps the collocation derivative skew-symmetric.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

pub struct Spectral {
    nx: usize,
    x0: f64,
    period: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Signed wavenumbers 2 pi k' / L (Nyquist kept at its true magnitude).
    wavenumbers: Vec<f64>,
    /// Derivative multipliers i k (Nyquist zeroed).
    deriv_mult: Vec<C64>,
}

impl Spectral {
    pub fn new(nx: usize, x0: f64, period: f64) -> Self {
        assert!(nx >= 2 && period > 0.0);
        let mut planner = FftPlanner::new();
        let base = 2.0 * std::f64::consts::PI / period;
        let wavenumbers: Vec<f64> = (0..nx)
            .map(|j| {
                let signed = if j <= nx / 2 {
                    j as isize
                } else {
                    j as isize - nx as isize
                };
                base * signed as f64
            })
            .collect();
        let deriv_mult = wavenumbers
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                if nx % 2 == 0 && j == nx / 2 {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(0.0, k)
                }
            })
            .collect();
        Spectral {
            nx,
            x0,
            period,
            forward: planner.plan_fft_forward(nx),
            inverse: planner.plan_fft_inverse(nx),
            wavenumbers,
            deriv_mult,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Physical samples -> mode amplitudes.
    pub fn to_modes(&self, samples: &[C64]) -> Vec<C64> {
        debug_assert_eq!(samples.len(), self.nx);
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.nx as f64;
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    /// Mode amplitudes -> physical samples.
    pub fn to_samples(&self, modes: &[C64]) -> Vec<C64> {
        debug_assert_eq!(modes.len(), self.nx);
        let mut buf = modes.to_vec();
        self.inverse.process(&mut buf);
        buf
    }

    /// Spectral x-derivative of physical samples.
    pub fn derivative(&self, samples: &[C64]) -> Vec<C64> {
        let mut modes = self.to_modes(samples);
        for (m, d) in modes.iter_mut().zip(&self.deriv_mult) {
            *m *= d;
        }
        self.to_samples(&modes)
    }

    /// Applies the derivative multipliers in place to mode amplitudes.
    pub fn differentiate_modes(&self, modes: &mut [C64]) {
        for (m, d) in modes.iter_mut().zip(&self.deriv_mult) {
            *m *= d;
        }
    }

    /// Trigonometric interpolation of a mode vector at an arbitrary point.
    pub fn eval_modes_at(&self, modes: &[C64], x: f64) -> C64 {
        let rel = x - self.x0;
        let mut acc = C64::new(0.0, 0.0);
        for (m, &k) in modes.iter().zip(&self.wavenumbers) {
            acc += m * C64::new(0.0, k * rel).exp();
        }
        acc
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nx: usize, x0: f64, period: f64) -> Vec<f64> {
        (0..nx)
            .map(|j| x0 + period * j as f64 / nx as f64)
            .collect()
    }

    #[test]
    fn derivative_of_single_mode_is_exact() {
        let nx = 32;
        let period = 2.0 * std::f64::consts::PI;
        let sp = Spectral::new(nx, -std::f64::consts::PI, period);
        let xs = grid(nx, -std::f64::consts::PI, period);
        let samples: Vec<C64> = xs.iter().map(|&x| C64::new(0.0, 3.0 * x).exp()).collect();
        let deriv = sp.derivative(&samples);
        for (d, s) in deriv.iter().zip(&samples) {
            let expected = C64::new(0.0, 3.0) * s;
            assert!((d - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn collocation_product_mean_vanishes() {
        // sum_j u_j (Du)_j = 0 exactly up to roundoff for any complex u.
        let nx = 64;
        let sp = Spectral::new(nx, 0.0, 2.0 * std::f64::consts::PI);
        let xs = grid(nx, 0.0, 2.0 * std::f64::consts::PI);
        let u: Vec<C64> = xs
            .iter()
            .map(|&x| C64::new((2.0 * x).sin() + 0.3 * (5.0 * x).cos(), (3.0 * x).cos()))
            .collect();
        let du = sp.derivative(&u);
        let dot: C64 = u.iter().zip(&du).map(|(a, b)| a * b).sum();
        assert!(dot.norm() < 1e-11, "skew-symmetry violated: {dot}");
    }

    #[test]
    fn trig_interpolation_matches_samples_and_offgrid() {
        let nx = 16;
        let x0 = 1.0;
        let period = 4.0;
        let sp = Spectral::new(nx, x0, period);
        let xs = grid(nx, x0, period);
        let f = |x: f64| {
            C64::new(0.0, 2.0 * std::f64::consts::PI / period * x).exp()
                + C64::new(0.5, 0.0)
                    * C64::new(0.0, -2.0 * 2.0 * std::f64::consts::PI / period * x).exp()
        };
        let samples: Vec<C64> = xs.iter().map(|&x| f(x)).collect();
        let modes = sp.to_modes(&samples);
        for (j, &x) in xs.iter().enumerate() {
            assert!((sp.eval_modes_at(&modes, x) - samples[j]).norm() < 1e-12);
        }
        let x_off = x0 + 0.3137 * period;
        assert!((sp.eval_modes_at(&modes, x_off) - f(x_off)).norm() < 1e-12);
    }
}
