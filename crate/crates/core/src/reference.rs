//! Independent high-accuracy references: the Cole-Hopf integral ratio and a
//! pseudospectral integrating-factor RK4 time stepper.
//!
//! Neither route shares anything with the series solvers, so agreement with
//! them is a genuine cross-check rather than a self-consistency statement.

use crate::error::{BurgersError, Result};
use crate::grid::GridField;
use crate::quadrature::integrate_adaptive;
use crate::spectral::Spectral;
use crate::C64;

/// Windowing and tolerance parameters for the Cole-Hopf quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColeHopfSpec {
    /// Half-width of the integration window in units of `sqrt(4 nu t)`.
    /// At the default 8 the discarded Gaussian tail is below 1e-14 relative.
    pub truncation_radius: f64,
    /// Relative tolerance for each of the two adaptive integrals.
    pub tol: f64,
    pub max_subdivisions: usize,
}

impl Default for ColeHopfSpec {
    fn default() -> Self {
        ColeHopfSpec {
            truncation_radius: 8.0,
            tol: 1e-10,
            max_subdivisions: 400,
        }
    }
}

impl ColeHopfSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_radius >= 6.0) {
            return Err(BurgersError::domain("truncation_radius must be at least 6"));
        }
        if !(self.tol > 0.0) {
            return Err(BurgersError::domain("tolerance must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(BurgersError::domain("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Cole-Hopf solution of the `exp(i x)` initial value problem:
///
/// ```text
/// U(x, t) = int (x - x0)/t exp(E(x0)) dx0  /  int exp(E(x0)) dx0
/// E(x0) = -(x - x0)^2 / (4 nu t) - (1/(2 nu)) int_0^{x0} exp(i x') dx'
/// ```
///
/// The inner integral is substituted in closed form,
/// `int_0^{x0} exp(i x') dx' = -i (exp(i x0) - 1)`, and the outer integrals
/// run over `[x - R w, x + R w]` with `w = sqrt(4 nu t)` by adaptive
/// Gauss-Kronrod.
pub fn cole_hopf(nu: f64, x: f64, t: f64, spec: &ColeHopfSpec) -> Result<C64> {
    if !(nu > 0.0) {
        return Err(BurgersError::domain("viscosity must be positive"));
    }
    if !(t > 0.0) {
        return Err(BurgersError::domain("cole_hopf requires t > 0"));
    }
    spec.validate()?;
    let width = (4.0 * nu * t).sqrt();
    let (a, b) = (
        x - spec.truncation_radius * width,
        x + spec.truncation_radius * width,
    );
    let exponent = move |x0: f64| -> C64 {
        let gauss = -(x - x0) * (x - x0) / (4.0 * nu * t);
        // -(1/2nu) * (-i)(e^{i x0} - 1) = (i/2nu)(e^{i x0} - 1)
        let inner = C64::new(0.0, 0.5 / nu) * (C64::new(0.0, x0).exp() - 1.0);
        C64::new(gauss, 0.0) + inner
    };
    let numerator = integrate_adaptive(
        |x0| ((x - x0) / t) * exponent(x0).exp(),
        a,
        b,
        spec.tol,
        spec.max_subdivisions,
    )?;
    let denominator = integrate_adaptive(
        |x0| exponent(x0).exp(),
        a,
        b,
        spec.tol,
        spec.max_subdivisions,
    )?;
    if denominator.value.norm() < 1e-14 {
        return Err(BurgersError::NearSingular(format!(
            "Cole-Hopf denominator {:.3e} at (x, t) = ({x}, {t})",
            denominator.value.norm()
        )));
    }
    Ok(numerator.value / denominator.value)
}

/// Options for [`fd_solve_with`]. `nonlinear: false` drops the convection
/// term, leaving the exactly integrated heat equation (a testing hook).
#[derive(Debug, Clone, Copy)]
pub struct FdOptions {
    pub nonlinear: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions { nonlinear: true }
    }
}

/// Classical explicit-diffusion step bound `0.5 dx^2 / nu` used as the
/// accepted `dt` ceiling. The integrating factor handles diffusion exactly,
/// so this is conservative; it also keeps the RK4 advection step well inside
/// its own stability region for the O(1) velocities treated here.
pub fn fd_stability_bound(nx: usize, period: f64, nu: f64) -> f64 {
    let dx = period / nx as f64;
    0.5 * dx * dx / nu
}

/// Advances `u_t = nu u_xx - u u_x` on a periodic grid with spectral
/// x-derivatives, an exact integrating factor for the diffusion term, and
/// explicit RK4 for the convection term. Returns samples at the requested
/// output times, which each step sequence lands on exactly.
pub fn fd_solve(
    ic: &[C64],
    x0: f64,
    period: f64,
    nu: f64,
    dt: f64,
    outputs: &[f64],
) -> Result<GridField> {
    fd_solve_with(ic, x0, period, nu, dt, outputs, &FdOptions::default())
}

pub fn fd_solve_with(
    ic: &[C64],
    x0: f64,
    period: f64,
    nu: f64,
    dt: f64,
    outputs: &[f64],
    opts: &FdOptions,
) -> Result<GridField> {
    let nx = ic.len();
    if !nx.is_power_of_two() || nx < 8 {
        return Err(BurgersError::domain(format!(
            "fd_solve needs a power-of-two grid of at least 8 nodes, got {nx}"
        )));
    }
    if !(nu > 0.0) || !(period > 0.0) {
        return Err(BurgersError::domain(
            "viscosity and period must be positive",
        ));
    }
    if outputs.is_empty() || outputs.windows(2).any(|w| w[1] <= w[0]) || outputs[0] < 0.0 {
        return Err(BurgersError::domain(
            "output times must be non-negative and increasing",
        ));
    }
    let bound = fd_stability_bound(nx, period, nu);
    if !(dt > 0.0) || dt > bound {
        return Err(BurgersError::domain(format!(
            "dt = {dt} outside (0, {bound:.6e}] for nx = {nx}, nu = {nu}"
        )));
    }
    if ic.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(BurgersError::input("initial samples must be finite"));
    }

    let sp = Spectral::new(nx, x0, period);
    let k2: Vec<f64> = sp.wavenumbers().iter().map(|&k| k * k).collect();
    let mut modes = sp.to_modes(ic);

    let nonlinear_rhs = |modes: &[C64]| -> Vec<C64> {
        let u = sp.to_samples(modes);
        let mut dmodes = modes.to_vec();
        sp.differentiate_modes(&mut dmodes);
        let ux = sp.to_samples(&dmodes);
        let prod: Vec<C64> = u.iter().zip(&ux).map(|(a, b)| -a * b).collect();
        sp.to_modes(&prod)
    };

    let mut field = GridField::zeros_periodic(x0, period, nx, outputs.to_vec());
    let mut t_now = 0.0f64;
    for (level, &t_out) in outputs.iter().enumerate() {
        if t_out > t_now {
            let span = t_out - t_now;
            let steps = (span / dt).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            let e_half: Vec<f64> = k2.iter().map(|&kk| (-nu * kk * 0.5 * h).exp()).collect();
            let e_full: Vec<f64> = e_half.iter().map(|e| e * e).collect();
            for step in 0..steps {
                if opts.nonlinear {
                    let a = nonlinear_rhs(&modes);
                    let stage_b: Vec<C64> = modes
                        .iter()
                        .zip(&a)
                        .zip(&e_half)
                        .map(|((&m, &am), &e)| (m + 0.5 * h * am) * e)
                        .collect();
                    let b = nonlinear_rhs(&stage_b);
                    let stage_c: Vec<C64> = modes
                        .iter()
                        .zip(&b)
                        .zip(&e_half)
                        .map(|((&m, &bm), &e)| m * e + 0.5 * h * bm)
                        .collect();
                    let c = nonlinear_rhs(&stage_c);
                    let stage_d: Vec<C64> = modes
                        .iter()
                        .zip(&c)
                        .zip(&e_half)
                        .zip(&e_full)
                        .map(|(((&m, &cm), &eh), &ef)| m * ef + h * cm * eh)
                        .collect();
                    let d = nonlinear_rhs(&stage_d);
                    for i in 0..nx {
                        modes[i] = modes[i] * e_full[i]
                            + (h / 6.0)
                                * (a[i] * e_full[i] + 2.0 * e_half[i] * (b[i] + c[i]) + d[i]);
                    }
                } else {
                    for i in 0..nx {
                        modes[i] *= e_full[i];
                    }
                }
                if modes.iter().any(|m| !m.re.is_finite() || !m.im.is_finite()) {
                    return Err(BurgersError::BlowUp {
                        t: t_now + (step + 1) as f64 * h,
                    });
                }
            }
            t_now = t_out;
        }
        field
            .level_mut(level)
            .copy_from_slice(&sp.to_samples(&modes));
    }
    Ok(field)
}
