//! Generic numerical realization of the recursive Green's-function solution
//! on the real line: `f_1` is the initial condition propagated by the heat
//! kernel, and each later element solves an inhomogeneous diffusion equation
//! whose source is the Cauchy convolution of the earlier elements,
//!
//! ```text
//! f_m(x, t) = -int_0^t int G(x, t; x0, t0)
//!             sum_{l=1}^{m-1} f_l(x0, t0) d/dx0 f_{m-l}(x0, t0)  dx0 dt0
//! ```
//!
//! Terms live on a periodic space-time grid. The source is sampled at the
//! grid nodes (spectral x-derivatives) and interpolated in time by a C^1
//! cubic Hermite with fourth-order slope estimates.
//!
//! Two convolution backends realize the x0 integral:
//!
//! * [`ConvolutionBackend::PeriodicSpectral`] (default): for a periodic
//!   source the free-space kernel convolution equals the periodic heat
//!   propagator, i.e. exact `exp(-nu k^2 dt)` damping per Fourier mode. The
//!   time integral is then evaluated segment-exactly against the cubic
//!   interpolant (exponential integrating factor), so the only discretization
//!   error is the O(dt^4) source interpolation.
//! * [`ConvolutionBackend::GaussHermite`]: the literal Gauss-Hermite rule
//!   applied to the trigonometric interpolant of the source after the
//!   substitution `x0 = x + 2 sqrt(nu (t - t0)) u`, with the time integral on
//!   `t0 = t - sigma^2` (which removes both the kernel's inverse-square-root
//!   endpoint singularity and the sqrt non-analyticity) by Gauss-Legendre in
//!   sigma. Kept as an independent cross-check of the spectral route.

use crate::closed_form::EvalPoint;
use crate::error::{BurgersError, Result};
use crate::grid::GridField;
use crate::quadrature::{gauss_hermite, gauss_legendre};
use crate::spectral::Spectral;
use crate::C64;

/// Arguments of the free-space heat kernel `G(x, t; x0, t0)`.
#[derive(Debug, Clone, Copy)]
pub struct HeatKernelParams {
    pub nu: f64,
    pub x: f64,
    pub t: f64,
    pub x0: f64,
    pub t0: f64,
}

/// Kernel value plus a flag marking the delta-function limit `t -> t0`,
/// which callers must treat analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub near_singular: bool,
}

/// The free-space Green's function of the diffusion operator:
/// `(4 pi nu (t - t0))^{-1/2} exp(-(x - x0)^2 / (4 nu (t - t0)))` for
/// `t > t0` and zero otherwise (Heaviside factor).
pub fn heat_kernel(p: &HeatKernelParams) -> KernelValue {
    if p.t <= p.t0 {
        return KernelValue {
            value: 0.0,
            near_singular: p.t == p.t0,
        };
    }
    let dt = p.t - p.t0;
    let dx = p.x - p.x0;
    let value = (4.0 * std::f64::consts::PI * p.nu * dt).sqrt().recip()
        * (-dx * dx / (4.0 * p.nu * dt)).exp();
    KernelValue {
        value,
        near_singular: false,
    }
}

/// Spatial convolution backend for [`next_term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConvolutionBackend {
    #[default]
    PeriodicSpectral,
    GaussHermite,
}

/// Node counts and tolerance targets for all integral evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub hermite_nodes: usize,
    pub time_nodes: usize,
    pub sub_tol: f64,
    pub backend: ConvolutionBackend,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            hermite_nodes: 64,
            time_nodes: 32,
            sub_tol: 1e-6,
            backend: ConvolutionBackend::PeriodicSpectral,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.hermite_nodes < 8 {
            return Err(BurgersError::domain("hermite_nodes must be at least 8"));
        }
        if self.time_nodes < 4 {
            return Err(BurgersError::domain("time_nodes must be at least 4"));
        }
        if !(self.sub_tol > 0.0) {
            return Err(BurgersError::domain("sub_tol must be positive"));
        }
        Ok(())
    }
}

/// `f_1(x, t) = int G(x, t; x0, 0) ic(x0) dx0`, evaluated by Gauss-Hermite
/// after `x0 = x + 2 sqrt(nu t) u`. At `t = 0` the kernel is a delta and the
/// initial condition is returned exactly.
pub fn first_term<F: Fn(f64) -> C64>(
    ic: F,
    nu: f64,
    p: &EvalPoint,
    q: &QuadratureSpec,
) -> Result<C64> {
    if !(nu > 0.0) {
        return Err(BurgersError::domain("viscosity must be positive"));
    }
    q.validate()?;
    if p.t == 0.0 {
        let v = ic(p.x);
        return check_sample(v, p.x);
    }
    let (nodes, weights) = gauss_hermite(q.hermite_nodes);
    let width = 2.0 * (nu * p.t).sqrt();
    let mut acc = C64::new(0.0, 0.0);
    for (&u, &w) in nodes.iter().zip(&weights) {
        let v = ic(p.x + width * u);
        check_sample(v, p.x + width * u)?;
        acc += w * v;
    }
    Ok(acc / std::f64::consts::PI.sqrt())
}

fn check_sample(v: C64, x: f64) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(BurgersError::input(format!(
            "initial condition is not finite at x = {x}"
        )))
    }
}

/// Cauchy source `sum_{l=1}^{m-1} f_l d/dx f_{m-l}` at one grid node, with
/// the derivative taken spectrally on the periodic grid.
pub fn source_at(terms: &[GridField], m: usize, ix: usize, it: usize) -> Result<C64> {
    if m < 2 {
        return Err(BurgersError::domain("the source exists for m >= 2 only"));
    }
    if terms.len() < m - 1 {
        return Err(BurgersError::Dependency(format!(
            "source for m = {m} needs terms 1..={}, got {}",
            m - 1,
            terms.len()
        )));
    }
    let grid = &terms[0];
    let period = grid
        .period()
        .ok_or_else(|| BurgersError::domain("source requires a periodic grid"))?;
    for t in terms.iter().take(m - 1) {
        if !t.same_grid(grid) {
            return Err(BurgersError::GridMismatch(
                "source terms live on different grids".into(),
            ));
        }
    }
    if ix >= grid.nx() || it >= grid.nt() {
        return Err(BurgersError::domain(format!(
            "node ({ix}, {it}) outside the grid"
        )));
    }
    let sp = Spectral::new(grid.nx(), grid.xs()[0], period);
    let mut acc = C64::new(0.0, 0.0);
    for l in 1..m {
        let deriv_level = sp.derivative(terms[m - l - 1].level(it));
        acc += terms[l - 1].value(ix, it) * deriv_level[ix];
    }
    Ok(acc)
}

struct Engine {
    sp: Spectral,
    ts: Vec<f64>,
    dt: f64,
    nx: usize,
}

impl Engine {
    fn new(template: &GridField, min_nt: usize) -> Result<Self> {
        let period = template
            .period()
            .ok_or_else(|| BurgersError::domain("the recursion engine needs a periodic grid"))?;
        let ts = template.ts().to_vec();
        let nt = ts.len();
        if nt < min_nt {
            return Err(BurgersError::domain(format!(
                "the recursion engine needs at least {min_nt} time levels, got {nt}"
            )));
        }
        if ts[0] != 0.0 {
            return Err(BurgersError::domain("time levels must start at t = 0"));
        }
        let dt = ts[1] - ts[0];
        for j in 1..nt {
            if ((ts[j] - ts[j - 1]) - dt).abs() > 1e-12 * ts[nt - 1].max(1.0) {
                return Err(BurgersError::domain("time levels must be uniformly spaced"));
            }
        }
        if template.nx() < 4 {
            return Err(BurgersError::domain("need at least 4 spatial nodes"));
        }
        Ok(Engine {
            sp: Spectral::new(template.nx(), template.xs()[0], period),
            ts,
            dt,
            nx: template.nx(),
        })
    }

    /// Source mode amplitudes per time level for order `m`.
    fn source_modes(&self, terms: &[GridField], m: usize) -> Vec<Vec<C64>> {
        let nt = self.ts.len();
        let mut derivs: Vec<Vec<Vec<C64>>> = Vec::with_capacity(m - 1);
        for term in terms.iter().take(m - 1) {
            derivs.push((0..nt).map(|j| self.sp.derivative(term.level(j))).collect());
        }
        (0..nt)
            .map(|j| {
                let mut level = vec![C64::new(0.0, 0.0); self.nx];
                for l in 1..m {
                    let f = terms[l - 1].level(j);
                    let df = &derivs[m - l - 1][j];
                    for i in 0..self.nx {
                        level[i] += f[i] * df[i];
                    }
                }
                self.sp.to_modes(&level)
            })
            .collect()
    }

    /// Fourth-order slope estimates for uniform samples (5-point stencils,
    /// one-sided at the edges). Requires at least 5 samples.
    fn hermite_slopes(values: &[C64], h: f64) -> Vec<C64> {
        let n = values.len();
        debug_assert!(n >= 5);
        let mut d = vec![C64::new(0.0, 0.0); n];
        let inv = 1.0 / (12.0 * h);
        d[0] = (-25.0 * values[0] + 48.0 * values[1] - 36.0 * values[2] + 16.0 * values[3]
            - 3.0 * values[4])
            * inv;
        d[1] = (-3.0 * values[0] - 10.0 * values[1] + 18.0 * values[2] - 6.0 * values[3]
            + values[4])
            * inv;
        for j in 2..n - 2 {
            d[j] =
                (values[j - 2] - 8.0 * values[j - 1] + 8.0 * values[j + 1] - values[j + 2]) * inv;
        }
        d[n - 2] = (3.0 * values[n - 1] + 10.0 * values[n - 2] - 18.0 * values[n - 3]
            + 6.0 * values[n - 4]
            - values[n - 5])
            * inv;
        d[n - 1] = (25.0 * values[n - 1] - 48.0 * values[n - 2] + 36.0 * values[n - 3]
            - 16.0 * values[n - 4]
            + 3.0 * values[n - 5])
            * inv;
        d
    }

    /// Exact moments `I_p = int_0^h exp(-a (h - tau)) tau^p dtau`, p = 0..3.
    fn decay_moments(a: f64, h: f64) -> [f64; 4] {
        let ah = a * h;
        if ah < 1.0 {
            // Taylor series in ah: I_p = h^{p+1} sum_q (-ah)^q p! / (p+q+1)!
            let mut out = [0.0; 4];
            for (p, slot) in out.iter_mut().enumerate() {
                let mut term = 1.0 / (p as f64 + 1.0); // q = 0 value of p!/(p+1)!
                let mut sum = term;
                for q in 1..40 {
                    term *= -ah / (p as f64 + q as f64 + 1.0);
                    sum += term;
                    if term.abs() < 1e-18 * sum.abs().max(1e-30) {
                        break;
                    }
                }
                *slot = sum * h.powi(p as i32 + 1);
            }
            out
        } else {
            // Upward recursion I_p = (h^p - p I_{p-1}) / a, stable for ah >= 1.
            let e = (-ah).exp();
            let mut out = [0.0; 4];
            out[0] = (1.0 - e) / a;
            for p in 1..4 {
                out[p] = (h.powi(p as i32) - p as f64 * out[p - 1]) / a;
            }
            out
        }
    }

    /// Integrates one mode against the exact integrating factor:
    /// `A(t_j) = int_0^{t_j} exp(-a (t_j - t0)) s(t0) dt0` at every level,
    /// with `s` the C^1 cubic Hermite interpolant of the samples.
    fn mode_history(&self, a: f64, samples: &[C64], stride: usize) -> Vec<C64> {
        let idx: Vec<usize> = (0..samples.len()).step_by(stride).collect();
        let vals: Vec<C64> = idx.iter().map(|&j| samples[j]).collect();
        let h = self.dt * stride as f64;
        let slopes = Self::hermite_slopes(&vals, h);
        let moments = Self::decay_moments(a, h);
        let decay = (-a * h).exp();
        let mut acc = C64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(vals.len());
        out.push(acc);
        for seg in 0..vals.len() - 1 {
            let f0 = vals[seg];
            let f1 = vals[seg + 1];
            let d0 = slopes[seg];
            let d1 = slopes[seg + 1];
            // cubic p(tau) = c0 + c1 tau + c2 tau^2 + c3 tau^3 on [0, h]
            let c0 = f0;
            let c1 = d0;
            let c2 = (3.0 * (f1 - f0) / h - 2.0 * d0 - d1) / h;
            let c3 = (2.0 * (f0 - f1) / h + d0 + d1) / (h * h);
            let seg_int = c0 * moments[0] + c1 * moments[1] + c2 * moments[2] + c3 * moments[3];
            acc = acc * decay + seg_int;
            out.push(acc);
        }
        out
    }

    /// Spectral-backend solve: physical levels of `f_m` at strided levels.
    fn spectral_levels(&self, source_modes: &[Vec<C64>], nu: f64, stride: usize) -> Vec<Vec<C64>> {
        let n_levels = (0..source_modes.len()).step_by(stride).count();
        let mut mode_histories = vec![vec![C64::new(0.0, 0.0); self.nx]; n_levels];
        for (k, &kappa) in self.sp.wavenumbers().iter().enumerate() {
            let samples: Vec<C64> = source_modes.iter().map(|lvl| lvl[k]).collect();
            let hist = self.mode_history(nu * kappa * kappa, &samples, stride);
            for (j, v) in hist.into_iter().enumerate() {
                mode_histories[j][k] = -v;
            }
        }
        mode_histories
            .iter()
            .map(|modes| self.sp.to_samples(modes))
            .collect()
    }

    /// Gauss-Hermite-backend solve at one time level.
    ///
    /// Algebraically this is the literal Gauss-Hermite rule applied to the
    /// trigonometric interpolant of the source (the pointwise rule and the
    /// per-mode factorization are the same sums reordered), with the time
    /// integral on `t0 = t - sigma^2` by Gauss-Legendre.
    fn hermite_level(
        &self,
        source_modes: &[Vec<C64>],
        slopes_per_mode: &[Vec<C64>],
        nu: f64,
        t: f64,
        q: &QuadratureSpec,
        sigma_nodes: usize,
    ) -> Vec<C64> {
        if t == 0.0 {
            return vec![C64::new(0.0, 0.0); self.nx];
        }
        let (gl_nodes, gl_weights) = gauss_legendre(sigma_nodes);
        let (gh_nodes, gh_weights) = gauss_hermite(q.hermite_nodes);
        let sqrt_t = t.sqrt();
        let mut out_modes = vec![C64::new(0.0, 0.0); self.nx];
        for (&xi, &w) in gl_nodes.iter().zip(&gl_weights) {
            let sigma = 0.5 * sqrt_t * (xi + 1.0);
            let weight = 0.5 * sqrt_t * w * 2.0 * sigma;
            let t0 = (t - sigma * sigma).max(0.0);
            for (k, &kappa) in self.sp.wavenumbers().iter().enumerate() {
                let s_k = self.eval_interpolant(source_modes, slopes_per_mode, k, t0);
                // Gauss-Hermite value of (1/sqrt(pi)) int exp(-u^2 + i c u) du
                let c = 2.0 * nu.sqrt() * sigma * kappa;
                let mut damp = 0.0;
                for (&u, &wu) in gh_nodes.iter().zip(&gh_weights) {
                    damp += wu * (c * u).cos();
                }
                damp /= std::f64::consts::PI.sqrt();
                out_modes[k] -= weight * damp * s_k;
            }
        }
        self.sp.to_samples(&out_modes)
    }

    /// Per-mode Hermite slopes for time interpolation of the source.
    fn interpolants(&self, source_modes: &[Vec<C64>]) -> Vec<Vec<C64>> {
        (0..self.nx)
            .map(|k| {
                let samples: Vec<C64> = source_modes.iter().map(|lvl| lvl[k]).collect();
                Self::hermite_slopes(&samples, self.dt)
            })
            .collect()
    }

    fn eval_interpolant(
        &self,
        source_modes: &[Vec<C64>],
        slopes: &[Vec<C64>],
        k: usize,
        t0: f64,
    ) -> C64 {
        let nt = self.ts.len();
        let seg = ((t0 / self.dt).floor() as usize).min(nt - 2);
        let tau = t0 - self.ts[seg];
        let h = self.dt;
        let f0 = source_modes[seg][k];
        let f1 = source_modes[seg + 1][k];
        let d0 = slopes[k][seg];
        let d1 = slopes[k][seg + 1];
        let c2 = (3.0 * (f1 - f0) / h - 2.0 * d0 - d1) / h;
        let c3 = (2.0 * (f0 - f1) / h + d0 + d1) / (h * h);
        f0 + tau * (d0 + tau * (c2 + tau * c3))
    }
}

/// `f_m` for `m >= 2` from the already computed `f_1 .. f_{m-1}`.
pub fn next_term(
    m: usize,
    prior: &[GridField],
    nu: f64,
    template: &GridField,
    q: &QuadratureSpec,
) -> Result<GridField> {
    if m < 2 {
        return Err(BurgersError::domain("next_term starts at m = 2"));
    }
    if !(nu > 0.0) {
        return Err(BurgersError::domain("viscosity must be positive"));
    }
    q.validate()?;
    if prior.len() < m - 1 {
        return Err(BurgersError::Dependency(format!(
            "next_term(m = {m}) needs terms 1..={}, got {}",
            m - 1,
            prior.len()
        )));
    }
    for p in prior.iter().take(m - 1) {
        if !p.same_grid(template) {
            return Err(BurgersError::GridMismatch(
                "prior terms do not match the grid template".into(),
            ));
        }
    }
    let engine = Engine::new(template, 9)?;
    let source_modes = engine.source_modes(prior, m);
    let nt = engine.ts.len();

    let mut out = template.clone();
    match q.backend {
        ConvolutionBackend::PeriodicSpectral => {
            let fine = engine.spectral_levels(&source_modes, nu, 1);
            // Richardson-style estimate against a doubled time step.
            let coarse = engine.spectral_levels(&source_modes, nu, 2);
            let mut worst = (0.0f64, 0usize, 0usize);
            for (cj, j) in (0..nt).step_by(2).enumerate() {
                for i in 0..engine.nx {
                    let d = (fine[j][i] - coarse[cj][i]).norm() / 15.0;
                    if d > worst.0 {
                        worst = (d, i, j);
                    }
                }
            }
            if worst.0 > q.sub_tol {
                return Err(BurgersError::Accuracy {
                    context: format!(
                        "next_term(m = {m}) time integration at node (x = {:.6}, t = {:.6})",
                        template.xs()[worst.1],
                        template.ts()[worst.2]
                    ),
                    estimate: worst.0,
                    tolerance: q.sub_tol,
                });
            }
            for (j, level) in fine.into_iter().enumerate() {
                out.level_mut(j).copy_from_slice(&level);
            }
        }
        ConvolutionBackend::GaussHermite => {
            let slopes = engine.interpolants(&source_modes);
            let mut worst = (0.0f64, 0usize, 0usize);
            for j in 0..nt {
                let level =
                    engine.hermite_level(&source_modes, &slopes, nu, engine.ts[j], q, q.time_nodes);
                let refined = engine.hermite_level(
                    &source_modes,
                    &slopes,
                    nu,
                    engine.ts[j],
                    q,
                    2 * q.time_nodes,
                );
                for i in 0..engine.nx {
                    let d = (level[i] - refined[i]).norm();
                    if d > worst.0 {
                        worst = (d, i, j);
                    }
                }
                out.level_mut(j).copy_from_slice(&refined);
            }
            if worst.0 > q.sub_tol {
                return Err(BurgersError::Accuracy {
                    context: format!(
                        "next_term(m = {m}) sigma quadrature at node (x = {:.6}, t = {:.6})",
                        template.xs()[worst.1],
                        template.ts()[worst.2]
                    ),
                    estimate: worst.0,
                    tolerance: q.sub_tol,
                });
            }
        }
    }
    Ok(out)
}

/// Output of [`recurse`]: the sequence elements and their partial sum.
pub struct GreensSolution {
    pub terms: Vec<GridField>,
    pub partial_sum: GridField,
}

/// Builds `f_1 .. f_N` on the grid template (first term from the initial
/// condition, later terms by [`next_term`]) plus the partial-sum field.
pub fn recurse<F: Fn(f64) -> C64>(
    ic: F,
    nu: f64,
    template: &GridField,
    n_terms: usize,
    q: &QuadratureSpec,
) -> Result<GreensSolution> {
    if n_terms < 1 {
        return Err(BurgersError::domain("recurse needs at least one term"));
    }
    if !(nu > 0.0) {
        return Err(BurgersError::domain("viscosity must be positive"));
    }
    q.validate()?;
    let engine = Engine::new(template, 9)?;

    let mut f1 = template.clone();
    match q.backend {
        ConvolutionBackend::PeriodicSpectral => {
            // Exact per-mode heat propagation of the sampled initial data;
            // this is the same integral first_term evaluates, done exactly
            // for the periodic case.
            let samples: Vec<C64> = template.xs().iter().map(|&x| ic(x)).collect();
            for (i, v) in samples.iter().enumerate() {
                check_sample(*v, template.xs()[i])?;
            }
            let modes0 = engine.sp.to_modes(&samples);
            for j in 0..engine.ts.len() {
                let t = engine.ts[j];
                let damped: Vec<C64> = modes0
                    .iter()
                    .zip(engine.sp.wavenumbers())
                    .map(|(&m0, &k)| m0 * (-nu * k * k * t).exp())
                    .collect();
                f1.level_mut(j)
                    .copy_from_slice(&engine.sp.to_samples(&damped));
            }
        }
        ConvolutionBackend::GaussHermite => {
            for j in 0..engine.ts.len() {
                for i in 0..engine.nx {
                    let p = EvalPoint::new(template.xs()[i], engine.ts[j])?;
                    let v = first_term(&ic, nu, &p, q)?;
                    f1.set(i, j, v);
                }
            }
        }
    }

    let mut terms = vec![f1];
    for m in 2..=n_terms {
        let fm = next_term(m, &terms, nu, template, q)?;
        terms.push(fm);
    }

    let mut partial = template.clone();
    for j in 0..template.nt() {
        let mut level = vec![C64::new(0.0, 0.0); template.nx()];
        for term in &terms {
            for (acc, v) in level.iter_mut().zip(term.level(j)) {
                *acc += v;
            }
        }
        partial.level_mut(j).copy_from_slice(&level);
    }
    Ok(GreensSolution {
        terms,
        partial_sum: partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{self, SolverConfig};

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn exp_ic(x: f64) -> C64 {
        C64::new(0.0, x).exp()
    }

    fn uniform_ts(t_end: f64, nt: usize) -> Vec<f64> {
        (0..nt)
            .map(|j| t_end * j as f64 / (nt - 1) as f64)
            .collect()
    }

    fn sup_diff(a: &GridField, b: &GridField) -> f64 {
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn kernel_normalization_symmetry_and_peak() {
        // int G dx0 = 1: under x0 = x - 2 sqrt(nu dt) u this is the
        // normalized Gauss-Hermite weight sum.
        let (_, weights) = gauss_hermite(48);
        let total: f64 = weights.iter().sum::<f64>() / std::f64::consts::PI.sqrt();
        assert!((total - 1.0).abs() < 1e-12);

        let p = HeatKernelParams {
            nu: 0.3,
            x: 0.7,
            t: 1.5,
            x0: -0.4,
            t0: 0.5,
        };
        let q = HeatKernelParams {
            nu: 0.3,
            x: -0.4,
            t: 1.5,
            x0: 0.7,
            t0: 0.5,
        };
        assert_eq!(heat_kernel(&p).value, heat_kernel(&q).value);

        let peak = HeatKernelParams {
            nu: 0.3,
            x: 0.0,
            t: 1.0,
            x0: 0.0,
            t0: 0.0,
        };
        let expected = (4.0 * std::f64::consts::PI * 0.3).sqrt().recip();
        assert!((heat_kernel(&peak).value - expected).abs() < 1e-15);

        let degenerate = HeatKernelParams {
            nu: 0.3,
            x: 0.0,
            t: 1.0,
            x0: 0.0,
            t0: 1.0,
        };
        let kv = heat_kernel(&degenerate);
        assert_eq!(kv.value, 0.0);
        assert!(kv.near_singular);
        let acausal = HeatKernelParams {
            nu: 0.3,
            x: 0.0,
            t: 0.5,
            x0: 0.0,
            t0: 1.0,
        };
        assert_eq!(
            heat_kernel(&acausal),
            KernelValue {
                value: 0.0,
                near_singular: false
            }
        );
    }

    #[test]
    fn first_term_reproduces_known_convolutions() {
        let q = QuadratureSpec::default();
        // exp(i x) smears to exp(i x - nu t)
        let p = EvalPoint::new(0.5, 0.7).unwrap();
        let got = first_term(exp_ic, 1.0, &p, &q).unwrap();
        let expected = C64::new(-0.7, 0.5).exp();
        assert!((got - expected).norm() <= 1e-10);

        // constants are fixed points of the kernel
        let c = C64::new(1.3, -0.2);
        for &(x, t) in &[(0.0, 0.5), (2.0, 3.0)] {
            let got = first_term(|_| c, 0.7, &EvalPoint::new(x, t).unwrap(), &q).unwrap();
            assert!((got - c).norm() < 1e-13);
        }

        // Gaussian spreads with the known closed form
        let nu = 0.4;
        for &(x, t) in &[(0.3, 0.5), (-1.0, 2.0)] {
            let got = first_term(
                |y| C64::new((-y * y).exp(), 0.0),
                nu,
                &EvalPoint::new(x, t).unwrap(),
                &q,
            )
            .unwrap();
            let s = 1.0 + 4.0 * nu * t;
            let expected = C64::new(s.sqrt().recip() * (-x * x / s).exp(), 0.0);
            assert!(
                (got - expected).norm() < 1e-11,
                "({x},{t}): {got} vs {expected}"
            );
        }

        // t = 0 returns the initial condition exactly
        let got = first_term(exp_ic, 1.0, &EvalPoint::new(1.1, 0.0).unwrap(), &q).unwrap();
        assert_eq!(got, exp_ic(1.1));

        // non-finite samples are reported
        let bad = first_term(
            |x| C64::new(1.0 / (x - 0.5), 0.0),
            1.0,
            &EvalPoint::new(0.5, 0.0).unwrap(),
            &q,
        );
        assert!(matches!(bad, Err(BurgersError::Input(_))));
    }

    #[test]
    fn source_matches_closed_form_product() {
        let cfg = SolverConfig::new(1.0, 3).unwrap();
        let ts = uniform_ts(1.0, 9);
        let sample_term = |m: usize| {
            GridField::sample_periodic(0.0, TWO_PI, 32, &ts, |x, t| {
                closed_form::term(m, &cfg, &EvalPoint::new(x, t).unwrap()).unwrap()
            })
        };
        let terms = [sample_term(1), sample_term(2)];
        // m = 2: source = f_1 * (i f_1) = i exp(2ix - 2 nu t)
        for (ix, it) in [(0usize, 0usize), (5, 3), (20, 8)] {
            let got = source_at(&terms[..1], 2, ix, it).unwrap();
            let (x, t) = (terms[0].xs()[ix], terms[0].ts()[it]);
            let expected = C64::new(0.0, 1.0) * C64::new(-2.0 * t, 2.0 * x).exp();
            assert!((got - expected).norm() < 1e-10, "({ix},{it})");
        }
        // zero priors give a zero source
        let zeros = vec![GridField::zeros_periodic(0.0, TWO_PI, 32, ts.clone()); 2];
        assert_eq!(source_at(&zeros, 3, 7, 2).unwrap(), C64::new(0.0, 0.0));
        // missing dependencies are flagged
        assert!(matches!(
            source_at(&terms[..1], 3, 0, 0),
            Err(BurgersError::Dependency(_))
        ));
    }

    #[test]
    fn source_agrees_with_cauchy_convolution() {
        use crate::transform::{cauchy_convolve, SeriesTerm, TruncatedSequence};
        let cfg = SolverConfig::new(1.0, 3).unwrap();
        let ts = uniform_ts(1.0, 9);
        let sample_term = |m: usize| {
            GridField::sample_periodic(0.0, TWO_PI, 32, &ts, |x, t| {
                closed_form::term(m, &cfg, &EvalPoint::new(x, t).unwrap()).unwrap()
            })
        };
        let grids = vec![sample_term(1), sample_term(2)];
        let a = TruncatedSequence::from_closed_form(cfg);
        let derivs: Vec<Box<dyn SeriesTerm>> = (1..=2usize)
            .map(|m| {
                Box::new(move |x: f64, t: f64| {
                    C64::new(0.0, m as f64)
                        * closed_form::term(m, &cfg, &EvalPoint::new(x, t).unwrap()).unwrap()
                }) as Box<dyn SeriesTerm>
            })
            .collect();
        let b = TruncatedSequence::new(derivs).unwrap();
        for (ix, it) in [(3usize, 2usize), (17, 7)] {
            let got = source_at(&grids, 3, ix, it).unwrap();
            let expected =
                cauchy_convolve(&a, &b, 3, (grids[0].xs()[ix], grids[0].ts()[it])).unwrap();
            assert!(
                (got - expected).norm() < 1e-10,
                "({ix},{it}): {got} vs {expected}"
            );
        }
    }

    #[test]
    fn next_term_matches_closed_form_f2_and_f3() {
        let nu = 1.0;
        let cfg = SolverConfig::new(nu, 3).unwrap();
        let ts = uniform_ts(1.0, 65);
        let template = GridField::zeros_periodic(0.0, TWO_PI, 32, ts.clone());
        let q = QuadratureSpec::default();
        let sol = recurse(exp_ic, nu, &template, 3, &q).unwrap();
        for m in [2usize, 3] {
            let exact = GridField::sample_periodic(0.0, TWO_PI, 32, &ts, |x, t| {
                closed_form::term(m, &cfg, &EvalPoint::new(x, t).unwrap()).unwrap()
            });
            let err = sup_diff(&sol.terms[m - 1], &exact);
            let tol = if m == 2 { 1e-6 } else { 1e-5 };
            assert!(err <= tol, "f_{m} sup error {err:.3e}");
        }
    }

    #[test]
    fn zero_initial_condition_stays_zero() {
        let template = GridField::zeros_periodic(0.0, TWO_PI, 16, uniform_ts(1.0, 17));
        let sol = recurse(
            |_| C64::new(0.0, 0.0),
            0.8,
            &template,
            4,
            &QuadratureSpec::default(),
        )
        .unwrap();
        for term in &sol.terms {
            assert!(term.max_abs() == 0.0);
        }
        assert_eq!(sol.partial_sum.max_abs(), 0.0);
    }

    #[test]
    fn recurse_partial_sum_tracks_closed_form() {
        let nu = 1.0;
        let ts = uniform_ts(1.0, 65);
        let template = GridField::zeros_periodic(0.0, TWO_PI, 32, ts.clone());
        let sol = recurse(exp_ic, nu, &template, 5, &QuadratureSpec::default()).unwrap();
        let cfg = SolverConfig::new(nu, 5).unwrap();
        let exact = GridField::sample_periodic(0.0, TWO_PI, 32, &ts, |x, t| {
            closed_form::partial_sum(&cfg, &EvalPoint::new(x, t).unwrap()).unwrap()
        });
        let err = sup_diff(&sol.partial_sum, &exact);
        assert!(err <= 1e-5, "N = 5 partial sum sup error {err:.3e}");
        // N = 1 is exactly the propagated initial condition
        let single = recurse(exp_ic, nu, &template, 1, &QuadratureSpec::default()).unwrap();
        assert_eq!(sup_diff(&sol.terms[0], &single.partial_sum), 0.0);
    }

    #[test]
    fn initial_data_enters_only_through_the_first_term() {
        let ic = |x: f64| C64::new(x.cos(), 0.3 * (2.0 * x).sin());
        let template = GridField::zeros_periodic(0.0, TWO_PI, 32, uniform_ts(0.5, 33));
        let sol = recurse(ic, 0.9, &template, 4, &QuadratureSpec::default()).unwrap();
        for (i, &x) in template.xs().iter().enumerate() {
            assert!((sol.partial_sum.value(i, 0) - ic(x)).norm() < 1e-12);
            for m in 2..=4 {
                assert_eq!(sol.terms[m - 1].value(i, 0), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn backends_agree_on_low_order_terms() {
        let nu = 1.0;
        let ts = uniform_ts(1.0, 33);
        let template = GridField::zeros_periodic(0.0, TWO_PI, 32, ts);
        let spectral = recurse(exp_ic, nu, &template, 3, &QuadratureSpec::default()).unwrap();
        let gh = QuadratureSpec {
            backend: ConvolutionBackend::GaussHermite,
            ..Default::default()
        };
        let hermite = recurse(exp_ic, nu, &template, 3, &gh).unwrap();
        for m in [2usize, 3] {
            let diff = sup_diff(&spectral.terms[m - 1], &hermite.terms[m - 1]);
            assert!(
                diff <= 10.0 * gh.sub_tol,
                "f_{m} backend difference {diff:.3e}"
            );
        }
    }

    #[test]
    fn numerical_terms_satisfy_their_recursion() {
        // FD in t on a fine grid, spectral in x; each f_m must satisfy its
        // inhomogeneous diffusion equation.
        let nu = 1.0;
        let nt = 513;
        let ts = uniform_ts(1.0, nt);
        let dt = ts[1] - ts[0];
        let template = GridField::zeros_periodic(0.0, TWO_PI, 32, ts);
        let sol = recurse(exp_ic, nu, &template, 5, &QuadratureSpec::default()).unwrap();
        let sp = Spectral::new(32, 0.0, TWO_PI);
        let mut worst = 0.0f64;
        for m in 2..=5 {
            let term = &sol.terms[m - 1];
            for j in (1..nt - 1).step_by(8) {
                let up = term.level(j + 1);
                let down = term.level(j - 1);
                let here = term.level(j);
                let d2 = {
                    let mut modes = sp.to_modes(here);
                    for (mm, &k) in modes.iter_mut().zip(sp.wavenumbers()) {
                        *mm *= -k * k;
                    }
                    sp.to_samples(&modes)
                };
                for i in 0..32 {
                    let dudt = (up[i] - down[i]) / (2.0 * dt);
                    let src = source_at(&sol.terms[..m - 1], m, i, j).unwrap();
                    let r = (dudt - nu * d2[i] + src).norm();
                    worst = worst.max(r);
                }
            }
        }
        assert!(worst <= 1e-4, "recursion residual sup {worst:.3e}");
    }

    #[test]
    fn engine_rejects_bad_grids() {
        let q = QuadratureSpec::default();
        // non-periodic template
        let flat = GridField::zeros_cartesian(vec![0.0, 1.0, 2.0, 3.0], uniform_ts(1.0, 9));
        assert!(recurse(exp_ic, 1.0, &flat, 2, &q).is_err());
        // too few time levels
        let short = GridField::zeros_periodic(0.0, TWO_PI, 8, uniform_ts(1.0, 5));
        assert!(recurse(exp_ic, 1.0, &short, 2, &q).is_err());
        // non-uniform levels
        let skew = GridField::zeros_periodic(
            0.0,
            TWO_PI,
            8,
            vec![0.0, 0.1, 0.3, 0.35, 0.5, 0.6, 0.7, 0.8, 0.9],
        );
        assert!(recurse(exp_ic, 1.0, &skew, 2, &q).is_err());
        // bad quadrature specs
        assert!(QuadratureSpec {
            hermite_nodes: 4,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec {
            time_nodes: 2,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(QuadratureSpec {
            sub_tol: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn unattainable_tolerance_surfaces_as_an_accuracy_error() {
        // A coarse grid cannot deliver 1e-14; the estimate must report the
        // worst node instead of silently returning low-accuracy terms.
        let template = GridField::zeros_periodic(0.0, TWO_PI, 16, uniform_ts(1.0, 9));
        let strict = QuadratureSpec {
            sub_tol: 1e-14,
            ..Default::default()
        };
        let res = recurse(exp_ic, 1.0, &template, 3, &strict);
        match res {
            Err(BurgersError::Accuracy {
                context,
                estimate,
                tolerance,
            }) => {
                assert!(context.contains("next_term"), "{context}");
                assert!(estimate > tolerance);
            }
            other => panic!(
                "expected an accuracy error, got {:?}",
                other.map(|_| "solution")
            ),
        }
    }
}
