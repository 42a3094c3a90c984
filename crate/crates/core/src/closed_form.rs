//! Closed-form series solution of the initial value problem
//! `u(x, 0) = exp(i x)` on the real line, term by term:
//!
//! ```text
//! u_m(x, t) = i^(m-1) exp(-nu m^2 t + i m x) / (2^(m-1) nu^(m-1) (m-1)!)
//!             * sum_{k=1}^{m} (-1)^(k-1) (k-1)! B_{m,k}(mu_1, ..., mu_{m-k+1})
//! mu_l = exp(l nu t (m - l))
//! ```
//!
//! # Evaluation strategy
//!
//! The Bell arguments grow like `exp(nu t m^2 / 4)` against the decaying
//! prefactor `exp(-nu m^2 t)`; evaluated naively the two overflow separately
//! near `m ~ 40` for `nu t ~ 3`. The prefactor exponent is therefore folded
//! into the polynomial through the homogeneity identity
//! `B_{m,k}(b x_1, b^2 x_2, ...) = b^m B_{m,k}(x_1, x_2, ...)` with
//! `b = exp(-nu t m)`, which turns the arguments into `exp(-nu t l^2)`; every
//! monomial exponent is then the log-space combination of the prefactor and
//! its Bell-argument exponents, and all intermediates stay in `(0, 1]`. The
//! rescaled arguments no longer depend on `m`, so one weight triangle serves
//! every term of a partial sum. Factorials are folded in the same way
//! (weights are `(k-1)! B_{m,k} / m!`), and the alternating sum over `k` is
//! accumulated with Kahan compensation since it cancels severely for small
//! `nu t`.

use crate::combinatorics::{ln_big, log_factorial, weighted_stirling_sum};
use crate::error::{BurgersError, Result};
use crate::C64;

/// Viscosity and truncation order of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    nu: f64,
    n_terms: usize,
}

impl SolverConfig {
    pub fn new(nu: f64, n_terms: usize) -> Result<Self> {
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(BurgersError::domain(format!(
                "viscosity must be positive, got {nu}"
            )));
        }
        if n_terms < 1 {
            return Err(BurgersError::domain("truncation order must be at least 1"));
        }
        Ok(SolverConfig { nu, n_terms })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn with_n_terms(self, n_terms: usize) -> Result<Self> {
        Self::new(self.nu, n_terms)
    }
}

/// A point (x, t) on the real line with t >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub x: f64,
    pub t: f64,
}

impl EvalPoint {
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !x.is_finite() || !t.is_finite() || t < 0.0 {
            return Err(BurgersError::domain(format!(
                "evaluation point requires finite x and t >= 0, got ({x}, {t})"
            )));
        }
        Ok(EvalPoint { x, t })
    }
}

/// Triangle of rescaled Bell weights `(k-1)! B_{j,k}(q, q^4, q^9, ...) / j!`
/// with `q = exp(-nu t)`. Shared across all orders `j <= max_m`.
pub(crate) struct BellWeights {
    /// `rows[j][k - 1]` for `1 <= k <= j`; `rows[0]` is the seed `[1]`.
    rows: Vec<Vec<f64>>,
}

impl BellWeights {
    pub(crate) fn build(nu_t: f64, max_m: usize) -> Self {
        // y_i = x_i / (i-1)! with x_i = exp(-nu t i^2); underflow to 0 is
        // benign (the dropped monomials are genuinely negligible).
        let ys: Vec<f64> = (1..=max_m)
            .map(|i| (-nu_t * (i * i) as f64 - log_factorial(i - 1)).exp())
            .collect();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max_m + 1);
        rows.push(vec![1.0]);
        for j in 1..=max_m {
            let mut row = vec![0.0; j];
            for k in 1..=j {
                let gain = if k >= 2 { (k - 1) as f64 } else { 1.0 };
                let mut acc = 0.0;
                for i in 1..=(j - k + 1) {
                    let prev = if j - i == 0 {
                        if k == 1 {
                            1.0
                        } else {
                            0.0
                        }
                    } else if k > 1 && k - 1 <= j - i {
                        rows[j - i][k - 2]
                    } else {
                        0.0
                    };
                    acc += ys[i - 1] * prev;
                }
                row[k - 1] = gain * acc / j as f64;
            }
            rows.push(row);
        }
        BellWeights { rows }
    }

    /// Kahan-compensated alternating sum over k for order m.
    pub(crate) fn alternating_sum(&self, m: usize) -> f64 {
        let row = &self.rows[m];
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (k0, &w) in row.iter().enumerate() {
            let signed = if k0 % 2 == 0 { w } else { -w };
            let y = signed - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    fn max_m(&self) -> usize {
        self.rows.len() - 1
    }
}

fn unit_power(exponent: usize) -> C64 {
    match exponent % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Term evaluation against a prebuilt weight triangle (must cover order `m`
/// and match `nu * t`); lets sweeps share one triangle across all orders.
pub(crate) fn term_with_weights(
    m: usize,
    cfg: &SolverConfig,
    p: &EvalPoint,
    weights: &BellWeights,
) -> Result<C64> {
    if m < 1 || m > weights.max_m() {
        return Err(BurgersError::domain(format!(
            "term order {m} outside the prebuilt triangle (max {})",
            weights.max_m()
        )));
    }
    term_from_weights(m, cfg, p, weights)
}

fn term_from_weights(
    m: usize,
    cfg: &SolverConfig,
    p: &EvalPoint,
    weights: &BellWeights,
) -> Result<C64> {
    debug_assert!(m >= 1 && m <= weights.max_m());
    if p.t == 0.0 {
        // All terms beyond the first vanish identically at t = 0: the weights
        // collapse to Stirling numbers and the alternating factorial-weighted
        // Stirling sum is exactly zero for m >= 2 (verified in exact
        // arithmetic in the combinatorics tests).
        return Ok(if m == 1 {
            C64::new(0.0, p.x).exp()
        } else {
            C64::new(0.0, 0.0)
        });
    }
    let alt = weights.alternating_sum(m);
    let scale = m as f64 * (-((m - 1) as f64) * (2.0 * cfg.nu).ln()).exp();
    let value = unit_power(m - 1) * C64::new(0.0, m as f64 * p.x).exp() * (alt * scale);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(BurgersError::Overflow { m });
    }
    Ok(value)
}

/// The m-th series term `u_m(x, t)`.
pub fn term(m: usize, cfg: &SolverConfig, p: &EvalPoint) -> Result<C64> {
    if m < 1 {
        return Err(BurgersError::domain("term index m starts at 1"));
    }
    if p.t == 0.0 {
        return Ok(if m == 1 {
            C64::new(0.0, p.x).exp()
        } else {
            C64::new(0.0, 0.0)
        });
    }
    let weights = BellWeights::build(cfg.nu * p.t, m);
    term_from_weights(m, cfg, p, &weights)
}

/// Magnitude threshold below which the remaining tail is treated as
/// numerically extinct.
const TERM_FLOOR: f64 = 1e-300;

/// Partial sum `U_N(x, t) = sum_{m=1}^{N} u_m(x, t)`.
pub fn partial_sum(cfg: &SolverConfig, p: &EvalPoint) -> Result<C64> {
    Ok(partial_sum_with_derivatives(cfg, p)?.0)
}

/// Partial sum together with its analytic first and second x-derivatives
/// (each term carries `exp(i m x)`, so differentiation is multiplication
/// by `i m`).
pub fn partial_sum_with_derivatives(cfg: &SolverConfig, p: &EvalPoint) -> Result<(C64, C64, C64)> {
    let weights = BellWeights::build(cfg.nu * p.t, cfg.n_terms);
    let mut sum = C64::new(0.0, 0.0);
    let mut dsum = C64::new(0.0, 0.0);
    let mut ddsum = C64::new(0.0, 0.0);
    let mut tiny_run = 0;
    for m in 1..=cfg.n_terms {
        let u = term_from_weights(m, cfg, p, &weights)?;
        let im = C64::new(0.0, m as f64);
        sum += u;
        dsum += im * u;
        ddsum += im * im * u;
        if u.norm() < TERM_FLOOR {
            // Two consecutive extinct terms end the sum; a single one could
            // be an isolated cancellation zero.
            tiny_run += 1;
            if tiny_run >= 2 || p.t == 0.0 {
                break;
            }
        } else {
            tiny_run = 0;
        }
    }
    Ok((sum, dsum, ddsum))
}

/// Weierstrass majorant of `|u_m|`:
/// `exp(-nu m t) S(m) / (2^(m-1) nu^(m-1) (m-1)!)` with
/// `S(m) = sum_k (k-1)! {m, k}` taken exactly.
pub fn term_bound(m: usize, cfg: &SolverConfig, t: f64) -> Result<f64> {
    if m < 1 {
        return Err(BurgersError::domain("term index m starts at 1"));
    }
    if !(t >= 0.0) {
        return Err(BurgersError::domain("term_bound requires t >= 0"));
    }
    let s = weighted_stirling_sum(m)?;
    let log_bound = -cfg.nu * m as f64 * t + ln_big(&s)
        - ((m - 1) as f64) * (2.0 * cfg.nu).ln()
        - log_factorial(m - 1);
    Ok(log_bound.exp())
}

/// Burgers-operator residual `A[U_N] = dU/dt - nu d2U/dx2 + U dU/dx` at a
/// point, with analytic x-derivatives and a second-order finite-difference
/// time derivative of step `h` (one-sided below `t = h`, so the residual
/// stays an independent check on the closed form).
pub fn residual(cfg: &SolverConfig, p: &EvalPoint, h: f64) -> Result<C64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(BurgersError::domain("residual step h must be positive"));
    }
    let (u, ux, uxx) = partial_sum_with_derivatives(cfg, p)?;
    let at = |t: f64| -> Result<C64> {
        Ok(partial_sum_with_derivatives(cfg, &EvalPoint { x: p.x, t })?.0)
    };
    let du_dt = if p.t >= h {
        (at(p.t + h)? - at(p.t - h)?) / (2.0 * h)
    } else {
        (-3.0 * u + 4.0 * at(p.t + h)? - at(p.t + 2.0 * h)?) / (2.0 * h)
    };
    Ok(du_dt - cfg.nu * uxx + u * ux)
}

/// Residual of the m-th term against its linear diffusion equation
/// `du_m/dt - nu d2u_m/dx2 + sum_{l<m} u_l du_{m-l}/dx = 0`, the recursion
/// every sequence element must satisfy.
pub fn term_recursion_residual(m: usize, cfg: &SolverConfig, p: &EvalPoint, h: f64) -> Result<C64> {
    if m < 1 {
        return Err(BurgersError::domain("term index m starts at 1"));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(BurgersError::domain("residual step h must be positive"));
    }
    let terms_at = |t: f64| -> Result<Vec<C64>> {
        let weights = BellWeights::build(cfg.nu * t, m);
        let point = EvalPoint { x: p.x, t };
        (1..=m)
            .map(|j| term_from_weights(j, cfg, &point, &weights))
            .collect()
    };
    let here = terms_at(p.t)?;
    let dm_dt = if p.t >= h {
        (terms_at(p.t + h)?[m - 1] - terms_at(p.t - h)?[m - 1]) / (2.0 * h)
    } else {
        (-3.0 * here[m - 1] + 4.0 * terms_at(p.t + h)?[m - 1] - terms_at(p.t + 2.0 * h)?[m - 1])
            / (2.0 * h)
    };
    let uxx = -((m * m) as f64) * here[m - 1];
    let mut source = C64::new(0.0, 0.0);
    for l in 1..m {
        source += here[l - 1] * C64::new(0.0, (m - l) as f64) * here[m - l - 1];
    }
    Ok(dm_dt - cfg.nu * uxx + source)
}
