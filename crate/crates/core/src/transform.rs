//! Discrete sequence transformation on truncated sequences.
//!
//! A truncated sequence `{f_n}` (1-based, `n = 1..=N`) is mapped to a tagged
//! series `sum_n f_n(x, t) exp(i n s)` with tag variable `s` in `[-pi, pi]`;
//! Fourier orthogonality in `s` recovers each element through [`untag`]. On
//! truncated sequences the inverse integral is a trigonometric polynomial of
//! degree at most `N`, so the uniform trapezoid rule evaluates it exactly and
//! the round trip is an identity to machine precision. [`cauchy_convolve`]
//! is the discrete convolution the tagged product decomposes into.

use crate::closed_form::{self, EvalPoint, SolverConfig};
use crate::error::{BurgersError, Result};
use crate::C64;

/// One sequence element: a pointwise evaluator on the real line.
pub trait SeriesTerm: Send + Sync {
    fn eval(&self, x: f64, t: f64) -> C64;
}

impl<F> SeriesTerm for F
where
    F: Fn(f64, f64) -> C64 + Send + Sync,
{
    fn eval(&self, x: f64, t: f64) -> C64 {
        self(x, t)
    }
}

/// Closed-form series term of fixed order, usable as a sequence element.
/// Overflow in the divergent regime surfaces as NaN samples.
pub struct ClosedFormTerm {
    m: usize,
    cfg: SolverConfig,
}

impl ClosedFormTerm {
    pub fn new(m: usize, cfg: SolverConfig) -> Self {
        ClosedFormTerm { m, cfg }
    }
}

impl SeriesTerm for ClosedFormTerm {
    fn eval(&self, x: f64, t: f64) -> C64 {
        EvalPoint::new(x, t)
            .and_then(|p| closed_form::term(self.m, &self.cfg, &p))
            .unwrap_or(C64::new(f64::NAN, f64::NAN))
    }
}

/// The first `N` elements of a sequence, 1-based like the series index.
pub struct TruncatedSequence {
    terms: Vec<Box<dyn SeriesTerm>>,
}

impl TruncatedSequence {
    pub fn new(terms: Vec<Box<dyn SeriesTerm>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(BurgersError::domain(
                "a truncated sequence needs at least one term",
            ));
        }
        Ok(TruncatedSequence { terms })
    }

    /// The closed-form terms `u_1 .. u_N` for the given configuration.
    pub fn from_closed_form(cfg: SolverConfig) -> Self {
        let terms = (1..=cfg.n_terms())
            .map(|m| Box::new(ClosedFormTerm::new(m, cfg)) as Box<dyn SeriesTerm>)
            .collect();
        TruncatedSequence { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates element `n` (1-based).
    pub fn eval_term(&self, n: usize, x: f64, t: f64) -> Result<C64> {
        if n < 1 || n > self.terms.len() {
            return Err(BurgersError::domain(format!(
                "term index {n} outside 1..={}",
                self.terms.len()
            )));
        }
        Ok(self.terms[n - 1].eval(x, t))
    }
}

/// Tag variable `s` restricted to `[-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagVariable(f64);

impl TagVariable {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s.abs() > std::f64::consts::PI {
            return Err(BurgersError::domain(format!(
                "tag variable must lie in [-pi, pi], got {s}"
            )));
        }
        Ok(TagVariable(s))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Cauchy-product coefficient `sum_{m=1}^{n-1} a_m(x, t) b_{n-m}(x, t)`.
pub fn cauchy_convolve(
    a: &TruncatedSequence,
    b: &TruncatedSequence,
    n: usize,
    point: (f64, f64),
) -> Result<C64> {
    let max_n = a.len().min(b.len()) + 1;
    if n < 2 || n > max_n {
        return Err(BurgersError::domain(format!(
            "convolution index must satisfy 2 <= n <= {max_n}, got {n}"
        )));
    }
    let (x, t) = point;
    let mut acc = C64::new(0.0, 0.0);
    for m in 1..n {
        acc += a.eval_term(m, x, t)? * b.eval_term(n - m, x, t)?;
    }
    Ok(acc)
}

/// Tagged series `sum_{n=1}^{N} f_n(x, t) exp(i n s)`.
pub fn tag(seq: &TruncatedSequence, point: (f64, f64), s: TagVariable) -> C64 {
    let (x, t) = point;
    let mut acc = C64::new(0.0, 0.0);
    for n in 1..=seq.len() {
        let f = seq.terms[n - 1].eval(x, t);
        acc += f * C64::new(0.0, n as f64 * s.value()).exp();
    }
    acc
}

/// Inverse transform `(1/2pi) int_{-pi}^{pi} tag(..., s) exp(-i m s) ds`
/// realized as the uniform trapezoid rule on `s_nodes` points, which is
/// exact here because the integrand is a trigonometric polynomial of degree
/// below `s_nodes`. For `m > N` the element lies beyond the truncation and
/// the result is 0 by definition.
pub fn untag(seq: &TruncatedSequence, point: (f64, f64), m: usize, s_nodes: usize) -> Result<C64> {
    if m < 1 {
        return Err(BurgersError::domain("sequence index m starts at 1"));
    }
    if m > seq.len() {
        return Ok(C64::new(0.0, 0.0));
    }
    if s_nodes < 4 * seq.len() {
        return Err(BurgersError::domain(format!(
            "untag needs s_nodes >= 4 N = {} for a safe Nyquist margin, got {s_nodes}",
            4 * seq.len()
        )));
    }
    // Periodic trapezoid rule: endpoints coincide, so K uniform nodes of
    // weight 2pi/K; the 1/(2pi) prefactor cancels the interval length.
    let k = s_nodes;
    let mut acc = C64::new(0.0, 0.0);
    let (x, t) = point;
    let values: Vec<C64> = (1..=seq.len())
        .map(|n| seq.terms[n - 1].eval(x, t))
        .collect();
    for j in 0..k {
        let s = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        let mut tagged = C64::new(0.0, 0.0);
        for (n0, f) in values.iter().enumerate() {
            tagged += f * C64::new(0.0, (n0 + 1) as f64 * s).exp();
        }
        acc += tagged * C64::new(0.0, -(m as f64) * s).exp();
    }
    Ok(acc / k as f64)
}
