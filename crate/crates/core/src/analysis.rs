//! Quantitative convergence studies: sup-norm error sweeps of the truncated
//! series against the Cole-Hopf reference (in the truncation order and in
//! the viscosity) and the ratio-test constant of the term-bound series.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{self, BellWeights, EvalPoint, SolverConfig};
use crate::combinatorics::weighted_stirling_sum;
use crate::error::{BurgersError, Result};
use crate::grid::GridField;
use crate::reference::{cole_hopf, ColeHopfSpec};
use crate::C64;

/// Rectangle `[x_min, x_max] x [t_min, t_max]` with inclusive node counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl DomainSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        t_min: f64,
        t_max: f64,
        nx: usize,
        nt: usize,
    ) -> Result<Self> {
        if !(x_min < x_max) {
            return Err(BurgersError::domain("domain requires x_min < x_max"));
        }
        if !(0.0 <= t_min && t_min <= t_max) {
            return Err(BurgersError::domain("domain requires 0 <= t_min <= t_max"));
        }
        if nx < 2 || nt < 1 {
            return Err(BurgersError::domain("domain needs nx >= 2 and nt >= 1"));
        }
        Ok(DomainSpec {
            x_min,
            x_max,
            t_min,
            t_max,
            nx,
            nt,
        })
    }

    /// The standard comparison window `[-2pi, 2pi] x [0, 3]` on 65 x 31 nodes.
    pub fn standard() -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        DomainSpec {
            x_min: -two_pi,
            x_max: two_pi,
            t_min: 0.0,
            t_max: 3.0,
            nx: 65,
            nt: 31,
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx)
            .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64)
            .collect()
    }

    /// Inclusive time levels; a degenerate `t_min == t_max` domain collapses
    /// to a single level.
    pub fn ts(&self) -> Vec<f64> {
        if self.t_min == self.t_max || self.nt == 1 {
            return vec![self.t_min];
        }
        (0..self.nt)
            .map(|j| self.t_min + (self.t_max - self.t_min) * j as f64 / (self.nt - 1) as f64)
            .collect()
    }
}

/// One sweep cell: truncation order, viscosity, sup-norm error, and whether
/// any node in the cell blew up (non-finite reference or runaway series).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub n_terms: usize,
    pub nu: f64,
    pub sup_error: f64,
    pub flagged: bool,
}

/// Partial sums whose magnitude passes this threshold are treated as blown
/// up and flagged instead of aborting a sweep.
pub const BLOWUP_MAGNITUDE: f64 = 1e10;

/// Error magnitude marking the loss of convergence in [`upturn_onset`]: the
/// sup error has reached the O(1) scale of the solution itself.
pub const ONSET_ERROR_SCALE: f64 = 1.0;

/// Sup-norm distance between two fields on the same grid.
pub fn sup_error(a: &GridField, b: &GridField) -> Result<f64> {
    if !a.same_grid(b) {
        return Err(BurgersError::GridMismatch(
            "sup_error requires identical grids".into(),
        ));
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Cole-Hopf reference samples on the domain. Rows at `t = 0` use the
/// initial condition directly (the kernel's delta limit); `t > 0` rows are
/// evaluated in parallel. Any failed evaluation fails the whole field.
pub fn reference_field(nu: f64, dom: &DomainSpec, spec: &ColeHopfSpec) -> Result<GridField> {
    let (field, flags) = reference_field_flagged(nu, dom, spec);
    if let Some(pos) = flags.iter().position(|&f| f) {
        let xs = dom.xs();
        let ts = dom.ts();
        return Err(BurgersError::Accuracy {
            context: format!(
                "Cole-Hopf reference failed at (x, t) = ({:.6}, {:.6})",
                xs[pos % xs.len()],
                ts[pos / xs.len()]
            ),
            estimate: f64::INFINITY,
            tolerance: spec.tol,
        });
    }
    Ok(field)
}

/// As [`reference_field`], but failed nodes are flagged (value NaN) instead
/// of aborting, so sweeps can traverse the divergent region.
pub fn reference_field_flagged(
    nu: f64,
    dom: &DomainSpec,
    spec: &ColeHopfSpec,
) -> (GridField, Vec<bool>) {
    let xs = dom.xs();
    let ts = dom.ts();
    let cells: Vec<(C64, bool)> = ts
        .par_iter()
        .flat_map(|&t| {
            let xs = &xs;
            xs.par_iter().map(move |&x| {
                if t == 0.0 {
                    (C64::new(0.0, x).exp(), false)
                } else {
                    match cole_hopf(nu, x, t, spec) {
                        Ok(v) if v.re.is_finite() && v.im.is_finite() => (v, false),
                        _ => (C64::new(f64::NAN, f64::NAN), true),
                    }
                }
            })
        })
        .collect();
    let mut field = GridField::zeros_cartesian(xs.clone(), ts.clone());
    let mut flags = vec![false; cells.len()];
    for (idx, (v, flag)) in cells.into_iter().enumerate() {
        field.set(idx % xs.len(), idx / xs.len(), v);
        flags[idx] = flag;
    }
    (field, flags)
}

/// Closed-form partial-sum samples on the domain.
pub fn partial_sum_field(cfg: &SolverConfig, dom: &DomainSpec) -> Result<GridField> {
    let xs = dom.xs();
    let ts = dom.ts();
    let values: Vec<C64> = ts
        .par_iter()
        .flat_map(|&t| {
            let xs = &xs;
            xs.par_iter().map(move |&x| {
                closed_form::partial_sum(cfg, &EvalPoint { x, t })
                    .unwrap_or(C64::new(f64::NAN, f64::NAN))
            })
        })
        .collect();
    let mut field = GridField::zeros_cartesian(xs.clone(), ts.clone());
    for (idx, v) in values.into_iter().enumerate() {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(BurgersError::Overflow { m: cfg.n_terms() });
        }
        field.set(idx % xs.len(), idx / xs.len(), v);
    }
    Ok(field)
}

/// Per-node truncation errors for every order `1..=n_max` in one pass: each
/// node builds its Bell-weight triangle once and extends the partial sum
/// term by term.
fn truncation_error_table(
    nu: f64,
    n_max: usize,
    dom: &DomainSpec,
    reference: &GridField,
    ref_flags: &[bool],
) -> Vec<(f64, bool)> {
    let xs = dom.xs();
    let ts = dom.ts();
    let nx = xs.len();
    let per_node: Vec<Vec<(f64, bool)>> = (0..xs.len() * ts.len())
        .into_par_iter()
        .map(|idx| {
            let (x, t) = (xs[idx % nx], ts[idx / nx]);
            let reference_value = reference.value(idx % nx, idx / nx);
            let ref_bad = ref_flags[idx];
            let cfg = SolverConfig::new(nu, n_max).expect("validated by caller");
            let weights = BellWeights::build(nu * t, n_max);
            let mut sum = C64::new(0.0, 0.0);
            let mut out = Vec::with_capacity(n_max);
            for m in 1..=n_max {
                let (err, flag) =
                    match closed_form::term_with_weights(m, &cfg, &EvalPoint { x, t }, &weights) {
                        Ok(u) => {
                            sum += u;
                            let huge = !sum.re.is_finite()
                                || !sum.im.is_finite()
                                || sum.norm() > BLOWUP_MAGNITUDE;
                            if ref_bad || huge {
                                (f64::NAN, true)
                            } else {
                                ((sum - reference_value).norm(), false)
                            }
                        }
                        Err(_) => (f64::NAN, true),
                    };
                out.push((err, flag));
            }
            out
        })
        .collect();
    // reduce over nodes: sup of finite errors, OR of flags
    let mut table = vec![(0.0f64, false); n_max];
    for node in &per_node {
        for (m0, &(err, flag)) in node.iter().enumerate() {
            if flag {
                table[m0].1 = true;
            } else {
                table[m0].0 = table[m0].0.max(err);
            }
        }
    }
    table
}

/// Truncation-order sweep: sup-norm error of `U_N` against the Cole-Hopf
/// reference for `N = 1..=n_max` at fixed viscosity. Reference failures
/// propagate; callers should stay in (or warn outside) the convergent
/// regime.
pub fn sweep_n(
    nu: f64,
    n_max: usize,
    dom: &DomainSpec,
    spec: &ColeHopfSpec,
) -> Result<Vec<ErrorRecord>> {
    if !(nu > 0.0) || n_max < 1 {
        return Err(BurgersError::domain("sweep_n needs nu > 0 and n_max >= 1"));
    }
    let reference = reference_field(nu, dom, spec)?;
    let flags = vec![false; reference.values().len()];
    let table = truncation_error_table(nu, n_max, dom, &reference, &flags);
    Ok(table
        .into_iter()
        .enumerate()
        .map(|(m0, (sup, flagged))| ErrorRecord {
            n_terms: m0 + 1,
            nu,
            sup_error: sup,
            flagged,
        })
        .collect())
}

/// Viscosity sweep: for each `nu` in the grid and each order in `n_list`,
/// the sup-norm error against the reference. Blown-up cells (failed
/// reference nodes or runaway partial sums) are flagged, not fatal, so the
/// sweep can cross the divergence threshold.
pub fn sweep_nu(
    n_list: &[usize],
    nu_grid: &[f64],
    dom: &DomainSpec,
    spec: &ColeHopfSpec,
) -> Result<Vec<ErrorRecord>> {
    if n_list.is_empty() || nu_grid.is_empty() {
        return Err(BurgersError::domain(
            "sweep_nu needs at least one order and one viscosity",
        ));
    }
    if nu_grid.iter().any(|&nu| !(nu > 0.0)) {
        return Err(BurgersError::domain("viscosities must be positive"));
    }
    let n_max = *n_list.iter().max().unwrap();
    let mut records = Vec::with_capacity(n_list.len() * nu_grid.len());
    for &nu in nu_grid {
        let (reference, flags) = reference_field_flagged(nu, dom, spec);
        let table = truncation_error_table(nu, n_max, dom, &reference, &flags);
        for &n in n_list {
            let (sup, flagged) = table[n - 1];
            records.push(ErrorRecord {
                n_terms: n,
                nu,
                sup_error: sup,
                flagged,
            });
        }
    }
    Ok(records)
}

/// Ratio-test estimates `r_m = S(m+1) / (m S(m))` from the exact weighted
/// Stirling sums, for `m = 2..=m_max`.
pub fn estimate_r(m_max: usize) -> Result<Vec<(usize, f64)>> {
    if !(2..=300).contains(&m_max) {
        return Err(BurgersError::domain(
            "estimate_r requires 2 <= m_max <= 300",
        ));
    }
    let mut out = Vec::with_capacity(m_max - 1);
    let mut s_m = weighted_stirling_sum(2)?;
    for m in 2..=m_max {
        let s_next = weighted_stirling_sum(m + 1)?;
        // exact quotient carried to 80 fractional bits before rounding
        let scaled: BigInt = (&s_next << 80u32) / &s_m;
        let ratio = scaled.to_f64().expect("quotient fits f64 range") / 2f64.powi(80);
        out.push((m, ratio / m as f64));
        s_m = s_next;
    }
    Ok(out)
}

/// Accelerated limit of the `r_m` sequence. The error decays geometrically,
/// so the Richardson-type accelerator with unknown rate is Aitken's delta
/// squared, applied to the last three entries.
pub fn richardson_extrapolate(rs: &[(usize, f64)]) -> Option<f64> {
    if rs.len() < 3 {
        return rs.last().map(|&(_, r)| r);
    }
    let r0 = rs[rs.len() - 3].1;
    let r1 = rs[rs.len() - 2].1;
    let r2 = rs[rs.len() - 1].1;
    let d1 = r1 - r0;
    let d2 = r2 - r1;
    let denom = d2 - d1;
    if denom.abs() < 1e-15 * r2.abs().max(1.0) {
        return Some(r2);
    }
    Some(r2 - d2 * d2 / denom)
}

/// Viscosity threshold `r / 2` above which the Weierstrass bound series
/// provably converges for all `t >= 0`.
pub fn convergence_threshold(r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(BurgersError::domain("ratio constant must be positive"));
    }
    Ok(r / 2.0)
}

/// Least-squares fit of `log10(sup_error)` against `N` over the unflagged
/// records; returns (slope, R^2).
pub fn log_linear_fit(records: &[ErrorRecord]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| !r.flagged && r.sup_error.is_finite() && r.sup_error > 0.0)
        .map(|r| (r.n_terms as f64, r.sup_error.log10()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = (sxy * sxy) / (sxx * syy);
    Some((slope, r2))
}

/// Viscosity below which the truncated series has stopped converging, for
/// the records of one truncation order: the largest grid viscosity whose
/// cell is flagged or whose sup error has reached [`ONSET_ERROR_SCALE`].
pub fn upturn_onset(records: &[ErrorRecord], n_terms: usize) -> Option<f64> {
    records
        .iter()
        .filter(|r| {
            r.n_terms == n_terms
                && (r.flagged || !r.sup_error.is_finite() || r.sup_error >= ONSET_ERROR_SCALE)
        })
        .map(|r| r.nu)
        .fold(None, |acc: Option<f64>, nu| {
            Some(acc.map_or(nu, |a| a.max(nu)))
        })
}

/// `sweep_n.csv`: one row per truncation order.
pub fn write_sweep_n_csv<W: std::io::Write>(records: &[ErrorRecord], mut w: W) -> Result<()> {
    writeln!(w, "N,nu,sup_error")?;
    for r in records {
        writeln!(w, "{},{:.16e},{:.16e}", r.n_terms, r.nu, r.sup_error)?;
    }
    Ok(())
}

/// `sweep_nu.csv`: one row per (viscosity, order) cell, with a blow-up flag.
pub fn write_sweep_nu_csv<W: std::io::Write>(records: &[ErrorRecord], mut w: W) -> Result<()> {
    writeln!(w, "nu,N,sup_error,flag")?;
    for r in records {
        writeln!(
            w,
            "{:.16e},{},{:.16e},{}",
            r.nu,
            r.n_terms,
            r.sup_error,
            u8::from(r.flagged)
        )?;
    }
    Ok(())
}

/// `ratio.csv`: the ratio-test sequence.
pub fn write_ratio_csv<W: std::io::Write>(rs: &[(usize, f64)], mut w: W) -> Result<()> {
    writeln!(w, "m,r_m")?;
    for &(m, r) in rs {
        writeln!(w, "{},{:.16e}", m, r)?;
    }
    Ok(())
}
