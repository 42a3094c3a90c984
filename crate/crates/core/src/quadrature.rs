//! Quadrature kernels: Gauss-Legendre and Gauss-Hermite node generation by
//! Newton iteration on the orthonormal recurrences, and an adaptive
//! Gauss-Kronrod (G7, K15) rule for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{BurgersError, Result};
use crate::C64;

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Nodes and weights of an `n`-point Gauss-Hermite rule for integrals
/// `int_-inf^inf exp(-x^2) f(x) dx` (physicists' weight).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        // Stroud-Secrest style initial guesses marching inward from the
        // largest root.
        z = match i {
            0 => {
                let an = n as f64;
                (2.0 * an + 1.0).sqrt() - 1.85575 * (2.0 * an + 1.0).powf(-1.0 / 6.0)
            }
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[n - 1],
            3 => 1.91 * z - 0.91 * nodes[n - 2],
            _ => 2.0 * z - nodes[n - i + 1],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite recurrence keeps magnitudes tame.
            let mut p1 = std::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-14 {
                break;
            }
        }
        nodes[n - 1 - i] = z;
        nodes[i] = -z;
        let w = 2.0 / (pp * pp);
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK constants,
// kept at their full published precision).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 evaluation on `[a, b]`: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = h * x;
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[(j - 1) / 2] * pair;
        }
    }
    ((h * kronrod), ((kronrod - gauss) * h).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: C64,
    pub error: f64,
}

/// Adaptively integrates a complex integrand over `[a, b]` by bisecting the
/// segment with the largest Kronrod error estimate until the summed estimate
/// drops below `rel_tol * |value|` (with an absolute floor) or the
/// subdivision budget is exhausted.
pub fn integrate_adaptive<F: Fn(f64) -> C64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        err: e,
    });
    let mut total = v;
    let mut total_err = e;
    let mut splits = 0;
    while total_err > rel_tol * total.norm().max(1e-300) {
        if splits >= max_subdivisions {
            let worst = heap.peek().map(|s| 0.5 * (s.a + s.b)).unwrap_or(a);
            return Err(BurgersError::Accuracy {
                context: format!(
                    "adaptive Gauss-Kronrod stalled after {splits} subdivisions (worst segment near {worst:.6})"
                ),
                estimate: total_err / total.norm().max(1e-300),
                tolerance: rel_tol,
            });
        }
        let seg = heap.pop().expect("heap never empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (vl, el) = gk15(&f, seg.a, mid);
        let (vr, er) = gk15(&f, mid, seg.b);
        total += vl + vr - seg.value;
        total_err += el + er - seg.err;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: vl,
            err: el,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: vr,
            err: er,
        });
        splits += 1;
    }
    Ok(Integral {
        value: total,
        error: total_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        for degree in [0usize, 2, 6, 14] {
            let got: f64 = x
                .iter()
                .zip(&w)
                .map(|(&xi, &wi)| wi * xi.powi(degree as i32))
                .sum();
            let exact = 2.0 / (degree as f64 + 1.0);
            assert!(
                (got - exact).abs() < 1e-13,
                "degree {degree}: {got} vs {exact}"
            );
        }
        let got: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.exp()).sum();
        let exact = 1.0f64.exp() - (-1.0f64).exp();
        assert!((got - exact).abs() < 1e-12);
    }

    #[test]
    fn hermite_moments_and_oscillation() {
        for n in [8usize, 32, 64, 127] {
            let (x, w) = gauss_hermite(n);
            let total: f64 = w.iter().sum();
            assert!(
                (total - std::f64::consts::PI.sqrt()).abs() < 1e-11,
                "n = {n}: weight sum {total}"
            );
            let second: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi * xi).sum();
            assert!(
                (second - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-11,
                "n = {n}"
            );
        }
        // int exp(-x^2) cos(2x) dx = sqrt(pi) exp(-1)
        let (x, w) = gauss_hermite(40);
        let got: f64 = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * (2.0 * xi).cos())
            .sum();
        let exact = std::f64::consts::PI.sqrt() * (-1.0f64).exp();
        assert!((got - exact).abs() < 1e-13, "{got} vs {exact}");
    }

    #[test]
    fn adaptive_handles_oscillatory_complex_integrand() {
        // int_0^1 exp(i a x) dx = (exp(i a) - 1) / (i a)
        let a = 45.0;
        let exact = (C64::new(0.0, a).exp() - C64::new(1.0, 0.0)) / C64::new(0.0, a);
        let got = integrate_adaptive(|x| C64::new(0.0, a * x).exp(), 0.0, 1.0, 1e-12, 200).unwrap();
        assert!((got.value - exact).norm() < 1e-11);
    }

    #[test]
    fn adaptive_reports_budget_exhaustion() {
        let res = integrate_adaptive(
            |x| C64::new(x.abs().sqrt().recip().min(1e6), 0.0),
            -1.0,
            1.0,
            1e-14,
            3,
        );
        assert!(matches!(res, Err(BurgersError::Accuracy { .. })));
    }
}
