//! Exact and floating-point combinatorial kernels.
//!
//! Stirling numbers of the second kind and the weighted sums built from them
//! are kept in arbitrary-precision integers so that identities the solver
//! relies on (vanishing alternating sums, ratio-constant estimates) hold
//! exactly. Partial exponential Bell polynomials come in two backends: an
//! exact integer one used by identity tests and a complex floating one used
//! by the series evaluator; the two are cross-checked at unit arguments.
//!
//! All tables are grown lazily behind an `RwLock` and are immutable once a
//! row exists, so concurrent readers are safe.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{BurgersError, Result};
use crate::C64;

/// Arbitrary-precision signed integer used for all exact combinatorics.
pub type ExactInteger = BigInt;

/// Largest `m` the Stirling/weighted-sum tables will serve.
pub const MAX_STIRLING_M: usize = 500;

static STIRLING_ROWS: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
static WEIGHTED_SUMS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
static FACTORIALS: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();

fn stirling_rows() -> &'static RwLock<Vec<Vec<BigInt>>> {
    STIRLING_ROWS.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// Extends the triangle `{m, k} = k {m-1, k} + {m-1, k-1}` up to row `m`.
fn ensure_stirling_rows(m: usize) {
    {
        let rows = stirling_rows().read().unwrap();
        if rows.len() >= m {
            return;
        }
    }
    let mut rows = stirling_rows().write().unwrap();
    while rows.len() < m {
        let prev = rows.last().unwrap();
        let mm = rows.len() + 1; // row being built, 1-based
        let mut row = Vec::with_capacity(mm);
        for k in 1..=mm {
            let carry = if k >= 2 {
                prev[k - 2].clone()
            } else {
                BigInt::zero()
            };
            let scaled = if k <= prev.len() {
                BigInt::from(k) * &prev[k - 1]
            } else {
                BigInt::zero()
            };
            row.push(carry + scaled);
        }
        rows.push(row);
    }
}

/// Stirling number of the second kind `{m, k}`: the number of partitions of
/// an `m`-set into `k` nonempty blocks.
pub fn stirling2(m: usize, k: usize) -> Result<ExactInteger> {
    if !(1..=MAX_STIRLING_M).contains(&m) || k < 1 || k > m {
        return Err(BurgersError::domain(format!(
            "stirling2 requires 1 <= k <= m <= {MAX_STIRLING_M}, got m = {m}, k = {k}"
        )));
    }
    ensure_stirling_rows(m);
    let rows = stirling_rows().read().unwrap();
    Ok(rows[m - 1][k - 1].clone())
}

/// Exact factorial `n!`.
fn factorial_big(n: usize) -> BigInt {
    let lock = FACTORIALS.get_or_init(|| RwLock::new(vec![BigInt::one()]));
    {
        let facts = lock.read().unwrap();
        if facts.len() > n {
            return facts[n].clone();
        }
    }
    let mut facts = lock.write().unwrap();
    while facts.len() <= n {
        let next = facts.last().unwrap() * BigInt::from(facts.len());
        facts.push(next);
    }
    facts[n].clone()
}

/// Weighted Stirling sum `S(m) = sum_{k=1}^{m} (k-1)! {m, k}`, the exact
/// integer appearing in the series term bound and the ratio-test constant.
pub fn weighted_stirling_sum(m: usize) -> Result<ExactInteger> {
    if !(1..=MAX_STIRLING_M).contains(&m) {
        return Err(BurgersError::domain(format!(
            "weighted_stirling_sum requires 1 <= m <= {MAX_STIRLING_M}, got {m}"
        )));
    }
    let lock = WEIGHTED_SUMS.get_or_init(|| RwLock::new(Vec::new()));
    {
        let sums = lock.read().unwrap();
        if sums.len() >= m {
            return Ok(sums[m - 1].clone());
        }
    }
    ensure_stirling_rows(m);
    let mut sums = lock.write().unwrap();
    while sums.len() < m {
        let mm = sums.len() + 1;
        let rows = stirling_rows().read().unwrap();
        let row = &rows[mm - 1];
        let mut acc = BigInt::zero();
        for (k0, s) in row.iter().enumerate() {
            acc += factorial_big(k0) * s;
        }
        sums.push(acc);
    }
    Ok(sums[m - 1].clone())
}

/// Partial exponential Bell polynomial `B_{m,k}(x_1, ..., x_{m-k+1})` over
/// complex arguments, via the block recurrence
/// `B_{m,k} = sum_j C(m-1, j-1) x_j B_{m-j, k-1}` with `B_{0,0} = 1`.
pub fn bell_partial(m: usize, k: usize, xs: &[C64]) -> Result<C64> {
    check_bell_args(m, k, xs.len())?;
    // table[d][l] = B_{l + d, l} for block-count l and excess d = m - k.
    let excess = m - k;
    let mut table = vec![vec![C64::new(0.0, 0.0); k + 1]; excess + 1];
    table[0][0] = C64::new(1.0, 0.0);
    // Pascal rows computed on the fly: binom[i] = C(j-1, i) for current j.
    for l in 1..=k {
        for d in 0..=excess {
            let j = l + d; // subscript of B_{j, l}
            let mut acc = C64::new(0.0, 0.0);
            let mut binom = 1.0f64; // C(j-1, 0)
            for i in 1..=(d + 1) {
                // i-th argument pairs with B_{j-i, l-1} = table[j-i-(l-1)][l-1]
                acc += binom * xs[i - 1] * table[j - i - (l - 1)][l - 1];
                binom *= (j - i) as f64 / i as f64; // -> C(j-1, i)
            }
            table[d][l] = acc;
        }
    }
    let value = table[excess][k];
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(BurgersError::Overflow { m });
    }
    Ok(value)
}

/// Exact-integer backend for `bell_partial`, used to verify identities.
pub fn bell_partial_exact(m: usize, k: usize, xs: &[ExactInteger]) -> Result<ExactInteger> {
    check_bell_args(m, k, xs.len())?;
    let excess = m - k;
    let mut table = vec![vec![BigInt::zero(); k + 1]; excess + 1];
    table[0][0] = BigInt::one();
    for l in 1..=k {
        for d in 0..=excess {
            let j = l + d;
            let mut acc = BigInt::zero();
            let mut binom = BigInt::one();
            for i in 1..=(d + 1) {
                acc += &binom * &xs[i - 1] * &table[j - i - (l - 1)][l - 1];
                binom = binom * BigInt::from(j - i) / BigInt::from(i);
            }
            table[d][l] = acc;
        }
    }
    Ok(table[excess][k].clone())
}

fn check_bell_args(m: usize, k: usize, len: usize) -> Result<()> {
    if m < 1 || k < 1 || k > m {
        return Err(BurgersError::domain(format!(
            "bell polynomial requires 1 <= k <= m, got m = {m}, k = {k}"
        )));
    }
    if len != m - k + 1 {
        return Err(BurgersError::domain(format!(
            "B_{{{m},{k}}} takes {} arguments, got {len}",
            m - k + 1
        )));
    }
    Ok(())
}

/// `ln(n!)` by compensated summation of `ln 2 + ... + ln n`.
///
/// Accurate to well over 12 significant digits for every `n` the solver
/// uses (a few hundred at most).
pub fn log_factorial(n: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 2..=n {
        let y = (i as f64).ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Natural logarithm of a positive big integer, exact to f64 precision.
///
/// The value is split as `mantissa * 2^shift` with the mantissa small enough
/// to convert losslessly, so only the final `ln` rounds.
pub fn ln_big(value: &ExactInteger) -> f64 {
    assert!(value.is_positive(), "ln_big requires a positive integer");
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().expect("fits in f64 range").ln();
    }
    let shift = bits - 1000;
    let mantissa = (value >> shift).to_f64().expect("mantissa fits");
    mantissa.ln() + (shift as f64) * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// Brute-force oracle: counts partitions of `{1..m}` into exactly `k`
    /// blocks by enumerating restricted-growth strings.
    fn brute_partition_count(m: usize, k: usize) -> u64 {
        fn walk(pos: usize, m: usize, blocks_used: usize, k: usize) -> u64 {
            if pos == m {
                return u64::from(blocks_used == k);
            }
            if blocks_used > k {
                return 0;
            }
            let mut total = 0;
            // place element `pos` in an existing block or open a new one
            for choice in 0..=blocks_used {
                let used = if choice == blocks_used {
                    blocks_used + 1
                } else {
                    blocks_used
                };
                total += walk(pos + 1, m, used, k);
            }
            total
        }
        walk(0, m, 0, k)
    }

    /// Brute-force oracle: total number of set partitions of `{1..m}`.
    fn brute_bell_number(m: usize) -> u64 {
        (1..=m).map(|k| brute_partition_count(m, k)).sum()
    }

    /// Second, independent route to Bell numbers (Peirce triangle), exact.
    fn bell_triangle(n: usize) -> Vec<BigInt> {
        let mut bells = vec![BigInt::one()]; // Bell(0)
        let mut row = vec![BigInt::one()];
        for _ in 1..=n {
            let mut next = vec![row.last().unwrap().clone()];
            for entry in &row {
                let prev = next.last().unwrap().clone();
                next.push(prev + entry);
            }
            bells.push(next[0].clone());
            row = next;
        }
        bells
    }

    /// Brute-force oracle for partial Bell polynomials: sum over explicit
    /// set partitions of the product of per-block arguments.
    fn brute_bell_partial(m: usize, k: usize, xs: &[C64]) -> C64 {
        fn walk(pos: usize, m: usize, sizes: &mut Vec<usize>, k: usize, xs: &[C64]) -> C64 {
            if pos == m {
                if sizes.len() != k {
                    return C64::new(0.0, 0.0);
                }
                return sizes.iter().map(|&s| xs[s - 1]).product();
            }
            let mut total = C64::new(0.0, 0.0);
            for b in 0..sizes.len() {
                sizes[b] += 1;
                total += walk(pos + 1, m, sizes, k, xs);
                sizes[b] -= 1;
            }
            if sizes.len() < k {
                sizes.push(1);
                total += walk(pos + 1, m, sizes, k, xs);
                sizes.pop();
            }
            total
        }
        walk(0, m, &mut Vec::new(), k, xs)
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(5, 1).unwrap(), BigInt::from(1));
        assert_eq!(
            stirling2(3, 2).unwrap(),
            BigInt::from(brute_partition_count(3, 2))
        );
        assert_eq!(stirling2(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(
            stirling2(4, 2).unwrap(),
            BigInt::from(brute_partition_count(4, 2))
        );
        assert_eq!(stirling2(4, 2).unwrap(), BigInt::from(7));
    }

    #[test]
    fn stirling_matches_brute_force_triangle() {
        for m in 1..=9 {
            for k in 1..=m {
                assert_eq!(
                    stirling2(m, k).unwrap(),
                    BigInt::from(brute_partition_count(m, k)),
                    "{{{m},{k}}}"
                );
            }
        }
    }

    #[test]
    fn stirling_domain_errors() {
        assert!(stirling2(0, 1).is_err());
        assert!(stirling2(5, 0).is_err());
        assert!(stirling2(5, 6).is_err());
        assert!(stirling2(MAX_STIRLING_M + 1, 1).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn row_sums_are_bell_numbers() {
        // Full enumeration up to m = 12, then the independent Peirce-triangle
        // route (itself validated against the enumeration) up to m = 15.
        let bells = bell_triangle(15);
        for m in 1..=12 {
            assert_eq!(BigInt::from(brute_bell_number(m)), bells[m], "bell({m})");
        }
        for m in 1..=15 {
            let row_sum: BigInt = (1..=m).map(|k| stirling2(m, k).unwrap()).sum();
            assert_eq!(row_sum, bells[m], "row sum m = {m}");
        }
    }

    #[test]
    fn weighted_sum_examples() {
        assert_eq!(weighted_stirling_sum(1).unwrap(), BigInt::from(1));
        // 0!*{3,1} + 1!*{3,2} + 2!*{3,3} = 1 + 3 + 2
        assert_eq!(weighted_stirling_sum(3).unwrap(), BigInt::from(6));
        // 1 + 15 + 2*25 + 6*10 + 24*1
        assert_eq!(weighted_stirling_sum(5).unwrap(), BigInt::from(150));
        assert!(weighted_stirling_sum(0).is_err());
        assert!(weighted_stirling_sum(MAX_STIRLING_M + 1).is_err());
    }

    #[test]
    fn weighted_sum_growth() {
        let mut prev = weighted_stirling_sum(1).unwrap();
        for m in 2..=60 {
            let cur = weighted_stirling_sum(m).unwrap();
            assert!(cur > prev, "S({m}) not increasing");
            if m >= 3 {
                assert!(
                    cur > BigInt::from(m - 1) * &prev,
                    "S({m})/S({}) <= {}",
                    m - 1,
                    m - 1
                );
            }
            prev = cur;
        }
    }

    #[test]
    fn alternating_weighted_identity_vanishes() {
        // sum_k (-1)^(k-1) (k-1)! {m,k} = 0 for m >= 2, exactly.
        for m in 2..=20 {
            let mut acc = BigInt::zero();
            for k in 1..=m {
                let term = factorial_big(k - 1) * stirling2(m, k).unwrap();
                if k % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            assert!(acc.is_zero(), "alternating sum nonzero at m = {m}");
        }
    }

    #[test]
    fn bell_partial_examples() {
        let one = C64::new(1.0, 0.0);
        assert_eq!(bell_partial(2, 2, &[one]).unwrap(), one);
        let b32 = bell_partial(3, 2, &[C64::new(2.0, 0.0), C64::new(5.0, 0.0)]).unwrap();
        assert!((b32 - C64::new(30.0, 0.0)).norm() < 1e-12); // 3 x1 x2
        assert!(bell_partial(3, 2, &[one]).is_err()); // wrong arity
        assert!(bell_partial(3, 4, &[one]).is_err());
    }

    #[test]
    fn bell_partial_matches_partition_enumeration() {
        let xs: Vec<C64> = (1..=8)
            .map(|i| C64::new(0.3 + 0.17 * i as f64, 0.1 * i as f64 - 0.25))
            .collect();
        for m in 1..=8 {
            for k in 1..=m {
                let args = &xs[..m - k + 1];
                let fast = bell_partial(m, k, args).unwrap();
                let slow = brute_bell_partial(m, k, args);
                assert!(
                    (fast - slow).norm() <= 1e-12 * (1.0 + slow.norm()),
                    "B_{{{m},{k}}} mismatch: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn bell_at_unit_arguments_is_stirling() {
        for m in 1..=12 {
            for k in 1..=m {
                let ones_c = vec![C64::new(1.0, 0.0); m - k + 1];
                let ones_z = vec![BigInt::one(); m - k + 1];
                let float = bell_partial(m, k, &ones_c).unwrap();
                let exact = bell_partial_exact(m, k, &ones_z).unwrap();
                assert_eq!(exact, stirling2(m, k).unwrap(), "exact B({m},{k})");
                let exact_f = exact.to_f64().unwrap();
                assert!(
                    (float.re - exact_f).abs() <= 1e-12 * exact_f && float.im == 0.0,
                    "float B({m},{k}) = {float} vs {exact_f}"
                );
            }
        }
    }

    #[test]
    fn log_factorial_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(5) - 120.0f64.ln()).abs() < 1e-13);
        // 40! against the exact big-integer product
        let exact: BigInt = (1..=40u32).map(BigInt::from).product();
        let reference = ln_big(&exact);
        assert!(
            (log_factorial(40) - reference).abs() < 1e-12 * reference,
            "log_factorial(40) = {} vs {}",
            log_factorial(40),
            reference
        );
    }

    #[test]
    fn ln_big_handles_huge_values() {
        // 500! has ~3767 bits, far beyond f64 range.
        let huge: BigInt = (1..=500u32).map(BigInt::from).product();
        let expected = log_factorial(500);
        assert!((ln_big(&huge) - expected).abs() < 1e-10 * expected);
    }
}
