//! Exact Catalan arithmetic and the combinatorial oracles that anchor every
//! floating-point route.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`count_balanced_parentheses`].
pub const MAX_PARENTHESES_PAIRS: usize = 14;
/// Largest polygon accepted by [`count_polygon_triangulations`].
pub const MAX_POLYGON_SIDES: usize = 16;

/// An exact nonnegative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        BigCount(value)
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Natural logarithm from the top 64 bits and the binary exponent.
    ///
    /// Panics on zero; every Catalan number is positive.
    pub fn ln(&self) -> f64 {
        let bits = self.0.bits();
        assert!(bits > 0, "logarithm of zero count");
        if bits <= 64 {
            return (self.0.to_u64().expect("fits in u64") as f64).ln();
        }
        let shift = bits - 64;
        let top = (&self.0 >> shift).to_u64().expect("top 64 bits");
        (top as f64).ln() + shift as f64 * LN_2
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl std::fmt::Display for BigCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// `binomial(n, k)` by the multiplicative formula; each partial product is
/// itself a binomial coefficient so every division is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C_n = binomial(2n, n) / (n + 1)`.
pub fn catalan_exact(n: usize) -> BigCount {
    let n = n as u64;
    let central = binomial(2 * n, n);
    let (q, r) = central.div_rem(&BigUint::from(n + 1));
    assert!(r.is_zero(), "binomial(2n, n) not divisible by n + 1");
    BigCount(q)
}

/// Segner's convolution `C_{m+1} = sum_{i=0}^{m} C_i C_{m-i}`. Quadratic in
/// `n`; kept as an independent oracle.
pub fn catalan_segner(n: usize) -> BigCount {
    let mut table: Vec<BigUint> = Vec::with_capacity(n + 1);
    table.push(BigUint::one());
    for m in 0..n {
        let next = (0..=m).fold(BigUint::zero(), |acc, i| acc + &table[i] * &table[m - i]);
        table.push(next);
    }
    BigCount(table.swap_remove(n))
}

/// Terminating `2F1(1 - n, -n; 2; 1)` summed in exact rationals.
pub fn catalan_hypergeometric(n: usize) -> BigCount {
    let a0 = BigRational::from_integer((1 - n as i64).into());
    let b0 = BigRational::from_integer((-(n as i64)).into());
    let c0 = BigRational::from_integer(2.into());
    let one = BigRational::one();

    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    // (1-n)_k vanishes for k >= n, so the series stops at k = n - 1 (k = 0 when n = 0).
    let last = n.saturating_sub(1);
    for k in 0..=last {
        sum += &term;
        let kr = BigRational::from_integer((k as i64).into());
        let num = (&a0 + &kr) * (&b0 + &kr);
        let den = (&c0 + &kr) * (&kr + &one);
        term = term * num / den;
    }
    assert!(sum.is_integer(), "hypergeometric sum is not integral");
    let value = sum
        .to_integer()
        .to_biguint()
        .expect("Catalan numbers are nonnegative");
    BigCount(value)
}

/// Counts Dyck words of `n` pairs by explicit backtracking.
pub fn count_balanced_parentheses(n: usize) -> Result<BigCount> {
    if n > MAX_PARENTHESES_PAIRS {
        return Err(Error::OutOfRange {
            what: "parenthesis pairs",
            value: n,
            limit: MAX_PARENTHESES_PAIRS,
        });
    }

    fn walk(open: usize, close: usize, n: usize) -> u64 {
        if close == n {
            return 1;
        }
        let mut count = 0;
        if open < n {
            count += walk(open + 1, close, n);
        }
        if close < open {
            count += walk(open, close + 1, n);
        }
        count
    }

    Ok(BigCount::from(walk(0, 0, n)))
}

/// Triangulations of a convex polygon by the interval DP
/// `T[i][j] = sum_k T[i][k] * T[k][j]` over the apex `k` of the triangle on
/// edge `(i, j)`.
pub fn count_polygon_triangulations(sides: usize) -> Result<BigCount> {
    if !(3..=MAX_POLYGON_SIDES).contains(&sides) {
        return Err(Error::OutOfRange {
            what: "polygon sides",
            value: sides,
            limit: MAX_POLYGON_SIDES,
        });
    }
    let mut t = vec![vec![BigUint::zero(); sides]; sides];
    for i in 0..sides - 1 {
        // A bare edge counts as one (empty) triangulation.
        t[i][i + 1] = BigUint::one();
    }
    for gap in 2..sides {
        for i in 0..sides - gap {
            let j = i + gap;
            let mut acc = BigUint::zero();
            for k in i + 1..j {
                acc += &t[i][k] * &t[k][j];
            }
            t[i][j] = acc;
        }
    }
    Ok(BigCount(t[0][sides - 1].clone()))
}

/// `ln C_n` from the exact integer.
pub fn ln_exact(n: usize) -> f64 {
    catalan_exact(n).ln()
}

/// `C_0 ..= C_max_n` built with the exact-division recurrence
/// `C_{n+1} (n + 2) = C_n 2 (2n + 1)`.
#[derive(Debug, Clone)]
pub struct CatalanTable {
    values: Vec<BigCount>,
}

impl CatalanTable {
    pub fn new(max_n: usize) -> Self {
        let values = CatalanStream::new()
            .take(max_n + 1)
            .map(BigCount)
            .collect();
        CatalanTable { values }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigCount> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigCount] {
        &self.values
    }
}

/// Unbounded iterator over `C_0, C_1, ...` using the exact-division
/// recurrence; memory stays at one big integer.
#[derive(Debug, Clone)]
pub struct CatalanStream {
    n: u64,
    current: BigUint,
}

impl CatalanStream {
    pub fn new() -> Self {
        CatalanStream {
            n: 0,
            current: BigUint::one(),
        }
    }
}

impl Default for CatalanStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for CatalanStream {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let out = self.current.clone();
        let n = self.n;
        let scaled = &self.current * (2 * (2 * n + 1));
        let (q, r) = scaled.div_rem(&BigUint::from(n + 2));
        assert!(r.is_zero(), "Catalan recurrence division left a remainder");
        self.current = q;
        self.n += 1;
        Some(out)
    }
}
