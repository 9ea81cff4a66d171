//! Integer partitions: exact counting, canonical enumeration, and the number
//! of apparatus configurations that realize each partition.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{hardy_ramanujan_log2_constant, Scalar};

/// Largest `n` accepted by [`count_partitions`] and [`partition_counts`].
pub const MAX_COUNT_N: usize = 10_000;

/// Largest `n` accepted by [`enumerate_partitions`]. `p(64) = 1_741_630`.
pub const MAX_ENUMERATE_N: usize = 64;

/// A partition of `n`: positive parts in non-increasing order.
///
/// The derived ordering is lexicographic on the parts, so the canonical
/// enumeration order (`[3], [2, 1], [1, 1, 1]`) is *descending* under `Ord`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Builds a partition from parts already in non-increasing order.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not in non-increasing order: {parts:?}"
            )));
        }
        let n = parts.iter().sum();
        Ok(Partition { parts, n })
    }

    /// Builds a partition from parts in any order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `(value, multiplicity)` for each distinct part, largest value first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

/// Exact value of the partition function `p(n)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionCount(BigUint);

impl PartitionCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    /// `log₂ p(n)`, accurate for counts far beyond the `f64` range.
    pub fn log2(&self) -> f64 {
        log2_biguint(&self.0)
    }
}

impl Deref for PartitionCount {
    type Target = BigUint;

    fn deref(&self) -> &BigUint {
        &self.0
    }
}

impl fmt::Display for PartitionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (u64::try_from(x).expect("fits in u64") as f64).log2();
    }
    let shift = bits - 64;
    let top = u64::try_from(x >> shift).expect("top 64 bits");
    (top as f64).log2() + shift as f64
}

/// `p(0), p(1), …, p(n_max)` by Euler's pentagonal-number recurrence.
pub fn partition_counts(n_max: usize) -> Result<Vec<BigUint>> {
    if n_max > MAX_COUNT_N {
        return Err(Error::Capacity {
            operation: "count_partitions",
            n: n_max,
            max: MAX_COUNT_N,
        });
    }
    let mut table: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    table.push(BigUint::one());
    for m in 1..=n_max {
        // p(m) = Σ_{k≥1} (-1)^(k+1) [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)]
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let acc = if k % 2 == 1 { &mut plus } else { &mut minus };
            *acc += &table[m - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                *acc += &table[m - g2];
            }
        }
        table.push(plus - minus);
    }
    Ok(table)
}

/// Exact `p(n)`; `p(0) = 1`.
pub fn count_partitions(n: usize) -> Result<PartitionCount> {
    let mut table = partition_counts(n)?;
    Ok(PartitionCount(table.pop().expect("table holds p(0)..=p(n)")))
}

/// Iterator over the partitions of `n` in reverse-lexicographic order,
/// starting from `[n]` and ending with `[1, 1, …, 1]`.
#[derive(Debug, Clone)]
pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        let n = current.iter().sum();
        Some(Partition { parts: current, n })
    }
}

fn successor(parts: &[usize]) -> Option<Vec<usize>> {
    let pivot = parts.iter().rposition(|&p| p > 1)?;
    let mut next = parts[..pivot].to_vec();
    let value = parts[pivot] - 1;
    // the pivot's decrement plus every trailing 1
    let mut rest = 1 + (parts.len() - pivot - 1);
    next.push(value);
    while rest >= value {
        next.push(value);
        rest -= value;
    }
    if rest > 0 {
        next.push(rest);
    }
    Some(next)
}

/// All partitions of `n`, each exactly once, in reverse-lexicographic order.
pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    if n > MAX_ENUMERATE_N {
        return Err(Error::Capacity {
            operation: "enumerate_partitions",
            n,
            max: MAX_ENUMERATE_N,
        });
    }
    Ok(PartitionIter {
        next: Some(vec![n]),
    })
}

/// Number of apparatus configurations whose gap structure realizes `lambda`:
/// `2 · m! / Π m_j!` for `m` parts with multiplicities `m_j`.
///
/// Every distinct ordering of the parts is one gap composition, and each gap
/// composition comes from exactly two configurations (the last slot's
/// polarizer is redundant with the detector).
pub fn state_count(lambda: &Partition) -> BigUint {
    // u128 covers every n up to the enumeration cap; fall back beyond that
    let mut small: Option<u128> = Some(2);
    let mut placed = 0usize;
    for (_, mult) in lambda.multiplicities() {
        placed += mult;
        small = small.and_then(|c| binomial_u128(placed, mult).and_then(|b| c.checked_mul(b)));
    }
    if let Some(c) = small {
        return BigUint::from(c);
    }
    let mut count = BigUint::from(2u32);
    let mut placed = 0usize;
    for (_, mult) in lambda.multiplicities() {
        // choose positions for this group among the ones seen so far
        placed += mult;
        count *= num_integer::binomial(BigUint::from(placed), BigUint::from(mult));
    }
    count
}

fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Leading-order estimate of `log₂ p(n)`: `√n · π·√(2/3)·log₂e` bits.
/// Overestimates at every finite `n`.
pub fn asymptotic_log2_p<T: Scalar>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    Ok(T::from_usize_lossy(n).sqrt() * hardy_ramanujan_log2_constant::<T>())
}
