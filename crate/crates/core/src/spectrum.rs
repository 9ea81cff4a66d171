//! Detector intensity spectra over all `2ⁿ` configurations, their Shannon
//! information, and the classical-versus-quantum comparison series.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::apparatus::{self, ApparatusConfig};
use crate::error::{Error, Result};
use crate::partitions::{self, Partition, MAX_COUNT_N, MAX_ENUMERATE_N};
use crate::scalar::{hardy_ramanujan_log2_constant, Scalar};

/// Largest `n` for [`brute_force_spectrum`].
pub const MAX_BRUTE_FORCE_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    Quantum,
    Classical,
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumKind::Quantum => "quantum",
            SpectrumKind::Classical => "classical",
        })
    }
}

/// What identifies a class exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    /// Gap partitions sharing this intensity, canonical order. More than one
    /// entry only when distinct partitions collide numerically.
    Partitions(Vec<Partition>),
    /// Number of installed attenuators.
    OnCount(usize),
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Partitions(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            ClassLabel::OnCount(k) => write!(f, "k={k}"),
        }
    }
}

/// One row of a detector spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityClass<T> {
    pub intensity: T,
    pub label: ClassLabel,
    /// Number of configurations in the class.
    pub count: BigUint,
    /// `count / 2ⁿ` rounded to `T`.
    pub probability: T,
    n: usize,
}

impl<T> IntensityClass<T> {
    /// Exact `count / 2ⁿ`, reduced.
    pub fn probability_ratio(&self) -> BigRational {
        BigRational::new(self.count.clone().into(), (BigUint::one() << self.n).into())
    }

    /// Number of configurations overall, as a power of two.
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Two partitions whose intensities fell within the merge tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeEvent<T> {
    pub kept: Partition,
    pub kept_intensity: T,
    pub merged: Partition,
    pub merged_intensity: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<T> {
    pub n: usize,
    pub kind: SpectrumKind,
    /// Sorted by descending intensity.
    pub classes: Vec<IntensityClass<T>>,
    pub entropy_bits: T,
    /// `log₂(n+1)` for classical, `3.7007·√n` for quantum.
    pub bound_bits: T,
    pub merges: Vec<MergeEvent<T>>,
}

impl<T: Scalar> SpectrumReport<T> {
    pub fn total_count(&self) -> BigUint {
        self.classes.iter().map(|c| &c.count).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.classes.iter().map(|c| c.probability).collect()
    }
}

/// `count / 2^exp` as a float, without overflowing for huge `exp`.
pub(crate) fn scaled_ratio<T: Scalar>(count: &BigUint, exp: usize) -> T {
    let bits = count.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = u64::try_from(count >> shift as u64).expect("at most 64 bits");
    let e = shift - exp as i64;
    // split the power so neither factor leaves the exponent range early
    let half = e / 2;
    let two = T::lit(2.0);
    T::from_u64(top).expect("u64 in scalar") * two.powi(half as i32) * two.powi((e - half) as i32)
}

/// Shannon information `−Σ p log₂ p` in bits. Zero entries contribute zero.
pub fn entropy<T: Scalar>(probabilities: &[T]) -> Result<T> {
    if probabilities.is_empty() {
        return Err(Error::InvalidProbabilities("empty distribution".into()));
    }
    let mut sum = T::zero();
    for &p in probabilities {
        if !p.is_finite() || p < T::zero() {
            return Err(Error::InvalidProbabilities(format!("bad entry {p}")));
        }
        sum = sum + p;
    }
    if (sum - T::one()).abs() > T::lit(T::SUM_TOL) {
        return Err(Error::InvalidProbabilities(format!("sum is {sum}, not 1")));
    }
    Ok(probabilities
        .iter()
        .filter(|&&p| p > T::zero())
        .fold(T::zero(), |acc, &p| acc - p * p.log2()))
}

/// Information of the three-outcome detector (horizontal, vertical, no
/// photon). At most `log₂ 3`, reached for equal probabilities.
pub fn qubit_channel_information<T: Scalar>(p_h: T, p_v: T, p_none: T) -> Result<T> {
    entropy(&[p_h, p_v, p_none])
}

struct Member<T> {
    intensity: T,
    partition: Partition,
    count: BigUint,
}

fn descending<T: Scalar>(a: &Member<T>, b: &Member<T>) -> Ordering {
    b.intensity
        .partial_cmp(&a.intensity)
        .expect("intensities are finite")
        .then_with(|| b.partition.cmp(&a.partition))
}

/// Groups members (already sorted by descending intensity) into classes,
/// chaining adjacent members whose intensities agree within tolerance.
fn group_members<T: Scalar>(
    n: usize,
    members: Vec<Member<T>>,
) -> (Vec<IntensityClass<T>>, Vec<MergeEvent<T>>) {
    let mut classes = Vec::new();
    let mut merges = Vec::new();
    let mut iter = members.into_iter().peekable();
    while let Some(first) = iter.next() {
        let mut run = vec![first];
        while let Some(next) = iter.peek() {
            let previous = run.last().expect("run is never empty").intensity;
            if !T::same_intensity(previous, next.intensity) {
                break;
            }
            run.push(iter.next().expect("peeked"));
        }
        let intensity = run[0].intensity;
        if run.len() == 1 {
            let m = run.pop().expect("one member");
            classes.push(IntensityClass {
                intensity,
                label: ClassLabel::Partitions(vec![m.partition]),
                probability: scaled_ratio(&m.count, n),
                count: m.count,
                n,
            });
            continue;
        }
        let mut seen: BTreeMap<Partition, (BigUint, T)> = BTreeMap::new();
        for m in run {
            let entry = seen.entry(m.partition).or_insert((BigUint::zero(), m.intensity));
            entry.0 += m.count;
        }
        let labels: Vec<Partition> = seen.keys().rev().cloned().collect();
        if labels.len() > 1 {
            let (kept_intensity, kept) = (seen[&labels[0]].1, labels[0].clone());
            for other in &labels[1..] {
                merges.push(MergeEvent {
                    kept: kept.clone(),
                    kept_intensity,
                    merged: other.clone(),
                    merged_intensity: seen[other].1,
                });
            }
        }
        let count: BigUint = seen.into_values().map(|(c, _)| c).sum();
        classes.push(IntensityClass {
            intensity,
            label: ClassLabel::Partitions(labels),
            probability: scaled_ratio(&count, n),
            count,
            n,
        });
    }
    (classes, merges)
}

fn quantum_bound<T: Scalar>(n: usize) -> T {
    hardy_ramanujan_log2_constant::<T>() * T::from_usize_lossy(n).sqrt()
}

fn finish<T: Scalar>(
    n: usize,
    kind: SpectrumKind,
    classes: Vec<IntensityClass<T>>,
    merges: Vec<MergeEvent<T>>,
    bound_bits: T,
) -> Result<SpectrumReport<T>> {
    let probs: Vec<T> = classes.iter().map(|c| c.probability).collect();
    let entropy_bits = entropy(&probs)?;
    Ok(SpectrumReport {
        n,
        kind,
        classes,
        entropy_bits,
        bound_bits,
        merges,
    })
}

/// Quantum detector spectrum from the partitions of `n`: one class per
/// partition, weighted by [`partitions::state_count`], with numerically
/// coinciding intensities merged and reported in `merges`.
pub fn quantum_spectrum<T: Scalar>(n: usize) -> Result<SpectrumReport<T>> {
    let parts: Vec<Partition> = partitions::enumerate_partitions(n)?.collect();
    let mut members: Vec<Member<T>> = parts
        .into_par_iter()
        .map(|p| Member {
            intensity: apparatus::gap_product_intensity(p.parts(), n),
            count: partitions::state_count(&p),
            partition: p,
        })
        .collect();
    members.par_sort_by(descending);
    let (classes, merges) = group_members(n, members);
    finish(n, SpectrumKind::Quantum, classes, merges, quantum_bound(n))
}

/// Exhaustive spectrum: steps all `2ⁿ` configurations through the
/// polarization simulation and groups them by intensity alone.
pub fn brute_force_spectrum<T: Scalar>(n: usize) -> Result<SpectrumReport<T>> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::Capacity {
            operation: "brute_force_spectrum",
            n,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let mut members: Vec<Member<T>> = (0..1u64 << n)
        .into_par_iter()
        .map(|idx| {
            let config = ApparatusConfig::from_index(n, idx).expect("index in range");
            Member {
                intensity: apparatus::simulate_intensity(&config),
                partition: apparatus::gaps(&config).to_partition(),
                count: BigUint::one(),
            }
        })
        .collect();
    members.par_sort_by(descending);
    let (classes, merges) = group_members(n, members);
    finish(n, SpectrumKind::Quantum, classes, merges, quantum_bound(n))
}

/// Classical attenuator spectrum: `n+1` binomial classes, class `k` at
/// intensity `alphaᵏ`. Entropy and counts do not depend on `alpha`.
pub fn classical_spectrum<T: Scalar>(n: usize, alpha: T) -> Result<SpectrumReport<T>> {
    apparatus::check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    if n > MAX_COUNT_N {
        return Err(Error::Capacity {
            operation: "classical_spectrum",
            n,
            max: MAX_COUNT_N,
        });
    }
    let mut classes = Vec::with_capacity(n + 1);
    let mut binom = BigUint::one();
    for k in 0..=n {
        classes.push(IntensityClass {
            intensity: alpha.powi(k as i32),
            label: ClassLabel::OnCount(k),
            probability: scaled_ratio(&binom, n),
            count: binom.clone(),
            n,
        });
        binom = binom * (n - k) / (k + 1);
    }
    let bound = T::from_usize_lossy(n + 1).log2();
    finish(n, SpectrumKind::Classical, classes, Vec::new(), bound)
}

/// One row of the classical-versus-quantum comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationRow<T> {
    pub n: usize,
    pub h_classical: T,
    pub h_quantum: T,
    /// `log₂(n+1)`
    pub classical_bound: T,
    /// `3.7007·√n`
    pub quantum_bound: T,
    /// `h_quantum / h_classical`
    pub ratio: T,
}

/// Comparison rows for `n_min..=n_max`.
pub fn information_series<T: Scalar>(n_min: usize, n_max: usize) -> Result<Vec<InformationRow<T>>> {
    if n_min == 0 {
        return Err(Error::TooSmall { n: n_min, min: 1 });
    }
    if n_min > n_max {
        return Err(Error::InvalidRange(format!("n_min {n_min} > n_max {n_max}")));
    }
    if n_max > MAX_ENUMERATE_N {
        return Err(Error::Capacity {
            operation: "information_series",
            n: n_max,
            max: MAX_ENUMERATE_N,
        });
    }
    (n_min..=n_max)
        .map(|n| {
            // entropy of the classical spectrum is the same for every alpha
            let classical = classical_spectrum::<T>(n, T::lit(0.5))?;
            let quantum = quantum_spectrum::<T>(n)?;
            Ok(InformationRow {
                n,
                h_classical: classical.entropy_bits,
                h_quantum: quantum.entropy_bits,
                classical_bound: classical.bound_bits,
                quantum_bound: quantum.bound_bits,
                ratio: quantum.entropy_bits / classical.entropy_bits,
            })
        })
        .collect()
}

/// First `n` in the series at which the quantum information strictly
/// exceeds the classical one.
pub fn entropy_crossover<T: Scalar>(rows: &[InformationRow<T>]) -> Option<usize> {
    rows.iter().find(|r| r.h_quantum > r.h_classical).map(|r| r.n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    /// Classical oracle: group all 2ⁿ configurations by popcount directly.
    fn popcount_probabilities(n: u32) -> Vec<f64> {
        let mut counts = vec![0u64; n as usize + 1];
        for idx in 0..(1u64 << n) {
            counts[idx.count_ones() as usize] += 1;
        }
        counts.iter().map(|&c| c as f64 / (1u64 << n) as f64).collect()
    }

    #[test]
    fn quantum_n3() {
        let r = quantum_spectrum::<f64>(3).unwrap();
        assert_eq!(r.classes.len(), 3);
        let want = [(27.0 / 64.0, 1, 4), (3.0 / 16.0, 1, 2), (0.0, 1, 4)];
        for (c, (i, a, b)) in r.classes.iter().zip(want) {
            assert!((c.intensity - i).abs() < 1e-12);
            assert_eq!(c.probability_ratio(), ratio(a, b));
        }
        assert!((r.entropy_bits - 1.5).abs() < 1e-12);
        assert!(r.merges.is_empty());
        assert_eq!(r.total_count(), BigUint::from(8u32));
        assert_eq!(
            r.classes[1].label,
            ClassLabel::Partitions(vec![Partition::new(vec![2, 1]).unwrap()])
        );
    }

    #[test]
    fn quantum_n1() {
        let r = quantum_spectrum::<f64>(1).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].intensity, 0.0);
        assert_eq!(r.classes[0].count, BigUint::from(2u32));
        assert_eq!(r.entropy_bits, 0.0);
    }

    #[test]
    fn quantum_matches_brute_force_up_to_16() {
        for n in 1..=16 {
            let q = quantum_spectrum::<f64>(n).unwrap();
            let b = brute_force_spectrum::<f64>(n).unwrap();
            assert_eq!(q.classes.len(), b.classes.len(), "n = {n}");
            for (x, y) in q.classes.iter().zip(&b.classes) {
                assert!((x.intensity - y.intensity).abs() <= 1e-12, "n = {n}");
                assert_eq!(x.count, y.count, "n = {n}");
                assert_eq!(x.label, y.label, "n = {n}");
            }
            assert_eq!(q.merges.len(), b.merges.len());
            assert!((q.entropy_bits - b.entropy_bits).abs() < 1e-12);
        }
    }

    #[test]
    fn brute_force_small_and_capacity() {
        let b = brute_force_spectrum::<f64>(3).unwrap();
        let sizes: Vec<u32> = b.classes.iter().map(|c| u32::try_from(&c.count).unwrap()).collect();
        assert_eq!(sizes, [2, 4, 2]);
        let b1 = brute_force_spectrum::<f64>(1).unwrap();
        assert_eq!(b1.classes.len(), 1);
        assert!(matches!(
            brute_force_spectrum::<f64>(21),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn n12_has_one_class_per_partition() {
        let b = brute_force_spectrum::<f64>(12).unwrap();
        assert_eq!(b.classes.len(), 77);
        assert!(b.merges.is_empty());
    }

    #[test]
    fn n15_coincidence_is_reported() {
        // 8+4+2+1 and 7+6+1+1 give the same transmission at n = 15
        let q = quantum_spectrum::<f64>(15).unwrap();
        assert_eq!(q.classes.len(), 175);
        assert_eq!(q.merges.len(), 1);
        let m = &q.merges[0];
        let pair = [m.kept.parts().to_vec(), m.merged.parts().to_vec()];
        assert!(pair.contains(&vec![8, 4, 2, 1]));
        assert!(pair.contains(&vec![7, 6, 1, 1]));
        assert_eq!(q.total_count(), BigUint::one() << 15);
    }

    #[test]
    fn classical_n3() {
        let r = classical_spectrum::<f64>(3, 0.5).unwrap();
        let oracle = popcount_probabilities(3);
        assert_eq!(r.probabilities(), oracle);
        let want = [ratio(1, 8), ratio(3, 8), ratio(3, 8), ratio(1, 8)];
        for (c, w) in r.classes.iter().zip(want) {
            assert_eq!(c.probability_ratio(), w);
        }
        let h_oracle = oracle.iter().map(|p| -p * p.log2()).sum::<f64>();
        assert!((r.entropy_bits - h_oracle).abs() < 1e-12);
        assert!((r.entropy_bits - 1.8113).abs() < 1e-4);
        let r1 = classical_spectrum::<f64>(1, 0.5).unwrap();
        assert_eq!(r1.entropy_bits, 1.0);
    }

    #[test]
    fn classical_oracle_up_to_20() {
        for n in 1..=20u32 {
            let r = classical_spectrum::<f64>(n as usize, 0.3).unwrap();
            for (c, o) in r.classes.iter().zip(popcount_probabilities(n)) {
                assert!((c.probability - o).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn classical_bound_and_gap() {
        let r15 = classical_spectrum::<f64>(15, 0.5).unwrap();
        assert!(r15.entropy_bits <= 4.0);
        for n in 1..=100 {
            let r = classical_spectrum::<f64>(n, 0.5).unwrap();
            assert!(r.entropy_bits <= r.bound_bits + 1e-9);
            assert_eq!(r.classes.len(), n + 1);
            assert_eq!(r.total_count(), BigUint::one() << n);
        }
        let r100 = classical_spectrum::<f64>(100, 0.5).unwrap();
        assert!(r100.entropy_bits < 101f64.log2() - 0.5);
    }

    #[test]
    fn classical_large_n() {
        let r = classical_spectrum::<f64>(10_000, 0.5).unwrap();
        assert_eq!(r.classes.len(), 10_001);
        // Gaussian limit ½·log₂(πeN/2)
        let approx = 0.5 * (std::f64::consts::PI * std::f64::consts::E * 10_000.0 / 2.0).log2();
        assert!((r.entropy_bits - approx).abs() < 1e-3, "{}", r.entropy_bits);
        assert!(classical_spectrum::<f64>(10_001, 0.5).is_err());
        assert!(matches!(
            classical_spectrum::<f64>(3, 1.0),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy::<f64>(&[0.25, 0.5, 0.25]).unwrap() - 1.5).abs() < 1e-15);
        assert!((entropy::<f64>(&[0.25; 4]).unwrap() - 2.0).abs() < 1e-15);
        let h = entropy::<f64>(&[0.125, 0.375, 0.375, 0.125]).unwrap();
        assert!((h - 1.8113).abs() < 1e-4);
        assert_eq!(entropy(&[1.0]).unwrap(), 0.0);
        assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!(entropy(&[0.5, 0.6]).is_err());
        assert!(entropy(&[1.5, -0.5]).is_err());
        assert!(entropy::<f64>(&[]).is_err());
        assert!(entropy(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn qubit_channel() {
        let h: f64 = qubit_channel_information(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!((h - 3f64.log2()).abs() < 1e-12);
        assert!((h - 1.585).abs() < 1e-3);
        assert_eq!(qubit_channel_information(1.0, 0.0, 0.0).unwrap(), 0.0);
        assert_eq!(qubit_channel_information(0.5, 0.5, 0.0).unwrap(), 1.0);
        assert!(qubit_channel_information(0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn scaled_ratio_handles_huge_exponents() {
        let big = BigUint::one() << 5000u32;
        assert_eq!(scaled_ratio::<f64>(&big, 5001), 0.5);
        assert_eq!(scaled_ratio::<f64>(&BigUint::from(3u32), 2), 0.75);
        let odd = (BigUint::one() << 200u32) + BigUint::one();
        assert_eq!(scaled_ratio::<f64>(&odd, 200), 1.0);
    }

    #[test]
    fn series_small() {
        let rows = information_series::<f64>(1, 10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].h_quantum, 0.0);
        let r3 = rows[2];
        assert_eq!(r3.n, 3);
        assert!((r3.h_quantum - 1.5).abs() < 1e-12);
        assert!((r3.h_classical - 1.8113).abs() < 1e-4);
        assert!(r3.h_quantum < r3.h_classical);
        for r in &rows[1..] {
            assert!(r.ratio.is_finite() && r.ratio > 0.0);
        }
        assert!(information_series::<f64>(0, 3).is_err());
        assert!(information_series::<f64>(5, 3).is_err());
        assert!(matches!(
            information_series::<f64>(1, 65),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn f32_spectrum() {
        let r = quantum_spectrum::<f32>(3).unwrap();
        assert_eq!(r.classes.len(), 3);
        assert!((r.entropy_bits - 1.5).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn entropy_permutation_invariant(raw in proptest::collection::vec(0.01f64..1.0, 1..12), rot in 0usize..12) {
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let mut rotated = probs.clone();
            let len = rotated.len();
            rotated.rotate_left(rot % len);
            let a = entropy(&probs).unwrap();
            let b = entropy(&rotated).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a <= (len as f64).log2() + 1e-9);
            prop_assert!(a >= 0.0);
            prop_assert_eq!(a == 0.0, len == 1);
        }

        #[test]
        fn classical_independent_of_alpha(n in 1usize..200, a in 0.01f64..0.99, b in 0.01f64..0.99) {
            let x = classical_spectrum(n, a).unwrap();
            let y = classical_spectrum(n, b).unwrap();
            prop_assert_eq!(x.entropy_bits, y.entropy_bits);
            let cx: Vec<_> = x.classes.iter().map(|c| c.count.clone()).collect();
            let cy: Vec<_> = y.classes.iter().map(|c| c.count.clone()).collect();
            prop_assert_eq!(cx, cy);
        }
    }
}
