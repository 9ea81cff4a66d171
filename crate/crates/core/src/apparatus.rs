//! One apparatus configuration: `n` rotators, each by `π/2n`, with a
//! horizontal polarizer that may or may not be installed after each one,
//! followed by a horizontal analyzer and intensity meter `D`.
//!
//! Slots are numbered `1..=n` from the source. In string and index form the
//! leftmost character (most significant bit) is slot 1, so `"010"` has only
//! the middle polarizer installed.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::scalar::Scalar;

/// Which of the `n` polarizer slots are occupied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApparatusConfig {
    present: Vec<bool>,
}

impl ApparatusConfig {
    pub fn new(present: Vec<bool>) -> Result<Self> {
        if present.is_empty() {
            return Err(Error::InvalidConfig("at least one stage required".into()));
        }
        Ok(ApparatusConfig { present })
    }

    /// Configuration number `index` out of `2ⁿ`, slot 1 in the top bit.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidConfig(format!(
                "indexed configurations need 1 <= n <= 64, got {n}"
            )));
        }
        if n < 64 && index >> n != 0 {
            return Err(Error::InvalidConfig(format!(
                "index {index} out of range for n = {n}"
            )));
        }
        let present = (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect();
        Ok(ApparatusConfig { present })
    }

    /// All polarizers installed.
    pub fn full(n: usize) -> Result<Self> {
        Self::new(vec![true; n])
    }

    pub fn n(&self) -> usize {
        self.present.len()
    }

    pub fn present(&self) -> &[bool] {
        &self.present
    }

    /// Whether slot `slot` (1-based) holds a polarizer.
    pub fn is_present(&self, slot: usize) -> bool {
        self.present[slot - 1]
    }

    /// Number of installed polarizers.
    pub fn installed(&self) -> usize {
        self.present.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for ApparatusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.present {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for ApparatusConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let present = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidConfig(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(present)
    }
}

/// Rotator counts between consecutive analyzing events, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GapComposition {
    parts: Vec<usize>,
    n: usize,
}

impl GapComposition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "gap composition needs positive parts, got {parts:?}"
            )));
        }
        let n = parts.iter().sum();
        Ok(GapComposition { parts, n })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The multiset of gaps, which is all the intensity depends on.
    pub fn to_partition(&self) -> Partition {
        Partition::from_unsorted(self.parts.clone()).expect("gaps are positive")
    }
}

/// Real horizontal/vertical amplitudes of the photon. Rotations and
/// horizontal projections never introduce a phase, so no complex part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState<T> {
    pub amp_h: T,
    pub amp_v: T,
}

impl<T: Scalar> PolarizationState<T> {
    pub fn horizontal() -> Self {
        PolarizationState {
            amp_h: T::one(),
            amp_v: T::zero(),
        }
    }

    pub fn rotate(&mut self, angle: T) {
        let (s, c) = angle.sin_cos();
        let h = c * self.amp_h - s * self.amp_v;
        let v = s * self.amp_h + c * self.amp_v;
        self.amp_h = h;
        self.amp_v = v;
    }

    /// Horizontal polarizer: the vertical component is absorbed.
    pub fn project_horizontal(&mut self) {
        self.amp_v = T::zero();
    }

    pub fn norm_sqr(&self) -> T {
        self.amp_h * self.amp_h + self.amp_v * self.amp_v
    }

    /// Intensity a horizontal analyzer would pass.
    pub fn horizontal_intensity(&self) -> T {
        self.amp_h * self.amp_h
    }
}

/// Gaps between analyzing events: source to the first installed polarizer,
/// between installed polarizers, and from the last one to `D`. When slot `n`
/// is installed there is no trailing gap.
pub fn gaps(config: &ApparatusConfig) -> GapComposition {
    let n = config.n();
    let mut parts = Vec::new();
    let mut last = 0;
    for (i, &here) in config.present().iter().enumerate() {
        if here {
            parts.push(i + 1 - last);
            last = i + 1;
        }
    }
    if last < n {
        parts.push(n - last);
    }
    GapComposition { parts, n }
}

/// `Π cos²(g·π/2n)` over the gaps. A gap of `n` means a full quarter turn
/// before the first analysis, which is exactly zero.
pub fn gap_product_intensity<T: Scalar>(gaps: &[usize], n: usize) -> T {
    if gaps.contains(&n) {
        return T::zero();
    }
    let step = T::FRAC_PI_2() / T::from_usize_lossy(n);
    gaps.iter().fold(T::one(), |acc, &g| {
        let c = (step * T::from_usize_lossy(g)).cos();
        acc * c * c
    })
}

/// Transmission of a horizontally polarized photon through the chain.
pub fn quantum_intensity<T: Scalar>(config: &ApparatusConfig) -> T {
    let g = gaps(config);
    gap_product_intensity(g.parts(), g.n())
}

/// The same transmission, obtained by stepping the polarization state
/// through every rotator and installed polarizer.
pub fn simulate_intensity<T: Scalar>(config: &ApparatusConfig) -> T {
    let step = T::FRAC_PI_2() / T::from_usize_lossy(config.n());
    let mut state = PolarizationState::<T>::horizontal();
    for &here in config.present() {
        state.rotate(step);
        if here {
            state.project_horizontal();
        }
    }
    state.horizontal_intensity()
}

/// Classical attenuator chain: each installed unit passes a fraction `alpha`.
pub fn classical_intensity<T: Scalar>(config: &ApparatusConfig, alpha: T) -> Result<T> {
    check_alpha(alpha)?;
    Ok(alpha.powi(config.installed() as i32))
}

pub(crate) fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `(cos² π/2n)ⁿ`, the transmission with every polarizer installed.
pub fn zeno_survival<T: Scalar>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    if n == 1 {
        return Ok(T::zero());
    }
    let c = (T::FRAC_PI_2() / T::from_usize_lossy(n)).cos();
    Ok((c * c).powi(n as i32))
}

/// First-order estimate `1 − π²/4n`, a lower bound on [`zeno_survival`].
/// Negative (meaningless) for `n ≤ 2`.
pub fn zeno_approximation<T: Scalar>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::TooSmall { n, min: 1 });
    }
    Ok(T::one() - T::PI() * T::PI() / (T::lit(4.0) * T::from_usize_lossy(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(s: &str) -> ApparatusConfig {
        s.parse().unwrap()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gaps(&cfg("010")).parts(), &[2, 1]);
        assert_eq!(gaps(&cfg("011")).parts(), &[2, 1]);
        assert_eq!(gaps(&cfg("100")).parts(), &[1, 2]);
        assert_eq!(gaps(&cfg("111")).parts(), &[1, 1, 1]);
        assert_eq!(gaps(&cfg("000")).parts(), &[3]);
        assert_eq!(gaps(&cfg("001")).parts(), &[3]);
    }

    #[test]
    fn intensity_examples_n3() {
        let cases = [
            ("000", 0.0),
            ("001", 0.0),
            ("010", 3.0 / 16.0),
            ("011", 3.0 / 16.0),
            ("100", 3.0 / 16.0),
            ("101", 3.0 / 16.0),
            ("110", 27.0 / 64.0),
            ("111", 27.0 / 64.0),
        ];
        for (s, want) in cases {
            let q: f64 = quantum_intensity(&cfg(s));
            let sim: f64 = simulate_intensity(&cfg(s));
            assert!((q - want).abs() < 1e-12, "{s}: {q}");
            assert!((sim - want).abs() < 1e-12, "{s}: {sim}");
        }
        assert_eq!(quantum_intensity::<f64>(&cfg("001")), 0.0);
    }

    #[test]
    fn single_stage() {
        let c = cfg("0");
        assert_eq!(quantum_intensity::<f64>(&c), 0.0);
        assert!(simulate_intensity::<f64>(&c).abs() < 1e-12);
        assert_eq!(zeno_survival::<f64>(1).unwrap(), 0.0);
    }

    #[test]
    fn index_round_trip_and_order() {
        let names: Vec<String> = (0..8)
            .map(|i| ApparatusConfig::from_index(3, i).unwrap().to_string())
            .collect();
        assert_eq!(names, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        assert!(ApparatusConfig::from_index(3, 8).is_err());
        assert!(ApparatusConfig::from_index(0, 0).is_err());
        assert!(ApparatusConfig::from_index(64, u64::MAX).is_ok());
        assert!("01x".parse::<ApparatusConfig>().is_err());
        assert!("".parse::<ApparatusConfig>().is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_intensity(&cfg("000"), 0.3).unwrap(), 1.0);
        let v: f64 = classical_intensity(&cfg("111"), 0.75).unwrap();
        assert!((v - 27.0 / 64.0).abs() < 1e-15);
        assert_eq!(classical_intensity(&cfg("010"), 0.5).unwrap(), 0.5);
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(
                classical_intensity(&cfg("010"), bad),
                Err(Error::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn zeno_examples() {
        let z3: f64 = zeno_survival(3).unwrap();
        assert!((z3 - 27.0 / 64.0).abs() < 1e-12);
        let z: f64 = zeno_survival(10_000).unwrap();
        assert!(z >= 0.999753, "{z}");
        assert!(z >= zeno_approximation::<f64>(10_000).unwrap());
        assert!(zeno_survival::<f64>(0).is_err());
        let a1: f64 = zeno_approximation(1).unwrap();
        assert!((a1 + 1.4674).abs() < 1e-3);
    }

    #[test]
    fn zeno_monotone_and_bounded() {
        let mut prev = 0.0;
        for n in 1..=5000 {
            let z: f64 = zeno_survival(n).unwrap();
            assert!(z >= prev, "n = {n}");
            if n >= 2 {
                assert!(z >= zeno_approximation::<f64>(n).unwrap(), "n = {n}");
            }
            let full: f64 = if n <= 64 {
                quantum_intensity(&ApparatusConfig::full(n).unwrap())
            } else {
                z
            };
            assert!((full - z).abs() < 1e-12);
            prev = z;
        }
    }

    #[test]
    fn zeno_epsilon_threshold() {
        for eps in [0.1, 0.01, 1e-3] {
            let n = (std::f64::consts::PI.powi(2) / (4.0 * eps)).ceil() as usize;
            assert!(zeno_survival::<f64>(n).unwrap() > 1.0 - eps);
        }
    }

    #[test]
    fn exhaustive_agreement_n_up_to_16() {
        for n in 1..=16usize {
            let mut zeros = 0;
            for idx in 0..(1u64 << n) {
                let c = ApparatusConfig::from_index(n, idx).unwrap();
                let g = gaps(&c);
                assert_eq!(g.parts().iter().sum::<usize>(), n);
                let q: f64 = quantum_intensity(&c);
                let s: f64 = simulate_intensity(&c);
                assert!((q - s).abs() <= 1e-12, "n={n} {c}: {q} vs {s}");
                if q == 0.0 {
                    zeros += 1;
                    assert_eq!(g.parts(), &[n]);
                }
            }
            assert_eq!(zeros, 2, "n = {n}");
        }
    }

    #[test]
    fn f32_path_runs() {
        let q: f32 = quantum_intensity(&cfg("111"));
        let s: f32 = simulate_intensity(&cfg("111"));
        assert!((q - 27.0 / 64.0).abs() < 1e-6);
        assert!((s - 27.0 / 64.0).abs() < 1e-6);
    }

    fn config_strategy(max_n: usize) -> impl Strategy<Value = ApparatusConfig> {
        proptest::collection::vec(any::<bool>(), 1..=max_n)
            .prop_map(|v| ApparatusConfig::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn gap_parts_sum_to_n(c in config_strategy(128)) {
            let g = gaps(&c);
            prop_assert_eq!(g.parts().iter().sum::<usize>(), c.n());
            prop_assert!(g.parts().iter().all(|&p| p >= 1));
        }

        #[test]
        fn oracle_agrees_up_to_64(c in config_strategy(64)) {
            let q: f64 = quantum_intensity(&c);
            let s: f64 = simulate_intensity(&c);
            prop_assert!((q - s).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&q));
        }

        #[test]
        fn last_slot_is_redundant(c in config_strategy(64)) {
            let mut bits = c.present().to_vec();
            let last = bits.len() - 1;
            bits[last] = !bits[last];
            let other = ApparatusConfig::new(bits).unwrap();
            prop_assert_eq!(gaps(&c), gaps(&other));
            prop_assert_eq!(quantum_intensity::<f64>(&c), quantum_intensity::<f64>(&other));
        }

        #[test]
        fn gap_order_does_not_matter(parts in proptest::collection::vec(1usize..8, 1..10), seed in any::<u64>()) {
            let n: usize = parts.iter().sum();
            let mut shuffled = parts.clone();
            // deterministic shuffle from the seed
            let len = shuffled.len();
            for i in (1..len).rev() {
                let j = (seed.rotate_left(i as u32) % (i as u64 + 1)) as usize;
                shuffled.swap(i, j);
            }
            let a: f64 = gap_product_intensity(&parts, n);
            let b: f64 = gap_product_intensity(&shuffled, n);
            prop_assert!((a - b).abs() <= 1e-15);
        }

        #[test]
        fn norm_never_grows(c in config_strategy(64)) {
            let step = std::f64::consts::FRAC_PI_2 / c.n() as f64;
            let mut st = PolarizationState::<f64>::horizontal();
            let mut prev = st.norm_sqr();
            for &here in c.present() {
                st.rotate(step);
                if here {
                    st.project_horizontal();
                }
                prop_assert!(st.norm_sqr() <= prev + 1e-15);
                prev = st.norm_sqr();
            }
        }
    }
}
