//! Self-check suite run by the `verify` command.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::apparatus::{self, ApparatusConfig};
use crate::error::Result;
use crate::partitions::{self, log2_biguint};
use crate::scalar::hardy_ramanujan_log2_constant;
use crate::spectrum;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            expected: expected.into(),
            actual: actual.into(),
            passed,
        }
    }

    fn failed(name: &str, err: crate::Error) -> Self {
        Check::new(name, "no error", err.to_string(), false)
    }
}

/// Signature of a gap-product intensity rule, so a tampered rule can be
/// substituted as a negative control.
pub type IntensityRule = fn(&ApparatusConfig) -> f64;

type Step = fn(IntensityRule) -> Result<Check>;

pub fn run_checks() -> Vec<Check> {
    run_checks_with(apparatus::quantum_intensity::<f64>)
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Runs every check, using `rule` wherever the closed-form intensity is
/// needed.
pub fn run_checks_with(rule: IntensityRule) -> Vec<Check> {
    let mut checks = Vec::new();
    let steps: [(&str, Step); 10] = [
        ("partition counts p(1..10)", |_| small_partition_counts()),
        ("p(100)=190569292", |_| p_100()),
        ("n=3 intensities", n3_intensities),
        ("n=3 spectrum", |_| n3_spectrum()),
        ("state counts sum to 2^n for n<=20", |_| conservation()),
        ("closed form vs simulation for n<=16", oracle_equivalence),
        ("quantum vs brute-force spectrum for n<=16", |_| spectrum_equivalence()),
        ("classical entropy <= log2(n+1) for n<=100", |_| classical_bound()),
        ("quantum entropy <= log2 p(n) <= 3.7007*sqrt(n)", |_| quantum_bound()),
        ("zeno survival bound and monotonicity", |_| zeno()),
    ];
    for (name, step) in steps {
        checks.push(step(rule).unwrap_or_else(|e| Check::failed(name, e)));
    }
    checks.push(qubit_channel());
    checks
}

fn small_partition_counts() -> Result<Check> {
    let want = "1,2,3,5,7,11,15,22,30,42";
    let table = partitions::partition_counts(10)?;
    let got: Vec<String> = table[1..].iter().map(|p| p.to_string()).collect();
    let got = got.join(",");
    Ok(Check::new("partition counts p(1..10)", want, got.clone(), got == want))
}

fn p_100() -> Result<Check> {
    let got = partitions::count_partitions(100)?.to_string();
    Ok(Check::new("p(100)=190569292", "190569292", got.clone(), got == "190569292"))
}

fn n3_intensities(rule: IntensityRule) -> Result<Check> {
    let want = [0.0, 0.0, 0.1875, 0.1875, 0.1875, 0.1875, 0.421875, 0.421875];
    let got: Vec<f64> = (0..8)
        .map(|i| ApparatusConfig::from_index(3, i).map(|c| rule(&c)))
        .collect::<Result<_>>()?;
    let passed = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-12);
    Ok(Check::new(
        "n=3 intensities",
        format!("{want:?}"),
        format!("{got:?}"),
        passed,
    ))
}

fn n3_spectrum() -> Result<Check> {
    let report = spectrum::quantum_spectrum::<f64>(3)?;
    let ratios: Vec<BigRational> = report.classes.iter().map(|c| c.probability_ratio()).collect();
    let want: Vec<BigRational> = [(1, 4), (1, 2), (1, 4)]
        .iter()
        .map(|&(a, b)| BigRational::new(a.into(), b.into()))
        .collect();
    let passed = ratios == want && (report.entropy_bits - 1.5).abs() <= 1e-12;
    let shown: Vec<String> = ratios.iter().map(|r| r.to_string()).collect();
    Ok(Check::new(
        "n=3 spectrum",
        "probabilities [1/4, 1/2, 1/4], entropy 1.5",
        format!("probabilities [{}], entropy {}", shown.join(", "), report.entropy_bits),
        passed,
    ))
}

fn conservation() -> Result<Check> {
    let mut bad = Vec::new();
    for n in 1..=20 {
        let total: BigUint = partitions::enumerate_partitions(n)?
            .map(|p| partitions::state_count(&p))
            .sum();
        if total != BigUint::one() << n {
            bad.push(n);
        }
    }
    Ok(Check::new(
        "state counts sum to 2^n for n<=20",
        "no mismatches",
        format!("mismatches at {bad:?}"),
        bad.is_empty(),
    ))
}

fn oracle_equivalence(rule: IntensityRule) -> Result<Check> {
    let mut worst = 0.0f64;
    for n in 1..=16usize {
        for idx in 0..(1u64 << n) {
            let c = ApparatusConfig::from_index(n, idx)?;
            worst = worst.max((rule(&c) - apparatus::simulate_intensity::<f64>(&c)).abs());
        }
    }
    Ok(Check::new(
        "closed form vs simulation for n<=16",
        "max deviation <= 1e-12",
        format!("max deviation {worst:e}"),
        worst <= 1e-12,
    ))
}

fn spectrum_equivalence() -> Result<Check> {
    let mut bad = Vec::new();
    for n in 1..=16 {
        let q = spectrum::quantum_spectrum::<f64>(n)?;
        let b = spectrum::brute_force_spectrum::<f64>(n)?;
        let same = q.classes.len() == b.classes.len()
            && q.classes.iter().zip(&b.classes).all(|(x, y)| {
                x.count == y.count && x.label == y.label && (x.intensity - y.intensity).abs() <= 1e-12
            });
        if !same {
            bad.push(n);
        }
    }
    Ok(Check::new(
        "quantum vs brute-force spectrum for n<=16",
        "identical classes",
        format!("mismatches at {bad:?}"),
        bad.is_empty(),
    ))
}

fn classical_bound() -> Result<Check> {
    let mut bad = Vec::new();
    for n in 1..=100 {
        let r = spectrum::classical_spectrum::<f64>(n, 0.5)?;
        if r.entropy_bits > r.bound_bits + 1e-9 {
            bad.push(n);
        }
    }
    let h100 = spectrum::classical_spectrum::<f64>(100, 0.5)?.entropy_bits;
    let gap = 101f64.log2() - h100;
    Ok(Check::new(
        "classical entropy <= log2(n+1) for n<=100",
        "no violations, gap at n=100 > 0.5",
        format!("violations at {bad:?}, gap at n=100 {gap:.4}"),
        bad.is_empty() && gap > 0.5,
    ))
}

fn quantum_bound() -> Result<Check> {
    let counts = partitions::partition_counts(200)?;
    let c = hardy_ramanujan_log2_constant::<f64>();
    let mut bad = Vec::new();
    for (n, count) in counts.iter().enumerate().skip(1) {
        let log_p = log2_biguint(count);
        let mut ok = log_p < c * (n as f64).sqrt();
        if n <= 32 {
            // the n<=64 entropy sweep lives in the acceptance suite; verify keeps to n<=32
            let h = spectrum::quantum_spectrum::<f64>(n)?.entropy_bits;
            ok &= h <= log_p + 1e-9;
        }
        if !ok {
            bad.push(n);
        }
    }
    Ok(Check::new(
        "quantum entropy <= log2 p(n) <= 3.7007*sqrt(n)",
        "no violations",
        format!("violations at {bad:?}"),
        bad.is_empty(),
    ))
}

fn zeno() -> Result<Check> {
    let mut prev = 0.0;
    let mut bad = Vec::new();
    for n in 1..=10_000 {
        let z: f64 = apparatus::zeno_survival(n)?;
        let approx: f64 = apparatus::zeno_approximation(n)?;
        if z < prev || (n >= 2 && z < approx) {
            bad.push(n);
        }
        prev = z;
    }
    Ok(Check::new(
        "zeno survival bound and monotonicity",
        "no violations, survival(10000) >= 0.999753",
        format!("violations at {bad:?}, survival(10000) = {prev:.6}"),
        bad.is_empty() && prev >= 0.999753,
    ))
}

fn qubit_channel() -> Check {
    let third = 1.0 / 3.0;
    match spectrum::qubit_channel_information(third, third, third) {
        Ok(h) => Check::new(
            "three-outcome channel = log2 3",
            format!("{:.12}", 3f64.log2()),
            format!("{h:.12}"),
            (h - 3f64.log2()).abs() <= 1e-12 && (h - 1.585).abs() <= 1e-3,
        ),
        Err(e) => Check::failed("three-outcome channel = log2 3", e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tampered(c: &ApparatusConfig) -> f64 {
        // cos instead of cos²
        let g = apparatus::gaps(c);
        let step = std::f64::consts::FRAC_PI_2 / c.n() as f64;
        g.parts().iter().map(|&p| (step * p as f64).cos()).product()
    }

    #[test]
    fn tampered_rule_fails_n3_check() {
        let checks = run_checks_with(tampered);
        let n3 = checks.iter().find(|c| c.name == "n=3 intensities").unwrap();
        assert!(!n3.passed);
        assert!(!all_passed(&checks));
    }
}
