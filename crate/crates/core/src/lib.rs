//! Simulation of a distributed polarization measurement chain: `n`
//! rotators with optional horizontal polarizers in between, a detector at
//! the end, and the information its intensity reading carries about which
//! polarizers are installed.
//!
//! The apparatus and spectrum code is generic over [`Scalar`] (`f32` or
//! `f64`); counts are exact big integers. The aliases below fix the scalar
//! to `f64`, which is what the CLI and the documented tolerances use.

pub mod apparatus;
pub mod error;
pub mod output;
pub mod partitions;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use apparatus::{
    classical_intensity, gaps, quantum_intensity, simulate_intensity, zeno_approximation,
    zeno_survival, ApparatusConfig, GapComposition,
};
pub use error::{Error, Result};
pub use partitions::{
    asymptotic_log2_p, count_partitions, enumerate_partitions, partition_counts, state_count,
    Partition, PartitionCount,
};
pub use scalar::Scalar;
pub use spectrum::{
    brute_force_spectrum, classical_spectrum, entropy, information_series,
    qubit_channel_information, quantum_spectrum, ClassLabel, SpectrumKind,
};

pub type PolarizationState = apparatus::PolarizationState<f64>;
pub type IntensityClass = spectrum::IntensityClass<f64>;
pub type SpectrumReport = spectrum::SpectrumReport<f64>;
pub type MergeEvent = spectrum::MergeEvent<f64>;
pub type InformationRow = spectrum::InformationRow<f64>;
