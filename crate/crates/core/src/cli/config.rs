//! Run configuration: prime, seeds, stage selection and budgets.

use serde::{Deserialize, Serialize};

/// Pipeline stages in execution order.
#[derive(
    Clone,
    Copy,
    Debug,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Quadrics,
    Syzygy,
    Cover,
    Trivectors,
    Orthogonality,
    Degrees,
    Kummer,
    Chow,
    Plucker,
    Probes,
}

impl Stage {
    pub const ALL: [Stage; 10] = [
        Stage::Quadrics,
        Stage::Syzygy,
        Stage::Cover,
        Stage::Trivectors,
        Stage::Orthogonality,
        Stage::Degrees,
        Stage::Kummer,
        Stage::Chow,
        Stage::Plucker,
        Stage::Probes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Quadrics => "quadrics",
            Stage::Syzygy => "syzygy",
            Stage::Cover => "cover",
            Stage::Trivectors => "trivectors",
            Stage::Orthogonality => "orthogonality",
            Stage::Degrees => "degrees",
            Stage::Kummer => "kummer",
            Stage::Chow => "chow",
            Stage::Plucker => "plucker",
            Stage::Probes => "probes",
        }
    }

    /// Stages whose artifacts this one reads.
    pub fn deps(self) -> &'static [Stage] {
        match self {
            Stage::Quadrics | Stage::Chow => &[],
            Stage::Syzygy | Stage::Plucker => &[Stage::Quadrics],
            Stage::Cover | Stage::Trivectors => &[Stage::Syzygy],
            Stage::Orthogonality | Stage::Degrees | Stage::Kummer | Stage::Probes => {
                &[Stage::Trivectors]
            }
        }
    }

    /// Acceptance criterion whose failure a stage error counts against.
    pub fn criterion(self) -> Option<u8> {
        match self {
            Stage::Quadrics => Some(1),
            Stage::Syzygy => Some(3),
            Stage::Cover => Some(5),
            Stage::Trivectors => Some(8),
            Stage::Orthogonality => Some(9),
            Stage::Degrees => Some(10),
            Stage::Kummer => Some(12),
            Stage::Chow => Some(13),
            Stage::Plucker => Some(14),
            Stage::Probes => None,
        }
    }
}

/// Requested stages plus everything they depend on, in execution order.
pub fn closure(stages: &[Stage]) -> Vec<Stage> {
    let mut need = std::collections::BTreeSet::new();
    let mut todo: Vec<Stage> = stages.to_vec();
    while let Some(s) = todo.pop() {
        if need.insert(s) {
            todo.extend_from_slice(s.deps());
        }
    }
    need.into_iter().collect()
}

/// Sampling and search limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Planes swept when assembling the quadrics.
    pub planes: usize,
    /// Attempts allowed for the plane sweep.
    pub plane_attempts: usize,
    /// Rational points of `X` to sample.
    pub x_points: usize,
    /// Planes allowed when sampling points.
    pub point_planes: usize,
    /// Redraws for seeds and for the `t1` construction.
    pub retries: usize,
    /// Largest degree tried when looking for a Hilbert function plateau.
    pub degree_cap: usize,
    /// Slices searched for rational Peskine points.
    pub peskine_slices: usize,
    /// Slices searched for rank-7 points of `s'_γ`.
    pub rank7_slices: usize,
    /// Points on which the involution is tested.
    pub cover_points: usize,
    pub hilbert_max: usize,
    pub plucker_max: usize,
    /// Random lines tried for the tangent decomposition.
    pub tangent_lines: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            planes: 6,
            plane_attempts: 200,
            x_points: 24,
            point_planes: 500,
            retries: 5,
            degree_cap: 40,
            peskine_slices: 10,
            rank7_slices: 12,
            cover_points: 100,
            hilbert_max: 6,
            plucker_max: 4,
            tangent_lines: 300,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    /// Seed for every sampling stream.
    pub rng_seed: u64,
    /// Seed for the model itself; defaults to `rng_seed`.
    pub model_seed: Option<u64>,
    pub stages: Vec<Stage>,
    pub budgets: Budgets,
    /// Include wall-clock timings in the certificate (breaks byte equality).
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    pub fn new(p: u64, rng_seed: u64) -> Self {
        RunConfig {
            p,
            rng_seed,
            model_seed: None,
            stages: Stage::ALL.to_vec(),
            budgets: Budgets::default(),
            timings: false,
        }
    }

    pub fn with_stages(mut self, stages: &[Stage]) -> Self {
        self.stages = stages.to_vec();
        self
    }

    pub fn model_seed(&self) -> u64 {
        self.model_seed.unwrap_or(self.rng_seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adds_dependencies_in_order() {
        assert_eq!(
            closure(&[Stage::Kummer]),
            vec![
                Stage::Quadrics,
                Stage::Syzygy,
                Stage::Trivectors,
                Stage::Kummer
            ]
        );
        assert_eq!(closure(&[Stage::Chow]), vec![Stage::Chow]);
        assert_eq!(closure(&Stage::ALL), Stage::ALL.to_vec());
    }
}
