//! Pipeline state persisted between stages.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::certificate::{from_canonical_json, to_canonical_json, CheckRecord};
use super::config::{RunConfig, Stage};
use crate::error::{Error, Result};
use crate::mukai::Seed;
use crate::multilinear::Trivector;
use crate::syzygy::{SymplecticPhi, SyzygySpace};
use crate::t1::T1Run;
use crate::xquad::{Pencil, Ruling, V10Assembly, XPoint};

pub const STATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub version: u32,
    pub p: u64,
    pub rng_seed: u64,
    pub model_seed: u64,
    pub seed: Option<Seed>,
    pub assembly: Option<V10Assembly>,
    pub points: Vec<XPoint>,
    /// Rulings through the sampled points that have one.
    pub rulings: Vec<Ruling>,
    pub pencil: Option<Pencil>,
    pub syz: Option<SyzygySpace>,
    pub phi: Option<SymplecticPhi>,
    pub t2: Option<Trivector>,
    pub t1: Option<T1Run>,
    /// Rational Peskine points of `t2`, once searched for.
    pub peskine_t2: Option<Vec<Vec<u64>>>,
    pub checks: BTreeMap<String, CheckRecord>,
    pub completed: BTreeSet<Stage>,
    /// Seconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl State {
    pub fn new(config: &RunConfig) -> Self {
        State {
            version: STATE_VERSION,
            p: config.p,
            rng_seed: config.rng_seed,
            model_seed: config.model_seed(),
            seed: None,
            assembly: None,
            points: vec![],
            rulings: vec![],
            pencil: None,
            syz: None,
            phi: None,
            t2: None,
            t1: None,
            peskine_t2: None,
            checks: BTreeMap::new(),
            completed: BTreeSet::new(),
            timings: BTreeMap::new(),
        }
    }

    /// Refuse to continue a run under a different prime or seeds.
    pub fn matches(&self, config: &RunConfig) -> Result<()> {
        if self.p != config.p {
            return Err(Error::StateMismatch(format!(
                "state prime {} vs config prime {}",
                self.p, config.p
            )));
        }
        if self.rng_seed != config.rng_seed || self.model_seed != config.model_seed() {
            return Err(Error::StateMismatch(
                "seed differs from the saved state".into(),
            ));
        }
        Ok(())
    }
}

pub fn save_state(path: &Path, state: &State) -> Result<()> {
    std::fs::write(path, to_canonical_json(state)?)?;
    Ok(())
}

/// Load a state file, checking the format version and, when given, the prime.
pub fn load_state(path: &Path, prime: Option<u64>) -> Result<State> {
    let s = std::fs::read_to_string(path)?;
    let state: State = from_canonical_json(&s)?;
    if state.version != STATE_VERSION {
        return Err(Error::StateMismatch(format!(
            "state version {} (this build reads {})",
            state.version, STATE_VERSION
        )));
    }
    if let Some(p) = prime {
        if p != state.p {
            return Err(Error::StateMismatch(format!(
                "state prime {} vs requested {}",
                state.p, p
            )));
        }
    }
    Ok(state)
}
