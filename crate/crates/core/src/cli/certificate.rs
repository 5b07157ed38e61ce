//! Certificates: one record per check plus the artifacts needed to re-check
//! them, serialized as JSON with sorted keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::RunConfig;
use crate::error::Result;
use crate::ffla::Subspace;
use crate::mukai::Seed;
use crate::multilinear::Trivector;
use crate::syzygy::{SymplecticPhi, SyzygySpace};
use crate::xquad::{QuadricSystem, Ruling, XPoint};

pub const CERTIFICATE_FORMAT: &str = "k3g16-certificate";
pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Where the expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// A published value for this geometry.
    Published,
    /// Produced by an independent computation in this crate.
    Computed,
    /// Follows from a definition or a one-line argument.
    Elementary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// Acceptance criterion this check belongs to, if any.
    pub criterion: Option<u8>,
    /// Statement being checked.
    pub anchor: String,
    pub status: Status,
    pub value: Value,
    pub expected: Value,
    pub provenance: Provenance,
    pub note: Option<String>,
}

/// Objects a checker needs to re-verify the certificate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub v10: Option<QuadricSystem>,
    pub v8: Option<SyzygySpace>,
    pub phi: Option<SymplecticPhi>,
    pub t1: Option<Trivector>,
    pub t2: Option<Trivector>,
    /// Rank-8 pencil inside the 55-dimensional quadric space.
    pub pencil: Option<Subspace>,
    pub points: Vec<XPoint>,
    pub rulings: Vec<Ruling>,
    pub peskine_t2: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub version: u32,
    pub config: RunConfig,
    pub seed: Option<Seed>,
    pub checks: Vec<CheckRecord>,
    pub artifacts: Artifacts,
    pub timings: Option<BTreeMap<String, f64>>,
}

/// Largest integer JSON readers reproduce exactly.
const JSON_SAFE: u64 = 1 << 53;

fn widen(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_u64() {
            Some(u) if u > JSON_SAFE => Value::String(u.to_string()),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(widen).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, widen(v))).collect()),
        other => other,
    }
}

fn narrow(v: Value) -> Value {
    match v {
        Value::String(s) => match s.parse::<u64>() {
            Ok(u) if u > JSON_SAFE && !s.starts_with('0') => Value::from(u),
            _ => Value::String(s),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(narrow).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, narrow(v))).collect()),
        other => other,
    }
}

/// JSON with sorted keys and large integers as decimal strings.
pub fn to_canonical_json<T: Serialize>(x: &T) -> Result<String> {
    let v = widen(serde_json::to_value(x)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_canonical_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    let v: Value = serde_json::from_str(s)?;
    Ok(serde_json::from_value(narrow(v))?)
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        from_canonical_json(s)
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Aggregate status of one acceptance criterion: any failure fails it,
    /// then any inconclusive or skipped check; no checks at all is a failure.
    pub fn criterion_status(&self, n: u8) -> Status {
        let of: Vec<&CheckRecord> = self
            .checks
            .iter()
            .filter(|c| c.criterion == Some(n))
            .collect();
        if of.is_empty() {
            return Status::Fail;
        }
        for s in [Status::Fail, Status::Inconclusive, Status::Skipped] {
            if of.iter().any(|c| c.status == s) {
                return s;
            }
        }
        Status::Pass
    }

    /// Every check attached to a criterion passed.
    pub fn mandatory_passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.criterion.is_some())
            .all(|c| c.status == Status::Pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_round_trip_as_strings() {
        let x: Vec<u64> = vec![1, (1 << 60) + 7, 12];
        let s = to_canonical_json(&x).unwrap();
        assert!(s.contains("\"1152921504606846983\""));
        let y: Vec<u64> = from_canonical_json(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn keys_are_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        let s = to_canonical_json(&S { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }
}
