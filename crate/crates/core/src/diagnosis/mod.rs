//! The three adaptive diagnosis procedures.
//!
//! * [`line_scan`] / [`find_all_knights`]: walk a line asking each processor
//!   whether its successor is Normal, then interrogate the survivor about everyone.
//! * [`find_reliable_pairing`]: a pairing tournament that keeps the Normals a
//!   strict minority each round.
//! * [`identify_normals`]: isolate every Normal with fewer than `3n/2` questions.
//!
//! None of them read the world's types; the audits that do are bookkeeping
//! computed alongside.

mod line_scan;
mod normals;
mod pairing;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interrogation::{NormalStrategy, Predicate, PredicateKind, Session};

pub use line_scan::{find_all_knights, line_scan, KnightReport, LineScanOutcome};
pub use normals::{default_budget, identify_normals, CaseRecord, NormalReport, Stop};
pub use pairing::{find_reliable_pairing, pairing_round, PairCensus, PairingReport, RoundAudit};

/// Asks `trusted` about each target in turn and returns those for which it says yes.
pub fn classify_all<S: NormalStrategy>(
    session: &mut Session<'_, S>,
    trusted: usize,
    targets: &[usize],
    kind: PredicateKind,
) -> Result<BTreeSet<usize>> {
    let mut hits = BTreeSet::new();
    for &t in targets {
        if session.ask(trusted, Predicate::new(kind, t))?.is_yes() {
            hits.insert(t);
        }
    }
    Ok(hits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LineScan,
    FindAllKnights,
    FindReliablePairing,
    IdentifyNormals,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Self::LineScan,
        Self::FindAllKnights,
        Self::FindReliablePairing,
        Self::IdentifyNormals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LineScan => "line_scan",
            Self::FindAllKnights => "find_all_knights",
            Self::FindReliablePairing => "find_reliable_pairing",
            Self::IdentifyNormals => "identify_normals",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

/// Output of any one of the algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    LineScan(LineScanOutcome),
    Knights(KnightReport),
    Pairing(PairingReport),
    Normals(NormalReport),
}

impl Outcome {
    /// The processor the algorithm vouches for, when it produces one.
    pub fn trusted(&self) -> Option<usize> {
        match self {
            Outcome::LineScan(o) => Some(o.trusted),
            Outcome::Knights(r) => Some(r.trusted),
            Outcome::Pairing(r) => Some(r.trusted),
            Outcome::Normals(_) => None,
        }
    }

    /// Classified set: Knights for `find_all_knights`, Normals for `identify_normals`.
    pub fn classified(&self) -> Option<&BTreeSet<usize>> {
        match self {
            Outcome::Knights(r) => Some(&r.knights),
            Outcome::Normals(r) => Some(&r.normals),
            _ => None,
        }
    }
}

/// Runs `algorithm` over the whole world. `budget` only affects
/// `identify_normals` and defaults to `⌈n/2⌉ − 1`.
pub fn run<S: NormalStrategy>(
    session: &mut Session<'_, S>,
    algorithm: Algorithm,
    budget: Option<usize>,
) -> Result<Outcome> {
    let n = session.world().len();
    Ok(match algorithm {
        Algorithm::LineScan => Outcome::LineScan(line_scan(session)?),
        Algorithm::FindAllKnights => Outcome::Knights(find_all_knights(session)?),
        Algorithm::FindReliablePairing => Outcome::Pairing(find_reliable_pairing(session)?),
        Algorithm::IdentifyNormals => {
            let members: Vec<usize> = (0..n).collect();
            let budget = budget.unwrap_or_else(|| default_budget(n));
            Outcome::Normals(identify_normals(session, &members, budget)?)
        }
    })
}
