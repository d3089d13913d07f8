//! Scenario runs, parameter sweeps, and their JSON/CSV forms.

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnosis::{self, default_budget, Algorithm, Outcome};
use crate::error::{Error, Result};
use crate::interrogation::{
    AlwaysNo, AlwaysYes, Answer, NormalStrategy, Predicate, Scripted, SeededRandom, Session,
    Transcript,
};
use crate::verifier::question_bound;
use crate::world::{ProcessorType, World};

/// Environment variable naming the directory outputs go to when no explicit path is given.
pub const OUT_DIR_ENV: &str = "FAULTDIAG_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    AlwaysYes,
    AlwaysNo,
    Scripted,
    SeededRandom,
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "always_yes" => Ok(Self::AlwaysYes),
            "always_no" => Ok(Self::AlwaysNo),
            "scripted" => Ok(Self::Scripted),
            "seeded_random" => Ok(Self::SeededRandom),
            _ => Err(Error::UnknownStrategy(s.to_string())),
        }
    }
}

/// Parses a comma-separated answer list such as `yes,no,no`.
pub fn parse_script(text: &str) -> Result<Vec<Answer>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub world: String,
    pub algorithm: Algorithm,
    pub strategy: StrategyKind,
    #[serde(default)]
    pub script: Option<Vec<Answer>>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Only used by `identify_normals`; defaults to `⌈n/2⌉ − 1`.
    #[serde(default)]
    pub normal_budget: Option<usize>,
}

impl ScenarioConfig {
    pub fn new(world: impl Into<String>, algorithm: Algorithm, strategy: StrategyKind) -> Self {
        Self {
            world: world.into(),
            algorithm,
            strategy,
            script: None,
            seed: None,
            normal_budget: None,
        }
    }

    fn build_strategy(&self) -> Result<Box<dyn NormalStrategy>> {
        Ok(match self.strategy {
            StrategyKind::AlwaysYes => Box::new(AlwaysYes),
            StrategyKind::AlwaysNo => Box::new(AlwaysNo),
            StrategyKind::Scripted => Box::new(Scripted::new(
                self.script
                    .clone()
                    .ok_or(Error::MissingParameter("scripted", "script"))?,
            )),
            StrategyKind::SeededRandom => Box::new(SeededRandom::new(
                self.seed
                    .ok_or(Error::MissingParameter("seeded_random", "seed"))?,
            )),
        })
    }
}

/// Algorithm result in its JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResultDoc {
    Knights { trusted: usize, knights: Vec<usize> },
    Normals { normals: Vec<usize> },
    Trusted { trusted: usize },
}

impl ResultDoc {
    pub fn from_outcome(outcome: &Outcome) -> Self {
        match outcome {
            Outcome::LineScan(o) => Self::Trusted { trusted: o.trusted },
            Outcome::Pairing(r) => Self::Trusted { trusted: r.trusted },
            Outcome::Knights(r) => Self::Knights {
                trusted: r.trusted,
                knights: r.knights.iter().copied().collect(),
            },
            Outcome::Normals(r) => Self::Normals {
                normals: r.normals.iter().copied().collect(),
            },
        }
    }

    /// Single-field rendering for CSV: an index, or a `;`-separated set.
    pub fn compact(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
        match self {
            Self::Trusted { trusted } => trusted.to_string(),
            Self::Knights { knights, .. } => join(knights),
            Self::Normals { normals } => join(normals),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub i: usize,
    pub respondent: usize,
    pub predicate: Predicate,
    pub answer: Answer,
}

/// The transcript file written by `simulate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptDoc {
    pub world: String,
    pub algorithm: Algorithm,
    pub entries: Vec<EntryDoc>,
    pub result: ResultDoc,
    pub questions: usize,
}

impl TranscriptDoc {
    pub fn new(
        world: &World,
        algorithm: Algorithm,
        transcript: &Transcript,
        outcome: &Outcome,
    ) -> Self {
        Self {
            world: world.to_string(),
            algorithm,
            entries: transcript
                .entries()
                .iter()
                .map(|e| EntryDoc {
                    i: e.index,
                    respondent: e.respondent,
                    predicate: e.question.predicate,
                    answer: e.answer,
                })
                .collect(),
            result: ResultDoc::from_outcome(outcome),
            questions: transcript.question_count(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub algorithm: Algorithm,
    pub questions_used: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub result: ResultDoc,
    pub majority_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub world: World,
    pub transcript: Transcript,
    pub outcome: Outcome,
    pub summary: RunSummary,
    /// Set when the Normals are not a strict minority.
    pub warning: Option<String>,
}

impl ScenarioRun {
    pub fn document(&self) -> TranscriptDoc {
        TranscriptDoc::new(
            &self.world,
            self.summary.algorithm,
            &self.transcript,
            &self.outcome,
        )
    }
}

fn majority_warning(world: &World) -> Option<String> {
    let c = world.census();
    (!c.majority_ok).then(|| {
        format!(
            "{} of {} processors are Normal; results are not guaranteed without a strict reliable majority",
            c.normals,
            world.len()
        )
    })
}

/// Runs one scenario. Deterministic in the config.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    let world: World = config.world.parse()?;
    let strategy = config.build_strategy()?;
    let warning = majority_warning(&world);
    let mut session = Session::new(&world, strategy);
    let outcome = diagnosis::run(&mut session, config.algorithm, config.normal_budget)?;
    let transcript = session.into_parts().0;
    let summary = summarize(
        &world,
        config.algorithm,
        transcript.question_count(),
        &outcome,
    );
    Ok(ScenarioRun {
        world,
        transcript,
        outcome,
        summary,
        warning,
    })
}

fn summarize(
    world: &World,
    algorithm: Algorithm,
    questions: usize,
    outcome: &Outcome,
) -> RunSummary {
    let bound = question_bound(algorithm, world.len());
    RunSummary {
        n: world.len(),
        algorithm,
        questions_used: questions,
        bound,
        within_bound: questions <= bound,
        result: ResultDoc::from_outcome(outcome),
        majority_ok: world.census().majority_ok,
    }
}

/// Human-readable per-question log.
pub fn render_trace(run: &ScenarioRun) -> String {
    let mut out = String::new();
    let world = &run.world;
    let _ = writeln!(
        out,
        "world {} (n = {}), algorithm {}",
        world,
        world.len(),
        run.summary.algorithm
    );
    if let Some(w) = &run.warning {
        let _ = writeln!(out, "warning: {w}");
    }
    let name = |i: usize| world.types()[i].name();
    for e in run.transcript.entries() {
        let _ = writeln!(
            out,
            "#{:<3} P{} ({}) <- {} -> {}",
            e.index,
            e.respondent,
            name(e.respondent),
            e.question,
            e.answer
        );
    }
    let s = &run.summary;
    let _ = writeln!(
        out,
        "result {}; {} questions (bound {}, {})",
        serde_json::to_string(&s.result).expect("result serializes"),
        s.questions_used,
        s.bound,
        if s.within_bound {
            "within bound"
        } else {
            "OVER BOUND"
        }
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub n_from: usize,
    pub n_to: usize,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub seed: u64,
}

/// One CSV row. Column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub algorithm: Algorithm,
    /// Seed of the Normals' answer stream for this trial.
    pub seed: u64,
    pub questions: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub majority_ok: bool,
    pub result: String,
}

/// Draws a world uniformly among those where Normals are a strict minority.
pub fn sample_world(n: usize, rng: &mut impl Rng) -> World {
    loop {
        let types: Vec<ProcessorType> = (0..n)
            .map(|_| ProcessorType::ALL[rng.random_range(0..3)])
            .collect();
        if let Ok(w) = World::new(types) {
            if w.census().majority_ok {
                return w;
            }
        }
    }
}

fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

/// Random majority-ok worlds and Normal behaviours. Rows come out ordered by
/// `(n, trial)` however the trials are scheduled.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.n_from == 0 || config.n_from > config.n_to {
        return Err(Error::InvalidRange(format!(
            "need 1 <= n-from <= n-to, got {}..{}",
            config.n_from, config.n_to
        )));
    }
    let jobs: Vec<(usize, usize)> = (config.n_from..=config.n_to)
        .flat_map(|n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    jobs.par_iter()
        .map(|&(n, t)| {
            let mut rng = trial_rng(config.seed, n, t);
            let world = sample_world(n, &mut rng);
            let seed: u64 = rng.random();
            let mut session = Session::new(&world, SeededRandom::new(seed));
            let budget =
                (config.algorithm == Algorithm::IdentifyNormals).then(|| default_budget(n));
            let outcome = diagnosis::run(&mut session, config.algorithm, budget)?;
            let s = summarize(&world, config.algorithm, session.questions(), &outcome);
            Ok(SweepRow {
                n,
                algorithm: config.algorithm,
                seed,
                questions: s.questions_used,
                bound: s.bound,
                within_bound: s.within_bound,
                majority_ok: s.majority_ok,
                result: s.result.compact(),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}
