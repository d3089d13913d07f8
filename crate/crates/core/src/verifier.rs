//! Question bounds and exhaustive verification.
//!
//! Normal behaviour is universally quantified in every guarantee, so the
//! verifier does not sample it: whenever a Normal is asked something, both
//! answers are explored. The algorithms run unchanged; only the strategy hook
//! forks (see [`Branching`]).

use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use crate::diagnosis::{self, default_budget, Algorithm, Outcome};
use crate::error::Result;
use crate::interrogation::{Answer, Branching, Scripted, Session, Transcript};
use crate::world::{ProcessorType, World};

/// Number of set bits in `n`.
pub fn popcount(n: u64) -> u32 {
    n.count_ones()
}

/// Worst-case question count guaranteed for `algorithm` on `n` processors.
pub fn question_bound(algorithm: Algorithm, n: usize) -> usize {
    match algorithm {
        Algorithm::LineScan => n.saturating_sub(1),
        Algorithm::FindAllKnights => (2 * n).saturating_sub(1),
        Algorithm::FindReliablePairing => n - popcount(n as u64) as usize,
        // largest integer strictly below 3n/2
        Algorithm::IdentifyNormals => (3 * n).div_ceil(2).saturating_sub(1),
    }
}

/// All `3^n` worlds of size `n` in lexicographic K < V < N order, optionally
/// restricted to those where Normals are a strict minority.
pub fn enumerate_worlds(n: usize, require_majority: bool) -> Vec<World> {
    if n == 0 {
        return Vec::new();
    }
    let total = 3usize.pow(n as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut types = vec![ProcessorType::Knight; n];
            for slot in types.iter_mut().rev() {
                *slot = ProcessorType::ALL[code % 3];
                code /= 3;
            }
            let w = World::new(types).ok()?;
            (!require_majority || w.census().majority_ok).then_some(w)
        })
        .collect()
}

/// One complete execution path.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    pub result: Result<Outcome>,
    pub questions: usize,
    /// Answers given by Normals along this path, in order.
    pub branch_id: Vec<Answer>,
    pub transcript: Transcript,
}

impl BranchOutcome {
    pub fn normal_questions(&self, world: &World) -> usize {
        self.transcript
            .entries()
            .iter()
            .filter(|e| world.types()[e.respondent] == ProcessorType::Normal)
            .count()
    }
}

/// Runs `algorithm` on `world` once per distinct sequence of Normal answers.
pub fn explore_branches(
    world: &World,
    algorithm: Algorithm,
    budget: Option<usize>,
) -> Vec<BranchOutcome> {
    let mut strategy = Branching::new();
    let mut out = Vec::new();
    loop {
        let mut session = Session::new(world, &mut strategy);
        let result = diagnosis::run(&mut session, algorithm, budget);
        let (transcript, _) = session.into_parts();
        out.push(BranchOutcome {
            result,
            questions: transcript.question_count(),
            branch_id: strategy.path().to_vec(),
            transcript,
        });
        if !strategy.advance() {
            return out;
        }
    }
}

/// Re-runs one branch from its id.
pub fn replay(
    world: &World,
    algorithm: Algorithm,
    budget: Option<usize>,
    branch_id: &[Answer],
) -> (Result<Outcome>, Transcript) {
    let mut session = Session::new(world, Scripted::new(branch_id.to_vec()));
    let result = diagnosis::run(&mut session, algorithm, budget);
    (result, session.into_parts().0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub world: String,
    pub algorithm: Algorithm,
    pub budget: Option<usize>,
    pub branch_id: Vec<Answer>,
    pub claim: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub n: usize,
    pub worlds: usize,
    pub branches: usize,
    /// Most questions any branch of `find_reliable_pairing` used.
    pub pairing_max_questions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_min: usize,
    pub n_max: usize,
    pub worlds_checked: usize,
    pub branches_checked: usize,
    pub rounds_audited: usize,
    pub case_records_checked: usize,
    pub case_a_calls: usize,
    pub per_size: Vec<SizeStats>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: Self) -> Self {
        self.worlds_checked += other.worlds_checked;
        self.branches_checked += other.branches_checked;
        self.rounds_audited += other.rounds_audited;
        self.case_records_checked += other.case_records_checked;
        self.case_a_calls += other.case_a_calls;
        self.failures.extend(other.failures);
        self
    }
}

/// The budgets `identify_normals` is checked under: the true Normal count and
/// the largest admissible bound.
pub fn checked_budgets(world: &World) -> [usize; 2] {
    [world.census().normals, default_budget(world.len())]
}

/// Checks every guarantee on every branch of every majority-ok world of size `1..=n_max`.
pub fn exhaustive_check(n_max: usize) -> VerificationReport {
    let mut report = VerificationReport {
        n_min: 1,
        n_max,
        ..Default::default()
    };
    for n in 1..=n_max {
        let worlds = enumerate_worlds(n, true);
        let (part, pairing_max) = worlds.par_iter().map(check_world).reduce(
            || (VerificationReport::default(), 0),
            |(a, ma), (b, mb)| (a.merge(b), ma.max(mb)),
        );
        let all_knights = World::new(vec![ProcessorType::Knight; n]).expect("n >= 1");
        let mut part = part;
        let bound = question_bound(Algorithm::FindReliablePairing, n);
        if pairing_max != bound {
            part.failures.push(Failure {
                world: all_knights.to_string(),
                algorithm: Algorithm::FindReliablePairing,
                budget: None,
                branch_id: Vec::new(),
                claim: format!("worst case {pairing_max} questions, expected exactly {bound}"),
            });
        }
        report.per_size.push(SizeStats {
            n,
            worlds: part.worlds_checked,
            branches: part.branches_checked,
            pairing_max_questions: pairing_max,
        });
        report = report.merge(part);
    }
    report.failures.sort_by(|a, b| {
        (a.world.len(), &a.world, a.algorithm, a.budget, &a.branch_id)
            .cmp(&(b.world.len(), &b.world, b.algorithm, b.budget, &b.branch_id))
            .then_with(|| a.claim.cmp(&b.claim))
    });
    report
}

/// All claims on one world. Returns the partial report and the largest
/// question count seen in `find_reliable_pairing`.
pub fn check_world(world: &World) -> (VerificationReport, usize) {
    let mut report = VerificationReport {
        worlds_checked: 1,
        ..Default::default()
    };
    let mut pairing_max = 0;
    let mut runs: Vec<(Algorithm, Option<usize>)> = vec![
        (Algorithm::LineScan, None),
        (Algorithm::FindAllKnights, None),
        (Algorithm::FindReliablePairing, None),
    ];
    runs.extend(checked_budgets(world).map(|b| (Algorithm::IdentifyNormals, Some(b))));

    for (algorithm, budget) in runs {
        for branch in explore_branches(world, algorithm, budget) {
            report.branches_checked += 1;
            let mut claims = Vec::new();
            if branch.branch_id.len() != branch.normal_questions(world) {
                claims.push("branch id length differs from Normal-directed questions".to_string());
            }
            let bound = question_bound(algorithm, world.len());
            if branch.questions > bound {
                claims.push(format!(
                    "{} questions exceed bound {bound}",
                    branch.questions
                ));
            }
            match &branch.result {
                Ok(outcome) => claims.extend(outcome_claims(
                    world,
                    outcome,
                    &branch,
                    &mut report,
                    &mut pairing_max,
                )),
                Err(e) => claims.push(format!("run failed: {e}")),
            }
            report
                .failures
                .extend(claims.into_iter().map(|claim| Failure {
                    world: world.to_string(),
                    algorithm,
                    budget,
                    branch_id: branch.branch_id.clone(),
                    claim,
                }));
        }
    }
    (report, pairing_max)
}

fn outcome_claims(
    world: &World,
    outcome: &Outcome,
    branch: &BranchOutcome,
    report: &mut VerificationReport,
    pairing_max: &mut usize,
) -> Vec<String> {
    let n = world.len();
    let mut claims = Vec::new();
    if let Some(t) = outcome.trusted() {
        if !world.types()[t].is_reliable() {
            claims.push(format!("trusted processor {t} is Normal"));
        }
    }
    match outcome {
        Outcome::LineScan(o) => {
            let answers: Vec<Answer> = branch
                .transcript
                .entries()
                .iter()
                .map(|e| e.answer)
                .collect();
            if o.potentials.len() != answers.len() + 1 || o.potentials.last() != Some(&0) {
                claims.push("line scan potential trace malformed".into());
            } else {
                for (k, a) in answers.iter().enumerate() {
                    let (before, after) = (o.potentials[k], o.potentials[k + 1]);
                    let ok = match a {
                        Answer::No => before == after + 1,
                        Answer::Yes => before > after,
                    };
                    if !ok {
                        claims.push(format!(
                            "potential {before} -> {after} on {a} at question {k}"
                        ));
                    }
                }
            }
        }
        Outcome::Knights(r) => {
            let truth: std::collections::BTreeSet<usize> = world
                .indices_of(ProcessorType::Knight)
                .into_iter()
                .collect();
            if r.knights != truth {
                claims.push(format!("knights {:?} differ from {:?}", r.knights, truth));
            }
            if r.phase1_questions > question_bound(Algorithm::LineScan, n) {
                claims.push(format!("phase 1 used {} questions", r.phase1_questions));
            }
        }
        Outcome::Pairing(r) => {
            *pairing_max = (*pairing_max).max(r.questions);
            for (i, round) in r.rounds.iter().enumerate() {
                report.rounds_audited += 1;
                for v in round.violations() {
                    claims.push(format!("round {i}: {v}"));
                }
            }
        }
        Outcome::Normals(r) => {
            let truth: std::collections::BTreeSet<usize> = world
                .indices_of(ProcessorType::Normal)
                .into_iter()
                .collect();
            if r.normals != truth {
                claims.push(format!("normals {:?} differ from {:?}", r.normals, truth));
            }
            for rec in &r.case_trace {
                report.case_records_checked += 1;
                if rec.stopped_in == diagnosis::Stop::CaseA {
                    report.case_a_calls += 1;
                }
                for v in rec.violations() {
                    claims.push(format!("call at depth {} on x={}: {v}", rec.depth, rec.x));
                }
            }
        }
    }
    claims
}
