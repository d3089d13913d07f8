use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interrogation::{NormalStrategy, Predicate, Session};
use crate::world::{ProcessorType, World};

/// Pair counts by reliability of (first, second) member.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCensus {
    pub rr: usize,
    pub rn: usize,
    pub nr: usize,
    pub nn: usize,
}

/// Ground-truth bookkeeping for one tournament round. `r*` count reliable
/// processors, `n*` count Normals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundAudit {
    pub reliable_before: usize,
    pub normal_before: usize,
    pub pairs: PairCensus,
    pub unpaired_type: Option<ProcessorType>,
    pub reliable_after_step2: usize,
    pub normal_after_step2: usize,
    pub reliable_after_step3: usize,
    pub normal_after_step3: usize,
    pub kept_unpaired: bool,
}

impl RoundAudit {
    /// Names of the round invariants this audit violates.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.reliable_after_step2 < self.pairs.rr {
            v.push("reliable survivors of pairing fewer than reliable-reliable pairs");
        }
        if self.normal_after_step2 > self.pairs.nn {
            v.push("normal survivors of pairing exceed normal-normal pairs");
        }
        if self.reliable_before > self.normal_before
            && self.reliable_after_step3 <= self.normal_after_step3
        {
            v.push("reliable majority lost");
        }
        let survivors = self.reliable_after_step3 + self.normal_after_step3;
        if self.unpaired_type.is_some() && survivors.is_multiple_of(2) {
            v.push("survivor count even after handling the unpaired processor");
        }
        v
    }
}

/// One round of the pairing tournament.
///
/// Consecutive survivors are paired; the first of each pair is asked whether
/// the second is reliable. "Yes" keeps the second, "no" drops both. A leftover
/// processor is kept exactly when that makes the survivor count odd.
pub fn pairing_round<S: NormalStrategy>(
    session: &mut Session<'_, S>,
    survivors: &[usize],
) -> Result<(Vec<usize>, RoundAudit)> {
    let world = session.world();
    let mut next = Vec::with_capacity(survivors.len() / 2 + 1);
    let mut pairs = PairCensus::default();

    let mut chunks = survivors.chunks_exact(2);
    for pair in &mut chunks {
        let (first, second) = (pair[0], pair[1]);
        match (
            world.type_of(first)?.is_reliable(),
            world.type_of(second)?.is_reliable(),
        ) {
            (true, true) => pairs.rr += 1,
            (true, false) => pairs.rn += 1,
            (false, true) => pairs.nr += 1,
            (false, false) => pairs.nn += 1,
        }
        if session.ask(first, Predicate::is_reliable(second))?.is_yes() {
            next.push(second);
        }
    }

    let (reliable_after_step2, normal_after_step2) = split(world, &next);
    let unpaired = chunks.remainder().first().copied();
    let unpaired_type = unpaired.map(|u| world.type_of(u)).transpose()?;
    let kept_unpaired = match unpaired {
        Some(u) if next.len() % 2 == 0 => {
            next.push(u);
            true
        }
        _ => false,
    };
    let (reliable_after_step3, normal_after_step3) = split(world, &next);
    let (reliable_before, normal_before) = split(world, survivors);

    Ok((
        next,
        RoundAudit {
            reliable_before,
            normal_before,
            pairs,
            unpaired_type,
            reliable_after_step2,
            normal_after_step2,
            reliable_after_step3,
            normal_after_step3,
            kept_unpaired,
        },
    ))
}

fn split(world: &World, members: &[usize]) -> (usize, usize) {
    let reliable = members
        .iter()
        .filter(|&&i| world.types()[i].is_reliable())
        .count();
    (reliable, members.len() - reliable)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub trusted: usize,
    pub questions: usize,
    pub rounds: Vec<RoundAudit>,
}

/// Repeats [`pairing_round`] until one processor remains. With a strict
/// reliable majority that processor is a Knight or Knave, found with at most
/// `n − popcount(n)` questions.
pub fn find_reliable_pairing<S: NormalStrategy>(
    session: &mut Session<'_, S>,
) -> Result<PairingReport> {
    let start = session.questions();
    let mut survivors: Vec<usize> = (0..session.world().len()).collect();
    let mut rounds = Vec::new();
    while survivors.len() > 1 {
        let (next, audit) = pairing_round(session, &survivors)?;
        survivors = next;
        rounds.push(audit);
    }
    let trusted = *survivors.first().ok_or(Error::NoSurvivor)?;
    Ok(PairingReport {
        trusted,
        questions: session.questions() - start,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interrogation::{AlwaysNo, AlwaysYes, Answer, Scripted};
    use crate::world::parse_world;

    #[test]
    fn two_knight_pairs_keep_both_seconds() {
        let w = parse_world("KKKK").unwrap();
        let mut s = Session::new(&w, AlwaysNo);
        let (next, audit) = pairing_round(&mut s, &[0, 1, 2, 3]).unwrap();
        assert_eq!(next, vec![1, 3]);
        assert_eq!(
            (audit.reliable_after_step2, audit.normal_after_step2),
            (2, 0)
        );
        assert_eq!(audit.pairs.rr, 2);
        assert_eq!(s.questions(), 2);
    }

    #[test]
    fn knight_rejects_normal_partner() {
        let w = parse_world("KN").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let (next, audit) = pairing_round(&mut s, &[0, 1]).unwrap();
        assert!(next.is_empty());
        assert_eq!(audit.pairs.rn, 1);
    }

    #[test]
    fn lying_normal_costs_a_reliable_but_not_the_majority() {
        // (N,K) pair with N saying no, then a Knight-Knight pair and an unpaired Knight
        let w = parse_world("NKKKK").unwrap();
        let mut s = Session::new(&w, Scripted::new(vec![Answer::No]));
        let (next, audit) = pairing_round(&mut s, &[0, 1, 2, 3, 4]).unwrap();
        // step 2 leaves [3] (odd), so the unpaired 4 is dropped
        assert_eq!(next, vec![3]);
        assert!(!audit.kept_unpaired);
        assert_eq!(audit.unpaired_type, Some(ProcessorType::Knight));
        assert!(audit.violations().is_empty());
    }

    #[test]
    fn unpaired_kept_to_restore_odd_count() {
        // K,N pair removed; step 2 leaves 0 -> keep the unpaired 2
        let w = parse_world("KNV").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let (next, audit) = pairing_round(&mut s, &[0, 1, 2]).unwrap();
        assert_eq!(next, vec![2]);
        assert!(audit.kept_unpaired);
        assert_eq!(
            (audit.reliable_after_step3, audit.normal_after_step3),
            (1, 0)
        );
    }

    #[test]
    fn survivors_keep_relative_order() {
        let w = parse_world("KKKKKKK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let (next, _) = pairing_round(&mut s, &[6, 2, 5, 0, 3, 1, 4]).unwrap();
        // seconds 2, 0, 1 kept; count 3 is odd so 4 is dropped
        assert_eq!(next, vec![2, 0, 1]);
    }

    #[test]
    fn single_survivor_round_is_idle() {
        let w = parse_world("V").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let (next, audit) = pairing_round(&mut s, &[0]).unwrap();
        assert_eq!(next, vec![0]);
        assert!(audit.kept_unpaired);
        assert_eq!(s.questions(), 0);
    }

    #[test]
    fn tournament_examples() {
        let w = parse_world("K").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = find_reliable_pairing(&mut s).unwrap();
        assert_eq!((r.trusted, r.questions), (0, 0));

        let w = parse_world("KKKKKK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = find_reliable_pairing(&mut s).unwrap();
        // 3 questions -> [1,3,5]; 1 question -> [3]
        assert_eq!((r.trusted, r.questions), (3, 4));
        assert_eq!(r.rounds.len(), 2);
    }

    #[test]
    fn normal_branches_of_nkv() {
        let w = parse_world("NKV").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        assert_eq!(find_reliable_pairing(&mut s).unwrap().trusted, 1);
        let mut s = Session::new(&w, AlwaysNo);
        assert_eq!(find_reliable_pairing(&mut s).unwrap().trusted, 2);
    }

    #[test]
    fn normal_majority_can_empty_the_tournament() {
        let w = parse_world("KN").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        assert_eq!(find_reliable_pairing(&mut s), Err(Error::NoSurvivor));
    }
}
