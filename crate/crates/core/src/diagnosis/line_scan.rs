use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::classify_all;
use crate::error::{Error, Result};
use crate::interrogation::{NormalStrategy, Predicate, PredicateKind, Session};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineScanOutcome {
    pub trusted: usize,
    pub questions: usize,
    /// `live length − 1 − cursor` before each question, followed by its final value (0).
    pub potentials: Vec<usize>,
}

/// Finds a Knight or Knave in at most `n − 1` questions, provided fewer than
/// half the processors are Normal.
///
/// The line starts in index order. The processor at the cursor is asked
/// whether the next one in line is Normal; a "no" advances the cursor, a "yes"
/// removes both and steps the cursor back one place (or leaves it at the
/// front). The last processor standing when the cursor reaches it is returned.
pub fn line_scan<S: NormalStrategy>(session: &mut Session<'_, S>) -> Result<LineScanOutcome> {
    let start = session.questions();
    let mut line: Vec<usize> = (0..session.world().len()).collect();
    let mut cursor = 0;
    let mut potentials = Vec::new();

    while cursor + 1 < line.len() {
        potentials.push(line.len() - 1 - cursor);
        let answer = session.ask(line[cursor], Predicate::is_normal(line[cursor + 1]))?;
        if answer.is_yes() {
            line.drain(cursor..cursor + 2);
            cursor = cursor.saturating_sub(1);
        } else {
            cursor += 1;
        }
    }

    // an empty line means at least half were Normal
    let trusted = *line.get(cursor).ok_or(Error::NoSurvivor)?;
    potentials.push(0);
    Ok(LineScanOutcome {
        trusted,
        questions: session.questions() - start,
        potentials,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnightReport {
    /// The Knight or Knave found by the line scan.
    pub trusted: usize,
    pub knights: BTreeSet<usize>,
    pub phase1_questions: usize,
    pub total_questions: usize,
}

/// Line scan, then ask the survivor about every processor (itself included)
/// whether it is a Knight. At most `2n − 1` questions.
pub fn find_all_knights<S: NormalStrategy>(session: &mut Session<'_, S>) -> Result<KnightReport> {
    let start = session.questions();
    let scan = line_scan(session)?;
    let everyone: Vec<usize> = (0..session.world().len()).collect();
    let knights = classify_all(session, scan.trusted, &everyone, PredicateKind::IsKnight)?;
    Ok(KnightReport {
        trusted: scan.trusted,
        knights,
        phase1_questions: scan.questions,
        total_questions: session.questions() - start,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interrogation::{AlwaysNo, AlwaysYes, Answer, Scripted};
    use crate::world::parse_world;

    #[test]
    fn single_inhabitant() {
        let w = parse_world("K").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let o = line_scan(&mut s).unwrap();
        assert_eq!((o.trusted, o.questions), (0, 0));
    }

    #[test]
    fn all_knights_walk_to_the_end() {
        let w = parse_world("KKKK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let o = line_scan(&mut s).unwrap();
        assert_eq!((o.trusted, o.questions), (3, 3));
        assert!(s
            .transcript()
            .entries()
            .iter()
            .all(|e| e.answer == Answer::No));
    }

    #[test]
    fn knight_flags_normal_successor() {
        // 0 says yes about 1, pair {0,1} leaves, 2 is alone
        let w = parse_world("KNV").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let o = line_scan(&mut s).unwrap();
        assert_eq!((o.trusted, o.questions), (2, 1));
        assert_eq!(o.potentials, vec![2, 0]);
    }

    #[test]
    fn cursor_steps_back_after_removal() {
        // K K N K: 0 no, 1 yes (about 2) -> line [0,3], cursor 0; 0 no -> trusted 3
        let w = parse_world("KKNK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let o = line_scan(&mut s).unwrap();
        assert_eq!(o.trusted, 3);
        let asked: Vec<_> = s
            .transcript()
            .entries()
            .iter()
            .map(|e| (e.respondent, e.question.predicate.target))
            .collect();
        assert_eq!(asked, vec![(0, 1), (1, 2), (0, 3)]);
        assert_eq!(o.potentials, vec![3, 2, 1, 0]);
    }

    #[test]
    fn normal_majority_can_exhaust_the_line() {
        let w = parse_world("NN").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        assert_eq!(line_scan(&mut s), Err(Error::NoSurvivor));
    }

    #[test]
    fn normal_majority_may_return_a_normal() {
        let w = parse_world("KN").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        // Knight truthfully says 1 is Normal -> both removed
        assert_eq!(line_scan(&mut s), Err(Error::NoSurvivor));
        let w = parse_world("NK").unwrap();
        let mut s = Session::new(&w, AlwaysNo);
        assert_eq!(line_scan(&mut s).unwrap().trusted, 1);
        let w = parse_world("NNK").unwrap();
        let mut s = Session::new(&w, Scripted::new(vec![Answer::No, Answer::No]));
        // both Normals answer no, so the cursor walks to the end
        assert_eq!(line_scan(&mut s).unwrap().trusted, 2);
    }

    #[test]
    fn find_knights_single() {
        let w = parse_world("K").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = find_all_knights(&mut s).unwrap();
        assert_eq!(r.knights, BTreeSet::from([0]));
        assert_eq!((r.phase1_questions, r.total_questions), (0, 1));
    }

    #[test]
    fn find_knights_kvn() {
        let w = parse_world("KNV").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = find_all_knights(&mut s).unwrap();
        assert_eq!(r.trusted, 2);
        assert_eq!(r.knights, BTreeSet::from([0]));
        assert_eq!(r.total_questions, 4);
    }
}
