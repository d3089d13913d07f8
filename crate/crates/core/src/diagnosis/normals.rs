use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interrogation::{NormalStrategy, Predicate, Session};

/// Largest Normal count compatible with a strict reliable majority: `⌈n/2⌉ − 1`.
pub fn default_budget(n: usize) -> usize {
    n.div_ceil(2).saturating_sub(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    /// `budget` processors said X is not Normal: X is reliable.
    CaseA,
    /// More said X is Normal than said it is not.
    CaseB,
}

/// What happened in one (possibly nested) call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    /// Depth of the call; 0 for the top level.
    pub depth: usize,
    pub members: usize,
    pub budget: usize,
    /// The probed processor.
    pub x: usize,
    /// Answered yes ("X is Normal").
    pub yes_set: Vec<usize>,
    /// Answered no.
    pub no_set: Vec<usize>,
    pub stopped_in: Stop,
    /// The reliable processor drawn from the remainder (CaseB only).
    pub z: Option<usize>,
    /// Questions used by this call, nested calls included.
    pub questions: usize,
}

impl CaseRecord {
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        match self.stopped_in {
            Stop::CaseA => {
                if self.no_set.len() != self.budget {
                    v.push("case A stopped without exactly budget no-answers");
                }
                if self.questions > self.members + self.budget {
                    v.push("case A used more than members + budget questions");
                }
                if self.z.is_some() {
                    v.push("case A recorded a witness");
                }
            }
            Stop::CaseB => {
                if self.yes_set.len() != self.no_set.len() + 1 {
                    v.push("case B stopped without yes = no + 1");
                }
                if self.z.is_none() {
                    v.push("case B has no witness");
                }
            }
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalReport {
    pub normals: BTreeSet<usize>,
    pub total_questions: usize,
    /// Calls in pre-order.
    pub case_trace: Vec<CaseRecord>,
}

/// Finds every Normal among `members`, given that at most `budget` of them are
/// Normal and `2 · budget < |members|`.
///
/// The lowest-indexed member X is put on trial: the others, in ascending
/// order, are asked whether X is Normal until either `budget` say no (X is
/// reliable and interrogates the rest) or the yes-answers outnumber the no-answers
/// (at least half of the questioned group is Normal; it is set aside, the
/// remainder is solved recursively, and a reliable processor from the
/// remainder settles the group). Uses fewer than `3n/2` questions.
pub fn identify_normals<S: NormalStrategy>(
    session: &mut Session<'_, S>,
    members: &[usize],
    budget: usize,
) -> Result<NormalReport> {
    for &m in members {
        session.world().check_index(m)?;
    }
    let members: Vec<usize> = members
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if budget > 0 && 2 * budget >= members.len() {
        return Err(Error::BudgetTooLarge {
            budget,
            members: members.len(),
        });
    }
    let start = session.questions();
    let mut case_trace = Vec::new();
    let normals = solve(session, &members, budget, 0, &mut case_trace)?;
    Ok(NormalReport {
        normals,
        total_questions: session.questions() - start,
        case_trace,
    })
}

fn solve<S: NormalStrategy>(
    session: &mut Session<'_, S>,
    members: &[usize],
    budget: usize,
    depth: usize,
    trace: &mut Vec<CaseRecord>,
) -> Result<BTreeSet<usize>> {
    if budget == 0 || members.is_empty() {
        return Ok(BTreeSet::new());
    }
    let start = session.questions();
    let x = members[0];
    let mut yes_set = Vec::new();
    let mut no_set = Vec::new();
    let mut stop = None;
    for &r in &members[1..] {
        if session.ask(r, Predicate::is_normal(x))?.is_yes() {
            yes_set.push(r);
        } else {
            no_set.push(r);
        }
        if no_set.len() == budget {
            stop = Some(Stop::CaseA);
            break;
        }
        if yes_set.len() > no_set.len() {
            stop = Some(Stop::CaseB);
            break;
        }
    }
    // unreachable while 2 · budget < |members|
    let stopped_in = stop.ok_or(Error::BudgetTooLarge {
        budget,
        members: members.len(),
    })?;

    let slot = trace.len();
    trace.push(CaseRecord {
        depth,
        members: members.len(),
        budget,
        x,
        yes_set: yes_set.clone(),
        no_set: no_set.clone(),
        stopped_in,
        z: None,
        questions: 0,
    });

    let mut normals: BTreeSet<usize> = BTreeSet::new();
    match stopped_in {
        Stop::CaseA => {
            // X is reliable and every yes-answerer is Normal
            normals.extend(&yes_set);
            for &y in &members[1..] {
                if normals.contains(&y) {
                    continue;
                }
                if !session.ask(x, Predicate::is_reliable(y))?.is_yes() {
                    normals.insert(y);
                }
            }
        }
        Stop::CaseB => {
            let questioned: BTreeSet<usize> =
                yes_set.iter().chain(&no_set).copied().chain([x]).collect();
            let rest: Vec<usize> = members
                .iter()
                .copied()
                .filter(|m| !questioned.contains(m))
                .collect();
            let rest_budget = budget
                .saturating_sub(no_set.len() + 1)
                .min(default_budget(rest.len()));
            let rest_normals = solve(session, &rest, rest_budget, depth + 1, trace)?;
            let z = *rest
                .iter()
                .find(|m| !rest_normals.contains(m))
                .ok_or(Error::NoSurvivor)?;
            trace[slot].z = Some(z);

            normals.extend(rest_normals);
            let (settled, unsettled) = if session.ask(z, Predicate::is_normal(x))?.is_yes() {
                normals.insert(x);
                (&no_set, &yes_set)
            } else {
                (&yes_set, &no_set)
            };
            normals.extend(settled);
            for &c in unsettled {
                if session.ask(z, Predicate::is_normal(c))?.is_yes() {
                    normals.insert(c);
                }
            }
        }
    }
    trace[slot].questions = session.questions() - start;
    Ok(normals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interrogation::{AlwaysNo, AlwaysYes};
    use crate::world::parse_world;

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn budget_formula() {
        let got: Vec<_> = (1..=8).map(default_budget).collect();
        assert_eq!(got, vec![0, 0, 1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn zero_budget_short_circuits() {
        let w = parse_world("KVVK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = identify_normals(&mut s, &all(4), 0).unwrap();
        assert!(r.normals.is_empty());
        assert_eq!(r.total_questions, 0);
    }

    #[test]
    fn budget_must_be_below_half() {
        let w = parse_world("KVVK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        assert_eq!(
            identify_normals(&mut s, &all(4), 2),
            Err(Error::BudgetTooLarge {
                budget: 2,
                members: 4
            })
        );
    }

    #[test]
    fn nkv_both_normal_behaviours() {
        let w = parse_world("NKV").unwrap();
        for yes in [true, false] {
            let r = if yes {
                identify_normals(&mut Session::new(&w, AlwaysYes), &all(3), 1)
            } else {
                identify_normals(&mut Session::new(&w, AlwaysNo), &all(3), 1)
            }
            .unwrap();
            assert_eq!(r.normals, BTreeSet::from([0]));
            assert!(r.total_questions <= 4);
        }
    }

    #[test]
    fn case_a_trace() {
        // X=0 is a Knight; 1 says no -> budget 1 reached
        let w = parse_world("KKNVK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = identify_normals(&mut s, &all(5), 2).unwrap();
        assert_eq!(r.normals, BTreeSet::from([2]));
        let top = &r.case_trace[0];
        assert_eq!(top.stopped_in, Stop::CaseA);
        // 1 no, 2 yes (Normal), 3 no -> two no-answers
        assert_eq!(top.no_set, vec![1, 3]);
        assert_eq!(top.yes_set, vec![2]);
        // 3 trial questions + X asked about 1, 3, 4
        assert_eq!(r.total_questions, 6);
        assert!(top.violations().is_empty());
    }

    #[test]
    fn case_b_trace() {
        // X=0 is Normal, 1 says yes immediately -> case B with C={1}, D={}
        let w = parse_world("NKKVN").unwrap();
        let mut s = Session::new(&w, AlwaysNo);
        let r = identify_normals(&mut s, &all(5), 2).unwrap();
        assert_eq!(r.normals, BTreeSet::from([0, 4]));
        let top = &r.case_trace[0];
        assert_eq!(top.stopped_in, Stop::CaseB);
        assert_eq!((top.yes_set.clone(), top.no_set.clone()), (vec![1], vec![]));
        assert!(top.z.is_some());
        assert!(r.case_trace.iter().all(|c| c.violations().is_empty()));
        assert!(r.total_questions <= 7);
    }

    #[test]
    fn subset_members_are_respected() {
        let w = parse_world("NKKNVK").unwrap();
        let mut s = Session::new(&w, AlwaysYes);
        let r = identify_normals(&mut s, &[3, 4, 5], 1).unwrap();
        assert_eq!(r.normals, BTreeSet::from([3]));
        assert!(s
            .transcript()
            .entries()
            .iter()
            .all(|e| [3, 4, 5].contains(&e.respondent)
                && [3, 4, 5].contains(&e.question.predicate.target)));
    }
}
