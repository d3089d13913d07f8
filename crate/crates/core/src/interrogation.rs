//! Self-referential yes/no questioning.
//!
//! Every question put to a processor has the form "is it true that P if and
//! only if you are a Knight?". A Knight answers the biconditional truthfully
//! and a Knave negates it, so either way the answer is "yes" exactly when P
//! holds. Normals answer according to a [`NormalStrategy`], which sees the
//! transcript and the question but never the world.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::world::{ProcessorType, World};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateKind {
    IsNormal,
    IsKnight,
    IsReliable,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 3] = [Self::IsNormal, Self::IsKnight, Self::IsReliable];

    fn phrase(self) -> &'static str {
        match self {
            Self::IsNormal => "is a Normal",
            Self::IsKnight => "is a Knight",
            Self::IsReliable => "is a Knight or a Knave",
        }
    }
}

/// A statement about one processor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Predicate {
    pub kind: PredicateKind,
    pub target: usize,
}

impl Predicate {
    pub fn new(kind: PredicateKind, target: usize) -> Self {
        Self { kind, target }
    }

    pub fn is_normal(target: usize) -> Self {
        Self::new(PredicateKind::IsNormal, target)
    }

    pub fn is_knight(target: usize) -> Self {
        Self::new(PredicateKind::IsKnight, target)
    }

    pub fn is_reliable(target: usize) -> Self {
        Self::new(PredicateKind::IsReliable, target)
    }
}

/// Truth of `predicate` in `world`.
pub fn predicate_truth(world: &World, predicate: Predicate) -> Result<bool> {
    let ty = world.type_of(predicate.target)?;
    Ok(match predicate.kind {
        PredicateKind::IsNormal => ty == ProcessorType::Normal,
        PredicateKind::IsKnight => ty == ProcessorType::Knight,
        PredicateKind::IsReliable => ty.is_reliable(),
    })
}

/// The self-referential wrapping of a predicate:
/// "Is it true that ⟨predicate⟩ if and only if you are a Knight?"
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Question {
    pub predicate: Predicate,
}

impl Question {
    pub fn about(predicate: Predicate) -> Self {
        Self { predicate }
    }

    /// Truth value of the full biconditional when put to a respondent of type `respondent`.
    pub fn biconditional(&self, world: &World, respondent: ProcessorType) -> Result<bool> {
        let p = predicate_truth(world, self.predicate)?;
        Ok(p == (respondent == ProcessorType::Knight))
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Is it true that processor {} {} if and only if you are a Knight?",
            self.predicate.target,
            self.predicate.kind.phrase()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::Yes
        } else {
            Self::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Self::Yes
    }

    pub fn flip(self) -> Self {
        match self {
            Self::Yes => Self::No,
            Self::No => Self::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Yes => "yes",
            Self::No => "no",
        }
    }
}

impl std::str::FromStr for Answer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" | "y" => Ok(Self::Yes),
            "no" | "n" => Ok(Self::No),
            _ => Err(Error::InvalidAnswer(s.to_string())),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub index: usize,
    pub respondent: usize,
    pub question: Question,
    pub answer: Answer,
}

/// Ordered record of every question asked in one session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    entries: Vec<Entry>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn question_count(&self) -> usize {
        self.entries.len()
    }

    fn push(&mut self, respondent: usize, question: Question, answer: Answer) {
        let index = self.entries.len();
        self.entries.push(Entry {
            index,
            respondent,
            question,
            answer,
        });
    }
}

/// How Normal processors answer.
///
/// Implementations see the transcript so far, the respondent and the question,
/// but never the world's types.
pub trait NormalStrategy {
    fn answer(
        &mut self,
        transcript: &Transcript,
        respondent: usize,
        question: &Question,
    ) -> Result<Answer>;
}

impl<S: NormalStrategy + ?Sized> NormalStrategy for &mut S {
    fn answer(&mut self, t: &Transcript, r: usize, q: &Question) -> Result<Answer> {
        (**self).answer(t, r, q)
    }
}

impl<S: NormalStrategy + ?Sized> NormalStrategy for Box<S> {
    fn answer(&mut self, t: &Transcript, r: usize, q: &Question) -> Result<Answer> {
        (**self).answer(t, r, q)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysYes;

impl NormalStrategy for AlwaysYes {
    fn answer(&mut self, _: &Transcript, _: usize, _: &Question) -> Result<Answer> {
        Ok(Answer::Yes)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysNo;

impl NormalStrategy for AlwaysNo {
    fn answer(&mut self, _: &Transcript, _: usize, _: &Question) -> Result<Answer> {
        Ok(Answer::No)
    }
}

/// One global script shared by all Normals, consumed in order.
#[derive(Debug, Clone)]
pub struct Scripted {
    script: Vec<Answer>,
    cursor: usize,
}

impl Scripted {
    pub fn new(script: Vec<Answer>) -> Self {
        Self { script, cursor: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.cursor
    }
}

impl NormalStrategy for Scripted {
    fn answer(&mut self, _: &Transcript, _: usize, _: &Question) -> Result<Answer> {
        let a = *self.script.get(self.cursor).ok_or(Error::ScriptExhausted {
            consumed: self.cursor,
        })?;
        self.cursor += 1;
        Ok(a)
    }
}

/// Fair coin flips from a ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct SeededRandom {
    rng: ChaCha8Rng,
}

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl NormalStrategy for SeededRandom {
    fn answer(&mut self, _: &Transcript, _: usize, _: &Question) -> Result<Answer> {
        Ok(Answer::from_bool(self.rng.random_bool(0.5)))
    }
}

/// Follows a prefix of forced answers, then answers `Yes` at every new choice
/// point while recording it. After a run, [`Branching::path`] is the complete
/// sequence of Normal answers; [`Branching::advance`] moves to the next
/// unexplored path in depth-first order.
#[derive(Debug, Clone, Default)]
pub struct Branching {
    path: Vec<Answer>,
    cursor: usize,
}

impl Branching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn path(&self) -> &[Answer] {
        &self.path
    }

    /// Prepares the strategy for the next branch. Returns false once every
    /// branch has been visited.
    pub fn advance(&mut self) -> bool {
        // drop the explored suffix, then take the No side of the deepest open Yes
        self.path.truncate(self.cursor);
        while let Some(last) = self.path.pop() {
            if last == Answer::Yes {
                self.path.push(Answer::No);
                self.cursor = 0;
                return true;
            }
        }
        self.cursor = 0;
        false
    }
}

impl NormalStrategy for Branching {
    fn answer(&mut self, _: &Transcript, _: usize, _: &Question) -> Result<Answer> {
        let a = match self.path.get(self.cursor) {
            Some(&a) => a,
            None => {
                self.path.push(Answer::Yes);
                Answer::Yes
            }
        };
        self.cursor += 1;
        Ok(a)
    }
}

/// One interrogation run: a world, the Normals' strategy, and the growing transcript.
#[derive(Debug)]
pub struct Session<'w, S> {
    world: &'w World,
    strategy: S,
    transcript: Transcript,
}

impl<'w, S: NormalStrategy> Session<'w, S> {
    pub fn new(world: &'w World, strategy: S) -> Self {
        Self {
            world,
            strategy,
            transcript: Transcript::new(),
        }
    }

    pub fn world(&self) -> &'w World {
        self.world
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn strategy(&self) -> &S {
        &self.strategy
    }

    pub fn questions(&self) -> usize {
        self.transcript.question_count()
    }

    pub fn into_parts(self) -> (Transcript, S) {
        (self.transcript, self.strategy)
    }

    /// Puts the self-referential question about `predicate` to `respondent`
    /// and records the exchange.
    pub fn ask(&mut self, respondent: usize, predicate: Predicate) -> Result<Answer> {
        self.respond(respondent, Question::about(predicate))
    }

    pub fn respond(&mut self, respondent: usize, question: Question) -> Result<Answer> {
        let ty = self.world.type_of(respondent)?;
        let biconditional = question.biconditional(self.world, ty)?;
        let answer = match ty {
            ProcessorType::Knight => Answer::from_bool(biconditional),
            ProcessorType::Knave => Answer::from_bool(!biconditional),
            ProcessorType::Normal => {
                self.strategy
                    .answer(&self.transcript, respondent, &question)?
            }
        };
        self.transcript.push(respondent, question, answer);
        Ok(answer)
    }
}
