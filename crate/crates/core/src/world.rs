//! Ground truth: which processors are Knights, Knaves, or Normals.
//!
//! A world is written compactly as a string over `K` (Knight), `V` (knaVe)
//! and `N` (Normal); the position of a letter is the processor's identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessorType {
    /// Always answers truthfully.
    Knight,
    /// Always answers falsely.
    Knave,
    /// Answers arbitrarily.
    Normal,
}

impl ProcessorType {
    pub const ALL: [ProcessorType; 3] = [Self::Knight, Self::Knave, Self::Normal];

    /// Knights and Knaves both yield correct information under self-referential questioning.
    pub fn is_reliable(self) -> bool {
        !matches!(self, Self::Normal)
    }

    pub fn letter(self) -> char {
        match self {
            Self::Knight => 'K',
            Self::Knave => 'V',
            Self::Normal => 'N',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'K' => Some(Self::Knight),
            'V' => Some(Self::Knave),
            'N' => Some(Self::Normal),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Knight => "knight",
            Self::Knave => "knave",
            Self::Normal => "normal",
        }
    }
}

/// An immutable, nonempty population of processors indexed `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    types: Vec<ProcessorType>,
}

impl World {
    pub fn new(types: Vec<ProcessorType>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyWorld);
        }
        Ok(Self { types })
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn types(&self) -> &[ProcessorType] {
        &self.types
    }

    pub fn type_of(&self, index: usize) -> Result<ProcessorType> {
        self.types
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                size: self.types.len(),
            })
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        self.type_of(index).map(|_| ())
    }

    pub fn census(&self) -> Census {
        Census::of(&self.types)
    }

    /// Indices of every processor of the given type, ascending.
    pub fn indices_of(&self, ty: ProcessorType) -> Vec<usize> {
        self.types
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == ty)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Parses a world string; same as `text.parse::<World>()`.
pub fn parse_world(text: &str) -> Result<World> {
    text.parse()
}

impl FromStr for World {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let types = s
            .chars()
            .enumerate()
            .map(|(position, found)| {
                ProcessorType::from_letter(found).ok_or(Error::InvalidType { position, found })
            })
            .collect::<Result<Vec<_>>>()?;
        World::new(types)
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.types
            .iter()
            .try_for_each(|t| write!(f, "{}", t.letter()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub knights: usize,
    pub knaves: usize,
    pub normals: usize,
    /// Strictly fewer than half the processors are Normal.
    pub majority_ok: bool,
}

impl Census {
    fn of(types: &[ProcessorType]) -> Self {
        let count = |ty| types.iter().filter(|&&t| t == ty).count();
        let normals = count(ProcessorType::Normal);
        Census {
            knights: count(ProcessorType::Knight),
            knaves: count(ProcessorType::Knave),
            normals,
            majority_ok: 2 * normals < types.len(),
        }
    }

    pub fn total(&self) -> usize {
        self.knights + self.knaves + self.normals
    }

    pub fn reliable(&self) -> usize {
        self.knights + self.knaves
    }
}

pub fn census(world: &World) -> Census {
    world.census()
}
