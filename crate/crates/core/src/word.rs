//! Words over the simple generators of a Coxeter system.
//!
//! A letter is the 0-based index of a generator; generator `i` prints as
//! `s{i+1}`. Words carry no system reference of their own; operations that
//! evaluate them check letters against the ambient rank.

use std::fmt;

use crate::error::{Error, Result};

/// A finite (possibly empty) sequence of generator indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: u8) -> Self {
        Word(vec![letter])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The set of distinct letters, as a sorted list.
    pub fn support(&self) -> Vec<u8> {
        let mut s: Vec<u8> = self.0.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Formal inverse. Generators are involutions, so this is just reversal.
    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// Concatenation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        for &l in &self.0 {
            if l as usize >= rank {
                return Err(Error::LetterOutOfRange {
                    letter: l as usize + 1,
                    rank,
                });
            }
        }
        Ok(())
    }

    /// Parses a whitespace-separated list of generator names (`s1 s2 ...`).
    /// The empty string and the single token `e` both denote the empty word.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let idx = tok
                .strip_prefix('s')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse(format!("`{tok}` is not a generator name")))?;
            if idx > rank {
                return Err(Error::LetterOutOfRange { letter: idx, rank });
            }
            letters.push((idx - 1) as u8);
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "s{}", l + 1)?;
        }
        Ok(())
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}
