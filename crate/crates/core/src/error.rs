//! Error type shared across the workbench.

use thiserror::Error;

/// Everything that can go wrong while building or querying the combinatorial
/// and geometric structures.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Coxeter matrix: {reason} (entry m[{row}][{col}] = {entry})")]
    InvalidCoxeterMatrix {
        reason: String,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("unknown Coxeter type label `{0}`")]
    UnknownTypeLabel(String),
    #[error("the system is infinite ({description}); this operation needs a finite group")]
    InfiniteSystem { description: String },
    #[error("letter s{letter} is out of range for a rank-{rank} system")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("elements belong to different Coxeter systems")]
    MismatchedSystems,
    #[error("rank {given} out of range, expected {lo}..={hi}")]
    RankOutOfRange { given: usize, lo: usize, hi: usize },
    #[error("k = {given} out of range, expected {lo}..={hi}")]
    KOutOfRange { given: usize, lo: usize, hi: usize },
    #[error("parameter {name} = {given} is invalid: {reason}")]
    BadParameter {
        name: &'static str,
        given: String,
        reason: String,
    },
    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("q = {given} out of range, expected 0..={max}")]
    QOutOfRange { given: usize, max: usize },
    #[error("invalid loop at position {position}: {reason}")]
    InvalidLoop { position: usize, reason: String },
    #[error("invalid move at step {step}: {reason}")]
    InvalidMove { step: usize, reason: String },
    #[error("loops disagree: {reason}")]
    LoopMismatch { reason: String },
    #[error("graph is disconnected ({unreached} vertices unreachable from the base)")]
    DisconnectedGraph { unreached: usize },
    #[error("parabolic collection is not closed under conjugation: conjugating by {word} leaves it")]
    NotConjugationClosed { word: String },
    #[error("search inconclusive within bound {bound}: {what}")]
    Inconclusive { what: String, bound: usize },
    #[error("word `{word}` does not lie in the kernel of the surjection onto W")]
    NotInKernel { word: String },
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
