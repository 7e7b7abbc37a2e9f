//! Finitely presented groups: free words, presentations, abelianization,
//! Tietze simplification, coset enumeration and identification.

pub mod abelian;
pub mod coset;
pub mod identify;
pub mod parse;
pub mod presentation;
pub mod tietze;
pub mod word;

pub use abelian::{abelianize, AbelianInvariants};
pub use coset::{enumerate_cosets, CosetEnumeration, CosetOutcome};
pub use identify::{identify_group, GroupIdentification, GroupTag};
pub use parse::{parse_word, parse_word_in, WordParseError};
pub use presentation::{Presentation, PresentationSummary};
pub use tietze::{simplify_presentation, SimplifyConfig, SimplifyOutcome, TietzeMove};
pub use word::{commutator_word, reduce_word, FreeWord, Generator};

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("generator index {index} out of range for {count} generators")]
    InvalidGenerator { index: Generator, count: usize },
}

/// Resource limits for the group algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    pub max_cosets: usize,
    pub tietze_budget: usize,
    pub relator_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_cosets: 100_000,
            tietze_budget: 5000,
            relator_cap: 64,
        }
    }
}
