use std::fmt;

use serde::Serialize;

use super::word::{FreeWord, Generator};
use super::GroupError;

/// A finite presentation `<generators | relators>`.
///
/// Relators are kept cyclically reduced; their order carries no meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<FreeWord>,
}

fn check_word(word: &FreeWord, count: usize) -> Result<(), GroupError> {
    match word.max_generator() {
        Some(g) if g as usize >= count => Err(GroupError::InvalidGenerator {
            index: g,
            count,
        }),
        _ => Ok(()),
    }
}

impl Presentation {
    pub fn new(names: Vec<String>, relators: Vec<FreeWord>) -> Result<Self, GroupError> {
        for r in &relators {
            check_word(r, names.len())?;
        }
        Ok(Presentation {
            names,
            relators: relators.iter().map(FreeWord::cyclically_reduced).collect(),
        })
    }

    /// The free group on the named generators.
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Presentation {
            names: names.into_iter().map(Into::into).collect(),
            relators: Vec::new(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<Generator> {
        self.names.iter().position(|n| n == name).map(|i| i as Generator)
    }

    pub fn check_word(&self, word: &FreeWord) -> Result<(), GroupError> {
        check_word(word, self.names.len())
    }

    /// Adds `extra` to the relators; the normal closure is implicit.
    pub fn quotient(&self, extra: &[FreeWord]) -> Result<Self, GroupError> {
        for w in extra {
            self.check_word(w)?;
        }
        let mut relators = self.relators.clone();
        relators.extend(extra.iter().map(FreeWord::cyclically_reduced));
        Ok(Presentation {
            names: self.names.clone(),
            relators,
        })
    }

    /// Free product with `other`. Generators of `other` are shifted past
    /// those of `self` and renamed through `rename`.
    pub fn free_product<F: Fn(&str) -> String>(&self, other: &Presentation, rename: F) -> Self {
        let offset = self.names.len() as Generator;
        let mut names = self.names.clone();
        names.extend(other.names.iter().map(|n| rename(n)));
        let mut relators = self.relators.clone();
        relators.extend(
            other
                .relators
                .iter()
                .map(|r| r.map_generators(|g| FreeWord::generator(g + offset))),
        );
        Presentation { names, relators }
    }

    /// Sum of the letter lengths of all relators.
    pub fn total_length(&self) -> usize {
        self.relators.iter().map(FreeWord::len).sum()
    }

    pub(crate) fn from_parts_unchecked(names: Vec<String>, relators: Vec<FreeWord>) -> Self {
        Presentation { names, relators }
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| r.display_with(&self.names).to_string())
            .collect()
    }

    pub fn summary(&self) -> PresentationSummary {
        PresentationSummary {
            generators: self.names.clone(),
            relators: self.relator_strings(),
        }
    }
}

/// Serializable view of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | {} >", self.names.join(", "), self.relator_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_relator() {
        let err = Presentation::new(vec!["a".into()], vec![FreeWord::generator(1)]).unwrap_err();
        assert_eq!(err, GroupError::InvalidGenerator { index: 1, count: 1 });
    }

    #[test]
    fn quotient_appends() {
        let p = Presentation::free(["a"]);
        let q = p.quotient(&[FreeWord::generator(0)]).unwrap();
        assert_eq!(q.relators(), &[FreeWord::generator(0)]);
        assert!(p.quotient(&[FreeWord::generator(3)]).is_err());
    }

    #[test]
    fn relators_are_cyclically_reduced() {
        let r = FreeWord::from_syllables([(0, 1), (1, 3), (0, -1)]);
        let p = Presentation::new(vec!["a".into(), "b".into()], vec![r]).unwrap();
        assert_eq!(p.relators()[0], FreeWord::power(1, 3));
    }

    #[test]
    fn free_product_shifts_generators() {
        let a = Presentation::new(vec!["x".into()], vec![FreeWord::power(0, 2)]).unwrap();
        let b = Presentation::new(vec!["x".into()], vec![FreeWord::power(0, 3)]).unwrap();
        let p = a.free_product(&b, |n| format!("B.{n}"));
        assert_eq!(p.names(), &["x".to_string(), "B.x".to_string()]);
        assert_eq!(p.relators()[1], FreeWord::power(1, 3));
    }
}
