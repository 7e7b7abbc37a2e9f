//! Reduced words in a free group.

use std::fmt;

/// Index of a free generator.
pub type Generator = u32;

/// An element of a free group, stored as a freely reduced sequence of
/// syllables `g^e` with `e != 0` and no two adjacent syllables on the same
/// generator. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord {
    syllables: Vec<(Generator, i32)>,
}

/// Pushes a syllable onto a stack of reduced syllables, merging with (and
/// possibly cancelling) the top.
fn push_syllable(stack: &mut Vec<(Generator, i32)>, (g, e): (Generator, i32)) {
    if e == 0 {
        return;
    }
    match stack.last_mut() {
        Some((top, exp)) if *top == g => {
            *exp += e;
            if *exp == 0 {
                stack.pop();
            }
        }
        _ => stack.push((g, e)),
    }
}

/// Freely reduces an arbitrary syllable sequence.
pub fn reduce_word(raw: &[(Generator, i32)]) -> FreeWord {
    let mut stack = Vec::with_capacity(raw.len());
    for &s in raw {
        push_syllable(&mut stack, s);
    }
    FreeWord { syllables: stack }
}

/// The commutator `[u, v] = u v u^-1 v^-1`.
pub fn commutator_word(u: &FreeWord, v: &FreeWord) -> FreeWord {
    u.mul(v).mul(&u.inverse()).mul(&v.inverse())
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self::power(g, 1)
    }

    pub fn power(g: Generator, e: i32) -> Self {
        reduce_word(&[(g, e)])
    }

    pub fn from_syllables<I: IntoIterator<Item = (Generator, i32)>>(raw: I) -> Self {
        let raw: Vec<_> = raw.into_iter().collect();
        reduce_word(&raw)
    }

    /// Builds a word from single letters `(g, ±1)`.
    pub fn from_letters<I: IntoIterator<Item = (Generator, i32)>>(letters: I) -> Self {
        Self::from_syllables(letters)
    }

    pub fn syllables(&self) -> &[(Generator, i32)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter length, i.e. the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Expands into unit letters `(g, +1)` / `(g, -1)`.
    pub fn letters(&self) -> impl Iterator<Item = (Generator, i32)> + '_ {
        self.syllables
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            syllables: self.syllables.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut stack = self.syllables.clone();
        for &s in &other.syllables {
            push_syllable(&mut stack, s);
        }
        FreeWord { syllables: stack }
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn max_generator(&self) -> Option<Generator> {
        self.syllables.iter().map(|&(g, _)| g).max()
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.syllables.iter().any(|&(h, _)| h == g)
    }

    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.syllables
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, e)| e as i64)
            .sum()
    }

    /// Number of letters on generator `g`, counted with multiplicity.
    pub fn occurrences(&self, g: Generator) -> usize {
        self.syllables
            .iter()
            .filter(|&&(h, _)| h == g)
            .map(|&(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    /// Replaces every occurrence of `g` by `image`.
    pub fn substitute(&self, g: Generator, image: &FreeWord) -> Self {
        self.map_generators(|h| if h == g { image.clone() } else { FreeWord::generator(h) })
    }

    /// Applies the endomorphism sending each generator to `f(g)`.
    pub fn map_generators<F: FnMut(Generator) -> FreeWord>(&self, mut f: F) -> Self {
        let mut stack = Vec::new();
        for &(g, e) in &self.syllables {
            let image = f(g);
            let image = if e < 0 { image.inverse() } else { image };
            for _ in 0..e.unsigned_abs() {
                for &s in &image.syllables {
                    push_syllable(&mut stack, s);
                }
            }
        }
        FreeWord { syllables: stack }
    }

    /// Removes matching inverse letters from both ends. The result is a
    /// conjugate of `self`.
    pub fn cyclically_reduced(&self) -> Self {
        let mut s = self.syllables.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let (g0, e0) = s[0];
            let (g1, e1) = s[s.len() - 1];
            if g0 != g1 {
                break;
            }
            s.pop();
            s[0] = (g0, e0 + e1);
            if e0 + e1 == 0 {
                s.remove(0);
            } else {
                break;
            }
        }
        FreeWord { syllables: s }
    }

    /// All cyclic rotations by whole letters of a cyclically reduced word.
    pub fn letter_rotations(&self) -> Vec<FreeWord> {
        let letters: Vec<_> = self.letters().collect();
        (0..letters.len().max(1))
            .map(|k| {
                FreeWord::from_letters(
                    letters[k.min(letters.len())..]
                        .iter()
                        .chain(letters[..k.min(letters.len())].iter())
                        .copied(),
                )
            })
            .collect()
    }

    /// Formats the word with the supplied generator names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

struct WordDisplay<'a> {
    word: &'a FreeWord,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.word.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match self.names.get(g as usize) {
                Some(name) => write!(f, "{name}")?,
                None => write!(f, "g{g}")?,
            }
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent letter-at-a-time stack canceller.
    fn stack_cancel(letters: &[(Generator, i32)]) -> Vec<(Generator, i32)> {
        let mut out: Vec<(Generator, i32)> = Vec::new();
        for &(g, s) in letters {
            if let Some(&(h, t)) = out.last() {
                if h == g && t == -s {
                    out.pop();
                    continue;
                }
            }
            out.push((g, s));
        }
        out
    }

    fn letters_strategy(n: usize) -> impl Strategy<Value = Vec<(Generator, i32)>> {
        prop::collection::vec((0u32..3, prop::bool::ANY), 0..=n)
            .prop_map(|v| v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect())
    }

    #[test]
    fn cancels_inverse_pair() {
        assert!(reduce_word(&[(0, 1), (0, -1)]).is_identity());
    }

    #[test]
    fn merges_across_cancellation() {
        // x y y^-1 x -> x^2
        let w = reduce_word(&[(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w.syllables(), &[(0, 2)]);
    }

    #[test]
    fn commutator_examples() {
        let a = FreeWord::generator(0);
        assert!(commutator_word(&a, &a).is_identity());
        assert!(commutator_word(&a, &FreeWord::identity()).is_identity());
        // [b1^-1, d1^-1] = b1^-1 d1^-1 b1 d1
        let b1 = FreeWord::power(1, -1);
        let d1 = FreeWord::power(5, -1);
        let c = commutator_word(&b1, &d1);
        assert_eq!(c.syllables(), &[(1, -1), (5, -1), (1, 1), (5, 1)]);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn cyclic_reduction() {
        let w = FreeWord::from_syllables([(0, 1), (1, 2), (0, -1)]);
        assert_eq!(w.cyclically_reduced().syllables(), &[(1, 2)]);
        let w = FreeWord::from_syllables([(0, 2), (1, 1), (0, -1)]);
        assert_eq!(w.cyclically_reduced().syllables(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn substitution_and_power() {
        let w = FreeWord::from_syllables([(0, 2), (1, -1)]);
        let img = FreeWord::from_syllables([(1, 1), (2, 1)]);
        let s = w.substitute(0, &img);
        assert_eq!(s.syllables(), &[(1, 1), (2, 1), (1, 1), (2, 1), (1, -1)]);
        assert_eq!(img.pow(-2), img.inverse().mul(&img.inverse()));
    }

    #[test]
    fn random_fifty_letter_word_matches_stack_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let letters: Vec<_> = (0..50)
                .map(|_| (rng.gen_range(0..3u32), if rng.gen_bool(0.5) { 1 } else { -1 }))
                .collect();
            let oracle = stack_cancel(&letters);
            let ours: Vec<_> = FreeWord::from_letters(letters.iter().copied()).letters().collect();
            assert_eq!(ours, oracle);
        }
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent_and_shortening(l in letters_strategy(60)) {
            let w = FreeWord::from_letters(l.iter().copied());
            let again = FreeWord::from_letters(w.letters());
            prop_assert_eq!(&again, &w);
            prop_assert!(w.len() <= l.len());
        }

        #[test]
        fn reduction_respects_products(u in letters_strategy(30), v in letters_strategy(30)) {
            let joined: Vec<_> = u.iter().chain(v.iter()).copied().collect();
            let uv = FreeWord::from_letters(joined);
            let prod = FreeWord::from_letters(u).mul(&FreeWord::from_letters(v));
            prop_assert_eq!(uv, prod);
        }

        #[test]
        fn inverse_cancels(l in letters_strategy(40)) {
            let w = FreeWord::from_letters(l);
            prop_assert!(w.mul(&w.inverse()).is_identity());
        }
    }
}
