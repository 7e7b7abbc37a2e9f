//! Budgeted Tietze simplification.
//!
//! Only moves that provably preserve the isomorphism type are used:
//! deleting trivial or repeated relators, cyclic rotation/inversion of a
//! relator, and eliminating a generator `g` through a relator in which `g`
//! occurs exactly once (`g = w` with `w` free of `g`), which removes both the
//! generator and its defining relator.

use std::collections::BTreeSet;

use super::presentation::Presentation;
use super::word::{FreeWord, Generator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplifyConfig {
    /// Maximum number of moves.
    pub budget: usize,
    /// Substitutions that would produce a relator longer than this are skipped.
    pub relator_cap: usize,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            budget: 5000,
            relator_cap: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifyOutcome {
    pub presentation: Presentation,
    pub steps: usize,
    /// Set when the budget ran out before a fixed point was reached.
    pub exhausted: bool,
}

/// A single Tietze move on a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TietzeMove {
    /// Remove relator `i` if it is the identity.
    DeleteTrivial(usize),
    /// Remove relator `i` when another relator is a cyclic rotation of it or
    /// of its inverse.
    DeleteDuplicate(usize),
    /// Rotate relator `i` by `k` letters (a conjugate, same normal closure).
    Rotate(usize, usize),
    /// Replace relator `i` by its inverse.
    Invert(usize),
    /// Solve relator `relator` for `generator` (which must occur exactly once),
    /// substitute everywhere, and drop both.
    Eliminate { relator: usize, generator: Generator },
}

/// Minimal representative of a relator under rotation and inversion.
pub(crate) fn canonical_cyclic(w: &FreeWord) -> FreeWord {
    let w = w.cyclically_reduced();
    w.letter_rotations()
        .into_iter()
        .chain(w.inverse().letter_rotations())
        .min()
        .unwrap_or_default()
}

/// Solves `r = 1` for `g`, assuming `g` occurs exactly once in `r`.
fn solve_for(r: &FreeWord, g: Generator) -> FreeWord {
    let letters: Vec<_> = r.letters().collect();
    let pos = letters.iter().position(|&(h, _)| h == g).expect("generator occurs");
    let sign = letters[pos].1;
    // r = u g^s v  ==>  g^s = u^-1 v^-1 ... up to conjugacy: g^s v u = 1.
    let vu = FreeWord::from_letters(letters[pos + 1..].iter().chain(letters[..pos].iter()).copied());
    if sign > 0 {
        vu.inverse()
    } else {
        vu
    }
}

fn eliminate(p: &Presentation, relator: usize, g: Generator) -> Presentation {
    let image = solve_for(&p.relators()[relator], g);
    let renumber = |h: Generator| if h > g { h - 1 } else { h };
    let relators: Vec<FreeWord> = p
        .relators()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != relator)
        .map(|(_, r)| {
            r.map_generators(|h| {
                if h == g {
                    image.map_generators(|k| FreeWord::generator(renumber(k)))
                } else {
                    FreeWord::generator(renumber(h))
                }
            })
            .cyclically_reduced()
        })
        .collect();
    let mut names = p.names().to_vec();
    names.remove(g as usize);
    Presentation::from_parts_unchecked(names, relators)
}

/// Applies `mv`, returning `None` when its precondition fails.
pub fn apply_move(p: &Presentation, mv: TietzeMove) -> Option<Presentation> {
    let rels = p.relators();
    match mv {
        TietzeMove::DeleteTrivial(i) => {
            if !rels.get(i)?.is_identity() {
                return None;
            }
            let mut r = rels.to_vec();
            r.remove(i);
            Some(Presentation::from_parts_unchecked(p.names().to_vec(), r))
        }
        TietzeMove::DeleteDuplicate(i) => {
            let key = canonical_cyclic(rels.get(i)?);
            if !rels
                .iter()
                .enumerate()
                .any(|(j, r)| j != i && canonical_cyclic(r) == key)
            {
                return None;
            }
            let mut r = rels.to_vec();
            r.remove(i);
            Some(Presentation::from_parts_unchecked(p.names().to_vec(), r))
        }
        TietzeMove::Rotate(i, k) => {
            let rel = rels.get(i)?;
            let rots = rel.letter_rotations();
            let mut r = rels.to_vec();
            r[i] = rots[k % rots.len()].clone();
            Some(Presentation::from_parts_unchecked(p.names().to_vec(), r))
        }
        TietzeMove::Invert(i) => {
            let mut r = rels.to_vec();
            r[i] = rels.get(i)?.inverse();
            Some(Presentation::from_parts_unchecked(p.names().to_vec(), r))
        }
        TietzeMove::Eliminate { relator, generator } => {
            let r = rels.get(relator)?;
            if r.occurrences(generator) != 1 {
                return None;
            }
            Some(eliminate(p, relator, generator))
        }
    }
}

/// Every applicable move, in a deterministic order.
pub fn legal_moves(p: &Presentation) -> Vec<TietzeMove> {
    let mut moves = Vec::new();
    for (i, r) in p.relators().iter().enumerate() {
        if r.is_identity() {
            moves.push(TietzeMove::DeleteTrivial(i));
        }
        moves.push(TietzeMove::Invert(i));
        if r.len() > 1 {
            moves.push(TietzeMove::Rotate(i, 1));
        }
        for g in 0..p.generator_count() as Generator {
            if r.occurrences(g) == 1 {
                moves.push(TietzeMove::Eliminate { relator: i, generator: g });
            }
        }
    }
    for i in 0..p.relators().len() {
        if apply_move(p, TietzeMove::DeleteDuplicate(i)).is_some() {
            moves.push(TietzeMove::DeleteDuplicate(i));
        }
    }
    moves
}

/// Removes trivial and repeated relators. Returns the number of deletions.
fn prune(p: &mut Presentation) -> usize {
    let mut seen = BTreeSet::new();
    let before = p.relators().len();
    let kept: Vec<FreeWord> = p
        .relators()
        .iter()
        .filter(|r| !r.is_identity() && seen.insert(canonical_cyclic(r)))
        .cloned()
        .collect();
    let removed = before - kept.len();
    *p = Presentation::from_parts_unchecked(p.names().to_vec(), kept);
    removed
}

/// Picks the elimination giving the smallest total relator length whose
/// relators all stay within the cap.
fn best_elimination(p: &Presentation, cap: usize) -> Option<(usize, Generator)> {
    let mut best: Option<(usize, usize, usize, Generator)> = None;
    for (i, r) in p.relators().iter().enumerate() {
        for g in 0..p.generator_count() as Generator {
            if r.occurrences(g) != 1 {
                continue;
            }
            let image = solve_for(r, g);
            let mut total = 0usize;
            let mut ok = true;
            for (j, s) in p.relators().iter().enumerate() {
                if j == i {
                    continue;
                }
                let len = if s.contains(g) {
                    s.substitute(g, &image).cyclically_reduced().len()
                } else {
                    s.len()
                };
                if len > cap {
                    ok = false;
                    break;
                }
                total += len;
            }
            if !ok {
                continue;
            }
            let key = (total, r.len(), i, g);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, _, i, g)| (i, g))
}

/// Tietze-simplifies `p` within the configured budget.
pub fn simplify_presentation(p: &Presentation, config: SimplifyConfig) -> SimplifyOutcome {
    let mut current = Presentation::from_parts_unchecked(
        p.names().to_vec(),
        p.relators().iter().map(FreeWord::cyclically_reduced).collect(),
    );
    let mut steps = prune(&mut current);
    loop {
        if steps >= config.budget {
            return SimplifyOutcome {
                presentation: current,
                steps,
                exhausted: true,
            };
        }
        let Some((i, g)) = best_elimination(&current, config.relator_cap) else {
            break;
        };
        current = eliminate(&current, i, g);
        steps += 1 + prune(&mut current);
    }
    SimplifyOutcome {
        presentation: current,
        steps,
        exhausted: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::abelian::abelianize;
    use crate::group::parse::parse_word_in;

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let names: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_word_in(r, &names).unwrap()).collect();
        Presentation::new(names, rels).unwrap()
    }

    #[test]
    fn kills_a_generator_set_to_one() {
        let out = simplify_presentation(&pres(&["a", "b"], &["a"]), SimplifyConfig::default());
        assert_eq!(out.presentation.names(), &["b".to_string()]);
        assert!(out.presentation.relators().is_empty());
        assert!(!out.exhausted);
    }

    #[test]
    fn keeps_surface_relator() {
        let p = pres(&["a", "b", "c", "d"], &["[a,b][c,d]"]);
        let out = simplify_presentation(&p, SimplifyConfig::default());
        assert_eq!(out.presentation, p);
    }

    #[test]
    fn solves_for_once_occurring_generator() {
        // a b a^-1 c = 1 has b once: b = a^-1 c^-1 a.
        let p = pres(&["a", "b", "c"], &["a b a^-1 c", "b^2"]);
        let out = simplify_presentation(&p, SimplifyConfig::default());
        assert_eq!(out.presentation.generator_count(), 2);
        assert_eq!(abelianize(&out.presentation), abelianize(&p));
    }

    #[test]
    fn respects_budget() {
        let p = pres(&["a", "b", "c"], &["a", "b", "c"]);
        let out = simplify_presentation(
            &p,
            SimplifyConfig {
                budget: 1,
                relator_cap: 64,
            },
        );
        assert!(out.exhausted);
        assert_eq!(out.steps, 1);
    }

    #[test]
    fn cap_blocks_long_substitutions() {
        let p = pres(&["a", "b"], &["a b^30", "a^3 b"]);
        let out = simplify_presentation(&p, SimplifyConfig { budget: 10, relator_cap: 20 });
        // b = a^-3 gives a^-89, a = b^-30 gives b^-89: both exceed the cap.
        assert_eq!(out.presentation.generator_count(), 2);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let p = pres(&["a", "b"], &["a^2 b a"]);
        assert!(apply_move(&p, TietzeMove::DeleteTrivial(0)).is_none());
        assert!(apply_move(&p, TietzeMove::Eliminate { relator: 0, generator: 0 }).is_none());
        assert!(apply_move(&p, TietzeMove::DeleteDuplicate(0)).is_none());
        assert!(apply_move(&p, TietzeMove::Eliminate { relator: 0, generator: 1 }).is_some());
    }
}
