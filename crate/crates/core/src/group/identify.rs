//! Heuristic identification of a presented group, backed by certificates.
//!
//! Finite answers (trivial, finite cyclic) are certified by a closed coset
//! table over the trivial subgroup, enumerated on the presentation as given.
//! Infinite answers are certified by Tietze reduction to a literal standard
//! form. Anything else is `Unknown`.

use std::fmt;

use serde::{Serialize, Serializer};

use super::abelian::{abelianize, AbelianInvariants};
use super::coset::{enumerate_cosets, CosetEnumeration, CosetOutcome};
use super::presentation::Presentation;
use super::tietze::{canonical_cyclic as canonical, simplify_presentation, SimplifyConfig};
use super::word::{FreeWord, Generator};
use super::Budgets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    Trivial,
    FiniteCyclic(u64),
    /// `Z/p + Z`; `p = 0` stands for `Z^2`.
    FreeAbelianTimesCyclic(u64),
    FreeOfRank(usize),
    SurfaceGroup(usize),
    Unknown,
}

impl GroupTag {
    pub fn is_certified(&self) -> bool {
        *self != GroupTag::Unknown
    }

    /// Parses the display form (`trivial`, `Z/5`, `Z/5 + Z`, `Z^2`, `Z`,
    /// `free(3)`, `surface(2)`, `unknown`).
    pub fn parse(text: &str) -> Option<Self> {
        let t: String = text.split_whitespace().collect();
        let inner = |prefix: &str| -> Option<usize> {
            t.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
        };
        Some(match t.as_str() {
            "trivial" | "1" => GroupTag::Trivial,
            "unknown" => GroupTag::Unknown,
            "Z" => GroupTag::FreeOfRank(1),
            "Z^2" => GroupTag::FreeAbelianTimesCyclic(0),
            _ => {
                if let Some(n) = inner("free(") {
                    return Some(if n == 0 { GroupTag::Trivial } else { GroupTag::FreeOfRank(n) });
                }
                if let Some(g) = inner("surface(") {
                    return Some(GroupTag::SurfaceGroup(g));
                }
                if let Some(p) = t.strip_prefix("Z/").and_then(|s| s.strip_suffix("+Z")) {
                    return Some(GroupTag::FreeAbelianTimesCyclic(p.parse().ok()?));
                }
                let n: u64 = t.strip_prefix("Z/")?.parse().ok()?;
                match n {
                    0 => GroupTag::FreeOfRank(1),
                    1 => GroupTag::Trivial,
                    n => GroupTag::FiniteCyclic(n),
                }
            }
        })
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Trivial => write!(f, "trivial"),
            GroupTag::FiniteCyclic(n) => write!(f, "Z/{n}"),
            GroupTag::FreeAbelianTimesCyclic(0) => write!(f, "Z^2"),
            GroupTag::FreeAbelianTimesCyclic(p) => write!(f, "Z/{p} + Z"),
            GroupTag::FreeOfRank(1) => write!(f, "Z"),
            GroupTag::FreeOfRank(n) => write!(f, "free({n})"),
            GroupTag::SurfaceGroup(g) => write!(f, "surface({g})"),
            GroupTag::Unknown => write!(f, "unknown"),
        }
    }
}

impl Serialize for GroupTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupIdentification {
    pub tag: GroupTag,
    pub evidence: Vec<String>,
    #[serde(skip)]
    pub simplified: Presentation,
    #[serde(skip)]
    pub abelianization: AbelianInvariants,
    #[serde(skip)]
    pub cosets: Option<CosetEnumeration>,
}

/// Matches `<x, a | x^p, [x, a]>` (either generator may play `x`) and
/// `<x, a | [x, a]>`. Returns `p` (0 for the latter).
fn match_abelian_rank_one_plus_cyclic(p: &Presentation) -> Option<u64> {
    if p.generator_count() != 2 {
        return None;
    }
    let comm = canonical(&super::word::commutator_word(&FreeWord::generator(0), &FreeWord::generator(1)));
    let rels: Vec<FreeWord> = p.relators().iter().map(canonical).collect();
    match rels.as_slice() {
        [r] if *r == comm => Some(0),
        [r, s] | [s, r] if *r == comm => {
            let syl = s.syllables();
            (syl.len() == 1).then(|| syl[0].1.unsigned_abs() as u64).filter(|&n| n >= 2)
        }
        _ => None,
    }
}

/// Matches a single relator that is a product of commutators `[u1, v1]...[ug, vg]`
/// of distinct generators exhausting a generating set of size `2g`.
fn match_surface(p: &Presentation) -> Option<usize> {
    let n = p.generator_count();
    if n == 0 || !n.is_multiple_of(2) || p.relators().len() != 1 {
        return None;
    }
    let r = p.relators()[0].cyclically_reduced();
    let letters: Vec<(Generator, i32)> = r.letters().collect();
    if letters.len() != 2 * n {
        return None;
    }
    for candidate in r.letter_rotations().into_iter().chain(r.inverse().letter_rotations()) {
        let l: Vec<(Generator, i32)> = candidate.letters().collect();
        let mut seen = vec![false; n];
        let ok = l.chunks(4).all(|c| {
            let [(u, su), (v, sv), (u2, su2), (v2, sv2)] = [c[0], c[1], c[2], c[3]];
            let fresh = u != v && !seen[u as usize] && !seen[v as usize];
            if fresh {
                seen[u as usize] = true;
                seen[v as usize] = true;
            }
            fresh && u2 == u && v2 == v && su2 == -su && sv2 == -sv
        });
        if ok && seen.iter().all(|&s| s) {
            return Some(n / 2);
        }
    }
    None
}

/// Runs the identification pipeline within `budgets`.
pub fn identify_group(p: &Presentation, budgets: Budgets) -> GroupIdentification {
    let mut evidence = Vec::new();
    let simp = simplify_presentation(
        p,
        SimplifyConfig {
            budget: budgets.tietze_budget,
            relator_cap: budgets.relator_cap,
        },
    );
    evidence.push(format!(
        "tietze: {} moves{}, {} generators / {} relators -> {} / {}",
        simp.steps,
        if simp.exhausted { " (budget exhausted)" } else { "" },
        p.generator_count(),
        p.relators().len(),
        simp.presentation.generator_count(),
        simp.presentation.relators().len()
    ));
    let sp = &simp.presentation;
    let ab = abelianize(p);
    evidence.push(format!("abelianization: {ab}"));

    let mut tag = GroupTag::Unknown;
    let mut cosets = None;
    if ab.free_rank == 0 {
        // Finite candidates: the coset table is the certificate.
        let run = enumerate_cosets(p, &[], budgets.max_cosets);
        match run.outcome {
            CosetOutcome::Index(n) => {
                evidence.push(format!("coset table closed at index {n} ({} definitions)", run.defined));
                let order = ab.order().unwrap_or(0);
                if n == 1 {
                    tag = GroupTag::Trivial;
                } else if n == order && ab.torsion.len() == 1 {
                    evidence.push(format!("|G| = |H1| = {n} with H1 cyclic, so G is abelian and cyclic"));
                    tag = GroupTag::FiniteCyclic(n);
                } else {
                    evidence.push(format!("finite of order {n}, not identified further"));
                }
            }
            CosetOutcome::Overflow => {
                evidence.push(format!(
                    "coset enumeration overflow at {} cosets (inconclusive)",
                    budgets.max_cosets
                ));
            }
        }
        if sp.generator_count() == 0 {
            evidence.push("simplifier cross-check: empty presentation".into());
        }
        cosets = Some(run);
    } else if sp.relators().is_empty() {
        evidence.push(format!("literal standard form: free on {} generators", sp.generator_count()));
        tag = GroupTag::FreeOfRank(sp.generator_count());
    } else if let Some(pp) = match_abelian_rank_one_plus_cyclic(sp) {
        evidence.push(format!("literal standard form: <x, a | x^{pp}, [x, a]>"));
        tag = GroupTag::FreeAbelianTimesCyclic(pp);
    } else if let Some(g) = match_surface(sp) {
        evidence.push(format!("literal standard form: product of {g} commutators"));
        tag = GroupTag::SurfaceGroup(g);
    } else {
        evidence.push("no standard form matched; infinite abelianization".into());
    }
    GroupIdentification {
        tag,
        evidence,
        simplified: simp.presentation,
        abelianization: ab,
        cosets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse::parse_word_in;

    fn pres(gens: &[&str], rels: &[&str]) -> Presentation {
        let names: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
        let rels = rels.iter().map(|r| parse_word_in(r, &names).unwrap()).collect();
        Presentation::new(names, rels).unwrap()
    }

    fn tag(p: &Presentation) -> GroupTag {
        identify_group(p, Budgets::default()).tag
    }

    #[test]
    fn standard_forms() {
        assert_eq!(tag(&pres(&["x", "a"], &["x^5", "[x, a]"])), GroupTag::FreeAbelianTimesCyclic(5));
        assert_eq!(tag(&pres(&["x", "a"], &["[a, x]"])), GroupTag::FreeAbelianTimesCyclic(0));
        assert_eq!(tag(&pres(&["a", "b", "c", "d"], &["[a,b][c,d]"])), GroupTag::SurfaceGroup(2));
        assert_eq!(tag(&pres(&["a", "b"], &[])), GroupTag::FreeOfRank(2));
        assert_eq!(tag(&pres(&["a"], &["a^7"])), GroupTag::FiniteCyclic(7));
        assert_eq!(tag(&pres(&["a", "b"], &["a", "b"])), GroupTag::Trivial);
    }

    #[test]
    fn rotated_surface_relator_matches() {
        let p = pres(&["a", "b", "c", "d"], &["b a^-1 b^-1 c d c^-1 d^-1 a"]);
        assert_eq!(tag(&p), GroupTag::SurfaceGroup(2));
    }

    #[test]
    fn nonabelian_finite_is_unknown() {
        let p = pres(&["a", "b"], &["a^2", "b^3", "(a b)^2"]);
        let id = identify_group(&p, Budgets::default());
        assert_eq!(id.tag, GroupTag::Unknown);
        assert_eq!(id.cosets.unwrap().outcome, CosetOutcome::Index(6));
    }

    #[test]
    fn overflow_is_unknown() {
        let p = pres(&["a", "b"], &["a b a^-1 b^-2", "b a b^-1 a^-2"]);
        let id = identify_group(&p, Budgets { max_cosets: 1, ..Budgets::default() });
        assert_eq!(id.tag, GroupTag::Unknown);
        assert_eq!(tag(&p), GroupTag::Trivial);
        let p = pres(&["a"], &["a^9"]);
        let id = identify_group(&p, Budgets { max_cosets: 2, ..Budgets::default() });
        assert_eq!(id.tag, GroupTag::Unknown);
    }

    #[test]
    fn tag_text_round_trip() {
        for t in [
            GroupTag::Trivial,
            GroupTag::FiniteCyclic(4),
            GroupTag::FreeAbelianTimesCyclic(5),
            GroupTag::FreeAbelianTimesCyclic(0),
            GroupTag::FreeOfRank(1),
            GroupTag::FreeOfRank(3),
            GroupTag::SurfaceGroup(2),
            GroupTag::Unknown,
        ] {
            assert_eq!(GroupTag::parse(&t.to_string()), Some(t));
        }
    }
}
