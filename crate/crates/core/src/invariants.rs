//! Integer invariants of closed oriented 4-manifolds and the bookkeeping
//! that turns them into homeomorphism labels.

use std::fmt;

use serde::Serialize;

use crate::group::{AbelianInvariants, GroupIdentification, GroupTag};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("unknown standard piece `{0}`")]
    UnknownPiece(String),
    #[error("a connected sum needs at least one piece")]
    EmptySum,
    #[error("inconsistent invariants: e = {euler}, b1 = {b1}, sigma = {signature} give {reason}")]
    Inconsistent {
        euler: i64,
        b1: u32,
        signature: i64,
        reason: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        })
    }
}

impl TriState {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" | "true" => Some(TriState::Yes),
            "no" | "false" => Some(TriState::No),
            "unknown" => Some(TriState::Unknown),
            _ => None,
        }
    }
}

/// Euler characteristic, signature, and whatever is known about the
/// intersection form as a sum of `H`, `<1>` and `<-1>` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct InvariantRecord {
    pub euler: i64,
    pub signature: i64,
    pub hyperbolic: Option<u32>,
    pub plus_one: Option<u32>,
    pub minus_one: Option<u32>,
    pub spin: TriState,
}

impl InvariantRecord {
    /// Record for a spin manifold whose form is `hyperbolic` copies of `H`.
    pub fn even(euler: i64, hyperbolic: u32) -> Self {
        InvariantRecord {
            euler,
            signature: 0,
            hyperbolic: Some(hyperbolic),
            plus_one: Some(0),
            minus_one: Some(0),
            spin: TriState::Yes,
        }
    }

    /// Record with only `e` and `sigma` known.
    pub fn bare(euler: i64, signature: i64) -> Self {
        InvariantRecord {
            euler,
            signature,
            hyperbolic: None,
            plus_one: None,
            minus_one: None,
            spin: TriState::Unknown,
        }
    }

    /// `b2` when every summand count is known.
    pub fn b2(&self) -> Option<u32> {
        Some(2 * self.hyperbolic? + self.plus_one? + self.minus_one?)
    }

    /// Parity of the intersection form, when determined.
    pub fn parity(&self) -> Option<Parity> {
        match (self.spin, self.plus_one, self.minus_one) {
            (TriState::Yes, _, _) => Some(Parity::Even),
            (_, Some(p), Some(m)) if p + m == 0 => Some(Parity::Even),
            (_, Some(p), _) if p > 0 => Some(Parity::Odd),
            (_, _, Some(m)) if m > 0 => Some(Parity::Odd),
            (TriState::No, _, _) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Checks the summand identities whenever the counts are known.
    pub fn is_consistent(&self) -> bool {
        let sig_ok = match (self.plus_one, self.minus_one) {
            (Some(p), Some(m)) => self.signature == p as i64 - m as i64,
            _ => true,
        };
        let spin_ok = self.spin != TriState::Yes
            || (self.plus_one.unwrap_or(0) == 0 && self.minus_one.unwrap_or(0) == 0);
        sig_ok && spin_ok
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Betti numbers of a closed oriented connected 4-manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BettiData {
    pub b1: u32,
    pub b2: u32,
    pub b2_plus: u32,
    pub b2_minus: u32,
}

impl BettiData {
    pub fn euler(&self) -> i64 {
        2 - 2 * self.b1 as i64 + self.b2 as i64
    }

    pub fn signature(&self) -> i64 {
        self.b2_plus as i64 - self.b2_minus as i64
    }
}

/// Solves `e = 2 - 2 b1 + b2` and `sigma = b2+ - b2-` with `b1` the free
/// rank of `H1`.
pub fn betti_from_euler(euler: i64, ab: &AbelianInvariants, signature: i64) -> Result<BettiData, InvariantError> {
    let b1 = ab.free_rank as u32;
    let inconsistent = |reason: String| InvariantError::Inconsistent {
        euler,
        b1,
        signature,
        reason,
    };
    let b2 = euler - 2 + 2 * b1 as i64;
    if b2 < 0 {
        return Err(inconsistent(format!("negative b2 = {b2}")));
    }
    if (b2 + signature) % 2 != 0 {
        return Err(inconsistent(format!("b2 = {b2} and sigma of different parity")));
    }
    let plus = (b2 + signature) / 2;
    let minus = (b2 - signature) / 2;
    if plus < 0 || minus < 0 {
        return Err(inconsistent(format!("|sigma| exceeds b2 = {b2}")));
    }
    Ok(BettiData {
        b1,
        b2: b2 as u32,
        b2_plus: plus as u32,
        b2_minus: minus as u32,
    })
}

/// Standard closed 4-manifolds that labels are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    S4,
    S2xS2,
    CP2,
    CP2bar,
    S3xS1,
    /// `L(p,1) x S^1`; `p = 0` is `S^1 x S^2 x S^1`, i.e. `T2xS2`.
    LpxS1(u64),
    T2xS2,
    /// `L(p,1) x S^1` surgered along the circle factor; `pi1 = Z/p`.
    LpxS1Tilde(u64),
}

struct PieceData {
    euler: i64,
    signature: i64,
    b1: u32,
    hyperbolic: u32,
    plus: u32,
    minus: u32,
    spin: TriState,
}

impl Piece {
    fn data(self) -> PieceData {
        let d = |euler, signature, b1, hyperbolic, plus, minus, spin| PieceData {
            euler,
            signature,
            b1,
            hyperbolic,
            plus,
            minus,
            spin,
        };
        match self {
            Piece::S4 => d(2, 0, 0, 0, 0, 0, TriState::Yes),
            Piece::S2xS2 => d(4, 0, 0, 1, 0, 0, TriState::Yes),
            Piece::CP2 => d(3, 1, 0, 0, 1, 0, TriState::No),
            Piece::CP2bar => d(3, -1, 0, 0, 0, 1, TriState::No),
            Piece::S3xS1 => d(0, 0, 1, 0, 0, 0, TriState::Yes),
            Piece::LpxS1(0) | Piece::T2xS2 => d(0, 0, 2, 1, 0, 0, TriState::Yes),
            Piece::LpxS1(_) => d(0, 0, 1, 0, 0, 0, TriState::Yes),
            Piece::LpxS1Tilde(_) => d(2, 0, 0, 0, 0, 0, TriState::Unknown),
        }
    }

    pub fn parse(tag: &str) -> Result<Self, InvariantError> {
        let tag = tag.trim();
        let arg = |prefix: &str| -> Option<u64> { tag.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok() };
        Ok(match tag {
            "S4" => Piece::S4,
            "S2xS2" => Piece::S2xS2,
            "CP2" => Piece::CP2,
            "CP2bar" => Piece::CP2bar,
            "S3xS1" => Piece::S3xS1,
            "T2xS2" => Piece::T2xS2,
            _ => {
                if let Some(p) = arg("LpxS1~(") {
                    Piece::LpxS1Tilde(p)
                } else if let Some(p) = arg("LpxS1(") {
                    Piece::LpxS1(p)
                } else {
                    return Err(InvariantError::UnknownPiece(tag.to_string()));
                }
            }
        })
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::S4 => write!(f, "S4"),
            Piece::S2xS2 => write!(f, "S2xS2"),
            Piece::CP2 => write!(f, "CP2"),
            Piece::CP2bar => write!(f, "CP2bar"),
            Piece::S3xS1 => write!(f, "S3xS1"),
            Piece::LpxS1(p) => write!(f, "LpxS1({p})"),
            Piece::T2xS2 => write!(f, "T2xS2"),
            Piece::LpxS1Tilde(p) => write!(f, "LpxS1~({p})"),
        }
    }
}

/// Invariants of the connected sum of `pieces` (each with multiplicity).
pub fn connected_sum_invariants(pieces: &[(Piece, u32)]) -> Result<(InvariantRecord, BettiData), InvariantError> {
    let k: u32 = pieces.iter().map(|&(_, n)| n).sum();
    if k == 0 {
        return Err(InvariantError::EmptySum);
    }
    let mut euler = -2 * (k as i64 - 1);
    let (mut signature, mut b1, mut hyp, mut plus, mut minus) = (0i64, 0u32, 0u32, 0u32, 0u32);
    let mut spin = TriState::Yes;
    for &(piece, n) in pieces {
        let d = piece.data();
        euler += n as i64 * d.euler;
        signature += n as i64 * d.signature;
        b1 += n * d.b1;
        hyp += n * d.hyperbolic;
        plus += n * d.plus;
        minus += n * d.minus;
        if n > 0 {
            spin = match (spin, d.spin) {
                (TriState::No, _) | (_, TriState::No) => TriState::No,
                (TriState::Yes, TriState::Yes) => TriState::Yes,
                _ => TriState::Unknown,
            };
        }
    }
    let record = InvariantRecord {
        euler,
        signature,
        hyperbolic: Some(hyp),
        plus_one: Some(plus),
        minus_one: Some(minus),
        spin,
    };
    let betti = BettiData {
        b1,
        b2: 2 * hyp + plus + minus,
        b2_plus: hyp + plus,
        b2_minus: hyp + minus,
    };
    Ok((record, betti))
}

/// Parses a label such as `3(S2xS2)`, `3 CP2 # 4 CP2bar` or
/// `2(S2xS2) # S3xS1` into pieces with multiplicities.
pub fn parse_label(label: &str) -> Result<Vec<(Piece, u32)>, InvariantError> {
    label
        .split('#')
        .map(|term| {
            let term = term.trim();
            let digits: String = term.chars().take_while(char::is_ascii_digit).collect();
            let rest = term[digits.len()..].trim();
            let count = if digits.is_empty() { 1 } else { digits.parse().unwrap_or(0) };
            let rest = if !digits.is_empty() && rest.starts_with('(') && rest.ends_with(')') {
                &rest[1..rest.len() - 1]
            } else {
                rest
            };
            Ok((Piece::parse(rest)?, count))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationLabel {
    pub label: String,
    pub basis: String,
}

pub const UNCLASSIFIED: &str = "unclassified";

impl ClassificationLabel {
    fn unclassified(why: &str) -> Self {
        ClassificationLabel {
            label: UNCLASSIFIED.into(),
            basis: why.into(),
        }
    }

    pub fn is_classified(&self) -> bool {
        self.label != UNCLASSIFIED
    }
}

fn sum_label(terms: &[(u32, &str, bool)]) -> String {
    // (count, piece, wrap in parentheses)
    let parts: Vec<String> = terms
        .iter()
        .filter(|(n, _, _)| *n > 0)
        .map(|&(n, piece, wrap)| match (n, wrap) {
            (1, false) => piece.to_string(),
            (n, true) => format!("{n}({piece})"),
            (n, false) => format!("{n} {piece}"),
        })
        .collect();
    parts.join(" # ")
}

/// Simply connected (or rationally so) summand part of a label: `m(S2xS2)`
/// for an even form with zero signature, `a CP2 # b CP2bar` for an odd form.
fn form_label(b: &BettiData, parity: Option<Parity>) -> Option<String> {
    match parity? {
        Parity::Even if b.b2_plus == b.b2_minus => Some(sum_label(&[(b.b2 / 2, "S2xS2", true)])),
        Parity::Even => None,
        Parity::Odd => Some(sum_label(&[(b.b2_plus, "CP2", false), (b.b2_minus, "CP2bar", false)])),
    }
}

fn with_tail(head: String, tail: &str) -> String {
    if head.is_empty() {
        tail.to_string()
    } else {
        format!("{head} # {tail}")
    }
}

/// Homeomorphism label from certified invariants, following the
/// classification results the constructions rely on. Falls back to
/// `unclassified`.
pub fn classify_homeomorphism(b: &BettiData, rec: &InvariantRecord, g: &GroupIdentification) -> ClassificationLabel {
    let parity = rec.parity();
    let label = |label: String, basis: &str| ClassificationLabel {
        label,
        basis: basis.into(),
    };
    match g.tag {
        GroupTag::Unknown => ClassificationLabel::unclassified("fundamental group not certified"),
        GroupTag::Trivial => match form_label(b, parity) {
            Some(l) if l.is_empty() => label("S4".into(), "Freedman"),
            Some(l) => label(l, "Freedman"),
            None => ClassificationLabel::unclassified("form parity unknown or even with nonzero signature"),
        },
        GroupTag::FreeOfRank(1) if b.b1 == 1 => match form_label(b, parity) {
            Some(l) => label(
                with_tail(l, "S3xS1"),
                "Hambleton-Teichner (infinite cyclic fundamental group)",
            ),
            None => ClassificationLabel::unclassified("form parity unknown"),
        },
        GroupTag::FiniteCyclic(p) => match form_label(b, parity) {
            Some(l) => label(
                with_tail(l, &format!("LpxS1~({p})")),
                "Hambleton-Kreck (finite cyclic fundamental group)",
            ),
            None => ClassificationLabel::unclassified("form parity unknown"),
        },
        GroupTag::FreeAbelianTimesCyclic(p) => {
            let base = if p == 0 { "T2xS2".to_string() } else { format!("LpxS1({p})") };
            let base_b2 = if p == 0 { 2 } else { 0 };
            let extra_plus = b.b2_plus.checked_sub(base_b2 / 2);
            let extra_minus = b.b2_minus.checked_sub(base_b2 / 2);
            match (extra_plus, extra_minus, parity) {
                (Some(0), Some(0), _) => label(base, "lens space product (cited, not re-proved)"),
                (Some(0), Some(k), Some(Parity::Odd)) => label(
                    format!("{base} # {}", sum_label(&[(k, "CP2bar", false)])),
                    "lens space product blown up (cited, not re-proved)",
                ),
                _ => ClassificationLabel::unclassified("no classification rule for this form"),
            }
        }
        _ => ClassificationLabel::unclassified("no classification rule for this fundamental group"),
    }
}

/// Almost-complex existence for simply connected manifolds: iff `b2+` is
/// odd. Unknown otherwise.
pub fn almost_complex_check(b: &BettiData, g: &GroupIdentification) -> TriState {
    match g.tag {
        GroupTag::Trivial if b.b2_plus % 2 == 1 => TriState::Yes,
        GroupTag::Trivial => TriState::No,
        _ => TriState::Unknown,
    }
}

/// Compares invariants of a claimed label with computed ones. Returns a
/// human-readable description of every mismatch.
pub fn label_discrepancies(label: &str, euler: i64, signature: i64, b1: u32) -> Result<Vec<String>, InvariantError> {
    let (rec, betti) = connected_sum_invariants(&parse_label(label)?)?;
    let mut out = Vec::new();
    if rec.euler != euler {
        out.push(format!("e: claimed `{label}` has e = {}, computed e = {euler}", rec.euler));
    }
    if rec.signature != signature {
        out.push(format!(
            "sigma: claimed `{label}` has sigma = {}, computed sigma = {signature}",
            rec.signature
        ));
    }
    if betti.b1 != b1 {
        out.push(format!("b1: claimed `{label}` has b1 = {}, computed b1 = {b1}", betti.b1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Presentation, GroupIdentification};

    fn ident(tag: GroupTag) -> GroupIdentification {
        GroupIdentification {
            tag,
            evidence: vec![],
            simplified: Presentation::free(Vec::<String>::new()),
            abelianization: AbelianInvariants::default(),
            cosets: None,
        }
    }

    /// Per-piece table summed by hand: the additivity oracle.
    fn additive_oracle(pieces: &[(i64, i64, u32, u32, &str)]) -> (i64, i64, u32, u32) {
        let k = pieces.iter().map(|p| p.3).sum::<u32>() as i64;
        let e = pieces.iter().map(|p| p.0 * p.3 as i64).sum::<i64>() - 2 * (k - 1);
        let s = pieces.iter().map(|p| p.1 * p.3 as i64).sum();
        let b1 = pieces.iter().map(|p| p.2 * p.3).sum();
        (e, s, b1, k as u32)
    }

    #[test]
    fn three_copies_of_s2xs2() {
        let (rec, b) = connected_sum_invariants(&[(Piece::S2xS2, 3)]).unwrap();
        let (e, s, _, _) = additive_oracle(&[(4, 0, 0, 3, "S2xS2")]);
        assert_eq!((rec.euler, rec.signature, b.b2), (e, s, 6));
        assert_eq!((rec.euler, rec.signature), (8, 0));
        assert_eq!(rec.parity(), Some(Parity::Even));
    }

    #[test]
    fn three_cp2_four_cp2bar() {
        let (rec, b) = connected_sum_invariants(&[(Piece::CP2, 3), (Piece::CP2bar, 4)]).unwrap();
        assert_eq!((rec.euler, rec.signature, b.b2), (9, -1, 7));
        assert_eq!(rec.parity(), Some(Parity::Odd));
    }

    #[test]
    fn s3xs1_alone() {
        let (rec, b) = connected_sum_invariants(&[(Piece::S3xS1, 1)]).unwrap();
        assert_eq!((rec.euler, rec.signature, b.b1), (0, 0, 1));
    }

    #[test]
    fn rejects_unknown_and_empty() {
        assert_eq!(Piece::parse("K3"), Err(InvariantError::UnknownPiece("K3".into())));
        assert_eq!(connected_sum_invariants(&[]), Err(InvariantError::EmptySum));
    }

    #[test]
    fn sum_is_permutation_invariant_and_glues_with_minus_two() {
        let a = [(Piece::S2xS2, 2), (Piece::CP2, 1)];
        let b = [(Piece::S3xS1, 1), (Piece::CP2bar, 2)];
        let ab: Vec<_> = a.iter().chain(b.iter()).copied().collect();
        let ba: Vec<_> = b.iter().chain(a.iter()).copied().collect();
        let (ra, _) = connected_sum_invariants(&a).unwrap();
        let (rb, _) = connected_sum_invariants(&b).unwrap();
        let (rab, bab) = connected_sum_invariants(&ab).unwrap();
        let (rba, bba) = connected_sum_invariants(&ba).unwrap();
        assert_eq!((rab, bab), (rba, bba));
        assert_eq!(rab.euler, ra.euler + rb.euler - 2);
    }

    #[test]
    fn betti_examples() {
        let z0 = AbelianInvariants::default();
        let z1 = AbelianInvariants { torsion: vec![], free_rank: 1 };
        let z4 = AbelianInvariants { torsion: vec![], free_rank: 4 };
        let b = betti_from_euler(4, &z0, 0).unwrap();
        assert_eq!((b.b1, b.b2, b.b2_plus, b.b2_minus), (0, 2, 1, 1));
        let b = betti_from_euler(0, &z1, 0).unwrap();
        assert_eq!((b.b1, b.b2), (1, 0));
        let b = betti_from_euler(0, &z4, 0).unwrap();
        assert_eq!((b.b1, b.b2), (4, 6));
        assert!(betti_from_euler(0, &z0, 0).is_err());
        assert!(betti_from_euler(4, &z0, 1).is_err());
        assert!(betti_from_euler(4, &z0, 4).is_err());
    }

    #[test]
    fn classification_examples() {
        let (rec, b) = connected_sum_invariants(&[(Piece::S2xS2, 1)]).unwrap();
        let l = classify_homeomorphism(&b, &rec, &ident(GroupTag::Trivial));
        assert_eq!(l.label, "1(S2xS2)");
        assert_eq!(l.basis, "Freedman");

        let (rec, b) = connected_sum_invariants(&[(Piece::CP2, 3), (Piece::CP2bar, 4)]).unwrap();
        assert_eq!(classify_homeomorphism(&b, &rec, &ident(GroupTag::Trivial)).label, "3 CP2 # 4 CP2bar");

        let rec = InvariantRecord::even(6, 3);
        let b = BettiData { b1: 1, b2: 6, b2_plus: 3, b2_minus: 3 };
        let l = classify_homeomorphism(&b, &rec, &ident(GroupTag::FreeOfRank(1)));
        assert_eq!(l.label, "3(S2xS2) # S3xS1");

        assert!(!classify_homeomorphism(&b, &rec, &ident(GroupTag::Unknown)).is_classified());
        assert!(!classify_homeomorphism(&b, &rec, &ident(GroupTag::SurfaceGroup(2))).is_classified());
    }

    #[test]
    fn almost_complex_parity_rule() {
        let (_, b1) = connected_sum_invariants(&[(Piece::S2xS2, 1)]).unwrap();
        let (_, b2) = connected_sum_invariants(&[(Piece::S2xS2, 2)]).unwrap();
        assert_eq!(almost_complex_check(&b1, &ident(GroupTag::Trivial)), TriState::Yes);
        assert_eq!(almost_complex_check(&b2, &ident(GroupTag::Trivial)), TriState::No);
        assert_eq!(almost_complex_check(&b1, &ident(GroupTag::FreeOfRank(1))), TriState::Unknown);
    }

    #[test]
    fn labels_round_trip_through_connected_sums() {
        let cases: Vec<(Vec<(Piece, u32)>, GroupTag)> = vec![
            (vec![(Piece::S2xS2, 1)], GroupTag::Trivial),
            (vec![(Piece::S2xS2, 5)], GroupTag::Trivial),
            (vec![(Piece::CP2, 3), (Piece::CP2bar, 4)], GroupTag::Trivial),
            (vec![(Piece::CP2bar, 2)], GroupTag::Trivial),
            (vec![(Piece::S2xS2, 4), (Piece::S3xS1, 1)], GroupTag::FreeOfRank(1)),
            (vec![(Piece::CP2, 1), (Piece::CP2bar, 3), (Piece::S3xS1, 1)], GroupTag::FreeOfRank(1)),
            (vec![(Piece::LpxS1(5), 1)], GroupTag::FreeAbelianTimesCyclic(5)),
            (vec![(Piece::LpxS1(3), 1), (Piece::CP2bar, 2)], GroupTag::FreeAbelianTimesCyclic(3)),
            (vec![(Piece::T2xS2, 1)], GroupTag::FreeAbelianTimesCyclic(0)),
            (vec![(Piece::S2xS2, 3), (Piece::LpxS1Tilde(5), 1)], GroupTag::FiniteCyclic(5)),
        ];
        for (pieces, tag) in cases {
            let (rec, b) = connected_sum_invariants(&pieces).unwrap();
            let l = classify_homeomorphism(&b, &rec, &ident(tag));
            assert!(l.is_classified(), "{pieces:?}");
            let (rec2, b2) = connected_sum_invariants(&parse_label(&l.label).unwrap()).unwrap();
            assert_eq!(
                (rec2.euler, rec2.signature, b2.b1, rec2.parity()),
                (rec.euler, rec.signature, b.b1, rec.parity()),
                "{}",
                l.label
            );
        }
    }

    #[test]
    fn claimed_label_mismatch_is_reported() {
        // g = 3: computed e = 4g - 4 = 8 against a literal 2g = 6 copies.
        let d = label_discrepancies("6(S2xS2) # S3xS1", 8, 0, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("e = 12") || d[0].contains("has e ="));
        assert!(label_discrepancies("4(S2xS2) # S3xS1", 8, 0, 1).unwrap().is_empty());
    }
}
