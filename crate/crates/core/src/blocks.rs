//! Catalogued building blocks: complement presentations, torus catalogs
//! with meridian and pushoff words, and starting invariants.

use std::fmt;

use serde::Serialize;

use crate::group::{commutator_word, parse_word_in, FreeWord, GroupError, Presentation, WordParseError};
use crate::invariants::{InvariantRecord, TriState};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("unsupported block: {0}")]
    Unsupported(String),
    #[error("malformed external block: {0}")]
    MalformedExternal(String),
    #[error("bad word `{word}`: {source}")]
    Word { word: String, source: WordParseError },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unknown torus `{0}`")]
    UnknownTorus(String),
    #[error("torus `{id}` is {status}, not available")]
    NotAvailable { id: String, status: TorusStatus },
    #[error("cannot perturb: structure is {0}, not symplectic")]
    NotSymplectic(Structure),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Lagrangian,
    Symplectic,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Lagrangian => "lagrangian",
            Geometry::Symplectic => "symplectic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TorusStatus {
    Available,
    Surgered { p: i32, q: i32, r: i32 },
    ConsumedBySum,
}

impl fmt::Display for TorusStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusStatus::Available => write!(f, "available"),
            TorusStatus::Surgered { p, q, r } => write!(f, "surgered ({p},{q},{r})"),
            TorusStatus::ConsumedBySum => write!(f, "consumed by a fiber sum"),
        }
    }
}

/// A catalogued surface (almost always a torus) in a block. Words are in
/// the generators of the owning state's presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusDescriptor {
    pub id: String,
    /// Geometric description, e.g. `a1 x c1`.
    pub label: String,
    pub m: FreeWord,
    pub l: FreeWord,
    pub mu: FreeWord,
    pub geometry: Geometry,
    /// Name of the geometrically dual surface, when recorded.
    pub dual: Option<String>,
    pub essential: bool,
    /// 1 for tori; fiber sums along higher-genus surfaces use this.
    pub genus: u32,
    pub status: TorusStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Symplectic,
    TwistedGc { loci: u32 },
    Unknown,
}

impl Structure {
    pub fn loci(&self) -> Option<u32> {
        match self {
            Structure::Symplectic => Some(0),
            Structure::TwistedGc { loci } => Some(*loci),
            Structure::Unknown => None,
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Symplectic => write!(f, "symplectic"),
            Structure::TwistedGc { .. } => write!(f, "twisted-gc"),
            Structure::Unknown => write!(f, "unknown"),
        }
    }
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A 4-manifold under construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldState {
    /// Presentation of pi1 of the complement of every catalogued torus that
    /// is still available or has been surgered.
    pub presentation: Presentation,
    pub tori: Vec<TorusDescriptor>,
    pub record: InvariantRecord,
    pub structure: Structure,
    pub history: Vec<String>,
    /// Provenance notes carried into the final report.
    pub notes: Vec<String>,
    /// Spin value before each tracked blow-up, most recent last.
    pub blowup_stack: Vec<TriState>,
}

impl ManifoldState {
    pub fn torus(&self, id: &str) -> Result<&TorusDescriptor, BlockError> {
        self.tori
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| BlockError::UnknownTorus(id.to_string()))
    }

    pub(crate) fn torus_index(&self, id: &str) -> Result<usize, BlockError> {
        self.tori
            .iter()
            .position(|t| t.id == id)
            .ok_or_else(|| BlockError::UnknownTorus(id.to_string()))
    }

    pub(crate) fn available_index(&self, id: &str) -> Result<usize, BlockError> {
        let i = self.torus_index(id)?;
        match self.tori[i].status {
            TorusStatus::Available => Ok(i),
            status => Err(BlockError::NotAvailable {
                id: id.to_string(),
                status,
            }),
        }
    }

    /// Pi1 of the closed manifold obtained by regluing every available torus
    /// trivially, i.e. adding its meridian as a relator.
    pub fn filled_presentation(&self) -> Presentation {
        let fill: Vec<FreeWord> = self
            .tori
            .iter()
            .filter(|t| t.status == TorusStatus::Available && !t.mu.is_identity())
            .map(|t| t.mu.clone())
            .collect();
        self.presentation.quotient(&fill).expect("catalog words are validated")
    }
}

/// Block kinds that can be instantiated from the catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `Sigma_2 x Sigma_g` for `g >= 2`; `twelve` selects the twelve-torus
    /// catalog (only for `g = 3`).
    ProductSurfaces { g: u32, h: u32, twelve: bool },
    T2xSigma { g: u32 },
    FourTorus,
    T2xS2,
    External(ExternalBlock),
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockKind::ProductSurfaces { g, h, twelve: false } => write!(f, "product_surfaces({g}, {h})"),
            BlockKind::ProductSurfaces { g, h, twelve: true } => write!(f, "product_surfaces({g}, {h}, twelve)"),
            BlockKind::T2xSigma { g } => write!(f, "t2_x_sigma({g})"),
            BlockKind::FourTorus => write!(f, "four_torus"),
            BlockKind::T2xS2 => write!(f, "t2_x_s2"),
            BlockKind::External(_) => write!(f, "external"),
        }
    }
}

/// A torus entry of an external declaration; words are kept as text until
/// the presentation is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalTorus {
    pub id: String,
    pub geometry: Geometry,
    pub genus: u32,
    pub essential: bool,
    pub m: String,
    pub l: String,
    pub mu: String,
}

/// A user-declared block whose data is trusted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExternalBlock {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub tori: Vec<ExternalTorus>,
    pub euler: Option<i64>,
    pub signature: Option<i64>,
    pub hyperbolic: Option<u32>,
    pub plus_one: Option<u32>,
    pub minus_one: Option<u32>,
    pub spin: Option<TriState>,
    pub symplectic: bool,
    pub trust: Vec<String>,
}

fn word(text: &str, names: &[String]) -> Result<FreeWord, BlockError> {
    parse_word_in(text, names).map_err(|source| BlockError::Word {
        word: text.to_string(),
        source,
    })
}

/// Catalog row: id, description, m, l, mu.
type Row = (String, String, String, String, String);

fn row(id: impl Into<String>, label: impl Into<String>, m: impl Into<String>, l: impl Into<String>, mu: impl Into<String>) -> Row {
    (id.into(), label.into(), m.into(), l.into(), mu.into())
}

fn build(
    names: Vec<String>,
    relators: &[String],
    rows: &[Row],
    geometry: impl Fn(&str) -> Geometry,
    dual: impl Fn(&str) -> Option<String>,
    record: InvariantRecord,
) -> Result<ManifoldState, BlockError> {
    let rels = relators.iter().map(|r| word(r, &names)).collect::<Result<Vec<_>, _>>()?;
    let presentation = Presentation::new(names, rels)?;
    let names = presentation.names();
    let tori = rows
        .iter()
        .map(|(id, label, m, l, mu)| {
            Ok(TorusDescriptor {
                id: id.clone(),
                label: label.clone(),
                m: word(m, names)?,
                l: word(l, names)?,
                mu: word(mu, names)?,
                geometry: geometry(id),
                dual: dual(label),
                essential: true,
                genus: 1,
                status: TorusStatus::Available,
            })
        })
        .collect::<Result<Vec<_>, BlockError>>()?;
    Ok(ManifoldState {
        presentation,
        tori,
        record,
        structure: Structure::Symplectic,
        history: Vec::new(),
        notes: Vec::new(),
        blowup_stack: Vec::new(),
    })
}

fn product_dual(label: &str) -> Option<String> {
    // a_i x c_j <-> b_i x d_j and b_i x c_j <-> a_i x d_j.
    let (left, right) = label.split_once(" x ")?;
    let swap = |s: &str, from: char, to: char| s.strip_prefix(from).map(|rest| format!("{to}{rest}"));
    let l = swap(left, 'a', 'b').or_else(|| swap(left, 'b', 'a'))?;
    let r = swap(right, 'c', 'd').or_else(|| swap(right, 'd', 'c'))?;
    Some(format!("{l} x {r}"))
}

fn surface_relator(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(a, b)| format!("[{a}, {b}]")).collect::<Vec<_>>().join(" ")
}

fn sigma2_names(h: u32) -> (Vec<String>, Vec<String>) {
    let mut names: Vec<String> = ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect();
    for j in 1..=h {
        names.push(format!("c{j}"));
        names.push(format!("d{j}"));
    }
    let first = surface_relator(&[("a1".into(), "b1".into()), ("a2".into(), "b2".into())]);
    let pairs: Vec<(String, String)> = (1..=h).map(|j| (format!("c{j}"), format!("d{j}"))).collect();
    (names, vec![first, surface_relator(&pairs)])
}

fn sigma2_x_sigma2_rows() -> Vec<Row> {
    vec![
        row("T1", "a1 x c1", "a1", "c1", "[b1^-1, d1^-1]"),
        row("T2", "a1 x c2", "a1", "c2", "[b1^-1, d2^-1]"),
        row("T3", "a2 x c1", "a2", "c1", "[b2^-1, d1^-1]"),
        row("T4", "a2 x c2", "a2", "c2", "[b2^-1, d2^-1]"),
        row("T5", "b1 x c1", "b1", "d1 c1 d1^-1", "[a1^-1, d1]"),
        row("T6", "b2 x c2", "b2", "d2 c2 d2^-1", "[a2^-1, d2]"),
        row("T7", "a2 x d1", "b2 a2 b2^-1", "d1", "[b2, c1^-1]"),
        row("T8", "a1 x d2", "b1 a1 b1^-1", "d2", "[b1, c2^-1]"),
    ]
}

/// The `4 + 2g` torus catalog of `Sigma_2 x Sigma_g`, `g >= 3`, arranged so
/// that `T_k` carries the relation that kills the `k`-th generator in the
/// order `a1, b1, a2, b2, c1, d1, c2, d2, c3, d3, ...`. Entries past `T8`
/// follow the `g = 3` pattern.
fn sigma2_x_sigma_g_rows(g: u32) -> Vec<Row> {
    let mut rows = vec![
        row("T1", "a1 x c1", "a1", "c1", "[b1^-1, d1^-1]"),
        row("T2", "b1 x c1", "b1", "d1 c1 d1^-1", "[a1^-1, d1]"),
        row("T3", "a2 x c2", "a2", "c2", "[b2^-1, d2^-1]"),
        row("T4", "b2 x c2", "b2", "d2 c2 d2^-1", "[a2^-1, d2]"),
        row("T5", "a2 x c1", "a2", "c1", "[b2^-1, d1^-1]"),
        row("T6", "a2 x d1", "b2 a2 b2^-1", "d1", "[b2, c1^-1]"),
        row("T7", "a1 x c2", "a1", "c2", "[b1^-1, d2^-1]"),
        row("T8", "a1 x d2", "b1 a1 b1^-1", "d2", "[b1, c2^-1]"),
    ];
    for j in 3..=g {
        rows.push(row(
            format!("T{}", 2 * j + 3),
            format!("b1 x c{j}"),
            "b1",
            format!("c{j}"),
            format!("[a1^-1, d{j}^-1]"),
        ));
        rows.push(row(
            format!("T{}", 2 * j + 4),
            format!("b2 x d{j}"),
            "b2",
            format!("d{j}"),
            format!("[a2^-1, c{j}^-1]"),
        ));
    }
    rows
}

fn sigma2_x_sigma3_twelve_rows() -> Vec<Row> {
    let mut rows = Vec::new();
    for (i, a) in [(0, "1"), (1, "2")] {
        for j in 1..=3 {
            rows.push(row(
                format!("T{}", 3 * i + j),
                format!("a{a} x c{j}"),
                format!("a{a}"),
                format!("c{j}"),
                format!("[b{a}^-1, d{j}^-1]"),
            ));
        }
    }
    rows.extend([
        row("T7", "b1 x c1", "b1", "d1 c1 d1^-1", "[a1^-1, d1]"),
        row("T8", "b2 x c2", "b2", "d2 c2 d2^-1", "[a2^-1, d2]"),
        row("T9", "a2 x d1", "b2 a2 b2^-1", "d1", "[b2, c1^-1]"),
        row("T10", "a1 x d2", "b1 a1 b1^-1", "d2", "[b1, c2^-1]"),
        row("T11", "a1 x d3", "b1 a1 b1^-1", "d3", "[b1, c3^-1]"),
        row("T12", "a2 x d3", "b2 a2 b2^-1", "d3", "[b2, c3^-1]"),
    ]);
    rows
}

fn product_surfaces(g: u32, h: u32, twelve: bool) -> Result<ManifoldState, BlockError> {
    if g != 2 || h < 2 || (twelve && h != 3) {
        return Err(BlockError::Unsupported(format!(
            "product_surfaces({g}, {h}{}): supported are (2, h) with h >= 2, and the twelve-torus variant of (2, 3)",
            if twelve { ", twelve" } else { "" }
        )));
    }
    let (names, rels) = sigma2_names(h);
    let rows = match (h, twelve) {
        (2, _) => sigma2_x_sigma2_rows(),
        (3, true) => sigma2_x_sigma3_twelve_rows(),
        _ => sigma2_x_sigma_g_rows(h),
    };
    // e = (2 - 2g)(2 - 2h); the form is even with 4h + 1 hyperbolic summands.
    let euler = (2 - 2 * g as i64) * (2 - 2 * h as i64);
    let mut s = build(
        names,
        &rels,
        &rows,
        |_| Geometry::Lagrangian,
        product_dual,
        InvariantRecord::even(euler, 4 * h + 1),
    )?;
    if h >= 3 && !twelve {
        s.notes.push(format!(
            "torus catalog for Sigma_2 x Sigma_{h} extrapolated from the genus-3 pattern"
        ));
    }
    Ok(s)
}

/// `T^2 x Sigma_g` with its `2g` Lagrangian tori and the symplectic fiber
/// `{t} x Sigma_g` (id `S`, genus `g`, meridian `[x, y]`).
fn t2_x_sigma(g: u32) -> Result<ManifoldState, BlockError> {
    if g == 0 {
        return Err(BlockError::Unsupported("t2_x_sigma(0): genus must be at least 1".into()));
    }
    let mut names: Vec<String> = vec!["x".into(), "y".into()];
    for i in 1..=g {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    let mut rels = Vec::new();
    for i in 1..=g {
        rels.push(format!("[x, a{i}]"));
        rels.push(format!("[y, a{i}]"));
        rels.push(format!("[y, b{i} a{i} b{i}^-1]"));
    }
    rels.push("[x, y]".into());
    let pairs: Vec<(String, String)> = (1..=g).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
    rels.push(surface_relator(&pairs));
    let mut rows = Vec::new();
    for i in 1..=g {
        rows.push(row(format!("T{}", 2 * i - 1), format!("x x a{i}"), "x", format!("a{i}"), format!("[b{i}^-1, y^-1]")));
        rows.push(row(
            format!("T{}", 2 * i),
            format!("y x a{i}"),
            "y",
            format!("b{i} a{i} b{i}^-1"),
            format!("[x^-1, b{i}]"),
        ));
    }
    let dual = |label: &str| {
        let (l, r) = label.split_once(" x ")?;
        let l = if l == "x" { "y" } else { "x" };
        Some(format!("{l} x {}", r.replacen('a', "b", 1)))
    };
    let mut s = build(names, &rels, &rows, |_| Geometry::Lagrangian, dual, InvariantRecord::even(0, 2 * g + 1))?;
    s.tori.push(TorusDescriptor {
        id: "S".into(),
        label: format!("{{t}} x Sigma_{g}"),
        m: FreeWord::generator(2),
        l: FreeWord::generator(3),
        mu: commutator_word(&FreeWord::generator(0), &FreeWord::generator(1)),
        geometry: Geometry::Symplectic,
        dual: Some("T2 x {s}".to_string()),
        essential: true,
        genus: g,
        status: TorusStatus::Available,
    });
    Ok(s)
}

fn four_torus() -> Result<ManifoldState, BlockError> {
    let names: Vec<String> = ["x", "y", "a", "b"].iter().map(|s| s.to_string()).collect();
    let rels = ["[x, a]", "[y, a]", "[a, b]"].map(String::from);
    let rows = [
        row("T1", "x x a", "x", "a", "[b^-1, y^-1]"),
        row("T2", "y x a", "y", "b a b^-1", "[x^-1, b]"),
        row("T3", "a x b", "a", "b", "[x, y]"),
    ];
    let duals = |label: &str| {
        Some(
            match label {
                "x x a" => "y x b",
                "y x a" => "x x b",
                _ => "x x y",
            }
            .to_string(),
        )
    };
    build(
        names,
        &rels,
        &rows,
        |id| if id == "T3" { Geometry::Symplectic } else { Geometry::Lagrangian },
        duals,
        InvariantRecord::even(0, 3),
    )
}

/// `T^2 x S^2` with the symplectic torus `T = T^2 x {s}`; its meridian
/// bounds the normal disk in `S^2`, so it is trivial.
fn t2_x_s2() -> Result<ManifoldState, BlockError> {
    let names: Vec<String> = vec!["x".into(), "y".into()];
    let rows = [row("T", "T2 x {s}", "x", "y", "1")];
    build(
        names,
        &["[x, y]".to_string()],
        &rows,
        |_| Geometry::Symplectic,
        |_| Some("{t} x S2".into()),
        InvariantRecord::even(0, 1),
    )
}

fn external(decl: &ExternalBlock) -> Result<ManifoldState, BlockError> {
    let bad = |m: &str| BlockError::MalformedExternal(m.to_string());
    let euler = decl.euler.ok_or_else(|| bad("missing `euler`"))?;
    let signature = decl.signature.ok_or_else(|| bad("missing `signature`"))?;
    if (euler - signature).rem_euclid(2) != 0 {
        return Err(bad(&format!("euler {euler} and signature {signature} have different parity")));
    }
    let mut seen = std::collections::BTreeSet::new();
    for g in &decl.generators {
        if !seen.insert(g) {
            return Err(bad(&format!("generator `{g}` declared twice")));
        }
    }
    let mut ids = std::collections::BTreeSet::new();
    for t in &decl.tori {
        if !ids.insert(&t.id) {
            return Err(bad(&format!("torus `{}` declared twice", t.id)));
        }
    }
    let record = InvariantRecord {
        euler,
        signature,
        hyperbolic: decl.hyperbolic,
        plus_one: decl.plus_one,
        minus_one: decl.minus_one,
        spin: decl.spin.unwrap_or(TriState::Unknown),
    };
    if !record.is_consistent() {
        return Err(bad("declared form summands contradict signature or spin"));
    }
    let rels = decl.relators.iter().map(|r| word(r, &decl.generators)).collect::<Result<Vec<_>, _>>()?;
    let presentation = Presentation::new(decl.generators.clone(), rels)?;
    let tori = decl
        .tori
        .iter()
        .map(|t| {
            Ok(TorusDescriptor {
                id: t.id.clone(),
                label: t.id.clone(),
                m: word(&t.m, &decl.generators)?,
                l: word(&t.l, &decl.generators)?,
                mu: word(&t.mu, &decl.generators)?,
                geometry: t.geometry,
                dual: None,
                essential: t.essential,
                genus: t.genus,
                status: TorusStatus::Available,
            })
        })
        .collect::<Result<Vec<_>, BlockError>>()?;
    let mut notes: Vec<String> = decl.trust.iter().map(|t| format!("trusted: {t}")).collect();
    notes.insert(0, "external block: declared data is trusted, only checked for consistency".into());
    Ok(ManifoldState {
        presentation,
        tori,
        record,
        structure: if decl.symplectic { Structure::Symplectic } else { Structure::Unknown },
        history: Vec::new(),
        notes,
        blowup_stack: Vec::new(),
    })
}

/// Builds a fresh state for `kind`.
pub fn instantiate_block(kind: &BlockKind) -> Result<ManifoldState, BlockError> {
    let mut s = match kind {
        BlockKind::ProductSurfaces { g, h, twelve } => product_surfaces(*g, *h, *twelve)?,
        BlockKind::T2xSigma { g } => t2_x_sigma(*g)?,
        BlockKind::FourTorus => four_torus()?,
        BlockKind::T2xS2 => t2_x_s2()?,
        BlockKind::External(decl) => external(decl)?,
    };
    s.history.push(format!("block {kind}"));
    Ok(s)
}

/// Makes the listed Lagrangian tori symplectic. Already-symplectic tori are
/// left alone and reported in the returned warnings.
pub fn perturb_tori(s: &ManifoldState, ids: &[String]) -> Result<(ManifoldState, Vec<String>), BlockError> {
    let mut out = s.clone();
    let mut warnings = Vec::new();
    if ids.is_empty() {
        return Ok((out, warnings));
    }
    if s.structure != Structure::Symplectic {
        return Err(BlockError::NotSymplectic(s.structure));
    }
    for id in ids {
        let i = out.available_index(id)?;
        if out.tori[i].geometry == Geometry::Symplectic {
            warnings.push(format!("torus {id} is already symplectic"));
        }
        out.tori[i].geometry = Geometry::Symplectic;
    }
    out.history.push(format!("perturb [{}]", ids.join(", ")));
    Ok((out, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelianize, AbelianInvariants};

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn rank(s: &ManifoldState) -> AbelianInvariants {
        abelianize(&s.filled_presentation())
    }

    #[test]
    fn sigma2_x_sigma2_catalog() {
        let s = instantiate_block(&BlockKind::ProductSurfaces { g: 2, h: 2, twelve: false }).unwrap();
        assert_eq!(s.tori.len(), 8);
        assert_eq!(s.presentation.names(), &ids(&["a1", "b1", "a2", "b2", "c1", "d1", "c2", "d2"]));
        assert_eq!((s.record.euler, s.record.signature, s.record.hyperbolic), (4, 0, Some(9)));
        assert_eq!(rank(&s), AbelianInvariants { torsion: vec![], free_rank: 8 });
        let t1 = s.torus("T1").unwrap();
        assert_eq!(t1.mu.display_with(s.presentation.names()).to_string(), "b1^-1 d1^-1 b1 d1");
        assert_eq!(t1.dual.as_deref(), Some("b1 x d1"));
        assert_eq!(s.torus("T7").unwrap().dual.as_deref(), Some("b2 x c1"));
        assert!(s.tori.iter().all(|t| t.geometry == Geometry::Lagrangian));
    }

    #[test]
    fn product_blocks_have_product_euler_and_full_h1() {
        for h in 2..=6u32 {
            let s = instantiate_block(&BlockKind::ProductSurfaces { g: 2, h, twelve: false }).unwrap();
            assert_eq!(s.record.euler, -2 * (2 - 2 * h as i64));
            assert_eq!(rank(&s).free_rank, 4 + 2 * h as usize);
            let expected_tori = if h == 2 { 8 } else { 4 + 2 * h as usize };
            assert_eq!(s.tori.len(), expected_tori);
            assert_eq!(s.record.b2(), Some(8 * h + 2));
        }
        let s = instantiate_block(&BlockKind::ProductSurfaces { g: 2, h: 3, twelve: true }).unwrap();
        assert_eq!(s.tori.len(), 12);
        assert!(s.notes.is_empty());
        assert!(instantiate_block(&BlockKind::ProductSurfaces { g: 3, h: 3, twelve: false }).is_err());
        assert!(instantiate_block(&BlockKind::ProductSurfaces { g: 2, h: 4, twelve: true }).is_err());
    }

    #[test]
    fn four_torus_catalog() {
        let s = instantiate_block(&BlockKind::FourTorus).unwrap();
        assert_eq!(s.tori.len(), 3);
        assert_eq!(s.torus("T3").unwrap().geometry, Geometry::Symplectic);
        assert_eq!(s.torus("T1").unwrap().geometry, Geometry::Lagrangian);
        assert_eq!((s.record.euler, s.record.signature), (0, 0));
        assert_eq!(rank(&s).free_rank, 4);
    }

    #[test]
    fn t2_x_sigma_catalog() {
        for g in 1..=4u32 {
            let s = instantiate_block(&BlockKind::T2xSigma { g }).unwrap();
            assert_eq!(s.tori.iter().filter(|t| t.id != "S").count(), 2 * g as usize);
            assert_eq!(s.record.euler, 0);
            assert_eq!(rank(&s).free_rank, 2 * g as usize + 2);
        }
    }

    #[test]
    fn perturbation_rules() {
        let s = instantiate_block(&BlockKind::ProductSurfaces { g: 2, h: 2, twelve: false }).unwrap();
        let (p, w) = perturb_tori(&s, &ids(&["T5", "T6", "T7", "T8"])).unwrap();
        assert!(w.is_empty());
        assert_eq!(p.tori.iter().filter(|t| t.geometry == Geometry::Symplectic).count(), 4);
        assert_eq!(p.record, s.record);
        let (same, _) = perturb_tori(&s, &[]).unwrap();
        assert_eq!(same, s);
        let (_, w) = perturb_tori(&p, &ids(&["T5"])).unwrap();
        assert_eq!(w.len(), 1);
        let mut surgered = s.clone();
        surgered.tori[0].status = TorusStatus::Surgered { p: 1, q: 0, r: 0 };
        assert!(matches!(
            perturb_tori(&surgered, &ids(&["T1"])),
            Err(BlockError::NotAvailable { .. })
        ));
        assert!(matches!(perturb_tori(&s, &ids(&["T9"])), Err(BlockError::UnknownTorus(_))));
    }

    #[test]
    fn external_validation() {
        let mut decl = ExternalBlock {
            generators: ids(&["s", "t", "u"]),
            relators: vec!["[s, t]".into()],
            tori: vec![ExternalTorus {
                id: "Y0".into(),
                geometry: Geometry::Symplectic,
                genus: 1,
                essential: true,
                m: "s".into(),
                l: "t".into(),
                mu: "u".into(),
            }],
            euler: Some(0),
            signature: Some(0),
            symplectic: true,
            ..ExternalBlock::default()
        };
        let s = instantiate_block(&BlockKind::External(decl.clone())).unwrap();
        assert_eq!(s.structure, Structure::Symplectic);
        decl.signature = Some(1);
        assert!(matches!(
            instantiate_block(&BlockKind::External(decl.clone())),
            Err(BlockError::MalformedExternal(_))
        ));
        decl.signature = Some(0);
        decl.relators.push("[s, w]".into());
        assert!(matches!(instantiate_block(&BlockKind::External(decl)), Err(BlockError::Word { .. })));
    }
}
