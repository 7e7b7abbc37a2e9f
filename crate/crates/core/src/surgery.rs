//! Torus surgery, symplectic fiber sums, blow-ups and blow-downs, and
//! the final report of a constructed manifold.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::blocks::{BlockError, Geometry, ManifoldState, Structure, TorusStatus};
use crate::group::{identify_group, parse_word_in, AbelianInvariants, Budgets, FreeWord, GroupIdentification, Presentation};
use crate::invariants::{
    almost_complex_check, betti_from_euler, classify_homeomorphism, label_discrepancies, BettiData, ClassificationLabel,
    InvariantError, InvariantRecord, Parity, TriState,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("surgery coefficients (0,0,0) do not describe a regluing")]
    Degenerate,
    #[error("fiber sum: {0}")]
    BadSum(String),
    #[error("blow-up needs a symplectic or twisted generalized complex structure, found {0}")]
    NoStructure(Structure),
    #[error("blow-down needs a tracked <-1> summand")]
    NoExceptionalClass,
    #[error("blow-down needs a twisted generalized complex structure, found {0}")]
    NotTwisted(Structure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgerySpec {
    pub torus: String,
    pub p: i32,
    pub q: i32,
    pub r: i32,
}

impl SurgerySpec {
    pub fn new(torus: impl Into<String>, p: i32, q: i32, r: i32) -> Self {
        SurgerySpec {
            torus: torus.into(),
            p,
            q,
            r,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.p == 0 && self.q == 0 && self.r.abs() == 1
    }
}

impl fmt::Display for SurgerySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({},{},{})", self.torus, self.p, self.q, self.r)
    }
}

/// Applies a `(p, q, r)` surgery: the relator `mu^r m^p l^q` is added.
///
/// Euler characteristic and signature never change. A nontrivial surgery on
/// an essential torus kills one hyperbolic summand.
pub fn torus_surgery(s: &ManifoldState, spec: &SurgerySpec) -> Result<ManifoldState, SurgeryError> {
    if (spec.p, spec.q, spec.r) == (0, 0, 0) {
        return Err(SurgeryError::Degenerate);
    }
    let i = s.available_index(&spec.torus)?;
    let t = &s.tori[i];
    let relator = t.mu.pow(spec.r).mul(&t.m.pow(spec.p)).mul(&t.l.pow(spec.q));
    let mut out = s.clone();
    out.presentation = s.presentation.quotient(&[relator]).map_err(BlockError::from)?;
    out.tori[i].status = TorusStatus::Surgered {
        p: spec.p,
        q: spec.q,
        r: spec.r,
    };
    out.history.push(format!("surgery {spec}"));
    if spec.is_trivial() {
        return Ok(out);
    }

    if t.essential {
        out.record.hyperbolic = match s.record.hyperbolic {
            Some(h) if h > 0 => Some(h - 1),
            _ => None,
        };
        if out.record.hyperbolic.is_none() {
            out.record.spin = TriState::Unknown;
        }
    } else {
        out.record.hyperbolic = None;
        out.record.spin = TriState::Unknown;
    }

    out.structure = match (spec.r, t.geometry, s.structure) {
        (_, _, Structure::Unknown) => Structure::Unknown,
        (0, Geometry::Symplectic, Structure::Symplectic) => Structure::TwistedGc { loci: 1 },
        (0, Geometry::Symplectic, Structure::TwistedGc { loci }) => Structure::TwistedGc { loci: loci + 1 },
        // Luttinger surgery keeps whatever structure is present.
        (1 | -1, Geometry::Lagrangian, current) => current,
        _ => Structure::Unknown,
    };
    debug_assert_eq!((out.record.euler, out.record.signature), (s.record.euler, s.record.signature));
    Ok(out)
}

fn fresh_name(base: &str, prefix: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    let mut candidate = format!("{prefix}.{base}");
    while taken.contains(&candidate) {
        candidate = format!("{prefix}.{candidate}");
    }
    candidate
}

/// Symplectic sum of `a` and `b` along `ta` and `tb`.
///
/// `ident` maps generator names of `a` to words in the generators of `b`;
/// the meridians are matched as `mu_a = mu_b`. Names of `b` that clash with
/// names of `a` (generators and tori) are prefixed with `b_name`.
pub fn symplectic_fiber_sum(
    a: &ManifoldState,
    ta: &str,
    b: &ManifoldState,
    tb: &str,
    ident: &[(String, String)],
    b_name: &str,
) -> Result<ManifoldState, SurgeryError> {
    let ia = a.available_index(ta)?;
    let ib = b.available_index(tb)?;
    let (sa, sb) = (&a.tori[ia], &b.tori[ib]);
    for (t, state) in [(sa, a), (sb, b)] {
        if t.geometry != Geometry::Symplectic {
            return Err(SurgeryError::BadSum(format!("surface {} is not symplectic", t.id)));
        }
        if state.structure != Structure::Symplectic {
            return Err(SurgeryError::BadSum(format!(
                "summand containing {} is {}, not symplectic",
                t.id, state.structure
            )));
        }
    }
    if sa.genus != sb.genus {
        return Err(SurgeryError::BadSum(format!(
            "genus mismatch: {} has genus {}, {} has genus {}",
            sa.id, sa.genus, sb.id, sb.genus
        )));
    }
    if ident.is_empty() {
        return Err(SurgeryError::BadSum("empty generator identification".into()));
    }

    let taken: BTreeSet<String> = a.presentation.names().iter().cloned().collect();
    let rename: Vec<String> = b.presentation.names().iter().map(|n| fresh_name(n, b_name, &taken)).collect();
    let combined = a.presentation.free_product(&b.presentation, |n| {
        let i = b.presentation.generator_index(n).expect("own generator") as usize;
        rename[i].clone()
    });
    let offset = a.presentation.generator_count() as u32;
    let shift = |w: &FreeWord| w.map_generators(|g| FreeWord::generator(g + offset));

    let mut extra = Vec::new();
    let mut keys = BTreeSet::new();
    for (key, value) in ident {
        let g = a
            .presentation
            .generator_index(key)
            .ok_or_else(|| SurgeryError::BadSum(format!("`{key}` is not a generator of the first summand")))?;
        if !keys.insert(key) {
            return Err(SurgeryError::BadSum(format!("`{key}` identified twice")));
        }
        let w = parse_word_in(value, b.presentation.names())
            .map_err(|e| SurgeryError::BadSum(format!("`{value}`: {e}")))?;
        extra.push(FreeWord::generator(g).mul(&shift(&w).inverse()));
    }
    extra.push(sa.mu.mul(&shift(&sb.mu).inverse()));
    let presentation = combined.quotient(&extra).map_err(BlockError::from)?;

    let mut tori = a.tori.clone();
    tori[ia].status = TorusStatus::ConsumedBySum;
    let taken_ids: BTreeSet<String> = a.tori.iter().map(|t| t.id.clone()).collect();
    for (j, t) in b.tori.iter().enumerate() {
        let mut t = t.clone();
        t.id = fresh_name(&t.id, b_name, &taken_ids);
        t.m = shift(&t.m);
        t.l = shift(&t.l);
        t.mu = shift(&t.mu);
        if j == ib {
            t.status = TorusStatus::ConsumedBySum;
        }
        tori.push(t);
    }

    let fiber_euler = 2 - 2 * sa.genus as i64;
    let record = InvariantRecord {
        euler: a.record.euler + b.record.euler - 2 * fiber_euler,
        signature: a.record.signature + b.record.signature,
        hyperbolic: None,
        plus_one: None,
        minus_one: None,
        spin: TriState::Unknown,
    };
    let mut history = a.history.clone();
    history.push(format!(
        "sum along {ta} ~ {b_name}.{tb} {{{}}}",
        ident.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(", ")
    ));
    let mut notes = a.notes.clone();
    notes.extend(b.notes.iter().map(|n| format!("{b_name}: {n}")));
    Ok(ManifoldState {
        presentation,
        tori,
        record,
        structure: Structure::Symplectic,
        history,
        notes,
        blowup_stack: Vec::new(),
    })
}

/// Blows up `k` points: `e += k`, `sigma -= k`, `k` new `<-1>` summands.
pub fn blow_up(s: &ManifoldState, k: u32) -> Result<ManifoldState, SurgeryError> {
    if s.structure == Structure::Unknown {
        return Err(SurgeryError::NoStructure(s.structure));
    }
    let mut out = s.clone();
    if k == 0 {
        return Ok(out);
    }
    for _ in 0..k {
        out.blowup_stack.push(out.record.spin);
        out.record.spin = TriState::No;
    }
    out.record.euler += k as i64;
    out.record.signature -= k as i64;
    out.record.minus_one = s.record.minus_one.map(|m| m + k);
    out.history.push(format!("blowup {k}"));
    Ok(out)
}

/// Blows down one tracked exceptional class.
pub fn blow_down(s: &ManifoldState) -> Result<ManifoldState, SurgeryError> {
    if !matches!(s.structure, Structure::TwistedGc { .. }) {
        return Err(SurgeryError::NotTwisted(s.structure));
    }
    let Some(m) = s.record.minus_one.filter(|&m| m >= 1) else {
        return Err(SurgeryError::NoExceptionalClass);
    };
    let mut out = s.clone();
    out.record.euler -= 1;
    out.record.signature += 1;
    out.record.minus_one = Some(m - 1);
    out.record.spin = match out.blowup_stack.pop() {
        Some(previous) => previous,
        None => TriState::Unknown,
    };
    out.history.push("blowdown".into());
    Ok(out)
}

/// Scenario-level claims that the engine cannot verify symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    /// An embedded essential sphere of self-intersection zero survives.
    SphereSquareZero,
    /// The blown-down sphere meets the complex locus in one nondegenerate point.
    SphereBrane,
    /// A homeomorphism label stated elsewhere, compared against the computation.
    ClaimedHomeo(String),
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::SphereSquareZero => write!(f, "sphere_square_zero"),
            Assertion::SphereBrane => write!(f, "sphere_brane"),
            Assertion::ClaimedHomeo(label) => write!(f, "claimed_homeo \"{label}\""),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "h1", rename_all = "lowercase")]
pub enum Twist {
    Untwisted,
    Twisted(String),
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::Untwisted => write!(f, "untwisted"),
            Twist::Twisted(_) => write!(f, "twisted"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Invariants(#[from] InvariantError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinalReport {
    pub name: String,
    pub raw: Presentation,
    pub identification: GroupIdentification,
    pub abelianization: AbelianInvariants,
    pub betti: BettiData,
    pub record: InvariantRecord,
    pub parity: Option<Parity>,
    pub structure: Structure,
    pub twist: Twist,
    pub label: ClassificationLabel,
    pub almost_complex: TriState,
    pub annotations: Vec<String>,
    pub budgets: Budgets,
    pub history: Vec<String>,
}

impl FinalReport {
    pub fn loci(&self) -> Option<u32> {
        self.structure.loci()
    }

    pub fn simplified(&self) -> &Presentation {
        &self.identification.simplified
    }
}

/// Closes up every available torus, identifies pi1, derives Betti numbers
/// and labels, and attaches annotations for the given assertions.
pub fn finalize_report(
    name: &str,
    s: &ManifoldState,
    assertions: &[Assertion],
    budgets: Budgets,
) -> Result<FinalReport, ReportError> {
    let raw = s.filled_presentation();
    let identification = identify_group(&raw, budgets);
    let ab = identification.abelianization.clone();
    let betti = betti_from_euler(s.record.euler, &ab, s.record.signature)?;
    let mut annotations: Vec<String> = s.notes.clone();
    let mut record = s.record;
    if let Some(b2) = record.b2() {
        if b2 != betti.b2 {
            annotations.push(format!(
                "form bookkeeping gave b2 = {b2} but the Euler characteristic gives {}; summand counts dropped",
                betti.b2
            ));
            record.hyperbolic = None;
            record.plus_one = None;
            record.minus_one = None;
        }
    }
    debug_assert_eq!(betti.euler(), record.euler);

    let label = classify_homeomorphism(&betti, &record, &identification);
    let almost_complex = almost_complex_check(&betti, &identification);
    let twist = if ab.is_trivial() {
        Twist::Untwisted
    } else {
        Twist::Twisted(ab.to_string())
    };
    if !s.blowup_stack.is_empty() || s.history.iter().any(|h| h.starts_with("blowdown")) {
        annotations.push("blow-ups and blow-downs leave the number of type change loci unchanged".into());
    }
    for a in assertions {
        match a {
            Assertion::SphereSquareZero => annotations.push(
                "Seiberg-Witten invariants vanish by the adjunction inequality (asserted: embedded essential sphere of square 0); hence not symplectic (Taubes)"
                    .into(),
            ),
            Assertion::SphereBrane => annotations
                .push("blow-down hypothesis asserted: sphere meets the complex locus in one nondegenerate point".into()),
            Assertion::ClaimedHomeo(claim) => {
                let found = label_discrepancies(claim, record.euler, record.signature, betti.b1)?;
                if found.is_empty() {
                    annotations.push(format!("claimed homeomorphism type `{claim}` agrees with computed e, sigma, b1"));
                } else {
                    for d in found {
                        annotations.push(format!("discrepancy: {d}"));
                    }
                }
            }
        }
    }
    Ok(FinalReport {
        name: name.to_string(),
        raw,
        abelianization: ab,
        betti,
        parity: record.parity(),
        record,
        structure: s.structure,
        twist,
        label,
        almost_complex,
        annotations,
        budgets,
        history: s.history.clone(),
        identification,
    })
}
