//! Scenario scripts: a line-oriented language describing a construction
//! and the values it is expected to produce.
//!
//! ```text
//! # comment
//! block X = product_surfaces(2, 2)
//! perturb X [T5, T6, T7, T8]
//! surgery X T1 (0, 1, 1)
//! sum Z = A.T1 ~ B.T1 {a1=a1, c1=c1}
//! blowup X 1
//! blowdown X
//! assert X sphere_square_zero
//! expect X pi1 trivial
//! ```

mod emit;
mod exec;
mod parse;

pub use emit::{emit_report, json_value, Format};
pub use exec::{execute_scenario, ExpectationResult, ScenarioError, ScenarioRun, StateReport, Verdict};
pub use parse::{parse_scenario, print_scenario, ParseError};

use crate::blocks::BlockKind;
use crate::surgery::{Assertion, SurgerySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExpectKey {
    Pi1,
    H1,
    Euler,
    Sigma,
    B1,
    B2,
    Loci,
    Spin,
    Twist,
    Homeo,
    AlmostComplex,
    Parity,
    Structure,
}

impl ExpectKey {
    pub const ALL: [ExpectKey; 13] = [
        ExpectKey::Pi1,
        ExpectKey::H1,
        ExpectKey::Euler,
        ExpectKey::Sigma,
        ExpectKey::B1,
        ExpectKey::B2,
        ExpectKey::Loci,
        ExpectKey::Spin,
        ExpectKey::Twist,
        ExpectKey::Homeo,
        ExpectKey::AlmostComplex,
        ExpectKey::Parity,
        ExpectKey::Structure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExpectKey::Pi1 => "pi1",
            ExpectKey::H1 => "h1",
            ExpectKey::Euler => "e",
            ExpectKey::Sigma => "sigma",
            ExpectKey::B1 => "b1",
            ExpectKey::B2 => "b2",
            ExpectKey::Loci => "loci",
            ExpectKey::Spin => "spin",
            ExpectKey::Twist => "twist",
            ExpectKey::Homeo => "homeo",
            ExpectKey::AlmostComplex => "almost_complex",
            ExpectKey::Parity => "parity",
            ExpectKey::Structure => "structure",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Block { name: String, kind: BlockKind },
    Perturb { name: String, tori: Vec<String> },
    Surgery { name: String, spec: SurgerySpec },
    Sum {
        name: String,
        a: String,
        ta: String,
        b: String,
        tb: String,
        ident: Vec<(String, String)>,
    },
    BlowUp { name: String, k: u32 },
    BlowDown { name: String },
    Assert { name: String, assertion: Assertion },
    Expect { name: String, key: ExpectKey, value: String },
}

impl Directive {
    /// The state the directive acts on or binds.
    pub fn target(&self) -> &str {
        match self {
            Directive::Block { name, .. }
            | Directive::Perturb { name, .. }
            | Directive::Surgery { name, .. }
            | Directive::Sum { name, .. }
            | Directive::BlowUp { name, .. }
            | Directive::BlowDown { name }
            | Directive::Assert { name, .. }
            | Directive::Expect { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub directive: Directive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScenarioScript {
    pub name: String,
    pub directives: Vec<Located>,
}

impl ScenarioScript {
    /// Directives without their source lines, for structural comparison.
    pub fn directives_only(&self) -> Vec<&Directive> {
        self.directives.iter().map(|d| &d.directive).collect()
    }
}
