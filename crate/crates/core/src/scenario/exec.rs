//! Runs a parsed script and checks its expectations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{Directive, ExpectKey, ScenarioScript};
use crate::blocks::{instantiate_block, perturb_tori, BlockError, ManifoldState};
use crate::group::{AbelianInvariants, Budgets, GroupTag};
use crate::invariants::{TriState, UNCLASSIFIED};
use crate::surgery::{
    blow_down, blow_up, finalize_report, symplectic_fiber_sum, torus_surgery, Assertion, FinalReport, ReportError,
    SurgeryError,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{scenario}: directive {index} (line {line}): {message}")]
pub struct ScenarioError {
    pub scenario: String,
    pub index: usize,
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectationResult {
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateReport {
    pub report: FinalReport,
    pub assertions: Vec<Assertion>,
    pub expectations: Vec<ExpectationResult>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioRun {
    pub scenario: String,
    pub budgets: Budgets,
    pub states: Vec<StateReport>,
}

impl ScenarioRun {
    pub fn expectations(&self) -> impl Iterator<Item = &ExpectationResult> {
        self.states.iter().flat_map(|s| s.expectations.iter())
    }

    pub fn has_failure(&self) -> bool {
        self.expectations().any(|e| e.verdict == Verdict::Fail)
    }
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Compares one expectation with a finished report.
pub fn check_expectation(r: &FinalReport, key: ExpectKey, expected: &str) -> ExpectationResult {
    let certified = r.identification.tag.is_certified();
    let tri = |actual: TriState, expected: &str| -> (String, Verdict) {
        let want = TriState::parse(expected);
        let verdict = if want == Some(actual) {
            Verdict::Pass
        } else if actual == TriState::Unknown {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        };
        (actual.to_string(), verdict)
    };
    let exact = |actual: String, matches: bool| (actual, if matches { Verdict::Pass } else { Verdict::Fail });
    let (actual, verdict) = match key {
        ExpectKey::Pi1 => {
            let tag = r.identification.tag;
            let want = GroupTag::parse(expected);
            let verdict = if want == Some(tag) {
                Verdict::Pass
            } else if !certified {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            (tag.to_string(), verdict)
        }
        ExpectKey::H1 => exact(
            r.abelianization.to_string(),
            AbelianInvariants::parse(expected).as_ref() == Some(&r.abelianization),
        ),
        ExpectKey::Euler => exact(r.record.euler.to_string(), expected.parse() == Ok(r.record.euler)),
        ExpectKey::Sigma => exact(r.record.signature.to_string(), expected.parse() == Ok(r.record.signature)),
        ExpectKey::B1 => exact(r.betti.b1.to_string(), expected.parse() == Ok(r.betti.b1)),
        ExpectKey::B2 => exact(r.betti.b2.to_string(), expected.parse() == Ok(r.betti.b2)),
        ExpectKey::Loci => match r.loci() {
            Some(n) => exact(n.to_string(), expected.parse() == Ok(n)),
            None => ("unknown".into(), Verdict::Fail),
        },
        ExpectKey::Spin => tri(r.record.spin, expected),
        ExpectKey::AlmostComplex => tri(r.almost_complex, expected),
        ExpectKey::Twist => exact(r.twist.to_string(), r.twist.to_string() == expected),
        ExpectKey::Parity => match r.parity {
            Some(p) => exact(p.to_string(), p.to_string() == expected),
            None => ("unknown".into(), Verdict::Inconclusive),
        },
        ExpectKey::Structure => exact(r.structure.to_string(), r.structure.to_string() == expected),
        ExpectKey::Homeo => {
            let actual = r.label.label.clone();
            let verdict = if squash(&actual) == squash(expected) {
                Verdict::Pass
            } else if actual == UNCLASSIFIED && !certified {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            (actual, verdict)
        }
    };
    ExpectationResult {
        key: key.name().to_string(),
        expected: expected.to_string(),
        actual,
        verdict,
    }
}

enum StepError {
    Surgery(SurgeryError),
    Block(BlockError),
    Message(String),
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::Surgery(e) => e.fmt(f),
            StepError::Block(e) => e.fmt(f),
            StepError::Message(m) => f.write_str(m),
        }
    }
}

impl From<SurgeryError> for StepError {
    fn from(e: SurgeryError) -> Self {
        StepError::Surgery(e)
    }
}

impl From<BlockError> for StepError {
    fn from(e: BlockError) -> Self {
        StepError::Block(e)
    }
}

/// Applies every directive in order, then finalizes the states that carry
/// assertions or expectations (all states if none do).
pub fn execute_scenario(script: &ScenarioScript, budgets: Budgets) -> Result<ScenarioRun, ScenarioError> {
    let mut states: BTreeMap<String, ManifoldState> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut checks: BTreeMap<String, (Vec<Assertion>, Vec<(ExpectKey, String)>)> = BTreeMap::new();

    for (index, located) in script.directives.iter().enumerate() {
        let fail = |message: String| ScenarioError {
            scenario: script.name.clone(),
            index: index + 1,
            line: located.line,
            message,
        };
        let get = |states: &BTreeMap<String, ManifoldState>, name: &str| -> Result<ManifoldState, StepError> {
            states
                .get(name)
                .cloned()
                .ok_or_else(|| StepError::Message(format!("state `{name}` is not bound")))
        };
        let step = (|| -> Result<Option<(String, ManifoldState)>, StepError> {
            Ok(match &located.directive {
                Directive::Block { name, kind } => Some((name.clone(), instantiate_block(kind)?)),
                Directive::Perturb { name, tori } => {
                    let (mut s, warnings) = perturb_tori(&get(&states, name)?, tori)?;
                    s.notes.extend(warnings);
                    Some((name.clone(), s))
                }
                Directive::Surgery { name, spec } => Some((name.clone(), torus_surgery(&get(&states, name)?, spec)?)),
                Directive::Sum {
                    name,
                    a,
                    ta,
                    b,
                    tb,
                    ident,
                } => {
                    let sa = get(&states, a)?;
                    let sb = get(&states, b)?;
                    Some((name.clone(), symplectic_fiber_sum(&sa, ta, &sb, tb, ident, b)?))
                }
                Directive::BlowUp { name, k } => Some((name.clone(), blow_up(&get(&states, name)?, *k)?)),
                Directive::BlowDown { name } => Some((name.clone(), blow_down(&get(&states, name)?)?)),
                Directive::Assert { name, assertion } => {
                    get(&states, name)?;
                    checks.entry(name.clone()).or_default().0.push(assertion.clone());
                    None
                }
                Directive::Expect { name, key, value } => {
                    get(&states, name)?;
                    checks.entry(name.clone()).or_default().1.push((*key, value.clone()));
                    None
                }
            })
        })();
        match step {
            Ok(Some((name, state))) => {
                if !order.contains(&name) {
                    order.push(name.clone());
                }
                states.insert(name, state);
            }
            Ok(None) => {}
            Err(e) => return Err(fail(e.to_string())),
        }
    }

    let targets: Vec<&String> = if checks.is_empty() {
        order.iter().collect()
    } else {
        order.iter().filter(|n| checks.contains_key(*n)).collect()
    };
    let mut reports = Vec::new();
    for name in targets {
        let (assertions, expects) = checks.remove(name).unwrap_or_default();
        let report = finalize_report(name, &states[name], &assertions, budgets).map_err(|e: ReportError| {
            ScenarioError {
                scenario: script.name.clone(),
                index: script.directives.len(),
                line: script.directives.last().map_or(0, |d| d.line),
                message: format!("finalizing `{name}`: {e}"),
            }
        })?;
        let expectations = expects.iter().map(|(k, v)| check_expectation(&report, *k, v)).collect();
        reports.push(StateReport {
            report,
            assertions,
            expectations,
        });
    }
    Ok(ScenarioRun {
        scenario: script.name.clone(),
        budgets,
        states: reports,
    })
}
