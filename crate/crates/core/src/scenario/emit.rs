//! Human-readable and JSON renderings of scenario runs.

use std::fmt::Write as _;

use serde::Serialize;

use super::exec::{ExpectationResult, ScenarioRun, StateReport};
use crate::group::{Budgets, PresentationSummary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

#[derive(Serialize)]
struct Pi1<'a> {
    tag: String,
    evidence: &'a [String],
    abelianization: String,
}

#[derive(Serialize)]
struct Presentations {
    raw: PresentationSummary,
    simplified: PresentationSummary,
}

/// Field order here is the documented, stable key order.
#[derive(Serialize)]
struct StateJson<'a> {
    name: &'a str,
    pi1: Pi1<'a>,
    e: i64,
    sigma: i64,
    b1: u32,
    b2: u32,
    b2plus: u32,
    b2minus: u32,
    spin: String,
    structure: String,
    loci: Option<u32>,
    twist: String,
    label: &'a str,
    annotations: &'a [String],
    expectations: &'a [ExpectationResult],
    homeo: Option<&'a str>,
    basis: &'a str,
    parity: Option<String>,
    almost_complex: String,
    scenario: &'a str,
    budgets: Budgets,
    history: &'a [String],
    presentation: Presentations,
}

fn state_json<'a>(scenario: &'a str, s: &'a StateReport) -> StateJson<'a> {
    let r = &s.report;
    StateJson {
        name: &r.name,
        pi1: Pi1 {
            tag: r.identification.tag.to_string(),
            evidence: &r.identification.evidence,
            abelianization: r.abelianization.to_string(),
        },
        e: r.record.euler,
        sigma: r.record.signature,
        b1: r.betti.b1,
        b2: r.betti.b2,
        b2plus: r.betti.b2_plus,
        b2minus: r.betti.b2_minus,
        spin: r.record.spin.to_string(),
        structure: r.structure.to_string(),
        loci: r.loci(),
        twist: r.twist.to_string(),
        label: &r.label.label,
        annotations: &r.annotations,
        expectations: &s.expectations,
        homeo: r.label.is_classified().then_some(r.label.label.as_str()),
        basis: &r.label.basis,
        parity: r.parity.map(|p| p.to_string()),
        almost_complex: r.almost_complex.to_string(),
        scenario,
        budgets: r.budgets,
        history: &r.history,
        presentation: Presentations {
            raw: r.raw.summary(),
            simplified: r.simplified().summary(),
        },
    }
}

/// JSON array with one object per finalized state, in run order.
pub fn json_value(runs: &[ScenarioRun]) -> serde_json::Value {
    let states: Vec<StateJson> = runs
        .iter()
        .flat_map(|run| run.states.iter().map(move |s| state_json(&run.scenario, s)))
        .collect();
    serde_json::to_value(states).expect("report serializes")
}

fn human(runs: &[ScenarioRun]) -> String {
    let mut out = String::new();
    for run in runs {
        let b = run.budgets;
        let _ = writeln!(
            out,
            "scenario {} (max-cosets {}, tietze-budget {}, relator-cap {})",
            run.scenario, b.max_cosets, b.tietze_budget, b.relator_cap
        );
        for s in &run.states {
            let r = &s.report;
            let loci = r.loci().map_or("unknown".to_string(), |n| n.to_string());
            let parity = r.parity.map_or("unknown".to_string(), |p| p.to_string());
            let rows: Vec<(&str, String)> = vec![
                ("pi1", r.identification.tag.to_string()),
                ("H1", r.abelianization.to_string()),
                ("e / sigma", format!("{} / {}", r.record.euler, r.record.signature)),
                (
                    "b1 b2 b2+ b2-",
                    format!("{} {} {} {}", r.betti.b1, r.betti.b2, r.betti.b2_plus, r.betti.b2_minus),
                ),
                ("form", format!("{parity}, spin {}", r.record.spin)),
                ("structure", format!("{} (loci {loci})", r.structure)),
                ("twist", r.twist.to_string()),
                ("homeo", format!("{} [{}]", r.label.label, r.label.basis)),
                ("almost complex", r.almost_complex.to_string()),
            ];
            let _ = writeln!(out, "  state {}", r.name);
            for (k, v) in rows {
                let _ = writeln!(out, "    {k:<15} {v}");
            }
            for e in &r.identification.evidence {
                let _ = writeln!(out, "    {:<15} {e}", "evidence");
            }
            for a in &r.annotations {
                let _ = writeln!(out, "    {:<15} {a}", "note");
            }
            for e in &s.expectations {
                let _ = writeln!(
                    out,
                    "    {:<12} {:<15} expected {}, got {}",
                    e.verdict.to_string(),
                    e.key,
                    e.expected,
                    e.actual
                );
            }
        }
    }
    out
}

pub fn emit_report(runs: &[ScenarioRun], format: Format) -> String {
    match format {
        Format::Human => human(runs),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json_value(runs)).expect("report serializes");
            s.push('\n');
            s
        }
    }
}
