//! The assembled result of one full analysis run: every intermediate the
//! verdict rests on, in a machine-readable document with a derived
//! human-readable rendering.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kernel::{CurveFnClass, CurveId};
use crate::obstruction::{
    assemble_system, derive_weil_places, enumerate, solve, verdict, weil_obstruction,
    AssignmentTrace, Gf2System, InconclusiveReason, NoCertificate, SolveOutcome, Verdict,
    WeilOutcome, WeilPlace, Witness,
};
use crate::torsor::{ProblemViolation, ResidueSet, Solvability, TorsorProblem};

/// Flags steering [`run_analysis`].
#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    /// Also compute the coarse place-level (base-curve) comparison.
    pub weil: bool,
}

/// Exhaustive assignment traces are attached only below this variable count;
/// they exist to make small infeasibility certificates self-checking.
pub const ENUMERATION_REPORT_LIMIT: usize = 8;

/// Place-level result, present when requested.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum WeilReport {
    Computed {
        places: Vec<WeilPlace>,
        outcome: WeilOutcome,
    },
    Unavailable {
        reason: String,
    },
}

/// Everything one analysis run produced.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub verdict: Verdict,
    /// Validation defects; nonempty exactly when the verdict is
    /// inconclusive-for-invalid-input.
    pub violations: Vec<ProblemViolation>,
    pub solvability: BTreeMap<CurveId, Solvability>,
    pub residue_sets: BTreeMap<CurveId, ResidueSet>,
    pub unsolvable: Vec<CurveId>,
    pub undetermined: Vec<CurveId>,
    pub system: Option<Gf2System>,
    pub outcome: Option<SolveOutcome>,
    /// All 2^n assignments with their per-equation defects, attached for
    /// infeasible systems small enough to exhaust.
    pub enumeration: Option<Vec<AssignmentTrace>>,
    pub weil: Option<WeilReport>,
}

impl Report {
    fn empty(verdict: Verdict, violations: Vec<ProblemViolation>) -> Report {
        Report {
            verdict,
            violations,
            solvability: BTreeMap::new(),
            residue_sets: BTreeMap::new(),
            unsolvable: Vec::new(),
            undetermined: Vec::new(),
            system: None,
            outcome: None,
            enumeration: None,
            weil: None,
        }
    }
}

/// Run the full pipeline — validate, survey, assemble, solve, decide — and
/// collect every stage into a [`Report`].
pub fn run_analysis(problem: &TorsorProblem, options: AnalysisOptions) -> Report {
    let final_verdict = verdict(problem);

    let violations = problem.validate();
    if !violations.is_empty() {
        return Report::empty(final_verdict, violations);
    }

    let survey = match crate::obstruction::survey(problem) {
        Ok(s) => s,
        Err(_) => return Report::empty(final_verdict, Vec::new()),
    };

    let mut report = Report::empty(final_verdict, Vec::new());
    report.solvability = survey.solvability.clone();
    report.residue_sets = survey.sets.clone();
    report.unsolvable = survey.unsolvable.clone();
    report.undetermined = survey.undetermined.clone();

    if survey.unsolvable.is_empty() && survey.undetermined.is_empty() {
        let system = assemble_system(problem, &survey);
        let outcome = solve(&system);
        if matches!(outcome, SolveOutcome::Infeasible { .. })
            && system.variables.len() <= ENUMERATION_REPORT_LIMIT
        {
            report.enumeration = enumerate(&system).ok();
        }
        report.system = Some(system);
        report.outcome = Some(outcome);
    }

    if options.weil {
        report.weil = Some(match derive_weil_places(problem) {
            Ok(places) => {
                let outcome = weil_obstruction(&places);
                WeilReport::Computed { places, outcome }
            }
            Err(e) => WeilReport::Unavailable {
                reason: e.to_string(),
            },
        });
    }
    report
}

fn class_label(class: &CurveFnClass) -> String {
    let support = if class.odd_points.is_empty() {
        String::new()
    } else {
        let names: Vec<&str> = class.odd_points.iter().map(|p| p.0.as_str()).collect();
        format!("{{{}}}", names.join(", "))
    };
    match (class.nonsquare_unit, support.is_empty()) {
        (false, true) => "1".to_string(),
        (false, false) => support,
        (true, true) => "u".to_string(),
        (true, false) => format!("u·{support}"),
    }
}

fn equation_line(system: &Gf2System, index: usize) -> String {
    let eq = &system.equations[index];
    let terms: Vec<String> = system
        .variables
        .iter()
        .zip(&eq.coefficients)
        .filter(|(_, &c)| c)
        .map(|(v, _)| format!("x[{v}]"))
        .collect();
    let lhs = if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    };
    format!("{}: {lhs} = {}", eq.point, u8::from(eq.constant))
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::NoRationalPoint { certificate } => match certificate {
                NoCertificate::LocalObstruction { curve } => writeln!(
                    f,
                    "verdict: no rational point (no local points along curve {curve})"
                )?,
                NoCertificate::SystemInfeasible { certificate } => {
                    let points: Vec<&str> =
                        certificate.points.iter().map(|p| p.0.as_str()).collect();
                    writeln!(
                        f,
                        "verdict: no rational point (the equations at {} sum to 0 = 1)",
                        points.join(", ")
                    )?
                }
            },
            Verdict::HasRationalPoint { witness } => match witness {
                Witness::SplitNormForm { element } => writeln!(
                    f,
                    "verdict: rational point exists ({element} is a global square; its norm form splits)"
                )?,
                Witness::ResidueSelection { selection } => {
                    let parts: Vec<String> = selection
                        .iter()
                        .map(|(c, v)| format!("{c} = {}", u8::from(*v)))
                        .collect();
                    writeln!(
                        f,
                        "verdict: rational point exists (residue selection {})",
                        if parts.is_empty() {
                            "is forced everywhere".to_string()
                        } else {
                            parts.join(", ")
                        }
                    )?
                }
            },
            Verdict::Inconclusive { reason } => match reason {
                InconclusiveReason::InvalidInput { .. } => {
                    writeln!(f, "verdict: inconclusive (invalid input)")?
                }
                InconclusiveReason::UndeterminedResidues { curves } => {
                    let names: Vec<&str> = curves.iter().map(|c| c.0.as_str()).collect();
                    writeln!(
                        f,
                        "verdict: inconclusive (undetermined residue cases along {})",
                        names.join(", ")
                    )?
                }
                InconclusiveReason::ExistenceConditionsUnmet {
                    unknown_solvability,
                    inexact_sets,
                    base_not_separably_closed,
                } => {
                    writeln!(f, "verdict: inconclusive (system feasible, but the existence hypotheses fail)")?;
                    if !unknown_solvability.is_empty() {
                        let names: Vec<&str> =
                            unknown_solvability.iter().map(|c| c.0.as_str()).collect();
                        writeln!(f, "  unknown local solvability: {}", names.join(", "))?;
                    }
                    if !inexact_sets.is_empty() {
                        let names: Vec<&str> =
                            inexact_sets.iter().map(|c| c.0.as_str()).collect();
                        writeln!(f, "  containment-only residue sets: {}", names.join(", "))?;
                    }
                    if *base_not_separably_closed {
                        writeln!(f, "  base residue field is not separably closed")?;
                    }
                }
                InconclusiveReason::InternalError { message } => {
                    writeln!(f, "verdict: inconclusive (internal error: {message})")?
                }
            },
        }

        for violation in &self.violations {
            writeln!(f, "  defect: {violation}")?;
        }

        if !self.solvability.is_empty() {
            writeln!(f, "local solvability:")?;
            for (curve, solvability) in &self.solvability {
                let word = match solvability {
                    Solvability::Solvable => "solvable",
                    Solvability::Unsolvable => "unsolvable",
                    Solvability::Unknown => "unknown",
                };
                writeln!(f, "  {curve}: {word}")?;
            }
        }
        if !self.residue_sets.is_empty() {
            writeln!(f, "residue sets:")?;
            for (curve, set) in &self.residue_sets {
                let kind = if set.exact { "exact" } else { "containment" };
                let base = class_label(&set.base);
                match &set.offset {
                    None => writeln!(f, "  {curve}: {{{base}}} ({kind})")?,
                    Some(offset) => {
                        let offset = class_label(offset);
                        let second = if base == "1" {
                            offset
                        } else {
                            format!("{base}·{offset}")
                        };
                        writeln!(f, "  {curve}: {{{base}, {second}}} ({kind})")?
                    }
                }
            }
        }
        if let Some(system) = &self.system {
            let vars: Vec<&str> = system.variables.iter().map(|v| v.0.as_str()).collect();
            writeln!(
                f,
                "obstruction system: {} variable(s) [{}], {} equation(s)",
                system.variables.len(),
                vars.join(", "),
                system.equations.len()
            )?;
            for i in 0..system.equations.len() {
                writeln!(f, "  {}", equation_line(system, i))?;
            }
        }
        if let Some(outcome) = &self.outcome {
            match outcome {
                SolveOutcome::Feasible { assignment } => {
                    let parts: Vec<String> = assignment
                        .iter()
                        .map(|(c, v)| format!("{c} = {}", u8::from(*v)))
                        .collect();
                    writeln!(f, "system outcome: feasible ({})", parts.join(", "))?;
                }
                SolveOutcome::Infeasible { certificate } => {
                    let points: Vec<&str> =
                        certificate.points.iter().map(|p| p.0.as_str()).collect();
                    writeln!(
                        f,
                        "system outcome: infeasible (certificate: {})",
                        points.join(", ")
                    )?;
                }
            }
        }
        if let Some(traces) = &self.enumeration {
            let violated = traces.iter().filter(|t| !t.satisfied).count();
            writeln!(
                f,
                "exhausted assignments: {violated} of {} violated",
                traces.len()
            )?;
            if let Some(system) = &self.system {
                for trace in traces {
                    let bits: Vec<String> = trace
                        .assignment
                        .iter()
                        .map(|(c, v)| format!("{c}={}", u8::from(*v)))
                        .collect();
                    let broken: Vec<&str> = system
                        .equations
                        .iter()
                        .zip(&trace.violations)
                        .filter(|(_, &v)| v)
                        .map(|(eq, _)| eq.point.0.as_str())
                        .collect();
                    writeln!(
                        f,
                        "  {} -> {}",
                        bits.join(" "),
                        if broken.is_empty() {
                            "satisfies all".to_string()
                        } else {
                            format!("violates {}", broken.join(", "))
                        }
                    )?;
                }
            }
        }
        if let Some(weil) = &self.weil {
            match weil {
                WeilReport::Computed { places, outcome } => {
                    writeln!(f, "place-level comparison:")?;
                    for place in places {
                        let subset = match place.subset {
                            crate::obstruction::WeilSubset::Zero => "{0}",
                            crate::obstruction::WeilSubset::One => "{1}",
                            crate::obstruction::WeilSubset::Both => "{0, 1}",
                        };
                        writeln!(f, "  {}: {subset}", place.place)?;
                    }
                    match outcome {
                        WeilOutcome::Feasible { .. } => {
                            writeln!(f, "  outcome: feasible (no place-level obstruction)")?
                        }
                        WeilOutcome::Infeasible { forced_sum } => writeln!(
                            f,
                            "  outcome: infeasible (every place forced, total {})",
                            u8::from(*forced_sum)
                        )?,
                    }
                }
                WeilReport::Unavailable { reason } => {
                    writeln!(f, "place-level comparison unavailable: {reason}")?
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn triangle_report_carries_the_exhausted_assignments() {
        let fixture = fixtures::fixture("triangle-semilocal").unwrap();
        let report = run_analysis(&fixture.document.to_problem(), AnalysisOptions::default());
        assert!(report.verdict.is_no());
        let traces = report.enumeration.as_ref().expect("3 variables enumerate");
        assert_eq!(traces.len(), 8);
        assert!(traces.iter().all(|t| !t.satisfied));
        let text = report.to_string();
        assert!(text.contains("verdict: no rational point"), "text:\n{text}");
        assert!(text.contains("exhausted assignments: 8 of 8 violated"));
    }

    #[test]
    fn reports_round_trip_through_json() {
        for fixture in fixtures::all() {
            let options = AnalysisOptions { weil: true };
            let report = run_analysis(&fixture.document.to_problem(), options);
            let json = serde_json::to_string(&report).unwrap();
            let back: Report = serde_json::from_str(&json).unwrap();
            assert_eq!(report, back, "round trip for {}", fixture.name);
        }
    }

    #[test]
    fn weil_is_present_only_on_request_and_on_semiglobal_bases() {
        let fixture = fixtures::fixture("p1-dvr-odd").unwrap();
        let problem = fixture.document.to_problem();
        let without = run_analysis(&problem, AnalysisOptions::default());
        assert!(without.weil.is_none());
        let with = run_analysis(&problem, AnalysisOptions { weil: true });
        match with.weil.expect("requested") {
            WeilReport::Computed { places, outcome } => {
                assert_eq!(places.len(), 3);
                assert!(matches!(outcome, WeilOutcome::Infeasible { forced_sum: true }));
            }
            WeilReport::Unavailable { .. } => panic!("semi-global base computes"),
        }

        let local = fixtures::fixture("triangle-semilocal").unwrap();
        let report = run_analysis(&local.document.to_problem(), AnalysisOptions { weil: true });
        assert!(matches!(report.weil, Some(WeilReport::Unavailable { .. })));
    }
}
