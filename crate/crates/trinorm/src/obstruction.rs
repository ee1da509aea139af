//! The global reciprocity obstruction as a linear system over GF(2).
//!
//! Choosing one element of each curve's achievable-residue set is an
//! assignment of bits to the two-element curves; the residue-theorem
//! constraint at every closed point is a linear equation on those bits. No
//! choice satisfying all equations means no global point can exist (the
//! sets are containments, so this direction never needs exactness). A
//! satisfying choice certifies existence only under the descent hypotheses:
//! every curve locally solvable, every set exact, separably closed base,
//! valid crossing configuration.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{
    tame_residue, CurveFnClass, CurveId, PointId, ResidueFieldKind, Ternary, UnitSqClass,
    ValuedUnit,
};
use crate::surface::{dual_graph, is_forest, restrict_to_curve, MonomialElement, SurfaceConfig};
use crate::torsor::{
    local_solvable, residue_value_set, trivially_solvable, ProblemViolation, ResidueSet,
    Solvability, TorsorError, TorsorProblem,
};

/// Per-curve local analysis of a whole problem, errors collected not raised.
#[derive(Clone, Debug)]
pub struct CurveSurvey {
    /// Local solvability for every declared curve.
    pub solvability: BTreeMap<CurveId, Solvability>,
    /// Residue sets for every curve whose case analysis resolved.
    pub sets: BTreeMap<CurveId, ResidueSet>,
    /// Curves with no local points.
    pub unsolvable: Vec<CurveId>,
    /// Curves whose residue case is undetermined.
    pub undetermined: Vec<CurveId>,
}

/// Run the local analysis over all declared curves.
pub fn survey(problem: &TorsorProblem) -> Result<CurveSurvey, TorsorError> {
    let mut out = CurveSurvey {
        solvability: BTreeMap::new(),
        sets: BTreeMap::new(),
        unsolvable: Vec::new(),
        undetermined: Vec::new(),
    };
    for curve in &problem.config.curves {
        let solv = local_solvable(problem, &curve.id)?;
        out.solvability.insert(curve.id.clone(), solv);
        match residue_value_set(problem, &curve.id) {
            Ok(set) => {
                out.sets.insert(curve.id.clone(), set);
            }
            Err(TorsorError::Unsolvable(c)) => out.unsolvable.push(c),
            Err(TorsorError::Undetermined(c)) => out.undetermined.push(c),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// One equation of the obstruction system, attached to the closed point it
/// expresses the residue theorem at.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Gf2Equation {
    pub point: PointId,
    /// Right-hand side: parity of the base residues at the point.
    pub constant: bool,
    /// Left-hand side coefficients, aligned with the system's variables.
    pub coefficients: Vec<bool>,
}

/// The obstruction system: one variable per two-element residue set, one
/// equation per closed point incident to a set with divisor support.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Gf2System {
    pub variables: Vec<CurveId>,
    pub equations: Vec<Gf2Equation>,
    /// Curves whose set is a containment rather than exact.
    pub inexact: BTreeSet<CurveId>,
    /// Curves whose local solvability is undecided.
    pub unknown_solvability: BTreeSet<CurveId>,
}

/// Why a system could not be built.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("no local points along curve {0}")]
    Unsolvable(CurveId),
    #[error("residue case undetermined along curve {0}")]
    Undetermined(CurveId),
    #[error(transparent)]
    Torsor(#[from] TorsorError),
}

/// Assemble the system from a completed survey (no unsolvable or
/// undetermined curves).
pub fn assemble_system(problem: &TorsorProblem, survey: &CurveSurvey) -> Gf2System {
    let variables: Vec<CurveId> = problem
        .config
        .curves
        .iter()
        .filter(|c| {
            survey
                .sets
                .get(&c.id)
                .map(|s| s.offset.is_some())
                .unwrap_or(false)
        })
        .map(|c| c.id.clone())
        .collect();

    let supported = |set: &ResidueSet| {
        !set.base.odd_points.is_empty()
            || set
                .offset
                .as_ref()
                .map(|o| !o.odd_points.is_empty())
                .unwrap_or(false)
    };
    let supported_curves: BTreeSet<CurveId> = survey
        .sets
        .iter()
        .filter(|(_, s)| supported(s))
        .map(|(c, _)| c.clone())
        .collect();

    let mut equations = Vec::new();
    for point in &problem.config.points {
        if !point.curves.iter().any(|c| supported_curves.contains(c)) {
            continue;
        }
        let mut constant = false;
        for curve in &point.curves {
            if let Some(set) = survey.sets.get(curve) {
                constant ^= set.base.parity_at(&point.id);
            }
        }
        let coefficients = variables
            .iter()
            .map(|v| {
                point.is_on(v)
                    && survey
                        .sets
                        .get(v)
                        .and_then(|s| s.offset.as_ref())
                        .map(|o| o.parity_at(&point.id))
                        .unwrap_or(false)
            })
            .collect();
        equations.push(Gf2Equation {
            point: point.id.clone(),
            constant,
            coefficients,
        });
    }

    let inexact = survey
        .sets
        .iter()
        .filter(|(_, s)| !s.exact)
        .map(|(c, _)| c.clone())
        .collect();
    let unknown_solvability = survey
        .solvability
        .iter()
        .filter(|(_, s)| **s == Solvability::Unknown)
        .map(|(c, _)| c.clone())
        .collect();

    Gf2System {
        variables,
        equations,
        inexact,
        unknown_solvability,
    }
}

/// Build the obstruction system for a problem.
pub fn build_system(problem: &TorsorProblem) -> Result<Gf2System, BuildError> {
    let survey = survey(problem)?;
    if let Some(curve) = survey.unsolvable.first() {
        return Err(BuildError::Unsolvable(curve.clone()));
    }
    if let Some(curve) = survey.undetermined.first() {
        return Err(BuildError::Undetermined(curve.clone()));
    }
    Ok(assemble_system(problem, &survey))
}

/// A subset of equations whose sum is the contradiction 0 = 1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InfeasibleCertificate {
    pub points: Vec<PointId>,
}

/// Result of solving the system.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolveOutcome {
    Feasible { assignment: BTreeMap<CurveId, bool> },
    Infeasible { certificate: InfeasibleCertificate },
}

/// Gaussian elimination over GF(2) with provenance tracking, so an
/// inconsistent reduced row names the original equations that sum to 0 = 1.
pub fn solve(system: &Gf2System) -> SolveOutcome {
    let n = system.variables.len();
    struct Row {
        coefficients: Vec<bool>,
        constant: bool,
        combined_from: BTreeSet<usize>,
    }
    let mut rows: Vec<Row> = system
        .equations
        .iter()
        .enumerate()
        .map(|(i, eq)| Row {
            coefficients: eq.coefficients.clone(),
            constant: eq.constant,
            combined_from: BTreeSet::from([i]),
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0usize;
    for (col, pivot_slot) in pivot_of_col.iter_mut().enumerate() {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].coefficients[col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r].coefficients[col] {
                let (head, tail) = if r < rank {
                    let (a, b) = rows.split_at_mut(rank);
                    (&mut a[r], &b[0])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&mut b[0], &a[rank])
                };
                for k in 0..n {
                    head.coefficients[k] ^= tail.coefficients[k];
                }
                head.constant ^= tail.constant;
                head.combined_from = head
                    .combined_from
                    .symmetric_difference(&tail.combined_from)
                    .cloned()
                    .collect();
            }
        }
        *pivot_slot = Some(rank);
        rank += 1;
    }

    for row in &rows {
        if row.constant && row.coefficients.iter().all(|c| !c) {
            let points = row
                .combined_from
                .iter()
                .map(|&i| system.equations[i].point.clone())
                .collect();
            return SolveOutcome::Infeasible {
                certificate: InfeasibleCertificate { points },
            };
        }
    }

    // Reduced echelon form: pivot variables read off their row constants,
    // free variables default to false.
    let mut assignment = BTreeMap::new();
    for (col, var) in system.variables.iter().enumerate() {
        let value = pivot_of_col[col]
            .map(|r| rows[r].constant)
            .unwrap_or(false);
        assignment.insert(var.clone(), value);
    }
    SolveOutcome::Feasible { assignment }
}

/// Substitute an assignment into every equation; true when all hold.
pub fn satisfies(system: &Gf2System, assignment: &BTreeMap<CurveId, bool>) -> bool {
    system.equations.iter().all(|eq| {
        let lhs = system
            .variables
            .iter()
            .zip(&eq.coefficients)
            .filter(|(_, &coef)| coef)
            .map(|(v, _)| assignment.get(v).copied().unwrap_or(false))
            .fold(false, |acc, x| acc ^ x);
        lhs == eq.constant
    })
}

/// One row of an exhaustive enumeration: an assignment and what it violates.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AssignmentTrace {
    pub assignment: BTreeMap<CurveId, bool>,
    /// Per-equation defect: true where the equation is violated.
    pub violations: Vec<bool>,
    pub satisfied: bool,
}

/// Errors from exhaustive enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("system has {0} variables; enumeration is capped at {MAX_ENUMERATED_VARIABLES}")]
    TooManyVariables(usize),
}

/// Upper bound on exhaustively enumerable variables (2^20 assignments).
pub const MAX_ENUMERATED_VARIABLES: usize = 20;

/// Try every assignment; intended for small systems and for cross-checking
/// the elimination solver.
pub fn enumerate(system: &Gf2System) -> Result<Vec<AssignmentTrace>, EnumerateError> {
    let n = system.variables.len();
    if n > MAX_ENUMERATED_VARIABLES {
        return Err(EnumerateError::TooManyVariables(n));
    }
    let mut out = Vec::with_capacity(1usize << n);
    for mask in 0u32..(1u32 << n) {
        let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let violations: Vec<bool> = system
            .equations
            .iter()
            .map(|eq| {
                let lhs = eq
                    .coefficients
                    .iter()
                    .zip(&bits)
                    .filter(|(&c, _)| c)
                    .fold(false, |acc, (_, &x)| acc ^ x);
                lhs != eq.constant
            })
            .collect();
        let satisfied = violations.iter().all(|v| !v);
        let assignment = system
            .variables
            .iter()
            .cloned()
            .zip(bits.iter().copied())
            .collect();
        out.push(AssignmentTrace {
            assignment,
            violations,
            satisfied,
        });
    }
    Ok(out)
}

/// Errors from forest propagation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("the two-element curves do not form a forest in the dual graph")]
    NotAForest,
    #[error("propagation conflict at point {0}")]
    Conflict(PointId),
}

/// Solve the system by seeding and propagating along the dual forest of the
/// two-element curves — no elimination. Each equation touches at most two
/// variables: zero-variable equations are checked outright, one-variable
/// equations seed their variable, two-variable equations propagate values
/// across dual-graph edges. The result is verified by substitution.
pub fn tree_propagate(problem: &TorsorProblem) -> Result<BTreeMap<CurveId, bool>, TreeError> {
    let system = build_system(problem)?;
    let tset: BTreeSet<CurveId> = system.variables.iter().cloned().collect();
    if !is_forest(&dual_graph(&problem.config, Some(&tset))) {
        return Err(TreeError::NotAForest);
    }

    let n = system.variables.len();
    let mut forced: Vec<Option<bool>> = vec![None; n];
    let mut edges: Vec<Vec<(usize, bool, PointId)>> = vec![Vec::new(); n];
    for eq in &system.equations {
        let touched: Vec<usize> = (0..n).filter(|&i| eq.coefficients[i]).collect();
        match touched.as_slice() {
            [] => {
                if eq.constant {
                    return Err(TreeError::Conflict(eq.point.clone()));
                }
            }
            [i] => match forced[*i] {
                None => forced[*i] = Some(eq.constant),
                Some(v) if v != eq.constant => return Err(TreeError::Conflict(eq.point.clone())),
                Some(_) => {}
            },
            [i, j] => {
                edges[*i].push((*j, eq.constant, eq.point.clone()));
                edges[*j].push((*i, eq.constant, eq.point.clone()));
            }
            _ => unreachable!("a crossing point touches at most two curves"),
        }
    }

    let mut value: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if value[start].is_some() {
            continue;
        }
        let seed = forced[start].unwrap_or(false);
        value[start] = Some(seed);
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let vi = value[i].expect("set before push");
            if let Some(f) = forced[i] {
                if f != vi {
                    // The forcing point is the first unary equation on i.
                    let point = system
                        .equations
                        .iter()
                        .find(|eq| {
                            eq.coefficients[i] && eq.coefficients.iter().filter(|&&c| c).count() == 1
                        })
                        .map(|eq| eq.point.clone())
                        .expect("forced value comes from a unary equation");
                    return Err(TreeError::Conflict(point));
                }
            }
            for (j, parity, point) in &edges[i] {
                let expected = vi ^ parity;
                match value[*j] {
                    None => {
                        value[*j] = Some(expected);
                        stack.push(*j);
                    }
                    Some(vj) if vj != expected => return Err(TreeError::Conflict(point.clone())),
                    Some(_) => {}
                }
            }
        }
    }

    let assignment: BTreeMap<CurveId, bool> = system
        .variables
        .iter()
        .cloned()
        .zip(value.into_iter().map(|v| v.unwrap_or(false)))
        .collect();
    if !satisfies(&system, &assignment) {
        let bad = system
            .equations
            .iter()
            .find(|eq| {
                let lhs = system
                    .variables
                    .iter()
                    .zip(&eq.coefficients)
                    .filter(|(_, &c)| c)
                    .fold(false, |acc, (v, _)| acc ^ assignment[v]);
                lhs != eq.constant
            })
            .expect("unsatisfied system has a violated equation");
        return Err(TreeError::Conflict(bad.point.clone()));
    }
    Ok(assignment)
}

/// Per-point residue-theorem sums for the quaternion symbol (f, g): the sum
/// over the curves through each point of the point-residue of the symbol's
/// tame residue along that curve. Identically zero — the property the whole
/// obstruction construction rests on.
pub fn reciprocity_check(
    config: &SurfaceConfig,
    f: &MonomialElement,
    g: &MonomialElement,
) -> Result<Vec<(PointId, bool)>, TorsorError> {
    let mut residues: BTreeMap<CurveId, crate::kernel::CurveFnClass> = BTreeMap::new();
    for curve in &config.curves {
        let fv = ValuedUnit::new(
            f.valuation(&curve.id),
            UnitSqClass::CurveFn(restrict_to_curve(config, f, &curve.id)?),
        );
        let gv = ValuedUnit::new(
            g.valuation(&curve.id),
            UnitSqClass::CurveFn(restrict_to_curve(config, g, &curve.id)?),
        );
        match tame_residue(&fv, &gv)? {
            UnitSqClass::CurveFn(c) => {
                residues.insert(curve.id.clone(), c);
            }
            _ => unreachable!("curve restrictions produce curve classes"),
        }
    }
    Ok(config
        .points
        .iter()
        .map(|point| {
            let sum = point
                .curves
                .iter()
                .filter_map(|c| residues.get(c))
                .fold(false, |acc, class| acc ^ class.parity_at(&point.id));
            (point.id.clone(), sum)
        })
        .collect())
}

/// A nonempty subset of ℤ/2 of residues achievable at one place of the
/// base curve's function field.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeilSubset {
    Zero,
    One,
    Both,
}

impl WeilSubset {
    fn minimum(self) -> bool {
        matches!(self, WeilSubset::One)
    }

    fn is_both(self) -> bool {
        matches!(self, WeilSubset::Both)
    }
}

/// One place's achievable residues at the Weil (base-curve) level.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeilPlace {
    pub place: String,
    pub subset: WeilSubset,
}

/// Outcome of the coarse place-level obstruction: can residues be chosen
/// with total sum zero?
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WeilOutcome {
    Feasible { selection: Vec<bool> },
    /// All subsets are singletons and their forced sum is 1.
    Infeasible { forced_sum: bool },
}

/// Evaluate the place-level obstruction. Infeasible exactly when every
/// subset is a singleton and the forced total is 1; any two-element place can
/// absorb the parity. (Empty subsets are unrepresentable by construction.)
pub fn weil_obstruction(places: &[WeilPlace]) -> WeilOutcome {
    let mut selection: Vec<bool> = places.iter().map(|p| p.subset.minimum()).collect();
    let sum = selection.iter().fold(false, |acc, &x| acc ^ x);
    if !sum {
        return WeilOutcome::Feasible { selection };
    }
    if let Some(i) = places.iter().position(|p| p.subset.is_both()) {
        selection[i] = !selection[i];
        return WeilOutcome::Feasible { selection };
    }
    WeilOutcome::Infeasible { forced_sum: sum }
}

/// Why place-level data could not be derived from a problem.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeilDeriveError {
    #[error("place-level comparison needs a semi-global base")]
    NotSemiGlobal,
    #[error("place-level comparison needs a separably closed base residue field")]
    FiniteBase,
    #[error("no local points along horizontal curve {0}")]
    Unsolvable(CurveId),
    #[error("residue set undetermined along curve {0}")]
    Undetermined(CurveId),
    #[error(
        "complete curve {0} carries an odd-degree residue class, \
         so the place-level collapse does not apply"
    )]
    OddVerticalClass(CurveId),
    #[error(transparent)]
    Torsor(#[from] TorsorError),
}

/// Project the per-curve residue sets of the horizontal curves to the base
/// curve's places. A horizontal curve is the closure of one closed point of
/// the generic fiber; corestricting a residue class to the base field keeps
/// exactly the parity of its divisor degree, so each achievable class
/// collapses to one bit and each curve to a subset of ℤ/2.
///
/// The collapse is only offered when an infeasible outcome is a sound
/// certificate. Summing the crossing-point constraints over every declared
/// point counts each curve's selected class once per point it meets, i.e.
/// contributes that class's degree parity — the place bit. Vertical curves
/// are complete, so on an actual surface their achievable classes restrict
/// rational functions and have even degree; their contributions cancel from
/// the total, which leaves exactly the sum of the horizontal place bits. Any
/// selection satisfying the point-level system therefore picks place bits
/// summing to zero, and a forced sum of one proves the point-level system
/// infeasible. When some vertical class has odd degree the cancellation —
/// and with it the soundness of an infeasible answer — is lost, and this
/// returns [`WeilDeriveError::OddVerticalClass`] instead of data.
///
/// A vertical curve with no local points is skipped rather than rejected:
/// the local obstruction already decides the verdict there. A horizontal
/// curve with no local points has an empty achievable subset, which the
/// place-level obstruction does not represent. Bases with finite residue
/// fields are rejected because their residue classes do not collapse to a
/// single parity bit.
pub fn derive_weil_places(problem: &TorsorProblem) -> Result<Vec<WeilPlace>, WeilDeriveError> {
    if problem.config.base_kind != crate::surface::BaseKind::SemiGlobal {
        return Err(WeilDeriveError::NotSemiGlobal);
    }
    if problem.config.base_residue_field != ResidueFieldKind::SeparablyClosed {
        return Err(WeilDeriveError::FiniteBase);
    }
    let odd = |class: &CurveFnClass| class.odd_points.len() % 2 == 1;
    let mut places = Vec::new();
    for curve in &problem.config.curves {
        let horizontal = curve.kind == crate::surface::CurveKind::Horizontal;
        let set = match residue_value_set(problem, &curve.id) {
            Ok(set) => set,
            Err(TorsorError::Unsolvable(c)) => {
                if horizontal {
                    return Err(WeilDeriveError::Unsolvable(c));
                }
                continue;
            }
            Err(TorsorError::Undetermined(c)) => return Err(WeilDeriveError::Undetermined(c)),
            Err(other) => return Err(WeilDeriveError::Torsor(other)),
        };
        if !horizontal {
            if odd(&set.base) || set.offset.as_ref().is_some_and(odd) {
                return Err(WeilDeriveError::OddVerticalClass(curve.id.clone()));
            }
            continue;
        }
        let base_bit = odd(&set.base);
        let subset = match &set.offset {
            Some(off) if odd(off) => WeilSubset::Both,
            _ if base_bit => WeilSubset::One,
            _ => WeilSubset::Zero,
        };
        places.push(WeilPlace {
            place: curve.id.0.clone(),
            subset,
        });
    }
    Ok(places)
}

/// Certificate for non-existence.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoCertificate {
    /// Some completed local field admits no solutions at all.
    LocalObstruction { curve: CurveId },
    /// Every residue selection violates the residue theorem; the named
    /// points' equations sum to 0 = 1.
    SystemInfeasible { certificate: InfeasibleCertificate },
}

/// Which norm form a trivial-solvability witness splits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitElement {
    A,
    B,
    Ab,
}

impl std::fmt::Display for SplitElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplitElement::A => "a",
            SplitElement::B => "b",
            SplitElement::Ab => "ab",
        })
    }
}

/// Certificate for existence.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// One of a, b, ab is a global square, splitting its norm form.
    SplitNormForm { element: SplitElement },
    /// A residue selection satisfying every equation, under the descent
    /// hypotheses (everywhere solvable, exact sets, separably closed base).
    ResidueSelection { selection: BTreeMap<CurveId, bool> },
}

/// Why no verdict could be reached.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InconclusiveReason {
    InvalidInput { violations: Vec<ProblemViolation> },
    UndeterminedResidues { curves: Vec<CurveId> },
    /// The system is satisfiable but the existence hypotheses fail.
    ExistenceConditionsUnmet {
        unknown_solvability: Vec<CurveId>,
        inexact_sets: Vec<CurveId>,
        base_not_separably_closed: bool,
    },
    InternalError { message: String },
}

/// Final three-valued answer with its certificate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    NoRationalPoint { certificate: NoCertificate },
    HasRationalPoint { witness: Witness },
    Inconclusive { reason: InconclusiveReason },
}

impl Verdict {
    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::NoRationalPoint { .. })
    }

    pub fn is_has(&self) -> bool {
        matches!(self, Verdict::HasRationalPoint { .. })
    }
}

/// Decide the problem: validation, trivial splitting, local solvability,
/// the residue system, and the descent hypotheses, in that order. Total —
/// every failure mode folds into `Inconclusive`.
pub fn verdict(problem: &TorsorProblem) -> Verdict {
    let violations = problem.validate();
    if !violations.is_empty() {
        return Verdict::Inconclusive {
            reason: InconclusiveReason::InvalidInput { violations },
        };
    }

    if trivially_solvable(problem) == Ternary::Yes {
        let global_square = |f: &MonomialElement| {
            !f.nonsquare_tag && f.exponents.values().all(|e| e.rem_euclid(2) == 0)
        };
        let element = if global_square(&problem.a) {
            SplitElement::A
        } else if global_square(&problem.b) {
            SplitElement::B
        } else {
            SplitElement::Ab
        };
        return Verdict::HasRationalPoint {
            witness: Witness::SplitNormForm { element },
        };
    }

    let survey = match survey(problem) {
        Ok(s) => s,
        Err(e) => {
            return Verdict::Inconclusive {
                reason: InconclusiveReason::InternalError {
                    message: e.to_string(),
                },
            }
        }
    };

    if let Some(curve) = survey.unsolvable.first() {
        return Verdict::NoRationalPoint {
            certificate: NoCertificate::LocalObstruction {
                curve: curve.clone(),
            },
        };
    }
    if !survey.undetermined.is_empty() {
        return Verdict::Inconclusive {
            reason: InconclusiveReason::UndeterminedResidues {
                curves: survey.undetermined.clone(),
            },
        };
    }

    let system = assemble_system(problem, &survey);
    match solve(&system) {
        SolveOutcome::Infeasible { certificate } => Verdict::NoRationalPoint {
            certificate: NoCertificate::SystemInfeasible { certificate },
        },
        SolveOutcome::Feasible { assignment } => {
            let unknown_solvability: Vec<CurveId> =
                system.unknown_solvability.iter().cloned().collect();
            let inexact_sets: Vec<CurveId> = system.inexact.iter().cloned().collect();
            let base_not_separably_closed = !problem.config.separably_closed_base();
            if unknown_solvability.is_empty()
                && inexact_sets.is_empty()
                && !base_not_separably_closed
            {
                Verdict::HasRationalPoint {
                    witness: Witness::ResidueSelection {
                        selection: assignment,
                    },
                }
            } else {
                Verdict::Inconclusive {
                    reason: InconclusiveReason::ExistenceConditionsUnmet {
                        unknown_solvability,
                        inexact_sets,
                        base_not_separably_closed,
                    },
                }
            }
        }
    }
}
