//! Local analysis of the torsor equation (X₁²−aY₁²)(X₂²−bY₂²)(X₃²−abY₃²) = c.
//!
//! For each declared curve γ the equation is read in the completed field at
//! γ's generic point. Two questions are answered from parities and square
//! classes alone: whether local points exist there, and which residues the
//! quaternion class (X₁²−aY₁², b) evaluated at local points can have. The
//! achievable residues always form a coset-like set {base} or
//! {base, base·∂((a,b))}; the set is *exact* (every member achieved) when the
//! curve's residue field has small enough cohomological dimension, and is
//! otherwise a sound containment.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{
    sqclass_mul, tame_residue, CurveFnClass, CurveId, KernelError, Ternary, UnitSqClass,
    ValuedUnit,
};
use crate::surface::{blowup, restrict_to_curve, MonomialElement, SurfaceConfig, SurfaceError};

/// Which of the three defining elements a diagnostic refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementRole {
    A,
    B,
    C,
}

impl std::fmt::Display for ElementRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ElementRole::A => "a",
            ElementRole::B => "b",
            ElementRole::C => "c",
        })
    }
}

/// The equation over a fixed configuration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsorProblem {
    pub config: SurfaceConfig,
    pub a: MonomialElement,
    pub b: MonomialElement,
    pub c: MonomialElement,
}

/// Problem-level defects (configuration defects are included by reference).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemViolation {
    Config(crate::surface::Violation),
    UnknownCurveInElement { element: ElementRole, curve: CurveId },
    NonsquareTagRequiresFiniteBase { element: ElementRole },
}

impl std::fmt::Display for ProblemViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemViolation::Config(v) => v.fmt(f),
            ProblemViolation::UnknownCurveInElement { element, curve } => {
                write!(f, "element {element} has an exponent on unknown curve {curve}")
            }
            ProblemViolation::NonsquareTagRequiresFiniteBase { element } => {
                write!(f, "element {element} carries a non-square tag over a separably closed base")
            }
        }
    }
}

impl TorsorProblem {
    pub fn new(
        config: SurfaceConfig,
        a: MonomialElement,
        b: MonomialElement,
        c: MonomialElement,
    ) -> Self {
        TorsorProblem { config, a, b, c }
    }

    /// The product a·b as a monomial.
    pub fn ab(&self) -> MonomialElement {
        self.a.mul(&self.b)
    }

    pub fn element(&self, role: ElementRole) -> &MonomialElement {
        match role {
            ElementRole::A => &self.a,
            ElementRole::B => &self.b,
            ElementRole::C => &self.c,
        }
    }

    /// Configuration defects plus element-level ones.
    pub fn validate(&self) -> Vec<ProblemViolation> {
        let mut out: Vec<ProblemViolation> = crate::surface::validate(&self.config)
            .into_iter()
            .map(ProblemViolation::Config)
            .collect();
        for role in [ElementRole::A, ElementRole::B, ElementRole::C] {
            let f = self.element(role);
            for curve in f.exponents.keys() {
                if !self.config.has_curve(curve) {
                    out.push(ProblemViolation::UnknownCurveInElement {
                        element: role,
                        curve: curve.clone(),
                    });
                }
            }
            if f.nonsquare_tag && self.config.separably_closed_base() {
                out.push(ProblemViolation::NonsquareTagRequiresFiniteBase { element: role });
            }
        }
        out
    }

    /// Blow up a declared point, transporting a, b and c.
    pub fn blowup(&self, center: &crate::kernel::PointId) -> Result<TorsorProblem, SurfaceError> {
        let elems = [self.a.clone(), self.b.clone(), self.c.clone()];
        let (config, mut moved, _) = blowup(&self.config, center, &elems)?;
        let c = moved.pop().expect("three elements in, three out");
        let b = moved.pop().expect("three elements in, three out");
        let a = moved.pop().expect("three elements in, three out");
        Ok(TorsorProblem { config, a, b, c })
    }
}

/// Local solvability of the equation in the completed field at a curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solvability {
    Solvable,
    Unsolvable,
    Unknown,
}

/// Errors from the residue-set case analysis.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsorError {
    /// The equation has no local points at this curve, so no residue set.
    #[error("no local points along curve {0}")]
    Unsolvable(CurveId),
    /// Both valuations even with the squareness of `a` undecidable: the two
    /// candidate value sets cannot be merged into a lawful containment.
    #[error("residue case undetermined along curve {0}")]
    Undetermined(CurveId),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The achievable residues of the quaternion class along one curve.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ResidueSet {
    pub curve: CurveId,
    /// Always-achievable anchor element.
    pub base: CurveFnClass,
    /// When present, the second element is base·offset; the offset equals
    /// the residue of the symbol (a, b) along the curve.
    pub offset: Option<CurveFnClass>,
    /// True when every listed element is achieved by some local point;
    /// false for a containment only.
    pub exact: bool,
}

impl ResidueSet {
    /// The set's elements, one or two classes.
    pub fn elements(&self) -> Vec<CurveFnClass> {
        match &self.offset {
            None => vec![self.base.clone()],
            Some(off) => {
                let second = sqclass_mul(
                    &UnitSqClass::CurveFn(self.base.clone()),
                    &UnitSqClass::CurveFn(off.clone()),
                )
                .expect("base and offset live on the same curve");
                match second {
                    UnitSqClass::CurveFn(c) => vec![self.base.clone(), c],
                    _ => unreachable!("product of curve classes is a curve class"),
                }
            }
        }
    }

    pub fn cardinality(&self) -> usize {
        if self.offset.is_some() {
            2
        } else {
            1
        }
    }
}

/// One curve's local data: the three elements with integer valuations and
/// restricted unit classes.
#[derive(Clone, Debug)]
pub struct LocalTriple {
    pub a: ValuedUnit,
    pub b: ValuedUnit,
    pub c: ValuedUnit,
}

/// Residue set in raw square-class form (shared by the curve-level analysis
/// and the finite-field sampling oracle).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalResidueSet {
    pub base: UnitSqClass,
    pub offset: Option<UnitSqClass>,
    pub exact: bool,
}

impl LocalResidueSet {
    pub fn elements(&self) -> Vec<UnitSqClass> {
        match &self.offset {
            None => vec![self.base.clone()],
            Some(off) => vec![
                self.base.clone(),
                sqclass_mul(&self.base, off).expect("same-field classes"),
            ],
        }
    }
}

/// Failure modes of the shared local case analysis.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalCaseError {
    #[error("no local points")]
    Unsolvable,
    #[error("undetermined residue case")]
    Undetermined,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn squareness(v: &ValuedUnit) -> Ternary {
    v.to_local_class().is_square()
}

fn odd(v: i64) -> bool {
    v.rem_euclid(2) == 1
}

/// Local solvability from valuations and square classes. `cd2_le_1` asserts
/// that the residue field of the valued field has 2-cohomological dimension
/// at most 1 (true for separably closed and finite residue fields).
pub fn local_solvability(t: &LocalTriple, cd2_le_1: bool) -> Result<Solvability, KernelError> {
    let sq_a = squareness(&t.a);
    let sq_b = squareness(&t.b);
    let ab = ValuedUnit::new(
        t.a.valuation + t.b.valuation,
        sqclass_mul(&t.a.unit, &t.b.unit)?,
    );
    let sq_ab = squareness(&ab);

    // Obstructed exactly when a, b, ab are all non-squares (forcing every
    // norm factor to even valuation) while c has odd valuation.
    let parity_blocks = !odd(t.a.valuation) && !odd(t.b.valuation) && odd(t.c.valuation);
    let obstructed = if !parity_blocks {
        Ternary::No
    } else if sq_a.is_no() && sq_b.is_no() && sq_ab.is_no() {
        Ternary::Yes
    } else if sq_a.is_yes() || sq_b.is_yes() || sq_ab.is_yes() {
        Ternary::No
    } else {
        Ternary::Unknown
    };

    Ok(match obstructed {
        Ternary::Yes => Solvability::Unsolvable,
        Ternary::No if cd2_le_1 => Solvability::Solvable,
        _ => Solvability::Unknown,
    })
}

/// The achievable-residue case analysis over any discretely valued field.
///
/// Cases, in order: everything a unit → {trivial} exact; definite local
/// unsolvability → error; b or ab square → {trivial} exact; a square →
/// {∂((c,b))} exact; both valuations even with a non-square → {trivial}
/// exact; v(a) even, v(b) odd → {∂((c,b)), ∂((ac,b))}; v(a) odd →
/// {trivial, ∂((a,b))}. The two-element sets are exact when `cd2_le_1` holds
/// and the squareness hypotheses are decided, otherwise containments.
pub fn local_residue_value_set(
    t: &LocalTriple,
    cd2_le_1: bool,
) -> Result<LocalResidueSet, LocalCaseError> {
    let identity = t.a.unit.identity_like();
    let sq_a = squareness(&t.a);
    let sq_b = squareness(&t.b);
    let ab = ValuedUnit::new(
        t.a.valuation + t.b.valuation,
        sqclass_mul(&t.a.unit, &t.b.unit)?,
    );
    let sq_ab = squareness(&ab);

    // All units: the class is unramified here whatever the squareness
    // pattern, since a local point forces every norm factor to even
    // valuation or reduces the class to a symbol of two units.
    if t.a.valuation == 0 && t.b.valuation == 0 && t.c.valuation == 0 {
        return Ok(LocalResidueSet {
            base: identity,
            offset: None,
            exact: true,
        });
    }

    if !odd(t.a.valuation)
        && !odd(t.b.valuation)
        && odd(t.c.valuation)
        && sq_a.is_no()
        && sq_b.is_no()
        && sq_ab.is_no()
    {
        return Err(LocalCaseError::Unsolvable);
    }

    if sq_b.is_yes() || sq_ab.is_yes() {
        return Ok(LocalResidueSet {
            base: identity,
            offset: None,
            exact: true,
        });
    }

    if sq_a.is_yes() {
        return Ok(LocalResidueSet {
            base: tame_residue(&t.c, &t.b)?,
            offset: None,
            exact: true,
        });
    }

    if !odd(t.a.valuation) && !odd(t.b.valuation) {
        return match sq_a {
            Ternary::No => Ok(LocalResidueSet {
                base: identity,
                offset: None,
                exact: true,
            }),
            _ => Err(LocalCaseError::Undetermined),
        };
    }

    let offset = tame_residue(&t.a, &t.b)?;
    let (base, hypotheses_decided) = if odd(t.a.valuation) {
        // b (and then ab) must be non-square for exactness; odd v(b) decides.
        (identity, odd(t.b.valuation) || sq_b.is_no())
    } else {
        // v(a) even, v(b) odd: a must be non-square for exactness.
        (tame_residue(&t.c, &t.b)?, sq_a.is_no())
    };
    let exact = cd2_le_1 && hypotheses_decided;
    let offset = match offset.is_trivial() {
        Ternary::Yes => None,
        _ => Some(offset),
    };
    Ok(LocalResidueSet {
        base,
        offset,
        exact,
    })
}

fn local_triple(problem: &TorsorProblem, curve: &CurveId) -> Result<LocalTriple, TorsorError> {
    let wrap = |f: &MonomialElement| -> Result<ValuedUnit, TorsorError> {
        Ok(ValuedUnit::new(
            f.valuation(curve),
            UnitSqClass::CurveFn(restrict_to_curve(&problem.config, f, curve)?),
        ))
    };
    Ok(LocalTriple {
        a: wrap(&problem.a)?,
        b: wrap(&problem.b)?,
        c: wrap(&problem.c)?,
    })
}

/// Is the equation trivially solvable over the ambient field: Yes when one of
/// a, b, ab is a global square (the corresponding norm form is then split),
/// Unknown otherwise — this test alone never certifies non-existence.
pub fn trivially_solvable(problem: &TorsorProblem) -> Ternary {
    let global_square = |f: &MonomialElement| {
        !f.nonsquare_tag && f.exponents.values().all(|e| e.rem_euclid(2) == 0)
    };
    if global_square(&problem.a) || global_square(&problem.b) || global_square(&problem.ab()) {
        Ternary::Yes
    } else {
        Ternary::Unknown
    }
}

/// Local solvability along one declared curve.
pub fn local_solvable(problem: &TorsorProblem, curve: &CurveId) -> Result<Solvability, TorsorError> {
    let t = local_triple(problem, curve)?;
    Ok(local_solvability(
        &t,
        problem.config.separably_closed_base(),
    )?)
}

/// The achievable-residue set along one declared curve.
pub fn residue_value_set(
    problem: &TorsorProblem,
    curve: &CurveId,
) -> Result<ResidueSet, TorsorError> {
    let t = local_triple(problem, curve)?;
    let local = local_residue_value_set(&t, problem.config.separably_closed_base()).map_err(
        |e| match e {
            LocalCaseError::Unsolvable => TorsorError::Unsolvable(curve.clone()),
            LocalCaseError::Undetermined => TorsorError::Undetermined(curve.clone()),
            LocalCaseError::Kernel(k) => TorsorError::Kernel(k),
        },
    )?;
    let as_curve = |u: UnitSqClass| -> CurveFnClass {
        match u {
            UnitSqClass::CurveFn(c) => c,
            _ => unreachable!("curve-level analysis produces curve classes"),
        }
    };
    Ok(ResidueSet {
        curve: curve.clone(),
        base: as_curve(local.base),
        offset: local.offset.map(as_curve),
        exact: local.exact,
    })
}
