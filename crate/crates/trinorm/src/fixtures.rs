//! Worked examples with certified verdicts, and the generic counterexample
//! construction on any configuration whose dual graph contains a triangle.
//!
//! Each fixture is a complete problem document plus the verdict the analysis
//! must reach on it; the regression suite replays all of them. The names are
//! part of the command-line interface.

use thiserror::Error;

use crate::config::ConfigDocument;
use crate::kernel::{CurveId, ResidueFieldKind};
use crate::kodaira::{fiber_shape, FiberShape, KodairaType};
use crate::obstruction::Verdict;
use crate::surface::{
    triangles, BaseKind, ClosedPoint, Curve, CurveKind, MonomialElement, SurfaceConfig,
};
use crate::torsor::TorsorProblem;

/// The two decided outcomes a fixture can certify.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpectedVerdict {
    NoRationalPoint,
    HasRationalPoint,
}

impl ExpectedVerdict {
    pub fn matches(&self, verdict: &Verdict) -> bool {
        match self {
            ExpectedVerdict::NoRationalPoint => verdict.is_no(),
            ExpectedVerdict::HasRationalPoint => verdict.is_has(),
        }
    }
}

impl std::fmt::Display for ExpectedVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpectedVerdict::NoRationalPoint => write!(f, "no-rational-point"),
            ExpectedVerdict::HasRationalPoint => write!(f, "has-rational-point"),
        }
    }
}

/// A named example problem with its certified verdict.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub document: ConfigDocument,
    pub expected: ExpectedVerdict,
}

/// Every fixture name, in presentation order.
pub const NAMES: [&str; 7] = [
    "triangle-semilocal",
    "p1-dvr-odd",
    "p1-dvr-even",
    "i3-elliptic",
    "gabber-local",
    "tree-cor62",
    "weil-insufficient",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`; known fixtures: {}", NAMES.join(", "))]
    Unknown(String),
}

/// Look a fixture up by name.
pub fn fixture(name: &str) -> Result<Fixture, FixtureError> {
    match name {
        "triangle-semilocal" => Ok(triangle_semilocal()),
        "p1-dvr-odd" => Ok(p1_dvr(true)),
        "p1-dvr-even" => Ok(p1_dvr(false)),
        "i3-elliptic" => Ok(i3_elliptic()),
        "gabber-local" => Ok(gabber_local()),
        "tree-cor62" => Ok(tree_cor62()),
        "weil-insufficient" => Ok(weil_insufficient()),
        other => Err(FixtureError::Unknown(other.to_string())),
    }
}

/// All fixtures, in [`NAMES`] order.
pub fn all() -> Vec<Fixture> {
    NAMES
        .iter()
        .map(|n| fixture(n).expect("every listed name resolves"))
        .collect()
}

fn curve(id: &str, name: &str, kind: CurveKind) -> Curve {
    Curve::new(id, name, kind, true)
}

fn point(id: &str, on: [&str; 2]) -> ClosedPoint {
    let a = CurveId::new(on[0]);
    let b = CurveId::new(on[1]);
    ClosedPoint::new(id, &[&a, &b])
}

fn element(pairs: &[(&str, i64)]) -> MonomialElement {
    let ids: Vec<(CurveId, i64)> = pairs.iter().map(|(id, e)| (CurveId::new(*id), *e)).collect();
    MonomialElement::from_exponents(&ids.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>())
}

fn make(
    name: &'static str,
    summary: &'static str,
    problem: TorsorProblem,
    expected: ExpectedVerdict,
) -> Fixture {
    debug_assert!(
        problem.validate().is_empty(),
        "fixture {name} must be valid: {:?}",
        problem.validate()
    );
    Fixture {
        name,
        summary,
        document: ConfigDocument::from_problem(&problem),
        expected,
    }
}

/// Three exceptional lines pairwise crossing (a triangle) over a local base;
/// a and b each vanish on two of the lines, c on all three. The three
/// crossing-point constraints sum to 0 = 1.
fn triangle_semilocal() -> Fixture {
    let config = SurfaceConfig {
        base_kind: BaseKind::Local,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves: vec![
            curve("pi1", "first line", CurveKind::Exceptional),
            curve("pi2", "second line", CurveKind::Exceptional),
            curve("pi3", "third line", CurveKind::Exceptional),
        ],
        points: vec![
            point("m1", ["pi2", "pi3"]),
            point("m2", ["pi1", "pi3"]),
            point("m3", ["pi1", "pi2"]),
        ],
    };
    let problem = TorsorProblem::new(
        config,
        element(&[("pi2", 1), ("pi3", 1)]),
        element(&[("pi3", 1), ("pi1", 1)]),
        element(&[("pi1", 1), ("pi2", 1), ("pi3", 1)]),
    );
    make(
        "triangle-semilocal",
        "triangle of exceptional lines; the three crossing constraints are jointly unsatisfiable",
        problem,
        ExpectedVerdict::NoRationalPoint,
    )
}

/// The projective line over a power-series base: one special fiber, three
/// disjoint sections. With c = t (odd fiber multiplicity) the fiber curve is
/// locally obstructed; with c = t² every residue set collapses and a point
/// exists.
fn p1_dvr(odd: bool) -> Fixture {
    let config = SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves: vec![
            curve("eta", "special fiber", CurveKind::SpecialFiber),
            curve("x0", "section at 0", CurveKind::Horizontal),
            curve("x1", "section at 1", CurveKind::Horizontal),
            curve("xinf", "section at infinity", CurveKind::Horizontal),
        ],
        points: vec![
            point("p0", ["eta", "x0"]),
            point("p1", ["eta", "x1"]),
            point("pinf", ["eta", "xinf"]),
        ],
    };
    let problem = TorsorProblem::new(
        config,
        element(&[("x0", 1), ("xinf", -1)]),
        element(&[("x1", 1), ("xinf", -1)]),
        element(&[("eta", if odd { 1 } else { 2 })]),
    );
    if odd {
        make(
            "p1-dvr-odd",
            "projective line over a power-series base, c with odd fiber multiplicity: \
             locally obstructed along the fiber",
            problem,
            ExpectedVerdict::NoRationalPoint,
        )
    } else {
        make(
            "p1-dvr-even",
            "projective line over a power-series base, c with even fiber multiplicity: \
             every residue set is trivial and a point exists",
            problem,
            ExpectedVerdict::HasRationalPoint,
        )
    }
}

/// The cycle fiber of a multiplicative elliptic degeneration, fed through the
/// generic counterexample construction: every curve locally solvable, no
/// rational point.
fn i3_elliptic() -> Fixture {
    let FiberShape::Crossings { config, .. } = fiber_shape(KodairaType::I(3)) else {
        unreachable!("a 3-cycle fiber is a crossing configuration");
    };
    let problem =
        synthesize_counterexample(&config).expect("the 3-cycle contains a triangle");
    make(
        "i3-elliptic",
        "3-cycle special fiber of an elliptic fibration with synthesized sections: \
         solvable everywhere, globally obstructed",
        problem,
        ExpectedVerdict::NoRationalPoint,
    )
}

/// The triangle of exceptional lines in the resolution of a threefold point,
/// with coefficient multiplicities (2,3,3)/(3,2,3)/(5,5,5) and the strict
/// transforms of the coordinate hyperplane sections and of a generic
/// hyperplane as horizontal curves.
fn gabber_local() -> Fixture {
    let mut curves = vec![
        curve("l-x", "exceptional line over x", CurveKind::Exceptional),
        curve("l-y", "exceptional line over y", CurveKind::Exceptional),
        curve("l-z", "exceptional line over z", CurveKind::Exceptional),
    ];
    let mut points = vec![
        point("p-xy", ["l-x", "l-y"]),
        point("p-xz", ["l-x", "l-z"]),
        point("p-yz", ["l-y", "l-z"]),
    ];
    for axis in ["x", "y", "z"] {
        for k in 1..=4 {
            let id = format!("t{axis}-{k}");
            curves.push(curve(
                &id,
                &format!("transform {k} over {axis}"),
                CurveKind::Horizontal,
            ));
            let l = CurveId::new(format!("l-{axis}"));
            let t = CurveId::new(&id);
            points.push(ClosedPoint::new(format!("q-{axis}-{k}"), &[&l, &t]));
        }
        let w = format!("w-{axis}");
        curves.push(curve(
            &w,
            &format!("generic section over {axis}"),
            CurveKind::Horizontal,
        ));
        let l = CurveId::new(format!("l-{axis}"));
        let wid = CurveId::new(&w);
        points.push(ClosedPoint::new(format!("v-{axis}"), &[&l, &wid]));
    }
    let config = SurfaceConfig {
        base_kind: BaseKind::Local,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves,
        points,
    };
    let t_range = |axis: &str| -> Vec<(String, i64)> {
        (1..=4).map(|k| (format!("t{axis}-{k}"), 1)).collect()
    };
    let with = |base: &[(&str, i64)], extra: &[Vec<(String, i64)>]| -> MonomialElement {
        let mut pairs: Vec<(CurveId, i64)> = base
            .iter()
            .map(|(id, e)| (CurveId::new(*id), *e))
            .collect();
        for group in extra {
            pairs.extend(group.iter().map(|(id, e)| (CurveId::new(id), *e)));
        }
        MonomialElement::from_exponents(&pairs.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>())
    };
    let a = with(
        &[("l-x", 2), ("l-y", 3), ("l-z", 3)],
        &[t_range("y"), t_range("z")],
    );
    let b = with(
        &[("l-x", 3), ("l-y", 2), ("l-z", 3)],
        &[t_range("x"), t_range("z")],
    );
    let c = with(
        &[
            ("l-x", 5),
            ("l-y", 5),
            ("l-z", 5),
            ("w-x", 1),
            ("w-y", 1),
            ("w-z", 1),
        ],
        &[t_range("x"), t_range("y"), t_range("z")],
    );
    make(
        "gabber-local",
        "resolved threefold point whose exceptional locus is a triangle of lines; \
         coefficient multiplicities force an unsatisfiable crossing system",
        TorsorProblem::new(config, a, b, c),
        ExpectedVerdict::NoRationalPoint,
    )
}

/// The projective line over a power-series base, blown up at the origin of
/// the special fiber: the fiber becomes a two-component chain (strict
/// transform f0, exceptional curve e1), and the three sections at 0, 1 and
/// infinity survive, the first now crossing e1. Every element is the divisor
/// of an actual function on this model: a is the coordinate function
/// (section at 0 + exceptional curve − section at infinity), b is the base
/// uniformizer (the whole fiber f0 + e1), c is coordinate + 1 (section at
/// 1 − section at infinity). The dual graph is a tree, the residue system is
/// feasible, and propagation produces a selection witnessing a point.
fn tree_cor62() -> Fixture {
    let config = SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves: vec![
            curve("f0", "strict transform of the fiber", CurveKind::SpecialFiber),
            curve("e1", "exceptional curve of the blowup", CurveKind::SpecialFiber),
            curve("s0", "section at 0", CurveKind::Horizontal),
            curve("s1", "section at 1", CurveKind::Horizontal),
            curve("sinf", "section at infinity", CurveKind::Horizontal),
        ],
        points: vec![
            point("n0", ["f0", "e1"]),
            point("q0", ["e1", "s0"]),
            point("q1", ["f0", "s1"]),
            point("qinf", ["f0", "sinf"]),
        ],
    };
    let problem = TorsorProblem::new(
        config,
        element(&[("s0", 1), ("e1", 1), ("sinf", -1)]),
        element(&[("f0", 1), ("e1", 1)]),
        element(&[("s1", 1), ("sinf", -1)]),
    );
    make(
        "tree-cor62",
        "blown-up projective line whose fiber is a two-component chain: the \
         tree-shaped system propagates to a residue selection and a rational point",
        problem,
        ExpectedVerdict::HasRationalPoint,
    )
}

/// A triangle fiber with three sections, all crossing the first component:
/// the element structure is a = π₂π₃, b = π₃π₁, c = π₁π₂π₃ where πᵢ has
/// divisor Lᵢ + Vᵢ. The three triangle constraints sum to 0 = 1, so the
/// point-level system is infeasible; but each horizontal place collapses to
/// a subset of ℤ/2 that either is {0} or can absorb parity, so the
/// place-level obstruction stays feasible and certifies nothing.
fn weil_insufficient() -> Fixture {
    let config = SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves: vec![
            curve("L1", "cycle component 1", CurveKind::SpecialFiber),
            curve("L2", "cycle component 2", CurveKind::SpecialFiber),
            curve("L3", "cycle component 3", CurveKind::SpecialFiber),
            curve("V1", "first section through component 1", CurveKind::Horizontal),
            curve("V2", "second section through component 1", CurveKind::Horizontal),
            curve("V3", "third section through component 1", CurveKind::Horizontal),
        ],
        points: vec![
            point("m1", ["L2", "L3"]),
            point("m2", ["L1", "L3"]),
            point("m3", ["L1", "L2"]),
            point("h1", ["L1", "V1"]),
            point("h2", ["L1", "V2"]),
            point("h3", ["L1", "V3"]),
        ],
    };
    let problem = TorsorProblem::new(
        config,
        element(&[("L2", 1), ("L3", 1), ("V2", 1), ("V3", 1)]),
        element(&[("L3", 1), ("L1", 1), ("V3", 1), ("V1", 1)]),
        element(&[
            ("L1", 1),
            ("L2", 1),
            ("L3", 1),
            ("V1", 1),
            ("V2", 1),
            ("V3", 1),
        ]),
    );
    make(
        "weil-insufficient",
        "triangle fiber with three sections: infeasible at the level of points \
         while feasible after collapsing each horizontal place to one bit",
        problem,
        ExpectedVerdict::NoRationalPoint,
    )
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("the configuration's dual graph contains no triangle of curves")]
    NoTriangle,
}

fn fresh_id(taken: &mut std::collections::BTreeSet<String>, base: &str) -> String {
    let mut candidate = base.to_string();
    let mut n = 1;
    while taken.contains(&candidate) {
        n += 1;
        candidate = format!("{base}-{n}");
    }
    taken.insert(candidate.clone());
    candidate
}

/// Build a problem with no rational point on any configuration containing a
/// triangle of curves L₁, L₂, L₃: add fresh sections D₁, D₂, D₃ (each
/// crossing the configuration at one fresh point, away from the triangle's
/// own crossings) and set a = π₂π₃, b = π₃π₁, c = π₁π₂π₃ where πᵢ has
/// divisor Lᵢ + Dᵢ. Every curve stays locally solvable, yet the three
/// triangle constraints sum to 0 = 1.
pub fn synthesize_counterexample(
    config: &SurfaceConfig,
) -> Result<TorsorProblem, SynthesisError> {
    let triangle = triangles(config)
        .into_iter()
        .next()
        .ok_or(SynthesisError::NoTriangle)?;
    let (legs, _crossings) = triangle;

    let mut taken: std::collections::BTreeSet<String> = config
        .curves
        .iter()
        .map(|c| c.id.to_string())
        .chain(config.points.iter().map(|p| p.id.to_string()))
        .collect();

    let mut extended = config.clone();
    // Every new section crosses the first triangle curve at its own fresh
    // point; freshness keeps the sections disjoint from each other, from the
    // triangle's crossings, and from anything already configured.
    let host = legs[0].clone();
    let mut sections: Vec<CurveId> = Vec::new();
    for i in 1..=3 {
        let cid = fresh_id(&mut taken, &format!("d{i}"));
        let pid = fresh_id(&mut taken, &format!("s{i}"));
        let section = Curve::new(
            cid.as_str(),
            &format!("synthesized section {i}"),
            CurveKind::Horizontal,
            true,
        );
        let section_id = section.id.clone();
        extended.curves.push(section);
        extended
            .points
            .push(ClosedPoint::new(pid, &[&host, &section_id]));
        sections.push(section_id);
    }

    let pi = |i: usize| -> Vec<(CurveId, i64)> {
        vec![(legs[i].clone(), 1), (sections[i].clone(), 1)]
    };
    let mono = |pairs: Vec<Vec<(CurveId, i64)>>| {
        let flat: Vec<(CurveId, i64)> = pairs.into_iter().flatten().collect();
        MonomialElement::from_exponents(&flat.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>())
    };
    let a = mono(vec![pi(1), pi(2)]);
    let b = mono(vec![pi(2), pi(0)]);
    let c = mono(vec![pi(0), pi(1), pi(2)]);
    Ok(TorsorProblem::new(extended, a, b, c))
}
