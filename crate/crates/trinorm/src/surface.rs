//! Crossing configurations on 2-dimensional regular bases.
//!
//! A configuration is a closed-world description of the curves and crossing
//! points relevant to a problem: either the special fiber plus horizontal
//! curves of a model over a henselian discrete valuation ring (`SemiGlobal`),
//! or the exceptional configuration of a resolved local singularity
//! (`Local`). Functions of the ambient field enter as monomials in the
//! declared curves; restriction to a curve and residues at points are pure
//! parity bookkeeping on that data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{CurveFnClass, CurveId, PointId, ResidueFieldKind, Ternary};

/// What the ambient 2-dimensional base is.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    /// Regular model over a henselian DVR; curves split into special-fiber
    /// components and horizontal curves.
    SemiGlobal,
    /// Resolved spectrum of a 2-dimensional henselian local ring; the
    /// declared points all lie on the exceptional configuration.
    Local,
}

/// Geometric role of a declared curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// Component of the special fiber of a semi-global model.
    SpecialFiber,
    /// Curve finite over the base (a section or multisection).
    Horizontal,
    /// Exceptional curve of a blow-up or of a local resolution.
    Exceptional,
}

impl CurveKind {
    /// Vertical curves are the non-horizontal ones: fiber components and
    /// exceptional curves.
    pub fn is_vertical(self) -> bool {
        !matches!(self, CurveKind::Horizontal)
    }
}

/// A declared codimension-1 curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    pub id: CurveId,
    pub name: String,
    pub kind: CurveKind,
    /// True when the curve is rational over a separably closed constant
    /// field, so square classes of its function field are decided by divisor
    /// parity (plus a constant bit over finite bases).
    pub rational: bool,
    /// Residue field at the curve's generic point; always the curve's own
    /// function field in well-formed configurations.
    pub residue_field: ResidueFieldKind,
}

impl Curve {
    pub fn new(id: impl Into<CurveId>, name: &str, kind: CurveKind, rational: bool) -> Self {
        let id = id.into();
        Curve {
            residue_field: ResidueFieldKind::CurveFunctionField(id.clone()),
            id,
            name: name.to_string(),
            kind,
            rational,
        }
    }
}

/// A declared closed point, on one curve (smooth point of interest) or two
/// (transverse crossing).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosedPoint {
    pub id: PointId,
    pub curves: Vec<CurveId>,
}

impl ClosedPoint {
    pub fn new(id: impl Into<String>, curves: &[&CurveId]) -> Self {
        ClosedPoint {
            id: PointId::new(id),
            curves: curves.iter().map(|c| (*c).clone()).collect(),
        }
    }

    pub fn is_on(&self, curve: &CurveId) -> bool {
        self.curves.contains(curve)
    }

    /// The other curve through a two-curve point, if any.
    pub fn other_curve(&self, curve: &CurveId) -> Option<&CurveId> {
        self.curves.iter().find(|c| *c != curve)
    }
}

/// A closed-world crossing configuration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceConfig {
    pub base_kind: BaseKind,
    /// Residue field of the base's closed point(s); `SeparablyClosed` or
    /// `FiniteQ1Mod4`.
    pub base_residue_field: ResidueFieldKind,
    pub curves: Vec<Curve>,
    pub points: Vec<ClosedPoint>,
}

/// Structural defects reported by [`validate`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DuplicateCurveId { curve: CurveId },
    DuplicatePointId { point: PointId },
    UnknownCurveInPoint { point: PointId, curve: CurveId },
    /// The point fails strict normal crossings: more than two incident
    /// curves, a repeated curve, or no curve at all.
    NotSnc { point: PointId, detail: String },
    /// Semi-global base: a horizontal curve must cross the vertical part of
    /// the configuration in exactly one declared point.
    DanglingHorizontal { curve: CurveId, crossings: usize },
    /// Local base: every declared point must lie on an exceptional curve.
    PointOffExceptional { point: PointId },
    /// Curve kind incompatible with the base kind.
    WrongKindForBase { curve: CurveId },
    /// A curve's residue field is not its own function field.
    BadCurveResidueField { curve: CurveId },
    /// The base residue field must be separably closed or finite.
    BadBaseResidueField,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateCurveId { curve } => write!(f, "duplicate curve id {curve}"),
            Violation::DuplicatePointId { point } => write!(f, "duplicate point id {point}"),
            Violation::UnknownCurveInPoint { point, curve } => {
                write!(f, "point {point} references unknown curve {curve}")
            }
            Violation::NotSnc { point, detail } => {
                write!(f, "point {point} is not a strict normal crossing: {detail}")
            }
            Violation::DanglingHorizontal { curve, crossings } => write!(
                f,
                "horizontal curve {curve} crosses the vertical configuration {crossings} times (expected 1)"
            ),
            Violation::PointOffExceptional { point } => {
                write!(f, "point {point} lies on no exceptional curve")
            }
            Violation::WrongKindForBase { curve } => {
                write!(f, "curve {curve} has a kind incompatible with the base")
            }
            Violation::BadCurveResidueField { curve } => {
                write!(f, "curve {curve} does not carry its own function field")
            }
            Violation::BadBaseResidueField => {
                write!(f, "base residue field must be separably closed or finite")
            }
        }
    }
}

/// Errors from surface operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("unknown curve {0}")]
    UnknownCurve(CurveId),
    #[error("unknown point {0}")]
    UnknownPoint(PointId),
    #[error("point {point} does not lie on curve {curve}")]
    PointNotOnCurve { point: PointId, curve: CurveId },
    #[error("cannot blow up {0}: not a declared point")]
    BlowupCenterMissing(PointId),
}

impl SurfaceConfig {
    pub fn curve(&self, id: &CurveId) -> Result<&Curve, SurfaceError> {
        self.curves
            .iter()
            .find(|c| &c.id == id)
            .ok_or_else(|| SurfaceError::UnknownCurve(id.clone()))
    }

    pub fn point(&self, id: &PointId) -> Result<&ClosedPoint, SurfaceError> {
        self.points
            .iter()
            .find(|p| &p.id == id)
            .ok_or_else(|| SurfaceError::UnknownPoint(id.clone()))
    }

    /// Declared points lying on `curve`, in declaration order.
    pub fn points_on(&self, curve: &CurveId) -> impl Iterator<Item = &ClosedPoint> {
        let curve = curve.clone();
        self.points.iter().filter(move |p| p.is_on(&curve))
    }

    pub fn has_curve(&self, id: &CurveId) -> bool {
        self.curves.iter().any(|c| &c.id == id)
    }

    pub fn has_point(&self, id: &PointId) -> bool {
        self.points.iter().any(|p| &p.id == id)
    }

    /// True when the base residue field is separably closed, which is what
    /// makes residue value sets exact and the existence route available.
    pub fn separably_closed_base(&self) -> bool {
        self.base_residue_field == ResidueFieldKind::SeparablyClosed
    }
}

/// Check a configuration's structural invariants; an empty list means valid.
pub fn validate(config: &SurfaceConfig) -> Vec<Violation> {
    let mut violations = Vec::new();

    if !matches!(
        config.base_residue_field,
        ResidueFieldKind::SeparablyClosed | ResidueFieldKind::FiniteQ1Mod4(_)
    ) {
        violations.push(Violation::BadBaseResidueField);
    }

    let mut seen_curves = BTreeSet::new();
    for curve in &config.curves {
        if !seen_curves.insert(curve.id.clone()) {
            violations.push(Violation::DuplicateCurveId {
                curve: curve.id.clone(),
            });
        }
        if curve.residue_field != ResidueFieldKind::CurveFunctionField(curve.id.clone()) {
            violations.push(Violation::BadCurveResidueField {
                curve: curve.id.clone(),
            });
        }
        let wrong_kind = match config.base_kind {
            BaseKind::SemiGlobal => false,
            BaseKind::Local => curve.kind == CurveKind::SpecialFiber,
        };
        if wrong_kind {
            violations.push(Violation::WrongKindForBase {
                curve: curve.id.clone(),
            });
        }
    }

    let mut seen_points = BTreeSet::new();
    for point in &config.points {
        if !seen_points.insert(point.id.clone()) {
            violations.push(Violation::DuplicatePointId {
                point: point.id.clone(),
            });
        }
        if point.curves.is_empty() || point.curves.len() > 2 {
            violations.push(Violation::NotSnc {
                point: point.id.clone(),
                detail: format!("{} incident curves", point.curves.len()),
            });
        }
        if point.curves.len() == 2 && point.curves[0] == point.curves[1] {
            violations.push(Violation::NotSnc {
                point: point.id.clone(),
                detail: "same curve listed twice".to_string(),
            });
        }
        for c in &point.curves {
            if !config.has_curve(c) {
                violations.push(Violation::UnknownCurveInPoint {
                    point: point.id.clone(),
                    curve: c.clone(),
                });
            }
        }
        if config.base_kind == BaseKind::Local {
            let on_exceptional = point.curves.iter().any(|c| {
                config
                    .curve(c)
                    .map(|cv| cv.kind == CurveKind::Exceptional)
                    .unwrap_or(false)
            });
            if !on_exceptional {
                violations.push(Violation::PointOffExceptional {
                    point: point.id.clone(),
                });
            }
        }
    }

    if config.base_kind == BaseKind::SemiGlobal {
        for curve in &config.curves {
            if curve.kind != CurveKind::Horizontal {
                continue;
            }
            let crossings = config
                .points
                .iter()
                .filter(|p| {
                    p.is_on(&curve.id)
                        && p.curves.iter().any(|c| {
                            config
                                .curve(c)
                                .map(|cv| cv.kind.is_vertical())
                                .unwrap_or(false)
                        })
                })
                .count();
            if crossings != 1 {
                violations.push(Violation::DanglingHorizontal {
                    curve: curve.id.clone(),
                    crossings,
                });
            }
        }
    }

    violations
}

/// A function of the ambient field presented through its divisor on the
/// declared curves, together with a constant square/non-square tag (only
/// meaningful over finite bases).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MonomialElement {
    /// Multiplicity along each declared curve; absent means zero.
    pub exponents: BTreeMap<CurveId, i64>,
    /// True when a non-square constant of the base residue field is folded
    /// into the element.
    pub nonsquare_tag: bool,
}

impl MonomialElement {
    pub fn one() -> Self {
        MonomialElement::default()
    }

    pub fn from_exponents(pairs: &[(&CurveId, i64)]) -> Self {
        let mut exponents = BTreeMap::new();
        for (c, e) in pairs {
            if *e != 0 {
                exponents.insert((*c).clone(), *e);
            }
        }
        MonomialElement {
            exponents,
            nonsquare_tag: false,
        }
    }

    /// Multiplicity along one curve.
    pub fn valuation(&self, curve: &CurveId) -> i64 {
        self.exponents.get(curve).copied().unwrap_or(0)
    }

    /// Product of two monomials: exponents add, tags multiply.
    pub fn mul(&self, other: &MonomialElement) -> MonomialElement {
        let mut exponents = self.exponents.clone();
        for (c, e) in &other.exponents {
            let entry = exponents.entry(c.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                exponents.remove(c);
            }
        }
        MonomialElement {
            exponents,
            nonsquare_tag: self.nonsquare_tag ^ other.nonsquare_tag,
        }
    }
}

/// Restrict the unit part of `f` along `curve` to that curve, as a square
/// class of its function field: the multiplicity at each declared point of
/// the curve is the parity of the exponents of the *other* curves through it.
pub fn restrict_to_curve(
    config: &SurfaceConfig,
    f: &MonomialElement,
    curve: &CurveId,
) -> Result<CurveFnClass, SurfaceError> {
    let cv = config.curve(curve)?;
    let mut odd_points = BTreeSet::new();
    for point in config.points_on(curve) {
        let mut parity = 0i64;
        for other in point.curves.iter().filter(|c| *c != curve) {
            parity += f.valuation(other);
        }
        if parity.rem_euclid(2) == 1 {
            odd_points.insert(point.id.clone());
        }
    }
    Ok(CurveFnClass {
        curve: curve.clone(),
        odd_points,
        nonsquare_unit: f.nonsquare_tag,
        divisor_decides: cv.rational,
        declared_trivial: None,
    })
}

/// Multiplicity parity of a curve class at one of its declared points.
pub fn point_residue(
    config: &SurfaceConfig,
    class: &CurveFnClass,
    point: &PointId,
) -> Result<bool, SurfaceError> {
    let p = config.point(point)?;
    if !p.is_on(&class.curve) {
        return Err(SurfaceError::PointNotOnCurve {
            point: point.clone(),
            curve: class.curve.clone(),
        });
    }
    Ok(class.parity_at(point))
}

/// Squareness of `f` in the completed field at the curve's generic point:
/// odd multiplicity is never square, otherwise the restricted unit class
/// decides (three-valued).
pub fn is_square_in_kgamma(
    config: &SurfaceConfig,
    f: &MonomialElement,
    curve: &CurveId,
) -> Result<Ternary, SurfaceError> {
    if f.valuation(curve).rem_euclid(2) == 1 {
        return Ok(Ternary::No);
    }
    Ok(restrict_to_curve(config, f, curve)?.is_trivial())
}

/// What a blow-up created.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlowupOutcome {
    pub exceptional: CurveId,
    /// New crossing of the exceptional curve with each strict transform, in
    /// the order the incident curves were declared at the center.
    pub new_points: Vec<PointId>,
}

fn fresh_curve_id(config: &SurfaceConfig, base: &str) -> CurveId {
    let mut candidate = CurveId::new(base);
    let mut n = 1usize;
    while config.has_curve(&candidate) {
        n += 1;
        candidate = CurveId::new(format!("{base}-{n}"));
    }
    candidate
}

fn fresh_point_id(config: &SurfaceConfig, taken: &BTreeSet<PointId>, base: &str) -> PointId {
    let mut candidate = PointId::new(base);
    let mut n = 1usize;
    while config.has_point(&candidate) || taken.contains(&candidate) {
        n += 1;
        candidate = PointId::new(format!("{base}-{n}"));
    }
    candidate
}

/// Blow up a declared point. The new exceptional curve is rational; elements
/// acquire along it the sum of their multiplicities along the curves through
/// the center; the center is replaced by one crossing per strict transform.
pub fn blowup(
    config: &SurfaceConfig,
    center: &PointId,
    elements: &[MonomialElement],
) -> Result<(SurfaceConfig, Vec<MonomialElement>, BlowupOutcome), SurfaceError> {
    let center_point = config
        .point(center)
        .map_err(|_| SurfaceError::BlowupCenterMissing(center.clone()))?
        .clone();

    let exceptional = fresh_curve_id(config, &format!("e-{}", center.0));
    let mut new_config = config.clone();
    new_config.curves.push(Curve::new(
        exceptional.clone(),
        &format!("exceptional curve over {}", center.0),
        CurveKind::Exceptional,
        true,
    ));
    new_config.points.retain(|p| p.id != center_point.id);

    let mut taken = BTreeSet::new();
    let mut new_points = Vec::new();
    for incident in &center_point.curves {
        let id = fresh_point_id(
            &new_config,
            &taken,
            &format!("{}-{}", center_point.id.0, incident.0),
        );
        taken.insert(id.clone());
        new_config.points.push(ClosedPoint {
            id: id.clone(),
            curves: vec![exceptional.clone(), incident.clone()],
        });
        new_points.push(id);
    }

    let new_elements = elements
        .iter()
        .map(|f| {
            let total: i64 = center_point.curves.iter().map(|c| f.valuation(c)).sum();
            let mut g = f.clone();
            if total != 0 {
                g.exponents.insert(exceptional.clone(), total);
            }
            g
        })
        .collect();

    Ok((
        new_config,
        new_elements,
        BlowupOutcome {
            exceptional,
            new_points,
        },
    ))
}

/// Dual graph of (a subset of) the configuration: one node per curve, one
/// edge per declared two-curve crossing with both ends in the subset.
pub struct DualGraph {
    pub graph: UnGraph<CurveId, PointId>,
    pub node_of: BTreeMap<CurveId, NodeIndex>,
}

pub fn dual_graph(config: &SurfaceConfig, subset: Option<&BTreeSet<CurveId>>) -> DualGraph {
    let mut graph = UnGraph::new_undirected();
    let mut node_of = BTreeMap::new();
    for curve in &config.curves {
        if subset.map(|s| s.contains(&curve.id)).unwrap_or(true) {
            let idx = graph.add_node(curve.id.clone());
            node_of.insert(curve.id.clone(), idx);
        }
    }
    for point in &config.points {
        if point.curves.len() == 2 {
            if let (Some(&a), Some(&b)) = (node_of.get(&point.curves[0]), node_of.get(&point.curves[1])) {
                graph.add_edge(a, b, point.id.clone());
            }
        }
    }
    DualGraph { graph, node_of }
}

/// True when the dual graph has no cycle (double crossings count as cycles).
pub fn is_forest(dual: &DualGraph) -> bool {
    !petgraph::algo::is_cyclic_undirected(&dual.graph)
}

/// Triangles (3-cycles) of the dual graph, each as curve and point triples
/// ordered so that point `i` is the crossing *opposite* curve `i`. Sorted by
/// curve ids for determinism.
pub fn triangles(config: &SurfaceConfig) -> Vec<([CurveId; 3], [PointId; 3])> {
    let mut crossing: BTreeMap<(CurveId, CurveId), PointId> = BTreeMap::new();
    for point in &config.points {
        if point.curves.len() == 2 {
            let (a, b) = (point.curves[0].clone(), point.curves[1].clone());
            let key = if a <= b { (a, b) } else { (b, a) };
            // Keep the first declared crossing of each pair.
            crossing.entry(key).or_insert_with(|| point.id.clone());
        }
    }
    let ids: Vec<CurveId> = config.curves.iter().map(|c| c.id.clone()).collect();
    let mut out = Vec::new();
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            for k in j + 1..ids.len() {
                let pair = |x: &CurveId, y: &CurveId| {
                    let key = if x <= y {
                        (x.clone(), y.clone())
                    } else {
                        (y.clone(), x.clone())
                    };
                    crossing.get(&key).cloned()
                };
                if let (Some(m_k), Some(m_j), Some(m_i)) = (
                    pair(&ids[i], &ids[j]),
                    pair(&ids[i], &ids[k]),
                    pair(&ids[j], &ids[k]),
                ) {
                    // m_i opposite ids[i], etc.
                    out.push((
                        [ids[i].clone(), ids[j].clone(), ids[k].clone()],
                        [m_i, m_j, m_k],
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cid(s: &str) -> CurveId {
        CurveId::new(s)
    }

    fn triangle_config() -> SurfaceConfig {
        let l1 = cid("l1");
        let l2 = cid("l2");
        let l3 = cid("l3");
        SurfaceConfig {
            base_kind: BaseKind::Local,
            base_residue_field: ResidueFieldKind::SeparablyClosed,
            curves: vec![
                Curve::new(l1.clone(), "first line", CurveKind::Exceptional, true),
                Curve::new(l2.clone(), "second line", CurveKind::Exceptional, true),
                Curve::new(l3.clone(), "third line", CurveKind::Exceptional, true),
            ],
            points: vec![
                ClosedPoint::new("m1", &[&l2, &l3]),
                ClosedPoint::new("m2", &[&l1, &l3]),
                ClosedPoint::new("m3", &[&l1, &l2]),
            ],
        }
    }

    #[test]
    fn triangle_validates_and_is_not_a_forest() {
        let config = triangle_config();
        assert!(validate(&config).is_empty());
        assert!(!is_forest(&dual_graph(&config, None)));
        let tris = triangles(&config);
        assert_eq!(tris.len(), 1);
        let (curves, points) = &tris[0];
        assert_eq!(curves[0], cid("l1"));
        assert_eq!(points[0], PointId::new("m1"));
        assert_eq!(points[2], PointId::new("m3"));
    }

    #[test]
    fn restriction_collects_other_curve_parities() {
        let config = triangle_config();
        // f = l2 · l3: along l1, odd multiplicity exactly at the crossings
        // with l2 and l3.
        let f = MonomialElement::from_exponents(&[(&cid("l2"), 1), (&cid("l3"), 1)]);
        let class = restrict_to_curve(&config, &f, &cid("l1")).unwrap();
        let expected: BTreeSet<PointId> =
            [PointId::new("m2"), PointId::new("m3")].into_iter().collect();
        assert_eq!(class.odd_points, expected);
        assert_eq!(class.is_trivial(), Ternary::No);
        assert!(point_residue(&config, &class, &PointId::new("m2")).unwrap());
        assert!(point_residue(&config, &class, &PointId::new("m1")).is_err());
    }

    #[test]
    fn restriction_is_multiplicative() {
        let config = triangle_config();
        let f = MonomialElement::from_exponents(&[(&cid("l2"), 1), (&cid("l3"), 2)]);
        let g = MonomialElement::from_exponents(&[(&cid("l2"), 1), (&cid("l1"), 3)]);
        let lhs = restrict_to_curve(&config, &f.mul(&g), &cid("l1")).unwrap();
        let rhs_f = restrict_to_curve(&config, &f, &cid("l1")).unwrap();
        let rhs_g = restrict_to_curve(&config, &g, &cid("l1")).unwrap();
        let rhs = crate::kernel::sqclass_mul(
            &crate::kernel::UnitSqClass::CurveFn(rhs_f),
            &crate::kernel::UnitSqClass::CurveFn(rhs_g),
        )
        .unwrap();
        assert_eq!(crate::kernel::UnitSqClass::CurveFn(lhs), rhs);
    }

    #[test]
    fn blowup_replaces_center_and_sums_multiplicities() {
        let config = triangle_config();
        let f = MonomialElement::from_exponents(&[(&cid("l1"), 2), (&cid("l2"), 3)]);
        let (cfg2, elems2, outcome) =
            blowup(&config, &PointId::new("m3"), std::slice::from_ref(&f)).unwrap();
        assert_eq!(cfg2.curves.len(), 4);
        assert_eq!(cfg2.points.len(), 4); // m3 replaced by two crossings
        assert!(!cfg2.has_point(&PointId::new("m3")));
        assert_eq!(elems2[0].valuation(&outcome.exceptional), 5);
        assert!(validate(&cfg2).is_empty());
        // Blowing up a triangle crossing breaks the 3-cycle into a 4-cycle.
        assert!(!is_forest(&dual_graph(&cfg2, None)));
        assert_eq!(triangles(&cfg2).len(), 0);
    }

    #[test]
    fn semiglobal_horizontals_must_cross_the_fiber_once() {
        let eta = cid("eta");
        let d = cid("d");
        let mut config = SurfaceConfig {
            base_kind: BaseKind::SemiGlobal,
            base_residue_field: ResidueFieldKind::SeparablyClosed,
            curves: vec![
                Curve::new(eta.clone(), "fiber", CurveKind::SpecialFiber, true),
                Curve::new(d.clone(), "section", CurveKind::Horizontal, true),
            ],
            points: vec![ClosedPoint::new("p", &[&eta, &d])],
        };
        assert!(validate(&config).is_empty());
        config.points.clear();
        let violations = validate(&config);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::DanglingHorizontal { crossings: 0, .. })));
    }

    #[test]
    fn local_points_must_touch_the_exceptional_locus() {
        let e = cid("e");
        let d1 = cid("d1");
        let d2 = cid("d2");
        let config = SurfaceConfig {
            base_kind: BaseKind::Local,
            base_residue_field: ResidueFieldKind::SeparablyClosed,
            curves: vec![
                Curve::new(e.clone(), "exceptional", CurveKind::Exceptional, true),
                Curve::new(d1.clone(), "branch 1", CurveKind::Horizontal, true),
                Curve::new(d2.clone(), "branch 2", CurveKind::Horizontal, true),
            ],
            points: vec![
                ClosedPoint::new("ok", &[&e, &d1]),
                ClosedPoint::new("stray", &[&d1, &d2]),
            ],
        };
        let violations = validate(&config);
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            &violations[0],
            Violation::PointOffExceptional { point } if point.0 == "stray"
        ));
    }
}
