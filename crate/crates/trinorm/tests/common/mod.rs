//! Random-problem generators shared by the integration suites.
//!
//! Both generators emit semi-global configurations over a separably closed
//! base. The tree generator builds its coefficients out of divisors of honest
//! functions on a relative projective line — the base uniformizer cuts out
//! the whole special fiber, a ratio of coordinate differences cuts out the
//! difference of two sections — so each emitted problem describes an actual
//! model, and blow-ups transport the divisors faithfully. The cycle generator
//! instead draws arbitrary exponents on a cyclic fiber: it exercises the
//! combinatorial layer (validation, systems, reciprocity) without promising a
//! model behind the data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trinorm::kernel::{CurveId, ResidueFieldKind};
use trinorm::surface::{
    BaseKind, ClosedPoint, Curve, CurveKind, MonomialElement, SurfaceConfig,
};
use trinorm::torsor::TorsorProblem;

/// A reproducible generator; every suite derives its draws from a fixed seed.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An element supported anywhere on the configuration, with exponents drawn
/// uniformly from `-bound..=bound`.
pub fn random_element(
    config: &SurfaceConfig,
    bound: i64,
    rng: &mut ChaCha8Rng,
) -> MonomialElement {
    let pairs: Vec<(CurveId, i64)> = config
        .curves
        .iter()
        .map(|c| (c.id.clone(), rng.gen_range(-bound..=bound)))
        .collect();
    MonomialElement::from_exponents(&pairs.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>())
}

/// A product of function divisors on the relative projective line: the fiber
/// `t` to a small power times ratios of coordinate differences, each ratio
/// contributing `+1` on one section and `-1` on the last.
fn line_element(
    fiber: &CurveId,
    sections: &[CurveId],
    rng: &mut ChaCha8Rng,
) -> MonomialElement {
    let last = sections.last().expect("at least one section");
    let mut pairs: Vec<(CurveId, i64)> = Vec::new();
    pairs.push((fiber.clone(), rng.gen_range(0..=2)));
    let mut on_last = 0i64;
    for section in &sections[..sections.len() - 1] {
        let e = rng.gen_range(-1..=2);
        pairs.push((section.clone(), e));
        on_last -= e;
    }
    pairs.push((last.clone(), on_last));
    MonomialElement::from_exponents(&pairs.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>())
}

/// A relative projective line with one special fiber, three or four sections,
/// and up to three blow-ups at declared crossings. The dual graph starts as a
/// star and each blow-up subdivides one edge, so it stays a tree; the
/// coefficients are products of function divisors throughout.
pub fn random_tree_problem(rng: &mut ChaCha8Rng) -> TorsorProblem {
    let section_count = rng.gen_range(3..=4);
    let fiber = CurveId::new("eta");
    let mut curves = vec![Curve::new(
        fiber.clone(),
        "special fiber",
        CurveKind::SpecialFiber,
        true,
    )];
    let mut points = Vec::new();
    let mut sections = Vec::new();
    for i in 0..section_count {
        let id = CurveId::new(format!("s{i}"));
        curves.push(Curve::new(
            id.clone(),
            &format!("section {i}"),
            CurveKind::Horizontal,
            true,
        ));
        points.push(ClosedPoint::new(format!("p{i}"), &[&fiber, &id]));
        sections.push(id);
    }
    let config = SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves,
        points,
    };

    let a = line_element(&fiber, &sections, rng);
    let b = line_element(&fiber, &sections, rng);
    let c = line_element(&fiber, &sections, rng);
    let mut problem = TorsorProblem::new(config, a, b, c);

    for _ in 0..rng.gen_range(0..=3) {
        let centers: Vec<_> = problem.config.points.iter().map(|p| p.id.clone()).collect();
        let center = &centers[rng.gen_range(0..centers.len())];
        problem = problem.blowup(center).expect("blowing up a declared point");
    }
    problem
}

/// A cyclic special fiber of three to five components, plus up to two
/// sections each crossing one component, with arbitrary small exponents on
/// every curve.
pub fn random_cycle_problem(rng: &mut ChaCha8Rng) -> TorsorProblem {
    let n = rng.gen_range(3..=5);
    let mut curves: Vec<Curve> = (0..n)
        .map(|i| {
            Curve::new(
                format!("l{i}"),
                &format!("cycle component {i}"),
                CurveKind::SpecialFiber,
                true,
            )
        })
        .collect();
    let mut points: Vec<ClosedPoint> = (0..n)
        .map(|i| {
            let here = curves[i].id.clone();
            let next = curves[(i + 1) % n].id.clone();
            ClosedPoint::new(format!("x{i}"), &[&here, &next])
        })
        .collect();
    for j in 0..rng.gen_range(0..=2) {
        let id = CurveId::new(format!("v{j}"));
        let host = curves[rng.gen_range(0..n)].id.clone();
        curves.push(Curve::new(
            id.clone(),
            &format!("section {j}"),
            CurveKind::Horizontal,
            true,
        ));
        points.push(ClosedPoint::new(format!("h{j}"), &[&host, &id]));
    }
    let config = SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves,
        points,
    };
    let a = random_element(&config, 2, rng);
    let b = random_element(&config, 2, rng);
    let c = random_element(&config, 2, rng);
    TorsorProblem::new(config, a, b, c)
}
