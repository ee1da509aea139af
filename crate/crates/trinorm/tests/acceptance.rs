//! The nine end-to-end gates the pipeline must clear, one test per gate.
//! Each test prints a single summary line when it passes; a failing gate
//! panics with enough context to replay the offending case.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;

use common::{random_cycle_problem, random_element, random_tree_problem, seeded};
use trinorm::fixtures::{self, synthesize_counterexample};
use trinorm::kernel::{CurveId, PointId};
use trinorm::kodaira::{classify, fiber_shape, FiberShape, KodairaType, WeierstrassModel};
use trinorm::obstruction::{
    self, build_system, derive_weil_places, enumerate, reciprocity_check, satisfies, solve,
    tree_propagate, verdict, weil_obstruction, Gf2Equation, Gf2System, NoCertificate,
    SolveOutcome, Verdict, WeilOutcome,
};
use trinorm::oracle::{
    check_norm_values, check_residue_table, Monomial, NormValueRule, SampleParams,
};
use trinorm::poly::{FieldCtx, Poly, Rationals};
use trinorm::torsor::{Solvability, TorsorProblem};

fn problem(fixture: &str) -> TorsorProblem {
    fixtures::fixture(fixture)
        .expect("a built-in fixture")
        .document
        .to_problem()
}

fn pass(line: &str, started: Instant) {
    println!("{line}: pass in {:?}", started.elapsed());
}

fn pass_within(line: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{line}: took {elapsed:?}, over the {budget:?} budget"
    );
    println!("{line}: pass in {elapsed:?}");
}

/// Gate 1: on the triangle of lines, the per-curve achievable residues are
/// exactly the pinned parity patterns at the three crossings, the solver
/// proves the system infeasible, and all eight selections violate it.
#[test]
fn triangle_residues_are_jointly_unsatisfiable() {
    let started = Instant::now();
    let problem = problem("triangle-semilocal");
    let survey = obstruction::survey(&problem).expect("all cases resolve");

    let parities = |curve: &str| -> BTreeSet<(u8, u8, u8)> {
        survey.sets[&CurveId::new(curve)]
            .elements()
            .iter()
            .map(|class| {
                let at = |m: &str| u8::from(class.parity_at(&PointId::new(m)));
                (at("m1"), at("m2"), at("m3"))
            })
            .collect()
    };
    assert_eq!(parities("pi1"), BTreeSet::from([(0, 0, 1), (0, 1, 0)]));
    assert_eq!(parities("pi2"), BTreeSet::from([(0, 0, 0), (1, 0, 1)]));
    assert_eq!(parities("pi3"), BTreeSet::from([(0, 0, 0), (1, 1, 0)]));

    let system = build_system(&problem).expect("every curve is solvable");
    assert!(
        matches!(solve(&system), SolveOutcome::Infeasible { .. }),
        "the triangle system must be infeasible"
    );

    let traces = enumerate(&system).expect("three variables enumerate");
    assert_eq!(traces.len(), 8);
    for trace in &traces {
        assert!(
            !trace.satisfied,
            "selection {:?} may not satisfy the system",
            trace.assignment
        );
    }

    pass_within(
        "gate 1, triangle residue sets and joint infeasibility",
        started,
        Duration::from_secs(1),
    );
}

/// Gate 2: the model y² = x³ + x² + t³ classifies as I3 with the pinned
/// invariants, its fiber is a three-cycle of components, and the synthesized
/// problem on that fiber has no rational point despite being locally solvable
/// along every curve.
#[test]
fn multiplicative_fiber_carries_a_counterexample() {
    let started = Instant::now();
    let ctx = Rationals;
    let poly = |coeffs: &[i64]| {
        Poly::from_coeffs(&ctx, coeffs.iter().map(|&n| ctx.embed_i64(n)).collect())
    };
    let model = WeierstrassModel::new(
        poly(&[]),
        poly(&[1]),
        poly(&[]),
        poly(&[]),
        poly(&[0, 0, 0, 1]),
    );
    let classification = classify(&ctx, &model).expect("nonzero discriminant");
    assert_eq!(classification.kodaira_type, KodairaType::I(3));
    assert_eq!(classification.invariants.c4, poly(&[16]));
    assert_eq!(classification.v_delta, 3);

    let FiberShape::Crossings { config, .. } = fiber_shape(classification.kodaira_type) else {
        panic!("an I3 fiber is a crossing configuration");
    };
    assert_eq!(config.curves.len(), 3, "three components");
    assert_eq!(config.points.len(), 3, "three crossings");
    let crossed_pairs: BTreeSet<BTreeSet<&CurveId>> = config
        .points
        .iter()
        .map(|p| p.curves.iter().collect())
        .collect();
    assert_eq!(crossed_pairs.len(), 3, "three distinct crossing pairs");
    assert!(
        crossed_pairs.iter().all(|pair| pair.len() == 2),
        "every crossing joins two distinct components"
    );

    let synthesized = synthesize_counterexample(&config).expect("a 3-cycle has a triangle");
    assert!(synthesized.validate().is_empty());
    let survey = obstruction::survey(&synthesized).expect("all cases resolve");
    assert!(
        survey
            .solvability
            .values()
            .all(|s| *s == Solvability::Solvable),
        "the synthesized problem must be solvable along every curve"
    );
    assert!(
        verdict(&synthesized).is_no(),
        "the synthesized problem must have no rational point"
    );

    pass_within(
        "gate 2, I3 classification and synthesized counterexample",
        started,
        Duration::from_secs(1),
    );
}

/// Gate 3: over the power-series line, odd fiber multiplicity of c is locally
/// obstructed along the fiber (and already visible at the place level), while
/// even multiplicity admits a point.
#[test]
fn fiber_multiplicity_parity_decides_the_line() {
    let started = Instant::now();
    let eta = CurveId::new("eta");

    let odd = problem("p1-dvr-odd");
    let survey = obstruction::survey(&odd).expect("the survey collects failures");
    assert_eq!(survey.solvability[&eta], Solvability::Unsolvable);
    assert_eq!(survey.unsolvable, vec![eta.clone()]);
    match verdict(&odd) {
        Verdict::NoRationalPoint {
            certificate: NoCertificate::LocalObstruction { curve },
        } => assert_eq!(curve, eta),
        other => panic!("expected a local obstruction along the fiber, got {other:?}"),
    }

    let places = derive_weil_places(&odd).expect("horizontal places derive");
    assert_eq!(
        weil_obstruction(&places),
        WeilOutcome::Infeasible { forced_sum: true },
        "every place is forced and the forced residues sum to 1"
    );

    let even = problem("p1-dvr-even");
    assert!(
        verdict(&even).is_has(),
        "even fiber multiplicity admits a rational point"
    );

    pass("gate 3, fiber-multiplicity dichotomy on the line", started);
}

/// Gate 4: a problem whose place-level system is feasible while the
/// point-level system is infeasible — the collapse to places genuinely loses
/// the obstruction.
#[test]
fn place_level_comparison_is_strictly_coarser() {
    let started = Instant::now();
    let problem = problem("weil-insufficient");

    let places = derive_weil_places(&problem).expect("horizontal places derive");
    assert!(
        matches!(weil_obstruction(&places), WeilOutcome::Feasible { .. }),
        "the place-level system must be satisfiable"
    );

    match verdict(&problem) {
        Verdict::NoRationalPoint {
            certificate: NoCertificate::SystemInfeasible { certificate },
        } => assert!(
            !certificate.points.is_empty(),
            "the infeasibility certificate names the contradictory crossings"
        ),
        other => panic!("expected point-level infeasibility, got {other:?}"),
    }

    pass("gate 4, places feasible while points are not", started);
}

/// Gate 5: on a hundred random tree-shaped problems that are everywhere
/// solvable with exact residue sets, propagation along the dual forest yields
/// a selection satisfying the whole system and the verdict certifies a point.
#[test]
fn forest_problems_propagate_to_existence() {
    let started = Instant::now();
    let mut rng = seeded(0x7265_6573);
    let mut kept = 0usize;
    let mut draws = 0usize;
    while kept < 100 {
        draws += 1;
        assert!(
            draws <= 2_000,
            "generator too lossy: kept {kept} of {draws} draws"
        );
        let problem = random_tree_problem(&mut rng);
        let Ok(survey) = obstruction::survey(&problem) else {
            continue;
        };
        let everywhere_solvable = survey
            .solvability
            .values()
            .all(|s| *s == Solvability::Solvable);
        let all_exact = survey.sets.len() == problem.config.curves.len()
            && survey.sets.values().all(|s| s.exact);
        if !everywhere_solvable || !all_exact {
            continue;
        }
        kept += 1;

        let system = build_system(&problem).expect("solvable everywhere, all cases resolved");
        let witness = tree_propagate(&problem).expect("tree-shaped systems propagate");
        assert!(
            satisfies(&system, &witness),
            "the propagated selection must satisfy every crossing equation"
        );
        assert!(
            verdict(&problem).is_has(),
            "a satisfiable exact forest problem has a rational point"
        );
    }

    pass_within(
        &format!("gate 5, {kept} forest problems propagated ({draws} draws)"),
        started,
        Duration::from_secs(10),
    );
}

/// Gate 6: blowing up any declared crossing never changes whether the
/// residue system is satisfiable, in either direction.
#[test]
fn blowups_preserve_system_feasibility() {
    let started = Instant::now();
    let mut rng = seeded(0x626c_6f77);
    let mut corpus: Vec<TorsorProblem> = [
        "triangle-semilocal",
        "p1-dvr-even",
        "i3-elliptic",
        "gabber-local",
        "tree-cor62",
        "weil-insufficient",
    ]
    .iter()
    .map(|name| problem(name))
    .collect();

    let mut random_kept = 0usize;
    let mut draws = 0usize;
    while random_kept < 100 {
        draws += 1;
        assert!(
            draws <= 2_000,
            "generator too lossy: kept {random_kept} of {draws} draws"
        );
        let candidate = if rng.gen_bool(0.5) {
            random_tree_problem(&mut rng)
        } else {
            random_cycle_problem(&mut rng)
        };
        assert!(candidate.config.curves.len() <= 8, "generator size bound");
        if build_system(&candidate).is_err() {
            continue;
        }
        random_kept += 1;
        corpus.push(candidate);
    }

    let mut feasible_seen = 0usize;
    let mut infeasible_seen = 0usize;
    for problem in &corpus {
        let system = match build_system(problem) {
            Ok(system) => system,
            Err(e) => panic!("corpus problems build: {e}"),
        };
        let before = matches!(solve(&system), SolveOutcome::Feasible { .. });
        if before {
            feasible_seen += 1;
        } else {
            infeasible_seen += 1;
        }
        for point in &problem.config.points {
            let blown = problem.blowup(&point.id).expect("declared center");
            assert!(
                blown.validate().is_empty(),
                "blowing up {} must preserve validity",
                point.id
            );
            let blown_system = build_system(&blown)
                .expect("blowing up never introduces a local obstruction");
            let after = matches!(solve(&blown_system), SolveOutcome::Feasible { .. });
            assert_eq!(
                before, after,
                "feasibility must survive blowing up {}",
                point.id
            );
        }
    }
    assert!(
        feasible_seen > 0 && infeasible_seen > 0,
        "the corpus must exercise both outcomes ({feasible_seen} feasible, {infeasible_seen} infeasible)"
    );

    pass(
        &format!(
            "gate 6, {} problems stable under every blow-up ({feasible_seen} feasible, {infeasible_seen} infeasible)",
            corpus.len()
        ),
        started,
    );
}

/// Gate 7: the per-point residue sums of a quaternion symbol vanish — the
/// identity every crossing equation rests on — across a thousand random
/// symbols on random configurations.
#[test]
fn symbol_residues_sum_to_zero_at_every_point() {
    let started = Instant::now();
    let mut rng = seeded(0x7265_6369);
    let mut checked = 0usize;
    while checked < 1_000 {
        let problem = if rng.gen_bool(0.5) {
            random_tree_problem(&mut rng)
        } else {
            random_cycle_problem(&mut rng)
        };
        for _ in 0..5 {
            if checked >= 1_000 {
                break;
            }
            let f = random_element(&problem.config, 3, &mut rng);
            let g = random_element(&problem.config, 3, &mut rng);
            let sums = reciprocity_check(&problem.config, &f, &g)
                .expect("restrictions exist on declared curves");
            for (point, sum) in sums {
                assert!(
                    !sum,
                    "residue sum at {point} must vanish for f = {:?}, g = {:?}",
                    f.exponents, g.exponents
                );
            }
            checked += 1;
        }
    }

    pass(
        &format!("gate 7, {checked} symbol reciprocity checks"),
        started,
    );
}

/// Independent feasibility oracle: scan every assignment as a bitmask,
/// bailing out at the first satisfying one.
fn feasible_by_brute_force(system: &Gf2System) -> bool {
    let n = system.variables.len();
    let rows: Vec<(u32, bool)> = system
        .equations
        .iter()
        .map(|eq| {
            let mask = eq
                .coefficients
                .iter()
                .enumerate()
                .fold(0u32, |m, (i, &c)| if c { m | (1 << i) } else { m });
            (mask, eq.constant)
        })
        .collect();
    (0u64..1u64 << n).any(|x| {
        rows.iter()
            .all(|&(mask, constant)| ((x as u32 & mask).count_ones() % 2 == 1) == constant)
    })
}

/// Gate 8: elimination agrees with exhaustive search on a thousand random
/// systems, solutions check out by substitution, and every infeasibility
/// certificate literally sums to 0 = 1.
#[test]
fn solver_agrees_with_exhaustive_search() {
    let started = Instant::now();
    let mut rng = seeded(0x6761_7573);
    for round in 0..1_000usize {
        // Mostly small systems, with a tail exercising the full width.
        let variables_len = if round % 100 < 95 {
            rng.gen_range(0..=12)
        } else {
            rng.gen_range(13..=20)
        };
        let equations_len = rng.gen_range(0..=variables_len + 3);
        let variables: Vec<CurveId> = (0..variables_len)
            .map(|i| CurveId::new(format!("v{i}")))
            .collect();
        let equations: Vec<Gf2Equation> = (0..equations_len)
            .map(|j| Gf2Equation {
                point: PointId::new(format!("p{j}")),
                constant: rng.gen_bool(0.5),
                coefficients: (0..variables_len).map(|_| rng.gen_bool(0.35)).collect(),
            })
            .collect();
        let system = Gf2System {
            variables,
            equations,
            inexact: BTreeSet::new(),
            unknown_solvability: BTreeSet::new(),
        };

        let brute = feasible_by_brute_force(&system);
        match solve(&system) {
            SolveOutcome::Feasible { assignment } => {
                assert!(brute, "round {round}: solver satisfied an unsatisfiable system");
                assert!(
                    satisfies(&system, &assignment),
                    "round {round}: the returned assignment must check out"
                );
            }
            SolveOutcome::Infeasible { certificate } => {
                assert!(!brute, "round {round}: solver rejected a satisfiable system");
                let named: BTreeSet<&PointId> = certificate.points.iter().collect();
                let mut combined = vec![false; system.variables.len()];
                let mut constant = false;
                for eq in system.equations.iter().filter(|eq| named.contains(&eq.point)) {
                    for (slot, &coefficient) in combined.iter_mut().zip(&eq.coefficients) {
                        *slot ^= coefficient;
                    }
                    constant ^= eq.constant;
                }
                assert!(
                    constant && combined.iter().all(|&c| !c),
                    "round {round}: certificate equations must sum to 0 = 1"
                );
            }
        }
    }

    pass("gate 8, 1000 systems solved against brute force", started);
}

/// Gate 9: the finite-field sampler replays the local value tables for both
/// admissible field orders with zero violations, observing every element of
/// every pinned class set.
#[test]
fn finite_field_sampling_certifies_the_tables() {
    for q in [5u64, 13] {
        let started = Instant::now();
        let params = SampleParams::new(10_000, 0xC0FFEE);

        // d = t and d = u·t pin the two-class rule; a non-square unit (bare or
        // times t²) pins even valuations; squares leave all classes open.
        for (d, two_classes) in [
            (Monomial::new(1, 1), true),
            (Monomial::new(2, 1), true),
            (Monomial::new(2, 0), false),
            (Monomial::new(2, 2), false),
            (Monomial::new(1, 0), false),
            (Monomial::new(4, 2), false),
        ] {
            let report = check_norm_values(q, d, params).expect("admissible parameters");
            assert_eq!(
                report.violations, 0,
                "q = {q}, d = {}: {:?}",
                report.d, report.first_violation
            );
            assert!(
                report.all_expected_observed,
                "q = {q}, d = {}: classes {:?} expected, {:?} observed",
                report.d, report.expected_classes, report.observed_classes
            );
            if two_classes {
                assert_eq!(report.rule, NormValueRule::TwoClasses);
                assert_eq!(
                    report.expected_classes.as_ref().map(Vec::len),
                    Some(2),
                    "odd-valuation coefficients pin a two-element class set"
                );
            }
        }

        // Every residue-table case with at least one odd valuation, plus the
        // even-even case, which the sampler must decline rather than fake.
        for (a, b) in [
            (Monomial::new(1, 1), Monomial::new(2, 0)),
            (Monomial::new(2, 0), Monomial::new(1, 1)),
            (Monomial::new(1, 1), Monomial::new(1, 1)),
            (Monomial::new(1, 1), Monomial::new(2, 1)),
            (Monomial::new(1, 0), Monomial::new(1, 1)),
        ] {
            let report = check_residue_table(q, a, b, params).expect("admissible parameters");
            assert!(
                report.skipped.is_none(),
                "q = {q}, a = {}, b = {}: unexpectedly skipped",
                report.a, report.b
            );
            assert_eq!(
                report.violations, 0,
                "q = {q}, a = {}, b = {}: {:?}",
                report.a, report.b, report.first_violation
            );
            assert!(
                report.sets_complete,
                "q = {q}, a = {}, b = {}: some predicted residue was never sampled: {:?}",
                report.a, report.b, report.coverage
            );
        }
        let even_even = check_residue_table(q, Monomial::new(2, 0), Monomial::new(2, 0), params)
            .expect("admissible parameters");
        assert!(
            even_even.skipped.is_some(),
            "the even-even case lies outside the sampler's reach and must say so"
        );

        pass_within(
            &format!("gate 9, sampling both value tables over F_{q}"),
            started,
            Duration::from_secs(60),
        );
    }
}
