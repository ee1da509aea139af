//! Randomized cross-checks of the local value tables against brute-force
//! norm computations over K = 𝔽_q(t), t-adically valued, for primes
//! q ≡ 1 mod 4 (so −1 is a square and signs drop out of residues).
//!
//! Points are sampled on the nose: draw the Xᵢ, Yᵢ, form the three norm
//! factors, and *define* c as their product — every sample satisfies the
//! torsor equation by construction. Residues of sampled values are then
//! computed from scratch (valuation of the polynomial, Euler's criterion on
//! the low coefficient) and compared against the predicted residue sets.
//! The prediction side reuses the torsor case table — that is the code under
//! test — while the measurement side shares nothing with it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{UnitSqClass, ValuedUnit};
use crate::poly::{Poly, PrimeField};
use crate::torsor::{local_residue_value_set, LocalCaseError, LocalTriple};

/// Default degree bound for the sampled coordinate polynomials.
pub const DEFAULT_SAMPLE_DEGREE: u32 = 3;

/// Shared sampling-run parameters. Every report echoes them, so a run can be
/// reproduced bit-for-bit from its report alone.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleParams {
    pub trials: u64,
    pub seed: u64,
    /// Degree bound for the sampled coordinate polynomials.
    pub degree: u32,
}

impl SampleParams {
    pub fn new(trials: u64, seed: u64) -> Self {
        SampleParams {
            trials,
            seed,
            degree: DEFAULT_SAMPLE_DEGREE,
        }
    }

    pub fn with_degree(mut self, degree: u32) -> Self {
        self.degree = degree;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("q = {0} is not an odd prime congruent to 1 mod 4")]
    InadmissibleOrder(u64),
    #[error("coefficient monomials must have a unit in F_q^x, got {0} mod {1}")]
    ZeroUnit(u64, u64),
    #[error("the shared case table failed on sampled data: {0}")]
    Table(String),
}

/// A monomial u·t^m with u ∈ 𝔽_q^×: the coefficient shape the local checks
/// accept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub unit: u64,
    pub exponent: u32,
}

impl Monomial {
    pub fn new(unit: u64, exponent: u32) -> Self {
        Monomial { unit, exponent }
    }

    fn to_poly(self, field: &PrimeField) -> Poly<u64> {
        Poly::term(field, self.unit % field.order(), self.exponent as usize)
    }

    fn check(self, field: &PrimeField) -> Result<Self, OracleError> {
        if self.unit.is_multiple_of(field.order()) {
            Err(OracleError::ZeroUnit(self.unit, field.order()))
        } else {
            Ok(self)
        }
    }

    fn to_valued_unit(self, field: &PrimeField) -> ValuedUnit {
        ValuedUnit::new(
            self.exponent as i64,
            UnitSqClass::Finite {
                nonsquare: !field.is_square(self.unit),
            },
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.unit, self.exponent) {
            (u, 0) => write!(f, "{u}"),
            (1, 1) => write!(f, "t"),
            (1, m) => write!(f, "t^{m}"),
            (u, 1) => write!(f, "{u}*t"),
            (u, m) => write!(f, "{u}*t^{m}"),
        }
    }
}

impl FromStr for Monomial {
    type Err = String;

    /// Accepts `5`, `t`, `t^3`, `2*t`, `2*t^3`, and `2t^3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("expected a monomial like `2*t^3`, got `{s}`");
        let (unit_part, t_part) = match s.find('t') {
            None => (s, None),
            Some(i) => (&s[..i], Some(&s[i + 1..])),
        };
        let unit_part = unit_part.trim().trim_end_matches('*').trim();
        let unit = if unit_part.is_empty() {
            if t_part.is_none() {
                return Err(bad());
            }
            1
        } else {
            unit_part.parse::<u64>().map_err(|_| bad())?
        };
        let exponent = match t_part {
            None => 0,
            Some("") => 1,
            Some(rest) => {
                let rest = rest.strip_prefix('^').ok_or_else(bad)?;
                rest.trim().parse::<u32>().map_err(|_| bad())?
            }
        };
        Ok(Monomial { unit, exponent })
    }
}

/// The order-q field when q is admissible for the checks.
pub fn admissible_field(q: u64) -> Result<PrimeField, OracleError> {
    PrimeField::new(q)
        .filter(|f| f.order() % 4 == 1)
        .ok_or(OracleError::InadmissibleOrder(q))
}

/// A square class of K^× = 𝔽_q((t))^×: valuation parity and unit-residue
/// squareness. With q ≡ 1 mod 4 these two bits are a complete invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ValueClass {
    odd_valuation: bool,
    nonsquare_unit: bool,
}

impl fmt::Display for ValueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.odd_valuation, self.nonsquare_unit) {
            (false, false) => write!(f, "1"),
            (false, true) => write!(f, "u"),
            (true, false) => write!(f, "t"),
            (true, true) => write!(f, "u*t"),
        }
    }
}

/// Classify a nonzero polynomial value: t-adic valuation parity plus Euler's
/// criterion on the lowest coefficient.
fn value_class(field: &PrimeField, value: &Poly<u64>) -> ValueClass {
    let v = value.valuation(field).expect("nonzero value");
    let unit = value.unit_residue(field).expect("nonzero value");
    ValueClass {
        odd_valuation: v % 2 == 1,
        nonsquare_unit: !field.is_square(unit),
    }
}

fn random_poly(field: &PrimeField, degree: u32, rng: &mut ChaCha8Rng) -> Poly<u64> {
    let coeffs: Vec<u64> = (0..=degree)
        .map(|_| rng.gen_range(0..field.order()))
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// x² − d·y² for random x, y, redrawn until nonzero.
fn random_norm(field: &PrimeField, d: &Poly<u64>, degree: u32, rng: &mut ChaCha8Rng) -> Poly<u64> {
    loop {
        let x = random_poly(field, degree, rng);
        let y = random_poly(field, degree, rng);
        let norm = x
            .mul(field, &x)
            .sub(field, &d.mul(field, &y.mul(field, &y)));
        if !norm.is_zero() {
            return norm;
        }
    }
}

/// One sampled solution of the torsor equation: the three norm factors and
/// their forced right-hand side c = N₁N₂N₃.
#[derive(Clone, Debug)]
pub struct SampledPoint {
    pub c: Poly<u64>,
    /// Valuations of the three norm factors.
    pub norm_valuations: [u32; 3],
    /// Square class (as a bit: nonsquare?) of the tame residue of
    /// (X₁² − aY₁², b) at the t-adic valuation.
    pub residue_nonsquare: bool,
}

/// Draw one point on the torsor: random Xᵢ, Yᵢ with nonzero norm factors,
/// c defined as the product. The residue of the first factor against b is
/// computed directly: N̄₁^{v(b)}·b̄^{v(N₁)} evaluated in 𝔽_q, then Euler.
pub fn sample_torsor_value(
    field: &PrimeField,
    a: Monomial,
    b: Monomial,
    degree: u32,
    rng: &mut ChaCha8Rng,
) -> SampledPoint {
    let pa = a.to_poly(field);
    let pb = b.to_poly(field);
    let pab = pa.mul(field, &pb);

    let n1 = random_norm(field, &pa, degree, rng);
    let n2 = random_norm(field, &pb, degree, rng);
    let n3 = random_norm(field, &pab, degree, rng);
    let c = n1.mul(field, &n2).mul(field, &n3);

    let v1 = n1.valuation(field).expect("nonzero norm");
    let u1 = n1.unit_residue(field).expect("nonzero norm");
    // Tame residue of the pair (N₁, b): the sign (−1)^{v·w} is a square
    // because q ≡ 1 mod 4.
    let mut residue = 1u64;
    if b.exponent % 2 == 1 {
        residue = residue * (u1 % field.order()) % field.order();
    }
    if v1 % 2 == 1 {
        residue = residue * (b.unit % field.order()) % field.order();
    }
    SampledPoint {
        c,
        norm_valuations: [
            v1,
            n2.valuation(field).expect("nonzero norm"),
            n3.valuation(field).expect("nonzero norm"),
        ],
        residue_nonsquare: !field.is_square(residue),
    }
}

/// Which norm-value rule a coefficient d falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormValueRule {
    /// v(d) even, d̄ non-square: every norm has even valuation.
    EvenValuations,
    /// v(d) odd: norm classes are exactly {1, −d}.
    TwoClasses,
    /// d a square: every class of K^× is a norm.
    AllClasses,
}

/// Outcome of sampling values of x² − d·y².
#[derive(Clone, Debug, Serialize)]
pub struct NormValueReport {
    pub q: u64,
    pub d: String,
    pub trials: u64,
    pub seed: u64,
    pub degree: u32,
    pub rule: NormValueRule,
    pub violations: u64,
    pub first_violation: Option<String>,
    /// Square classes of K^× observed among the sampled norms.
    pub observed_classes: Vec<String>,
    /// The full predicted class set, when the rule pins one down.
    pub expected_classes: Option<Vec<String>>,
    /// Every expected class was observed (vacuously true when unpinned).
    pub all_expected_observed: bool,
}

/// Sample values of the single norm form x² − d·y² and check them against
/// the class rules: even valuations when v(d) is even and d̄ is not a
/// square; classes exactly {1, −d} when v(d) is odd; all classes when d is
/// itself a square.
pub fn check_norm_values(
    q: u64,
    d: Monomial,
    params: SampleParams,
) -> Result<NormValueReport, OracleError> {
    let field = admissible_field(q)?;
    let d = d.check(&field)?;
    let pd = d.to_poly(&field);
    let d_class = value_class(&field, &pd);

    let rule = match (d_class.odd_valuation, d_class.nonsquare_unit) {
        (true, _) => NormValueRule::TwoClasses,
        (false, true) => NormValueRule::EvenValuations,
        (false, false) => NormValueRule::AllClasses,
    };
    // −d and d share a class: −1 is a square for q ≡ 1 mod 4.
    let expected: Option<BTreeSet<ValueClass>> = match rule {
        NormValueRule::TwoClasses => Some(
            [
                ValueClass { odd_valuation: false, nonsquare_unit: false },
                d_class,
            ]
            .into(),
        ),
        NormValueRule::EvenValuations => None,
        NormValueRule::AllClasses => Some(
            [
                ValueClass { odd_valuation: false, nonsquare_unit: false },
                ValueClass { odd_valuation: false, nonsquare_unit: true },
                ValueClass { odd_valuation: true, nonsquare_unit: false },
                ValueClass { odd_valuation: true, nonsquare_unit: true },
            ]
            .into(),
        ),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut observed: BTreeSet<ValueClass> = BTreeSet::new();
    let mut violations = 0u64;
    let mut first_violation = None;

    for trial in 0..params.trials {
        let norm = random_norm(&field, &pd, params.degree, &mut rng);
        let class = value_class(&field, &norm);
        observed.insert(class);
        let ok = match rule {
            NormValueRule::EvenValuations => !class.odd_valuation,
            NormValueRule::TwoClasses => expected.as_ref().unwrap().contains(&class),
            NormValueRule::AllClasses => true,
        };
        if !ok {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(format!(
                    "trial {trial}: sampled class {class} breaks rule {rule:?} \
                     (norm = {})",
                    norm.display("t")
                ));
            }
        }
    }

    let all_expected_observed = expected
        .as_ref()
        .map(|exp| exp.is_subset(&observed))
        .unwrap_or(true);
    Ok(NormValueReport {
        q,
        d: d.to_string(),
        trials: params.trials,
        seed: params.seed,
        degree: params.degree,
        rule,
        violations,
        first_violation,
        observed_classes: observed.iter().map(ValueClass::to_string).collect(),
        expected_classes: expected
            .map(|exp| exp.iter().map(ValueClass::to_string).collect()),
        all_expected_observed,
    })
}

/// Coverage of one predicted residue set: which of its elements the sampler
/// actually hit, keyed by the set itself (predictions vary with the sampled
/// c's parities).
#[derive(Clone, Debug, Serialize)]
pub struct SetCoverage {
    pub predicted: Vec<String>,
    pub observed: Vec<String>,
}

/// Outcome of replaying the residue-set table against sampled torsor points.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueTableReport {
    pub q: u64,
    pub a: String,
    pub b: String,
    pub trials: u64,
    pub seed: u64,
    pub degree: u32,
    /// When the parameters fall outside the checkable cases the report
    /// carries the reason and no samples.
    pub skipped: Option<String>,
    pub violations: u64,
    pub first_violation: Option<String>,
    /// Per-predicted-set coverage.
    pub coverage: Vec<SetCoverage>,
    /// Every element of every predicted (exact) set was observed.
    pub sets_complete: bool,
}

fn residue_label(class: &UnitSqClass) -> String {
    match class {
        UnitSqClass::Finite { nonsquare: false } => "1".to_string(),
        UnitSqClass::Finite { nonsquare: true } => "u".to_string(),
        other => format!("{other:?}"),
    }
}

/// Sample torsor points for coefficients a, b and check every measured
/// residue of (X₁² − aY₁², b) for membership in the residue set the shared
/// case table predicts from the valuations of a, b and the sampled c.
///
/// Parameters with both valuations even are reported as skipped: over 𝔽_q
/// the unit square-class group has order 2, so one of a, b, ab is forced
/// square and the value set collapses to the trivial class; the non-trivial
/// even-even case needs a larger residue field and sits outside this
/// oracle's reach.
pub fn check_residue_table(
    q: u64,
    a: Monomial,
    b: Monomial,
    params: SampleParams,
) -> Result<ResidueTableReport, OracleError> {
    let field = admissible_field(q)?;
    let a = a.check(&field)?;
    let b = b.check(&field)?;

    let mut report = ResidueTableReport {
        q,
        a: a.to_string(),
        b: b.to_string(),
        trials: params.trials,
        seed: params.seed,
        degree: params.degree,
        skipped: None,
        violations: 0,
        first_violation: None,
        coverage: Vec::new(),
        sets_complete: true,
    };

    if a.exponent % 2 == 0 && b.exponent % 2 == 0 {
        report.skipped = Some(
            "both coefficient valuations are even: over F_q one of a, b, ab \
             is a square and the residue set is trivially {1}; the \
             interesting even-even case needs a residue field with more than \
             two square classes"
                .to_string(),
        );
        return Ok(report);
    }

    let va = a.to_valued_unit(&field);
    let vb = b.to_valued_unit(&field);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut coverage: BTreeMap<Vec<String>, BTreeSet<String>> = BTreeMap::new();

    for trial in 0..params.trials {
        let sample = sample_torsor_value(&field, a, b, params.degree, &mut rng);
        let vc = ValuedUnit::new(
            sample.c.valuation(&field).expect("nonzero c") as i64,
            UnitSqClass::Finite {
                nonsquare: !field
                    .is_square(sample.c.unit_residue(&field).expect("nonzero c")),
            },
        );
        let triple = LocalTriple {
            a: va.clone(),
            b: vb.clone(),
            c: vc,
        };
        // cd₂(𝔽_q) = 1, so the table's exactness conditions hold here.
        let predicted = local_residue_value_set(&triple, true)
            .map_err(|e: LocalCaseError| OracleError::Table(e.to_string()))?;
        let predicted_labels: Vec<String> = predicted
            .elements()
            .iter()
            .map(residue_label)
            .collect();

        let measured = if sample.residue_nonsquare { "u" } else { "1" }.to_string();
        if !predicted_labels.contains(&measured) {
            report.violations += 1;
            if report.first_violation.is_none() {
                report.first_violation = Some(format!(
                    "trial {trial}: measured residue {measured} not in \
                     predicted set {{{}}} (v(c) = {}, c = {})",
                    predicted_labels.join(", "),
                    sample.c.valuation(&field).unwrap(),
                    sample.c.display("t"),
                ));
            }
        }
        coverage
            .entry(predicted_labels)
            .or_default()
            .insert(measured);
    }

    report.sets_complete = coverage
        .iter()
        .all(|(predicted, observed)| predicted.iter().all(|p| observed.contains(p)));
    report.coverage = coverage
        .into_iter()
        .map(|(predicted, observed)| SetCoverage {
            predicted,
            observed: observed.into_iter().collect(),
        })
        .collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_parse_and_print() {
        for (text, unit, exponent) in [
            ("5", 5, 0),
            ("t", 1, 1),
            ("t^3", 1, 3),
            ("2*t", 2, 1),
            ("2*t^3", 2, 3),
            ("2t^3", 2, 3),
        ] {
            let m: Monomial = text.parse().unwrap();
            assert_eq!((m.unit, m.exponent), (unit, exponent), "parsing {text}");
        }
        assert!("".parse::<Monomial>().is_err());
        assert!("x^2".parse::<Monomial>().is_err());
        assert_eq!(Monomial::new(2, 3).to_string(), "2*t^3");
        assert_eq!(Monomial::new(1, 1).to_string(), "t");
    }

    #[test]
    fn inadmissible_orders_are_rejected() {
        assert_eq!(admissible_field(7).unwrap_err(), OracleError::InadmissibleOrder(7));
        assert_eq!(admissible_field(9).unwrap_err(), OracleError::InadmissibleOrder(9));
        assert!(admissible_field(5).is_ok());
        assert!(admissible_field(13).is_ok());
    }

    #[test]
    fn square_coefficient_norms_cover_every_class() {
        let report = check_norm_values(5, Monomial::new(1, 0), SampleParams::new(400, 7)).unwrap();
        assert_eq!(report.rule, NormValueRule::AllClasses);
        assert_eq!(report.violations, 0);
        assert!(report.all_expected_observed);
        assert_eq!(report.observed_classes.len(), 4);
    }

    #[test]
    fn trivial_first_factor_gives_trivial_residue() {
        // With X₁ = 1, Y₁ = 0 the first norm factor is 1 and the residue of
        // (1, b) vanishes: check the measurement path agrees on a direct
        // computation.
        let field = admissible_field(5).unwrap();
        let one = Poly::constant(&field, 1);
        let v = one.valuation(&field).unwrap();
        assert_eq!(v, 0);
        assert!(field.is_square(one.unit_residue(&field).unwrap()));
    }

    #[test]
    fn zero_trials_make_an_empty_report() {
        let report =
            check_residue_table(5, Monomial::new(2, 2), Monomial::new(1, 1), SampleParams::new(0, 1)).unwrap();
        assert!(report.skipped.is_none());
        assert_eq!(report.violations, 0);
        assert!(report.coverage.is_empty());
        assert!(report.sets_complete);
    }

    #[test]
    fn even_even_parameters_are_skipped_with_a_reason() {
        let report =
            check_residue_table(5, Monomial::new(2, 0), Monomial::new(3, 2), SampleParams::new(10, 1)).unwrap();
        assert!(report.skipped.is_some());
        assert_eq!(report.violations, 0);
    }
}
