//! Square classes and tame residues in exponent-2 arithmetic.
//!
//! Everything downstream reduces to the group K^×/K^×² of square classes of
//! various residue fields, represented just finely enough to decide
//! triviality: the unique class over a separably closed field, a single bit
//! over a finite field with −1 a square, and a divisor-parity representation
//! on a configuration curve. The tame residue of a quaternion symbol along a
//! discrete valuation is computed on these representations; the usual sign
//! (−1)^{v(f)v(g)} is absorbed because −1 is a square in every residue field
//! this crate admits.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a codimension-1 curve in a configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveId(pub String);

/// Identifier of a closed point in a configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub String);

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<T: Into<String>> From<T> for CurveId {
    fn from(s: T) -> Self {
        CurveId(s.into())
    }
}

impl PointId {
    pub fn new(s: impl Into<String>) -> Self {
        PointId(s.into())
    }
}

impl CurveId {
    pub fn new(s: impl Into<String>) -> Self {
        CurveId(s.into())
    }
}

/// Three-valued answer for predicates that closed-world combinatorial data
/// cannot always decide (e.g. squareness on a curve nothing is known about).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ternary {
    Yes,
    No,
    Unknown,
}

impl Ternary {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Ternary::Yes
        } else {
            Ternary::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Ternary::Yes
    }

    pub fn is_no(self) -> bool {
        self == Ternary::No
    }

    pub fn is_known(self) -> bool {
        self != Ternary::Unknown
    }
}

/// The residue fields the kernel can do square-class arithmetic in.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ResidueFieldKind {
    /// A separably closed field of characteristic ≠ 2: one square class.
    SeparablyClosed,
    /// A finite field 𝔽_q with q ≡ 1 (mod 4): two square classes, −1 square.
    FiniteQ1Mod4(u64),
    /// The function field of the named configuration curve.
    CurveFunctionField(CurveId),
}

impl fmt::Display for ResidueFieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueFieldKind::SeparablyClosed => f.write_str("separably closed"),
            ResidueFieldKind::FiniteQ1Mod4(q) => write!(f, "finite field of order {q}"),
            ResidueFieldKind::CurveFunctionField(c) => write!(f, "function field of {c}"),
        }
    }
}

/// Square class of a function on a configuration curve, in divisor-parity
/// form: the set of declared points where it vanishes to odd order, a folded
/// constant bit for a non-square scalar factor (only meaningful over finite
/// bases), the kind of the ambient curve, and an optional declared triviality
/// for curves whose unsupported classes the divisor data cannot decide.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveFnClass {
    /// Curve whose function field this class lives in.
    pub curve: CurveId,
    /// Declared points at which the class has odd multiplicity.
    pub odd_points: BTreeSet<PointId>,
    /// True when a non-square constant from the base is folded in.
    pub nonsquare_unit: bool,
    /// Whether divisor parity plus the unit bit decides triviality (true for
    /// rational curves over a separably closed base and for 𝔽_q-lines).
    pub divisor_decides: bool,
    /// Optional out-of-band knowledge for curves where the divisor does not
    /// decide; `Some(true)` declares the class square, `Some(false)` not.
    pub declared_trivial: Option<bool>,
}

impl CurveFnClass {
    /// The identity class on `curve`.
    pub fn trivial(curve: CurveId, divisor_decides: bool) -> Self {
        CurveFnClass {
            curve,
            odd_points: BTreeSet::new(),
            nonsquare_unit: false,
            divisor_decides,
            // The flag carries information only where the divisor does not
            // decide; keeping it `None` otherwise makes the representation
            // canonical, so classes compare structurally.
            declared_trivial: if divisor_decides { None } else { Some(true) },
        }
    }

    /// Parity of the class at one point: true when the multiplicity is odd.
    pub fn parity_at(&self, point: &PointId) -> bool {
        self.odd_points.contains(point)
    }

    /// Is the class the square class of a constant, i.e. divisor-free?
    pub fn has_empty_divisor(&self) -> bool {
        self.odd_points.is_empty()
    }

    fn mul(&self, other: &CurveFnClass) -> Result<CurveFnClass, KernelError> {
        if self.curve != other.curve {
            return Err(KernelError::KindMismatch {
                left: ResidueFieldKind::CurveFunctionField(self.curve.clone()),
                right: ResidueFieldKind::CurveFunctionField(other.curve.clone()),
            });
        }
        let odd_points: BTreeSet<PointId> = self
            .odd_points
            .symmetric_difference(&other.odd_points)
            .cloned()
            .collect();
        let divisor_decides = self.divisor_decides && other.divisor_decides;
        // Triviality of a product of declared classes is only known when
        // both factors are declared; a declared square is absorbed, two
        // declared non-squares would need the quotient structure we do not
        // track. Where the divisor decides, the flag stays canonical `None`.
        let declared_trivial = if divisor_decides {
            None
        } else {
            match (self.declared_trivial, other.declared_trivial) {
                (Some(true), Some(true)) => Some(true),
                (Some(true), Some(false)) | (Some(false), Some(true)) => Some(false),
                _ => None,
            }
        };
        Ok(CurveFnClass {
            curve: self.curve.clone(),
            odd_points,
            nonsquare_unit: self.nonsquare_unit ^ other.nonsquare_unit,
            divisor_decides,
            declared_trivial,
        })
    }

    /// Three-valued triviality: a nonempty odd-multiplicity set is never
    /// square; an empty one is decided by the unit bit when the divisor
    /// decides, otherwise by the declared flag if any.
    pub fn is_trivial(&self) -> Ternary {
        if !self.odd_points.is_empty() {
            return Ternary::No;
        }
        if self.divisor_decides {
            return Ternary::from_bool(!self.nonsquare_unit);
        }
        match self.declared_trivial {
            Some(t) => Ternary::from_bool(t && !self.nonsquare_unit),
            None => Ternary::Unknown,
        }
    }
}

/// A square class of a residue field, in the cheapest faithful representation
/// the field kind allows.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum UnitSqClass {
    /// The unique class over a separably closed field.
    SepClosed,
    /// One of the two classes of 𝔽_q^× (q ≡ 1 mod 4).
    Finite { nonsquare: bool },
    /// A class of a configuration curve's function field.
    CurveFn(CurveFnClass),
}

impl UnitSqClass {
    /// The trivial (square) class of the same residue field as `self`.
    pub fn identity_like(&self) -> UnitSqClass {
        match self {
            UnitSqClass::SepClosed => UnitSqClass::SepClosed,
            UnitSqClass::Finite { .. } => UnitSqClass::Finite { nonsquare: false },
            UnitSqClass::CurveFn(c) => {
                UnitSqClass::CurveFn(CurveFnClass::trivial(c.curve.clone(), c.divisor_decides))
            }
        }
    }

    /// The residue-field kind this class belongs to.
    pub fn field_kind(&self) -> ResidueFieldKind {
        match self {
            UnitSqClass::SepClosed => ResidueFieldKind::SeparablyClosed,
            // The order is not recoverable from the bit; 0 marks "some q".
            UnitSqClass::Finite { .. } => ResidueFieldKind::FiniteQ1Mod4(0),
            UnitSqClass::CurveFn(c) => ResidueFieldKind::CurveFunctionField(c.curve.clone()),
        }
    }

    /// Three-valued triviality of the class.
    pub fn is_trivial(&self) -> Ternary {
        match self {
            UnitSqClass::SepClosed => Ternary::Yes,
            UnitSqClass::Finite { nonsquare } => Ternary::from_bool(!nonsquare),
            UnitSqClass::CurveFn(c) => c.is_trivial(),
        }
    }

    /// `self` raised to the parity `odd` (exponent-2 group: even powers are
    /// the identity, odd powers are the element itself).
    pub fn pow_parity(&self, odd: bool) -> UnitSqClass {
        if odd {
            self.clone()
        } else {
            self.identity_like()
        }
    }
}

/// Errors from kernel arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    /// The two operands live in different residue fields.
    #[error("square classes live in different residue fields ({left} vs {right})")]
    KindMismatch {
        left: ResidueFieldKind,
        right: ResidueFieldKind,
    },
}

/// Product of two square classes of the same residue field.
pub fn sqclass_mul(a: &UnitSqClass, b: &UnitSqClass) -> Result<UnitSqClass, KernelError> {
    match (a, b) {
        (UnitSqClass::SepClosed, UnitSqClass::SepClosed) => Ok(UnitSqClass::SepClosed),
        (UnitSqClass::Finite { nonsquare: x }, UnitSqClass::Finite { nonsquare: y }) => {
            Ok(UnitSqClass::Finite { nonsquare: x ^ y })
        }
        (UnitSqClass::CurveFn(x), UnitSqClass::CurveFn(y)) => Ok(UnitSqClass::CurveFn(x.mul(y)?)),
        _ => Err(KernelError::KindMismatch {
            left: a.field_kind(),
            right: b.field_kind(),
        }),
    }
}

/// A square class of a discretely valued field: valuation parity plus the
/// class of the unit part in the residue field.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LocalSqClass {
    pub odd_valuation: bool,
    pub unit: UnitSqClass,
}

impl LocalSqClass {
    pub fn mul(&self, other: &LocalSqClass) -> Result<LocalSqClass, KernelError> {
        Ok(LocalSqClass {
            odd_valuation: self.odd_valuation ^ other.odd_valuation,
            unit: sqclass_mul(&self.unit, &other.unit)?,
        })
    }

    /// Three-valued squareness in the valued field: odd valuation is never a
    /// square; otherwise the unit class decides.
    pub fn is_square(&self) -> Ternary {
        if self.odd_valuation {
            Ternary::No
        } else {
            self.unit.is_trivial()
        }
    }
}

/// An element of a discretely valued field retaining its integer valuation,
/// as needed by the tame residue (the parity projection is `LocalSqClass`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValuedUnit {
    pub valuation: i64,
    pub unit: UnitSqClass,
}

impl ValuedUnit {
    pub fn new(valuation: i64, unit: UnitSqClass) -> Self {
        ValuedUnit { valuation, unit }
    }

    /// Forget the integer valuation, keeping its parity.
    pub fn to_local_class(&self) -> LocalSqClass {
        LocalSqClass {
            odd_valuation: self.valuation.rem_euclid(2) == 1,
            unit: self.unit.clone(),
        }
    }
}

/// Tame residue of the quaternion symbol (f, g) along the valuation both
/// arguments are given for: the class of ū^{v(g)} · w̄^{v(f)} where ū, w̄ are
/// the residues of the unit parts of f and g. The textbook sign
/// (−1)^{v(f)v(g)} is a square in every admitted residue field and is
/// therefore dropped.
pub fn tame_residue(f: &ValuedUnit, g: &ValuedUnit) -> Result<UnitSqClass, KernelError> {
    let left = f.unit.pow_parity(g.valuation.rem_euclid(2) == 1);
    let right = g.unit.pow_parity(f.valuation.rem_euclid(2) == 1);
    sqclass_mul(&left, &right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fclass(bit: bool) -> UnitSqClass {
        UnitSqClass::Finite { nonsquare: bit }
    }

    fn cclass(points: &[&str]) -> UnitSqClass {
        UnitSqClass::CurveFn(CurveFnClass {
            curve: CurveId::new("gamma"),
            odd_points: points.iter().map(|p| PointId::new(*p)).collect(),
            nonsquare_unit: false,
            divisor_decides: true,
            declared_trivial: None,
        })
    }

    #[test]
    fn every_class_squares_to_identity() {
        for x in [
            UnitSqClass::SepClosed,
            fclass(true),
            cclass(&["m1", "m2"]),
        ] {
            let sq = sqclass_mul(&x, &x).unwrap();
            assert_eq!(sq.is_trivial(), Ternary::Yes, "x·x trivial for {x:?}");
            assert_eq!(sq, x.identity_like());
        }
    }

    #[test]
    fn curve_classes_multiply_by_symmetric_difference() {
        let a = cclass(&["m1", "m2"]);
        let b = cclass(&["m2", "m3"]);
        let ab = sqclass_mul(&a, &b).unwrap();
        assert_eq!(ab, cclass(&["m1", "m3"]));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let err = sqclass_mul(&UnitSqClass::SepClosed, &fclass(false)).unwrap_err();
        assert!(matches!(err, KernelError::KindMismatch { .. }));
    }

    #[test]
    fn tame_residue_uses_cross_valuations() {
        // f = π·u with ū non-square, g = w with w̄ non-square:
        // ∂(f,g) = ū^{v(g)=0} · w̄^{v(f)=1} = w̄.
        let f = ValuedUnit::new(1, fclass(true));
        let g = ValuedUnit::new(0, fclass(true));
        assert_eq!(tame_residue(&f, &g).unwrap(), fclass(true));
        // Both valuations even: residue trivial whatever the units.
        let f = ValuedUnit::new(2, fclass(true));
        let g = ValuedUnit::new(-2, fclass(true));
        assert_eq!(tame_residue(&f, &g).unwrap().is_trivial(), Ternary::Yes);
    }

    #[test]
    fn tame_residue_is_bilinear_in_first_slot() {
        let us = [fclass(false), fclass(true)];
        for (vf1, vf2, vg) in [(0i64, 1i64, 1i64), (1, 1, 0), (3, -2, 5)] {
            for u1 in &us {
                for u2 in &us {
                    for w in &us {
                        let f1 = ValuedUnit::new(vf1, u1.clone());
                        let f2 = ValuedUnit::new(vf2, u2.clone());
                        let g = ValuedUnit::new(vg, w.clone());
                        let prod = ValuedUnit::new(
                            vf1 + vf2,
                            sqclass_mul(u1, u2).unwrap(),
                        );
                        let lhs = tame_residue(&prod, &g).unwrap();
                        let rhs = sqclass_mul(
                            &tame_residue(&f1, &g).unwrap(),
                            &tame_residue(&f2, &g).unwrap(),
                        )
                        .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn steinberg_pairs_have_trivial_residue() {
        // ∂((f, −f)) is trivial: unit parts are ū and −ū (same class since −1
        // is a square), valuations equal, so the residue is (ū·ū)^{v} = 1.
        for v in [0i64, 1, 2, 5] {
            for u in [fclass(false), fclass(true)] {
                let f = ValuedUnit::new(v, u.clone());
                let minus_f = ValuedUnit::new(v, u.clone());
                let res = tame_residue(&f, &minus_f).unwrap();
                assert_eq!(res.is_trivial(), Ternary::Yes, "v={v}, u={u:?}");
            }
        }
    }

    #[test]
    fn declared_triviality_is_three_valued() {
        let mut c = CurveFnClass::trivial(CurveId::new("g"), false);
        assert_eq!(c.is_trivial(), Ternary::Yes);
        c.declared_trivial = None;
        assert_eq!(c.is_trivial(), Ternary::Unknown);
        c.declared_trivial = Some(false);
        assert_eq!(c.is_trivial(), Ternary::No);
        c.odd_points.insert(PointId::new("m"));
        assert_eq!(c.is_trivial(), Ternary::No);
    }
}
