//! Reduction types of elliptic fibrations over a t-adic base, and the
//! crossing configurations their special fibers contribute.
//!
//! A Weierstrass model y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆ with
//! coefficients in k[t] determines, at t = 0, a fiber type read off from the
//! t-adic valuations of the invariants c₄ and Δ. The cycle-shaped types feed
//! the torsor machinery: their components and crossings form a
//! [`SurfaceConfig`] ready for descent analysis.

use std::fmt;

use serde::ser::Serializer;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::ResidueFieldKind;
use crate::poly::{FieldCtx, Poly};
use crate::surface::{BaseKind, ClosedPoint, Curve, CurveKind, SurfaceConfig};

/// Integral Weierstrass data: the five coefficients a₁, a₂, a₃, a₄, a₆.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel<E> {
    pub a1: Poly<E>,
    pub a2: Poly<E>,
    pub a3: Poly<E>,
    pub a4: Poly<E>,
    pub a6: Poly<E>,
}

/// The b- and c-invariants and the discriminant of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelInvariants<E> {
    pub b2: Poly<E>,
    pub b4: Poly<E>,
    pub b6: Poly<E>,
    pub b8: Poly<E>,
    pub c4: Poly<E>,
    pub c6: Poly<E>,
    pub discriminant: Poly<E>,
}

impl<E: Clone + PartialEq + fmt::Debug> WeierstrassModel<E> {
    pub fn new(a1: Poly<E>, a2: Poly<E>, a3: Poly<E>, a4: Poly<E>, a6: Poly<E>) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    /// b₂ = a₁² + 4a₂, b₄ = 2a₄ + a₁a₃, b₆ = a₃² + 4a₆,
    /// b₈ = a₁²a₆ + 4a₂a₆ − a₁a₃a₄ + a₂a₃² − a₄²,
    /// c₄ = b₂² − 24b₄, c₆ = −b₂³ + 36b₂b₄ − 216b₆,
    /// Δ = −b₂²b₈ − 8b₄³ − 27b₆² + 9b₂b₄b₆.
    pub fn invariants<F: FieldCtx<El = E>>(&self, ctx: &F) -> ModelInvariants<E> {
        let a1 = &self.a1;
        let a2 = &self.a2;
        let a3 = &self.a3;
        let a4 = &self.a4;
        let a6 = &self.a6;

        let a1_sq = a1.mul(ctx, a1);
        let b2 = a1_sq.add(ctx, &a2.scale_i64(ctx, 4));
        let b4 = a4.scale_i64(ctx, 2).add(ctx, &a1.mul(ctx, a3));
        let b6 = a3.mul(ctx, a3).add(ctx, &a6.scale_i64(ctx, 4));
        let b8 = a1_sq
            .mul(ctx, a6)
            .add(ctx, &a2.mul(ctx, a6).scale_i64(ctx, 4))
            .sub(ctx, &a1.mul(ctx, a3).mul(ctx, a4))
            .add(ctx, &a2.mul(ctx, &a3.mul(ctx, a3)))
            .sub(ctx, &a4.mul(ctx, a4));

        let c4 = b2.mul(ctx, &b2).sub(ctx, &b4.scale_i64(ctx, 24));
        let c6 = b2
            .pow(ctx, 3)
            .neg(ctx)
            .add(ctx, &b2.mul(ctx, &b4).scale_i64(ctx, 36))
            .sub(ctx, &b6.scale_i64(ctx, 216));
        let discriminant = b2
            .mul(ctx, &b2)
            .mul(ctx, &b8)
            .neg(ctx)
            .sub(ctx, &b4.pow(ctx, 3).scale_i64(ctx, 8))
            .sub(ctx, &b6.mul(ctx, &b6).scale_i64(ctx, 27))
            .add(ctx, &b2.mul(ctx, &b4).mul(ctx, &b6).scale_i64(ctx, 9));

        ModelInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            discriminant,
        }
    }

    /// The change of variables (x, y) ↦ (u²x + r, u³y) for a unit scalar u
    /// and a polynomial shift r; it preserves the fibration and scales
    /// c₄ by u⁻⁴ and Δ by u⁻¹².
    pub fn transform<F: FieldCtx<El = E>>(&self, ctx: &F, u: &E, r: &Poly<E>) -> Option<Self> {
        let u_inv = ctx.inv(u)?;
        let inv_pow = |k: u32| {
            let mut acc = ctx.one();
            for _ in 0..k {
                acc = ctx.mul(&acc, &u_inv);
            }
            acc
        };
        let r2 = r.mul(ctx, r);
        let a1 = self.a1.scale(ctx, &inv_pow(1));
        let a2 = self
            .a2
            .add(ctx, &r.scale_i64(ctx, 3))
            .scale(ctx, &inv_pow(2));
        let a3 = self
            .a3
            .add(ctx, &r.mul(ctx, &self.a1))
            .scale(ctx, &inv_pow(3));
        let a4 = self
            .a4
            .add(ctx, &r.mul(ctx, &self.a2).scale_i64(ctx, 2))
            .add(ctx, &r2.scale_i64(ctx, 3))
            .scale(ctx, &inv_pow(4));
        let a6 = self
            .a6
            .add(ctx, &r.mul(ctx, &self.a4))
            .add(ctx, &r2.mul(ctx, &self.a2))
            .add(ctx, &r.mul(ctx, &r2))
            .scale(ctx, &inv_pow(6));
        Some(WeierstrassModel { a1, a2, a3, a4, a6 })
    }
}

/// The reduction type at t = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    /// Iₙ: good reduction for n = 0, multiplicative for n ≥ 1.
    I(u32),
    Ii,
    Iii,
    Iv,
    /// Iₙ*: the starred multiplicative/additive series, n ≥ 0.
    IStar(u32),
    IvStar,
    IiiStar,
    IiStar,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::Ii => write!(f, "II"),
            KodairaType::Iii => write!(f, "III"),
            KodairaType::Iv => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IvStar => write!(f, "IV*"),
            KodairaType::IiiStar => write!(f, "III*"),
            KodairaType::IiStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KodairaError {
    #[error("the discriminant vanishes identically, so the generic fiber is singular")]
    ZeroDiscriminant,
    #[error("valuations v(c4) = {}, v(delta) = {v_delta} match no reduction type",
        display_val(*.v_c4))]
    Unclassifiable { v_c4: Option<u32>, v_delta: u32 },
}

fn display_val(v: Option<u32>) -> String {
    match v {
        Some(n) => n.to_string(),
        None => "infinity".to_string(),
    }
}

/// A classified model: the type, the invariants of the model as given, the
/// minimal valuations, and how many (u, r) = (t-free, 0) rescalings by t
/// were needed to reach a minimal model.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification<E> {
    pub kodaira_type: KodairaType,
    pub invariants: ModelInvariants<E>,
    /// v(c₄) of the minimal model; `None` when c₄ = 0.
    pub v_c4: Option<u32>,
    /// v(Δ) of the minimal model.
    pub v_delta: u32,
    /// Count of (4, 6, 12)-reductions applied before reading the table.
    pub rescalings: u32,
}

/// Classify the reduction of a model at t = 0, minimalizing first: while
/// v(Δ) ≥ 12 and v(c₄) ≥ 4 the substitution x ↦ t²x, y ↦ t³y lowers
/// (v(c₄), v(Δ)) by (4, 12).
pub fn classify<E, F>(ctx: &F, model: &WeierstrassModel<E>) -> Result<Classification<E>, KodairaError>
where
    E: Clone + PartialEq + fmt::Debug,
    F: FieldCtx<El = E>,
{
    let invariants = model.invariants(ctx);
    if invariants.discriminant.is_zero() {
        return Err(KodairaError::ZeroDiscriminant);
    }
    let mut v_delta = invariants
        .discriminant
        .valuation(ctx)
        .expect("nonzero discriminant");
    let mut v_c4 = invariants.c4.valuation(ctx);

    let mut rescalings = 0;
    while v_delta >= 12 && v_c4.map(|v| v >= 4).unwrap_or(true) {
        v_delta -= 12;
        v_c4 = v_c4.map(|v| v - 4);
        rescalings += 1;
    }

    let at_least = |v: Option<u32>, bound: u32| v.map(|n| n >= bound).unwrap_or(true);
    let kodaira_type = if v_delta == 0 {
        KodairaType::I(0)
    } else if v_c4 == Some(0) {
        KodairaType::I(v_delta)
    } else {
        match (v_delta, v_c4) {
            (2, _) => KodairaType::Ii,
            (3, _) => KodairaType::Iii,
            (4, _) => KodairaType::Iv,
            (6, _) => KodairaType::IStar(0),
            (d, Some(2)) if d >= 7 => KodairaType::IStar(d - 6),
            (8, v) if at_least(v, 3) => KodairaType::IvStar,
            (9, Some(3)) => KodairaType::IiiStar,
            (10, v) if at_least(v, 4) => KodairaType::IiStar,
            (v_delta, v_c4) => return Err(KodairaError::Unclassifiable { v_c4, v_delta }),
        }
    };

    Ok(Classification {
        kodaira_type,
        invariants,
        v_c4,
        v_delta,
        rescalings,
    })
}

/// The crossing configuration of a special fiber, when its components form
/// one with smooth rational components and simple transverse crossings.
#[derive(Clone, Debug)]
pub enum FiberShape {
    /// Components and crossings assembled into a configuration over a
    /// separably closed residue field.
    Crossings { config: SurfaceConfig, description: String },
    /// The reduced fiber is not a simple-crossing arrangement of distinct
    /// components (or its crossing graph is not simple), so it cannot feed
    /// the descent machinery directly.
    NotSimpleCrossings {
        reason: String,
        /// Blow-ups needed before a three-cycle of components appears, when
        /// the type is a short cycle that can be improved.
        blowups_to_cycle: Option<u32>,
    },
}

fn fiber_config(curve_names: &[&str], edges: &[(usize, usize)]) -> SurfaceConfig {
    let curves: Vec<Curve> = curve_names
        .iter()
        .map(|name| Curve::new(*name, name, CurveKind::SpecialFiber, true))
        .collect();
    let points: Vec<ClosedPoint> = edges
        .iter()
        .enumerate()
        .map(|(k, (i, j))| {
            ClosedPoint::new(
                format!("x{}", k + 1),
                &[&curves[*i].id, &curves[*j].id],
            )
        })
        .collect();
    SurfaceConfig {
        base_kind: BaseKind::SemiGlobal,
        base_residue_field: ResidueFieldKind::SeparablyClosed,
        curves,
        points,
    }
}

/// The component/crossing layout of each fiber type, as a configuration when
/// the reduced fiber is a simple-crossing arrangement.
///
/// Cycles (Iₙ, n ≥ 3) are the shapes that can carry a nontrivial descent
/// obstruction; all starred types are trees.
pub fn fiber_shape(kodaira_type: KodairaType) -> FiberShape {
    let named = |n: usize, prefix: &str| -> Vec<String> {
        (1..=n).map(|k| format!("{prefix}{k}")).collect()
    };
    match kodaira_type {
        KodairaType::I(0) => FiberShape::Crossings {
            config: fiber_config(&["f1"], &[]),
            description: "smooth fiber: a single component, no crossings".to_string(),
        },
        KodairaType::I(1) => FiberShape::NotSimpleCrossings {
            reason: "nodal fiber: one component crossing itself".to_string(),
            blowups_to_cycle: Some(2),
        },
        KodairaType::I(2) => FiberShape::NotSimpleCrossings {
            reason: "two components meeting twice: the crossing graph is a double edge"
                .to_string(),
            blowups_to_cycle: Some(1),
        },
        KodairaType::I(n) => {
            let names = named(n as usize, "f");
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let edges: Vec<(usize, usize)> =
                (0..n as usize).map(|i| (i, (i + 1) % n as usize)).collect();
            FiberShape::Crossings {
                config: fiber_config(&refs, &edges),
                description: format!("cycle of {n} components"),
            }
        }
        KodairaType::Ii => FiberShape::NotSimpleCrossings {
            reason: "cuspidal fiber: one component with a cusp".to_string(),
            blowups_to_cycle: None,
        },
        KodairaType::Iii => FiberShape::NotSimpleCrossings {
            reason: "two components tangent at one point".to_string(),
            blowups_to_cycle: None,
        },
        KodairaType::Iv => FiberShape::NotSimpleCrossings {
            reason: "three components through one common point".to_string(),
            blowups_to_cycle: None,
        },
        KodairaType::IStar(n) => {
            // A chain c1..c_{n+1} with two legs at each end.
            let chain = n as usize + 1;
            let mut names: Vec<String> = named(chain, "c");
            names.extend(named(4, "g"));
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut edges: Vec<(usize, usize)> = (0..chain - 1).map(|i| (i, i + 1)).collect();
            edges.push((0, chain)); // g1 on the first chain component
            edges.push((0, chain + 1)); // g2
            edges.push((chain - 1, chain + 2)); // g3 on the last
            edges.push((chain - 1, chain + 3)); // g4
            FiberShape::Crossings {
                config: fiber_config(&refs, &edges),
                description: format!("tree: chain of {chain} with two legs at each end"),
            }
        }
        KodairaType::IvStar => {
            // Three arms of length 2 from a central component.
            let names = ["c", "a1", "a2", "b1", "b2", "d1", "d2"];
            let edges = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
            FiberShape::Crossings {
                config: fiber_config(&names, &edges),
                description: "tree: three arms of length 2 from a center".to_string(),
            }
        }
        KodairaType::IiiStar => {
            // Chain of 7 with a leg at the middle component.
            let mut names = named(7, "c");
            names.push("g1".to_string());
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, i + 1)).collect();
            edges.push((3, 7));
            FiberShape::Crossings {
                config: fiber_config(&refs, &edges),
                description: "tree: chain of 7 with a leg at the center".to_string(),
            }
        }
        KodairaType::IiStar => {
            // Chain of 8 with a leg at the third component from one end.
            let mut names = named(8, "c");
            names.push("g1".to_string());
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut edges: Vec<(usize, usize)> = (0..7).map(|i| (i, i + 1)).collect();
            edges.push((5, 8));
            FiberShape::Crossings {
                config: fiber_config(&refs, &edges),
                description: "tree: chain of 8 with one leg".to_string(),
            }
        }
    }
}
