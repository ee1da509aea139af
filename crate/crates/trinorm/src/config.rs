//! The JSON document format for problems: a fixed-key schema that parses
//! into a [`TorsorProblem`] and prints back bit-identically.
//!
//! Top-level keys: `base` (kind plus residue field), `curves`, `points`,
//! and `problem` with the three coefficient elements `a`, `b`, `c`, each a
//! curve-exponent map plus a unit square-class tag. Unknown keys are
//! rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{CurveId, ResidueFieldKind};
use crate::surface::{
    BaseKind, ClosedPoint, Curve, CurveKind, MonomialElement, SurfaceConfig,
};
use crate::torsor::TorsorProblem;

/// A parsed problem document; the schema mirror of [`TorsorProblem`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub base: BaseDoc,
    pub curves: Vec<CurveDoc>,
    pub points: Vec<PointDoc>,
    pub problem: ProblemDoc,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDoc {
    pub kind: BaseKind,
    pub residue_field: ResidueFieldDoc,
}

/// `"separably-closed"` or `{"finite": q}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ResidueFieldDoc {
    SeparablyClosed,
    Finite(u64),
}

impl Serialize for ResidueFieldDoc {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ResidueFieldDoc::SeparablyClosed => serializer.serialize_str("separably-closed"),
            ResidueFieldDoc::Finite(q) => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("finite", q)?;
                map.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ResidueFieldDoc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct FieldVisitor;

        impl<'de> Visitor<'de> for FieldVisitor {
            type Value = ResidueFieldDoc;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"separably-closed\" or {\"finite\": q}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "separably-closed" {
                    Ok(ResidueFieldDoc::SeparablyClosed)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut q: Option<u64> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "finite" => {
                            if q.replace(map.next_value()?).is_some() {
                                return Err(de::Error::duplicate_field("finite"));
                            }
                        }
                        other => {
                            return Err(de::Error::unknown_field(other, &["finite"]));
                        }
                    }
                }
                q.map(ResidueFieldDoc::Finite)
                    .ok_or_else(|| de::Error::missing_field("finite"))
            }
        }

        deserializer.deserialize_any(FieldVisitor)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub id: String,
    pub name: String,
    pub kind: CurveKind,
    pub rational: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub id: String,
    pub curves: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub a: ElementDoc,
    pub b: ElementDoc,
    pub c: ElementDoc,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    /// Curve-id → valuation of the element along that curve.
    pub exponents: BTreeMap<String, i64>,
    pub unit: UnitTag,
}

/// Square class of the global unit part of an element.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitTag {
    Square,
    Nonsquare,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("a finite base field must have q ≡ 1 (mod 4) with q an odd prime power, got {0}")]
    BadFiniteOrder(u64),
}

/// Parse a document from JSON text, with positional diagnostics.
pub fn parse(text: &str) -> Result<ConfigDocument, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty-print a document. `parse(&print(doc))` returns `doc` exactly.
pub fn print(doc: &ConfigDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization is total")
}

impl ConfigDocument {
    /// Lower the document to the analysis types. Referential defects (unknown
    /// curve ids, tag/base mismatches) are left to [`TorsorProblem::validate`].
    pub fn to_problem(&self) -> TorsorProblem {
        let residue_field = match self.base.residue_field {
            ResidueFieldDoc::SeparablyClosed => ResidueFieldKind::SeparablyClosed,
            ResidueFieldDoc::Finite(q) => ResidueFieldKind::FiniteQ1Mod4(q),
        };
        let curves = self
            .curves
            .iter()
            .map(|c| Curve::new(c.id.as_str(), &c.name, c.kind, c.rational))
            .collect();
        let points = self
            .points
            .iter()
            .map(|p| {
                let ids: Vec<CurveId> = p.curves.iter().map(CurveId::new).collect();
                ClosedPoint::new(p.id.as_str(), &ids.iter().collect::<Vec<_>>())
            })
            .collect();
        let config = SurfaceConfig {
            base_kind: self.base.kind,
            base_residue_field: residue_field,
            curves,
            points,
        };
        let element = |doc: &ElementDoc| {
            let pairs: Vec<(CurveId, i64)> = doc
                .exponents
                .iter()
                .map(|(id, e)| (CurveId::new(id), *e))
                .collect();
            let mut el =
                MonomialElement::from_exponents(&pairs.iter().map(|(c, e)| (c, *e)).collect::<Vec<_>>());
            el.nonsquare_tag = doc.unit == UnitTag::Nonsquare;
            el
        };
        TorsorProblem::new(
            config,
            element(&self.problem.a),
            element(&self.problem.b),
            element(&self.problem.c),
        )
    }

    /// The document form of an in-memory problem.
    pub fn from_problem(problem: &TorsorProblem) -> ConfigDocument {
        let residue_field = match problem.config.base_residue_field {
            ResidueFieldKind::SeparablyClosed => ResidueFieldDoc::SeparablyClosed,
            ResidueFieldKind::FiniteQ1Mod4(q) => ResidueFieldDoc::Finite(q),
            ResidueFieldKind::CurveFunctionField(_) => {
                unreachable!("a base residue field is never a curve function field")
            }
        };
        let element = |el: &MonomialElement| ElementDoc {
            exponents: el
                .exponents
                .iter()
                .map(|(id, e)| (id.to_string(), *e))
                .collect(),
            unit: if el.nonsquare_tag {
                UnitTag::Nonsquare
            } else {
                UnitTag::Square
            },
        };
        ConfigDocument {
            base: BaseDoc {
                kind: problem.config.base_kind,
                residue_field,
            },
            curves: problem
                .config
                .curves
                .iter()
                .map(|c| CurveDoc {
                    id: c.id.to_string(),
                    name: c.name.clone(),
                    kind: c.kind,
                    rational: c.rational,
                })
                .collect(),
            points: problem
                .config
                .points
                .iter()
                .map(|p| PointDoc {
                    id: p.id.to_string(),
                    curves: p.curves.iter().map(ToString::to_string).collect(),
                })
                .collect(),
            problem: ProblemDoc {
                a: element(&problem.a),
                b: element(&problem.b),
                c: element(&problem.c),
            },
        }
    }
}
