//! JSON interchange for blocking sets, subspaces and construction parameters.
//!
//! A blocking set is `{"q", "n", "k", "field"?, "points", "hyperplanes"}`.
//! Points are normalized coordinate vectors of field codes (leftmost nonzero
//! entry is 1); hyperplanes are given by their normalized dual coordinates.
//! `field` is only needed to pick a non-default modulus.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocking::{BlockingError, BlockingSet, Element};
use crate::constructions::Construction1Params;
use crate::geometry::{GeometryContext, GeometryError, Point, Subspace};
use crate::gf::{FieldError, FieldSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("q = {q} does not match the field p^e = {p}^{e}")]
    OrderMismatch { q: u32, p: u32, e: u32 },
    #[error("coordinates {0:?} are not normalized")]
    NotNormalized(Vec<u32>),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Blocking(#[from] BlockingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldJson {
    pub fn of(field: &FieldSpec) -> Self {
        FieldJson {
            p: field.p(),
            e: field.e(),
            modulus: field.modulus().to_vec(),
        }
    }
}

/// Builds the ambient space from `q`, `n` and an optional field description.
pub fn context_from(
    q: u32,
    n: usize,
    field: Option<&FieldJson>,
) -> Result<GeometryContext, JsonError> {
    let spec = match field {
        None => FieldSpec::of_order(q)?,
        Some(f) => {
            let spec = FieldSpec::new(f.p, f.e, Some(&f.modulus))?;
            if spec.q() != q {
                return Err(JsonError::OrderMismatch { q, p: f.p, e: f.e });
            }
            spec
        }
    };
    Ok(GeometryContext::new(spec, n)?)
}

fn field_if_needed(ctx: &GeometryContext) -> Option<FieldJson> {
    (ctx.field().e() > 1).then(|| FieldJson::of(ctx.field()))
}

fn normalized_point(ctx: &GeometryContext, codes: &[u32]) -> Result<Point, JsonError> {
    let p = ctx.point_from_codes(codes)?;
    if p.codes() != codes {
        return Err(JsonError::NotNormalized(codes.to_vec()));
    }
    Ok(p)
}

fn hyperplane_codes(ctx: &GeometryContext, h: &Subspace) -> Vec<u32> {
    ctx.dual_point(h)
        .expect("blocking set hyperplanes are hyperplanes")
        .codes()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockingSetJson {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    #[serde(default)]
    pub points: Vec<Vec<u32>>,
    #[serde(default)]
    pub hyperplanes: Vec<Vec<u32>>,
}

impl BlockingSetJson {
    /// Canonical form: points and hyperplanes in index order.
    pub fn of(b: &BlockingSet) -> Self {
        let ctx = b.ctx();
        let mut hyperplanes: Vec<Point> = b
            .hyperplanes()
            .iter()
            .map(|h| ctx.dual_point(h).expect("hyperplane"))
            .collect();
        hyperplanes.sort();
        BlockingSetJson {
            q: ctx.q(),
            n: ctx.n(),
            k: b.k(),
            field: field_if_needed(ctx),
            points: b.points().iter().map(Point::codes).collect(),
            hyperplanes: hyperplanes.iter().map(Point::codes).collect(),
        }
    }

    pub fn context(&self) -> Result<GeometryContext, JsonError> {
        context_from(self.q, self.n, self.field.as_ref())
    }

    pub fn to_set(&self) -> Result<BlockingSet, JsonError> {
        let ctx = self.context()?;
        let points = self
            .points
            .iter()
            .map(|c| normalized_point(&ctx, c))
            .collect::<Result<Vec<_>, _>>()?;
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|c| normalized_point(&ctx, c).map(|d| ctx.hyperplane_of(&d)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BlockingSet::new(ctx, self.k, points, hyperplanes)?)
    }
}

pub fn parse_blocking_set(text: &str) -> Result<BlockingSet, JsonError> {
    let doc: BlockingSetJson =
        serde_json::from_str(text).map_err(|e| JsonError::Parse(e.to_string()))?;
    doc.to_set()
}

pub fn blocking_set_to_value(b: &BlockingSet) -> serde_json::Value {
    serde_json::to_value(BlockingSetJson::of(b)).expect("serializable")
}

/// A subspace as its reduced row echelon basis, one row of codes per vector.
pub fn subspace_rows(s: &Subspace) -> Vec<Vec<u32>> {
    s.basis()
        .iter()
        .map(|row| row.iter().map(|x| x.code() as u32).collect())
        .collect()
}

pub fn element_value(ctx: &GeometryContext, e: &Element) -> serde_json::Value {
    match e {
        Element::Point(p) => serde_json::json!({ "point": p.codes() }),
        Element::Hyperplane(h) => serde_json::json!({ "hyperplane": hyperplane_codes(ctx, h) }),
    }
}

/// Mixed-construction parameters, each subspace as basis rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionParamsJson {
    pub q: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
    pub sigma_big: Vec<Vec<u32>>,
    pub sigma: Vec<Vec<u32>>,
    pub k1: Vec<Vec<Vec<u32>>>,
    pub k2: Vec<Vec<Vec<u32>>>,
}

impl ConstructionParamsJson {
    pub fn of(ctx: &GeometryContext, p: &Construction1Params) -> Self {
        ConstructionParamsJson {
            q: ctx.q(),
            n: ctx.n(),
            field: field_if_needed(ctx),
            sigma_big: subspace_rows(&p.sigma_big),
            sigma: subspace_rows(&p.sigma),
            k1: p.k1.iter().map(subspace_rows).collect(),
            k2: p.k2.iter().map(subspace_rows).collect(),
        }
    }

    pub fn to_params(&self) -> Result<(GeometryContext, Construction1Params), JsonError> {
        let ctx = context_from(self.q, self.n, self.field.as_ref())?;
        let all = |v: &[Vec<Vec<u32>>]| -> Result<Vec<Subspace>, GeometryError> {
            let mut out = v
                .iter()
                .map(|r| ctx.subspace_from_codes(r))
                .collect::<Result<Vec<_>, _>>()?;
            out.sort();
            Ok(out)
        };
        let params = Construction1Params {
            sigma_big: ctx.subspace_from_codes(&self.sigma_big)?,
            sigma: ctx.subspace_from_codes(&self.sigma)?,
            k1: all(&self.k1)?,
            k2: all(&self.k2)?,
        };
        Ok((ctx, params))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_params, construction1};

    #[test]
    fn round_trip_construction() {
        let ctx = GeometryContext::pg(3, 4).unwrap();
        let b = construction1(&ctx, &canonical_params(&ctx, 2).unwrap()).unwrap();
        let text = serde_json::to_string(&BlockingSetJson::of(&b)).unwrap();
        assert!(text.contains("\"modulus\":[1,1,1]"));
        assert_eq!(parse_blocking_set(&text).unwrap(), b);
    }

    #[test]
    fn parse_plain_document() {
        let b = parse_blocking_set(r#"{"q":2,"n":2,"k":1,"points":[[0,0,1],[0,1,0],[0,1,1]]}"#)
            .unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.is_blocking().unwrap().blocking);
    }

    #[test]
    fn rejects_bad_input() {
        let unnormalized = r#"{"q":3,"n":2,"k":1,"points":[[2,0,0]]}"#;
        assert_eq!(
            parse_blocking_set(unnormalized),
            Err(JsonError::NotNormalized(vec![2, 0, 0]))
        );
        assert!(matches!(parse_blocking_set("{"), Err(JsonError::Parse(_))));
        assert!(matches!(
            parse_blocking_set(r#"{"q":6,"n":2,"k":1}"#),
            Err(JsonError::Field(_))
        ));
        assert!(matches!(
            parse_blocking_set(r#"{"q":4,"n":2,"k":1,"field":{"p":3,"e":2,"modulus":[1,0,1]}}"#),
            Err(JsonError::OrderMismatch { .. })
        ));
        assert!(matches!(
            parse_blocking_set(r#"{"q":2,"n":2,"k":1,"points":[[1,0]]}"#),
            Err(JsonError::Geometry(_))
        ));
    }

    #[test]
    fn params_round_trip() {
        let ctx = GeometryContext::pg(3, 3).unwrap();
        let p = canonical_params(&ctx, 1).unwrap();
        let doc = ConstructionParamsJson::of(&ctx, &p);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ConstructionParamsJson = serde_json::from_str(&text).unwrap();
        let (ctx2, p2) = back.to_params().unwrap();
        assert_eq!(p2, p);
        assert_eq!(construction1(&ctx2, &p2).unwrap().len(), 12);
    }
}
