//! JSON body specifications. The document shape is
//! `{"family": ..., "params": {...}, "dim": n, "unconditional": bool}` with
//! canonical field order, so parse -> serialize round-trips byte-stable.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::body::{AffineMap, ConvexBody, Error, Family, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodySpec {
    pub family: String,
    pub params: Params,
    pub dim: usize,
    pub unconditional: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_widths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<Vec<f64>>>,
    /// `p` for lp balls; serialized as a string so `inf` is representable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub body: Option<Box<BodySpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<Box<BodySpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Box<BodySpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Box<BodySpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<f64>>,
}

fn missing(field: &str, family: &str) -> Error {
    Error::Spec(format!("family '{family}' requires params.{field}"))
}

fn matrix_from(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    if r == 0 || rows.iter().any(|row| row.len() != rows[0].len()) {
        return Err(Error::Spec("matrix rows must be nonempty and rectangular".into()));
    }
    let c = rows[0].len();
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl BodySpec {
    pub fn to_body(&self) -> Result<ConvexBody> {
        let fam = self.family.as_str();
        let body = match fam {
            "box" => {
                let hw = self.params.half_widths.clone().ok_or_else(|| missing("half_widths", fam))?;
                if hw.is_empty() || hw.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::Spec("half_widths must be positive".into()));
                }
                ConvexBody::axis_box(hw)
            }
            "ellipsoid" => {
                let rows = self.params.shape.as_ref().ok_or_else(|| missing("shape", fam))?;
                ConvexBody::ellipsoid(matrix_from(rows)?)?
            }
            "lp_ball" => {
                let p_str = self.params.p.as_ref().ok_or_else(|| missing("p", fam))?;
                let p = if p_str == "inf" {
                    f64::INFINITY
                } else {
                    p_str.parse::<f64>().map_err(|_| Error::Spec(format!("bad p '{p_str}'")))?
                };
                let radius = self.params.radius.ok_or_else(|| missing("radius", fam))?;
                ConvexBody::lp_ball(self.dim, p, radius)?
            }
            "simplex" => {
                let vs = self.params.vertices.as_ref().ok_or_else(|| missing("vertices", fam))?;
                ConvexBody::simplex(vs.iter().map(|v| DVector::from_vec(v.clone())).collect())?
            }
            "cross_polytope" => {
                let scale = self.params.scale.ok_or_else(|| missing("scale", fam))?;
                ConvexBody::cross_polytope(self.dim, scale)
            }
            "intersection" => {
                let inner = self.params.body.as_ref().ok_or_else(|| missing("body", fam))?;
                let inner = inner.to_body()?;
                if let Some(other) = &self.params.other {
                    inner.intersect_body(other.to_body()?)?
                } else {
                    let radius = self.params.radius.ok_or_else(|| missing("radius", fam))?;
                    inner.intersect_ball(radius)?
                }
            }
            "minkowski_average" => {
                let a = self.params.a.as_ref().ok_or_else(|| missing("a", fam))?.to_body()?;
                let b = self.params.b.as_ref().ok_or_else(|| missing("b", fam))?.to_body()?;
                ConvexBody::minkowski_average(a, b)?
            }
            "affine_image" => {
                let inner = self.params.body.as_ref().ok_or_else(|| missing("body", fam))?.to_body()?;
                let rows = self.params.linear.as_ref().ok_or_else(|| missing("linear", fam))?;
                let linear = matrix_from(rows)?;
                let t = self
                    .params
                    .translation
                    .clone()
                    .unwrap_or_else(|| vec![0.0; linear.nrows()]);
                ConvexBody::affine_image(inner, AffineMap::new(linear, DVector::from_vec(t))?)?
            }
            other => return Err(Error::Spec(format!("unknown family '{other}'"))),
        };
        if body.dim() != self.dim {
            return Err(Error::Spec(format!(
                "declared dim {} but family yields dim {}",
                self.dim,
                body.dim()
            )));
        }
        Ok(body)
    }

    pub fn from_body(body: &ConvexBody) -> BodySpec {
        let dim = body.dim();
        let unconditional = body.is_unconditional();
        let (family, params) = match body.family() {
            Family::Box { half_widths } => (
                "box",
                Params { half_widths: Some(half_widths.clone()), ..Default::default() },
            ),
            Family::Ellipsoid { shape } => (
                "ellipsoid",
                Params {
                    shape: Some(
                        (0..shape.nrows())
                            .map(|i| (0..shape.ncols()).map(|j| shape[(i, j)]).collect())
                            .collect(),
                    ),
                    ..Default::default()
                },
            ),
            Family::LpBall { p, radius } => (
                "lp_ball",
                Params {
                    p: Some(if p.is_infinite() { "inf".into() } else { format!("{p}") }),
                    radius: Some(*radius),
                    ..Default::default()
                },
            ),
            Family::Simplex { vertices } => (
                "simplex",
                Params {
                    vertices: Some(vertices.iter().map(|v| v.iter().cloned().collect()).collect()),
                    ..Default::default()
                },
            ),
            Family::CrossPolytope { scale } => {
                ("cross_polytope", Params { scale: Some(*scale), ..Default::default() })
            }
            Family::Intersection { body, radius } => (
                "intersection",
                Params {
                    body: Some(Box::new(BodySpec::from_body(body))),
                    radius: Some(*radius),
                    ..Default::default()
                },
            ),
            Family::IntersectionBody { body, other } => (
                "intersection",
                Params {
                    body: Some(Box::new(BodySpec::from_body(body))),
                    other: Some(Box::new(BodySpec::from_body(other))),
                    ..Default::default()
                },
            ),
            Family::MinkowskiAverage { a, b } => (
                "minkowski_average",
                Params {
                    a: Some(Box::new(BodySpec::from_body(a))),
                    b: Some(Box::new(BodySpec::from_body(b))),
                    ..Default::default()
                },
            ),
            Family::AffineImage { body, map } => (
                "affine_image",
                Params {
                    body: Some(Box::new(BodySpec::from_body(body))),
                    linear: Some(
                        (0..map.linear().nrows())
                            .map(|i| (0..map.linear().ncols()).map(|j| map.linear()[(i, j)]).collect())
                            .collect(),
                    ),
                    translation: Some(map.translation().iter().cloned().collect()),
                    ..Default::default()
                },
            ),
        };
        BodySpec { family: family.into(), params, dim, unconditional }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body specs serialize")
    }

    pub fn from_json(text: &str) -> Result<BodySpec> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("parse error: {e}")))
    }
}
