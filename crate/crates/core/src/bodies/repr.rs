//! On-disk JSON form of [`BodySpec`]:
//! `{"kind": "...", "params": [...], "translation": [...], "dim": 2, "function": "exp"}`.
//! `function` is only present for the `function-epigraph` kind.

use serde::{Deserialize, Serialize};

use super::{BodyKind, BodySpec, Profile};
use crate::error::GeomError;
use crate::vector::Vector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpecRepr {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default)]
    pub translation: Option<Vec<f64>>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
}

impl TryFrom<BodySpecRepr> for BodySpec {
    type Error = GeomError;

    fn try_from(repr: BodySpecRepr) -> Result<Self, GeomError> {
        let dim = repr.dim;
        let params = repr.params;
        let kind = match repr.kind.as_str() {
            "ellipsoid" => BodyKind::Ellipsoid { semi_axes: params },
            "elliptic-paraboloid-epigraph" => BodyKind::Paraboloid { coeffs: params },
            "hyperboloid-upper-sheet" => BodyKind::HyperboloidSheet { semi_axes: params },
            "circular-cone" => match params.as_slice() {
                [slope] => BodyKind::CircularCone { slope: *slope },
                _ => return Err(GeomError::InvalidSpec("circular-cone takes exactly one slope".into())),
            },
            "function-epigraph" => {
                if !params.is_empty() {
                    return Err(GeomError::InvalidSpec("function-epigraph takes no params".into()));
                }
                let name = repr
                    .function
                    .as_deref()
                    .ok_or_else(|| GeomError::InvalidSpec("function-epigraph requires \"function\"".into()))?;
                let profile = Profile::parse(name)
                    .ok_or_else(|| GeomError::InvalidSpec(format!("unknown function {name:?}")))?;
                BodyKind::FunctionEpigraph { profile }
            }
            "superellipsoid" => match params.split_first() {
                Some((p, [])) => BodyKind::Superellipsoid { exponent: *p, semi_axes: vec![1.0; dim] },
                Some((p, axes)) => BodyKind::Superellipsoid { exponent: *p, semi_axes: axes.to_vec() },
                None => return Err(GeomError::InvalidSpec("superellipsoid needs an exponent".into())),
            },
            other => return Err(GeomError::InvalidSpec(format!("unknown body kind {other:?}"))),
        };
        if repr.function.is_some() && !matches!(kind, BodyKind::FunctionEpigraph { .. }) {
            return Err(GeomError::InvalidSpec("\"function\" only applies to function-epigraph".into()));
        }
        let body = BodySpec::new(kind, dim)?;
        match repr.translation {
            Some(t) => {
                let offset = Vector::from_slice(&t)?;
                body.translated(offset)
            }
            None => Ok(body),
        }
    }
}

impl From<BodySpec> for BodySpecRepr {
    fn from(body: BodySpec) -> Self {
        let dim = body.translation.dim();
        let (params, function) = match &body.kind {
            BodyKind::Ellipsoid { semi_axes } => (semi_axes.clone(), None),
            BodyKind::Paraboloid { coeffs } => (coeffs.clone(), None),
            BodyKind::HyperboloidSheet { semi_axes } => (semi_axes.clone(), None),
            BodyKind::CircularCone { slope } => (vec![*slope], None),
            BodyKind::FunctionEpigraph { profile } => (Vec::new(), Some(profile.name().to_string())),
            BodyKind::Superellipsoid { exponent, semi_axes } => {
                let mut p = vec![*exponent];
                p.extend_from_slice(semi_axes);
                (p, None)
            }
        };
        BodySpecRepr {
            kind: body.kind.name().to_string(),
            params,
            translation: Some(body.translation.as_slice().to_vec()),
            dim,
            function,
        }
    }
}
