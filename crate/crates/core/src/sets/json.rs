use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numerics::Matrix;
use crate::sets::{Ellipsoid, HPolytope, SetExpr, VPolytope};

/// Wire form of a set description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub(crate) enum SetJson {
    #[serde(rename = "hpolytope")]
    HPolytope { rows: Vec<Vec<f64>> },
    #[serde(rename = "vpolytope")]
    VPolytope { vertices: Vec<Vec<f64>> },
    #[serde(rename = "ellipsoid")]
    Ellipsoid {
        #[serde(rename = "E")]
        e: Vec<Vec<f64>>,
    },
    #[serde(rename = "ball-inf")]
    BallInf { n: usize },
    #[serde(rename = "ball-1")]
    Ball1 { n: usize },
    #[serde(rename = "intersection")]
    Intersection { members: Vec<SetJson> },
    #[serde(rename = "preimage")]
    Preimage {
        #[serde(rename = "M")]
        m: MatrixJson,
        inner: Box<SetJson>,
    },
    #[serde(rename = "scaled")]
    Scaled { alpha: f64, inner: Box<SetJson> },
    #[serde(rename = "polar")]
    Polar { inner: Box<SetJson> },
}

/// Matrices inside set descriptions may be written either as a bare array of
/// rows or as `{"rows": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum MatrixJson {
    Bare(Vec<Vec<f64>>),
    Wrapped { rows: Vec<Vec<f64>> },
}

impl MatrixJson {
    fn into_rows(self) -> Vec<Vec<f64>> {
        match self {
            MatrixJson::Bare(r) | MatrixJson::Wrapped { rows: r } => r,
        }
    }
}

impl TryFrom<SetJson> for SetExpr {
    type Error = Error;

    fn try_from(j: SetJson) -> Result<Self, Error> {
        let set = match j {
            SetJson::HPolytope { rows } => SetExpr::HPolytope(HPolytope::from_rows(rows)?),
            SetJson::VPolytope { vertices } => SetExpr::VPolytope(VPolytope::from_vertices(vertices)?),
            SetJson::Ellipsoid { e } => SetExpr::Ellipsoid(Ellipsoid::new(Matrix::from_rows(&e)?)?),
            SetJson::BallInf { n } => SetExpr::BallInf(n),
            SetJson::Ball1 { n } => SetExpr::Ball1(n),
            SetJson::Intersection { members } => SetExpr::Intersection(
                members.into_iter().map(SetExpr::try_from).collect::<Result<_, _>>()?,
            ),
            SetJson::Preimage { m, inner } => {
                SetExpr::Preimage(Matrix::from_rows(&m.into_rows())?, Box::new(SetExpr::try_from(*inner)?))
            }
            SetJson::Scaled { alpha, inner } => SetExpr::Scaled(alpha, Box::new(SetExpr::try_from(*inner)?)),
            SetJson::Polar { inner } => SetExpr::Polar(Box::new(SetExpr::try_from(*inner)?)),
        };
        set.validate()?;
        Ok(set)
    }
}

impl From<&SetExpr> for SetJson {
    fn from(s: &SetExpr) -> Self {
        match s {
            SetExpr::HPolytope(p) => SetJson::HPolytope { rows: p.rows().to_vec() },
            SetExpr::VPolytope(p) => SetJson::VPolytope { vertices: p.vertices().to_vec() },
            SetExpr::Ellipsoid(e) => SetJson::Ellipsoid { e: e.shape().rows_vec() },
            SetExpr::BallInf(n) => SetJson::BallInf { n: *n },
            SetExpr::Ball1(n) => SetJson::Ball1 { n: *n },
            SetExpr::Intersection(m) => SetJson::Intersection { members: m.iter().map(SetJson::from).collect() },
            SetExpr::Preimage(m, inner) => SetJson::Preimage {
                m: MatrixJson::Bare(m.rows_vec()),
                inner: Box::new(SetJson::from(inner.as_ref())),
            },
            SetExpr::Scaled(a, inner) => SetJson::Scaled { alpha: *a, inner: Box::new(SetJson::from(inner.as_ref())) },
            SetExpr::Polar(inner) => SetJson::Polar { inner: Box::new(SetJson::from(inner.as_ref())) },
        }
    }
}

impl Serialize for SetExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        SetExpr::try_from(SetJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl Serialize for HPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SetJson::HPolytope { rows: self.rows().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SetJson::deserialize(d)? {
            SetJson::HPolytope { rows } => HPolytope::from_rows(rows).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("expected an hpolytope")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_variant() {
        let src = r#"{"type":"intersection","members":[
            {"type":"hpolytope","rows":[[1,0],[-1,0],[0,1],[0,-1]]},
            {"type":"vpolytope","vertices":[[1,0],[-1,0],[0,1],[0,-1]]},
            {"type":"ellipsoid","E":[[4,0],[0,1]]},
            {"type":"ball-inf","n":2},
            {"type":"ball-1","n":2},
            {"type":"preimage","M":[[2,0],[0,2]],"inner":{"type":"ball-inf","n":2}},
            {"type":"scaled","alpha":0.5,"inner":{"type":"ball-1","n":2}},
            {"type":"polar","inner":{"type":"ball-1","n":2}}
        ]}"#;
        let s: SetExpr = serde_json::from_str(src).unwrap();
        assert_eq!(s.dim(), 2);
        let again: SetExpr = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn rejects_general_inequalities_and_bad_shapes() {
        // only normalized rows are accepted; an explicit rhs is an unknown field
        assert!(serde_json::from_str::<SetExpr>(r#"{"type":"hpolytope","rows":[[1]],"b":[2]}"#).is_err());
        assert!(serde_json::from_str::<SetExpr>(r#"{"type":"ellipsoid","E":[[1,0],[0,-1]]}"#).is_err());
        assert!(serde_json::from_str::<SetExpr>(r#"{"type":"intersection","members":[]}"#).is_err());
        assert!(serde_json::from_str::<SetExpr>(
            r#"{"type":"intersection","members":[{"type":"ball-1","n":2},{"type":"ball-1","n":3}]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<SetExpr>(r#"{"type":"scaled","alpha":0,"inner":{"type":"ball-1","n":1}}"#).is_err());
        assert!(serde_json::from_str::<SetExpr>(r#"{"type":"ball-inf","n":0}"#).is_err());
    }

    #[test]
    fn wrapped_matrix_accepted() {
        let s: SetExpr = serde_json::from_str(
            r#"{"type":"preimage","M":{"rows":[[0.5]]},"inner":{"type":"ball-1","n":1}}"#,
        )
        .unwrap();
        assert!((s.gauge(&[2.0]).unwrap() - 1.0).abs() < 1e-15);
    }
}
