//! JSON point-set files.
//!
//! ```json
//! {"q":5,"field":{"p":5,"e":1,"modulus":[]},"points":[[0,0,1],[1,2,3]]}
//! ```
//!
//! Points are normalized homogeneous triples of element indices (first
//! nonzero coordinate equal to 1). Affine sets carry the id of the line at
//! infinity in `r_inf`. `trace` holds construction labels and is ignored on
//! input.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::plane::{LineId, Plane, PointSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldEcho {
    pub p: u32,
    pub e: u32,
    /// Coefficients of the reduction polynomial, constant term first,
    /// including the leading 1. Empty for prime fields.
    pub modulus: Vec<u32>,
}

impl FieldEcho {
    pub fn of(field: &FieldSpec) -> Self {
        FieldEcho {
            p: field.p(),
            e: field.e(),
            modulus: field.modulus().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub q: u32,
    pub field: FieldEcho,
    pub points: Vec<[u32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_inf: Option<LineId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

impl PointSetFile {
    pub fn new(plane: &Plane, set: &PointSet) -> Self {
        PointSetFile {
            q: plane.q() as u32,
            field: FieldEcho::of(plane.field()),
            points: set
                .ids()
                .into_iter()
                .map(|id| plane.points()[id].coords)
                .collect(),
            r_inf: None,
            trace: None,
        }
    }

    pub fn with_r_inf(mut self, r_inf: LineId) -> Self {
        self.r_inf = Some(r_inf);
        self
    }

    pub fn with_trace(mut self, trace: impl Serialize) -> Self {
        self.trace = serde_json::to_value(trace).ok();
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("point-set files serialize")
    }

    /// The plane described by the field echo. The modulus must be the one
    /// this library picks for `GF(p^e)`.
    pub fn plane(&self) -> Result<Plane> {
        let field = FieldSpec::new(self.field.p as u64, self.field.e)?;
        if field.q() != self.q {
            return Err(Error::Format(format!(
                "q = {} does not match p^e = {}^{}",
                self.q, self.field.p, self.field.e
            )));
        }
        if field.modulus() != self.field.modulus.as_slice() {
            return Err(Error::Format(format!(
                "modulus {:?} differs from the canonical {:?}",
                self.field.modulus,
                field.modulus()
            )));
        }
        Plane::new(field)
    }

    /// The point set on `plane`; rejects unnormalized and repeated triples.
    pub fn point_set(&self, plane: &Plane) -> Result<PointSet> {
        let mut seen = BTreeSet::new();
        for &t in &self.points {
            let id = plane.point_id(t).ok_or_else(|| {
                Error::Format(format!(
                    "{t:?} is not a normalized point of PG(2,{})",
                    self.q
                ))
            })?;
            if !seen.insert(id) {
                return Err(Error::Format(format!("point {t:?} is listed twice")));
            }
        }
        if let Some(l) = self.r_inf {
            plane.line(l)?;
        }
        PointSet::from_ids(plane, seen)
    }

    pub fn load(&self) -> Result<(Plane, PointSet)> {
        let plane = self.plane()?;
        let set = self.point_set(&plane)?;
        Ok((plane, set))
    }
}
