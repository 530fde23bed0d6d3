//! Structured set descriptions: `{"hrep": ...}`, `{"vrep": ...}`,
//! `{"cone": ...}` and `{"body": {"kind": ...}}`.

use serde::{Deserialize, Serialize};

use crate::body::{BodyFields, ConvexBodyOracle};
use crate::error::{Error, Result};
use crate::polyhedra::{hrep_of, ConeFields, HPolyhedron, HrepFields, PolyhedralCone, Polyhedron, VPolyhedron, VrepFields};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SetDocument {
    Hrep(HrepFields),
    Vrep(VrepFields),
    Cone(ConeFields),
    Body(BodyFields),
}

/// A parsed set: a polyhedron in either form, or an oracle body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexSet {
    Polyhedron(Polyhedron),
    Body(ConvexBodyOracle),
}

impl SetDocument {
    pub fn into_set(self) -> Result<ConvexSet> {
        Ok(match self {
            SetDocument::Hrep(doc) => ConvexSet::Polyhedron(Polyhedron::H(HPolyhedron::from_doc(doc, None)?)),
            SetDocument::Vrep(doc) => ConvexSet::Polyhedron(Polyhedron::V(VPolyhedron::from_doc(doc)?)),
            SetDocument::Cone(doc) => ConvexSet::Polyhedron(Polyhedron::V(PolyhedralCone::from_doc(doc)?.to_vpolyhedron())),
            SetDocument::Body(doc) => ConvexSet::Body(ConvexBodyOracle::epigraph(doc.kind)),
        })
    }

    pub fn from_polyhedron(p: &Polyhedron) -> Self {
        match p {
            Polyhedron::H(h) => SetDocument::Hrep(h.to_doc()),
            Polyhedron::V(v) => SetDocument::Vrep(v.to_doc()),
        }
    }
}

impl ConvexSet {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Polyhedron(p) => p.dim(),
            ConvexSet::Body(b) => b.dim(),
        }
    }

    pub fn polyhedron(&self) -> Result<&Polyhedron> {
        match self {
            ConvexSet::Polyhedron(p) => Ok(p),
            ConvexSet::Body(b) => Err(Error::UnsupportedBody(format!("{} is not polyhedral", b.kind_name()))),
        }
    }

    /// The H-form of a polyhedron, converting generators when needed.
    pub fn hpolyhedron(&self) -> Result<HPolyhedron> {
        match self.polyhedron()? {
            Polyhedron::H(h) => Ok(h.clone()),
            Polyhedron::V(v) => hrep_of(v),
        }
    }

    pub fn oracle(&self) -> Result<ConvexBodyOracle> {
        match self {
            ConvexSet::Body(b) => Ok(b.clone()),
            ConvexSet::Polyhedron(_) => Ok(ConvexBodyOracle::from(self.hpolyhedron()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::BodyKind;
    use crate::QVector;

    #[test]
    fn documents_round_trip() {
        for text in [
            r#"{"hrep":{"A":[["1","0"],["0","1"]],"b":["1","2/3"]}}"#,
            r#"{"vrep":{"points":[["0","0"]],"rays":[["1","1"]]}}"#,
            r#"{"cone":{"dim":2,"rays":[["0","1"]],"normals":[]}}"#,
            r#"{"body":{"kind":"parabola"}}"#,
        ] {
            let doc: SetDocument = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&doc).unwrap(), text);
            doc.into_set().unwrap();
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<SetDocument>(r#"{"body":{"kind":"parabola","lift":"1"}}"#).is_err());
        assert!(serde_json::from_str::<SetDocument>(r#"{"ball":{}}"#).is_err());
    }

    #[test]
    fn bodies_are_not_polyhedra() {
        let set = SetDocument::Body(BodyFields { kind: BodyKind::Hyperbola }).into_set().unwrap();
        assert!(matches!(set.polyhedron(), Err(Error::UnsupportedBody(_))));
        let cone = SetDocument::Cone(ConeFields { dim: 2, rays: vec![QVector::from_ints(&[1, 0])], normals: vec![] });
        assert_eq!(cone.into_set().unwrap().hpolyhedron().unwrap().dim(), 2);
    }
}
