//! Exact convex geometry for recession cones, Hausdorff distances and hidden
//! sets of closed convex sets in finite dimension.

pub mod body;
pub mod classifier;
pub mod document;
pub mod error;
pub mod hausdorff;
pub mod hiding;
pub mod numeric;
pub mod plane;
pub mod polyhedra;
pub mod testgen;

pub use body::{BodyKind, ConvexBodyOracle};
pub use classifier::{classify, epsilon_net, Classification, ClassifyBudget};
pub use document::{ConvexSet, SetDocument};
pub use error::{Error, Result};
pub use hausdorff::HausdorffOutcome;
pub use hiding::HidingWitness;
pub use numeric::{Norm, QVector, Rational};
pub use polyhedra::{HPolyhedron, PolyhedralCone, Polyhedron, VPolyhedron};
