//! Isometries of finite-dimensional ultrametric normed spaces over finite
//! fields and truncated p-adic fields.
//!
//! Centred isometries are represented as fractal trees: per sphere, a
//! permutation of its open-ball classes plus one recursive child isometry per
//! class. The crate builds, applies, inverts, composes, verifies and factors
//! such trees, provides the standard constructions (sphere flips and
//! translations, transitivity witnesses, nonlinear witnesses), extends sphere
//! isometries to whole spaces, and carries an independent brute-force oracle
//! for small finite spaces.

pub mod constructions;
pub mod error;
pub mod geometry;
pub mod isotree;
pub mod json;
pub mod oracle;
pub mod par;
pub mod scalars;
pub mod spaces;
pub mod tingley;
pub mod value;

pub use error::{Error, Result};
pub use geometry::{Domain, Sphere, SphereLayout};
pub use isotree::{IsometryTree, Leaf, PointMap, SphereAction, Witness};
pub use par::Exec;
pub use scalars::{Field, FieldDescriptor, FieldElement};
pub use spaces::{Point, Space, SpaceDescriptor};
pub use value::NormValue;
