//! Exact normal-surface theory and angle structures on triangulated
//! 3-dimensional pseudo-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`complex`]: gluing data, edge and vertex classes, vertex links.
//! - [`normal`]: matching equations, the tetrahedral/edge solution basis and
//!   the generalised Euler characteristic `χ*`.
//! - [`polytope`]: vertex solutions of the projective solution space.
//! - [`angles`]: generalised, semi- and strict angle structures, decided by
//!   exact linear programming and independently by `χ*` criteria.
//! - [`cwsurface`]: combinatorial angle structures on CW surfaces.
//! - [`prescribe`]: wedge angle structures with prescribed area-curvature.
//! - [`format`]: the text file formats read and written by the CLI.
//!
//! All quantities are exact rationals ([`Q`]). Angles, areas and curvatures
//! are measured in units of π throughout.

#![allow(clippy::needless_range_loop, clippy::result_large_err)]

pub mod angles;
pub mod census;
pub mod complex;
pub mod cwsurface;
pub mod format;
pub mod linalg;
pub mod lp;
pub mod normal;
pub mod polytope;
pub mod prescribe;

use num_rational::BigRational;

/// Exact rational scalar used everywhere in the crate.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// `num / den` as a rational.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

/// `serialize_with` helpers writing rationals as exact `"p/q"` strings.
pub mod qser {
    use serde::ser::{SerializeSeq, Serializer};

    use crate::Q;

    pub fn one<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn opt<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }
}

pub use angles::{decide, AngleAssignment, Decision, FarkasWitness, StructureKind};
pub use complex::{Gluing, Perm4, Triangulation};
pub use cwsurface::{CombAngleStructure, CwSurface};
pub use normal::{NormalVector, SolutionBasis, WzCoefficients};
pub use polytope::{enumerate_vertices, VertexSolution};
pub use prescribe::{AreaCurvature, WedgeAssignment};
