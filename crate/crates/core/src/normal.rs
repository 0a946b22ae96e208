//! Normal coordinates, matching equations, the tetrahedral/edge solution
//! basis and the generalised Euler characteristic `χ*`.
//!
//! Coordinates are ordered quads first, then triangles: quad slot `m` of
//! tetrahedron `i` sits at `3i + m`, triangle `k` of tetrahedron `i` at
//! `3t + 4i + k`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{edge_index, Triangulation, EDGE_VERTICES};
use crate::linalg::{dot, Matrix};
use crate::{q, qr, Q};

/// Tetrahedron edges faced by (disjoint from) each quad slot. Slot 0
/// separates 01/23, slot 1 separates 03/12, slot 2 separates 02/13.
pub const QUAD_FACING: [[usize; 2]; 3] = [[0, 5], [2, 3], [1, 4]];

/// Quad slot facing tetrahedron edge `e`.
pub fn quad_facing_edge(e: usize) -> usize {
    match e {
        0 | 5 => 0,
        2 | 3 => 1,
        1 | 4 => 2,
        _ => panic!("edge index {e} out of range"),
    }
}

/// The four tetrahedron edges a quad of slot `m` crosses.
pub fn quad_meets(m: usize) -> impl Iterator<Item = usize> {
    (0..6).filter(move |e| !QUAD_FACING[m].contains(e))
}

/// The three tetrahedron edges a triangle cutting off vertex `k` crosses.
pub fn triangle_meets(k: usize) -> impl Iterator<Item = usize> {
    (0..4).filter(move |&u| u != k).map(move |u| edge_index(k, u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DiscKind {
    Quad,
    Triangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DiscTypeIndex {
    pub kind: DiscKind,
    pub tet: usize,
    pub slot: usize,
    pub global_index: usize,
}

impl DiscTypeIndex {
    pub fn quad(tet_count: usize, tet: usize, slot: usize) -> Self {
        assert!(tet < tet_count && slot < 3);
        DiscTypeIndex {
            kind: DiscKind::Quad,
            tet,
            slot,
            global_index: quad_index(tet, slot),
        }
    }

    pub fn triangle(tet_count: usize, tet: usize, slot: usize) -> Self {
        assert!(tet < tet_count && slot < 4);
        DiscTypeIndex {
            kind: DiscKind::Triangle,
            tet,
            slot,
            global_index: triangle_index(tet_count, tet, slot),
        }
    }

    pub fn from_global(tet_count: usize, index: usize) -> Self {
        if index < 3 * tet_count {
            DiscTypeIndex::quad(tet_count, index / 3, index % 3)
        } else {
            let r = index - 3 * tet_count;
            DiscTypeIndex::triangle(tet_count, r / 4, r % 4)
        }
    }
}

pub fn quad_index(tet: usize, slot: usize) -> usize {
    3 * tet + slot
}

pub fn triangle_index(tet_count: usize, tet: usize, k: usize) -> usize {
    3 * tet_count + 4 * tet + k
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalError {
    #[error("tetrahedron index {index} out of range (t = {count})")]
    TetOutOfRange { index: usize, count: usize },
    #[error("edge class {index} out of range (n = {count})")]
    EdgeOutOfRange { index: usize, count: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vector violates matching equation {row}")]
    NotInKernel { row: usize },
    #[error("solution basis check failed: {reason} ({vector})")]
    BasisFailure { reason: String, vector: String },
}

/// A vector of `7t` normal coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NormalVector {
    #[serde(serialize_with = "crate::qser::vec")]
    pub coords: Vec<Q>,
}

impl NormalVector {
    pub fn zero(tet_count: usize) -> Self {
        NormalVector {
            coords: vec![Q::zero(); 7 * tet_count],
        }
    }

    pub fn new(coords: Vec<Q>) -> Self {
        assert_eq!(coords.len() % 7, 0, "normal vectors have length 7t");
        NormalVector { coords }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        NormalVector::new(values.iter().map(|&v| q(v)).collect())
    }

    pub fn tet_count(&self) -> usize {
        self.coords.len() / 7
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn quads(&self) -> &[Q] {
        &self.coords[..3 * self.tet_count()]
    }

    pub fn triangles(&self) -> &[Q] {
        &self.coords[3 * self.tet_count()..]
    }

    pub fn quad(&self, tet: usize, slot: usize) -> &Q {
        &self.coords[quad_index(tet, slot)]
    }

    pub fn triangle(&self, tet: usize, k: usize) -> &Q {
        &self.coords[triangle_index(self.tet_count(), tet, k)]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn has_positive_quad(&self) -> bool {
        self.quads().iter().any(Signed::is_positive)
    }

    pub fn scaled(&self, factor: &Q) -> NormalVector {
        NormalVector {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &NormalVector) -> NormalVector {
        assert_eq!(self.len(), other.len());
        NormalVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Basis coefficients `(w, z)`: one weight per tetrahedron and one per edge
/// class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WzCoefficients {
    #[serde(serialize_with = "crate::qser::vec")]
    pub w: Vec<Q>,
    #[serde(serialize_with = "crate::qser::vec")]
    pub z: Vec<Q>,
}

impl WzCoefficients {
    pub fn zero(tet_count: usize, edge_count: usize) -> Self {
        WzCoefficients {
            w: vec![Q::zero(); tet_count],
            z: vec![Q::zero(); edge_count],
        }
    }

    /// Concatenation `(w, z)`.
    pub fn flat(&self) -> Vec<Q> {
        self.w.iter().chain(&self.z).cloned().collect()
    }

    pub fn from_flat(tet_count: usize, values: &[Q]) -> Self {
        WzCoefficients {
            w: values[..tet_count].to_vec(),
            z: values[tet_count..].to_vec(),
        }
    }
}

/// Matching (compatibility) equations: three rows per glued face pair, one
/// per normal arc type, with columns indexed by disc type.
pub fn matching_matrix(tri: &Triangulation) -> Matrix {
    let t = tri.tet_count();
    let mut m = Matrix::zeros(0, 7 * t);
    for g in tri.gluings() {
        let f = g.src_face;
        let p = g.vertex_map;
        for u in (0..4).filter(|&u| u != f) {
            let mut row = vec![Q::zero(); 7 * t];
            let (pu, pf) = (p.apply(u), p.apply(f));
            row[quad_index(g.src_tet, quad_facing_edge(edge_index(u, f)))] += Q::one();
            row[triangle_index(t, g.src_tet, u)] += Q::one();
            row[quad_index(g.dst_tet, quad_facing_edge(edge_index(pu, pf)))] -= Q::one();
            row[triangle_index(t, g.dst_tet, pu)] -= Q::one();
            m.push_row(row);
        }
    }
    m
}

/// Index of the first violated matching equation, if any.
pub fn residual_row(tri: &Triangulation, s: &NormalVector) -> Option<usize> {
    matching_matrix(tri)
        .mul_vec(&s.coords)
        .iter()
        .position(|r| !r.is_zero())
}

pub fn in_kernel(tri: &Triangulation, s: &NormalVector) -> bool {
    residual_row(tri, s).is_none()
}

/// `−1` on the quads of tetrahedron `i`, `+1` on its triangles.
pub fn tet_solution(tri: &Triangulation, i: usize) -> Result<NormalVector, NormalError> {
    let t = tri.tet_count();
    if i >= t {
        return Err(NormalError::TetOutOfRange { index: i, count: t });
    }
    let mut v = NormalVector::zero(t);
    for m in 0..3 {
        v.coords[quad_index(i, m)] = -Q::one();
    }
    for k in 0..4 {
        v.coords[triangle_index(t, i, k)] = Q::one();
    }
    Ok(v)
}

/// Sum over the embeddings of edge class `e` of the two triangles meeting
/// the embedded edge minus the quad facing it.
pub fn edge_solution(tri: &Triangulation, e: usize) -> Result<NormalVector, NormalError> {
    let t = tri.tet_count();
    let class = tri.edge_classes().get(e).ok_or(NormalError::EdgeOutOfRange {
        index: e,
        count: tri.edge_count(),
    })?;
    let mut v = NormalVector::zero(t);
    for emb in &class.embeddings {
        let [a, b] = EDGE_VERTICES[emb.edge];
        v.coords[triangle_index(t, emb.tet, a)] += Q::one();
        v.coords[triangle_index(t, emb.tet, b)] += Q::one();
        v.coords[quad_index(emb.tet, quad_facing_edge(emb.edge))] -= Q::one();
    }
    Ok(v)
}

/// The tetrahedral and edge solutions, verified to form a basis of the
/// solution space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionBasis {
    pub tet_solutions: Vec<NormalVector>,
    pub edge_solutions: Vec<NormalVector>,
    /// `7t × (t + n)` matrix whose columns are the basis vectors.
    matrix: Matrix,
}

impl SolutionBasis {
    pub fn tet_count(&self) -> usize {
        self.tet_solutions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_solutions.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn vectors(&self) -> impl Iterator<Item = &NormalVector> {
        self.tet_solutions.iter().chain(&self.edge_solutions)
    }

    /// `Σ wᵢ W_σᵢ + Σ zⱼ W_eⱼ`.
    pub fn expand(&self, c: &WzCoefficients) -> NormalVector {
        assert_eq!(c.w.len(), self.tet_count());
        assert_eq!(c.z.len(), self.edge_count());
        NormalVector::new(self.matrix.mul_vec(&c.flat()))
    }

    /// Inverse of [`expand`](Self::expand) on the solution space.
    pub fn coefficients(
        &self,
        tri: &Triangulation,
        s: &NormalVector,
    ) -> Result<WzCoefficients, NormalError> {
        if s.len() != self.matrix.rows() {
            return Err(NormalError::LengthMismatch {
                expected: self.matrix.rows(),
                got: s.len(),
            });
        }
        if let Some(row) = residual_row(tri, s) {
            return Err(NormalError::NotInKernel { row });
        }
        let flat = self
            .matrix
            .solve(&s.coords)
            .expect("the solution basis spans the kernel");
        Ok(WzCoefficients::from_flat(self.tet_count(), &flat))
    }
}

/// Builds every tetrahedral and edge solution and checks kernel membership,
/// linear independence and that they span the kernel.
pub fn verify_basis(tri: &Triangulation) -> Result<SolutionBasis, NormalError> {
    let t = tri.tet_count();
    let n = tri.edge_count();
    let tet_solutions: Vec<NormalVector> =
        (0..t).map(|i| tet_solution(tri, i)).collect::<Result<_, _>>()?;
    let edge_solutions: Vec<NormalVector> =
        (0..n).map(|e| edge_solution(tri, e)).collect::<Result<_, _>>()?;

    let matching = matching_matrix(tri);
    for v in tet_solutions.iter().chain(&edge_solutions) {
        if let Some(row) = matching.mul_vec(&v.coords).iter().position(|r| !r.is_zero()) {
            return Err(NormalError::BasisFailure {
                reason: format!("vector violates matching equation {row}"),
                vector: format_vector(&v.coords),
            });
        }
    }
    let columns: Vec<Vec<Q>> = tet_solutions
        .iter()
        .chain(&edge_solutions)
        .map(|v| v.coords.clone())
        .collect();
    let matrix = Matrix::from_columns(7 * t, &columns);
    let rank = matrix.rank();
    if rank != t + n {
        return Err(NormalError::BasisFailure {
            reason: format!("rank {rank} of the {} solutions is not t + n", t + n),
            vector: String::from("all"),
        });
    }
    let kernel_dim = 7 * t - matching.rank();
    if kernel_dim != t + n {
        return Err(NormalError::BasisFailure {
            reason: format!("kernel dimension {kernel_dim} differs from t + n = {}", t + n),
            vector: String::from("all"),
        });
    }
    Ok(SolutionBasis {
        tet_solutions,
        edge_solutions,
        matrix,
    })
}

/// `χ*` of each disc type in coordinate order.
pub fn chi_star_weights(tri: &Triangulation) -> Vec<Q> {
    let t = tri.tet_count();
    let inv_degree = |tet: usize, e: usize| -> Q {
        qr(1, tri.edge_classes()[tri.edge_class_of(tet, e)].degree() as i64)
    };
    let mut weights = vec![Q::zero(); 7 * t];
    for tet in 0..t {
        let unglued = (0..4).filter(|&f| !tri.is_face_glued(tet, f)).count() as i64;
        for m in 0..3 {
            let w = quad_meets(m).fold(qr(-(2 + unglued), 2), |acc, e| acc + inv_degree(tet, e));
            weights[quad_index(tet, m)] = w;
        }
        for k in 0..4 {
            let b = (0..4)
                .filter(|&f| f != k && !tri.is_face_glued(tet, f))
                .count() as i64;
            let w = triangle_meets(k).fold(qr(-(1 + b), 2), |acc, e| acc + inv_degree(tet, e));
            weights[triangle_index(t, tet, k)] = w;
        }
    }
    weights
}

/// Generalised Euler characteristic of a coordinate vector.
pub fn chi_star(tri: &Triangulation, s: &NormalVector) -> Q {
    dot(&chi_star_weights(tri), &s.coords)
}

/// The normal coordinates of the link of vertex class `v`: one triangle at
/// every corner in the class.
pub fn vertex_link_vector(tri: &Triangulation, v: usize) -> NormalVector {
    let t = tri.tet_count();
    let mut s = NormalVector::zero(t);
    for c in &tri.vertex_classes()[v].corners {
        s.coords[triangle_index(t, c.tet, c.vertex)] = Q::one();
    }
    s
}

pub(crate) fn format_vector(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn quad_conventions() {
        for (m, pair) in QUAD_FACING.iter().enumerate() {
            assert_eq!(pair[0] + pair[1], 5, "faced edges are opposite");
            for &e in pair {
                assert_eq!(quad_facing_edge(e), m);
            }
            assert_eq!(quad_meets(m).count(), 4);
        }
    }

    #[test]
    fn example_matching_matrix() {
        let tri = census::example_4_6();
        let m = matching_matrix(&tri);
        assert_eq!((m.rows(), m.cols()), (6, 7));
        assert_eq!(7 - m.rank(), 4);
        // T = q², R = q⁰ + q¹, S₁ = t⁰ + t², S₂ = t¹ + t³ all solve the system.
        for v in [
            [0, 0, 1, 0, 0, 0, 0],
            [1, 1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 1, 0],
            [0, 0, 0, 0, 1, 0, 1],
        ] {
            assert!(in_kernel(&tri, &NormalVector::from_i64(&v)));
        }
    }

    #[test]
    fn unglued_tetrahedron_kernel_is_everything() {
        let tri = census::unglued_tetrahedron();
        let m = matching_matrix(&tri);
        assert_eq!(m.rows(), 0);
        let basis = verify_basis(&tri).unwrap();
        assert_eq!(basis.vectors().count(), 7);
    }

    #[test]
    fn tet_solution_example() {
        let tri = census::example_4_6();
        assert_eq!(
            tet_solution(&tri, 0).unwrap(),
            NormalVector::from_i64(&[-1, -1, -1, 1, 1, 1, 1])
        );
        assert!(matches!(
            tet_solution(&tri, 1),
            Err(NormalError::TetOutOfRange { index: 1, count: 1 })
        ));
    }

    #[test]
    fn edge_solution_of_boundary_edge() {
        let tri = census::unglued_tetrahedron();
        let w = edge_solution(&tri, 0).unwrap();
        // edge {0,1}: triangles 0 and 1, quad slot 0
        assert_eq!(w, NormalVector::from_i64(&[-1, 0, 0, 1, 1, 0, 0]));
        assert_eq!(chi_star(&tri, &w), q(1));
    }

    #[test]
    fn example_edge_solutions() {
        let tri = census::example_4_6();
        for e in 0..tri.edge_count() {
            let w = edge_solution(&tri, e).unwrap();
            assert!(in_kernel(&tri, &w));
            let quad_sum = w.quads().iter().fold(Q::zero(), |a, b| a + b);
            let tri_sum = w.triangles().iter().fold(Q::zero(), |a, b| a + b);
            let d = tri.edge_classes()[e].degree() as i64;
            assert_eq!(quad_sum, q(-d));
            assert_eq!(tri_sum, q(2 * d));
            assert_eq!(chi_star(&tri, &w), q(2));
        }
    }

    #[test]
    fn example_chi_star_values() {
        let tri = census::example_4_6();
        let chi = |v: [i64; 7]| chi_star(&tri, &NormalVector::from_i64(&v));
        assert_eq!(chi([0, 0, 0, 1, 0, 1, 0]), q(2));
        assert_eq!(chi([0, 0, 0, 0, 1, 0, 1]), q(2));
        assert_eq!(chi([0, 0, 1, 0, 0, 0, 0]), q(0));
        assert_eq!(chi([1, 1, 0, 0, 0, 0, 0]), q(3));
        assert_eq!(chi([0; 7]), q(0));
    }

    #[test]
    fn coefficients_rejects_non_solutions() {
        let tri = census::example_4_6();
        let basis = verify_basis(&tri).unwrap();
        let bad = NormalVector::from_i64(&[1, 0, 0, 0, 0, 0, 0]);
        assert!(matches!(
            basis.coefficients(&tri, &bad),
            Err(NormalError::NotInKernel { .. })
        ));
        let c = WzCoefficients {
            w: vec![q(1)],
            z: vec![q(0); 3],
        };
        assert_eq!(basis.expand(&c), tet_solution(&tri, 0).unwrap());
    }

    #[test]
    fn vertex_links_of_example() {
        let tri = census::example_4_6();
        let s1 = vertex_link_vector(&tri, tri.vertex_class_of(0, 0));
        let s2 = vertex_link_vector(&tri, tri.vertex_class_of(0, 1));
        assert_eq!(s1, NormalVector::from_i64(&[0, 0, 0, 1, 0, 1, 0]));
        assert_eq!(s2, NormalVector::from_i64(&[0, 0, 0, 0, 1, 0, 1]));
    }
}
