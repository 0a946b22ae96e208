//! Wedge angle structures with prescribed area-curvature `(A, κ)`.
//!
//! A tetrahedron has six wedges, one per edge. Wedge slots are tied to
//! tetrahedron edges by [`WEDGE_EDGE`]: slot 0 ↔ {0,2}, 1 ↔ {0,1},
//! 2 ↔ {0,3}, 3 ↔ {1,3}, 4 ↔ {2,3}, 5 ↔ {1,2}, so opposite wedges are
//! `s` and `s + 3`. The triangle at vertex `k` meets the three wedges of
//! the edges at `k`. All angles, areas and curvatures are in units of π.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::angles::{
    angle_matrix, lp_generalised, lp_semi, lp_strict, semi_dimension, CriterionVerdict, LpVerdict,
    StructureKind,
};
use crate::complex::{edge_index, Triangulation, EDGE_VERTICES};
use crate::cwsurface::CombAngleStructure;
use crate::linalg::{dot, Matrix};
use crate::normal::{
    chi_star, quad_index, triangle_meets, vertex_link_vector, NormalError,
    NormalVector, SolutionBasis, WzCoefficients, QUAD_FACING,
};
use crate::polytope::enumerate_vertices;
use crate::{q, Q};

/// Tetrahedron edge of each wedge slot.
pub const WEDGE_EDGE: [usize; 6] = [1, 0, 2, 4, 5, 3];

/// Wedge slots met by the triangle at each vertex.
pub const TRIANGLE_WEDGES: [[usize; 3]; 4] = [[0, 1, 2], [1, 3, 5], [0, 4, 5], [2, 3, 4]];

/// Wedge slot containing tetrahedron edge `e`.
pub fn wedge_of_edge(e: usize) -> usize {
    WEDGE_EDGE.iter().position(|&x| x == e).expect("edge index in 0..6")
}

pub fn opposite_wedge(slot: usize) -> usize {
    (slot + 3) % 6
}

/// Wedge slots whose angles are corners of a quad of the given slot: the
/// four wedges other than those of the two faced edges.
pub fn quad_wedges(quad_slot: usize) -> impl Iterator<Item = usize> {
    let faced = QUAD_FACING[quad_slot].map(wedge_of_edge);
    (0..6).filter(move |w| !faced.contains(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WedgeIndex {
    pub tet: usize,
    pub slot: usize,
}

impl WedgeIndex {
    pub fn global(self) -> usize {
        6 * self.tet + self.slot
    }

    pub fn from_global(i: usize) -> Self {
        WedgeIndex {
            tet: i / 6,
            slot: i % 6,
        }
    }

    pub fn edge(self) -> usize {
        WEDGE_EDGE[self.slot]
    }

    /// The two triangle types (vertex labels) containing this wedge.
    pub fn triangles(self) -> [usize; 2] {
        EDGE_VERTICES[self.edge()]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrescribeError {
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error("expected {expected} {what}, got {got}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("matrix identity failed: {0}")]
    Identity(String),
    #[error("the {route} route says {lp}, the link criterion says {criterion}")]
    RouteDisagreement {
        route: &'static str,
        lp: bool,
        criterion: bool,
    },
    #[error("{0}")]
    ImplicationViolated(String),
    #[error("solution space has dimension {got}, expected 2t - n + v = {expected}")]
    DimensionMismatch { expected: i64, got: i64 },
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// Prescribed area per triangle type (`4t`, ordered `4i + k`) and
/// curvature per edge class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AreaCurvature {
    #[serde(serialize_with = "crate::qser::vec")]
    pub area: Vec<Q>,
    #[serde(serialize_with = "crate::qser::vec")]
    pub kappa: Vec<Q>,
}

impl AreaCurvature {
    pub fn zero(tri: &Triangulation) -> Self {
        AreaCurvature {
            area: vec![Q::zero(); 4 * tri.tet_count()],
            kappa: vec![Q::zero(); tri.edge_count()],
        }
    }

    pub fn new(tri: &Triangulation, area: Vec<Q>, kappa: Vec<Q>) -> Result<Self, PrescribeError> {
        if area.len() != 4 * tri.tet_count() {
            return Err(PrescribeError::Length {
                what: "triangle areas",
                expected: 4 * tri.tet_count(),
                got: area.len(),
            });
        }
        if kappa.len() != tri.edge_count() {
            return Err(PrescribeError::Length {
                what: "edge curvatures",
                expected: tri.edge_count(),
                got: kappa.len(),
            });
        }
        Ok(AreaCurvature { area, kappa })
    }

    pub fn regime(&self) -> SignRegime {
        let neg = self.area.iter().any(Signed::is_negative);
        let pos = self.area.iter().any(Signed::is_positive);
        match (neg, pos) {
            (false, false) => SignRegime::Zero,
            (true, false) => SignRegime::NonPositive,
            (false, true) => SignRegime::NonNegative,
            (true, true) => SignRegime::Mixed,
        }
    }
}

/// One angle per wedge, ordered `6i + slot`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeAssignment {
    #[serde(serialize_with = "crate::qser::vec")]
    pub values: Vec<Q>,
}

impl WedgeAssignment {
    pub fn value(&self, tet: usize, slot: usize) -> &Q {
        &self.values[6 * tet + slot]
    }

    pub fn is_valid(&self, tri: &Triangulation, ac: &AreaCurvature, kind: StructureKind) -> bool {
        let (b, rhs) = b_system(tri, ac);
        self.values.len() == b.cols()
            && b.mul_vec(&self.values) == rhs
            && match kind {
                StructureKind::Generalised => true,
                StructureKind::Semi => self.values.iter().all(|x| !x.is_negative()),
                StructureKind::Strict => self.values.iter().all(Signed::is_positive),
            }
    }
}

fn boundary_total(on_boundary: bool) -> Q {
    if on_boundary {
        q(1)
    } else {
        q(2)
    }
}

/// The system `B x = (a, b)`: `4t` triangle rows (angle sum `1 + A(t)`)
/// then `n` edge rows (angle sum `2 − κ`, or `1 − κ` on the boundary),
/// over `6t` wedge columns.
pub fn b_system(tri: &Triangulation, ac: &AreaCurvature) -> (Matrix, Vec<Q>) {
    let t = tri.tet_count();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..t {
        for (k, wedges) in TRIANGLE_WEDGES.iter().enumerate() {
            let mut row = vec![Q::zero(); 6 * t];
            for &w in wedges {
                row[6 * i + w] = Q::one();
            }
            rows.push(row);
            rhs.push(Q::one() + &ac.area[4 * i + k]);
        }
    }
    for (j, class) in tri.edge_classes().iter().enumerate() {
        let mut row = vec![Q::zero(); 6 * t];
        for emb in &class.embeddings {
            row[6 * emb.tet + wedge_of_edge(emb.edge)] += Q::one();
        }
        rows.push(row);
        rhs.push(boundary_total(class.on_boundary) - &ac.kappa[j]);
    }
    (Matrix::from_rows(6 * t, rows), rhs)
}

/// `χ^(A,κ)` from triangle coordinates and edge coefficients.
fn chi_ak_parts(ac: &AreaCurvature, triangles: &[Q], z: &[Q]) -> Q {
    (dot(triangles, &ac.area) + q(2) * dot(z, &ac.kappa)) / q(2)
}

/// `χ^(A,κ)(s) = ½ (Σ y_t(s) A(t) + Σ 2 z_j κ_j)` for `s` in the kernel.
pub fn chi_ak(
    tri: &Triangulation,
    basis: &SolutionBasis,
    ac: &AreaCurvature,
    s: &NormalVector,
) -> Result<Q, NormalError> {
    let c = basis.coefficients(tri, s)?;
    Ok(chi_ak_parts(ac, s.triangles(), &c.z))
}

/// Area-curvature induced by a wedge assignment, with the induced quad
/// areas (`3t`, quad order).
pub fn induced_area_curvature(tri: &Triangulation, wa: &WedgeAssignment) -> (AreaCurvature, Vec<Q>) {
    let t = tri.tet_count();
    let mut area = Vec::with_capacity(4 * t);
    let mut quad_area = Vec::with_capacity(3 * t);
    for i in 0..t {
        for wedges in TRIANGLE_WEDGES {
            let sum = wedges.iter().fold(Q::zero(), |s, &w| s + wa.value(i, w));
            area.push(sum - q(1));
        }
        for m in 0..3 {
            let sum = quad_wedges(m).fold(Q::zero(), |s, w| s + wa.value(i, w));
            quad_area.push(sum - q(2));
        }
    }
    let kappa = tri
        .edge_classes()
        .iter()
        .map(|class| {
            let sum = class
                .embeddings
                .iter()
                .fold(Q::zero(), |s, emb| s + wa.value(emb.tet, wedge_of_edge(emb.edge)));
            boundary_total(class.on_boundary) - sum
        })
        .collect();
    (AreaCurvature { area, kappa }, quad_area)
}

/// Corner angles on the link surface of vertex class `v`, in the corner
/// order of [`Triangulation::vertex_link_surface`].
pub fn link_angles(tri: &Triangulation, v: usize, wa: &WedgeAssignment) -> CombAngleStructure {
    let mut angles = Vec::new();
    for c in &tri.vertex_classes()[v].corners {
        for u in (0..4).filter(|&u| u != c.vertex) {
            angles.push(wa.value(c.tet, wedge_of_edge(edge_index(c.vertex, u))).clone());
        }
    }
    CombAngleStructure { angles }
}

/// `φ(h, z) = (w, z)` with `wᵢ = Σ_k hᵢᵏ`. Input is `h` (ordered `4i + k`)
/// followed by `z`.
pub fn phi(tet_count: usize, hz: &[Q]) -> WzCoefficients {
    let w = (0..tet_count)
        .map(|i| hz[4 * i..4 * i + 4].iter().fold(Q::zero(), |s, x| s + x))
        .collect();
    WzCoefficients {
        w,
        z: hz[4 * tet_count..].to_vec(),
    }
}

/// Inverse of `φ` on `ker Aᵀ`: `hᵢᵏ = −(wᵢ + z_a + z_b + z_c) / 2` over the
/// edges met by triangle `k`.
pub fn phi_inverse(tri: &Triangulation, wz: &WzCoefficients) -> Vec<Q> {
    let t = tri.tet_count();
    let mut out = Vec::with_capacity(4 * t + wz.z.len());
    for i in 0..t {
        for k in 0..4 {
            let s = triangle_meets(k).fold(wz.w[i].clone(), |s, e| s + &wz.z[tri.edge_class_of(i, e)]);
            out.push(-s / q(2));
        }
    }
    out.extend(wz.z.iter().cloned());
    out
}

/// Matrix of `φ`, `(t + n) × (4t + n)`.
pub fn c_matrix(tri: &Triangulation) -> Matrix {
    let (t, n) = (tri.tet_count(), tri.edge_count());
    let mut m = Matrix::zeros(t + n, 4 * t + n);
    for i in 0..t {
        for k in 0..4 {
            m[(i, 4 * i + k)] = Q::one();
        }
    }
    for j in 0..n {
        m[(t + j, 4 * t + j)] = Q::one();
    }
    m
}

/// Block diagonal `3t × 6t`: the row of quad slot `m` adds the two wedges
/// of the edges that quad faces.
pub fn d_matrix(tet_count: usize) -> Matrix {
    let mut m = Matrix::zeros(3 * tet_count, 6 * tet_count);
    for i in 0..tet_count {
        for (slot, faced) in QUAD_FACING.iter().enumerate() {
            for &e in faced {
                m[(quad_index(i, slot), 6 * i + wedge_of_edge(e))] = Q::one();
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub ker_bt_dim: usize,
    pub ker_at_dim: usize,
}

/// Checks `D_t Bᵀ = Aᵀ C_{t,n}`, `dim ker Bᵀ = dim ker Aᵀ`, and that `φ`
/// and its inverse formula are mutually inverse between the two kernels.
pub fn matrix_identities(tri: &Triangulation) -> Result<IdentityReport, PrescribeError> {
    let t = tri.tet_count();
    let (a, _) = angle_matrix(tri);
    let (b, _) = b_system(tri, &AreaCurvature::zero(tri));
    let (at, bt) = (a.transpose(), b.transpose());
    let c = c_matrix(tri);
    if d_matrix(t).mul(&bt) != at.mul(&c) {
        return Err(PrescribeError::Identity("D_t Bᵀ ≠ Aᵀ C".into()));
    }
    let ker_bt = bt.nullspace();
    let ker_at = at.nullspace();
    if ker_bt.len() != ker_at.len() {
        return Err(PrescribeError::Identity(format!(
            "dim ker Bᵀ = {} but dim ker Aᵀ = {}",
            ker_bt.len(),
            ker_at.len()
        )));
    }
    for hz in &ker_bt {
        let wz = phi(t, hz);
        if !at.mul_vec(&wz.flat()).iter().all(Zero::is_zero) {
            return Err(PrescribeError::Identity("φ(ker Bᵀ) ⊄ ker Aᵀ".into()));
        }
        if phi_inverse(tri, &wz) != *hz {
            return Err(PrescribeError::Identity("inverse formula fails on ker Bᵀ".into()));
        }
    }
    for wz_flat in &ker_at {
        let wz = WzCoefficients::from_flat(t, wz_flat);
        let hz = phi_inverse(tri, &wz);
        if !bt.mul_vec(&hz).iter().all(Zero::is_zero) || phi(t, &hz) != wz {
            return Err(PrescribeError::Identity("inverse formula does not land in ker Bᵀ".into()));
        }
    }
    Ok(IdentityReport {
        ker_bt_dim: ker_bt.len(),
        ker_at_dim: ker_at.len(),
    })
}

/// The terms of the identity
/// `(h,z)·(a,b) = χ*(W) − χ^(A,κ)(W) + ½ Σ_wedges (z_j + hᵏ + hˡ)(aᵏ + aˡ − 2)`
/// with `W = W_{φ(h,z)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyTerms {
    pub pairing: Q,
    pub chi_star: Q,
    pub chi_ak: Q,
    pub wedge_sum: Q,
}

impl ConsistencyTerms {
    pub fn holds(&self) -> bool {
        self.pairing == &self.chi_star - &self.chi_ak + &self.wedge_sum / q(2)
    }
}

pub fn consistency_terms(
    tri: &Triangulation,
    basis: &SolutionBasis,
    ac: &AreaCurvature,
    hz: &[Q],
) -> ConsistencyTerms {
    let t = tri.tet_count();
    let (b, rhs) = b_system(tri, ac);
    let pairing = dot(hz, &rhs);
    let wz = phi(t, hz);
    let w_vec = basis.expand(&wz);
    let bt_hz = b.transpose().mul_vec(hz);
    let mut wedge_sum = Q::zero();
    for (g, value) in bt_hz.iter().enumerate() {
        let wi = WedgeIndex::from_global(g);
        let [k, l] = wi.triangles();
        let tri_sums = &rhs[4 * wi.tet + k] + &rhs[4 * wi.tet + l] - q(2);
        wedge_sum += value * tri_sums;
    }
    ConsistencyTerms {
        pairing,
        chi_star: chi_star(tri, &w_vec),
        chi_ak: chi_ak_parts(ac, w_vec.triangles(), &wz.z),
        wedge_sum,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignRegime {
    /// `A ≡ 0`: both one-sided conditions apply, giving an equivalence.
    Zero,
    /// `A ≤ 0`: the vertex condition is necessary.
    NonPositive,
    /// `A ≥ 0`: the vertex condition is sufficient.
    NonNegative,
    /// Neither applies.
    Mixed,
}

impl SignRegime {
    pub fn necessary_applies(self) -> bool {
        matches!(self, SignRegime::Zero | SignRegime::NonPositive)
    }

    pub fn sufficient_applies(self) -> bool {
        matches!(self, SignRegime::Zero | SignRegime::NonNegative)
    }
}

/// A solution where `χ* − χ^(A,κ)` has the wrong sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vector: NormalVector,
    #[serde(serialize_with = "crate::qser::one")]
    pub chi_star: Q,
    #[serde(serialize_with = "crate::qser::one")]
    pub chi_ak: Q,
    pub is_vertex_link: bool,
}

/// The `χ*` versus `χ^(A,κ)` comparison over solutions with nonnegative
/// quad coordinates, reduced to vertex links (equality) and vertex
/// solutions (inequality).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexConditions {
    pub regime: SignRegime,
    pub links_balanced: bool,
    pub condition_holds: bool,
    pub violation: Option<Violation>,
}

impl VertexConditions {
    pub fn applicable(&self) -> bool {
        self.regime != SignRegime::Mixed
    }
}

/// Evaluates `χ*(s) ≤ χ^(A,κ)(s)` (semi) or `<` with a positive quad
/// (strict) over all kernel vectors with nonnegative quads.
pub fn vertex_conditions(
    tri: &Triangulation,
    basis: &SolutionBasis,
    ac: &AreaCurvature,
    kind: StructureKind,
) -> Result<VertexConditions, PrescribeError> {
    let diff = |s: &NormalVector| -> Result<(Q, Q), PrescribeError> {
        Ok((chi_star(tri, s), chi_ak(tri, basis, ac, s)?))
    };
    let mut link_violation = None;
    for v in 0..tri.vertex_count() {
        let s = vertex_link_vector(tri, v);
        let (cs, ca) = diff(&s)?;
        if cs != ca && link_violation.is_none() {
            link_violation = Some(Violation {
                vector: s,
                chi_star: cs,
                chi_ak: ca,
                is_vertex_link: true,
            });
        }
    }
    let links_balanced = link_violation.is_none();

    let vertices = enumerate_vertices(tri);
    let mut vertex_violation = None;
    let mut any_positive_quad = false;
    for v in &vertices {
        let positive_quad = v.primitive.has_positive_quad();
        any_positive_quad |= positive_quad;
        let (cs, ca) = diff(&v.primitive)?;
        let bad = match kind {
            StructureKind::Strict => positive_quad && cs >= ca,
            _ => cs > ca,
        };
        if bad && vertex_violation.is_none() {
            vertex_violation = Some(Violation {
                vector: v.primitive.clone(),
                chi_star: cs,
                chi_ak: ca,
                is_vertex_link: false,
            });
        }
    }
    // The strict condition is vacuous when no solution has a positive quad;
    // otherwise adding multiples of a vertex link forces link equality.
    let links_required = kind != StructureKind::Strict || any_positive_quad;
    let violation = match (links_required, link_violation, vertex_violation) {
        (true, Some(l), _) => Some(l),
        (_, _, v) => v,
    };
    Ok(VertexConditions {
        regime: ac.regime(),
        links_balanced,
        condition_holds: violation.is_none(),
        violation,
    })
}

/// A dual vector `(h, z)` of the `B` system certifying infeasibility,
/// with the normal coordinate vector `W_{φ(h,z)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCertificate {
    #[serde(serialize_with = "crate::qser::vec")]
    pub h: Vec<Q>,
    #[serde(serialize_with = "crate::qser::vec")]
    pub z: Vec<Q>,
    /// `(h, z) · (a, b)`.
    #[serde(serialize_with = "crate::qser::one")]
    pub pairing: Q,
    pub normal_vector: NormalVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrescribedDecision {
    pub kind: StructureKind,
    pub feasible: bool,
    pub witness: Option<WedgeAssignment>,
    pub certificate: Option<DualCertificate>,
    pub dimension: Option<usize>,
    /// Vertex-link criterion for generalised structures.
    pub link_criterion: Option<CriterionVerdict>,
    /// Vertex-solution conditions for semi and strict structures.
    pub conditions: Option<VertexConditions>,
}

/// Decides existence of a wedge structure of the given kind with
/// area-curvature `ac`.
pub fn decide_prescribed(
    tri: &Triangulation,
    basis: &SolutionBasis,
    ac: &AreaCurvature,
    kind: StructureKind,
) -> Result<PrescribedDecision, PrescribeError> {
    let t = tri.tet_count();
    let (b, rhs) = b_system(tri, ac);
    let verdict = match kind {
        StructureKind::Generalised => lp_generalised(&b, &rhs),
        StructureKind::Semi => lp_semi(&b, &rhs),
        StructureKind::Strict => lp_strict(&b, &rhs),
    };
    let feasible = matches!(verdict, LpVerdict::Feasible(_));
    let mut decision = PrescribedDecision {
        kind,
        feasible,
        witness: None,
        certificate: None,
        dimension: None,
        link_criterion: None,
        conditions: None,
    };

    match kind {
        StructureKind::Generalised => {
            let verdict = if tri.has_inverted_edge() {
                CriterionVerdict::Skipped {
                    reason: "an edge is identified with itself in reverse".into(),
                }
            } else {
                let mut ok = true;
                for v in 0..tri.vertex_count() {
                    let link = vertex_link_vector(tri, v);
                    ok &= q(tri.vertex_classes()[v].link_euler) == chi_ak(tri, basis, ac, &link)?;
                }
                if ok != feasible {
                    return Err(PrescribeError::RouteDisagreement {
                        route: "linear algebra",
                        lp: feasible,
                        criterion: ok,
                    });
                }
                CriterionVerdict::Applied {
                    feasible: ok,
                    offending: None,
                }
            };
            decision.link_criterion = Some(verdict);
        }
        StructureKind::Semi | StructureKind::Strict => {
            let cond = vertex_conditions(tri, basis, ac, kind)?;
            if cond.regime.necessary_applies() && feasible && !cond.condition_holds {
                return Err(PrescribeError::ImplicationViolated(format!(
                    "a {kind} structure exists with A ≤ 0 but the necessary condition fails"
                )));
            }
            if cond.regime.sufficient_applies() && cond.condition_holds && !feasible {
                return Err(PrescribeError::ImplicationViolated(format!(
                    "the sufficient condition holds with A ≥ 0 but no {kind} structure exists"
                )));
            }
            decision.conditions = Some(cond);
        }
    }

    match verdict {
        LpVerdict::Feasible(x) => {
            let witness = WedgeAssignment { values: x };
            if !witness.is_valid(tri, ac, kind) {
                return Err(PrescribeError::Internal(format!("{kind} witness fails validation")));
            }
            let dim = match kind {
                StructureKind::Semi => semi_dimension(&b, &rhs),
                _ => b.cols() - b.rank(),
            };
            if kind == StructureKind::Generalised
                && matches!(decision.link_criterion, Some(CriterionVerdict::Applied { .. }))
            {
                let expected = 2 * t as i64 - tri.edge_count() as i64 + tri.vertex_count() as i64;
                if dim as i64 != expected {
                    return Err(PrescribeError::DimensionMismatch {
                        expected,
                        got: dim as i64,
                    });
                }
            }
            decision.witness = Some(witness);
            decision.dimension = Some(dim);
        }
        LpVerdict::Infeasible(y) => {
            let pairing = dot(&y, &rhs);
            let wz = phi(t, &y);
            let normal_vector = basis.expand(&wz);
            decision.certificate = Some(DualCertificate {
                h: y[..4 * t].to_vec(),
                z: y[4 * t..].to_vec(),
                pairing,
                normal_vector,
            });
        }
    }
    Ok(decision)
}

/// The one-parameter family on the one-tetrahedron example with two
/// degree-one edges: angle `a` on the wedges of the two degree-one edges
/// and `a/4` on the other four.
pub fn example_family(tri: &Triangulation, a: &Q) -> WedgeAssignment {
    let mut values = vec![a / q(4); 6 * tri.tet_count()];
    for class in tri.edge_classes().iter().filter(|c| c.degree() == 1) {
        for emb in &class.embeddings {
            values[6 * emb.tet + wedge_of_edge(emb.edge)] = a.clone();
        }
    }
    WedgeAssignment { values }
}

/// Angle sums of the faces of a tetrahedron are not constrained, but the
/// quad areas satisfy `A(q) = Σ corner angles − 2`; this returns the
/// corner angles of quad slot `m` in tetrahedron `tet`.
pub fn quad_corner_angles(wa: &WedgeAssignment, tet: usize, m: usize) -> Vec<Q> {
    quad_wedges(m).map(|w| wa.value(tet, w).clone()).collect()
}
