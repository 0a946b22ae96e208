//! Generalised, semi- and strict angle structures.
//!
//! Existence is decided twice: by exact linear programming on the angle
//! equations, and by the `χ*` criteria on vertex links and vertex
//! solutions. When the LP is infeasible its dual is turned into a normal
//! coordinate vector `W_{w,z}` that certifies the obstruction.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::Triangulation;
use crate::linalg::{dot, Matrix};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::normal::{
    chi_star, chi_star_weights, matching_matrix, quad_facing_edge, quad_index, verify_basis,
    NormalError, NormalVector, SolutionBasis, WzCoefficients,
};
use crate::polytope::enumerate_vertices;
use crate::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Generalised,
    Semi,
    Strict,
}

impl StructureKind {
    pub const ALL: [StructureKind; 3] = [StructureKind::Generalised, StructureKind::Semi, StructureKind::Strict];
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Generalised => "generalised",
            StructureKind::Semi => "semi",
            StructureKind::Strict => "strict",
        })
    }
}

impl FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "generalised" | "generalized" => Ok(StructureKind::Generalised),
            "semi" => Ok(StructureKind::Semi),
            "strict" => Ok(StructureKind::Strict),
            other => Err(format!("unknown structure kind `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error("dual vector has length {got}, expected {expected}")]
    DualLength { expected: usize, got: usize },
    #[error("dual rejected at {component}: {reason}")]
    InvalidDual { component: String, reason: String },
    #[error("linear programming says {lp}, the vertex criterion says {criterion} ({kind})")]
    RouteDisagreement {
        kind: StructureKind,
        lp: bool,
        criterion: bool,
    },
    #[error("solution space has dimension {got}, expected t + v = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("internal check failed: {0}")]
    Internal(String),
}

/// One angle per quad type, in units of π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AngleAssignment {
    #[serde(serialize_with = "crate::qser::vec")]
    pub values: Vec<Q>,
}

impl AngleAssignment {
    pub fn satisfies_equations(&self, tri: &Triangulation) -> bool {
        let (a, b) = angle_matrix(tri);
        self.values.len() == a.cols() && a.mul_vec(&self.values) == b
    }

    pub fn is_valid(&self, tri: &Triangulation, kind: StructureKind) -> bool {
        self.satisfies_equations(tri)
            && match kind {
                StructureKind::Generalised => true,
                StructureKind::Semi => self.values.iter().all(|x| !x.is_negative()),
                StructureKind::Strict => self.values.iter().all(Signed::is_positive),
            }
    }

    /// A semi-angle structure taking only the values 0 and 1.
    pub fn is_taut(&self, tri: &Triangulation) -> bool {
        self.is_valid(tri, StructureKind::Semi)
            && self.values.iter().all(|x| x.is_zero() || x.is_one())
    }
}

/// Angle equations `A x = b`: one row per tetrahedron (angles sum to 1)
/// then one row per edge class (facing angles sum to 2, or 1 for a
/// boundary edge). Columns are quad types.
pub fn angle_matrix(tri: &Triangulation) -> (Matrix, Vec<Q>) {
    let t = tri.tet_count();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..t {
        let mut row = vec![Q::zero(); 3 * t];
        for m in 0..3 {
            row[quad_index(i, m)] = Q::one();
        }
        rows.push(row);
        rhs.push(Q::one());
    }
    for class in tri.edge_classes() {
        let mut row = vec![Q::zero(); 3 * t];
        for emb in &class.embeddings {
            row[quad_index(emb.tet, quad_facing_edge(emb.edge))] += Q::one();
        }
        rows.push(row);
        rhs.push(if class.on_boundary { q(1) } else { q(2) });
    }
    (Matrix::from_rows(3 * t, rows), rhs)
}

/// A dual vector of the angle equations read as `(w, z)`, with the
/// normal coordinate vector it defines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FarkasWitness {
    pub wz: WzCoefficients,
    pub violated_kind: StructureKind,
    pub normal_vector: NormalVector,
    #[serde(serialize_with = "crate::qser::one")]
    pub chi_value: Q,
}

/// Builds `W_{w,z}` from a dual vector and checks that it certifies that
/// no structure of the given kind exists.
pub fn farkas_to_normal(
    tri: &Triangulation,
    basis: &SolutionBasis,
    dual: &[Q],
    kind: StructureKind,
) -> Result<FarkasWitness, AngleError> {
    let t = tri.tet_count();
    let n = tri.edge_count();
    if dual.len() != t + n {
        return Err(AngleError::DualLength {
            expected: t + n,
            got: dual.len(),
        });
    }
    let wz = WzCoefficients::from_flat(t, dual);
    let w_vec = basis.expand(&wz);

    for tet in 0..t {
        for m in 0..3 {
            let mut expected = -wz.w[tet].clone();
            for emb_edge in crate::normal::QUAD_FACING[m] {
                expected -= &wz.z[tri.edge_class_of(tet, emb_edge)];
            }
            let got = w_vec.quad(tet, m);
            if *got != expected {
                return Err(AngleError::Internal(format!(
                    "quad ({tet}, {m}) of W is {got}, expected {expected}"
                )));
            }
            if got.is_negative() {
                return Err(AngleError::InvalidDual {
                    component: format!("quad ({tet}, {m})"),
                    reason: format!("coordinate {got} is negative"),
                });
            }
            if kind == StructureKind::Generalised && !got.is_zero() {
                return Err(AngleError::InvalidDual {
                    component: format!("quad ({tet}, {m})"),
                    reason: format!("coordinate {got} is not zero"),
                });
            }
        }
    }

    let chi_value = chi_star(tri, &w_vec);
    let expected: Q = wz.w.iter().fold(Q::zero(), |a, b| a + b)
        + tri
            .edge_classes()
            .iter()
            .zip(&wz.z)
            .fold(Q::zero(), |a, (c, z)| a + z * q(if c.on_boundary { 1 } else { 2 }));
    if chi_value != expected {
        return Err(AngleError::Internal(format!(
            "χ*(W) = {chi_value} differs from Σw + Σ c z = {expected}"
        )));
    }
    let ok = match kind {
        StructureKind::Generalised => !chi_value.is_zero(),
        StructureKind::Semi => chi_value.is_positive(),
        StructureKind::Strict => w_vec.has_positive_quad() && !chi_value.is_negative(),
    };
    if !ok {
        return Err(AngleError::InvalidDual {
            component: "χ*".into(),
            reason: format!("value {chi_value} does not obstruct a {kind} structure"),
        });
    }
    Ok(FarkasWitness {
        wz,
        violated_kind: kind,
        normal_vector: w_vec,
        chi_value,
    })
}

/// A vertex solution violating the criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OffendingVertex {
    pub vector: NormalVector,
    #[serde(serialize_with = "crate::qser::one")]
    pub chi_star: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CriterionVerdict {
    Applied {
        feasible: bool,
        offending: Option<OffendingVertex>,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    pub lp_feasible: bool,
    pub criterion: CriterionVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub kind: StructureKind,
    pub feasible: bool,
    pub witness: Option<AngleAssignment>,
    pub certificate: Option<FarkasWitness>,
    pub dimension: Option<usize>,
    pub agreement: Agreement,
}

/// LP route result: either a witness or a dual certificate vector.
pub(crate) enum LpVerdict {
    Feasible(Vec<Q>),
    Infeasible(Vec<Q>),
}

pub(crate) fn lp_generalised(a: &Matrix, b: &[Q]) -> LpVerdict {
    match a.solve(b) {
        Some(x) => LpVerdict::Feasible(x),
        None => {
            let y = a
                .left_nullspace()
                .into_iter()
                .find(|y| !dot(y, b).is_zero())
                .expect("inconsistent system has a separating left null vector");
            let y = if dot(&y, b).is_negative() {
                y.iter().map(|v| -v).collect()
            } else {
                y
            };
            LpVerdict::Infeasible(y)
        }
    }
}

/// `max y·b` subject to `Aᵀy ≤ 0` and `y·b ≤ 1`, optionally with
/// `Σ(−Aᵀy) = 1`.
fn dual_lp(a: &Matrix, b: &[Q], normalised: bool) -> LpOutcome {
    let (rows, cols) = (a.rows(), a.cols());
    let mut lp = LinearProgram::new(rows);
    lp.set_all_free();
    let at = a.transpose();
    for c in 0..cols {
        lp.constrain(at.row(c).to_vec(), Relation::Le, Q::zero());
    }
    lp.constrain(b.to_vec(), Relation::Le, Q::one());
    if normalised {
        let total: Vec<Q> = (0..rows)
            .map(|r| -a.row(r).iter().fold(Q::zero(), |s, x| s + x))
            .collect();
        lp.constrain(total, Relation::Eq, Q::one());
    }
    lp.maximize(b.to_vec());
    lp.solve()
}

pub(crate) fn lp_semi(a: &Matrix, b: &[Q]) -> LpVerdict {
    let mut lp = LinearProgram::new(a.cols());
    for r in 0..a.rows() {
        lp.constrain(a.row(r).to_vec(), Relation::Eq, b[r].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => LpVerdict::Feasible(x),
        LpOutcome::Unbounded => unreachable!("zero objective"),
        LpOutcome::Infeasible => match dual_lp(a, b, false) {
            LpOutcome::Optimal { x, value } if value.is_positive() => LpVerdict::Infeasible(x),
            other => panic!("semi-infeasible system without a Farkas vector: {other:?}"),
        },
    }
}

pub(crate) fn lp_strict(a: &Matrix, b: &[Q]) -> LpVerdict {
    // Variables x' ≥ 0 then ε free; x = x' + ε·1.
    let cols = a.cols();
    let mut lp = LinearProgram::new(cols + 1);
    lp.set_free(cols);
    for r in 0..a.rows() {
        let mut row = a.row(r).to_vec();
        row.push(a.row(r).iter().fold(Q::zero(), |s, x| s + x));
        lp.constrain(row, Relation::Eq, b[r].clone());
    }
    let mut cap = vec![Q::zero(); cols + 1];
    cap[cols] = Q::one();
    lp.constrain(cap.clone(), Relation::Le, Q::one());
    lp.maximize(cap);
    if let LpOutcome::Optimal { x, value } = lp.solve() {
        if value.is_positive() {
            let eps = &x[cols];
            return LpVerdict::Feasible(x[..cols].iter().map(|v| v + eps).collect());
        }
    }
    match dual_lp(a, b, true) {
        LpOutcome::Optimal { x, value } if !value.is_negative() => LpVerdict::Infeasible(x),
        other => panic!("strict-infeasible system without a Farkas vector: {other:?}"),
    }
}

/// Dimension of `{x : Ax = b, x ≥ 0}`: coordinates that vanish on the
/// whole polytope are detected by maximizing each one.
pub(crate) fn semi_dimension(a: &Matrix, b: &[Q]) -> usize {
    let cols = a.cols();
    let mut hull = a.clone();
    for i in 0..cols {
        let mut lp = LinearProgram::new(cols);
        for r in 0..a.rows() {
            lp.constrain(a.row(r).to_vec(), Relation::Eq, b[r].clone());
        }
        let mut obj = vec![Q::zero(); cols];
        obj[i] = Q::one();
        lp.maximize(obj.clone());
        match lp.solve() {
            LpOutcome::Optimal { value, .. } if value.is_zero() => hull.push_row(obj),
            LpOutcome::Optimal { .. } | LpOutcome::Unbounded => {}
            LpOutcome::Infeasible => unreachable!("called on a feasible system"),
        }
    }
    cols - hull.rank()
}

fn skip(reason: impl Into<String>) -> CriterionVerdict {
    CriterionVerdict::Skipped {
        reason: reason.into(),
    }
}

fn criterion(tri: &Triangulation, kind: StructureKind) -> CriterionVerdict {
    if tri.has_inverted_edge() {
        return skip("an edge is identified with itself in reverse, so χ* does not compute link Euler characteristics");
    }
    let all_torus_klein = tri
        .vertex_classes()
        .iter()
        .all(|v| v.classification.is_torus_or_klein());
    match kind {
        StructureKind::Generalised => {
            if !tri.is_closed() {
                return skip("the triangulation has boundary faces");
            }
            CriterionVerdict::Applied {
                feasible: all_torus_klein,
                offending: None,
            }
        }
        StructureKind::Semi | StructureKind::Strict => {
            if !all_torus_klein {
                return skip("not every vertex link is a torus or Klein bottle");
            }
            let weights = chi_star_weights(tri);
            let offending = enumerate_vertices(tri).into_iter().find_map(|v| {
                let chi = dot(&weights, &v.projective.coords);
                let bad = match kind {
                    StructureKind::Semi => chi.is_positive(),
                    _ => v.primitive.has_positive_quad() && !chi.is_negative(),
                };
                bad.then(|| OffendingVertex {
                    chi_star: dot(&weights, &v.primitive.coords),
                    vector: v.primitive,
                })
            });
            CriterionVerdict::Applied {
                feasible: offending.is_none(),
                offending,
            }
        }
    }
}

/// Decides existence of an angle structure of the given kind.
pub fn decide(tri: &Triangulation, kind: StructureKind) -> Result<Decision, AngleError> {
    let (a, b) = angle_matrix(tri);
    let verdict = match kind {
        StructureKind::Generalised => lp_generalised(&a, &b),
        StructureKind::Semi => lp_semi(&a, &b),
        StructureKind::Strict => lp_strict(&a, &b),
    };
    let criterion = criterion(tri, kind);
    let lp_feasible = matches!(verdict, LpVerdict::Feasible(_));
    if let CriterionVerdict::Applied { feasible, .. } = criterion {
        if feasible != lp_feasible {
            return Err(AngleError::RouteDisagreement {
                kind,
                lp: lp_feasible,
                criterion: feasible,
            });
        }
    }

    let mut decision = Decision {
        kind,
        feasible: lp_feasible,
        witness: None,
        certificate: None,
        dimension: None,
        agreement: Agreement {
            lp_feasible,
            criterion,
        },
    };
    match verdict {
        LpVerdict::Feasible(x) => {
            let witness = AngleAssignment { values: x };
            if !witness.is_valid(tri, kind) {
                return Err(AngleError::Internal(format!("{kind} witness fails validation")));
            }
            let dim = match kind {
                StructureKind::Semi => semi_dimension(&a, &b),
                _ => a.cols() - a.rank(),
            };
            if kind != StructureKind::Semi
                && matches!(decision.agreement.criterion, CriterionVerdict::Applied { .. })
            {
                let expected = tri.tet_count() + tri.vertex_count();
                if dim != expected {
                    return Err(AngleError::DimensionMismatch { expected, got: dim });
                }
            }
            decision.witness = Some(witness);
            decision.dimension = Some(dim);
        }
        LpVerdict::Infeasible(y) => {
            let basis = verify_basis(tri)?;
            decision.certificate = Some(farkas_to_normal(tri, &basis, &y, kind)?);
        }
    }
    Ok(decision)
}

/// Maximum of `χ*` over the projective solution space, by LP, with a
/// maximizer. `None` when the space is empty.
pub fn max_chi_star(tri: &Triangulation) -> Option<(Q, NormalVector)> {
    let m = matching_matrix(tri);
    let cols = m.cols();
    let mut lp = LinearProgram::new(cols);
    for r in 0..m.rows() {
        lp.constrain(m.row(r).to_vec(), Relation::Eq, Q::zero());
    }
    lp.constrain(vec![Q::one(); cols], Relation::Eq, Q::one());
    lp.maximize(chi_star_weights(tri));
    match lp.solve() {
        LpOutcome::Optimal { x, value } => Some((value, NormalVector::new(x))),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("the projective solution space is bounded"),
    }
}
