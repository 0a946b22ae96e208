//! Vertex solutions of the projective solution space, by double
//! description over the kernel of the matching equations.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::Triangulation;
use crate::linalg::{primitive_integer, rank_of, Matrix};
use crate::normal::{chi_star, in_kernel, matching_matrix, NormalVector};
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexSolution {
    /// Nonnegative integer vector with coprime entries.
    pub primitive: NormalVector,
    /// `primitive` scaled to coordinate sum 1.
    pub projective: NormalVector,
    /// Coordinates where the solution vanishes. No other nonzero solution
    /// vanishes on a strict superset of these.
    pub zero_set: Vec<usize>,
}

impl VertexSolution {
    fn from_ray(ray: &[Q]) -> Self {
        let primitive: Vec<Q> = primitive_integer(ray).into_iter().map(Q::from_integer).collect();
        let total = primitive.iter().fold(Q::zero(), |a, b| a + b);
        let projective = primitive.iter().map(|x| x / &total).collect();
        let zero_set = primitive
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(i, _)| i)
            .collect();
        VertexSolution {
            primitive: NormalVector::new(primitive),
            projective: NormalVector::new(projective),
            zero_set,
        }
    }

    pub fn chi_star(&self, tri: &Triangulation) -> Q {
        chi_star(tri, &self.projective)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VertexError {
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate {0} is negative")]
    Negative(usize),
    #[error("vector violates matching equation {0}")]
    NotInKernel(usize),
    #[error("zero vector")]
    Zero,
}

/// Default insertion order: nonzero kernel rows by increasing number of
/// nonzero entries, ties broken lexicographically on the row.
pub fn default_order(kernel_rows: &Matrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..kernel_rows.rows())
        .filter(|&i| kernel_rows.row(i).iter().any(|x| !x.is_zero()))
        .collect();
    order.sort_by(|&a, &b| {
        let nz = |i: usize| kernel_rows.row(i).iter().filter(|x| !x.is_zero()).count();
        nz(a)
            .cmp(&nz(b))
            .then_with(|| kernel_rows.row(a).cmp(kernel_rows.row(b)))
            .then(a.cmp(&b))
    });
    order
}

/// Kernel basis as a `7t × d` matrix; row `i` gives coordinate `i` as a
/// linear form in the basis coefficients.
fn kernel_matrix(tri: &Triangulation) -> Matrix {
    let k = matching_matrix(tri).nullspace();
    Matrix::from_columns(7 * tri.tet_count(), &k)
}

/// All vertex solutions, sorted by primitive vector.
pub fn enumerate_vertices(tri: &Triangulation) -> Vec<VertexSolution> {
    let kernel = kernel_matrix(tri);
    let order = default_order(&kernel);
    double_description(&kernel, &order)
}

/// As [`enumerate_vertices`] with an explicit constraint insertion order.
/// `order` must list every coordinate whose kernel row is nonzero; other
/// indices are skipped.
pub fn enumerate_vertices_with_order(tri: &Triangulation, order: &[usize]) -> Vec<VertexSolution> {
    let kernel = kernel_matrix(tri);
    double_description(&kernel, order)
}

fn normalize(v: &[Q]) -> Vec<Q> {
    primitive_integer(v).into_iter().map(Q::from_integer).collect()
}

fn double_description(kernel: &Matrix, order: &[usize]) -> Vec<VertexSolution> {
    let dim = kernel.cols();
    let rows = kernel.row_vecs();
    // Vectors are kept in coordinate space: x = K λ.
    let mut lineality: Vec<Vec<Q>> = (0..dim).map(|j| kernel.column(j)).collect();
    let mut rays: Vec<Vec<Q>> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();

    for &i in order {
        if rows[i].iter().all(Zero::is_zero) || processed.contains(&i) {
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !l[i].is_zero()) {
            let mut l = lineality.remove(pos);
            if l[i].is_negative() {
                l.iter_mut().for_each(|x| *x = -x.clone());
            }
            let project = |v: &mut Vec<Q>| {
                let f = &v[i] / &l[i];
                if !f.is_zero() {
                    for (a, b) in v.iter_mut().zip(&l) {
                        *a -= &f * b;
                    }
                }
            };
            lineality.iter_mut().for_each(project);
            for r in rays.iter_mut() {
                project(r);
                *r = normalize(r);
            }
            rays.push(normalize(&l));
        } else {
            let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
            for r in rays {
                if r[i].is_positive() {
                    pos.push(r);
                } else if r[i].is_negative() {
                    neg.push(r);
                } else {
                    next.push(r);
                }
            }
            // A pair is adjacent when the face it spans has dimension ℓ + 2.
            let target = (dim - lineality.len()).saturating_sub(2);
            for p in &pos {
                for n in &neg {
                    let common: Vec<usize> = processed
                        .iter()
                        .copied()
                        .filter(|&j| p[j].is_zero() && n[j].is_zero())
                        .collect();
                    if common.len() < target {
                        continue;
                    }
                    let tight: Vec<Vec<Q>> = common.iter().map(|&j| rows[j].clone()).collect();
                    if rank_of(dim, &tight) != target {
                        continue;
                    }
                    let combo: Vec<Q> = p
                        .iter()
                        .zip(n)
                        .map(|(a, b)| &p[i] * b - &n[i] * a)
                        .collect();
                    next.push(normalize(&combo));
                }
            }
            next.extend(pos);
            rays = next;
        }
        processed.push(i);
    }
    debug_assert!(lineality.is_empty(), "kernel cone must be pointed");

    let mut out: Vec<VertexSolution> = rays.iter().map(|r| VertexSolution::from_ray(r)).collect();
    out.sort_by(|a, b| a.primitive.cmp(&b.primitive));
    out.dedup_by(|a, b| a.primitive == b.primitive);
    out
}

/// Whether `s` spans an extreme ray of the nonnegative kernel cone: the
/// kernel vectors vanishing wherever `s` vanishes form a line.
pub fn is_vertex(tri: &Triangulation, s: &NormalVector) -> Result<bool, VertexError> {
    let len = 7 * tri.tet_count();
    if s.len() != len {
        return Err(VertexError::LengthMismatch {
            expected: len,
            got: s.len(),
        });
    }
    if let Some(i) = s.coords.iter().position(Signed::is_negative) {
        return Err(VertexError::Negative(i));
    }
    if s.is_zero() {
        return Err(VertexError::Zero);
    }
    if !in_kernel(tri, s) {
        let row = crate::normal::residual_row(tri, s).unwrap_or(0);
        return Err(VertexError::NotInKernel(row));
    }
    Ok(restricted_kernel_dim(tri, s) == 1)
}

/// Dimension of the kernel vectors vanishing on the zero set of `s`.
fn restricted_kernel_dim(tri: &Triangulation, s: &NormalVector) -> usize {
    let mut m = matching_matrix(tri);
    for (i, x) in s.coords.iter().enumerate() {
        if x.is_zero() {
            let mut row = vec![Q::zero(); s.len()];
            row[i] = Q::from_integer(1.into());
            m.push_row(row);
        }
    }
    s.len() - m.rank()
}
