//! Combinatorial angle structures on compact CW-decomposed surfaces.
//!
//! All angles, areas and curvatures are in units of π: a right angle is
//! `1/2`, and the Gauss–Bonnet right hand side `2πχ` becomes `2χ`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("cell {cell} has no corners")]
    EmptyCell { cell: usize },
    #[error("vertex {vertex} out of range in cell {cell}")]
    VertexOutOfRange { cell: usize, vertex: usize },
    #[error("vertex {vertex} lies in no cell")]
    IsolatedVertex { vertex: usize },
    #[error("edge {edge} is used by more than two cell sides")]
    EdgeOverused { edge: usize },
    #[error("edge {edge} has inconsistent endpoints across its two sides")]
    EdgeEndpointMismatch { edge: usize },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("surface has {components} components; realize each component separately")]
    Disconnected { components: usize },
    #[error("Gauss–Bonnet identity failed: area {area} + curvature {curvature} != 2χ = {expected}")]
    GaussBonnetViolated { area: Q, curvature: Q, expected: Q },
}

/// One side of a polygonal cell: the edge it runs along and whether it
/// traverses that edge in the edge's reference direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

/// An n-sided cell. Side `i` runs from corner `i` to corner `i + 1 (mod n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub corners: Vec<usize>,
    pub sides: Vec<Side>,
}

impl Cell {
    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceCorner {
    pub vertex: usize,
    pub cell: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceVertex {
    pub boundary: bool,
}

/// A compact surface with a CW decomposition into polygons. Corners are
/// first-class: a cell may visit the same vertex several times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CwSurface {
    cells: Vec<Cell>,
    corners: Vec<SurfaceCorner>,
    vertices: Vec<SurfaceVertex>,
    edge_count: usize,
    boundary_edge_count: usize,
    euler: i64,
    orientable: bool,
    components: usize,
}

/// One angle per corner of a [`CwSurface`], in π-units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombAngleStructure {
    #[serde(serialize_with = "crate::qser::vec")]
    pub angles: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaussBonnetReport {
    #[serde(serialize_with = "crate::qser::one")]
    pub total_area: Q,
    #[serde(serialize_with = "crate::qser::one")]
    pub total_curvature: Q,
    #[serde(serialize_with = "crate::qser::one")]
    pub two_chi: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Realization {
    Realized(CombAngleStructure),
    /// The prescription violates Gauss–Bonnet by `defect = ΣA + ΣK − 2χ`.
    Refused {
        #[serde(serialize_with = "crate::qser::one")]
        defect: Q,
    },
}

/// Combinatorial area of a polygon with the given corner angles:
/// `Σ aᵢ − (n − 2)`.
pub fn polygon_area(angles: &[Q]) -> Q {
    let n = angles.len() as i64;
    angles.iter().fold(Q::zero(), |acc, a| acc + a) - q(n - 2)
}

impl CwSurface {
    /// Builds a surface from polygons given as `(corner vertex, outgoing
    /// side)` pairs. Each edge id must be used by one side (boundary) or two
    /// sides (interior).
    pub fn from_polygons(
        vertex_count: usize,
        polygons: Vec<Vec<(usize, Side)>>,
    ) -> Result<Self, SurfaceError> {
        let mut cells = Vec::with_capacity(polygons.len());
        let mut corners = Vec::new();
        // edge -> list of (cell, side index)
        let mut uses: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut seen_vertex = vec![false; vertex_count];

        for (ci, poly) in polygons.iter().enumerate() {
            if poly.is_empty() {
                return Err(SurfaceError::EmptyCell { cell: ci });
            }
            let mut cell = Cell {
                corners: Vec::with_capacity(poly.len()),
                sides: Vec::with_capacity(poly.len()),
            };
            for (si, &(v, side)) in poly.iter().enumerate() {
                if v >= vertex_count {
                    return Err(SurfaceError::VertexOutOfRange { cell: ci, vertex: v });
                }
                seen_vertex[v] = true;
                cell.corners.push(corners.len());
                corners.push(SurfaceCorner { vertex: v, cell: ci });
                cell.sides.push(side);
                uses.entry(side.edge).or_default().push((ci, si));
            }
            cells.push(cell);
        }
        if let Some(v) = seen_vertex.iter().position(|s| !s) {
            return Err(SurfaceError::IsolatedVertex { vertex: v });
        }

        let endpoints = |cell: usize, side: usize| -> (usize, usize) {
            let poly = &polygons[cell];
            let a = poly[side].0;
            let b = poly[(side + 1) % poly.len()].0;
            if poly[side].1.forward {
                (a, b)
            } else {
                (b, a)
            }
        };

        let mut boundary = vec![false; vertex_count];
        let mut boundary_edge_count = 0;
        for (&edge, list) in &uses {
            match list.as_slice() {
                [(c, s)] => {
                    boundary_edge_count += 1;
                    let (a, b) = endpoints(*c, *s);
                    boundary[a] = true;
                    boundary[b] = true;
                }
                [(c1, s1), (c2, s2)] => {
                    if endpoints(*c1, *s1) != endpoints(*c2, *s2) {
                        return Err(SurfaceError::EdgeEndpointMismatch { edge });
                    }
                }
                _ => return Err(SurfaceError::EdgeOverused { edge }),
            }
        }

        let orientable = orientable(&cells, &uses);
        let components = count_components(vertex_count, &cells, &corners);
        let euler = vertex_count as i64 - uses.len() as i64 + cells.len() as i64;

        Ok(CwSurface {
            cells,
            corners,
            vertices: boundary
                .into_iter()
                .map(|b| SurfaceVertex { boundary: b })
                .collect(),
            edge_count: uses.len(),
            boundary_edge_count,
            euler,
            orientable,
            components,
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn corners(&self) -> &[SurfaceCorner] {
        &self.corners
    }

    pub fn vertices(&self) -> &[SurfaceVertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_edge_count == 0
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Corner ids grouped by vertex.
    pub fn corners_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.corners
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.vertex == v)
            .map(|(i, _)| i)
    }

    fn check_len(&self, angles: &CombAngleStructure) -> Result<(), SurfaceError> {
        if angles.angles.len() != self.corners.len() {
            return Err(SurfaceError::LengthMismatch {
                expected: self.corners.len(),
                got: angles.angles.len(),
            });
        }
        Ok(())
    }

    pub fn cell_area(&self, cell: usize, angles: &CombAngleStructure) -> Q {
        let values: Vec<Q> = self.cells[cell]
            .corners
            .iter()
            .map(|&c| angles.angles[c].clone())
            .collect();
        polygon_area(&values)
    }

    /// `2 − Σ` (interior) or `1 − Σ` (boundary) over the corners at `v`.
    pub fn curvature(&self, angles: &CombAngleStructure, v: usize) -> Q {
        let base = if self.vertices[v].boundary { Q::one() } else { q(2) };
        self.corners_at(v)
            .fold(base, |acc, c| acc - &angles.angles[c])
    }

    pub fn gauss_bonnet_check(
        &self,
        angles: &CombAngleStructure,
    ) -> Result<GaussBonnetReport, SurfaceError> {
        self.check_len(angles)?;
        let total_area = (0..self.cells.len())
            .fold(Q::zero(), |acc, c| acc + self.cell_area(c, angles));
        let total_curvature = (0..self.vertices.len())
            .fold(Q::zero(), |acc, v| acc + self.curvature(angles, v));
        let two_chi = q(2 * self.euler);
        if &total_area + &total_curvature != two_chi {
            return Err(SurfaceError::GaussBonnetViolated {
                area: total_area,
                curvature: total_curvature,
                expected: two_chi,
            });
        }
        Ok(GaussBonnetReport {
            total_area,
            total_curvature,
            two_chi,
        })
    }

    /// Finds corner angles realizing prescribed vertex curvatures and cell
    /// areas, or refuses with the Gauss–Bonnet defect.
    pub fn realize(&self, curvature: &[Q], area: &[Q]) -> Result<Realization, SurfaceError> {
        if curvature.len() != self.vertices.len() {
            return Err(SurfaceError::LengthMismatch {
                expected: self.vertices.len(),
                got: curvature.len(),
            });
        }
        if area.len() != self.cells.len() {
            return Err(SurfaceError::LengthMismatch {
                expected: self.cells.len(),
                got: area.len(),
            });
        }
        if self.components != 1 {
            return Err(SurfaceError::Disconnected {
                components: self.components,
            });
        }
        let defect = area.iter().chain(curvature).fold(Q::zero(), |acc, x| acc + x)
            - q(2 * self.euler);
        if !defect.is_zero() {
            return Ok(Realization::Refused { defect });
        }

        let n = self.corners.len();
        let mut system = Matrix::zeros(0, n);
        let mut rhs = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            let mut row = vec![Q::zero(); n];
            for c in self.corners_at(v) {
                row[c] += Q::one();
            }
            system.push_row(row);
            let base = if vert.boundary { Q::one() } else { q(2) };
            rhs.push(base - &curvature[v]);
        }
        for (f, cell) in self.cells.iter().enumerate() {
            let mut row = vec![Q::zero(); n];
            for &c in &cell.corners {
                row[c] += Q::one();
            }
            system.push_row(row);
            rhs.push(&area[f] + q(cell.len() as i64 - 2));
        }
        let angles = system
            .solve(&rhs)
            .expect("a zero Gauss–Bonnet defect guarantees solvability on a connected surface");
        Ok(Realization::Realized(CombAngleStructure { angles }))
    }

    /// Splits the surface into its connected components.
    pub fn components(&self) -> Vec<CwSurface> {
        if self.components == 1 {
            return vec![self.clone()];
        }
        let labels = component_labels(self.vertices.len(), &self.cells, &self.corners);
        let mut out = Vec::new();
        for comp in 0..self.components {
            let cell_ids: Vec<usize> = (0..self.cells.len())
                .filter(|&c| labels[self.corners[self.cells[c].corners[0]].vertex] == comp)
                .collect();
            let mut vmap = BTreeMap::new();
            let mut polys = Vec::new();
            for &c in &cell_ids {
                let cell = &self.cells[c];
                let poly = cell
                    .corners
                    .iter()
                    .zip(&cell.sides)
                    .map(|(&corner, &side)| {
                        let old = self.corners[corner].vertex;
                        let next = vmap.len();
                        let v = *vmap.entry(old).or_insert(next);
                        (v, side)
                    })
                    .collect();
                polys.push(poly);
            }
            out.push(
                CwSurface::from_polygons(vmap.len(), polys)
                    .expect("a component of a valid surface is valid"),
            );
        }
        out
    }
}

/// Two-colours the cells so that every interior edge is traversed in
/// opposite directions by its two sides.
fn orientable(cells: &[Cell], uses: &BTreeMap<usize, Vec<(usize, usize)>>) -> bool {
    // neighbours[c] = (other cell, required relative sign)
    let mut neighbours: Vec<Vec<(usize, bool)>> = vec![Vec::new(); cells.len()];
    for list in uses.values() {
        if let [(c1, s1), (c2, s2)] = list.as_slice() {
            let d1 = cells[*c1].sides[*s1].forward;
            let d2 = cells[*c2].sides[*s2].forward;
            // Same traversal direction forces opposite cell orientations.
            let flip = d1 == d2;
            neighbours[*c1].push((*c2, flip));
            neighbours[*c2].push((*c1, flip));
        }
    }
    let mut sign: Vec<Option<bool>> = vec![None; cells.len()];
    for start in 0..cells.len() {
        if sign[start].is_some() {
            continue;
        }
        sign[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            let sc = sign[c].unwrap();
            for &(d, flip) in &neighbours[c] {
                let want = sc ^ flip;
                match sign[d] {
                    None => {
                        sign[d] = Some(want);
                        queue.push_back(d);
                    }
                    Some(s) if s != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

fn component_labels(
    vertex_count: usize,
    cells: &[Cell],
    corners: &[SurfaceCorner],
) -> Vec<usize> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); vertex_count];
    for cell in cells {
        let vs: Vec<usize> = cell.corners.iter().map(|&c| corners[c].vertex).collect();
        for w in vs.windows(2) {
            adj[w[0]].insert(w[1]);
            adj[w[1]].insert(w[0]);
        }
        if let (Some(&a), Some(&b)) = (vs.first(), vs.last()) {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    let mut label = vec![usize::MAX; vertex_count];
    let mut next = 0;
    for s in 0..vertex_count {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

fn count_components(vertex_count: usize, cells: &[Cell], corners: &[SurfaceCorner]) -> usize {
    component_labels(vertex_count, cells, corners)
        .into_iter()
        .max()
        .map_or(0, |m| m + 1)
}
