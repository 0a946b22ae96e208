//! Triangulated 3-dimensional pseudo-manifolds given by face gluings.
//!
//! Tetrahedron vertices are labelled 0–3 and face `f` is the triangle
//! opposite vertex `f`. Tetrahedron edges are indexed lexicographically by
//! their vertex pairs, see [`EDGE_VERTICES`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::cwsurface::{CwSurface, Side};

/// Vertex pair of each tetrahedron edge: 0↔{0,1}, 1↔{0,2}, 2↔{0,3},
/// 3↔{1,2}, 4↔{1,3}, 5↔{2,3}. Opposite edges are (0,5), (1,4), (2,3).
pub const EDGE_VERTICES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

/// Index of the tetrahedron edge joining vertices `a` and `b`.
pub fn edge_index(a: usize, b: usize) -> usize {
    assert!(a != b && a < 4 && b < 4, "not a tetrahedron edge: {a}{b}");
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    match (lo, hi) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

pub fn opposite_edge(e: usize) -> usize {
    5 - e
}

/// The two vertices not in `{a, b}`, ascending.
pub fn complement_pair(a: usize, b: usize) -> [usize; 2] {
    let mut out = [0; 2];
    let mut k = 0;
    for v in 0..4 {
        if v != a && v != b {
            out[k] = v;
            k += 1;
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("a triangulation needs at least one tetrahedron")]
    NoTetrahedra,
    #[error("gluing {record}: tetrahedron {tet} out of range (t = {count})")]
    TetOutOfRange { record: usize, tet: usize, count: usize },
    #[error("gluing {record}: face {face} out of range")]
    FaceOutOfRange { record: usize, face: usize },
    #[error("gluing {record}: face {face} of tetrahedron {tet} is glued to itself")]
    SelfIdentifiedFace { record: usize, tet: usize, face: usize },
    #[error("gluing {record}: face {face} of tetrahedron {tet} already used by gluing {first}")]
    DuplicateFace {
        record: usize,
        tet: usize,
        face: usize,
        first: usize,
    },
    #[error("gluing {record}: vertex map {perm} sends face {src_face} to {image}, expected {dst_face}")]
    FaceMismatch {
        record: usize,
        perm: Perm4,
        src_face: usize,
        dst_face: usize,
        image: usize,
    },
    #[error("gluing {record}: {source}")]
    Permutation { record: usize, source: PermError },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("{0:?} is not a permutation of 0..4")]
    NotAPermutation([usize; 4]),
}

/// A permutation of the tetrahedron vertex labels {0,1,2,3}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// `images[i]` is the image of `i`.
    pub fn new(images: [usize; 4]) -> Result<Self, PermError> {
        let mut seen = [false; 4];
        for &i in &images {
            if i >= 4 || seen[i] {
                return Err(PermError::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Perm4(images.map(|i| i as u8)))
    }

    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [usize; 4] {
        self.0.map(|i| i as usize)
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4(other.0.map(|i| self.0[i as usize]))
    }

    /// +1 for even permutations, −1 for odd.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All 24 permutations in lexicographic order of their image sequences.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        if let Ok(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

/// Identification of face `src_face` of `src_tet` with face `dst_face` of
/// `dst_tet`; `vertex_map` sends source vertex labels to destination labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Gluing {
    pub src_tet: usize,
    pub src_face: usize,
    pub dst_tet: usize,
    pub dst_face: usize,
    pub vertex_map: Perm4,
}

impl Gluing {
    pub fn new(src_tet: usize, src_face: usize, dst_tet: usize, dst_face: usize, vertex_map: Perm4) -> Self {
        Gluing {
            src_tet,
            src_face,
            dst_tet,
            dst_face,
            vertex_map,
        }
    }
}

/// One tetrahedron edge belonging to an edge class. `reversed` records
/// whether the edge's low-to-high vertex direction opposes the class's
/// reference direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EdgeEmbedding {
    pub tet: usize,
    pub edge: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    pub embeddings: Vec<EdgeEmbedding>,
    pub on_boundary: bool,
    /// Some identification maps the edge onto itself reversing direction.
    pub inverted: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.embeddings.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Corner {
    pub tet: usize,
    pub vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    Sphere,
    Torus,
    KleinBottle,
    Disc,
    Other {
        euler: i64,
        orientable: bool,
        closed: bool,
    },
}

impl LinkKind {
    pub fn classify(euler: i64, orientable: bool, closed: bool) -> LinkKind {
        match (closed, euler, orientable) {
            (true, 2, _) => LinkKind::Sphere,
            (true, 0, true) => LinkKind::Torus,
            (true, 0, false) => LinkKind::KleinBottle,
            (false, 1, _) => LinkKind::Disc,
            _ => LinkKind::Other {
                euler,
                orientable,
                closed,
            },
        }
    }

    pub fn is_torus_or_klein(self) -> bool {
        matches!(self, LinkKind::Torus | LinkKind::KleinBottle)
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkKind::Sphere => write!(f, "sphere"),
            LinkKind::Torus => write!(f, "torus"),
            LinkKind::KleinBottle => write!(f, "klein_bottle"),
            LinkKind::Disc => write!(f, "disc"),
            LinkKind::Other {
                euler,
                orientable,
                closed,
            } => write!(
                f,
                "other(chi={euler}, {}, {})",
                if *orientable { "orientable" } else { "non-orientable" },
                if *closed { "closed" } else { "bounded" }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    pub corners: Vec<Corner>,
    pub link_euler: i64,
    pub link_orientable: bool,
    pub link_closed: bool,
    pub classification: LinkKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
struct Neighbour {
    tet: usize,
    perm: Perm4,
}

/// Immutable triangulation with all derived classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triangulation {
    tet_count: usize,
    gluings: Vec<Gluing>,
    #[serde(skip)]
    adjacency: Vec<[Option<Neighbour>; 4]>,
    edge_classes: Vec<EdgeClass>,
    vertex_classes: Vec<VertexClass>,
    boundary_faces: Vec<(usize, usize)>,
    #[serde(skip)]
    edge_class_of: Vec<[usize; 6]>,
    #[serde(skip)]
    vertex_class_of: Vec<[usize; 4]>,
}

impl Triangulation {
    pub fn build(tet_count: usize, gluings: Vec<Gluing>) -> Result<Self, BuildError> {
        if tet_count == 0 {
            return Err(BuildError::NoTetrahedra);
        }
        let mut adjacency = vec![[None; 4]; tet_count];
        let mut used_by: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (record, g) in gluings.iter().enumerate() {
            for tet in [g.src_tet, g.dst_tet] {
                if tet >= tet_count {
                    return Err(BuildError::TetOutOfRange {
                        record,
                        tet,
                        count: tet_count,
                    });
                }
            }
            for face in [g.src_face, g.dst_face] {
                if face >= 4 {
                    return Err(BuildError::FaceOutOfRange { record, face });
                }
            }
            if (g.src_tet, g.src_face) == (g.dst_tet, g.dst_face) {
                return Err(BuildError::SelfIdentifiedFace {
                    record,
                    tet: g.src_tet,
                    face: g.src_face,
                });
            }
            let image = g.vertex_map.apply(g.src_face);
            if image != g.dst_face {
                return Err(BuildError::FaceMismatch {
                    record,
                    perm: g.vertex_map,
                    src_face: g.src_face,
                    dst_face: g.dst_face,
                    image,
                });
            }
            for (tet, face) in [(g.src_tet, g.src_face), (g.dst_tet, g.dst_face)] {
                if let Some(&first) = used_by.get(&(tet, face)) {
                    return Err(BuildError::DuplicateFace {
                        record,
                        tet,
                        face,
                        first,
                    });
                }
                used_by.insert((tet, face), record);
            }
            adjacency[g.src_tet][g.src_face] = Some(Neighbour {
                tet: g.dst_tet,
                perm: g.vertex_map,
            });
            adjacency[g.dst_tet][g.dst_face] = Some(Neighbour {
                tet: g.src_tet,
                perm: g.vertex_map.inverse(),
            });
        }

        let boundary_faces = (0..tet_count)
            .flat_map(|t| (0..4).map(move |f| (t, f)))
            .filter(|&(t, f)| adjacency[t][f].is_none())
            .collect();

        let mut tri = Triangulation {
            tet_count,
            gluings,
            adjacency,
            edge_classes: Vec::new(),
            vertex_classes: Vec::new(),
            boundary_faces,
            edge_class_of: Vec::new(),
            vertex_class_of: Vec::new(),
        };
        let (edge_classes, edge_class_of) = tri.trace_edge_classes();
        tri.edge_classes = edge_classes;
        tri.edge_class_of = edge_class_of;
        tri.compute_vertex_classes();
        Ok(tri)
    }

    /// Number of tetrahedra `t`.
    pub fn tet_count(&self) -> usize {
        self.tet_count
    }

    /// Number of edge classes `n`.
    pub fn edge_count(&self) -> usize {
        self.edge_classes.len()
    }

    /// Number of vertex classes `v`.
    pub fn vertex_count(&self) -> usize {
        self.vertex_classes.len()
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.vertex_classes
    }

    pub fn boundary_faces(&self) -> &[(usize, usize)] {
        &self.boundary_faces
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_faces.is_empty()
    }

    pub fn is_face_glued(&self, tet: usize, face: usize) -> bool {
        self.adjacency[tet][face].is_some()
    }

    /// Destination tetrahedron and vertex map across a face, if glued.
    pub fn neighbour(&self, tet: usize, face: usize) -> Option<(usize, Perm4)> {
        self.adjacency[tet][face].map(|n| (n.tet, n.perm))
    }

    /// Edge class containing edge `edge` of tetrahedron `tet`.
    pub fn edge_class_of(&self, tet: usize, edge: usize) -> usize {
        self.edge_class_of[tet][edge]
    }

    pub fn vertex_class_of(&self, tet: usize, vertex: usize) -> usize {
        self.vertex_class_of[tet][vertex]
    }

    pub fn has_inverted_edge(&self) -> bool {
        self.edge_classes.iter().any(|e| e.inverted)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.edge_classes.iter().map(EdgeClass::degree).collect()
    }

    /// Number of triangle classes: glued face pairs plus boundary faces.
    pub fn face_count(&self) -> usize {
        (4 * self.tet_count - self.boundary_faces.len()) / 2 + self.boundary_faces.len()
    }

    /// Walks around each tetrahedron edge through successive face gluings.
    ///
    /// A walking state is `(tet, a, b, c, d)`: the current edge is `ab` and
    /// the walk leaves through the face opposite `d`. Crossing that face
    /// with vertex map `p` arrives at `(tet', p(a), p(b), p(d), p(c))`.
    fn trace_edge_classes(&self) -> (Vec<EdgeClass>, Vec<[usize; 6]>) {
        const UNSET: usize = usize::MAX;
        let mut class_of = vec![[UNSET; 6]; self.tet_count];
        let mut classes = Vec::new();

        for tet in 0..self.tet_count {
            for edge in 0..6 {
                if class_of[tet][edge] != UNSET {
                    continue;
                }
                let [a, b] = EDGE_VERTICES[edge];
                let [c, d] = complement_pair(a, b);
                let id = classes.len();
                // (tet, edge) -> orientations seen
                let mut seen: BTreeMap<(usize, usize), BTreeSet<bool>> = BTreeMap::new();
                let mut order = Vec::new();
                let mut record = |t: usize, x: usize, y: usize| {
                    let e = edge_index(x, y);
                    let entry = seen.entry((t, e)).or_default();
                    if entry.is_empty() {
                        order.push(EdgeEmbedding {
                            tet: t,
                            edge: e,
                            reversed: x > y,
                        });
                    }
                    entry.insert(x > y);
                };
                record(tet, a, b);

                let start = (tet, a, b, c, d);
                let mut on_boundary = false;
                let mut state = start;
                loop {
                    let (t, x, y, z, w) = state;
                    match self.adjacency[t][w] {
                        None => {
                            on_boundary = true;
                            break;
                        }
                        Some(n) => {
                            let p = n.perm;
                            let next = (n.tet, p.apply(x), p.apply(y), p.apply(w), p.apply(z));
                            if next == start {
                                break;
                            }
                            record(next.0, next.1, next.2);
                            state = next;
                        }
                    }
                }
                if on_boundary {
                    // The orbit is an arc; walk the other way from the start.
                    let mut state = (tet, a, b, d, c);
                    while let Some(n) = self.adjacency[state.0][state.4] {
                        let (_, x, y, z, w) = state;
                        let p = n.perm;
                        state = (n.tet, p.apply(x), p.apply(y), p.apply(w), p.apply(z));
                        record(state.0, state.1, state.2);
                    }
                }

                let inverted = seen.values().any(|o| o.len() == 2);
                for e in &order {
                    class_of[e.tet][e.edge] = id;
                }
                classes.push(EdgeClass {
                    embeddings: order,
                    on_boundary,
                    inverted,
                });
            }
        }
        (classes, class_of)
    }

    /// Edge partition computed by union-find over face identifications,
    /// independently of the orbit walk. Each part is sorted; parts are
    /// ordered by their first member. The flag marks inverted classes.
    pub fn edge_partition_union_find(&self) -> Vec<(Vec<(usize, usize)>, bool)> {
        // node = 2 * (6 * tet + edge) + orientation
        let node = |t: usize, e: usize, o: usize| 2 * (6 * t + e) + o;
        let mut uf = UnionFind::<usize>::new(12 * self.tet_count);
        for g in &self.gluings {
            let p = g.vertex_map;
            for e in 0..6 {
                let [a, b] = EDGE_VERTICES[e];
                if a == g.src_face || b == g.src_face {
                    continue;
                }
                let (pa, pb) = (p.apply(a), p.apply(b));
                let e2 = edge_index(pa, pb);
                let flip = usize::from(pa > pb);
                for o in 0..2 {
                    uf.union(node(g.src_tet, e, o), node(g.dst_tet, e2, o ^ flip));
                }
            }
        }
        let mut parts: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut inverted: BTreeMap<usize, bool> = BTreeMap::new();
        for t in 0..self.tet_count {
            for e in 0..6 {
                let root = uf.find(node(t, e, 0));
                let alt = uf.find(node(t, e, 1));
                let key = root.min(alt);
                parts.entry(key).or_default().push((t, e));
                *inverted.entry(key).or_default() |= root == alt;
            }
        }
        let mut out: Vec<(Vec<(usize, usize)>, bool)> = parts
            .into_iter()
            .map(|(k, mut v)| {
                v.sort();
                (v, inverted[&k])
            })
            .collect();
        out.sort();
        out
    }

    fn compute_vertex_classes(&mut self) {
        let mut uf = UnionFind::<usize>::new(4 * self.tet_count);
        for g in &self.gluings {
            for v in (0..4).filter(|&v| v != g.src_face) {
                uf.union(4 * g.src_tet + v, 4 * g.dst_tet + g.vertex_map.apply(v));
            }
        }
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut corners: Vec<Vec<Corner>> = Vec::new();
        let mut class_of = vec![[0; 4]; self.tet_count];
        for tet in 0..self.tet_count {
            for vertex in 0..4 {
                let root = uf.find(4 * tet + vertex);
                let next = ids.len();
                let id = *ids.entry(root).or_insert(next);
                if id == corners.len() {
                    corners.push(Vec::new());
                }
                corners[id].push(Corner { tet, vertex });
                class_of[tet][vertex] = id;
            }
        }
        self.vertex_class_of = class_of;
        self.vertex_classes = corners
            .into_iter()
            .map(|corners| VertexClass {
                corners,
                link_euler: 0,
                link_orientable: true,
                link_closed: true,
                classification: LinkKind::Sphere,
            })
            .collect();
        for i in 0..self.vertex_classes.len() {
            let link = self.vertex_link_surface(i);
            let vc = &mut self.vertex_classes[i];
            vc.link_euler = link.euler();
            vc.link_orientable = link.orientable();
            vc.link_closed = link.is_closed();
            vc.classification = LinkKind::classify(link.euler(), link.orientable(), link.is_closed());
        }
    }

    /// The link of vertex class `v` as a CW surface: one triangle per
    /// corner, with sides glued across the face gluings.
    ///
    /// Link vertices are numbered by first appearance over the corners in
    /// class order; cell `i` is the triangle at `vertex_classes()[v].corners[i]`,
    /// and its corners sit on the tetrahedron edges towards the other three
    /// tetrahedron vertices in ascending order.
    pub fn vertex_link_surface(&self, v: usize) -> CwSurface {
        let class_corners = &self.vertex_classes[v].corners;
        // node (tet, corner vertex, other vertex) = 16 * tet + 4 * cv + ov;
        // for link edges the last slot is the face.
        let node = |t: usize, a: usize, b: usize| 16 * t + 4 * a + b;
        let mut vertex_uf = UnionFind::<usize>::new(16 * self.tet_count);
        let mut partner: BTreeMap<usize, (usize, Perm4)> = BTreeMap::new();
        for g in &self.gluings {
            let p = g.vertex_map;
            let f = g.src_face;
            for cv in (0..4).filter(|&x| x != f) {
                for ov in (0..4).filter(|&x| x != f && x != cv) {
                    vertex_uf.union(node(g.src_tet, cv, ov), node(g.dst_tet, p.apply(cv), p.apply(ov)));
                }
                let here = node(g.src_tet, cv, f);
                let there = node(g.dst_tet, p.apply(cv), p.apply(f));
                partner.insert(here, (there, p));
                partner.insert(there, (here, p.inverse()));
            }
        }

        let mut vertex_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edge_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut polygons = Vec::with_capacity(class_corners.len());
        for c in class_corners {
            let others: Vec<usize> = (0..4).filter(|&x| x != c.vertex).collect();
            let mut poly = Vec::with_capacity(3);
            for i in 0..3 {
                let (x, y) = (others[i], others[(i + 1) % 3]);
                let face = others[(i + 2) % 3];
                let root = vertex_uf.find(node(c.tet, c.vertex, x));
                let next = vertex_ids.len();
                let vid = *vertex_ids.entry(root).or_insert(next);

                let here = node(c.tet, c.vertex, face);
                // The reference direction of a link edge runs low-to-high in
                // the tetrahedron of its smaller node.
                let (rep, to_here) = match partner.get(&here) {
                    Some(&(there, p)) if there < here => (there, p.inverse()),
                    _ => (here, Perm4::IDENTITY),
                };
                let rep_face = rep % 4;
                let rep_corner = (rep / 4) % 4;
                let [ra, rb] = complement_pair(rep_corner, rep_face);
                let forward = (to_here.apply(ra), to_here.apply(rb)) == (x, y);
                let next = edge_ids.len();
                let eid = *edge_ids.entry(rep).or_insert(next);
                poly.push((vid, Side { edge: eid, forward }));
            }
            polygons.push(poly);
        }
        CwSurface::from_polygons(vertex_ids.len(), polygons)
            .expect("vertex links are valid CW surfaces")
    }
}
