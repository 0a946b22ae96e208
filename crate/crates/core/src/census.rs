//! Shipped fixtures and the generated one-tetrahedron corpus.

use crate::complex::{Gluing, Perm4, Triangulation};
use crate::format::TriangulationFile;

pub const EXAMPLE_4_6: &str = include_str!("../fixtures/example_4_6.tri");
pub const FIGURE_EIGHT: &str = include_str!("../fixtures/fig8.tri");
pub const TWO_TET_NO_SEMI: &str = include_str!("../fixtures/two_tet_no_semi.tri");
pub const TWO_TET_SEMI_ONLY: &str = include_str!("../fixtures/two_tet_semi_only.tri");
pub const TWO_TET_TWO_CUSPS: &str = include_str!("../fixtures/two_tet_two_cusps.tri");

/// A named triangulation.
#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub tri: Triangulation,
}

fn shipped(text: &str) -> Triangulation {
    TriangulationFile::parse(text)
        .and_then(|f| f.build())
        .expect("shipped fixture parses")
}

/// One tetrahedron with two face pairings, two sphere-link vertices and
/// edge degrees 1, 1, 4.
pub fn example_4_6() -> Triangulation {
    shipped(EXAMPLE_4_6)
}

/// Two-tetrahedron ideal triangulation of the figure-eight knot complement.
pub fn figure_eight() -> Triangulation {
    shipped(FIGURE_EIGHT)
}

pub fn unglued_tetrahedron() -> Triangulation {
    Triangulation::build(1, Vec::new()).expect("one free tetrahedron")
}

/// The three ways of pairing up the four faces of one tetrahedron.
const FACE_PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

/// Every closed one-tetrahedron gluing, in a fixed order: face pairing,
/// then the two permutations in [`Perm4::all`] order. Some of these are
/// isomorphic and some have inverted edges.
pub fn one_tet_closed_all() -> Vec<Entry> {
    let mut out = Vec::new();
    for pairing in FACE_PAIRINGS {
        let options: Vec<Vec<Gluing>> = pairing
            .iter()
            .map(|&(a, b)| {
                Perm4::all()
                    .into_iter()
                    .filter(|p| p.apply(a) == b)
                    .map(|p| Gluing::new(0, a, 0, b, p))
                    .collect()
            })
            .collect();
        for g1 in &options[0] {
            for g2 in &options[1] {
                let tri = Triangulation::build(1, vec![*g1, *g2]).expect("closed gluing");
                let name = format!(
                    "t1:{}{}{}-{}{}{}",
                    g1.src_face, g1.dst_face, g1.vertex_map, g2.src_face, g2.dst_face, g2.vertex_map
                );
                out.push(Entry { name, tri });
            }
        }
    }
    out
}

/// Closed one-tetrahedron gluings without inverted edges.
pub fn one_tet_closed_valid() -> Vec<Entry> {
    one_tet_closed_all()
        .into_iter()
        .filter(|e| !e.tri.has_inverted_edge())
        .collect()
}

/// Every shipped fixture file, by file stem.
pub fn shipped_fixtures() -> Vec<Entry> {
    [
        ("example_4_6", EXAMPLE_4_6),
        ("fig8", FIGURE_EIGHT),
        ("two_tet_no_semi", TWO_TET_NO_SEMI),
        ("two_tet_semi_only", TWO_TET_SEMI_ONLY),
        ("two_tet_two_cusps", TWO_TET_TWO_CUSPS),
    ]
    .into_iter()
    .map(|(name, text)| Entry {
        name: name.into(),
        tri: shipped(text),
    })
    .collect()
}

/// Valid closed one-tetrahedron gluings followed by the shipped
/// two-tetrahedron fixtures.
pub fn corpus() -> Vec<Entry> {
    let mut all = one_tet_closed_valid();
    all.extend(shipped_fixtures().into_iter().filter(|e| e.tri.tet_count() == 2));
    all
}
