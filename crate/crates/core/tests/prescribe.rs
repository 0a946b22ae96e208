mod common;

use angstruct::angles::{decide, StructureKind};
use angstruct::census;
use angstruct::format::TriangulationFile;
use angstruct::lp::{LpOutcome, Relation};
use angstruct::normal::{chi_star, verify_basis, vertex_link_vector, NormalVector};
use angstruct::prescribe::{
    b_system, chi_ak, consistency_terms, decide_prescribed, example_family, induced_area_curvature,
    link_angles, matrix_identities, phi, phi_inverse, vertex_conditions, AreaCurvature, SignRegime,
    WedgeAssignment, WedgeIndex,
};
use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn example() -> (angstruct::Triangulation, [usize; 3]) {
    let file = TriangulationFile::parse(census::EXAMPLE_4_6).unwrap();
    let tri = file.build().unwrap();
    let e = ["e1", "e2", "e3"].map(|l| file.edge_class(&tri, l).unwrap());
    (tri, e)
}

fn s1() -> NormalVector {
    NormalVector::from_i64(&[0, 0, 0, 1, 0, 1, 0])
}
fn s2() -> NormalVector {
    NormalVector::from_i64(&[0, 0, 0, 0, 1, 0, 1])
}
fn t_bar() -> NormalVector {
    NormalVector::from_i64(&[0, 0, 1, 0, 0, 0, 0])
}
fn r_bar() -> NormalVector {
    NormalVector::from_i64(&[1, 1, 0, 0, 0, 0, 0])
}

#[test]
fn example_chi_formulas_at_random_data() {
    let (tri, [e1, e2, e3]) = example();
    let basis = verify_basis(&tri).unwrap();
    let mut g = rng(46);
    for _ in 0..20 {
        let ac = rand_ac(&mut g, &tri);
        let (a, k) = (&ac.area, &ac.kappa);
        let half = |x: Q| x / q(2);
        let chi = |s: &NormalVector| chi_ak(&tri, &basis, &ac, s).unwrap();
        assert_eq!(chi(&s1()), half(&a[0] + &a[2] + q(2) * &k[e1] + &k[e3]));
        assert_eq!(chi(&s2()), half(&a[1] + &a[3] + q(2) * &k[e2] + &k[e3]));
        assert_eq!(chi(&t_bar()), half(k[e3].clone()));
        assert_eq!(chi(&r_bar()), half(q(2) * &k[e1] + q(2) * &k[e2] + &k[e3]));
    }
}

#[test]
fn example_family_threshold() {
    let (tri, [e1, e2, e3]) = example();
    let basis = verify_basis(&tri).unwrap();
    for (n, d) in [(7, 10), (3, 4), (79, 100), (4, 5), (9, 10), (1, 1)] {
        let a = qr(n, d);
        let wa = example_family(&tri, &a);
        assert_eq!(wa.value(0, 0), &a);
        let (ac, _) = induced_area_curvature(&tri, &wa);
        for e in [e1, e2, e3] {
            assert_eq!(ac.kappa[e], q(2) - &a);
        }
        assert_eq!(chi_ak(&tri, &basis, &ac, &r_bar()).unwrap(), q(5) * (q(2) - &a) / q(2));
        let cond = vertex_conditions(&tri, &basis, &ac, StructureKind::Strict).unwrap();
        assert!(cond.links_balanced);
        assert_eq!(cond.condition_holds, a < qr(4, 5), "a = {a}");
        if a == qr(4, 5) {
            let v = cond.violation.unwrap();
            assert_eq!(v.vector, r_bar());
            assert_eq!((v.chi_star, v.chi_ak), (q(3), q(3)));
        }
        // The family itself is a strict structure with this data.
        assert!(wa.is_valid(&tri, &ac, StructureKind::Strict));
        let d = decide_prescribed(&tri, &basis, &ac, StructureKind::Strict).unwrap();
        assert!(d.feasible);
    }
}

#[test]
fn example_negative_angle_gap() {
    let (tri, _) = example();
    let basis = verify_basis(&tri).unwrap();
    for a in [qr(-1, 2), qr(-1, 10), q(-2)] {
        let (ac, _) = induced_area_curvature(&tri, &example_family(&tri, &a));
        assert_eq!(ac.regime(), SignRegime::NonPositive);
        let d = decide_prescribed(&tri, &basis, &ac, StructureKind::Semi).unwrap();
        assert!(!d.feasible);
        let cond = d.conditions.unwrap();
        assert!(cond.condition_holds, "necessary condition holds at a = {a}");
        let cert = d.certificate.unwrap();
        assert!(cert.pairing.is_positive());
    }
}

#[test]
fn b_transpose_wedge_rows() {
    let mut g = rng(8);
    for (name, tri) in fixtures() {
        let (b, _) = b_system(&tri, &AreaCurvature::zero(&tri));
        let t = tri.tet_count();
        let bt = b.transpose();
        for _ in 0..10 {
            let hz = rand_vec(&mut g, 4 * t + tri.edge_count());
            let row = bt.mul_vec(&hz);
            for (gi, value) in row.iter().enumerate() {
                let w = WedgeIndex::from_global(gi);
                let [k, l] = w.triangles();
                let z = &hz[4 * t + tri.edge_class_of(w.tet, w.edge())];
                assert_eq!(*value, z + &hz[4 * w.tet + k] + &hz[4 * w.tet + l], "{name}");
            }
        }
    }
}

#[test]
fn identities_on_corpus() {
    for (name, tri) in corpus().into_iter().chain(fixtures()) {
        let r = matrix_identities(&tri).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(r.ker_bt_dim, r.ker_at_dim);
    }
}

#[test]
fn phi_inverse_round_trips_kernel_elements() {
    let mut g = rng(48);
    for (name, tri) in fixtures() {
        let (b, _) = b_system(&tri, &AreaCurvature::zero(&tri));
        let ker = b.transpose().nullspace();
        let t = tri.tet_count();
        for _ in 0..20 {
            let mut hz = vec![Q::zero(); 4 * t + tri.edge_count()];
            for v in &ker {
                let c = rand_q(&mut g);
                for (x, y) in hz.iter_mut().zip(v) {
                    *x += &c * y;
                }
            }
            assert_eq!(phi_inverse(&tri, &phi(t, &hz)), hz, "{name}");
        }
    }
}

#[test]
fn consistency_identity_random() {
    let mut g = rng(45);
    for (name, tri) in fixtures() {
        let basis = verify_basis(&tri).unwrap();
        for _ in 0..3 {
            let ac = rand_ac(&mut g, &tri);
            for _ in 0..10 {
                let hz = rand_vec(&mut g, 4 * tri.tet_count() + tri.edge_count());
                let terms = consistency_terms(&tri, &basis, &ac, &hz);
                assert!(terms.holds(), "{name}: {terms:?}");
            }
        }
    }
}

#[test]
fn chi_ak_is_chi_star_minus_half_quad_area() {
    let mut g = rng(44);
    for (name, tri) in fixtures() {
        let basis = verify_basis(&tri).unwrap();
        for _ in 0..10 {
            let wa = WedgeAssignment {
                values: rand_vec(&mut g, 6 * tri.tet_count()),
            };
            let (ac, quad_area) = induced_area_curvature(&tri, &wa);
            let s = rand_kernel(&mut g, &basis);
            let quad_term: Q = s.quads().iter().zip(&quad_area).map(|(x, a)| x * a).sum();
            assert_eq!(
                chi_ak(&tri, &basis, &ac, &s).unwrap(),
                chi_star(&tri, &s) - quad_term / q(2),
                "{name}"
            );
        }
    }
}

#[test]
fn witnesses_reproduce_prescription() {
    let mut g = rng(43);
    for (name, tri) in fixtures() {
        let basis = verify_basis(&tri).unwrap();
        for _ in 0..10 {
            // Data induced by a positive assignment is always strictly feasible.
            let seed = WedgeAssignment {
                values: (0..6 * tri.tet_count()).map(|_| qr(g.gen_range(1..=6), 6)).collect(),
            };
            let (ac, _) = induced_area_curvature(&tri, &seed);
            for kind in StructureKind::ALL {
                let d = decide_prescribed(&tri, &basis, &ac, kind).unwrap();
                assert!(d.feasible, "{name} {kind}");
                let w = d.witness.unwrap();
                assert_eq!(induced_area_curvature(&tri, &w).0, ac, "{name} {kind}");
            }
        }
    }
}

#[test]
fn generalised_matches_link_criterion() {
    let mut g = rng(45);
    for (name, tri) in fixtures() {
        if tri.has_inverted_edge() {
            continue;
        }
        let basis = verify_basis(&tri).unwrap();
        let expected_dim = 2 * tri.tet_count() as i64 - tri.edge_count() as i64 + tri.vertex_count() as i64;
        for i in 0..50 {
            let ac = if i % 2 == 0 {
                rand_ac(&mut g, &tri)
            } else {
                let wa = WedgeAssignment {
                    values: rand_vec(&mut g, 6 * tri.tet_count()),
                };
                induced_area_curvature(&tri, &wa).0
            };
            let d = decide_prescribed(&tri, &basis, &ac, StructureKind::Generalised).unwrap();
            let (b, rhs) = b_system(&tri, &ac);
            assert_eq!(d.feasible, b.solve(&rhs).is_some(), "{name}");
            let criterion = (0..tri.vertex_count()).all(|v| {
                let link = vertex_link_vector(&tri, v);
                q(tri.vertex_classes()[v].link_euler) == chi_ak(&tri, &basis, &ac, &link).unwrap()
            });
            assert_eq!(d.feasible, criterion, "{name}");
            if d.feasible {
                assert_eq!(d.dimension.unwrap() as i64, expected_dim, "{name}");
            }
        }
    }
}

#[test]
fn induced_link_structures_satisfy_gauss_bonnet() {
    let mut g = rng(43);
    for (name, tri) in fixtures() {
        for _ in 0..10 {
            let wa = WedgeAssignment {
                values: rand_vec(&mut g, 6 * tri.tet_count()),
            };
            let (ac, _) = induced_area_curvature(&tri, &wa);
            for v in 0..tri.vertex_count() {
                let surface = tri.vertex_link_surface(v);
                let angles = link_angles(&tri, v, &wa);
                let report = surface.gauss_bonnet_check(&angles).unwrap();
                assert_eq!(&report.total_area + &report.total_curvature, report.two_chi, "{name}");
                // Each link cell is a normal triangle, so its area is the prescribed one.
                for (i, c) in tri.vertex_classes()[v].corners.iter().enumerate() {
                    assert_eq!(surface.cell_area(i, &angles), ac.area[4 * c.tet + c.vertex], "{name}");
                }
            }
        }
    }
}

#[test]
fn zero_data_agrees_with_angle_structures() {
    for (name, tri) in corpus() {
        let basis = verify_basis(&tri).unwrap();
        let ac = AreaCurvature::zero(&tri);
        for kind in StructureKind::ALL {
            let d = decide_prescribed(&tri, &basis, &ac, kind).unwrap();
            let a = decide(&tri, kind).unwrap();
            assert_eq!(d.feasible, a.feasible, "{name} {kind}");
        }
    }
}

/// Oracle for the vertex conditions: an LP over the kernel with
/// nonnegative quads, independent of vertex enumeration.
fn oracle_condition(tri: &angstruct::Triangulation, ac: &AreaCurvature, kind: StructureKind) -> bool {
    let basis = verify_basis(tri).unwrap();
    match kind {
        StructureKind::Strict => match quad_cone_max(tri, &basis, ac, Relation::Eq) {
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal { value, .. } => value.is_negative(),
        },
        _ => match quad_cone_max(tri, &basis, ac, Relation::Le) {
            LpOutcome::Infeasible => unreachable!("zero is feasible"),
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal { value, .. } => !value.is_positive(),
        },
    }
}

#[test]
fn vertex_conditions_match_cone_oracle() {
    let mut g = rng(47);
    for (name, tri) in fixtures() {
        if tri.has_inverted_edge() {
            continue;
        }
        let basis = verify_basis(&tri).unwrap();
        for i in 0..12 {
            // Mix balanced-link data (induced) with arbitrary data.
            let ac = if i % 3 == 0 {
                rand_ac(&mut g, &tri)
            } else {
                let wa = WedgeAssignment {
                    values: rand_vec(&mut g, 6 * tri.tet_count()),
                };
                induced_area_curvature(&tri, &wa).0
            };
            for kind in [StructureKind::Semi, StructureKind::Strict] {
                let cond = vertex_conditions(&tri, &basis, &ac, kind).unwrap();
                assert_eq!(cond.condition_holds, oracle_condition(&tri, &ac, kind), "{name} {kind}");
            }
        }
    }
}

#[test]
fn sign_regimes_enforce_implications() {
    let mut g = rng(49);
    for (name, tri) in fixtures() {
        if tri.has_inverted_edge() {
            continue;
        }
        let basis = verify_basis(&tri).unwrap();
        for _ in 0..10 {
            let wa = WedgeAssignment {
                values: rand_vec(&mut g, 6 * tri.tet_count()),
            };
            let (mut ac, _) = induced_area_curvature(&tri, &wa);
            // Force a sign regime by clamping areas.
            let sign = g.gen_range(0..3);
            for a in ac.area.iter_mut() {
                match sign {
                    0 if a.is_positive() => *a = -a.clone(),
                    1 if a.is_negative() => *a = -a.clone(),
                    2 => *a = Q::zero(),
                    _ => {}
                }
            }
            for kind in [StructureKind::Semi, StructureKind::Strict] {
                let d = decide_prescribed(&tri, &basis, &ac, kind).unwrap_or_else(|e| panic!("{name}: {e}"));
                let cond = d.conditions.unwrap();
                if cond.regime == SignRegime::Zero {
                    assert_eq!(cond.condition_holds, d.feasible, "{name} {kind}");
                }
            }
        }
    }
}

use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn consistency_identity_on_random_triangulations(seed in any::<u64>()) {
        let mut g = rng(seed);
        let tri = random_triangulation(&mut g, 2);
        let basis = verify_basis(&tri).unwrap();
        let ac = rand_ac(&mut g, &tri);
        let hz = rand_vec(&mut g, 4 * tri.tet_count() + tri.edge_count());
        prop_assert!(consistency_terms(&tri, &basis, &ac, &hz).holds());
        prop_assert!(matrix_identities(&tri).is_ok());
    }
}
