//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use angstruct::angles::{angle_matrix, decide, max_chi_star, StructureKind};
use angstruct::census;
use angstruct::complex::LinkKind;
use angstruct::cwsurface::{CombAngleStructure, Realization};
use angstruct::format::TriangulationFile;
use angstruct::linalg::Matrix;
use angstruct::normal::{
    chi_star, edge_solution, matching_matrix, tet_solution, verify_basis, vertex_link_vector, NormalVector,
    WzCoefficients,
};
use angstruct::polytope::enumerate_vertices;
use angstruct::prescribe::{
    b_system, c_matrix, chi_ak, consistency_terms, d_matrix, decide_prescribed, example_family,
    induced_area_curvature, matrix_identities, phi, phi_inverse, vertex_conditions, AreaCurvature,
    WedgeAssignment,
};
use angstruct::Triangulation;
use common::*;
use num_traits::{Signed, Zero};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn torus_or_klein(tri: &Triangulation) -> bool {
    tri.vertex_classes().iter().all(|v| v.classification.is_torus_or_klein())
}

fn worked_example() -> Outcome {
    let file = TriangulationFile::parse(census::EXAMPLE_4_6).map_err(|e| e.to_string())?;
    let tri = file.build().map_err(|e| e.to_string())?;
    let mut degrees = tri.degrees();
    degrees.sort();
    ensure!(degrees == [1, 1, 4], "degrees {degrees:?}");
    ensure!(
        tri.vertex_count() == 2 && tri.vertex_classes().iter().all(|v| v.classification == LinkKind::Sphere),
        "links are not two spheres"
    );
    let kernel = matching_matrix(&tri).nullspace();
    ensure!(kernel.len() == 4, "kernel dimension {}", kernel.len());
    let s1 = NormalVector::from_i64(&[0, 0, 0, 1, 0, 1, 0]);
    let s2 = NormalVector::from_i64(&[0, 0, 0, 0, 1, 0, 1]);
    let t = NormalVector::from_i64(&[0, 0, 1, 0, 0, 0, 0]);
    let r = NormalVector::from_i64(&[1, 1, 0, 0, 0, 0, 0]);
    let four = [&s1, &s2, &t, &r];
    let mut stacked = kernel.clone();
    stacked.extend(four.iter().map(|v| v.coords.clone()));
    let rank4 = Matrix::from_rows(7, four.iter().map(|v| v.coords.clone()).collect()).rank();
    ensure!(rank4 == 4 && Matrix::from_rows(7, stacked).rank() == 4, "the four vectors do not span the kernel");
    let chi: Vec<Q> = four.iter().map(|v| chi_star(&tri, v)).collect();
    ensure!(chi == [q(2), q(2), q(0), q(3)], "χ* values {chi:?}");

    let [e1, e2, e3] = ["e1", "e2", "e3"].map(|l| file.edge_class(&tri, l).unwrap());
    let basis = verify_basis(&tri).map_err(|e| e.to_string())?;
    let mut g = rng(101);
    for _ in 0..20 {
        let ac = rand_ac(&mut g, &tri);
        let (a, k) = (&ac.area, &ac.kappa);
        let value = |s: &NormalVector| chi_ak(&tri, &basis, &ac, s).unwrap();
        let expected = [
            (&a[0] + &a[2] + q(2) * &k[e1] + &k[e3]) / q(2),
            (&a[1] + &a[3] + q(2) * &k[e2] + &k[e3]) / q(2),
            k[e3].clone() / q(2),
            (q(2) * &k[e1] + q(2) * &k[e2] + &k[e3]) / q(2),
        ];
        for (v, want) in four.iter().zip(&expected) {
            ensure!(value(v) == *want, "χ^ formula fails at {ac:?}");
        }
    }

    let mut tested = 0;
    let mut below: Vec<Q> = (1..16).map(|n| qr(n, 20)).collect();
    below.extend((0..10).map(|_| qr(g.gen_range(1..800), 1000)));
    below.push(qr(799, 1000));
    for a in below.iter().chain(&[qr(4, 5)]) {
        let (ac, _) = induced_area_curvature(&tri, &example_family(&tri, a));
        let cond = vertex_conditions(&tri, &basis, &ac, StructureKind::Strict).map_err(|e| e.to_string())?;
        let at_threshold = *a == qr(4, 5);
        ensure!(cond.condition_holds != at_threshold, "strict condition wrong at a = {a}");
        if at_threshold {
            let v = cond.violation.ok_or("no violation reported at a = 4/5")?;
            ensure!(v.vector == r && v.chi_star == v.chi_ak, "equality is not at R̄: {v:?}");
        }
        tested += 1;
    }
    Ok(format!("degrees, links, kernel, χ*, 20 χ^ checks, threshold over {tested} values of a"))
}

fn solution_space_basis() -> Outcome {
    let all = corpus();
    for (name, tri) in &all {
        let dim = matching_matrix(tri).nullspace().len();
        let expected = tri.tet_count() + tri.edge_count();
        ensure!(dim == expected, "{name}: dim C = {dim}, t + n = {expected}");
        let basis = verify_basis(tri).map_err(|e| format!("{name}: {e}"))?;
        let cols: Vec<Vec<Q>> = basis.vectors().map(|v| v.coords.clone()).collect();
        ensure!(Matrix::from_columns(7 * tri.tet_count(), &cols).rank() == dim, "{name}: W-vectors not independent");
    }
    Ok(format!("{} corpus members", all.len()))
}

fn calibration() -> Outcome {
    let all = corpus();
    let mut links = 0;
    for (name, tri) in &all {
        for i in 0..tri.tet_count() {
            let v = chi_star(tri, &tet_solution(tri, i).map_err(|e| e.to_string())?);
            ensure!(v == q(1), "{name}: χ*(W_σ{i}) = {v}");
        }
        for (j, class) in tri.edge_classes().iter().enumerate() {
            let v = chi_star(tri, &edge_solution(tri, j).map_err(|e| e.to_string())?);
            let want = if class.on_boundary { q(1) } else { q(2) };
            ensure!(v == want, "{name}: χ*(W_e{j}) = {v}");
        }
        for v in 0..tri.vertex_count() {
            let euler = tri.vertex_link_surface(v).euler();
            let value = chi_star(tri, &vertex_link_vector(tri, v));
            ensure!(value == q(euler), "{name}: link {v} has χ* {value}, Euler characteristic {euler}");
            links += 1;
        }
    }
    Ok(format!("{} corpus members, {links} vertex links", all.len()))
}

fn generalised() -> Outcome {
    let all = corpus();
    let mut feasible = 0;
    for (name, tri) in &all {
        let d = decide(tri, StructureKind::Generalised).map_err(|e| format!("{name}: {e}"))?;
        ensure!(d.feasible == torus_or_klein(tri), "{name}: feasible = {}", d.feasible);
        if d.feasible {
            feasible += 1;
            let want = tri.tet_count() + tri.vertex_count();
            ensure!(d.dimension == Some(want), "{name}: dimension {:?}, expected {want}", d.dimension);
        }
    }
    let fig8 = decide(&census::figure_eight(), StructureKind::Strict).map_err(|e| e.to_string())?;
    ensure!(fig8.feasible && fig8.dimension == Some(3), "figure-eight strict: {:?}", fig8.dimension);
    Ok(format!("{} corpus members, {feasible} feasible; figure-eight strict dimension 3", all.len()))
}

fn route_equivalence() -> Outcome {
    let mut checked = 0;
    for (name, tri) in corpus() {
        if !torus_or_klein(&tri) {
            continue;
        }
        checked += 1;
        let vertices = enumerate_vertices(&tri);
        for kind in [StructureKind::Semi, StructureKind::Strict] {
            let criterion = vertices.iter().all(|v| {
                let chi = chi_star(&tri, &v.primitive);
                match kind {
                    StructureKind::Semi => !chi.is_positive(),
                    _ => !v.primitive.has_positive_quad() || chi.is_negative(),
                }
            });
            let d = decide(&tri, kind).map_err(|e| format!("{name}: {e}"))?;
            ensure!(d.feasible == criterion, "{name} {kind}: LP {} vs vertices {criterion}", d.feasible);
        }
        let vertex_max = vertices.iter().map(|v| v.chi_star(&tri)).max();
        let lp_max = max_chi_star(&tri).map(|(m, _)| m);
        ensure!(vertex_max == lp_max, "{name}: LP max {lp_max:?} vs vertex max {vertex_max:?}");
    }
    ensure!(checked > 0, "no torus or Klein members");
    Ok(format!("{checked} torus/Klein corpus members, semi and strict, zero disagreements"))
}

fn vertex_oracle() -> Outcome {
    let mut checked = 0;
    let mut members = corpus();
    members.extend(fixtures());
    for (name, tri) in members.into_iter().filter(|(_, t)| t.tet_count() <= 2) {
        let dd: Vec<NormalVector> = enumerate_vertices(&tri).into_iter().map(|v| v.primitive).collect();
        ensure!(dd == brute_force_vertices(&tri), "{name}: double description differs from support enumeration");
        checked += 1;
    }
    Ok(format!("{checked} triangulations with 7t ≤ 14"))
}

fn matrix_identity() -> Outcome {
    let mut g = rng(107);
    let all = corpus();
    for (name, tri) in &all {
        let t = tri.tet_count();
        let (a, _) = angle_matrix(tri);
        let (b, _) = b_system(tri, &AreaCurvature::zero(tri));
        ensure!(d_matrix(t).mul(&b.transpose()) == a.transpose().mul(&c_matrix(tri)), "{name}: D Bᵀ ≠ Aᵀ C");
        let r = matrix_identities(tri).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.ker_bt_dim == r.ker_at_dim, "{name}: kernel dimensions differ");
        let ker_at = a.transpose().nullspace();
        let bt = b.transpose();
        for _ in 0..100 {
            let mut flat = vec![Q::zero(); t + tri.edge_count()];
            for v in &ker_at {
                let c = rand_q(&mut g);
                flat.iter_mut().zip(v).for_each(|(x, y)| *x += &c * y);
            }
            let wz = WzCoefficients::from_flat(t, &flat);
            let hz = phi_inverse(tri, &wz);
            ensure!(bt.mul_vec(&hz).iter().all(Zero::is_zero), "{name}: inverse leaves ker Bᵀ");
            ensure!(phi(t, &hz) == wz, "{name}: φ ∘ inverse ≠ id");
        }
    }
    Ok(format!("{} corpus members, 100 kernel elements each", all.len()))
}

fn prescribed_generalised() -> Outcome {
    let mut g = rng(108);
    let mut runs = 0;
    for (name, tri) in fixtures() {
        if tri.has_inverted_edge() {
            continue;
        }
        let basis = verify_basis(&tri).map_err(|e| e.to_string())?;
        let want = 2 * tri.tet_count() as i64 - tri.edge_count() as i64 + tri.vertex_count() as i64;
        for i in 0..50 {
            let ac = if i % 2 == 0 {
                rand_ac(&mut g, &tri)
            } else {
                let wa = WedgeAssignment {
                    values: rand_vec(&mut g, 6 * tri.tet_count()),
                };
                induced_area_curvature(&tri, &wa).0
            };
            let d = decide_prescribed(&tri, &basis, &ac, StructureKind::Generalised).map_err(|e| format!("{name}: {e}"))?;
            let criterion = (0..tri.vertex_count()).all(|v| {
                chi_ak(&tri, &basis, &ac, &vertex_link_vector(&tri, v)).unwrap() == q(tri.vertex_classes()[v].link_euler)
            });
            ensure!(d.feasible == criterion, "{name}: feasible {} vs criterion {criterion}", d.feasible);
            if d.feasible {
                let dim = d.dimension.ok_or("no dimension")? as i64;
                ensure!(dim == want, "{name}: dimension {dim}, expected {want}");
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} prescriptions"))
}

fn gauss_bonnet() -> Outcome {
    let mut g = rng(109);
    let mut surfaces = 0;
    for (name, tri) in fixtures() {
        for v in 0..tri.vertex_count() {
            let s = tri.vertex_link_surface(v);
            surfaces += 1;
            for _ in 0..100 {
                let angles = CombAngleStructure {
                    angles: rand_vec(&mut g, s.corners().len()),
                };
                let r = s.gauss_bonnet_check(&angles).map_err(|e| format!("{name}: {e}"))?;
                ensure!(r.total_area + r.total_curvature == q(2 * s.euler()), "{name} link {v}: identity fails");
            }
            for consistent in [true, false] {
                for _ in 0..100 {
                    let mut curvature = rand_vec(&mut g, s.vertex_count());
                    let area = rand_vec(&mut g, s.cells().len());
                    let defect = area.iter().chain(&curvature).cloned().sum::<Q>() - q(2 * s.euler());
                    let k = g.gen_range(0..s.vertex_count());
                    if consistent {
                        curvature[k] -= &defect;
                    } else if defect.is_zero() {
                        curvature[k] += q(1);
                    }
                    let result = s.realize(&curvature, &area).map_err(|e| format!("{name}: {e}"))?;
                    match result {
                        Realization::Realized(a) => {
                            ensure!(consistent, "{name} link {v}: realized a prescription with nonzero defect");
                            for (c, want) in area.iter().enumerate() {
                                ensure!(s.cell_area(c, &a) == *want, "{name} link {v}: wrong cell area");
                            }
                            for (x, want) in curvature.iter().enumerate() {
                                ensure!(s.curvature(&a, x) == *want, "{name} link {v}: wrong curvature");
                            }
                        }
                        Realization::Refused { .. } => {
                            ensure!(!consistent, "{name} link {v}: refused a consistent prescription")
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{surfaces} link surfaces, 100 assignments and 200 prescriptions each"))
}

fn consistency() -> Outcome {
    let mut g = rng(110);
    let mut count = 0;
    for (name, tri) in fixtures() {
        let basis = verify_basis(&tri).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let ac = rand_ac(&mut g, &tri);
            for _ in 0..100 {
                let hz = rand_vec(&mut g, 4 * tri.tet_count() + tri.edge_count());
                let terms = consistency_terms(&tri, &basis, &ac, &hz);
                ensure!(terms.holds(), "{name}: {terms:?}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} (h, z) evaluations"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("worked example", worked_example),
        ("solution space basis", solution_space_basis),
        ("χ* calibration", calibration),
        ("generalised angle structures", generalised),
        ("LP and vertex criteria agree", route_equivalence),
        ("vertex enumeration oracle", vertex_oracle),
        ("matrix identity and inverse", matrix_identity),
        ("prescribed generalised structures", prescribed_generalised),
        ("Gauss-Bonnet and realization", gauss_bonnet),
        ("consistency identity", consistency),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
