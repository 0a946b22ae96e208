#![allow(dead_code)]

use angstruct::census;
use angstruct::complex::{Gluing, Perm4, Triangulation};
use angstruct::linalg::Matrix;
use angstruct::lp::{LinearProgram, LpOutcome, Relation};
use angstruct::normal::{chi_star_weights, matching_matrix, NormalVector, SolutionBasis, WzCoefficients};
use angstruct::prescribe::AreaCurvature;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational with denominator at most 6.
pub fn rand_q(rng: &mut impl Rng) -> Q {
    qr(rng.gen_range(-12..=12), rng.gen_range(1..=6))
}

pub fn rand_vec(rng: &mut impl Rng, len: usize) -> Vec<Q> {
    (0..len).map(|_| rand_q(rng)).collect()
}

pub fn rand_ac(rng: &mut impl Rng, tri: &Triangulation) -> AreaCurvature {
    AreaCurvature {
        area: rand_vec(rng, 4 * tri.tet_count()),
        kappa: rand_vec(rng, tri.edge_count()),
    }
}

pub fn rand_kernel(rng: &mut impl Rng, basis: &SolutionBasis) -> NormalVector {
    let wz = WzCoefficients {
        w: rand_vec(rng, basis.tet_count()),
        z: rand_vec(rng, basis.edge_count()),
    };
    basis.expand(&wz)
}

/// One tetrahedron with faces 0 and 1 glued and the rest on the boundary.
pub fn half_glued() -> Triangulation {
    Perm4::all()
        .into_iter()
        .filter(|p| p.apply(0) == 1)
        .map(|p| Triangulation::build(1, vec![Gluing::new(0, 0, 0, 1, p)]).unwrap())
        .find(|t| !t.has_inverted_edge())
        .expect("some gluing has no inverted edge")
}

/// Shipped fixtures plus an unglued and a partially glued tetrahedron.
pub fn fixtures() -> Vec<(String, Triangulation)> {
    let mut out: Vec<(String, Triangulation)> = census::shipped_fixtures()
        .into_iter()
        .map(|e| (e.name, e.tri))
        .collect();
    out.push(("unglued".into(), census::unglued_tetrahedron()));
    out.push(("half_glued".into(), half_glued()));
    out
}

pub fn corpus() -> Vec<(String, Triangulation)> {
    census::corpus().into_iter().map(|e| (e.name, e.tri)).collect()
}

/// Random triangulation with up to `max_tets` tetrahedra: faces are
/// shuffled and paired off, some left unglued.
pub fn random_triangulation(rng: &mut impl Rng, max_tets: usize) -> Triangulation {
    let t = rng.gen_range(1..=max_tets);
    let mut faces: Vec<(usize, usize)> = (0..t).flat_map(|i| (0..4).map(move |f| (i, f))).collect();
    for i in (1..faces.len()).rev() {
        faces.swap(i, rng.gen_range(0..=i));
    }
    let perms = Perm4::all();
    let mut gluings = Vec::new();
    while faces.len() >= 2 {
        let (a, b) = (faces.pop().unwrap(), faces.pop().unwrap());
        if rng.gen_bool(0.15) {
            continue;
        }
        let choices: Vec<Perm4> = perms.iter().copied().filter(|p| p.apply(a.1) == b.1).collect();
        let p = choices[rng.gen_range(0..choices.len())];
        gluings.push(Gluing::new(a.0, a.1, b.0, b.1, p));
    }
    Triangulation::build(t, gluings).expect("random gluing is well formed")
}

/// Extreme rays of the nonnegative kernel cone by support enumeration:
/// a support `S` gives a ray when the kernel restricted to `S` is a line
/// spanned by a vector with no zero entry on `S` and one sign.
pub fn brute_force_vertices(tri: &Triangulation) -> Vec<NormalVector> {
    let m = matching_matrix(tri);
    let len = m.cols();
    assert!(len <= 14, "support enumeration is exponential");
    let ints: Vec<Vec<i64>> = m
        .row_vecs()
        .iter()
        .map(|r| r.iter().map(|x| x.to_integer().try_into().unwrap()).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << len) {
        let support: Vec<usize> = (0..len).filter(|i| mask & (1 << i) != 0).collect();
        if support.len() != int_rank(&ints, &support) + 1 {
            continue;
        }
        let cols: Vec<Vec<Q>> = support.iter().map(|&j| m.column(j)).collect();
        let sub = Matrix::from_columns(m.rows(), &cols);
        let ns = sub.nullspace();
        if ns.len() != 1 {
            continue;
        }
        let v = &ns[0];
        if v.iter().any(Zero::is_zero) {
            continue;
        }
        let sign_pos = v[0].is_positive();
        if v.iter().any(|x| x.is_positive() != sign_pos) {
            continue;
        }
        let mut full = vec![Q::zero(); len];
        for (k, &j) in support.iter().enumerate() {
            full[j] = if sign_pos { v[k].clone() } else { -v[k].clone() };
        }
        out.push(NormalVector::new(primitive(&full)));
    }
    out.sort();
    out
}

/// Rank of the integer matrix restricted to the given columns, by
/// fraction-free elimination.
fn int_rank(rows: &[Vec<i64>], cols: &[usize]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| cols.iter().map(|&j| r[j] as i128).collect()).collect();
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let (f, g) = (a[rank][c], a[r][c]);
                let pivot = a[rank].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot) {
                    *x = *x * f - p * g;
                }
                let d = a[r].iter().fold(0i128, |d, &x| num_integer::gcd(d, x));
                if d > 1 {
                    a[r].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Scales to coprime integers.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// `max (χ* − χ^(A,κ))(s)` over kernel vectors with nonnegative quads
/// summing to 1 (`Eq`) or at most 1 (`Le`), parametrised by basis
/// coefficients `(w, z)`.
pub fn quad_cone_max(tri: &Triangulation, basis: &SolutionBasis, ac: &AreaCurvature, total: Relation) -> LpOutcome {
    let (t, n) = (tri.tet_count(), tri.edge_count());
    let vectors: Vec<&NormalVector> = basis.vectors().collect();
    let weights = chi_star_weights(tri);
    let mut lp = LinearProgram::new(t + n);
    lp.set_all_free();
    for m in 0..3 * t {
        let row = vectors.iter().map(|v| v.coords[m].clone()).collect();
        lp.constrain(row, Relation::Ge, Q::zero());
    }
    let sum = vectors.iter().map(|v| v.quads().iter().fold(Q::zero(), |a, b| a + b)).collect();
    lp.constrain(sum, total, Q::one());
    let objective = vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let chi: Q = v.coords.iter().zip(&weights).map(|(a, b)| a * b).sum();
            let area: Q = v.triangles().iter().zip(&ac.area).map(|(a, b)| a * b).sum();
            let kappa = if j >= t { ac.kappa[j - t].clone() } else { Q::zero() };
            chi - area / q(2) - kappa
        })
        .collect();
    lp.maximize(objective);
    lp.solve()
}

/// The same triangulation with tetrahedra renumbered by `tets` and the
/// vertices of tetrahedron `i` relabelled by `verts[i]`.
pub fn relabel(tri: &Triangulation, tets: &[usize], verts: &[Perm4]) -> Triangulation {
    let gluings = tri
        .gluings()
        .iter()
        .map(|g| {
            let (pa, pb) = (verts[g.src_tet], verts[g.dst_tet]);
            Gluing::new(
                tets[g.src_tet],
                pa.apply(g.src_face),
                tets[g.dst_tet],
                pb.apply(g.dst_face),
                pb.compose(g.vertex_map).compose(pa.inverse()),
            )
        })
        .collect();
    Triangulation::build(tri.tet_count(), gluings).expect("relabelling preserves validity")
}

/// Random tetrahedron renumbering and vertex relabelling.
pub fn random_relabelling(rng: &mut impl Rng, t: usize) -> (Vec<usize>, Vec<Perm4>) {
    let mut tets: Vec<usize> = (0..t).collect();
    for i in (1..t).rev() {
        tets.swap(i, rng.gen_range(0..=i));
    }
    let perms = Perm4::all();
    let verts = (0..t).map(|_| perms[rng.gen_range(0..24)]).collect();
    (tets, verts)
}
