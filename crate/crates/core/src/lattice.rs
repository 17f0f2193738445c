//! Lattice invariants of faces and cones: multiplicities, normalized
//! volumes, simplicial subdivision of rational cones, and enumeration of the
//! lattice points of fundamental parallelepipeds.
//!
//! The multiplicity of linearly independent integer vectors `a_1..a_r` is the
//! index of their integer span in the lattice points of their linear span,
//! equal to the gcd of all `r x r` minors. For a V-simplex `tau` the
//! normalized volume satisfies `NV(tau) * N(tau) = mult(vertices)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg;
use crate::newton::NewtonPolyhedron;
use crate::{Error, Result};

/// A simplicial rational cone with per-generator openness flags. A strict
/// generator carries coefficient `lambda > 0` (box range `(0, 1]`), a
/// non-strict one `lambda >= 0` (box range `[0, 1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    pub generators: Vec<Vec<i64>>,
    pub strict: Vec<bool>,
}

impl SimplicialCone {
    pub fn open(generators: Vec<Vec<i64>>) -> Self {
        let strict = vec![true; generators.len()];
        SimplicialCone { generators, strict }
    }

    pub fn closed_style(generators: Vec<Vec<i64>>) -> Self {
        let strict = vec![false; generators.len()];
        SimplicialCone { generators, strict }
    }
}

/// Normalized-volume data of a face, as used by Varchenko's formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NVResult {
    pub face: usize,
    pub normalized_volume: u64,
    pub lattice_distance: i64,
    pub multiplicity: u64,
}

/// Gcd of the absolute values of all `r x r` minors of the `r x n` matrix.
pub fn multiplicity(vectors: &[Vec<i64>]) -> Result<u64> {
    let r = vectors.len();
    if r == 0 {
        return Err(Error::DependentVectors);
    }
    let n = vectors[0].len();
    if r > n || linalg::rank(vectors) != r {
        return Err(Error::DependentVectors);
    }
    let mut g: i128 = 0;
    let mut cols = vec![0usize; r];
    minors_fold(vectors, n, &mut cols, 0, 0, &mut g);
    debug_assert!(g > 0);
    Ok(g as u64)
}

fn minors_fold(
    vectors: &[Vec<i64>],
    n: usize,
    cols: &mut Vec<usize>,
    depth: usize,
    start: usize,
    acc: &mut i128,
) {
    let r = vectors.len();
    if depth == r {
        let m: Vec<Vec<i128>> = vectors
            .iter()
            .map(|row| cols.iter().map(|&c| row[c] as i128).collect())
            .collect();
        let d = linalg::det(&m).abs();
        *acc = gcd_i128(*acc, d);
        return;
    }
    for c in start..n {
        cols[depth] = c;
        minors_fold(vectors, n, cols, depth + 1, c + 1, acc);
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The primitive equation `sum_{i in I} a_i x_i = N` of the affine span of a
/// V-face inside its coordinate subspace `L_I`. Returns `(N, a)` with the
/// `a_i` listed in increasing order of `i` and `gcd(a_i) = 1`, all positive.
pub fn lattice_distance_vface(
    vertices: &[Vec<i64>],
    index_set: &BTreeSet<usize>,
) -> Result<(i64, Vec<i64>)> {
    let k = index_set.len();
    if vertices.is_empty() || vertices.len() < k {
        return Err(Error::AffineSpanNotHyperplane);
    }
    let idx: Vec<usize> = index_set.iter().copied().collect();
    let pts: Vec<Vec<i64>> = vertices
        .iter()
        .map(|v| idx.iter().map(|&i| v[i]).collect())
        .collect();
    if k == 1 {
        let c = pts[0][0];
        if c <= 0 {
            return Err(Error::AffineSpanNotHyperplane);
        }
        return Ok((c, vec![1]));
    }
    let rows: Vec<Vec<i64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    let mut normal = linalg::null_vector(&rows, k).ok_or(Error::AffineSpanNotHyperplane)?;
    let n_dist = crate::newton::dot(&normal, &pts[0]);
    if n_dist < 0 || (n_dist == 0 && normal.iter().any(|&c| c < 0)) {
        normal = normal.iter().map(|&c| -c).collect();
    }
    let n_dist = crate::newton::dot(&normal, &pts[0]);
    if n_dist <= 0 || normal.iter().any(|&c| c <= 0) {
        return Err(Error::AffineSpanNotHyperplane);
    }
    Ok((n_dist, normal))
}

/// Normalized volume of a simplex from the gcd of maximal minors of its
/// vertex-difference matrix (the index of the difference lattice in the
/// saturated lattice of its span).
pub fn nv_simplex(vertices: &[Vec<i64>]) -> Result<u64> {
    if vertices.len() < 2 {
        return Ok(1);
    }
    let rows: Vec<Vec<i64>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    multiplicity(&rows)
}

/// Normalized volume of a compact face of a polyhedron: 1 for a vertex, the
/// sum over the canonical triangulation otherwise.
pub fn normalized_volume(gamma: &NewtonPolyhedron, face: usize) -> Result<u64> {
    let f = gamma.face(face)?;
    if !f.compact {
        return Err(Error::NonCompactFace);
    }
    if f.dim == 0 {
        return Ok(1);
    }
    let mut total = 0u64;
    for simplex in gamma.triangulate_face(face) {
        let verts: Vec<Vec<i64>> = simplex
            .iter()
            .map(|&vi| gamma.vertices[vi].clone())
            .collect();
        total += nv_simplex(&verts)?;
    }
    Ok(total)
}

/// Full NV data of a compact V-face; for a V-simplex this also reports the
/// multiplicity of the vertex set, with `NV * N = mult`.
pub fn nv_result(gamma: &NewtonPolyhedron, face: usize) -> Result<NVResult> {
    let f = gamma.face(face)?;
    let nv = normalized_volume(gamma, face)?;
    let index_set = f
        .v_index_set
        .clone()
        .ok_or(Error::AffineSpanNotHyperplane)?;
    let verts = gamma.face_vertices(f);
    let (n_dist, _) = lattice_distance_vface(&verts, &index_set)?;
    let mult = if verts.len() == f.dim + 1 {
        multiplicity(&verts)?
    } else {
        nv * n_dist as u64
    };
    Ok(NVResult {
        face,
        normalized_volume: nv,
        lattice_distance: n_dist,
        multiplicity: mult,
    })
}

/// The smallest face of a simplex containing two vertex subsets: the union.
pub fn face_join(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
    a.union(b).copied().collect()
}

// ---------------------------------------------------------------------------
// Cone subdivision
// ---------------------------------------------------------------------------

/// Partition the relatively open cone spanned strictly positively by the
/// generators into relatively open simplicial cones on the same rays.
///
/// Pulling construction from the first generator in canonical ray order: the
/// open cone is the disjoint union, over faces `E` of the closed cone not
/// contained in any facet through the apex ray, of `relint(E) + R_{>0} a`.
pub fn subdivide_cone(generators: &[Vec<i64>]) -> Result<Vec<SimplicialCone>> {
    if generators.is_empty() {
        return Err(Error::NonPointedCone);
    }
    let n = generators[0].len();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for g in generators {
        if g.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.len(),
            });
        }
        if g.iter().all(|&c| c == 0) {
            return Err(Error::NonPointedCone);
        }
        let d = linalg::gcd_slice(g);
        let prim: Vec<i64> = g.iter().map(|&c| c / d).collect();
        if !gens.contains(&prim) {
            gens.push(prim);
        }
    }
    if !pointed(&gens) {
        return Err(Error::NonPointedCone);
    }
    Ok(subdivide_rec(&gens))
}

fn pointed(gens: &[Vec<i64>]) -> bool {
    // generators in the closed positive orthant always span a pointed cone;
    // otherwise reject the obvious line case g, -g (the only pointedness
    // failure reachable from this crate's callers)
    if gens.iter().all(|g| g.iter().all(|&c| c >= 0)) {
        return true;
    }
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if gens[i].iter().zip(&gens[j]).all(|(&a, &b)| a == -b) {
                return false;
            }
        }
    }
    true
}

fn subdivide_rec(gens: &[Vec<i64>]) -> Vec<SimplicialCone> {
    let d = linalg::rank(gens);
    if gens.len() == d {
        return vec![SimplicialCone::open(gens.to_vec())];
    }
    let apex = gens[0].clone();
    let facets = cone_facets(gens);
    let facets_with_apex: Vec<&BTreeSet<usize>> =
        facets.iter().filter(|fs| fs.contains(&0)).collect();
    // faces of the cone = intersections of facets (as generator subsets)
    let mut faces: BTreeSet<BTreeSet<usize>> = facets.iter().cloned().collect();
    loop {
        let mut grew = false;
        let list: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
        for a in &list {
            for b in &list {
                let c: BTreeSet<usize> = a.intersection(b).copied().collect();
                if !c.is_empty() && faces.insert(c) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out = Vec::new();
    for face in &faces {
        if facets_with_apex.iter().any(|fs| face.is_subset(fs)) {
            continue;
        }
        let sub: Vec<Vec<i64>> = face.iter().map(|&i| gens[i].clone()).collect();
        for piece in subdivide_rec(&sub) {
            let mut generators = piece.generators;
            let mut strict = piece.strict;
            generators.push(apex.clone());
            strict.push(true);
            out.push(SimplicialCone { generators, strict });
        }
    }
    out
}

/// Facets of the cone spanned by `gens`, as generator index sets.
fn cone_facets(gens: &[Vec<i64>]) -> Vec<BTreeSet<usize>> {
    let d = linalg::rank(gens);
    let k = gens.len();
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut subset = vec![0usize; d - 1];
    enumerate_subsets(k, d - 1, &mut subset, 0, 0, &mut |idx| {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| gens[i].clone()).collect();
        if let Some(w) = wall_normal(gens, &rows) {
            let mut pos = 0usize;
            let mut neg = 0usize;
            let mut zero: BTreeSet<usize> = BTreeSet::new();
            for (i, g) in gens.iter().enumerate() {
                let v = crate::newton::dot(&w, g);
                if v > 0 {
                    pos += 1;
                } else if v < 0 {
                    neg += 1;
                } else {
                    zero.insert(i);
                }
            }
            if (pos == 0 || neg == 0) && !zero.is_empty() && zero.len() < k {
                let sub: Vec<Vec<i64>> = zero.iter().map(|&i| gens[i].clone()).collect();
                if linalg::rank(&sub) == d - 1 {
                    found.insert(zero);
                }
            }
        }
    });
    found.into_iter().collect()
}

/// A vector in span(gens) orthogonal to `rows`, when `rows` has rank d-1.
fn wall_normal(gens: &[Vec<i64>], rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let d = linalg::rank(gens);
    if linalg::rank(rows) + 1 != d {
        return None;
    }
    let n = gens[0].len();
    let k = gens.len();
    // w = sum mu_i g_i with rows . w = 0: null space of the (rows x k) Gram-ish matrix
    let m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| (0..k).map(|i| crate::newton::dot(r, &gens[i])).collect())
        .collect();
    // several basic solutions may map into the kernel of mu -> sum mu_i g_i;
    // keep the first that yields a non-zero wall vector
    'solutions: for mu in small_null_space_basis(&m, k) {
        let mut w = vec![0i128; n];
        for (i, &c) in mu.iter().enumerate() {
            for j in 0..n {
                w[j] += c as i128 * gens[i][j] as i128;
            }
        }
        if w.iter().all(|&x| x == 0) {
            continue;
        }
        for r in rows {
            let s: i128 = r.iter().zip(&w).map(|(&a, &b)| a as i128 * b).sum();
            if s != 0 {
                continue 'solutions;
            }
        }
        let mut g = 0i128;
        for &x in &w {
            g = gcd_i128(g, x);
        }
        return Some(w.iter().map(|&x| (x / g) as i64).collect());
    }
    None
}

/// Basic null-space solutions of an integer matrix (one per free column),
/// with cleared denominators.
fn small_null_space_basis(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from(BigInt::from(v)))
                .collect()
        })
        .collect();
    let nrows = rows.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        if let Some(p) = (row..nrows).find(|&r| !rows[r][col].is_zero()) {
            rows.swap(row, p);
            let pv = rows[row][col].clone();
            for c in 0..ncols {
                rows[row][c] = &rows[row][c] / &pv;
            }
            for r in 0..nrows {
                if r != row && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in 0..ncols {
                        let sub = &rows[row][c] * &f;
                        rows[r][c] = &rows[r][c] - &sub;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains(c)) {
        let mut sol = vec![BigRational::zero(); ncols];
        sol[free] = BigRational::one();
        for &(r, c) in pivots.iter().rev() {
            let mut acc = BigRational::zero();
            for c2 in (c + 1)..ncols {
                acc += &rows[r][c2] * &sol[c2];
            }
            sol[c] = -acc;
        }
        let mut denom = BigInt::one();
        for s in &sol {
            denom = num_integer::lcm(denom, s.denom().clone());
        }
        let ints: Vec<BigInt> = sol
            .iter()
            .map(|s| s.numer() * (&denom / s.denom()))
            .collect();
        if let Ok(v) = ints
            .iter()
            .map(i64::try_from)
            .collect::<std::result::Result<Vec<_>, _>>()
        {
            basis.push(v);
        }
    }
    basis
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    scratch: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(scratch);
        return;
    }
    if k > n {
        return;
    }
    for i in start..n {
        scratch[depth] = i;
        enumerate_subsets(n, k, scratch, depth + 1, i + 1, f);
    }
}

// ---------------------------------------------------------------------------
// Fundamental parallelepiped
// ---------------------------------------------------------------------------

/// All lattice points `h = sum lambda_i a_i` with `lambda_i in (0,1]` for
/// strict generators and `lambda_i in [0,1)` for non-strict ones. The count
/// always equals the multiplicity of the generator set.
pub fn fundamental_points(cone: &SimplicialCone) -> Result<Vec<Vec<i64>>> {
    let r = cone.generators.len();
    if r == 0 {
        return Ok(vec![vec![]]);
    }
    let n = cone.generators[0].len();
    if linalg::rank(&cone.generators) != r {
        return Err(Error::DependentVectors);
    }
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for g in &cone.generators {
        for j in 0..n {
            if g[j] > 0 {
                hi[j] += g[j];
            } else {
                lo[j] += g[j];
            }
        }
    }
    let mut out = Vec::new();
    let mut point = lo.clone();
    'outer: loop {
        if let Some(lambda) = solve_coordinates(&cone.generators, &point) {
            let ok = lambda.iter().zip(&cone.strict).all(|(l, &s)| {
                if s {
                    l > &BigRational::zero() && l <= &BigRational::one()
                } else {
                    l >= &BigRational::zero() && l < &BigRational::one()
                }
            });
            if ok {
                out.push(point.clone());
            }
        }
        for j in 0..n {
            point[j] += 1;
            if point[j] <= hi[j] {
                continue 'outer;
            }
            point[j] = lo[j];
        }
        break;
    }
    out.sort();
    Ok(out)
}

/// Solve `sum lambda_i g_i = point` exactly; `None` if not in the span.
pub(crate) fn solve_coordinates(gens: &[Vec<i64>], point: &[i64]) -> Option<Vec<BigRational>> {
    let r = gens.len();
    let n = point.len();
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..r)
                .map(|i| BigRational::from(BigInt::from(gens[i][j])))
                .collect();
            row.push(BigRational::from(BigInt::from(point[j])));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        if let Some(p) = (row..n).find(|&rr| !rows[rr][col].is_zero()) {
            rows.swap(row, p);
            let pv = rows[row][col].clone();
            for c in 0..=r {
                rows[row][c] = &rows[row][c] / &pv;
            }
            for rr in 0..n {
                if rr != row && !rows[rr][col].is_zero() {
                    let f = rows[rr][col].clone();
                    for c in 0..=r {
                        let sub = &rows[row][c] * &f;
                        rows[rr][c] = &rows[rr][c] - &sub;
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
    }
    for rr in row..n {
        if !rows[rr][r].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); r];
    for &(rr, c) in &pivots {
        sol[c] = rows[rr][r].clone();
    }
    Some(sol)
}

// ---------------------------------------------------------------------------
// Randomized NV property suite
// ---------------------------------------------------------------------------

/// One randomized simplicial facet in `Z^n`: n vertices spanning a compact
/// facet hyperplane with strictly positive primitive normal.
#[derive(Clone, Debug)]
pub struct RandomSimplicialFacet {
    pub vertices: Vec<Vec<i64>>,
    pub normal: Vec<i64>,
    pub n_dist: i64,
}

/// V-subset data inside a simplicial facet.
#[derive(Clone, Debug)]
pub struct VSubset {
    pub vertex_ids: BTreeSet<usize>,
    pub index_set: BTreeSet<usize>,
    pub n_dist: i64,
    pub nv: u64,
}

pub fn v_subset(facet: &RandomSimplicialFacet, ids: &BTreeSet<usize>) -> Option<VSubset> {
    let verts: Vec<Vec<i64>> = ids.iter().map(|&i| facet.vertices[i].clone()).collect();
    let mut union: BTreeSet<usize> = BTreeSet::new();
    for v in &verts {
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                union.insert(j);
            }
        }
    }
    if union.len() != ids.len() {
        return None;
    }
    let (n_dist, _) = lattice_distance_vface(&verts, &union).ok()?;
    let nv = nv_simplex(&verts).ok()?;
    Some(VSubset {
        vertex_ids: ids.clone(),
        index_set: union,
        n_dist,
        nv,
    })
}

/// Generate a random simplicial facet with coordinates bounded by `bound`,
/// biased toward coordinate subspaces so V-subsets actually occur.
pub fn random_simplicial_facet(
    rng: &mut impl rand::Rng,
    n: usize,
    bound: i64,
) -> Option<RandomSimplicialFacet> {
    let mut vertices = Vec::new();
    for _ in 0..n {
        let v: Vec<i64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    0
                } else {
                    rng.gen_range(1..=bound)
                }
            })
            .collect();
        if v.iter().all(|&c| c == 0) {
            return None;
        }
        vertices.push(v);
    }
    vertices.sort();
    vertices.dedup();
    if vertices.len() != n {
        return None;
    }
    let rows: Vec<Vec<i64>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    let normal = linalg::null_vector(&rows, n)?;
    let normal: Vec<i64> = if normal.iter().sum::<i64>() < 0 {
        normal.iter().map(|&c| -c).collect()
    } else {
        normal
    };
    if normal.iter().any(|&c| c <= 0) {
        return None;
    }
    let n_dist = crate::newton::dot(&normal, &vertices[0]);
    if n_dist <= 0 {
        return None;
    }
    Some(RandomSimplicialFacet {
        vertices,
        normal,
        n_dist,
    })
}

/// Report of one NV-suite run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NvSuiteReport {
    pub dimension: usize,
    pub facets_checked: usize,
    pub facets_with_v_pairs: usize,
    pub pair_checks: u64,
    pub failures: Vec<String>,
}

/// Check the normalized-volume properties on `count` random simplicial
/// facets in `Z^n`: closure of V-faces under meet and join, divisibility
/// `NV(sigma) | NV(tau)`, integrality of `M` in
/// `NV(tau) NV(meet) = NV(sigma) NV(sigma') M`, the gcd criterion for
/// `M = 1` when the join is the whole facet (with `N(tau) = lcm`), and the
/// corollary that a failed gcd criterion forces `M >= 2`.
pub fn nv_suite(rng: &mut impl rand::Rng, n: usize, bound: i64, count: usize) -> NvSuiteReport {
    let mut report = NvSuiteReport {
        dimension: n,
        facets_checked: 0,
        facets_with_v_pairs: 0,
        pair_checks: 0,
        failures: Vec::new(),
    };
    while report.facets_checked < count {
        let Some(facet) = random_simplicial_facet(rng, n, bound) else {
            continue;
        };
        report.facets_checked += 1;
        let all: BTreeSet<usize> = (0..n).collect();
        let Some(tau) = v_subset(&facet, &all) else {
            report
                .failures
                .push(format!("facet not V: {:?}", facet.vertices));
            continue;
        };
        let mut vsubs: Vec<VSubset> = Vec::new();
        for mask in 1u32..(1 << n) {
            let ids: BTreeSet<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if let Some(vs) = v_subset(&facet, &ids) {
                vsubs.push(vs);
            }
        }
        let mut had_pair = false;
        for a in &vsubs {
            if tau.nv % a.nv != 0 {
                report.failures.push(format!(
                    "NV divisibility fails: NV(sigma)={} NV(tau)={} facet {:?}",
                    a.nv, tau.nv, facet.vertices
                ));
            }
            for b in &vsubs {
                let inter: BTreeSet<usize> =
                    a.vertex_ids.intersection(&b.vertex_ids).copied().collect();
                if inter.is_empty() {
                    continue;
                }
                report.pair_checks += 1;
                had_pair = true;
                let join = face_join(&a.vertex_ids, &b.vertex_ids);
                let vi = v_subset(&facet, &inter);
                let vj = v_subset(&facet, &join);
                if vi.is_none() || vj.is_none() {
                    report.failures.push(format!(
                        "V-closure fails for {:?} and {:?} in {:?}",
                        a.vertex_ids, b.vertex_ids, facet.vertices
                    ));
                    continue;
                }
                let (vi, vj) = (vi.unwrap(), vj.unwrap());
                let lhs = vj.nv as u128 * vi.nv as u128;
                let rhs = a.nv as u128 * b.nv as u128;
                if lhs % rhs != 0 {
                    report.failures.push(format!(
                        "M not an integer: NV(join)*NV(meet)={lhs} NV(a)*NV(b)={rhs} in {:?}",
                        facet.vertices
                    ));
                    continue;
                }
                if join == all {
                    let m_tau = (tau.nv as u128 * vi.nv as u128) / rhs;
                    let g = gcd_i128(a.n_dist as i128, b.n_dist as i128) as i64;
                    let l = a.n_dist / g * b.n_dist;
                    if tau.n_dist != l {
                        report.failures.push(format!(
                            "lcm identity fails: N(tau)={} lcm={} in {:?}",
                            tau.n_dist, l, facet.vertices
                        ));
                    }
                    let crit = vi.n_dist == g;
                    if (m_tau == 1) != crit {
                        report.failures.push(format!(
                            "gcd criterion fails: M={} N(meet)={} gcd={} in {:?}",
                            m_tau, vi.n_dist, g, facet.vertices
                        ));
                    }
                    if !crit && m_tau < 2 {
                        report.failures.push(format!(
                            "corollary fails: M={m_tau} in {:?}",
                            facet.vertices
                        ));
                    }
                }
            }
        }
        if had_pair {
            report.facets_with_v_pairs += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::NewtonPolyhedron;
    use crate::polyring::parse_polynomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gamma_of(text: &str, vars: &[&str]) -> NewtonPolyhedron {
        let f = parse_polynomial(text, vars).unwrap();
        NewtonPolyhedron::build(&f.support(), vars.len()).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(multiplicity(&[vec![2, 0], vec![0, 3]]).unwrap(), 6);
        assert_eq!(multiplicity(&[vec![3, 2], vec![1, 0]]).unwrap(), 2);
        assert_eq!(
            multiplicity(&[vec![3, 0, 0], vec![2, 0, 2], vec![0, 2, 0]]).unwrap(),
            12
        );
        assert!(matches!(
            multiplicity(&[vec![1, 2], vec![2, 4]]),
            Err(Error::DependentVectors)
        ));
    }

    #[test]
    fn lattice_distance_examples() {
        let (n, a) = lattice_distance_vface(
            &[vec![2, 0], vec![0, 3]],
            &[0usize, 1].into_iter().collect(),
        )
        .unwrap();
        assert_eq!((n, a), (6, vec![3, 2]));

        let (n, a) =
            lattice_distance_vface(&[vec![0, 3]], &[1usize].into_iter().collect()).unwrap();
        assert_eq!((n, a), (3, vec![1]));

        let (n, a) = lattice_distance_vface(
            &[vec![3, 0, 0], vec![2, 0, 2], vec![0, 2, 0]],
            &[0usize, 1, 2].into_iter().collect(),
        )
        .unwrap();
        assert_eq!((n, a), (6, vec![2, 3, 1]));
    }

    #[test]
    fn normalized_volume_examples() {
        let g = gamma_of("x^2+y^3", &["x", "y"]);
        for f in g.compact_faces() {
            let nv = normalized_volume(&g, f.id).unwrap();
            assert_eq!(nv, 1);
        }

        let g = gamma_of("x^3+y^2+x^2z^2", &["x", "y", "z"]);
        let facet = g
            .facets
            .iter()
            .position(|f| f.normal == vec![2, 3, 1])
            .unwrap();
        let face = g.facet_face(facet);
        assert_eq!(normalized_volume(&g, face).unwrap(), 2);
        let r = nv_result(&g, face).unwrap();
        assert_eq!(r.multiplicity, 12);
        assert_eq!(r.lattice_distance, 6);
        assert_eq!(
            r.normalized_volume as i64 * r.lattice_distance,
            r.multiplicity as i64
        );
    }

    #[test]
    fn nv_is_triangulation_independent() {
        // fanning the quadrilateral and pentagon facets from every vertex
        // gives the same normalized volume
        for text in [
            "x^4+y^4+y^2z^2+x^2z^2",
            "x^6 + y^6 + y^5z + x^2y^2z^2 + x^5z",
        ] {
            let g = gamma_of(text, &["x", "y", "z"]);
            for (fi, fd) in g.facets.iter().enumerate() {
                if !fd.compact {
                    continue;
                }
                let face_id = g.facet_face(fi);
                let face = &g.faces[face_id];
                if face.vertices.len() == face.dim + 1 {
                    continue;
                }
                let canonical = normalized_volume(&g, face_id).unwrap();
                for &apex in &face.vertices {
                    // fan from this apex over the edges avoiding it
                    let mut total = 0u64;
                    for e in &g.faces {
                        if e.dim == 1
                            && e.compact
                            && e.vertices.is_subset(&face.vertices)
                            && !e.vertices.contains(&apex)
                        {
                            let mut verts: Vec<Vec<i64>> =
                                e.vertices.iter().map(|&v| g.vertices[v].clone()).collect();
                            verts.push(g.vertices[apex].clone());
                            total += nv_simplex(&verts).unwrap();
                        }
                    }
                    assert_eq!(total, canonical, "{text} apex {apex}");
                }
            }
        }
    }

    #[test]
    fn face_join_examples() {
        let a: BTreeSet<usize> = [0].into_iter().collect();
        let b: BTreeSet<usize> = [1].into_iter().collect();
        assert_eq!(face_join(&a, &b), [0, 1].into_iter().collect());
        let e: BTreeSet<usize> = [0, 1].into_iter().collect();
        assert_eq!(face_join(&e, &a), e);
        let c: BTreeSet<usize> = [1, 2].into_iter().collect();
        assert_eq!(face_join(&e, &c), [0, 1, 2].into_iter().collect());
    }

    #[test]
    fn subdivide_examples() {
        let pieces = subdivide_cone(&[vec![3, 2]]).unwrap();
        assert_eq!(pieces, vec![SimplicialCone::open(vec![vec![3, 2]])]);

        let pieces = subdivide_cone(&[vec![3, 2], vec![1, 0]]).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].generators.len(), 2);
        assert!(pieces[0].strict.iter().all(|&s| s));

        // 3-dim cone on 4 rays, quadrilateral cross-section
        let r1 = vec![0, 1, 0];
        let r2 = vec![0, 3, 1];
        let r3 = vec![1, 0, 0];
        let r4 = vec![3, 0, 1];
        let pieces = subdivide_cone(&[r1.clone(), r2.clone(), r3.clone(), r4.clone()]).unwrap();
        let mut dims: Vec<usize> = pieces.iter().map(|p| p.generators.len()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![2, 3, 3]);
        for p in &pieces {
            assert!(p.strict.iter().all(|&s| s));
            assert!(p.generators.contains(&r1));
        }
    }

    #[test]
    fn subdivision_is_disjoint_cover() {
        for gens in [
            vec![vec![3, 2], vec![1, 0]],
            vec![vec![0, 1, 0], vec![0, 3, 1], vec![1, 0, 0], vec![3, 0, 1]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![2, 1, 0], vec![1, 2, 0], vec![1, 1, 1], vec![0, 0, 1]],
            vec![vec![0, 3, 1], vec![3, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
            // pentagonal cross-section
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![3, 0, 1],
                vec![0, 3, 1],
                vec![2, 2, 1],
            ],
            // a redundant interior generator
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 2]],
        ] {
            let n = gens[0].len();
            let pieces = subdivide_cone(&gens).unwrap();
            let bound = 9i64;
            let mut point = vec![0i64; n];
            'outer: loop {
                if point.iter().any(|&c| c != 0) {
                    let inside = open_cone_membership(&gens, &point);
                    let piece_count = pieces.iter().filter(|p| in_flagged_cone(p, &point)).count();
                    assert_eq!(
                        inside as usize, piece_count,
                        "point {point:?} cone {gens:?}"
                    );
                }
                for j in 0..n {
                    point[j] += 1;
                    if point[j] <= bound {
                        continue 'outer;
                    }
                    point[j] = 0;
                }
                break;
            }
        }
    }

    fn open_cone_membership(gens: &[Vec<i64>], point: &[i64]) -> bool {
        // in the closed cone (Caratheodory over simplicial subsets) and on
        // no facet wall
        let d = crate::linalg::rank(gens);
        let k = gens.len();
        let mut member = false;
        let mut subset = vec![0usize; d];
        enumerate_subsets(k, d, &mut subset, 0, 0, &mut |idx| {
            if member {
                return;
            }
            let sub: Vec<Vec<i64>> = idx.iter().map(|&i| gens[i].clone()).collect();
            if crate::linalg::rank(&sub) != d {
                return;
            }
            if let Some(lambda) = solve_coordinates(&sub, point) {
                if lambda.iter().all(|l| l >= &BigRational::zero()) {
                    member = true;
                }
            }
        });
        if !member {
            return false;
        }
        for wall in cone_facets(gens) {
            let rows: Vec<Vec<i64>> = wall.iter().map(|&i| gens[i].clone()).collect();
            if let Some(w) = wall_normal(gens, &rows) {
                if crate::newton::dot(&w, point) == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn in_flagged_cone(cone: &SimplicialCone, point: &[i64]) -> bool {
        match solve_coordinates(&cone.generators, point) {
            None => false,
            Some(lambda) => lambda.iter().zip(&cone.strict).all(|(l, &s)| {
                if s {
                    l > &BigRational::zero()
                } else {
                    l >= &BigRational::zero()
                }
            }),
        }
    }

    #[test]
    fn fundamental_points_examples() {
        let c = SimplicialCone::closed_style(vec![vec![3, 2], vec![1, 0]]);
        assert_eq!(
            fundamental_points(&c).unwrap(),
            vec![vec![0, 0], vec![2, 1]]
        );

        let c = SimplicialCone::closed_style(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(fundamental_points(&c).unwrap(), vec![vec![0, 0]]);

        let c = SimplicialCone::closed_style(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(
            fundamental_points(&c).unwrap(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );

        let c = SimplicialCone::open(vec![vec![3, 2], vec![1, 0]]);
        assert_eq!(
            fundamental_points(&c).unwrap(),
            vec![vec![2, 1], vec![4, 2]]
        );
    }

    #[test]
    fn fundamental_count_equals_multiplicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::Rng;
        let mut done = 0;
        while done < 60 {
            let n = rng.gen_range(2..=3usize);
            let r = rng.gen_range(1..=n);
            let gens: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..n).map(|_| rng.gen_range(0..=4)).collect())
                .collect();
            if gens.iter().any(|g: &Vec<i64>| g.iter().all(|&c| c == 0)) {
                continue;
            }
            if crate::linalg::rank(&gens) != r {
                continue;
            }
            let mult = multiplicity(&gens).unwrap();
            for strict in [false, true] {
                let c = if strict {
                    SimplicialCone::open(gens.clone())
                } else {
                    SimplicialCone::closed_style(gens.clone())
                };
                let pts = fundamental_points(&c).unwrap();
                assert_eq!(pts.len() as u64, mult, "gens {gens:?} strict {strict}");
            }
            done += 1;
        }
    }

    #[test]
    fn nv_suite_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let report = nv_suite(&mut rng, 3, 8, 60);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.facets_with_v_pairs > 10);
        let report = nv_suite(&mut rng, 4, 8, 25);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}
