//! The Newton polyhedron at the origin and its face lattice.
//!
//! `Gamma_0` is the convex hull of `supp(f) + R_{>=0}^n`. It is cut out by
//! finitely many inequalities `a . x >= N(a)` with primitive normals
//! `a in Z_{>=0}^n`; a facet is compact exactly when its normal is strictly
//! positive. The full face lattice is materialized at build time: every zeta
//! computation touches every face.
//!
//! The hull is built by dualizing: candidate normals are enumerated from
//! (n-1)-subsets of support differences and coordinate vectors, then pruned
//! by exact comparison. Brute force is fine at the ambient dimensions used
//! here (n <= 4).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::polyring::ExponentVector;
use crate::{Error, Result};

/// A facet inequality `normal . x >= N`, with `nu = sum(normal)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetData {
    pub normal: Vec<i64>,
    #[serde(rename = "N")]
    pub n_dist: i64,
    pub nu: i64,
    pub compact: bool,
}

/// A face of the polyhedron: `conv(vertices) + cone(e_j : j in recession)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub dim: usize,
    /// Indices into `NewtonPolyhedron::vertices`.
    pub vertices: BTreeSet<usize>,
    /// Indices of the facets containing this face (empty for the full face).
    pub facets: BTreeSet<usize>,
    /// Variable indices `j` (0-based) with `e_j` in the recession cone.
    pub recession: BTreeSet<usize>,
    pub compact: bool,
    /// For V-faces: the index set `I` (0-based) with `#I = dim + 1` and the
    /// face contained in the coordinate subspace `L_I`.
    pub v_index_set: Option<BTreeSet<usize>>,
}

/// The Newton polyhedron of a support set, with materialized face lattice.
#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    pub n: usize,
    /// The generating support (all points, sorted).
    pub support: Vec<Vec<i64>>,
    /// The vertices of the polyhedron (a subset of the support, sorted lex).
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetData>,
    /// All proper faces plus the full polyhedron, sorted by (dim, vertices,
    /// recession); the full face is last.
    pub faces: Vec<Face>,
    full_face: usize,
    key_index: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

impl NewtonPolyhedron {
    /// Build from a support set. The origin must not belong to the support.
    pub fn build(support: &[ExponentVector], n: usize) -> Result<Self> {
        let pts: Vec<Vec<i64>> = support.iter().map(|ev| ev.as_i64()).collect();
        Self::build_from_points(&pts, n)
    }

    pub fn build_from_points(support: &[Vec<i64>], n: usize) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        for p in support {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            if p.iter().all(|&c| c == 0) {
                return Err(Error::OriginInSupport);
            }
            if p.iter().any(|&c| c < 0) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
        }
        let mut support: Vec<Vec<i64>> = support.to_vec();
        support.sort();
        support.dedup();

        let facets = find_facets(&support, n);

        // vertices: support points whose tight facet normals span R^n
        let mut vertices: Vec<Vec<i64>> = support
            .iter()
            .filter(|p| {
                let tight: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|f| dot(&f.normal, p) == f.n_dist)
                    .map(|f| f.normal.clone())
                    .collect();
                linalg::rank(&tight) == n
            })
            .cloned()
            .collect();
        vertices.sort();

        let faces = build_face_lattice(&vertices, &facets, n);
        let full_face = faces.len() - 1;
        let key_index = faces
            .iter()
            .map(|f| {
                (
                    (
                        f.vertices.iter().copied().collect::<Vec<_>>(),
                        f.recession.iter().copied().collect::<Vec<_>>(),
                    ),
                    f.id,
                )
            })
            .collect();

        Ok(NewtonPolyhedron {
            n,
            support,
            vertices,
            facets,
            faces,
            full_face,
            key_index,
        })
    }

    pub fn face(&self, id: usize) -> Result<&Face> {
        self.faces.get(id).ok_or(Error::NotAFace(id))
    }

    pub fn full_face(&self) -> usize {
        self.full_face
    }

    pub fn is_full_face(&self, id: usize) -> bool {
        id == self.full_face
    }

    /// Faces of the polyhedron that are proper (everything except `Gamma_0`).
    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.id != self.full_face)
    }

    pub fn compact_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(|f| f.compact)
    }

    /// The face id of a facet (facets are faces of dimension n-1).
    pub fn facet_face(&self, facet: usize) -> usize {
        let fd = &self.facets[facet];
        let verts: Vec<usize> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| dot(&fd.normal, v) == fd.n_dist)
            .map(|(i, _)| i)
            .collect();
        let rec: Vec<usize> = (0..self.n).filter(|&j| fd.normal[j] == 0).collect();
        *self
            .key_index
            .get(&(verts, rec))
            .expect("facet is a face of the lattice")
    }

    /// `N(a), nu(a)` and the minimizing face `F(a)` for a weight vector.
    pub fn face_of_vector(&self, a: &[i64]) -> Result<(usize, i64, i64)> {
        if a.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: a.len(),
            });
        }
        if a.iter().any(|&c| c < 0) || a.iter().all(|&c| c == 0) {
            return Err(Error::DependentVectors);
        }
        let n_dist = self
            .vertices
            .iter()
            .map(|v| dot(a, v))
            .min()
            .expect("non-empty polyhedron");
        let verts: Vec<usize> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| dot(a, v) == n_dist)
            .map(|(i, _)| i)
            .collect();
        let rec: Vec<usize> = (0..self.n).filter(|&j| a[j] == 0).collect();
        let nu: i64 = a.iter().sum();
        let id = *self
            .key_index
            .get(&(verts, rec))
            .expect("F(a) is a face of the lattice");
        Ok((id, n_dist, nu))
    }

    /// Primitive generators of the dual cone of a proper face: the normals of
    /// the facets containing it.
    pub fn dual_cone(&self, face: usize) -> Result<Vec<Vec<i64>>> {
        let f = self.face(face)?;
        if face == self.full_face {
            return Err(Error::FullFaceDualCone);
        }
        Ok(f.facets
            .iter()
            .map(|&fi| self.facets[fi].normal.clone())
            .collect())
    }

    /// All V-faces with their index sets.
    pub fn v_faces(&self) -> Vec<(&Face, BTreeSet<usize>)> {
        self.faces
            .iter()
            .filter_map(|f| f.v_index_set.as_ref().map(|i| (f, i.clone())))
            .collect()
    }

    /// True iff the face recedes in direction `j`: `tau + e_j` stays in `tau`.
    pub fn noncompact_for(&self, face: usize, j: usize) -> Result<bool> {
        Ok(self.face(face)?.recession.contains(&j))
    }

    /// Vertex coordinates of a face.
    pub fn face_vertices(&self, face: &Face) -> Vec<Vec<i64>> {
        face.vertices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect()
    }

    /// Pulling triangulation of every compact facet: fan from the
    /// lexicographically-smallest vertex, introducing no new vertices.
    pub fn triangulate_compact_facets(&self) -> Vec<FacetSimplex> {
        let mut out = Vec::new();
        for (fi, fd) in self.facets.iter().enumerate() {
            if !fd.compact {
                continue;
            }
            let face_id = self.facet_face(fi);
            for verts in self.triangulate_face(face_id) {
                out.push(FacetSimplex {
                    facet: fi,
                    face: face_id,
                    vertices: verts,
                });
            }
        }
        out
    }

    /// Pulling triangulation of a compact face into simplices (vertex-id
    /// lists of length dim+1). A simplex face is returned as itself.
    pub fn triangulate_face(&self, face: usize) -> Vec<Vec<usize>> {
        let f = &self.faces[face];
        debug_assert!(f.compact);
        if f.vertices.len() == f.dim + 1 {
            return vec![f.vertices.iter().copied().collect()];
        }
        // vertices are sorted lex, so the smallest id is the lex-smallest
        let v0 = *f.vertices.iter().next().unwrap();
        let mut out = Vec::new();
        for g in &self.faces {
            if g.dim + 1 == f.dim
                && g.vertices.is_subset(&f.vertices)
                && g.recession.is_subset(&f.recession)
                && !g.vertices.contains(&v0)
            {
                for mut s in self.triangulate_face(g.id) {
                    s.push(v0);
                    s.sort_unstable();
                    out.push(s);
                }
            }
        }
        out
    }

    /// Project away variable `j`, rebuilding the (n-1)-dimensional Newton
    /// polyhedron generated by the projected vertices. Signals an error when
    /// the projection hits the origin.
    pub fn project_polyhedron(&self, j: usize) -> Result<NewtonPolyhedron> {
        if self.n < 2 {
            return Err(Error::UnsupportedDimension {
                required: 2,
                found: self.n,
            });
        }
        let mut pts = Vec::new();
        for v in &self.vertices {
            let mut w = v.clone();
            w.remove(j);
            if w.iter().all(|&c| c == 0) {
                return Err(Error::DegenerateProjection { axis: j });
            }
            pts.push(w);
        }
        NewtonPolyhedron::build_from_points(&pts, self.n - 1)
    }

    /// JSON dump of the face lattice.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "vertices": self.vertices,
            "facets": self.facets.iter().map(|f| serde_json::json!({
                "normal": f.normal,
                "N": f.n_dist,
                "nu": f.nu,
                "compact": f.compact,
            })).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|f| serde_json::json!({
                "id": f.id,
                "dim": f.dim,
                "vertices": f.vertices.iter().collect::<Vec<_>>(),
                "facets": f.facets.iter().collect::<Vec<_>>(),
                "compact": f.compact,
                "v_face_I": f.v_index_set.as_ref()
                    .map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
        })
    }

    /// Rebuild a polyhedron from a JSON dump (the vertices regenerate it).
    pub fn from_json(value: &serde_json::Value) -> Result<NewtonPolyhedron> {
        #[derive(Deserialize)]
        struct Dump {
            n: usize,
            vertices: Vec<Vec<i64>>,
        }
        let dump: Dump = serde_json::from_value(value.clone()).map_err(|e| Error::Parse {
            offset: 0,
            message: format!("bad polyhedron JSON: {e}"),
        })?;
        NewtonPolyhedron::build_from_points(&dump.vertices, dump.n)
    }
}

/// One simplex of the triangulation of a compact facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetSimplex {
    pub facet: usize,
    pub face: usize,
    pub vertices: Vec<usize>,
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn find_facets(support: &[Vec<i64>], n: usize) -> Vec<FacetData> {
    // candidate spanning vectors: pairwise differences plus unit vectors
    let mut dirs: Vec<Vec<i64>> = Vec::new();
    for i in 0..support.len() {
        for j in (i + 1)..support.len() {
            let d: Vec<i64> = support[i]
                .iter()
                .zip(&support[j])
                .map(|(&a, &b)| a - b)
                .collect();
            let g = linalg::gcd_slice(&d);
            if g != 0 {
                let mut d: Vec<i64> = d.iter().map(|&x| x / g).collect();
                if *d.iter().find(|&&x| x != 0).unwrap() < 0 {
                    d = d.iter().map(|&x| -x).collect();
                }
                dirs.push(d);
            }
        }
    }
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        dirs.push(e);
    }
    dirs.sort();
    dirs.dedup();

    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut push_candidate = |a: Vec<i64>| {
        if a.iter().any(|&c| c < 0) || a.iter().all(|&c| c == 0) {
            return;
        }
        normals.push(a);
    };
    if n == 1 {
        push_candidate(vec![1]);
    } else {
        let mut subset = vec![0usize; n - 1];
        enumerate_subsets(dirs.len(), n - 1, &mut subset, 0, 0, &mut |idx| {
            let rows: Vec<Vec<i64>> = idx.iter().map(|&i| dirs[i].clone()).collect();
            if let Some(v) = linalg::null_vector(&rows, n) {
                let pos = v.iter().all(|&c| c >= 0);
                let neg = v.iter().all(|&c| c <= 0);
                if pos {
                    push_candidate(v);
                } else if neg {
                    push_candidate(v.iter().map(|&c| -c).collect());
                }
            }
        });
        // coordinate facets may be spanned entirely by unit vectors already in
        // `dirs`, but always offer them as candidates too
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = 1;
            push_candidate(e);
        }
    }
    normals.sort();
    normals.dedup();

    let mut facets = Vec::new();
    for a in normals {
        let n_dist = support.iter().map(|p| dot(&a, p)).min().unwrap();
        let tight: Vec<&Vec<i64>> = support.iter().filter(|p| dot(&a, p) == n_dist).collect();
        // affine dimension of the face: differences of tight points plus
        // recession directions e_j with a_j = 0
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let base = tight[0];
        for p in tight.iter().skip(1) {
            rows.push(p.iter().zip(base.iter()).map(|(&x, &y)| x - y).collect());
        }
        for j in 0..n {
            if a[j] == 0 {
                let mut e = vec![0i64; n];
                e[j] = 1;
                rows.push(e);
            }
        }
        if linalg::rank(&rows) == n - 1 {
            let compact = a.iter().all(|&c| c > 0);
            let nu = a.iter().sum();
            facets.push(FacetData {
                normal: a,
                n_dist,
                nu,
                compact,
            });
        }
    }
    facets.sort_by(|x, y| x.normal.cmp(&y.normal));
    facets
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
    for i in start..n {
        scratch[depth] = i;
        enumerate_subsets(n, k, scratch, depth + 1, i + 1, f);
    }
}

fn build_face_lattice(vertices: &[Vec<i64>], facets: &[FacetData], n: usize) -> Vec<Face> {
    type Key = (Vec<usize>, Vec<usize>);
    let face_from_facet_set = |gset: &BTreeSet<usize>| -> Option<(Key, BTreeSet<usize>)> {
        let verts: BTreeSet<usize> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                gset.iter()
                    .all(|&fi| dot(&facets[fi].normal, v) == facets[fi].n_dist)
            })
            .map(|(i, _)| i)
            .collect();
        if verts.is_empty() {
            return None;
        }
        let rec: BTreeSet<usize> = (0..n)
            .filter(|&j| gset.iter().all(|&fi| facets[fi].normal[j] == 0))
            .collect();
        Some((
            (
                verts.iter().copied().collect(),
                rec.iter().copied().collect(),
            ),
            verts,
        ))
    };

    // canonical facet set of a face: all facets containing it
    let canonical_facets = |verts: &BTreeSet<usize>, rec: &BTreeSet<usize>| -> BTreeSet<usize> {
        facets
            .iter()
            .enumerate()
            .filter(|(_, fd)| {
                verts
                    .iter()
                    .all(|&vi| dot(&fd.normal, &vertices[vi]) == fd.n_dist)
                    && rec.iter().all(|&j| fd.normal[j] == 0)
            })
            .map(|(i, _)| i)
            .collect()
    };

    let mut seen: BTreeMap<Key, (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>)> =
        BTreeMap::new();
    let mut queue: Vec<BTreeSet<usize>> = Vec::new();
    for fi in 0..facets.len() {
        let gset: BTreeSet<usize> = [fi].into_iter().collect();
        if let Some((key, verts)) = face_from_facet_set(&gset) {
            let rec: BTreeSet<usize> = key.1.iter().copied().collect();
            let canon = canonical_facets(&verts, &rec);
            if seen.insert(key, (verts, rec, canon.clone())).is_none() {
                queue.push(canon);
            }
        }
    }
    // closure under pairwise intersection
    let mut idx = 0;
    while idx < queue.len() {
        let current = queue[idx].clone();
        idx += 1;
        let existing: Vec<BTreeSet<usize>> =
            seen.values().map(|(_, _, canon)| canon.clone()).collect();
        for other in existing {
            let union: BTreeSet<usize> = current.union(&other).copied().collect();
            if let Some((key, verts)) = face_from_facet_set(&union) {
                if !seen.contains_key(&key) {
                    let rec: BTreeSet<usize> = key.1.iter().copied().collect();
                    let canon = canonical_facets(&verts, &rec);
                    seen.insert(key, (verts, rec, canon.clone()));
                    queue.push(canon);
                }
            }
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    for (_, (verts, rec, canon)) in seen {
        let dim = face_dim(vertices, &verts, &rec, n);
        let compact = rec.is_empty();
        let v_index_set = if compact {
            let mut union: BTreeSet<usize> = BTreeSet::new();
            for &vi in &verts {
                for (j, &c) in vertices[vi].iter().enumerate() {
                    if c != 0 {
                        union.insert(j);
                    }
                }
            }
            if union.len() == dim + 1 {
                Some(union)
            } else {
                None
            }
        } else {
            None
        };
        faces.push(Face {
            id: 0,
            dim,
            vertices: verts,
            facets: canon,
            recession: rec,
            compact,
            v_index_set,
        });
    }
    // the full polyhedron
    faces.push(Face {
        id: 0,
        dim: n,
        vertices: (0..vertices.len()).collect(),
        facets: BTreeSet::new(),
        recession: (0..n).collect(),
        compact: false,
        v_index_set: None,
    });
    faces.sort_by(|a, b| {
        (a.dim, &a.vertices, &a.recession).cmp(&(b.dim, &b.vertices, &b.recession))
    });
    for (i, f) in faces.iter_mut().enumerate() {
        f.id = i;
    }
    faces
}

fn face_dim(
    vertices: &[Vec<i64>],
    verts: &BTreeSet<usize>,
    rec: &BTreeSet<usize>,
    n: usize,
) -> usize {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut it = verts.iter();
    let base = *it.next().unwrap();
    for &vi in it {
        rows.push(
            vertices[vi]
                .iter()
                .zip(&vertices[base])
                .map(|(&x, &y)| x - y)
                .collect(),
        );
    }
    for &j in rec {
        let mut e = vec![0i64; n];
        e[j] = 1;
        rows.push(e);
    }
    linalg::rank(&rows)
}
