//! The monodromy zeta function at the origin via Varchenko's formula, kept
//! in factored form.
//!
//! A factorization is a map `e -> m_e` representing `prod (1 - t^e)^{m_e}`.
//! Its canonical Phi-form records, for every positive integer `m`, the net
//! multiplicity of the m-th cyclotomic polynomial:
//! `Phi(m) = sum_{e : m | e} m_e`. Eigenvalue orders are the `m` with
//! `Phi(m) != 0` (zeros and poles both count).
//!
//! At the origin the zeta function is the product over all V-faces `tau` of
//! `(1 - t^{N(tau)})^{NV(tau)}` with sign-alternating exponent
//! `(-1)^{dim tau}`. For surfaces the same product regroups into `F_tau`
//! factors attached to the 2-dimensional simplices of a triangulation of the
//! compact facets, times the inverses of unused 1-dimensional V-faces and
//! the unused axis vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::lattice::{lattice_distance_vface, normalized_volume, nv_simplex};
use crate::newton::{FacetSimplex, NewtonPolyhedron};
use crate::{Error, Result};

/// `prod_e (1 - t^e)^{m_e}` as the map `e -> m_e` (no zero exponents kept).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycloFactorization {
    factors: BTreeMap<u64, i64>,
}

impl CycloFactorization {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn single(e: u64, exp: i64) -> Self {
        let mut f = Self::default();
        f.push(e, exp);
        f
    }

    pub fn push(&mut self, e: u64, exp: i64) {
        if exp == 0 {
            return;
        }
        let entry = self.factors.entry(e).or_insert(0);
        *entry += exp;
        if *entry == 0 {
            self.factors.remove(&e);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &m) in &other.factors {
            out.push(e, m);
        }
        out
    }

    pub fn inv(&self) -> Self {
        CycloFactorization {
            factors: self.factors.iter().map(|(&e, &m)| (e, -m)).collect(),
        }
    }

    pub fn factors(&self) -> &BTreeMap<u64, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Net multiplicity of each cyclotomic polynomial:
    /// `Phi(m) = sum_{m | e} m_e`, non-zero entries only.
    pub fn phi_form(&self) -> BTreeMap<u64, i64> {
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        for (&e, &mult) in &self.factors {
            for m in 1..=e {
                if e % m == 0 {
                    *out.entry(m).or_insert(0) += mult;
                }
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Orders of eigenvalues: `m` with `Phi(m) != 0`.
    pub fn eigenvalue_orders(&self) -> Vec<u64> {
        self.phi_form().into_keys().collect()
    }

    /// True iff `d` divides the order of some zero or pole.
    pub fn eigenvalue_order_divisible(&self, d: u64) -> bool {
        debug_assert!(d >= 1);
        self.phi_form().keys().any(|&m| m % d == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factors": self.factors.iter().map(|(&e, &m)| {
                serde_json::json!({"e": e, "exp": m})
            }).collect::<Vec<_>>(),
            "phi_form": self.phi_form().iter().map(|(&m, &mult)| {
                serde_json::json!({"m": m, "mult": mult})
            }).collect::<Vec<_>>(),
            "eigenvalue_orders": self.eigenvalue_orders(),
        })
    }
}

impl std::fmt::Display for CycloFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (&e, &m)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "(1 - t^{e})")?;
            if m != 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// `zeta_tau = (1 - t^{N(tau)})^{NV(tau)}` for a V-face of the polyhedron.
fn zeta_face(gamma: &NewtonPolyhedron, face: usize) -> Result<CycloFactorization> {
    let f = gamma.face(face)?;
    let index_set = f
        .v_index_set
        .clone()
        .ok_or(Error::AffineSpanNotHyperplane)?;
    let verts = gamma.face_vertices(f);
    let (n_dist, _) = lattice_distance_vface(&verts, &index_set)?;
    let nv = normalized_volume(gamma, face)?;
    Ok(CycloFactorization::single(n_dist as u64, nv as i64))
}

/// Varchenko's product over all V-faces, with exponent `(-1)^{dim tau}`.
pub fn varchenko_zeta(gamma: &NewtonPolyhedron) -> Result<CycloFactorization> {
    let mut acc = CycloFactorization::one();
    for (face, _) in gamma.v_faces() {
        let z = zeta_face(gamma, face.id)?;
        let signed = if face.dim % 2 == 0 { z } else { z.inv() };
        acc = acc.mul(&signed);
    }
    Ok(acc)
}

/// The 1-dimensional V-faces of the polyhedron contained in a triangulation
/// simplex, as (face id, vertex pair).
fn v_edges_in_simplex(
    gamma: &NewtonPolyhedron,
    simplex: &FacetSimplex,
) -> Vec<(usize, [usize; 2])> {
    let mut out = Vec::new();
    let vs = &simplex.vertices;
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            let pair: BTreeSet<usize> = [vs[i], vs[j]].into_iter().collect();
            // must be a face of the polyhedron, compact, 1-dim, and V
            if let Some(face) = gamma
                .faces
                .iter()
                .find(|f| f.compact && f.dim == 1 && f.vertices == pair)
            {
                if face.v_index_set.is_some() {
                    out.push((face.id, [vs[i], vs[j]]));
                }
            }
        }
    }
    out
}

/// The `F_tau` factor of a triangulation simplex (surfaces only):
/// `F_tau = zeta_tau * prod_sigma zeta_sigma^{-1} * prod_p zeta_p`,
/// over the 1-dimensional V-faces `sigma` in `tau` and the vertices `p`
/// where two of them intersect. Always a polynomial (non-negative Phi-form).
pub fn f_tau_factor(
    gamma: &NewtonPolyhedron,
    simplex: &FacetSimplex,
) -> Result<CycloFactorization> {
    if gamma.n != 3 {
        return Err(Error::UnsupportedDimension {
            required: 3,
            found: gamma.n,
        });
    }
    let fd = &gamma.facets[simplex.facet];
    let verts: Vec<Vec<i64>> = simplex
        .vertices
        .iter()
        .map(|&v| gamma.vertices[v].clone())
        .collect();
    let nv = nv_simplex(&verts)?;
    let mut acc = CycloFactorization::single(fd.n_dist as u64, nv as i64);
    let v_edges = v_edges_in_simplex(gamma, simplex);
    for (face, _) in &v_edges {
        acc = acc.mul(&zeta_face(gamma, *face)?.inv());
    }
    // vertices where two V-edges of this simplex meet
    let mut used_points: BTreeSet<usize> = BTreeSet::new();
    for i in 0..v_edges.len() {
        for j in (i + 1)..v_edges.len() {
            let a: BTreeSet<usize> = v_edges[i].1.into_iter().collect();
            let b: BTreeSet<usize> = v_edges[j].1.into_iter().collect();
            for &shared in a.intersection(&b) {
                used_points.insert(shared);
            }
        }
    }
    for &v in &used_points {
        let vertex_face = gamma
            .faces
            .iter()
            .find(|f| f.dim == 0 && f.vertices.contains(&v))
            .expect("vertex face exists");
        acc = acc.mul(&zeta_face(gamma, vertex_face.id)?);
    }
    Ok(acc)
}

/// The origin zeta function regrouped through the `F_tau` factors of the
/// canonical triangulation; identical to [`varchenko_zeta`] in Phi-form.
pub fn zeta_via_ftau(gamma: &NewtonPolyhedron) -> Result<CycloFactorization> {
    zeta_via_ftau_with(gamma, &gamma.triangulate_compact_facets())
}

/// Same, against a caller-provided triangulation of the compact facets
/// (used to check triangulation independence).
pub fn zeta_via_ftau_with(
    gamma: &NewtonPolyhedron,
    triangulation: &[FacetSimplex],
) -> Result<CycloFactorization> {
    if gamma.n != 3 {
        return Err(Error::UnsupportedDimension {
            required: 3,
            found: gamma.n,
        });
    }
    let mut acc = CycloFactorization::one();
    let mut used_edges: BTreeSet<usize> = BTreeSet::new();
    let mut used_points: BTreeSet<usize> = BTreeSet::new();
    for simplex in triangulation {
        acc = acc.mul(&f_tau_factor(gamma, simplex)?);
        let v_edges = v_edges_in_simplex(gamma, simplex);
        for (face, _) in &v_edges {
            used_edges.insert(*face);
        }
        for i in 0..v_edges.len() {
            for j in (i + 1)..v_edges.len() {
                let a: BTreeSet<usize> = v_edges[i].1.into_iter().collect();
                let b: BTreeSet<usize> = v_edges[j].1.into_iter().collect();
                for &shared in a.intersection(&b) {
                    let vertex_face = gamma
                        .faces
                        .iter()
                        .find(|f| f.dim == 0 && f.vertices.contains(&shared))
                        .unwrap();
                    used_points.insert(vertex_face.id);
                }
            }
        }
    }
    // leftover 1-dimensional and 0-dimensional V-faces
    for (face, _) in gamma.v_faces() {
        match face.dim {
            1 if !used_edges.contains(&face.id) => {
                acc = acc.mul(&zeta_face(gamma, face.id)?.inv());
            }
            0 if !used_points.contains(&face.id) => {
                acc = acc.mul(&zeta_face(gamma, face.id)?);
            }
            _ => {}
        }
    }
    Ok(acc)
}

/// Monodromy zeta at a generic point of the `j`-th coordinate axis: the
/// Varchenko zeta of the projected (n-1)-dimensional polyhedron. Errors when
/// the projection hits the origin.
pub fn generic_axis_zeta(gamma: &NewtonPolyhedron, j: usize) -> Result<CycloFactorization> {
    let projected = gamma.project_polyhedron(j)?;
    varchenko_zeta(&projected)
}
