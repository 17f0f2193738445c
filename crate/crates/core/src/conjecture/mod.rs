//! Facet classification (`B1`, `X2`), grouped cancellation checks, and the
//! end-to-end holomorphy audit.
//!
//! A `B1`-simplex w.r.t. `x_i` has `n-1` vertices in the hyperplane
//! `x_i = 0` and one vertex at lattice distance one from it; a non-compact
//! `B1`-facet is non-compact for exactly one variable and projects to a
//! `B1`-simplex. An `X2`-facet has vertices `p(a,0,0), q(x1,0,2), r(x2,2,0)`
//! up to coordinate permutation with `a - x1` and `a - x2` both odd.
//!
//! These are the facet shapes whose candidate poles routinely cancel; the
//! audit verifies that every pole line that does survive is matched by an
//! eigenvalue order of the monodromy at the origin or at a generic point of
//! a coordinate axis.

pub mod suite;

use serde::Serialize;

use crate::charcyclo::Character;
use crate::monodromy;
use crate::newton::NewtonPolyhedron;
use crate::oracle;
use crate::polyring::{FpPolynomial, IntPolynomial};
use crate::zeta::{
    self, actual_pole_lines, face_term, s_cone, NondegeneracyPolicy, RationalFunctionT,
};
use crate::{Error, Result};

pub use crate::zeta::{candidate_poles, CandidatePole};

/// Shape classification of a facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum FacetKind {
    /// Compact simplex with `n-1` vertices in `{x_variable = 0}` and one
    /// vertex (the apex) at distance 1.
    B1Simplex {
        variable: usize,
        apex: Vec<i64>,
    },
    /// Non-compact for exactly `noncompact_variable`, projecting to a
    /// `B1`-simplex w.r.t. `variable`.
    B1Noncompact {
        variable: usize,
        noncompact_variable: usize,
    },
    /// Vertices `p(a,0,0), q(x1,0,2), r(x2,2,0)` up to coordinate
    /// permutation (`axis` is the role of the first coordinate), with odd
    /// gaps `a - x1`, `a - x2`.
    X2 {
        axis: usize,
        a: i64,
        x1: i64,
        x2: i64,
    },
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetClass {
    pub facet: usize,
    pub nu: i64,
    #[serde(rename = "N")]
    pub n_dist: i64,
    #[serde(flatten)]
    pub kind: FacetKind,
}

/// Classify one facet of a 3-dimensional polyhedron.
pub fn classify_facet(gamma: &NewtonPolyhedron, facet: usize) -> Result<FacetClass> {
    if gamma.n != 3 {
        return Err(Error::UnsupportedDimension {
            required: 3,
            found: gamma.n,
        });
    }
    let fd = &gamma.facets[facet];
    let face_id = gamma.facet_face(facet);
    let face = &gamma.faces[face_id];
    let verts = gamma.face_vertices(face);
    let kind = if face.compact {
        classify_compact(&verts)
    } else if face.recession.len() == 1 {
        let j = *face.recession.iter().next().unwrap();
        let projected: Vec<Vec<i64>> = verts
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.remove(j);
                w
            })
            .collect();
        match b1_simplex_variable_2d(&projected) {
            // report the variable in the ambient indexing
            Some(i2) => {
                let variable = (0..3).filter(|&t| t != j).nth(i2).unwrap();
                FacetKind::B1Noncompact {
                    variable,
                    noncompact_variable: j,
                }
            }
            None => FacetKind::Other,
        }
    } else {
        FacetKind::Other
    };
    Ok(FacetClass {
        facet,
        nu: fd.nu,
        n_dist: fd.n_dist,
        kind,
    })
}

/// The `B1` variable of a segment in the plane: one vertex on `{x_i = 0}`,
/// the other at distance 1 from it.
fn b1_simplex_variable_2d(verts: &[Vec<i64>]) -> Option<usize> {
    if verts.len() != 2 || verts[0] == verts[1] {
        return None;
    }
    for i in 0..2 {
        let zeros = verts.iter().filter(|v| v[i] == 0).count();
        let ones = verts.iter().filter(|v| v[i] == 1).count();
        if zeros == 1 && ones == 1 {
            return Some(i);
        }
    }
    None
}

/// Classify a bare 2-simplex in `Z^3` from its vertex coordinates alone
/// (used for the simplices of a facet triangulation).
pub fn classify_simplex(verts: &[Vec<i64>]) -> FacetKind {
    classify_compact(verts)
}

fn classify_compact(verts: &[Vec<i64>]) -> FacetKind {
    if verts.len() == 3 {
        // B1-simplex: two vertices in {x_i = 0}, one at distance 1
        for i in 0..3 {
            let zeros: Vec<&Vec<i64>> = verts.iter().filter(|v| v[i] == 0).collect();
            if zeros.len() == 2 {
                if let Some(apex) = verts.iter().find(|v| v[i] == 1) {
                    return FacetKind::B1Simplex {
                        variable: i,
                        apex: apex.clone(),
                    };
                }
            }
        }
        if let Some(x2) = match_x2(verts) {
            return x2;
        }
    }
    FacetKind::Other
}

fn match_x2(verts: &[Vec<i64>]) -> Option<FacetKind> {
    // vertices p(a,0,0), q(x1,0,2), r(x2,2,0) up to coordinate permutation
    let perms = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let assignments = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in &perms {
        for asg in &assignments {
            let p = &verts[asg[0]];
            let q = &verts[asg[1]];
            let r = &verts[asg[2]];
            let (i0, i1, i2) = (perm[0], perm[1], perm[2]);
            let a = p[i0];
            if p[i1] != 0 || p[i2] != 0 || a <= 0 {
                continue;
            }
            if q[i1] != 0 || q[i2] != 2 {
                continue;
            }
            if r[i1] != 2 || r[i2] != 0 {
                continue;
            }
            let (x1, x2) = (q[i0], r[i0]);
            if (a - x1).rem_euclid(2) == 1 && (a - x2).rem_euclid(2) == 1 {
                return Some(FacetKind::X2 {
                    axis: i0,
                    a,
                    x1,
                    x2,
                });
            }
        }
    }
    None
}

pub fn classify_facets(gamma: &NewtonPolyhedron) -> Result<Vec<FacetClass>> {
    (0..gamma.facets.len())
        .map(|i| classify_facet(gamma, i))
        .collect()
}

/// One contribution in a cancellation group: a face with its own dual cone,
/// or a face paired with an explicitly spanned subcone.
#[derive(Clone, Debug)]
pub enum GroupItem {
    Face(usize),
    FaceWithCone { face: usize, cone: Vec<Vec<i64>> },
}

/// The single term `L_tau * S(Delta_tau)` of a face (or of a face against a
/// caller-provided cone).
pub fn face_contribution(
    gamma: &NewtonPolyhedron,
    fbar: &FpPolynomial,
    chi: &Character,
    item: &GroupItem,
) -> Result<RationalFunctionT> {
    match item {
        GroupItem::Face(face) => face_term(gamma, fbar, chi, *face),
        GroupItem::FaceWithCone { face, cone } => {
            let f_tau = fbar.restrict_to_face(gamma, *face)?;
            let l = crate::charcyclo::l_tau(&f_tau, chi, gamma.n);
            if l.is_zero() {
                return Ok(RationalFunctionT::zero(chi.p));
            }
            let s = s_cone(gamma, cone, chi.p)?;
            Ok(s.mul_cyclo(&l))
        }
    }
}

/// True iff the group's contributions sum to the exact zero function.
pub fn cancellation_check(
    gamma: &NewtonPolyhedron,
    fbar: &FpPolynomial,
    chi: &Character,
    group: &[GroupItem],
) -> Result<bool> {
    let mut acc = RationalFunctionT::zero(chi.p);
    for item in group {
        acc = acc.add(&face_contribution(gamma, fbar, chi, item)?);
    }
    Ok(acc.is_zero())
}

/// Audit verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Holomorphic,
    PoleExplained { order: u64 },
    Violation,
}

/// End-to-end report for one `(f, p, chi)` instance.
#[derive(Clone, Debug)]
pub struct HolomorphyReport {
    pub p: u64,
    pub d: u32,
    pub k: u32,
    pub nondegenerate_all_faces: bool,
    pub candidates: Vec<CandidatePole>,
    pub local: RationalFunctionT,
    pub global: Option<RationalFunctionT>,
    pub actual_local: Vec<(i64, i64)>,
    pub actual_global: Vec<(i64, i64)>,
    pub origin_orders: Vec<u64>,
    /// Eigenvalue orders at a generic point of each axis; `None` when the
    /// projection is degenerate there.
    pub axis_orders: Vec<Option<Vec<u64>>>,
    pub verdict: Verdict,
}

impl HolomorphyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "char": {"d": self.d, "k": self.k},
            "nondegenerate_all_faces": self.nondegenerate_all_faces,
            "candidate_poles": self.candidates,
            "local": self.local.to_json(),
            "global": self.global.as_ref().map(|z| z.to_json()),
            "actual_pole_lines": {
                "local": self.actual_local.iter().map(|&(nu, n)| {
                    serde_json::json!({"nu": nu, "N": n})
                }).collect::<Vec<_>>(),
                "global": self.actual_global.iter().map(|&(nu, n)| {
                    serde_json::json!({"nu": nu, "N": n})
                }).collect::<Vec<_>>(),
            },
            "eigenvalue_orders": {
                "origin": self.origin_orders,
                "axes": self.axis_orders,
            },
            "verdict": match &self.verdict {
                Verdict::Holomorphic => serde_json::json!({"kind": "holomorphic"}),
                Verdict::PoleExplained { order } =>
                    serde_json::json!({"kind": "pole_explained", "order": order}),
                Verdict::Violation => serde_json::json!({"kind": "VIOLATION"}),
            },
        })
    }
}

/// Assemble the full audit: nondegeneracy, reduced zeta functions, surviving
/// pole lines, eigenvalue orders at the origin and at generic axis points,
/// and the verdict. A pole line is explained by any order divisible by the
/// character order; a surviving unexplained line is a `Violation`.
pub fn holomorphy_report(f: &IntPolynomial, p: u64, d: u32, k: u32) -> Result<HolomorphyReport> {
    let chi = Character::new(p, d, k)?;
    let gamma = NewtonPolyhedron::build(&f.support(), f.n())?;
    if let Some(w) = oracle::check_nondegenerate(f, p, oracle::NondegeneracyScope::Compact)? {
        return Err(Error::Degenerate {
            p,
            face: w.face,
            witness: w.point,
        });
    }
    let nondeg_all = oracle::check_nondegenerate(f, p, oracle::NondegeneracyScope::All)?.is_none();

    let candidates = candidate_poles(&gamma, d);
    let local = zeta::igusa_local(f, p, &chi, NondegeneracyPolicy::Check)?.reduce()?;
    let actual_local = actual_pole_lines(&local, &gamma)?;
    let (global, actual_global) = if nondeg_all {
        let z = zeta::igusa_global(f, p, &chi, NondegeneracyPolicy::Check)?.reduce()?;
        let lines = actual_pole_lines(&z, &gamma)?;
        (Some(z), lines)
    } else {
        (None, Vec::new())
    };

    let origin = monodromy::varchenko_zeta(&gamma)?;
    let origin_orders = origin.eigenvalue_orders();
    let mut axis_orders = Vec::new();
    for j in 0..gamma.n {
        match monodromy::generic_axis_zeta(&gamma, j) {
            Ok(z) => axis_orders.push(Some(z.eigenvalue_orders())),
            Err(Error::DegenerateProjection { .. }) | Err(Error::UnsupportedDimension { .. }) => {
                axis_orders.push(None)
            }
            Err(e) => return Err(e),
        }
    }

    let mut lines = actual_local.clone();
    for l in &actual_global {
        if !lines.contains(l) {
            lines.push(*l);
        }
    }
    let verdict = if lines.is_empty() {
        Verdict::Holomorphic
    } else {
        let witness = origin_orders
            .iter()
            .find(|&&m| m % d as u64 == 0)
            .copied()
            .or_else(|| {
                axis_orders
                    .iter()
                    .flatten()
                    .flat_map(|orders| orders.iter().find(|&&m| m % d as u64 == 0).copied())
                    .next()
            });
        match witness {
            Some(m) => Verdict::PoleExplained { order: m },
            None => Verdict::Violation,
        }
    };

    Ok(HolomorphyReport {
        p,
        d,
        k,
        nondegenerate_all_faces: nondeg_all,
        candidates,
        local,
        global,
        actual_local,
        actual_global,
        origin_orders,
        axis_orders,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn gamma_of(text: &str, vars: &[&str]) -> NewtonPolyhedron {
        let f = parse_polynomial(text, vars).unwrap();
        NewtonPolyhedron::build(&f.support(), vars.len()).unwrap()
    }

    #[test]
    fn classify_b1_simplex() {
        // conv{(2,0,0),(0,3,0),(1,0,1)}: B1 w.r.t. z
        let g = gamma_of("x^2+y^3+x*z", &["x", "y", "z"]);
        let classes = classify_facets(&g).unwrap();
        let b1: Vec<_> = classes
            .iter()
            .filter(|c| matches!(c.kind, FacetKind::B1Simplex { variable: 2, .. }))
            .collect();
        assert_eq!(b1.len(), 1);
        match &b1[0].kind {
            FacetKind::B1Simplex { apex, .. } => assert_eq!(apex, &vec![1, 0, 1]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn classify_x2() {
        let g = gamma_of("x^3+y^2+x^2z^2", &["x", "y", "z"]);
        let classes = classify_facets(&g).unwrap();
        let x2: Vec<_> = classes
            .iter()
            .filter(|c| matches!(c.kind, FacetKind::X2 { .. }))
            .collect();
        assert_eq!(x2.len(), 1);
        match x2[0].kind {
            FacetKind::X2 { a, x1, x2, .. } => {
                assert_eq!(a, 3);
                // q and r roles may swap between the y- and z-permutation;
                // the coordinate set is {2, 0}
                let mut got = [x1, x2];
                got.sort_unstable();
                assert_eq!(got, [0, 2]);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn classify_other() {
        let g = gamma_of("x^4+y^4+z^4", &["x", "y", "z"]);
        let classes = classify_facets(&g).unwrap();
        for c in classes {
            if c.n_dist > 0 {
                assert_eq!(c.kind, FacetKind::Other);
            }
        }
    }

    #[test]
    fn classify_noncompact_b1() {
        // tau1 = {(0,4,0),(0,2,1)} + R e1 from y^4 + y^2 z + z^6
        let g = gamma_of("y^4+y^2z+z^6", &["x", "y", "z"]);
        let classes = classify_facets(&g).unwrap();
        assert!(
            classes.iter().any(|c| matches!(
                c.kind,
                FacetKind::B1Noncompact {
                    variable: 2,
                    noncompact_variable: 0
                }
            )),
            "{classes:?}"
        );
    }

    #[test]
    fn candidate_poles_cusp() {
        let g = gamma_of("x^2+y^3", &["x", "y"]);
        let c2 = candidate_poles(&g, 2);
        assert!(c2.iter().any(|c| (c.nu, c.n_dist) == (5, 6)));
        // the two coordinate facets have N = 0 and are flagged
        assert_eq!(c2.iter().filter(|c| c.n_zero).count(), 2);
        let c4 = candidate_poles(&g, 4);
        assert!(c4.iter().all(|c| c.n_zero));
        let c3 = candidate_poles(&g, 3);
        assert!(c3.iter().any(|c| (c.nu, c.n_dist) == (5, 6)));
    }

    #[test]
    fn fact_one_style_contribution_vanishes() {
        // a vertex with an exponent equal to 1 contributes 0 for every
        // non-trivial character
        let f = parse_polynomial("x*y^2*z + x^8 + y^8 + z^8", &["x", "y", "z"]).unwrap();
        let g = NewtonPolyhedron::build(&f.support(), 3).unwrap();
        let p = 5;
        let fbar = f.reduce_mod_p(p).unwrap();
        let vertex = g
            .faces
            .iter()
            .find(|fc| fc.dim == 0 && g.face_vertices(fc) == vec![vec![1, 2, 1]])
            .expect("P(1,2,1) is a vertex");
        for chi in Character::all_nontrivial(p).unwrap() {
            let t = face_contribution(&g, &fbar, &chi, &GroupItem::Face(vertex.id)).unwrap();
            assert!(t.is_zero());
        }
    }

    #[test]
    fn holomorphy_report_examples() {
        // f = x^2, p=5, d=4: zeta is identically zero -> holomorphic
        let f = parse_polynomial("x^2", &["x"]).unwrap();
        let r = holomorphy_report(&f, 5, 4, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Holomorphic);
        assert_eq!(r.origin_orders, vec![1, 2]);

        // f = x^2, p=3, d=2: pole line (1,2), Phi(2) != 0 -> explained
        let r = holomorphy_report(&f, 3, 2, 1).unwrap();
        assert_eq!(r.actual_global, vec![(1, 2)]);
        assert_eq!(r.verdict, Verdict::PoleExplained { order: 2 });

        // f = x^2+y^3, p=7, d=6: explained by order 6
        let f = parse_polynomial("x^2+y^3", &["x", "y"]).unwrap();
        let r = holomorphy_report(&f, 7, 6, 1).unwrap();
        match r.verdict {
            Verdict::PoleExplained { order } => assert_eq!(order, 6),
            ref other => panic!("unexpected verdict {other:?} ({:?})", r.actual_local),
        }
    }
}
