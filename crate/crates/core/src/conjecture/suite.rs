//! Randomized instance generators for the cancellation patterns: the seven
//! facts about (non-)contributions of low-complexity faces, the five
//! configuration cases of edge-sharing `B1`-facets, and the two `X2`
//! cancellation lemmas.
//!
//! Each generator builds explicit polynomials from the pattern's vertex
//! template with seeded jitter, verifies the structural preconditions on the
//! built polyhedron (rejecting mismatches), and attaches exact checks:
//! a single face contribution vanishing, a group of contributions summing to
//! the zero rational function, or a candidate pole line being absent from
//! the reduced zeta function.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charcyclo::Character;
use crate::newton::NewtonPolyhedron;
use crate::oracle::{self, NondegeneracyScope};
use crate::polyring::IntPolynomial;
use crate::zeta::{actual_pole_lines, igusa_global, igusa_local, NondegeneracyPolicy};
use crate::{Error, Result};

use super::{cancellation_check, classify_facets, face_contribution, FacetKind, GroupItem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pattern {
    Fact1,
    Fact2,
    Fact3,
    Fact4,
    Fact5,
    Fact6,
    Fact7,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    LemmaX2,
    LemmaX2Ord2,
}

impl Pattern {
    pub fn all() -> &'static [Pattern] {
        &[
            Pattern::Fact1,
            Pattern::Fact2,
            Pattern::Fact3,
            Pattern::Fact4,
            Pattern::Fact5,
            Pattern::Fact6,
            Pattern::Fact7,
            Pattern::Case1,
            Pattern::Case2,
            Pattern::Case3,
            Pattern::Case4,
            Pattern::Case5,
            Pattern::LemmaX2,
            Pattern::LemmaX2Ord2,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Pattern::Fact1 => "fact-1",
            Pattern::Fact2 => "fact-2",
            Pattern::Fact3 => "fact-3",
            Pattern::Fact4 => "fact-4",
            Pattern::Fact5 => "fact-5",
            Pattern::Fact6 => "fact-6",
            Pattern::Fact7 => "fact-7",
            Pattern::Case1 => "case-1",
            Pattern::Case2 => "case-2",
            Pattern::Case3 => "case-3",
            Pattern::Case4 => "case-4",
            Pattern::Case5 => "case-5",
            Pattern::LemmaX2 => "lemma-x2",
            Pattern::LemmaX2Ord2 => "lemma-x2-order2",
        }
    }
}

/// What an instance asserts.
#[derive(Clone, Debug)]
pub enum InstanceCheck {
    /// A single face term is the zero function.
    ContributionVanishes(GroupItem),
    /// The group's terms sum to the exact zero function.
    GroupCancels(Vec<GroupItem>),
    /// No surviving pole family of the reduced zeta function has any of the
    /// given `nu/N` ratios.
    PoleLineAbsent {
        ratios: Vec<(i64, i64)>,
        check_global: bool,
    },
}

#[derive(Clone, Debug)]
pub struct PatternInstance {
    pub pattern: Pattern,
    pub description: String,
    pub f: IntPolynomial,
    pub p: u64,
    pub d: u32,
    pub k: u32,
    pub checks: Vec<InstanceCheck>,
}

/// Run one instance; `Err(msg)` describes the first failed check.
pub fn run_instance(inst: &PatternInstance) -> std::result::Result<(), String> {
    let run = || -> Result<std::result::Result<(), String>> {
        let chi = Character::new(inst.p, inst.d, inst.k)?;
        let gamma = NewtonPolyhedron::build(&inst.f.support(), inst.f.n())?;
        let fbar = inst.f.reduce_mod_p(inst.p)?;
        for check in &inst.checks {
            match check {
                InstanceCheck::ContributionVanishes(item) => {
                    let t = face_contribution(&gamma, &fbar, &chi, item)?;
                    if !t.is_zero() {
                        return Ok(Err(format!(
                            "{}: contribution of {item:?} is non-zero",
                            inst.description
                        )));
                    }
                }
                InstanceCheck::GroupCancels(group) => {
                    if !cancellation_check(&gamma, &fbar, &chi, group)? {
                        return Ok(Err(format!("{}: group does not cancel", inst.description)));
                    }
                }
                InstanceCheck::PoleLineAbsent {
                    ratios,
                    check_global,
                } => {
                    let local =
                        igusa_local(&inst.f, inst.p, &chi, NondegeneracyPolicy::Check)?.reduce()?;
                    let lines = actual_pole_lines(&local, &gamma)?;
                    for &(nu, nd) in ratios {
                        if lines.iter().any(|&(a, b)| a * nd == b * nu) {
                            return Ok(Err(format!(
                                "{}: pole line -{nu}/{nd} survives locally ({lines:?})",
                                inst.description
                            )));
                        }
                    }
                    if *check_global {
                        let global =
                            igusa_global(&inst.f, inst.p, &chi, NondegeneracyPolicy::Check)?
                                .reduce()?;
                        let lines = actual_pole_lines(&global, &gamma)?;
                        for &(nu, nd) in ratios {
                            if lines.iter().any(|&(a, b)| a * nd == b * nu) {
                                return Ok(Err(format!(
                                    "{}: pole line -{nu}/{nd} survives globally ({lines:?})",
                                    inst.description
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Ok(()))
    };
    match run() {
        Ok(r) => r,
        Err(e) => Err(format!("{}: error: {e}", inst.description)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternReport {
    pub pattern: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CancelSuiteReport {
    pub seed: u64,
    pub per_pattern: usize,
    pub patterns: Vec<PatternReport>,
}

impl CancelSuiteReport {
    pub fn ok(&self) -> bool {
        self.patterns.iter().all(|p| p.failures.is_empty())
    }
}

/// Generate and run at least `per_pattern` instances of every pattern.
pub fn cancel_suite(seed: u64, per_pattern: usize) -> Result<CancelSuiteReport> {
    let mut patterns = Vec::new();
    for &pattern in Pattern::all() {
        let instances = generate_instances(pattern, seed, per_pattern)?;
        let mut failures = Vec::new();
        for inst in &instances {
            if let Err(msg) = run_instance(inst) {
                failures.push(msg);
            }
        }
        patterns.push(PatternReport {
            pattern: pattern.name().to_string(),
            instances: instances.len(),
            failures,
        });
    }
    Ok(CancelSuiteReport {
        seed,
        per_pattern,
        patterns,
    })
}

/// Deterministically generate `count` validated instances of one pattern.
pub fn generate_instances(
    pattern: Pattern,
    seed: u64,
    count: usize,
) -> Result<Vec<PatternInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (pattern.name().len() as u64) << 32);
    let mut out = Vec::new();
    let mut attempts = 0usize;
    let max_attempts = 4000 * count.max(1);
    while out.len() < count && attempts < max_attempts {
        attempts += 1;
        if let Some(inst) = try_generate(pattern, &mut rng) {
            out.push(inst);
        }
    }
    if out.len() < count {
        return Err(Error::PatternMismatch {
            pattern: pattern.name().to_string(),
            reason: format!("only {} of {count} instances generated", out.len()),
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// generator plumbing
// ---------------------------------------------------------------------------

const VARS: [&str; 3] = ["x", "y", "z"];

fn poly3(terms: Vec<(Vec<u32>, i64)>) -> IntPolynomial {
    IntPolynomial::from_terms(
        &VARS,
        terms
            .into_iter()
            .map(|(e, c)| (e, num_bigint::BigInt::from(c))),
    )
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, options: &[T]) -> T {
    options[rng.gen_range(0..options.len())]
}

/// A random prime with `d | p - 1` from the small stock.
fn prime_for_order(rng: &mut ChaCha8Rng, d: u32) -> Option<u64> {
    let stock: Vec<u64> = [3u64, 5, 7, 11, 13, 17]
        .into_iter()
        .filter(|&p| (p - 1) % d as u64 == 0)
        .collect();
    if stock.is_empty() {
        None
    } else {
        Some(pick(rng, &stock))
    }
}

fn random_character(rng: &mut ChaCha8Rng) -> (u64, u32, u32) {
    let p = pick(rng, &[3u64, 5, 7, 11, 13]);
    let divisors: Vec<u32> = (2..=(p - 1) as u32)
        .filter(|&d| (p - 1) % d as u64 == 0)
        .collect();
    let d = pick(rng, &divisors);
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    (p, d, pick(rng, &ks))
}

fn coeff(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    rng.gen_range(1..p) as i64
}

fn find_vertex_face(gamma: &NewtonPolyhedron, v: &[i64]) -> Option<usize> {
    let vi = gamma.vertices.iter().position(|w| w == v)?;
    gamma
        .faces
        .iter()
        .find(|f| f.dim == 0 && f.vertices.contains(&vi))
        .map(|f| f.id)
}

fn find_edge_face(gamma: &NewtonPolyhedron, a: &[i64], b: &[i64]) -> Option<usize> {
    let ai = gamma.vertices.iter().position(|w| w == a)?;
    let bi = gamma.vertices.iter().position(|w| w == b)?;
    let want: BTreeSet<usize> = [ai, bi].into_iter().collect();
    gamma
        .faces
        .iter()
        .find(|f| f.dim == 1 && f.compact && f.vertices == want)
        .map(|f| f.id)
}

fn find_ray_face(gamma: &NewtonPolyhedron, v: &[i64], direction: usize) -> Option<usize> {
    let vi = gamma.vertices.iter().position(|w| w == v)?;
    let verts: BTreeSet<usize> = [vi].into_iter().collect();
    let rec: BTreeSet<usize> = [direction].into_iter().collect();
    gamma
        .faces
        .iter()
        .find(|f| f.dim == 1 && f.vertices == verts && f.recession == rec)
        .map(|f| f.id)
}

fn find_facet_with_vertices(
    gamma: &NewtonPolyhedron,
    verts: &[&[i64]],
    compact: bool,
) -> Option<usize> {
    let ids: Option<BTreeSet<usize>> = verts
        .iter()
        .map(|v| gamma.vertices.iter().position(|w| w == *v))
        .collect();
    let ids = ids?;
    gamma.facets.iter().enumerate().position(|(fi, fd)| {
        if fd.compact != compact {
            return false;
        }
        let face = &gamma.faces[gamma.facet_face(fi)];
        face.vertices == ids
    })
}

/// No facet outside `group_facets` with `d | N > 0` shares a pole ratio with
/// the targets (such a facet could legitimately keep the line alive).
fn no_ratio_collision(
    gamma: &NewtonPolyhedron,
    group_facets: &[usize],
    ratios: &[(i64, i64)],
    d: u32,
) -> bool {
    for (fi, fd) in gamma.facets.iter().enumerate() {
        if group_facets.contains(&fi) || fd.n_dist <= 0 || fd.n_dist % d as i64 != 0 {
            continue;
        }
        for &(nu, nd) in ratios {
            if fd.nu * nd == fd.n_dist * nu {
                return false;
            }
        }
    }
    true
}

fn nondegenerate(f: &IntPolynomial, p: u64, scope: NondegeneracyScope) -> bool {
    matches!(oracle::check_nondegenerate(f, p, scope), Ok(None))
}

// ---------------------------------------------------------------------------
// per-pattern generators
// ---------------------------------------------------------------------------

fn try_generate(pattern: Pattern, rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    match pattern {
        Pattern::Fact1 => fact1(rng),
        Pattern::Fact2 => fact2(rng),
        Pattern::Fact3 => fact3(rng),
        Pattern::Fact4 => fact4(rng),
        Pattern::Fact5 => fact5(rng),
        Pattern::Fact6 => fact6(rng),
        Pattern::Fact7 => fact7(rng),
        Pattern::Case1 => case1(rng),
        Pattern::Case2 => case2(rng),
        Pattern::Case3 => case3(rng),
        Pattern::Case4 => case4(rng),
        Pattern::Case5 => case5(rng),
        Pattern::LemmaX2 => lemma_x2(rng),
        Pattern::LemmaX2Ord2 => lemma_x2_ord2(rng),
    }
}

/// A vertex with some exponent equal to 1 contributes nothing.
fn fact1(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (p, d, k) = random_character(rng);
    let axis = rng.gen_range(0..3);
    let b = rng.gen_range(0..=3u32);
    let c = rng.gen_range(0..=3u32);
    let mut pt = vec![0u32; 3];
    pt[axis] = 1;
    pt[(axis + 1) % 3] = b;
    pt[(axis + 2) % 3] = c;
    let m = 3 * (1 + b + c) + rng.gen_range(0..3);
    let f = poly3(vec![
        (pt.clone(), coeff(rng, p)),
        (vec![m, 0, 0], coeff(rng, p)),
        (vec![0, m, 0], coeff(rng, p)),
        (vec![0, 0, m], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pt_i: Vec<i64> = pt.iter().map(|&e| e as i64).collect();
    let vertex = find_vertex_face(&gamma, &pt_i)?;
    Some(PatternInstance {
        pattern: Pattern::Fact1,
        description: format!("fact1 vertex {pt_i:?} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::ContributionVanishes(GroupItem::Face(vertex))],
    })
}

/// An axis vertex `(a,0,0)` contributes nothing when `ord(chi)` does not
/// divide `a`.
fn fact2(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (p, d, k) = random_character(rng);
    let a = rng.gen_range(2..=8u32);
    if a % d == 0 {
        return None;
    }
    let axis = rng.gen_range(0..3);
    let mut pt = vec![0u32; 3];
    pt[axis] = a;
    let m = a + rng.gen_range(1..4);
    let others: Vec<Vec<u32>> = (0..3)
        .filter(|&j| j != axis)
        .map(|j| {
            let mut e = vec![0u32; 3];
            e[j] = m;
            e
        })
        .collect();
    let mut terms = vec![(pt.clone(), coeff(rng, p))];
    for o in others {
        terms.push((o, coeff(rng, p)));
    }
    let f = poly3(terms);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pt_i: Vec<i64> = pt.iter().map(|&e| e as i64).collect();
    let vertex = find_vertex_face(&gamma, &pt_i)?;
    Some(PatternInstance {
        pattern: Pattern::Fact2,
        description: format!("fact2 axis vertex a={a} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::ContributionVanishes(GroupItem::Face(vertex))],
    })
}

/// A segment `P(1,1,b) - Q(0,0,a)` contributes nothing when `ord(chi)` does
/// not divide `a`.
fn fact3(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (p, d, k) = random_character(rng);
    let a = rng.gen_range(2..=6u32);
    if a % d == 0 {
        return None;
    }
    let b = rng.gen_range(0..a.min(3));
    let m = rng.gen_range(3..=6u32);
    let f = poly3(vec![
        (vec![1, 1, b], coeff(rng, p)),
        (vec![0, 0, a], coeff(rng, p)),
        (vec![m, 0, 0], coeff(rng, p)),
        (vec![0, m, 0], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let edge = find_edge_face(&gamma, &[1, 1, b as i64], &[0, 0, a as i64])?;
    Some(PatternInstance {
        pattern: Pattern::Fact3,
        description: format!("fact3 segment (1,1,{b})-(0,0,{a}) p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::ContributionVanishes(GroupItem::Face(edge))],
    })
}

/// A segment in `{z=0}` and the adjacent facet through a height-1 vertex
/// cancel each other (any non-trivial character).
fn fact4(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (p, d, k) = random_character(rng);
    let alpha = rng.gen_range(2..=5u32);
    let beta = rng.gen_range(2..=5u32);
    let r1 = rng.gen_range(0..=2u32);
    let r2 = rng.gen_range(0..=2u32);
    let f = poly3(vec![
        (vec![alpha, 0, 0], coeff(rng, p)),
        (vec![0, beta, 0], coeff(rng, p)),
        (vec![r1, r2, 1], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pa = [alpha as i64, 0, 0];
    let qa = [0, beta as i64, 0];
    let ra = [r1 as i64, r2 as i64, 1];
    let edge = find_edge_face(&gamma, &pa, &qa)?;
    let facet = find_facet_with_vertices(&gamma, &[&pa, &qa, &ra], true)?;
    // the segment's other facet must be the coordinate plane z = 0
    let edge_face = &gamma.faces[edge];
    let edge_facets: Vec<&Vec<i64>> = edge_face
        .facets
        .iter()
        .map(|&fi| &gamma.facets[fi].normal)
        .collect();
    if !edge_facets.contains(&&vec![0, 0, 1]) {
        return None;
    }
    // mult(Delta_sigma) = 1 comes with the height-1 apex
    let gens = gamma.dual_cone(edge).ok()?;
    if crate::lattice::multiplicity(&gens).ok()? != 1 {
        return None;
    }
    let tau_face = gamma.facet_face(facet);
    Some(PatternInstance {
        pattern: Pattern::Fact4,
        description: format!(
            "fact4 sigma=({alpha},0,0)-(0,{beta},0), apex ({r1},{r2},1), p={p} d={d} k={k}"
        ),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::GroupCancels(vec![
            GroupItem::Face(edge),
            GroupItem::Face(tau_face),
        ])],
    })
}

/// A height-1 edge `P(.,.,0)-Q(.,.,1)` cancels against the part of the
/// vertex cone of `P` spanned by the duals of the two facets through the
/// edge and the `{z=0}` facet.
fn fact5(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (p, d, k) = random_character(rng);
    let alpha = rng.gen_range(2..=4u32);
    let beta = rng.gen_range(2..=4u32);
    let q1 = rng.gen_range(1..=2u32);
    let q2 = rng.gen_range(1..=2u32);
    let f = poly3(vec![
        (vec![alpha, 0, 0], coeff(rng, p)),
        (vec![0, beta, 0], coeff(rng, p)),
        (vec![q1, q2, 1], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pa = [alpha as i64, 0, 0];
    let qa = [q1 as i64, q2 as i64, 1];
    let edge = find_edge_face(&gamma, &pa, &qa)?;
    let p_vertex = find_vertex_face(&gamma, &pa)?;
    // facets through the edge
    let sigma_facets: Vec<usize> = gamma.faces[edge].facets.iter().copied().collect();
    if sigma_facets.len() != 2 {
        return None;
    }
    // tau_0: the facet in {z=0} containing P
    let tau0 = gamma
        .facets
        .iter()
        .position(|fd| fd.normal == vec![0, 0, 1])?;
    let p_face = &gamma.faces[p_vertex];
    let pi = *p_face.vertices.iter().next().unwrap();
    if crate::newton::dot(&gamma.facets[tau0].normal, &gamma.vertices[pi])
        != gamma.facets[tau0].n_dist
    {
        return None;
    }
    let mut cone: Vec<Vec<i64>> = vec![gamma.facets[tau0].normal.clone()];
    for &fi in &sigma_facets {
        cone.push(gamma.facets[fi].normal.clone());
    }
    Some(PatternInstance {
        pattern: Pattern::Fact5,
        description: format!("fact5 sigma=({alpha},0,0)-({q1},{q2},1), p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::GroupCancels(vec![
            GroupItem::Face(edge),
            GroupItem::FaceWithCone {
                face: p_vertex,
                cone,
            },
        ])],
    })
}

/// The shared half line of a non-compact `B1`-facet and the non-compact
/// facet through its height-1 vertex does not contribute to the global zeta
/// function.
fn fact6(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (inst, gamma, q_pt) = b1_noncompact_family(rng, Pattern::Fact6)?;
    let ray = find_ray_face(&gamma, &q_pt, 0)?;
    let mut inst = inst;
    inst.checks = vec![InstanceCheck::ContributionVanishes(GroupItem::Face(ray))];
    Some(inst)
}

/// A non-compact `B1`-facet cancels against the half line it shares with the
/// non-compact facet through its base vertex.
fn fact7(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let (inst, gamma, q_pt) = b1_noncompact_family(rng, Pattern::Fact7)?;
    let p_pt = {
        // base vertex P = (0, beta, 0): recover from the instance description
        // is brittle; recompute from support. P is the unique vertex with
        // z = 0.
        gamma.vertices.iter().find(|v| v[2] == 0).cloned().unwrap()
    };
    let _ = q_pt;
    let sigma1 = find_ray_face(&gamma, &p_pt, 0)?;
    // tau1: the facet containing both P and Q, non-compact in x
    let tau1 = gamma.facets.iter().position(|fd| {
        fd.normal[0] == 0
            && fd.normal[1] == 1
            && crate::newton::dot(&fd.normal, &p_pt) == fd.n_dist
            && fd.n_dist > 0
    })?;
    let tau1_face = gamma.facet_face(tau1);
    let mut inst = inst;
    inst.checks = vec![InstanceCheck::GroupCancels(vec![
        GroupItem::Face(sigma1),
        GroupItem::Face(tau1_face),
    ])];
    Some(inst)
}

/// Shared scaffolding for the non-compact `B1` family
/// `f = y^beta + y^gamma z + z^C` (x absent, so every face recedes in x).
fn b1_noncompact_family(
    rng: &mut ChaCha8Rng,
    pattern: Pattern,
) -> Option<(PatternInstance, NewtonPolyhedron, Vec<i64>)> {
    let (p, d, k) = random_character(rng);
    let gamma_exp = rng.gen_range(2..=3u32);
    let beta = gamma_exp + rng.gen_range(1..=3u32);
    let big = beta + rng.gen_range(2..=4u32);
    if big as i64 * (beta as i64 - gamma_exp as i64) < beta as i64 {
        return None;
    }
    let f = poly3(vec![
        (vec![0, beta, 0], coeff(rng, p)),
        (vec![0, gamma_exp, 1], coeff(rng, p)),
        (vec![0, 0, big], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    // the B1 facet must classify as such
    let classes = classify_facets(&gamma).ok()?;
    if !classes.iter().any(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 2,
                noncompact_variable: 0
            }
        )
    }) {
        return None;
    }
    let q_pt = vec![0, gamma_exp as i64, 1];
    if !gamma.vertices.contains(&q_pt) {
        return None;
    }
    let inst = PatternInstance {
        pattern,
        description: format!(
            "{} family y^{beta}+y^{gamma_exp}z+z^{big} p={p} d={d} k={k}",
            pattern.name()
        ),
        f,
        p,
        d,
        k,
        checks: vec![],
    };
    Some((inst, gamma, q_pt))
}

/// An isolated `B1` configuration: its candidate pole line is fake.
fn case1(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    if rng.gen_bool(0.5) {
        case1_compact(rng)
    } else {
        case1_noncompact(rng)
    }
}

fn case1_compact(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    // f = x^m + y^m + x^r y^r z: single compact B1-simplex w.r.t. z whose
    // edge neighbours are not B1 facets
    let m = pick(rng, &[5u32, 6]);
    let r = 2u32;
    let divisors: Vec<u32> = (2..=m).filter(|&d| m % d == 0).collect();
    let d = pick(rng, &divisors);
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![m, 0, 0], coeff(rng, p)),
        (vec![0, m, 0], coeff(rng, p)),
        (vec![r, r, 1], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let classes = classify_facets(&gamma).ok()?;
    let b1: Vec<&super::FacetClass> = classes
        .iter()
        .filter(|c| !matches!(c.kind, FacetKind::Other))
        .collect();
    // exactly one B1 facet, and it is the compact simplex w.r.t. z
    if b1.len() != 1 || !matches!(b1[0].kind, FacetKind::B1Simplex { variable: 2, .. }) {
        return None;
    }
    let (nu, nd) = (b1[0].nu, b1[0].n_dist);
    if nd % d as i64 != 0 {
        return None;
    }
    if !no_ratio_collision(&gamma, &[b1[0].facet], &[(nu, nd)], d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case1,
        description: format!("case1 compact x^{m}+y^{m}+x^{r}y^{r}z p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios: vec![(nu, nd)],
            check_global: true,
        }],
    })
}

fn case1_noncompact(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    // the fact-6 family with d | N(tau1)
    let gamma_exp = rng.gen_range(2..=3u32);
    let beta = gamma_exp + rng.gen_range(1..=3u32);
    let big = beta + rng.gen_range(2..=4u32);
    if big as i64 * (beta as i64 - gamma_exp as i64) < beta as i64 {
        return None;
    }
    let divisors: Vec<u32> = (2..=beta).filter(|&d| beta % d == 0).collect();
    if divisors.is_empty() {
        return None;
    }
    let d = pick(rng, &divisors);
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![0, beta, 0], coeff(rng, p)),
        (vec![0, gamma_exp, 1], coeff(rng, p)),
        (vec![0, 0, big], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let classes = classify_facets(&gamma).ok()?;
    let b1 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 2,
                noncompact_variable: 0
            }
        )
    })?;
    let (nu, nd) = (b1.nu, b1.n_dist);
    if nd % d as i64 != 0 {
        return None;
    }
    // no other B1 facet may pair with it for a different variable: with this
    // support the only other non-coordinate facet is not B1, checked here
    if classes
        .iter()
        .filter(|c| !matches!(c.kind, FacetKind::Other))
        .count()
        != 1
    {
        return None;
    }
    if !no_ratio_collision(&gamma, &[b1.facet], &[(nu, nd)], d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case1,
        description: format!("case1 noncompact y^{beta}+y^{gamma_exp}z+z^{big} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios: vec![(nu, nd)],
            check_global: true,
        }],
    })
}

/// Two compact `B1`-facets w.r.t. different variables sharing the segment
/// `BD`; fake when `ord(chi)` does not divide `a`.
fn case2(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let a = pick(rng, &[3u32, 5, 7]);
    let kz = pick(rng, &[2u32, 4]);
    if kz >= a {
        return None;
    }
    let b = rng.gen_range(1..=kz.min(a - 1));
    // d | 2a but d not dividing a: d = 2e with e | a (a odd)
    let es: Vec<u32> = (1..=a).filter(|&e| a % e == 0).collect();
    let e = pick(rng, &es);
    let d = 2 * e;
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![2, 0, kz], coeff(rng, p)),
        (vec![1, 1, b], coeff(rng, p)),
        (vec![0, 2, kz], coeff(rng, p)),
        (vec![0, 0, a], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let av = [2i64, 0, kz as i64];
    let bv = [1i64, 1, b as i64];
    let cv = [0i64, 2, kz as i64];
    let dv = [0i64, 0, a as i64];
    let tau1 = find_facet_with_vertices(&gamma, &[&av, &bv, &dv], true)?;
    let tau2 = find_facet_with_vertices(&gamma, &[&cv, &bv, &dv], true)?;
    find_edge_face(&gamma, &bv, &dv)?;
    let classes = classify_facets(&gamma).ok()?;
    let c1 = &classes[tau1];
    let c2 = &classes[tau2];
    if !matches!(c1.kind, FacetKind::B1Simplex { variable: 1, .. }) {
        return None;
    }
    if !matches!(c2.kind, FacetKind::B1Simplex { variable: 0, .. }) {
        return None;
    }
    if c1.n_dist % d as i64 != 0 || c1.nu * c2.n_dist != c1.n_dist * c2.nu {
        return None;
    }
    let ratios = vec![(c1.nu, c1.n_dist)];
    if !no_ratio_collision(&gamma, &[tau1, tau2], &ratios, d) {
        return None;
    }
    let check_global = nondegenerate(&f, p, NondegeneracyScope::All);
    if !check_global && !nondegenerate(&f, p, NondegeneracyScope::Compact) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case2,
        description: format!("case2 a={a} k={kz} b={b} p={p} d={d} chi-index={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios,
            check_global,
        }],
    })
}

/// Two non-compact `B1`-facets w.r.t. different variables sharing a segment.
fn case3(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    if rng.gen_bool(0.5) {
        case3_noncompact_segment(rng)
    } else {
        case3_compact_segment(rng)
    }
}

fn case3_noncompact_segment(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    // f = x^m + y^m' + xy; shared segment = the ray from (1,1,0) upward
    let m = rng.gen_range(2..=5u32);
    let m2 = rng.gen_range(2..=5u32);
    let divisors: Vec<u32> = (2..=m).filter(|&d| m % d == 0).collect();
    if divisors.is_empty() {
        return None;
    }
    let d = pick(rng, &divisors);
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![m, 0, 0], coeff(rng, p)),
        (vec![0, m2, 0], coeff(rng, p)),
        (vec![1, 1, 0], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let classes = classify_facets(&gamma).ok()?;
    let tau1 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 1,
                noncompact_variable: 2
            }
        )
    })?;
    let tau2 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 0,
                noncompact_variable: 2
            }
        )
    })?;
    // both carry the pole line -1
    if tau1.nu != tau1.n_dist || tau2.nu != tau2.n_dist {
        return None;
    }
    let ratios = vec![(tau1.nu, tau1.n_dist), (tau2.nu, tau2.n_dist)];
    if !no_ratio_collision(&gamma, &[tau1.facet, tau2.facet], &ratios, d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case3,
        description: format!("case3 noncompact x^{m}+y^{m2}+xy p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios,
            check_global: true,
        }],
    })
}

fn case3_compact_segment(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    // f = z^a + x y z^b: shared compact segment A(0,0,a)-B(1,1,b);
    // fake when ord(chi) does not divide a
    let a = rng.gen_range(3..=7u32);
    let b = rng.gen_range(1..=2u32);
    if b >= a {
        return None;
    }
    let (p, d, k) = random_character(rng);
    if a % d == 0 {
        return None;
    }
    let f = poly3(vec![
        (vec![0, 0, a], coeff(rng, p)),
        (vec![1, 1, b], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let classes = classify_facets(&gamma).ok()?;
    let tau1 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 1,
                noncompact_variable: 0
            }
        )
    })?;
    let tau2 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 0,
                noncompact_variable: 1
            }
        )
    })?;
    find_edge_face(&gamma, &[0, 0, a as i64], &[1, 1, b as i64])?;
    let ratios = vec![(tau1.nu, tau1.n_dist)];
    if tau1.nu * tau2.n_dist != tau1.n_dist * tau2.nu {
        return None;
    }
    if !no_ratio_collision(&gamma, &[tau1.facet, tau2.facet], &ratios, d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    Some(PatternInstance {
        pattern: Pattern::Case3,
        description: format!("case3 compact z^{a}+xyz^{b} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios,
            check_global: true,
        }],
    })
}

/// A compact and a non-compact `B1`-facet w.r.t. different variables sharing
/// the segment `BD`; fake when `ord(chi)` does not divide `a`.
fn case4(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let a = pick(rng, &[3u32, 5, 7]);
    let kz = pick(rng, &[2u32, 4]);
    if kz >= a {
        return None;
    }
    let b = rng.gen_range(1..=kz.min(a - 1));
    let es: Vec<u32> = (1..=a).filter(|&e| a % e == 0).collect();
    let e = pick(rng, &es);
    let d = 2 * e;
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![2, 0, kz], coeff(rng, p)),
        (vec![1, 1, b], coeff(rng, p)),
        (vec![0, 0, a], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let av = [2i64, 0, kz as i64];
    let bv = [1i64, 1, b as i64];
    let dv = [0i64, 0, a as i64];
    let tau1 = find_facet_with_vertices(&gamma, &[&av, &bv, &dv], true)?;
    find_edge_face(&gamma, &bv, &dv)?;
    let classes = classify_facets(&gamma).ok()?;
    if !matches!(classes[tau1].kind, FacetKind::B1Simplex { variable: 1, .. }) {
        return None;
    }
    let tau2 = classes.iter().find(|c| {
        matches!(
            c.kind,
            FacetKind::B1Noncompact {
                variable: 0,
                noncompact_variable: 1
            }
        )
    })?;
    let c1 = &classes[tau1];
    if c1.n_dist % d as i64 != 0 {
        return None;
    }
    // the shared candidate line
    if c1.nu * tau2.n_dist != c1.n_dist * tau2.nu {
        return None;
    }
    let ratios = vec![(c1.nu, c1.n_dist)];
    if !no_ratio_collision(&gamma, &[tau1, tau2.facet], &ratios, d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case4,
        description: format!("case4 a={a} k={kz} b={b} p={p} d={d} chi-index={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios,
            check_global: true,
        }],
    })
}

/// The case-2 core plus an extra `B1`-facet sharing an edge with it.
fn case5(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let a = pick(rng, &[5u32, 7]);
    let kz = 2u32;
    let b = 1u32;
    let es: Vec<u32> = (1..=a).filter(|&e| a % e == 0).collect();
    let e = pick(rng, &es);
    let d = 2 * e;
    let p = prime_for_order(rng, d)?;
    let mx = pick(rng, &[4u32, 5]);
    let f = poly3(vec![
        (vec![2, 0, kz], coeff(rng, p)),
        (vec![1, 1, b], coeff(rng, p)),
        (vec![0, 2, kz], coeff(rng, p)),
        (vec![0, 0, a], coeff(rng, p)),
        (vec![mx, 0, 0], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let av = [2i64, 0, kz as i64];
    let bv = [1i64, 1, b as i64];
    let cv = [0i64, 2, kz as i64];
    let dv = [0i64, 0, a as i64];
    let ev = [mx as i64, 0, 0];
    let tau1 = find_facet_with_vertices(&gamma, &[&av, &bv, &dv], true)?;
    let tau2 = find_facet_with_vertices(&gamma, &[&cv, &bv, &dv], true)?;
    let extra = find_facet_with_vertices(&gamma, &[&av, &ev, &bv], true)?;
    let classes = classify_facets(&gamma).ok()?;
    if !matches!(classes[tau1].kind, FacetKind::B1Simplex { variable: 1, .. })
        || !matches!(classes[tau2].kind, FacetKind::B1Simplex { variable: 0, .. })
        || !matches!(classes[extra].kind, FacetKind::B1Simplex { .. })
    {
        return None;
    }
    let c1 = &classes[tau1];
    if c1.n_dist % d as i64 != 0 {
        return None;
    }
    let ratios = vec![(c1.nu, c1.n_dist)];
    // the extra B1 facet may share the line; everything else may not
    let mut group = vec![tau1, tau2, extra];
    group.sort_unstable();
    if !no_ratio_collision(&gamma, &group, &ratios, d) {
        return None;
    }
    if !nondegenerate(&f, p, NondegeneracyScope::All) {
        return None;
    }
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    Some(PatternInstance {
        pattern: Pattern::Case5,
        description: format!("case5 a={a} extra=x^{mx} p={p} d={d} chi-index={k}"),
        f,
        p,
        d,
        k,
        checks: vec![InstanceCheck::PoleLineAbsent {
            ratios,
            check_global: true,
        }],
    })
}

/// `X2` cancellation: the two base edges and the facet cancel when
/// `ord(chi)` divides neither `N/2` nor 2.
fn lemma_x2(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    // vertices p(a,0,0), q(x1,0,2), r(x2,2,0), odd gaps
    let a = pick(rng, &[4u32, 6, 10]);
    let x1 = pick(rng, &[1u32, 3, 5]);
    let x2 = pick(rng, &[1u32, 3]);
    if x1 >= a || x2 >= a || (a - x1) % 2 == 0 || (a - x2) % 2 == 0 {
        return None;
    }
    // d | 2a, d not dividing a, d != 2
    let n_dist = 2 * a as i64;
    let ds: Vec<u32> = (3..=n_dist as u32)
        .filter(|&d| n_dist % d as i64 == 0 && a % d != 0)
        .collect();
    if ds.is_empty() {
        return None;
    }
    let d = pick(rng, &ds);
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![a, 0, 0], coeff(rng, p)),
        (vec![x1, 0, 2], coeff(rng, p)),
        (vec![x2, 2, 0], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pv = [a as i64, 0, 0];
    let qv = [x1 as i64, 0, 2];
    let rv = [x2 as i64, 2, 0];
    let tau = find_facet_with_vertices(&gamma, &[&pv, &qv, &rv], true)?;
    let classes = classify_facets(&gamma).ok()?;
    if !matches!(classes[tau].kind, FacetKind::X2 { .. }) {
        return None;
    }
    let sigma1 = find_edge_face(&gamma, &pv, &qv)?;
    let sigma2 = find_edge_face(&gamma, &pv, &rv)?;
    let tau_face = gamma.facet_face(tau);
    let ratios = vec![(classes[tau].nu, classes[tau].n_dist)];
    if !no_ratio_collision(&gamma, &[tau], &ratios, d) {
        return None;
    }
    let check_lines = nondegenerate(&f, p, NondegeneracyScope::Compact);
    let check_global = nondegenerate(&f, p, NondegeneracyScope::All);
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    let mut checks = vec![InstanceCheck::GroupCancels(vec![
        GroupItem::Face(sigma1),
        GroupItem::Face(sigma2),
        GroupItem::Face(tau_face),
    ])];
    if check_lines {
        checks.push(InstanceCheck::PoleLineAbsent {
            ratios,
            check_global,
        });
    }
    Some(PatternInstance {
        pattern: Pattern::LemmaX2,
        description: format!("lemma-x2 a={a} x1={x1} x2={x2} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks,
    })
}

/// The `x1 = x2 = 0` strengthening: base vertices and base edge also cancel,
/// so the facet never contributes when `ord(chi)` does not divide `N/2`.
fn lemma_x2_ord2(rng: &mut ChaCha8Rng) -> Option<PatternInstance> {
    let a = pick(rng, &[3u32, 5, 7]);
    let ds: Vec<u32> = (2..=2 * a)
        .filter(|&d| (2 * a) % d == 0 && a % d != 0)
        .collect();
    let d = pick(rng, &ds);
    let p = prime_for_order(rng, d)?;
    let f = poly3(vec![
        (vec![a, 0, 0], coeff(rng, p)),
        (vec![0, 2, 0], coeff(rng, p)),
        (vec![0, 0, 2], coeff(rng, p)),
    ]);
    let gamma = NewtonPolyhedron::build(&f.support(), 3).ok()?;
    let pv = [a as i64, 0, 0];
    let qv = [0i64, 0, 2];
    let rv = [0i64, 2, 0];
    let tau = find_facet_with_vertices(&gamma, &[&pv, &qv, &rv], true)?;
    let classes = classify_facets(&gamma).ok()?;
    if !matches!(classes[tau].kind, FacetKind::X2 { .. }) {
        return None;
    }
    let q_vertex = find_vertex_face(&gamma, &qv)?;
    let r_vertex = find_vertex_face(&gamma, &rv)?;
    let sigma3 = find_edge_face(&gamma, &qv, &rv)?;
    let sigma1 = find_edge_face(&gamma, &pv, &qv)?;
    let sigma2 = find_edge_face(&gamma, &pv, &rv)?;
    let tau_face = gamma.facet_face(tau);
    let ratios = vec![(classes[tau].nu, classes[tau].n_dist)];
    if !no_ratio_collision(&gamma, &[tau], &ratios, d) {
        return None;
    }
    let check_lines = nondegenerate(&f, p, NondegeneracyScope::Compact);
    let check_global = nondegenerate(&f, p, NondegeneracyScope::All);
    let ks: Vec<u32> = (1..d)
        .filter(|&k| crate::linalg::gcd_u(k as u64, d as u64) == 1)
        .collect();
    let k = pick(rng, &ks);
    let mut checks = vec![
        InstanceCheck::GroupCancels(vec![
            GroupItem::Face(q_vertex),
            GroupItem::Face(r_vertex),
            GroupItem::Face(sigma3),
        ]),
        InstanceCheck::GroupCancels(vec![
            GroupItem::Face(sigma1),
            GroupItem::Face(sigma2),
            GroupItem::Face(tau_face),
        ]),
    ];
    if check_lines {
        checks.push(InstanceCheck::PoleLineAbsent {
            ratios,
            check_global,
        });
    }
    Some(PatternInstance {
        pattern: Pattern::LemmaX2Ord2,
        description: format!("lemma-x2-ord2 a={a} p={p} d={d} k={k}"),
        f,
        p,
        d,
        k,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_pattern_generates_and_cancels() {
        let report = cancel_suite(20240211, 2).unwrap();
        for p in &report.patterns {
            assert!(p.failures.is_empty(), "{}: {:?}", p.pattern, p.failures);
            assert!(p.instances >= 2);
        }
    }

    #[test]
    fn lemma_x2_meaty_instance() {
        // x^6 + x z^2 + x^3 y^2, p=5, d=4: 4 | N(tau)=12, 4 does not divide
        // 6, and L_tau != 0, so the cancellation is not vacuous
        let f = poly3(vec![
            (vec![6, 0, 0], 1),
            (vec![1, 0, 2], 1),
            (vec![3, 2, 0], 1),
        ]);
        let p = 5u64;
        let chi = Character::new(p, 4, 1).unwrap();
        let gamma = NewtonPolyhedron::build(&f.support(), 3).unwrap();
        let fbar = f.reduce_mod_p(p).unwrap();
        let tau =
            find_facet_with_vertices(&gamma, &[&[6, 0, 0], &[1, 0, 2], &[3, 2, 0]], true).unwrap();
        let tau_face = gamma.facet_face(tau);
        let term = face_contribution(&gamma, &fbar, &chi, &GroupItem::Face(tau_face)).unwrap();
        assert!(!term.is_zero(), "facet term should be non-trivial");
        let sigma1 = find_edge_face(&gamma, &[6, 0, 0], &[1, 0, 2]).unwrap();
        let sigma2 = find_edge_face(&gamma, &[6, 0, 0], &[3, 2, 0]).unwrap();
        let ok = cancellation_check(
            &gamma,
            &fbar,
            &chi,
            &[
                GroupItem::Face(sigma1),
                GroupItem::Face(sigma2),
                GroupItem::Face(tau_face),
            ],
        )
        .unwrap();
        assert!(ok);
        // end to end: the line -10/12 is absent
        let z = igusa_local(&f, p, &chi, NondegeneracyPolicy::Check)
            .unwrap()
            .reduce()
            .unwrap();
        let lines = actual_pole_lines(&z, &gamma).unwrap();
        assert!(
            lines.iter().all(|&(nu, nd)| nu * 12 != nd * 10),
            "{lines:?}"
        );
    }

    #[test]
    fn spec_x2_instance_is_classified_and_cancels() {
        // x^3 + y^2 + 3x^2z^2 with chi of order 4 on p=5
        let f = poly3(vec![
            (vec![3, 0, 0], 1),
            (vec![0, 2, 0], 1),
            (vec![2, 0, 2], 3),
        ]);
        let gamma = NewtonPolyhedron::build(&f.support(), 3).unwrap();
        let classes = classify_facets(&gamma).unwrap();
        assert!(classes
            .iter()
            .any(|c| matches!(c.kind, FacetKind::X2 { .. })));
        let chi = Character::new(5, 4, 1).unwrap();
        let fbar = f.reduce_mod_p(5).unwrap();
        let tau = classes
            .iter()
            .find(|c| matches!(c.kind, FacetKind::X2 { .. }))
            .unwrap();
        let tau_face = gamma.facet_face(tau.facet);
        let sigma1 = find_edge_face(&gamma, &[3, 0, 0], &[2, 0, 2]).unwrap();
        let sigma2 = find_edge_face(&gamma, &[3, 0, 0], &[0, 2, 0]).unwrap();
        let ok = cancellation_check(
            &gamma,
            &fbar,
            &chi,
            &[
                GroupItem::Face(sigma1),
                GroupItem::Face(sigma2),
                GroupItem::Face(tau_face),
            ],
        )
        .unwrap();
        assert!(ok);
    }
}
