//! The Igusa zeta functions as exact rational functions in `T = q^{-s}`.
//!
//! Every `q^{nu + N s}` becomes `q^nu T^{-N}`; clearing denominators leaves a
//! ratio of polynomials in `T` over a cyclotomic field, with the denominator
//! kept factored as a product of `(q^nu - T^N)` so pole families stay
//! identifiable through arithmetic. Expansion happens only inside reduction
//! and series extraction.
//!
//! The generating function of a dual cone is
//! `S(Delta) = sum_{a in Z^n cap Delta} q^{-nu(a)} T^{N(a)}`,
//! computed by splitting the open cone into relatively open simplicial
//! pieces; a piece with generators `a_i` and box points `h` (coefficients in
//! `(0,1]`) contributes
//! `sum_h q^{sum nu_i - nu(h)} T^{N(h)} / prod_i (q^{nu_i} - T^{N_i})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::charcyclo::{l_tau, Character, Cyclo};
use crate::lattice::{fundamental_points, subdivide_cone};
use crate::newton::NewtonPolyhedron;
use crate::oracle;
use crate::polyring::IntPolynomial;
use crate::{Error, Result};

/// Polynomial in `T` with cyclotomic coefficients (index = power of `T`).
#[derive(Clone, Debug)]
pub struct PolyT {
    pub coeffs: Vec<Cyclo>,
}

impl PolyT {
    pub fn zero() -> Self {
        PolyT { coeffs: vec![] }
    }

    pub fn constant(c: Cyclo) -> Self {
        let mut p = PolyT { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn one() -> Self {
        Self::constant(Cyclo::one(1))
    }

    pub fn monomial(c: Cyclo, power: usize) -> Self {
        let mut coeffs = vec![Cyclo::zero(1); power + 1];
        coeffs[power] = c;
        let mut p = PolyT { coeffs };
        p.normalize();
        p
    }

    pub fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Cyclo {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(1))
    }

    pub fn add(&self, other: &PolyT) -> PolyT {
        let mut coeffs = Vec::with_capacity(self.coeffs.len().max(other.coeffs.len()));
        for i in 0..self.coeffs.len().max(other.coeffs.len()) {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        let mut p = PolyT { coeffs };
        p.normalize();
        p
    }

    pub fn neg(&self) -> PolyT {
        PolyT {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &PolyT) -> PolyT {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PolyT) -> PolyT {
        if self.is_zero() || other.is_zero() {
            return PolyT::zero();
        }
        let mut coeffs = vec![Cyclo::zero(1); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut p = PolyT { coeffs };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Cyclo) -> PolyT {
        if c.is_zero() {
            return PolyT::zero();
        }
        let mut p = PolyT {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        };
        p.normalize();
        p
    }

    /// Exact division with remainder over the coefficient field.
    pub fn div_rem(&self, den: &PolyT) -> Result<(PolyT, PolyT)> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let lead_inv = den.coeffs.last().unwrap().inv()?;
        let db = den.degree();
        let mut rem = self.clone();
        let mut quot = PolyT::zero();
        while !rem.is_zero() && rem.degree() >= db {
            let k = rem.degree() - db;
            let c = rem.coeffs.last().unwrap().mul(&lead_inv);
            let term = PolyT::monomial(c, k);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(den));
        }
        Ok((quot, rem))
    }

    /// Monic gcd over the coefficient field.
    pub fn gcd(&self, other: &PolyT) -> Result<PolyT> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lead_inv = a.coeffs.last().unwrap().inv()?;
        Ok(a.scale(&lead_inv))
    }

    pub fn equals(&self, other: &PolyT) -> bool {
        self.sub(other).is_zero()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.coeffs.iter().map(|c| c.to_strings()).collect()
    }
}

/// The polynomial `q^nu - T^N` (for `N = 0`: the constant `q^nu - 1`).
pub fn family_poly(q: u64, nu: i64, n_dist: i64) -> PolyT {
    let qnu = BigRational::from(num_traits::pow::pow(BigInt::from(q), nu as usize));
    if n_dist == 0 {
        return PolyT::constant(Cyclo::from_rational(qnu - BigRational::one()));
    }
    let mut coeffs = vec![Cyclo::zero(1); n_dist as usize + 1];
    coeffs[0] = Cyclo::from_rational(qnu);
    coeffs[n_dist as usize] = Cyclo::from_integer(-1);
    PolyT { coeffs }
}

/// A rational function in `T` with factored denominator
/// `prod (q^nu - T^N)^mult`. `extra_denominator` only appears after
/// reduction when cancellation splits a family factor.
#[derive(Clone, Debug)]
pub struct RationalFunctionT {
    pub q: u64,
    pub numerator: PolyT,
    pub denominator: BTreeMap<(i64, i64), u32>,
    pub extra_denominator: Option<PolyT>,
}

impl RationalFunctionT {
    pub fn zero(q: u64) -> Self {
        RationalFunctionT {
            q,
            numerator: PolyT::zero(),
            denominator: BTreeMap::new(),
            extra_denominator: None,
        }
    }

    pub fn one(q: u64) -> Self {
        RationalFunctionT {
            q,
            numerator: PolyT::one(),
            denominator: BTreeMap::new(),
            extra_denominator: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn expanded_denominator(&self) -> PolyT {
        let mut d = PolyT::one();
        for (&(nu, n_dist), &mult) in &self.denominator {
            let f = family_poly(self.q, nu, n_dist);
            for _ in 0..mult {
                d = d.mul(&f);
            }
        }
        if let Some(extra) = &self.extra_denominator {
            d = d.mul(extra);
        }
        d
    }

    pub fn mul_cyclo(&self, c: &Cyclo) -> Self {
        RationalFunctionT {
            q: self.q,
            numerator: self.numerator.scale(c),
            denominator: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.denominator.clone()
            },
            extra_denominator: if c.is_zero() {
                None
            } else {
                self.extra_denominator.clone()
            },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "mismatched q");
        assert!(
            self.extra_denominator.is_none() && other.extra_denominator.is_none(),
            "arithmetic on reduced values with split factors is not supported"
        );
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut denom: BTreeMap<(i64, i64), u32> = self.denominator.clone();
        for (k, &m) in &other.denominator {
            let e = denom.entry(*k).or_insert(0);
            *e = (*e).max(m);
        }
        let scale_up = |rf: &Self| -> PolyT {
            let mut num = rf.numerator.clone();
            for (k, &m) in &denom {
                let have = rf.denominator.get(k).copied().unwrap_or(0);
                if m > have {
                    let f = family_poly(rf.q, k.0, k.1);
                    for _ in 0..(m - have) {
                        num = num.mul(&f);
                    }
                }
            }
            num
        };
        let numerator = scale_up(self).add(&scale_up(other));
        let mut out = RationalFunctionT {
            q: self.q,
            numerator,
            denominator: denom,
            extra_denominator: None,
        };
        if out.numerator.is_zero() {
            out.denominator.clear();
        }
        out
    }

    /// Exact equality as rational functions (cross multiplication).
    pub fn equivalent(&self, other: &Self) -> bool {
        let lhs = self.numerator.mul(&other.expanded_denominator());
        let rhs = other.numerator.mul(&self.expanded_denominator());
        lhs.equals(&rhs)
    }

    /// First `k+1` Taylor coefficients at `T = 0`.
    pub fn series_expand(&self, k: usize) -> Result<Vec<Cyclo>> {
        let den = self.expanded_denominator();
        if den.is_zero() || den.coeff(0).is_zero() {
            return Err(Error::ZeroInverse);
        }
        let d0_inv = den.coeff(0).inv()?;
        let mut out = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let mut acc = self.numerator.coeff(j);
            for i in 1..=j {
                acc = acc.sub(&den.coeff(i).mul(&out[j - i]));
            }
            out.push(acc.mul(&d0_inv));
        }
        Ok(out)
    }

    /// Cancel the gcd of numerator and expanded denominator, then re-express
    /// the reduced denominator against the factored families (bookkeeping;
    /// any residue that is not a product of family polynomials is carried in
    /// `extra_denominator`).
    pub fn reduce(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero(self.q));
        }
        let den = self.expanded_denominator();
        let g = self.numerator.gcd(&den)?;
        let (mut num, mut den) = if g.degree() == 0 {
            (self.numerator.clone(), den)
        } else {
            let (n2, r1) = self.numerator.div_rem(&g)?;
            debug_assert!(r1.is_zero());
            let (d2, r2) = den.div_rem(&g)?;
            debug_assert!(r2.is_zero());
            (n2, d2)
        };
        // re-factor against the original families, largest T-degree first
        let mut families: Vec<(i64, i64, u32)> = self
            .denominator
            .iter()
            .map(|(&(nu, nd), &m)| (nu, nd, m))
            .collect();
        families.sort_by_key(|&(nu, nd, _)| (std::cmp::Reverse(nd), std::cmp::Reverse(nu)));
        let mut refactored: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        for (nu, nd, mult) in families {
            let f = family_poly(self.q, nu, nd);
            let mut used = 0;
            while used < mult {
                let (qt, rem) = den.div_rem(&f)?;
                if rem.is_zero() && !qt.is_zero() {
                    den = qt;
                    used += 1;
                } else {
                    break;
                }
            }
            if used > 0 {
                refactored.insert((nu, nd), used);
            }
        }
        let extra = if den.degree() == 0 {
            // fold the remaining constant into the numerator
            let c_inv = den.coeff(0).inv()?;
            num = num.scale(&c_inv);
            None
        } else {
            Some(den)
        };
        Ok(RationalFunctionT {
            q: self.q,
            numerator: num,
            denominator: refactored,
            extra_denominator: extra,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "variable": "T",
            "numerator": self.numerator.to_strings(),
            "denominator_factors": self.denominator.iter().map(|(&(nu, n), &m)| {
                serde_json::json!({"nu": nu, "N": n, "mult": m})
            }).collect::<Vec<_>>(),
            "denominator_extra": self.extra_denominator.as_ref().map(|e| e.to_strings()),
        })
    }
}

/// `S(Delta)` for the open cone strictly positively spanned by `generators`,
/// with `N(.)` evaluated against the polyhedron and `nu(.)` the coordinate
/// sum.
pub fn s_cone(
    gamma: &NewtonPolyhedron,
    generators: &[Vec<i64>],
    q: u64,
) -> Result<RationalFunctionT> {
    let pieces = subdivide_cone(generators)?;
    let mut acc = RationalFunctionT::zero(q);
    for piece in pieces {
        let mut denom: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        let mut nu_total: i64 = 0;
        for g in &piece.generators {
            let nu: i64 = g.iter().sum();
            let n_dist = gamma
                .vertices
                .iter()
                .map(|v| crate::newton::dot(g, v))
                .min()
                .expect("non-empty polyhedron");
            nu_total += nu;
            *denom.entry((nu, n_dist)).or_insert(0) += 1;
        }
        let mut numerator = PolyT::zero();
        for h in fundamental_points(&piece)? {
            let nu_h: i64 = h.iter().sum();
            let n_h = gamma
                .vertices
                .iter()
                .map(|v| crate::newton::dot(&h, v))
                .min()
                .unwrap();
            let qpow = BigRational::from(num_traits::pow::pow(
                BigInt::from(q),
                (nu_total - nu_h) as usize,
            ));
            numerator = numerator.add(&PolyT::monomial(Cyclo::from_rational(qpow), n_h as usize));
        }
        acc = acc.add(&RationalFunctionT {
            q,
            numerator,
            denominator: denom,
            extra_denominator: None,
        });
    }
    Ok(acc)
}

/// Whether to verify nondegeneracy before applying the face formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NondegeneracyPolicy {
    Check,
    /// Skip the check; output is untrusted (experiments only).
    Force,
}

fn prepare(
    f: &IntPolynomial,
    p: u64,
    scope: oracle::NondegeneracyScope,
    policy: NondegeneracyPolicy,
) -> Result<(NewtonPolyhedron, crate::polyring::FpPolynomial)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let support = f.support();
    if support.iter().any(|ev| ev.0.iter().all(|&e| e == 0)) {
        return Err(Error::OriginInSupport);
    }
    let gamma = NewtonPolyhedron::build(&support, f.n())?;
    let fbar = f.reduce_mod_p(p)?;
    if policy == NondegeneracyPolicy::Check {
        if let Some(w) = oracle::check_nondegenerate(f, p, scope)? {
            return Err(Error::Degenerate {
                p,
                face: w.face,
                witness: w.point,
            });
        }
    }
    Ok((gamma, fbar))
}

/// The single face term `L_tau * S(Delta_tau)`.
pub fn face_term(
    gamma: &NewtonPolyhedron,
    fbar: &crate::polyring::FpPolynomial,
    chi: &Character,
    face: usize,
) -> Result<RationalFunctionT> {
    let q = chi.p;
    let f_tau = fbar.restrict_to_face(gamma, face)?;
    let l = l_tau(&f_tau, chi, gamma.n);
    if l.is_zero() {
        return Ok(RationalFunctionT::zero(q));
    }
    let s = if gamma.is_full_face(face) {
        RationalFunctionT::one(q)
    } else {
        s_cone(gamma, &gamma.dual_cone(face)?, q)?
    };
    Ok(s.mul_cyclo(&l))
}

/// Local Igusa zeta function: sum of `L_tau S(Delta_tau)` over the compact
/// faces. Requires (and checks) nondegeneracy over `F_p` with respect to the
/// compact faces.
pub fn igusa_local(
    f: &IntPolynomial,
    p: u64,
    chi: &Character,
    policy: NondegeneracyPolicy,
) -> Result<RationalFunctionT> {
    let (gamma, fbar) = prepare(f, p, oracle::NondegeneracyScope::Compact, policy)?;
    igusa_local_on(&gamma, &fbar, chi)
}

/// Local zeta function against a prebuilt polyhedron (no nondegeneracy
/// check; the caller owns the hypothesis).
pub fn igusa_local_on(
    gamma: &NewtonPolyhedron,
    fbar: &crate::polyring::FpPolynomial,
    chi: &Character,
) -> Result<RationalFunctionT> {
    let mut acc = RationalFunctionT::zero(chi.p);
    for face in gamma.compact_faces() {
        acc = acc.add(&face_term(gamma, fbar, chi, face.id)?);
    }
    Ok(acc)
}

/// Global Igusa zeta function: sum over all faces including `Gamma_0` itself
/// (whose `S` is 1). Requires nondegeneracy with respect to all faces.
pub fn igusa_global(
    f: &IntPolynomial,
    p: u64,
    chi: &Character,
    policy: NondegeneracyPolicy,
) -> Result<RationalFunctionT> {
    let (gamma, fbar) = prepare(f, p, oracle::NondegeneracyScope::All, policy)?;
    igusa_global_on(&gamma, &fbar, chi)
}

/// Global zeta function against a prebuilt polyhedron.
pub fn igusa_global_on(
    gamma: &NewtonPolyhedron,
    fbar: &crate::polyring::FpPolynomial,
    chi: &Character,
) -> Result<RationalFunctionT> {
    let mut acc = RationalFunctionT::zero(chi.p);
    for face in &gamma.faces {
        acc = acc.add(&face_term(gamma, fbar, chi, face.id)?);
    }
    Ok(acc)
}

/// Pole families `(nu, N)` of facets that survive in the reduced function:
/// family reported iff the reduced denominator has a non-constant gcd with
/// `q^nu - T^N`. Only facets with `N > 0` define pole lines.
pub fn actual_pole_lines(
    reduced: &RationalFunctionT,
    gamma: &NewtonPolyhedron,
) -> Result<Vec<(i64, i64)>> {
    let den = reduced.expanded_denominator();
    let mut out = Vec::new();
    for fd in &gamma.facets {
        if fd.n_dist <= 0 {
            continue;
        }
        let key = (fd.nu, fd.n_dist);
        if out.contains(&key) {
            continue;
        }
        let fam = family_poly(reduced.q, fd.nu, fd.n_dist);
        let g = den.gcd(&fam)?;
        if g.degree() > 0 {
            out.push(key);
        }
    }
    out.sort();
    Ok(out)
}

/// Facets contributing candidate poles for a character of order `d`:
/// `ord(chi) | N(tau)`. Facets with `N = 0` are flagged; they never define
/// pole lines but still contribute terms to the global zeta function.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CandidatePole {
    pub facet: usize,
    pub nu: i64,
    #[serde(rename = "N")]
    pub n_dist: i64,
    pub n_zero: bool,
}

pub fn candidate_poles(gamma: &NewtonPolyhedron, d: u32) -> Vec<CandidatePole> {
    gamma
        .facets
        .iter()
        .enumerate()
        .filter(|(_, fd)| fd.n_dist % d as i64 == 0)
        .map(|(i, fd)| CandidatePole {
            facet: i,
            nu: fd.nu,
            n_dist: fd.n_dist,
            n_zero: fd.n_dist == 0,
        })
        .collect()
}

/// Bundled zeta computation: local and global functions, reduced, with
/// candidate and surviving pole lines.
#[derive(Clone, Debug)]
pub struct ZetaReport {
    pub p: u64,
    pub d: u32,
    pub k: u32,
    pub local: Option<RationalFunctionT>,
    pub global: Option<RationalFunctionT>,
    pub candidates: Vec<CandidatePole>,
    pub actual_local: Vec<(i64, i64)>,
    pub actual_global: Vec<(i64, i64)>,
}

pub fn zeta_report(
    f: &IntPolynomial,
    p: u64,
    chi: &Character,
    policy: NondegeneracyPolicy,
) -> Result<ZetaReport> {
    let support = f.support();
    let gamma = NewtonPolyhedron::build(&support, f.n())?;
    let candidates = candidate_poles(&gamma, chi.d);
    let local = igusa_local(f, p, chi, policy)?.reduce()?;
    let actual_local = actual_pole_lines(&local, &gamma)?;
    // the global function needs nondegeneracy on all faces; report it only
    // when that holds
    let (global, actual_global) = match igusa_global(f, p, chi, policy) {
        Ok(z) => {
            let z = z.reduce()?;
            let lines = actual_pole_lines(&z, &gamma)?;
            (Some(z), lines)
        }
        Err(Error::Degenerate { .. }) => (None, vec![]),
        Err(e) => return Err(e),
    };
    Ok(ZetaReport {
        p,
        d: chi.d,
        k: chi.k,
        local: Some(local),
        global,
        candidates,
        actual_local,
        actual_global,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn rat(n: i64, d: i64) -> Cyclo {
        Cyclo::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn gamma_of(text: &str, vars: &[&str]) -> NewtonPolyhedron {
        let f = parse_polynomial(text, vars).unwrap();
        NewtonPolyhedron::build(&f.support(), vars.len()).unwrap()
    }

    #[test]
    fn s_cone_ray() {
        // cusp segment: ray (3,2), nu=5, N=6 -> T^6/(q^5 - T^6)
        let g = gamma_of("x^2+y^3", &["x", "y"]);
        let s = s_cone(&g, &[vec![3, 2]], 3).unwrap();
        assert_eq!(s.denominator, BTreeMap::from([((5, 6), 1)]));
        assert!(s.numerator.equals(&PolyT::monomial(Cyclo::one(1), 6)));
    }

    #[test]
    fn s_cone_vertex_two_gens() {
        // cusp vertex (0,3): cone {(3,2),(1,0)}, box points (2,1),(4,2)
        // -> (T^6 + q^3 T^3) / ((q^5 - T^6)(q - 1))
        let g = gamma_of("x^2+y^3", &["x", "y"]);
        let s = s_cone(&g, &[vec![3, 2], vec![1, 0]], 3).unwrap();
        assert_eq!(s.denominator, BTreeMap::from([((5, 6), 1), ((1, 0), 1)]));
        let expected = PolyT::monomial(Cyclo::one(1), 6).add(&PolyT::monomial(rat(27, 1), 3));
        assert!(s.numerator.equals(&expected), "{:?}", s.numerator);
    }

    #[test]
    fn s_cone_unimodular_ray() {
        // polyhedron of x^2 in one variable: ray e_1 with N = 2
        let g = gamma_of("x^2", &["x"]);
        let s = s_cone(&g, &[vec![1]], 5).unwrap();
        assert_eq!(s.denominator, BTreeMap::from([((1, 2), 1)]));
        assert!(s.numerator.equals(&PolyT::monomial(Cyclo::one(1), 2)));
    }

    #[test]
    fn igusa_local_x2() {
        // f = x^2, p=3, quadratic character: (2/3) T^2 / (3 - T^2)
        let f = parse_polynomial("x^2", &["x"]).unwrap();
        let chi = Character::new(3, 2, 1).unwrap();
        let z = igusa_local(&f, 3, &chi, NondegeneracyPolicy::Check).unwrap();
        // equivalent to 2T^2/(9 - 3T^2)
        let expected = RationalFunctionT {
            q: 3,
            numerator: PolyT::monomial(rat(2, 3), 2),
            denominator: BTreeMap::from([((1, 2), 1)]),
            extra_denominator: None,
        };
        assert!(z.equivalent(&expected));

        // p=5, order-4: identically zero
        let chi4 = Character::new(5, 4, 1).unwrap();
        let z = igusa_local(&f, 5, &chi4, NondegeneracyPolicy::Check).unwrap();
        assert!(z.is_zero());

        // f = x: zero for every non-trivial character
        let fx = parse_polynomial("x", &["x"]).unwrap();
        for chi in Character::all_nontrivial(7).unwrap() {
            let z = igusa_local(&fx, 7, &chi, NondegeneracyPolicy::Check).unwrap();
            assert!(z.is_zero());
        }
    }

    #[test]
    fn igusa_global_x2_closed_form_and_series() {
        let f = parse_polynomial("x^2", &["x"]).unwrap();
        let chi = Character::new(3, 2, 1).unwrap();
        let z = igusa_global(&f, 3, &chi, NondegeneracyPolicy::Check).unwrap();
        // (1 - q^{-1}) / (1 - q^{-1} T^2) = 2/(3 - T^2)
        let expected = RationalFunctionT {
            q: 3,
            numerator: PolyT::constant(rat(2, 1)),
            denominator: BTreeMap::from([((1, 2), 1)]),
            extra_denominator: None,
        };
        assert!(z.equivalent(&expected));
        let series = z.series_expand(4).unwrap();
        let want = [rat(2, 3), rat(0, 1), rat(2, 9), rat(0, 1), rat(2, 27)];
        for (a, b) in series.iter().zip(&want) {
            assert!(a.equals(b));
        }
    }

    #[test]
    fn series_expand_geometric() {
        // T^6/(q^5 - T^6), q=3: T^6 -> 3^-5, T^12 -> 3^-10
        let r = RationalFunctionT {
            q: 3,
            numerator: PolyT::monomial(Cyclo::one(1), 6),
            denominator: BTreeMap::from([((5, 6), 1)]),
            extra_denominator: None,
        };
        let s = r.series_expand(12).unwrap();
        for (i, c) in s.iter().enumerate() {
            if i == 6 {
                assert!(c.equals(&rat(1, 243)));
            } else if i == 12 {
                assert!(c.equals(&rat(1, 59049)));
            } else {
                assert!(c.is_zero(), "index {i}");
            }
        }
        let zero = RationalFunctionT::zero(3);
        assert!(zero.series_expand(3).unwrap().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn reduce_examples() {
        // (q - T^2) / ((q - T^2)(q^2 - T^3)) -> 1 / (q^2 - T^3)
        let q = 5u64;
        let r = RationalFunctionT {
            q,
            numerator: family_poly(q, 1, 2),
            denominator: BTreeMap::from([((1, 2), 1), ((2, 3), 1)]),
            extra_denominator: None,
        };
        let red = r.reduce().unwrap();
        assert!(red.numerator.equals(&PolyT::one()));
        assert_eq!(red.denominator, BTreeMap::from([((2, 3), 1)]));
        assert!(red.extra_denominator.is_none());

        // already reduced: unchanged
        let r = RationalFunctionT {
            q,
            numerator: PolyT::monomial(Cyclo::one(1), 1),
            denominator: BTreeMap::from([((2, 3), 1)]),
            extra_denominator: None,
        };
        let red = r.reduce().unwrap();
        assert!(red.numerator.equals(&r.numerator));
        assert_eq!(red.denominator, r.denominator);

        // numerator divisible by the square of a multiplicity-1 factor:
        // factor removed, quotient retained
        let f12 = family_poly(q, 1, 2);
        let r = RationalFunctionT {
            q,
            numerator: f12.mul(&f12),
            denominator: BTreeMap::from([((1, 2), 1)]),
            extra_denominator: None,
        };
        let red = r.reduce().unwrap();
        assert!(red.denominator.is_empty());
        assert!(red.extra_denominator.is_none());
        assert!(red.numerator.equals(&f12));
    }

    #[test]
    fn pole_lines_x2() {
        let f = parse_polynomial("x^2", &["x"]).unwrap();
        let g = gamma_of("x^2", &["x"]);
        let chi = Character::new(3, 2, 1).unwrap();
        let z = igusa_global(&f, 3, &chi, NondegeneracyPolicy::Check)
            .unwrap()
            .reduce()
            .unwrap();
        assert_eq!(actual_pole_lines(&z, &g).unwrap(), vec![(1, 2)]);

        let chi4 = Character::new(5, 4, 1).unwrap();
        let z = igusa_global(&f, 5, &chi4, NondegeneracyPolicy::Check)
            .unwrap()
            .reduce()
            .unwrap();
        assert!(actual_pole_lines(&z, &g).unwrap().is_empty());
    }

    #[test]
    fn global_equals_local_plus_noncompact() {
        let f = parse_polynomial("x^2+y^3", &["x", "y"]).unwrap();
        let p = 7;
        let chi = Character::new(p, 6, 1).unwrap();
        let local = igusa_local(&f, p, &chi, NondegeneracyPolicy::Check).unwrap();
        let global = igusa_global(&f, p, &chi, NondegeneracyPolicy::Check).unwrap();
        let gamma = gamma_of("x^2+y^3", &["x", "y"]);
        let fbar = f.reduce_mod_p(p).unwrap();
        let mut acc = local.clone();
        for face in &gamma.faces {
            if !face.compact {
                acc = acc.add(&face_term(&gamma, &fbar, &chi, face.id).unwrap());
            }
        }
        assert!(acc.equivalent(&global));
    }

    #[test]
    fn reduce_preserves_value() {
        let f = parse_polynomial("x^2+y^3", &["x", "y"]).unwrap();
        for d in [2u32, 3, 6] {
            let chi = Character::new(7, d, 1).unwrap();
            for global in [false, true] {
                let z = if global {
                    igusa_global(&f, 7, &chi, NondegeneracyPolicy::Check).unwrap()
                } else {
                    igusa_local(&f, 7, &chi, NondegeneracyPolicy::Check).unwrap()
                };
                let red = z.reduce().unwrap();
                assert!(z.equivalent(&red), "d={d} global={global}");
                // reduced numerator and denominator are coprime
                if !red.is_zero() {
                    let g = red
                        .numerator
                        .gcd(&red.expanded_denominator())
                        .unwrap();
                    assert_eq!(g.degree(), 0, "d={d} global={global}");
                }
            }
        }
    }

    #[test]
    fn zeta_report_bundles_candidates_and_lines() {
        let f = parse_polynomial("x^2+y^3", &["x", "y"]).unwrap();
        let chi = Character::new(7, 6, 1).unwrap();
        let r = zeta_report(&f, 7, &chi, NondegeneracyPolicy::Check).unwrap();
        assert!(r.candidates.iter().any(|c| (c.nu, c.n_dist) == (5, 6)));
        for &(nu, nd) in r.actual_local.iter().chain(&r.actual_global) {
            assert!(r.candidates.iter().any(|c| (c.nu, c.n_dist) == (nu, nd)));
            assert_eq!(nd % 6, 0);
        }
        assert!(r.global.is_some());
    }

    #[test]
    fn degenerate_inputs_are_refused() {
        // (x+y)^2 is degenerate mod 3 on its compact facet
        let f = parse_polynomial("x^2+2x*y+y^2", &["x", "y"]).unwrap();
        let chi = Character::new(3, 2, 1).unwrap();
        match igusa_local(&f, 3, &chi, NondegeneracyPolicy::Check) {
            Err(Error::Degenerate { p: 3, .. }) => {}
            other => panic!("expected degeneracy refusal, got {other:?}"),
        }
        // forced: computes anyway
        assert!(igusa_local(&f, 3, &chi, NondegeneracyPolicy::Force).is_ok());
    }
}
