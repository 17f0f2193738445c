//! Formula-independent ground truth: solution counts of `f(x) = u mod p^i`,
//! truncated zeta series assembled from those counts, and nondegeneracy
//! checking over `F_p` by exhaustive torus search.
//!
//! The series come from the congruence-count expansion of the zeta functions
//! with conductor 1: the coefficient of `T^i` is
//! `sum_{u in (Z/p)^x} chi(u) M_{(0,)i+1}(p^i u) p^{-n(i+1)}`,
//! where `M_i(w)` counts solutions in `(Z/p^i)^n` and `M_{0,i}(w)` counts
//! solutions with all coordinates divisible by `p`.
//!
//! Counting enumerates `(Z/p^{k+1})^n` once and bins values for all levels
//! simultaneously: each point lands in exactly one `(level, unit)` bin,
//! determined by the lowest non-zero base-p digit of `f(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::charcyclo::{Character, Cyclo};
use crate::newton::NewtonPolyhedron;
use crate::polyring::{FpPolynomial, IntPolynomial};
use crate::{Error, Result};

/// Default enumeration budget: evaluated points per table.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Which faces a nondegeneracy check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NondegeneracyScope {
    Compact,
    All,
}

/// A singular torus point of a face polynomial.
#[derive(Clone, Debug)]
pub struct DegeneracyWitness {
    pub face: usize,
    pub point: Vec<u64>,
}

/// Exhaustive nondegeneracy check of `f mod p` with respect to the compact
/// faces (or all faces) of the Newton polyhedron of `f`. Faces are scanned
/// in increasing dimension so the smallest configuration surfaces first.
pub fn check_nondegenerate(
    f: &IntPolynomial,
    p: u64,
    scope: NondegeneracyScope,
) -> Result<Option<DegeneracyWitness>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fbar = f.reduce_mod_p(p)?;
    if f.support().iter().any(|ev| ev.0.iter().all(|&e| e == 0)) {
        // f(0) != 0: the Newton polyhedron at the origin is the translated
        // full orthant. Its only compact face is the origin vertex, whose
        // face polynomial is a non-zero constant, so the compact check holds
        // trivially; the all-faces check runs over the coordinate-subspace
        // restrictions.
        if fbar.is_zero() {
            return Ok(Some(DegeneracyWitness {
                face: 0,
                point: vec![1; f.n()],
            }));
        }
        return match scope {
            NondegeneracyScope::Compact => Ok(None),
            NondegeneracyScope::All => check_orthant_faces(&fbar),
        };
    }
    let gamma = NewtonPolyhedron::build(&f.support(), f.n())?;
    check_nondegenerate_on(&gamma, &fbar, scope)
}

/// All-faces check for a polyhedron that is the full orthant: the faces are
/// the coordinate-subspace slices.
fn check_orthant_faces(fbar: &FpPolynomial) -> Result<Option<DegeneracyWitness>> {
    let n = fbar.n();
    let p = fbar.p;
    for mask in 0u32..(1 << n) {
        let keep = |ev: &crate::polyring::ExponentVector| {
            ev.0.iter()
                .enumerate()
                .all(|(j, &e)| e == 0 || mask & (1 << j) != 0)
        };
        let terms: Vec<(Vec<u32>, u64)> = fbar
            .terms()
            .filter(|(ev, _)| keep(ev))
            .map(|(ev, c)| (ev.0.clone(), *c))
            .collect();
        let names: Vec<&str> = ["x", "y", "z", "w"][..n].to_vec();
        let f_tau = FpPolynomial::from_terms(p, &names, terms);
        if f_tau.is_zero() {
            continue;
        }
        let partials: Vec<FpPolynomial> = (0..n).map(|j| f_tau.partial(j)).collect();
        let mut point = vec![1u64; n];
        'outer: loop {
            if f_tau.eval(&point) == 0 && partials.iter().all(|g| g.eval(&point) == 0) {
                return Ok(Some(DegeneracyWitness {
                    face: mask as usize,
                    point,
                }));
            }
            for j in (0..n).rev() {
                point[j] += 1;
                if point[j] <= p - 1 {
                    continue 'outer;
                }
                point[j] = 1;
            }
            break;
        }
    }
    Ok(None)
}

pub fn check_nondegenerate_on(
    gamma: &NewtonPolyhedron,
    fbar: &FpPolynomial,
    scope: NondegeneracyScope,
) -> Result<Option<DegeneracyWitness>> {
    let n = gamma.n;
    let p = fbar.p;
    for face in &gamma.faces {
        if scope == NondegeneracyScope::Compact && !face.compact {
            continue;
        }
        let f_tau = fbar.restrict_to_face(gamma, face.id)?;
        if f_tau.is_zero() {
            // the zero polynomial is singular everywhere on the torus
            return Ok(Some(DegeneracyWitness {
                face: face.id,
                point: vec![1; n],
            }));
        }
        let partials: Vec<FpPolynomial> = (0..n).map(|j| f_tau.partial(j)).collect();
        // lexicographic scan so the smallest witness surfaces first
        let mut point = vec![1u64; n];
        'outer: loop {
            if f_tau.eval(&point) == 0 && partials.iter().all(|g| g.eval(&point) == 0) {
                return Ok(Some(DegeneracyWitness {
                    face: face.id,
                    point,
                }));
            }
            for j in (0..n).rev() {
                point[j] += 1;
                if point[j] <= p - 1 {
                    continue 'outer;
                }
                point[j] = 1;
            }
            break;
        }
    }
    Ok(None)
}

/// The sublist of candidate shifts `c` for which `f(.., x_j - c, ..)` passes
/// the compact-face nondegeneracy check mod `p`.
pub fn shifted_nondegenerate_scan(
    f: &IntPolynomial,
    j: usize,
    candidates: &[i64],
    p: u64,
) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for &c in candidates {
        let shifted = f.shift_variable(j, c);
        if shifted.is_zero() {
            continue;
        }
        // a shift can move the origin into the support; such shifts fail the
        // polyhedron preconditions and are simply not "passing"
        match check_nondegenerate(&shifted, p, NondegeneracyScope::Compact) {
            Ok(None) => out.push(c),
            Ok(Some(_)) | Err(Error::OriginInSupport) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn pow_u128(base: u64, exp: u32) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc * base as u128)
}

/// Largest series depth `k` with `p^{n(k+1)} <= budget`.
pub fn auto_depth(p: u64, n: usize, budget: u128) -> Result<usize> {
    let mut k: i64 = -1;
    let mut total = 1u128;
    loop {
        let mut next = total;
        let mut overflow = false;
        for _ in 0..n {
            next = match next.checked_mul(p as u128) {
                Some(v) => v,
                None => {
                    overflow = true;
                    break;
                }
            };
        }
        if overflow || next > budget {
            break;
        }
        total = next;
        k += 1;
    }
    if k < 0 {
        return Err(Error::BudgetExceeded {
            required: pow_u128(p, n as u32),
            budget,
        });
    }
    Ok(k as usize)
}

/// Full solution-count table at one level: `M_i(u)` (or the restricted
/// `M_{0,i}(u)`) for every `u in Z/p^i`.
pub fn count_solutions(
    f: &IntPolynomial,
    p: u64,
    level: u32,
    restricted: bool,
    budget: u128,
) -> Result<Vec<BigInt>> {
    if !crate::polyring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let n = f.n();
    let modulus = pow_u128(p, level);
    if modulus > u64::MAX as u128 / modulus.max(1) {
        return Err(Error::BudgetExceeded {
            required: modulus,
            budget,
        });
    }
    let modulus = modulus as u64;
    let coords = if restricted {
        level.saturating_sub(1)
    } else {
        level
    };
    let points = pow_u128(p, coords * n as u32);
    if points > budget {
        return Err(Error::BudgetExceeded {
            required: points,
            budget,
        });
    }
    let fm = reduce_terms(f, modulus);
    let mut counts = vec![0u64; modulus as usize];
    let coord_count = pow_u128(p, coords) as u64;
    let stride = if restricted { p } else { 1 };
    let mut point = vec![0u64; n];
    let mut counter = vec![0u64; n];
    'outer: loop {
        let v = eval_terms(&fm, &point, modulus);
        counts[v as usize] += 1;
        for j in 0..n {
            counter[j] += 1;
            point[j] += stride;
            if counter[j] < coord_count {
                continue 'outer;
            }
            counter[j] = 0;
            point[j] = 0;
        }
        break;
    }
    Ok(counts.into_iter().map(BigInt::from).collect())
}

/// Terms of `f` reduced modulo an arbitrary modulus (not necessarily prime).
fn reduce_terms(f: &IntPolynomial, modulus: u64) -> Vec<(Vec<u32>, u64)> {
    let m = BigInt::from(modulus);
    f.terms()
        .filter_map(|(ev, c)| {
            let mut r = c % &m;
            if r < BigInt::zero() {
                r += &m;
            }
            let r: u64 = (&r).try_into().unwrap();
            if r == 0 {
                None
            } else {
                Some((ev.0.clone(), r))
            }
        })
        .collect()
}

fn eval_terms(terms: &[(Vec<u32>, u64)], point: &[u64], modulus: u64) -> u64 {
    let mut acc: u64 = 0;
    for (exps, c) in terms {
        let mut t = *c;
        for (j, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            t = mul_mod(t, pow_mod64(point[j], e, modulus), modulus);
        }
        acc = (acc + t) % modulus;
    }
    acc
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod64(mut base: u64, mut exp: u32, m: u64) -> u64 {
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Binned unit counts for all levels `1..=k+1` at once. `bins[i-1][u-1]`
/// holds the number of points `x` of `(Z/p^{k+1})^n` (resp. of
/// `(pZ/p^{k+1})^n`) with `f(x) = p^{i-1} u  mod p^i` and
/// `f(x) != 0 mod p^i` for the lower levels, i.e. lowest non-zero digit
/// `u` at position `i-1`.
#[derive(Clone, Debug)]
pub struct CountTable {
    pub p: u64,
    pub n: usize,
    pub depth: usize,
    full_bins: Vec<Vec<u64>>,
    restricted_bins: Vec<Vec<u64>>,
}

impl CountTable {
    /// `M_{i}(p^{i-1} u)` as an exact integer (level `i >= 1`, unit `u`).
    pub fn m_full(&self, level: usize, u: u64) -> BigInt {
        self.m_from(&self.full_bins, level, u, false)
    }

    /// `M_{0,i}(p^{i-1} u)`.
    pub fn m_restricted(&self, level: usize, u: u64) -> BigInt {
        self.m_from(&self.restricted_bins, level, u, true)
    }

    fn m_from(&self, bins: &[Vec<u64>], level: usize, u: u64, restricted: bool) -> BigInt {
        let raw = BigInt::from(bins[level - 1][u as usize - 1]);
        // each solution mod p^level lifts p^{n(depth+1-level)} times in the
        // enumeration modulus p^{depth+1}
        let lift = num_traits::pow::pow(BigInt::from(self.p), self.n * (self.depth + 1 - level));
        let _ = restricted;
        let q = &raw / &lift;
        debug_assert!((&q * &lift) == raw, "lift count must divide exactly");
        q
    }
}

/// Build the binned count table for series depth `k`.
pub fn count_table(f: &IntPolynomial, p: u64, k: usize, budget: u128) -> Result<CountTable> {
    if !crate::polyring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.n();
    let levels = k + 1;
    let points = pow_u128(p, (levels * n) as u32);
    if points > budget {
        return Err(Error::BudgetExceeded {
            required: points,
            budget,
        });
    }
    let modulus = pow_u128(p, levels as u32) as u64;
    let fm = reduce_terms(f, modulus);

    let bin = |restricted: bool| -> Vec<Vec<u64>> {
        let mut bins = vec![vec![0u64; (p - 1) as usize]; levels];
        let coord_count = if restricted { modulus / p } else { modulus };
        let stride = if restricted { p } else { 1 };
        let mut point = vec![0u64; n];
        let mut counter = vec![0u64; n];
        'outer: loop {
            let v = eval_terms(&fm, &point, modulus);
            if v != 0 {
                // lowest non-zero base-p digit
                let mut w = v;
                let mut lvl = 0usize;
                while w % p == 0 {
                    w /= p;
                    lvl += 1;
                }
                if lvl < levels {
                    bins[lvl][(w % p) as usize - 1] += 1;
                }
            }
            for j in 0..n {
                counter[j] += 1;
                point[j] += stride;
                if counter[j] < coord_count {
                    continue 'outer;
                }
                counter[j] = 0;
                point[j] = 0;
            }
            break;
        }
        bins
    };

    Ok(CountTable {
        p,
        n,
        depth: k,
        full_bins: bin(false),
        restricted_bins: bin(true),
    })
}

/// Truncated zeta series from first principles: `k+1` exact coefficients.
pub fn truncated_series(
    f: &IntPolynomial,
    p: u64,
    chi: &Character,
    k: usize,
    local: bool,
    budget: u128,
) -> Result<Vec<Cyclo>> {
    let table = count_table(f, p, k, budget)?;
    Ok(series_from_table(&table, chi, local))
}

/// Assemble the series from a prebuilt table (the table is
/// character-independent, so sweeps over characters reuse it).
pub fn series_from_table(table: &CountTable, chi: &Character, local: bool) -> Vec<Cyclo> {
    let p = table.p;
    let n = table.n;
    let mut out = Vec::with_capacity(table.depth + 1);
    for i in 0..=table.depth {
        let level = i + 1;
        let scale = BigRational::new(
            BigInt::one(),
            num_traits::pow::pow(BigInt::from(p), n * level),
        );
        let mut acc = Cyclo::zero(chi.d);
        for u in 1..p {
            let m = if local {
                table.m_restricted(level, u)
            } else {
                table.m_full(level, u)
            };
            if m.is_zero() {
                continue;
            }
            let term = chi.eval(u).scale(&(BigRational::from(m) * &scale));
            acc = acc.add(&term);
        }
        out.push(acc);
    }
    out
}
