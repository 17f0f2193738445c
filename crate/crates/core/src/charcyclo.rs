//! Exact cyclotomic arithmetic, multiplicative characters of prime fields,
//! and torus character sums.
//!
//! An element of `Q(zeta_m)` is a rational coefficient vector of length
//! `phi(m)` in the power basis `1, zeta, .., zeta^{phi(m)-1}`, reduced modulo
//! the m-th cyclotomic polynomial. Values of different orders are promoted to
//! a common order dividing the lcm when they meet.
//!
//! Characters are parameterized by `(p, d, k)`: `d | p-1`, `gcd(k, d) = 1`,
//! and `chi(g) = zeta_d^k` for the smallest primitive root `g` mod `p`, with
//! `chi(0) = 0` by convention.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::gcd_u;
use crate::polyring::{pow_mod, FpPolynomial};
use crate::{Error, Result};

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the m-th cyclotomic polynomial, exact, via
/// `Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}`. Memoized: every basis
/// reduction consults it.
pub fn cyclotomic_polynomial(m: u32) -> std::sync::Arc<Vec<BigInt>> {
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<std::collections::BTreeMap<u32, Arc<Vec<BigInt>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(std::collections::BTreeMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    // numerator: product over d | m with mu(m/d) = 1; then divide by the
    // product with mu(m/d) = -1. Division is exact in Z[x].
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        match moebius(m / d) {
            1 => num = poly_mul_xd_minus_1(&num, d as usize),
            -1 => den = poly_mul_xd_minus_1(&den, d as usize),
            _ => {}
        }
    }
    let result = Arc::new(poly_div_exact(&num, &den));
    cache.lock().unwrap().insert(m, result.clone());
    result
}

fn moebius(mut n: u32) -> i32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly_mul_xd_minus_1(f: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + d];
    for (i, c) in f.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut num = num.to_vec();
    while num.last().is_some_and(|c| c.is_zero()) {
        num.pop();
    }
    let mut den = den.to_vec();
    while den.last().is_some_and(|c| c.is_zero()) {
        den.pop();
    }
    let dn = den.len() - 1;
    let lead = den[dn].clone();
    let mut quot = vec![BigInt::zero(); num.len().saturating_sub(dn)];
    while num.len() > dn {
        let k = num.len() - 1 - dn;
        let c = &num[num.len() - 1] / &lead;
        quot[k] = c.clone();
        for i in 0..=dn {
            let sub = &den[i] * &c;
            num[k + i] -= sub;
        }
        while num.last().is_some_and(|c| c.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            break;
        }
    }
    quot
}

/// An element of the cyclotomic field `Q(zeta_m)` in the power basis.
#[derive(Clone, Debug)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(order: u32) -> Self {
        Cyclo {
            order,
            coeffs: vec![BigRational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational_with_order(BigRational::one(), order)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_rational_with_order(r, 1)
    }

    pub fn from_rational_with_order(r: BigRational, order: u32) -> Self {
        let mut c = Cyclo::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// `zeta_order^exp`, reduced into the power basis.
    pub fn root_of_unity(order: u32, exp: u32) -> Self {
        let exp = (exp % order) as usize;
        let phi = euler_phi(order) as usize;
        let mut c = Cyclo::zero(order);
        if exp < phi {
            c.coeffs[exp] = BigRational::one();
            return c;
        }
        // reduce x^exp modulo Phi_order
        let mut poly = vec![BigRational::zero(); exp + 1];
        poly[exp] = BigRational::one();
        let reduced = reduce_mod_cyclotomic(&poly, order);
        c.coeffs = reduced;
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Promote to a multiple of the current order.
    pub fn promote(&self, order: u32) -> Cyclo {
        assert!(
            order % self.order == 0,
            "promotion target must be a multiple of the order"
        );
        if order == self.order {
            return self.clone();
        }
        let scale = (order / self.order) as usize;
        let mut poly = vec![BigRational::zero(); euler_phi(self.order) as usize * scale + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[i * scale] = c.clone();
            }
        }
        Cyclo {
            order,
            coeffs: reduce_mod_cyclotomic(&poly, order),
        }
    }

    fn common_order(&self, other: &Cyclo) -> u32 {
        let g = gcd_u(self.order as u64, other.order as u64) as u32;
        self.order / g * other.order
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let m = self.common_order(other);
        let a = self.promote(m);
        let b = other.promote(m);
        Cyclo {
            order: m,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        let m = self.common_order(other);
        let a = self.promote(m);
        let b = other.promote(m);
        let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        Cyclo {
            order: m,
            coeffs: reduce_mod_cyclotomic(&prod, m),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm modulo the
    /// cyclotomic polynomial (irreducible over Q).
    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if let Some(r) = self.is_rational() {
            return Ok(Cyclo::from_rational_with_order(r.recip(), self.order));
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        let (g, _, t) = poly_ext_gcd(&modulus, &self.coeffs);
        // g is a non-zero constant
        debug_assert!(g.len() == 1 && !g[0].is_zero());
        let scale = g[0].recip();
        let inv: Vec<BigRational> = t.iter().map(|c| c * &scale).collect();
        Ok(Cyclo {
            order: self.order,
            coeffs: reduce_mod_cyclotomic(&inv, self.order),
        })
    }

    pub fn equals(&self, other: &Cyclo) -> bool {
        self.sub(other).is_zero()
    }

    /// Serialize as a vector of exact rational strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}
impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "z{}", self.order)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

/// Reduce a rational polynomial modulo `Phi_m`, returning `phi(m)` coeffs.
fn reduce_mod_cyclotomic(poly: &[BigRational], m: u32) -> Vec<BigRational> {
    let phi = euler_phi(m) as usize;
    let modulus = cyclotomic_polynomial(m);
    debug_assert_eq!(modulus.len(), phi + 1);
    let mut work = poly.to_vec();
    while work.len() > phi {
        let top = work.len() - 1;
        let c = work[top].clone();
        if !c.is_zero() {
            // x^top = x^{top-phi} * (x^phi - Phi_m + ... ), i.e. subtract
            // c * x^{top-phi} * Phi_m (monic)
            let base = top - phi;
            for (i, mc) in modulus.iter().enumerate() {
                let sub = BigRational::from(mc.clone()) * &c;
                work[base + i] -= sub;
            }
        }
        work.pop();
        while work.len() > phi && work.last().is_some_and(|c| c.is_zero()) {
            work.pop();
        }
    }
    work.resize(phi, BigRational::zero());
    work
}

/// Extended gcd of rational polynomials: returns (g, s, t) with
/// `s*a + t*b = g`, g the gcd normalized as encountered.
fn poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let trim = |mut v: Vec<BigRational>| {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        if v.is_empty() {
            v.push(BigRational::zero());
        }
        v
    };
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_div_rem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = trim(r);
        s0 = s1;
        s1 = trim(s2);
        t0 = t1;
        t1 = trim(t2);
    }
    (r0, s0, t0)
}

fn poly_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while rem.len() > db || (rem.len() == b.len() && rem.len() == 1 && !rem[0].is_zero() && db == 0)
    {
        if rem.iter().all(|c| c.is_zero()) {
            break;
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
        if rem.len() <= db {
            break;
        }
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lead;
        if k >= quot.len() {
            quot.resize(k + 1, BigRational::zero());
        }
        quot[k] = c.clone();
        for i in 0..=db {
            let sub = &b[i] * &c;
            rem[k + i] -= sub;
        }
        rem.pop();
    }
    if rem.is_empty() {
        rem.push(BigRational::zero());
    }
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    out.resize(out.len().max(b.len()), BigRational::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// A multiplicative character of `F_p^x` of order `d`, with `chi(0) = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct Character {
    pub p: u64,
    pub d: u32,
    pub k: u32,
    pub generator: u64,
    #[serde(skip)]
    dlog: Vec<u32>,
}

impl Character {
    pub fn new(p: u64, d: u32, k: u32) -> Result<Self> {
        if !crate::polyring::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d < 2 || (p - 1) % d as u64 != 0 {
            return Err(Error::InvalidCharacter(format!(
                "order {d} does not divide p-1 = {}",
                p - 1
            )));
        }
        if gcd_u(k as u64, d as u64) != 1 {
            return Err(Error::InvalidCharacter(format!(
                "index {k} is not coprime to the order {d}"
            )));
        }
        let g = smallest_primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for e in 0..(p - 1) as u32 {
            dlog[x as usize] = e;
            x = x * g % p;
        }
        Ok(Character {
            p,
            d,
            k: k % d,
            generator: g,
            dlog,
        })
    }

    /// All non-trivial characters of `F_p^x`, grouped as `(d, k)` pairs.
    pub fn all_nontrivial(p: u64) -> Result<Vec<Character>> {
        if !crate::polyring::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut out = Vec::new();
        for d in 2..=(p - 1) as u32 {
            if (p - 1) % d as u64 != 0 {
                continue;
            }
            for k in 1..d {
                if gcd_u(k as u64, d as u64) == 1 {
                    out.push(Character::new(p, d, k)?);
                }
            }
        }
        Ok(out)
    }

    /// `chi(x)` as an exact cyclotomic value; `chi(0) = 0`.
    pub fn eval(&self, x: u64) -> Cyclo {
        match self.eval_exponent(x) {
            None => Cyclo::zero(self.d),
            Some(e) => Cyclo::root_of_unity(self.d, e),
        }
    }

    /// The exponent `e` with `chi(x) = zeta_d^e`, or `None` for `x = 0`.
    pub fn eval_exponent(&self, x: u64) -> Option<u32> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        Some(((self.k as u64 * self.dlog[x as usize] as u64) % self.d as u64) as u32)
    }

    /// Value table `chi(0..p)` as cyclotomic elements.
    pub fn value_table(&self) -> Vec<Cyclo> {
        (0..self.p).map(|x| self.eval(x)).collect()
    }
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            factors.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'g: for g in 2..p {
        for &q in &factors {
            if pow_mod(g, ((p - 1) / q) as u32, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

// ---------------------------------------------------------------------------
// Torus character sums
// ---------------------------------------------------------------------------

/// Count, for each residue `c`, the torus points with `f(x) = c`. These
/// counts determine every character sum of `f` without re-enumeration.
pub fn torus_value_counts(f: &FpPolynomial) -> Vec<u64> {
    let p = f.p;
    let n = f.n();
    let mut counts = vec![0u64; p as usize];
    let mut point = vec![1u64; n];
    if n == 0 {
        return counts;
    }
    'outer: loop {
        counts[f.eval(&point) as usize] += 1;
        for j in 0..n {
            point[j] += 1;
            if point[j] <= p - 1 {
                continue 'outer;
            }
            point[j] = 1;
        }
        break;
    }
    counts
}

/// `sum_{x in (F_p^x)^n} chi(f(x))`, exact.
pub fn raw_char_sum(f: &FpPolynomial, chi: &Character) -> Cyclo {
    debug_assert_eq!(f.p, chi.p);
    let counts = torus_value_counts(f);
    char_sum_from_counts(&counts, chi)
}

/// Assemble `sum_c counts[c] * chi(c)` grouped by the exponent of `zeta_d`.
pub fn char_sum_from_counts(counts: &[u64], chi: &Character) -> Cyclo {
    let mut by_exp = vec![BigInt::zero(); chi.d as usize];
    for (c, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        if let Some(e) = chi.eval_exponent(c as u64) {
            by_exp[e as usize] += BigInt::from(count);
        }
    }
    let mut acc = Cyclo::zero(chi.d);
    for (e, c) in by_exp.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = Cyclo::root_of_unity(chi.d, e as u32).scale(&BigRational::from(c.clone()));
        acc = acc.add(&term);
    }
    acc
}

/// `L_tau = q^{-n} * raw_char_sum(f_tau, chi)` with `q = p`.
pub fn l_tau(f_tau: &FpPolynomial, chi: &Character, n: usize) -> Cyclo {
    let raw = raw_char_sum(f_tau, chi);
    let qn = BigRational::new(BigInt::one(), num_traits::pow::pow(BigInt::from(chi.p), n));
    raw.scale(&qn)
}

// ---------------------------------------------------------------------------
// Exhaustive character-sum identity sweeps
// ---------------------------------------------------------------------------

/// Outcome of one identity sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub identity: String,
    pub ranges: BTreeMap<String, String>,
    pub cases_checked: u64,
    pub counterexample: Option<String>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Hyperplane vanishing: if every exponent of `f` satisfies `a.k = N` and
/// `ord(chi)` does not divide `N`, the full torus sum vanishes. Checked on
/// random hyperplane-supported polynomials.
pub fn sweep_hyperplane_vanishing(
    primes: &[u64],
    per_char: usize,
    rng: &mut impl rand::Rng,
) -> SweepReport {
    let mut cases = 0u64;
    let mut counterexample = None;
    'all: for &p in primes {
        let chars = Character::all_nontrivial(p).unwrap();
        for chi in &chars {
            let mut produced = 0usize;
            while produced < per_char {
                let n = rng.gen_range(1..=3usize);
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4i64)).collect();
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                let n_dist = rng.gen_range(1..=16i64);
                if n_dist % chi.d as i64 == 0 {
                    continue;
                }
                // sample exponent vectors on the hyperplane a.k = N
                let mut support = Vec::new();
                let mut guard = 0;
                while support.len() < 3 && guard < 200 {
                    guard += 1;
                    let k: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=8u32)).collect();
                    let s: i64 = k.iter().zip(&a).map(|(&e, &w)| e as i64 * w).sum();
                    if s == n_dist && !support.contains(&k) {
                        support.push(k);
                    }
                }
                if support.is_empty() {
                    continue;
                }
                let vars = ["x", "y", "z"];
                let terms: Vec<(Vec<u32>, u64)> = support
                    .into_iter()
                    .map(|k| (k, rng.gen_range(1..p)))
                    .collect();
                let f = FpPolynomial::from_terms(p, &vars[..n], terms);
                if f.is_zero() {
                    continue;
                }
                produced += 1;
                cases += 1;
                let s = raw_char_sum(&f, chi);
                if !s.is_zero() {
                    counterexample = Some(format!(
                        "p={p} d={} k={} f={f} hyperplane N={n_dist}",
                        chi.d, chi.k
                    ));
                    break 'all;
                }
            }
        }
    }
    SweepReport {
        identity: "hyperplane-vanishing".into(),
        ranges: BTreeMap::from([
            ("primes".into(), format!("{primes:?}")),
            ("per_char".into(), per_char.to_string()),
        ]),
        cases_checked: cases,
        counterexample,
    }
}

/// Power-sum vanishing: `sum_x chi(x^a) = 0` whenever `ord(chi)` does not
/// divide `a`. Exhaustive.
pub fn sweep_power_sum(primes: &[u64], a_max: u32) -> SweepReport {
    let mut cases = 0u64;
    let mut counterexample = None;
    'all: for &p in primes {
        let chars = Character::all_nontrivial(p).unwrap();
        for chi in &chars {
            for a in 0..=a_max {
                if a % chi.d == 0 {
                    continue;
                }
                cases += 1;
                let mut counts = vec![0u64; p as usize];
                for x in 1..p {
                    counts[pow_mod(x, a, p) as usize] += 1;
                }
                let s = char_sum_from_counts(&counts, chi);
                if !s.is_zero() {
                    counterexample = Some(format!("p={p} d={} k={} a={a}", chi.d, chi.k));
                    break 'all;
                }
            }
        }
    }
    SweepReport {
        identity: "power-sum-vanishing".into(),
        ranges: BTreeMap::from([
            ("primes".into(), format!("{primes:?}")),
            ("a_max".into(), a_max.to_string()),
        ]),
        cases_checked: cases,
        counterexample,
    }
}

/// Linear collapse: for `f` and a monomial `g` in the variables `x_2..x_n`
/// and any non-trivial character,
/// `sum chi(f + x_1 g) = -sum chi(f)` (sums over the respective tori).
pub fn sweep_linear_collapse(
    primes: &[u64],
    per_config: usize,
    rng: &mut impl rand::Rng,
) -> SweepReport {
    let mut cases = 0u64;
    let mut counterexample = None;
    'all: for &p in primes {
        let chars = Character::all_nontrivial(p).unwrap();
        for n in 2..=3usize {
            for _ in 0..per_config {
                // f, g over variables x_2..x_n, i.e. n-1 actual variables
                let vars = ["x", "y", "z"];
                let m = n - 1;
                let mut f_terms = Vec::new();
                for _ in 0..rng.gen_range(1..4) {
                    let k: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=5u32)).collect();
                    f_terms.push((k, rng.gen_range(1..p)));
                }
                let f_small = FpPolynomial::from_terms(p, &vars[..m], f_terms.clone());
                let g_exp: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=5u32)).collect();
                let g_coeff = rng.gen_range(1..p);
                // embedded in n variables with x_1 = last variable index m
                let mut big_terms: Vec<(Vec<u32>, u64)> = f_terms
                    .iter()
                    .map(|(k, c)| {
                        let mut kk = k.clone();
                        kk.push(0);
                        (kk, *c)
                    })
                    .collect();
                let mut g_big = g_exp.clone();
                g_big.push(1);
                big_terms.push((g_big, g_coeff));
                let f_plus = FpPolynomial::from_terms(p, &vars[..n], big_terms);
                if f_plus.is_zero() {
                    continue;
                }
                for chi in &chars {
                    cases += 1;
                    let lhs = raw_char_sum(&f_plus, chi);
                    let rhs = raw_char_sum(&f_small, chi).neg();
                    if !lhs.equals(&rhs) {
                        counterexample = Some(format!(
                            "p={p} d={} k={} f={f_small} g_exp={g_exp:?}",
                            chi.d, chi.k
                        ));
                        break 'all;
                    }
                }
            }
        }
    }
    SweepReport {
        identity: "linear-collapse".into(),
        ranges: BTreeMap::from([
            ("primes".into(), format!("{primes:?}")),
            ("per_config".into(), per_config.to_string()),
        ]),
        cases_checked: cases,
        counterexample,
    }
}

/// Counts per character exponent: entry `e` sums `counts[c]` over `c` with
/// `chi(c) = zeta_d^e`.
fn exponent_counts(counts: &[u64], chi: &Character) -> Vec<i64> {
    let mut v = vec![0i64; chi.d as usize];
    for (c, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        if let Some(e) = chi.eval_exponent(c as u64) {
            v[e as usize] += count as i64;
        }
    }
    v
}

/// Whether `sum_e v_e zeta_d^e = 0`, i.e. the integer polynomial is
/// divisible by `Phi_d`. Pure integer arithmetic.
fn zero_mod_phi(v: &[i64], d: u32) -> bool {
    let phi = cyclotomic_polynomial(d);
    let deg = phi.len() - 1;
    let phi_small: Vec<i128> = phi
        .iter()
        .map(|c| i128::try_from(c).expect("small cyclotomic coefficients"))
        .collect();
    let mut work: Vec<i128> = v.iter().map(|&c| c as i128).collect();
    while work.len() > deg {
        let top = work.len() - 1;
        let c = work[top];
        if c != 0 {
            let base = top - deg;
            for (i, &mc) in phi_small.iter().enumerate() {
                work[base + i] -= c * mc;
            }
        }
        work.pop();
    }
    work.iter().all(|&c| c == 0)
}

/// The conic identity: for `ord(chi)` not dividing `a`,
/// `S1 = -S2 - S3` where
/// `S1 = sum_{x,y,z} chi(alpha x^a + beta x^i y^2 + gamma x^i z^2)`,
/// `S2 = sum_{x,y} chi(alpha x^a + beta x^i y^2)`,
/// `S3 = sum_{x,z} chi(alpha x^a + gamma x^i z^2)`.
/// Under the stronger assumption that `ord(chi)` does not divide `2a`, or
/// that `a - i` is even, each sum vanishes individually.
pub fn sweep_conic_identity(primes: &[u64], a_max: u32, i_max: u32) -> SweepReport {
    let mut cases = 0u64;
    let mut counterexample = None;
    'all: for &p in primes {
        let chars = Character::all_nontrivial(p).unwrap();
        for a in 1..=a_max {
            for i in 0..=i_max {
                // precompute power tables
                let xa: Vec<u64> = (0..p).map(|x| pow_mod(x, a, p)).collect();
                let xi: Vec<u64> = (0..p).map(|x| pow_mod(x, i, p)).collect();
                let sq: Vec<u64> = (0..p).map(|y| y * y % p).collect();
                for alpha in 0..p {
                    for beta in 1..p {
                        for gamma in 1..p {
                            // value counts, independent of the character
                            let mut c1 = vec![0u64; p as usize];
                            let mut c2 = vec![0u64; p as usize];
                            let mut c3 = vec![0u64; p as usize];
                            for x in 1..p {
                                let base = alpha * xa[x as usize] % p;
                                let bx = beta * xi[x as usize] % p;
                                let gx = gamma * xi[x as usize] % p;
                                for y in 1..p {
                                    let v2 = (base + bx * sq[y as usize]) % p;
                                    c2[v2 as usize] += 1;
                                    let v3 = (base + gx * sq[y as usize]) % p;
                                    c3[v3 as usize] += 1;
                                    for z in 1..p {
                                        let v1 = (v2 + gx * sq[z as usize]) % p;
                                        c1[v1 as usize] += 1;
                                    }
                                }
                            }
                            for chi in &chars {
                                if a % chi.d == 0 {
                                    continue;
                                }
                                cases += 1;
                                let v1 = exponent_counts(&c1, chi);
                                let v2 = exponent_counts(&c2, chi);
                                let v3 = exponent_counts(&c3, chi);
                                let total: Vec<i64> = v1
                                    .iter()
                                    .zip(&v2)
                                    .zip(&v3)
                                    .map(|((&a1, &a2), &a3)| a1 + a2 + a3)
                                    .collect();
                                if !zero_mod_phi(&total, chi.d) {
                                    counterexample = Some(format!(
                                        "p={p} d={} k={} a={a} i={i} alpha={alpha} beta={beta} gamma={gamma}",
                                        chi.d, chi.k
                                    ));
                                    break 'all;
                                }
                                let strong = (2 * a) % chi.d != 0 || (a as i64 - i as i64) % 2 == 0;
                                if strong
                                    && !(zero_mod_phi(&v1, chi.d)
                                        && zero_mod_phi(&v2, chi.d)
                                        && zero_mod_phi(&v3, chi.d))
                                {
                                    counterexample = Some(format!(
                                        "strengthened vanishing fails: p={p} d={} k={} a={a} i={i} alpha={alpha} beta={beta} gamma={gamma}",
                                        chi.d, chi.k
                                    ));
                                    break 'all;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    SweepReport {
        identity: "conic-identity".into(),
        ranges: BTreeMap::from([
            ("primes".into(), format!("{primes:?}")),
            ("a_max".into(), a_max.to_string()),
            ("i_max".into(), i_max.to_string()),
        ]),
        cases_checked: cases,
        counterexample,
    }
}
