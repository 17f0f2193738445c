//! Sparse multivariate integer polynomials.
//!
//! Polynomials are stored as maps from exponent vectors to arbitrary-precision
//! coefficients; the zero polynomial is the empty map and no stored
//! coefficient is zero. Term order for printing and hashing is lexicographic
//! (descending) on exponent vectors, so output is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::newton::NewtonPolyhedron;
use crate::{Error, Result};

/// A point of the exponent lattice `Z_{>=0}^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinates as signed integers, for lattice geometry.
    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| e as i64).collect()
    }

    pub fn dot(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }
}

/// Sparse polynomial over `Z` in `n` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPolynomial {
    n: usize,
    vars: Vec<String>,
    terms: BTreeMap<ExponentVector, BigInt>,
}

/// Sparse polynomial over the prime field `F_p`; coefficients lie in `[1, p-1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPolynomial {
    pub p: u64,
    n: usize,
    vars: Vec<String>,
    terms: BTreeMap<ExponentVector, u64>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl IntPolynomial {
    pub fn zero(vars: &[&str]) -> Self {
        IntPolynomial {
            n: vars.len(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut f = Self::zero(vars);
        for (ev, c) in terms {
            assert_eq!(ev.len(), f.n, "exponent vector length mismatch");
            f.add_term(ExponentVector(ev), c);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, ev: &ExponentVector) -> BigInt {
        self.terms.get(ev).cloned().unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, ev: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(ev).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    /// The support of the polynomial: exponent vectors of non-zero terms.
    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Reduce all coefficients modulo a prime, dropping terms that vanish.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FpPolynomial> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let pb = BigInt::from(p);
        let mut terms = BTreeMap::new();
        for (ev, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            let r: u64 = r.try_into().expect("residue fits in u64");
            if r != 0 {
                terms.insert(ev.clone(), r);
            }
        }
        Ok(FpPolynomial {
            p,
            n: self.n,
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Keep exactly the terms whose exponent vector satisfies, with equality,
    /// every facet inequality defining the face.
    pub fn restrict_to_face(&self, gamma: &NewtonPolyhedron, face: usize) -> Result<Self> {
        let keep = face_membership_filter(gamma, face, self.n)?;
        let terms = self
            .terms
            .iter()
            .filter(|(ev, _)| keep(ev))
            .map(|(ev, c)| (ev.clone(), c.clone()))
            .collect();
        Ok(IntPolynomial {
            n: self.n,
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Substitute `x_j -> x_j - c`, fully expanded in exact integers.
    pub fn shift_variable(&self, j: usize, c: i64) -> Self {
        assert!(j < self.n, "variable index out of range");
        let mut out = IntPolynomial {
            n: self.n,
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        let shift = BigInt::from(-c);
        for (ev, coeff) in &self.terms {
            let e = ev.0[j];
            // (x - c)^e = sum_k C(e,k) x^k (-c)^{e-k}
            let mut binom = BigInt::one();
            let mut pow = num_traits::pow::pow(shift.clone(), e as usize);
            // walk k = 0..=e, maintaining binomial and (-c)^{e-k}
            for k in 0..=e {
                let mut nev = ev.0.clone();
                nev[j] = k;
                out.add_term(ExponentVector(nev), coeff * &binom * &pow);
                if k < e {
                    // update binom: C(e, k+1) = C(e,k) * (e-k)/(k+1)
                    binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
                    if !shift.is_zero() {
                        pow /= &shift;
                    } else {
                        pow = if k + 1 == e {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        };
                    }
                }
            }
        }
        out
    }
}

impl FpPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &u64)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn from_terms(p: u64, vars: &[&str], terms: Vec<(Vec<u32>, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (ev, c) in terms {
            let c = c % p;
            if c != 0 {
                map.insert(ExponentVector(ev), c);
            }
        }
        FpPolynomial {
            p,
            n: vars.len(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: map,
        }
    }

    pub fn restrict_to_face(&self, gamma: &NewtonPolyhedron, face: usize) -> Result<Self> {
        let keep = face_membership_filter(gamma, face, self.n)?;
        let terms = self
            .terms
            .iter()
            .filter(|(ev, _)| keep(ev))
            .map(|(ev, c)| (ev.clone(), *c))
            .collect();
        Ok(FpPolynomial {
            p: self.p,
            n: self.n,
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Evaluate at a point with coordinates in `[0, p)`.
    pub fn eval(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.n);
        let p = self.p;
        let mut acc = 0u64;
        for (ev, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in ev.0.iter().enumerate() {
                t = t * pow_mod(point[i], e, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Formal partial derivative with respect to `x_j`.
    pub fn partial(&self, j: usize) -> FpPolynomial {
        let mut terms = BTreeMap::new();
        for (ev, c) in &self.terms {
            let e = ev.0[j];
            if e == 0 {
                continue;
            }
            let c = (*c as u128 * (e as u128 % self.p as u128) % self.p as u128) as u64;
            if c == 0 {
                continue;
            }
            let mut nev = ev.0.clone();
            nev[j] = e - 1;
            terms.insert(ExponentVector(nev), c);
        }
        FpPolynomial {
            p: self.p,
            n: self.n,
            vars: self.vars.clone(),
            terms,
        }
    }
}

pub fn pow_mod(mut base: u64, mut exp: u32, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    base %= modulus;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Membership test "exponent vector lies on the face": equality on every
/// facet inequality containing the face. The full face keeps everything.
fn face_membership_filter(
    gamma: &NewtonPolyhedron,
    face: usize,
    n: usize,
) -> Result<impl Fn(&ExponentVector) -> bool + '_> {
    if n != gamma.n {
        return Err(Error::DimensionMismatch {
            expected: gamma.n,
            found: n,
        });
    }
    let face = gamma.face(face)?;
    let constraints: Vec<(Vec<i64>, i64)> = face
        .facets
        .iter()
        .map(|&fi| {
            let fd = &gamma.facets[fi];
            (fd.normal.clone(), fd.n_dist)
        })
        .collect();
    Ok(move |ev: &ExponentVector| constraints.iter().all(|(a, nd)| ev.dot(a) == *nd))
}

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

/// Parse a polynomial in the grammar
///
/// ```text
/// expression := ['+'|'-'] term (('+'|'-') term)*
/// term       := integer ('*'? monomial)? | monomial
/// monomial   := factor ('*'? factor)*
/// factor     := varname ('^' uint)?
/// ```
///
/// Whitespace is ignored; integers are unbounded signed decimals; variables
/// are declared by the caller and must be distinct.
pub fn parse_polynomial(text: &str, variables: &[&str]) -> Result<IntPolynomial> {
    {
        let mut seen = std::collections::HashSet::new();
        for v in variables {
            if !seen.insert(*v) {
                return Err(Error::Parse {
                    offset: 0,
                    message: format!("duplicate variable name `{v}`"),
                });
            }
        }
    }
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        vars: variables.iter().map(|s| s.to_string()).collect(),
    };
    parser.parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn parse(&mut self) -> Result<IntPolynomial> {
        let vars_ref: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut poly = IntPolynomial::zero(&vars_ref);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty input"));
        }
        let mut sign = BigInt::one();
        if let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                if c == b'-' {
                    sign = -sign;
                }
            }
        }
        loop {
            let (ev, coeff) = self.term()?;
            poly.add_term(ev, coeff * &sign);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigInt::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigInt::one();
                }
                Some(c) => {
                    return Err(self.err(&format!("expected `+` or `-`, found `{}`", c as char)))
                }
            }
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(ExponentVector, BigInt)> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut exps = vec![0u32; self.vars.len()];
        let mut saw_anything = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = self.integer()?;
            saw_anything = true;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                self.monomial(&mut exps)?;
                return Ok((ExponentVector(exps), coeff));
            }
        }
        self.skip_ws();
        if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
            self.monomial(&mut exps)?;
            saw_anything = true;
        }
        if !saw_anything {
            return Err(self.err("expected a term"));
        }
        Ok((ExponentVector(exps), coeff))
    }

    fn monomial(&mut self, exps: &mut [u32]) -> Result<()> {
        loop {
            self.factor(exps)?;
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
                _ => break,
            }
        }
        Ok(())
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        let start = self.pos;
        let name = self.ident()?;
        let idx = match self.vars.iter().position(|v| *v == name) {
            Some(i) => i,
            None => {
                return Err(Error::UnknownVariable {
                    name,
                    offset: start,
                })
            }
        };
        let mut exp = 1u32;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            exp = self.uint()?;
        }
        exps[idx] = exps[idx]
            .checked_add(exp)
            .ok_or_else(|| self.err("exponent overflow"))?;
        Ok(())
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a variable name"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<BigInt>()
            .map_err(|e| self.err(&format!("bad integer literal: {e}")))
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an exponent"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<u32>()
            .map_err(|_| self.err("exponent does not fit in u32"))
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending lexicographic order on exponent vectors
        for (i, (ev, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = ev.0.iter().all(|&e| e == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (j, &e) in ev.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars[j])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (ev, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let is_const = ev.0.iter().all(|&e| e == 0);
            if *c != 1 || is_const {
                write!(f, "{c}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (j, &e) in ev.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.vars[j])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}
