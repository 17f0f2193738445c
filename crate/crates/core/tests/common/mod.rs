//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each suite uses its own slice of the fixtures

use igusa::newton::NewtonPolyhedron;
use igusa::polyring::{parse_polynomial, IntPolynomial};

pub const CORPUS: &[(&str, &[&str])] = &[
    ("x^2+y^3", &["x", "y"]),
    ("x^3+y^3", &["x", "y"]),
    ("x^2+y^3+z^2", &["x", "y", "z"]),
    ("x^3+y^2+x^2z^2+z^4", &["x", "y", "z"]),
    ("x*y+z^3", &["x", "y", "z"]),
    ("x^2+y^2+z^2", &["x", "y", "z"]),
];

pub const PRIMES: &[u64] = &[3, 5, 7];

pub fn poly(text: &str, vars: &[&str]) -> IntPolynomial {
    parse_polynomial(text, vars).expect("corpus parses")
}

pub fn gamma(text: &str, vars: &[&str]) -> NewtonPolyhedron {
    let f = poly(text, vars);
    NewtonPolyhedron::build(&f.support(), vars.len()).expect("corpus builds")
}

/// Non-trivial character parameters for a prime: all `(d, k)` with
/// `d | p - 1`, `d > 1`, `gcd(k, d) = 1`.
pub fn characters(p: u64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 2..=(p - 1) as u32 {
        if (p - 1) % d as u64 != 0 {
            continue;
        }
        for k in 1..d {
            if gcd(k as u64, d as u64) == 1 {
                out.push((d, k));
            }
        }
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
