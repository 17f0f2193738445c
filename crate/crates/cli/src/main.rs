//! Command-line front door: Newton polyhedra, Igusa zeta functions with
//! characters, monodromy zeta functions, facet classification, holomorphy
//! audits, and the verification suites.
//!
//! All values are exact; rational and cyclotomic numbers serialize as
//! strings, never floats. Randomized suites take a seed and are
//! bit-reproducible. Exit codes: 0 success, 1 domain error (with a JSON
//! error object on stderr), 2 usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use igusa::charcyclo::{
    sweep_conic_identity, sweep_hyperplane_vanishing, sweep_linear_collapse, sweep_power_sum,
    Character,
};
use igusa::conjecture::{self, suite};
use igusa::lattice::nv_suite;
use igusa::monodromy;
use igusa::newton::NewtonPolyhedron;
use igusa::oracle;
use igusa::polyring::{parse_polynomial, IntPolynomial};
use igusa::zeta::{self, NondegeneracyPolicy};

#[derive(Parser)]
#[command(
    name = "igusa",
    about = "Exact Igusa zeta functions with characters and monodromy zeta functions \
             for Newton-nondegenerate polynomials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// Polynomial, e.g. "x^2+y^3" or "3x^2z^2 + y^2 + x^3"
    #[arg(short = 'f', long = "poly")]
    poly: String,
    /// Comma-separated variable names, e.g. x,y,z
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
}

impl PolyArgs {
    fn parse_poly(&self) -> igusa::Result<IntPolynomial> {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        parse_polynomial(&self.poly, &vars)
    }
}

#[derive(Args, Clone)]
struct CharArgs {
    /// Residue field characteristic (prime)
    #[arg(short = 'p', long = "prime")]
    prime: u64,
    /// Order d of the character (d | p-1, d > 1)
    #[arg(long)]
    char_order: u32,
    /// Index k with chi(g) = zeta_d^k, gcd(k, d) = 1
    #[arg(long, default_value_t = 1)]
    char_index: u32,
}

impl CharArgs {
    fn character(&self) -> igusa::Result<Character> {
        Character::new(self.prime, self.char_order, self.char_index)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the Newton polyhedron and dump its face lattice as JSON
    Newton {
        #[command(flatten)]
        poly: PolyArgs,
        /// JSON output (the default; kept as an explicit flag)
        #[arg(long)]
        json: bool,
    },
    /// Compute the local and/or global Igusa zeta function
    Zeta {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        character: CharArgs,
        /// Only the local zeta function (over the compact faces)
        #[arg(long, conflicts_with = "global")]
        local: bool,
        /// Only the global zeta function (over all faces)
        #[arg(long)]
        global: bool,
        /// Reuse a polyhedron dumped by `newton` instead of rebuilding
        #[arg(long)]
        from_json: Option<std::path::PathBuf>,
        /// Skip the nondegeneracy check (output is untrusted)
        #[arg(long)]
        force: bool,
        /// JSON output (the default; kept as an explicit flag)
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        /// Human-readable rendering instead of JSON
        #[arg(long)]
        pretty: bool,
    },
    /// Monodromy zeta function at the origin or at a generic axis point
    Monodromy {
        #[command(flatten)]
        poly: PolyArgs,
        /// Zeta function of monodromy at the origin (default)
        #[arg(long)]
        origin: bool,
        /// Generic point of the given axis (1-based variable index)
        #[arg(long, conflicts_with = "origin")]
        axis: Option<usize>,
    },
    /// Classify the facets (B1-simplex, non-compact B1, X2, other)
    Classify {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Full holomorphy audit for one character
    Check {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        character: CharArgs,
    },
    /// Compare the face-formula series against brute-force counting
    OracleCompare {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        character: CharArgs,
        /// Series depth; defaults to the largest depth within the budget
        #[arg(long)]
        terms: Option<usize>,
        /// Compare the local series (default: global)
        #[arg(long, conflicts_with = "global")]
        local: bool,
        /// Compare the global series (the default)
        #[arg(long)]
        global: bool,
        /// Enumeration budget in evaluated points; defaults to the
        /// IGUSA_BUDGET environment variable or 10^8
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Exhaustive character-sum identity sweeps
    VerifyLemmas {
        /// Primes to sweep
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7, 11, 13])]
        primes: Vec<u64>,
        /// Random hyperplane-supported polynomials per character
        #[arg(long, default_value_t = 200)]
        per_char: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exponent bound for the power-sum sweep
        #[arg(long, default_value_t = 12)]
        a_max: u32,
        /// Exponent bounds for the conic-identity sweep
        #[arg(long, default_value_t = 8)]
        conic_a_max: u32,
        #[arg(long, default_value_t = 4)]
        conic_i_max: u32,
    },
    /// Normalized-volume property suite on random simplicial facets
    NvSuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count_3d: usize,
        #[arg(long, default_value_t = 200)]
        count_4d: usize,
        /// Coordinate bound for the random vertices
        #[arg(long, default_value_t = 12)]
        bound: i64,
    },
    /// Cancellation suite: facts 1-7, cases 1-5, and the X2 lemmas
    CancelSuite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per pattern
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            let obj = serde_json::json!({
                "error": {
                    "kind": error_kind(&e),
                    "message": e.to_string(),
                }
            });
            let _ = writeln!(std::io::stderr(), "{obj}");
            std::process::exit(1);
        }
    }
}

fn error_kind(e: &igusa::Error) -> &'static str {
    use igusa::Error::*;
    match e {
        Parse { .. } | UnknownVariable { .. } => "parse",
        NotPrime(_) | InvalidCharacter(_) => "character",
        Degenerate { .. } => "degenerate",
        BudgetExceeded { .. } => "budget",
        DegenerateProjection { .. } => "projection",
        _ => "domain",
    }
}

fn emit(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

/// Default enumeration budget: the IGUSA_BUDGET environment variable when
/// set, otherwise 10^8 evaluated points.
fn default_budget() -> u128 {
    std::env::var("IGUSA_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(igusa::oracle::DEFAULT_BUDGET)
}

fn run(cli: Cli) -> igusa::Result<()> {
    match cli.command {
        Command::Newton { poly, json: _ } => {
            let f = poly.parse_poly()?;
            let gamma = NewtonPolyhedron::build(&f.support(), f.n())?;
            emit(&gamma.to_json());
        }
        Command::Zeta {
            poly,
            character,
            local,
            global,
            from_json,
            force,
            json: _,
            pretty,
        } => {
            let f = poly.parse_poly()?;
            let chi = character.character()?;
            let p = character.prime;
            let policy = if force {
                NondegeneracyPolicy::Force
            } else {
                NondegeneracyPolicy::Check
            };
            let gamma = match &from_json {
                None => NewtonPolyhedron::build(&f.support(), f.n())?,
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| igusa::Error::Parse {
                        offset: 0,
                        message: format!("cannot read {}: {e}", path.display()),
                    })?;
                    let value: serde_json::Value =
                        serde_json::from_str(&text).map_err(|e| igusa::Error::Parse {
                            offset: 0,
                            message: format!("bad JSON: {e}"),
                        })?;
                    let loaded = NewtonPolyhedron::from_json(&value)?;
                    let built = NewtonPolyhedron::build(&f.support(), f.n())?;
                    if loaded.vertices != built.vertices || loaded.facets != built.facets {
                        return Err(igusa::Error::Parse {
                            offset: 0,
                            message: "polyhedron JSON does not match the polynomial".into(),
                        });
                    }
                    loaded
                }
            };
            let fbar = f.reduce_mod_p(p)?;
            let scope_needed = if global || !local {
                oracle::NondegeneracyScope::All
            } else {
                oracle::NondegeneracyScope::Compact
            };
            let mut untrusted = false;
            if policy == NondegeneracyPolicy::Check {
                if let Some(w) = oracle::check_nondegenerate(&f, p, scope_needed)? {
                    return Err(igusa::Error::Degenerate {
                        p,
                        face: w.face,
                        witness: w.point,
                    });
                }
            } else {
                untrusted = oracle::check_nondegenerate(&f, p, scope_needed)?.is_some();
            }
            let both = !local && !global;
            let describe =
                |z: &igusa::zeta::RationalFunctionT| -> igusa::Result<serde_json::Value> {
                    let lines = zeta::actual_pole_lines(z, &gamma)?;
                    let mut j = z.to_json();
                    j["char"] = serde_json::json!({"d": chi.d, "k": chi.k});
                    j["candidate_poles"] = candidates_json(&gamma, chi.d);
                    j["actual_pole_lines"] = lines_json(&lines);
                    if untrusted {
                        j["untrusted"] = serde_json::json!(true);
                    }
                    Ok(j)
                };
            let mut pretty_lines = Vec::new();
            let mut parts: Vec<(&str, serde_json::Value)> = Vec::new();
            if local || both {
                let z = zeta::igusa_local_on(&gamma, &fbar, &chi)?.reduce()?;
                if pretty {
                    pretty_lines.push(format!("Z_local  = {}", render(&z)));
                }
                parts.push(("local", describe(&z)?));
            }
            if global || both {
                let z = zeta::igusa_global_on(&gamma, &fbar, &chi)?.reduce()?;
                if pretty {
                    pretty_lines.push(format!("Z_global = {}", render(&z)));
                }
                parts.push(("global", describe(&z)?));
            }
            if pretty {
                for line in pretty_lines {
                    println!("{line}");
                }
            } else if parts.len() == 1 {
                emit(&parts.remove(0).1);
            } else {
                let mut out = serde_json::json!({
                    "q": p,
                    "char": {"d": chi.d, "k": chi.k},
                });
                if untrusted {
                    out["untrusted"] = serde_json::json!(true);
                }
                let obj = out.as_object_mut().unwrap();
                for (name, j) in parts {
                    obj.insert(name.into(), j);
                }
                emit(&out);
            }
        }
        Command::Monodromy { poly, origin, axis } => {
            let f = poly.parse_poly()?;
            let gamma = NewtonPolyhedron::build(&f.support(), f.n())?;
            let z = match axis {
                Some(j) => {
                    if j == 0 || j > gamma.n {
                        return Err(igusa::Error::DimensionMismatch {
                            expected: gamma.n,
                            found: j,
                        });
                    }
                    monodromy::generic_axis_zeta(&gamma, j - 1)?
                }
                None => {
                    let _ = origin;
                    monodromy::varchenko_zeta(&gamma)?
                }
            };
            emit(&z.to_json());
        }
        Command::Classify { poly } => {
            let f = poly.parse_poly()?;
            let gamma = NewtonPolyhedron::build(&f.support(), f.n())?;
            let classes = conjecture::classify_facets(&gamma)?;
            emit(&serde_json::json!({ "facets": classes }));
        }
        Command::Check { poly, character } => {
            let f = poly.parse_poly()?;
            let report = conjecture::holomorphy_report(
                &f,
                character.prime,
                character.char_order,
                character.char_index,
            )?;
            emit(&report.to_json());
        }
        Command::OracleCompare {
            poly,
            character,
            terms,
            local,
            global: _,
            budget,
        } => {
            let f = poly.parse_poly()?;
            let chi = character.character()?;
            let p = character.prime;
            let budget = budget.unwrap_or_else(default_budget);
            let k = match terms {
                Some(k) => k,
                None => oracle::auto_depth(p, f.n(), budget)?,
            };
            let scope = if local {
                oracle::NondegeneracyScope::Compact
            } else {
                oracle::NondegeneracyScope::All
            };
            if let Some(w) = oracle::check_nondegenerate(&f, p, scope)? {
                return Err(igusa::Error::Degenerate {
                    p,
                    face: w.face,
                    witness: w.point,
                });
            }
            let formula = if local {
                zeta::igusa_local(&f, p, &chi, NondegeneracyPolicy::Check)?
            } else {
                zeta::igusa_global(&f, p, &chi, NondegeneracyPolicy::Check)?
            }
            .series_expand(k)?;
            let direct = oracle::truncated_series(&f, p, &chi, k, local, budget)?;
            let equal = formula.iter().zip(&direct).all(|(a, b)| a.equals(b));
            emit(&serde_json::json!({
                "p": p,
                "char": {"d": chi.d, "k": chi.k},
                "terms": k,
                "local": local,
                "formula_series": formula.iter().map(|c| c.to_strings()).collect::<Vec<_>>(),
                "oracle_series": direct.iter().map(|c| c.to_strings()).collect::<Vec<_>>(),
                "equal": equal,
            }));
            if !equal {
                std::process::exit(1);
            }
        }
        Command::VerifyLemmas {
            primes,
            per_char,
            seed,
            a_max,
            conic_a_max,
            conic_i_max,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let reports = vec![
                sweep_hyperplane_vanishing(&primes, per_char, &mut rng),
                sweep_power_sum(&primes, a_max),
                sweep_linear_collapse(&primes, per_char.min(40), &mut rng),
                sweep_conic_identity(&primes, conic_a_max, conic_i_max),
            ];
            let ok = reports.iter().all(|r| r.ok());
            emit(&serde_json::json!({ "seed": seed, "reports": reports, "ok": ok }));
            if !ok {
                std::process::exit(1);
            }
        }
        Command::NvSuite {
            seed,
            count_3d,
            count_4d,
            bound,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r3 = nv_suite(&mut rng, 3, bound, count_3d);
            let r4 = nv_suite(&mut rng, 4, bound, count_4d);
            let ok = r3.failures.is_empty() && r4.failures.is_empty();
            emit(&serde_json::json!({ "seed": seed, "z3": r3, "z4": r4, "ok": ok }));
            if !ok {
                std::process::exit(1);
            }
        }
        Command::CancelSuite { seed, count } => {
            let report = suite::cancel_suite(seed, count)?;
            let ok = report.ok();
            emit(&serde_json::json!(report));
            if !ok {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn candidates_json(gamma: &NewtonPolyhedron, d: u32) -> serde_json::Value {
    serde_json::json!(zeta::candidate_poles(gamma, d))
}

fn lines_json(lines: &[(i64, i64)]) -> serde_json::Value {
    serde_json::json!(lines
        .iter()
        .map(|&(nu, n)| serde_json::json!({"nu": nu, "N": n}))
        .collect::<Vec<_>>())
}

/// Human-readable rendering with `q` kept symbolic in the denominator.
fn render(z: &igusa::zeta::RationalFunctionT) -> String {
    if z.is_zero() {
        return "0".into();
    }
    let mut num = String::new();
    for (i, c) in z.numerator.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !num.is_empty() {
            num.push_str(" + ");
        }
        if i == 0 {
            num.push_str(&format!("{c}"));
        } else if i == 1 {
            num.push_str(&format!("({c})*T"));
        } else {
            num.push_str(&format!("({c})*T^{i}"));
        }
    }
    let mut den = String::new();
    for (&(nu, n), &m) in &z.denominator {
        let q_pow = if nu == 1 {
            "q".to_string()
        } else {
            format!("q^{nu}")
        };
        let factor = if n == 0 {
            format!("({q_pow} - 1)")
        } else {
            format!("({q_pow} - T^{n})")
        };
        den.push_str(&factor);
        if m > 1 {
            den.push_str(&format!("^{m}"));
        }
    }
    if let Some(extra) = &z.extra_denominator {
        den.push_str(&format!("[{:?}]", extra.to_strings()));
    }
    if den.is_empty() {
        num
    } else {
        format!("({num}) / ({den})  [q = {}]", z.q)
    }
}
