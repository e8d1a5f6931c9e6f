//! Command-line front-end for the similarity and clean-ness toolkit.
//!
//! Every library capability is reachable from a subcommand with stable
//! output: `--json` switches from human-readable tables to key-sorted
//! JSON, so identical invocations produce byte-identical output.  Exit
//! codes separate the three ways a run can end: `0` means the question
//! was answered (including "no such map exists"), `2` means the input was
//! invalid, and `3` means a node budget ran out before the answer was
//! certain.  The `clean` subcommand additionally exits `1` when the
//! criterion and the brute-force oracle disagree, printing a finding
//! report; that exit code is reserved for genuine internal disagreement.
//!
//! Lattices are referenced either by catalog name (`E8`, `Leech`, ...) or
//! by `file:path` pointing at a Gram matrix file: the first line holds the
//! dimension `n`, followed by `n` lines of `n` rationals each written as
//! `p` or `p/q`.  Witness matrices print row-major and can be written to a
//! file and re-checked with the `verify` subcommand, which reruns the
//! exact similarity test.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::json;

use simlat::catalog::{catalog_lattice, catalog_names, CatalogEntry};
use simlat::clean::{
    clean_hex_general, clean_index_spectrum, clean_oracle, clean_rect, CellFamily, QuadInt,
    QuadLattice,
};
use simlat::criteria::check_necessary;
use simlat::error::Error;
use simlat::lattice::{GramLattice, SimilarityMap};
use simlat::mat::ZMat;
use simlat::quaternion::Quaternion;
use simlat::search::{
    find_similarities, find_similarity, norm_spectrum, NormForm, SearchStatus, SpectrumMethod,
    DEFAULT_SEARCH_BUDGET,
};
use simlat::construct::{
    a4_circulant_similarity, eisenstein_multiplier, gaussian_multiplier,
    k12_quaternion_multiplier, leech_quaternion_multiplier, quaternion_multiplier,
    represent_by_form, RepresentationForm,
};

#[derive(Parser)]
#[command(
    name = "simlat",
    version,
    about = "Exact similarity and clean-sublattice computations on rational lattices",
    after_help = "Exit codes: 0 answered (including \"none\"), 2 invalid input, 3 budget exhausted."
)]
struct Cli {
    /// Emit key-sorted JSON instead of human-readable tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LatticeRef {
    /// Catalog name (see `catalog list`) or `file:path` to a Gram file.
    #[arg(long)]
    lattice: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the per-prime necessary condition for a similarity norm.
    Check {
        #[command(flatten)]
        lattice: LatticeRef,
        /// Similarity norm, a positive rational written as `p` or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        norm: String,
    },
    /// Search exhaustively for a similarity of the given norm.
    Search {
        #[command(flatten)]
        lattice: LatticeRef,
        /// Similarity norm, a positive rational written as `p` or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        norm: String,
        /// Node budget for enumeration and backtracking.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// List every witness matrix instead of stopping at the first.
        #[arg(long)]
        all: bool,
        /// Cap on the number of witnesses listed with --all.
        #[arg(long, default_value_t = 16)]
        limit: usize,
    },
    /// List every norm up to a bound that admits a similarity.
    Spectrum {
        #[command(flatten)]
        lattice: LatticeRef,
        /// Largest norm to test.
        #[arg(long)]
        max: u64,
        /// How each norm is decided.
        #[arg(long, value_enum, default_value_t = MethodArg::Search)]
        method: MethodArg,
        /// Node budget shared by the whole sweep.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Build an explicit similarity from a multiplier.
    Construct {
        #[command(flatten)]
        lattice: LatticeRef,
        /// Desired norm; a representation by the target's form is chosen.
        #[arg(long)]
        norm: Option<u64>,
        /// Real part of a complex multiplier r + si (pairs with --s).
        #[arg(long, allow_hyphen_values = true)]
        r: Option<i64>,
        /// Imaginary part of a complex multiplier r + si (pairs with --r).
        #[arg(long, allow_hyphen_values = true)]
        s: Option<i64>,
        /// First circulant coefficient (4-dimensional target only).
        #[arg(long, allow_hyphen_values = true)]
        a1: Option<i64>,
        /// Second circulant coefficient.
        #[arg(long, allow_hyphen_values = true)]
        a2: Option<i64>,
        /// Third circulant coefficient.
        #[arg(long, allow_hyphen_values = true)]
        a3: Option<i64>,
        /// Fourth circulant coefficient.
        #[arg(long, allow_hyphen_values = true)]
        a4: Option<i64>,
    },
    /// Decide whether multiplication by a + b·(generator) is clean.
    Clean {
        /// Planar lattice family.
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Squarefree-style parameter: hex needs N ≡ 3 (mod 4), rect N ≥ 1.
        #[arg(long = "N")]
        n: i64,
        /// First coordinate of the multiplier.
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        /// Second coordinate of the multiplier.
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// List every sublattice index up to a bound reached by a clean multiplier.
    CleanSpectrum {
        /// Planar lattice family.
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Squarefree-style parameter: hex needs N ≡ 3 (mod 4), rect N ≥ 1.
        #[arg(long = "N")]
        n: i64,
        /// Largest index to test.
        #[arg(long)]
        max: u64,
    },
    /// Inspect or export the built-in lattice catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Re-check a witness matrix against a lattice and norm.
    Verify {
        #[command(flatten)]
        lattice: LatticeRef,
        /// Similarity norm, a positive rational written as `p` or `p/q`.
        #[arg(long, allow_hyphen_values = true)]
        norm: String,
        /// File holding the n×n integer witness, row-major, whitespace-separated.
        #[arg(long)]
        witness: PathBuf,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print every catalog name.
    List,
    /// Print dimension, determinant, and genus flags for one entry.
    Show { name: String },
    /// Write one entry to a Gram file that the loader round-trips.
    Export { name: String, path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Backtracking search with proven exhaustion.
    Search,
    /// Factorization criterion, where the lattice has one.
    ClosedForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Hexagonal-cell family, multiplier ring Z[(−1+√−N)/2].
    Hex,
    /// Rectangular-cell family, multiplier ring Z[√−N].
    Rect,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let _ = json;
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Parses a positive rational given as `p` or `p/q`.
fn parse_norm(text: &str) -> Result<BigRational, Error> {
    let value = BigRational::from_str(text.trim())
        .map_err(|_| Error::InvalidInput(format!("cannot parse norm {:?}", text)))?;
    if !value.is_positive() {
        return Err(Error::InvalidInput(format!(
            "similarity norm must be positive, got {}",
            value
        )));
    }
    Ok(value)
}

/// Resolves `name` or `file:path` to a lattice.
fn resolve_lattice(reference: &str) -> Result<GramLattice, Error> {
    match reference.strip_prefix("file:") {
        Some(path) => GramLattice::load(Path::new(path)),
        None => Ok(catalog_lattice(reference)?.lattice),
    }
}

/// Prints one line, treating a closed pipe (e.g. `| head`) as a normal
/// end of output rather than a panic.
fn print_line(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

/// Emits one command's result: a JSON envelope or the prepared table lines.
fn emit(json: bool, command: &str, payload: serde_json::Value, lines: &[String]) {
    if json {
        let envelope = json!({ "command": command, "payload": payload });
        print_line(&envelope.to_string());
    } else {
        for line in lines {
            print_line(line);
        }
    }
}

/// Flattens a witness matrix to row-major decimal strings.
fn matrix_strings(b: &ZMat) -> Vec<String> {
    let mut flat = Vec::with_capacity(b.rows() * b.cols());
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            flat.push(b.at(i, j).to_string());
        }
    }
    flat
}

/// Human-readable matrix rows, one line per row.
fn matrix_lines(b: &ZMat) -> Vec<String> {
    (0..b.rows())
        .map(|i| {
            (0..b.cols())
                .map(|j| b.at(i, j).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn describe_lattice(lattice: &GramLattice) -> String {
    match lattice.name() {
        Some(name) => format!("{} (dimension {})", name, lattice.dim()),
        None => format!("<file> (dimension {})", lattice.dim()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let json = cli.json;
    match cli.command {
        Command::Check { lattice, norm } => {
            let lat = resolve_lattice(&lattice.lattice)?;
            let c = parse_norm(&norm)?;
            let report = check_necessary(&lat, &c)?;
            let mut lines = vec![
                format!("lattice: {}", describe_lattice(&lat)),
                format!("norm: {}", report.norm),
            ];
            if report.relevant_primes.is_empty() {
                lines.push("relevant primes: (none; odd dimension)".into());
            } else {
                lines.push(format!(
                    "relevant primes: {}",
                    report
                        .relevant_primes
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                for (p, s) in &report.symbols {
                    lines.push(format!("symbol at {}: {}", p, if *s > 0 { "+1" } else { "-1" }));
                }
            }
            lines.push(format!("verdict: {}", report.verdict.as_str()));
            lines.push(format!("notes: {}", report.notes));
            emit(json, "check", serde_json::to_value(&report).expect("report serializes"), &lines);
            Ok(ExitCode::SUCCESS)
        }
        Command::Search {
            lattice,
            norm,
            budget,
            all,
            limit,
        } => {
            let lat = resolve_lattice(&lattice.lattice)?;
            let c = parse_norm(&norm)?;
            let (status, payload, mut lines) = if all {
                let outcome = find_similarities(&lat, &c, budget, limit)?;
                let mut lines = vec![
                    format!("lattice: {}", describe_lattice(&lat)),
                    format!("norm: {}", c),
                    format!("status: {}", outcome.status.as_str()),
                    format!("witnesses: {}", outcome.witnesses.len()),
                    format!(
                        "exhausted: {}",
                        if outcome.exhausted { "yes" } else { "no (cap or budget reached)" }
                    ),
                ];
                for (k, w) in outcome.witnesses.iter().enumerate() {
                    lines.push(format!("witness {} (rows):", k + 1));
                    lines.extend(matrix_lines(w.matrix()));
                }
                (
                    outcome.status,
                    serde_json::to_value(&outcome).expect("outcome serializes"),
                    lines,
                )
            } else {
                let outcome = find_similarity(&lat, &c, budget)?;
                let mut lines = vec![
                    format!("lattice: {}", describe_lattice(&lat)),
                    format!("norm: {}", c),
                    format!("status: {}", outcome.status.as_str()),
                ];
                if let Some(w) = &outcome.witness {
                    lines.push(format!("index: {}", w.index()));
                    lines.push("witness (rows):".into());
                    lines.extend(matrix_lines(w.matrix()));
                }
                (
                    outcome.status,
                    serde_json::to_value(&outcome).expect("outcome serializes"),
                    lines,
                )
            };
            lines.push(format!("budget: {}", budget));
            emit(json, "search", payload, &lines);
            match status {
                SearchStatus::BudgetExceeded => Ok(ExitCode::from(3)),
                _ => Ok(ExitCode::SUCCESS),
            }
        }
        Command::Spectrum {
            lattice,
            max,
            method,
            budget,
        } => {
            let lat = resolve_lattice(&lattice.lattice)?;
            let method_value = match method {
                MethodArg::Search => SpectrumMethod::Search,
                MethodArg::ClosedForm => SpectrumMethod::ClosedForm,
            };
            let norms = norm_spectrum(&lat, max, method_value, budget)?;
            let method_name = match method {
                MethodArg::Search => "search",
                MethodArg::ClosedForm => "closed-form",
            };
            let payload = json!({
                "max": max,
                "method": method_name,
                "norms": norms,
            });
            let lines = vec![
                format!("lattice: {}", describe_lattice(&lat)),
                format!("method: {}", method_name),
                format!("max: {}", max),
                format!(
                    "norms: {}",
                    norms
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ];
            emit(json, "spectrum", payload, &lines);
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct {
            lattice,
            norm,
            r,
            s,
            a1,
            a2,
            a3,
            a4,
        } => run_construct(json, &lattice.lattice, norm, r, s, [a1, a2, a3, a4]),
        Command::Clean { family, n, a, b } => {
            let ring = match family {
                FamilyArg::Hex => QuadLattice::hexagonal(n)?,
                FamilyArg::Rect => QuadLattice::rectangular(n)?,
            };
            let alpha = QuadInt::new(ring, a, b);
            let predicate = match ring.family() {
                CellFamily::Hexagonal => clean_hex_general(n, &alpha)?,
                CellFamily::Rectangular => clean_rect(n, &alpha)?,
            };
            let oracle = clean_oracle(&ring, &alpha)?;
            let family_name = match family {
                FamilyArg::Hex => "hex",
                FamilyArg::Rect => "rect",
            };
            let agree = predicate == oracle;
            let payload = json!({
                "agree": agree,
                "alpha": alpha.to_string(),
                "family": family_name,
                "n": n,
                "norm": alpha.norm().to_string(),
                "oracle": oracle,
                "predicate": predicate,
            });
            let verdict = |b: bool| if b { "clean" } else { "not clean" };
            let mut lines = vec![
                format!("family: {} (N = {})", family_name, n),
                format!("multiplier: {}", alpha),
                format!("index: {}", alpha.norm()),
                format!("predicate: {}", verdict(predicate)),
                format!("oracle: {}", verdict(oracle)),
            ];
            if agree {
                lines.push("agreement: yes".into());
            } else {
                lines.push("agreement: NO".into());
                lines.push(
                    "finding: the criterion and the brute-force oracle disagree on this input; \
                     this is an internal inconsistency worth reporting, not a property of the \
                     multiplier"
                        .into(),
                );
            }
            emit(json, "clean", payload, &lines);
            if agree {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::CleanSpectrum { family, n, max } => {
            let ring = match family {
                FamilyArg::Hex => QuadLattice::hexagonal(n)?,
                FamilyArg::Rect => QuadLattice::rectangular(n)?,
            };
            let indices: Vec<u64> = clean_index_spectrum(&ring, max)?.into_iter().collect();
            let family_name = match family {
                FamilyArg::Hex => "hex",
                FamilyArg::Rect => "rect",
            };
            let payload = json!({
                "family": family_name,
                "indices": indices,
                "max": max,
                "n": n,
            });
            let lines = vec![
                format!("family: {} (N = {})", family_name, n),
                format!("max: {}", max),
                format!(
                    "indices: {}",
                    indices
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ];
            emit(json, "clean-spectrum", payload, &lines);
            Ok(ExitCode::SUCCESS)
        }
        Command::Catalog { action } => run_catalog(json, action),
        Command::Verify {
            lattice,
            norm,
            witness,
        } => {
            let lat = resolve_lattice(&lattice.lattice)?;
            let c = parse_norm(&norm)?;
            let text = std::fs::read_to_string(&witness)?;
            let entries: Vec<BigInt> = text
                .split_whitespace()
                .map(|tok| {
                    BigInt::from_str(tok).map_err(|_| {
                        Error::InvalidInput(format!("witness entry {:?} is not an integer", tok))
                    })
                })
                .collect::<Result<_, _>>()?;
            let n = lat.dim();
            if entries.len() != n * n {
                return Err(Error::InvalidInput(format!(
                    "witness has {} entries, expected {} for dimension {}",
                    entries.len(),
                    n * n,
                    n
                )));
            }
            let mut b = ZMat::zero(n, n);
            for (k, v) in entries.into_iter().enumerate() {
                b.set(k / n, k % n, v);
            }
            let valid = lat.verify_similarity(&b, &c)?;
            let payload = json!({
                "norm": c.to_string(),
                "valid": valid,
            });
            let lines = vec![
                format!("lattice: {}", describe_lattice(&lat)),
                format!("norm: {}", c),
                format!("valid: {}", if valid { "yes" } else { "no" }),
            ];
            emit(json, "verify", payload, &lines);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Payload and table lines shared by every construct variant.
fn emit_construction(
    json: bool,
    target: &str,
    multiplier: String,
    map: &SimilarityMap,
) -> Result<ExitCode, Error> {
    let b = map.matrix();
    let payload = json!({
        "dimension": b.rows(),
        "index": map.index().to_string(),
        "matrix": matrix_strings(b),
        "multiplier": multiplier,
        "norm": map.norm().to_string(),
        "status": "constructed",
    });
    let mut lines = vec![
        format!("lattice: {}", target),
        format!("multiplier: {}", multiplier),
        format!("norm: {}", map.norm()),
        format!("index: {}", map.index()),
        "witness (rows):".into(),
    ];
    lines.extend(matrix_lines(b));
    emit(json, "construct", payload, &lines);
    Ok(ExitCode::SUCCESS)
}

/// An answered "no construction reaches this norm" (still exit 0).
fn emit_no_construction(json: bool, target: &str, reason: &str) -> Result<ExitCode, Error> {
    let payload = json!({
        "reason": reason,
        "status": "none",
    });
    let lines = vec![
        format!("lattice: {}", target),
        "status: none".into(),
        format!("reason: {}", reason),
    ];
    emit(json, "construct", payload, &lines);
    Ok(ExitCode::SUCCESS)
}

fn run_construct(
    json: bool,
    target: &str,
    norm: Option<u64>,
    r: Option<i64>,
    s: Option<i64>,
    circulant: [Option<i64>; 4],
) -> Result<ExitCode, Error> {
    if target.starts_with("file:") {
        return Err(Error::InvalidInput(
            "constructions need a catalog target, not a Gram file".into(),
        ));
    }
    let complex = match (r, s) {
        (Some(r), Some(s)) => Some((r, s)),
        (None, None) => None,
        _ => {
            return Err(Error::InvalidInput(
                "give both --r and --s for a complex multiplier".into(),
            ))
        }
    };
    let circulant = match circulant {
        [Some(a1), Some(a2), Some(a3), Some(a4)] => Some([a1, a2, a3, a4]),
        [None, None, None, None] => None,
        _ => {
            return Err(Error::InvalidInput(
                "give all four of --a1 --a2 --a3 --a4 for a circulant multiplier".into(),
            ))
        }
    };
    let modes = [norm.is_some(), complex.is_some(), circulant.is_some()];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return Err(Error::InvalidInput(
            "give exactly one of --norm, --r/--s, or --a1..--a4".into(),
        ));
    }

    if let Some((r, s)) = complex {
        let map = match target {
            "A2" | "E6" => eisenstein_multiplier(r, s, target)?,
            name => match zn_half_dimension(name) {
                Some(m) => gaussian_multiplier(r, s, m)?,
                None => {
                    return Err(Error::InvalidInput(format!(
                        "complex multipliers apply to even-dimensional Zn, A2, or E6, not {}",
                        name
                    )))
                }
            },
        };
        let kind = if matches!(target, "A2" | "E6") { "w" } else { "i" };
        return emit_construction(json, target, format!("{} + {}{}", r, s, kind), &map);
    }

    if let Some(a) = circulant {
        if target != "A4" {
            return Err(Error::InvalidInput(format!(
                "circulant multipliers apply to A4, not {}",
                target
            )));
        }
        return match a4_circulant_similarity(a)? {
            Some(map) => emit_construction(
                json,
                target,
                format!("circulant [{}, {}, {}, {}]", a[0], a[1], a[2], a[3]),
                &map,
            ),
            None => emit_no_construction(
                json,
                target,
                "these circulant coefficients do not satisfy the similarity constraint",
            ),
        };
    }

    let c = norm.expect("mode checked above");
    if c == 0 {
        return Err(Error::InvalidInput("norm must be positive".into()));
    }
    match target {
        "A2" | "E6" => match NormForm::Loeschian.represent(c) {
            Some((r, s)) => {
                let map = eisenstein_multiplier(r, s, target)?;
                emit_construction(json, target, format!("{} + {}w", r, s), &map)
            }
            None => emit_no_construction(
                json,
                target,
                "the norm is not represented by r^2 - rs + s^2, so no similarity of this norm exists",
            ),
        },
        "A4" => Err(Error::InvalidInput(
            "the 4-dimensional circulant family is parametrized by coefficients; use --a1..--a4"
                .into(),
        )),
        "K12" => {
            let (r, s, t, u) = represent_by_form(c, RepresentationForm::OneOneThreeThree)?;
            let map = k12_quaternion_multiplier(r, s, t, u)?;
            emit_construction(json, target, quaternion_string(r, s, t, u), &map)
        }
        "Leech" | "BW16" => {
            let (r, s, t, u) = represent_by_form(c, RepresentationForm::FourSquares)?;
            let q = Quaternion::from_integers(r, s, t, u);
            let map = leech_quaternion_multiplier(&q, target)?;
            emit_construction(json, target, quaternion_string(r, s, t, u), &map)
        }
        "E8" => {
            let (r, s, t, u) = represent_by_form(c, RepresentationForm::FourSquares)?;
            let q = Quaternion::from_integers(r, s, t, u);
            let map = quaternion_multiplier(&q, target)?;
            emit_construction(json, target, quaternion_string(r, s, t, u), &map)
        }
        name if name.starts_with('D') => {
            let (r, s, t, u) = represent_by_form(c, RepresentationForm::FourSquares)?;
            let q = Quaternion::from_integers(r, s, t, u);
            let map = quaternion_multiplier(&q, name)?;
            emit_construction(json, name, quaternion_string(r, s, t, u), &map)
        }
        name => {
            let Some(n) = zn_dimension(name) else {
                return Err(Error::InvalidInput(format!(
                    "no norm-driven construction for {}; see `catalog list` for targets",
                    name
                )));
            };
            if n % 2 == 1 {
                // Odd dimension admits exactly the square norms, realized
                // by an integer scalar.
                let root = integer_square_root(c);
                match root {
                    Some(k) => {
                        let entry = catalog_lattice(name)?;
                        let mut b = ZMat::zero(n, n);
                        for i in 0..n {
                            b.set(i, i, BigInt::from(k));
                        }
                        let map = SimilarityMap::new(
                            entry.lattice,
                            b,
                            BigRational::from(BigInt::from(c)),
                        )?;
                        emit_construction(json, name, format!("scalar {}", k), &map)
                    }
                    None => emit_no_construction(
                        json,
                        name,
                        "odd-dimensional targets admit exactly the perfect square norms",
                    ),
                }
            } else if n % 4 == 0 {
                let (r, s, t, u) = represent_by_form(c, RepresentationForm::FourSquares)?;
                let q = Quaternion::from_integers(r, s, t, u);
                let map = quaternion_multiplier(&q, name)?;
                emit_construction(json, name, quaternion_string(r, s, t, u), &map)
            } else {
                match NormForm::TwoSquares.represent(c) {
                    Some((r, s)) => {
                        let map = gaussian_multiplier(r, s, n / 2)?;
                        emit_construction(json, name, format!("{} + {}i", r, s), &map)
                    }
                    None => emit_no_construction(
                        json,
                        name,
                        "the norm is not a sum of two squares, so no similarity of this norm exists in dimension 2 mod 4",
                    ),
                }
            }
        }
    }
}

fn quaternion_string(r: i64, s: i64, t: i64, u: i64) -> String {
    format!("{} + {}i + {}j + {}k", r, s, t, u)
}

/// `Some(n)` when `name` is `Z<n>`.
fn zn_dimension(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('Z')?;
    let n: usize = digits.parse().ok()?;
    if n == 0 || format!("Z{n}") != name {
        return None;
    }
    Some(n)
}

/// `Some(m)` when `name` is `Z<2m>`.
fn zn_half_dimension(name: &str) -> Option<usize> {
    let n = zn_dimension(name)?;
    if n % 2 == 0 {
        Some(n / 2)
    } else {
        None
    }
}

fn integer_square_root(c: u64) -> Option<u64> {
    let k = c.isqrt();
    if k * k == c {
        Some(k)
    } else {
        None
    }
}

fn run_catalog(json: bool, action: CatalogAction) -> Result<ExitCode, Error> {
    match action {
        CatalogAction::List => {
            let names = catalog_names();
            let payload = json!({ "names": names });
            emit(json, "catalog list", payload, &names);
            Ok(ExitCode::SUCCESS)
        }
        CatalogAction::Show { name } => {
            let entry: CatalogEntry = catalog_lattice(&name)?;
            let lat = &entry.lattice;
            let det = lat.determinant();
            let meta = lat.meta();
            let gram = lat.gram();
            let mut gram_flat = Vec::with_capacity(lat.dim() * lat.dim());
            for i in 0..lat.dim() {
                for j in 0..lat.dim() {
                    gram_flat.push(gram.at(i, j).to_string());
                }
            }
            let payload = json!({
                "determinant": det.to_string(),
                "dimension": lat.dim(),
                "gram": gram_flat,
                "has_generator": entry.generator.is_some(),
                "maximality": meta.maximality,
                "name": entry.name,
                "provenance": entry.provenance,
                "unigeneric": meta.unigeneric,
            });
            let lines = vec![
                format!("name: {}", entry.name),
                format!("dimension: {}", lat.dim()),
                format!("determinant: {}", det),
                format!("unigeneric: {}", if meta.unigeneric { "yes" } else { "no" }),
                format!(
                    "maximality: {}",
                    match meta.maximality {
                        Some(r) => format!("maximal among norms in {}Z", r),
                        None => "not recorded".into(),
                    }
                ),
                format!(
                    "coordinate generator: {}",
                    if entry.generator.is_some() { "yes" } else { "no" }
                ),
                format!("provenance: {}", entry.provenance),
            ];
            emit(json, "catalog show", payload, &lines);
            Ok(ExitCode::SUCCESS)
        }
        CatalogAction::Export { name, path } => {
            let entry = catalog_lattice(&name)?;
            entry.lattice.save(&path)?;
            let reloaded = GramLattice::load(&path)?;
            if reloaded.gram() != entry.lattice.gram() {
                return Err(Error::InvalidInput(format!(
                    "exported file {} did not round-trip",
                    path.display()
                )));
            }
            let payload = json!({
                "name": entry.name,
                "path": path.display().to_string(),
                "round_trip": true,
            });
            let lines = vec![format!(
                "wrote {} to {} (round-trip checked)",
                entry.name,
                path.display()
            )];
            emit(json, "catalog export", payload, &lines);
            Ok(ExitCode::SUCCESS)
        }
    }
}
