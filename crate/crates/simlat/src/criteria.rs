//! Existence criteria for similarities of a given norm.
//!
//! For an even-dimensional rational lattice with Gram matrix `A` and `n =
//! 2k`, a similarity of norm `c` can only exist when the Hilbert symbol
//! `(c, (-1)^k det A)_p` equals `+1` at every prime `p` dividing
//! `2 c det A`.  [`check_necessary`] evaluates exactly that, on the
//! canonical integral rescale of the lattice (the answer only depends on
//! the square class of the determinant, so the rescale is harmless).
//!
//! In odd dimension the story collapses: similarity norms are precisely
//! the perfect integer squares, realized by scalar multiplication
//! ([`odd_dimension_rule`]).
//!
//! Whether a passing symbol check is also *sufficient* depends on facts
//! about the isometry class that are not computable from the Gram matrix
//! alone; catalog entries carry those as flags ([`LatticeMeta`]), and the
//! verdict is upgraded to `passes-sufficient` only when the flags are
//! present.
//!
//! [`norm_doubling_check`] answers the special case `c = 2` through an
//! independent route, a parity condition on the determinant's prime
//! factorization, and is cross-checked against the symbol computation.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{factorize, hilbert_symbol, is_perfect_square, Place};
use crate::error::{Error, Result};
use crate::lattice::GramLattice;

/// Outcome tier of an existence criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A necessary condition is violated; no similarity of this norm exists.
    Fails,
    /// All necessary conditions hold, but existence is not certified.
    PassesNecessary,
    /// All necessary conditions hold and the lattice's catalog flags
    /// certify that they are sufficient; a similarity exists.
    PassesSufficient,
}

impl Verdict {
    /// The stable string form used in reports and JSON output.
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Fails => "fails",
            Verdict::PassesNecessary => "passes-necessary",
            Verdict::PassesSufficient => "passes-sufficient",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Full record of a necessary-condition evaluation.
///
/// Serializes with alphabetical field order and all big numbers rendered
/// as decimal strings, so JSON output is stable across platforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessaryConditionReport {
    /// The candidate similarity norm `c`.
    pub norm: BigRational,
    /// Human-readable explanation of the verdict.
    pub notes: String,
    /// The primes dividing `2 c det A` at which symbols were evaluated.
    pub relevant_primes: Vec<BigUint>,
    /// Hilbert symbol values `(p, ±1)`, one per relevant prime.
    pub symbols: Vec<(BigUint, i8)>,
    /// The outcome tier.
    pub verdict: Verdict,
}

impl Serialize for NecessaryConditionReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NecessaryConditionReport", 5)?;
        st.serialize_field("norm", &self.norm.to_string())?;
        st.serialize_field("notes", &self.notes)?;
        let primes: Vec<String> = self.relevant_primes.iter().map(|p| p.to_string()).collect();
        st.serialize_field("relevant_primes", &primes)?;
        let symbols: Vec<(String, i8)> = self
            .symbols
            .iter()
            .map(|(p, v)| (p.to_string(), *v))
            .collect();
        st.serialize_field("symbols", &symbols)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.end()
    }
}

impl NecessaryConditionReport {
    /// True unless the verdict is [`Verdict::Fails`].
    pub fn passes(&self) -> bool {
        self.verdict != Verdict::Fails
    }
}

/// Decides whether `c` is an admissible similarity norm in odd dimension:
/// true exactly when `c` is the square of a positive integer, in which
/// case scalar multiplication by the square root realizes it.
pub fn odd_dimension_rule(n: usize, c: &BigRational) -> Result<bool> {
    if n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "odd-dimension rule called with even dimension {}",
            n
        )));
    }
    if !c.is_positive() {
        return Err(Error::InvalidInput(format!(
            "similarity norm must be positive, got {}",
            c
        )));
    }
    Ok(c.is_integer() && is_perfect_square(c.numer()))
}

/// The verdict tier for a passing check, read off the catalog flags.
fn passing_verdict(lattice: &GramLattice) -> (Verdict, &'static str) {
    let meta = lattice.meta();
    if meta.unigeneric && meta.maximality.is_some() {
        (
            Verdict::PassesSufficient,
            "catalog flags (single class in its genus, maximal) make the condition sufficient: a similarity of this norm exists",
        )
    } else {
        (
            Verdict::PassesNecessary,
            "no sufficiency flags are recorded for this lattice, so the passing condition is necessary only",
        )
    }
}

/// Evaluates the necessary condition for a similarity of norm `c`.
///
/// In even dimension `n = 2k` this computes the Hilbert symbols
/// `(c, (-1)^k det A)_p` over all primes `p` dividing `2 c det A`, after
/// rescaling the Gram matrix to its primitive integral form; it also
/// requires the similarity index `c^{n/2}` to be an integer.  In odd
/// dimension it delegates to [`odd_dimension_rule`].
pub fn check_necessary(lattice: &GramLattice, c: &BigRational) -> Result<NecessaryConditionReport> {
    if !c.is_positive() {
        return Err(Error::InvalidInput(format!(
            "similarity norm must be positive, got {}",
            c
        )));
    }
    let n = lattice.dim();
    if n % 2 == 1 {
        let square = odd_dimension_rule(n, c)?;
        let (verdict, notes) = if square {
            let (tier, flag_note) = passing_verdict(lattice);
            let head = format!(
                "odd dimension {}: the norm is a perfect integer square, and scalar multiplication by its square root is a similarity; {}",
                n, flag_note
            );
            (tier, head)
        } else {
            (
                Verdict::Fails,
                format!(
                    "odd dimension {}: admissible similarity norms are exactly the perfect integer squares, and {} is not one",
                    n, c
                ),
            )
        };
        return Ok(NecessaryConditionReport {
            norm: c.clone(),
            notes,
            relevant_primes: Vec::new(),
            symbols: Vec::new(),
            verdict,
        });
    }

    let k = n / 2;
    let (integral, _scale) = lattice.integralize();
    let det = integral.determinant();
    debug_assert!(det.is_integer() && det.is_positive());
    let det_int = det.to_integer();
    let comparison = if k % 2 == 1 { -&det_int } else { det_int.clone() };
    let comparison = BigRational::from(comparison);

    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    for (p, _) in factorize(&det_int)?.factors {
        primes.insert(p);
    }
    for part in [c.numer(), c.denom()] {
        for (p, _) in factorize(part)?.factors {
            primes.insert(p);
        }
    }

    let mut symbols = Vec::new();
    let mut failing: Vec<String> = Vec::new();
    for p in &primes {
        let s = hilbert_symbol(c, &comparison, &Place::Finite(p.clone()))?;
        if s < 0 {
            failing.push(p.to_string());
        }
        symbols.push((p.clone(), s));
    }

    let index = pow_rational(c, k as u32);
    let index_integral = index.is_integer();

    let verdict;
    let notes;
    if !failing.is_empty() {
        verdict = Verdict::Fails;
        notes = format!(
            "hilbert symbol of (c, (-1)^k det) is -1 at p = {}; no similarity of norm {} exists",
            failing.join(", "),
            c
        );
    } else if !index_integral {
        verdict = Verdict::Fails;
        notes = format!(
            "the similarity index c^(n/2) = {} is not an integer, so no similarity of norm {} exists",
            index, c
        );
    } else {
        let (tier, flag_note) = passing_verdict(lattice);
        verdict = tier;
        notes = format!(
            "all symbols (c, (-1)^k det) with k = {} are +1; {}",
            k, flag_note
        );
    }

    Ok(NecessaryConditionReport {
        norm: c.clone(),
        notes,
        relevant_primes: primes.into_iter().collect(),
        symbols,
        verdict,
    })
}

/// Decides whether the lattice admits a similarity of norm 2, via a parity
/// condition on the determinant: in even dimension such a similarity can
/// exist precisely when every prime `p ≡ ±3 (mod 8)` divides the
/// determinant of the primitive integral form to an even power.
///
/// This is computed independently of [`check_necessary`] (no Hilbert
/// symbol evaluations) but must agree with `check_necessary(lattice, 2)`
/// on both the verdict and the per-prime symbol values.
pub fn norm_doubling_check(lattice: &GramLattice) -> Result<NecessaryConditionReport> {
    let two = BigRational::from(BigInt::from(2));
    let n = lattice.dim();
    if n % 2 == 1 {
        return Ok(NecessaryConditionReport {
            norm: two,
            notes: format!(
                "odd dimension {}: admissible similarity norms are exactly the perfect integer squares, and 2 is not one",
                n
            ),
            relevant_primes: Vec::new(),
            symbols: Vec::new(),
            verdict: Verdict::Fails,
        });
    }
    let k = n / 2;
    let (integral, _scale) = lattice.integralize();
    let det_int = integral.determinant().to_integer();
    let factored = factorize(&det_int)?;

    // Symbol at an odd prime p: -1 exactly when p ≡ ±3 (mod 8) and p
    // divides the determinant to an odd power, because the symbol reduces
    // to the quadratic character of 2 modulo p raised to that power.
    let mut symbols: Vec<(BigUint, i8)> = Vec::new();
    let mut offenders: Vec<String> = Vec::new();
    let eight = BigUint::from(8u32);
    let odd_primes: Vec<(BigUint, u32)> = factored
        .factors
        .iter()
        .filter(|(p, _)| p != &BigUint::from(2u32))
        .cloned()
        .collect();

    // Symbol at p = 2: -1 exactly when the odd part of (-1)^k det is
    // ±3 (mod 8).  When the parity condition at the odd primes holds, the
    // odd part is a product of squares and of primes ≡ ±1 (mod 8), hence
    // itself ≡ ±1 (mod 8), so this symbol can only fail together with one
    // of the others.
    let mut odd_part_mod8 = if k % 2 == 1 {
        7u32 // -1 mod 8
    } else {
        1u32
    };
    for (p, e) in &odd_primes {
        let pm = (p % &eight).to_u32_digits()[0];
        if e % 2 == 1 {
            odd_part_mod8 = (odd_part_mod8 * pm) % 8;
            if pm == 3 || pm == 5 {
                offenders.push(p.to_string());
            }
        }
    }
    let symbol_at_two: i8 = if odd_part_mod8 == 3 || odd_part_mod8 == 5 {
        -1
    } else {
        1
    };
    symbols.push((BigUint::from(2u32), symbol_at_two));
    for (p, e) in &odd_primes {
        let pm = (p % &eight).to_u32_digits()[0];
        let bad = (pm == 3 || pm == 5) && e % 2 == 1;
        symbols.push((p.clone(), if bad { -1 } else { 1 }));
    }

    let verdict;
    let notes;
    if !offenders.is_empty() {
        verdict = Verdict::Fails;
        notes = format!(
            "the prime(s) {} are ±3 (mod 8) and divide the determinant {} to an odd power; no norm-doubling similarity exists",
            offenders.join(", "),
            det_int
        );
    } else if symbol_at_two < 0 {
        // Unreachable when the odd-prime condition holds; kept as a guard.
        verdict = Verdict::Fails;
        notes = format!(
            "the odd part of (-1)^k det = {} is ±3 (mod 8); no norm-doubling similarity exists",
            det_int
        );
    } else {
        let (tier, flag_note) = passing_verdict(lattice);
        verdict = tier;
        notes = format!(
            "every prime ≡ ±3 (mod 8) divides the determinant {} to an even power; {}",
            det_int, flag_note
        );
    }

    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    for (p, _) in &factored.factors {
        primes.insert(p.clone());
    }
    let relevant: Vec<BigUint> = primes.into_iter().collect();
    symbols.sort_by(|a, b| a.0.cmp(&b.0));

    Ok(NecessaryConditionReport {
        norm: two,
        notes,
        relevant_primes: relevant,
        symbols,
        verdict,
    })
}

/// `c` raised to a nonnegative integer power, exactly.
fn pow_rational(c: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeMeta;
    use crate::mat::{rat, rat_frac, QMat};

    fn zn(n: usize) -> GramLattice {
        GramLattice::new(QMat::identity(n)).unwrap()
    }

    fn zn_flagged(n: usize) -> GramLattice {
        zn(n).with_meta(LatticeMeta {
            unigeneric: true,
            maximality: Some(1),
        })
    }

    fn a2() -> GramLattice {
        GramLattice::new(QMat::from_i64_rows(&[vec![2, -1], vec![-1, 2]])).unwrap()
    }

    fn diag(entries: &[i64]) -> GramLattice {
        let n = entries.len();
        let mut rows = vec![vec![0i64; n]; n];
        for (i, &e) in entries.iter().enumerate() {
            rows[i][i] = e;
        }
        GramLattice::new(QMat::from_i64_rows(&rows)).unwrap()
    }

    fn e6() -> GramLattice {
        let gram = QMat::from_i64_rows(&[
            vec![2, -1, 0, 0, 0, 0],
            vec![-1, 2, -1, 0, 0, 0],
            vec![0, -1, 2, -1, 0, -1],
            vec![0, 0, -1, 2, -1, 0],
            vec![0, 0, 0, -1, 2, 0],
            vec![0, 0, -1, 0, 0, 2],
        ]);
        let lat = GramLattice::new(gram).unwrap();
        assert_eq!(lat.determinant(), rat(3));
        lat
    }

    fn d4() -> GramLattice {
        let gram = QMat::from_i64_rows(&[
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ]);
        let lat = GramLattice::new(gram).unwrap();
        assert_eq!(lat.determinant(), rat(4));
        lat
    }

    #[test]
    fn square_lattice_norms() {
        let report = check_necessary(&zn_flagged(2), &rat(5)).unwrap();
        assert_eq!(report.verdict, Verdict::PassesSufficient);
        assert!(report.symbols.iter().all(|(_, v)| *v == 1));

        let report = check_necessary(&zn_flagged(2), &rat(3)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
        let three = BigUint::from(3u32);
        assert!(report.symbols.contains(&(three, -1)));

        // Without catalog flags the same pass is necessary-only.
        let report = check_necessary(&zn(2), &rat(5)).unwrap();
        assert_eq!(report.verdict, Verdict::PassesNecessary);
    }

    #[test]
    fn e6_has_no_norm_doubling() {
        let report = check_necessary(&e6(), &rat(2)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
        let parity = norm_doubling_check(&e6()).unwrap();
        assert_eq!(parity.verdict, Verdict::Fails);
    }

    #[test]
    fn necessary_but_not_sufficient_example() {
        // diag(1,4) admits no similarity of norm 2 (it has no vectors of
        // norm 2 at all), yet the symbol condition passes; with no flags
        // recorded the verdict must stay at necessary-only.
        let lat = diag(&[1, 4]);
        let report = check_necessary(&lat, &rat(2)).unwrap();
        assert_eq!(report.verdict, Verdict::PassesNecessary);
        assert!(report.symbols.iter().all(|(_, v)| *v == 1));
    }

    #[test]
    fn odd_dimension_examples() {
        assert!(odd_dimension_rule(3, &rat(4)).unwrap());
        assert!(!odd_dimension_rule(3, &rat(2)).unwrap());
        assert!(odd_dimension_rule(5, &rat(9)).unwrap());
        assert!(odd_dimension_rule(2, &rat(4)).is_err());
        assert!(odd_dimension_rule(3, &rat(-4)).is_err());

        let report = check_necessary(&zn(3), &rat(4)).unwrap();
        assert_eq!(report.verdict, Verdict::PassesNecessary);
        let report = check_necessary(&zn_flagged(3), &rat(4)).unwrap();
        assert_eq!(report.verdict, Verdict::PassesSufficient);
        let report = check_necessary(&zn(3), &rat(2)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
    }

    #[test]
    fn nonintegral_index_fails_with_note() {
        let report = check_necessary(&zn(2), &rat_frac(1, 2)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
        assert!(report.notes.contains("not an integer"));

        let report = check_necessary(&zn(4), &rat_frac(3, 2)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
    }

    #[test]
    fn verdict_is_scale_invariant() {
        let lattices = [zn(2), a2(), diag(&[1, 4]), diag(&[2, 3]), zn(4)];
        let norms = [rat(1), rat(2), rat(3), rat(5), rat(7), rat(10)];
        let scales = [rat_frac(1, 2), rat(2), rat(3)];
        for lat in &lattices {
            for c in &norms {
                let base = check_necessary(lat, c).unwrap().verdict;
                for t in &scales {
                    let scaled = GramLattice::new(lat.gram().scale(t)).unwrap();
                    let got = check_necessary(&scaled, c).unwrap().verdict;
                    assert_eq!(got, base, "scale {} changed verdict for norm {}", t, c);
                }
            }
        }
    }

    #[test]
    fn norm_doubling_examples() {
        let z2 = zn_flagged(2);
        let report = norm_doubling_check(&z2).unwrap();
        assert_eq!(report.verdict, Verdict::PassesSufficient);

        let d4 = d4().with_meta(LatticeMeta {
            unigeneric: true,
            maximality: Some(2),
        });
        let report = norm_doubling_check(&d4).unwrap();
        assert_eq!(report.verdict, Verdict::PassesSufficient);

        let report = norm_doubling_check(&zn(3)).unwrap();
        assert_eq!(report.verdict, Verdict::Fails);
    }

    #[test]
    fn norm_doubling_agrees_with_symbol_route() {
        let mut lattices = vec![
            zn(2),
            zn(4),
            zn(3),
            zn(5),
            a2(),
            d4(),
            e6(),
            diag(&[1, 2]),
            diag(&[1, 3]),
            diag(&[1, 7]),
            diag(&[3, 3]),
            diag(&[1, 5]),
            diag(&[5, 5]),
            diag(&[1, 1, 1, 7]),
            diag(&[1, 1, 3, 5]),
            diag(&[2, 3, 5, 7]),
            diag(&[1, 6]),
            diag(&[7, 11]),
        ];
        // A few non-diagonal integral forms.
        lattices.push(GramLattice::new(QMat::from_i64_rows(&[vec![2, 1], vec![1, 4]])).unwrap());
        lattices.push(GramLattice::new(QMat::from_i64_rows(&[vec![4, 1], vec![1, 4]])).unwrap());
        lattices.push(GramLattice::new(QMat::from_i64_rows(&[vec![6, 1], vec![1, 6]])).unwrap());
        for lat in &lattices {
            let parity = norm_doubling_check(lat).unwrap();
            let symbol = check_necessary(lat, &rat(2)).unwrap();
            assert_eq!(
                parity.verdict, symbol.verdict,
                "verdict mismatch for gram {:?}",
                lat.gram()
            );
            if lat.dim() % 2 == 0 {
                assert_eq!(
                    parity.symbols, symbol.symbols,
                    "symbol mismatch for gram {:?}",
                    lat.gram()
                );
                assert_eq!(parity.relevant_primes, symbol.relevant_primes);
            }
        }
    }

    #[test]
    fn report_invariants_hold() {
        let lattices = [zn(2), a2(), d4(), e6(), diag(&[1, 4]), diag(&[2, 6])];
        let norms = [rat(1), rat(2), rat(3), rat(4), rat(5), rat(6), rat(7)];
        for lat in &lattices {
            for c in &norms {
                let report = check_necessary(lat, c).unwrap();
                let any_minus = report.symbols.iter().any(|(_, v)| *v == -1);
                if any_minus {
                    assert_eq!(report.verdict, Verdict::Fails);
                }
                if report.verdict == Verdict::PassesSufficient {
                    assert!(lat.meta().unigeneric && lat.meta().maximality.is_some());
                }
                // In even dimension with an integral index, failing
                // requires a -1 symbol.
                if lat.dim() % 2 == 0
                    && pow_rational(c, (lat.dim() / 2) as u32).is_integer()
                    && report.verdict == Verdict::Fails
                {
                    assert!(any_minus);
                }
            }
        }
    }

    #[test]
    fn report_serializes_with_stable_keys() {
        let report = check_necessary(&zn_flagged(2), &rat(5)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let keys: Vec<&str> = vec!["norm", "notes", "relevant_primes", "symbols", "verdict"];
        let mut last = 0;
        for key in keys {
            let pos = json.find(&format!("\"{}\"", key)).unwrap();
            assert!(pos >= last, "field {} out of order in {}", key, json);
            last = pos;
        }
        assert!(json.contains("\"verdict\":\"passes-sufficient\""));
        assert!(json.contains("\"norm\":\"5\""));
    }

    #[test]
    fn rejects_bad_norms() {
        assert!(check_necessary(&zn(2), &rat(0)).is_err());
        assert!(check_necessary(&zn(2), &rat(-3)).is_err());
    }
}
