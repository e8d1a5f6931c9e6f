//! Explicit similarity constructions on catalog lattices.
//!
//! Each constructor builds a concrete integer matrix, then re-verifies
//! the similarity equation exactly before returning, so a returned map
//! is always a proof of existence:
//!
//! * complex multiplication by `r + si` on `Z^{2m}` and by `r + sw`
//!   (`w` a primitive cube root of unity) on `A2` and `E6`;
//! * the cyclic-shift family on `A4`;
//! * right quaternion multiplication on `Z^{4m}`, the `D` families and
//!   their index-two extensions;
//! * per-column right quaternion multiplication on the Leech lattice and
//!   `BW16` in their shared array coordinates;
//! * the blockwise multiplier `r + si + sqrt(3)tj + sqrt(3)uk` on `K12`;
//! * exhaustive representation of integers by the two auxiliary
//!   quaternary forms, which turns those multipliers into witnesses of
//!   any requested norm.
//!
//! Array-coordinate quaternion scheme: each of the six columns of the
//! 4 x 6 array is read top to bottom as a quaternion in the units
//! `(1, i, j, k)` for columns 0, 2, 4 and `(1, k, i, j)` for columns
//! 1, 3, 5.  With the catalog's Golay conventions, right multiplication
//! by any Hurwitz quaternion then stabilizes the Leech lattice; this is
//! checked again on every call, and a failure is reported as a hard
//! catalog error rather than silently repaired.

use num_rational::BigRational;

use crate::catalog::{catalog_lattice, CatalogEntry};
use crate::error::{Error, Result};
use crate::lattice::SimilarityMap;
use crate::mat::{rat, QMat, ZMat};
use crate::quaternion::Quaternion;

/// Units read down the columns in even array positions (0, 2, 4).
const EVEN_POSITION_UNITS: [usize; 4] = [0, 1, 2, 3];
/// Units read down the columns in odd array positions (1, 3, 5).
const ODD_POSITION_UNITS: [usize; 4] = [0, 3, 1, 2];

fn unit_quaternion(idx: usize) -> Quaternion {
    match idx {
        0 => Quaternion::from_integers(1, 0, 0, 0),
        1 => Quaternion::from_integers(0, 1, 0, 0),
        2 => Quaternion::from_integers(0, 0, 1, 0),
        _ => Quaternion::from_integers(0, 0, 0, 1),
    }
}

/// Solves for the basis-coordinate matrix of an ambient linear map and
/// wraps it as a verified similarity.  `NotStabilizing` reports a map
/// whose images leave the lattice.
fn similarity_from_ambient(
    entry: &CatalogEntry,
    ambient_map: &QMat,
    norm: BigRational,
) -> Result<SimilarityMap> {
    let x = match entry.generator.as_ref() {
        None => ambient_map.transpose(),
        Some(g) => {
            let h = g.mul(&ambient_map.transpose());
            if g.rows() == g.cols() {
                let ginv = g.inverse().ok_or_else(|| {
                    Error::CatalogInvalid(format!("{}: generator is singular", entry.name))
                })?;
                h.mul(&ginv)
            } else {
                let gt = g.transpose();
                let gram_inv = g.mul(&gt).inverse().ok_or_else(|| {
                    Error::CatalogInvalid(format!("{}: generator has deficient rank", entry.name))
                })?;
                let x = h.mul(&gt).mul(&gram_inv);
                if x.mul(g) != h {
                    return Err(Error::NotStabilizing(format!(
                        "the map carries {} outside its own span",
                        entry.name
                    )));
                }
                x
            }
        }
    };
    if !x.is_integral() {
        return Err(Error::NotStabilizing(format!(
            "the map does not carry {} into itself",
            entry.name
        )));
    }
    let b = x
        .transpose()
        .to_integer()
        .expect("integrality was just checked");
    SimilarityMap::new(entry.lattice.clone(), b, norm)
}

/// Multiplication by `r + si` acting on `m` complex coordinate pairs of
/// `Z^{2m}`; the norm is `r² + s²`.
pub fn gaussian_multiplier(r: i64, s: i64, m: usize) -> Result<SimilarityMap> {
    if (r, s) == (0, 0) {
        return Err(Error::InvalidInput(
            "the zero multiplier is not a similarity".into(),
        ));
    }
    if m == 0 || m > 12 {
        return Err(Error::InvalidInput(format!(
            "the number of complex coordinates must be between 1 and 12, got {m}"
        )));
    }
    let entry = catalog_lattice(&format!("Z{}", 2 * m))?;
    let mut ambient = QMat::zero(2 * m, 2 * m);
    for b in 0..m {
        ambient.set(2 * b, 2 * b, rat(r));
        ambient.set(2 * b, 2 * b + 1, rat(-s));
        ambient.set(2 * b + 1, 2 * b, rat(s));
        ambient.set(2 * b + 1, 2 * b + 1, rat(r));
    }
    similarity_from_ambient(&entry, &ambient, rat(r * r + s * s))
}

/// Multiplication by `r + sw` on `A2` or `E6`; the norm is
/// `r² − rs + s²`.
pub fn eisenstein_multiplier(r: i64, s: i64, target: &str) -> Result<SimilarityMap> {
    if (r, s) == (0, 0) {
        return Err(Error::InvalidInput(
            "the zero multiplier is not a similarity".into(),
        ));
    }
    let norm = rat(r * r - r * s + s * s);
    match target {
        "A2" => {
            let entry = catalog_lattice("A2")?;
            let b = ZMat::from_rows(&[vec![r, -s], vec![s, r - s]]);
            SimilarityMap::new(entry.lattice, b, norm)
        }
        "E6" => {
            let entry = catalog_lattice("E6")?;
            let mut ambient = QMat::zero(6, 6);
            for b in 0..3 {
                ambient.set(2 * b, 2 * b, rat(r));
                ambient.set(2 * b, 2 * b + 1, rat(-s));
                ambient.set(2 * b + 1, 2 * b, rat(s));
                ambient.set(2 * b + 1, 2 * b + 1, rat(r - s));
            }
            similarity_from_ambient(&entry, &ambient, norm)
        }
        _ => Err(Error::InvalidInput(format!(
            "complex cube-root multiplication targets A2 or E6, not {target}"
        ))),
    }
}

/// The similarity `a1 α + a2 α² + a3 α³ + a4 α⁴` on `A4`, where `α`
/// cyclically permutes the five ambient coordinates.  Returns `None`
/// when the coefficient constraint fails (or for the zero multiplier);
/// otherwise the norm is half the value of the `A4` Gram form at `a`.
pub fn a4_circulant_similarity(a: [i64; 4]) -> Result<Option<SimilarityMap>> {
    const CONSTRAINT: [[i64; 4]; 4] = [
        [0, 1, -1, -1],
        [1, 0, 1, -1],
        [-1, 1, 0, 1],
        [-1, -1, 1, 0],
    ];
    const GRAM: [[i64; 4]; 4] = [
        [2, -1, 0, 0],
        [-1, 2, -1, 0],
        [0, -1, 2, -1],
        [0, 0, -1, 2],
    ];
    let quad = |m: &[[i64; 4]; 4]| -> i64 {
        let mut total = 0;
        for i in 0..4 {
            for j in 0..4 {
                total += a[i] * m[i][j] * a[j];
            }
        }
        total
    };
    if a == [0; 4] || quad(&CONSTRAINT) != 0 {
        return Ok(None);
    }
    let doubled_norm = quad(&GRAM);
    let entry = catalog_lattice("A4")?;
    // Ambient action on Z^5: powers of the coordinate cycle.
    let mut ambient = QMat::zero(5, 5);
    for (power, &coeff) in a.iter().enumerate() {
        let shift = power + 1;
        for col in 0..5 {
            let row = (col + shift) % 5;
            let updated = ambient.at(row, col) + rat(coeff);
            ambient.set(row, col, updated);
        }
    }
    let norm = rat(doubled_norm) / rat(2);
    similarity_from_ambient(&entry, &ambient, norm).map(Some)
}

fn quaternion_block_target(target: &str) -> Result<CatalogEntry> {
    let entry = catalog_lattice(target)?;
    let allowed = target == "E8"
        || target
            .strip_prefix('Z')
            .map(|n| n.parse::<usize>().map(|n| n % 4 == 0).unwrap_or(false))
            .unwrap_or(false)
        || target.starts_with('D');
    if !allowed || entry.lattice.dim() % 4 != 0 {
        return Err(Error::InvalidInput(format!(
            "quaternionic coordinates need a Z, D, D+, or E8 lattice of dimension 4m, not {target}"
        )));
    }
    Ok(entry)
}

/// Right multiplication by a Hurwitz quaternion on each quaternionic
/// coordinate of `Z^{4m}`, `D_{4m}`, `D_{4m}+`, or `E8`; the norm is the
/// reduced norm of the multiplier.  The multiplier must stabilize the
/// target: for example half-odd multipliers stabilize `D4` and `E8` but
/// not `Z^{4m}`, and the error reports this rather than rounding.
pub fn quaternion_multiplier(q: &Quaternion, target: &str) -> Result<SimilarityMap> {
    if q.is_zero() {
        return Err(Error::InvalidInput(
            "the zero quaternion is not a similarity".into(),
        ));
    }
    let entry = quaternion_block_target(target)?;
    let n = entry.lattice.dim();
    let block = q.right_mult_matrix();
    let mut ambient = QMat::zero(n, n);
    for b in 0..n / 4 {
        for i in 0..4 {
            for j in 0..4 {
                ambient.set(4 * b + i, 4 * b + j, block.at(i, j).clone());
            }
        }
    }
    similarity_from_ambient(&entry, &ambient, BigRational::from(q.reduced_norm()))
}

/// The ambient 24-coordinate map of per-column right multiplication
/// under the array quaternion scheme.
fn array_scheme_map(q: &Quaternion) -> QMat {
    let mut ambient = QMat::zero(24, 24);
    for col in 0..6 {
        let units = if col % 2 == 0 {
            EVEN_POSITION_UNITS
        } else {
            ODD_POSITION_UNITS
        };
        // Column r of the block holds the unit-basis coordinates of
        // units[r] * q.
        for r in 0..4 {
            let prod = unit_quaternion(units[r]).mul(q);
            for rp in 0..4 {
                ambient.set(4 * col + rp, 4 * col + r, prod.components()[units[rp]].clone());
            }
        }
    }
    ambient
}

/// Per-column right quaternion multiplication on the Leech lattice or on
/// `BW16` (which occupies the first four array columns); the norm is the
/// reduced norm of the multiplier.  Every Hurwitz multiplier stabilizes
/// both targets; a failure would mean the catalog and the scheme
/// disagree and is reported as a catalog error.
pub fn leech_quaternion_multiplier(q: &Quaternion, target: &str) -> Result<SimilarityMap> {
    if q.is_zero() {
        return Err(Error::InvalidInput(
            "the zero quaternion is not a similarity".into(),
        ));
    }
    if target != "Leech" && target != "BW16" {
        return Err(Error::InvalidInput(format!(
            "the array quaternion scheme targets Leech or BW16, not {target}"
        )));
    }
    let entry = catalog_lattice(target)?;
    let ambient = array_scheme_map(q);
    similarity_from_ambient(&entry, &ambient, BigRational::from(q.reduced_norm())).map_err(|e| {
        match e {
            Error::NotStabilizing(_) => Error::CatalogInvalid(format!(
                "the array quaternion scheme fails to stabilize {target}: catalog and scheme disagree"
            )),
            other => other,
        }
    })
}

/// The blockwise multiplier `r + si + sqrt(3)tj + sqrt(3)uk` on `K12`,
/// of norm `r² + s² + 3t² + 3u²`.  Each pair of array columns holds one
/// quaternionic coordinate `a + bi + sqrt(3)Aj + sqrt(3)Bk`: `a` and `A`
/// sit in the first column (top cell and repeated bottom cells), `b` and
/// `B` in the second.  All irrational factors cancel, leaving an integer
/// matrix on the catalog basis.
pub fn k12_quaternion_multiplier(r: i64, s: i64, t: i64, u: i64) -> Result<SimilarityMap> {
    if (r, s, t, u) == (0, 0, 0, 0) {
        return Err(Error::InvalidInput(
            "the zero multiplier is not a similarity".into(),
        ));
    }
    let entry = catalog_lattice("K12")?;
    let mut ambient = QMat::zero(24, 24);
    for c in 0..3usize {
        let first = 8 * c;
        let second = 8 * c + 4;
        // Images, with (a, b, A, B) read from (first, second, first+1,
        // second+1):
        //   a' = ar - bs - 3At - 3Bu
        //   A' = at - bu + Ar + Bs
        //   b' = as + br + 3Au - 3Bt
        //   B' = au + bt - As + Br
        let assignments: [(usize, bool, [i64; 4]); 4] = [
            (first, false, [r, -s, -3 * t, -3 * u]),
            (first + 1, true, [t, -u, r, s]),
            (second, false, [s, r, 3 * u, -3 * t]),
            (second + 1, true, [u, t, -s, r]),
        ];
        for (row_base, repeated, coeffs) in assignments {
            let rows: &[usize] = if repeated {
                &[row_base, row_base + 1, row_base + 2]
            } else {
                &[row_base]
            };
            for &row in rows {
                ambient.set(row, first, rat(coeffs[0]));
                ambient.set(row, second, rat(coeffs[1]));
                ambient.set(row, first + 1, rat(coeffs[2]));
                ambient.set(row, second + 1, rat(coeffs[3]));
            }
        }
    }
    let norm = rat(r * r + s * s + 3 * (t * t + u * u));
    similarity_from_ambient(&entry, &ambient, norm).map_err(|e| match e {
        Error::NotStabilizing(_) => Error::CatalogInvalid(
            "the blockwise multiplier fails to stabilize K12: catalog and scheme disagree".into(),
        ),
        other => other,
    })
}

/// The two auxiliary quaternary forms used to reach every norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepresentationForm {
    /// `r² + s² + t² + u²`.
    FourSquares,
    /// `r² + s² + 3t² + 3u²`.
    OneOneThreeThree,
}

/// Finds a representation of `c >= 1` by the requested form through
/// bounded exhaustive search (components ordered largest first).  Both
/// forms are universal, so exhaustion is an internal error, not a
/// caller mistake.
pub fn represent_by_form(c: u64, form: RepresentationForm) -> Result<(i64, i64, i64, i64)> {
    if c == 0 {
        return Err(Error::InvalidInput(
            "only positive integers are represented".into(),
        ));
    }
    let c = i64::try_from(c)
        .map_err(|_| Error::InvalidInput("representation target is too large".into()))?;
    let isqrt = |v: i64| -> i64 {
        let mut r = (v as f64).sqrt() as i64 + 1;
        while r * r > v {
            r -= 1;
        }
        r
    };
    let t_weight = match form {
        RepresentationForm::FourSquares => 1,
        RepresentationForm::OneOneThreeThree => 3,
    };
    for r in (0..=isqrt(c)).rev() {
        let after_r = c - r * r;
        for s in (0..=r.min(isqrt(after_r))).rev() {
            let after_s = after_r - s * s;
            if after_s % t_weight != 0 {
                continue;
            }
            let t_budget = after_s / t_weight;
            for t in (0..=isqrt(t_budget)).rev() {
                let after_t = t_budget - t * t;
                let u = isqrt(after_t);
                if u * u == after_t && u <= t {
                    if form == RepresentationForm::FourSquares && t > s {
                        continue;
                    }
                    return Ok((r, s, t, u));
                }
            }
        }
    }
    Err(Error::NoRepresentation(format!(
        "exhaustive search found no representation of {c}; the form tables are corrupt"
    )))
}
