//! Catalog of named lattices with validated invariants.
//!
//! Every entry carries a Gram matrix; entries used by the explicit
//! similarity constructors also carry a generator matrix whose rows are
//! basis vectors in an ambient rational coordinate system, together with
//! the ambient inner product when it differs from the standard dot
//! product.  All structural claims (determinant, evenness, minimum,
//! generator/Gram consistency) are recomputed exactly at load time, so a
//! corrupted table cannot propagate silently.
//!
//! Coordinate conventions:
//!
//! * `Zn`, the `D` families, and their index-two extensions `Dn+` live in
//!   standard coordinates of `R^n`.  For `n = 4m` the coordinates are
//!   read as `m` quaternion blocks `(1, i, j, k)`.
//! * `A4` lives in the sum-zero sublattice of `Z^5`.
//! * `E6` uses three complex coordinate pairs `(p, q)` meaning `p + qw`
//!   with `w` a primitive cube root of unity; the congruence
//!   `x1 = x2 = x3 (mod θ)`, `θ = 1 + 2w`, carves `E6` out of the cube of
//!   the hexagonal ring, and the inner product is scaled by `2/3` so the
//!   roots have norm 2.
//! * `Leech`, `BW16`, and `K12` use a 4 x 6 array of integer coordinates
//!   flattened as index `4*col + row`, matching the cell order of the
//!   Golay code masks in [`crate::golay`]; inner products carry a global
//!   factor `1/8`.
//!
//! `BW16` is the sublattice of `Leech` supported on the first four array
//! columns; `K12` is the sublattice where the three bottom rows of each
//! column are equal.  Both are extracted by an exact kernel computation
//! rather than hard-coded.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::golay::{golay_basis, is_golay_word};
use crate::lattice::{GramLattice, LatticeMeta, DEFAULT_ENUMERATION_BUDGET};
use crate::mat::{rat, rat_frac, QMat, ZMat};

/// A validated catalog lattice.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Catalog name, also stored on the lattice itself.
    pub name: String,
    /// The lattice with its Gram matrix and genus flags.
    pub lattice: GramLattice,
    /// Basis vectors as rows in ambient coordinates, when the entry
    /// supports coordinate-level constructions.
    pub generator: Option<QMat>,
    /// Inner product of the ambient coordinate system; `None` means the
    /// standard dot product.
    pub ambient_gram: Option<QMat>,
    /// One-line note on the provenance of the metadata flags.
    pub provenance: String,
}

impl CatalogEntry {
    /// The Gram matrix implied by the generator and ambient pairing.
    fn generator_gram(&self) -> Option<QMat> {
        let g = self.generator.as_ref()?;
        let gt = g.transpose();
        let product = match &self.ambient_gram {
            Some(s) => g.mul(s).mul(&gt),
            None => g.mul(&gt),
        };
        Some(product)
    }
}

/// Names accepted by [`catalog_lattice`], in display order.
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=24).map(|n| format!("Z{n}")).collect();
    names.push("A2".into());
    names.push("A4".into());
    for m in 1..=6 {
        names.push(format!("D{}", 4 * m));
    }
    for m in 1..=6 {
        names.push(format!("D{}+", 4 * m));
    }
    names.push("E6".into());
    names.push("E8".into());
    names.push("K12".into());
    names.push("BW16".into());
    names.push("Leech".into());
    names
}

/// Loads and validates a catalog lattice by name.
///
/// Entries are cached after the first successful load; the catalog is
/// immutable, so clones of the cached entry are always current.
pub fn catalog_lattice(name: &str) -> Result<CatalogEntry> {
    static CACHE: OnceLock<Mutex<HashMap<String, CatalogEntry>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(entry) = cache.lock().unwrap().get(name) {
        return Ok(entry.clone());
    }
    let entry = build_entry(name)?;
    cache
        .lock()
        .unwrap()
        .insert(name.to_string(), entry.clone());
    Ok(entry)
}

fn build_entry(name: &str) -> Result<CatalogEntry> {
    match name {
        "A2" => a2_entry(),
        "A4" => a4_entry(),
        "E6" => e6_entry(),
        "E8" => d_plus_entry(2, "E8"),
        "K12" => extract_sublattice_basis("K12"),
        "BW16" => extract_sublattice_basis("BW16"),
        "Leech" => leech_entry(),
        _ => {
            if let Some(rest) = name.strip_prefix('Z') {
                let n: usize = rest
                    .parse()
                    .map_err(|_| Error::UnknownLattice(name.to_string()))?;
                if (1..=24).contains(&n) {
                    return zn_entry(n);
                }
                return Err(Error::UnknownLattice(name.to_string()));
            }
            if let Some(rest) = name.strip_prefix('D') {
                let (body, plus) = match rest.strip_suffix('+') {
                    Some(body) => (body, true),
                    None => (rest, false),
                };
                let n: usize = body
                    .parse()
                    .map_err(|_| Error::UnknownLattice(name.to_string()))?;
                if n % 4 == 0 && (1..=6).contains(&(n / 4)) {
                    let m = n / 4;
                    return if plus {
                        d_plus_entry(m, name)
                    } else {
                        d_entry(m)
                    };
                }
                return Err(Error::UnknownLattice(name.to_string()));
            }
            Err(Error::UnknownLattice(name.to_string()))
        }
    }
}

/// Shared load-time checks.  `expected_det` is for the Gram matrix,
/// `root_count` counts sign-canonical vectors of norm exactly
/// `min` when a minimum check is requested.
struct Validation {
    expected_det: BigRational,
    even: bool,
    minimum: Option<(BigRational, Option<usize>)>,
}

fn validate(entry: &CatalogEntry, checks: &Validation) -> Result<()> {
    let gram = entry.lattice.gram();
    if let Some(from_generator) = entry.generator_gram() {
        if from_generator != *gram {
            return Err(Error::CatalogInvalid(format!(
                "{}: generator matrix does not reproduce the Gram matrix",
                entry.name
            )));
        }
    }
    let det = entry.lattice.determinant();
    if det != checks.expected_det {
        return Err(Error::CatalogInvalid(format!(
            "{}: determinant {} differs from the expected {}",
            entry.name, det, checks.expected_det
        )));
    }
    if !gram.is_integral() {
        return Err(Error::CatalogInvalid(format!(
            "{}: Gram matrix is not integral",
            entry.name
        )));
    }
    if checks.even {
        let two = BigInt::from(2);
        for i in 0..entry.lattice.dim() {
            if !(gram.at(i, i).to_integer() % &two).is_zero() {
                return Err(Error::CatalogInvalid(format!(
                    "{}: claimed even but a diagonal entry is odd",
                    entry.name
                )));
            }
        }
    }
    if let Some((min, count)) = &checks.minimum {
        let below = entry
            .lattice
            .short_vectors(&(min - BigRational::one()))
            .map_err(|e| {
                Error::CatalogInvalid(format!("{}: minimum check failed: {e}", entry.name))
            })?;
        if !below.is_empty() {
            return Err(Error::CatalogInvalid(format!(
                "{}: vector of norm below the claimed minimum {}",
                entry.name, min
            )));
        }
        if let Some(expected_count) = count {
            let shell = entry.lattice.short_vectors(min).map_err(|e| {
                Error::CatalogInvalid(format!("{}: shell check failed: {e}", entry.name))
            })?;
            let at_min = shell.iter().filter(|(_, norm)| norm == min).count();
            if at_min != *expected_count {
                return Err(Error::CatalogInvalid(format!(
                    "{}: {} sign-canonical minimal vectors, expected {}",
                    entry.name, at_min, expected_count
                )));
            }
        }
    }
    Ok(())
}

fn zn_entry(n: usize) -> Result<CatalogEntry> {
    let gram = QMat::identity(n);
    let meta = if n <= 8 {
        LatticeMeta {
            unigeneric: true,
            maximality: Some(1),
        }
    } else {
        LatticeMeta::default()
    };
    let name = format!("Z{n}");
    let lattice = GramLattice::with_name(name.clone(), gram)?.with_meta(meta);
    let entry = CatalogEntry {
        name,
        lattice,
        generator: None,
        ambient_gram: None,
        provenance: if n <= 8 {
            "single-class genus and maximal among integral lattices for n <= 8".into()
        } else {
            "cubic lattice; genus flags left unset beyond dimension 8".into()
        },
    };
    validate(
        &entry,
        &Validation {
            expected_det: BigRational::one(),
            even: false,
            minimum: None,
        },
    )?;
    Ok(entry)
}

fn a2_entry() -> Result<CatalogEntry> {
    let gram = QMat::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
    let lattice = GramLattice::with_name("A2", gram)?.with_meta(LatticeMeta {
        unigeneric: true,
        maximality: Some(2),
    });
    let entry = CatalogEntry {
        name: "A2".into(),
        lattice,
        generator: None,
        ambient_gram: None,
        provenance: "hexagonal root lattice: single-class genus, maximal even".into(),
    };
    validate(
        &entry,
        &Validation {
            expected_det: rat(3),
            even: true,
            minimum: Some((rat(2), Some(3))),
        },
    )?;
    Ok(entry)
}

fn a4_entry() -> Result<CatalogEntry> {
    // Basis e_i - e_{i+1} inside the sum-zero hyperplane of Z^5.
    let mut rows = Vec::new();
    for i in 0..4 {
        let mut row = vec![0i64; 5];
        row[i] = 1;
        row[i + 1] = -1;
        rows.push(row);
    }
    let generator = ZMat::from_rows(&rows).to_rational();
    let gram = generator.mul(&generator.transpose());
    let lattice = GramLattice::with_name("A4", gram)?.with_meta(LatticeMeta {
        unigeneric: true,
        maximality: Some(2),
    });
    let entry = CatalogEntry {
        name: "A4".into(),
        lattice,
        generator: Some(generator),
        ambient_gram: None,
        provenance: "root lattice of the 5-cycle: single-class genus, maximal even".into(),
    };
    validate(
        &entry,
        &Validation {
            expected_det: rat(5),
            even: true,
            minimum: Some((rat(2), Some(10))),
        },
    )?;
    Ok(entry)
}

fn d_generator(n: usize) -> ZMat {
    // e_1 + e_2 followed by e_i - e_{i+1}.
    let mut rows = Vec::new();
    let mut first = vec![0i64; n];
    first[0] = 1;
    first[1] = 1;
    rows.push(first);
    for i in 0..n - 1 {
        let mut row = vec![0i64; n];
        row[i] = 1;
        row[i + 1] = -1;
        rows.push(row);
    }
    ZMat::from_rows(&rows)
}

fn d_entry(m: usize) -> Result<CatalogEntry> {
    let n = 4 * m;
    let generator = d_generator(n).to_rational();
    let gram = generator.mul(&generator.transpose());
    let name = format!("D{n}");
    let meta = if n == 4 {
        LatticeMeta {
            unigeneric: true,
            maximality: Some(2),
        }
    } else {
        LatticeMeta::default()
    };
    let lattice = GramLattice::with_name(name.clone(), gram)?.with_meta(meta);
    let entry = CatalogEntry {
        name,
        lattice,
        generator: Some(generator),
        ambient_gram: None,
        provenance: if n == 4 {
            "checkerboard lattice: single-class genus, maximal even".into()
        } else {
            "checkerboard lattice; genus flags left unset beyond dimension 4".into()
        },
    };
    validate(
        &entry,
        &Validation {
            expected_det: rat(4),
            even: true,
            minimum: Some((rat(2), Some((n * (n - 1)) as usize))),
        },
    )?;
    Ok(entry)
}

fn d_plus_entry(m: usize, name: &str) -> Result<CatalogEntry> {
    let n = 4 * m;
    // The glue vector (1/2, ..., 1/2) together with e_1 + e_2 and the
    // chain e_i - e_{i+1} for i < n - 1.
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    rows.push(vec![rat_frac(1, 2); n]);
    let mut pair = vec![BigRational::zero(); n];
    pair[0] = BigRational::one();
    pair[1] = BigRational::one();
    rows.push(pair);
    for i in 0..n - 2 {
        let mut row = vec![BigRational::zero(); n];
        row[i] = BigRational::one();
        row[i + 1] = -BigRational::one();
        rows.push(row);
    }
    let generator = QMat::from_rows(rows);
    let gram = generator.mul(&generator.transpose());
    let even = m % 2 == 0;
    let meta = if name == "E8" {
        LatticeMeta {
            unigeneric: true,
            maximality: Some(2),
        }
    } else {
        LatticeMeta::default()
    };
    let lattice = GramLattice::with_name(name, gram)?.with_meta(meta);
    let minimum = if even {
        // Even unimodular members have minimum 2 and root system D_n.
        if m == 2 {
            Some((rat(2), Some(120)))
        } else {
            Some((rat(2), Some((n * (n - 1)) as usize)))
        }
    } else if m == 1 {
        // D4+ is isometric to Z4.
        Some((rat(1), Some(4)))
    } else {
        Some((rat(2), Some((n * (n - 1)) as usize)))
    };
    let entry = CatalogEntry {
        name: name.into(),
        lattice,
        generator: Some(generator),
        ambient_gram: None,
        provenance: if name == "E8" {
            "even unimodular root lattice: single-class genus, maximal even".into()
        } else {
            "index-two extension of the checkerboard lattice; flags left unset".into()
        },
    };
    validate(
        &entry,
        &Validation {
            expected_det: BigRational::one(),
            even,
            minimum,
        },
    )?;
    Ok(entry)
}

fn e6_entry() -> Result<CatalogEntry> {
    // Complex coordinates (p, q) per pair meaning p + q*w; the lattice is
    // cut from the cube of the hexagonal ring by x1 = x2 = x3 (mod θ)
    // with θ = 1 + 2w of norm 3.  Generators: the diagonal vectors
    // (1,1,1) and (w,w,w) together with θ and θw in two of the three
    // coordinates.  θw = -2 - w.
    let rows: Vec<Vec<i64>> = vec![
        vec![1, 0, 1, 0, 1, 0],
        vec![0, 1, 0, 1, 0, 1],
        vec![1, 2, 0, 0, 0, 0],
        vec![-2, -1, 0, 0, 0, 0],
        vec![0, 0, 1, 2, 0, 0],
        vec![0, 0, -2, -1, 0, 0],
    ];
    let generator = ZMat::from_rows(&rows).to_rational();
    // Ambient pairing: (2/3) of the hexagonal form on each pair.
    let block = [
        [rat_frac(2, 3), rat_frac(-1, 3)],
        [rat_frac(-1, 3), rat_frac(2, 3)],
    ];
    let mut ambient = QMat::zero(6, 6);
    for b in 0..3 {
        for i in 0..2 {
            for j in 0..2 {
                ambient.set(2 * b + i, 2 * b + j, block[i][j].clone());
            }
        }
    }
    let gram = generator.mul(&ambient).mul(&generator.transpose());
    let lattice = GramLattice::with_name("E6", gram)?.with_meta(LatticeMeta {
        unigeneric: true,
        maximality: Some(2),
    });
    let entry = CatalogEntry {
        name: "E6".into(),
        lattice,
        generator: Some(generator),
        ambient_gram: Some(ambient),
        provenance: "exceptional root lattice: single-class genus, maximal even".into(),
    };
    validate(
        &entry,
        &Validation {
            expected_det: rat(3),
            even: true,
            minimum: Some((rat(2), Some(36))),
        },
    )?;
    Ok(entry)
}

/// Membership test for the Leech lattice in its integer array
/// coordinates (norm = sum of squares over 8): all coordinates share a
/// parity `m`, the cells congruent to `m + 2` modulo 4 form a Golay
/// word, and the coordinate sum is congruent to `4m` modulo 8.
pub fn leech_contains(coords: &[BigInt]) -> bool {
    if coords.len() != 24 {
        return false;
    }
    let four = BigInt::from(4);
    let eight = BigInt::from(8);
    let parity = coords[0].mod_floor(&BigInt::from(2));
    if coords
        .iter()
        .any(|c| c.mod_floor(&BigInt::from(2)) != parity)
    {
        return false;
    }
    let marker = (&parity + BigInt::from(2)).mod_floor(&four);
    let mut mask = 0u32;
    for (i, c) in coords.iter().enumerate() {
        if c.mod_floor(&four) == marker {
            mask |= 1 << i;
        }
    }
    if !is_golay_word(mask) {
        return false;
    }
    let sum: BigInt = coords.iter().sum();
    sum.mod_floor(&eight) == (parity * &four).mod_floor(&eight)
}

fn leech_generator() -> ZMat {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &word in golay_basis() {
        let row: Vec<i64> = (0..24).map(|b| 2 * i64::from(word >> b & 1)).collect();
        rows.push(row);
    }
    for j in 1..24 {
        let mut row = vec![0i64; 24];
        row[0] = 4;
        row[j] = 4;
        rows.push(row);
    }
    let mut odd = vec![1i64; 24];
    odd[0] = -3;
    rows.push(odd);
    ZMat::from_rows(&rows).row_hnf().nonzero_rows()
}

fn leech_entry() -> Result<CatalogEntry> {
    let basis = leech_generator();
    if basis.rows() != 24 {
        return Err(Error::CatalogInvalid(
            "Leech: generating set has deficient rank".into(),
        ));
    }
    let expected_volume = BigInt::from(8u64).pow(12);
    let volume = basis.det().abs();
    if volume != expected_volume {
        return Err(Error::CatalogInvalid(format!(
            "Leech: basis volume {volume} differs from 8^12"
        )));
    }
    for i in 0..24 {
        if !leech_contains(basis.row(i)) {
            return Err(Error::CatalogInvalid(format!(
                "Leech: basis row {i} fails the membership test"
            )));
        }
    }
    let generator = basis.to_rational();
    let ambient = QMat::identity(24).scale(&rat_frac(1, 8));
    let gram = generator.mul(&ambient).mul(&generator.transpose());
    let lattice = GramLattice::with_name("Leech", gram)?;
    let entry = CatalogEntry {
        name: "Leech".into(),
        lattice,
        generator: Some(generator),
        ambient_gram: Some(ambient),
        provenance: "even unimodular with minimum 4; genus flags not used here".into(),
    };
    // Even unimodular with no roots: determinant one, even, and an empty
    // norm-2 shell.  The full minimal shell is far too large to list, so
    // the minimum check stops at emptiness below 4.
    validate(
        &entry,
        &Validation {
            expected_det: BigRational::one(),
            even: true,
            minimum: None,
        },
    )?;
    let below = entry
        .lattice
        .short_vectors_with_budget(&rat(2), DEFAULT_ENUMERATION_BUDGET)?;
    if !below.is_empty() {
        return Err(Error::CatalogInvalid(
            "Leech: found a vector of norm at most 2".into(),
        ));
    }
    Ok(entry)
}

/// Extracts `BW16` or `K12` from the Leech lattice by intersecting with
/// its defining linear constraints and reducing to a basis.
pub fn extract_sublattice_basis(target: &str) -> Result<CatalogEntry> {
    let leech = catalog_lattice("Leech")?;
    let basis = leech
        .generator
        .as_ref()
        .and_then(|g| g.to_integer())
        .ok_or_else(|| Error::CatalogInvalid("Leech generator must be integral".into()))?;
    let (constraints, expected_det, expected_count): (Vec<Vec<i64>>, BigRational, usize) =
        match target {
            "BW16" => {
                // The last two array columns (coordinates 16..23) vanish.
                let mut rows = Vec::new();
                for coord in 16..24 {
                    let mut row = vec![0i64; 24];
                    row[coord] = 1;
                    rows.push(row);
                }
                (rows, rat(256), 2160)
            }
            "K12" => {
                // The three bottom rows of each array column agree.
                let mut rows = Vec::new();
                for col in 0..6 {
                    for r in 2..4 {
                        let mut row = vec![0i64; 24];
                        row[4 * col + 1] = 1;
                        row[4 * col + r] = -1;
                        rows.push(row);
                    }
                }
                (rows, rat(729), 378)
            }
            _ => return Err(Error::UnknownLattice(target.to_string())),
        };
    let constraint_mat = ZMat::from_rows(&constraints);
    // Rows y of the coefficient kernel give lattice vectors y·B with
    // B·Cᵀ-image zero, i.e. exactly the constrained sublattice.
    let image = basis.mul(&constraint_mat.transpose());
    let kernel = image.left_kernel();
    let sub_basis = kernel.mul(&basis);
    let expected_dim = 24 - constraints.len();
    if sub_basis.rows() != expected_dim {
        return Err(Error::CatalogInvalid(format!(
            "{target}: extraction produced rank {}, expected {expected_dim}",
            sub_basis.rows()
        )));
    }
    let generator = sub_basis.to_rational();
    let ambient = QMat::identity(24).scale(&rat_frac(1, 8));
    let gram = generator.mul(&ambient).mul(&generator.transpose());
    let lattice = GramLattice::with_name(target, gram)?;
    let entry = CatalogEntry {
        name: target.into(),
        lattice,
        generator: Some(generator),
        ambient_gram: Some(ambient),
        provenance: "extracted from the Leech lattice by exact kernel computation".into(),
    };
    validate(
        &entry,
        &Validation {
            expected_det,
            even: true,
            minimum: Some((rat(4), Some(expected_count))),
        },
    )?;
    Ok(entry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_loads_and_validates() {
        for name in catalog_names() {
            let entry = catalog_lattice(&name)
                .unwrap_or_else(|e| panic!("{name} failed to load: {e}"));
            assert_eq!(entry.name, name);
            assert_eq!(entry.lattice.name(), Some(name.as_str()));
        }
    }

    #[test]
    fn determinants_match_the_table() {
        let table = [
            ("Z4", 1i64),
            ("A2", 3),
            ("A4", 5),
            ("D4", 4),
            ("E6", 3),
            ("E8", 1),
            ("K12", 729),
            ("BW16", 256),
            ("Leech", 1),
        ];
        for (name, det) in table {
            let entry = catalog_lattice(name).unwrap();
            assert_eq!(entry.lattice.determinant(), rat(det), "{name}");
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        for name in ["Z0", "Z25", "D6", "D28", "Q7", "leech", ""] {
            assert!(matches!(
                catalog_lattice(name),
                Err(Error::UnknownLattice(_))
            ));
        }
    }

    #[test]
    fn flags_follow_the_catalog_policy() {
        for name in ["Z2", "Z8", "A2", "A4", "D4", "E6", "E8"] {
            let entry = catalog_lattice(name).unwrap();
            assert!(entry.lattice.meta().unigeneric, "{name}");
            assert!(entry.lattice.meta().maximality.is_some(), "{name}");
        }
        for name in ["Z9", "Z24", "D8", "D4+", "K12", "BW16", "Leech"] {
            let entry = catalog_lattice(name).unwrap();
            assert!(!entry.lattice.meta().unigeneric, "{name}");
            assert!(entry.lattice.meta().maximality.is_none(), "{name}");
        }
    }

    #[test]
    fn e8_and_d8_plus_share_a_gram_matrix() {
        let e8 = catalog_lattice("E8").unwrap();
        let d8p = catalog_lattice("D8+").unwrap();
        assert_eq!(e8.lattice.gram(), d8p.lattice.gram());
        assert!(!d8p.lattice.meta().unigeneric);
    }

    #[test]
    fn leech_membership_examples() {
        let coords = |v: Vec<i64>| -> Vec<BigInt> { v.into_iter().map(BigInt::from).collect() };
        let mut e0 = vec![0i64; 24];
        e0[0] = 1;
        assert!(!leech_contains(&coords(e0.clone())));
        let mut two_e0 = vec![0i64; 24];
        two_e0[0] = 2;
        assert!(!leech_contains(&coords(two_e0)));
        let mut four_e0 = vec![0i64; 24];
        four_e0[0] = 4;
        assert!(!leech_contains(&coords(four_e0)));
        let mut pair = vec![0i64; 24];
        pair[0] = 4;
        pair[5] = 4;
        assert!(leech_contains(&coords(pair)));
        let mut pair_mixed = vec![0i64; 24];
        pair_mixed[0] = 4;
        pair_mixed[5] = -4;
        assert!(leech_contains(&coords(pair_mixed)));
        let mut odd = vec![1i64; 24];
        odd[0] = -3;
        assert!(leech_contains(&coords(odd.clone())));
        assert!(!leech_contains(&coords(vec![1i64; 24])));
        assert!(!leech_contains(&coords(vec![0i64; 23])));
        assert!(leech_contains(&coords(vec![0i64; 24])));
        // Twice a Golay octad, entries 0/2.
        let octad = crate::golay::golay_code()
            .iter()
            .copied()
            .find(|w| w.count_ones() == 8)
            .unwrap();
        let octad_coords: Vec<BigInt> = (0..24)
            .map(|b| BigInt::from(2 * i64::from(octad >> b & 1)))
            .collect();
        assert!(leech_contains(&octad_coords));
    }

    #[test]
    fn leech_norms_are_even_and_start_at_four() {
        let entry = catalog_lattice("Leech").unwrap();
        let gram = entry.lattice.gram();
        for i in 0..24 {
            assert!(gram.at(i, i).to_integer().is_even());
        }
        // Validation already proved no norms at or below 2; the basis
        // rows themselves exhibit norm 4 vectors.
        let has_norm_4 = (0..24).any(|i| *gram.at(i, i) == rat(4));
        assert!(has_norm_4);
    }

    #[test]
    fn bw16_occupies_the_first_four_columns() {
        let entry = catalog_lattice("BW16").unwrap();
        let gen = entry.generator.as_ref().unwrap();
        for i in 0..gen.rows() {
            for coord in 16..24 {
                assert!(gen.at(i, coord).is_zero());
            }
        }
        assert_eq!(entry.lattice.dim(), 16);
    }

    #[test]
    fn k12_rows_repeat_below_the_top() {
        let entry = catalog_lattice("K12").unwrap();
        let gen = entry.generator.as_ref().unwrap();
        for i in 0..gen.rows() {
            for col in 0..6 {
                assert_eq!(gen.at(i, 4 * col + 1), gen.at(i, 4 * col + 2));
                assert_eq!(gen.at(i, 4 * col + 1), gen.at(i, 4 * col + 3));
            }
        }
        assert_eq!(entry.lattice.dim(), 12);
    }

    #[test]
    fn extracted_vectors_live_in_leech() {
        for name in ["K12", "BW16"] {
            let entry = catalog_lattice(name).unwrap();
            let gen = entry.generator.as_ref().unwrap().to_integer().unwrap();
            for i in 0..gen.rows() {
                assert!(leech_contains(gen.row(i)), "{name} row {i}");
            }
        }
    }

    #[test]
    fn d_plus_parity_follows_m() {
        // Odd m gives an odd lattice (the glue vector has odd norm).
        let d12p = catalog_lattice("D12+").unwrap();
        let gram = d12p.lattice.gram();
        assert!((0..12).any(|i| gram.at(i, i).to_integer().is_odd()));
        let d16p = catalog_lattice("D16+").unwrap();
        let gram = d16p.lattice.gram();
        assert!((0..16).all(|i| gram.at(i, i).to_integer().is_even()));
    }
}
