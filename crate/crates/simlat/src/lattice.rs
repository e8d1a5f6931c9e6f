//! Lattices presented by exact rational Gram matrices.
//!
//! A lattice here is a free `Z`-module with a chosen basis whose pairwise
//! inner products are recorded in a symmetric positive definite matrix of
//! rationals.  Everything downstream works in these basis coordinates:
//! vectors are integer coordinate tuples, sublattices are integer matrices
//! whose columns span them, and a similarity of norm `c` is an integer
//! matrix `B` with `Bᵀ A B = c A` exactly.
//!
//! The module provides inner products, determinants, a canonical integral
//! rescaling, short-vector enumeration (exact Fincke–Pohst with an explicit
//! node budget), coset representatives of a sublattice, similarity
//! verification, and a plain-text file format for Gram matrices.  All
//! arithmetic is exact; enumeration never trusts a rounded value without an
//! exact re-check.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::{lll_gram, QMat, ZMat};

/// Default node budget for short-vector enumeration.
///
/// Each candidate coordinate examined during enumeration counts as one node.
/// Exhausting the budget raises [`Error::BudgetExceeded`] so that "gave up"
/// is never reported as "none exist".
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Structural flags a catalog entry may carry.
///
/// These record facts about the isometry class that are not computed here
/// but are consumed by the sufficiency side of the existence criterion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeMeta {
    /// True when every lattice in the genus is isometric to this one.
    pub unigeneric: bool,
    /// `Some(r)` when the lattice is maximal among lattices in its rational
    /// quadratic space whose norms all lie in `rZ`.  For example `r = 1`
    /// means no proper overlattice is integral, and `r = 2` means no proper
    /// overlattice is even.
    pub maximality: Option<u32>,
}

/// A lattice given by an exact Gram matrix.
///
/// Construction validates that the matrix is square, symmetric, and
/// positive definite; indefinite input is rejected outright.  Values are
/// immutable after construction and cheap to clone and share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    name: Option<String>,
    gram: QMat,
    meta: LatticeMeta,
}

/// A lattice element as integer coordinates in the lattice basis.
///
/// The derived ordering is lexicographic with numeric comparison per
/// coordinate, which is the tie-break used by every sorted vector list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    /// Builds a vector from machine-integer coordinates.
    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Builds a vector from big-integer coordinates.
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    /// The zero vector of the given dimension.
    pub fn zeros(n: usize) -> Self {
        LatticeVector {
            coords: vec![BigInt::zero(); n],
        }
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The coordinates as a slice.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// True when every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Coordinate-wise negation.
    pub fn neg(&self) -> Self {
        LatticeVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Flips the sign so the first nonzero coordinate is positive.
    ///
    /// This is the canonical representative of the pair `{v, -v}` used by
    /// all enumeration output.
    pub fn sign_canonical(&self) -> Self {
        for c in &self.coords {
            if c.is_positive() {
                return self.clone();
            }
            if c.is_negative() {
                return self.neg();
            }
        }
        self.clone()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl GramLattice {
    /// Builds a lattice from a Gram matrix, validating shape, symmetry, and
    /// positive definiteness.
    pub fn new(gram: QMat) -> Result<Self> {
        if gram.rows() == 0 || gram.rows() != gram.cols() {
            return Err(Error::InvalidInput(format!(
                "Gram matrix must be square and nonempty, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !gram.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(GramLattice {
            name: None,
            gram,
            meta: LatticeMeta::default(),
        })
    }

    /// Like [`GramLattice::new`] with a catalog name attached.
    pub fn with_name(name: impl Into<String>, gram: QMat) -> Result<Self> {
        let mut lat = GramLattice::new(gram)?;
        lat.name = Some(name.into());
        Ok(lat)
    }

    /// Returns the same lattice with the given structural flags.
    pub fn with_meta(mut self, meta: LatticeMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Dimension (rank) of the lattice.
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// The Gram matrix.
    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    /// Catalog name, if any.
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Structural flags.
    pub fn meta(&self) -> &LatticeMeta {
        &self.meta
    }

    /// Exact inner product `uᵀ A v` of two coordinate vectors.
    pub fn inner_product(&self, u: &LatticeVector, v: &LatticeVector) -> Result<BigRational> {
        let n = self.dim();
        if u.dim() != n || v.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "lattice has dimension {} but vectors have {} and {}",
                n,
                u.dim(),
                v.dim()
            )));
        }
        let mut total = BigRational::zero();
        for i in 0..n {
            if u.coords[i].is_zero() {
                continue;
            }
            let mut row_sum = BigRational::zero();
            for j in 0..n {
                if v.coords[j].is_zero() {
                    continue;
                }
                row_sum += self.gram.at(i, j) * BigRational::from(v.coords[j].clone());
            }
            total += BigRational::from(u.coords[i].clone()) * row_sum;
        }
        Ok(total)
    }

    /// Exact norm `vᵀ A v`.
    pub fn norm(&self, v: &LatticeVector) -> Result<BigRational> {
        self.inner_product(v, v)
    }

    /// Exact determinant of the Gram matrix.
    pub fn determinant(&self) -> BigRational {
        self.gram.det()
    }

    /// Rescales to the unique primitive integral Gram matrix.
    ///
    /// Returns `(L', t)` where `L'` has Gram matrix `t·A`, `t` is a positive
    /// rational, the entries of `t·A` are integers with gcd 1, and existence
    /// of similarities of a given norm is unchanged by the rescale.  Name
    /// and flags carry over.
    pub fn integralize(&self) -> (GramLattice, BigRational) {
        let n = self.dim();
        let mut lcm_den = BigInt::one();
        for i in 0..n {
            for j in 0..n {
                lcm_den = lcm_den.lcm(self.gram.at(i, j).denom());
            }
        }
        let mut gcd_num = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                let scaled = self.gram.at(i, j) * BigRational::from(lcm_den.clone());
                debug_assert!(scaled.is_integer());
                gcd_num = gcd_num.gcd(scaled.numer());
            }
        }
        // gcd_num > 0 because a positive definite matrix has a nonzero entry.
        let scale = BigRational::new(lcm_den, gcd_num);
        let gram = self.gram.scale(&scale);
        let lat = GramLattice {
            name: self.name.clone(),
            gram,
            meta: self.meta.clone(),
        };
        (lat, scale)
    }

    /// Checks exactly whether `Bᵀ A B = c A`.
    pub fn verify_similarity(&self, b: &ZMat, c: &BigRational) -> Result<bool> {
        let n = self.dim();
        if b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "lattice has dimension {} but matrix is {}x{}",
                n,
                b.rows(),
                b.cols()
            )));
        }
        let bq = b.to_rational();
        let lhs = bq.transpose().mul(&self.gram).mul(&bq);
        let rhs = self.gram.scale(c);
        Ok(lhs == rhs)
    }

    /// All nonzero vectors of norm at most `bound`, one per `±` pair,
    /// using the default enumeration budget.
    ///
    /// Output is sorted by norm, then lexicographically by coordinates, and
    /// each vector has its first nonzero coordinate positive.
    pub fn short_vectors(&self, bound: &BigRational) -> Result<Vec<(LatticeVector, BigRational)>> {
        self.short_vectors_with_budget(bound, DEFAULT_ENUMERATION_BUDGET)
    }

    /// [`GramLattice::short_vectors`] with an explicit node budget.
    pub fn short_vectors_with_budget(
        &self,
        bound: &BigRational,
        node_budget: u64,
    ) -> Result<Vec<(LatticeVector, BigRational)>> {
        if bound.is_negative() {
            return Err(Error::InvalidInput(format!(
                "short-vector bound must be nonnegative, got {}",
                bound
            )));
        }
        let n = self.dim();
        // Basis reduction keeps the enumeration tree small; vectors found in
        // the reduced basis are mapped back through the recorded transform.
        let (reduced, u) = lll_gram(&self.gram);
        let q = fp_decompose(&reduced)?;
        let mut enumerator = Enumerator {
            q: &q,
            bound: bound.clone(),
            node_budget,
            nodes: 0,
            coords: vec![BigInt::zero(); n],
            found: Vec::new(),
        };
        enumerator.descend(n, bound.clone())?;
        let ut = u.transpose();
        let mut out: Vec<(LatticeVector, BigRational)> = Vec::new();
        for (y, norm) in enumerator.found {
            // Map reduced-basis coordinates y back to original coordinates.
            let mut x = vec![BigInt::zero(); n];
            for (i, xi) in x.iter_mut().enumerate() {
                for (j, yj) in y.iter().enumerate() {
                    if !yj.is_zero() {
                        *xi += ut.at(i, j) * yj;
                    }
                }
            }
            out.push((LatticeVector::new(x).sign_canonical(), norm));
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        out.dedup_by(|a, b| a.0 == b.0);
        Ok(out)
    }

    /// The minimal nonzero norm, found by growing the enumeration bound.
    ///
    /// `start` seeds the search; the bound doubles until a vector appears.
    pub fn minimum(&self, start: &BigRational, node_budget: u64) -> Result<BigRational> {
        let mut bound = start.clone();
        if !bound.is_positive() {
            bound = BigRational::one();
        }
        loop {
            let found = self.short_vectors_with_budget(&bound, node_budget)?;
            if let Some((_, norm)) = found.first() {
                return Ok(norm.clone());
            }
            bound *= BigRational::from(BigInt::from(2));
        }
    }

    /// Coset representatives of the sublattice spanned by the columns of
    /// `B`, one vector per coset, in lexicographic order.
    ///
    /// The columns of the column-style Hermite normal form `H` of `B` span
    /// the same sublattice, and since `H` is lower triangular with positive
    /// diagonal `h_1, …, h_n`, the box `{x : 0 ≤ x_i < h_i}` contains
    /// exactly one representative of each coset; there are `|det B|` of
    /// them.
    pub fn coset_representatives(&self, b: &ZMat) -> Result<Vec<LatticeVector>> {
        let n = self.dim();
        if b.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "lattice has dimension {} but matrix is {}x{}",
                n,
                b.rows(),
                b.cols()
            )));
        }
        if b.det().is_zero() {
            return Err(Error::InvalidInput(
                "coset enumeration requires a nonsingular matrix".into(),
            ));
        }
        let h = b.col_hnf();
        let diag: Vec<BigInt> = (0..n).map(|i| h.at(i, i).clone()).collect();
        let mut count = BigInt::one();
        for d in &diag {
            count *= d;
        }
        let mut reps = Vec::new();
        let mut current = vec![BigInt::zero(); n];
        loop {
            reps.push(LatticeVector::new(current.clone()));
            // Odometer increment in lexicographic order, last coordinate
            // fastest would be reverse-lex; advance from the end for plain
            // lexicographic output of the full list.
            let mut i = n;
            loop {
                if i == 0 {
                    return finish_cosets(reps, count);
                }
                i -= 1;
                current[i] += 1;
                if current[i] < diag[i] {
                    break;
                }
                current[i] = BigInt::zero();
            }
        }
    }

    /// Writes the Gram matrix in the plain-text exchange format.
    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("{}\n", n);
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let e = self.gram.at(i, j);
                    if e.is_integer() {
                        e.numer().to_string()
                    } else {
                        format!("{}/{}", e.numer(), e.denom())
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the plain-text exchange format: line 1 holds the dimension
    /// `n`, then `n` lines each hold `n` whitespace-separated rationals
    /// written as `p` or `p/q`.  Symmetry and positive definiteness are
    /// validated.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Gram matrix file".into()))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("expected a dimension on line 1, got {:?}", first)))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| {
                Error::Parse(format!("expected {} matrix rows, found {}", n, i))
            })?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    entries.len(),
                    n
                )));
            }
            let mut row = Vec::with_capacity(n);
            for e in entries {
                let value = BigRational::from_str(e)
                    .map_err(|_| Error::Parse(format!("invalid rational {:?}", e)))?;
                row.push(value);
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after matrix rows".into()));
        }
        GramLattice::new(QMat::from_rows(rows))
    }

    /// Loads a Gram matrix file from disk; see [`GramLattice::from_text`].
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut lat = GramLattice::from_text(&text)?;
        if let Some(stem) = path.as_ref().file_stem().and_then(|s| s.to_str()) {
            lat.name = Some(stem.to_string());
        }
        Ok(lat)
    }

    /// Saves the Gram matrix in the plain-text exchange format.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn finish_cosets(reps: Vec<LatticeVector>, count: BigInt) -> Result<Vec<LatticeVector>> {
    debug_assert_eq!(BigInt::from(reps.len()), count);
    Ok(reps)
}

/// A lattice similarity: an integer matrix `B` with `Bᵀ A B = c A`.
///
/// Column `j` of `B` holds the image of the `j`-th basis vector in lattice
/// coordinates.  Construction verifies the defining identity exactly, so a
/// value of this type is always a genuine similarity; the image sublattice
/// has index `|det B| = c^{n/2}`.
#[derive(Clone, Debug)]
pub struct SimilarityMap {
    lattice: GramLattice,
    matrix: ZMat,
    norm: BigRational,
}

impl SimilarityMap {
    /// Verifies `Bᵀ A B = c A` and wraps the result.
    pub fn new(lattice: GramLattice, matrix: ZMat, norm: BigRational) -> Result<Self> {
        if !norm.is_positive() {
            return Err(Error::InvalidInput(format!(
                "similarity norm must be positive, got {}",
                norm
            )));
        }
        if !lattice.verify_similarity(&matrix, &norm)? {
            return Err(Error::InvalidInput(
                "matrix does not scale the Gram matrix by the claimed norm".into(),
            ));
        }
        Ok(SimilarityMap {
            lattice,
            matrix,
            norm,
        })
    }

    /// The underlying lattice.
    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    /// The matrix of the map, columns holding basis-vector images.
    pub fn matrix(&self) -> &ZMat {
        &self.matrix
    }

    /// The similarity norm `c`.
    pub fn norm(&self) -> &BigRational {
        &self.norm
    }

    /// Index of the image sublattice: `|det B|`, which equals `c^{n/2}`.
    pub fn index(&self) -> BigInt {
        self.matrix.det().abs()
    }
}

/// Decomposes a positive definite Gram matrix into the layered form
/// `Q(x) = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²` used by the enumerator.
fn fp_decompose(gram: &QMat) -> Result<Vec<Vec<BigRational>>> {
    let n = gram.rows();
    let mut q: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| gram.at(i, j).clone()).collect())
        .collect();
    for i in 0..n {
        if !q[i][i].is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in (i + 1)..n {
            let saved = q[i][j].clone();
            q[i][j] = &saved / &q[i][i];
            q[j][i] = saved;
        }
        for k in (i + 1)..n {
            for l in k..n {
                let correction = &q[k][i] * &q[i][l];
                q[k][l] -= correction;
            }
        }
    }
    Ok(q)
}

struct Enumerator<'a> {
    q: &'a [Vec<BigRational>],
    bound: BigRational,
    node_budget: u64,
    nodes: u64,
    coords: Vec<BigInt>,
    found: Vec<(Vec<BigInt>, BigRational)>,
}

impl Enumerator<'_> {
    /// Explores level `i - 1` given `remaining`, the bound minus the layer
    /// contributions of all deeper levels.  Entered with `i = n`.
    fn descend(&mut self, i: usize, remaining: BigRational) -> Result<()> {
        if i == 0 {
            if self.coords.iter().any(|c| !c.is_zero()) {
                let norm = &self.bound - &remaining;
                self.found.push((self.coords.clone(), norm));
            }
            return Ok(());
        }
        let level = i - 1;
        if remaining.is_negative() {
            return Ok(());
        }
        // Offset contributed by the already-fixed deeper coordinates.
        let mut offset = BigRational::zero();
        for (j, c) in self.coords.iter().enumerate().skip(level + 1) {
            if !c.is_zero() {
                offset += &self.q[level][j] * BigRational::from(c.clone());
            }
        }
        let weight = &self.q[level][level];
        // Admissible x satisfy weight·(x + offset)² ≤ remaining.  With
        // offset = p/q this reads (x·q + p)² ≤ (remaining/weight)·q², so
        // the exact integer interval for x comes from one integer square
        // root instead of a rational comparison per candidate.
        let ratio = &remaining / weight;
        let p = offset.numer().clone();
        let q = offset.denom().clone();
        let scaled = ratio * BigRational::from(&q * &q);
        let t = floor_sqrt_rational(&scaled);
        let lo = div_ceil(&(-&t - &p), &q);
        let hi = (&t - &p).div_floor(&q);
        let mut x = lo;
        while x <= hi {
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::BudgetExceeded {
                    nodes: self.nodes,
                    context: "short-vector enumeration".into(),
                });
            }
            let shifted = BigRational::from(x.clone()) + &offset;
            let term = weight * &shifted * &shifted;
            debug_assert!(term <= remaining);
            self.coords[level] = x.clone();
            self.descend(level, &remaining - &term)?;
            x += 1;
        }
        self.coords[level] = BigInt::zero();
        Ok(())
    }
}

/// Largest nonnegative integer `t` with `t² ≤ x`; zero when `x < 0`.
fn floor_sqrt_rational(x: &BigRational) -> BigInt {
    if x.is_negative() {
        return BigInt::from(-1);
    }
    let a = x.numer();
    let b = x.denom();
    let mut t = a.div_floor(b).sqrt();
    while (&t + 1) * (&t + 1) * b <= *a {
        t += 1;
    }
    while &t * &t * b > *a {
        t -= 1;
    }
    t
}

/// Ceiling division for a positive divisor.
fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}
