//! Clean sublattices of two-dimensional lattices.
//!
//! A sublattice `L' ⊆ L` is clean when the boundaries of the Voronoi
//! cells of `L'` contain no point of `L`: every lattice point then has a
//! unique nearest `L'`-point.  This module treats lattices generated by
//! `1` and an imaginary quadratic integer, where every similarity is
//! multiplication by a ring element `α` and clean-ness has an exact
//! arithmetic characterization:
//!
//! * hexagonal cells, basis `(1, ω)` with `ω = (−1 + √−N)/2` and
//!   `N ≡ 3 (mod 4)`: for `N = 3` the sublattice `αΛ` is clean exactly
//!   when `αθ` is primitive (`θ = √−N`); for general `N` two further
//!   conditions ask for an odd divisor `k` of `N + 1` making
//!   `α(N − θ)/(2k)` respectively `α(N + θ)/(2k)` integral and
//!   primitive;
//! * rectangular cells, basis `(1, θ)` with `θ = √−N`: `αΛ` is clean
//!   exactly when the norm `a² + Nb²` is odd.
//!
//! The general hexagonal criterion is stated in the literature without
//! proof, so everything here is ground-truthed by [`clean_oracle`]: an
//! exact geometric check that walks the `|α|²` cosets of `αΛ` in `Λ`
//! and decides by closest-vector computation whether any coset
//! representative is equidistant from two nearest sublattice points.
//! All comparisons are between integers, so ties are decided exactly.
//!
//! Coefficient conventions: elements are written `a + bω` on the fixed
//! basis above.  Some sources write hexagonal-type elements on
//! `ω' = (1 + √−N)/2` instead; since `ω' = ω + 1`, the two coordinate
//! systems differ by a unimodular change of basis, which changes
//! neither primitivity (coordinate gcds agree) nor any of the
//! conditions, so no translation layer is needed.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::{rat, rat_frac};

/// Shape of the Voronoi cell, which is determined by the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellFamily {
    /// Basis `(1, ω)`, `ω = (−1 + √−N)/2`, `N ≡ 3 (mod 4)`.
    Hexagonal,
    /// Basis `(1, θ)`, `θ = √−N`, `N ≥ 1`.
    Rectangular,
}

/// A two-dimensional lattice generated by `1` and an imaginary
/// quadratic integer, identified by its cell family and radicand `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadLattice {
    family: CellFamily,
    n: i64,
}

impl QuadLattice {
    /// The hexagonal-cell lattice with `ω = (−1 + √−N)/2`; requires
    /// `N ≡ 3 (mod 4)` so that `ω` is an algebraic integer.
    pub fn hexagonal(n: i64) -> Result<Self> {
        if n <= 0 || n % 4 != 3 {
            return Err(Error::InvalidInput(format!(
                "hexagonal-type lattices need N ≡ 3 (mod 4) and N > 0, got {n}"
            )));
        }
        Ok(Self {
            family: CellFamily::Hexagonal,
            n,
        })
    }

    /// The rectangular-cell lattice with `θ = √−N`; requires `N ≥ 1`.
    pub fn rectangular(n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidInput(format!(
                "rectangular-type lattices need N ≥ 1, got {n}"
            )));
        }
        Ok(Self {
            family: CellFamily::Rectangular,
            n,
        })
    }

    pub fn family(&self) -> CellFamily {
        self.family
    }

    /// The radicand `N` of the generator.
    pub fn radicand(&self) -> i64 {
        self.n
    }

    /// `(N + 1)/4`, the norm of `ω`; hexagonal families only.
    fn omega_norm(&self) -> i64 {
        debug_assert_eq!(self.family, CellFamily::Hexagonal);
        (self.n + 1) / 4
    }

    /// The integer quadratic form `|x + y·gen|²` on coordinates.
    fn form(&self, x: &BigInt, y: &BigInt) -> BigInt {
        match self.family {
            CellFamily::Hexagonal => x * x - x * y + y * y * BigInt::from(self.omega_norm()),
            CellFamily::Rectangular => x * x + y * y * BigInt::from(self.n),
        }
    }

    fn form_i128(&self, x: i128, y: i128) -> i128 {
        match self.family {
            CellFamily::Hexagonal => x * x - x * y + y * y * i128::from(self.omega_norm()),
            CellFamily::Rectangular => x * x + y * y * i128::from(self.n),
        }
    }

    /// The Gram matrix of the basis `(1, gen)` as exact rationals.
    pub fn gram_entries(&self) -> [[BigRational; 2]; 2] {
        match self.family {
            CellFamily::Hexagonal => [
                [rat(1), rat_frac(-1, 2)],
                [rat_frac(-1, 2), rat(self.omega_norm())],
            ],
            CellFamily::Rectangular => [[rat(1), rat(0)], [rat(0), rat(self.n)]],
        }
    }

    /// Real-plane embedding of coordinates `(x, y)` as `(u, v)` with the
    /// point `u + v·√N·i`; both components are rational.
    fn embed(&self, x: &BigRational, y: &BigRational) -> (BigRational, BigRational) {
        match self.family {
            CellFamily::Hexagonal => (x - y / rat(2), y / rat(2)),
            CellFamily::Rectangular => (x.clone(), y.clone()),
        }
    }

    /// The element `θ = √−N` of this ring: `1 + 2ω` for hexagonal
    /// families and the generator itself for rectangular ones.
    pub fn theta(&self) -> QuadInt {
        match self.family {
            CellFamily::Hexagonal => QuadInt::new(*self, 1, 2),
            CellFamily::Rectangular => QuadInt::new(*self, 0, 1),
        }
    }

    /// All units of the ring (norm-one elements): six for the `N = 3`
    /// hexagonal ring, four for the `N = 1` rectangular ring, and `±1`
    /// otherwise.
    pub fn units(&self) -> Vec<QuadInt> {
        norm_shell(self, 1)
    }
}

impl fmt::Display for QuadLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            CellFamily::Hexagonal => write!(f, "hexagonal-type N={}", self.n),
            CellFamily::Rectangular => write!(f, "rectangular-type N={}", self.n),
        }
    }
}

/// An element `x + y·gen` of a [`QuadLattice`] ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt {
    ring: QuadLattice,
    x: BigInt,
    y: BigInt,
}

impl QuadInt {
    pub fn new(ring: QuadLattice, x: i64, y: i64) -> Self {
        Self {
            ring,
            x: BigInt::from(x),
            y: BigInt::from(y),
        }
    }

    pub fn from_big(ring: QuadLattice, x: BigInt, y: BigInt) -> Self {
        Self { ring, x, y }
    }

    pub fn ring(&self) -> &QuadLattice {
        &self.ring
    }

    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Exact ring product; the rings must match.
    pub fn mul(&self, other: &QuadInt) -> Result<QuadInt> {
        if self.ring != other.ring {
            return Err(Error::InvalidInput(format!(
                "ring mismatch: {} versus {}",
                self.ring, other.ring
            )));
        }
        let (x1, y1, x2, y2) = (&self.x, &self.y, &other.x, &other.y);
        let (x, y) = match self.ring.family {
            // ω² = −(N+1)/4 − ω
            CellFamily::Hexagonal => {
                let m = BigInt::from(self.ring.omega_norm());
                (
                    x1 * x2 - &m * y1 * y2,
                    x1 * y2 + x2 * y1 - y1 * y2,
                )
            }
            // θ² = −N
            CellFamily::Rectangular => {
                let n = BigInt::from(self.ring.n);
                (x1 * x2 - &n * y1 * y2, x1 * y2 + x2 * y1)
            }
        };
        Ok(QuadInt {
            ring: self.ring,
            x,
            y,
        })
    }

    /// Complex conjugate, expressed on the same basis.
    pub fn conj(&self) -> QuadInt {
        match self.ring.family {
            // conj(ω) = −1 − ω
            CellFamily::Hexagonal => QuadInt {
                ring: self.ring,
                x: &self.x - &self.y,
                y: -&self.y,
            },
            CellFamily::Rectangular => QuadInt {
                ring: self.ring,
                x: self.x.clone(),
                y: -&self.y,
            },
        }
    }

    /// The norm `z · conj(z)`, always a rational integer.
    pub fn norm(&self) -> BigInt {
        let value = self.ring.form(&self.x, &self.y);
        debug_assert_eq!(
            {
                let product = self.mul(&self.conj()).expect("same ring");
                assert!(product.y.is_zero(), "norm must be rational");
                product.x
            },
            value
        );
        value
    }

    /// Exact division of both coordinates by a positive integer, if the
    /// quotient stays in the ring.
    pub fn divided_exactly(&self, d: i64) -> Option<QuadInt> {
        let d = BigInt::from(d);
        let (qx, rx) = self.x.div_rem(&d);
        let (qy, ry) = self.y.div_rem(&d);
        if rx.is_zero() && ry.is_zero() {
            Some(QuadInt {
                ring: self.ring,
                x: qx,
                y: qy,
            })
        } else {
            None
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gen = match self.ring.family {
            CellFamily::Hexagonal => "w",
            CellFamily::Rectangular => "t",
        };
        if self.y.is_negative() {
            write!(f, "{} - {}{}", self.x, self.y.magnitude(), gen)
        } else {
            write!(f, "{} + {}{}", self.x, self.y, gen)
        }
    }
}

/// Whether the coordinates of `z` are coprime.  Errors on zero input,
/// where primitivity is not defined.
pub fn is_primitive(z: &QuadInt) -> Result<bool> {
    if z.is_zero() {
        return Err(Error::InvalidInput(
            "primitivity of the zero element is not defined".into(),
        ));
    }
    Ok(z.x.gcd(&z.y) == BigInt::from(1))
}

/// Clean-ness for the `N = 3` hexagonal ring: `αΛ` is clean exactly
/// when `αθ` is primitive.
pub fn clean_hex_a2(alpha: &QuadInt) -> Result<bool> {
    let expected = QuadLattice::hexagonal(3)?;
    if *alpha.ring() != expected {
        return Err(Error::InvalidInput(format!(
            "this criterion is specific to the hexagonal-type N=3 ring, got {}",
            alpha.ring()
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidInput(
            "the zero multiplier has no sublattice".into(),
        ));
    }
    is_primitive(&alpha.mul(&expected.theta())?)
}

fn odd_divisors(n: i64) -> Vec<i64> {
    (1..=n).step_by(2).filter(|k| n % k == 0).collect()
}

/// Clean-ness for a general hexagonal-type ring, `N ≡ 3 (mod 4)`:
/// requires `αθ` primitive, and for each sign an odd divisor `k` of
/// `N + 1` making `α(N ∓ θ)/(2k)` integral and primitive.  The two
/// divisors are chosen independently.
pub fn clean_hex_general(n: i64, alpha: &QuadInt) -> Result<bool> {
    if n <= 0 || n % 4 != 3 {
        return Err(Error::InvalidInput(format!(
            "the hexagonal clean criterion needs N ≡ 3 (mod 4), got {n}"
        )));
    }
    let ring = QuadLattice::hexagonal(n)?;
    if *alpha.ring() != ring {
        return Err(Error::InvalidInput(format!(
            "ring mismatch: criterion for {ring}, element of {}",
            alpha.ring()
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidInput(
            "the zero multiplier has no sublattice".into(),
        ));
    }
    if !is_primitive(&alpha.mul(&ring.theta())?)? {
        return Ok(false);
    }
    let theta = ring.theta();
    // N − θ = (N − 1) − 2ω and N + θ = (N + 1) + 2ω.
    let n_elem = QuadInt::new(ring, n, 0);
    let minus = alpha.mul(&QuadInt::from_big(
        ring,
        &n_elem.x - &theta.x,
        -&theta.y,
    ))?;
    let plus = alpha.mul(&QuadInt::from_big(ring, &n_elem.x + &theta.x, theta.y.clone()))?;
    for candidate in [minus, plus] {
        let admissible = odd_divisors(n + 1).into_iter().any(|k| {
            candidate
                .divided_exactly(2 * k)
                .map(|q| is_primitive(&q).unwrap_or(false))
                .unwrap_or(false)
        });
        if !admissible {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Clean-ness for a rectangular-type ring: `αΛ` is clean exactly when
/// the norm `a² + Nb²` is odd.
pub fn clean_rect(n: i64, alpha: &QuadInt) -> Result<bool> {
    let ring = QuadLattice::rectangular(n)?;
    if *alpha.ring() != ring {
        return Err(Error::InvalidInput(format!(
            "ring mismatch: criterion for {ring}, element of {}",
            alpha.ring()
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidInput(
            "the zero multiplier has no sublattice".into(),
        ));
    }
    Ok(alpha.norm().is_odd())
}

/// The Voronoi cell of the origin, with exact vertices: each vertex
/// `(u, v)` denotes the plane point `(u, v·√N)`, both components
/// rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoronoiPolygon {
    vertices: Vec<(BigRational, BigRational)>,
    radicand: i64,
}

impl VoronoiPolygon {
    /// Vertices in counterclockwise order.
    pub fn vertices(&self) -> &[(BigRational, BigRational)] {
        &self.vertices
    }

    /// Number of edges (= number of vertices for a polygon).
    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    /// The `N` scaling the irrational component of the vertices.
    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    /// Whether `−v` is a vertex whenever `v` is.
    pub fn is_centrally_symmetric(&self) -> bool {
        self.vertices
            .iter()
            .all(|(u, v)| self.vertices.iter().any(|(a, b)| *a == -u && *b == -v))
    }

    /// Whether consecutive edge turns all share one orientation.
    pub fn is_convex(&self) -> bool {
        let k = self.vertices.len();
        let mut signs = Vec::new();
        for i in 0..k {
            let (ax, ay) = &self.vertices[i];
            let (bx, by) = &self.vertices[(i + 1) % k];
            let (cx, cy) = &self.vertices[(i + 2) % k];
            let cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx);
            signs.push(cross.is_positive());
            if cross.is_zero() {
                return false;
            }
        }
        signs.iter().all(|&s| s == signs[0])
    }
}

/// Center of the circle through the origin and two embedded points.
fn circumcenter(
    n: i64,
    p: &(BigRational, BigRational),
    q: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    // Unknown (u, v): 2(u·p_u + N v·p_v) = |p|², same for q, with
    // squared length u² + N v².
    let nr = rat(n);
    let a11 = rat(2) * &p.0;
    let a12 = rat(2) * &nr * &p.1;
    let a21 = rat(2) * &q.0;
    let a22 = rat(2) * &nr * &q.1;
    let b1 = &p.0 * &p.0 + &nr * &p.1 * &p.1;
    let b2 = &q.0 * &q.0 + &nr * &q.1 * &q.1;
    let det = &a11 * &a22 - &a12 * &a21;
    assert!(!det.is_zero(), "circumcenter of collinear points");
    let u = (&b1 * &a22 - &a12 * &b2) / &det;
    let v = (&a11 * &b2 - &b1 * &a21) / &det;
    (u, v)
}

/// The exact Voronoi cell of the origin: a rectangle for
/// rectangular-type lattices and a genuine hexagon for hexagonal-type
/// ones (the basis pairing `⟨1, ω⟩ = −1/2` never vanishes, so the
/// hexagon cannot degenerate).
pub fn voronoi_cell(lattice: &QuadLattice) -> VoronoiPolygon {
    match lattice.family {
        CellFamily::Rectangular => VoronoiPolygon {
            vertices: vec![
                (rat_frac(1, 2), rat_frac(1, 2)),
                (rat_frac(-1, 2), rat_frac(1, 2)),
                (rat_frac(-1, 2), rat_frac(-1, 2)),
                (rat_frac(1, 2), rat_frac(-1, 2)),
            ],
            radicand: lattice.n,
        },
        CellFamily::Hexagonal => {
            // The vectors 1, ω, and −1−ω have pairwise non-positive
            // inner products, so ±each of them are exactly the six
            // relevant vectors of the cell.
            let e1 = lattice.embed(&rat(1), &rat(0));
            let e2 = lattice.embed(&rat(-1), &rat(-1));
            let e3 = lattice.embed(&rat(0), &rat(1));
            let neg = |p: &(BigRational, BigRational)| (-&p.0, -&p.1);
            // Counterclockwise around the cell starting at 1.
            let ring_order = [
                e1.clone(),
                neg(&e2),
                e3.clone(),
                neg(&e1),
                e2.clone(),
                neg(&e3),
            ];
            let mut vertices = Vec::with_capacity(6);
            for i in 0..6 {
                let p = &ring_order[i];
                let q = &ring_order[(i + 1) % 6];
                vertices.push(circumcenter(lattice.n, p, q));
            }
            VoronoiPolygon {
                vertices,
                radicand: lattice.n,
            }
        }
    }
}

/// Upper-triangular coset shape `(h00, h11)` of `αΛ` inside `Λ`: the
/// representatives are `i + j·gen` with `0 ≤ i < h00`, `0 ≤ j < h11`,
/// and `h00 · h11 = |α|²`.
fn coset_shape(alpha: &QuadInt) -> Result<(i128, i128)> {
    let ring = alpha.ring;
    let to_i128 = |b: &BigInt| -> Result<i128> {
        i128::try_from(b).map_err(|_| {
            Error::InvalidInput("multiplier coordinates are too large for the oracle".into())
        })
    };
    let x = to_i128(&alpha.x)?;
    let y = to_i128(&alpha.y)?;
    let c = ring.form_i128(x, y);
    // Columns of multiplication by α on the basis (1, gen).
    let (g1, g2): ((i128, i128), (i128, i128)) = match ring.family {
        CellFamily::Hexagonal => {
            let m = i128::from(ring.omega_norm());
            ((x, y), (-m * y, x - y))
        }
        CellFamily::Rectangular => {
            let n = i128::from(ring.n);
            ((x, y), (-n * y, x))
        }
    };
    let h11 = g1.1.gcd(&g2.1);
    assert!(h11 > 0, "second coordinates cannot both vanish for α ≠ 0");
    assert_eq!(c % h11, 0);
    let h00 = c / h11;
    Ok((h00, h11))
}

/// The `|α|²` coset representatives of `αΛ` in `Λ`.
pub fn coset_representatives(lattice: &QuadLattice, alpha: &QuadInt) -> Result<Vec<QuadInt>> {
    check_oracle_input(lattice, alpha)?;
    let (h00, h11) = coset_shape(alpha)?;
    let mut reps = Vec::new();
    for i in 0..h00 {
        for j in 0..h11 {
            reps.push(QuadInt::from_big(
                *lattice,
                BigInt::from(i),
                BigInt::from(j),
            ));
        }
    }
    Ok(reps)
}

fn check_oracle_input(lattice: &QuadLattice, alpha: &QuadInt) -> Result<()> {
    if alpha.ring != *lattice {
        return Err(Error::InvalidInput(format!(
            "ring mismatch: lattice {lattice}, element of {}",
            alpha.ring
        )));
    }
    if alpha.is_zero() {
        return Err(Error::InvalidInput(
            "the zero multiplier has no sublattice".into(),
        ));
    }
    if lattice.n > 1_000_000 {
        return Err(Error::InvalidInput(
            "the oracle supports radicands up to 10^6".into(),
        ));
    }
    let c = alpha.norm();
    if c > BigInt::from(10_000_000u64) {
        return Err(Error::InvalidInput(format!(
            "the oracle enumerates |α|² cosets and |α|² = {c} exceeds its 10^7 budget"
        )));
    }
    Ok(())
}

/// Nearest integer to `p/q` for `q > 0`.
fn round_div(p: i128, q: i128) -> i128 {
    (2 * p + q).div_euclid(2 * q)
}

/// Geometric ground truth: walks every coset of `αΛ` in `Λ` and
/// decides by exact closest-vector computation whether the minimal
/// distance to `αΛ` is attained at two or more sublattice points (a
/// Voronoi-boundary tie).  Returns true when no representative lies on
/// a boundary; the zero coset is never a tie since its minimum is
/// uniquely zero.
pub fn clean_oracle(lattice: &QuadLattice, alpha: &QuadInt) -> Result<bool> {
    check_oracle_input(lattice, alpha)?;
    let x = i128::try_from(&alpha.x).expect("bounded by the norm budget");
    let y = i128::try_from(&alpha.y).expect("bounded by the norm budget");
    let c = lattice.form_i128(x, y);
    let (h00, h11) = coset_shape(alpha)?;
    assert_eq!(h00 * h11, c, "coset count must equal the index");
    // Conjugate coordinates of α on the same basis.
    let (cx, cy) = match lattice.family {
        CellFamily::Hexagonal => (x - y, -y),
        CellFamily::Rectangular => (x, -y),
    };
    // ring product (a, b)·(c, d) in i128 coordinates
    let mul = |x1: i128, y1: i128, x2: i128, y2: i128| -> (i128, i128) {
        match lattice.family {
            CellFamily::Hexagonal => {
                let m = i128::from(lattice.omega_norm());
                (x1 * x2 - m * y1 * y2, x1 * y2 + x2 * y1 - y1 * y2)
            }
            CellFamily::Rectangular => {
                let n = i128::from(lattice.n);
                (x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1)
            }
        }
    };
    // Enclosure certificate: a lattice point outside the searched box
    // differs from the target by at least r + 1/2 in some coordinate,
    // so its form value is at least lambda_lb · (r + 1/2)², with
    // lambda_lb a positive rational lower bound on the smallest
    // eigenvalue of the form.  Comparisons are cross-multiplied to stay
    // integral: best < lambda_num/lambda_den · (2r+1)²/4 · c².
    let (lambda_num, lambda_den): (i128, i128) = match lattice.family {
        CellFamily::Hexagonal => {
            let m = i128::from(lattice.omega_norm());
            // det/trace of [[1, -1/2], [-1/2, m]]
            (4 * m - 1, 4 * (m + 1))
        }
        CellFamily::Rectangular => (1, 1),
    };
    for i in 0..h00 {
        for j in 0..h11 {
            // Rational solution of α·z = u is z = u·conj(α)/c.
            let (p, q) = mul(i, j, cx, cy);
            let m0 = round_div(p, c);
            let n0 = round_div(q, c);
            let mut radius: i128 = 2;
            let tie = loop {
                let mut best: Option<i128> = None;
                let mut count = 0usize;
                for mm in m0 - radius..=m0 + radius {
                    for nn in n0 - radius..=n0 + radius {
                        let fx = p - mm * c;
                        let fy = q - nn * c;
                        let val = lattice.form_i128(fx, fy);
                        match &best {
                            Some(b) if val > *b => {}
                            Some(b) if val == *b => count += 1,
                            _ => {
                                best = Some(val);
                                count = 1;
                            }
                        }
                    }
                }
                let best = best.expect("box is nonempty");
                let side = 2 * radius + 1;
                if best * 4 * lambda_den < lambda_num * side * side * c * c {
                    break count >= 2;
                }
                radius += 1;
                assert!(radius <= 64, "closest-vector box failed to close");
            };
            if tie {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All ring elements of the given norm (both signs, all associates).
pub fn norm_shell(lattice: &QuadLattice, c: u64) -> Vec<QuadInt> {
    let c = i64::try_from(c).expect("norm shell bound fits i64");
    let mut shell = Vec::new();
    let isqrt = |v: i64| -> i64 {
        if v < 0 {
            return -1;
        }
        let mut r = (v as f64).sqrt() as i64 + 1;
        while r * r > v {
            r -= 1;
        }
        r
    };
    match lattice.family {
        CellFamily::Hexagonal => {
            let m = lattice.omega_norm();
            let y_bound = isqrt(4 * c / (4 * m - 1));
            for y in -y_bound..=y_bound {
                let x_span = isqrt(c) + y.abs() / 2 + 1;
                for x in -x_span..=x_span {
                    if x * x - x * y + m * y * y == c {
                        shell.push(QuadInt::new(*lattice, x, y));
                    }
                }
            }
        }
        CellFamily::Rectangular => {
            let n = lattice.n;
            let y_bound = isqrt(c / n);
            for y in -y_bound..=y_bound {
                let rem = c - n * y * y;
                let x = isqrt(rem);
                if x >= 0 && x * x == rem {
                    shell.push(QuadInt::new(*lattice, x, y));
                    if x != 0 {
                        shell.push(QuadInt::new(*lattice, -x, y));
                    }
                }
            }
        }
    }
    shell
}

/// All indices `c ≤ c_max` admitting a clean sublattice: each norm
/// shell is enumerated and the family's arithmetic criterion applied to
/// every element.
pub fn clean_index_spectrum(lattice: &QuadLattice, c_max: u64) -> Result<BTreeSet<u64>> {
    if c_max < 1 {
        return Err(Error::InvalidInput("the index bound must be positive".into()));
    }
    let mut spectrum = BTreeSet::new();
    for c in 1..=c_max {
        let clean = norm_shell(lattice, c).into_iter().try_fold(
            false,
            |found, alpha| -> Result<bool> {
                if found {
                    return Ok(true);
                }
                let verdict = match lattice.family {
                    CellFamily::Hexagonal => clean_hex_general(lattice.n, &alpha)?,
                    CellFamily::Rectangular => clean_rect(lattice.n, &alpha)?,
                };
                Ok(verdict)
            },
        )?;
        if clean {
            spectrum.insert(c);
        }
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use num_traits::One;

    fn hex(n: i64) -> QuadLattice {
        QuadLattice::hexagonal(n).unwrap()
    }

    fn rect(n: i64) -> QuadLattice {
        QuadLattice::rectangular(n).unwrap()
    }

    #[test]
    fn ring_arithmetic_examples() {
        let a2 = hex(3);
        let theta = a2.theta();
        assert_eq!(theta.mul(&theta.conj()).unwrap(), QuadInt::new(a2, 3, 0));
        assert_eq!(theta.norm(), BigInt::from(3));
        let r2 = rect(2);
        assert_eq!(QuadInt::new(r2, 1, 1).norm(), BigInt::from(3));
        assert_eq!(QuadInt::new(r2, 1, 0).norm(), BigInt::one());
        assert!(QuadInt::new(a2, 1, 0).mul(&QuadInt::new(r2, 1, 0)).is_err());
        assert!(QuadInt::new(a2, 1, 0)
            .mul(&QuadInt::new(hex(7), 1, 0))
            .is_err());
        // Norm is multiplicative.
        for ring in [a2, hex(7), r2, rect(5)] {
            let u = QuadInt::new(ring, 3, -2);
            let v = QuadInt::new(ring, -1, 4);
            assert_eq!(u.mul(&v).unwrap().norm(), u.norm() * v.norm());
            assert_eq!(u.conj().norm(), u.norm());
        }
        // Constructor validation.
        assert!(QuadLattice::hexagonal(5).is_err());
        assert!(QuadLattice::hexagonal(-3).is_err());
        assert!(QuadLattice::rectangular(0).is_err());
    }

    #[test]
    fn primitivity_examples() {
        let a2 = hex(3);
        assert!(is_primitive(&QuadInt::new(a2, 1, 5)).unwrap());
        assert!(!is_primitive(&QuadInt::new(a2, 2, 4)).unwrap());
        assert!(is_primitive(&QuadInt::new(a2, 1, 0)).unwrap());
        assert!(is_primitive(&QuadInt::new(a2, 0, 7)).is_ok());
        assert!(!is_primitive(&QuadInt::new(a2, 0, 7)).unwrap());
        assert!(is_primitive(&QuadInt::new(a2, 0, 0)).is_err());
    }

    #[test]
    fn hexagonal_a2_criterion_examples() {
        let a2 = hex(3);
        assert!(clean_hex_a2(&QuadInt::new(a2, 1, 0)).unwrap());
        // 3 + ω has norm 7 and (3+ω)θ = 1 + 5ω.
        let seven = QuadInt::new(a2, 3, 1);
        assert_eq!(seven.norm(), BigInt::from(7));
        assert_eq!(
            seven.mul(&a2.theta()).unwrap(),
            QuadInt::new(a2, 1, 5)
        );
        assert!(clean_hex_a2(&seven).unwrap());
        // 2 has norm 4 and 2θ = 2 + 4ω is imprimitive.
        assert!(!clean_hex_a2(&QuadInt::new(a2, 2, 0)).unwrap());
        assert!(clean_hex_a2(&QuadInt::new(a2, 0, 0)).is_err());
        assert!(clean_hex_a2(&QuadInt::new(hex(7), 1, 0)).is_err());
    }

    #[test]
    fn general_criterion_specializes_at_three() {
        let a2 = hex(3);
        for a in -10..=10i64 {
            for b in -10..=10i64 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let alpha = QuadInt::new(a2, a, b);
                assert_eq!(
                    clean_hex_general(3, &alpha).unwrap(),
                    clean_hex_a2(&alpha).unwrap(),
                    "alpha = {alpha}"
                );
            }
        }
    }

    #[test]
    fn kleinian_parity_characterization() {
        let k = hex(7);
        assert!(clean_hex_general(7, &QuadInt::new(k, 3, 2)).unwrap());
        assert!(!clean_hex_general(7, &QuadInt::new(k, 1, 1)).unwrap());
        // For primitive α the three primitivity conditions reduce to
        // "|α|² odd and not divisible by 7": oddness is the stated
        // parity test (a odd, b even), and the second clause is
        // equivalent to θ not dividing α.  The bare parity test without
        // the 7-clause is NOT sufficient; see the counterexample test
        // below.
        for a in -8..=8i64 {
            for b in -8..=8i64 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let alpha = QuadInt::new(k, a, b);
                let parity = a % 2 != 0 && b % 2 == 0 && a.gcd(&b) == 1;
                let expected = parity && !alpha.norm().is_multiple_of(&BigInt::from(7));
                assert_eq!(
                    clean_hex_general(7, &alpha).unwrap(),
                    expected,
                    "alpha = {alpha}"
                );
            }
        }
        assert!(clean_hex_general(5, &QuadInt::new(k, 1, 0)).is_err());
        assert!(clean_hex_general(3, &QuadInt::new(k, 1, 0)).is_err());
    }

    #[test]
    fn kleinian_parity_needs_the_ramified_clause() {
        // α = θ itself satisfies the parity test (odd, even, coprime
        // coordinates in either basis convention) but yields a sublattice
        // that is not clean: the lattice point ω is equidistant, with
        // squared distance 2, from the sublattice points 0 and θ.  The
        // same happens for every θ·β: αθ = −7β can never be primitive.
        let k = hex(7);
        let theta = k.theta();
        assert_eq!(
            theta.mul(&QuadInt::new(k, 3, 2)).unwrap(),
            QuadInt::new(k, -5, 4)
        );
        for alpha in [theta.clone(), QuadInt::new(k, -5, 4), QuadInt::new(k, 9, 4)] {
            assert!(!clean_hex_general(7, &alpha).unwrap(), "alpha = {alpha}");
            assert!(!clean_oracle(&k, &alpha).unwrap(), "alpha = {alpha}");
        }
        // The tie behind the θ case, computed exactly: |ω − 0|² =
        // |ω − θ|² = 2, and no sublattice point is closer.
        let omega = QuadInt::new(k, 0, 1);
        assert_eq!(omega.norm(), BigInt::from(2));
        let diff = QuadInt::new(k, -1, -1);
        assert_eq!(diff.norm(), BigInt::from(2));
    }

    #[test]
    fn rectangular_criterion_examples() {
        let gauss = rect(1);
        assert!(!clean_rect(1, &QuadInt::new(gauss, 1, 1)).unwrap());
        assert!(clean_rect(1, &QuadInt::new(gauss, 2, 1)).unwrap());
        assert!(clean_rect(2, &QuadInt::new(rect(2), 1, 1)).unwrap());
        assert!(clean_rect(1, &QuadInt::new(gauss, 0, 0)).is_err());
        assert!(clean_rect(2, &QuadInt::new(gauss, 1, 0)).is_err());
    }

    #[test]
    fn voronoi_cells_are_exact() {
        let square = voronoi_cell(&rect(1));
        assert_eq!(square.edge_count(), 4);
        let expected: BTreeSet<_> = [
            (rat_frac(1, 2), rat_frac(1, 2)),
            (rat_frac(-1, 2), rat_frac(1, 2)),
            (rat_frac(-1, 2), rat_frac(-1, 2)),
            (rat_frac(1, 2), rat_frac(-1, 2)),
        ]
        .into_iter()
        .collect();
        assert_eq!(square.vertices().iter().cloned().collect::<BTreeSet<_>>(), expected);
        // N = 2: half-widths 1/2 and (1/2)·√2.
        let r2 = voronoi_cell(&rect(2));
        assert_eq!(r2.radicand(), 2);
        assert!(r2
            .vertices()
            .iter()
            .all(|(u, v)| u.abs() == rat_frac(1, 2) && v.abs() == rat_frac(1, 2)));
        // N = 3: a regular hexagon; the left edge is the middle third
        // of the segment from ω̄ = (−1/2, −(1/2)√3) to ω.
        let hexcell = voronoi_cell(&hex(3));
        assert_eq!(hexcell.edge_count(), 6);
        assert!(hexcell.is_centrally_symmetric());
        assert!(hexcell.is_convex());
        let circum: BTreeSet<_> = hexcell
            .vertices()
            .iter()
            .map(|(u, v)| u * u + rat(3) * v * v)
            .collect();
        assert_eq!(circum.len(), 1, "regular hexagon has one circumradius");
        assert_eq!(circum.into_iter().next().unwrap(), rat_frac(1, 3));
        assert!(hexcell
            .vertices()
            .iter()
            .any(|(u, v)| *u == rat_frac(-1, 2) && *v == rat_frac(1, 6)));
        assert!(hexcell
            .vertices()
            .iter()
            .any(|(u, v)| *u == rat_frac(-1, 2) && *v == rat_frac(-1, 6)));
        // General hexagonal cells stay hexagonal and symmetric.
        for n in [7, 11, 15, 19, 23] {
            let cell = voronoi_cell(&hex(n));
            assert_eq!(cell.edge_count(), 6);
            assert!(cell.is_centrally_symmetric());
            assert!(cell.is_convex());
        }
    }

    #[test]
    fn oracle_examples() {
        for lattice in [hex(3), hex(7), rect(1), rect(2)] {
            assert!(clean_oracle(&lattice, &QuadInt::new(lattice, 1, 0)).unwrap());
        }
        // (1, 0) ties between (0,0), (1,1), (1,−1) in the index-2
        // sublattice of the Gaussian integers.
        let gauss = rect(1);
        assert!(!clean_oracle(&gauss, &QuadInt::new(gauss, 1, 1)).unwrap());
        let a2 = hex(3);
        assert!(clean_oracle(&a2, &QuadInt::new(a2, 3, 1)).unwrap());
        assert!(clean_oracle(&a2, &QuadInt::new(a2, 0, 0)).is_err());
        assert!(clean_oracle(&a2, &QuadInt::new(gauss, 1, 1)).is_err());
    }

    #[test]
    fn coset_counts_match_the_index() {
        for lattice in [hex(3), hex(7), hex(11), rect(1), rect(3)] {
            for a in -4..=4i64 {
                for b in -4..=4i64 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let alpha = QuadInt::new(lattice, a, b);
                    let reps = coset_representatives(&lattice, &alpha).unwrap();
                    assert_eq!(BigInt::from(reps.len()), alpha.norm());
                    // Distinctness: no two representatives differ by an
                    // element of αΛ (checked via the ring quotient).
                    let c = alpha.norm();
                    let mut seen = BTreeSet::new();
                    for rep in &reps {
                        let prod = rep.mul(&alpha.conj()).unwrap();
                        let key = (
                            prod.coords().0.mod_floor(&c),
                            prod.coords().1.mod_floor(&c),
                        );
                        assert!(seen.insert(key), "duplicate coset for {alpha}");
                    }
                }
            }
        }
    }

    #[test]
    fn predicates_agree_with_the_oracle_on_sample_grids() {
        for n in [3, 7, 11, 15, 19, 23] {
            let lattice = hex(n);
            for a in -3..=3i64 {
                for b in -3..=3i64 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let alpha = QuadInt::new(lattice, a, b);
                    assert_eq!(
                        clean_hex_general(n, &alpha).unwrap(),
                        clean_oracle(&lattice, &alpha).unwrap(),
                        "hexagonal N={n}, alpha = {alpha}"
                    );
                }
            }
        }
        for n in 1..=10i64 {
            let lattice = rect(n);
            for a in -3..=3i64 {
                for b in -3..=3i64 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let alpha = QuadInt::new(lattice, a, b);
                    assert_eq!(
                        clean_rect(n, &alpha).unwrap(),
                        clean_oracle(&lattice, &alpha).unwrap(),
                        "rectangular N={n}, alpha = {alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn clean_is_invariant_under_units_and_conjugation() {
        for lattice in [hex(3), hex(7), rect(1), rect(2)] {
            let units = lattice.units();
            match (lattice.family(), lattice.radicand()) {
                (CellFamily::Hexagonal, 3) => assert_eq!(units.len(), 6),
                (CellFamily::Rectangular, 1) => assert_eq!(units.len(), 4),
                _ => assert_eq!(units.len(), 2),
            }
            for a in -2..=2i64 {
                for b in -2..=2i64 {
                    if (a, b) == (0, 0) {
                        continue;
                    }
                    let alpha = QuadInt::new(lattice, a, b);
                    let base = clean_oracle(&lattice, &alpha).unwrap();
                    assert_eq!(
                        clean_oracle(&lattice, &alpha.conj()).unwrap(),
                        base,
                        "conjugation changed clean-ness of {alpha}"
                    );
                    for unit in &units {
                        let moved = alpha.mul(unit).unwrap();
                        assert_eq!(
                            clean_oracle(&lattice, &moved).unwrap(),
                            base,
                            "unit {unit} changed clean-ness of {alpha}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hexagonal_spectrum_is_the_split_prime_products() {
        let spectrum = clean_index_spectrum(&hex(3), 100).unwrap();
        let expected: BTreeSet<u64> =
            [1, 7, 13, 19, 31, 37, 43, 49, 61, 67, 73, 79, 91, 97]
                .into_iter()
                .collect();
        assert_eq!(spectrum, expected);
        // Independently: exactly the c ≤ 100 all of whose prime factors
        // are ≡ 1 (mod 3).
        for c in 1..=100u64 {
            let all_split = factorize(&BigInt::from(c))
                .unwrap()
                .primes()
                .all(|p| p.mod_floor(&3u32.into()) == 1u32.into());
            assert_eq!(spectrum.contains(&c), all_split, "c = {c}");
        }
    }

    #[test]
    fn small_spectra() {
        let gauss = rect(1);
        let spectrum = clean_index_spectrum(&gauss, 10).unwrap();
        assert_eq!(spectrum, [1, 5, 9].into_iter().collect());
        assert_eq!(
            clean_index_spectrum(&hex(7), 1).unwrap(),
            [1].into_iter().collect()
        );
        assert!(clean_index_spectrum(&gauss, 0).is_err());
    }

    #[test]
    fn norm_shells_are_complete() {
        let a2 = hex(3);
        assert_eq!(norm_shell(&a2, 1).len(), 6);
        assert_eq!(norm_shell(&a2, 2).len(), 0);
        assert_eq!(norm_shell(&a2, 3).len(), 6);
        assert_eq!(norm_shell(&a2, 7).len(), 12);
        let gauss = rect(1);
        assert_eq!(norm_shell(&gauss, 1).len(), 4);
        assert_eq!(norm_shell(&gauss, 2).len(), 4);
        assert_eq!(norm_shell(&gauss, 5).len(), 8);
        for lattice in [a2, hex(11), gauss, rect(6)] {
            for c in 1..=25u64 {
                for z in norm_shell(&lattice, c) {
                    assert_eq!(z.norm(), BigInt::from(c));
                }
            }
        }
    }
}
