//! Hurwitz quaternion arithmetic.
//!
//! A quaternion `r + si + tj + uk` is stored with exact rational
//! components.  The type enforces the Hurwitz condition at construction:
//! either all four components are integers or all four are half-odd
//! integers.  These are exactly the quaternions whose right multiplication
//! preserves the quaternionic lattice structures used by the similarity
//! constructors, and their reduced norm `r² + s² + t² + u²` is always a
//! nonnegative integer.
//!
//! Multiplication uses the standard relations `i² = j² = k² = −1`,
//! `ij = k`, `jk = i`, `ki = j`.  The matrix of right multiplication in
//! the basis `(1, i, j, k)` is produced by [`Quaternion::right_mult_matrix`];
//! composing maps corresponds to reversed quaternion products, since
//! `x·(pq) = (x·p)·q`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat::QMat;

/// A Hurwitz quaternion: all components integral, or all half-odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quaternion {
    components: [BigRational; 4],
}

impl Quaternion {
    /// Builds a quaternion from exact components, enforcing the Hurwitz
    /// condition.
    pub fn new(
        r: BigRational,
        s: BigRational,
        t: BigRational,
        u: BigRational,
    ) -> Result<Quaternion> {
        let components = [r, s, t, u];
        let two = BigInt::from(2);
        let all_integral = components.iter().all(|c| c.is_integer());
        let all_half_odd = components
            .iter()
            .all(|c| *c.denom() == two && c.numer().is_odd());
        if !all_integral && !all_half_odd {
            return Err(Error::InvalidInput(
                "quaternion components must be all integers or all half-odd integers".into(),
            ));
        }
        Ok(Quaternion { components })
    }

    /// Builds an integer (Lipschitz) quaternion.
    pub fn from_integers(r: i64, s: i64, t: i64, u: i64) -> Quaternion {
        Quaternion {
            components: [
                BigRational::from(BigInt::from(r)),
                BigRational::from(BigInt::from(s)),
                BigRational::from(BigInt::from(t)),
                BigRational::from(BigInt::from(u)),
            ],
        }
    }

    /// Builds `(r + si + tj + uk) / 2`; every argument must be odd.
    pub fn half_odd(r: i64, s: i64, t: i64, u: i64) -> Result<Quaternion> {
        let half = |x: i64| BigRational::new(BigInt::from(x), BigInt::from(2));
        Quaternion::new(half(r), half(s), half(t), half(u))
    }

    /// The unit `ω = (−1 + i + j + k)/2`, a primitive sixth root of unity
    /// (`ω² + ω + 1 = 0`).
    pub fn omega() -> Quaternion {
        Quaternion::half_odd(-1, 1, 1, 1).expect("ω is Hurwitz")
    }

    /// The multiplicative identity.
    pub fn one() -> Quaternion {
        Quaternion::from_integers(1, 0, 0, 0)
    }

    /// Component access in the order `(r, s, t, u)` of `r + si + tj + uk`.
    pub fn components(&self) -> &[BigRational; 4] {
        &self.components
    }

    /// True when every component is zero.
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// True when all components are integers (a Lipschitz quaternion).
    pub fn is_integral(&self) -> bool {
        self.components.iter().all(|c| c.is_integer())
    }

    /// The conjugate `r − si − tj − uk`.
    pub fn conjugate(&self) -> Quaternion {
        let [r, s, t, u] = self.components.clone();
        Quaternion {
            components: [r, -s, -t, -u],
        }
    }

    /// The reduced norm `r² + s² + t² + u²`, an integer for every
    /// Hurwitz quaternion.
    pub fn reduced_norm(&self) -> BigInt {
        let sum: BigRational = self.components.iter().map(|c| c * c).sum();
        debug_assert!(sum.is_integer());
        sum.to_integer()
    }

    /// The quaternion product `self · other`.
    pub fn mul(&self, other: &Quaternion) -> Quaternion {
        let [a, b, c, d] = &self.components;
        let [e, f, g, h] = &other.components;
        let r = a * e - b * f - c * g - d * h;
        let s = a * f + b * e + c * h - d * g;
        let t = a * g - b * h + c * e + d * f;
        let u = a * h + b * g - c * f + d * e;
        Quaternion {
            components: [r, s, t, u],
        }
    }

    /// The matrix of `x ↦ x · self` on column vectors of coordinates in
    /// the basis `(1, i, j, k)`.  Column `a` holds the coordinates of
    /// `basis_a · self`.
    pub fn right_mult_matrix(&self) -> QMat {
        let [r, s, t, u] = self.components.clone();
        QMat::from_rows(vec![
            vec![r.clone(), -s.clone(), -t.clone(), -u.clone()],
            vec![s.clone(), r.clone(), u.clone(), -t.clone()],
            vec![t.clone(), -u.clone(), r.clone(), s.clone()],
            vec![u, t, -s, r],
        ])
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = ["", "i", "j", "k"];
        let mut first = true;
        for (c, unit) in self.components.iter().zip(units) {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if mag.is_one() && !unit.is_empty() {
                write!(f, "{unit}")?;
            } else {
                write!(f, "{mag}{unit}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
