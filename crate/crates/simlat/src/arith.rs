//! Exact number theory: factorization, p-adic valuations, Legendre and
//! Hilbert symbols.
//!
//! Everything is exact; no floating point. The Hilbert symbol is computed
//! by the standard closed formulas over the unit parts of its arguments,
//! with the real place represented as a distinguished marker rather than
//! a fake prime. Factorization does trial division up to an explicit
//! bound and falls back to Pollard--Brent with an iteration budget: on
//! inputs that exhaust the budget it reports an error instead of looping
//! or guessing.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;
const POLLARD_ITERATION_BUDGET: u64 = 50_000_000;

/// A place of the rationals: a finite prime or the real place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Finite(BigUint),
    Real,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{}", p),
            Place::Real => write!(f, "real"),
        }
    }
}

/// Signed prime factorization with strictly increasing primes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Reconstructs the factored integer.
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one();
        for (p, e) in &self.factors {
            v *= BigInt::from(p.clone()).pow(*e);
        }
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{}", p)?;
            } else {
                write!(f, "{}^{}", p, e)?;
            }
        }
        Ok(())
    }
}

/// Miller-Rabin primality test. Deterministic below 2^64 (the fixed
/// witness set decides that range); probabilistic with the same witnesses
/// above it, which is ample for the tiny inputs this crate handles.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    let small: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for s in small {
        let s = BigUint::from(s);
        if n == &s {
            return true;
        }
        if n.is_multiple_of(&s) {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in small {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent cycle finding; returns a nontrivial factor of composite
/// odd `n`, or `None` when the iteration budget runs out.
fn pollard_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut used: u64 = 0;
        let m: u64 = 128;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k: u64 = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = m.min(r - k);
                for _ in 0..steps {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
                used += steps;
                if used > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n && g > one {
            return Some(g);
        }
    }
    None
}

/// Exact prime factorization of a nonzero integer.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let push = |p: BigUint, e: u32, factors: &mut Vec<(BigUint, u32)>| {
        factors.push((p, e));
    };
    let strip = |m: &mut BigUint, p: u64, factors: &mut Vec<(BigUint, u32)>| {
        let pb = BigUint::from(p);
        let mut e = 0u32;
        while m.is_multiple_of(&pb) {
            *m /= &pb;
            e += 1;
        }
        if e > 0 {
            push(pb, e, factors);
        }
    };
    strip(&mut m, 2, &mut factors);
    let mut d: u64 = 3;
    while d <= TRIAL_DIVISION_BOUND {
        if BigUint::from(d).pow(2) > m {
            break;
        }
        strip(&mut m, d, &mut factors);
        d += 2;
    }
    // Whatever is left has no prime factor below the trial bound.
    let mut stack = vec![m];
    let mut large: Vec<BigUint> = Vec::new();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            large.push(m);
            continue;
        }
        let f = pollard_brent(&m, POLLARD_ITERATION_BUDGET)
            .ok_or_else(|| Error::FactorizationFailed(m.to_string()))?;
        let rest = &m / &f;
        stack.push(f);
        stack.push(rest);
    }
    large.sort();
    let mut i = 0;
    while i < large.len() {
        let p = large[i].clone();
        let mut e = 0u32;
        while i < large.len() && large[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

fn validate_prime(p: &BigUint) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{} is not prime", p)));
    }
    Ok(())
}

fn int_valuation(n: &BigUint, p: &BigUint) -> i64 {
    let mut m = n.clone();
    let mut v = 0i64;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

/// The p-adic valuation of a nonzero rational, possibly negative.
pub fn valuation(r: &BigRational, p: &BigUint) -> Result<i64> {
    if r.is_zero() {
        return Err(Error::InvalidInput("valuation of 0 is undefined".into()));
    }
    validate_prime(p)?;
    Ok(int_valuation(r.numer().magnitude(), p) - int_valuation(r.denom().magnitude(), p))
}

/// Legendre symbol `(a|p)` for an odd prime `p`: 0 when `p | a`, otherwise
/// ±1 by Euler's criterion.
pub fn legendre_symbol(a: &BigInt, p: &BigUint) -> Result<i8> {
    validate_prime(p)?;
    if p.is_even() {
        return Err(Error::InvalidInput("legendre symbol needs an odd prime".into()));
    }
    let pb = BigInt::from(p.clone());
    let a_mod = a.mod_floor(&pb);
    if a_mod.is_zero() {
        return Ok(0);
    }
    let exp = (p - BigUint::one()) >> 1;
    let r = a_mod
        .magnitude()
        .modpow(&exp, p);
    if r.is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Strips `p^v` from a nonzero rational, returning `(v, unit)` with the
/// unit part coprime to `p`.
fn unit_part(r: &BigRational, p: &BigUint) -> (i64, BigRational) {
    let pb = BigInt::from(p.clone());
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    let mut v = 0i64;
    while num.is_multiple_of(&pb) {
        num /= &pb;
        v += 1;
    }
    while den.is_multiple_of(&pb) {
        den /= &pb;
        v -= 1;
    }
    (v, BigRational::new(num, den))
}

/// Legendre symbol of a rational that is a p-adic unit: the symbol of its
/// numerator times that of its denominator (inversion preserves signs).
fn legendre_of_unit(u: &BigRational, p: &BigUint) -> Result<i8> {
    let ln = legendre_symbol(u.numer(), p)?;
    let ld = legendre_symbol(u.denom(), p)?;
    Ok(ln * ld)
}

/// Residue of an odd rational modulo 8. Odd squares are 1 mod 8, so the
/// denominator equals its own inverse there.
fn odd_unit_mod8(u: &BigRational) -> u64 {
    let m8 = BigInt::from(8);
    let n = u.numer().mod_floor(&m8).to_u64().unwrap();
    let d = u.denom().mod_floor(&m8).to_u64().unwrap();
    (n * d) % 8
}

/// Hilbert symbol `(a, b)` at a place of Q, by the closed formulas.
///
/// Returns 1 exactly when `z² = a x² + b y²` has a nontrivial solution
/// over the completion at that place.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("hilbert symbol needs nonzero arguments".into()));
    }
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                Ok(-1)
            } else {
                Ok(1)
            }
        }
        Place::Finite(p) => {
            validate_prime(p)?;
            let (alpha, u) = unit_part(a, p);
            let (beta, v) = unit_part(b, p);
            if p.is_even() {
                let um = odd_unit_mod8(&u);
                let vm = odd_unit_mod8(&v);
                let eps = |x: u64| (x % 4 == 3) as i64;
                let omega = |x: u64| (x == 3 || x == 5) as i64;
                let e = eps(um) * eps(vm) + alpha * omega(vm) + beta * omega(um);
                Ok(if e % 2 == 0 { 1 } else { -1 })
            } else {
                let mut s: i8 = 1;
                if (alpha * beta) % 2 != 0 {
                    // (-1|p): +1 iff p = 1 mod 4.
                    let p4 = (p % BigUint::from(4u32)).to_u64().unwrap();
                    if p4 == 3 {
                        s = -s;
                    }
                }
                if beta % 2 != 0 {
                    s *= legendre_of_unit(&u, p)?;
                }
                if alpha % 2 != 0 {
                    s *= legendre_of_unit(&v, p)?;
                }
                Ok(s)
            }
        }
    }
}

/// Whether a nonnegative integer is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.magnitude().sqrt();
    &r * &r == *n.magnitude()
}

/// The places that can carry a nonzero Hilbert symbol for `(a, b)`:
/// the real place and the primes dividing `2 * num * den` of both arguments.
pub fn relevant_places(a: &BigRational, b: &BigRational) -> Result<Vec<Place>> {
    let mut n = BigInt::from(2);
    for r in [a, b] {
        n *= r.numer();
        n *= r.denom();
    }
    let f = factorize(&n)?;
    let mut places = vec![Place::Real];
    for p in f.primes() {
        places.push(Place::Finite(p.clone()));
    }
    Ok(places)
}
