//! Exact fields: the rationals and prime fields GF(p).
//!
//! A [`Field`] value carries whatever context its elements need (the modulus for
//! GF(p), nothing for ℚ), so matrices store the field next to their entries and
//! every arithmetic operation goes through it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest characteristic accepted for a prime field.
pub const MAX_CHARACTERISTIC: u32 = 65_521;

/// Which field a matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    /// Checked constructor for GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_CHARACTERISTIC {
            return Err(Error::Field(format!("{p} is not a supported prime characteristic")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for ℚ.
    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Number of elements, `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(u64::from(*p)),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "GF{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("Q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = s
            .strip_prefix("GF")
            .or_else(|| s.strip_prefix("gf"))
            .ok_or_else(|| Error::Field(format!("unknown field `{s}` (expected Q, GF2, GF3 or GF5)")))?;
        let p: u32 = digits
            .parse()
            .map_err(|_| Error::Field(format!("unknown field `{s}` (expected Q, GF2, GF3 or GF5)")))?;
        FieldSpec::prime(p)
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic over an exact field.
///
/// Elements are plain values; the field value supplies the operations. Rank has a
/// default implementation by Gaussian elimination which implementors may override
/// (ℚ does, with fraction-free elimination).
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn parse_elem(&self, token: &str) -> std::result::Result<Self::Elem, String>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Canonical residue for prime-field elements; `None` over ℚ.
    fn residue(&self, a: &Self::Elem) -> Option<u32>;

    /// A random element. Over ℚ the values are small fractions.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn characteristic(&self) -> u32 {
        self.spec().characteristic()
    }

    fn rank(&self, m: &Matrix<Self>) -> usize {
        crate::linalg::rank_by_elimination(m)
    }
}

/// The field ℚ with arbitrary-precision entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn parse_elem(&self, token: &str) -> std::result::Result<BigRational, String> {
        let (num, den) = match token.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (token, None),
        };
        let num: BigInt = num.parse().map_err(|_| format!("invalid rational `{token}`"))?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| format!("invalid rational `{token}`"))?,
            None => BigInt::one(),
        };
        if !den.is_positive() {
            return Err(format!("denominator must be positive in `{token}`"));
        }
        Ok(BigRational::new(num, den))
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn residue(&self, _a: &BigRational) -> Option<u32> {
        None
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        const DENOMS: [i64; 5] = [1, 1, 1, 2, 3];
        let num = rng.gen_range(-4i64..=4);
        let den = DENOMS[rng.gen_range(0..DENOMS.len())];
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn rank(&self, m: &Matrix<Self>) -> usize {
        bareiss_rank(m)
    }
}

/// GF(p) with elements stored as canonical residues `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Element from a residue, reducing it first.
    pub fn elem(&self, v: u64) -> u32 {
        (v % u64::from(self.p)) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.p)) as u32
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((u64::from(*a) + u64::from(*b)) % u64::from(self.p)) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((u64::from(*a) + u64::from(self.p) - u64::from(*b)) % u64::from(self.p)) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((u64::from(*a) * u64::from(*b)) % u64::from(self.p)) as u32
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let p = u64::from(self.p);
        let mut base = u64::from(*a) % p;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(acc as u32)
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn parse_elem(&self, token: &str) -> std::result::Result<u32, String> {
        let v: u32 = token
            .parse()
            .map_err(|_| format!("invalid GF({}) entry `{token}`", self.p))?;
        if v >= self.p {
            return Err(format!(
                "GF({}) entries must be canonical residues 0..{}, got {v}",
                self.p,
                self.p - 1
            ));
        }
        Ok(v)
    }

    fn format_elem(&self, a: &u32) -> String {
        a.to_string()
    }

    fn residue(&self, a: &u32) -> Option<u32> {
        Some(*a)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
}

/// Rank over ℚ by fraction-free (Bareiss) elimination on an integer scaling of `m`.
fn bareiss_rank(m: &Matrix<Rationals>) -> usize {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return 0;
    }
    // Clear denominators row by row; row scaling preserves rank.
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();

    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                // Exact by Sylvester's identity.
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("GF3".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(3));
        assert!("GF4".parse::<FieldSpec>().is_err());
        assert!("GF1".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(5).to_string(), "GF5");
    }

    #[test]
    fn prime_field_inverses() {
        for p in [2u32, 3, 5, 7, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                let inv = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), 1);
            }
            assert_eq!(f.inv(&0), None);
        }
    }

    #[test]
    fn prime_field_parse_rejects_non_canonical() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.parse_elem("2"), Ok(2));
        assert!(f.parse_elem("3").is_err());
        assert!(f.parse_elem("-1").is_err());
    }

    #[test]
    fn rational_parse_and_format() {
        let q = Rationals;
        let x = q.parse_elem("-6/4").unwrap();
        assert_eq!(q.format_elem(&x), "-3/2");
        assert_eq!(q.format_elem(&q.parse_elem("7").unwrap()), "7");
        assert!(q.parse_elem("1/0").is_err());
        assert!(q.parse_elem("1/-2").is_err());
        assert!(q.parse_elem("a").is_err());
    }
}
