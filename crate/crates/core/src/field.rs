//! Exact scalar arithmetic over the rationals and over prime fields.
//!
//! Every computation in this crate reduces to rank calculations, so scalars
//! must be exact: `Q` uses arbitrary-precision rationals, `F_p` uses `u64`
//! residues with `p < 2^31` (products fit in a `u64` without overflow).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use std::fmt;

use crate::error::{Error, Result};

/// A scalar field: the rationals, or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// Prime field with the given modulus, `2 <= p < 2^31`.
    Prime(u64),
}

/// An element of a [`FieldSpec`]. `Fp` values are kept normalized in `[0, p)`
/// and rationals in lowest terms (enforced by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `q` (or `rationals`) and `fp:P` with `P` prime.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" | "rationals" => Ok(FieldSpec::Rationals),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Unsupported(format!("unknown field spec `{other}`")))?;
                let p: u64 = p
                    .parse()
                    .map_err(|_| Error::Unsupported(format!("bad modulus in `{other}`")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// The rational field.
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    /// The prime field `F_p`. Errors if `p` is out of range or not prime.
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..1u64 << 31).contains(&p) {
            return Err(Error::ModulusRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp(r)
            }
        }
    }

    /// Interpret a rational `num/den` in this field. Over `F_p` this is
    /// `num * den^{-1} mod p`; errors when `p | den`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::Prime(p) => {
                let pp = BigInt::from(*p);
                let n = ((num % &pp) + &pp) % &pp;
                let d = ((den % &pp) + &pp) % &pp;
                let n = n.to_u64().expect("reduced residue fits in u64");
                let d = d.to_u64().expect("reduced residue fits in u64");
                let dinv = self.inv(&Scalar::Fp(d))?;
                Ok(self.mul(&Scalar::Fp(n), &dinv))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(x * y % p),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (FieldSpec::Prime(p), Scalar::Fp(x)) => Ok(Scalar::Fp(pow_mod(*x, p - 2, *p))),
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `(-1)^k` as a scalar.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.neg(&self.one())
        }
    }

    /// Parse a scalar from `n` or `n/d` decimal notation, exactly.
    pub fn scalar_from_str(&self, s: &str) -> Result<Scalar> {
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Unsupported(format!("bad scalar literal `{s}`")))
        };
        match s.split_once('/') {
            Some((n, d)) => self.from_ratio(&parse_int(n)?, &parse_int(d)?),
            None => self.from_ratio(&parse_int(s)?, &BigInt::one()),
        }
    }

    /// Uniform random nonzero-biased sample; over `Q` a small integer, so the
    /// randomized searches stay cheap and reproducible in print-outs.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Scalar {
        match self {
            FieldSpec::Rationals => self.from_i64(rng.random_range(-9..=9)),
            FieldSpec::Prime(p) => Scalar::Fp(rng.random_range(0..*p)),
        }
    }

    /// True when the scalar belongs to this field (and, for `F_p`, is reduced).
    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(_)) => true,
            (FieldSpec::Prime(p), Scalar::Fp(x)) => x < p,
            _ => false,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}
