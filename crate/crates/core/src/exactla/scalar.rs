use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field of a computation: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        let d = self
            .from_i64(den)
            .inv()
            .ok_or_else(|| Error::Parse(format!("{den} is not invertible in {self}")))?;
        Ok(self.from_i64(num) * d)
    }

    /// Parses `"3/2"`, `"-1"` or `"1 mod 2"`. Plain integers and fractions
    /// are reduced into a prime field; a `mod p` suffix must match the field.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        if let Some((lhs, rhs)) = text.split_once("mod") {
            let p: u64 = rhs
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {text:?}")))?;
            return match self {
                Field::Prime(q) if q == p => {
                    let v: i64 = lhs
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad residue in {text:?}")))?;
                    Ok(self.from_i64(v))
                }
                _ => Err(Error::MixedScalars {
                    expected: self,
                    found: format!("{text:?}"),
                }),
            };
        }
        match self {
            Field::Rational => text
                .parse::<BigRational>()
                .map(Scalar::Rational)
                .map_err(|_| Error::Parse(format!("bad rational {text:?}"))),
            Field::Prime(_) => {
                let (n, d) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let n: i64 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in {text:?}")))?;
                let d: i64 = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in {text:?}")))?;
                self.from_ratio(n, d)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    /// `"Q"`, or a prime field as `"F_p"`, `"Fp"` or `"GF(p)"`.
    fn from_str(text: &str) -> Result<Field> {
        let t = text.trim();
        if matches!(t, "Q" | "QQ" | "rational") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix("F_")
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::Parse(format!("unknown field {t:?}; expected Q or F_p")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad characteristic in {t:?}")))?;
        Field::prime(p)
    }
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator (guaranteed by `BigRational`); residues lie in `0..p`.
///
/// Arithmetic between elements of different fields panics: the matrix
/// constructors reject mixed input before it can reach the kernels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: u64 },
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed scalar kinds: {} and {}", a.field(), b.field())
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let p = p as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u64
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        self.field() == other.field()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl Scalar {
    /// `true` when the rational is negative; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let q = Field::Rational;
        assert_eq!(q.parse_scalar("3/2").unwrap().to_string(), "3/2");
        assert_eq!(q.parse_scalar("-4/2").unwrap().to_string(), "-2");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse_scalar("7").unwrap(), f5.from_i64(2));
        assert_eq!(f5.parse_scalar("1 mod 5").unwrap(), f5.one());
        assert_eq!(f5.parse_scalar("1/2").unwrap(), f5.from_i64(3));
        assert!(q.parse_scalar("1 mod 2").is_err());
        assert!(f5.parse_scalar("1 mod 3").is_err());
    }

    #[test]
    fn field_names() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("F_2".parse::<Field>().unwrap(), Field::Prime(2));
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("F_6".parse::<Field>().is_err());
        assert!("R".parse::<Field>().is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(7).is_ok());
    }

    #[test]
    fn inverses() {
        let f7 = Field::prime(7).unwrap();
        for n in 1..7 {
            let x = f7.from_i64(n);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
        assert!(f7.zero().inv().is_none());
        let h = Field::Rational.parse_scalar("-3/7").unwrap();
        assert!((&h * &h.inv().unwrap()).is_one());
    }

    #[test]
    #[should_panic(expected = "mixed scalar kinds")]
    fn mixed_arithmetic_panics() {
        let _ = Field::Rational.one() + Field::Prime(2).one();
    }
}
