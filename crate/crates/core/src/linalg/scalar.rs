use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals or a prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// `F_p`, rejecting composite moduli. The modulus must fit in 32 bits so
    /// products of residues never overflow.
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Field::Rational)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den`; over `F_p` the denominator is inverted modulo `p`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        match *self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num.into(), den.into()))),
            Field::Prime(_) => {
                let d = self.from_i64(den);
                let inv = d
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("{den} is not invertible in {self}")))?;
                Ok(&self.from_i64(num) * &inv)
            }
        }
    }

    /// Parses `"7"`, `"-3/4"`, or anything accepted by [`Field::from_ratio`].
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        match *self {
            Field::Rational => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (
                        n.trim().parse::<BigInt>().map_err(|_| bad())?,
                        d.trim().parse::<BigInt>().map_err(|_| bad())?,
                    ),
                    None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
                };
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            Field::Prime(p) => {
                let reduce = |t: &str| -> Result<i64> {
                    let v = t.trim().parse::<BigInt>().map_err(|_| bad())?;
                    let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                    Ok(r.to_i64().expect("residue fits"))
                };
                match s.split_once('/') {
                    Some((n, d)) => self.from_ratio(reduce(n)?, reduce(d)?),
                    None => Ok(self.from_i64(reduce(s)?)),
                }
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rational, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Residue { modulus, .. }) => p == modulus,
            _ => false,
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

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator (guaranteed by `BigRational`); residues live in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Absolute value over Q; `None` over a prime field.
    pub fn abs(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => Some(Scalar::Rational(q.abs())),
            Scalar::Residue { .. } => None,
        }
    }

    /// Sign over Q: -1, 0 or 1.
    pub fn signum(&self) -> Option<i32> {
        match self {
            Scalar::Rational(q) => Some(if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
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

fn residue_pair(a: &Scalar, b: &Scalar) -> (u64, u64, u64) {
    match (a, b) {
        (
            Scalar::Residue { value: x, modulus: p },
            Scalar::Residue { value: y, modulus: q },
        ) if p == q => (*x, *y, *p),
        _ => panic!("scalar arithmetic across fields: {a:?} and {b:?}"),
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Scalar::Rational(a + b);
        }
        let (x, y, p) = residue_pair(self, rhs);
        Scalar::Residue {
            value: (x + y) % p,
            modulus: p,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Scalar::Rational(a - b);
        }
        let (x, y, p) = residue_pair(self, rhs);
        Scalar::Residue {
            value: (x + p - y) % p,
            modulus: p,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, rhs) {
            return Scalar::Rational(a * b);
        }
        let (x, y, p) = residue_pair(self, rhs);
        Scalar::Residue {
            value: x * y % p,
            modulus: p,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting: numeric order on Q, residue
/// order on `F_p`.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue { value: a, .. }, Scalar::Residue { value: b, .. }) => a.cmp(b),
            (Scalar::Rational(_), Scalar::Residue { .. }) => Ordering::Less,
            (Scalar::Residue { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let q = Field::Rational;
        let a = q.from_ratio(2, -4).unwrap();
        assert_eq!(a.to_string(), "-1/2");
        assert_eq!(q.parse("6/-12").unwrap(), a);
        assert_eq!((&a * &q.from_i64(-2)).to_string(), "1");
    }

    #[test]
    fn residues() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!((&three * &three.inv().unwrap()), f.one());
        assert_eq!(f.from_i64(-1).to_string(), "6");
        assert_eq!(f.parse("1/3").unwrap(), f.from_i64(5));
        assert!(Field::prime(6).is_err());
        assert_eq!((&f.from_i64(2) - &f.from_i64(5)).to_string(), "4");
    }
}
