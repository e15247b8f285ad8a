//! Exact field elements over Q or a prime field F_p.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, Error> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp { v: n.rem_euclid(p as i64) as u64, p },
        }
    }

    pub fn frac(self, num: i64, den: i64) -> Result<Scalar, Error> {
        let d = self.int(den);
        let inv = d.inv().ok_or_else(|| Error::Field(format!("denominator {den} vanishes")))?;
        Ok(self.int(num) * inv)
    }

    /// Parses `a`, `-a` or `a/b`; prime-field inputs are reduced mod p.
    pub fn parse(self, s: &str) -> Result<Scalar, Error> {
        let bad = || Error::Field(format!("malformed scalar '{s}'"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        match self {
            Field::Rationals => Ok(Scalar::Q(BigRational::new(n, d))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let nr = n.mod_floor(&pb).to_u64().unwrap();
                let dr = d.mod_floor(&pb).to_u64().unwrap();
                let den = Scalar::Fp { v: dr, p };
                let inv = den
                    .inv()
                    .ok_or_else(|| Error::Field(format!("denominator of '{s}' vanishes mod {p}")))?;
                Ok(Scalar::Fp { v: nr, p } * inv)
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    /// All elements z with z^n = 1 and no smaller positive power equal to 1.
    pub fn primitive_roots_of_unity(self, n: u64) -> Vec<Scalar> {
        match self {
            Field::Rationals => match n {
                1 => vec![self.one()],
                2 => vec![self.int(-1)],
                _ => vec![],
            },
            Field::Prime(p) => (1..p)
                .map(|v| Scalar::Fp { v, p })
                .filter(|z| multiplicative_order(z, n) == Some(n))
                .collect(),
        }
    }
}

fn multiplicative_order(z: &Scalar, bound: u64) -> Option<u64> {
    let one = z.field().one();
    let mut acc = z.clone();
    for k in 1..=bound {
        if acc == one {
            return Some(k);
        }
        acc = &acc * z;
    }
    None
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Rationals are kept reduced with positive denominator, residues in [0, p).
/// Mixing fields in one operation is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: (a + b) % p, p: *p }
            }
            _ => mismatch(self, o),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: (a + p - b) % p, p: *p }
            }
            _ => mismatch(self, o),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => {
                if a.is_zero() || b.is_zero() {
                    return Scalar::Q(BigRational::zero());
                }
                Scalar::Q(a * b)
            }
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => {
                Scalar::Fp { v: a * b % p, p: *p }
            }
            _ => mismatch(self, o),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        match (&mut *self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => *a = (*a + b) % *p,
            _ => mismatch(self, o),
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self += &(-o);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// Sign of a rational, used only for deterministic display choices.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Q(r) if r.is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce() {
        let q = Field::Rationals;
        let a = q.parse("2/4").unwrap();
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(q.parse("3/-6").unwrap().to_string(), "-1/2");
        assert_eq!((&a + &a).to_string(), "1");
    }

    #[test]
    fn prime_field_residues() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.int(-1).to_string(), "6");
        assert_eq!(f.parse("1/2").unwrap().to_string(), "4");
        assert!(f.parse("1/7").is_err());
        assert_eq!((f.int(3) * f.int(5)).to_string(), "1");
    }

    #[test]
    fn roots_of_unity() {
        assert!(Field::Rationals.primitive_roots_of_unity(3).is_empty());
        let f7 = Field::prime(7).unwrap();
        let r: Vec<String> = f7.primitive_roots_of_unity(3).iter().map(|s| s.to_string()).collect();
        assert_eq!(r, vec!["2", "4"]);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.primitive_roots_of_unity(4).len(), 2);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(Field::prime(9).is_err());
    }
}
