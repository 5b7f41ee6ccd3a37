//! Exact coefficient fields for pencils: ℚ and GF(p).

use crate::poly::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("bad field descriptor {0:?} (expected \"Q\" or \"Fp:<prime>\")")]
    BadDescriptor(String),
    #[error("bad field element {0:?}")]
    BadElement(String),
}

/// A field object; elements are plain values manipulated through it.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    fn descriptor(&self) -> String;
    /// All elements, for small finite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn parse(&self, s: &str) -> Result<Rational, FieldError> {
        parse_rational(s).ok_or_else(|| FieldError::BadElement(s.to_string()))
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn descriptor(&self) -> String {
        "Q".into()
    }
    fn elements(&self) -> Option<Vec<Rational>> {
        None
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let d = t.strip_prefix('-').unwrap_or(t);
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) || den.starts_with('-') {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// GF(p) for a prime p < 2¹⁶ (small enough to enumerate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Option<PrimeField> {
        (p < (1 << 16) && is_prime(p)).then_some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat
        let (mut base, mut e, mut acc) = (*a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let q = parse_rational(s).ok_or_else(|| FieldError::BadElement(s.to_string()))?;
        let p = BigInt::from(self.p);
        let red = |n: &BigInt| -> u64 {
            let r = ((n % &p) + &p) % &p;
            u64::try_from(r).expect("reduced below p")
        };
        let den = red(q.denom());
        let inv = self
            .inv(&den)
            .ok_or_else(|| FieldError::BadElement(format!("{s} (denominator vanishes mod {})", self.p)))?;
        let num = if q.numer().is_negative() {
            self.neg(&red(&-q.numer()))
        } else {
            red(q.numer())
        };
        Ok(self.mul(&num, &inv))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn descriptor(&self) -> String {
        format!("Fp:{}", self.p)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
}

/// Row rank by Gaussian elimination.
pub fn rank<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = k.inv(&a[r][c]).unwrap();
        for j in c..cols {
            a[r][j] = k.mul(&a[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = k.mul(&f, &a[r][j]);
                    a[i][j] = k.sub(&a[i][j], &v);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Determinant by Gaussian elimination (square input).
pub fn det<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(&a[i][c])) else {
            return k.zero();
        };
        if p != c {
            a.swap(p, c);
            acc = k.neg(&acc);
        }
        acc = k.mul(&acc, &a[c][c]);
        let inv = k.inv(&a[c][c]).unwrap();
        for i in c + 1..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            for j in c..n {
                let v = k.mul(&f, &a[c][j]);
                a[i][j] = k.sub(&a[i][j], &v);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arith() {
        let k = PrimeField::new(101).unwrap();
        assert!(PrimeField::new(100).is_none());
        for a in 1..101 {
            assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), 1);
        }
        assert_eq!(k.parse("-1").unwrap(), 100);
        assert_eq!(k.parse("1/2").unwrap(), 51);
        assert!(k.parse("1/101").is_err());
        assert!(k.parse("abc").is_err());
    }

    #[test]
    fn rank_and_det() {
        let k = Rationals;
        let q = |v: i64| k.from_i64(v);
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(rank(&k, &m), 1);
        assert_eq!(det(&k, &m), q(0));
        let m = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(det(&k, &m), q(-1));
        assert_eq!(parse_rational(" -3/6 "), Some(Rational::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/-2"), None);
    }
}
