//! Sparse multivariate polynomials over ℚ in `x`, `y`, `l` (λ) and the
//! branch parameter `t`.

mod matrix;
mod parse;
pub mod uni;

pub use matrix::PolyMatrix;
pub use parse::ParsePolyError;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisorZero,
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    L,
    T,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::L, Var::T];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::L => "l",
            Var::T => "t",
        }
    }
}

/// Exponent vector indexed by [`Var`]. Ordered graded-lex with x > y > λ > t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = [0; 4];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = other.0;
        for (a, b) in m.iter_mut().zip(self.0) {
            *a -= b;
        }
        Monomial(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(v.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial in canonical form: no zero coefficients are ever stored, so
/// equal polynomials have identical term maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::ONE)
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn x() -> Poly {
        Poly::var(Var::X)
    }
    pub fn y() -> Poly {
        Poly::var(Var::Y)
    }
    pub fn l() -> Poly {
        Poly::var(Var::L)
    }
    pub fn t() -> Poly {
        Poly::var(Var::T)
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::ONE).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Value at x = y = 0 (λ and t kept); zero iff the polynomial lies in (x, y).
    pub fn at_origin(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(Var::X) == 0 && m.exp(Var::Y) == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / d`, by the division algorithm against the
    /// leading term of `d`. If `d` divides `self` every step must succeed,
    /// so the first leading-term mismatch proves non-divisibility.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly, PolyError> {
        let (dm, dc) = d.leading().ok_or(PolyError::DivisorZero)?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if !dm.divides(m) {
                return Err(PolyError::NotDivisible);
            }
            let qm = dm.quotient_of(m);
            let qc = c / &dc;
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Simultaneous substitution; variables without a binding stay put.
    pub fn substitute(&self, bindings: &[(Var, Poly)]) -> Poly {
        let mut image: [Option<&Poly>; 4] = [None; 4];
        for (v, p) in bindings {
            image[v.index()] = Some(p);
        }
        let mut powers: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::ONE;
            let mut acc = Poly::one();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                match image[v.index()] {
                    None => kept.0[v.index()] = e,
                    Some(p) => {
                        let pw = powers
                            .entry((v.index(), e))
                            .or_insert_with(|| p.pow(e));
                        acc = &acc * &*pw;
                    }
                }
            }
            out = &out + &acc.mul_term(&kept, c);
        }
        out
    }

    /// Multiply through by a positive rational so that all coefficients are
    /// coprime integers with positive leading coefficient. Used for
    /// sign/scale-insensitive comparisons.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        let Some((_, lc)) = self.leading() else {
            return Poly::zero();
        };
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut s = Rational::new(den, num);
        if lc.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Poly {
        Poly::int(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Poly {
    type Err = ParsePolyError;
    fn from_str(s: &str) -> Result<Poly, ParsePolyError> {
        parse::parse_poly(s)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn identities() {
        let a = p("x^2 - 3/2*x*y + l");
        assert_eq!(&a + &Poly::zero(), a);
        assert_eq!(&a * &Poly::one(), a);
        assert_eq!(p("x - y^2") + p("y^2"), Poly::x());
    }

    #[test]
    fn z_plus_zprime() {
        // hand expansion: (x - y^2) + (x - l y^2) = 2x - y^2 - l y^2
        let sum = p("x - y^2") + p("x - l*y^2");
        let expect = Poly::from_terms([
            (Monomial::var(Var::X, 1), Rational::from_integer(2.into())),
            (Monomial::var(Var::Y, 2), Rational::from_integer((-1).into())),
            (
                Monomial([0, 2, 1, 0]),
                Rational::from_integer((-1).into()),
            ),
        ]);
        assert_eq!(sum, expect);
    }

    #[test]
    fn product_f() {
        let f = p("x") * p("x - y^2") * p("x - l*y^2");
        // x^3 - (1+l) x^2 y^2 + l x y^4
        let expect = p("x^3 - x^2*y^2 - x^2*y^2*l + x*y^4*l");
        assert_eq!(f, expect);
        let at1 = (p("x - y^2") * p("x - l*y^2")).substitute(&[(Var::L, Poly::one())]);
        assert_eq!(at1, p("x - y^2").pow(2));
    }

    #[test]
    fn division() {
        let z = p("x - y^2");
        let zp = p("x - l*y^2");
        let f = &(&Poly::x() * &z) * &zp;
        assert_eq!((p("x^2") * &z).exact_div(&Poly::x()).unwrap(), &Poly::x() * &z);
        assert_eq!(f.exact_div(&zp).unwrap(), &Poly::x() * &z);
        let big = Poly::x().pow(5) * z.pow(3) * zp.pow(3);
        assert_eq!(
            big.exact_div(&f).unwrap(),
            Poly::x().pow(4) * z.pow(2) * zp.pow(2)
        );
        assert_eq!(Poly::x().exact_div(&Poly::zero()), Err(PolyError::DivisorZero));
        assert_eq!(p("x + 1").exact_div(&Poly::y()), Err(PolyError::NotDivisible));
        assert_eq!(p("x^2 + y").exact_div(&Poly::x()), Err(PolyError::NotDivisible));
    }

    #[test]
    fn branches_kill_factors() {
        let f = p("x^3 - x^2*y^2 - x^2*y^2*l + x*y^4*l");
        let t = Poly::t();
        assert!(f
            .substitute(&[(Var::X, Poly::zero()), (Var::Y, t.clone())])
            .is_zero());
        assert!(p("x - y^2")
            .substitute(&[(Var::X, t.pow(2)), (Var::Y, t.clone())])
            .is_zero());
        assert!(p("x - l*y^2")
            .substitute(&[(Var::X, &Poly::l() * &t.pow(2)), (Var::Y, t.clone())])
            .is_zero());
    }

    #[test]
    fn printing_is_graded_lex() {
        let f = p("x^3 - x^2*y^2 - x^2*y^2*l + x*y^4*l");
        assert_eq!(f.to_string(), "x*y^4*l - x^2*y^2*l - x^2*y^2 + x^3");
        assert_eq!(p("-1/2 + 3*t").to_string(), "3*t - 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-x").to_string(), "-x");
    }

    #[test]
    fn primitive_normalizes_sign_and_scale() {
        assert_eq!(p("-2/3*x + 4/3*y").primitive(), p("x - 2*y"));
        assert_eq!(p("x*y").primitive(), p("x*y"));
    }
}
