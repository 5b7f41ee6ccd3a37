//! Dense univariate polynomials over ℚ in the branch parameter `t`.

use super::{Monomial, Poly, Rational, Var};
use num_traits::{One, Zero};
use std::fmt;

/// Coefficients from degree 0 upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![Rational::one()])
    }

    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn monomial(c: Rational, e: usize) -> Self {
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.0.last()
    }

    /// t-adic valuation; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn from_poly(p: &Poly) -> Option<Self> {
        let mut v = Vec::new();
        for (m, c) in p.terms() {
            if m.exp(Var::X) + m.exp(Var::Y) + m.exp(Var::L) > 0 {
                return None;
            }
            let e = m.exp(Var::T) as usize;
            if v.len() <= e {
                v.resize(e + 1, Rational::zero());
            }
            v[e] = c.clone();
        }
        Some(Self::new(v))
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            self.0
                .iter()
                .enumerate()
                .map(|(e, c)| (Monomial::var(Var::T, e as u32), c.clone())),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default() + o.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.lc().expect("division by zero polynomial").clone();
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.divrem(self).1.is_zero()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = u(&[0, 0, 1, 1]); // t^2 + t^3
        let b = u(&[0, 2]); // 2t
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&b), a);
        assert_eq!(UniPoly::gcd(&a, &b), u(&[0, 1]));
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(UniPoly::gcd(&UniPoly::zero(), &UniPoly::zero()), UniPoly::zero());
    }

    #[test]
    fn poly_round_trip() {
        let p: Poly = "3*t^4 - 1/2*t + 7".parse().unwrap();
        assert_eq!(UniPoly::from_poly(&p).unwrap().to_poly(), p);
        assert!(UniPoly::from_poly(&"x*t".parse().unwrap()).is_none());
    }
}
