//! The curve F = x·z·z′ with z = x − y², z′ = x − λy², its three branches,
//! and the four stripe modules R₁, R₂, R′₁₂, R₁₂.

use crate::poly::{Poly, PolyMatrix, Rational, Var};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("λ must avoid 0 and 1, got {0}")]
    BadLambda(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LambdaMode {
    Symbolic,
    Rational(Rational),
}

impl fmt::Display for LambdaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaMode::Symbolic => f.write_str("symbolic"),
            LambdaMode::Rational(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveData {
    pub f: Poly,
    pub z: Poly,
    pub zp: Poly,
    pub mode: LambdaMode,
    /// μ = (1 − λ)/λ kept as a formal (numerator, denominator) pair.
    pub mu: (Poly, Poly),
}

pub fn make_curve(mode: LambdaMode) -> Result<CurveData, CurveError> {
    if let LambdaMode::Rational(q) = &mode {
        if q.is_zero() || q.is_one() {
            return Err(CurveError::BadLambda(q.clone()));
        }
    }
    let lambda = match &mode {
        LambdaMode::Symbolic => Poly::l(),
        LambdaMode::Rational(q) => Poly::constant(q.clone()),
    };
    let x = Poly::x();
    let y2 = Poly::y().pow(2);
    let z = &x - &y2;
    let zp = &x - &(&lambda * &y2);
    let f = &(&x * &z) * &zp;
    let mu = (&Poly::one() - &lambda, lambda);
    Ok(CurveData { f, z, zp, mode, mu })
}

impl CurveData {
    pub fn symbolic() -> CurveData {
        make_curve(LambdaMode::Symbolic).expect("symbolic mode is always valid")
    }

    pub fn rational(q: Rational) -> Result<CurveData, CurveError> {
        make_curve(LambdaMode::Rational(q))
    }

    /// λ as a polynomial: the variable `l`, or the chosen constant.
    pub fn lambda(&self) -> Poly {
        self.mu.1.clone()
    }

    pub fn xz(&self) -> Poly {
        &Poly::x() * &self.z
    }

    pub fn xzp(&self) -> Poly {
        &Poly::x() * &self.zp
    }

    pub fn zzp(&self) -> Poly {
        &self.z * &self.zp
    }

    /// Branches on which λ is instantiated by `lambda0` when symbolic.
    pub fn branches(&self, lambda0: &Rational) -> [Branch; 3] {
        let t = Poly::t();
        let lam = match self.mode {
            LambdaMode::Symbolic => Poly::constant(lambda0.clone()),
            LambdaMode::Rational(_) => self.lambda(),
        };
        [
            Branch {
                index: 1,
                x_image: Poly::zero(),
                y_image: t.clone(),
                lambda: lam.clone(),
            },
            Branch {
                index: 2,
                x_image: t.pow(2),
                y_image: t.clone(),
                lambda: lam.clone(),
            },
            Branch {
                index: 3,
                x_image: &lam * &t.pow(2),
                y_image: t,
                lambda: lam,
            },
        ]
    }

    /// Branches with λ left symbolic (branch 3 then maps x to l·t²).
    pub fn symbolic_branches(&self) -> [Branch; 3] {
        let t = Poly::t();
        let lam = self.lambda();
        [
            Branch { index: 1, x_image: Poly::zero(), y_image: t.clone(), lambda: lam.clone() },
            Branch { index: 2, x_image: t.pow(2), y_image: t.clone(), lambda: lam.clone() },
            Branch { index: 3, x_image: &lam * &t.pow(2), y_image: t, lambda: lam },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub index: u8,
    pub x_image: Poly,
    pub y_image: Poly,
    /// value substituted for `l`, if it still occurs
    pub lambda: Poly,
}

impl Branch {
    pub fn eval(&self, p: &Poly) -> Poly {
        p.substitute(&self.bindings())
    }

    fn bindings(&self) -> [(Var, Poly); 3] {
        [
            (Var::X, self.x_image.clone()),
            (Var::Y, self.y_image.clone()),
            (Var::L, self.lambda.clone()),
        ]
    }
}

/// Entrywise substitution of the branch parametrization.
pub fn branch_eval(m: &PolyMatrix, b: &Branch) -> PolyMatrix {
    m.substitute(&b.bindings())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum StripeKind {
    R1,
    R2,
    R12Prime,
    R12,
}

impl StripeKind {
    pub const ALL: [StripeKind; 4] = [
        StripeKind::R1,
        StripeKind::R2,
        StripeKind::R12Prime,
        StripeKind::R12,
    ];

    pub fn annihilator(self, curve: &CurveData) -> Poly {
        match self {
            StripeKind::R1 => Poly::x(),
            StripeKind::R2 => curve.z.clone(),
            StripeKind::R12Prime | StripeKind::R12 => curve.xz(),
        }
    }

    /// R′₁₂ carries a second generator ū = t₁·u, killed by x.
    pub fn has_companion(self) -> bool {
        self == StripeKind::R12Prime
    }

    pub fn ext_basis(self) -> Vec<ExtSymbol> {
        use ExtElem::*;
        let elems: &[ExtElem] = match self {
            StripeKind::R1 | StripeKind::R2 => &[One, T],
            StripeKind::R12Prime => &[One, T1, T2, T1Sq],
            StripeKind::R12 => &[One, T12, T1Sq, T1Cube],
        };
        elems.iter().map(|&elem| ExtSymbol { stripe: self, elem }).collect()
    }

    pub fn label(self) -> &'static str {
        match self {
            StripeKind::R1 => "R1",
            StripeKind::R2 => "R2",
            StripeKind::R12Prime => "R12'",
            StripeKind::R12 => "R12",
        }
    }
}

impl fmt::Display for StripeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtElem {
    One,
    /// the uniformizer of R₁ or R₂
    T,
    T1,
    T2,
    T12,
    T1Sq,
    T1Cube,
}

/// Basis element of Ext¹(R₃, N) for one stripe module N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtSymbol {
    pub stripe: StripeKind,
    pub elem: ExtElem,
}

impl ExtSymbol {
    pub fn new(stripe: StripeKind, elem: ExtElem) -> Option<ExtSymbol> {
        let s = ExtSymbol { stripe, elem };
        stripe.ext_basis().contains(&s).then_some(s)
    }

    /// Image under the fixed maps between stripes: restriction
    /// R₁₂ → Rᵢ (1₁₂ ↦ 1ᵢ, t₁₂ ↦ tᵢ), multiplication by tᵢ: Rᵢ → R′₁₂
    /// (1ᵢ ↦ tᵢ), and multiplication by t₁₂: R′₁₂ → R₁₂ (1₁₂ ↦ t₁₂).
    /// Nothing else is defined.
    pub fn induced(self, to: StripeKind) -> Option<ExtSymbol> {
        use ExtElem::*;
        use StripeKind::*;
        let elem = match (self.stripe, self.elem, to) {
            (R12, One, R1 | R2) => One,
            (R12, T12, R1 | R2) => T,
            (R1, One, R12Prime) => T1,
            (R2, One, R12Prime) => T2,
            (R12Prime, One, R12) => T12,
            _ => return None,
        };
        Some(ExtSymbol { stripe: to, elem })
    }

    /// The single rewrite t₁² = μ·t₂²; returns μ as (numerator, denominator).
    /// No stripe basis holds t₂², so the rule is bookkeeping only.
    pub fn t1_squared_rule(curve: &CurveData) -> (Poly, Poly) {
        curve.mu.clone()
    }
}

impl fmt::Display for ExtSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExtElem::*;
        use StripeKind::*;
        let s = match (self.stripe, self.elem) {
            (R1, One) => "1_1",
            (R1, T) => "t*1_1",
            (R2, One) => "1_2",
            (R2, T) => "t_2",
            (_, One) => "1_12",
            (_, T1) => "t_1",
            (_, T2) => "t_2",
            (_, T12) => "t_12",
            (_, T1Sq) => "t_1^2",
            (_, T1Cube) => "t_1^3",
            (_, T) => "t",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn curve_equations() {
        let c = CurveData::symbolic();
        assert_eq!(c.f, "x^3 - x^2*y^2 - l*x^2*y^2 + l*x*y^4".parse().unwrap());
        let c2 = CurveData::rational(q(2)).unwrap();
        assert_eq!(c2.zp, "x - 2*y^2".parse().unwrap());
        assert_eq!(CurveData::rational(q(1)), Err(CurveError::BadLambda(q(1))));
        assert!(CurveData::rational(q(0)).is_err());
    }

    #[test]
    fn each_branch_kills_one_factor() {
        let c = CurveData::symbolic();
        for b in c.symbolic_branches() {
            assert!(b.eval(&c.f).is_zero());
            let dead = [Poly::x(), c.z.clone(), c.zp.clone()]
                .iter()
                .filter(|p| b.eval(p).is_zero())
                .count();
            assert_eq!(dead, 1, "branch {}", b.index);
        }
    }

    #[test]
    fn annihilators_divide_f() {
        let c = CurveData::symbolic();
        for s in StripeKind::ALL {
            assert!(c.f.exact_div(&s.annihilator(&c)).is_ok());
        }
        assert_eq!(c.f.exact_div(&c.xz()).unwrap(), c.zp);
    }

    #[test]
    fn ext_table() {
        let names = |s: StripeKind| {
            s.ext_basis().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
        };
        assert_eq!(names(StripeKind::R1), "1_1 t*1_1");
        assert_eq!(names(StripeKind::R2), "1_2 t_2");
        assert_eq!(names(StripeKind::R12Prime), "1_12 t_1 t_2 t_1^2");
        assert_eq!(names(StripeKind::R12), "1_12 t_12 t_1^2 t_1^3");
        let one12 = ExtSymbol::new(StripeKind::R12, ExtElem::One).unwrap();
        assert_eq!(
            one12.induced(StripeKind::R1),
            ExtSymbol::new(StripeKind::R1, ExtElem::One)
        );
        assert!(ExtSymbol::new(StripeKind::R1, ExtElem::T12).is_none());
    }
}
