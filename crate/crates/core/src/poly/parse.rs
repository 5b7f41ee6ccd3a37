use super::{Monomial, Poly, Rational, Var};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad polynomial at byte {pos}: {msg}")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn digits(&mut self) -> Result<BigInt, ParsePolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        // all ASCII digits, so this cannot fail
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32, ParsePolyError> {
        let at = self.pos;
        let e = self.digits()?;
        u32::try_from(e).map_err(|_| ParsePolyError {
            pos: at,
            msg: "exponent too large".into(),
        })
    }

    /// factor := integer ['/' integer] | var ['^' integer]
    fn factor(&mut self, coef: &mut Rational, mono: &mut Monomial) -> Result<(), ParsePolyError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let num = self.digits()?;
                let den = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.digits()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    BigInt::one()
                };
                *coef *= Rational::new(num, den);
                Ok(())
            }
            Some(c) => {
                let v = match c {
                    b'x' => Var::X,
                    b'y' => Var::Y,
                    b'l' => Var::L,
                    b't' => Var::T,
                    _ => return self.err(format!("unexpected '{}'", c as char)),
                };
                self.pos += 1;
                let e = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                let slot = &mut mono.0[v as usize];
                *slot = slot.checked_add(e).ok_or(ParsePolyError {
                    pos: self.pos,
                    msg: "exponent overflow".into(),
                })?;
                Ok(())
            }
            None => self.err("unexpected end of input"),
        }
    }
}

pub(super) fn parse_poly(s: &str) -> Result<Poly, ParsePolyError> {
    let mut lx = Lexer {
        src: s.as_bytes(),
        pos: 0,
    };
    if lx.peek().is_none() {
        return lx.err("empty polynomial");
    }
    let mut out = Poly::zero();
    let mut first = true;
    while lx.peek().is_some() {
        let mut coef = Rational::one();
        match lx.peek() {
            Some(b'+') => lx.pos += 1,
            Some(b'-') => {
                lx.pos += 1;
                coef = -coef;
            }
            _ if first => {}
            _ => return lx.err("expected '+' or '-'"),
        }
        first = false;
        let mut mono = Monomial::ONE;
        lx.factor(&mut coef, &mut mono)?;
        while lx.peek() == Some(b'*') {
            lx.pos += 1;
            lx.factor(&mut coef, &mut mono)?;
        }
        out.add_term(mono, coef);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_grammar() {
        let p: Poly = " 3/4 * x^2*y - l + t^3 ".parse().unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!("0".parse::<Poly>().unwrap(), Poly::zero());
        assert_eq!("x*x".parse::<Poly>().unwrap(), "x^2".parse().unwrap());
        assert_eq!("-x + x".parse::<Poly>().unwrap(), Poly::zero());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x +", "x^", "1/0", "x y", "z", "x^99999999999", "--x", "*x"] {
            assert!(bad.parse::<Poly>().is_err(), "{bad:?}");
        }
    }
}
