//! Text form of polynomials.
//!
//! ```text
//! poly   := sign? term (sign term)*
//! term   := factor ('*'? factor)*        -- '*' may be omitted after a number
//! factor := int ('/' int)? | var ('^' int)?
//! ```
//!
//! Whitespace between tokens is ignored. Printing is the inverse of parsing:
//! terms come out in the forward degree order, so the printed form of a
//! polynomial is canonical.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Exponent, LocalOrder, Poly, TieBreak};
use crate::{Error, Result};

/// Variable names of a polynomial ring, `x1..xn` by default.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn standard(n: usize) -> Self {
        Vars {
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidArgument(format!(
                    "invalid variable name {name:?}"
                )));
            }
            if out.iter().any(|n| n == name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate variable name {name:?}"
                )));
            }
            out.push(name.to_owned());
        }
        if out.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one variable is required".into(),
            ));
        }
        Ok(Vars { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parse(&self, input: &str) -> Result<Poly> {
        Parser {
            vars: self,
            src: input.as_bytes(),
            pos: 0,
        }
        .poly()
    }

    pub fn display<'a>(&'a self, poly: &'a Poly) -> DisplayPoly<'a> {
        DisplayPoly { vars: self, poly }
    }

    pub fn format(&self, poly: &Poly) -> String {
        self.display(poly).to_string()
    }
}

struct Parser<'a> {
    vars: &'a Vars,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        let mut out = Poly::zero(n);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.err("empty polynomial"),
            _ => false,
        };
        loop {
            let (e, c) = self.term()?;
            out.add_term(e, if negate { -c } else { c });
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(c) => return self.err(format!("unexpected character {:?}", c as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Exponent, BigRational)> {
        let n = self.vars.len();
        let mut exp = vec![0u32; n];
        let mut coeff = BigRational::one();
        loop {
            let after_number = match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.number()?;
                    true
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (i, k) = self.power()?;
                    exp[i] = exp[i].checked_add(k).ok_or_else(|| Error::Parse {
                        column: self.pos,
                        message: "exponent overflow".into(),
                    })?;
                    false
                }
                Some(c) => {
                    return self.err(format!(
                        "expected a number or a variable, found {:?}",
                        c as char
                    ))
                }
                None => return self.err("expected a number or a variable, found end of input"),
            };
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if after_number && c.is_ascii_alphabetic() => {}
                _ => return Ok((Exponent::from(exp), coeff)),
            }
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn number(&mut self) -> Result<BigRational> {
        let num = self.digits()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.digits()?;
            if den.is_zero() {
                self.pos -= 1;
                return self.err("zero denominator");
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn power(&mut self) -> Result<(usize, u32)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let Some(i) = self.vars.names.iter().position(|v| v == name) else {
            self.pos = start;
            return self.err(format!("unknown variable {name:?}"));
        };
        if self.peek() != Some(b'^') {
            return Ok((i, 1));
        }
        self.pos += 1;
        let k = self.digits()?;
        match u32::try_from(k) {
            Ok(k) => Ok((i, k)),
            Err(_) => self.err("exponent too large"),
        }
    }
}

pub struct DisplayPoly<'a> {
    vars: &'a Vars,
    poly: &'a Poly,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let order = LocalOrder::degree(self.poly.nvars(), TieBreak::Forward);
        let mut terms: Vec<_> = self.poly.terms().collect();
        terms.sort_by(|a, b| order.cmp(a.0, b.0));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut wrote = false;
            if e.is_zero() || !abs.is_one() {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (i, &k) in e.entries().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars.names[i])?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Vars::standard(self.nvars()).display(self).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_example() {
        let v = Vars::standard(2);
        let f = v.parse("x1^2 - 3/2*x1*x2 + x2^3").unwrap();
        assert_eq!(f.len(), 3);
        // (1,1) precedes (2,0) in the forward degree order
        assert_eq!(v.format(&f), "-3/2*x1*x2 + x1^2 + x2^3");
        assert_eq!(v.parse(&v.format(&f)).unwrap(), f);
    }

    #[test]
    fn whitespace_and_optional_star() {
        let v = Vars::standard(2);
        assert_eq!(
            v.parse(" 3 x1 ^ 2 *x2 ").unwrap(),
            v.parse("3*x1^2*x2").unwrap()
        );
        assert_eq!(v.parse("-x1+x1").unwrap(), Poly::zero(2));
        assert_eq!(v.parse("0").unwrap(), Poly::zero(2));
        assert_eq!(v.format(&v.parse("-1/2").unwrap()), "-1/2");
    }

    #[test]
    fn custom_names() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let f = v.parse("x^2 - y^3").unwrap();
        assert_eq!(v.format(&f), "x^2 - y^3");
        assert_eq!(f, Vars::standard(2).parse("x1^2 - x2^3").unwrap());
    }

    #[test]
    fn errors_carry_columns() {
        let v = Vars::standard(2);
        assert!(matches!(
            v.parse("x1^"),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(matches!(
            v.parse("x1 + x3"),
            Err(Error::Parse { column: 6, .. })
        ));
        assert!(matches!(v.parse(""), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(
            v.parse("x1 x2"),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(v.parse("1/0").is_err());
        assert!(v.parse("x1 +").is_err());
    }

    #[test]
    fn bad_variable_lists() {
        assert!(Vars::new(&["x", "x"]).is_err());
        assert!(Vars::new(&["1x"]).is_err());
        assert!(Vars::new::<&str>(&[]).is_err());
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in crate::poly::tests::poly_strategy(3, 4, 6), den in 1i64..7) {
            let f = f.scale(&BigRational::new(1.into(), den.into()));
            let v = Vars::standard(3);
            prop_assert_eq!(v.parse(&v.format(&f)).unwrap(), f);
        }
    }
}
