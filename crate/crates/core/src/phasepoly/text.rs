//! Canonical text form and its parser.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := [sign] term (sign term)*
//! term   := factor ('*' factor)*
//! factor := integer ['/' integer]
//!         | name ['^' ['-'] integer]
//! name   := x | u | y | px | py | k1 | k2 | k3
//! ```
//!
//! Only `u` accepts a negative exponent; `y` is shorthand for `u^3`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{join_signed, power_factor, render_magnitude, Param, ParamPoly, Rational};

use super::{Monomial, PhasePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {reason}")]
pub struct ParseError {
    pub pos: usize,
    pub reason: String,
}

pub(super) fn render(p: &PhasePoly) -> String {
    join_signed(p.terms().rev().flat_map(|(m, c)| {
        let mono = monomial_factors(m);
        c.signed_terms().map(move |(neg, abs, mut factors)| {
            factors.extend(mono.iter().cloned());
            (neg, render_magnitude(&abs, &factors))
        })
    }))
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    if m.ex != 0 {
        out.push(power_factor("x", m.ex as i64));
    }
    if m.eu != 0 {
        out.push(power_factor("u", m.eu as i64));
    }
    if m.epx != 0 {
        out.push(power_factor("px", m.epx as i64));
    }
    if m.epy != 0 {
        out.push(power_factor("py", m.epy as i64));
    }
    out
}

/// Parse an expression in the canonical grammar.
pub fn parse(input: &str) -> Result<PhasePoly, ParseError> {
    Parser { src: input, pos: 0 }.expr()
}

impl FromStr for PhasePoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, pos: usize, reason: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos,
            reason: reason.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !pred(c))
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expr(&mut self) -> Result<PhasePoly, ParseError> {
        let mut out = PhasePoly::zero();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let (c, m) = self.term()?;
            out.add_term(m, if negative { -c } else { c });
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        if let Some(ch) = self.peek() {
            return self.err(self.pos, format!("unexpected character '{ch}'"));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(ParamPoly, Monomial), ParseError> {
        let mut coeff = Rational::one();
        let mut params = [0u32; 3];
        let mut mono = Monomial::ONE;
        loop {
            self.factor(&mut coeff, &mut params, &mut mono)?;
            if !self.eat('*') {
                break;
            }
        }
        Ok((ParamPoly::term(coeff, params), mono))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.err(start, "expected integer");
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn exponent(&mut self, allow_negative: bool, name: &str) -> Result<i64, ParseError> {
        if !self.eat('^') {
            return Ok(1);
        }
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat('-');
        if negative && !allow_negative {
            return self.err(start, format!("negative exponent not allowed on '{name}'"));
        }
        let n = self.integer()?;
        let n: i64 = match i32::try_from(&n) {
            Ok(v) => v as i64,
            Err(_) => return self.err(start, "exponent out of range"),
        };
        Ok(if negative { -n } else { n })
    }

    fn factor(
        &mut self,
        coeff: &mut Rational,
        params: &mut [u32; 3],
        mono: &mut Monomial,
    ) -> Result<(), ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat('/') {
                    let at = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return self.err(at, "zero denominator");
                    }
                    d
                } else {
                    BigInt::one()
                };
                *coeff *= Rational::new(num, den);
                Ok(())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                let e = self.exponent(name == "u", &name)?;
                let add_u = |mono: &mut Monomial, by: i64| -> Result<(), ()> {
                    let v = mono.eu as i64 + by;
                    mono.eu = i32::try_from(v).map_err(|_| ())?;
                    Ok(())
                };
                let unsigned = |v: u32| -> Option<u32> { v.checked_add(e as u32) };
                let ok = match name.as_str() {
                    "x" => unsigned(mono.ex).map(|v| mono.ex = v).is_some(),
                    "px" => unsigned(mono.epx).map(|v| mono.epx = v).is_some(),
                    "py" => unsigned(mono.epy).map(|v| mono.epy = v).is_some(),
                    "u" => add_u(mono, e).is_ok(),
                    "y" => add_u(mono, 3 * e).is_ok(),
                    "k1" | "k2" | "k3" => {
                        let i = match name.as_str() {
                            "k1" => Param::K1,
                            "k2" => Param::K2,
                            _ => Param::K3,
                        }
                        .index();
                        unsigned(params[i]).map(|v| params[i] = v).is_some()
                    }
                    _ => return self.err(start, format!("unknown symbol '{name}'")),
                };
                if !ok {
                    return self.err(start, "exponent out of range");
                }
                Ok(())
            }
            Some(c) => self.err(start, format!("expected factor, found '{c}'")),
            None => self.err(start, "expected factor, found end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_phase_poly;
    use super::*;
    use crate::ring::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(PhasePoly::zero().to_string(), "0");
        assert_eq!(parse("0").unwrap(), PhasePoly::zero());
    }

    #[test]
    fn leading_terms_of_cubic_integral() {
        let p = parse("2*px^3 + 3*px*py^2").unwrap();
        let expected = PhasePoly::px().pow(3).unwrap().scale_int(2)
            + PhasePoly::px() * PhasePoly::py().pow(2).unwrap().scale_int(3);
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "2*px^3 + 3*px*py^2");
    }

    #[test]
    fn render_orders_momentum_first() {
        let p = parse("k3*u^-2 + k2*x*u^-2").unwrap();
        assert_eq!(p.to_string(), "k2*x*u^-2 + k3*u^-2");
        let q = parse("1 - 1/2*px^2 + x*py").unwrap();
        assert_eq!(q.to_string(), "-1/2*px^2 + x*py + 1");
    }

    #[test]
    fn y_is_sugar_for_u_cubed() {
        assert_eq!(parse("y").unwrap(), PhasePoly::u_pow(3));
        assert_eq!(parse("y^2*u^-2").unwrap(), PhasePoly::u_pow(4));
    }

    #[test]
    fn coefficients_combine_within_a_term() {
        assert_eq!(parse("2*3/4*k2*k2").unwrap(), PhasePoly::param(Param::K2).pow(2).unwrap().scale_rational(&rat(3, 2)));
        assert_eq!(parse(" - 5 ").unwrap(), PhasePoly::from_rational(int(-5)));
        assert!(parse("x - x").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse("2*px^3 + z").unwrap_err();
        assert_eq!(e.pos, 9);
        assert!(e.reason.contains("unknown symbol"));

        let e = parse("x^-1").unwrap_err();
        assert_eq!(e.pos, 2);

        let e = parse("1/0*x").unwrap_err();
        assert_eq!(e.pos, 2);

        let e = parse("x +").unwrap_err();
        assert_eq!(e.pos, 3);

        let e = parse("x x").unwrap_err();
        assert!(e.reason.contains("unexpected"));

        assert!(parse("").is_err());
        assert!(parse("px^99999999999").is_err());
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(p in arb_phase_poly()) {
            let text = p.to_string();
            prop_assert_eq!(parse(&text).unwrap(), p);
        }
    }
}
