//! Exact coefficient ring: arbitrary-precision rationals and sparse
//! polynomials in the three parameters `k1`, `k2`, `k3`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Build a rational from machine integers. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Build an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponents of `(k1, k2, k3)`.
pub type ParamExp = [u32; 3];

/// Which of the three parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    K1,
    K2,
    K3,
}

impl Param {
    pub const ALL: [Param; 3] = [Param::K1, Param::K2, Param::K3];

    pub fn index(self) -> usize {
        match self {
            Param::K1 => 0,
            Param::K2 => 1,
            Param::K3 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::K1 => "k1",
            Param::K2 => "k2",
            Param::K3 => "k3",
        }
    }
}

/// A polynomial in `k1, k2, k3` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<ParamExp, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, [0, 0, 0])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    /// A single term `c * k1^e1 * k2^e2 * k3^e3`.
    pub fn term(c: Rational, exp: ParamExp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        ParamPoly { terms }
    }

    /// The bare parameter `k`.
    pub fn param(k: Param) -> Self {
        let mut exp = [0; 3];
        exp[k.index()] = 1;
        Self::term(Rational::one(), exp)
    }

    pub fn k1() -> Self {
        Self::param(Param::K1)
    }

    pub fn k2() -> Self {
        Self::param(Param::K2)
    }

    pub fn k3() -> Self {
        Self::param(Param::K3)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamExp, &Rational)> {
        self.terms.iter()
    }

    /// The coefficient if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, exp: ParamExp, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact evaluation at `(k1, k2, k3)`.
    pub fn eval(&self, k1: &Rational, k2: &Rational, k3: &Rational) -> Rational {
        let vals = [k1, k2, k3];
        let mut sum = Rational::zero();
        for (exp, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in vals.iter().zip(exp) {
                if e > 0 {
                    t *= num_traits::pow(Rational::clone(v), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Substitute the parameters that are `Some`, leaving the rest symbolic.
    pub fn substitute(&self, values: &[Option<Rational>; 3]) -> Self {
        let mut out = ParamPoly::zero();
        for (exp, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = *exp;
            for i in 0..3 {
                if let Some(v) = &values[i] {
                    if rest[i] > 0 {
                        coeff *= num_traits::pow(v.clone(), rest[i] as usize);
                    }
                    rest[i] = 0;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, k: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(exp, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for i in 0..3 {
                    t *= k[i].powi(exp[i] as i32);
                }
                t
            })
            .sum()
    }

    /// Render as a sequence of signed terms, each paired with its rendered
    /// parameter factors, in descending exponent order. Used by both
    /// `Display` here and the phase-space renderer.
    pub(crate) fn signed_terms(&self) -> impl Iterator<Item = (bool, Rational, Vec<String>)> + '_ {
        self.terms.iter().rev().map(|(exp, c)| {
            let factors = Param::ALL
                .iter()
                .filter(|p| exp[p.index()] > 0)
                .map(|p| power_factor(p.name(), exp[p.index()] as i64))
                .collect();
            (c.is_negative(), c.abs(), factors)
        })
    }
}

pub(crate) fn power_factor(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Render `|c| * f1 * f2 ...` with the coefficient dropped when it is one and
/// there are other factors.
pub(crate) fn render_magnitude(abs: &Rational, factors: &[String]) -> String {
    let mut parts = Vec::with_capacity(factors.len() + 1);
    if !abs.is_one() || factors.is_empty() {
        parts.push(abs.to_string());
    }
    parts.extend(factors.iter().cloned());
    parts.join("*")
}

/// Join signed terms as `a + b - c`, or `0` when empty.
pub(crate) fn join_signed<I>(terms: I) -> String
where
    I: IntoIterator<Item = (bool, String)>,
{
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_signed(
            self.signed_terms()
                .map(|(neg, abs, factors)| (neg, render_magnitude(&abs, &factors))),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}

impl From<Rational> for ParamPoly {
    fn from(c: Rational) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<i64> for ParamPoly {
    fn from(n: i64) -> Self {
        ParamPoly::from_int(n)
    }
}

impl<'a> AddAssign<&'a ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &'a ParamPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, rhs: &'a ParamPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl<'b> Add<&'b ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &'b ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'b> Sub<&'b ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &'b ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'b> Mul<&'b ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &'b ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ParamPoly> for ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: &'a ParamPoly) -> ParamPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ParamPoly> for &'a ParamPoly {
            type Output = ParamPoly;
            fn $m(self, rhs: ParamPoly) -> ParamPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k2() -> ParamPoly {
        ParamPoly::k2()
    }

    #[test]
    fn difference_of_squares() {
        let one = ParamPoly::one();
        let p = (k2() + &one) * (k2() - &one);
        assert_eq!(p, k2().pow(2) - one);
        assert_eq!(p.to_string(), "k2^2 - 1");
    }

    #[test]
    fn additive_identity() {
        let p = ParamPoly::from_int(108) * k2().pow(3);
        assert_eq!(&p + &ParamPoly::zero(), p);
        assert_eq!(p.to_string(), "108*k2^3");
    }

    #[test]
    fn repeated_multiplication() {
        assert_eq!(k2() * k2() * k2(), k2().pow(3));
    }

    #[test]
    fn evaluation() {
        let z = int(0);
        assert_eq!(k2().pow(3).eval(&z, &int(3), &z), int(27));
        let p = ParamPoly::from_int(108) * k2().pow(3);
        assert_eq!(p.eval(&z, &int(2), &z), int(864));
        let q = ParamPoly::from_int(12) * ParamPoly::k1();
        assert_eq!(q.eval(&z, &int(5), &int(7)), int(0));
    }

    #[test]
    fn partial_substitution() {
        let p = ParamPoly::from_int(12) * ParamPoly::k1() * k2() + ParamPoly::k3();
        let s = p.substitute(&[Some(int(0)), None, None]);
        assert_eq!(s, ParamPoly::k3());
        let s = p.substitute(&[Some(rat(1, 2)), None, Some(int(1))]);
        assert_eq!(s, ParamPoly::from_int(6) * k2() + ParamPoly::one());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = k2() - k2();
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
        assert_eq!(p.to_string(), "0");
        assert_eq!(ParamPoly::constant(int(0)), ParamPoly::zero());
    }

    #[test]
    fn rendering_is_lexicographic_descending() {
        let p = ParamPoly::k3() + ParamPoly::k1() * ParamPoly::k3()
            - ParamPoly::constant(rat(1, 2))
            + k2().pow(2);
        assert_eq!(p.to_string(), "k1*k3 + k2^2 + k3 - 1/2");
        assert_eq!(ParamPoly::constant(rat(-3, 4)).to_string(), "-3/4");
    }

    #[test]
    fn large_coefficients_do_not_overflow() {
        let big = ParamPoly::from_int(i64::MAX) * k2();
        let sq = big.pow(4);
        let expected = num_traits::pow(BigInt::from(i64::MAX), 4);
        assert_eq!(sq.terms().next().unwrap().1, &Rational::from_integer(expected));
    }

    pub(crate) fn arb_param_poly() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5, 1i64..4), 0..4).prop_map(
            |terms| {
                let mut p = ParamPoly::zero();
                for ((a, b, c), n, d) in terms {
                    p += &ParamPoly::term(rat(n, d), [a, b, c]);
                }
                p
            },
        )
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..5).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_param_poly(), b in arb_param_poly(), c in arb_param_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, ParamPoly::zero());
            prop_assert_eq!(&a * &ParamPoly::one(), a.clone());
        }

        #[test]
        fn eval_is_homomorphism(
            a in arb_param_poly(),
            b in arb_param_poly(),
            k in (arb_rational(), arb_rational(), arb_rational()),
        ) {
            let (k1, k2, k3) = k;
            prop_assert_eq!(
                (&a * &b).eval(&k1, &k2, &k3),
                a.eval(&k1, &k2, &k3) * b.eval(&k1, &k2, &k3)
            );
            prop_assert_eq!(
                (&a + &b).eval(&k1, &k2, &k3),
                a.eval(&k1, &k2, &k3) + b.eval(&k1, &k2, &k3)
            );
        }
    }
}
