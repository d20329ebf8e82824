//! Sparse phase-space polynomials over the parameter ring.
//!
//! Every potential and integral handled by this crate is polynomial in
//! `x`, `px`, `py` and in `u = y^(1/3)`, where `u` may carry negative
//! powers. Writing the fractional powers of `y` as integer powers of `u`
//! closes the ring under multiplication and under `d/dy`, which acts as
//! `u^n -> (n/3) u^(n-3)`.

mod field;
mod numeric;
mod text;

pub use field::{vf_commutator, VectorField};
pub use numeric::{CompiledPoly, DomainError, PhasePoint};
pub use text::{parse, ParseError};

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::Zero;
use thiserror::Error;

use crate::ring::{int, rat, Param, ParamPoly, Rational};

/// `x^ex * u^eu * px^epx * py^epy`; only `eu` may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub ex: u32,
    pub eu: i32,
    pub epx: u32,
    pub epy: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        ex: 0,
        eu: 0,
        epx: 0,
        epy: 0,
    };

    pub fn new(ex: u32, eu: i32, epx: u32, epy: u32) -> Self {
        Monomial { ex, eu, epx, epy }
    }

    /// Total degree in the momenta.
    pub fn momentum_degree(&self) -> u32 {
        self.epx + self.epy
    }

    fn mul(self, o: Monomial) -> Monomial {
        Monomial {
            ex: self.ex + o.ex,
            eu: self.eu + o.eu,
            epx: self.epx + o.epx,
            epy: self.epy + o.epy,
        }
    }

    fn key(&self) -> (u32, u32, u32, i32) {
        (self.epx, self.epy, self.ex, self.eu)
    }
}

/// Ordered lexicographically on `(epx, epy, ex, eu)`; rendering walks the
/// order in reverse so momentum-leading terms come first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Differentiation direction. `Y` applies the chain rule through `y = u^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    U,
    Y,
    Px,
    Py,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("negative power {0} of a polynomial is not representable")]
    NegativePower(i64),
}

/// A polynomial in `x, u, u^-1, px, py` with [`ParamPoly`] coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PhasePoly {
    terms: BTreeMap<Monomial, ParamPoly>,
}

impl PhasePoly {
    pub fn zero() -> Self {
        PhasePoly::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamPoly::one())
    }

    pub fn constant(c: ParamPoly) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(ParamPoly::from_int(n))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::constant(ParamPoly::constant(c))
    }

    pub fn term(c: ParamPoly, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PhasePoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(ParamPoly::one(), m)
    }

    pub fn param(k: Param) -> Self {
        Self::constant(ParamPoly::param(k))
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::new(1, 0, 0, 0))
    }

    pub fn u() -> Self {
        Self::u_pow(1)
    }

    /// `u^n` for any integer `n`.
    pub fn u_pow(n: i32) -> Self {
        Self::monomial(Monomial::new(0, n, 0, 0))
    }

    /// `y = u^3`.
    pub fn y() -> Self {
        Self::u_pow(3)
    }

    pub fn px() -> Self {
        Self::monomial(Monomial::new(0, 0, 1, 0))
    }

    pub fn py() -> Self {
        Self::monomial(Monomial::new(0, 0, 0, 1))
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&ParamPoly> {
        self.terms.get(m)
    }

    /// Highest total momentum degree, or `None` for the zero polynomial.
    pub fn momentum_order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::momentum_degree).max()
    }

    /// The coefficient of `px^epx py^epy`, as a polynomial in `x` and `u`.
    pub fn momentum_coefficient(&self, epx: u32, epy: u32) -> PhasePoly {
        PhasePoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.epx == epx && m.epy == epy)
                .map(|(m, c)| (Monomial { epx: 0, epy: 0, ..*m }, c.clone()))
                .collect(),
        }
    }

    /// Terms with no momentum dependence.
    pub fn momentum_free_part(&self) -> PhasePoly {
        self.momentum_coefficient(0, 0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &ParamPoly) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> PhasePoly {
        if c.is_zero() {
            return PhasePoly::zero();
        }
        PhasePoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v.scale(c))).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> PhasePoly {
        self.scale_rational(&int(n))
    }

    /// Non-negative integer power; negative exponents are rejected because a
    /// general polynomial has no inverse in this ring.
    pub fn pow(&self, n: i64) -> Result<PhasePoly, PolyError> {
        if n < 0 {
            return Err(PolyError::NegativePower(n));
        }
        let mut acc = PhasePoly::one();
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Substitute exact values for the parameters that are `Some`.
    pub fn substitute_params(&self, values: &[Option<Rational>; 3]) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.substitute(values));
        }
        out
    }

    pub fn derivative(&self, dir: Direction) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (m, c) in &self.terms {
            let (factor, dm): (Rational, Monomial) = match dir {
                Direction::X => (int(m.ex as i64), Monomial { ex: m.ex.wrapping_sub(1), ..*m }),
                Direction::U => (int(m.eu as i64), Monomial { eu: m.eu - 1, ..*m }),
                Direction::Y => (rat(m.eu as i64, 3), Monomial { eu: m.eu - 3, ..*m }),
                Direction::Px => (int(m.epx as i64), Monomial { epx: m.epx.wrapping_sub(1), ..*m }),
                Direction::Py => (int(m.epy as i64), Monomial { epy: m.epy.wrapping_sub(1), ..*m }),
            };
            if factor.is_zero() {
                continue;
            }
            out.add_term(dm, c.scale(&factor));
        }
        out
    }
}

/// `{f, g} = f_x g_px + f_y g_py - f_px g_x - f_py g_y`.
pub fn poisson_bracket(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    use Direction::*;
    let mut out = &f.derivative(X) * &g.derivative(Px);
    out += &(&f.derivative(Y) * &g.derivative(Py));
    out -= &(&f.derivative(Px) * &g.derivative(X));
    out -= &(&f.derivative(Py) * &g.derivative(Y));
    out
}

/// The Hamiltonian vector field `(f_px, f_py, -f_x, -f_y)`, so that applying
/// it to `g` yields `{g, f}`.
pub fn hamiltonian_vf(f: &PhasePoly) -> VectorField {
    use Direction::*;
    VectorField {
        cx: f.derivative(Px),
        cy: f.derivative(Py),
        cpx: -f.derivative(X),
        cpy: -f.derivative(Y),
    }
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self))
    }
}

impl fmt::Debug for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhasePoly({self})")
    }
}

impl From<ParamPoly> for PhasePoly {
    fn from(c: ParamPoly) -> Self {
        PhasePoly::constant(c)
    }
}

impl From<i64> for PhasePoly {
    fn from(n: i64) -> Self {
        PhasePoly::from_int(n)
    }
}

impl<'a> AddAssign<&'a PhasePoly> for PhasePoly {
    fn add_assign(&mut self, rhs: &'a PhasePoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a PhasePoly> for PhasePoly {
    fn sub_assign(&mut self, rhs: &'a PhasePoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl<'b> Add<&'b PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn add(self, rhs: &'b PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'b> Sub<&'b PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: &'b PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'b> Mul<&'b PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: &'b PhasePoly) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        PhasePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PhasePoly> for PhasePoly {
            type Output = PhasePoly;
            fn $m(self, rhs: PhasePoly) -> PhasePoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a PhasePoly> for PhasePoly {
            type Output = PhasePoly;
            fn $m(self, rhs: &'a PhasePoly) -> PhasePoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<PhasePoly> for &'a PhasePoly {
            type Output = PhasePoly;
            fn $m(self, rhs: PhasePoly) -> PhasePoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(p: Param) -> PhasePoly {
        PhasePoly::param(p)
    }

    /// `H = (px^2 + py^2)/2 + k2 x u^-2 + k3 u^-2`.
    fn h_u() -> PhasePoly {
        let kinetic = (PhasePoly::px().pow(2).unwrap() + PhasePoly::py().pow(2).unwrap())
            .scale_rational(&rat(1, 2));
        kinetic + k(Param::K2) * PhasePoly::x() * PhasePoly::u_pow(-2) + k(Param::K3) * PhasePoly::u_pow(-2)
    }

    #[test]
    fn momentum_square() {
        let p = PhasePoly::px().pow(2).unwrap();
        assert_eq!(p, PhasePoly::monomial(Monomial::new(0, 0, 2, 0)));
    }

    #[test]
    fn laurent_exponents_add() {
        assert_eq!(PhasePoly::u_pow(-2) * PhasePoly::u_pow(5), PhasePoly::y());
        assert_eq!(PhasePoly::u_pow(-2) * PhasePoly::u_pow(2), PhasePoly::one());
    }

    #[test]
    fn negative_power_rejected() {
        assert_eq!(PhasePoly::x().pow(-1), Err(PolyError::NegativePower(-1)));
        assert_eq!(PhasePoly::x().pow(0).unwrap(), PhasePoly::one());
    }

    #[test]
    fn leading_term_of_squared_cubic_integral() {
        let k2_3 = PhasePoly::px().pow(3).unwrap().scale_int(2)
            + PhasePoly::px() * PhasePoly::py().pow(2).unwrap().scale_int(3);
        let sq = k2_3.pow(2).unwrap();
        assert_eq!(
            sq.coefficient(&Monomial::new(0, 0, 6, 0)),
            Some(&ParamPoly::from_int(4))
        );
    }

    #[test]
    fn simple_derivatives() {
        let f = PhasePoly::x().pow(2).unwrap() * PhasePoly::px();
        assert_eq!(f.derivative(Direction::X), PhasePoly::x().scale_int(2) * PhasePoly::px());
        assert_eq!(
            PhasePoly::u().derivative(Direction::Y),
            PhasePoly::u_pow(-2).scale_rational(&rat(1, 3))
        );
        assert_eq!(PhasePoly::y().derivative(Direction::Y), PhasePoly::one());
        assert_eq!(PhasePoly::u_pow(-2).derivative(Direction::U), PhasePoly::u_pow(-3).scale_int(-2));
        assert!(PhasePoly::from_int(7).derivative(Direction::Px).is_zero());
    }

    #[test]
    fn y_derivative_of_u_potential() {
        let v = h_u().momentum_free_part();
        let expected = (k(Param::K2) * PhasePoly::x() + k(Param::K3))
            * PhasePoly::u_pow(-5).scale_rational(&rat(-2, 3));
        assert_eq!(v.derivative(Direction::Y), expected);
    }

    #[test]
    fn canonical_pairs() {
        assert_eq!(poisson_bracket(&PhasePoly::x(), &PhasePoly::px()), PhasePoly::one());
        assert_eq!(poisson_bracket(&PhasePoly::y(), &PhasePoly::py()), PhasePoly::one());
        assert!(poisson_bracket(&PhasePoly::x(), &PhasePoly::py()).is_zero());
        assert!(poisson_bracket(&PhasePoly::u(), &PhasePoly::px()).is_zero());
    }

    #[test]
    fn hamiltonian_field_of_u_hamiltonian() {
        let g = hamiltonian_vf(&h_u());
        assert_eq!(g.cx, PhasePoly::px());
        assert_eq!(g.cy, PhasePoly::py());
        assert_eq!(g.cpx, -(k(Param::K2) * PhasePoly::u_pow(-2)));
        assert_eq!(
            g.cpy,
            (k(Param::K2) * PhasePoly::x() + k(Param::K3)) * PhasePoly::u_pow(-5).scale_rational(&rat(2, 3))
        );
    }

    #[test]
    fn trivial_hamiltonian_fields() {
        assert!(hamiltonian_vf(&PhasePoly::from_int(5)).is_zero());
        let t = hamiltonian_vf(&PhasePoly::px());
        assert_eq!(t.cx, PhasePoly::one());
        assert!(t.cy.is_zero() && t.cpx.is_zero() && t.cpy.is_zero());
    }

    #[test]
    fn momentum_order_and_parts() {
        let h = h_u();
        assert_eq!(h.momentum_order(), Some(2));
        assert_eq!(h.momentum_free_part().momentum_order(), Some(0));
        assert_eq!(PhasePoly::zero().momentum_order(), None);
        assert_eq!(h.momentum_coefficient(2, 0), PhasePoly::from_rational(rat(1, 2)));
    }

    #[test]
    fn conserved_momentum_residual() {
        let r = poisson_bracket(&PhasePoly::px(), &h_u());
        assert_eq!(r, -(k(Param::K2) * PhasePoly::u_pow(-2)));
    }

    pub(crate) fn arb_monomial() -> impl Strategy<Value = Monomial> {
        (0u32..3, -4i32..4, 0u32..3, 0u32..3).prop_map(|(a, b, c, d)| Monomial::new(a, b, c, d))
    }

    pub(crate) fn arb_phase_poly() -> impl Strategy<Value = PhasePoly> {
        prop::collection::vec(
            (arb_monomial(), -4i64..=4, 1i64..3, (0u32..2, 0u32..2, 0u32..2)),
            0..5,
        )
        .prop_map(|terms| {
            let mut p = PhasePoly::zero();
            for (m, n, d, (a, b, c)) in terms {
                p.add_term(m, ParamPoly::term(rat(n, d), [a, b, c]));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bracket_antisymmetry_and_bilinearity(
            f in arb_phase_poly(),
            g in arb_phase_poly(),
            h in arb_phase_poly(),
        ) {
            prop_assert_eq!(poisson_bracket(&f, &g), -poisson_bracket(&g, &f));
            prop_assert_eq!(
                poisson_bracket(&(&f + &g), &h),
                poisson_bracket(&f, &h) + poisson_bracket(&g, &h)
            );
            let c = ParamPoly::k2().scale(&rat(3, 2));
            prop_assert_eq!(poisson_bracket(&f.scale(&c), &g), poisson_bracket(&f, &g).scale(&c));
        }

        #[test]
        fn bracket_leibniz_and_jacobi(
            f in arb_phase_poly(),
            g in arb_phase_poly(),
            h in arb_phase_poly(),
        ) {
            prop_assert_eq!(
                poisson_bracket(&f, &(&g * &h)),
                poisson_bracket(&f, &g) * &h + &g * poisson_bracket(&f, &h)
            );
            let jac = poisson_bracket(&f, &poisson_bracket(&g, &h))
                + poisson_bracket(&g, &poisson_bracket(&h, &f))
                + poisson_bracket(&h, &poisson_bracket(&f, &g));
            prop_assert!(jac.is_zero(), "Jacobi residual {}", jac);
        }

        #[test]
        fn field_application_is_bracket(f in arb_phase_poly(), g in arb_phase_poly()) {
            prop_assert_eq!(hamiltonian_vf(&g).apply(&f), poisson_bracket(&f, &g));
        }

        #[test]
        fn y_derivative_is_chain_rule(f in arb_phase_poly()) {
            let via_u = f.derivative(Direction::U) * PhasePoly::u_pow(-2).scale_rational(&rat(1, 3));
            prop_assert_eq!(f.derivative(Direction::Y), via_u);
        }
    }
}
