use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::ring::ParamPoly;

use super::{Direction, PhasePoly};

/// A vector field on phase space with components along `x, y, px, py`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VectorField {
    pub cx: PhasePoly,
    pub cy: PhasePoly,
    pub cpx: PhasePoly,
    pub cpy: PhasePoly,
}

const DIRECTIONS: [Direction; 4] = [Direction::X, Direction::Y, Direction::Px, Direction::Py];

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    pub fn new(cx: PhasePoly, cy: PhasePoly, cpx: PhasePoly, cpy: PhasePoly) -> Self {
        VectorField { cx, cy, cpx, cpy }
    }

    pub fn components(&self) -> [&PhasePoly; 4] {
        [&self.cx, &self.cy, &self.cpx, &self.cpy]
    }

    fn from_fn(mut f: impl FnMut(usize) -> PhasePoly) -> Self {
        VectorField {
            cx: f(0),
            cy: f(1),
            cpx: f(2),
            cpy: f(3),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &ParamPoly) -> VectorField {
        let comps = self.components();
        Self::from_fn(|i| comps[i].scale(c))
    }

    pub fn momentum_order(&self) -> Option<u32> {
        self.components().iter().filter_map(|c| c.momentum_order()).max()
    }

    /// Directional derivative `sum_j X_j d_j f`.
    pub fn apply(&self, f: &PhasePoly) -> PhasePoly {
        let mut out = PhasePoly::zero();
        for (comp, dir) in self.components().into_iter().zip(DIRECTIONS) {
            if comp.is_zero() {
                continue;
            }
            out += &(comp * &f.derivative(dir));
        }
        out
    }
}

/// `[X, Y]_i = X(Y_i) - Y(X_i)`.
pub fn vf_commutator(a: &VectorField, b: &VectorField) -> VectorField {
    let (ac, bc) = (a.components(), b.components());
    VectorField::from_fn(|i| a.apply(bc[i]) - b.apply(ac[i]))
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[x: {}; y: {}; px: {}; py: {}]",
            self.cx, self.cy, self.cpx, self.cpy
        )
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField{self}")
    }
}

impl<'b> Add<&'b VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &'b VectorField) -> VectorField {
        let (a, b) = (self.components(), rhs.components());
        VectorField::from_fn(|i| a[i] + b[i])
    }
}

impl<'b> Sub<&'b VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &'b VectorField) -> VectorField {
        let (a, b) = (self.components(), rhs.components());
        VectorField::from_fn(|i| a[i] - b[i])
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        let a = self.components();
        VectorField::from_fn(|i| -a[i])
    }
}
