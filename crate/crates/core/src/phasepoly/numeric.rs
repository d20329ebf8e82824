use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::PhasePoly;

/// A point `(x, y, px, py)` of phase space. The potentials are singular at
/// `y = 0`, so evaluation requires `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub px: f64,
    pub py: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64, px: f64, py: f64) -> Self {
        PhasePoint { x, y, px, py }
    }

    /// Same position, opposite momenta.
    pub fn reversed(self) -> Self {
        PhasePoint {
            px: -self.px,
            py: -self.py,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("y = {y} is outside the domain y > 0")]
pub struct DomainError {
    pub y: f64,
}

/// A polynomial with the parameters fixed to floating-point values, ready
/// for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(f64, [i32; 4])>,
}

impl CompiledPoly {
    pub fn new(f: &PhasePoly, k: [f64; 3]) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| {
                (
                    c.eval_f64(k),
                    [m.ex as i32, m.eu, m.epx as i32, m.epy as i32],
                )
            })
            .filter(|(c, _)| *c != 0.0)
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, pt: &PhasePoint) -> Result<f64, DomainError> {
        if pt.y.is_nan() || pt.y <= 0.0 {
            return Err(DomainError { y: pt.y });
        }
        let u = pt.y.cbrt();
        Ok(self
            .terms
            .iter()
            .map(|(c, e)| {
                c * pt.x.powi(e[0]) * u.powi(e[1]) * pt.px.powi(e[2]) * pt.py.powi(e[3])
            })
            .sum())
    }
}

impl PhasePoly {
    /// Evaluate at a phase-space point with `u = cbrt(y)`.
    pub fn eval_numeric(&self, pt: &PhasePoint, k: [f64; 3]) -> Result<f64, DomainError> {
        CompiledPoly::new(self, k).eval(pt)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_phase_poly;
    use super::*;
    use crate::phasepoly::parse;
    use proptest::prelude::*;

    #[test]
    fn potential_at_unit_point() {
        let u = parse("k2*x*u^-2 + k3*u^-2").unwrap();
        let v = u.eval_numeric(&PhasePoint::new(1.0, 1.0, 0.0, 0.0), [0.0, 1.0, 2.0]).unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn cubic_integral_hand_substitution() {
        let k2_3 = parse("2*px^3 + 3*px*py^2 + 6*k2*x*u^-2*px + 9*k2*u*py + 6*k3*u^-2*px").unwrap();
        let v = k2_3
            .eval_numeric(&PhasePoint::new(0.0, 1.0, 1.0, 0.0), [0.0, 0.0, 1.0])
            .unwrap();
        assert_eq!(v, 8.0);
    }

    #[test]
    fn zero_polynomial_is_zero_everywhere() {
        let pt = PhasePoint::new(-3.5, 0.25, 2.0, -1.0);
        assert_eq!(PhasePoly::zero().eval_numeric(&pt, [1.0, 2.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn nonpositive_y_rejected() {
        let pt = PhasePoint::new(0.0, 0.0, 0.0, 0.0);
        assert_eq!(PhasePoly::one().eval_numeric(&pt, [0.0; 3]), Err(DomainError { y: 0.0 }));
        let pt = PhasePoint::new(0.0, -1.0, 0.0, 0.0);
        assert!(PhasePoly::one().eval_numeric(&pt, [0.0; 3]).is_err());
        let pt = PhasePoint::new(0.0, f64::NAN, 0.0, 0.0);
        assert!(PhasePoly::one().eval_numeric(&pt, [0.0; 3]).is_err());
    }

    #[test]
    fn u_is_real_cube_root() {
        let pt = PhasePoint::new(0.0, 8.0, 0.0, 0.0);
        assert_eq!(PhasePoly::u().eval_numeric(&pt, [0.0; 3]).unwrap(), 2.0);
        assert_eq!(PhasePoly::u_pow(-2).eval_numeric(&pt, [0.0; 3]).unwrap(), 0.25);
    }

    fn arb_point() -> impl Strategy<Value = PhasePoint> {
        (-1.5f64..1.5, 0.5f64..2.0, -1.5f64..1.5, -1.5f64..1.5)
            .prop_map(|(x, y, px, py)| PhasePoint::new(x, y, px, py))
    }

    proptest! {
        #[test]
        fn evaluation_is_multiplicative(
            f in arb_phase_poly(),
            g in arb_phase_poly(),
            pt in arb_point(),
            k in (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0),
        ) {
            let k = [k.0, k.1, k.2];
            let prod = (&f * &g).eval_numeric(&pt, k).unwrap();
            let a = f.eval_numeric(&pt, k).unwrap();
            let b = g.eval_numeric(&pt, k).unwrap();
            let scale = 1.0f64.max(a.abs() * b.abs()).max(prod.abs());
            prop_assert!((prod - a * b).abs() <= 1e-9 * scale, "{} vs {}", prod, a * b);
        }
    }
}
