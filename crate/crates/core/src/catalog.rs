//! Named potentials, Hamiltonians, integrals and vector fields of the Holt
//! family and of its two-parameter limit `U = (k2 x + k3) / y^(2/3)`.
//!
//! Expressions are written out as published, factor by factor, rather than
//! derived from one another. The [`crate::verify`] module is what decides
//! whether they are right.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::phasepoly::{hamiltonian_vf, PhasePoly, VectorField};
use crate::ring::{rat, Param, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Potential,
    Hamiltonian,
    Integral,
    VectorField,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Potential => "potential",
            Kind::Hamiltonian => "hamiltonian",
            Kind::Integral => "integral",
            Kind::VectorField => "vectorfield",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Poly(PhasePoly),
    Field(VectorField),
}

impl Expression {
    pub fn momentum_order(&self) -> u32 {
        match self {
            Expression::Poly(p) => p.momentum_order(),
            Expression::Field(v) => v.momentum_order(),
        }
        .unwrap_or(0)
    }

    pub fn as_poly(&self) -> Option<&PhasePoly> {
        match self {
            Expression::Poly(p) => Some(p),
            Expression::Field(_) => None,
        }
    }

    pub fn as_field(&self) -> Option<&VectorField> {
        match self {
            Expression::Field(v) => Some(v),
            Expression::Poly(_) => None,
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Poly(p) => p.fmt(f),
            Expression::Field(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: Kind,
    pub expression: Expression,
    /// Highest total degree in the momenta.
    pub momentum_order: u32,
    pub source: &'static str,
}

impl CatalogEntry {
    fn new(name: &str, kind: Kind, expression: Expression, source: &'static str) -> Self {
        CatalogEntry {
            name: name.to_string(),
            kind,
            momentum_order: expression.momentum_order(),
            expression,
            source,
        }
    }

    fn poly(name: &str, kind: Kind, p: PhasePoly, source: &'static str) -> Self {
        Self::new(name, kind, Expression::Poly(p), source)
    }

    pub fn as_poly(&self) -> Option<&PhasePoly> {
        self.expression.as_poly()
    }

    pub fn as_field(&self) -> Option<&VectorField> {
        self.expression.as_field()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    Unknown(String),
}

/// Every identifier accepted by [`build`], in listing order.
pub const NAMES: &[&str] = &[
    "V_h1", "V_h2", "V_h3", "H_h1", "H_h2", "H_h3", "J_h1_3", "J_h2_4", "J_h3_6", "V_h1_k",
    "V_h2_k", "V_h3_k", "H_h1_k", "H_h2_k", "H_h3_k", "J_h1_3_k", "J_h2_4_k", "J_h3_6_k", "U",
    "H_U", "K2_3", "K3_4", "K4_6", "Gamma_H", "X2", "X3", "X4",
];

const HOLT: &str = "Holt (1982), cubic-integral potential";
const HOLT2: &str = "second Holt-type potential, quartic integral";
const HOLT3: &str = "third Holt-type potential, sextic integral";
const FAMILY: &str = "three-parameter Holt-type family";
const LIMIT: &str = "k1 -> 0 limit of the Holt-type families (Post-Winternitz potential)";

fn x() -> PhasePoly {
    PhasePoly::x()
}
fn y() -> PhasePoly {
    PhasePoly::y()
}
fn u(n: i32) -> PhasePoly {
    PhasePoly::u_pow(n)
}
fn px(n: i64) -> PhasePoly {
    PhasePoly::px().pow(n).expect("non-negative")
}
fn py(n: i64) -> PhasePoly {
    PhasePoly::py().pow(n).expect("non-negative")
}
fn k(p: Param) -> PhasePoly {
    PhasePoly::param(p)
}
fn c(n: i64) -> PhasePoly {
    PhasePoly::from_int(n)
}
fn sq(p: PhasePoly) -> PhasePoly {
    &p * &p
}

/// `(px^2 + py^2) / 2`.
pub fn kinetic() -> PhasePoly {
    (px(2) + py(2)).scale_rational(&rat(1, 2))
}

/// `H = (px^2 + py^2) / 2 + V`.
pub fn hamiltonian(potential: &PhasePoly) -> PhasePoly {
    kinetic() + potential
}

fn v_h1_k() -> PhasePoly {
    k(Param::K1) * (c(4) * sq(x()) + c(3) * sq(y())) * u(-2)
        + k(Param::K2) * x() * u(-2)
        + k(Param::K3) * u(-2)
}

fn v_h2_k() -> PhasePoly {
    k(Param::K1) * (c(2) * sq(x()) + c(9) * sq(y())) * u(-2)
        + k(Param::K2) * x() * u(-2)
        + k(Param::K3) * u(-2)
}

fn v_h3_k() -> PhasePoly {
    k(Param::K1) * (sq(x()) + c(12) * sq(y())) * u(-2)
        + k(Param::K2) * x() * u(-2)
        + k(Param::K3) * u(-2)
}

fn v_u() -> PhasePoly {
    k(Param::K2) * x() * u(-2) + k(Param::K3) * u(-2)
}

fn v_h1() -> PhasePoly {
    (c(4) * sq(x()) + c(3) * sq(y())) * u(-2)
}

fn v_h2() -> PhasePoly {
    (c(2) * sq(x()) + c(9) * sq(y())) * u(-2)
}

fn v_h3() -> PhasePoly {
    (sq(x()) + c(12) * sq(y())) * u(-2)
}

fn j_h1_3() -> PhasePoly {
    c(2) * px(3)
        + c(3) * px(1) * py(2)
        + c(12) * ((c(2) * sq(x()) - c(3) * sq(y())) * u(-2) * px(1) + c(6) * x() * u(1) * py(1))
}

fn j_h2_4() -> PhasePoly {
    px(4)
        + c(2) * px(2) * py(2)
        + c(8) * (sq(x()) * u(-2) * px(2) + c(6) * x() * u(1) * px(1) * py(1) + c(36) * sq(x()) * u(2))
}

fn j_h3_6() -> PhasePoly {
    px(6)
        + c(3) * px(4) * py(2)
        + c(6) * (sq(x()) * u(-2) + c(3) * u(4)) * px(4)
        + c(72) * x() * u(1) * px(3) * py(1)
        + c(648) * sq(x()) * u(2) * px(2)
        + c(648) * x().pow(4).expect("non-negative")
}

fn j_h1_3_k() -> PhasePoly {
    c(2) * px(3)
        + c(3) * px(1) * py(2)
        + c(12)
            * k(Param::K1)
            * ((c(2) * sq(x()) - c(3) * sq(y())) * u(-2) * px(1) + c(6) * x() * u(1) * py(1))
        + k(Param::K2) * (c(6) * x() * u(-2) * px(1) + c(9) * u(1) * py(1))
        + c(6) * k(Param::K3) * u(-2) * px(1)
}

fn j_h2_4_k() -> PhasePoly {
    let lin = c(4) * k(Param::K1) * x() + k(Param::K2);
    px(4)
        + c(2) * px(2) * py(2)
        + c(4) * (c(2) * k(Param::K1) * sq(x()) + k(Param::K2) * x() + k(Param::K3)) * u(-2) * px(2)
        + c(12) * &lin * u(1) * px(1) * py(1)
        + c(18) * sq(lin) * u(2)
}

/// Coefficients of the sextic integral of the third Holt-type family:
/// `J = px^6 + 3 px^4 py^2 + j40 px^4 + j31 px^3 py + j20 px^2 + j0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SexticCoefficients {
    pub j40: PhasePoly,
    pub j31: PhasePoly,
    pub j20: PhasePoly,
    pub j0: PhasePoly,
}

pub fn sextic_coefficients() -> SexticCoefficients {
    let (k1, k2, k3) = (k(Param::K1), k(Param::K2), k(Param::K3));
    let lin = c(2) * &k1 * x() + &k2;
    SexticCoefficients {
        j40: c(6) * (&k1 * sq(x()) + c(3) * &k1 * sq(y()) + &k2 * x() + &k3) * u(-2),
        j31: c(36) * &lin * u(1),
        j20: c(162) * sq(lin) * u(2),
        j0: c(324)
            * x()
            * (&k1 * x() + &k2)
            * (c(2) * sq(k1.clone()) * sq(x()) + c(2) * &k1 * &k2 * x() + sq(k2.clone())),
    }
}

fn j_h3_6_k() -> PhasePoly {
    let co = sextic_coefficients();
    px(6) + c(3) * px(4) * py(2) + co.j40 * px(4) + co.j31 * px(3) * py(1) + co.j20 * px(2) + co.j0
}

/// Cubic integral of `U`.
pub fn k2_3() -> PhasePoly {
    c(2) * px(3)
        + c(3) * px(1) * py(2)
        + k(Param::K2) * (c(6) * x() * u(-2) * px(1) + c(9) * u(1) * py(1))
        + c(6) * k(Param::K3) * u(-2) * px(1)
}

/// Quartic integral of `U`.
pub fn k3_4() -> PhasePoly {
    px(4)
        + c(2) * px(2) * py(2)
        + c(4) * (k(Param::K2) * x() + k(Param::K3)) * u(-2) * px(2)
        + c(12) * k(Param::K2) * u(1) * px(1) * py(1)
        + c(18) * sq(k(Param::K2)) * u(2)
}

/// Sextic integral of `U`.
pub fn k4_6() -> PhasePoly {
    px(6)
        + c(3) * px(4) * py(2)
        + c(6) * (k(Param::K3) + k(Param::K2) * x()) * u(-2) * px(4)
        + c(36) * k(Param::K2) * u(1) * px(3) * py(1)
        + c(162) * sq(k(Param::K2)) * u(2) * px(2)
        + c(324) * k(Param::K2).pow(3).expect("non-negative") * x()
}

/// The potential `U = (k2 x + k3) u^-2`.
pub fn potential_u() -> PhasePoly {
    v_u()
}

/// The dynamical vector field of `H = |p|^2/2 + U`, as published.
pub fn gamma_h() -> VectorField {
    VectorField::new(
        px(1),
        py(1),
        -(k(Param::K2) * u(-2)),
        (k(Param::K2) * x() + k(Param::K3)) * u(-5).scale_rational(&rat(2, 3)),
    )
}

/// Look up a catalog entry. `H` is accepted as shorthand for `H_U`.
pub fn build(name: &str) -> Result<CatalogEntry, CatalogError> {
    use Kind::*;
    let e = match name {
        "V_h1" => CatalogEntry::poly(name, Potential, v_h1(), HOLT),
        "V_h2" => CatalogEntry::poly(name, Potential, v_h2(), HOLT2),
        "V_h3" => CatalogEntry::poly(name, Potential, v_h3(), HOLT3),
        "H_h1" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h1()), HOLT),
        "H_h2" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h2()), HOLT2),
        "H_h3" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h3()), HOLT3),
        "J_h1_3" => CatalogEntry::poly(name, Integral, j_h1_3(), HOLT),
        "J_h2_4" => CatalogEntry::poly(name, Integral, j_h2_4(), HOLT2),
        "J_h3_6" => CatalogEntry::poly(name, Integral, j_h3_6(), HOLT3),
        "V_h1_k" => CatalogEntry::poly(name, Potential, v_h1_k(), FAMILY),
        "V_h2_k" => CatalogEntry::poly(name, Potential, v_h2_k(), FAMILY),
        "V_h3_k" => CatalogEntry::poly(name, Potential, v_h3_k(), FAMILY),
        "H_h1_k" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h1_k()), FAMILY),
        "H_h2_k" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h2_k()), FAMILY),
        "H_h3_k" => CatalogEntry::poly(name, Hamiltonian, hamiltonian(&v_h3_k()), FAMILY),
        "J_h1_3_k" => CatalogEntry::poly(name, Integral, j_h1_3_k(), FAMILY),
        "J_h2_4_k" => CatalogEntry::poly(name, Integral, j_h2_4_k(), FAMILY),
        "J_h3_6_k" => CatalogEntry::poly(name, Integral, j_h3_6_k(), FAMILY),
        "U" => CatalogEntry::poly(name, Potential, v_u(), LIMIT),
        "H_U" | "H" => CatalogEntry::poly("H_U", Hamiltonian, hamiltonian(&v_u()), LIMIT),
        "K2_3" => CatalogEntry::poly(name, Integral, k2_3(), LIMIT),
        "K3_4" => CatalogEntry::poly(name, Integral, k3_4(), LIMIT),
        "K4_6" => CatalogEntry::poly(name, Integral, k4_6(), LIMIT),
        "Gamma_H" => CatalogEntry::new(name, VectorField, Expression::Field(gamma_h()), LIMIT),
        "X2" => CatalogEntry::new(name, VectorField, Expression::Field(hamiltonian_vf(&k2_3())), LIMIT),
        "X3" => CatalogEntry::new(name, VectorField, Expression::Field(hamiltonian_vf(&k3_4())), LIMIT),
        "X4" => CatalogEntry::new(name, VectorField, Expression::Field(hamiltonian_vf(&k4_6())), LIMIT),
        _ => return Err(CatalogError::Unknown(name.to_string())),
    };
    Ok(e)
}

/// All entries, in [`NAMES`] order.
pub fn list() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| build(n).expect("listed name")).collect()
}

/// Substitute exact values for the parameters given as `Some`.
pub fn specialize(entry: &CatalogEntry, values: &[Option<Rational>; 3]) -> CatalogEntry {
    let expression = match &entry.expression {
        Expression::Poly(p) => Expression::Poly(p.substitute_params(values)),
        Expression::Field(v) => {
            let [a, b, c, d] = v.components().map(|p| p.substitute_params(values));
            Expression::Field(VectorField::new(a, b, c, d))
        }
    };
    CatalogEntry {
        name: entry.name.clone(),
        kind: entry.kind,
        momentum_order: expression.momentum_order(),
        expression,
        source: entry.source,
    }
}

/// The Hamiltonian and the known integrals that go with a potential.
pub fn invariants_for(potential: &str) -> Result<Vec<&'static str>, CatalogError> {
    Ok(match potential {
        "U" => vec!["H_U", "K2_3", "K3_4", "K4_6"],
        "V_h1" => vec!["H_h1", "J_h1_3"],
        "V_h2" => vec!["H_h2", "J_h2_4"],
        "V_h3" => vec!["H_h3", "J_h3_6"],
        "V_h1_k" => vec!["H_h1_k", "J_h1_3_k"],
        "V_h2_k" => vec!["H_h2_k", "J_h2_4_k"],
        "V_h3_k" => vec!["H_h3_k", "J_h3_6_k"],
        other => return Err(CatalogError::Unknown(other.to_string())),
    })
}
