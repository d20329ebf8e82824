//! Exact verification of the conservation laws, limits, bracket values and
//! commutation relations of the catalog.
//!
//! Every claim is reduced to "this polynomial (or vector field) is zero",
//! so there are no tolerances in this module. A failing check keeps its
//! residual, rendered canonically, because that is the first thing to look
//! at when a transcription is wrong.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{self, hamiltonian, sextic_coefficients};
use crate::phasepoly::{hamiltonian_vf, poisson_bracket, vf_commutator, PhasePoly, VectorField};
use crate::ring::{int, ParamPoly, Rational};

/// What remains after subtracting the claimed right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Poly(PhasePoly),
    Field(VectorField),
    /// Labelled residuals, one per entry of a bracket table.
    Table(Vec<(String, PhasePoly)>),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Poly(p) => p.is_zero(),
            Residual::Field(v) => v.is_zero(),
            Residual::Table(rows) => rows.iter().all(|(_, p)| p.is_zero()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Residual::Poly(p) => p.to_string(),
            Residual::Field(v) => v.to_string(),
            Residual::Table(rows) => rows
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(label, p)| format!("{label}: {p}"))
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub citation: String,
    pub lhs_minus_rhs: Residual,
    pub passed: bool,
    /// Canonical rendering of the residual, present only on failure.
    pub residual_rendered: Option<String>,
    pub millis: f64,
    /// Catalog objects the check depends on.
    pub uses: Vec<String>,
}

impl Check {
    pub fn from_residual(residual: Residual) -> Self {
        let passed = residual.is_zero();
        Check {
            id: String::new(),
            description: String::new(),
            citation: String::new(),
            residual_rendered: (!passed).then(|| residual.render()),
            lhs_minus_rhs: residual,
            passed,
            millis: 0.0,
            uses: Vec::new(),
        }
    }

    fn named(mut self, id: &str, description: &str, citation: &str, uses: &[&str]) -> Self {
        self.id = id.to_string();
        self.description = description.to_string();
        self.citation = citation.to_string();
        self.uses = uses.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn touches(&self, name: &str) -> bool {
        self.uses.iter().any(|u| u == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("empty basis")]
    EmptyBasis,
    #[error("no claimed bracket for basis pair ({0}, {1})")]
    MissingBracket(usize, usize),
}

/// Passes iff `{j, h} = 0`.
pub fn check_conserved(j: &PhasePoly, h: &PhasePoly) -> Check {
    Check::from_residual(Residual::Poly(poisson_bracket(j, h)))
}

/// Passes iff `lhs - rhs = 0`.
pub fn check_identity(lhs: &PhasePoly, rhs: &PhasePoly) -> Check {
    Check::from_residual(Residual::Poly(lhs - rhs))
}

pub fn check_vf_relation(lhs: &VectorField, rhs: &VectorField) -> Check {
    Check::from_residual(Residual::Field(lhs - rhs))
}

/// Check a table of brackets among `basis` elements.
///
/// `claimed` is keyed by index pairs. Every pair `(i, j)` with `i < j` must be
/// covered, either directly or as `(j, i)` (read with the opposite sign).
/// Self-brackets default to zero.
pub fn check_lie_closure(
    basis: &[PhasePoly],
    claimed: &BTreeMap<(usize, usize), PhasePoly>,
) -> Result<Check, VerifyError> {
    if basis.is_empty() {
        return Err(VerifyError::EmptyBasis);
    }
    let mut rows = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let expected = match (claimed.get(&(i, j)), claimed.get(&(j, i))) {
                (Some(c), _) => c.clone(),
                (None, Some(c)) => -c,
                (None, None) if i == j => PhasePoly::zero(),
                (None, None) => return Err(VerifyError::MissingBracket(i, j)),
            };
            let got = poisson_bracket(&basis[i], &basis[j]);
            rows.push((format!("{{{i},{j}}}"), got - expected));
        }
    }
    Ok(Check::from_residual(Residual::Table(rows)))
}

/// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
pub fn jacobi_residual(f: &PhasePoly, g: &PhasePoly, h: &PhasePoly) -> PhasePoly {
    poisson_bracket(f, &poisson_bracket(g, h))
        + poisson_bracket(g, &poisson_bracket(h, f))
        + poisson_bracket(h, &poisson_bracket(f, g))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub description: String,
    pub citation: String,
    pub passed: bool,
    pub residual: Option<String>,
    pub millis: f64,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

#[derive(Serialize)]
struct ReportDocument {
    all_passed: bool,
    checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let all_passed = checks.iter().all(|c| c.passed);
        VerificationReport { checks, all_passed }
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn records(&self) -> Vec<CheckRecord> {
        self.checks
            .iter()
            .map(|c| CheckRecord {
                id: c.id.clone(),
                description: c.description.clone(),
                citation: c.citation.clone(),
                passed: c.passed,
                residual: c.residual_rendered.clone(),
                millis: c.millis,
            })
            .collect()
    }

    /// The machine-readable report. Timings are included, so two runs differ
    /// only in the `millis` fields.
    pub fn to_json(&self) -> String {
        let doc = ReportDocument {
            all_passed: self.all_passed,
            checks: self.records(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

/// The objects the full suite is run against. Normally taken from the
/// catalog; tests substitute altered copies to confirm that mistakes are
/// caught.
#[derive(Debug, Clone)]
pub struct SuiteInputs {
    pub v_h1: PhasePoly,
    pub v_h2: PhasePoly,
    pub v_h3: PhasePoly,
    pub j_h1_3: PhasePoly,
    pub j_h2_4: PhasePoly,
    pub j_h3_6: PhasePoly,
    pub v_h1_k: PhasePoly,
    pub v_h2_k: PhasePoly,
    pub v_h3_k: PhasePoly,
    pub j_h1_3_k: PhasePoly,
    pub j_h2_4_k: PhasePoly,
    pub j_h3_6_k: PhasePoly,
    pub sextic_j0: PhasePoly,
    pub u: PhasePoly,
    pub k2_3: PhasePoly,
    pub k3_4: PhasePoly,
    pub k4_6: PhasePoly,
    pub gamma_h: VectorField,
}

impl SuiteInputs {
    pub fn from_catalog() -> Self {
        let poly = |name: &str| {
            catalog::build(name)
                .expect("catalog name")
                .as_poly()
                .expect("polynomial entry")
                .clone()
        };
        SuiteInputs {
            v_h1: poly("V_h1"),
            v_h2: poly("V_h2"),
            v_h3: poly("V_h3"),
            j_h1_3: poly("J_h1_3"),
            j_h2_4: poly("J_h2_4"),
            j_h3_6: poly("J_h3_6"),
            v_h1_k: poly("V_h1_k"),
            v_h2_k: poly("V_h2_k"),
            v_h3_k: poly("V_h3_k"),
            j_h1_3_k: poly("J_h1_3_k"),
            j_h2_4_k: poly("J_h2_4_k"),
            j_h3_6_k: poly("J_h3_6_k"),
            sextic_j0: sextic_coefficients().j0,
            u: poly("U"),
            k2_3: poly("K2_3"),
            k3_4: poly("K3_4"),
            k4_6: poly("K4_6"),
            gamma_h: catalog::gamma_h(),
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;

fn k2_cubed_times(n: i64) -> ParamPoly {
    ParamPoly::k2().pow(3).scale(&int(n))
}

/// Every check of the suite, in report order.
pub fn suite_jobs(inp: &SuiteInputs) -> Vec<Job<'_>> {
    let h_u = move || hamiltonian(&inp.u);
    let k1_zero: [Option<Rational>; 3] = [Some(int(0)), None, None];
    let mut jobs: Vec<Job<'_>> = Vec::new();

    let holt = [
        ("J_h1_3", "V_h1", &inp.j_h1_3, &inp.v_h1, "cubic Holt integral"),
        ("J_h2_4", "V_h2", &inp.j_h2_4, &inp.v_h2, "quartic integral of the second Holt potential"),
        ("J_h3_6", "V_h3", &inp.j_h3_6, &inp.v_h3, "sextic integral of the third Holt potential"),
    ];
    for (jn, vn, j, v, what) in holt {
        jobs.push(Box::new(move || {
            check_conserved(j, &hamiltonian(v)).named(
                &format!("conserved.{jn}"),
                &format!("{{{jn}, H({vn})}} = 0: {what}"),
                "Holt-type potentials, original normalization",
                &[jn, vn],
            )
        }));
    }
    let families = [
        ("J_h1_3_k", "V_h1_k", &inp.j_h1_3_k, &inp.v_h1_k),
        ("J_h2_4_k", "V_h2_k", &inp.j_h2_4_k, &inp.v_h2_k),
        ("J_h3_6_k", "V_h3_k", &inp.j_h3_6_k, &inp.v_h3_k),
    ];
    for (jn, vn, j, v) in families {
        jobs.push(Box::new(move || {
            check_conserved(j, &hamiltonian(v)).named(
                &format!("conserved.{jn}"),
                &format!("{{{jn}, H({vn})}} = 0 for symbolic k1, k2, k3"),
                "three-parameter Holt-type families",
                &[jn, vn],
            )
        }));
    }
    for (kn, k) in [("K2_3", &inp.k2_3), ("K3_4", &inp.k3_4), ("K4_6", &inp.k4_6)] {
        jobs.push(Box::new(move || {
            check_conserved(k, &h_u()).named(
                &format!("conserved.{kn}"),
                &format!("{{{kn}, H(U)}} = 0"),
                "superintegrability of U",
                &[kn, "U"],
            )
        }));
    }

    let limits = [
        ("J_h1_3_k", "K2_3", &inp.j_h1_3_k, &inp.k2_3),
        ("J_h2_4_k", "K3_4", &inp.j_h2_4_k, &inp.k3_4),
        ("J_h3_6_k", "K4_6", &inp.j_h3_6_k, &inp.k4_6),
    ];
    for (jn, kn, j, k) in limits {
        let k1_zero = k1_zero.clone();
        jobs.push(Box::new(move || {
            check_identity(&j.substitute_params(&k1_zero), k).named(
                &format!("limit.{jn}"),
                &format!("{jn} at k1 = 0 equals {kn}"),
                "k1 -> 0 limit of the families",
                &[jn, kn],
            )
        }));
    }
    jobs.push(Box::new(move || {
        check_identity(
            &inp.sextic_j0.substitute_params(&k1_zero),
            &inp.k4_6.momentum_free_part(),
        )
        .named(
            "limit.J0",
            "momentum-free coefficient J0 at k1 = 0 equals the last term 324 k2^3 x of K4_6",
            "sextic integral coefficients",
            &["J_h3_6_k", "K4_6"],
        )
    }));

    jobs.push(Box::new(move || {
        let h = h_u();
        let rhs = (&h * &inp.k3_4).scale_int(18)
            - (&inp.k2_3 * &inp.k2_3).scale_int(2)
            - PhasePoly::constant(ParamPoly::k2().pow(2) * ParamPoly::k3()).scale_int(324);
        check_identity(&inp.k4_6, &rhs).named(
            "relation.K4_6",
            "K4_6 = 18 H K3_4 - 2 K2_3^2 - 324 k2^2 k3",
            "functional dependence of the sextic integral",
            &["K4_6", "K3_4", "K2_3", "U"],
        )
    }));

    jobs.push(Box::new(move || {
        check_identity(
            &poisson_bracket(&inp.k3_4, &inp.k2_3),
            &PhasePoly::constant(k2_cubed_times(108)),
        )
        .named(
            "bracket.K3_4.K2_3",
            "{K3_4, K2_3} = 108 k2^3",
            "bracket of the cubic and quartic integrals",
            &["K3_4", "K2_3"],
        )
    }));
    jobs.push(Box::new(move || {
        check_identity(
            &poisson_bracket(&inp.k4_6, &inp.k2_3),
            &h_u().scale(&k2_cubed_times(1944)),
        )
        .named(
            "bracket.K4_6.K2_3",
            "{K4_6, K2_3} = 1944 k2^3 H",
            "brackets of the sextic integral",
            &["K4_6", "K2_3", "U"],
        )
    }));
    jobs.push(Box::new(move || {
        check_identity(
            &poisson_bracket(&inp.k4_6, &inp.k3_4),
            &inp.k2_3.scale(&k2_cubed_times(432)),
        )
        .named(
            "bracket.K4_6.K3_4",
            "{K4_6, K3_4} = 432 k2^3 K2_3",
            "brackets of the sextic integral",
            &["K4_6", "K3_4", "K2_3"],
        )
    }));

    jobs.push(Box::new(move || {
        check_vf_relation(&hamiltonian_vf(&h_u()), &inp.gamma_h).named(
            "field.Gamma_H",
            "Hamiltonian vector field of H(U) equals the published dynamical field",
            "dynamical vector field of U",
            &["U", "Gamma_H"],
        )
    }));
    jobs.push(Box::new(move || {
        let x2 = hamiltonian_vf(&inp.k2_3);
        let x3 = hamiltonian_vf(&inp.k3_4);
        check_vf_relation(&vf_commutator(&x2, &x3), &VectorField::zero()).named(
            "commutator.X2.X3",
            "[X2, X3] = 0",
            "commutation of the symmetry fields",
            &["K2_3", "K3_4"],
        )
    }));
    jobs.push(Box::new(move || {
        let x2 = hamiltonian_vf(&inp.k2_3);
        let x4 = hamiltonian_vf(&inp.k4_6);
        check_vf_relation(&vf_commutator(&x2, &x4), &inp.gamma_h.scale(&k2_cubed_times(1944))).named(
            "commutator.X2.X4",
            "[X2, X4] = 1944 k2^3 Gamma_H",
            "commutation of the symmetry fields",
            &["K2_3", "K4_6", "Gamma_H"],
        )
    }));
    jobs.push(Box::new(move || {
        let x2 = hamiltonian_vf(&inp.k2_3);
        let x3 = hamiltonian_vf(&inp.k3_4);
        let x4 = hamiltonian_vf(&inp.k4_6);
        check_vf_relation(&vf_commutator(&x3, &x4), &x2.scale(&k2_cubed_times(432))).named(
            "commutator.X3.X4",
            "[X3, X4] = 432 k2^3 X2",
            "commutation of the symmetry fields",
            &["K2_3", "K3_4", "K4_6"],
        )
    }));

    jobs.push(Box::new(move || {
        let basis = [inp.k2_3.clone(), inp.k3_4.clone(), PhasePoly::one(), h_u()];
        let mut claimed = BTreeMap::new();
        for i in 0..4 {
            for j in i + 1..4 {
                claimed.insert((i, j), PhasePoly::zero());
            }
        }
        claimed.insert((1, 0), PhasePoly::constant(k2_cubed_times(108)));
        claimed.remove(&(0, 1));
        check_lie_closure(&basis, &claimed)
            .expect("complete table")
            .named(
                "closure.heisenberg_plus_center",
                "span{K2_3, K3_4, 1} is a Heisenberg algebra and H is central",
                "Lie algebra of the integrals, first basis",
                &["K2_3", "K3_4", "U"],
            )
    }));
    jobs.push(Box::new(move || {
        let h = h_u();
        let basis = [inp.k2_3.clone(), inp.k4_6.clone(), h.clone()];
        let mut claimed = BTreeMap::new();
        claimed.insert((1, 0), h.scale(&k2_cubed_times(1944)));
        claimed.insert((0, 2), PhasePoly::zero());
        claimed.insert((1, 2), PhasePoly::zero());
        check_lie_closure(&basis, &claimed)
            .expect("complete table")
            .named(
                "closure.heisenberg_center_H",
                "span{K2_3, K4_6, H} is a Heisenberg algebra with center H",
                "Lie algebra of the integrals, second basis",
                &["K2_3", "K4_6", "U"],
            )
    }));

    jobs.push(Box::new(move || {
        Check::from_residual(Residual::Poly(jacobi_residual(&h_u(), &inp.k2_3, &inp.k3_4))).named(
            "jacobi.H.K2_3.K3_4",
            "Jacobi identity on (H, K2_3, K3_4)",
            "Poisson algebra structure",
            &["U", "K2_3", "K3_4"],
        )
    }));

    jobs
}

fn timed(job: &Job<'_>) -> Check {
    let start = Instant::now();
    let mut c = job();
    c.millis = start.elapsed().as_secs_f64() * 1e3;
    c
}

/// Run the suite on the given inputs, in parallel, keeping report order.
pub fn run_suite(inputs: &SuiteInputs) -> VerificationReport {
    let jobs = suite_jobs(inputs);
    VerificationReport::new(jobs.par_iter().map(timed).collect())
}

/// Run the full suite against the catalog.
pub fn full_suite() -> VerificationReport {
    run_suite(&SuiteInputs::from_catalog())
}

/// Names of the suites the command line accepts.
pub const SUITES: &[&str] = &["full"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasepoly::parse;

    fn h_u() -> PhasePoly {
        hamiltonian(&catalog::potential_u())
    }

    #[test]
    fn conserved_integrals_of_u() {
        assert!(check_conserved(&catalog::k2_3(), &h_u()).passed);
        assert!(check_conserved(&catalog::k3_4(), &h_u()).passed);
    }

    #[test]
    fn sextic_family_integral_is_conserved() {
        let j = catalog::build("J_h3_6_k").unwrap();
        let h = catalog::build("H_h3_k").unwrap();
        assert!(check_conserved(j.as_poly().unwrap(), h.as_poly().unwrap()).passed);
    }

    #[test]
    fn momentum_is_not_conserved() {
        let c = check_conserved(&PhasePoly::px(), &h_u());
        assert!(!c.passed);
        assert_eq!(c.lhs_minus_rhs, Residual::Poly(parse("-k2*u^-2").unwrap()));
        assert_eq!(c.residual_rendered.as_deref(), Some("-k2*u^-2"));
    }

    #[test]
    fn published_identities() {
        let (k2_3, k3_4, k4_6) = (catalog::k2_3(), catalog::k3_4(), catalog::k4_6());
        let rhs = (h_u() * &k3_4).scale_int(18) - (&k2_3 * &k2_3).scale_int(2) - parse("324*k2^2*k3").unwrap();
        assert!(check_identity(&k4_6, &rhs).passed);
        assert!(check_identity(&poisson_bracket(&k4_6, &k3_4), &k2_3.scale(&k2_cubed_times(432))).passed);
        assert!(check_identity(&poisson_bracket(&k3_4, &k2_3), &parse("108*k2^3").unwrap()).passed);
        assert!(!check_identity(&poisson_bracket(&k2_3, &k3_4), &parse("108*k2^3").unwrap()).passed);
    }

    #[test]
    fn published_commutators() {
        let x2 = hamiltonian_vf(&catalog::k2_3());
        let x3 = hamiltonian_vf(&catalog::k3_4());
        let x4 = hamiltonian_vf(&catalog::k4_6());
        assert!(check_vf_relation(&vf_commutator(&x2, &x3), &VectorField::zero()).passed);
        assert!(check_vf_relation(&vf_commutator(&x3, &x4), &x2.scale(&k2_cubed_times(432))).passed);
        let g = catalog::gamma_h().scale(&k2_cubed_times(1944));
        assert!(check_vf_relation(&vf_commutator(&x2, &x4), &g).passed);
        assert!(!check_vf_relation(&vf_commutator(&x4, &x2), &g).passed);
    }

    #[test]
    fn lie_closure_tables() {
        let h = h_u();
        let basis = [catalog::k2_3(), catalog::k4_6(), h.clone()];
        let mut claimed = BTreeMap::new();
        claimed.insert((1, 0), h.scale(&k2_cubed_times(1944)));
        claimed.insert((0, 2), PhasePoly::zero());
        claimed.insert((1, 2), PhasePoly::zero());
        assert!(check_lie_closure(&basis, &claimed).unwrap().passed);

        claimed.remove(&(1, 2));
        assert_eq!(check_lie_closure(&basis, &claimed).unwrap_err(), VerifyError::MissingBracket(1, 2));

        claimed.insert((1, 2), PhasePoly::one());
        let c = check_lie_closure(&basis, &claimed).unwrap();
        assert!(!c.passed);
        assert_eq!(c.residual_rendered.as_deref(), Some("{1,2}: -1"));
    }

    #[test]
    fn single_element_closure() {
        let basis = [catalog::k2_3()];
        let mut claimed = BTreeMap::new();
        assert!(check_lie_closure(&basis, &claimed).unwrap().passed);
        claimed.insert((0, 0), PhasePoly::zero());
        assert!(check_lie_closure(&basis, &claimed).unwrap().passed);
        assert_eq!(check_lie_closure(&[], &claimed).unwrap_err(), VerifyError::EmptyBasis);
    }

    #[test]
    fn jacobi_on_catalog_triple() {
        assert!(jacobi_residual(&h_u(), &catalog::k2_3(), &catalog::k3_4()).is_zero());
    }
}
