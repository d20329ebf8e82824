//! Fixed-step symplectic integration of `H = |p|^2 / 2 + V` and drift
//! measurement for the exact integrals.
//!
//! Forces come from symbolic differentiation of the potential, compiled
//! once per run; nothing here differentiates numerically.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{kinetic, CatalogEntry, Kind};
use crate::phasepoly::{CompiledPoly, Direction, DomainError, PhasePoly};

pub use crate::phasepoly::PhasePoint;

/// Default lower guard on `y`.
pub const DEFAULT_Y_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    /// Kick-drift-kick leapfrog, second order.
    Leapfrog2,
    /// Triple-jump composition of leapfrog, fourth order.
    Composed4,
}

impl Integrator {
    pub fn order(self) -> u32 {
        match self {
            Integrator::Leapfrog2 => 2,
            Integrator::Composed4 => 4,
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::Leapfrog2 => "leapfrog2",
            Integrator::Composed4 => "composed4",
        })
    }
}

impl FromStr for Integrator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leapfrog2" => Ok(Integrator::Leapfrog2),
            "composed4" => Ok(Integrator::Composed4),
            other => Err(format!("unknown integrator '{other}' (expected leapfrog2 or composed4)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub h: f64,
    pub t_end: f64,
    pub integrator: Integrator,
    pub y_min: f64,
    /// `(k1, k2, k3)`.
    pub k: [f64; 3],
}

impl SimConfig {
    pub fn new(h: f64, t_end: f64, integrator: Integrator, k: [f64; 3]) -> Self {
        SimConfig {
            h,
            t_end,
            integrator,
            y_min: DEFAULT_Y_MIN,
            k,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidConfig(msg));
        if !self.h.is_finite() || self.h <= 0.0 {
            return bad(format!("step must be positive and finite, got {}", self.h));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return bad(format!("t_end must be positive and finite, got {}", self.t_end));
        }
        if self.h > self.t_end {
            return bad(format!("step {} exceeds t_end {}", self.h, self.t_end));
        }
        if self.y_min.is_nan() || self.y_min <= 0.0 {
            return bad(format!("y_min must be positive, got {}", self.y_min));
        }
        if self.k.iter().any(|v| !v.is_finite()) {
            return bad("parameters must be finite".into());
        }
        Ok(())
    }

    /// Number of steps, `t_end / h` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.h).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("'{0}' is not a potential or a Hamiltonian of the form |p|^2/2 + V")]
    NotAPotential(String),
    #[error("'{0}' is not a scalar function")]
    NotScalar(String),
    #[error("start point has y = {y}, not above the guard y_min = {y_min}")]
    StartBelowGuard { y: f64, y_min: f64 },
    #[error("trajectory left the domain at t = {t}: y = {y} <= y_min = {y_min}")]
    DomainViolation { t: f64, y: f64, y_min: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("convergence study needs at least 3 step sizes, got {0}")]
    TooFewSteps(usize),
    #[error("step sizes must halve successively: {0} then {1}")]
    StepsNotHalving(f64, f64),
    #[error("drift is zero at some step sizes but not others; cannot fit an order")]
    DegenerateFit,
}

/// The potential part of a catalog entry.
pub fn potential_of(entry: &CatalogEntry) -> Result<PhasePoly, DynamicsError> {
    let p = entry
        .as_poly()
        .ok_or_else(|| DynamicsError::NotAPotential(entry.name.clone()))?;
    let v = match entry.kind {
        Kind::Potential => p.clone(),
        Kind::Hamiltonian => p - &kinetic(),
        _ => return Err(DynamicsError::NotAPotential(entry.name.clone())),
    };
    if v.momentum_order().unwrap_or(0) > 0 {
        return Err(DynamicsError::NotAPotential(entry.name.clone()));
    }
    Ok(v)
}

/// `(-dV/dx, -dV/dy)` compiled for fixed parameters.
#[derive(Debug, Clone)]
pub struct ForceModel {
    fx: CompiledPoly,
    fy: CompiledPoly,
}

impl ForceModel {
    pub fn new(potential: &PhasePoly, k: [f64; 3]) -> Self {
        ForceModel {
            fx: CompiledPoly::new(&-potential.derivative(Direction::X), k),
            fy: CompiledPoly::new(&-potential.derivative(Direction::Y), k),
        }
    }

    pub fn force(&self, pt: &PhasePoint) -> Result<(f64, f64), DomainError> {
        Ok((self.fx.eval(pt)?, self.fy.eval(pt)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&PhasePoint> {
        self.points.last()
    }
}

/// Triple-jump weight `1 / (2 - 2^(1/3))`.
pub fn triple_jump_weight() -> f64 {
    1.0 / (2.0 - 2f64.cbrt())
}

struct Stepper<'a> {
    forces: &'a ForceModel,
    y_min: f64,
    pt: PhasePoint,
    f: (f64, f64),
}

impl Stepper<'_> {
    /// One kick-drift-kick substep. Returns the offending `y` on a guard hit.
    fn leapfrog(&mut self, tau: f64) -> Result<(), f64> {
        let half = 0.5 * tau;
        self.pt.px += half * self.f.0;
        self.pt.py += half * self.f.1;
        self.pt.x += tau * self.pt.px;
        self.pt.y += tau * self.pt.py;
        if self.pt.y.is_nan() || self.pt.y <= self.y_min {
            return Err(self.pt.y);
        }
        self.f = self.forces.force(&self.pt).map_err(|e| e.y)?;
        self.pt.px += half * self.f.0;
        self.pt.py += half * self.f.1;
        Ok(())
    }

    fn step(&mut self, h: f64, integrator: Integrator) -> Result<(), f64> {
        match integrator {
            Integrator::Leapfrog2 => self.leapfrog(h),
            Integrator::Composed4 => {
                let c = triple_jump_weight();
                self.leapfrog(c * h)?;
                self.leapfrog((1.0 - 2.0 * c) * h)?;
                self.leapfrog(c * h)
            }
        }
    }
}

/// Integrate the flow of `|p|^2/2 + V` from `start`, sampling every step.
pub fn integrate_potential(
    potential: &PhasePoly,
    start: PhasePoint,
    cfg: &SimConfig,
) -> Result<Trajectory, DynamicsError> {
    cfg.validate()?;
    if start.y.is_nan() || start.y <= cfg.y_min {
        return Err(DynamicsError::StartBelowGuard {
            y: start.y,
            y_min: cfg.y_min,
        });
    }
    let forces = ForceModel::new(potential, cfg.k);
    let n = cfg.steps();
    let mut times = Vec::with_capacity(n + 1);
    let mut points = Vec::with_capacity(n + 1);
    times.push(0.0);
    points.push(start);
    let mut stepper = Stepper {
        forces: &forces,
        y_min: cfg.y_min,
        pt: start,
        f: forces.force(&start)?,
    };
    for i in 1..=n {
        let t = i as f64 * cfg.h;
        stepper
            .step(cfg.h, cfg.integrator)
            .map_err(|y| DynamicsError::DomainViolation {
                t,
                y,
                y_min: cfg.y_min,
            })?;
        times.push(t);
        points.push(stepper.pt);
    }
    Ok(Trajectory { times, points })
}

/// [`integrate_potential`] for a catalog potential or Hamiltonian.
pub fn integrate(
    entry: &CatalogEntry,
    start: PhasePoint,
    cfg: &SimConfig,
) -> Result<Trajectory, DynamicsError> {
    integrate_potential(&potential_of(entry)?, start, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantDrift {
    pub name: String,
    pub initial: f64,
    /// `max_t |I(t) - I(0)| / max(|I(0)|, 1)`.
    pub max_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub invariants: Vec<InvariantDrift>,
    pub samples: usize,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&InvariantDrift> {
        self.invariants.iter().find(|d| d.name == name)
    }
}

impl fmt::Display for DriftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples: {}", self.samples)?;
        for d in &self.invariants {
            writeln!(f, "{}: initial {:e}, max drift {:e}", d.name, d.initial, d.max_drift)?;
        }
        Ok(())
    }
}

fn compile(entry: &CatalogEntry, k: [f64; 3]) -> Result<CompiledPoly, DynamicsError> {
    entry
        .as_poly()
        .map(|p| CompiledPoly::new(p, k))
        .ok_or_else(|| DynamicsError::NotScalar(entry.name.clone()))
}

fn max_drift(traj: &Trajectory, f: &CompiledPoly) -> Result<(f64, f64), DynamicsError> {
    let first = traj.points.first().map(|p| f.eval(p)).transpose()?.unwrap_or(0.0);
    let norm = first.abs().max(1.0);
    let mut worst = 0.0f64;
    for p in &traj.points {
        worst = worst.max((f.eval(p)? - first).abs() / norm);
    }
    Ok((first, worst))
}

pub fn drift_report(
    traj: &Trajectory,
    invariants: &[CatalogEntry],
    k: [f64; 3],
) -> Result<DriftReport, DynamicsError> {
    let invariants = invariants
        .iter()
        .map(|e| {
            let (initial, max_drift) = max_drift(traj, &compile(e, k)?)?;
            Ok(InvariantDrift {
                name: e.name.clone(),
                initial,
                max_drift,
            })
        })
        .collect::<Result<_, DynamicsError>>()?;
    Ok(DriftReport {
        invariants,
        samples: traj.len(),
    })
}

/// Observed convergence order of an invariant's drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    /// Least-squares slope of `log(drift)` against `log(h)`.
    Slope(f64),
    /// Drift vanished at every step size.
    Exact,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Slope(s) => write!(f, "{s:.4}"),
            Order::Exact => f.write_str("exact"),
        }
    }
}

/// Drifts of `invariant` for each step size in `h_list`, all other settings
/// taken from `base`. Runs the sweep in parallel.
pub fn drift_sweep(
    potential: &CatalogEntry,
    start: PhasePoint,
    invariant: &CatalogEntry,
    h_list: &[f64],
    base: &SimConfig,
) -> Result<Vec<f64>, DynamicsError> {
    let v = potential_of(potential)?;
    let f = compile(invariant, base.k)?;
    h_list
        .par_iter()
        .map(|&h| {
            let cfg = SimConfig { h, ..base.clone() };
            let traj = integrate_potential(&v, start, &cfg)?;
            Ok(max_drift(&traj, &f)?.1)
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn convergence_order(
    potential: &CatalogEntry,
    start: PhasePoint,
    invariant: &CatalogEntry,
    h_list: &[f64],
    base: &SimConfig,
) -> Result<Order, DynamicsError> {
    if h_list.len() < 3 {
        return Err(DynamicsError::TooFewSteps(h_list.len()));
    }
    for w in h_list.windows(2) {
        if (w[1] - 0.5 * w[0]).abs() > 1e-9 * w[0] {
            return Err(DynamicsError::StepsNotHalving(w[0], w[1]));
        }
    }
    let drifts = drift_sweep(potential, start, invariant, h_list, base)?;
    if drifts.iter().all(|&d| d == 0.0) {
        return Ok(Order::Exact);
    }
    if drifts.contains(&0.0) {
        return Err(DynamicsError::DegenerateFit);
    }
    Ok(Order::Slope(log_log_slope(h_list, &drifts)))
}

/// Write the trajectory as a tab-separated table with a header row. Values
/// use shortest round-trip formatting.
pub fn write_table<W: Write>(
    out: &mut W,
    traj: &Trajectory,
    invariants: &[CatalogEntry],
    k: [f64; 3],
) -> Result<(), TableError> {
    let compiled = invariants
        .iter()
        .map(|e| compile(e, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut header = vec!["t", "x", "y", "px", "py"];
    header.extend(invariants.iter().map(|e| e.name.as_str()));
    writeln!(out, "{}", header.join("\t"))?;
    for (t, p) in traj.times.iter().zip(&traj.points) {
        let mut row = vec![t.to_string(), p.x.to_string(), p.y.to_string(), p.px.to_string(), p.py.to_string()];
        for f in &compiled {
            row.push(f.eval(p).map_err(DynamicsError::from)?.to_string());
        }
        writeln!(out, "{}", row.join("\t"))?;
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}
