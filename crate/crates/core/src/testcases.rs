//! Analytic solutions and projection of initial data into the discrete spaces.
//!
//! Two families of exact solutions of the linear wave system: a single sine
//! wave and a periodized Gaussian bump, each a superposition of a left- and
//! a right-traveling branch. Initial data enters the schemes by L2
//! projection (linear fields) and element averaging (constant fields).

use crate::assembly::OperatorSet;
use crate::error::{Error, Result};
use crate::hodge::HodgePair;
use crate::quadrature::{gauss2, gauss5};
use crate::scalar::Real;
use crate::schemes::{apply_closure, SchemeSpec, SchemeState, WaveParams};
use crate::solver::factorize;

/// Physical constants of the wave runs.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalParams<T> {
    /// Gravitational acceleration in m/s^2.
    pub g: T,
    /// Mean fluid depth `H` in meters.
    pub h_mean: T,
    /// Height perturbation amplitude in meters.
    pub dh: T,
    /// Domain length `L` in meters.
    pub length: T,
}

impl<T: Real> PhysicalParams<T> {
    /// The reference setup: `g = 9.81`, `H = 1000`, `dH = 75`, `L = 1000`.
    pub fn reference() -> Self {
        Self {
            g: T::of(9.81),
            h_mean: T::of(1000.0),
            dh: T::of(75.0),
            length: T::of(1000.0),
        }
    }

    /// Phase speed `c = sqrt(gH)`.
    pub fn wave_speed(&self) -> T {
        (self.g * self.h_mean).sqrt()
    }

    /// Duration of one domain traversal, `T = L / c`.
    pub fn cycle_time(&self) -> T {
        self.length / self.wave_speed()
    }

    /// The `(g, H)` pair the tendencies need.
    pub fn wave_params(&self) -> WaveParams<T> {
        WaveParams {
            g: self.g,
            h_mean: self.h_mean,
        }
    }
}

/// Width and center of the Gaussian test cases.
#[derive(Debug, Clone, Copy)]
pub struct GaussParams<T> {
    /// Dimensionless width parameter.
    pub width: T,
    /// Bump center in meters.
    pub center: T,
}

impl<T: Real> GaussParams<T> {
    /// Intermediate-width bump centered in the domain.
    pub fn intermediate(p: &PhysicalParams<T>) -> Self {
        Self {
            width: T::of(40.0),
            center: T::of(0.5) * p.length,
        }
    }

    /// Narrow bump exposing the short-wave behavior.
    pub fn narrow(p: &PhysicalParams<T>) -> Self {
        Self {
            width: T::of(1000.0),
            center: T::of(0.5) * p.length,
        }
    }
}

/// Exact single-sine solution; returns `(h, u)` at `(x, t)`.
pub fn tc1_eval<T: Real>(p: &PhysicalParams<T>, x: T, t: T) -> (T, T) {
    let c = p.wave_speed();
    let two_pi = T::TAU();
    let half_dh = T::of(0.5) * p.dh;
    let right = (two_pi / p.length * (x - c * t)).sin();
    let left = (two_pi / p.length * (x + c * t)).sin();
    let h = p.h_mean + half_dh * (right + left);
    let u = c * half_dh / p.h_mean * (right - left);
    (h, u)
}

/// Exact periodized-Gaussian solution; returns `(h, u)` at `(x, t)`.
pub fn tc_gauss_eval<T: Real>(p: &PhysicalParams<T>, gp: &GaussParams<T>, x: T, t: T) -> (T, T) {
    let c = p.wave_speed();
    let half_dh = T::of(0.5) * p.dh;
    let bump = |arg: T| -> T {
        let phase = (T::PI() / p.length * arg).sin();
        let z = gp.width / T::TAU() * phase;
        (-z * z).exp()
    };
    let right = bump(x - c * t - gp.center);
    let left = bump(x + c * t - gp.center);
    let h = p.h_mean + half_dh * (right + left);
    let u = c * half_dh / p.h_mean * (right - left);
    (h, u)
}

/// The initial-condition families selectable in run configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestCase {
    /// Single sine wave.
    Tc1,
    /// Gaussian bump of intermediate width.
    Tc2,
    /// Narrow Gaussian bump.
    Tc3,
    /// Constant height and velocity; every scheme holds it exactly.
    Constant,
}

impl TestCase {
    /// Evaluates `(h, u)` at `(x, t)`.
    pub fn eval<T: Real>(&self, p: &PhysicalParams<T>, x: T, t: T) -> (T, T) {
        match self {
            TestCase::Tc1 => tc1_eval(p, x, t),
            TestCase::Tc2 => tc_gauss_eval(p, &GaussParams::intermediate(p), x, t),
            TestCase::Tc3 => tc_gauss_eval(p, &GaussParams::narrow(p), x, t),
            TestCase::Constant => (p.h_mean, p.wave_speed()),
        }
    }

    /// Lowercase name used by the CLI and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            TestCase::Tc1 => "tc1",
            TestCase::Tc2 => "tc2",
            TestCase::Tc3 => "tc3",
            TestCase::Constant => "constant",
        }
    }
}

impl std::str::FromStr for TestCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "tc1" => Ok(TestCase::Tc1),
            "tc2" => Ok(TestCase::Tc2),
            "tc3" => Ok(TestCase::Tc3),
            "constant" => Ok(TestCase::Constant),
            other => Err(format!("unknown test case: {other}")),
        }
    }
}

/// L2 projection onto the nodal (piecewise linear) space.
pub fn project_p1<T: Real>(ops: &OperatorSet<T>, f: impl Fn(T) -> T) -> Result<Vec<T>> {
    let mesh = &ops.mesh;
    let n = mesh.n();
    let half = T::of(0.5);
    let mut load = vec![T::zero(); n];
    for m in 0..n {
        let x_left = mesh.node_x()[m];
        let dx = mesh.elem_dx()[m];
        let jac = half * dx;
        for (xi, w) in gauss5::<T>() {
            let local = half * (xi + T::one()); // in [0, 1]
            let x = x_left + local * dx;
            let value = f(x);
            // descending hat of node m, ascending hat of node m+1
            load[m] += w * jac * value * (T::one() - local);
            load[(m + 1) % n] += w * jac * value * local;
        }
    }
    factorize(&ops.m_nn)?.solve(&load)
}

/// Element averages, the L2 projection onto the piecewise constant space.
pub fn project_p0<T: Real>(ops: &OperatorSet<T>, f: impl Fn(T) -> T) -> Vec<T> {
    let mesh = &ops.mesh;
    let half = T::of(0.5);
    (0..mesh.n())
        .map(|m| {
            let x_left = mesh.node_x()[m];
            let dx = mesh.elem_dx()[m];
            gauss2::<T>()
                .iter()
                .map(|&(xi, w)| w * half * f(x_left + half * (xi + T::one()) * dx))
                .fold(T::zero(), |acc, v| acc + v)
        })
        .collect()
}

/// Projects an initial condition `x -> (h, u)` into the spaces of a scheme.
///
/// Split states get their diagnosed fields filled by the closure pair, which
/// must be supplied for split variants.
pub fn project_initial<T: Real>(
    f: impl Fn(T) -> (T, T),
    spec: &SchemeSpec<T>,
    ops: &OperatorSet<T>,
    pair: Option<&HodgePair<'_, T>>,
) -> Result<SchemeState<T>> {
    use crate::schemes::SchemeVariant;
    let h_of = |x: T| f(x).0;
    let u_of = |x: T| f(x).1;
    match spec.variant {
        SchemeVariant::P1P1 => Ok(SchemeState::P1P1 {
            u_n: project_p1(ops, u_of)?,
            h_n: project_p1(ops, h_of)?,
            t: T::zero(),
        }),
        SchemeVariant::P1P0 => Ok(SchemeState::P1P0 {
            u_n: project_p1(ops, u_of)?,
            h_e: project_p0(ops, h_of),
            t: T::zero(),
        }),
        _ => {
            let pair = pair.ok_or(Error::StateMismatch {
                expected: "split (hodge pair missing)",
            })?;
            let n = ops.mesh.n();
            let u_mean = project_p0(ops, u_of);
            let u_e1 = (0..n).map(|m| u_mean[m] * ops.mesh.elem_dx()[m]).collect();
            let mut state = SchemeState::Split {
                u_e1,
                h_n0: project_p1(ops, h_of)?,
                h_tilde_e1: vec![T::zero(); n],
                u_tilde_n0: vec![T::zero(); n],
                t: T::zero(),
            };
            apply_closure(pair, &mut state)?;
            Ok(state)
        }
    }
}
