//! Mass and momentum functionals, error norms, and convergence rates.

use crate::assembly::OperatorSet;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::quadrature::{gauss2, gauss5};
use crate::scalar::Real;
use crate::schemes::SchemeState;

/// Which discrete representation a functional was evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRep {
    /// Elemental, piecewise constant fields.
    PiecewiseConstant,
    /// Nodal, piecewise linear fields.
    PiecewiseLinear,
}

impl FieldRep {
    /// Short tag used in CSV headers.
    pub fn tag(&self) -> &'static str {
        match self {
            FieldRep::PiecewiseConstant => "pc",
            FieldRep::PiecewiseLinear => "pl",
        }
    }
}

/// Mass and momentum of one state in one representation.
#[derive(Debug, Clone, Copy)]
pub struct ConservationRecord<T> {
    /// Simulation time.
    pub t: T,
    /// Total mass, the integral of the height field.
    pub mass: T,
    /// Total momentum, the integral of `h * u`.
    pub momentum: T,
    /// Representation the integrals were taken in.
    pub rep: FieldRep,
}

fn p1_mass<T: Real>(ops: &OperatorSet<T>, h_n: &[T]) -> T {
    // ones^T M h: each node weighted by half the two adjacent widths
    let weighted = ops.m_nn.apply(h_n).expect("dimension checked by caller");
    weighted.iter().fold(T::zero(), |acc, &v| acc + v)
}

/// Integral of the product of two nodal fields, exact per element.
fn p1_p1_product_integral<T: Real>(mesh: &Mesh<T>, a: &[T], b: &[T]) -> T {
    let n = mesh.n();
    let half = T::of(0.5);
    let mut total = T::zero();
    for m in 0..n {
        let dx = mesh.elem_dx()[m];
        let (a0, a1) = (a[m], a[(m + 1) % n]);
        let (b0, b1) = (b[m], b[(m + 1) % n]);
        for (xi, w) in gauss2::<T>() {
            let local = half * (xi + T::one());
            let av = a0 * (T::one() - local) + a1 * local;
            let bv = b0 * (T::one() - local) + b1 * local;
            total += w * half * dx * av * bv;
        }
    }
    total
}

/// Total mass of a state in its natural representation: the elemental one
/// for the split and mixed-constant schemes, the nodal one for `P1P1`.
pub fn mass<T: Real>(state: &SchemeState<T>, ops: &OperatorSet<T>) -> T {
    match state {
        SchemeState::P1P1 { h_n, .. } => p1_mass(ops, h_n),
        SchemeState::P1P0 { h_e, .. } => h_e
            .iter()
            .zip(ops.mesh.elem_dx())
            .fold(T::zero(), |acc, (&h, &dx)| acc + h * dx),
        // integrated coefficients already carry the widths
        SchemeState::Split { h_tilde_e1, .. } => {
            h_tilde_e1.iter().fold(T::zero(), |acc, &v| acc + v)
        }
    }
}

/// Total momentum in the natural representation (see [`mass`]); the mixed
/// linear-constant product is integrated exactly.
pub fn momentum<T: Real>(state: &SchemeState<T>, ops: &OperatorSet<T>) -> T {
    let mesh = &ops.mesh;
    match state {
        SchemeState::P1P1 { u_n, h_n, .. } => p1_p1_product_integral(mesh, u_n, h_n),
        SchemeState::P1P0 { u_n, h_e, .. } => {
            let n = mesh.n();
            let half = T::of(0.5);
            (0..n)
                .map(|m| h_e[m] * mesh.elem_dx()[m] * half * (u_n[m] + u_n[(m + 1) % n]))
                .fold(T::zero(), |acc, v| acc + v)
        }
        SchemeState::Split {
            u_e1, h_tilde_e1, ..
        } => u_e1
            .iter()
            .zip(h_tilde_e1)
            .zip(mesh.elem_dx())
            .map(|((&u, &h), &dx)| u * h / dx)
            .fold(T::zero(), |acc, v| acc + v),
    }
}

/// Mass and momentum in every representation the state carries: one record
/// for mixed schemes, constant and linear records for split schemes.
pub fn conservation_records<T: Real>(
    state: &SchemeState<T>,
    ops: &OperatorSet<T>,
) -> Vec<ConservationRecord<T>> {
    let t = state.time();
    match state {
        SchemeState::P1P1 { .. } => vec![ConservationRecord {
            t,
            mass: mass(state, ops),
            momentum: momentum(state, ops),
            rep: FieldRep::PiecewiseLinear,
        }],
        SchemeState::P1P0 { .. } => vec![ConservationRecord {
            t,
            mass: mass(state, ops),
            momentum: momentum(state, ops),
            rep: FieldRep::PiecewiseConstant,
        }],
        SchemeState::Split {
            h_n0, u_tilde_n0, ..
        } => vec![
            ConservationRecord {
                t,
                mass: mass(state, ops),
                momentum: momentum(state, ops),
                rep: FieldRep::PiecewiseConstant,
            },
            ConservationRecord {
                t,
                mass: p1_mass(ops, h_n0),
                momentum: p1_p1_product_integral(&ops.mesh, u_tilde_n0, h_n0),
                rep: FieldRep::PiecewiseLinear,
            },
        ],
    }
}

/// Continuous L2 distance between a nodal field and a reference function.
pub fn l2_error_p1<T: Real>(mesh: &Mesh<T>, nodal: &[T], f: impl Fn(T) -> T) -> T {
    let n = mesh.n();
    let half = T::of(0.5);
    let mut total = T::zero();
    for m in 0..n {
        let x0 = mesh.node_x()[m];
        let dx = mesh.elem_dx()[m];
        let (v0, v1) = (nodal[m], nodal[(m + 1) % n]);
        for (xi, w) in gauss5::<T>() {
            let local = half * (xi + T::one());
            let field = v0 * (T::one() - local) + v1 * local;
            let diff = field - f(x0 + local * dx);
            total += w * half * dx * diff * diff;
        }
    }
    total.sqrt()
}

/// Continuous L2 distance between an elemental field and a reference function.
pub fn l2_error_p0<T: Real>(mesh: &Mesh<T>, elemental: &[T], f: impl Fn(T) -> T) -> T {
    let n = mesh.n();
    let half = T::of(0.5);
    let mut total = T::zero();
    for m in 0..n {
        let x0 = mesh.node_x()[m];
        let dx = mesh.elem_dx()[m];
        for (xi, w) in gauss5::<T>() {
            let local = half * (xi + T::one());
            let diff = elemental[m] - f(x0 + local * dx);
            total += w * half * dx * diff * diff;
        }
    }
    total.sqrt()
}

/// Observed orders from errors on a dyadic refinement sequence:
/// `rate_i = log2(err_i / err_{i+1})`.
pub fn convergence_rate<T: Real>(errors: &[T], n_values: &[usize]) -> Result<Vec<T>> {
    if errors.len() != n_values.len() {
        return Err(Error::DimensionMismatch {
            expected: n_values.len(),
            got: errors.len(),
        });
    }
    if n_values.len() < 2 || n_values.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::NonDyadic(n_values.to_vec()));
    }
    Ok(errors.windows(2).map(|e| (e[0] / e[1]).log2()).collect())
}
