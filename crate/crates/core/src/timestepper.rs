//! Crank-Nicolson time discretization solved by fixed-point iteration.
//!
//! Each step freezes the explicit half of the trapezoidal update and sweeps
//! height-then-velocity until the summed max-norm update falls below the
//! stopping tolerance. The split variants project through the Hodge pair
//! inside every sweep; the mixed variants run the analogous two-field loop
//! against their mass matrices.

use crate::assembly::OperatorSet;
use crate::error::{Error, Result};
use crate::hodge::HodgePair;
use crate::scalar::{norm_inf, Real};
use crate::schemes::{SchemeSpec, SchemeState, SchemeVariant, WaveParams};
use crate::solver::{factorize, Factorization};

/// Time step size, stopping tolerance, and iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig<T> {
    /// Time step size in seconds.
    pub dt: T,
    /// Absolute stopping tolerance on the summed update norms. `None` picks
    /// a scale-aware default per step.
    pub epsilon: Option<T>,
    /// Iteration budget before the step reports divergence.
    pub max_iterations: usize,
    /// When set, a step whose CFL number exceeds the scheme limit is refused.
    pub enforce_cfl: bool,
}

impl<T: Real> SolverConfig<T> {
    /// Config with the defaults: auto tolerance, 200 iterations, CFL enforced.
    pub fn new(dt: T) -> Self {
        Self {
            dt,
            epsilon: None,
            max_iterations: 200,
            enforce_cfl: true,
        }
    }

    /// Stopping tolerance for a given state scale `|u| + |h|`.
    fn epsilon_for(&self, field_scale: T) -> T {
        match self.epsilon {
            Some(e) => e,
            // 1e-12 per unit of field magnitude, floored by the machine epsilon
            None => (field_scale + T::one()) * T::of(1e-12).max(T::epsilon() * T::of(8.0)),
        }
    }
}

/// CFL number `sqrt(g H) dt / dx`.
pub fn cfl_number<T: Real>(g: T, h_mean: T, dt: T, dx: T) -> T {
    (g * h_mean).sqrt() * dt / dx
}

fn check_cfl<T: Real>(
    spec: &SchemeSpec<T>,
    ops: &OperatorSet<T>,
    params: WaveParams<T>,
    cfg: &SolverConfig<T>,
) -> Result<()> {
    if !cfg.enforce_cfl {
        return Ok(());
    }
    let mu = cfl_number(params.g, params.h_mean, cfg.dt.abs(), ops.mesh.min_dx());
    if mu > spec.cfl_limit {
        return Err(Error::CflExceeded {
            mu: mu.to_f64().unwrap_or(f64::NAN),
            limit: spec.cfl_limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn axpy<T: Real>(y: &mut [T], alpha: T, x: &[T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn diff_norm<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

/// Advances a state by one Crank-Nicolson step.
///
/// For mixed variants `pair` is optional; when given, its nodal mass
/// factorization is reused instead of factoring again.
pub fn step<T: Real>(
    spec: &SchemeSpec<T>,
    ops: &OperatorSet<T>,
    pair: Option<&HodgePair<'_, T>>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
    cfg: &SolverConfig<T>,
) -> Result<SchemeState<T>> {
    check_cfl(spec, ops, params, cfg)?;
    match spec.variant {
        SchemeVariant::P1P1 => step_p1p1(ops, pair, params, state, cfg),
        SchemeVariant::P1P0 => step_p1p0(ops, pair, params, state, cfg),
        _ => {
            let pair = pair.ok_or(Error::StateMismatch {
                expected: "split (hodge pair missing)",
            })?;
            step_split(ops, pair, params, state, cfg)
        }
    }
}

fn owned_or_factorized<'f, T: Real>(
    pair: Option<&'f HodgePair<'_, T>>,
    ops: &OperatorSet<T>,
    storage: &'f mut Option<Factorization<T>>,
) -> Result<&'f Factorization<T>> {
    match pair {
        Some(p) => Ok(p.factor_m_nn()),
        None => {
            *storage = Some(factorize(&ops.m_nn)?);
            Ok(storage.as_ref().unwrap())
        }
    }
}

fn step_p1p1<T: Real>(
    ops: &OperatorSet<T>,
    pair: Option<&HodgePair<'_, T>>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
    cfg: &SolverConfig<T>,
) -> Result<SchemeState<T>> {
    let SchemeState::P1P1 { u_n, h_n, t } = state else {
        return Err(Error::StateMismatch { expected: "P1P1" });
    };
    let mut storage = None;
    let f_m_nn = owned_or_factorized(pair, ops, &mut storage)?;
    let half_dt = T::of(0.5) * cfg.dt;
    let eps = cfg.epsilon_for(norm_inf(u_n) + norm_inf(h_n));

    // du(h) = -g M^-1 D h, dh(u) = -H M^-1 D u
    let du_of = |h: &[T]| -> Result<Vec<T>> {
        let mut v = f_m_nn.solve(&ops.d_nn.apply(h)?)?;
        for x in &mut v {
            *x = -params.g * *x;
        }
        Ok(v)
    };
    let dh_of = |u: &[T]| -> Result<Vec<T>> {
        let mut v = f_m_nn.solve(&ops.d_nn.apply(u)?)?;
        for x in &mut v {
            *x = -params.h_mean * *x;
        }
        Ok(v)
    };

    let du_old = du_of(h_n)?;
    let dh_old = dh_of(u_n)?;
    let mut u = u_n.clone();
    let mut h = h_n.clone();
    let mut residual = T::infinity();
    for _ in 0..cfg.max_iterations {
        let mut h_next = h_n.clone();
        axpy(&mut h_next, half_dt, &dh_old);
        axpy(&mut h_next, half_dt, &dh_of(&u)?);
        let mut u_next = u_n.clone();
        axpy(&mut u_next, half_dt, &du_old);
        axpy(&mut u_next, half_dt, &du_of(&h_next)?);
        residual = diff_norm(&u_next, &u) + diff_norm(&h_next, &h);
        u = u_next;
        h = h_next;
        if residual < eps {
            return Ok(SchemeState::P1P1 {
                u_n: u,
                h_n: h,
                t: *t + cfg.dt,
            });
        }
    }
    Err(Error::Diverged {
        iterations: cfg.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

fn step_p1p0<T: Real>(
    ops: &OperatorSet<T>,
    pair: Option<&HodgePair<'_, T>>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
    cfg: &SolverConfig<T>,
) -> Result<SchemeState<T>> {
    let SchemeState::P1P0 { u_n, h_e, t } = state else {
        return Err(Error::StateMismatch { expected: "P1P0" });
    };
    let mut storage = None;
    let f_m_nn = owned_or_factorized(pair, ops, &mut storage)?;
    let inv_dx: Vec<T> = ops.mesh.elem_dx().iter().map(|&w| T::one() / w).collect();
    let half_dt = T::of(0.5) * cfg.dt;
    let eps = cfg.epsilon_for(norm_inf(u_n) + norm_inf(h_e));

    // du(h) = +g M^-1 D^ne h (weak form), dh(u) = -H M_ee^-1 D^en u
    let du_of = |h: &[T]| -> Result<Vec<T>> {
        let mut v = f_m_nn.solve(&ops.d_ne.apply(h)?)?;
        for x in &mut v {
            *x = params.g * *x;
        }
        Ok(v)
    };
    let dh_of = |u: &[T]| -> Result<Vec<T>> {
        let mut v = ops.d_en.apply(u)?;
        for (x, &w) in v.iter_mut().zip(&inv_dx) {
            *x = -params.h_mean * *x * w;
        }
        Ok(v)
    };

    let du_old = du_of(h_e)?;
    let dh_old = dh_of(u_n)?;
    let mut u = u_n.clone();
    let mut h = h_e.clone();
    let mut residual = T::infinity();
    for _ in 0..cfg.max_iterations {
        let mut h_next = h_e.clone();
        axpy(&mut h_next, half_dt, &dh_old);
        axpy(&mut h_next, half_dt, &dh_of(&u)?);
        let mut u_next = u_n.clone();
        axpy(&mut u_next, half_dt, &du_old);
        axpy(&mut u_next, half_dt, &du_of(&h_next)?);
        residual = diff_norm(&u_next, &u) + diff_norm(&h_next, &h);
        u = u_next;
        h = h_next;
        if residual < eps {
            return Ok(SchemeState::P1P0 {
                u_n: u,
                h_e: h,
                t: *t + cfg.dt,
            });
        }
    }
    Err(Error::Diverged {
        iterations: cfg.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

fn step_split<T: Real>(
    ops: &OperatorSet<T>,
    pair: &HodgePair<'_, T>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
    cfg: &SolverConfig<T>,
) -> Result<SchemeState<T>> {
    let SchemeState::Split {
        u_e1,
        h_n0,
        h_tilde_e1,
        u_tilde_n0,
        t,
    } = state
    else {
        return Err(Error::StateMismatch { expected: "split" });
    };
    let half_dt = T::of(0.5) * cfg.dt;
    let eps = cfg.epsilon_for(norm_inf(u_e1) + norm_inf(h_tilde_e1));

    // Explicit halves of the trapezoidal update, frozen for the whole step.
    let mut d_t = h_tilde_e1.clone();
    axpy(
        &mut d_t,
        -half_dt * params.h_mean,
        &ops.d_en.apply(u_tilde_n0)?,
    );
    let mut f_t = u_e1.clone();
    axpy(&mut f_t, -half_dt * params.g, &ops.d_en.apply(h_n0)?);

    let mut u = u_e1.clone();
    let mut h_tilde = h_tilde_e1.clone();
    let mut residual = T::infinity();
    for _ in 0..cfg.max_iterations {
        // project the velocity iterate, advance the height
        let u_tilde = pair.star_u_apply(&u)?;
        let mut h_tilde_next = d_t.clone();
        axpy(
            &mut h_tilde_next,
            -half_dt * params.h_mean,
            &ops.d_en.apply(&u_tilde)?,
        );
        // recover the nodal height, advance the velocity
        let h_next = pair.star_h_inverse_apply(&h_tilde_next)?;
        let mut u_next = f_t.clone();
        axpy(&mut u_next, -half_dt * params.g, &ops.d_en.apply(&h_next)?);
        residual = diff_norm(&u_next, &u) + diff_norm(&h_tilde_next, &h_tilde);
        u = u_next;
        h_tilde = h_tilde_next;
        if residual < eps {
            let u_tilde_n0 = pair.star_u_apply(&u)?;
            return Ok(SchemeState::Split {
                u_e1: u,
                h_n0: h_next,
                h_tilde_e1: h_tilde,
                u_tilde_n0,
                t: *t + cfg.dt,
            });
        }
    }
    Err(Error::Diverged {
        iterations: cfg.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}

/// Integrates to `t_end` with fixed steps; the final step is shortened to
/// land exactly. The observer runs on the initial state, every `stride`-th
/// step (stride 0 observes every step), and the final state.
#[allow(clippy::too_many_arguments)]
pub fn integrate<T: Real, F>(
    spec: &SchemeSpec<T>,
    ops: &OperatorSet<T>,
    pair: Option<&HodgePair<'_, T>>,
    params: WaveParams<T>,
    state: SchemeState<T>,
    cfg: &SolverConfig<T>,
    t_end: T,
    stride: usize,
    observer: &mut F,
) -> Result<SchemeState<T>>
where
    F: FnMut(&SchemeState<T>),
{
    if t_end < state.time() {
        return Err(Error::NumericalFailure(format!(
            "t_end {t_end} lies before the state time {}",
            state.time()
        )));
    }
    if !(cfg.dt > T::zero()) {
        return Err(Error::NumericalFailure(
            "integration requires dt > 0".into(),
        ));
    }
    let stride = stride.max(1);
    let tiny = cfg.dt * T::of(1e-12);
    let mut current = state;
    observer(&current);
    let mut step_index = 0usize;
    while t_end - current.time() > tiny {
        let remaining = t_end - current.time();
        let dt_step = if remaining < cfg.dt {
            remaining
        } else {
            cfg.dt
        };
        let step_cfg = SolverConfig {
            dt: dt_step,
            ..*cfg
        };
        current = step(spec, ops, pair, params, &current, &step_cfg)?;
        step_index += 1;
        let done = t_end - current.time() <= tiny;
        if done {
            current.set_time(t_end);
        }
        if step_index.is_multiple_of(stride) || done {
            observer(&current);
        }
    }
    Ok(current)
}
