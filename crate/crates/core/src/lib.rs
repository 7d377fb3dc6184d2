//! Finite element solvers for the 1D linear shallow-water wave equations on
//! a periodic mesh.
//!
//! Two mixed schemes (linear-linear and linear-constant pairs) and a split
//! scheme with four metric closures built from Galerkin-projection Hodge
//! stars share one operator set, a Crank-Nicolson fixed-point time stepper,
//! and a common diagnostics layer. The dispersion module evaluates each
//! scheme's phase-speed curve both in closed form and from its plane-wave
//! symbol pencil.
//!
//! Everything numerical is generic over the scalar type through [`Real`];
//! the `*64` aliases fix `f64` for the common case.
//!
//! ```
//! use splitwave::{assemble_all, Mesh, PhysicalParams, SchemeSpec, SchemeVariant};
//! use splitwave::{project_initial, HodgePair, SolverConfig, integrate};
//!
//! let params = PhysicalParams::<f64>::reference();
//! let ops = assemble_all(Mesh::uniform_periodic(32, params.length).unwrap());
//! let variant = SchemeVariant::Gp1Gp0;
//! let spec = SchemeSpec::new(variant, 32);
//! let (su, sh) = variant.hodge_tags().unwrap();
//! let pair = HodgePair::new(su, sh, &ops).unwrap();
//! let state = project_initial(
//!     |x| splitwave::tc1_eval(&params, x, 0.0),
//!     &spec,
//!     &ops,
//!     Some(&pair),
//! ).unwrap();
//! let dt = 0.5 * spec.cfl_limit * ops.mesh.min_dx() / params.wave_speed();
//! let out = integrate(
//!     &spec, &ops, Some(&pair), params.wave_params(), state,
//!     &SolverConfig::new(dt), params.cycle_time(), 0, &mut |_| {},
//! ).unwrap();
//! assert!(out.time() > 0.0);
//! ```

// Index-based loops mirror the banded stencils; negated comparisons are
// deliberate NaN guards on user-supplied values.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod dense;
pub mod diagnostics;
pub mod dispersion;
pub mod error;
pub mod hodge;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod schemes;
pub mod solver;
pub mod testcases;
pub mod timestepper;

pub use assembly::{assemble_all, CyclicBandedMatrix, OperatorSet};
pub use diagnostics::{
    conservation_records, convergence_rate, l2_error_p0, l2_error_p1, mass, momentum,
    ConservationRecord, FieldRep,
};
pub use dispersion::{cd_analytic, cd_continuous, cd_numeric, sample_curve, DispersionSample};
pub use error::{Error, Result};
pub use hodge::{HodgePair, StarAccuracy};
pub use mesh::Mesh;
pub use scalar::Real;
pub use schemes::{
    apply_closure, split_topological_tendency, tendency_p1p0, tendency_p1p1, SchemeSpec,
    SchemeState, SchemeVariant, WaveParams,
};
pub use solver::{factorize, Factorization};
pub use testcases::{
    project_initial, project_p0, project_p1, tc1_eval, tc_gauss_eval, GaussParams, PhysicalParams,
    TestCase,
};
pub use timestepper::{cfl_number, integrate, step, SolverConfig};

/// `f64` mesh.
pub type Mesh64 = Mesh<f64>;
/// `f64` operator set.
pub type OperatorSet64 = OperatorSet<f64>;
/// `f64` Hodge pair.
pub type HodgePair64<'a> = HodgePair<'a, f64>;
/// `f64` scheme resolution.
pub type SchemeSpec64 = SchemeSpec<f64>;
/// `f64` state.
pub type SchemeState64 = SchemeState<f64>;
/// `f64` stepping configuration.
pub type SolverConfig64 = SolverConfig<f64>;
/// `f64` physical constants.
pub type PhysicalParams64 = PhysicalParams<f64>;
