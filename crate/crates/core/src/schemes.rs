//! The six semi-discrete schemes: two mixed pairs and the split system with
//! its four metric closures.
//!
//! Mixed schemes evolve coefficient vectors against mass matrices; the split
//! scheme evolves integrated elemental vectors through the metric-free
//! difference operator and closes the system with a Hodge-star pair.

use crate::assembly::OperatorSet;
use crate::error::{Error, Result};
use crate::hodge::{HodgePair, StarAccuracy};
use crate::scalar::Real;
use crate::solver::factorize;

/// Gravitational acceleration and mean fluid depth.
#[derive(Debug, Clone, Copy)]
pub struct WaveParams<T> {
    /// Gravitational acceleration `g`.
    pub g: T,
    /// Mean fluid depth `H`.
    pub h_mean: T,
}

impl<T: Real> WaveParams<T> {
    /// Phase speed `sqrt(g H)`.
    pub fn wave_speed(&self) -> T {
        (self.g * self.h_mean).sqrt()
    }
}

/// The six scheme variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeVariant {
    /// Both fields piecewise linear (unstable pair).
    P1P1,
    /// Linear velocity, constant height (stable pair).
    P1P0,
    /// Split scheme, both closures projected onto the linear space.
    Gp1Gp1,
    /// Split scheme, linear velocity closure, constant height closure.
    Gp1Gp0,
    /// Split scheme, constant velocity closure, linear height closure.
    Gp0Gp1,
    /// Split scheme, both closures projected onto the constant space.
    Gp0Gp0,
}

impl SchemeVariant {
    /// All variants in a fixed order.
    pub const ALL: [SchemeVariant; 6] = [
        SchemeVariant::P1P1,
        SchemeVariant::P1P0,
        SchemeVariant::Gp1Gp1,
        SchemeVariant::Gp1Gp0,
        SchemeVariant::Gp0Gp1,
        SchemeVariant::Gp0Gp0,
    ];

    /// True for the four split variants.
    pub fn is_split(&self) -> bool {
        !matches!(self, SchemeVariant::P1P1 | SchemeVariant::P1P0)
    }

    /// Hodge pair tags for the split variants, `None` for the mixed ones.
    pub fn hodge_tags(&self) -> Option<(StarAccuracy, StarAccuracy)> {
        match self {
            SchemeVariant::P1P1 | SchemeVariant::P1P0 => None,
            SchemeVariant::Gp1Gp1 => Some((StarAccuracy::Gp1, StarAccuracy::Gp1)),
            SchemeVariant::Gp1Gp0 => Some((StarAccuracy::Gp1, StarAccuracy::Gp0)),
            SchemeVariant::Gp0Gp1 => Some((StarAccuracy::Gp0, StarAccuracy::Gp1)),
            SchemeVariant::Gp0Gp0 => Some((StarAccuracy::Gp0, StarAccuracy::Gp0)),
        }
    }

    /// Empirical CFL threshold for the fixed-point solver on an `n`-element mesh.
    pub fn cfl_limit<T: Real>(&self, n: usize) -> T {
        match self {
            SchemeVariant::P1P1 | SchemeVariant::Gp1Gp1 => T::of(1.15),
            SchemeVariant::P1P0 | SchemeVariant::Gp1Gp0 | SchemeVariant::Gp0Gp1 => T::of(0.57),
            SchemeVariant::Gp0Gp0 => T::of(1.15) / (T::of_usize(n) / T::of(2.0)),
        }
    }

    /// Short lowercase name used in CLI arguments and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            SchemeVariant::P1P1 => "p1p1",
            SchemeVariant::P1P0 => "p1p0",
            SchemeVariant::Gp1Gp1 => "gp1gp1",
            SchemeVariant::Gp1Gp0 => "gp1gp0",
            SchemeVariant::Gp0Gp1 => "gp0gp1",
            SchemeVariant::Gp0Gp0 => "gp0gp0",
        }
    }
}

impl std::str::FromStr for SchemeVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "p1p1" => Ok(SchemeVariant::P1P1),
            "p1p0" => Ok(SchemeVariant::P1P0),
            "gp1gp1" => Ok(SchemeVariant::Gp1Gp1),
            "gp1gp0" => Ok(SchemeVariant::Gp1Gp0),
            "gp0gp1" => Ok(SchemeVariant::Gp0Gp1),
            "gp0gp0" => Ok(SchemeVariant::Gp0Gp0),
            other => Err(format!("unknown scheme variant: {other}")),
        }
    }
}

impl std::fmt::Display for SchemeVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A variant resolved against a mesh size: carries the CFL threshold and the
/// closure tags.
#[derive(Debug, Clone, Copy)]
pub struct SchemeSpec<T> {
    /// Which of the six schemes.
    pub variant: SchemeVariant,
    /// CFL threshold for this variant at the given resolution.
    pub cfl_limit: T,
    /// Closure pair for split variants.
    pub hodge_tags: Option<(StarAccuracy, StarAccuracy)>,
}

impl<T: Real> SchemeSpec<T> {
    /// Resolves a variant for a mesh with `n` elements.
    pub fn new(variant: SchemeVariant, n: usize) -> Self {
        Self {
            variant,
            cfl_limit: variant.cfl_limit(n),
            hodge_tags: variant.hodge_tags(),
        }
    }
}

/// Per-variant field vectors plus the simulation time.
#[derive(Debug, Clone)]
pub enum SchemeState<T> {
    /// Nodal velocity and height coefficients.
    P1P1 {
        /// Nodal velocity coefficients.
        u_n: Vec<T>,
        /// Nodal height coefficients.
        h_n: Vec<T>,
        /// Simulation time.
        t: T,
    },
    /// Nodal velocity, elemental (pointwise) height.
    P1P0 {
        /// Nodal velocity coefficients.
        u_n: Vec<T>,
        /// Elemental height values.
        h_e: Vec<T>,
        /// Simulation time.
        t: T,
    },
    /// Split state: two integrated elemental vectors and two nodal vectors.
    Split {
        /// Integrated elemental velocity (value times width).
        u_e1: Vec<T>,
        /// Nodal height coefficients.
        h_n0: Vec<T>,
        /// Integrated elemental height (value times width).
        h_tilde_e1: Vec<T>,
        /// Nodal velocity coefficients.
        u_tilde_n0: Vec<T>,
        /// Simulation time.
        t: T,
    },
}

impl<T: Real> SchemeState<T> {
    /// Simulation time of the state.
    pub fn time(&self) -> T {
        match self {
            SchemeState::P1P1 { t, .. }
            | SchemeState::P1P0 { t, .. }
            | SchemeState::Split { t, .. } => *t,
        }
    }

    /// Overwrites the simulation time.
    pub fn set_time(&mut self, time: T) {
        match self {
            SchemeState::P1P1 { t, .. }
            | SchemeState::P1P0 { t, .. }
            | SchemeState::Split { t, .. } => *t = time,
        }
    }

    /// Number of degrees of freedom per field.
    pub fn n(&self) -> usize {
        match self {
            SchemeState::P1P1 { u_n, .. } => u_n.len(),
            SchemeState::P1P0 { u_n, .. } => u_n.len(),
            SchemeState::Split { u_e1, .. } => u_e1.len(),
        }
    }

    /// Largest absolute coefficient over all fields.
    pub fn norm_inf(&self) -> T {
        let fields: Vec<&[T]> = match self {
            SchemeState::P1P1 { u_n, h_n, .. } => vec![u_n, h_n],
            SchemeState::P1P0 { u_n, h_e, .. } => vec![u_n, h_e],
            SchemeState::Split {
                u_e1,
                h_n0,
                h_tilde_e1,
                u_tilde_n0,
                ..
            } => {
                vec![u_e1, h_n0, h_tilde_e1, u_tilde_n0]
            }
        };
        fields
            .into_iter()
            .flat_map(|f| f.iter())
            .fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Largest absolute difference in matching fields of two states.
    pub fn max_diff(&self, other: &SchemeState<T>) -> T {
        fn diff<T: Real>(a: &[T], b: &[T]) -> T {
            a.iter()
                .zip(b)
                .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
        }
        match (self, other) {
            (
                SchemeState::P1P1 {
                    u_n: u1, h_n: h1, ..
                },
                SchemeState::P1P1 {
                    u_n: u2, h_n: h2, ..
                },
            ) => diff(u1, u2).max(diff(h1, h2)),
            (
                SchemeState::P1P0 {
                    u_n: u1, h_e: h1, ..
                },
                SchemeState::P1P0 {
                    u_n: u2, h_e: h2, ..
                },
            ) => diff(u1, u2).max(diff(h1, h2)),
            (
                SchemeState::Split {
                    u_e1: a1,
                    h_n0: b1,
                    h_tilde_e1: c1,
                    u_tilde_n0: d1,
                    ..
                },
                SchemeState::Split {
                    u_e1: a2,
                    h_n0: b2,
                    h_tilde_e1: c2,
                    u_tilde_n0: d2,
                    ..
                },
            ) => diff(a1, a2)
                .max(diff(b1, b2))
                .max(diff(c1, c2))
                .max(diff(d1, d2)),
            _ => T::infinity(),
        }
    }
}

/// Semi-discrete velocity and height tendencies of the linear-linear pair.
pub fn tendency_p1p1<T: Real>(
    ops: &OperatorSet<T>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let SchemeState::P1P1 { u_n, h_n, .. } = state else {
        return Err(Error::StateMismatch { expected: "P1P1" });
    };
    let f_m_nn = factorize(&ops.m_nn)?;
    let mut du = f_m_nn.solve(&ops.d_nn.apply(h_n)?)?;
    for v in &mut du {
        *v = -params.g * *v;
    }
    let mut dh = f_m_nn.solve(&ops.d_nn.apply(u_n)?)?;
    for v in &mut dh {
        *v = -params.h_mean * *v;
    }
    Ok((du, dh))
}

/// Semi-discrete tendencies of the linear-constant pair; the height gradient
/// acts through the transposed difference operator (weak momentum form).
pub fn tendency_p1p0<T: Real>(
    ops: &OperatorSet<T>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let SchemeState::P1P0 { u_n, h_e, .. } = state else {
        return Err(Error::StateMismatch { expected: "P1P0" });
    };
    let f_m_nn = factorize(&ops.m_nn)?;
    let f_m_ee = factorize(&ops.m_ee)?;
    let mut du = f_m_nn.solve(&ops.d_ne.apply(h_e)?)?;
    for v in &mut du {
        *v = params.g * *v;
    }
    let mut dh = f_m_ee.solve(&ops.d_en.apply(u_n)?)?;
    for v in &mut dh {
        *v = -params.h_mean * *v;
    }
    Ok((du, dh))
}

/// Metric-free tendencies of the split system: plain differences of the
/// nodal fields, no mass-matrix solve.
pub fn split_topological_tendency<T: Real>(
    ops: &OperatorSet<T>,
    params: WaveParams<T>,
    state: &SchemeState<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let SchemeState::Split {
        h_n0, u_tilde_n0, ..
    } = state
    else {
        return Err(Error::StateMismatch { expected: "split" });
    };
    let mut du = ops.d_en.apply(h_n0)?;
    for v in &mut du {
        *v = -params.g * *v;
    }
    let mut dh = ops.d_en.apply(u_tilde_n0)?;
    for v in &mut dh {
        *v = -params.h_mean * *v;
    }
    Ok((du, dh))
}

/// Refreshes the diagnosed fields of a split state from its prognostic ones:
/// the nodal velocity from the integrated elemental one, and the integrated
/// elemental height from the nodal one.
pub fn apply_closure<T: Real>(pair: &HodgePair<'_, T>, state: &mut SchemeState<T>) -> Result<()> {
    let SchemeState::Split {
        u_e1,
        h_n0,
        h_tilde_e1,
        u_tilde_n0,
        ..
    } = state
    else {
        return Err(Error::StateMismatch { expected: "split" });
    };
    *u_tilde_n0 = pair.star_u_apply(u_e1)?;
    *h_tilde_e1 = pair.star_h_apply(h_n0)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_all;
    use crate::mesh::Mesh;
    use crate::scalar::norm_inf;

    fn ops(n: usize) -> OperatorSet<f64> {
        assemble_all(Mesh::uniform_periodic(n, n as f64).unwrap())
    }

    const UNIT: WaveParams<f64> = WaveParams {
        g: 1.0,
        h_mean: 1.0,
    };

    #[test]
    fn constant_states_have_zero_tendency() {
        let ops4 = ops(4);
        let p1p1 = SchemeState::P1P1 {
            u_n: vec![2.0; 4],
            h_n: vec![5.0; 4],
            t: 0.0,
        };
        let (du, dh) = tendency_p1p1(&ops4, UNIT, &p1p1).unwrap();
        assert!(norm_inf(&du) < 1e-14 && norm_inf(&dh) < 1e-14);

        let p1p0 = SchemeState::P1P0 {
            u_n: vec![2.0; 4],
            h_e: vec![5.0; 4],
            t: 0.0,
        };
        let (du, dh) = tendency_p1p0(&ops4, UNIT, &p1p0).unwrap();
        assert!(norm_inf(&du) < 1e-14 && norm_inf(&dh) < 1e-14);

        let split = SchemeState::Split {
            u_e1: vec![2.0; 4],
            h_n0: vec![5.0; 4],
            h_tilde_e1: vec![5.0; 4],
            u_tilde_n0: vec![2.0; 4],
            t: 0.0,
        };
        let (du, dh) = split_topological_tendency(&ops4, UNIT, &split).unwrap();
        assert!(norm_inf(&du) < 1e-14 && norm_inf(&dh) < 1e-14);
    }

    #[test]
    fn p1p1_small_case_matches_frozen_solve() {
        // M^-1 for N=3 unit widths is 2I - J/3; rhs = D^nn (1,0,0) = (0,-1/2,1/2)
        let ops3 = ops(3);
        let state = SchemeState::P1P1 {
            u_n: vec![0.0; 3],
            h_n: vec![1.0, 0.0, 0.0],
            t: 0.0,
        };
        let (du, _) = tendency_p1p1(&ops3, UNIT, &state).unwrap();
        let expected = [0.0, 1.0, -1.0];
        for (a, b) in du.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13, "du = {du:?}");
        }
    }

    #[test]
    fn split_ramp_tendency_telescopes() {
        let mesh = Mesh::nonuniform_periodic(&[1.0, 2.0, 0.5, 1.5]).unwrap();
        let ops = assemble_all(mesh);
        let g = 3.0;
        let state = SchemeState::Split {
            u_e1: vec![0.0; 4],
            h_n0: ops.mesh.node_x().to_vec(),
            h_tilde_e1: vec![0.0; 4],
            u_tilde_n0: vec![0.0; 4],
            t: 0.0,
        };
        let (du, _) =
            split_topological_tendency(&ops, WaveParams { g, h_mean: 1.0 }, &state).unwrap();
        let dx = ops.mesh.elem_dx();
        let l = ops.mesh.length();
        assert_eq!(du[0], -g * dx[0]);
        assert_eq!(du[1], -g * dx[1]);
        assert_eq!(du[2], -g * dx[2]);
        assert_eq!(du[3], -g * (dx[3] - l));
    }

    #[test]
    fn tendencies_are_linear() {
        let ops5 = ops(5);
        let s1 = SchemeState::P1P1 {
            u_n: vec![0.1, -0.4, 0.9, 0.0, 0.3],
            h_n: vec![1.0, 0.2, -0.7, 0.5, -0.1],
            t: 0.0,
        };
        let s2 = SchemeState::P1P1 {
            u_n: vec![-0.6, 0.8, 0.2, -0.9, 0.4],
            h_n: vec![0.3, -0.2, 0.1, 0.6, -0.8],
            t: 0.0,
        };
        let (alpha, beta) = (1.7, -0.6);
        let combo = match (&s1, &s2) {
            (
                SchemeState::P1P1 {
                    u_n: u1, h_n: h1, ..
                },
                SchemeState::P1P1 {
                    u_n: u2, h_n: h2, ..
                },
            ) => SchemeState::P1P1 {
                u_n: u1
                    .iter()
                    .zip(u2)
                    .map(|(a, b)| alpha * a + beta * b)
                    .collect(),
                h_n: h1
                    .iter()
                    .zip(h2)
                    .map(|(a, b)| alpha * a + beta * b)
                    .collect(),
                t: 0.0,
            },
            _ => unreachable!(),
        };
        let (du1, dh1) = tendency_p1p1(&ops5, UNIT, &s1).unwrap();
        let (du2, dh2) = tendency_p1p1(&ops5, UNIT, &s2).unwrap();
        let (du, dh) = tendency_p1p1(&ops5, UNIT, &combo).unwrap();
        for i in 0..5 {
            assert!((du[i] - (alpha * du1[i] + beta * du2[i])).abs() < 1e-12);
            assert!((dh[i] - (alpha * dh1[i] + beta * dh2[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn height_tendencies_conserve_total_mass() {
        let ops5 = ops(5);
        let state = SchemeState::Split {
            u_e1: vec![0.0; 5],
            h_n0: vec![0.0; 5],
            h_tilde_e1: vec![0.0; 5],
            u_tilde_n0: vec![0.4, -1.0, 0.2, 0.9, -0.5],
            t: 0.0,
        };
        let (_, dh) = split_topological_tendency(&ops5, UNIT, &state).unwrap();
        let total: f64 = dh.iter().sum();
        assert!(total.abs() < 1e-14);

        // weighted by the element widths the same telescoping holds
        let mesh = Mesh::nonuniform_periodic(&[0.5, 1.5, 1.0, 0.25, 2.0]).unwrap();
        let ops = assemble_all(mesh);
        let state = SchemeState::P1P0 {
            u_n: vec![0.4, -1.0, 0.2, 0.9, -0.5],
            h_e: vec![0.0; 5],
            t: 0.0,
        };
        let (_, dh) = tendency_p1p0(&ops, UNIT, &state).unwrap();
        let total: f64 = dh.iter().zip(ops.mesh.elem_dx()).map(|(v, w)| v * w).sum();
        assert!(total.abs() < 1e-13);
    }

    #[test]
    fn closure_reproduces_constants_for_all_pairs() {
        let ops6 = ops(6);
        let dx = ops6.mesh.elem_dx()[0];
        for variant in SchemeVariant::ALL.iter().filter(|v| v.is_split()) {
            let (su, sh) = variant.hodge_tags().unwrap();
            let pair = HodgePair::new(su, sh, &ops6).unwrap();
            let mut state = SchemeState::Split {
                u_e1: vec![3.0 * dx; 6],
                h_n0: vec![7.0; 6],
                h_tilde_e1: vec![0.0; 6],
                u_tilde_n0: vec![0.0; 6],
                t: 0.0,
            };
            apply_closure(&pair, &mut state).unwrap();
            let SchemeState::Split {
                u_tilde_n0,
                h_tilde_e1,
                ..
            } = &state
            else {
                unreachable!()
            };
            for v in u_tilde_n0 {
                assert!((v - 3.0).abs() < 1e-12, "{variant:?}");
            }
            for v in h_tilde_e1 {
                assert!((v - 7.0 * dx).abs() < 1e-12, "{variant:?}");
            }
        }
    }

    #[test]
    fn cfl_limits_follow_the_variant() {
        assert_eq!(SchemeVariant::P1P1.cfl_limit::<f64>(64), 1.15);
        assert_eq!(SchemeVariant::Gp1Gp1.cfl_limit::<f64>(64), 1.15);
        assert_eq!(SchemeVariant::P1P0.cfl_limit::<f64>(64), 0.57);
        assert_eq!(SchemeVariant::Gp1Gp0.cfl_limit::<f64>(64), 0.57);
        assert_eq!(SchemeVariant::Gp0Gp1.cfl_limit::<f64>(64), 0.57);
        assert!((SchemeVariant::Gp0Gp0.cfl_limit::<f64>(64) - 1.15 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn variant_names_roundtrip() {
        for v in SchemeVariant::ALL {
            assert_eq!(v.name().parse::<SchemeVariant>().unwrap(), v);
        }
        assert_eq!(
            "GP1-GP0".parse::<SchemeVariant>().unwrap(),
            SchemeVariant::Gp1Gp0
        );
        assert!("p2p2".parse::<SchemeVariant>().is_err());
    }
}
