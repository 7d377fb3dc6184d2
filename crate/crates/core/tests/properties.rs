//! Property tests for the operator and solver invariants.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use splitwave::dense::Dense;
use splitwave::{
    assemble_all, factorize, tendency_p1p0, Mesh, OperatorSet, SchemeState, WaveParams,
};

fn ops_from_widths(widths: &[f64]) -> OperatorSet<f64> {
    assemble_all(Mesh::nonuniform_periodic(widths).unwrap())
}

#[test]
fn shared_structures_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Mesh<f64>>();
    assert_send_sync::<OperatorSet<f64>>();
    assert_send_sync::<splitwave::Factorization<f64>>();
    assert_send_sync::<splitwave::HodgePair<'static, f64>>();
    assert_send_sync::<SchemeState<f64>>();
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Plain Cholesky; fails on non-positive pivots.
fn cholesky_is_spd(a: &Dense<f64>) -> bool {
    let n = a.rows();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.at(i, j);
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn difference_rows_annihilate_constants(
        widths in prop::collection::vec(0.1f64..5.0, 3..12),
        c in -10.0f64..10.0,
    ) {
        let ops = ops_from_widths(&widths);
        let n = widths.len();
        let constant = vec![c; n];
        let out = ops.d_en.apply(&constant).unwrap();
        prop_assert!(out.iter().all(|v| v.abs() < 1e-12));
        let out = ops.d_nn.apply(&constant).unwrap();
        prop_assert!(out.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn telescoping_sum_of_differences_vanishes(
        widths in prop::collection::vec(0.1f64..5.0, 3..12),
        values in prop::collection::vec(-100.0f64..100.0, 12),
    ) {
        let ops = ops_from_widths(&widths);
        let v = &values[..widths.len()];
        let out = ops.d_en.apply(v).unwrap();
        let total: f64 = out.iter().sum();
        prop_assert!(total.abs() < 1e-9);
    }

    #[test]
    fn nodal_mass_is_spd_on_small_meshes(
        widths in prop::collection::vec(0.05f64..10.0, 3..=12),
    ) {
        let ops = ops_from_widths(&widths);
        prop_assert!(cholesky_is_spd(&ops.m_nn.to_dense()));
    }

    #[test]
    fn solve_then_apply_roundtrips_on_odd_meshes(
        seed_widths in prop::collection::vec(0.2f64..3.0, 7),
        values in prop::collection::vec(-5.0f64..5.0, 7),
    ) {
        let ops = ops_from_widths(&seed_widths);
        for matrix in [&ops.m_nn, &ops.p_ne, &ops.m_en] {
            let f = factorize(matrix).unwrap();
            let x = f.solve(&values).unwrap();
            let back = matrix.apply(&x).unwrap();
            let scale = matrix.norm_inf() * x.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
                + values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            prop_assert!(max_abs_diff(&back, &values) <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn augmented_output_is_kernel_orthogonal_on_even_meshes(
        widths in prop::collection::vec(0.2f64..3.0, 6),
        rhs in prop::collection::vec(-5.0f64..5.0, 6),
    ) {
        let ops = ops_from_widths(&widths);
        for matrix in [&ops.p_ne, &ops.m_en] {
            let f = factorize(matrix).unwrap();
            let k0 = f.kernel().expect("even meshes have a kernel");
            let x = f.solve_augmented(&rhs).unwrap();
            let dot: f64 = k0.iter().zip(&x).map(|(a, b)| a * b).sum();
            let norm = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            prop_assert!(dot.abs() <= 1e-10 * norm.max(1.0));
        }
    }

    #[test]
    fn p1p0_tendency_is_linear(
        u1 in prop::collection::vec(-2.0f64..2.0, 5),
        h1 in prop::collection::vec(-2.0f64..2.0, 5),
        u2 in prop::collection::vec(-2.0f64..2.0, 5),
        h2 in prop::collection::vec(-2.0f64..2.0, 5),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let ops = ops_from_widths(&[1.0, 0.5, 1.5, 0.75, 1.25]);
        let params = WaveParams { g: 9.81, h_mean: 100.0 };
        let combo_u: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| alpha * a + beta * b).collect();
        let combo_h: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| alpha * a + beta * b).collect();
        let s1 = SchemeState::P1P0 { u_n: u1, h_e: h1, t: 0.0 };
        let s2 = SchemeState::P1P0 { u_n: u2, h_e: h2, t: 0.0 };
        let sc = SchemeState::P1P0 { u_n: combo_u, h_e: combo_h, t: 0.0 };
        let (du1, dh1) = tendency_p1p0(&ops, params, &s1).unwrap();
        let (du2, dh2) = tendency_p1p0(&ops, params, &s2).unwrap();
        let (duc, dhc) = tendency_p1p0(&ops, params, &sc).unwrap();
        for i in 0..5 {
            prop_assert!((duc[i] - (alpha * du1[i] + beta * du2[i])).abs() < 1e-9);
            prop_assert!((dhc[i] - (alpha * dh1[i] + beta * dh2[i])).abs() < 1e-9);
        }
    }
}
