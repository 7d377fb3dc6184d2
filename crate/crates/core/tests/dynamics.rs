//! Longer integration behavior: periodic return, conservation over many
//! steps, and the generic scalar instantiation.

use splitwave::{
    assemble_all, integrate, l2_error_p1, mass, project_initial, step, HodgePair, Mesh,
    PhysicalParams, SchemeSpec, SchemeState, SchemeVariant, SolverConfig, TestCase,
};

/// After one full cycle the sine wave returns to its initial shape; the
/// remaining distance is discretization error and shrinks with resolution.
#[test]
fn one_cycle_return_error_decreases_with_resolution() {
    let params = PhysicalParams::<f64>::reference();
    let variant = SchemeVariant::Gp1Gp0;
    let mut errors = Vec::new();
    for n in [16usize, 32] {
        let ops = assemble_all(Mesh::uniform_periodic(n, params.length).unwrap());
        let spec = SchemeSpec::new(variant, n);
        let (su, sh) = variant.hodge_tags().unwrap();
        let pair = HodgePair::new(su, sh, &ops).unwrap();
        let state =
            project_initial(|x| TestCase::Tc1.eval(&params, x, 0.0), &spec, &ops, Some(&pair))
                .unwrap();
        let t_end = params.cycle_time();
        let dx = params.length / n as f64;
        let steps = (t_end * params.wave_speed() / (0.3 * dx)).ceil();
        let cfg = SolverConfig::new(t_end / steps);
        let final_state = integrate(
            &spec,
            &ops,
            Some(&pair),
            params.wave_params(),
            state,
            &cfg,
            t_end,
            usize::MAX,
            &mut |_| {},
        )
        .unwrap();
        let SchemeState::Split { h_n0, .. } = &final_state else {
            unreachable!()
        };
        let err = l2_error_p1(&ops.mesh, h_n0, |x| TestCase::Tc1.eval(&params, x, 0.0).0);
        errors.push(err);
    }
    // second-order fields: doubling N should shrink the distance markedly
    assert!(
        errors[1] < 0.4 * errors[0],
        "return errors {errors:?} do not decrease with N"
    );
}

/// Mass of the elemental height stays constant across many steps.
#[test]
fn mass_is_constant_over_a_hundred_steps() {
    let params = PhysicalParams::<f64>::reference();
    let n = 32;
    let ops = assemble_all(Mesh::uniform_periodic(n, params.length).unwrap());
    for variant in [SchemeVariant::P1P0, SchemeVariant::Gp1Gp0] {
        let spec = SchemeSpec::new(variant, n);
        let (su, sh) = variant
            .hodge_tags()
            .unwrap_or((splitwave::StarAccuracy::Gp1, splitwave::StarAccuracy::Gp1));
        let pair = HodgePair::new(su, sh, &ops).unwrap();
        let mut state =
            project_initial(|x| TestCase::Tc1.eval(&params, x, 0.0), &spec, &ops, Some(&pair))
                .unwrap();
        let initial_mass = mass(&state, &ops);
        let dx = params.length / n as f64;
        let cfg = SolverConfig::new(0.5 * spec.cfl_limit * dx / params.wave_speed());
        for _ in 0..100 {
            state = step(&spec, &ops, Some(&pair), params.wave_params(), &state, &cfg).unwrap();
        }
        let drift = ((mass(&state, &ops) - initial_mass) / initial_mass).abs();
        assert!(drift <= 1e-9, "{variant:?}: relative mass drift {drift:e}");
    }
}

/// The whole pipeline instantiates and runs under `f32`.
#[test]
fn f32_instantiation_runs() {
    let params = PhysicalParams::<f32>::reference();
    let n = 16;
    let ops = assemble_all(Mesh::uniform_periodic(n, params.length).unwrap());
    let variant = SchemeVariant::Gp0Gp1;
    let spec = SchemeSpec::new(variant, n);
    let (su, sh) = variant.hodge_tags().unwrap();
    let pair = HodgePair::new(su, sh, &ops).unwrap();
    let mut state =
        project_initial(|x| TestCase::Tc1.eval(&params, x, 0.0), &spec, &ops, Some(&pair))
            .unwrap();
    let initial_norm = state.norm_inf();
    let dx = params.length / n as f32;
    let cfg = SolverConfig::new(0.5 * spec.cfl_limit * dx / params.wave_speed());
    for _ in 0..20 {
        state = step(&spec, &ops, Some(&pair), params.wave_params(), &state, &cfg).unwrap();
    }
    assert!(state.norm_inf() <= 1.05 * initial_norm);
    assert!(state.time() > 0.0);

    // dispersion in f32 at a loose tolerance
    let ana = splitwave::cd_analytic::<f32>(SchemeVariant::P1P0, 1.0).unwrap();
    let num = splitwave::cd_numeric::<f32>(SchemeVariant::P1P0, 1.0).unwrap();
    assert!((ana - num).abs() < 1e-5);
}
