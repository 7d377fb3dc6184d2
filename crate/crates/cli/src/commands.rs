//! Experiment drivers: single runs, dispersion curves, convergence sweeps,
//! and conservation tables, each emitting CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use splitwave::{
    assemble_all, conservation_records, integrate, l2_error_p0, l2_error_p1, project_initial,
    sample_curve, ConservationRecord, HodgePair, Mesh, OperatorSet, PhysicalParams, SchemeSpec,
    SchemeState, SchemeVariant, SolverConfig, StarAccuracy, TestCase,
};

use crate::config::{DtChoice, RunConfig, PAPER_DT};
use crate::CliError;

/// Formats a float with 17 significant digits; lossless for `f64`.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Resolves a dt choice against the scheme limit at 90% headroom.
pub fn resolve_dt(
    choice: DtChoice,
    variant: SchemeVariant,
    n: usize,
    params: &PhysicalParams<f64>,
) -> f64 {
    let dx = params.length / n as f64;
    match choice {
        DtChoice::Auto => 0.9 * variant.cfl_limit::<f64>(n) * dx / params.wave_speed(),
        DtChoice::Paper => {
            if variant == SchemeVariant::Gp0Gp0 {
                PAPER_DT / 200.0
            } else {
                PAPER_DT
            }
        }
        DtChoice::Seconds(dt) => dt,
    }
}

/// Builds the operator set and closure pair for a variant. Mixed variants
/// get a pair too so the nodal mass factorization is shared.
pub fn build_scheme(
    variant: SchemeVariant,
    ops: &OperatorSet<f64>,
) -> Result<(SchemeSpec<f64>, HodgePair<'_, f64>), CliError> {
    let spec = SchemeSpec::new(variant, ops.mesh.n());
    let (su, sh) = variant
        .hodge_tags()
        .unwrap_or((StarAccuracy::Gp1, StarAccuracy::Gp1));
    let pair = HodgePair::new(su, sh, ops)?;
    Ok((spec, pair))
}

/// One observed row of a run: time plus relative conservation errors per
/// representation, in the order of [`conservation_records`].
#[derive(Debug, Clone)]
pub struct RunRow {
    /// Simulation time.
    pub t: f64,
    /// `(rep tag, mass rel err, momentum rel err)` per representation.
    pub drifts: Vec<(&'static str, f64, f64)>,
}

/// Result of a single run: observed rows and the final state.
pub struct RunOutcome {
    /// Observed conservation rows.
    pub rows: Vec<RunRow>,
    /// Final state, `None` when the solver diverged.
    pub final_state: Option<SchemeState<f64>>,
    /// Divergence error, when one occurred.
    pub failure: Option<splitwave::Error>,
}

fn relative_drift(now: f64, initial: f64) -> f64 {
    if initial == 0.0 {
        now.abs()
    } else {
        ((now - initial) / initial).abs()
    }
}

/// Runs one configuration and collects conservation rows.
pub fn run_simulation(
    cfg: &RunConfig,
    params: &PhysicalParams<f64>,
) -> Result<RunOutcome, CliError> {
    let ops = assemble_all(Mesh::uniform_periodic(cfg.n, params.length)?);
    let (spec, pair) = build_scheme(cfg.scheme, &ops)?;
    let state = project_initial(
        |x| cfg.testcase.eval(params, x, 0.0),
        &spec,
        &ops,
        Some(&pair),
    )?;
    let dt = resolve_dt(cfg.dt, cfg.scheme, cfg.n, params);
    let mut solver_cfg = SolverConfig::new(dt);
    solver_cfg.epsilon = cfg.epsilon;
    // explicit steps are taken as-is; divergence is then reported by the
    // iteration instead of the CFL guard
    solver_cfg.enforce_cfl = !matches!(cfg.dt, DtChoice::Seconds(_));
    let t_end = cfg.cycles * params.cycle_time();

    let initial: Vec<ConservationRecord<f64>> = conservation_records(&state, &ops);
    let mut rows = Vec::new();
    let mut observe = |s: &SchemeState<f64>| {
        let records = conservation_records(s, &ops);
        let drifts = records
            .iter()
            .zip(&initial)
            .map(|(now, init)| {
                (
                    now.rep.tag(),
                    relative_drift(now.mass, init.mass),
                    relative_drift(now.momentum, init.momentum),
                )
            })
            .collect();
        rows.push(RunRow {
            t: s.time(),
            drifts,
        });
    };

    match integrate(
        &spec,
        &ops,
        Some(&pair),
        params.wave_params(),
        state,
        &solver_cfg,
        t_end,
        cfg.stride,
        &mut observe,
    ) {
        Ok(final_state) => Ok(RunOutcome {
            rows,
            final_state: Some(final_state),
            failure: None,
        }),
        Err(e @ splitwave::Error::Diverged { .. }) => Ok(RunOutcome {
            rows,
            final_state: None,
            failure: Some(e),
        }),
        Err(e) => Err(e.into()),
    }
}

/// `run` subcommand: time series CSV plus a final snapshot of all fields.
pub fn cmd_run(cfg: &RunConfig) -> Result<(), CliError> {
    let params = PhysicalParams::<f64>::reference();
    let outcome = run_simulation(cfg, &params)?;

    let stem = format!("run_{}_{}", cfg.scheme.name(), cfg.testcase.name());
    let series_path = cfg.out_dir.join(format!("{stem}.csv"));
    let mut w = create(&series_path)?;
    let reps: Vec<&str> = outcome
        .rows
        .first()
        .map(|r| r.drifts.iter().map(|d| d.0).collect())
        .unwrap_or_default();
    let mut header = String::from("t");
    for rep in &reps {
        header.push_str(&format!(",mass_{rep}_rel_err,momentum_{rep}_rel_err"));
    }
    writeln!(w, "{header}")?;
    for row in &outcome.rows {
        let mut line = fmt(row.t);
        for (_, mass, mom) in &row.drifts {
            line.push_str(&format!(",{},{}", fmt(*mass), fmt(*mom)));
        }
        writeln!(w, "{line}")?;
    }
    if let Some(err) = outcome.failure {
        writeln!(w, "# run aborted: {err}")?;
        w.flush()?;
        return Err(CliError::Solver(err));
    }
    w.flush()?;

    if let Some(state) = &outcome.final_state {
        write_snapshot(
            &cfg.out_dir.join(format!("{stem}_fields.csv")),
            state,
            cfg.n,
            &params,
        )?;
    }
    Ok(())
}

fn write_snapshot(
    path: &Path,
    state: &SchemeState<f64>,
    n: usize,
    params: &PhysicalParams<f64>,
) -> Result<(), CliError> {
    let dx = params.length / n as f64;
    let mut w = create(path)?;
    writeln!(w, "field,index,x,value")?;
    let node_x = |i: usize| i as f64 * dx;
    let center_x = |i: usize| (i as f64 + 0.5) * dx;
    let mut dump = |name: &str, xs: &dyn Fn(usize) -> f64, values: &[f64]| -> std::io::Result<()> {
        for (i, v) in values.iter().enumerate() {
            writeln!(w, "{name},{i},{},{}", fmt(xs(i)), fmt(*v))?;
        }
        Ok(())
    };
    match state {
        SchemeState::P1P1 { u_n, h_n, .. } => {
            dump("u_n", &node_x, u_n)?;
            dump("h_n", &node_x, h_n)?;
        }
        SchemeState::P1P0 { u_n, h_e, .. } => {
            dump("u_n", &node_x, u_n)?;
            dump("h_e", &center_x, h_e)?;
        }
        SchemeState::Split {
            u_e1,
            h_n0,
            h_tilde_e1,
            u_tilde_n0,
            ..
        } => {
            dump("u_e1", &center_x, u_e1)?;
            dump("h_n0", &node_x, h_n0)?;
            dump("h_tilde_e1", &center_x, h_tilde_e1)?;
            dump("u_tilde_n0", &node_x, u_tilde_n0)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `dispersion` subcommand: analytic and numeric curves for the variants.
pub fn cmd_dispersion(
    variants: &[SchemeVariant],
    samples: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    let mut w = create(&out_dir.join("dispersion.csv"))?;
    writeln!(w, "variant,k_dx,c_ratio_analytic,c_ratio_numeric")?;
    for &variant in variants {
        for s in sample_curve::<f64>(variant, samples)? {
            writeln!(
                w,
                "{},{},{},{}",
                variant.name(),
                fmt(s.k_dx),
                fmt(s.analytic),
                fmt(s.numeric)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Field slots measured in a convergence sweep.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    /// Mesh size.
    pub n: usize,
    /// `(slot name, L2 error)` in a fixed per-scheme order.
    pub errors: Vec<(&'static str, f64)>,
}

/// L2 errors of every field representation of a state against the exact
/// solution at time `t`.
pub fn field_errors(
    state: &SchemeState<f64>,
    ops: &OperatorSet<f64>,
    params: &PhysicalParams<f64>,
    testcase: TestCase,
    t: f64,
) -> Vec<(&'static str, f64)> {
    let mesh = &ops.mesh;
    let h_exact = |x: f64| testcase.eval(params, x, t).0;
    let u_exact = |x: f64| testcase.eval(params, x, t).1;
    match state {
        SchemeState::P1P1 { u_n, h_n, .. } => vec![
            ("u_p1", l2_error_p1(mesh, u_n, u_exact)),
            ("h_p1", l2_error_p1(mesh, h_n, h_exact)),
        ],
        SchemeState::P1P0 { u_n, h_e, .. } => vec![
            ("u_p1", l2_error_p1(mesh, u_n, u_exact)),
            ("h_p0", l2_error_p0(mesh, h_e, h_exact)),
        ],
        SchemeState::Split {
            u_e1,
            h_n0,
            h_tilde_e1,
            u_tilde_n0,
            ..
        } => {
            let pointwise = |v: &[f64]| -> Vec<f64> {
                v.iter().zip(mesh.elem_dx()).map(|(a, dx)| a / dx).collect()
            };
            vec![
                ("u_p0", l2_error_p0(mesh, &pointwise(u_e1), u_exact)),
                ("u_p1", l2_error_p1(mesh, u_tilde_n0, u_exact)),
                ("h_p1", l2_error_p1(mesh, h_n0, h_exact)),
                ("h_p0", l2_error_p0(mesh, &pointwise(h_tilde_e1), h_exact)),
            ]
        }
    }
}

/// Runs a refinement sweep and measures per-field L2 errors at `t_end`.
///
/// The step count is chosen per mesh so the CFL number stays at or below
/// `mu_target` (capped by the scheme limit) while landing on `t_end` exactly
/// with whole steps.
pub fn convergence_sweep(
    variant: SchemeVariant,
    testcase: TestCase,
    cycles: f64,
    n_list: &[usize],
    mu_target: f64,
    params: &PhysicalParams<f64>,
) -> Result<Vec<ConvergenceRow>, CliError> {
    let t_end = cycles * params.cycle_time();
    let mut rows = Vec::new();
    for &n in n_list {
        let ops = assemble_all(Mesh::uniform_periodic(n, params.length)?);
        let (spec, pair) = build_scheme(variant, &ops)?;
        let mu = mu_target.min(0.9 * variant.cfl_limit::<f64>(n));
        let dx = params.length / n as f64;
        let steps = (t_end * params.wave_speed() / (mu * dx)).ceil().max(1.0);
        let dt = t_end / steps;
        let state = project_initial(|x| testcase.eval(params, x, 0.0), &spec, &ops, Some(&pair))?;
        let final_state = integrate(
            &spec,
            &ops,
            Some(&pair),
            params.wave_params(),
            state,
            &SolverConfig::new(dt),
            t_end,
            usize::MAX,
            &mut |_| {},
        )?;
        rows.push(ConvergenceRow {
            n,
            errors: field_errors(&final_state, &ops, params, testcase, t_end),
        });
    }
    Ok(rows)
}

/// Observed orders between consecutive rows, per field slot.
pub fn sweep_rates(rows: &[ConvergenceRow]) -> Vec<(&'static str, Vec<f64>)> {
    // errors at rounding level carry no order information
    const ERROR_FLOOR: f64 = 1e-9;
    let Some(first) = rows.first() else {
        return Vec::new();
    };
    first
        .errors
        .iter()
        .enumerate()
        .map(|(slot, &(name, _))| {
            let rates = rows
                .windows(2)
                .map(|pair| {
                    let (e0, e1) = (pair[0].errors[slot].1, pair[1].errors[slot].1);
                    if e0.max(e1) < ERROR_FLOOR {
                        f64::NAN
                    } else {
                        (e0 / e1).log2()
                    }
                })
                .collect();
            (name, rates)
        })
        .collect()
}

/// `convergence` subcommand: one row per mesh size with errors and rates.
pub fn cmd_convergence(
    variant: SchemeVariant,
    testcase: TestCase,
    cycles: f64,
    n_list: &[usize],
    mu_target: f64,
    out_dir: &Path,
) -> Result<(), CliError> {
    let params = PhysicalParams::<f64>::reference();
    let rows = convergence_sweep(variant, testcase, cycles, n_list, mu_target, &params)?;
    let rates = sweep_rates(&rows);

    let path = out_dir.join(format!(
        "convergence_{}_{}.csv",
        variant.name(),
        testcase.name()
    ));
    let mut w = create(&path)?;
    let mut header = String::from("n");
    for (name, _) in rows[0].errors.iter() {
        header.push_str(&format!(",err_{name},rate_{name}"));
    }
    writeln!(w, "{header}")?;
    for (i, row) in rows.iter().enumerate() {
        let mut line = row.n.to_string();
        for (slot, (_, err)) in row.errors.iter().enumerate() {
            let rate = if i == 0 {
                f64::NAN
            } else {
                rates[slot].1[i - 1]
            };
            line.push_str(&format!(",{},{}", fmt(*err), fmt(rate)));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

/// Maximum relative drift of mass and momentum over a run, per representation.
#[derive(Debug, Clone)]
pub struct ConserveRow {
    /// Scheme the row belongs to.
    pub scheme: SchemeVariant,
    /// Representation tag (`pc` or `pl`).
    pub rep: &'static str,
    /// Worst relative mass drift observed.
    pub mass_rel_err: f64,
    /// Worst relative momentum drift observed.
    pub momentum_rel_err: f64,
}

/// Runs one scheme and reports its worst conservation drift.
pub fn conserve_run(
    variant: SchemeVariant,
    testcase: TestCase,
    n: usize,
    cycles: f64,
    dt: DtChoice,
    params: &PhysicalParams<f64>,
) -> Result<Vec<ConserveRow>, CliError> {
    let cfg = RunConfig {
        scheme: variant,
        n,
        testcase,
        cycles,
        dt,
        epsilon: None,
        out_dir: PathBuf::new(),
        stride: 50,
    };
    let outcome = run_simulation(&cfg, params)?;
    if let Some(err) = outcome.failure {
        return Err(err.into());
    }
    let reps: Vec<&'static str> = outcome.rows[0].drifts.iter().map(|d| d.0).collect();
    Ok(reps
        .iter()
        .enumerate()
        .map(|(slot, rep)| {
            let mut mass_rel = 0.0f64;
            let mut mom_rel = 0.0f64;
            for row in &outcome.rows {
                mass_rel = mass_rel.max(row.drifts[slot].1);
                mom_rel = mom_rel.max(row.drifts[slot].2);
            }
            ConserveRow {
                scheme: variant,
                rep,
                mass_rel_err: mass_rel,
                momentum_rel_err: mom_rel,
            }
        })
        .collect())
}

/// `conserve` subcommand: drift table over all requested schemes.
#[allow(clippy::too_many_arguments)]
pub fn cmd_conserve(
    variants: &[SchemeVariant],
    testcase: TestCase,
    n: usize,
    cycles: f64,
    dt: DtChoice,
    out_dir: &Path,
) -> Result<(), CliError> {
    let params = PhysicalParams::<f64>::reference();
    let mut w = create(&out_dir.join("conserve.csv"))?;
    writeln!(w, "scheme,rep,mass_rel_err,momentum_rel_err")?;
    for &variant in variants {
        for row in conserve_run(variant, testcase, n, cycles, dt, &params)? {
            writeln!(
                w,
                "{},{},{},{}",
                row.scheme.name(),
                row.rep,
                fmt(row.mass_rel_err),
                fmt(row.momentum_rel_err)
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_lossless() {
        for x in [1.0, -0.1, 6.3102e-4, std::f64::consts::PI, 1e-300] {
            let text = fmt(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back, x, "{text}");
        }
        assert_eq!(fmt(f64::NAN), "NaN");
    }

    #[test]
    fn auto_dt_stays_below_the_limit() {
        let params = PhysicalParams::<f64>::reference();
        for variant in SchemeVariant::ALL {
            let dt = resolve_dt(DtChoice::Auto, variant, 64, &params);
            let mu = params.wave_speed() * dt / (params.length / 64.0);
            assert!(
                mu <= variant.cfl_limit::<f64>(64) * 0.9 + 1e-12,
                "{variant:?}"
            );
        }
    }

    #[test]
    fn paper_dt_is_scaled_for_the_low_accuracy_scheme() {
        let params = PhysicalParams::<f64>::reference();
        let base = resolve_dt(DtChoice::Paper, SchemeVariant::P1P0, 1024, &params);
        let low = resolve_dt(DtChoice::Paper, SchemeVariant::Gp0Gp0, 1024, &params);
        assert_eq!(base, PAPER_DT);
        assert_eq!(low, PAPER_DT / 200.0);
    }

    #[test]
    fn machine_zero_errors_give_nan_rates() {
        let rows = vec![
            ConvergenceRow { n: 8, errors: vec![("u_p1", 4.0), ("h_p0", 1e-13)] },
            ConvergenceRow { n: 16, errors: vec![("u_p1", 1.0), ("h_p0", 2e-13)] },
        ];
        let rates = sweep_rates(&rows);
        assert_eq!(rates[0].0, "u_p1");
        assert_eq!(rates[0].1, vec![2.0]);
        assert!(rates[1].1[0].is_nan());
    }

    #[test]
    fn constant_testcase_conserves_to_machine_precision() {
        let params = PhysicalParams::<f64>::reference();
        let cfg = RunConfig {
            scheme: SchemeVariant::Gp1Gp0,
            n: 16,
            testcase: TestCase::Constant,
            cycles: 0.0,
            dt: DtChoice::Auto,
            epsilon: None,
            out_dir: PathBuf::new(),
            stride: 0,
        };
        // ten explicit steps instead of a cycle target
        let ops = assemble_all(Mesh::uniform_periodic(16, params.length).unwrap());
        let (spec, pair) = build_scheme(cfg.scheme, &ops).unwrap();
        let mut state = project_initial(
            |x| cfg.testcase.eval(&params, x, 0.0),
            &spec,
            &ops,
            Some(&pair),
        )
        .unwrap();
        let initial = conservation_records(&state, &ops);
        let dt = resolve_dt(cfg.dt, cfg.scheme, 16, &params);
        for _ in 0..10 {
            state = splitwave::step(
                &spec,
                &ops,
                Some(&pair),
                params.wave_params(),
                &state,
                &SolverConfig::new(dt),
            )
            .unwrap();
        }
        for (now, init) in conservation_records(&state, &ops).iter().zip(&initial) {
            assert!(relative_drift(now.mass, init.mass) < 1e-13);
            assert!(relative_drift(now.momentum, init.momentum) < 1e-13);
        }
    }
}
