use wehrlsim::linalg::frobenius;
use wehrlsim::observables::von_neumann_entropy;
use wehrlsim::operators::LocalizationOperator;
use wehrlsim::scenarios::{
    detect_ness, run_coupling_sweep, run_doublewell, run_lambda_sweep, run_scenario, run_spin_study,
    run_squeeze_sweep, ScenarioConfig, ScenarioKind, ScenarioOutput,
};

fn spin_cfg() -> ScenarioConfig {
    ScenarioConfig::defaults(ScenarioKind::SpinStudy)
}

#[test]
fn spin_study_end_states() {
    let runs = run_spin_study(&spin_cfg()).unwrap();
    let labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["thermal", "localization", "combined"]);
    for r in &runs[..2] {
        let f = r.trajectory.observables.last().unwrap().fidelity_ref;
        assert!(f > 1.0 - 1e-4, "{}: {f}", r.label);
    }
    assert!(runs[2].ness.is_ness);
}

#[test]
fn localization_produces_more_than_thermalization_while_relaxing() {
    let runs = run_spin_study(&spin_cfg()).unwrap();
    let combined = &runs[2].trajectory;
    let early: Vec<_> = combined.observables.iter().skip(1).take(20).collect();
    assert!(early.iter().all(|o| o.pi_lc > o.pi_th), "{:?}", early.iter().map(|o| (o.pi_lc, o.pi_th)).collect::<Vec<_>>());
}

#[test]
fn early_window_is_not_stationary() {
    let mut cfg = spin_cfg();
    cfg.integrator.t_end = 1.0;
    let runs = run_spin_study(&cfg).unwrap();
    assert!(!detect_ness(&runs[2].trajectory, 5, 1e-4).unwrap().is_ness);
}

#[test]
fn coherence_vanishes_without_localization_and_large_lambda_localizes() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::LambdaSweep);
    cfg.sweep = vec![0.0, 500.0];
    let table = run_lambda_sweep(&cfg).unwrap();
    let coh = table.column("coherence_l1").unwrap();
    assert!(coh[0] < 1e-8, "{coh:?}");
    let s_q = table.column("S_Q").unwrap()[1];
    assert!(s_q > von_neumann_entropy(&table.finals[1]) - 1e-10);
    assert!(table.rows.iter().all(|r| r.ness.is_ness), "{:?}", table.rows.iter().map(|r| (r.t_final, r.ness)).collect::<Vec<_>>());
}

#[test]
fn sweep_rows_keep_input_order_and_rerun_identically() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::LambdaSweep);
    cfg.sweep = vec![0.1, 0.3, 1.0, 3.0];
    cfg.integrator.t_end = 4.0;
    cfg.extend_to_ness = false;
    let a = run_lambda_sweep(&cfg).unwrap();
    let b = run_lambda_sweep(&cfg).unwrap();
    assert_eq!(a.rows.iter().map(|r| r.param).collect::<Vec<_>>(), cfg.sweep);
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.as_row().map(f64::to_bits), y.as_row().map(f64::to_bits));
    }
}

#[test]
fn ness_extension_doubles_until_cap() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::LambdaSweep);
    cfg.sweep = vec![0.5];
    cfg.integrator.t_end = 1.0;
    cfg.ness_tol = 1e-300;
    let table = run_lambda_sweep(&cfg).unwrap();
    let row = table.rows[0];
    // 1 → 2 → … → 128, then the last chunk stops exactly at 16τ = 160
    assert!((row.t_final - 160.0).abs() < 1e-9, "{}", row.t_final);
    assert!(!row.ness.is_ness);
}

#[test]
fn squeeze_zero_matches_plain_run() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::SqueezeSweep);
    cfg.sweep = vec![-0.2, 0.0, 0.2];
    cfg.integrator.t_end = 1.0;
    let table = run_squeeze_sweep(&cfg).unwrap();
    let zero = &table.rows[1];
    assert!((zero.observables.fidelity_ref - 1.0).abs() < 1e-9);
    let mut plain = cfg.clone();
    plain.scenario = ScenarioKind::DoubleWellCombined;
    let run = run_doublewell(&plain, false).unwrap();
    let last = run.trajectory.states.last().unwrap().matrix();
    assert!(frobenius(&(last - &table.finals[1])) < 1e-14);
    let e = table.column("energy").unwrap();
    assert!(e[0] > e[1] - 1e-9 || e[2] > e[1] - 1e-9);
}

#[test]
fn vanishing_coupling_recovers_isolated_state() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::CouplingSweep);
    cfg.sweep = vec![1e-7, 1e-1];
    cfg.integrator.t_end = 2.0;
    let tables = run_coupling_sweep(&cfg).unwrap();
    assert_eq!(tables.len(), 3);
    for t in &tables {
        let f = t.column("fidelity_ref").unwrap();
        assert!(f[0] > 1.0 - 1e-4, "{}: {f:?}", t.name);
        assert!(f[1] < f[0], "{}: {f:?}", t.name);
    }
}

#[test]
fn single_dissipator_branches_agree_near_isolated_limit() {
    let cfg = ScenarioConfig::defaults(ScenarioKind::CouplingSweep);
    let mut cfg = cfg;
    cfg.sweep = vec![1e-5];
    let tables = run_coupling_sweep(&cfg).unwrap();
    let f: Vec<f64> = tables.iter().map(|t| t.rows[0].observables.fidelity_ref).collect();
    assert!((f[0] - f[1]).abs() < 1e-3, "{f:?}");
}

#[test]
fn jxprime_localization_runs_with_rate_fallback() {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::DoubleWellCombined);
    cfg.dissipator.localization = LocalizationOperator::Jxprime;
    cfg.integrator.t_end = 0.5;
    let run = run_doublewell(&cfg, false).unwrap();
    for o in &run.trajectory.observables {
        assert_eq!(o.pi_lc, o.ds_lc);
    }
}

#[test]
fn dispatch_covers_every_scenario_kind() {
    for kind in ScenarioKind::ALL {
        let mut cfg = ScenarioConfig::defaults(kind);
        cfg.integrator.t_end = 0.2;
        cfg.extend_to_ness = false;
        if kind.is_sweep() {
            cfg.sweep.truncate(2);
        }
        let out = run_scenario(&cfg).unwrap();
        let ok = match (kind, &out) {
            (ScenarioKind::SpinStudy, ScenarioOutput::Runs(r)) => r.len() == 3,
            (ScenarioKind::DoubleWellIsolated | ScenarioKind::DoubleWellCombined, ScenarioOutput::Runs(r)) => r.len() == 1,
            (ScenarioKind::LowCoupling, ScenarioOutput::Runs(r)) => r.len() == 2,
            (ScenarioKind::CouplingSweep, ScenarioOutput::Sweeps(t)) => t.len() == 3,
            (ScenarioKind::LambdaSweep | ScenarioKind::SqueezeSweep, ScenarioOutput::Sweeps(t)) => t.len() == 1,
            (ScenarioKind::EigenCompare, ScenarioOutput::Eigen(e)) => e.times.len() == 3,
            (ScenarioKind::ExpParams, ScenarioOutput::Exp(r)) => r.lambda_over_omega > 0.0,
            _ => false,
        };
        assert!(ok, "{kind}");
    }
}
