mod common;

use common::{operator, reference_setup};
use diffkde::assembly::{assemble_mass, BcKind};
use diffkde::oracle::{l2_error, reference_run, spectral_neumann};
use diffkde::solver::{run, step_implicit_euler, SolverConfig};
use diffkde::{project_deltas, DataSample, Mesh1D};

#[test]
fn mass_budget_holds_every_step() {
    let (_, mesh, u0) = reference_setup();
    for bc in [BcKind::Neumann, BcKind::MeanConserving] {
        let traj = run(&mesh, &u0, &SolverConfig::new(1e-3, 0.1, bc)).unwrap();
        for (n, r) in traj.diagnostics.iter().enumerate() {
            assert!(
                (r.mass - 1.0).abs() <= 1e-12 + n as f64 * 1e-10,
                "{bc} step {n}: {}",
                r.mass
            );
        }
    }
}

#[test]
fn mean_budget_holds_every_step() {
    let (_, mesh, u0) = reference_setup();
    let traj = run(&mesh, &u0, &SolverConfig::new(1e-3, 0.1, BcKind::MeanConserving)).unwrap();
    for (n, r) in traj.diagnostics.iter().enumerate() {
        assert!(
            r.delta_mean.abs() <= n as f64 * 1e-10 * mesh.length(),
            "step {n}: {}",
            r.delta_mean
        );
    }
}

#[test]
fn neumann_drift_grows_for_boundary_heavy_sample() {
    let mesh = Mesh1D::new(0.0, 10.0, 1000).unwrap();
    let mass = assemble_mass(&mesh);
    let pts: Vec<f64> = (0..100)
        .map(|i| 0.05 + 0.01 * i as f64)
        .chain([6.0, 7.5])
        .collect();
    let sample = DataSample::new(pts, 0.0, 10.0).unwrap();
    let u0 = project_deltas(&sample, &mesh, &mass).unwrap();
    let neu = run(&mesh, &u0, &SolverConfig::new(1e-3, 0.1, BcKind::Neumann)).unwrap();
    let drift: Vec<f64> = neu.diagnostics.iter().map(|r| r.delta_mean.abs()).collect();
    assert!(drift.windows(2).all(|w| w[1] > w[0]));
    assert!(neu.diagnostics.iter().all(|r| r.delta_mass.abs() <= 1e-8));
    // mass piles against the left wall and pushes the mean right
    assert!(neu.final_diagnostics().delta_mean < -1e-3);

    let mc = run(&mesh, &u0, &SolverConfig::new(1e-3, 0.1, BcKind::MeanConserving)).unwrap();
    assert!(mc.final_diagnostics().delta_mean.abs() <= 1e-8);
}

#[test]
fn spectral_mean_drift_matches_fem_drift() {
    // Two independent routes to the Neumann mean at t = 0.1.
    let (sample, mesh, u0) = reference_setup();
    let fem = run(&mesh, &u0, &SolverConfig::new(1e-4, 0.1, BcKind::Neumann)).unwrap();
    let series = spectral_neumann(&sample, 0.1, 2000).unwrap();
    let fem_shift = fem.final_diagnostics().mean - fem.diagnostics[0].mean;
    let series_shift = series.mean() - sample.mean();
    assert!(series_shift.abs() > 1e-4);
    assert!(
        (fem_shift - series_shift).abs() < 0.05 * series_shift.abs(),
        "{fem_shift} vs {series_shift}"
    );
}

#[test]
fn reference_run_cauchy_and_conservation() {
    let (_, mesh, u0) = reference_setup();
    let mass = assemble_mass(&mesh);
    let r1 = reference_run(&mesh, &u0, BcKind::MeanConserving, 0.1, 1).unwrap();
    let r2 = reference_run(&mesh, &u0, BcKind::MeanConserving, 0.1, 2).unwrap();
    let r4 = reference_run(&mesh, &u0, BcKind::MeanConserving, 0.1, 4).unwrap();
    let d12 = l2_error(r1.values(), r2.values(), &mass).unwrap();
    let d24 = l2_error(r2.values(), r4.values(), &mass).unwrap();
    assert!(d24 < d12);
    let m0 = diffkde::discrete_mean(u0.values(), &mass, &mesh).unwrap();
    let m4 = diffkde::discrete_mean(r4.values(), &mass, &mesh).unwrap();
    assert!((m0 - m4).abs() <= 1e-8);
}

#[test]
fn neumann_reference_matches_series() {
    let (sample, mesh, u0) = reference_setup();
    let mass = assemble_mass(&mesh);
    let reference = reference_run(&mesh, &u0, BcKind::Neumann, 0.1, 2).unwrap();
    let exact = spectral_neumann(&sample, 0.1, 2000).unwrap().interpolate(&mesh);
    let rel = diffkde::oracle::relative_l2_error(reference.values(), exact.values(), &mass).unwrap();
    assert!(rel <= 2e-3, "{rel}");
}

#[test]
fn step_equals_run_of_one_step() {
    let (_, mesh, u0) = reference_setup();
    let mass = assemble_mass(&mesh);
    let op = operator(&mesh, BcKind::MeanConserving);
    let stepped = step_implicit_euler(&u0, &mass, &op, 1e-3).unwrap();
    let traj = run(&mesh, &u0, &SolverConfig::new(1e-3, 1e-3, BcKind::MeanConserving)).unwrap();
    assert_eq!(&stepped, traj.final_state());
}
