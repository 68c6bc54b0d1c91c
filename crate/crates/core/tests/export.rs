use std::fs;

use ccl_core::*;

fn minimal_run(cells: usize) -> (RadialModel, RadialProfile, Solution, Barrier) {
    let grid = Grid::ball(8.0, cells).unwrap();
    let model = RadialModel::hyperbolic(1, grid.r_max()).unwrap();
    let target = RadialProfile::from_fn("S", |r| -1.0 - 0.5 * (-r * r).exp());
    let barrier = Barrier::new(
        GridFunction::constant(grid, -1.0).unwrap(),
        BarrierKind::ConstantBump,
    );
    let sol = monotone_solve(
        &model,
        &target,
        8.0,
        &barrier.values,
        &SolveOptions::default(),
    )
    .unwrap();
    (model, target, sol, barrier)
}

fn summary(
    model: &RadialModel,
    target: &RadialProfile,
    sol: &Solution,
    barrier: &Barrier,
) -> RunSummary {
    let prescribed = verify_prescribed(model, &sol.u, target, 1e-3).unwrap();
    let completeness = verify_completeness(1, &sol.u, barrier).unwrap();
    RunSummary {
        n: 1,
        case_report: None,
        route: "constant".into(),
        r0: None,
        a: Some(1.0 / 3.0),
        shift: Some(std::f64::consts::PI * 1e-7),
        barrier: barrier.metadata(),
        radii: vec![8.0],
        cells: sol.u.len(),
        b_k: sol.b_k,
        iterations: vec![sol.iterations],
        residual_sup: sol.residual_sup,
        compact_trace: vec![],
        settled: true,
        monotone: sol.is_monotone(1e-12),
        local_bound: None,
        passed: prescribed.pass && completeness.pass,
        prescribed,
        completeness,
    }
}

#[test]
fn export_writes_three_files_with_one_row_per_node() {
    let dir = tempfile::tempdir().unwrap();
    let (model, target, sol, barrier) = minimal_run(256);
    let rs = summary(&model, &target, &sol, &barrier);
    let prefix = dir.path().join("run");
    let files = export_solution(&prefix, &model, &target, &sol, &barrier, &rs, true).unwrap();
    assert!(files.csv.exists() && files.json.exists());
    assert!(files.svg.as_ref().is_some_and(|p| p.exists()));
    let mut reader = csv::Reader::from_path(&files.csv).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["r", "u", "u_minus", "S_achieved", "S_target", "residual"]
    );
    assert_eq!(reader.records().count(), 256);
}

#[test]
fn export_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let (model, target, sol, barrier) = minimal_run(128);
    let rs = summary(&model, &target, &sol, &barrier);
    let a = export_solution(
        &dir.path().join("a"),
        &model,
        &target,
        &sol,
        &barrier,
        &rs,
        false,
    )
    .unwrap();
    let first = fs::read(&a.csv).unwrap();
    let b = export_solution(
        &dir.path().join("a"),
        &model,
        &target,
        &sol,
        &barrier,
        &rs,
        false,
    )
    .unwrap();
    assert_eq!(first, fs::read(&b.csv).unwrap());
    assert!(b.svg.is_none());
}

#[test]
fn summary_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let (model, target, sol, barrier) = minimal_run(128);
    let rs = summary(&model, &target, &sol, &barrier);
    let files = export_solution(
        &dir.path().join("s"),
        &model,
        &target,
        &sol,
        &barrier,
        &rs,
        false,
    )
    .unwrap();
    let back: RunSummary = serde_json::from_str(&fs::read_to_string(&files.json).unwrap()).unwrap();
    assert_eq!(back, rs);
    assert_eq!(back.shift.unwrap().to_bits(), rs.shift.unwrap().to_bits());
    assert_eq!(back.residual_sup.to_bits(), rs.residual_sup.to_bits());
}

#[test]
fn export_to_missing_directory_reports_path() {
    let (model, target, sol, barrier) = minimal_run(64);
    let rs = summary(&model, &target, &sol, &barrier);
    let prefix = std::path::Path::new("/nonexistent/dir/run");
    let err = export_solution(prefix, &model, &target, &sol, &barrier, &rs, false).unwrap_err();
    assert!(
        err.to_string().contains("/nonexistent/dir/run.csv"),
        "{err}"
    );
}

#[test]
fn trace_export_has_one_row_per_iterate() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, sol, _) = minimal_run(64);
    let path = dir.path().join("trace.csv");
    export_trace(&path, &sol).unwrap();
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap().len(), 3);
    assert_eq!(reader.records().count(), sol.iterations);
}

#[test]
fn decaying_target_recovered_on_fine_grid() {
    // s = -1, S = -1/(1 + r^2); the constant -1 is a lower solution.
    // min |S| on the ball is 1/257, so b_k and c_it are large and the
    // outer ball needs ~5e4 iterations
    let grid = Grid::ball(16.0, 4096).unwrap();
    let model = RadialModel::hyperbolic(1, grid.r_max()).unwrap();
    let target = RadialProfile::from_fn("S", |r| -1.0 / (1.0 + r * r));
    let low = GridFunction::constant(grid, -1.0).unwrap();
    let opts = SolveOptions {
        tol: 1e-7,
        max_iter: 400_000,
    };
    let ex = exhaustion_solve(&model, &target, &[4.0, 8.0, 16.0], &low, &opts).unwrap();
    let rep = verify_prescribed(&model, &ex.last().u, &target, 1e-4).unwrap();
    assert!(rep.pass, "sup error {}", rep.sup_error);
}
