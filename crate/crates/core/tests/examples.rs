//! Each example runs to completion.

#[allow(dead_code)]
#[path = "../examples/curvature.rs"]
mod curvature;

#[test]
fn curvature_runs() {
    curvature::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/schwarzschild_fixtures.rs"]
mod schwarzschild_fixtures;

#[test]
fn schwarzschild_fixtures_runs() {
    schwarzschild_fixtures::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/conformal_metrics.rs"]
mod conformal_metrics;

#[test]
fn conformal_metrics_runs() {
    conformal_metrics::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/boundary_classification.rs"]
mod boundary_classification;

#[test]
fn boundary_classification_runs() {
    boundary_classification::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/dirac_bounds.rs"]
mod dirac_bounds;

#[test]
fn dirac_bounds_runs() {
    dirac_bounds::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/masses.rs"]
mod masses;

#[test]
fn masses_runs() {
    masses::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/identities.rs"]
mod identities;

#[test]
fn identities_runs() {
    identities::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/rigidity.rs"]
mod rigidity;

#[test]
fn rigidity_runs() {
    rigidity::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/appendix_chains.rs"]
mod appendix_chains;

#[test]
fn appendix_chains_runs() {
    appendix_chains::run_example().unwrap();
}

#[allow(dead_code)]
#[path = "../examples/config_report.rs"]
mod config_report;

#[test]
fn config_report_runs() {
    config_report::run_example().unwrap();
}
