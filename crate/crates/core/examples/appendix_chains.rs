//! Inequality chains for three-dimensional horizons and photon surfaces, on
//! measured and on raw data.

use staticgeo::boundary::ClassifyTolerances;
use staticgeo::rigidity::{horizon_chain_from, run_appendix_b_horizon, run_appendix_b_photon};
use staticgeo::schwarzschild::{Cut, SchwarzschildModel};

pub fn run_example() -> staticgeo::Result<()> {
    let tol = ClassifyTolerances::default();
    let model = SchwarzschildModel::new(3, 1.0)?;
    let h = run_appendix_b_horizon(&model.isotropic_triple(Some(Cut::Horizon))?, &tol)?;
    println!("horizon: κ {:.12} χ {:.12} holds {} rigid {}", h.kappa, h.euler, h.holds, h.rigidity);
    let p = run_appendix_b_photon(&model.isotropic_triple(Some(Cut::Areal(3.0)))?, &tol)?;
    println!("photon: c {:.12} m {:.12} holds {} rigid {}", p.c, p.mass_from_formula, p.holds, p.rigidity);
    // A surface gravity too large for the area violates the chain.
    let bad = horizon_chain_from(0.5, 16.0 * std::f64::consts::PI, 2.0, 1.0);
    println!("perturbed horizon: holds {} violations {:?}", bad.holds, bad.violations);
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
