//! Full rigidity pipeline on a horizon and on a photon-surface cut.

use staticgeo::rigidity::{run_main_theorem_check, RigidityOptions};
use staticgeo::schwarzschild::{Cut, SchwarzschildModel};

pub fn run_example() -> staticgeo::Result<()> {
    let model = SchwarzschildModel::new(3, 1.0)?;
    let opts = RigidityOptions::default();
    for cut in [Cut::Horizon, Cut::Areal(3.0)] {
        let v = run_main_theorem_check(&model.isotropic_triple(Some(cut))?, &opts)?;
        let c = &v.components[0];
        println!(
            "{cut}: {:?} via {:?}, m̂ = {:.10?}, ŝ = {:.10?}, profile error {:.2e}",
            v.conclusion,
            c.branch,
            v.fitted_mass,
            v.s_hat,
            v.profile.as_ref().map_or(f64::NAN, |p| p.max_error())
        );
        for r in &c.routes {
            println!("  route {}: λ ≥ {:.12}, margin {:.2e}", r.route, r.bound.value, r.pmt.margin);
        }
        assert!(v.certified());
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
