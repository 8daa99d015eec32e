//! Measures boundary spheres and classifies them as horizons or photon
//! surfaces.

use staticgeo::boundary::{classify, gauss_bonnet_euler, measure_boundary, ClassifyTolerances};
use staticgeo::schwarzschild::{Cut, SchwarzschildModel};

pub fn run_example() -> staticgeo::Result<()> {
    let model = SchwarzschildModel::new(3, 1.0)?;
    let tol = ClassifyTolerances::default();
    for cut in [Cut::Horizon, Cut::Areal(3.0), Cut::Areal(5.0)] {
        let t = model.isotropic_triple(Some(cut))?;
        let data = measure_boundary(&t, &t.boundaries[0])?;
        let class = classify(&data, &tol);
        println!(
            "{cut}: {} area {:.10} H {:.10} N {:.10} S̄ {:.10} χ {:.10}",
            class.name(),
            data.area,
            data.mean_curvature().mean,
            data.lapse().mean,
            data.scalar().mean,
            gauss_bonnet_euler(&data)?
        );
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
