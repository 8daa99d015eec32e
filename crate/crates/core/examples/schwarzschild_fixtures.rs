//! Schwarzschild in areal and isotropic charts, checked against the static
//! vacuum equations.

use staticgeo::sampling::halton_shell_points;
use staticgeo::schwarzschild::SchwarzschildModel;
use staticgeo::triple::static_vacuum_residual;

pub fn run_example() -> staticgeo::Result<()> {
    for n in [3, 4, 5] {
        let model = SchwarzschildModel::new(n, 1.0)?;
        for t in [model.isotropic_triple(None)?, model.areal_triple(None)?] {
            let worst = halton_shell_points(20, n, t.chart.layout, t.sample_shell)
                .iter()
                .map(|x| static_vacuum_residual(&t, x).map(|r| r.max_abs()))
                .collect::<staticgeo::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            println!("{}: max residual {worst:.2e}", t.label);
            assert!(worst < 1e-8);
        }
        let r = 3.0;
        println!(
            "  n = {n}: N(r=3) = {:.12}, photon constant c = {:.12}, κ = {:.12}",
            model.areal_lapse(r),
            model.photon_sphere_constant(r)?,
            model.surface_gravity()
        );
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
