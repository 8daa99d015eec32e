//! The two conformal rescalings g± of Schwarzschild are flat, and the scalar
//! curvature transforms as expected for a harmonic lapse.

use staticgeo::conformal::{build_pair, scalar_transform_check, Sign};
use staticgeo::sampling::halton_shell_points;
use staticgeo::schwarzschild::SchwarzschildModel;
use staticgeo::tensor::curvature::curvature_at;

pub fn run_example() -> staticgeo::Result<()> {
    let t = SchwarzschildModel::new(4, 0.5)?.areal_triple(None)?;
    let pts = halton_shell_points(10, 4, t.chart.layout, t.sample_shell);
    for sign in [Sign::Plus, Sign::Minus] {
        let pair = build_pair(&t, sign)?;
        let mut riem: f64 = 0.0;
        let mut transform: f64 = 0.0;
        for x in &pts {
            riem = riem.max(curvature_at(&pair.derived, x)?.max_abs_riemann());
            transform = transform.max(scalar_transform_check(&pair, &t.lapse, x)?.residual);
        }
        println!("g{}: max |Riem| {riem:.2e}, scalar transform residual {transform:.2e}", sign.label());
        assert!(riem < 1e-7);
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
