//! Curvature of a conformally flat metric from exact derivatives.

use staticgeo::expr::Expr;
use staticgeo::tensor::chart::Chart;
use staticgeo::tensor::curvature::curvature_at;

pub fn run_example() -> staticgeo::Result<()> {
    // Round 3-sphere of radius 1 in stereographic coordinates.
    let r2 = Expr::sum((0..3).map(|i| Expr::var(i) * Expr::var(i)));
    let factor = (2.0 / (Expr::one() + r2)).powf(2.0);
    let sphere = Chart::euclidean(3).conformal(&factor, "stereographic-sphere");
    for x in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5], [1.5, 0.4, -0.7]] {
        let c = curvature_at(&sphere, &x)?;
        println!(
            "x = {x:?}: R = {:.12}, |Ric|² = {:.12}, Bianchi defect {:.1e}",
            c.scalar,
            c.ricci_norm_sq(),
            c.first_bianchi_defect()
        );
        assert!((c.scalar - 6.0).abs() < 1e-10);
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
