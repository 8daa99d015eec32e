//! Divergence identities on a nontrivial static vacuum triple, and the honest
//! report on a flat negative control.

use staticgeo::conformal::Sign;
use staticgeo::expr::Expr;
use staticgeo::identities::{identity_report, w_field, IdentityKind};
use staticgeo::sampling::halton_shell_points;
use staticgeo::schwarzschild::SchwarzschildModel;
use staticgeo::tensor::chart::Chart;
use staticgeo::triple::StaticTriple;

pub fn run_example() -> staticgeo::Result<()> {
    let t = SchwarzschildModel::new(3, 1.0)?.isotropic_triple(None)?;
    let pts = halton_shell_points(5, 3, t.chart.layout, t.sample_shell);
    let w: Vec<f64> = pts.iter().map(|x| w_field(&t, x)).collect::<staticgeo::Result<_>>()?;
    println!("W on Schwarzschild n=3 m=1: {w:.12?} (1/16 = 0.0625)");

    let flat = StaticTriple::new("flat", Chart::euclidean(3), Expr::constant(0.5), vec![], (0.5, 2.0))?;
    let pts = halton_shell_points(5, 3, flat.chart.layout, flat.sample_shell);
    for kind in [IdentityKind::Divergence, IdentityKind::TracefreeLie, IdentityKind::Composition] {
        let r = identity_report(&flat, kind, Sign::Plus, &pts, false)?;
        println!(
            "flat {}: {:?}, verified {}, nontrivial {}",
            r.identity, r.status, r.verified, r.verified_nontrivially
        );
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
