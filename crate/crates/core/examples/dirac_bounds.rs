//! Certified lower bounds for the first Dirac eigenvalue and the comparisons
//! built on them.

use staticgeo::spectral::{
    exact_round_sphere, friedcomp_check, friedrich_bound, hmz_bound, pmt_hypothesis, HmzPreconditions,
};

pub fn run_example() -> staticgeo::Result<()> {
    // Unit 2-sphere: S̄ = 2, H as the boundary of the unit ball is 2.
    let exact = exact_round_sphere(1.0, 2)?;
    let fried = friedrich_bound(2.0, 2);
    let hmz = hmz_bound(
        2.0,
        HmzPreconditions {
            ambient_scalar_nonnegative: true,
            mean_curvature_nonnegative: true,
        },
    )?;
    for b in [&exact, &fried, &hmz] {
        let pmt = pmt_hypothesis(b, 2.0);
        println!("{:?}: λ ≥ {:.12}, margin {:.2e}, equality {}", b.kind, b.value, pmt.margin, pmt.equality);
    }
    for (c, n0) in [(3.0, 1.0 / 3f64.sqrt()), (3.0, 0.3), (3.0, 0.9)] {
        let f = friedcomp_check(c, n0);
        println!("c = {c}, N0 = {n0:.6}: margin {:.3e}, branch {:?}", f.margin, f.branch);
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
