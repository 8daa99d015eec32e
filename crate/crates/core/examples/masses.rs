//! ADM, Komar-type flux, horizon and photon-surface masses agree on
//! Schwarzschild.

use staticgeo::boundary::ClassifyTolerances;
use staticgeo::mass::mass_report;
use staticgeo::schwarzschild::{Cut, SchwarzschildModel};

pub fn run_example() -> staticgeo::Result<()> {
    let tol = ClassifyTolerances::default();
    for (n, m) in [(3, 1.0), (4, 0.5), (5, 2.0)] {
        let model = SchwarzschildModel::new(n, m)?;
        for cut in [Cut::Horizon, Cut::Areal(2.0 * (2.0 * m).powf(1.0 / (n as f64 - 2.0)))] {
            let report = mass_report(&model.isotropic_triple(Some(cut))?, &tol)?;
            let adm = report.adm.as_ref().map(|a| a.value);
            let flux: Vec<f64> = report.flux.iter().map(|f| f.value).collect();
            println!(
                "n={n} m={m} {cut}: ADM {adm:.8?} flux {flux:.10?} {} {:.10?}",
                report.closed_form_kind.as_deref().unwrap_or("-"),
                report.closed_form
            );
        }
    }
    Ok(())
}

fn main() -> staticgeo::Result<()> {
    run_example()
}
