//! Interior sample points: seeded pseudo-random and Halton low-discrepancy.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tensor::chart::Layout;

const PRIMES: [u32; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in `base`.
pub fn halton(mut index: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut f = 1.0;
    let mut out = 0.0;
    while index > 0 {
        f /= b;
        out += f * (index % base as u64) as f64;
        index /= base as u64;
    }
    out
}

/// `count` points of the Halton sequence in `[0, 1)^dim`, skipping the
/// origin.
pub fn halton_points(count: usize, dim: usize) -> Vec<Vec<f64>> {
    (1..=count as u64)
        .map(|i| (0..dim).map(|d| halton(i, PRIMES[d % PRIMES.len()])).collect())
        .collect()
}

/// Keeps polar angles away from the coordinate poles.
const POLE_GAP: f64 = 0.15;

/// Maps a unit-cube point to the shell `lo < ρ < hi` in chart coordinates.
///
/// The first cube coordinate sets the radius (log-uniform), the rest set the
/// hyperspherical angles.
pub fn shell_point(u: &[f64], n: usize, layout: Layout, shell: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = shell;
    let rho = if lo > 0.0 {
        lo * (hi / lo).powf(u[0])
    } else {
        lo + (hi - lo) * u[0]
    };
    let mut angles = Vec::with_capacity(n - 1);
    for a in 0..n - 1 {
        let t = u[a + 1];
        if a + 1 < n - 1 {
            angles.push(POLE_GAP + (PI - 2.0 * POLE_GAP) * t);
        } else {
            angles.push(2.0 * PI * t);
        }
    }
    match layout {
        Layout::Polar => {
            let mut x = vec![rho];
            x.extend(angles);
            x
        }
        Layout::Cartesian => {
            let mut x = Vec::with_capacity(n);
            let mut prefix = rho;
            for &angle in &angles {
                x.push(prefix * angle.cos());
                prefix *= angle.sin();
            }
            x.push(prefix);
            x
        }
    }
}

pub fn random_shell_points(
    seed: u64,
    count: usize,
    n: usize,
    layout: Layout,
    shell: (f64, f64),
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            shell_point(&u, n, layout, shell)
        })
        .collect()
}

pub fn halton_shell_points(count: usize, n: usize, layout: Layout, shell: (f64, f64)) -> Vec<Vec<f64>> {
    halton_points(count, n)
        .iter()
        .map(|u| shell_point(u, n, layout, shell))
        .collect()
}

/// Coordinate radius of a chart point: `|x|` or `r`.
pub fn radius(x: &[f64], layout: Layout) -> f64 {
    match layout {
        Layout::Cartesian => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Layout::Polar => x[0],
    }
}
