//! Shared fixtures for the benchmarks.

use nuccr_core::verify::time_grid;
use nuccr_core::PhysParams;

/// Default parameters at the three reference momenta.
pub fn regimes() -> Vec<(f64, PhysParams)> {
    [0.1, 1.0, 10.0].into_iter().map(|p| (p, PhysParams::defaults(p).expect("valid parameters"))).collect()
}

/// `n` times spread over two flavor periods.
pub fn times(params: &PhysParams, n: usize) -> Vec<f64> {
    time_grid(params.flavor_window(), n)
}
