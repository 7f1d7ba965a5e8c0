//! Seeded random inputs shared by the property suites.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::caratheodory::SchurParams;
use crate::series::TaylorSeries;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the closed disk `|z| ≤ radius`.
pub fn complex_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

pub fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

pub fn schur_params<R: Rng>(rng: &mut R) -> SchurParams {
    let tau1 = rng.gen_range(0.0..=1.0);
    SchurParams::new(tau1, complex_in_disk(rng, 1.0), complex_in_disk(rng, 1.0))
        .expect("sampled inside the domain")
}

/// Parameters in one of the three boundary regimes, chosen uniformly.
pub fn boundary_schur_params<R: Rng>(rng: &mut R) -> SchurParams {
    let inner = |rng: &mut R| complex_in_disk(rng, 0.999);
    let (tau1, tau2, tau3) = match rng.gen_range(0..3) {
        0 => (1.0, inner(rng), inner(rng)),
        1 => (rng.gen_range(0.0..0.999), unimodular(rng), inner(rng)),
        _ => (
            rng.gen_range(0.0..0.999),
            complex_in_disk(rng, 0.999),
            unimodular(rng),
        ),
    };
    SchurParams::new(tau1, tau2, tau3).expect("sampled inside the domain")
}

/// `z + a_2 z^2 + ... + a_N z^N` with `|a_n| ≤ radius`.
pub fn normalized_series<R: Rng>(rng: &mut R, order: usize, radius: f64) -> TaylorSeries {
    let tail: Vec<Complex64> = (2..=order).map(|_| complex_in_disk(rng, radius)).collect();
    TaylorSeries::normalized(&tail, order)
}
