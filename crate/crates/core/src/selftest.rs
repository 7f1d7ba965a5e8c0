//! Oracle-equivalence suites behind the `selftest` subcommand.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::caratheodory::{boundary_function, coeffs_from_schur, fourier_coefficients};
use crate::certify::{case3_bound, envelope_phi, envelope_psi, tau1_double_prime};
use crate::classes::{coeff_map, disk_radii, membership_check, reconstruct_f, FunctionClass};
use crate::error::Result;
use crate::hankel::{h21_from_a, h21_in_c, h21_in_tau, h21_via_series_from_a};
use crate::sampling;
use crate::series::{
    gamma_closed_form, inverse_closed_form, inverse_log_coefficients, TaylorSeries,
};
use crate::ymax::{y_eval, y_oracle, YInput, ORACLE_ANGULAR_STEPS, ORACLE_RADIAL_STEPS};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, samples: usize, max_error: f64, tolerance: f64) -> Self {
        Self {
            name,
            samples,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

/// Sample counts per suite.
#[derive(Clone, Copy, Debug)]
pub struct SelftestScale {
    pub series: usize,
    pub boundary: usize,
    pub drivers: usize,
    pub hankel: usize,
    pub ymax: usize,
    pub envelope: usize,
}

impl SelftestScale {
    pub fn quick() -> Self {
        Self {
            series: 200,
            boundary: 20,
            drivers: 50,
            hankel: 1000,
            ymax: 2000,
            envelope: 1000,
        }
    }

    pub fn full() -> Self {
        Self {
            series: 200,
            boundary: 200,
            drivers: 200,
            hankel: 10_000,
            ymax: 100_000,
            envelope: 1000,
        }
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn run_selftest(seed: u64, scale: SelftestScale) -> Result<Vec<CheckResult>> {
    let mut rng = sampling::rng(seed);
    let mut out = Vec::new();

    let (mut inv_err, mut gam_err, mut trip_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..scale.series {
        let f = sampling::normalized_series(&mut rng, 8, 2.0);
        let a = |n: usize| f.coeff(n);
        let series_inv = f.invert()?;
        let closed = inverse_closed_form(a(2), a(3), a(4), a(5));
        inv_err = inv_err.max(max_diff(&series_inv.coeffs()[2..6], &closed));
        let gammas = inverse_log_coefficients(&f)?;
        let closed = gamma_closed_form(a(2), a(3), a(4), a(5));
        gam_err = gam_err.max(max_diff(&gammas[..4], &closed) / (1.0 + closed[3].norm()));
        let round = f.compose(&series_inv)?;
        trip_err = trip_err.max(round.max_abs_diff(&TaylorSeries::identity(8))?);
    }
    out.push(CheckResult::new(
        "inverse closed form vs series inversion",
        scale.series,
        inv_err,
        1e-10,
    ));
    out.push(CheckResult::new(
        "gamma closed form vs series path (relative)",
        scale.series,
        gam_err,
        1e-12,
    ));
    out.push(CheckResult::new(
        "compose(f, f^-1) = identity",
        scale.series,
        trip_err,
        1e-10,
    ));

    let mut fourier_err = 0.0f64;
    let mut min_re = f64::INFINITY;
    for _ in 0..scale.boundary {
        let params = sampling::boundary_schur_params(&mut rng);
        let p = boundary_function(&params)?;
        let got = fourier_coefficients(|z| p.eval(z), 0.3, 4096, 4)?;
        let want = coeffs_from_schur(&params).as_array();
        fourier_err = fourier_err.max(max_diff(&got[1..], &want));
        let rep = crate::caratheodory::verify_positive_real_part(
            |z| p.eval(z),
            &[0.3, 0.6, 0.9, 0.99],
            720,
        )?;
        min_re = min_re.min(rep.min_re);
    }
    out.push(CheckResult::new(
        "boundary function coefficients",
        scale.boundary,
        fourier_err,
        1e-9,
    ));
    out.push(CheckResult::new(
        "boundary function positivity (-min Re p)",
        scale.boundary,
        (-min_re).max(0.0),
        1e-9,
    ));

    let mut map_err = 0.0f64;
    let mut margin_violation = 0.0f64;
    for k in 0..scale.drivers {
        let class = FunctionClass::ALL[k % 3];
        let params = sampling::boundary_schur_params(&mut rng);
        let p = boundary_function(&params)?.taylor(256)?;
        let f = reconstruct_f(class, &p, 256)?;
        let c = coeffs_from_schur(&params);
        let mapped = coeff_map(class, &c);
        map_err = map_err.max(max_diff(&f.coeffs()[2..5], &mapped));
        let rep = membership_check(&f, class, &disk_radii(0.9, 9), 360)?;
        margin_violation = margin_violation.max(-rep.min_margin);
    }
    out.push(CheckResult::new(
        "coeff_map vs reconstruct_f",
        scale.drivers,
        map_err,
        1e-12,
    ));
    out.push(CheckResult::new(
        "class membership of boundary drivers (-min margin)",
        scale.drivers,
        margin_violation.max(0.0),
        1e-6,
    ));

    let mut hankel_err = 0.0f64;
    for class in FunctionClass::ALL {
        for _ in 0..scale.hankel {
            let params = sampling::schur_params(&mut rng);
            let c = coeffs_from_schur(&params);
            let [a2, a3, a4] = coeff_map(class, &c);
            let values = [
                h21_via_series_from_a(a2, a3, a4)?.value,
                h21_from_a(a2, a3, a4).value,
                h21_in_c(class, &c).value,
                h21_in_tau(class, &params).value,
            ];
            for i in 0..4 {
                for j in i + 1..4 {
                    hankel_err = hankel_err.max((values[i] - values[j]).norm());
                }
            }
        }
    }
    out.push(CheckResult::new(
        "H21 gamma/a/c/tau agreement",
        3 * scale.hankel,
        hankel_err,
        1e-12,
    ));

    let mut y_err = 0.0f64;
    for _ in 0..scale.ymax {
        let input = YInput::new(
            rng.gen_range(-3.0..=3.0),
            rng.gen_range(-3.0..=3.0),
            rng.gen_range(-3.0..=3.0),
        );
        let oracle = y_oracle(input, ORACLE_RADIAL_STEPS, ORACLE_ANGULAR_STEPS).value;
        y_err = y_err.max((y_eval(input).value - oracle).abs());
    }
    out.push(CheckResult::new(
        "Y closed form vs polar oracle",
        scale.ymax,
        y_err,
        1e-5,
    ));

    let tpp = tau1_double_prime();
    let mut env_err = 0.0f64;
    for _ in 0..scale.envelope {
        let t = rng.gen_range(1e-6..1.0 - 1e-6);
        let bound = case3_bound(FunctionClass::StarlikeHalf, t)?.value;
        let closed = if t <= tpp {
            envelope_phi(t)?
        } else {
            envelope_psi(t)?
        };
        env_err = env_err.max((bound - closed).abs());
    }
    out.push(CheckResult::new(
        "starlike case-3 bound vs phi/psi",
        scale.envelope,
        env_err,
        1e-9,
    ));

    Ok(out)
}
