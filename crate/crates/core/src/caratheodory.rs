//! Schur-parameter description of the first three Carathéodory coefficients
//! and the rational Carathéodory functions attached to boundary parameters.
//!
//! Only the three boundary regimes (`τ_1 ∈ T`; `τ_1 ∈ D, τ_2 ∈ T`;
//! `τ_1, τ_2 ∈ D, τ_3 ∈ T`) determine a unique `p`. Interior parameters have
//! many realizing functions and [`boundary_function`] rejects them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Slack allowed on `|τ_2|, |τ_3| ≤ 1` and `|c_n| ≤ 2`.
pub const PARAM_TOL: f64 = 1e-12;

/// `|τ|` within this distance of 1 counts as lying on the unit circle.
pub const CIRCLE_TOL: f64 = 1e-9;

/// Denominator magnitude below which an evaluation is treated as a pole.
const POLE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(τ_1, τ_2, τ_3)` with `τ_1 ∈ [0, 1]` and `τ_2, τ_3` in the closed disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurParams {
    tau1: f64,
    tau2: Complex64,
    tau3: Complex64,
}

impl SchurParams {
    pub fn new(tau1: f64, tau2: Complex64, tau3: Complex64) -> Result<Self> {
        if !(tau1.is_finite() && (0.0..=1.0).contains(&tau1)) {
            return Err(Error::Domain(format!("tau1 = {tau1} is not in [0, 1]")));
        }
        for (name, t) in [("tau2", tau2), ("tau3", tau3)] {
            if !(t.re.is_finite() && t.im.is_finite()) || t.norm() > 1.0 + PARAM_TOL {
                return Err(Error::Domain(format!("|{name}| = {} exceeds 1", t.norm())));
            }
        }
        Ok(Self { tau1, tau2, tau3 })
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> Complex64 {
        self.tau2
    }

    pub fn tau3(&self) -> Complex64 {
        self.tau3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaratheodoryCoeffs {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl CaratheodoryCoeffs {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// `|c_n| ≤ 2` up to [`PARAM_TOL`].
    pub fn within_bounds(&self) -> bool {
        self.as_array().iter().all(|c| c.norm() <= 2.0 + PARAM_TOL)
    }

    /// Driver series `1 + c_1 z + c_2 z^2 + c_3 z^3` at the given order.
    pub fn driver_series(&self, order: usize) -> TaylorSeries {
        TaylorSeries::from_prefix(&[ONE, self.c1, self.c2, self.c3], order)
    }
}

pub fn coeffs_from_schur(params: &SchurParams) -> CaratheodoryCoeffs {
    let t1 = params.tau1;
    let t2 = params.tau2;
    let t3 = params.tau3;
    let s = 1.0 - t1 * t1;
    let c1 = Complex64::new(2.0 * t1, 0.0);
    let c2 = 2.0 * t1 * t1 + 2.0 * s * t2;
    let c3 = 2.0 * t1.powi(3) + 4.0 * s * t1 * t2 - 2.0 * s * t1 * t2 * t2
        + 2.0 * s * (1.0 - t2.norm_sqr()) * t3;
    CaratheodoryCoeffs { c1, c2, c3 }
}

/// Which boundary case of the parametrization a parameter triple sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryRegime {
    Tau1OnCircle,
    Tau2OnCircle,
    Tau3OnCircle,
}

impl BoundaryRegime {
    pub fn classify(params: &SchurParams) -> Result<Self> {
        let on_circle = |x: f64| (x - 1.0).abs() <= CIRCLE_TOL;
        let inside = |x: f64| x < 1.0 - CIRCLE_TOL;
        let (m1, m2, m3) = (params.tau1, params.tau2.norm(), params.tau3.norm());
        if on_circle(m1) {
            Ok(Self::Tau1OnCircle)
        } else if inside(m1) && on_circle(m2) {
            Ok(Self::Tau2OnCircle)
        } else if inside(m1) && inside(m2) && on_circle(m3) {
            Ok(Self::Tau3OnCircle)
        } else {
            Err(Error::AmbiguousRegime {
                tau1: m1,
                tau2_abs: m2,
                tau3_abs: m3,
            })
        }
    }
}

/// Quotient of two polynomials, `num(z) / den(z)`, with `den(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl RationalFunction {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        if den.first().is_none_or(|d| d.norm() == 0.0) || num.is_empty() {
            return Err(Error::Domain("rational function needs den(0) != 0".into()));
        }
        Ok(Self { num, den })
    }

    /// `(1 + β z^2) / (1 - β z^2)`.
    pub fn even_mobius(beta: f64) -> Self {
        let b = Complex64::new(beta, 0.0);
        Self {
            num: vec![ONE, ZERO, b],
            den: vec![ONE, ZERO, -b],
        }
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.num
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.den
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = horner(&self.den, z);
        if d.norm() < POLE_TOL {
            return Err(Error::Pole(z));
        }
        Ok(horner(&self.num, z) / d)
    }

    /// Exact Taylor expansion at the origin by series division.
    pub fn taylor(&self, order: usize) -> Result<TaylorSeries> {
        let num = TaylorSeries::from_prefix(&self.num, order);
        let den = TaylorSeries::from_prefix(&self.den, order);
        num.multiply(&den.reciprocal()?)
    }

    /// Zeros of the denominator (Weierstrass iteration).
    pub fn poles(&self) -> Vec<Complex64> {
        polynomial_roots(&self.den)
    }

    /// A pole with `|z| < 1 - CIRCLE_TOL`, if any.
    pub fn pole_inside_disk(&self) -> Option<Complex64> {
        self.poles()
            .into_iter()
            .filter(|z| z.norm() < 1.0 - CIRCLE_TOL)
            .min_by(|a, b| a.norm().total_cmp(&b.norm()))
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = match coeffs.iter().rposition(|c| c.norm() > 1e-15) {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs[..=degree].iter().map(|c| c / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..degree {
            let mut denom = ONE;
            for j in 0..degree {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = horner(&monic, roots[i]) / denom;
            roots[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 {
            break;
        }
    }
    roots
}

/// The unique Carathéodory function attached to boundary Schur parameters.
pub fn boundary_function(params: &SchurParams) -> Result<RationalFunction> {
    let t1 = Complex64::new(params.tau1, 0.0);
    let t2 = params.tau2;
    let t3 = params.tau3;
    let t1c = t1.conj();
    let t2c = t2.conj();
    let (num, den) = match BoundaryRegime::classify(params)? {
        BoundaryRegime::Tau1OnCircle => (vec![ONE, t1], vec![ONE, -t1]),
        BoundaryRegime::Tau2OnCircle => {
            (vec![ONE, t1c * t2 + t1, t2], vec![ONE, t1c * t2 - t1, -t2])
        }
        BoundaryRegime::Tau3OnCircle => (
            vec![
                ONE,
                t2c * t3 + t1c * t2 + t1,
                t1c * t3 + t1 * t2c * t3 + t2,
                t3,
            ],
            vec![
                ONE,
                t2c * t3 + t1c * t2 - t1,
                t1c * t3 - t1 * t2c * t3 - t2,
                -t3,
            ],
        ),
    };
    RationalFunction::new(num, den)
}

/// First `count` Taylor coefficients of an evaluator, by trapezoidal
/// quadrature of `p(r e^{iθ}) e^{-inθ}` on `points` nodes of the circle `|z| = r`.
pub fn fourier_coefficients<F>(
    p: F,
    radius: f64,
    points: usize,
    count: usize,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let values = (0..points)
        .map(|k| {
            p(Complex64::from_polar(
                radius,
                TAU * k as f64 / points as f64,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let coeffs = (0..count)
        .map(|n| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(1.0, -TAU * (n * k) as f64 / points as f64))
                .sum();
            sum / (points as f64 * radius.powi(n as i32))
        })
        .collect();
    Ok(coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_re: f64,
    pub argmin: Complex64,
    pub ok: bool,
}

/// Samples `Re p` on concentric circles; `ok` iff the minimum exceeds `-1e-9`.
pub fn verify_positive_real_part<F>(
    p: F,
    radii: &[f64],
    samples_per_circle: usize,
) -> Result<PositivityReport>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::Domain("radii must lie in (0, 1)".into()));
    }
    if samples_per_circle == 0 {
        return Err(Error::Domain("need at least one sample per circle".into()));
    }
    let mut min_re = f64::INFINITY;
    let mut argmin = ZERO;
    for &r in radii {
        for k in 0..samples_per_circle {
            let z = Complex64::from_polar(r, TAU * k as f64 / samples_per_circle as f64);
            let re = p(z)?.re;
            if re < min_re {
                min_re = re;
                argmin = z;
            }
        }
    }
    Ok(PositivityReport {
        min_re,
        argmin,
        ok: min_re > -1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(t1: f64, t2: Complex64, t3: Complex64) -> SchurParams {
        SchurParams::new(t1, t2, t3).unwrap()
    }

    fn cplx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tau1_one_gives_all_twos() {
        let c = coeffs_from_schur(&params(1.0, cplx(0.3, -0.2), cplx(-0.5, 0.5)));
        for cn in c.as_array() {
            assert_abs_diff_eq!((cn - 2.0).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn tau1_zero_kills_tau1_terms() {
        let (t2, t3) = (cplx(0.6, 0.3), cplx(-0.1, 0.8));
        let c = coeffs_from_schur(&params(0.0, t2, t3));
        assert_eq!(c.c1, ZERO);
        assert_abs_diff_eq!((c.c2 - 2.0 * t2).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            (c.c3 - 2.0 * (1.0 - t2.norm_sqr()) * t3).norm(),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn starlike_witness_coefficients() {
        let t = 1.0 / 6f64.sqrt();
        let c = coeffs_from_schur(&params(t, ONE, cplx(0.2, 0.9)));
        assert_abs_diff_eq!((c.c1 - 2.0 * t).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((c.c2 - 2.0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((c.c3 - 2.0 * t).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(SchurParams::new(-0.1, ZERO, ZERO).is_err());
        assert!(SchurParams::new(1.1, ZERO, ZERO).is_err());
        assert!(SchurParams::new(0.5, cplx(1.0, 0.1), ZERO).is_err());
        assert!(SchurParams::new(0.5, ZERO, cplx(f64::NAN, 0.0)).is_err());
        assert!(SchurParams::new(0.5, cplx(1.0 + 1e-13, 0.0), ZERO).is_ok());
    }

    #[test]
    fn half_plane_map() {
        let p = boundary_function(&params(1.0, ZERO, ZERO)).unwrap();
        assert_eq!(p.numerator(), &[ONE, ONE]);
        assert_eq!(p.denominator(), &[ONE, -ONE]);
        let series = p.taylor(3).unwrap();
        for n in 1..=3 {
            assert_abs_diff_eq!((series.coeff(n) - 2.0).norm(), 0.0, epsilon = 1e-15);
        }
        let rep = verify_positive_real_part(|z| p.eval(z), &[0.5, 0.9, 0.99], 720).unwrap();
        assert!(rep.ok && rep.min_re > 0.0);
    }

    #[test]
    fn even_driver_from_tau2_on_circle() {
        let p = boundary_function(&params(0.0, ONE, ZERO)).unwrap();
        let s = p.taylor(3).unwrap();
        let want = [ONE, ZERO, cplx(2.0, 0.0), ZERO];
        for (n, w) in want.iter().enumerate() {
            assert_abs_diff_eq!((s.coeff(n) - w).norm(), 0.0, epsilon = 1e-15);
        }
        let rep = verify_positive_real_part(|z| p.eval(z), &[0.5, 0.9, 0.99], 720).unwrap();
        assert!(rep.ok);
        assert!(p.pole_inside_disk().is_none());
    }

    #[test]
    fn starlike_witness_driver() {
        let t = 1.0 / 6f64.sqrt();
        let p = boundary_function(&params(t, ONE, ZERO)).unwrap();
        assert_abs_diff_eq!((p.numerator()[1] - 2.0 * t).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((p.denominator()[1]).norm(), 0.0, epsilon = 1e-15);
        let s = p.taylor(3).unwrap();
        let c = coeffs_from_schur(&params(t, ONE, ZERO));
        for (n, cn) in c.as_array().iter().enumerate() {
            assert_abs_diff_eq!((s.coeff(n + 1) - cn).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn overshooting_even_driver_fails_positivity() {
        let beta = 19f64.sqrt() / (3.0 * 2f64.sqrt());
        let p = RationalFunction::even_mobius(beta);
        let pole = p.pole_inside_disk().expect("pole inside the disk");
        assert_abs_diff_eq!(pole.norm(), beta.powf(-0.5), epsilon = 1e-12);
        match verify_positive_real_part(|z| p.eval(z), &[0.3, 0.6, 0.9, 0.99], 720) {
            Ok(rep) => assert!(!rep.ok && rep.min_re < 0.0),
            Err(Error::Pole(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn pole_on_sample_is_reported() {
        let p = RationalFunction::new(vec![ONE], vec![ONE, cplx(-2.0, 0.0)]).unwrap();
        let err = verify_positive_real_part(|z| p.eval(z), &[0.5], 4).unwrap_err();
        assert!(matches!(err, Error::Pole(z) if (z - 0.5).norm() < 1e-12));
    }

    #[test]
    fn interior_params_have_no_regime() {
        let err = boundary_function(&params(0.5, cplx(0.5, 0.0), cplx(0.5, 0.0))).unwrap_err();
        assert!(matches!(err, Error::AmbiguousRegime { .. }));
    }

    #[test]
    fn radii_outside_unit_interval_rejected() {
        let p = RationalFunction::even_mobius(1.0);
        assert!(verify_positive_real_part(|z| p.eval(z), &[1.0], 8).is_err());
        assert!(verify_positive_real_part(|z| p.eval(z), &[0.0], 8).is_err());
    }

    #[test]
    fn fourier_extraction_on_tau3_regime() {
        let pr = params(0.3, cplx(0.2, -0.5), Complex64::from_polar(1.0, 2.1));
        let p = boundary_function(&pr).unwrap();
        let got = fourier_coefficients(|z| p.eval(z), 0.3, 4096, 4).unwrap();
        let want = coeffs_from_schur(&pr);
        assert_abs_diff_eq!((got[0] - 1.0).norm(), 0.0, epsilon = 1e-12);
        for (g, w) in got[1..].iter().zip(want.as_array()) {
            assert_abs_diff_eq!((g - w).norm(), 0.0, epsilon = 1e-9);
        }
    }
}
