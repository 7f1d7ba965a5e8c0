//! Numerical certification of the sharp bounds
//!
//! | class           | bound  |
//! |-----------------|--------|
//! | starlike, 1/2   | 19/288 |
//! | convex, 1/2     | 1/144  |
//! | bounded turning | 1/36   |
//!
//! for `|H_{2,1}(F_{f^{-1}}/2)|`.
//!
//! Three independent pieces live here:
//!
//! * the envelope functions bounding `|H|` slice by slice in `τ_1`
//!   ([`envelope_phi`], [`envelope_psi`], [`case3_bound`]);
//! * an exhaustive grid search with zoom refinement over the Schur parameter
//!   domain ([`search_max`]);
//! * explicit extremal functions reconstructed from their drivers
//!   ([`extremal_check`]).

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::caratheodory::{
    boundary_function, verify_positive_real_part, RationalFunction, SchurParams,
};
use crate::classes::{disk_radii, membership_check, reconstruct_f, FunctionClass};
use crate::error::{Error, Result};
use crate::hankel::{h21_from_a, h21_tau_raw, h21_via_series};
use crate::series::DEFAULT_ORDER;
use crate::ymax::{y_eval, YBranch, YInput};

/// Allowed excess of the search maximum over the exact bound.
pub const BOUND_TOL: f64 = 1e-7;
/// Largest accepted shortfall of the search maximum below the exact bound.
pub const ATTAINMENT_TOL: f64 = 1e-6;
/// No single sampled point may exceed the bound by more than this.
pub const SOUNDNESS_TOL: f64 = 1e-9;
/// Points within this distance of the maximum compete in the witness tie-break.
pub const TIE_BREAK_TOL: f64 = 1e-9;
/// Zoom factor between refinement rounds.
pub const ZOOM_FACTOR: f64 = 10.0;

const DOMAIN_SLACK: f64 = 1e-12;
const TAU3_NOTE: &str =
    "H is affine in tau3, so |H| over the closed disk is maximized on |tau3| = 1";

/// Critical point `1/√6` of `φ`.
pub fn t0() -> f64 {
    1.0 / 6f64.sqrt()
}

/// Switch point `sqrt((√61 - 5)/6)` between the two starlike envelope pieces.
pub fn tau1_double_prime() -> f64 {
    ((61f64.sqrt() - 5.0) / 6.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactBound {
    pub numerator: u64,
    pub denominator: u64,
}

impl ExactBound {
    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for ExactBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for ExactBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn theoretical_bound(class: FunctionClass) -> ExactBound {
    let (numerator, denominator) = match class {
        FunctionClass::StarlikeHalf => (19, 288),
        FunctionClass::ConvexHalf => (1, 144),
        FunctionClass::BoundedTurningHalf => (1, 36),
    };
    ExactBound {
        numerator,
        denominator,
    }
}

/// `|H|` at `τ_1 = 1`, where it does not depend on `τ_2, τ_3`.
pub fn case1_value(class: FunctionClass) -> f64 {
    match class {
        FunctionClass::StarlikeHalf => 1.0 / 48.0,
        _ => 1.0 / 2304.0,
    }
}

/// Bound on `|H|` at `τ_1 = 0`, attained for `|τ_2| = 1`.
pub fn case2_bound(class: FunctionClass) -> f64 {
    match class {
        FunctionClass::StarlikeHalf => 1.0 / 16.0,
        FunctionClass::ConvexHalf => 1.0 / 144.0,
        FunctionClass::BoundedTurningHalf => 1.0 / 36.0,
    }
}

fn check_interval(name: &str, t: f64, lo: f64, hi: f64) -> Result<()> {
    if t.is_finite() && t >= lo - DOMAIN_SLACK && t <= hi + DOMAIN_SLACK {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name}({t}) needs t in [{lo}, {hi}]"
        )))
    }
}

/// `φ(t) = (3 + 2t^2 - 6t^4)/48` on `[0, τ_1'']`.
pub fn envelope_phi(t: f64) -> Result<f64> {
    check_interval("phi", t, 0.0, tau1_double_prime())?;
    let t2 = t * t;
    Ok((3.0 + 2.0 * t2 - 6.0 * t2 * t2) / 48.0)
}

/// `ψ(t) = (3 - 2t^2)/48 · sqrt((7 - 3t^2)/(3 + t^2))` on `[τ_1'', 1]`.
pub fn envelope_psi(t: f64) -> Result<f64> {
    check_interval("psi", t, tau1_double_prime(), 1.0)?;
    let t2 = t * t;
    Ok((3.0 - 2.0 * t2) / 48.0 * ((7.0 - 3.0 * t2) / (3.0 + t2)).sqrt())
}

/// Coefficients with `|H| ≤ prefactor · (|A + Bτ_2 + Cτ_2^2| + 1 - |τ_2|^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseBoundCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub prefactor: f64,
}

pub fn case_coefficients(class: FunctionClass, t: f64) -> Result<CaseBoundCoefficients> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "case-3 coefficients need t in (0, 1), got {t}"
        )));
    }
    let s = 1.0 - t * t;
    let t3 = t.powi(3);
    let coeffs = match class {
        FunctionClass::StarlikeHalf => CaseBoundCoefficients {
            a: t3 / (4.0 * s),
            b: -t,
            c: -(3.0 + t * t) / (4.0 * t),
            prefactor: t * s / 12.0,
        },
        FunctionClass::ConvexHalf => CaseBoundCoefficients {
            a: -t3 / (24.0 * s),
            b: -t / 6.0,
            c: -(2.0 + t * t) / (3.0 * t),
            prefactor: t * s / 96.0,
        },
        FunctionClass::BoundedTurningHalf => CaseBoundCoefficients {
            a: -t3 / (72.0 * s),
            b: -4.0 * t / 9.0,
            c: -(8.0 + t * t) / (9.0 * t),
            prefactor: t * s / 32.0,
        },
    };
    Ok(coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Case3Bound {
    pub value: f64,
    pub branch: YBranch,
    pub coefficients: CaseBoundCoefficients,
}

/// `prefactor(t) · Y(A(t), B(t), C(t))` for `t ∈ (0, 1)`.
pub fn case3_bound(class: FunctionClass, t: f64) -> Result<Case3Bound> {
    let coefficients = case_coefficients(class, t)?;
    let y = y_eval(YInput::new(coefficients.a, coefficients.b, coefficients.c));
    Ok(Case3Bound {
        value: coefficients.prefactor * y.value,
        branch: y.branch,
        coefficients,
    })
}

/// Upper envelope of `|H|` on the slice `τ_1 = t`, with a label for the case used.
pub fn slice_envelope(class: FunctionClass, t: f64) -> Result<(f64, String)> {
    if t <= 0.0 {
        Ok((case2_bound(class), "case2".to_string()))
    } else if t >= 1.0 {
        Ok((case1_value(class), "case1".to_string()))
    } else {
        let b = case3_bound(class, t)?;
        Ok((b.value, format!("case3:{}", b.branch.label())))
    }
}

/// Grid resolution of the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchGrid {
    pub n_tau1: usize,
    pub n_tau2_modulus: usize,
    pub n_tau2_phase: usize,
    pub n_tau3_phase: usize,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            n_tau1: 128,
            n_tau2_modulus: 64,
            n_tau2_phase: 64,
            n_tau3_phase: 16,
        }
    }
}

impl SearchGrid {
    pub const MIN_RESOLUTION: usize = 32;
    pub const MIN_TAU3_PHASES: usize = 8;

    pub fn validate(&self) -> Result<()> {
        let main = [
            ("n_tau1", self.n_tau1),
            ("n_tau2_modulus", self.n_tau2_modulus),
            ("n_tau2_phase", self.n_tau2_phase),
        ];
        for (name, n) in main {
            if n < Self::MIN_RESOLUTION {
                return Err(Error::Domain(format!(
                    "{name} = {n} is below the minimum {}",
                    Self::MIN_RESOLUTION
                )));
            }
        }
        if self.n_tau3_phase < Self::MIN_TAU3_PHASES {
            return Err(Error::Domain(format!(
                "n_tau3_phase = {} is below the minimum {}",
                self.n_tau3_phase,
                Self::MIN_TAU3_PHASES
            )));
        }
        Ok(())
    }
}

pub const DEFAULT_REFINEMENT_ROUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridMeta {
    #[serde(flatten)]
    pub grid: SearchGrid,
    pub refinement_rounds: usize,
    pub zoom_factor: f64,
    pub points_evaluated: u64,
    pub tau3_domain: &'static str,
    pub tau3_justification: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceDiagnostic {
    pub tau1: f64,
    pub slice_max: f64,
    pub envelope: f64,
    pub case: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificationReport {
    pub class: FunctionClass,
    pub bound: ExactBound,
    pub search_max: f64,
    pub gap: f64,
    pub witness: SchurParams,
    pub witness_value: f64,
    pub max_excess: f64,
    pub grid_meta: GridMeta,
    pub diagnostics: Vec<SliceDiagnostic>,
}

impl CertificationReport {
    /// The search found a value above the bound.
    pub fn bound_exceeded(&self) -> bool {
        self.search_max > self.bound.value() + BOUND_TOL
    }

    /// The search came within [`ATTAINMENT_TOL`] of the bound.
    pub fn attained(&self) -> bool {
        self.gap <= ATTAINMENT_TOL
    }

    /// Every sampled point stays below the bound up to [`SOUNDNESS_TOL`].
    pub fn sound(&self) -> bool {
        self.max_excess <= SOUNDNESS_TOL
    }

    /// Every slice maximum stays below its envelope up to [`SOUNDNESS_TOL`].
    pub fn envelopes_respected(&self) -> bool {
        self.diagnostics
            .iter()
            .all(|d| d.slice_max <= d.envelope + SOUNDNESS_TOL)
    }

    pub fn passed(&self) -> bool {
        !self.bound_exceeded() && self.attained() && self.sound()
    }
}

/// Sample coordinates of one scan; each axis must be sorted ascending.
struct Axes {
    tau1: Vec<f64>,
    modulus: Vec<f64>,
    phase2: Vec<f64>,
    phase3: Vec<f64>,
}

struct Scan {
    max_value: f64,
    max_excess: f64,
    witness: [f64; 4],
    witness_value: f64,
    slice_max: Vec<f64>,
    evaluated: u64,
}

fn scan(class: FunctionClass, axes: &Axes, bound: f64) -> Scan {
    let rot2: Vec<Complex64> = axes
        .phase2
        .iter()
        .map(|t| Complex64::from_polar(1.0, *t))
        .collect();
    let rot3: Vec<Complex64> = axes
        .phase3
        .iter()
        .map(|t| Complex64::from_polar(1.0, *t))
        .collect();
    let slice_value =
        |t1: f64, r: f64, k: usize, l: usize| h21_tau_raw(class, t1, rot2[k] * r, rot3[l]).norm();

    // Pass 1: per-slice maxima. Max is associative, so the reduction does
    // not depend on how rayon splits the work.
    let slice_max: Vec<f64> = axes
        .tau1
        .par_iter()
        .map(|&t1| {
            let mut best = f64::NEG_INFINITY;
            for &r in &axes.modulus {
                for k in 0..rot2.len() {
                    for l in 0..rot3.len() {
                        best = best.max(slice_value(t1, r, k, l));
                    }
                }
            }
            best
        })
        .collect();
    let max_value = slice_max.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Pass 2: lexicographically smallest point within the tie band.
    let threshold = max_value - TIE_BREAK_TOL;
    let witness = axes
        .tau1
        .par_iter()
        .zip(&slice_max)
        .map(|(&t1, &smax)| {
            if smax < threshold {
                return None;
            }
            for &r in &axes.modulus {
                for k in 0..rot2.len() {
                    for l in 0..rot3.len() {
                        let v = slice_value(t1, r, k, l);
                        if v >= threshold {
                            return Some(([t1, r, axes.phase2[k], axes.phase3[l]], v));
                        }
                    }
                }
            }
            None
        })
        .find_first(|w| w.is_some())
        .flatten()
        .expect("the maximum lies in some slice");

    let per_slice = (axes.modulus.len() * rot2.len() * rot3.len()) as u64;
    Scan {
        max_value,
        max_excess: max_value - bound,
        witness: witness.0,
        witness_value: witness.1,
        slice_max,
        evaluated: per_slice * axes.tau1.len() as u64,
    }
}

fn linspace_closed(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn phases(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

/// Points per axis of a refinement window (`±h` at spacing `h / ZOOM_FACTOR`).
const WINDOW_POINTS: usize = 21;

fn window(center: f64, half_width: f64, clamp: Option<(f64, f64)>) -> Vec<f64> {
    let mid = (WINDOW_POINTS / 2) as f64;
    let step = half_width / mid;
    let mut values: Vec<f64> = (0..WINDOW_POINTS)
        .map(|p| {
            let x = center + (p as f64 - mid) * step;
            match clamp {
                Some((lo, hi)) => x.clamp(lo, hi),
                None => x,
            }
        })
        .collect();
    values.dedup();
    values
}

/// Maximizes `|H|` over `τ_1 ∈ [0, 1]`, `τ_2 = r e^{iθ}` with `r ∈ [0, 1]`,
/// and `τ_3` on the unit circle, then zooms in around the incumbent.
///
/// The witness is the lexicographically smallest `(τ_1, |τ_2|, arg τ_2, arg τ_3)`
/// within [`TIE_BREAK_TOL`] of the maximum, so the report does not depend on
/// the number of worker threads.
pub fn search_max(
    class: FunctionClass,
    grid: SearchGrid,
    refinement_rounds: usize,
) -> Result<CertificationReport> {
    grid.validate()?;
    let bound = theoretical_bound(class);
    let axes = Axes {
        tau1: linspace_closed(grid.n_tau1),
        modulus: linspace_closed(grid.n_tau2_modulus),
        phase2: phases(grid.n_tau2_phase),
        phase3: phases(grid.n_tau3_phase),
    };
    let coarse = scan(class, &axes, bound.value());

    let diagnostics = axes
        .tau1
        .iter()
        .zip(&coarse.slice_max)
        .map(|(&t, &slice_max)| {
            let (envelope, case) = slice_envelope(class, t)?;
            Ok(SliceDiagnostic {
                tau1: t,
                slice_max,
                envelope,
                case,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut search_max = coarse.max_value;
    let mut max_excess = coarse.max_excess;
    let mut evaluated = coarse.evaluated;
    let mut incumbent = coarse.witness;
    let mut incumbent_value = coarse.witness_value;
    let mut half = [
        1.0 / (grid.n_tau1 - 1) as f64,
        1.0 / (grid.n_tau2_modulus - 1) as f64,
        TAU / grid.n_tau2_phase as f64,
        TAU / grid.n_tau3_phase as f64,
    ];
    for _ in 0..refinement_rounds {
        let axes = Axes {
            tau1: window(incumbent[0], half[0], Some((0.0, 1.0))),
            modulus: window(incumbent[1], half[1], Some((0.0, 1.0))),
            phase2: window(incumbent[2], half[2], None),
            phase3: window(incumbent[3], half[3], None),
        };
        let fine = scan(class, &axes, bound.value());
        evaluated += fine.evaluated;
        max_excess = max_excess.max(fine.max_excess);
        search_max = search_max.max(fine.max_value);
        // Move only on a real improvement; otherwise ties would drift the
        // witness towards the low corner of each window.
        if fine.witness_value > incumbent_value + TIE_BREAK_TOL {
            incumbent = fine.witness;
            incumbent_value = fine.witness_value;
        }
        for h in &mut half {
            *h /= ZOOM_FACTOR;
        }
    }

    let witness = SchurParams::new(
        incumbent[0],
        Complex64::from_polar(incumbent[1], incumbent[2].rem_euclid(TAU)),
        Complex64::from_polar(1.0, incumbent[3].rem_euclid(TAU)),
    )?;
    Ok(CertificationReport {
        class,
        bound,
        search_max,
        gap: bound.value() - search_max,
        witness,
        witness_value: incumbent_value,
        max_excess,
        grid_meta: GridMeta {
            grid,
            refinement_rounds,
            zoom_factor: ZOOM_FACTOR,
            points_evaluated: evaluated,
            tau3_domain: "unit circle",
            tau3_justification: TAU3_NOTE,
        },
        diagnostics,
    })
}

/// Truncation order used to reconstruct extremal functions.
pub const EXTREMAL_ORDER: usize = 256;
/// Circles sampled when testing the positive real part of a driver.
pub const POSITIVITY_RADII: [f64; 4] = [0.3, 0.6, 0.9, 0.99];
pub const POSITIVITY_SAMPLES: usize = 720;
/// `|H|` must match the bound to this tolerance.
pub const EXTREMAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalCandidate {
    pub label: String,
    pub driver: String,
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
    pub h21: Complex64,
    pub h21_abs: f64,
    /// `Γ_1 Γ_3 - Γ_2^2` from series inversion of the reconstructed `f`.
    pub h21_gamma_path: Complex64,
    pub matches_bound: bool,
    pub driver_min_re: Option<f64>,
    pub interior_pole: Option<Complex64>,
    pub class_min_margin: Option<f64>,
    pub membership_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub class: FunctionClass,
    pub bound: ExactBound,
    pub candidates: Vec<ExtremalCandidate>,
}

impl ExtremalReport {
    pub fn candidate(&self, label: &str) -> Option<&ExtremalCandidate> {
        self.candidates.iter().find(|c| c.label == label)
    }
}

fn evaluate_candidate(
    class: FunctionClass,
    label: &str,
    driver_name: &str,
    p: &RationalFunction,
) -> Result<ExtremalCandidate> {
    let bound = theoretical_bound(class).value();
    let series = p.taylor(EXTREMAL_ORDER)?;
    let f = reconstruct_f(class, &series, EXTREMAL_ORDER)?;
    let (a2, a3, a4) = (f.coeff(2), f.coeff(3), f.coeff(4));
    let h21 = h21_from_a(a2, a3, a4).value;
    let h21_gamma_path = h21_via_series(&f.with_order(DEFAULT_ORDER))?.value;

    let interior_pole = p.pole_inside_disk();
    let positivity =
        verify_positive_real_part(|z| p.eval(z), &POSITIVITY_RADII, POSITIVITY_SAMPLES);
    let (driver_min_re, driver_ok) = match positivity {
        Ok(rep) => (Some(rep.min_re), rep.ok),
        Err(Error::Pole(_)) => (None, false),
        Err(e) => return Err(e),
    };
    let membership = membership_check(&f, class, &disk_radii(0.9, 9), POSITIVITY_SAMPLES);
    let (class_min_margin, class_ok) = match membership {
        Ok(rep) => (Some(rep.min_margin), rep.ok),
        Err(Error::NearZeroDenominator(_)) => (None, false),
        Err(e) => return Err(e),
    };
    Ok(ExtremalCandidate {
        label: label.to_string(),
        driver: driver_name.to_string(),
        a2,
        a3,
        a4,
        h21,
        h21_abs: h21.norm(),
        h21_gamma_path,
        matches_bound: (h21.norm() - bound).abs() <= EXTREMAL_TOL,
        driver_min_re,
        interior_pole,
        class_min_margin,
        membership_ok: driver_ok && class_ok && interior_pole.is_none(),
    })
}

/// `β = √19 / (3√2)`, the coefficient in the published starlike candidate
/// `z f'/f = 1/(1 - β z^2)`.
pub fn starlike_beta() -> f64 {
    19f64.sqrt() / (3.0 * 2f64.sqrt())
}

/// Reconstructs the extremal functions of a class and checks `|H|` and membership.
///
/// For the starlike class two candidates are reported: the even driver
/// `(1 + βz^2)/(1 - βz^2)` (which has a pole inside the disk) and the driver
/// built from the search witness `τ_1 = 1/√6, τ_2 = 1`.
pub fn extremal_check(class: FunctionClass) -> Result<ExtremalReport> {
    let candidates = match class {
        FunctionClass::StarlikeHalf => {
            let beta = starlike_beta();
            let even = RationalFunction::even_mobius(beta);
            let witness =
                SchurParams::new(t0(), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?;
            let from_witness = boundary_function(&witness)?;
            vec![
                evaluate_candidate(class, "even-driver", "(1+beta z^2)/(1-beta z^2)", &even)?,
                evaluate_candidate(
                    class,
                    "schur-witness",
                    "(1+(2/sqrt6) z+z^2)/(1-z^2)",
                    &from_witness,
                )?,
            ]
        }
        FunctionClass::ConvexHalf | FunctionClass::BoundedTurningHalf => {
            let even = RationalFunction::even_mobius(1.0);
            vec![evaluate_candidate(
                class,
                "even-driver",
                "(1+z^2)/(1-z^2)",
                &even,
            )?]
        }
    };
    Ok(ExtremalReport {
        class,
        bound: theoretical_bound(class),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn named_constants() {
        assert_abs_diff_eq!(tau1_double_prime(), 0.684379, epsilon = 1e-6);
        assert_abs_diff_eq!(t0(), 0.408248290463863, epsilon = 1e-15);
        assert_eq!(
            theoretical_bound(FunctionClass::StarlikeHalf).to_string(),
            "19/288"
        );
        assert_eq!(
            theoretical_bound(FunctionClass::ConvexHalf).to_string(),
            "1/144"
        );
        assert_eq!(
            theoretical_bound(FunctionClass::BoundedTurningHalf).to_string(),
            "1/36"
        );
    }

    #[test]
    fn phi_values() {
        assert_abs_diff_eq!(envelope_phi(t0()).unwrap(), 19.0 / 288.0, epsilon = 1e-15);
        assert_abs_diff_eq!(envelope_phi(t0()).unwrap(), 0.0659722, epsilon = 1e-7);
        assert_abs_diff_eq!(envelope_phi(0.0).unwrap(), 1.0 / 16.0, epsilon = 1e-15);
        assert!(envelope_phi(0.7).is_err());
        assert!(envelope_phi(-0.01).is_err());
    }

    #[test]
    fn psi_values() {
        assert_abs_diff_eq!(
            envelope_psi(tau1_double_prime()).unwrap(),
            0.0545938,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(envelope_psi(1.0).unwrap(), 1.0 / 48.0, epsilon = 1e-15);
        assert!(envelope_psi(0.5).is_err());
    }

    #[test]
    fn phi_is_unimodal_with_peak_at_t0() {
        let n = 2000;
        let tpp = tau1_double_prime();
        let xs: Vec<f64> = (0..=n).map(|i| tpp * i as f64 / n as f64).collect();
        for w in xs.windows(2) {
            let (p0, p1) = (envelope_phi(w[0]).unwrap(), envelope_phi(w[1]).unwrap());
            if w[1] <= t0() {
                assert!(p1 > p0);
            } else if w[0] >= t0() {
                assert!(p1 < p0);
            }
        }
    }

    #[test]
    fn psi_is_decreasing() {
        let tpp = tau1_double_prime();
        let mut prev = envelope_psi(tpp).unwrap();
        for i in 1..=1000 {
            let t = tpp + (1.0 - tpp) * i as f64 / 1000.0;
            let v = envelope_psi(t).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn case3_examples() {
        let bt = case3_bound(FunctionClass::BoundedTurningHalf, 0.5).unwrap();
        assert_abs_diff_eq!(bt.value, 55.5625 / 2304.0, epsilon = 1e-15);
        assert_eq!(bt.branch, YBranch::ISum);
        let st = case3_bound(FunctionClass::StarlikeHalf, t0()).unwrap();
        assert_abs_diff_eq!(st.value, 19.0 / 288.0, epsilon = 1e-15);
        assert_eq!(st.branch, YBranch::RSecond);
        for t in [1e-6, 0.1, 0.5, 0.99] {
            assert!(case3_bound(FunctionClass::ConvexHalf, t).unwrap().value <= 1.0 / 144.0);
        }
        let near_zero = case3_bound(FunctionClass::ConvexHalf, 1e-6).unwrap().value;
        assert_abs_diff_eq!(near_zero, 1.0 / 144.0, epsilon = 1e-12);
        assert!(case3_bound(FunctionClass::ConvexHalf, 0.0).is_err());
        assert!(case3_bound(FunctionClass::ConvexHalf, 1.0).is_err());
    }

    #[test]
    fn sign_of_ac_per_class() {
        for t in [0.05, 0.3, 0.6, 0.95] {
            let s = case_coefficients(FunctionClass::StarlikeHalf, t).unwrap();
            assert!(s.a * s.c < 0.0);
            for class in [FunctionClass::ConvexHalf, FunctionClass::BoundedTurningHalf] {
                let k = case_coefficients(class, t).unwrap();
                assert!(k.a * k.c > 0.0);
            }
        }
    }

    #[test]
    fn small_grid_search_stays_below_bounds() {
        let grid = SearchGrid {
            n_tau1: 33,
            n_tau2_modulus: 32,
            n_tau2_phase: 32,
            n_tau3_phase: 8,
        };
        for class in FunctionClass::ALL {
            let rep = search_max(class, grid, 2).unwrap();
            assert!(rep.sound(), "{class}: excess {}", rep.max_excess);
            assert!(rep.envelopes_respected());
            assert!(!rep.bound_exceeded());
            assert_eq!(rep.diagnostics.len(), 33);
        }
    }

    #[test]
    fn grid_validation() {
        let g = SearchGrid {
            n_tau1: 16,
            ..SearchGrid::default()
        };
        assert!(search_max(FunctionClass::ConvexHalf, g, 0).is_err());
        let g = SearchGrid {
            n_tau3_phase: 4,
            ..SearchGrid::default()
        };
        assert!(g.validate().is_err());
    }

    #[test]
    fn convex_extremal() {
        let rep = extremal_check(FunctionClass::ConvexHalf).unwrap();
        let c = &rep.candidates[0];
        assert_abs_diff_eq!(c.a2.norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((c.a3 - 1.0 / 6.0).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.a4.norm(), 0.0, epsilon = 1e-12);
        assert!(c.matches_bound && c.membership_ok, "{c:?}");
        assert_abs_diff_eq!((c.h21 - c.h21_gamma_path).norm(), 0.0, epsilon = 1e-12);
    }
}
