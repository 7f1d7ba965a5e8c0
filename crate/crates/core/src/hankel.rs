//! `H_{2,1}(F_{f^{-1}}/2) = Γ_1 Γ_3 - Γ_2^2` in four coordinate systems:
//! inverse logarithmic coefficients, Taylor coefficients `a_n`, Carathéodory
//! coefficients `c_n` and Schur parameters `τ_n`.

use num_complex::Complex64;
use serde::Serialize;

use crate::caratheodory::{CaratheodoryCoeffs, SchurParams};
use crate::classes::FunctionClass;
use crate::error::{Error, Result};
use crate::series::{inverse_log_coefficients, TaylorSeries, DEFAULT_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    Gamma,
    A,
    C,
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HankelValue {
    pub value: Complex64,
    pub coordinates: Coordinates,
    pub class: Option<FunctionClass>,
}

impl HankelValue {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

pub fn h21_from_gammas(g1: Complex64, g2: Complex64, g3: Complex64) -> HankelValue {
    HankelValue {
        value: g1 * g3 - g2 * g2,
        coordinates: Coordinates::Gamma,
        class: None,
    }
}

/// Gamma-path value: invert `f` as a series, take `log(F(w)/w)`, then the determinant.
pub fn h21_via_series(f: &TaylorSeries) -> Result<HankelValue> {
    let gammas = inverse_log_coefficients(f)?;
    Ok(h21_from_gammas(gammas[0], gammas[1], gammas[2]))
}

/// Gamma-path value for `f = z + a_2 z^2 + a_3 z^3 + a_4 z^4`.
pub fn h21_via_series_from_a(a2: Complex64, a3: Complex64, a4: Complex64) -> Result<HankelValue> {
    h21_via_series(&TaylorSeries::normalized(&[a2, a3, a4], DEFAULT_ORDER))
}

pub fn h21_from_a(a2: Complex64, a3: Complex64, a4: Complex64) -> HankelValue {
    let value = (13.0 * a2.powi(4) - 12.0 * a2 * a2 * a3 - 12.0 * a3 * a3 + 12.0 * a2 * a4) / 48.0;
    HankelValue {
        value,
        coordinates: Coordinates::A,
        class: None,
    }
}

pub fn h21_in_c(class: FunctionClass, c: &CaratheodoryCoeffs) -> HankelValue {
    let CaratheodoryCoeffs { c1, c2, c3 } = *c;
    let c1sq = c1 * c1;
    let value = match class {
        FunctionClass::StarlikeHalf => {
            (3.0 * c1sq * c1sq - 6.0 * c1sq * c2 - 6.0 * c2 * c2 + 8.0 * c1 * c3) / 384.0
        }
        FunctionClass::ConvexHalf => {
            (11.0 * c1sq * c1sq - 40.0 * c1sq * c2 - 64.0 * c2 * c2 + 96.0 * c1 * c3) / 36864.0
        }
        FunctionClass::BoundedTurningHalf => {
            (39.0 * c1sq * c1sq - 96.0 * c1sq * c2 - 256.0 * c2 * c2 + 288.0 * c1 * c3) / 36864.0
        }
    };
    HankelValue {
        value,
        coordinates: Coordinates::C,
        class: Some(class),
    }
}

pub fn h21_in_tau(class: FunctionClass, params: &SchurParams) -> HankelValue {
    HankelValue {
        value: h21_tau_raw(class, params.tau1(), params.tau2(), params.tau3()),
        coordinates: Coordinates::Tau,
        class: Some(class),
    }
}

/// Unvalidated τ-form, used by the grid search inner loop.
#[inline]
pub(crate) fn h21_tau_raw(
    class: FunctionClass,
    t1: f64,
    t2: Complex64,
    t3: Complex64,
) -> Complex64 {
    let t1sq = t1 * t1;
    let s = 1.0 - t1sq;
    let t2sq = t2 * t2;
    let tail = t3 * (t1 * s * (1.0 - t2.norm_sqr()));
    match class {
        FunctionClass::StarlikeHalf => {
            (t1sq * t1sq - 4.0 * s * t1sq * t2 - s * (3.0 + t1sq) * t2sq + 4.0 * tail) / 48.0
        }
        FunctionClass::ConvexHalf => {
            (-t1sq * t1sq - 4.0 * s * t1sq * t2 - 8.0 * s * (2.0 + t1sq) * t2sq + 24.0 * tail)
                / 2304.0
        }
        FunctionClass::BoundedTurningHalf => {
            (-t1sq * t1sq - 32.0 * s * t1sq * t2 - 8.0 * s * (8.0 + t1sq) * t2sq + 72.0 * tail)
                / 2304.0
        }
    }
}

/// Determinant of the `q × q` Hankel matrix whose `(i, j)` entry is the term
/// with index `n + i + j` of `sequence`.
///
/// Terms are numbered from 1: `sequence[0]` is term 1, so `(q, n) = (2, 1)` on
/// `[Γ_1, Γ_2, Γ_3]` is `Γ_1 Γ_3 - Γ_2^2`.
pub fn hankel_generic(sequence: &[Complex64], q: usize, n: usize) -> Result<Complex64> {
    if q == 0 || n == 0 {
        return Err(Error::Domain("q and n must be at least 1".into()));
    }
    let needed = n + 2 * (q - 1);
    if needed > sequence.len() {
        return Err(Error::Range {
            needed,
            available: sequence.len(),
        });
    }
    let entry = |i: usize, j: usize| sequence[n - 1 + i + j];
    let det = match q {
        1 => entry(0, 0),
        2 => entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0),
        3 => {
            entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1))
                - entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0))
                + entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0))
        }
        _ => {
            let mut m: Vec<Vec<Complex64>> = (0..q)
                .map(|i| (0..q).map(|j| entry(i, j)).collect())
                .collect();
            lu_determinant(&mut m)
        }
    };
    Ok(det)
}

fn lu_determinant(m: &mut [Vec<Complex64>]) -> Complex64 {
    let size = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap_or(col);
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..size {
            let factor = m[row][col] / m[col][col];
            let (upper, lower) = m.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::coeffs_from_schur;
    use approx::assert_abs_diff_eq;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn gamma_form_examples() {
        assert_eq!(h21_from_gammas(ZERO, ZERO, ZERO).value, ZERO);
        let koebe = h21_from_gammas(real(-1.0), real(1.5), real(-10.0 / 3.0));
        assert_abs_diff_eq!(koebe.value.re, 13.0 / 12.0, epsilon = 1e-14);
        let a3 = Complex64::new(0.3, 0.4);
        let v = h21_from_gammas(ZERO, -a3 / 2.0, ZERO);
        assert_abs_diff_eq!((v.value + a3 * a3 / 4.0).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn a_form_sharpness_values() {
        let convex = h21_from_a(ZERO, real(1.0 / 6.0), ZERO);
        assert_abs_diff_eq!(convex.value.re, -1.0 / 144.0, epsilon = 1e-15);
        let bt = h21_from_a(ZERO, real(1.0 / 3.0), ZERO);
        assert_abs_diff_eq!(bt.value.re, -1.0 / 36.0, epsilon = 1e-15);
    }

    #[test]
    fn c_form_examples() {
        let twos = CaratheodoryCoeffs::new(real(2.0), real(2.0), real(2.0));
        let v = h21_in_c(FunctionClass::StarlikeHalf, &twos);
        assert_abs_diff_eq!(v.value.re, 1.0 / 48.0, epsilon = 1e-15);
        assert_eq!(v.class, Some(FunctionClass::StarlikeHalf));
        let even = CaratheodoryCoeffs::new(ZERO, real(2.0), ZERO);
        let v = h21_in_c(FunctionClass::ConvexHalf, &even);
        assert_abs_diff_eq!(v.value.re, -1.0 / 144.0, epsilon = 1e-15);
        let zero = CaratheodoryCoeffs::new(ZERO, ZERO, ZERO);
        for class in FunctionClass::ALL {
            assert_eq!(h21_in_c(class, &zero).value, ZERO);
        }
    }

    #[test]
    fn tau_form_examples() {
        let p = SchurParams::new(1.0, real(0.4), real(-0.2)).unwrap();
        assert_abs_diff_eq!(
            h21_in_tau(FunctionClass::StarlikeHalf, &p).value.re,
            1.0 / 48.0,
            epsilon = 1e-15
        );
        let t2 = Complex64::from_polar(0.8, 1.3);
        let p = SchurParams::new(0.0, t2, real(0.5)).unwrap();
        let v = h21_in_tau(FunctionClass::ConvexHalf, &p).value;
        assert_abs_diff_eq!((v + t2 * t2 / 144.0).norm(), 0.0, epsilon = 1e-16);
        let w = SchurParams::new(1.0 / 6f64.sqrt(), real(1.0), real(0.3)).unwrap();
        let v = h21_in_tau(FunctionClass::StarlikeHalf, &w).value;
        assert_abs_diff_eq!(v.re, -19.0 / 288.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn tau_form_agrees_with_c_form_at_a_point() {
        let p = SchurParams::new(
            0.37,
            Complex64::from_polar(0.6, 2.0),
            Complex64::from_polar(0.9, -1.0),
        )
        .unwrap();
        for class in FunctionClass::ALL {
            let via_c = h21_in_c(class, &coeffs_from_schur(&p)).value;
            let via_tau = h21_in_tau(class, &p).value;
            assert_abs_diff_eq!((via_c - via_tau).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn generic_hankel_small_cases() {
        let seq = [real(-1.0), real(1.5), real(-10.0 / 3.0)];
        assert_eq!(hankel_generic(&seq, 1, 2).unwrap(), real(1.5));
        let h = hankel_generic(&seq, 2, 1).unwrap();
        assert_abs_diff_eq!(
            (h - h21_from_gammas(seq[0], seq[1], seq[2]).value).norm(),
            0.0
        );
        let ones = [real(1.0); 5];
        assert_eq!(hankel_generic(&ones, 3, 1).unwrap(), ZERO);
        assert_eq!(
            hankel_generic(&ones, 3, 2).unwrap_err(),
            Error::Range {
                needed: 6,
                available: 5
            }
        );
    }

    #[test]
    fn generic_hankel_lu_matches_cofactor() {
        // 4x4 Hilbert-like Hankel matrix 1/(k+1); compare LU against an explicit Laplace expansion.
        let seq: Vec<Complex64> = (1..=7).map(|k| real(1.0 / k as f64)).collect();
        let lu = hankel_generic(&seq, 4, 1).unwrap();
        let h = |i: usize, j: usize| seq[i + j];
        let minor3 = |rows: [usize; 3], cols: [usize; 3]| {
            let e = |a: usize, b: usize| h(rows[a], cols[b]);
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        };
        let laplace = h(0, 0) * minor3([1, 2, 3], [1, 2, 3])
            - h(0, 1) * minor3([1, 2, 3], [0, 2, 3])
            + h(0, 2) * minor3([1, 2, 3], [0, 1, 3])
            - h(0, 3) * minor3([1, 2, 3], [0, 1, 2]);
        assert_abs_diff_eq!((lu - laplace).norm(), 0.0, epsilon = 1e-15);
        // Hilbert determinant of order 4.
        assert_abs_diff_eq!(lu.re, 1.0 / 6_048_000.0, epsilon = 1e-15);
    }
}
