//! Truncated power series over the complex numbers.
//!
//! A [`TaylorSeries`] of order `N` stores the coefficients of `z^0 ..= z^N`;
//! every operation is exact modulo `z^{N+1}`. On top of the arithmetic this
//! module provides the coefficient functionals of a normalized function
//! `f(z) = z + a_2 z^2 + ...`:
//!
//! * logarithmic coefficients `γ_n`, from `log(f(z)/z) = 2 Σ γ_n z^n`;
//! * inverse coefficients `A_n` of `F = f^{-1}`;
//! * inverse logarithmic coefficients `Γ_n`, from `log(F(w)/w) = 2 Σ Γ_n w^n`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation order used when callers do not ask for one.
pub const DEFAULT_ORDER: usize = 8;

/// Tolerance for the `f(0) = 0, f'(0) = 1` normalization test.
const NORMALIZATION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
}

impl TaylorSeries {
    /// Wraps a coefficient vector; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Builds a series of the given order from a prefix, zero-padding or truncating.
    pub fn from_prefix(prefix: &[Complex64], order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        for (dst, src) in coeffs.iter_mut().zip(prefix) {
            *dst = *src;
        }
        Self { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        Self::normalized(&[], order)
    }

    /// `z + tail[0] z^2 + tail[1] z^3 + ...`, truncated at `order`.
    pub fn normalized(tail: &[Complex64], order: usize) -> Self {
        let mut s = Self::zeros(order);
        if order >= 1 {
            s.coeffs[1] = ONE;
        }
        for (k, a) in tail.iter().enumerate() {
            if k + 2 <= order {
                s.coeffs[k + 2] = *a;
            }
        }
        s
    }

    /// Koebe function `z/(1-z)^2`, i.e. `a_n = n`.
    pub fn koebe(order: usize) -> Self {
        let coeffs = (0..=order).map(|n| Complex64::new(n as f64, 0.0)).collect();
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn is_normalized(&self) -> bool {
        self.order() >= 1
            && self.coeffs[0].norm() <= NORMALIZATION_TOL
            && (self.coeffs[1] - ONE).norm() <= NORMALIZATION_TOL
    }

    fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Same coefficients, truncated or zero-padded to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        Self::from_prefix(&self.coeffs, order)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(Error::Domain(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let n = self.order();
        let inv0 = c0.inv();
        let mut out = vec![ZERO; n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let acc: Complex64 = (1..=k).map(|j| self.coeffs[j] * out[k - j]).sum();
            out[k] = -acc * inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// Formal logarithm of a series with constant term 1, via `L' = g'/g`.
    pub fn log(&self) -> Result<Self> {
        if (self.coeffs[0] - ONE).norm() > NORMALIZATION_TOL {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let g = &self.coeffs;
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for m in 1..=n {
            let mut acc = g[m] * m as f64;
            for k in 1..m {
                acc -= out[k] * g[m - k] * k as f64;
            }
            out[m] = acc / m as f64;
        }
        Ok(Self { coeffs: out })
    }

    /// `self(inner(z))`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if inner.coeffs[0].norm() > NORMALIZATION_TOL {
            return Err(Error::Domain(
                "inner series of a composition must vanish at 0".into(),
            ));
        }
        // Horner in the ring of truncated series.
        let n = self.order();
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul_unchecked(inner);
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Formal derivative; the result keeps the order, with a zero top coefficient.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![ZERO; n + 1];
        for k in 1..=n {
            out[k - 1] = self.coeffs[k] * k as f64;
        }
        Self { coeffs: out }
    }

    /// Horner evaluation of the truncation as a polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Value, first and second derivative of the polynomial at `z`.
    pub fn eval_with_derivatives(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let (mut p, mut dp, mut ddp) = (ZERO, ZERO, ZERO);
        for c in self.coeffs.iter().rev() {
            ddp = ddp * z + dp * 2.0;
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp, ddp)
    }

    /// Rotation `e^{-iθ} f(e^{iθ} z)`: coefficient `n` picks up `e^{i(n-1)θ}`.
    pub fn rotate(&self, theta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, (n as f64 - 1.0) * theta))
            .collect();
        Self { coeffs }
    }

    /// Largest coefficientwise distance to `other` (orders must match).
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_order(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Series of `log(f(z)/z)` for normalized `f`.
    ///
    /// `f/z` is only known modulo `z^N`, so the result has order `N - 1`.
    /// The logarithmic coefficients are `γ_n = coeffs[n] / 2`.
    pub fn log_ratio(&self) -> Result<Self> {
        self.require_normalized()?;
        let quotient = Self {
            coeffs: self.coeffs[1..].to_vec(),
        };
        quotient.log()
    }

    /// Compositional inverse `F` with `f(F(w)) = w` modulo `w^{N+1}`.
    ///
    /// Coefficient `n` of `f(F)` equals `A_n` plus terms in `A_2..A_{n-1}` only,
    /// so each `A_n` is fixed by one forward composition.
    pub fn invert(&self) -> Result<Self> {
        self.require_normalized()?;
        let n = self.order();
        let mut inverse = Self::identity(n);
        for m in 2..=n {
            let head = self.with_order(m);
            let partial = inverse.with_order(m);
            let residual = head.compose(&partial)?.coeffs[m];
            inverse.coeffs[m] = -residual;
        }
        Ok(inverse)
    }
}

/// `γ_1, ..., γ_{N-1}` of a normalized series.
pub fn logarithmic_coefficients(f: &TaylorSeries) -> Result<Vec<Complex64>> {
    let log = f.log_ratio()?;
    Ok(log.coeffs()[1..].iter().map(|c| c * 0.5).collect())
}

/// `Γ_1, ..., Γ_{N-1}` of the inverse of a normalized series of order `N ≥ 4`.
pub fn inverse_log_coefficients(f: &TaylorSeries) -> Result<Vec<Complex64>> {
    if f.order() < 4 {
        return Err(Error::InsufficientOrder {
            needed: 4,
            got: f.order(),
        });
    }
    let inverse = f.invert()?;
    logarithmic_coefficients(&inverse)
}

/// Closed forms of `A_2..A_5` in terms of `a_2..a_5`.
pub fn inverse_closed_form(
    a2: Complex64,
    a3: Complex64,
    a4: Complex64,
    a5: Complex64,
) -> [Complex64; 4] {
    let big_a2 = -a2;
    let big_a3 = -a3 + 2.0 * a2 * a2;
    let big_a4 = -a4 + 5.0 * a2 * a3 - 5.0 * a2.powi(3);
    let big_a5 = -a5 + 6.0 * a4 * a2 - 21.0 * a3 * a2 * a2 + 3.0 * a3 * a3 + 14.0 * a2.powi(4);
    [big_a2, big_a3, big_a4, big_a5]
}

/// Closed forms of `Γ_1..Γ_4` in terms of `a_2..a_5`.
pub fn gamma_closed_form(
    a2: Complex64,
    a3: Complex64,
    a4: Complex64,
    a5: Complex64,
) -> [Complex64; 4] {
    let g1 = -0.5 * a2;
    let g2 = -0.5 * (a3 - 1.5 * a2 * a2);
    let g3 = -0.5 * (a4 - 4.0 * a2 * a3 + (10.0 / 3.0) * a2.powi(3));
    let g4 = -0.5 * (a5 - 5.0 * a4 * a2 + 15.0 * a3 * a2 * a2 - 2.5 * a3 * a3 - 8.75 * a2.powi(4));
    [g1, g2, g3, g4]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real_series(values: &[f64]) -> TaylorSeries {
        TaylorSeries::new(values.iter().map(|v| c(*v)).collect()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let p = real_series(&[1.0, 1.0, 0.0]);
        let q = real_series(&[1.0, -1.0, 0.0]);
        assert_eq!(p.multiply(&q).unwrap(), real_series(&[1.0, 0.0, -1.0]));
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let f = TaylorSeries::new(
            (0..6)
                .map(|k| Complex64::new(k as f64 * 0.3 - 1.0, 0.7 - k as f64))
                .collect(),
        )
        .unwrap();
        let one = TaylorSeries::constant(ONE, 5);
        assert_eq!(f.multiply(&one).unwrap(), f);
    }

    #[test]
    fn hand_expanded_square() {
        let f = real_series(&[0.0, 1.0, 2.0, 0.0, 0.0]);
        let sq = f.multiply(&f).unwrap();
        assert_eq!(sq, real_series(&[0.0, 0.0, 1.0, 4.0, 4.0]));
    }

    #[test]
    fn multiply_rejects_mismatched_orders() {
        let err = TaylorSeries::zeros(2)
            .multiply(&TaylorSeries::zeros(3))
            .unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 3 });
    }

    #[test]
    fn log_ratio_of_identity_vanishes() {
        let log = TaylorSeries::identity(8).log_ratio().unwrap();
        assert!(log.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn koebe_logarithmic_coefficients() {
        let gammas = logarithmic_coefficients(&TaylorSeries::koebe(8)).unwrap();
        assert_eq!(gammas.len(), 7);
        for (k, g) in gammas.iter().enumerate() {
            assert_abs_diff_eq!(g.re, 1.0 / (k + 1) as f64, epsilon = 1e-13);
            assert_abs_diff_eq!(g.im, 0.0);
        }
    }

    #[test]
    fn first_logarithmic_coefficient_is_half_a2() {
        let a2 = Complex64::new(0.3, -1.1);
        let gammas = logarithmic_coefficients(&TaylorSeries::normalized(&[a2], 6)).unwrap();
        assert_abs_diff_eq!((gammas[0] - a2 / 2.0).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn log_ratio_rejects_unnormalized() {
        let f = real_series(&[0.0, 2.0, 1.0]);
        assert_eq!(f.log_ratio().unwrap_err(), Error::NotNormalized);
        let g = real_series(&[0.1, 1.0, 1.0]);
        assert_eq!(g.invert().unwrap_err(), Error::NotNormalized);
    }

    #[test]
    fn koebe_inverse_matches_lowner_numbers() {
        let inverse = TaylorSeries::koebe(8).invert().unwrap();
        let expected = [-2.0, 5.0, -14.0, 42.0, -132.0, 429.0, -1430.0];
        for (n, want) in (2..=8).zip(expected) {
            assert_abs_diff_eq!(inverse.coeff(n).re, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn identity_is_self_inverse() {
        let id = TaylorSeries::identity(8);
        assert_eq!(id.invert().unwrap(), id);
    }

    #[test]
    fn closed_forms_on_koebe() {
        let [a2, a3, a4, a5] = [c(2.0), c(3.0), c(4.0), c(5.0)];
        let inv = inverse_closed_form(a2, a3, a4, a5);
        for (got, want) in inv.iter().zip([-2.0, 5.0, -14.0, 42.0]) {
            assert_abs_diff_eq!(got.re, want, epsilon = 1e-12);
        }
        let gam = gamma_closed_form(a2, a3, a4, a5);
        for (got, want) in gam.iter().zip([-1.0, 1.5, -10.0 / 3.0, 35.0 / 4.0]) {
            assert_abs_diff_eq!(got.re, want, epsilon = 1e-12);
        }
        assert_eq!(inverse_closed_form(ZERO, ZERO, ZERO, ZERO), [ZERO; 4]);
    }

    #[test]
    fn gamma2_without_cross_terms() {
        let a3 = Complex64::new(0.4, 0.9);
        let gam = gamma_closed_form(ZERO, a3, ZERO, ZERO);
        assert_abs_diff_eq!((gam[1] + a3 / 2.0).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn inverse_log_coefficients_need_order_four() {
        let err = inverse_log_coefficients(&TaylorSeries::koebe(3)).unwrap_err();
        assert_eq!(err, Error::InsufficientOrder { needed: 4, got: 3 });
        assert_eq!(
            inverse_log_coefficients(&TaylorSeries::koebe(4))
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn identity_inverse_log_coefficients_vanish() {
        let gam = inverse_log_coefficients(&TaylorSeries::identity(8)).unwrap();
        assert!(gam.iter().all(|g| g.norm() == 0.0));
    }

    #[test]
    fn derivatives_by_horner() {
        let f = real_series(&[1.0, 2.0, 3.0, 4.0]);
        let z = Complex64::new(0.5, -0.25);
        let (p, dp, ddp) = f.eval_with_derivatives(z);
        assert_abs_diff_eq!((p - f.eval(z)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((dp - f.derivative().eval(z)).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            (ddp - f.derivative().derivative().eval(z)).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn reciprocal_of_one_minus_z() {
        let r = real_series(&[1.0, -1.0, 0.0, 0.0]).reciprocal().unwrap();
        assert_eq!(r, real_series(&[1.0, 1.0, 1.0, 1.0]));
    }
}
