//! The three classes of order 1/2: starlike, convex and bounded turning.
//!
//! Each class is described by `Φ_f(z) = (p(z) + 1) / 2` for a Carathéodory
//! function `p`, where `Φ_f` is `z f'/f`, `1 + z f''/f'` or `f'` respectively.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::caratheodory::CaratheodoryCoeffs;
use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Order α shared by all three classes.
pub const ORDER_ALPHA: f64 = 0.5;

/// A sampled margin above this counts as membership.
pub const MARGIN_TOL: f64 = -1e-6;

const DENOMINATOR_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionClass {
    StarlikeHalf,
    ConvexHalf,
    BoundedTurningHalf,
}

impl FunctionClass {
    pub const ALL: [FunctionClass; 3] = [
        FunctionClass::StarlikeHalf,
        FunctionClass::ConvexHalf,
        FunctionClass::BoundedTurningHalf,
    ];

    /// Short name used on the command line and in reports.
    pub fn slug(self) -> &'static str {
        match self {
            Self::StarlikeHalf => "starlike-half",
            Self::ConvexHalf => "convex-half",
            Self::BoundedTurningHalf => "r-half",
        }
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for FunctionClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "starlike-half" | "starlike" => Ok(Self::StarlikeHalf),
            "convex-half" | "convex" => Ok(Self::ConvexHalf),
            "r-half" | "bounded-turning-half" | "bounded-turning" => Ok(Self::BoundedTurningHalf),
            other => Err(format!(
                "unknown class '{other}' (expected starlike-half, convex-half or r-half)"
            )),
        }
    }
}

/// `(a_2, a_3, a_4)` of the class member driven by `p` with coefficients `c`.
pub fn coeff_map(class: FunctionClass, c: &CaratheodoryCoeffs) -> [Complex64; 3] {
    let CaratheodoryCoeffs { c1, c2, c3 } = *c;
    match class {
        FunctionClass::StarlikeHalf => [
            c1 / 2.0,
            (2.0 * c2 + c1 * c1) / 8.0,
            (8.0 * c3 + 6.0 * c1 * c2 + c1.powi(3)) / 48.0,
        ],
        FunctionClass::ConvexHalf => [
            c1 / 4.0,
            (2.0 * c2 + c1 * c1) / 24.0,
            (8.0 * c3 + 6.0 * c1 * c2 + c1.powi(3)) / 192.0,
        ],
        FunctionClass::BoundedTurningHalf => [c1 / 4.0, c2 / 6.0, c3 / 8.0],
    }
}

/// Solves the class relation for a normalized `f` of order `order`.
///
/// `p` must have constant term 1 and order at least `order - 1`.
pub fn reconstruct_f(class: FunctionClass, p: &TaylorSeries, order: usize) -> Result<TaylorSeries> {
    if (p.coeff(0) - 1.0).norm() > 1e-12 {
        return Err(Error::Domain("driver p must satisfy p(0) = 1".into()));
    }
    if order < 1 {
        return Err(Error::InsufficientOrder {
            needed: 1,
            got: order,
        });
    }
    if p.order() + 1 < order {
        return Err(Error::InsufficientOrder {
            needed: order - 1,
            got: p.order(),
        });
    }
    // q = (p + 1) / 2
    let q: Vec<Complex64> = (0..order)
        .map(|k| {
            if k == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                p.coeff(k) / 2.0
            }
        })
        .collect();
    let mut a = vec![Complex64::new(0.0, 0.0); order + 1];
    a[1] = Complex64::new(1.0, 0.0);
    match class {
        FunctionClass::StarlikeHalf => solve_starlike(&q, &mut a),
        FunctionClass::ConvexHalf => {
            // z f' is starlike for the same q.
            solve_starlike(&q, &mut a);
            for (n, an) in a.iter_mut().enumerate().skip(2) {
                *an /= n as f64;
            }
        }
        FunctionClass::BoundedTurningHalf => {
            for n in 2..=order {
                a[n] = q[n - 1] / n as f64;
            }
        }
    }
    TaylorSeries::new(a)
}

/// `z f' = f q`: `(n - 1) a_n = Σ_{k<n} a_k q_{n-k}`.
fn solve_starlike(q: &[Complex64], a: &mut [Complex64]) {
    for n in 2..a.len() {
        let acc: Complex64 = (1..n).map(|k| a[k] * q[n - k]).sum();
        a[n] = acc / (n - 1) as f64;
    }
}

/// Value of the defining functional `Φ_f(z)` of the class on the polynomial `f`.
pub fn class_functional(class: FunctionClass, f: &TaylorSeries, z: Complex64) -> Result<Complex64> {
    let (v, d1, d2) = f.eval_with_derivatives(z);
    match class {
        FunctionClass::StarlikeHalf => {
            if v.norm() < DENOMINATOR_FLOOR {
                return Err(Error::NearZeroDenominator(z));
            }
            Ok(z * d1 / v)
        }
        FunctionClass::ConvexHalf => {
            if d1.norm() < DENOMINATOR_FLOOR {
                return Err(Error::NearZeroDenominator(z));
            }
            Ok(1.0 + z * d2 / d1)
        }
        FunctionClass::BoundedTurningHalf => Ok(d1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub min_margin: f64,
    pub argmin: Complex64,
    pub ok: bool,
}

/// `count` evenly spaced circles filling the disk `|z| ≤ max_radius`.
pub fn disk_radii(max_radius: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| max_radius * k as f64 / count as f64)
        .collect()
}

/// Samples `Re Φ_f - 1/2` on circle grids.
///
/// This is a necessary condition checked on a truncation, not a proof of
/// membership: near the unit circle the truncation error dominates.
pub fn membership_check(
    f: &TaylorSeries,
    class: FunctionClass,
    radii: &[f64],
    samples: usize,
) -> Result<MembershipReport> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(Error::Domain("radii must lie in (0, 1)".into()));
    }
    if samples == 0 {
        return Err(Error::Domain("need at least one sample per circle".into()));
    }
    let mut min_margin = f64::INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    for &r in radii {
        for k in 0..samples {
            let z = Complex64::from_polar(r, TAU * k as f64 / samples as f64);
            let margin = class_functional(class, f, z)?.re - ORDER_ALPHA;
            if margin < min_margin {
                min_margin = margin;
                argmin = z;
            }
        }
    }
    Ok(MembershipReport {
        min_margin,
        argmin,
        ok: min_margin > MARGIN_TOL,
    })
}
