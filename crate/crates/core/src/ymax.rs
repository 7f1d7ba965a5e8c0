//! Closed form for
//!
//! ```text
//! Y(A, B, C) = max { |A + Bz + Cz^2| + 1 - |z|^2 : |z| ≤ 1 }
//! ```
//!
//! with real `A, B, C`, plus a brute-force polar-grid maximizer used as an
//! independent oracle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

/// Relative width of the band in which a branch condition counts as an equality.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YInput {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl YInput {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// The maximized objective at `z`.
    pub fn objective(&self, z: Complex64) -> f64 {
        (self.a + z * (self.b + z * self.c)).norm() + 1.0 - z.norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum YBranch {
    /// `AC ≥ 0`, `|B| ≥ 2(1 - |C|)`: `|A| + |B| + |C|`.
    ISum,
    /// `AC ≥ 0`, `|B| < 2(1 - |C|)`: `1 + |A| + B^2 / (4(1 - |C|))`.
    IParabola,
    /// `AC < 0`: `1 - |A| + B^2 / (4(1 - |C|))`.
    IiNegParabola,
    /// `AC < 0`: `1 + |A| + B^2 / (4(1 + |C|))`.
    IiPosParabola,
    /// `|A| + |B| - |C|`.
    RFirst,
    /// `-|A| + |B| + |C|`.
    RSecond,
    /// `(|C| + |A|) sqrt(1 - B^2 / (4AC))`.
    RSqrt,
}

impl YBranch {
    pub fn label(self) -> &'static str {
        match self {
            Self::ISum => "i_sum",
            Self::IParabola => "i_parabola",
            Self::IiNegParabola => "ii_neg_parabola",
            Self::IiPosParabola => "ii_pos_parabola",
            Self::RFirst => "R_first",
            Self::RSecond => "R_second",
            Self::RSqrt => "R_sqrt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YResult {
    pub value: f64,
    pub branch: YBranch,
    /// A maximizer, for branches where one is available in closed form.
    pub argmax_hint: Option<Complex64>,
    /// Set when the square-root branch met a negative radicand.
    pub inconsistent: bool,
}

#[derive(Clone, Copy)]
enum Cond {
    True,
    False,
    Tie,
}

impl Cond {
    fn and(self, other: Cond) -> Cond {
        match (self, other) {
            (Cond::False, _) | (_, Cond::False) => Cond::False,
            (Cond::True, Cond::True) => Cond::True,
            _ => Cond::Tie,
        }
    }
}

fn tie_band(lhs: f64, rhs: f64) -> f64 {
    TIE_TOL * lhs.abs().max(rhs.abs()).max(1.0)
}

/// `lhs ≤ rhs` (or `lhs < rhs`; the two only differ inside the tie band).
fn cmp_le(lhs: f64, rhs: f64) -> Cond {
    let d = lhs - rhs;
    if d.abs() <= tie_band(lhs, rhs) {
        Cond::Tie
    } else if d < 0.0 {
        Cond::True
    } else {
        Cond::False
    }
}

fn better(x: YResult, y: YResult) -> YResult {
    if y.value > x.value {
        y
    } else {
        x
    }
}

/// Takes the `yes` branch, the `no` branch, or on a tie the larger of both.
fn choose(cond: Cond, yes: impl Fn() -> YResult, no: impl Fn() -> YResult) -> YResult {
    match cond {
        Cond::True => yes(),
        Cond::False => no(),
        Cond::Tie => better(yes(), no()),
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn result(value: f64, branch: YBranch, argmax_hint: Option<Complex64>) -> YResult {
    YResult {
        value,
        branch,
        argmax_hint,
        inconsistent: false,
    }
}

/// Evaluates `Y(A, B, C)` by the piecewise closed form and reports the branch.
pub fn y_eval(input: YInput) -> YResult {
    let YInput { a, c, .. } = input;
    if a * c >= 0.0 {
        return case_nonneg(input);
    }
    // AC < 0. When one factor is at rounding level the sign is unreliable.
    if a.abs().min(c.abs()) <= TIE_TOL {
        better(case_nonneg(input), case_neg(input))
    } else {
        case_neg(input)
    }
}

fn endpoint_hint(input: YInput) -> Complex64 {
    let plus = (input.a + input.b + input.c).abs();
    let minus = (input.a - input.b + input.c).abs();
    Complex64::new(if plus >= minus { 1.0 } else { -1.0 }, 0.0)
}

fn case_nonneg(input: YInput) -> YResult {
    let YInput { a, b, c } = input;
    let (aa, ab, ac) = (a.abs(), b.abs(), c.abs());
    choose(
        cmp_le(2.0 * (1.0 - ac), ab),
        || result(aa + ab + ac, YBranch::ISum, Some(endpoint_hint(input))),
        || {
            let x = ab / (2.0 * (1.0 - ac));
            let orient = if a != 0.0 { sign(a) } else { sign(c) };
            let hint = Complex64::new(x * sign(b) * orient, 0.0);
            result(
                1.0 + aa + b * b / (4.0 * (1.0 - ac)),
                YBranch::IParabola,
                Some(hint),
            )
        },
    )
}

fn case_neg(input: YInput) -> YResult {
    let YInput { a, b, c } = input;
    let (aa, ab, ac) = (a.abs(), b.abs(), c.abs());
    let bsq = b * b;
    let k = -4.0 * a * c * (1.0 / (c * c) - 1.0);
    let neg_parabola = cmp_le(k, bsq).and(cmp_le(ab, 2.0 * (1.0 - ac)));
    choose(
        neg_parabola,
        || {
            let x = ab / (2.0 * (1.0 - ac));
            let hint = Complex64::new(x * sign(b) * sign(c), 0.0);
            result(
                1.0 - aa + bsq / (4.0 * (1.0 - ac)),
                YBranch::IiNegParabola,
                Some(hint),
            )
        },
        || {
            let pos_parabola = cmp_le(bsq, 4.0 * (1.0 + ac).powi(2)).and(cmp_le(bsq, k));
            choose(
                pos_parabola,
                || {
                    result(
                        1.0 + aa + bsq / (4.0 * (1.0 + ac)),
                        YBranch::IiPosParabola,
                        None,
                    )
                },
                || r_value(input),
            )
        },
    )
}

fn r_value(input: YInput) -> YResult {
    let YInput { a, b, c } = input;
    let (aa, ab, ac) = (a.abs(), b.abs(), c.abs());
    choose(
        cmp_le(ac * (ab + 4.0 * aa), aa * ab),
        || result(aa + ab - ac, YBranch::RFirst, Some(endpoint_hint(input))),
        || {
            choose(
                cmp_le(aa * ab, ac * (ab - 4.0 * aa)),
                || result(-aa + ab + ac, YBranch::RSecond, Some(endpoint_hint(input))),
                || {
                    let radicand = 1.0 - b * b / (4.0 * a * c);
                    YResult {
                        value: (ac + aa) * radicand.max(0.0).sqrt(),
                        branch: YBranch::RSqrt,
                        argmax_hint: None,
                        inconsistent: radicand < -1e-9,
                    }
                },
            )
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub argmax: Complex64,
}

/// Polar cells around the best grid points that are refined.
const ORACLE_CANDIDATES: usize = 3;
/// Zoom rounds; each shrinks the window by [`ORACLE_SHRINK`].
const ORACLE_ROUNDS: usize = 6;
const ORACLE_SHRINK: f64 = 4.0;
/// Cap on window moves per candidate, shrinking or not.
const ORACLE_MAX_MOVES: usize = 64;
/// Points per axis of a zoom window.
const ZOOM_POINTS: usize = 17;

/// Maximizes the objective over a polar grid of the closed disk, then zooms
/// into the best local maxima of the grid.
pub fn y_oracle(input: YInput, radial_steps: usize, angular_steps: usize) -> OracleResult {
    let radial_steps = radial_steps.max(64);
    let angular_steps = angular_steps.max(64);
    let dr = 1.0 / (radial_steps - 1) as f64;
    let dt = TAU / angular_steps as f64;
    let eval = |r: f64, t: f64| input.objective(Complex64::from_polar(r, t));

    let mut grid = vec![0.0; radial_steps * angular_steps];
    for i in 0..radial_steps {
        for j in 0..angular_steps {
            grid[i * angular_steps + j] = eval(i as f64 * dr, j as f64 * dt);
        }
    }

    let at = |i: usize, j: usize| grid[i * angular_steps + j];
    let mut peaks: Vec<(f64, usize, usize)> = Vec::new();
    // Row 0 is the origin, counted once.
    if (0..angular_steps).all(|j| at(0, 0) >= at(1, j)) {
        peaks.push((at(0, 0), 0, 0));
    }
    for i in 1..radial_steps {
        for j in 0..angular_steps {
            let v = at(i, j);
            let jp = (j + 1) % angular_steps;
            let jm = (j + angular_steps - 1) % angular_steps;
            let mut is_peak = v >= at(i, jp) && v >= at(i, jm) && v >= at(i - 1, j);
            if i + 1 < radial_steps {
                is_peak &= v >= at(i + 1, j);
            }
            if is_peak {
                peaks.push((v, i, j));
            }
        }
    }
    peaks.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut best = OracleResult {
        value: f64::NEG_INFINITY,
        argmax: Complex64::new(0.0, 0.0),
    };
    for &(value, i, j) in peaks.iter().take(ORACLE_CANDIDATES) {
        let r = i as f64 * dr;
        let mut z0 = Complex64::from_polar(r, j as f64 * dt);
        let mut v0 = value;
        // Square window covering the neighbouring polar cells.
        let mut h = 1.5 * dr.max(r * dt);
        let mut shrinks = 0;
        for _ in 0..ORACLE_MAX_MOVES {
            if shrinks == ORACLE_ROUNDS {
                break;
            }
            let step = 2.0 * h / (ZOOM_POINTS - 1) as f64;
            let (mut bz, mut bv, mut on_edge) = (z0, v0, false);
            for p in 0..ZOOM_POINTS {
                for q in 0..ZOOM_POINTS {
                    let mut z = z0 + Complex64::new(-h + p as f64 * step, -h + q as f64 * step);
                    let m = z.norm();
                    if m > 1.0 {
                        z /= m;
                    }
                    let v = input.objective(z);
                    if v > bv {
                        (bz, bv) = (z, v);
                        on_edge =
                            m <= 1.0 && (p % (ZOOM_POINTS - 1) == 0 || q % (ZOOM_POINTS - 1) == 0);
                    }
                }
            }
            (z0, v0) = (bz, bv);
            // Slide along ridges before shrinking.
            if !on_edge {
                h /= ORACLE_SHRINK;
                shrinks += 1;
            }
        }
        if v0 > best.value {
            best = OracleResult {
                value: v0,
                argmax: z0,
            };
        }
    }
    best
}

/// Default oracle resolution.
pub const ORACLE_RADIAL_STEPS: usize = 64;
pub const ORACLE_ANGULAR_STEPS: usize = 128;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn oracle(a: f64, b: f64, c: f64) -> f64 {
        y_oracle(
            YInput::new(a, b, c),
            ORACLE_RADIAL_STEPS,
            ORACLE_ANGULAR_STEPS,
        )
        .value
    }

    #[test]
    fn zero_input() {
        let r = y_eval(YInput::new(0.0, 0.0, 0.0));
        assert_eq!(r.value, 1.0);
        assert_eq!(r.branch, YBranch::IParabola);
        assert_abs_diff_eq!(oracle(0.0, 0.0, 0.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sum_branch_at_endpoint() {
        let r = y_eval(YInput::new(1.0, 2.0, 0.0));
        assert_eq!((r.value, r.branch), (3.0, YBranch::ISum));
        assert_eq!(r.argmax_hint, Some(Complex64::new(1.0, 0.0)));
        assert_abs_diff_eq!(oracle(1.0, 2.0, 0.0), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn parabola_branch() {
        let input = YInput::new(0.5, 1.0, 0.25);
        let r = y_eval(input);
        assert_eq!(r.branch, YBranch::IParabola);
        assert_abs_diff_eq!(r.value, 11.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            input.objective(r.argmax_hint.unwrap()),
            r.value,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(oracle(0.5, 1.0, 0.25), 11.0 / 6.0, epsilon = 1e-7);
    }

    #[test]
    fn opposite_signs_against_oracle() {
        let input = YInput::new(-0.125, 0.5, 0.5);
        let r = y_eval(input);
        assert_abs_diff_eq!(r.value, oracle(-0.125, 0.5, 0.5), epsilon = 1e-6);
        assert!(!r.inconsistent);
    }

    #[test]
    fn hints_attain_value() {
        let cases = [
            (1.0, 2.0, 0.0),
            (0.5, 1.0, 0.25),
            (-0.1, 0.3, 0.5),
            (2.0, -1.0, -0.2),
            (-0.2, 1.5, 2.5),
            (2.5, 1.5, -0.5),
        ];
        for (a, b, c) in cases {
            let input = YInput::new(a, b, c);
            let r = y_eval(input);
            if let Some(z) = r.argmax_hint {
                assert_abs_diff_eq!(input.objective(z), r.value, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn every_branch_is_reachable() {
        use std::collections::HashSet;
        let cases = [
            (1.0, 2.0, 0.0),
            (0.5, 1.0, 0.25),
            (-0.01, 0.5, 0.5),
            (0.5, 0.1, -0.5),
            (2.5, 1.5, -0.5),
            (-0.2, 1.5, 2.5),
            (-1.0, 0.5, 2.0),
            (1.0, 3.0, -0.1),
        ];
        let seen: HashSet<YBranch> = cases
            .iter()
            .map(|&(a, b, c)| {
                let input = YInput::new(a, b, c);
                let r = y_eval(input);
                assert_abs_diff_eq!(r.value, oracle(a, b, c), epsilon = 1e-6);
                r.branch
            })
            .collect();
        assert_eq!(seen.len(), 7, "{seen:?}");
    }

    #[test]
    fn tiny_opposite_sign_factor_stays_continuous() {
        let near = y_eval(YInput::new(1e-14, 0.5, -0.7)).value;
        let at = y_eval(YInput::new(0.0, 0.5, -0.7)).value;
        assert_abs_diff_eq!(near, at, epsilon = 1e-12);
    }
}
