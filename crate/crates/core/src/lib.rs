//! Logarithmic coefficients of inverse univalent functions and numerical
//! certification of sharp bounds on the second Hankel determinant
//! `H_{2,1}(F_{f^{-1}}/2) = Γ_1 Γ_3 - Γ_2^2` for the starlike, convex and
//! bounded-turning classes of order 1/2.

pub mod caratheodory;
pub mod certify;
pub mod classes;
pub mod cli;
pub mod error;
pub mod hankel;
pub mod report;
pub mod sampling;
pub mod selftest;
pub mod series;
pub mod ymax;

pub use caratheodory::{
    boundary_function, coeffs_from_schur, verify_positive_real_part, CaratheodoryCoeffs,
    RationalFunction, SchurParams,
};
pub use certify::{extremal_check, search_max, CertificationReport, SearchGrid};
pub use classes::{coeff_map, membership_check, reconstruct_f, FunctionClass};
pub use error::{Error, Result};
pub use hankel::{h21_from_a, h21_from_gammas, h21_in_c, h21_in_tau, HankelValue};
pub use series::TaylorSeries;
pub use ymax::{y_eval, y_oracle, YBranch, YInput, YResult};
