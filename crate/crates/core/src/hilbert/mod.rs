//! Labeled composite Hilbert spaces: states, operators, density operators and
//! the subsystem-aware operations between them.

mod density;
mod layout;
mod operator;
mod ops;
mod state;

pub use density::DensityOperator;
pub use layout::{Subsystem, SystemLayout};
pub use operator::Operator;
pub use ops::{
    fidelity, inner, lift, measure, measure_labeled, measure_subsystem, norm, partial_trace,
    project, tensor, MeasurementResult, Projection,
};
pub use state::StateVector;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Largest total dimension a layout may have.
pub const MAX_DIMENSION: usize = 4096;

/// Tolerance for structural checks (unitarity, projector, hermiticity, normalization).
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Survival probability below which a projection counts as null.
pub const NULL_SURVIVAL: f64 = 1e-14;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Build a complex matrix from real rows.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, m, |i, j| re(rows[i][j]))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
