//! Seeded generators and random states/unitaries for property sweeps.
//!
//! Every stream is `ChaCha8Rng::seed_from_u64(seed)` with `set_stream(stream)`,
//! so case `k` of a sweep draws from stream `k` regardless of scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::hilbert::{CMatrix, Operator, StateVector, SystemLayout};

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random normalized state.
pub fn random_state(layout: SystemLayout, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let n = layout.dim();
    let v = nalgebra::DVector::from_fn(n, |_, _| gaussian(rng));
    StateVector::new(layout, v)?.normalized()
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal folded back into Q.
pub fn random_unitary_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let z = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unitary(layout: SystemLayout, rng: &mut ChaCha8Rng) -> Result<Operator> {
    let n = layout.dim();
    Operator::new(layout, random_unitary_matrix(n, rng))
}
