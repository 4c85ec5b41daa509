//! Fixed unitaries used by the experiments, each on its own labeled layout.
//!
//! Matrices are written in the basis order they are usually quoted in and mapped
//! onto the row-major layout order with [`Operator::from_basis_order`].

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::hilbert::{c, re, real_matrix, CMatrix, Operator, Subsystem, SystemLayout};

pub const UNITARY_TOL: f64 = 1e-12;

fn layout(subs: &[(&str, &[&str])]) -> SystemLayout {
    SystemLayout::new(
        subs.iter()
            .map(|(l, b)| Subsystem::with_basis(*l, b))
            .collect(),
    )
    .expect("catalog layouts are valid")
}

fn order(pairs: &[[&str; 2]]) -> Vec<Vec<String>> {
    pairs
        .iter()
        .map(|p| p.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// marker(0,1) ⊗ path(u,d).
pub fn marker_path_layout() -> SystemLayout {
    layout(&[("marker", &["0", "1"]), ("path", &["u", "d"])])
}

/// Which-path marking: |0⟩|u⟩ → |0⟩|u⟩, |0⟩|d⟩ → |1⟩|d⟩ (a CNOT controlled by the path).
pub fn marking_unitary() -> Operator {
    let m = real_matrix(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
    ]);
    Operator::from_basis_order(
        marker_path_layout(),
        &order(&[["0", "u"], ["0", "d"], ["1", "u"], ["1", "d"]]),
        &m,
    )
    .expect("4x4")
}

/// first(0,1) ⊗ second(L,R), the trade-off and brainwash observer ⊗ object layout.
pub fn observer_object_layout(observer: &str, object: &str) -> SystemLayout {
    layout(&[(observer, &["0", "1"]), (object, &["L", "R"])])
}

fn tradeoff_layout() -> SystemLayout {
    observer_object_layout("first", "second")
}

/// Orthogonal matrix whose first column is the unentangled initial state.
pub fn tradeoff_p1() -> Operator {
    let a = (2.0f64 / 5.0).sqrt();
    let b = 1.0 / 10f64.sqrt();
    let h = FRAC_1_SQRT_2;
    Operator::new(
        tradeoff_layout(),
        real_matrix(&[
            &[a, h, 0.0, -b],
            &[b, 0.0, h, a],
            &[a, -h, 0.0, -b],
            &[b, 0.0, -h, a],
        ]),
    )
    .expect("4x4")
}

/// Orthogonal matrix whose first column is the correlated final state. The third
/// column is the unit vector (3, 0, −5, 0)/√34 orthogonal to the others.
pub fn tradeoff_p2() -> Operator {
    let h = FRAC_1_SQRT_2;
    let s17 = 17f64.sqrt();
    let s34 = 34f64.sqrt();
    Operator::new(
        tradeoff_layout(),
        real_matrix(&[
            &[h, 0.0, 3.0 / s34, 2.0 / s17],
            &[0.0, 1.0, 0.0, 0.0],
            &[3.0 / (5.0 * 2f64.sqrt()), 0.0, -5.0 / s34, 6.0 / (5.0 * s17)],
            &[2.0 * 2f64.sqrt() / 5.0, 0.0, 0.0, -s17 / 5.0],
        ]),
    )
    .expect("4x4")
}

/// `P₂ P₁ᵀ`, mapping the initial trade-off state onto the final one.
pub fn tradeoff_unitary() -> Operator {
    let p1t = tradeoff_p1().matrix().transpose();
    Operator::new(tradeoff_layout(), tradeoff_p2().matrix() * p1t).expect("4x4")
}

/// alice(0,1) ⊗ car(L,R).
pub fn alice_car_layout() -> SystemLayout {
    observer_object_layout("alice", "car")
}

/// Observation |0⟩|L⟩ → |0⟩|L⟩, |0⟩|R⟩ → |1⟩|R⟩ (a permutation).
pub fn observation_unitary() -> Operator {
    Operator::new(
        alice_car_layout(),
        real_matrix(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
        ]),
    )
    .expect("4x4")
}

/// A different unitary with the same effect on (|0L⟩ + |0R⟩)/√2.
pub fn alt_observation_unitary() -> Operator {
    let h = FRAC_1_SQRT_2;
    Operator::new(
        alice_car_layout(),
        real_matrix(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, h, h],
            &[0.0, 0.0, h, -h],
            &[1.0, 0.0, 0.0, 0.0],
        ]),
    )
    .expect("4x4")
}

/// Hadamard on a two-level system labeled `label` with basis `b0`, `b1`.
pub fn hadamard_on(label: &str, b0: &str, b1: &str) -> Operator {
    let h = FRAC_1_SQRT_2;
    Operator::new(
        layout(&[(label, &[b0, b1])]),
        real_matrix(&[&[h, h], &[h, -h]]),
    )
    .expect("2x2")
}

/// alice(0,1,2) ⊗ car(L,R) ⊗ switch(u,d).
pub fn switching_layout() -> SystemLayout {
    layout(&[
        ("alice", &["0", "1", "2"]),
        ("car", &["L", "R"]),
        ("switch", &["u", "d"]),
    ])
}

/// Step 1 on alice ⊗ car: the observation into the qutrit memory.
pub fn switching_u1() -> Operator {
    let m = real_matrix(&[
        &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    ]);
    Operator::new(switching_layout().select(&["alice", "car"]).expect("labels"), m).expect("6x6")
}

/// Step 2 on alice ⊗ switch: memory moved into the switching unit.
pub fn switching_u2() -> Operator {
    let h = FRAC_1_SQRT_2;
    let m = real_matrix(&[
        &[0.0, 0.0, h, h, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, h, h],
        &[0.0, 0.0, h, -h, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, h, -h],
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    ]);
    Operator::new(switching_layout().select(&["alice", "switch"]).expect("labels"), m).expect("6x6")
}

/// Step 3 on car ⊗ switch: the switching unit disentangles from the car.
pub fn switching_u3() -> Operator {
    let h = FRAC_1_SQRT_2;
    let m = real_matrix(&[
        &[h, h, 0.0, 0.0],
        &[h, -h, 0.0, 0.0],
        &[0.0, 0.0, -h, h],
        &[0.0, 0.0, h, h],
    ]);
    Operator::new(switching_layout().select(&["car", "switch"]).expect("labels"), m).expect("4x4")
}

/// atom(U,Th) ⊗ bob(frown,smile).
pub fn decay_layout() -> SystemLayout {
    layout(&[("atom", &["U", "Th"]), ("bob", &["frown", "smile"])])
}

/// Evolution taking |U⟩|☹⟩ to √(e^{−λt})|U⟩|☹⟩ + √(1−e^{−λt})|Th⟩|☺⟩.
pub fn decay_unitary(lambda: f64, t: f64) -> Operator {
    let e = (-lambda * t).exp();
    let (a, b) = (e.sqrt(), (1.0 - e).sqrt());
    let m = real_matrix(&[
        &[a, b, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[b, -a, 0.0, 0.0],
    ]);
    Operator::from_basis_order(
        decay_layout(),
        &order(&[["U", "frown"], ["U", "smile"], ["Th", "frown"], ["Th", "smile"]]),
        &m,
    )
    .expect("4x4")
}

/// cat(alive,dead) ⊗ alice(neutral,smile,frown).
pub fn cat_layout() -> SystemLayout {
    layout(&[
        ("cat", &["alive", "dead"]),
        ("alice", &["neutral", "smile", "frown"]),
    ])
}

/// Continuous box opening U(t); forms a one-parameter group, U(s)U(t) = U(s+t).
pub fn cat_unitary(t: f64) -> Operator {
    let (s, co) = t.sin_cos();
    let phase = Complex64::from_polar(1.0, -t);
    let is = c(0.0, s);
    let z = re(0.0);
    let one = re(1.0);
    let rows: [[Complex64; 6]; 6] = [
        [re(co), z, is, z, z, z],
        [z, re(co), z, is, z, z],
        [is, z, re(co), z, z, z],
        [z, is, z, re(co), z, z],
        [z, z, z, z, one, z],
        [z, z, z, z, z, one],
    ];
    let m = CMatrix::from_fn(6, 6, |i, j| rows[i][j] * phase);
    Operator::from_basis_order(
        cat_layout(),
        &order(&[
            ["alive", "neutral"],
            ["dead", "neutral"],
            ["dead", "smile"],
            ["alive", "frown"],
            ["alive", "smile"],
            ["dead", "frown"],
        ]),
        &m,
    )
    .expect("6x6")
}

/// Every fixed unitary by name (time-dependent ones at a representative time).
pub fn fixed_unitaries() -> Vec<(&'static str, Operator)> {
    vec![
        ("marking", marking_unitary()),
        ("tradeoff_p1", tradeoff_p1()),
        ("tradeoff_p2", tradeoff_p2()),
        ("tradeoff_u", tradeoff_unitary()),
        ("observation", observation_unitary()),
        ("alt_observation", alt_observation_unitary()),
        ("beam_splitter", hadamard_on("path", "u", "d")),
        ("switching_u1", switching_u1()),
        ("switching_u2", switching_u2()),
        ("switching_u3", switching_u3()),
        ("decay", decay_unitary(1.0, 0.3)),
        ("cat", cat_unitary(0.7)),
    ]
}

/// Fail with `NotUnitary` naming the first catalog entry off by more than `tol`.
pub fn verify_catalog(tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (name, op) in fixed_unitaries() {
        op.ensure_unitary(name, tol)?;
        worst = worst.max(op.unitarity_deviation());
    }
    Ok(worst)
}
