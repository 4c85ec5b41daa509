//! Alice's reduced state cannot depend on anything confined to Bob's side.
//!
//! Measurements are dilated: the measured system is coupled to fresh ancillas
//! (prepared in their first basis state) by a unitary, and the ancillas are then
//! traced out together with Bob's systems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    lift, partial_trace, tensor, CMatrix, DensityOperator, Operator, StateVector, Subsystem,
    SystemLayout, STRUCTURE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobKind {
    UnitaryOnB,
    DilatedMeasurement,
}

/// A unitary on some of Bob's subsystems, possibly together with ancillas that
/// are not part of the shared state.
#[derive(Debug, Clone, PartialEq)]
pub struct BobOperation {
    pub kind: BobKind,
    pub operator: Operator,
    pub ancillas: Vec<Subsystem>,
}

impl BobOperation {
    pub fn unitary(operator: Operator) -> Result<Self> {
        operator.ensure_unitary("bob_unitary", STRUCTURE_TOL)?;
        Ok(Self {
            kind: BobKind::UnitaryOnB,
            operator,
            ancillas: Vec::new(),
        })
    }

    /// General dilation: `operator` acts on Bob's labels plus `ancillas`.
    pub fn dilated(operator: Operator, ancillas: Vec<Subsystem>) -> Result<Self> {
        operator.ensure_unitary("bob_dilation", STRUCTURE_TOL)?;
        for a in &ancillas {
            if !operator.layout().contains(a.label()) {
                return Err(Error::UnknownLabel(a.label().to_string()));
            }
        }
        Ok(Self {
            kind: BobKind::DilatedMeasurement,
            operator,
            ancillas,
        })
    }

    /// Projective measurement in `basis` recorded on a single ancilla:
    /// U = Σ_k |b_k⟩⟨b_k| ⊗ Shift^k, with Shift cyclic on the ancilla.
    pub fn measurement(basis: &[StateVector], ancilla: Subsystem) -> Result<Self> {
        let first = basis
            .first()
            .ok_or(Error::IncompleteBasis { expected: 1, found: 0 })?;
        let system = first.layout().clone();
        if basis.len() != system.dim() {
            return Err(Error::IncompleteBasis {
                expected: system.dim(),
                found: basis.len(),
            });
        }
        if ancilla.dim() < basis.len() {
            return Err(Error::DimensionTooSmall {
                label: ancilla.label().to_string(),
                dim: ancilla.dim(),
            });
        }
        let n = ancilla.dim();
        let mut u = CMatrix::zeros(system.dim() * n, system.dim() * n);
        for (k, b) in basis.iter().enumerate() {
            if b.layout() != &system {
                return Err(Error::LayoutMismatch(b.layout().to_string()));
            }
            let p = Operator::projector_onto(b)?;
            let mut shift = CMatrix::zeros(n, n);
            for j in 0..n {
                shift[((j + k) % n, j)] = Complex64::new(1.0, 0.0);
            }
            u += p.matrix().kronecker(&shift);
        }
        let layout = system.concat(&SystemLayout::single(ancilla.clone())?)?;
        Self::dilated(Operator::new(layout, u)?, vec![ancilla])
    }

    /// Measurement of one subsystem of `layout` in its own basis.
    pub fn measure_subsystem(layout: &SystemLayout, label: &str, ancilla: Subsystem) -> Result<Self> {
        let sub = SystemLayout::single(layout.subsystem(label)?.clone())?;
        let basis = sub
            .subsystem(label)?
            .basis()
            .iter()
            .map(|name| StateVector::basis(sub.clone(), &[name]))
            .collect::<Result<Vec<_>>>()?;
        Self::measurement(&basis, ancilla)
    }
}

fn alice_layout_check<S: AsRef<str>>(state: &StateVector, alice: &[S]) -> Result<()> {
    if alice.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    state.layout().select(alice).map(|_| ())
}

/// ρ_A after Bob applies `op`; every label outside `alice` belongs to Bob.
pub fn reduced_after<S: AsRef<str>>(
    state: &StateVector,
    alice: &[S],
    op: &BobOperation,
) -> Result<DensityOperator> {
    alice_layout_check(state, alice)?;
    let layout = state.layout();
    let alice: Vec<&str> = alice.iter().map(|s| s.as_ref()).collect();
    for label in op.operator.layout().labels() {
        if alice.contains(&label) {
            return Err(Error::TouchesAlice(label.to_string()));
        }
        let is_ancilla = op.ancillas.iter().any(|a| a.label() == label);
        if is_ancilla == layout.contains(label) {
            return Err(if is_ancilla {
                Error::DuplicateLabel(label.to_string())
            } else {
                Error::UnknownLabel(label.to_string())
            });
        }
    }
    let mut extended = state.clone();
    for a in &op.ancillas {
        let ground = StateVector::basis(SystemLayout::single(a.clone())?, &[&a.basis()[0]])?;
        extended = tensor(&extended, &ground)?;
    }
    let targets = op.operator.layout().labels();
    let u = lift(&op.operator, &targets, extended.layout())?;
    partial_trace(&extended.apply(&u)?.density()?, &alice)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoCommCheck {
    pub max_deviation: f64,
    pub passed: bool,
}

/// Largest entrywise change of ρ_A over `ops`.
pub fn verify_no_communication<S: AsRef<str>>(
    state: &StateVector,
    alice: &[S],
    ops: &[BobOperation],
    tol: f64,
) -> Result<NoCommCheck> {
    alice_layout_check(state, alice)?;
    let before = partial_trace(&state.density()?, alice)?;
    let mut max_deviation: f64 = 0.0;
    for op in ops {
        let after = reduced_after(state, alice, op)?;
        max_deviation = max_deviation.max(after.max_abs_diff(&before)?);
    }
    Ok(NoCommCheck {
        max_deviation,
        passed: max_deviation <= tol,
    })
}

/// Change in ρ_A under a unitary acting on the whole system. Entangling
/// operations generally do change it.
pub fn negative_control<S: AsRef<str>>(
    state: &StateVector,
    alice: &[S],
    global_op: &Operator,
) -> Result<f64> {
    alice_layout_check(state, alice)?;
    let before = partial_trace(&state.density()?, alice)?;
    let after = partial_trace(&state.apply(global_op)?.density()?, alice)?;
    after.max_abs_diff(&before)
}

/// (1 ⊗ H_B)·CNOT_{B→A} on the two-qubit layout a ⊗ b.
pub fn entangling_control() -> Result<Operator> {
    let layout = SystemLayout::qubits(&["a", "b"])?;
    let cnot = crate::hilbert::real_matrix(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
    ]);
    let h = crate::catalog::hadamard_on("b", "0", "1");
    let hb = lift(&h, &["b"], &layout)?;
    hb.compose(&Operator::new(layout, cnot)?)
}

/// Seeded sweep over random states and Bob-confined operations on layouts
/// with one or two subsystems per side (dims 2–3). Case `k` draws from stream
/// `k`, cycling through local unitaries, single-ancilla measurements and
/// two-ancilla dilations.
pub fn random_sweep(seed: u64, cases: usize, tol: f64) -> Result<NoCommCheck> {
    use crate::random::{random_state, random_unitary, random_unitary_matrix, stream};
    use rand::Rng;
    let mut worst: f64 = 0.0;
    for k in 0..cases as u64 {
        let mut rng = stream(seed, k);
        let na = rng.random_range(1..=2);
        let nb = rng.random_range(1..=2);
        let mut subs = Vec::new();
        let mut alice = Vec::new();
        let mut bob = Vec::new();
        for i in 0..na {
            alice.push(format!("a{i}"));
            subs.push(Subsystem::new(format!("a{i}"), rng.random_range(2..=3)));
        }
        for i in 0..nb {
            bob.push(format!("b{i}"));
            subs.push(Subsystem::new(format!("b{i}"), rng.random_range(2..=3)));
        }
        let layout = SystemLayout::new(subs)?;
        let psi = random_state(layout.clone(), &mut rng)?;
        let op = match k % 3 {
            0 => BobOperation::unitary(random_unitary(layout.select(&bob)?, &mut rng)?)?,
            1 => {
                let target = &bob[rng.random_range(0..bob.len())];
                let dim = layout.subsystem(target)?.dim();
                BobOperation::measure_subsystem(&layout, target, Subsystem::new("anc", dim))?
            }
            _ => {
                let anc = vec![Subsystem::new("anc0", 2), Subsystem::new("anc1", 2)];
                let l = layout.select(&bob[..1])?.concat(&SystemLayout::new(anc.clone())?)?;
                let u = Operator::new(l.clone(), random_unitary_matrix(l.dim(), &mut rng))?;
                BobOperation::dilated(u, anc)?
            }
        };
        let check = verify_no_communication(&psi, &alice, &[op], tol)?;
        worst = worst.max(check.max_deviation);
    }
    Ok(NoCommCheck {
        max_deviation: worst,
        passed: worst <= tol,
    })
}
