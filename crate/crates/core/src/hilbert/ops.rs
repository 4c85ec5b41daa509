use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    DensityOperator, Operator, StateVector, SystemLayout, NULL_SURVIVAL, STRUCTURE_TOL,
};
use crate::error::{Error, Result};

/// `a ⊗ b` on the concatenated layout.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let layout = a.layout().concat(b.layout())?;
    let amps = a.amplitudes().kronecker(b.amplitudes());
    // the flag follows the inputs, even if unnormalized factors multiply to norm 1
    Ok(StateVector::new(layout, amps)?.with_flag(a.is_normalized() && b.is_normalized()))
}

/// Embed `op` (acting on `targets`, in the order listed) into the full layout,
/// acting as identity on every other subsystem.
pub fn lift<S: AsRef<str>>(op: &Operator, targets: &[S], layout: &SystemLayout) -> Result<Operator> {
    let positions = layout.positions(targets)?;
    let target_dim: usize = positions.iter().map(|&p| layout.dims()[p]).product();
    if op.dim() != target_dim {
        return Err(Error::DimensionMismatch {
            expected: target_dim,
            found: op.dim(),
        });
    }
    let rest: Vec<usize> = (0..layout.len()).filter(|p| !positions.contains(p)).collect();
    let t_off = layout.offsets(&positions);
    let r_off = layout.offsets(&rest);
    let n = layout.dim();
    let m = op.matrix();
    let mut full = DMatrix::zeros(n, n);
    for &base in &r_off {
        for (a, &ta) in t_off.iter().enumerate() {
            for (b, &tb) in t_off.iter().enumerate() {
                full[(base + ta, base + tb)] = m[(a, b)];
            }
        }
    }
    Operator::new(layout.clone(), full)
}

/// Reduced density operator on `keep` (in the order listed).
pub fn partial_trace<S: AsRef<str>>(rho: &DensityOperator, keep: &[S]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let layout = rho.layout();
    let positions = layout.positions(keep)?;
    let rest: Vec<usize> = (0..layout.len()).filter(|p| !positions.contains(p)).collect();
    let k_off = layout.offsets(&positions);
    let r_off = layout.offsets(&rest);
    let m = rho.matrix();
    let dk = k_off.len();
    let reduced = DMatrix::from_fn(dk, dk, |a, b| {
        r_off
            .iter()
            .map(|&r| m[(k_off[a] + r, k_off[b] + r)])
            .sum::<Complex64>()
    });
    let kept = layout.select(keep)?;
    DensityOperator::new_unchecked(kept, reduced)
}

/// Outcome of a projection.
#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    /// Renormalized post-projection state.
    Kept { state: StateVector, survival: f64 },
    /// Survival below 1e−14; no state is formed.
    Null { survival: f64 },
}

impl Projection {
    pub fn survival(&self) -> f64 {
        match self {
            Projection::Kept { survival, .. } | Projection::Null { survival } => *survival,
        }
    }

    pub fn state(&self) -> Option<&StateVector> {
        match self {
            Projection::Kept { state, .. } => Some(state),
            Projection::Null { .. } => None,
        }
    }

    pub fn into_state(self) -> Option<StateVector> {
        match self {
            Projection::Kept { state, .. } => Some(state),
            Projection::Null { .. } => None,
        }
    }
}

/// Apply a projector on `targets`; survival = ‖P ψ‖² / ‖ψ‖².
pub fn project<S: AsRef<str>>(
    state: &StateVector,
    projector: &Operator,
    targets: &[S],
) -> Result<Projection> {
    projector.ensure_projector()?;
    let psi = state.normalized()?;
    let projected = psi.apply(&lift(projector, targets, state.layout())?)?;
    let survival = projected.norm_sqr();
    if survival < NULL_SURVIVAL {
        return Ok(Projection::Null { survival });
    }
    Ok(Projection::Kept {
        state: projected.normalized()?,
        survival,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementResult {
    pub outcome_label: String,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub post_state: Option<StateVector>,
}

/// Projective measurement of `targets` in an orthonormal basis (given as states on
/// the target subsystems in the listed order). Outcomes follow basis order.
pub fn measure<S: AsRef<str>>(
    state: &StateVector,
    targets: &[S],
    basis: &[StateVector],
) -> Result<Vec<MeasurementResult>> {
    let labeled: Vec<(String, StateVector)> = basis
        .iter()
        .enumerate()
        .map(|(k, b)| (default_label(b, k), b.clone()))
        .collect();
    measure_labeled(state, targets, &labeled)
}

pub fn measure_labeled<S: AsRef<str>>(
    state: &StateVector,
    targets: &[S],
    basis: &[(String, StateVector)],
) -> Result<Vec<MeasurementResult>> {
    let target_layout = state.layout().select(targets)?;
    let dim = target_layout.dim();
    for (_, b) in basis {
        if b.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
    }
    if basis.len() != dim {
        return Err(Error::IncompleteBasis {
            expected: dim,
            found: basis.len(),
        });
    }
    let mut deviation: f64 = 0.0;
    for (i, (_, a)) in basis.iter().enumerate() {
        for (j, (_, b)) in basis.iter().enumerate() {
            let g = a.amplitudes().dotc(b.amplitudes());
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((g - target).norm());
        }
    }
    if deviation > STRUCTURE_TOL {
        return Err(Error::NonOrthonormalBasis { deviation });
    }
    basis
        .iter()
        .map(|(label, b)| {
            let b = b.relabel(target_layout.clone())?;
            let p = Operator::projector_onto(&b)?;
            let proj = project(state, &p, targets)?;
            Ok(MeasurementResult {
                outcome_label: label.clone(),
                probability: proj.survival(),
                post_state: proj.into_state(),
            })
        })
        .collect()
}

/// Measure one subsystem in its own basis; outcomes are labeled by basis names.
pub fn measure_subsystem(state: &StateVector, label: &str) -> Result<Vec<MeasurementResult>> {
    let sub = state.layout().subsystem(label)?.clone();
    let l = SystemLayout::single(sub.clone())?;
    let basis = sub
        .basis()
        .iter()
        .map(|name| Ok((name.clone(), StateVector::basis(l.clone(), &[name])?)))
        .collect::<Result<Vec<_>>>()?;
    measure_labeled(state, &[label], &basis)
}

fn default_label(b: &StateVector, k: usize) -> String {
    let amps = b.amplitudes();
    let nonzero: Vec<usize> = (0..amps.len()).filter(|&i| amps[i].norm() > 1e-12).collect();
    if nonzero.len() == 1 {
        b.layout().basis_labels(nonzero[0]).join(",")
    } else {
        format!("#{k}")
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.check_layout(b)?;
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

pub fn norm(a: &StateVector) -> f64 {
    a.norm()
}

/// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`, insensitive to global phase.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    let ip = inner(a, b)?;
    let den = a.norm_sqr() * b.norm_sqr();
    if den == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((ip.norm_sqr() / den).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{re, real_matrix, Subsystem};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h() -> nalgebra::DMatrix<Complex64> {
        real_matrix(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
    }

    #[test]
    fn tensor_flag_and_duplicates() {
        let a = SystemLayout::qubits(&["a"]).unwrap();
        let s = StateVector::basis(a.clone(), &["0"]).unwrap();
        let t = tensor(&s, &StateVector::basis(SystemLayout::qubits(&["b"]).unwrap(), &["1"]).unwrap()).unwrap();
        assert!(t.is_normalized());
        assert_eq!(t.amplitude(&["0", "1"]).unwrap(), re(1.0));
        assert_eq!(tensor(&s, &s), Err(Error::DuplicateLabel("a".into())));
    }

    #[test]
    fn lift_hadamard_on_marker() {
        let l = SystemLayout::new(vec![Subsystem::new("m", 2), Subsystem::new("path", 2)]).unwrap();
        let hq = Operator::new(SystemLayout::qubits(&["x"]).unwrap(), h()).unwrap();
        let s = StateVector::basis(l.clone(), &["0", "1"]).unwrap();
        let out = s.apply(&lift(&hq, &["m"], &l).unwrap()).unwrap();
        assert!((out.amplitude(&["0", "1"]).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((out.amplitude(&["1", "1"]).unwrap().re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(out.amplitude(&["0", "0"]).unwrap(), re(0.0));
    }

    #[test]
    fn lift_non_contiguous_permutes() {
        // CNOT with control c, target t, lifted onto layout (t, x, c)
        let cnot = real_matrix(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        let op = Operator::new(SystemLayout::qubits(&["c", "t"]).unwrap(), cnot).unwrap();
        let l = SystemLayout::qubits(&["t", "x", "c"]).unwrap();
        let full = lift(&op, &["c", "t"], &l).unwrap();
        let s = StateVector::basis(l.clone(), &["0", "1", "1"]).unwrap();
        let out = s.apply(&full).unwrap();
        assert_eq!(out.amplitude(&["1", "1", "1"]).unwrap(), re(1.0));
        assert!(full.is_unitary(1e-14));
    }

    #[test]
    fn lift_wrong_dimension() {
        let op = Operator::identity(SystemLayout::qubits(&["a"]).unwrap());
        let l = SystemLayout::new(vec![Subsystem::new("q", 3)]).unwrap();
        assert_eq!(
            lift(&op, &["q"], &l),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
        assert_eq!(
            lift(&op, &["zz"], &l),
            Err(Error::UnknownLabel("zz".into()))
        );
    }

    #[test]
    fn partial_trace_of_bell_is_mixed() {
        let l = SystemLayout::qubits(&["a", "b"]).unwrap();
        let bell = StateVector::from_terms(
            l,
            &[(&["0", "0"][..], re(FRAC_1_SQRT_2)), (&["1", "1"][..], re(FRAC_1_SQRT_2))],
        )
        .unwrap();
        let rho = bell.density().unwrap();
        for side in ["a", "b"] {
            let r = partial_trace(&rho, &[side]).unwrap();
            assert!((r.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
            assert!(r.matrix()[(0, 1)].norm() < 1e-15);
        }
        assert_eq!(partial_trace::<&str>(&rho, &[]), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn null_projection_is_explicit() {
        let l = SystemLayout::qubits(&["q"]).unwrap();
        let s = StateVector::basis(l.clone(), &["0"]).unwrap();
        let p1 = Operator::projector_onto(&StateVector::basis(l, &["1"]).unwrap()).unwrap();
        assert!(matches!(project(&s, &p1, &["q"]).unwrap(), Projection::Null { .. }));
    }

    #[test]
    fn non_projector_rejected() {
        let l = SystemLayout::qubits(&["q"]).unwrap();
        let s = StateVector::basis(l.clone(), &["0"]).unwrap();
        let hq = Operator::new(l, h()).unwrap();
        assert!(matches!(project(&s, &hq, &["q"]), Err(Error::NotProjector { .. })));
    }

    #[test]
    fn measure_rejects_bad_bases() {
        let l = SystemLayout::qubits(&["q"]).unwrap();
        let s = StateVector::basis(l.clone(), &["0"]).unwrap();
        let zero = StateVector::basis(l.clone(), &["0"]).unwrap();
        assert!(matches!(
            measure(&s, &["q"], std::slice::from_ref(&zero)),
            Err(Error::IncompleteBasis { expected: 2, found: 1 })
        ));
        assert!(matches!(
            measure(&s, &["q"], &[zero.clone(), zero]),
            Err(Error::NonOrthonormalBasis { .. })
        ));
    }

    #[test]
    fn measure_subsystem_labels_by_basis() {
        let l = SystemLayout::new(vec![Subsystem::with_basis("cat", &["alive", "dead"])]).unwrap();
        let s = StateVector::basis(l, &["dead"]).unwrap();
        let r = measure_subsystem(&s, "cat").unwrap();
        assert_eq!(r[1].outcome_label, "dead");
        assert_eq!(r[1].probability, 1.0);
        assert!(r[0].post_state.is_none());
    }
}
