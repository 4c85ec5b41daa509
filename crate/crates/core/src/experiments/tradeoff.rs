use super::ExperimentReport;
use crate::catalog::{observer_object_layout, tradeoff_unitary};
use crate::error::{Error, Result};
use crate::hilbert::{fidelity, partial_trace, re, Operator, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffResult {
    pub initial_interference_coeff: f64,
    pub final_interference_coeff: f64,
    pub correlation_measure: f64,
    pub constructed_unitary: Operator,
    /// max |U|i⟩ − |f⟩| over amplitudes.
    pub mapping_deviation: f64,
}

/// (1/√10)(|0⟩+|1⟩)(2|L⟩+|R⟩): no correlation, strong interference.
pub fn tradeoff_initial_state() -> Result<StateVector> {
    let k = 1.0 / 10f64.sqrt();
    StateVector::from_terms(
        observer_object_layout("first", "second"),
        &[
            (&["0", "L"][..], re(2.0 * k)),
            (&["0", "R"][..], re(k)),
            (&["1", "L"][..], re(2.0 * k)),
            (&["1", "R"][..], re(k)),
        ],
    )
}

/// (1/√2)|0⟩|L⟩ + (3/(5√2))|1⟩|L⟩ + (2√2/5)|1⟩|R⟩.
pub fn tradeoff_final_state() -> Result<StateVector> {
    let r2 = 2f64.sqrt();
    StateVector::from_terms(
        observer_object_layout("first", "second"),
        &[
            (&["0", "L"][..], re(1.0 / r2)),
            (&["1", "L"][..], re(3.0 / (5.0 * r2))),
            (&["1", "R"][..], re(2.0 * r2 / 5.0)),
        ],
    )
}

/// Marker overlap family (2|0⟩|L⟩ + (s|0⟩ + √(1−s²)|1⟩)|R⟩)/√5, s ∈ [0, 1]:
/// at s = 1 the first system carries no path information.
pub fn tradeoff_family(s: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("overlap {s} outside [0, 1]")));
    }
    let k = 1.0 / 5f64.sqrt();
    StateVector::from_terms(
        observer_object_layout("first", "second"),
        &[
            (&["0", "L"][..], re(2.0 * k)),
            (&["0", "R"][..], re(s * k)),
            (&["1", "R"][..], re((1.0 - s * s).max(0.0).sqrt() * k)),
        ],
    )
}

/// Normalized weight of Re(⟨a|L⟩⟨a|R⟩) in |⟨a|ψ⟩|² summed over the first
/// system: 2Re ρ_LR / (ρ_LL + ρ_RR + 2Re ρ_LR) of the second system's state.
pub fn interference_coefficient(state: &StateVector) -> Result<f64> {
    let rho = partial_trace(&state.density()?, &["second"])?;
    let m = rho.matrix();
    let cross = 2.0 * m[(0, 1)].re;
    let total = m[(0, 0)].re + m[(1, 1)].re + cross;
    if total.abs() < 1e-15 {
        return Err(Error::ZeroNorm);
    }
    Ok(cross / total)
}

/// Mixedness of the first system, 2(1 − λ_max), in [0, 1] for a qubit.
pub fn correlation_measure(state: &StateVector) -> Result<f64> {
    let rho = partial_trace(&state.density()?, &["first"])?;
    Ok((2.0 * (1.0 - rho.max_eigenvalue())).clamp(0.0, 1.0))
}

pub fn complementarity_tradeoff() -> Result<TradeoffResult> {
    let u = tradeoff_unitary();
    u.ensure_unitary("tradeoff_u", 1e-10)?;
    let initial = tradeoff_initial_state()?;
    let final_state = tradeoff_final_state()?;
    let mapped = initial.apply(&u)?;
    Ok(TradeoffResult {
        initial_interference_coeff: interference_coefficient(&initial)?,
        final_interference_coeff: interference_coefficient(&final_state)?,
        correlation_measure: correlation_measure(&final_state)?,
        mapping_deviation: mapped.max_abs_diff(&final_state)?,
        constructed_unitary: u,
    })
}

pub fn tradeoff_report() -> Result<ExperimentReport> {
    let t = complementarity_tradeoff()?;
    let mapped = tradeoff_initial_state()?.apply(&t.constructed_unitary)?;
    let mut report = ExperimentReport::new("tradeoff");
    report.scalar("initial_interference_coeff", t.initial_interference_coeff)?;
    report.scalar("final_interference_coeff", t.final_interference_coeff)?;
    report.scalar("initial_correlation", correlation_measure(&tradeoff_initial_state()?)?)?;
    report.scalar("correlation_measure", t.correlation_measure)?;
    report.scalar("unitarity_deviation", t.constructed_unitary.unitarity_deviation())?;
    report.scalar("mapping_deviation", t.mapping_deviation)?;
    report.scalar("mapping_fidelity", fidelity(&mapped, &tradeoff_final_state()?)?)?;
    report.verdict("initial_is_4_9", (t.initial_interference_coeff - 4.0 / 9.0).abs() <= 1e-12);
    report.verdict("final_is_12_37", (t.final_interference_coeff - 12.0 / 37.0).abs() <= 1e-12);
    report.verdict("u_maps_i_to_f", t.mapping_deviation <= 1e-10);
    report.note("interference weight drops as the first system becomes correlated with the second");
    Ok(report)
}
