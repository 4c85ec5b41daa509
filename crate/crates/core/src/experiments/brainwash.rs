use std::f64::consts::FRAC_1_SQRT_2;

use super::ExperimentReport;
use crate::catalog::{
    alice_car_layout, alt_observation_unitary, hadamard_on, observation_unitary,
    switching_layout, switching_u1, switching_u2, switching_u3, UNITARY_TOL,
};
use crate::error::Result;
use crate::hilbert::{fidelity, lift, re, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BrainwashVariant {
    /// Observe, then apply the adjoint of the observation.
    Inverse,
    /// A second observation unitary and its own inverse.
    AltUnitary,
    /// Beam splitter on the car twice: (H·H = 1) with Alice untouched.
    BeamsplitterDoublePass,
    /// Memory moved to a switching unit, which then disentangles from the car.
    SwitchingUnit,
}

impl BrainwashVariant {
    pub fn name(&self) -> &'static str {
        match self {
            BrainwashVariant::Inverse => "inverse",
            BrainwashVariant::AltUnitary => "alt_unitary",
            BrainwashVariant::BeamsplitterDoublePass => "beamsplitter_double_pass",
            BrainwashVariant::SwitchingUnit => "switching_unit",
        }
    }
}

/// (|0⟩|L⟩ + |0⟩|R⟩)/√2: Alice has not looked at the undecided car.
fn undecided() -> Result<StateVector> {
    let h = FRAC_1_SQRT_2;
    StateVector::from_terms(
        alice_car_layout(),
        &[(&["0", "L"][..], re(h)), (&["0", "R"][..], re(h))],
    )
}

pub fn brainwash_roundtrip(variant: BrainwashVariant) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("brainwash");
    report.setting("variant", variant.name());
    let (initial, last) = match variant {
        BrainwashVariant::Inverse | BrainwashVariant::AltUnitary => {
            let u = if variant == BrainwashVariant::Inverse {
                observation_unitary()
            } else {
                alt_observation_unitary()
            };
            u.ensure_unitary("observation", UNITARY_TOL)?;
            let initial = undecided()?;
            let observed = initial.apply(&u)?;
            // After observing, Alice's memory is perfectly correlated with the car.
            let h = FRAC_1_SQRT_2;
            let correlated = StateVector::from_terms(
                alice_car_layout(),
                &[(&["0", "L"][..], re(h)), (&["1", "R"][..], re(h))],
            )?;
            report.scalar("observed_fidelity", fidelity(&observed, &correlated)?)?;
            let back = observed.apply(&u.adjoint())?;
            (initial, back)
        }
        BrainwashVariant::BeamsplitterDoublePass => {
            let layout = alice_car_layout();
            let h = hadamard_on("car", "L", "R");
            let initial = StateVector::basis(layout, &["0", "L"])?;
            let once = initial.apply_on(&h, &["car"])?;
            report.scalar("single_pass_fidelity", fidelity(&once, &undecided()?)?)?;
            let twice = once.apply_on(&h, &["car"])?;
            (initial, twice)
        }
        BrainwashVariant::SwitchingUnit => {
            let layout = switching_layout();
            let steps = [
                (switching_u1(), ["alice", "car"]),
                (switching_u2(), ["alice", "switch"]),
                (switching_u3(), ["car", "switch"]),
            ];
            let half = re(0.5);
            let h = re(FRAC_1_SQRT_2);
            let initial = StateVector::from_terms(
                layout.clone(),
                &[
                    (&["0", "L", "u"][..], half),
                    (&["0", "L", "d"][..], half),
                    (&["0", "R", "u"][..], half),
                    (&["0", "R", "d"][..], half),
                ],
            )?;
            let expected = [
                StateVector::from_terms(
                    layout.clone(),
                    &[
                        (&["1", "L", "u"][..], half),
                        (&["1", "L", "d"][..], half),
                        (&["2", "R", "u"][..], half),
                        (&["2", "R", "d"][..], half),
                    ],
                )?,
                StateVector::from_terms(
                    layout.clone(),
                    &[(&["0", "L", "u"][..], h), (&["0", "R", "d"][..], h)],
                )?,
                initial.clone(),
            ];
            let mut s = initial.clone();
            for (k, ((u, targets), want)) in steps.iter().zip(expected.iter()).enumerate() {
                u.ensure_unitary(&format!("switching_u{}", k + 1), UNITARY_TOL)?;
                s = s.apply(&lift(u, targets, &layout)?)?;
                report.scalar(format!("step{}_deviation", k + 1), s.max_abs_diff(want)?)?;
            }
            (initial, s)
        }
    };
    let f = fidelity(&last, &initial)?;
    let dev = last.max_abs_diff(&initial)?;
    report.scalar("fidelity", f)?;
    report.scalar("max_abs_diff", dev)?;
    report.verdict("restored", (f - 1.0).abs() <= 1e-12 && dev <= 1e-10);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_variant_restores_the_initial_state() {
        for v in [
            BrainwashVariant::Inverse,
            BrainwashVariant::AltUnitary,
            BrainwashVariant::BeamsplitterDoublePass,
            BrainwashVariant::SwitchingUnit,
        ] {
            let r = brainwash_roundtrip(v).unwrap();
            assert!(r.all_passed(), "{v:?}");
        }
    }

    #[test]
    fn switching_chain_matches_each_intermediate_state() {
        let r = brainwash_roundtrip(BrainwashVariant::SwitchingUnit).unwrap();
        for k in 1..=3 {
            assert!(r.get(&format!("step{k}_deviation")).unwrap() < 1e-12);
        }
    }

    #[test]
    fn observation_correlates_memory() {
        for v in [BrainwashVariant::Inverse, BrainwashVariant::AltUnitary] {
            let r = brainwash_roundtrip(v).unwrap();
            assert!((r.get("observed_fidelity").unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
