use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use super::ExperimentReport;
use crate::error::Result;
use crate::hilbert::{
    lift, project, re, CMatrix, Operator, Projection, StateVector, SystemLayout,
};
use crate::optics::{
    intensity_with_survival, path, path_coherence, polarization, polarizer, screen_amplitude,
    wave_plate, PlateKind, ScreenConfig, ScreenPattern, Slit,
};

/// Block-diagonal operator on path ⊗ target: `upper` on the u branch, `lower` on d.
fn path_conditional(layout: SystemLayout, upper: &CMatrix, lower: &CMatrix) -> Result<Operator> {
    let n = upper.nrows();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(upper);
    m.view_mut((n, n), (n, n)).copy_from(lower);
    Operator::new(layout, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WheelerChoice {
    Interference,
    WhichPath,
}

/// Photon after the first beam splitter, observed either on the screen (both
/// paths overlap) or at two separated detectors D1 (lower beam) and D2.
pub fn run_wheeler(choice: WheelerChoice, config: &ScreenConfig) -> Result<ExperimentReport> {
    let layout = SystemLayout::single(path("path"))?;
    let psi = StateVector::basis(layout, &["u"])?.apply(&crate::optics::beam_splitter().relabel(
        SystemLayout::single(path("path"))?,
    )?)?;
    let mut report = ExperimentReport::new("wheeler");
    match choice {
        WheelerChoice::Interference => {
            report.setting("choice", "interference");
            let pattern = intensity_with_survival(&psi, "path", config, 1.0)?;
            report.scalar("visibility", pattern.visibility)?;
            report.scalar("coherence", path_coherence(&psi, "path")?)?;
            report.scalar("survival", pattern.survival)?;
            report.verdict("fringes_visible", (pattern.visibility - 1.0).abs() <= 0.01);
            report.pattern("screen", pattern)?;
        }
        WheelerChoice::WhichPath => {
            report.setting("choice", "which_path");
            // Each detector sits on one half of the focal plane; path weights are
            // the Born probabilities of the two beams at each position.
            let xs = config.xs();
            let w = |slit, keep: &dyn Fn(f64) -> f64| -> f64 {
                xs.iter()
                    .map(|&x| keep(x) * screen_amplitude(config, slit, x).norm_sqr())
                    .sum()
            };
            let lower_side = |x: f64| if x < 0.0 { 1.0 } else if x == 0.0 { 0.5 } else { 0.0 };
            let upper_side = |x: f64| 1.0 - lower_side(x);
            let amps = psi.amplitudes();
            let (pu, pd) = (amps[0].norm_sqr(), amps[1].norm_sqr());
            let norm_u = w(Slit::Upper, &|_| 1.0);
            let norm_d = w(Slit::Lower, &|_| 1.0);
            let d1_from_lower = pd * w(Slit::Lower, &lower_side) / norm_d;
            let d1_from_upper = pu * w(Slit::Upper, &lower_side) / norm_u;
            let d2_from_lower = pd * w(Slit::Lower, &upper_side) / norm_d;
            let d2_from_upper = pu * w(Slit::Upper, &upper_side) / norm_u;
            let p_d1 = d1_from_lower + d1_from_upper;
            let p_d2 = d2_from_lower + d2_from_upper;
            let incoherent: Vec<f64> = xs
                .iter()
                .map(|&x| {
                    pu * screen_amplitude(config, Slit::Upper, x).norm_sqr()
                        + pd * screen_amplitude(config, Slit::Lower, x).norm_sqr()
                })
                .collect();
            let pattern = ScreenPattern::from_samples(xs.clone(), incoherent, 1.0, Some(config.window()))?;
            report.scalar("p_d1", p_d1)?;
            report.scalar("p_d2", p_d2)?;
            report.scalar("p_lower_given_d1", d1_from_lower / p_d1)?;
            report.scalar("visibility", pattern.visibility)?;
            report.verdict("detectors_balanced", (p_d1 - 0.5).abs() <= 1e-12);
            report.verdict("d1_not_certain_of_path", d1_from_lower / p_d1 < 1.0);
            report.pattern("detectors", pattern)?;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eraser {
    None,
    /// Linear polarizer at the given angle after the slits.
    Polarizer(f64),
    /// Rotate the upper path's polarization by the marker angle.
    HwpUpper,
    /// Rotate the lower path's polarization back by the marker angle.
    HwpLower,
    /// Two quarter-wave plates on the lower path, axes at θ−45° then 45°, plus
    /// a phase compensator on that arm.
    QwpPair,
}

impl Eraser {
    pub fn name(&self) -> String {
        match self {
            Eraser::None => "none".into(),
            Eraser::Polarizer(t) => format!("polarizer:{}deg", t.to_degrees()),
            Eraser::HwpUpper => "hwp_upper".into(),
            Eraser::HwpLower => "hwp_lower".into(),
            Eraser::QwpPair => "qwp_pair".into(),
        }
    }
}

fn slit_layout() -> Result<SystemLayout> {
    SystemLayout::new(vec![path("path"), polarization("pol")])
}

/// Double slit with a polarization marker (lower path rotated by `marker`)
/// followed by an optional eraser.
pub fn run_double_slit_eraser(
    marker: Option<f64>,
    eraser: Eraser,
    config: &ScreenConfig,
) -> Result<ExperimentReport> {
    let layout = slit_layout()?;
    let theta = marker.unwrap_or(0.0);
    let id = CMatrix::identity(2, 2);
    let rot = |a: f64| wave_plate(PlateKind::Half, a).matrix().clone();
    let h = FRAC_1_SQRT_2;
    let unmarked = StateVector::from_terms(
        layout.clone(),
        &[(&["u", "V"][..], re(h)), (&["d", "V"][..], re(h))],
    )?;
    let marked = unmarked.apply(&path_conditional(layout.clone(), &id, &rot(theta))?)?;

    let mut report = ExperimentReport::new("double_slit_eraser");
    report.setting(
        "marker",
        marker.map_or("none".to_string(), |m| format!("{}deg", m.to_degrees())),
    );
    report.setting("eraser", eraser.name());

    let (final_state, survival, unitary) = match eraser {
        Eraser::None => (marked, 1.0, true),
        Eraser::Polarizer(tp) => match project(&marked, &polarizer(tp), &["pol"])? {
            Projection::Kept { state, survival } => (state, survival, false),
            Projection::Null { survival } => {
                report.scalar("survival", survival)?;
                report.note("polarizer blocks every photon");
                return Ok(report);
            }
        },
        Eraser::HwpUpper => (
            marked.apply(&path_conditional(layout.clone(), &rot(theta), &id)?)?,
            1.0,
            true,
        ),
        Eraser::HwpLower => (
            marked.apply(&path_conditional(layout.clone(), &id, &rot(-theta))?)?,
            1.0,
            true,
        ),
        Eraser::QwpPair => {
            let q1 = wave_plate(PlateKind::Quarter, theta - FRAC_PI_4);
            let q2 = wave_plate(PlateKind::Quarter, FRAC_PI_4);
            let pair = q2.compose(&q1)?.matrix().clone();
            // The plates return |θ⟩ to |V⟩ up to a phase; a path-length
            // compensator on the same arm removes it so the fringes stay centred.
            let v_out = (&pair * rot(theta).column(0))[0];
            let chi = v_out.arg();
            report.scalar("compensation_phase", chi)?;
            let lower = pair * Complex64::from_polar(1.0, -chi);
            (
                marked.apply(&path_conditional(layout.clone(), &id, &lower)?)?,
                1.0,
                true,
            )
        }
    };
    let pattern = intensity_with_survival(&final_state, "path", config, survival)?;
    report.scalar("visibility", pattern.visibility)?;
    report.scalar("coherence", path_coherence(&final_state, "path")?)?;
    report.scalar("survival", survival)?;
    if unitary {
        report.verdict("unitary_eraser_keeps_every_photon", (survival - 1.0).abs() <= 1e-10);
    }
    report.pattern("screen", pattern)?;
    Ok(report)
}

/// Coincidence rate C(θ) for each mirror phase θ, and the filter survival.
/// Layout: idler mode (i1, i2) ⊗ idler polarization ⊗ signal polarization.
pub fn herzog_coincidence(qwp_on: bool, filter_on: bool, phases: &[f64]) -> Result<(Vec<f64>, f64)> {
    let layout = SystemLayout::new(vec![
        crate::hilbert::Subsystem::with_basis("idler", &["i1", "i2"]),
        polarization("ipol"),
        polarization("spol"),
    ])?;
    let h = FRAC_1_SQRT_2;
    let pair = StateVector::from_terms(
        layout.clone(),
        &[(&["i1", "V", "V"][..], re(h)), (&["i2", "V", "V"][..], re(h))],
    )?;
    let id = CMatrix::identity(2, 2);
    let idler_pol = layout.select(&["idler", "ipol"])?;
    let q = wave_plate(PlateKind::Quarter, FRAC_PI_4);
    let double_pass = q.compose(&q)?;
    let mark = path_conditional(idler_pol, &id, if qwp_on { double_pass.matrix() } else { &id })?;
    let mark = lift(&mark, &["idler", "ipol"], &layout)?;
    let detector_mode = Operator::projector_onto(&StateVector::from_vec(
        SystemLayout::single(crate::hilbert::Subsystem::with_basis("idler", &["i1", "i2"]))?,
        vec![re(h), re(h)],
    )?)?;
    let mut rates = Vec::with_capacity(phases.len());
    let mut filter_survival = 1.0;
    for &theta in phases {
        let mut mirror = CMatrix::identity(2, 2);
        mirror[(1, 1)] = Complex64::from_polar(1.0, theta);
        let mirror = Operator::new(
            SystemLayout::single(crate::hilbert::Subsystem::with_basis("idler", &["i1", "i2"]))?,
            mirror,
        )?;
        let mut s = pair.apply_on(&mirror, &["idler"])?.apply(&mark)?;
        let mut weight = 1.0;
        if filter_on {
            match project(&s, &polarizer(FRAC_PI_4), &["ipol"])? {
                Projection::Kept { state, survival } => {
                    s = state;
                    weight = survival;
                }
                Projection::Null { survival } => {
                    rates.push(0.0);
                    filter_survival = survival;
                    continue;
                }
            }
        }
        filter_survival = weight;
        rates.push(weight * project(&s, &detector_mode, &["idler"])?.survival());
    }
    Ok((rates, filter_survival))
}

/// Two-pass down-conversion eraser: coincidence visibility over a mirror-phase scan.
pub fn run_herzog(qwp_on: bool, filter_on: bool, phases: &[f64]) -> Result<ExperimentReport> {
    if phases.is_empty() {
        return Err(crate::Error::InvalidParameter("phase grid is empty".into()));
    }
    let (rates, survival) = herzog_coincidence(qwp_on, filter_on, phases)?;
    let pattern = ScreenPattern::unnormalized(phases.to_vec(), rates, survival)?;
    let mut report = ExperimentReport::new("herzog");
    report.setting("qwp", qwp_on).setting("filter", filter_on);
    report.setting("phase_points", phases.len());
    report.scalar("visibility", pattern.visibility)?;
    report.scalar("survival", survival)?;
    let expected_visibility = if qwp_on && !filter_on { 0.0 } else { 1.0 };
    report.verdict(
        "coincidence_visibility",
        (pattern.visibility - expected_visibility).abs() <= 0.01,
    );
    report.pattern("coincidence", pattern)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn phases() -> Vec<f64> {
        (0..=72).map(|k| k as f64 * 2.0 * PI / 72.0).collect()
    }

    #[test]
    fn herzog_three_configurations() {
        let (r, s) = herzog_coincidence(false, false, &phases()).unwrap();
        for (k, c) in r.iter().enumerate() {
            let th = phases()[k];
            assert!((c - 0.5 * (1.0 + th.cos())).abs() < 1e-12);
        }
        assert_eq!(s, 1.0);
        let (r, _) = herzog_coincidence(true, false, &phases()).unwrap();
        assert!(r.iter().all(|c| (c - 0.5).abs() < 1e-12));
        let rep = run_herzog(true, true, &phases()).unwrap();
        assert!((rep.get("visibility").unwrap() - 1.0).abs() < 1e-9);
        assert!((rep.get("survival").unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn qwp_pair_erases_any_marker() {
        let cfg = ScreenConfig::default();
        for deg in [10.0f64, 45.0, 90.0, 130.0] {
            let r = run_double_slit_eraser(Some(deg.to_radians()), Eraser::QwpPair, &cfg).unwrap();
            assert!((r.get("coherence").unwrap() - 1.0).abs() < 1e-12, "{deg}");
        }
    }

    #[test]
    fn wheeler_which_path_is_balanced_but_not_certain() {
        let r = run_wheeler(WheelerChoice::WhichPath, &ScreenConfig::default()).unwrap();
        assert!((r.get("p_d1").unwrap() - 0.5).abs() < 1e-12);
        let c = r.get("p_lower_given_d1").unwrap();
        assert!(c > 0.5 && c < 1.0);
        let _ = FRAC_PI_2;
    }
}
