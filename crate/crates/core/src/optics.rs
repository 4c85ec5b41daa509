//! Optical components as operators, and the two-slit screen model that turns a
//! path-qubit state into an intensity pattern.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    c, partial_trace, re, real_matrix, CMatrix, Operator, StateVector, Subsystem, SystemLayout,
};

/// Polarization qubit; basis `V` (vertical, ↑) and `H` (horizontal, →).
pub fn polarization(label: &str) -> Subsystem {
    Subsystem::with_basis(label, &["V", "H"])
}

/// Which-path qubit; basis `u` (upper) and `d` (lower).
pub fn path(label: &str) -> Subsystem {
    Subsystem::with_basis(label, &["u", "d"])
}

fn pol_layout() -> SystemLayout {
    SystemLayout::single(polarization("pol")).expect("valid")
}

fn path_layout() -> SystemLayout {
    SystemLayout::single(path("path")).expect("valid")
}

/// 50:50 beam splitter (Hadamard) on a path qubit.
pub fn beam_splitter() -> Operator {
    let h = FRAC_1_SQRT_2;
    Operator::new(path_layout(), real_matrix(&[&[h, h], &[h, -h]])).expect("2x2")
}

/// Relative phase `e^{iφ}` on the lower path.
pub fn phase_shift(phi: f64) -> Operator {
    let mut m = CMatrix::identity(2, 2);
    m[(1, 1)] = Complex64::from_polar(1.0, phi);
    Operator::new(path_layout(), m).expect("2x2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateKind {
    Half,
    Quarter,
}

fn rotation_matrix(theta: f64) -> CMatrix {
    let (s, co) = theta.sin_cos();
    real_matrix(&[&[co, -s], &[s, co]])
}

/// Half: rotate linear polarization by `angle`, R(θ) = [[cos, −sin], [sin, cos]].
/// Quarter: linear retarder with fast axis at `angle` from V, R(α)·diag(1, i)·R(−α).
pub fn wave_plate(kind: PlateKind, angle: f64) -> Operator {
    let m = match kind {
        PlateKind::Half => rotation_matrix(angle),
        PlateKind::Quarter => {
            let mut d = CMatrix::identity(2, 2);
            d[(1, 1)] = c(0.0, 1.0);
            rotation_matrix(angle) * d * rotation_matrix(-angle)
        }
    };
    Operator::new(pol_layout(), m).expect("2x2")
}

/// Linear polarization state |θ⟩ = cos θ |V⟩ + sin θ |H⟩.
pub fn linear_polarization(label: &str, theta: f64) -> StateVector {
    let (s, co) = theta.sin_cos();
    StateVector::from_vec(
        SystemLayout::single(polarization(label)).expect("valid"),
        vec![re(co), re(s)],
    )
    .expect("2 amplitudes")
}

/// Rank-one projector |θ⟩⟨θ|.
pub fn polarizer(theta: f64) -> Operator {
    Operator::projector_onto(&linear_polarization("pol", theta)).expect("unit vector")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slit {
    Upper,
    Lower,
}

/// Two-Gaussian screen model. Slit amplitudes are
/// f_u(x) = exp(−(x−a)²/4σ²)·e^{+i(κx+φ₀)} and f_d(x) = exp(−(x+a)²/4σ²)·e^{−i(κx+φ₀)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    /// Half the slit separation.
    pub a: f64,
    /// Envelope width.
    pub sigma: f64,
    /// Fringe wavenumber.
    pub kappa: f64,
    /// Phase offset φ₀; π/2 puts a dark fringe at the centre.
    pub center_phase: f64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            x_min: -10.0,
            x_max: 10.0,
            points: 401,
            a: 2.5,
            sigma: 2.5,
            kappa: 2.0 * PI,
            center_phase: FRAC_PI_2,
        }
    }
}

impl ScreenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(format!("screen: {msg}")));
        if !(self.x_min.is_finite() && self.x_max.is_finite()) || self.x_min >= self.x_max {
            return bad("x_min must be below x_max");
        }
        if self.points < 3 {
            return bad("points must be at least 3");
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return bad("a must be positive");
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad("sigma must be positive");
        }
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return bad("kappa must be non-negative");
        }
        if !self.center_phase.is_finite() {
            return bad("center_phase must be finite");
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|k| self.x_min + k as f64 * h).collect()
    }

    /// Half-width of the visibility window, where both envelopes overlap.
    pub fn window(&self) -> f64 {
        self.sigma / 2.0
    }
}

pub fn screen_amplitude(config: &ScreenConfig, slit: Slit, x: f64) -> Complex64 {
    let s2 = 4.0 * config.sigma * config.sigma;
    let phase = config.kappa * x + config.center_phase;
    match slit {
        Slit::Upper => Complex64::from_polar((-(x - config.a).powi(2) / s2).exp(), phase),
        Slit::Lower => Complex64::from_polar((-(x + config.a).powi(2) / s2).exp(), -phase),
    }
}

/// Sampled intensity with its Michelson visibility.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenPattern {
    pub xs: Vec<f64>,
    pub intensity: Vec<f64>,
    pub visibility: f64,
    pub survival: f64,
}

impl ScreenPattern {
    /// Rescales `intensity` so it sums to `survival`; visibility is taken over
    /// |x| ≤ `window` (or over every sample when `window` is `None`).
    pub fn from_samples(
        xs: Vec<f64>,
        intensity: Vec<f64>,
        survival: f64,
        window: Option<f64>,
    ) -> Result<Self> {
        if xs.is_empty() || xs.len() != intensity.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                found: intensity.len(),
            });
        }
        let total: f64 = intensity.iter().sum();
        let intensity: Vec<f64> = if total > 0.0 {
            intensity.iter().map(|v| v / total * survival).collect()
        } else {
            intensity
        };
        let windowed: Vec<f64> = xs
            .iter()
            .zip(&intensity)
            .filter(|(x, _)| window.is_none_or(|w| x.abs() <= w + 1e-12))
            .map(|(_, v)| *v)
            .collect();
        Ok(Self {
            visibility: michelson_visibility(&windowed),
            xs,
            intensity,
            survival,
        })
    }

    /// Keeps `values` as given (e.g. coincidence rates over a phase scan).
    pub fn unnormalized(xs: Vec<f64>, values: Vec<f64>, survival: f64) -> Result<Self> {
        if xs.is_empty() || xs.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                found: values.len(),
            });
        }
        Ok(Self {
            visibility: michelson_visibility(&values),
            xs,
            intensity: values,
            survival,
        })
    }

    /// Pointwise weighted sum of patterns on a shared grid; visibility recomputed.
    pub fn combine(terms: &[(f64, &ScreenPattern)], window: Option<f64>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("nothing to combine".into()))?
            .1;
        let mut sum = vec![0.0; first.xs.len()];
        let mut survival = 0.0;
        for (w, p) in terms {
            if p.xs != first.xs {
                return Err(Error::InvalidParameter("patterns use different grids".into()));
            }
            for (s, v) in sum.iter_mut().zip(&p.intensity) {
                *s += w * v;
            }
            survival += w * p.survival;
        }
        Self::from_samples(first.xs.clone(), sum, survival, window)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// (I_max − I_min)/(I_max + I_min); 0 for an empty or all-zero sample.
pub fn michelson_visibility(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || max <= 0.0 {
        return 0.0;
    }
    ((max - min) / (max + min)).clamp(0.0, 1.0)
}

pub fn visibility(pattern: &ScreenPattern) -> f64 {
    pattern.visibility
}

/// Screen intensity of the path qubit `path_label` (first basis state = upper
/// slit), tracing every other subsystem out in its own basis.
pub fn intensity(state: &StateVector, path_label: &str, config: &ScreenConfig) -> Result<ScreenPattern> {
    intensity_with_survival(state, path_label, config, 1.0)
}

pub fn intensity_with_survival(
    state: &StateVector,
    path_label: &str,
    config: &ScreenConfig,
    survival: f64,
) -> Result<ScreenPattern> {
    config.validate()?;
    let layout = state.layout();
    let pos = layout.position(path_label)?;
    if layout.dims()[pos] != 2 {
        return Err(Error::InvalidParameter(format!(
            "path subsystem `{path_label}` must be two-level"
        )));
    }
    let psi = state.normalized()?;
    let amps = psi.amplitudes();
    let stride = layout.strides()[pos];
    let rest: Vec<usize> = (0..layout.len()).filter(|&p| p != pos).collect();
    let pairs: Vec<(Complex64, Complex64)> = layout
        .offsets(&rest)
        .into_iter()
        .map(|m| (amps[m], amps[m + stride]))
        .collect();
    let xs = config.xs();
    let raw: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let fu = screen_amplitude(config, Slit::Upper, x);
            let fd = screen_amplitude(config, Slit::Lower, x);
            pairs.iter().map(|(cu, cd)| (cu * fu + cd * fd).norm_sqr()).sum()
        })
        .collect();
    ScreenPattern::from_samples(xs, raw, survival, Some(config.window()))
}

/// 2|ρ_ud|/(ρ_uu + ρ_dd) of the reduced path state: the screen-independent
/// fringe visibility.
pub fn path_coherence(state: &StateVector, path_label: &str) -> Result<f64> {
    let rho = partial_trace(&state.density()?, &[path_label])?;
    let m = rho.matrix();
    if m.nrows() != 2 {
        return Err(Error::InvalidParameter(format!(
            "path subsystem `{path_label}` must be two-level"
        )));
    }
    Ok(2.0 * m[(0, 1)].norm() / (m[(0, 0)].re + m[(1, 1)].re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{project, tensor};
    use std::f64::consts::FRAC_PI_4;

    fn two_path(marker_angle: Option<f64>) -> StateVector {
        let l = SystemLayout::new(vec![path("path"), polarization("pol")]).unwrap();
        let lower = marker_angle.unwrap_or(0.0);
        let (s, co) = lower.sin_cos();
        StateVector::from_terms(
            l,
            &[
                (&["u", "V"][..], re(FRAC_1_SQRT_2)),
                (&["d", "V"][..], re(FRAC_1_SQRT_2 * co)),
                (&["d", "H"][..], re(FRAC_1_SQRT_2 * s)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn beam_splitter_is_self_inverse() {
        let bs = beam_splitter();
        let id = Operator::identity(bs.layout().clone());
        assert!(bs.compose(&bs).unwrap().max_abs_diff(&id).unwrap() < 1e-15);
    }

    #[test]
    fn half_plate_turns_vertical_to_horizontal() {
        let v = linear_polarization("pol", 0.0);
        let out = v.apply(&wave_plate(PlateKind::Half, FRAC_PI_2)).unwrap();
        assert!((out.amplitude(&["H"]).unwrap().norm() - 1.0).abs() < 1e-15);
        let id = Operator::identity(pol_layout());
        assert!(wave_plate(PlateKind::Half, 0.0).max_abs_diff(&id).unwrap() < 1e-15);
    }

    #[test]
    fn quarter_plate_double_pass_acts_as_ninety_degree_turn() {
        let q = wave_plate(PlateKind::Quarter, FRAC_PI_4);
        let qq = q.compose(&q).unwrap();
        let v = linear_polarization("pol", 0.0);
        let a = v.apply(&qq).unwrap();
        let b = v.apply(&wave_plate(PlateKind::Half, FRAC_PI_2)).unwrap();
        assert!((crate::hilbert::fidelity(&a, &b).unwrap() - 1.0).abs() < 1e-14);
        assert!(q.is_unitary(1e-14));
    }

    #[test]
    fn polarizer_at_45_matches_half_sum_projector() {
        let p = polarizer(FRAC_PI_4);
        let expected = real_matrix(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(crate::hilbert::max_abs_diff(p.matrix(), &expected) < 1e-15);
        let up = linear_polarization("pol", 0.0);
        let proj = project(&up, &p, &["pol"]).unwrap();
        assert!((proj.survival() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_single_slit() {
        let cfg = ScreenConfig {
            a: 1e-300,
            kappa: 0.0,
            center_phase: 0.0,
            ..ScreenConfig::default()
        };
        for x in [-3.0, 0.0, 1.7] {
            let fu = screen_amplitude(&cfg, Slit::Upper, x);
            let fd = screen_amplitude(&cfg, Slit::Lower, x);
            assert!((fu - fd).norm() < 1e-15);
            assert!(fu.im.abs() < 1e-15);
        }
    }

    #[test]
    fn upper_envelope_peaks_at_plus_a() {
        let cfg = ScreenConfig::default();
        let xs = cfg.xs();
        let best = xs
            .iter()
            .copied()
            .max_by(|a, b| {
                screen_amplitude(&cfg, Slit::Upper, *a)
                    .norm()
                    .total_cmp(&screen_amplitude(&cfg, Slit::Upper, *b).norm())
            })
            .unwrap();
        assert!((best - cfg.a).abs() < cfg.spacing());
    }

    #[test]
    fn marked_and_unmarked_visibility() {
        let cfg = ScreenConfig::default();
        let free = intensity(&two_path(None), "path", &cfg).unwrap();
        assert!((free.visibility - 1.0).abs() < 1e-9);
        let marked = intensity(&two_path(Some(FRAC_PI_2)), "path", &cfg).unwrap();
        assert!(marked.visibility < 0.01);
        let half = intensity(&two_path(Some(FRAC_PI_4)), "path", &cfg).unwrap();
        assert!((half.visibility - FRAC_1_SQRT_2).abs() < 0.01);
        let sum: f64 = half.intensity.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_pattern_has_zero_visibility() {
        let p = ScreenPattern::from_samples(vec![0.0, 1.0, 2.0], vec![1.0; 3], 1.0, None).unwrap();
        assert_eq!(p.visibility, 0.0);
        assert_eq!(michelson_visibility(&[0.0, 2.0, 0.0]), 1.0);
        assert_eq!(michelson_visibility(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn coherence_tracks_marker_overlap() {
        for theta in [0.0, 0.3, 1.1, FRAC_PI_2] {
            let c = path_coherence(&two_path(Some(theta)), "path").unwrap();
            assert!((c - theta.cos().abs()).abs() < 1e-12);
        }
        // a product with an extra environment keeps coherence
        let env = linear_polarization("env", 0.4);
        let s = tensor(&two_path(None), &env).unwrap();
        assert!((path_coherence(&s, "path").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_screen_rejected() {
        let cfg = ScreenConfig {
            points: 2,
            ..ScreenConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ScreenConfig {
            x_min: 1.0,
            x_max: 1.0,
            ..ScreenConfig::default()
        };
        assert!(intensity(&two_path(None), "path", &cfg).is_err());
    }
}
