//! Continuous evolution with observers inside the state. Detection
//! probabilities are squared coefficients of the observer's "detected" basis
//! states; densities come from differentiating them, and conditioning on "no
//! detection yet" is renormalization over the remaining mass.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::catalog::{cat_layout, cat_unitary, decay_layout, decay_unitary};
use crate::error::{Error, Result};
use crate::hilbert::{lift, project, re, Operator, StateVector, Subsystem, SystemLayout};

pub const DEFAULT_STEP: f64 = 1e-4;

/// Normalization tolerance checked on sampled times.
pub const NORM_TOL: f64 = 1e-9;

type AmplitudeFn = Arc<dyn Fn(f64) -> StateVector + Send + Sync>;

/// Which closed forms apply; `Custom` states only get the numeric engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Decay { lambda: f64 },
    Cat,
    PassiveZeno { total: f64 },
    Custom,
}

#[derive(Clone)]
pub struct EvolvingState {
    layout: SystemLayout,
    amplitude_fn: AmplitudeFn,
    observer: String,
    /// Observer states meaning "something was detected"; their total mass is
    /// what conditioning on "nothing yet" removes.
    detected: Vec<String>,
    /// The detection event whose CDF is reported (a subset of `detected`).
    event: Vec<String>,
    start: f64,
    end: f64,
    scenario: Scenario,
}

impl fmt::Debug for EvolvingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvolvingState")
            .field("layout", &self.layout.to_string())
            .field("observer", &self.observer)
            .field("detected", &self.detected)
            .field("event", &self.event)
            .field("domain", &(self.start, self.end))
            .field("scenario", &self.scenario)
            .finish()
    }
}

impl EvolvingState {
    /// `end` may be `f64::INFINITY`.
    pub fn new(
        layout: SystemLayout,
        amplitude_fn: impl Fn(f64) -> StateVector + Send + Sync + 'static,
        observer: &str,
        detected: &[&str],
        start: f64,
        end: f64,
    ) -> Result<Self> {
        let sub = layout.subsystem(observer)?;
        for d in detected {
            sub.basis_index(d)?;
        }
        if !(start.is_finite() && end > start) {
            return Err(Error::InvalidParameter(format!("bad domain [{start}, {end}]")));
        }
        let detected: Vec<String> = detected.iter().map(|s| s.to_string()).collect();
        Ok(Self {
            layout,
            amplitude_fn: Arc::new(amplitude_fn),
            observer: observer.to_string(),
            event: detected.clone(),
            detected,
            start,
            end,
            scenario: Scenario::Custom,
        })
    }

    /// Restrict the reported event to some of the detected states.
    pub fn with_event(mut self, event: &[&str]) -> Result<Self> {
        for e in event {
            if !self.detected.iter().any(|d| d == e) {
                return Err(Error::UnknownBasisLabel {
                    subsystem: self.observer.clone(),
                    label: e.to_string(),
                });
            }
        }
        self.event = event.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn detected(&self) -> &[String] {
        &self.detected
    }

    pub fn event(&self) -> &[String] {
        &self.event
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < self.start - 1e-15 || t > self.end + 1e-15 {
            return Err(Error::OutsideDomain {
                t,
                start: self.start,
                end: self.end,
            });
        }
        Ok(())
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        self.check_time(t)?;
        Ok((self.amplitude_fn)(t))
    }

    fn mass(&self, labels: &[String], t: f64) -> Result<f64> {
        let s = self.state_at(t)?;
        let pos = self.layout.position(&self.observer)?;
        let sub = self.layout.subsystem(&self.observer)?;
        let wanted: Vec<usize> = labels
            .iter()
            .map(|l| sub.basis_index(l))
            .collect::<Result<_>>()?;
        Ok(s.amplitudes()
            .iter()
            .enumerate()
            .filter(|(i, _)| wanted.contains(&self.layout.digits(*i)[pos]))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Probability that anything in `detected` has happened by `t`.
    pub fn detected_mass(&self, t: f64) -> Result<f64> {
        self.mass(&self.detected, t)
    }

    /// Largest |‖ψ(t)‖ − 1| over `points` evenly spaced times (a finite window
    /// is used for an unbounded domain).
    pub fn normalization_deviation(&self, points: usize, horizon: f64) -> Result<f64> {
        let end = if self.end.is_finite() { self.end } else { self.start + horizon };
        let mut worst: f64 = 0.0;
        for k in 0..points {
            let t = self.start + (end - self.start) * k as f64 / (points.max(2) - 1) as f64;
            worst = worst.max((self.state_at(t)?.norm() - 1.0).abs());
        }
        Ok(worst)
    }
}

/// Atom ⊗ Bob: √(e^{−λt})|U⟩|☹⟩ + √(1−e^{−λt})|Th⟩|☺⟩ on [0, ∞).
pub fn decay_state(lambda: f64) -> Result<EvolvingState> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay rate {lambda} must be positive")));
    }
    let layout = decay_layout();
    let initial = StateVector::basis(layout.clone(), &["U", "frown"])?;
    let mut s = EvolvingState::new(
        layout,
        move |t| initial.apply(&decay_unitary(lambda, t)).expect("same layout"),
        "bob",
        &["smile"],
        0.0,
        f64::INFINITY,
    )?;
    s.scenario = Scenario::Decay { lambda };
    Ok(s)
}

/// Cat ⊗ Alice under the box-opening evolution from (|alive⟩+|dead⟩)|neutral⟩/√2
/// on [0, π/2]. Both ☺ (blue photon) and ☹ (red) count as detections; the
/// reported event is ☺.
pub fn cat_state() -> Result<EvolvingState> {
    let layout = cat_layout();
    let h = re(FRAC_1_SQRT_2);
    let initial = StateVector::from_terms(
        layout.clone(),
        &[(&["alive", "neutral"][..], h), (&["dead", "neutral"][..], h)],
    )?;
    let mut s = EvolvingState::new(
        layout,
        move |t| initial.apply(&cat_unitary(t)).expect("same layout"),
        "alice",
        &["smile", "frown"],
        0.0,
        FRAC_PI_2,
    )?
    .with_event(&["smile"])?;
    s.scenario = Scenario::Cat;
    Ok(s)
}

/// Path ⊗ eye: √(½(1−t/T))|u⟩|0⟩ + √(½ t/T)|u⟩|1⟩ + √½|d⟩|0⟩ on [0, T].
pub fn passive_zeno_state(total: f64) -> Result<EvolvingState> {
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter(format!("duration {total} must be positive")));
    }
    let layout = SystemLayout::new(vec![
        Subsystem::with_basis("path", &["u", "d"]),
        Subsystem::with_basis("eye", &["0", "1"]),
    ])?;
    let l = layout.clone();
    let mut s = EvolvingState::new(
        layout,
        move |t| {
            let f = (t / total).clamp(0.0, 1.0);
            StateVector::from_terms(
                l.clone(),
                &[
                    (&["u", "0"][..], re((0.5 * (1.0 - f)).sqrt())),
                    (&["u", "1"][..], re((0.5 * f).sqrt())),
                    (&["d", "0"][..], re(FRAC_1_SQRT_2)),
                ],
            )
            .expect("valid labels")
        },
        "eye",
        &["1"],
        0.0,
        total,
    )?;
    s.scenario = Scenario::PassiveZeno { total };
    Ok(s)
}

/// Σ over the event's observer states of |amplitude(t)|².
pub fn detection_cdf(state: &EvolvingState, t: f64) -> Result<f64> {
    Ok(state.mass(&state.event, t)?.clamp(0.0, 1.0))
}

/// d/dt of the CDF: central difference, or a Richardson-extrapolated one-sided
/// difference when `t ± h` leaves the domain.
pub fn detection_density(state: &EvolvingState, t: f64, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!("step {h} must be positive")));
    }
    state.check_time(t)?;
    let (a, b) = state.domain();
    let f = |x: f64| detection_cdf(state, x);
    if t - h >= a && t + h <= b {
        return Ok((f(t + h)? - f(t - h)?) / (2.0 * h));
    }
    // One-sided: D(h) = (F(t±h) − F(t))/±h, then 2D(h/2) − D(h).
    let dir = if t + h <= b {
        1.0
    } else if t - h >= a {
        -1.0
    } else {
        return Err(Error::OutsideDomain { t, start: a, end: b });
    };
    let ft = f(t)?;
    let d = |step: f64| -> Result<f64> { Ok((f(t + dir * step)? - ft) / (dir * step)) };
    Ok(2.0 * d(h / 2.0)? - d(h)?)
}

/// density(t) / (1 − detected mass at t0).
pub fn conditional_density(state: &EvolvingState, t: f64, t0: f64) -> Result<f64> {
    state.check_time(t0)?;
    if t < t0 {
        return Err(Error::InvalidParameter(format!("t = {t} precedes t0 = {t0}")));
    }
    let remaining = 1.0 - state.detected_mass(t0)?;
    if remaining <= 1e-12 {
        return Err(Error::NothingToCondition { cdf: 1.0 - remaining });
    }
    Ok(detection_density(state, t, DEFAULT_STEP)? / remaining)
}

/// Probability of the event in (t0, t0+Δt] given nothing was detected by t0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NextInterval {
    /// (CDF(t0+Δt) − CDF(t0)) / (1 − detected mass at t0).
    pub exact: f64,
    /// conditional_density(t0, t0)·Δt.
    pub first_order: f64,
    /// Cat only: Δt²/(2(π/2 − t0)²).
    pub asymptotic: Option<f64>,
}

pub fn next_interval_probability(state: &EvolvingState, t0: f64, dt: f64) -> Result<NextInterval> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidParameter(format!("interval {dt} must be positive")));
    }
    let remaining = 1.0 - state.detected_mass(t0)?;
    if remaining <= 1e-12 {
        return Err(Error::NothingToCondition { cdf: 1.0 - remaining });
    }
    let exact = (detection_cdf(state, t0 + dt)? - detection_cdf(state, t0)?) / remaining;
    let first_order = conditional_density(state, t0, t0)? * dt;
    let asymptotic = match state.scenario {
        Scenario::Cat => Some(dt * dt / (2.0 * (FRAC_PI_2 - t0).powi(2))),
        _ => None,
    };
    Ok(NextInterval {
        exact,
        first_order,
        asymptotic,
    })
}

/// t ↦ conditional density after t0, with its closed form when one is known.
#[derive(Clone)]
pub struct ConditionalDensity {
    pub t0: f64,
    pub density_fn: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub closed_form: Option<String>,
    end: f64,
}

impl fmt::Debug for ConditionalDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConditionalDensity")
            .field("t0", &self.t0)
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

impl ConditionalDensity {
    pub fn at(&self, t: f64) -> f64 {
        (self.density_fn)(t)
    }

    /// ∫ from t0 to the end of the domain (double-exponential quadrature).
    pub fn integral(&self) -> f64 {
        let f = self.density_fn.clone();
        quadrature::double_exponential::integrate(|t| f(t), self.t0, self.end, 1e-12).integral
    }
}

/// The numeric conditional density as a function of t. Unbounded domains are
/// cut where the undetected mass drops below 1e−15.
pub fn conditional(state: &EvolvingState, t0: f64) -> Result<ConditionalDensity> {
    conditional_density(state, t0, t0)?;
    let (_, mut end) = state.domain();
    if !end.is_finite() {
        let mut span = 1.0;
        while 1.0 - state.detected_mass(t0 + span)? > 1e-15 && span < 1e6 {
            span *= 2.0;
        }
        end = t0 + span;
    }
    let s = state.clone();
    let closed_form = match state.scenario {
        Scenario::Decay { .. } => Some("lambda*exp(-lambda*(t-t0))"),
        Scenario::Cat => Some("sin(2t)/(1+cos(2t0))"),
        Scenario::PassiveZeno { .. } => Some("1/(2T-t0)"),
        Scenario::Custom => None,
    };
    Ok(ConditionalDensity {
        t0,
        density_fn: Arc::new(move |t| conditional_density(&s, t, t0).unwrap_or(0.0)),
        closed_form: closed_form.map(str::to_string),
        end,
    })
}

/// Probability, given nothing detected by t0, that the event happens at all
/// before the end of the domain. The conditional density integrates to this.
pub fn eventual_probability(state: &EvolvingState, t0: f64) -> Result<f64> {
    let (_, end) = state.domain();
    let last = if end.is_finite() { detection_cdf(state, end)? } else { 1.0 };
    let remaining = 1.0 - state.detected_mass(t0)?;
    if remaining <= 1e-12 {
        return Err(Error::NothingToCondition { cdf: 1.0 - remaining });
    }
    Ok((last - detection_cdf(state, t0)?) / remaining)
}

/// Survival of |alive⟩|neutral⟩ under the box-opening evolution with `n`
/// projective checks spread over `total_time`.
pub fn zeno_survival(n: usize, total_time: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("at least one measurement".into()));
    }
    let layout = cat_layout();
    let alive = StateVector::basis(layout.clone(), &["alive", "neutral"])?;
    let check = Operator::projector_onto(&alive)?;
    let step = cat_unitary(total_time / n as f64);
    let mut survival = 1.0;
    let mut s = alive;
    for _ in 0..n {
        let p = project(&s.apply(&step)?, &check, &layout.labels())?;
        survival *= p.survival();
        match p.into_state() {
            Some(next) => s = next,
            None => return Ok(0.0),
        }
    }
    Ok(survival)
}

/// A projector on some labels of the shared layout.
#[derive(Debug, Clone)]
pub struct LocalProjector {
    pub operator: Operator,
}

impl LocalProjector {
    pub fn new(operator: Operator) -> Result<Self> {
        if !operator.is_projector(crate::hilbert::STRUCTURE_TOL) {
            return Err(Error::NotProjector {
                deviation: operator.projector_deviation(),
            });
        }
        Ok(Self { operator })
    }

    fn labels(&self) -> Vec<&str> {
        self.operator.layout().labels()
    }
}

/// exp(−i t Σ_k E_k) with each E_k a scaled identity on subsystem k.
fn evolution(layout: &SystemLayout, energies: &[(String, f64)], t: f64) -> Result<Operator> {
    let mut u = Operator::identity(layout.clone());
    for (label, e) in energies {
        let sub = SystemLayout::single(layout.subsystem(label)?.clone())?;
        let local = Operator::identity(sub).scale(Complex64::from_polar(1.0, -e * t));
        u = lift(&local, &[label], layout)?.compose(&u)?;
    }
    Ok(u)
}

/// P(A = a at t_a | B = b at t_b): the projectors are applied in time order
/// with free evolution in between.
pub fn conditional_probability(
    initial: &StateVector,
    energies: &[(String, f64)],
    proj_a: &LocalProjector,
    proj_b: &LocalProjector,
    t_a: f64,
    t_b: f64,
) -> Result<f64> {
    let layout = initial.layout();
    let la = proj_a.labels();
    let lb = proj_b.labels();
    if let Some(shared) = la.iter().find(|l| lb.contains(l)) {
        return Err(Error::OverlappingSupports(shared.to_string()));
    }
    let pa = lift(&proj_a.operator, &la, layout)?;
    let pb = lift(&proj_b.operator, &lb, layout)?;
    let mut events = [(t_a, &pa), (t_b, &pb)];
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut now = 0.0f64.min(events[0].0);
    let mut s = initial.clone();
    for (t, p) in events {
        s = s.apply(&evolution(layout, energies, t - now)?)?.apply(p)?;
        now = t;
    }
    let joint = s.norm_sqr();
    let b_only = initial
        .apply(&evolution(layout, energies, t_b)?)?
        .apply(&pb)?
        .norm_sqr();
    if b_only <= crate::hilbert::NULL_SURVIVAL {
        return Err(Error::NothingToCondition { cdf: 1.0 - b_only });
    }
    Ok(joint / b_only)
}

/// |P(A|B) at (t1, t2) − P(A|B) at (t3, t4)|.
pub fn time_ordering_invariance(
    initial: &StateVector,
    energies: &[(String, f64)],
    proj_a: &LocalProjector,
    proj_b: &LocalProjector,
    first: (f64, f64),
    second: (f64, f64),
) -> Result<f64> {
    let p1 = conditional_probability(initial, energies, proj_a, proj_b, first.0, first.1)?;
    let p2 = conditional_probability(initial, energies, proj_a, proj_b, second.0, second.1)?;
    Ok((p1 - p2).abs())
}

/// Seeded sweep: random two-qubit states, random rank-one projectors on each
/// side, random energies and two random time pairs per case. Returns the
/// largest deviation.
pub fn time_ordering_sweep(seed: u64, cases: usize) -> Result<f64> {
    use crate::random::{random_state, stream};
    use rand::Rng;
    let layout = SystemLayout::qubits(&["A", "B"])?;
    let la = layout.select(&["A"])?;
    let lb = layout.select(&["B"])?;
    let mut worst: f64 = 0.0;
    for k in 0..cases as u64 {
        let mut rng = stream(seed, k);
        let psi = random_state(layout.clone(), &mut rng)?;
        let pa = LocalProjector::new(Operator::projector_onto(&random_state(la.clone(), &mut rng)?)?)?;
        let pb = LocalProjector::new(Operator::projector_onto(&random_state(lb.clone(), &mut rng)?)?)?;
        let energies = vec![
            ("A".to_string(), rng.random_range(-2.0..2.0)),
            ("B".to_string(), rng.random_range(-2.0..2.0)),
        ];
        let t: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..10.0)).collect();
        let d = time_ordering_invariance(&psi, &energies, &pa, &pb, (t[0], t[1]), (t[2], t[3]))?;
        worst = worst.max(d);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_states() {
        let d = decay_state(1.0).unwrap();
        let s0 = d.state_at(0.0).unwrap();
        assert!((s0.amplitude(&["U", "frown"]).unwrap() - re(1.0)).norm() < 1e-15);
        let cat = cat_state().unwrap();
        let end = cat.state_at(FRAC_PI_2).unwrap();
        assert!((end.amplitude(&["dead", "smile"]).unwrap().norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((end.amplitude(&["alive", "frown"]).unwrap().norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(decay_state(0.0).is_err());
        assert!(passive_zeno_state(-1.0).is_err());
    }

    #[test]
    fn closed_form_cdfs_and_densities() {
        let d = decay_state(1.0).unwrap();
        assert!((detection_cdf(&d, 0.7).unwrap() - (1.0 - (-0.7f64).exp())).abs() < 1e-14);
        assert!((detection_density(&d, 1.0, 1e-4).unwrap() - (-1.0f64).exp()).abs() < 1e-6);
        let c = cat_state().unwrap();
        assert!((detection_cdf(&c, 0.4).unwrap() - 0.5 * 0.4f64.sin().powi(2)).abs() < 1e-14);
        let q = std::f64::consts::FRAC_PI_4;
        assert!((detection_density(&c, q, 1e-4).unwrap() - 0.5).abs() < 1e-6);
        let z = passive_zeno_state(3.0).unwrap();
        assert!((detection_density(&z, 1.1, 1e-4).unwrap() - 1.0 / 6.0).abs() < 1e-8);
    }

    #[test]
    fn boundary_density_uses_one_sided_stencil() {
        let d = decay_state(2.0).unwrap();
        assert!((detection_density(&d, 0.0, 1e-4).unwrap() - 2.0).abs() < 1e-6);
        let c = cat_state().unwrap();
        assert!(detection_density(&c, FRAC_PI_2, 1e-4).unwrap().abs() < 1e-6);
    }

    #[test]
    fn conditionals() {
        let d = decay_state(1.5).unwrap();
        let v = conditional_density(&d, 2.0, 0.5).unwrap();
        assert!((v - 1.5 * (-1.5f64 * 1.5).exp()).abs() < 1e-6);
        let c = cat_state().unwrap();
        let v = conditional_density(&c, 1.0, 0.3).unwrap();
        assert!((v - 2.0f64.sin() / (1.0 + 0.6f64.cos())).abs() < 1e-6);
        let z = passive_zeno_state(2.0).unwrap();
        let v = conditional_density(&z, 1.5, 1.0).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-8);
        assert!(matches!(
            conditional_density(&c, FRAC_PI_2, FRAC_PI_2),
            Err(Error::NothingToCondition { .. })
        ));
    }

    #[test]
    fn zeno_law() {
        assert!(zeno_survival(1, FRAC_PI_2).unwrap() < 1e-15);
        let s10 = zeno_survival(10, FRAC_PI_2).unwrap();
        assert!((s10 - (FRAC_PI_2 / 10.0).cos().powi(20)).abs() < 1e-12);
        assert!((s10 - 0.781).abs() < 1e-3);
    }

    #[test]
    fn passive_zeno_end_state() {
        let z = passive_zeno_state(1.0).unwrap();
        let s = z.state_at(1.0).unwrap();
        let eye = Operator::projector_onto(
            &StateVector::basis(SystemLayout::single(Subsystem::with_basis("eye", &["0", "1"])).unwrap(), &["0"])
                .unwrap(),
        )
        .unwrap();
        let kept = project(&s, &eye, &["eye"]).unwrap().into_state().unwrap();
        let d0 = StateVector::basis(z.layout().clone(), &["d", "0"]).unwrap();
        assert!(kept.max_abs_diff(&d0).unwrap() < 1e-12);
    }
}
