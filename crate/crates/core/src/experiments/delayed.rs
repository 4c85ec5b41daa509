use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::ExperimentReport;
use crate::catalog::hadamard_on;
use crate::error::{Error, Result};
use crate::hilbert::{
    measure_labeled, measure_subsystem, re, Subsystem, StateVector, SystemLayout,
};
use crate::optics::{path_coherence, screen_amplitude, ScreenConfig, ScreenPattern, Slit};
use crate::random::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeWillChoice {
    /// Photon 2 goes straight to D3/D4: which-path information is kept.
    Push,
    /// Photon 2 meets a beam splitter before D1/D2: the information is erased.
    NotPush,
}

impl FreeWillChoice {
    pub fn name(&self) -> &'static str {
        match self {
            FreeWillChoice::Push => "push",
            FreeWillChoice::NotPush => "not_push",
        }
    }

    fn other(&self) -> Self {
        match self {
            FreeWillChoice::Push => FreeWillChoice::NotPush,
            FreeWillChoice::NotPush => FreeWillChoice::Push,
        }
    }
}

/// Photon-1 screen patterns conditioned on each photon-2 detector. The
/// conditionals share one normalization so they add up pointwise to `total`;
/// each carries its detector probability as `survival`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeWillPatterns {
    /// (detector, probability, path coherence of photon 1, pattern)
    pub conditionals: Vec<(String, f64, f64, ScreenPattern)>,
    pub total: ScreenPattern,
}

fn photon(label: &str) -> Subsystem {
    Subsystem::with_basis(label, &["UP", "DOWN"])
}

fn bell_pair() -> Result<StateVector> {
    let layout = SystemLayout::new(vec![photon("p1"), photon("p2")])?;
    StateVector::from_terms(
        layout,
        &[(&["UP", "UP"][..], re(1.0)), (&["DOWN", "DOWN"][..], re(1.0))],
    )?
    .normalized()
}

pub fn free_will_patterns(choice: FreeWillChoice, config: &ScreenConfig) -> Result<FreeWillPatterns> {
    let mut state = bell_pair()?;
    let detectors: [(&str, &str); 2] = match choice {
        FreeWillChoice::Push => [("UP", "D4"), ("DOWN", "D3")],
        FreeWillChoice::NotPush => {
            state = state.apply_on(&hadamard_on("p2", "UP", "DOWN"), &["p2"])?;
            [("UP", "D1"), ("DOWN", "D2")]
        }
    };
    // One normalization for every conditional (that of the unconditioned
    // which-path screen), so conditionals add up pointwise to the full screen.
    let xs = config.xs();
    let amps: Vec<(Complex64, Complex64)> = xs
        .iter()
        .map(|&x| (screen_amplitude(config, Slit::Upper, x), screen_amplitude(config, Slit::Lower, x)))
        .collect();
    let norm: f64 = amps.iter().map(|(u, d)| 0.5 * (u.norm_sqr() + d.norm_sqr())).sum();
    let mut conditionals = Vec::new();
    for outcome in measure_subsystem(&state, "p2")? {
        let name = detectors
            .iter()
            .find(|(b, _)| *b == outcome.outcome_label)
            .map(|(_, d)| d.to_string())
            .unwrap_or(outcome.outcome_label.clone());
        let mut raw = vec![0.0; xs.len()];
        if let Some(post) = &outcome.post_state {
            for m in ["UP", "DOWN"] {
                let cu = post.amplitude(&["UP", m])?;
                let cd = post.amplitude(&["DOWN", m])?;
                for (r, (fu, fd)) in raw.iter_mut().zip(&amps) {
                    *r += outcome.probability * (cu * fu + cd * fd).norm_sqr() / norm;
                }
            }
        }
        let mass: f64 = raw.iter().sum();
        let mut pattern = ScreenPattern::from_samples(xs.clone(), raw, mass, Some(config.window()))?;
        pattern.survival = outcome.probability;
        let coherence = match &outcome.post_state {
            Some(post) => path_coherence(post, "p1")?,
            None => 0.0,
        };
        conditionals.push((name, outcome.probability, coherence, pattern));
    }
    conditionals.sort_by(|a, b| a.0.cmp(&b.0));
    let terms: Vec<(f64, &ScreenPattern)> =
        conditionals.iter().map(|(_, _, _, p)| (1.0, p)).collect();
    let total = ScreenPattern::combine(&terms, Some(config.window()))?;
    Ok(FreeWillPatterns {
        conditionals,
        total,
    })
}

/// Pearson correlation of two sampled curves.
fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

pub fn run_free_will(choice: FreeWillChoice, config: &ScreenConfig) -> Result<ExperimentReport> {
    let mine = free_will_patterns(choice, config)?;
    let other = free_will_patterns(choice.other(), config)?;
    let mut report = ExperimentReport::new("free_will");
    report.setting("choice", choice.name());
    for (name, p, coherence, pattern) in &mine.conditionals {
        report.scalar(format!("p_{name}"), *p)?;
        report.scalar(format!("coherence_{name}"), *coherence)?;
        report.scalar(format!("visibility_{name}"), pattern.visibility)?;
    }
    let gap = mine.total.max_abs_diff(&other.total);
    report.scalar("total_visibility", mine.total.visibility)?;
    report.scalar("no_signalling_gap", gap)?;
    let c = &mine.conditionals;
    // Over the central window the fringes, not the shared envelope, dominate.
    let central = |p: &ScreenPattern| -> Vec<f64> {
        p.xs.iter()
            .zip(&p.intensity)
            .filter(|(x, _)| x.abs() <= config.window() + 1e-12)
            .map(|(_, v)| *v)
            .collect()
    };
    let corr = pearson(&central(&c[0].3), &central(&c[1].3));
    report.scalar("conditional_correlation", corr)?;
    let balanced = c.iter().all(|(_, p, _, _)| (p - 0.5).abs() <= 1e-12);
    report.verdict("detectors_balanced", balanced);
    report.verdict("screen_independent_of_choice", gap <= 1e-10);
    match choice {
        FreeWillChoice::Push => {
            report.verdict(
                "conditionals_do_not_interfere",
                c.iter().all(|(_, _, k, _)| *k <= 1e-12),
            );
        }
        FreeWillChoice::NotPush => {
            report.verdict(
                "conditionals_interfere",
                c.iter().all(|(_, _, k, _)| (k - 1.0).abs() <= 1e-12),
            );
            report.verdict("fringes_complementary", corr < 0.0);
        }
    }
    for (name, _, _, pattern) in mine.conditionals {
        report.pattern(name, pattern)?;
    }
    report.pattern("total", mine.total)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VictorChoice {
    /// Project photons 2 and 3 onto the Bell basis.
    Bell,
    /// Measure photons 2 and 3 separately in z.
    Separable,
}

impl VictorChoice {
    pub fn name(&self) -> &'static str {
        match self {
            VictorChoice::Bell => "bell",
            VictorChoice::Separable => "separable",
        }
    }
}

/// Alice–Bob statistics conditioned on one Victor outcome. Correlations are
/// E[s_A s_B] with outcomes mapped to ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct SwappingOutcome {
    pub victor: String,
    pub probability: f64,
    pub corr_z: f64,
    pub corr_x: f64,
    pub sampled_corr_z: f64,
    pub sampled_corr_x: f64,
    /// P(Alice reads 0) in z and x, weighted by this outcome's probability.
    pub alice_zero_z: f64,
    pub alice_zero_x: f64,
}

fn pair_layout(a: &str, b: &str) -> Result<SystemLayout> {
    SystemLayout::qubits(&[a, b])
}

fn victor_basis(choice: VictorChoice) -> Result<Vec<(String, StateVector)>> {
    let l = pair_layout("p2", "p3")?;
    let h = FRAC_1_SQRT_2;
    type Terms<'a> = [(&'a [&'a str], f64); 2];
    let terms: Vec<(&str, Terms)> = match choice {
        VictorChoice::Bell => vec![
            ("phi_plus", [(&["0", "0"], h), (&["1", "1"], h)]),
            ("phi_minus", [(&["0", "0"], h), (&["1", "1"], -h)]),
            ("psi_plus", [(&["0", "1"], h), (&["1", "0"], h)]),
            ("psi_minus", [(&["0", "1"], h), (&["1", "0"], -h)]),
        ],
        VictorChoice::Separable => vec![
            ("zz00", [(&["0", "0"], 1.0), (&["0", "1"], 0.0)]),
            ("zz01", [(&["0", "1"], 1.0), (&["0", "0"], 0.0)]),
            ("zz10", [(&["1", "0"], 1.0), (&["0", "0"], 0.0)]),
            ("zz11", [(&["1", "1"], 1.0), (&["0", "0"], 0.0)]),
        ],
    };
    terms
        .into_iter()
        .map(|(name, t)| {
            let t: Vec<(&[&str], _)> = t.iter().map(|(k, v)| (*k, re(*v))).collect();
            Ok((name.to_string(), StateVector::from_terms(l.clone(), &t)?))
        })
        .collect()
}

/// Joint distribution over (a, b) ∈ {00, 01, 10, 11} for photons 1 and 4.
fn alice_bob_distribution(state: &StateVector, x_basis: bool) -> Result<[f64; 4]> {
    let mut s = state.clone();
    if x_basis {
        let h = hadamard_on("q", "0", "1");
        for label in ["p1", "p4"] {
            let hl = h.relabel(SystemLayout::qubits(&[label])?)?;
            s = s.apply_on(&hl, &[label])?;
        }
    }
    let mut dist = [0.0; 4];
    for (i, name) in ["0", "1"].iter().enumerate() {
        for (j, other) in ["0", "1"].iter().enumerate() {
            let mut p = 0.0;
            for m in ["0", "1"] {
                for n in ["0", "1"] {
                    p += s.amplitude(&[*name, m, n, *other])?.norm_sqr();
                }
            }
            dist[2 * i + j] = p;
        }
    }
    Ok(dist)
}

fn correlation(dist: &[f64; 4]) -> f64 {
    dist[0] - dist[1] - dist[2] + dist[3]
}

fn sampled_correlation(dist: &[f64; 4], shots: usize, seed: u64, stream_id: u64) -> Result<f64> {
    let w = WeightedIndex::new(dist.iter().map(|p| p.max(0.0)))
        .map_err(|e| Error::InvalidParameter(format!("outcome weights: {e}")))?;
    let mut rng = stream(seed, stream_id);
    let signs = [1.0, -1.0, -1.0, 1.0];
    let sum: f64 = (0..shots).map(|_| signs[w.sample(&mut rng)]).sum();
    Ok(sum / shots as f64)
}

pub fn swapping_outcomes(choice: VictorChoice, seed: u64, shots: usize) -> Result<Vec<SwappingOutcome>> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let layout = SystemLayout::qubits(&["p1", "p2", "p3", "p4"])?;
    let initial = StateVector::from_terms(
        layout,
        &[
            (&["0", "0", "0", "0"][..], re(0.5)),
            (&["0", "0", "1", "1"][..], re(0.5)),
            (&["1", "1", "0", "0"][..], re(0.5)),
            (&["1", "1", "1", "1"][..], re(0.5)),
        ],
    )?;
    let mut out = Vec::new();
    for (v, result) in measure_labeled(&initial, &["p2", "p3"], &victor_basis(choice)?)?
        .into_iter()
        .enumerate()
    {
        let post = result.post_state.ok_or_else(|| {
            Error::InvalidParameter(format!("victor outcome {} never occurs", result.outcome_label))
        })?;
        let dz = alice_bob_distribution(&post, false)?;
        let dx = alice_bob_distribution(&post, true)?;
        let v = v as u64;
        out.push(SwappingOutcome {
            victor: result.outcome_label,
            probability: result.probability,
            corr_z: correlation(&dz),
            corr_x: correlation(&dx),
            sampled_corr_z: sampled_correlation(&dz, shots, seed, v * 2)?,
            sampled_corr_x: sampled_correlation(&dx, shots, seed, v * 2 + 1)?,
            alice_zero_z: result.probability * (dz[0] + dz[1]),
            alice_zero_x: result.probability * (dx[0] + dx[1]),
        });
    }
    Ok(out)
}

pub fn run_entanglement_swapping(
    choice: VictorChoice,
    seed: u64,
    shots: usize,
) -> Result<ExperimentReport> {
    let outcomes = swapping_outcomes(choice, seed, shots)?;
    let other = swapping_outcomes(
        match choice {
            VictorChoice::Bell => VictorChoice::Separable,
            VictorChoice::Separable => VictorChoice::Bell,
        },
        seed,
        shots,
    )?;
    let bound = 3.0 / (shots as f64).sqrt();
    let mut report = ExperimentReport::new("entanglement_swapping");
    report
        .setting("victor", choice.name())
        .setting("seed", seed)
        .setting("shots", shots);
    let mut x_ok = true;
    let mut sampled_ok = true;
    for o in &outcomes {
        report.scalar(format!("p_{}", o.victor), o.probability)?;
        report.scalar(format!("corr_z_{}", o.victor), o.corr_z)?;
        report.scalar(format!("corr_x_{}", o.victor), o.corr_x)?;
        report.scalar(format!("sampled_corr_z_{}", o.victor), o.sampled_corr_z)?;
        report.scalar(format!("sampled_corr_x_{}", o.victor), o.sampled_corr_x)?;
        x_ok &= match choice {
            VictorChoice::Bell => (o.corr_x.abs() - 1.0).abs() <= 1e-12,
            VictorChoice::Separable => o.corr_x.abs() <= 1e-12,
        };
        sampled_ok &= (o.sampled_corr_x - o.corr_x).abs() <= bound
            && (o.sampled_corr_z - o.corr_z).abs() <= bound;
    }
    let marginal = |os: &[SwappingOutcome]| -> (f64, f64) {
        (
            os.iter().map(|o| o.alice_zero_z).sum(),
            os.iter().map(|o| o.alice_zero_x).sum(),
        )
    };
    let (mz, mx) = marginal(&outcomes);
    let (oz, ox) = marginal(&other);
    let gap = (mz - oz).abs().max((mx - ox).abs());
    report.scalar("alice_zero_z", mz)?;
    report.scalar("alice_zero_x", mx)?;
    report.scalar("alice_marginal_gap", gap)?;
    report.verdict(
        match choice {
            VictorChoice::Bell => "x_correlation_perfect",
            VictorChoice::Separable => "x_correlation_absent",
        },
        x_ok,
    );
    report.verdict("sampled_within_3_over_sqrt_shots", sampled_ok);
    report.verdict("alice_marginal_independent_of_victor", gap <= 1e-12);
    Ok(report)
}
