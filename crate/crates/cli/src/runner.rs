use dchoice_core::experiments::{
    brainwash_roundtrip, run_double_slit_eraser, run_entanglement_swapping, run_free_will, run_herzog,
    run_wheeler, tradeoff_report, BrainwashVariant, Eraser, ExperimentReport, FreeWillChoice, VictorChoice,
    WheelerChoice,
};
use dchoice_core::hilbert::{re, StateVector, SystemLayout};
use dchoice_core::histories::{two_slit_family, CONSISTENCY_TOL};
use dchoice_core::nocomm::{entangling_control, negative_control, random_sweep};
use dchoice_core::optics::ScreenPattern;
use dchoice_core::temporal::{
    cat_state, conditional, conditional_density, decay_state, detection_cdf, detection_density,
    eventual_probability, next_interval_probability, passive_zeno_state, time_ordering_sweep,
    zeno_survival,
};
use thiserror::Error;

use crate::scenario::Scenario;
use crate::schema::{eraser_angle, schema_for};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    /// The scenario asks for something the model cannot do.
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(dchoice_core::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => EXIT_INVALID,
            RunError::Internal(_) => EXIT_INVARIANT,
        }
    }
}

impl From<dchoice_core::Error> for RunError {
    fn from(e: dchoice_core::Error) -> Self {
        use dchoice_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::OutsideDomain { .. } | E::NothingToCondition { .. } => {
                RunError::Invalid(e.to_string())
            }
            e => RunError::Internal(e),
        }
    }
}

/// Exit code for a finished run: any failed verdict is an invariant violation.
pub fn exit_code(report: &ExperimentReport) -> i32 {
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    }
}

pub fn run(s: &Scenario) -> Result<ExperimentReport, RunError> {
    let cfg = s.screen_config();
    let mut report = match s.experiment.as_str() {
        "wheeler" => {
            let choice = match s.word("choice").as_str() {
                "which_path" => WheelerChoice::WhichPath,
                _ => WheelerChoice::Interference,
            };
            run_wheeler(choice, &cfg)?
        }
        "double_slit_eraser" => {
            let marker = s.value("marker").radians();
            let word = s.word("eraser");
            let eraser = match word.as_str() {
                "none" => Eraser::None,
                "hwp_upper" => Eraser::HwpUpper,
                "hwp_lower" => Eraser::HwpLower,
                "qwp_pair" => Eraser::QwpPair,
                w => Eraser::Polarizer(eraser_angle(w).expect("validated eraser")),
            };
            run_double_slit_eraser(marker, eraser, &cfg)?
        }
        "herzog" => {
            let step = s.value("phase_step").radians().unwrap();
            let span = s.value("phase_span").radians().unwrap();
            if step <= 0.0 || span < 0.0 {
                return Err(RunError::Invalid("phase_step must be positive and phase_span non-negative".into()));
            }
            let n = (span / step + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(RunError::Invalid("phase scan has more than 10^6 points".into()));
            }
            let phases: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
            run_herzog(s.boolean("qwp"), s.boolean("filter"), &phases)?
        }
        "free_will" => {
            let choice = match s.word("choice").as_str() {
                "not_push" => FreeWillChoice::NotPush,
                _ => FreeWillChoice::Push,
            };
            run_free_will(choice, &cfg)?
        }
        "entanglement_swapping" => {
            let victor = match s.word("victor").as_str() {
                "separable" => VictorChoice::Separable,
                _ => VictorChoice::Bell,
            };
            run_entanglement_swapping(victor, s.seed, s.shots)?
        }
        "tradeoff" => tradeoff_report()?,
        "brainwash" => {
            let variant = match s.word("variant").as_str() {
                "alt_unitary" => BrainwashVariant::AltUnitary,
                "beamsplitter_double_pass" => BrainwashVariant::BeamsplitterDoublePass,
                "switching_unit" => BrainwashVariant::SwitchingUnit,
                _ => BrainwashVariant::Inverse,
            };
            brainwash_roundtrip(variant)?
        }
        "nocomm" => run_nocomm(s)?,
        "temporal" => run_temporal(s)?,
        "zeno" => run_zeno(s)?,
        "histories" => run_histories(s)?,
        "time_ordering" => {
            let mut r = ExperimentReport::new("time_ordering");
            let d = time_ordering_sweep(s.seed, s.integer("cases") as usize)?;
            r.scalar("max_deviation", d)?;
            r.verdict("order_irrelevant", d <= 1e-12);
            r
        }
        other => return Err(RunError::Invalid(format!("unknown experiment `{other}`"))),
    };
    record_settings(s, &mut report);
    Ok(report)
}

/// Every schema setting with its effective value, ahead of anything the
/// experiment recorded itself.
fn record_settings(s: &Scenario, report: &mut ExperimentReport) {
    let schema = schema_for(&s.experiment).expect("validated experiment");
    let mut settings: Vec<(String, String)> = Vec::new();
    if schema.uses_seed {
        settings.push(("seed".into(), s.seed.to_string()));
        settings.push(("shots".into(), s.shots.to_string()));
    }
    for f in schema.fields {
        settings.push((f.key.into(), s.value(f.key).to_string()));
    }
    for (k, v) in std::mem::take(&mut report.settings) {
        if !settings.iter().any(|(key, _)| *key == k) {
            settings.push((k, v));
        }
    }
    report.settings = settings;
}

fn run_nocomm(s: &Scenario) -> Result<ExperimentReport, RunError> {
    let tol = s.real("tol");
    let check = random_sweep(s.seed, s.integer("cases") as usize, tol)?;
    let bell = StateVector::from_terms(
        SystemLayout::qubits(&["a", "b"])?,
        &[(&["0", "0"][..], re(std::f64::consts::FRAC_1_SQRT_2)), (&["1", "1"][..], re(std::f64::consts::FRAC_1_SQRT_2))],
    )?;
    let control = negative_control(&bell, &["a"], &entangling_control()?)?;
    let mut r = ExperimentReport::new("nocomm");
    r.scalar("max_deviation", check.max_deviation)?;
    r.scalar("negative_control_deviation", control)?;
    r.verdict("no_communication", check.passed);
    r.verdict("negative_control_detected", control > 0.1);
    Ok(r)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn run_temporal(s: &Scenario) -> Result<ExperimentReport, RunError> {
    let lambda = s.real("lambda");
    let total = s.real("total");
    let (t0, t, dt, h) = (s.real("t0"), s.real("t"), s.real("dt"), s.real("step"));
    if t <= t0 {
        return Err(RunError::Invalid(format!("t = {t} must come after t0 = {t0}")));
    }
    let name = s.word("scenario");
    let (state, density_cf, conditional_cf) = match name.as_str() {
        "cat" => (
            cat_state()?,
            0.5 * (2.0 * t).sin(),
            (2.0 * t).sin() / (1.0 + (2.0 * t0).cos()),
        ),
        "passive_zeno" => (passive_zeno_state(total)?, 1.0 / (2.0 * total), 1.0 / (2.0 * total - t0)),
        _ => (
            decay_state(lambda)?,
            lambda * (-lambda * t).exp(),
            lambda * (-lambda * (t - t0)).exp(),
        ),
    };
    let (start, end) = state.domain();
    if t > end {
        return Err(RunError::Invalid(format!("t = {t} lies beyond the end of the domain ({end})")));
    }
    let horizon = if end.is_finite() { end - start } else { 10.0 / lambda };
    let mut r = ExperimentReport::new("temporal");
    let density = detection_density(&state, t, h)?;
    let cond = conditional_density(&state, t, t0)?;
    let cd = conditional(&state, t0)?;
    let eventual = eventual_probability(&state, t0)?;
    let next = next_interval_probability(&state, t0, dt)?;
    let norm = state.normalization_deviation(1001, horizon)?;
    r.scalar("cdf_t0", detection_cdf(&state, t0)?)?;
    r.scalar("cdf_t", detection_cdf(&state, t)?)?;
    r.scalar("density", density)?;
    r.scalar("density_closed_form", density_cf)?;
    r.scalar("conditional", cond)?;
    r.scalar("conditional_closed_form", conditional_cf)?;
    r.scalar("conditional_integral", cd.integral())?;
    r.scalar("eventual_probability", eventual)?;
    r.scalar("next_exact", next.exact)?;
    r.scalar("next_first_order", next.first_order)?;
    if let Some(a) = next.asymptotic {
        r.scalar("next_asymptotic", a)?;
    }
    r.scalar("normalization_deviation", norm)?;
    r.verdict("density_matches_closed_form", rel(density, density_cf) <= 1e-6);
    r.verdict("conditional_matches_closed_form", rel(cond, conditional_cf) <= 1e-6);
    r.verdict("conditional_integrates_to_eventual", (cd.integral() - eventual).abs() <= 1e-6);
    r.verdict("normalized", norm <= 1e-9);

    let points = s.integer("points") as usize;
    let xs: Vec<f64> = (0..points).map(|k| start + horizon * k as f64 / (points - 1) as f64).collect();
    let cdf = xs.iter().map(|&x| detection_cdf(&state, x)).collect::<Result<Vec<_>, _>>()?;
    let last = *cdf.last().unwrap();
    r.pattern("cdf", ScreenPattern::unnormalized(xs, cdf, last)?)?;
    Ok(r)
}

fn run_zeno(s: &Scenario) -> Result<ExperimentReport, RunError> {
    let total = s.real("total");
    let max_n = s.integer("max_n") as usize;
    let mut r = ExperimentReport::new("zeno");
    let mut prev = -1.0;
    let mut monotone = true;
    let mut worst: f64 = 0.0;
    let mut n = 1;
    while n <= max_n {
        let p = zeno_survival(n, total)?;
        monotone &= p >= prev;
        prev = p;
        worst = worst.max((p - (total / n as f64).cos().powi(2 * n as i32)).abs());
        r.scalar(format!("survival_{n}"), p)?;
        n *= 2;
    }
    r.scalar("closed_form_deviation", worst)?;
    r.verdict("survival_grows_with_measurement_rate", monotone);
    r.verdict("matches_cos_power", worst <= 1e-12);
    Ok(r)
}

fn run_histories(s: &Scenario) -> Result<ExperimentReport, RunError> {
    let marked = s.boolean("marked");
    let family = two_slit_family(marked)?;
    let report = family.report(CONSISTENCY_TOL)?;
    let (u, d) = family.path_probabilities(&report);
    let sum: f64 = report.probabilities.iter().sum();
    let mut r = ExperimentReport::new("histories");
    r.scalar("max_off_diagonal", report.max_off_diagonal)?;
    r.scalar("consistent", if report.consistent { 1.0 } else { 0.0 })?;
    for (name, p) in family.names.iter().zip(&report.probabilities) {
        r.scalar(format!("p_{}", name.replace('@', "_at_")), *p)?;
    }
    r.scalar("p_upper", u)?;
    r.scalar("p_lower", d)?;
    r.scalar("probability_sum", sum)?;
    r.verdict("probabilities_sum_to_one", (sum - 1.0).abs() <= 1e-10);
    if marked {
        r.verdict("marked_family_consistent", report.consistent && report.max_off_diagonal <= 1e-12);
        r.verdict("paths_equally_likely", (u - 0.5).abs() <= 1e-12 && (d - 0.5).abs() <= 1e-12);
    } else {
        r.verdict("unmarked_family_inconsistent", !report.consistent && report.max_off_diagonal > 0.1);
    }
    Ok(r)
}
