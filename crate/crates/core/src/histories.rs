//! Consistent histories: chronologically ordered projector products (class
//! operators) and the decoherence condition Tr(C_i ρ C_j†) = 0 for i ≠ j.

use num_complex::Complex64;

use crate::catalog::marking_unitary;
use crate::error::{Error, Result};
use crate::hilbert::{
    lift, CMatrix, DensityOperator, Operator, StateVector, Subsystem, SystemLayout, STRUCTURE_TOL,
};

pub const CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    layout: SystemLayout,
    steps: Vec<(f64, Operator)>,
}

impl History {
    /// Steps in chronological order; each projector may act on a subset of
    /// `layout` and is lifted to the whole system.
    pub fn new(layout: &SystemLayout, steps: Vec<(f64, Operator)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyHistory);
        }
        let mut lifted = Vec::with_capacity(steps.len());
        for (t, p) in steps {
            if !p.is_projector(STRUCTURE_TOL) {
                return Err(Error::NotProjector {
                    deviation: p.projector_deviation(),
                });
            }
            if let Some((prev, _)) = lifted.last() {
                if t <= *prev {
                    return Err(Error::UnorderedHistory { prev: *prev, next: t });
                }
            }
            let full = if p.layout() == layout {
                p
            } else {
                lift(&p, &p.layout().labels(), layout)?
            };
            lifted.push((t, full));
        }
        Ok(Self {
            layout: layout.clone(),
            steps: lifted,
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn steps(&self) -> &[(f64, Operator)] {
        &self.steps
    }
}

/// P_n ⋯ P_2 P_1 with the latest projector leftmost.
pub fn class_operator(h: &History) -> Result<Operator> {
    class_operator_with(h, &|_, _| Ok(None))
}

/// As `class_operator`, with `evolve(t_prev, t_next)` inserted between
/// consecutive projections (`None` means no evolution).
pub fn class_operator_with(
    h: &History,
    evolve: &dyn Fn(f64, f64) -> Result<Option<Operator>>,
) -> Result<Operator> {
    let mut c = h.steps[0].1.clone();
    for w in h.steps.windows(2) {
        let (t0, _) = &w[0];
        let (t1, p) = &w[1];
        if let Some(u) = evolve(*t0, *t1)? {
            c = u.compose(&c)?;
        }
        c = p.compose(&c)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    /// M_ij = Tr(C_i ρ C_j†).
    pub matrix: CMatrix,
    pub consistent: bool,
    pub probabilities: Vec<f64>,
    pub max_off_diagonal: f64,
}

pub fn consistency_matrix(histories: &[History], rho: &DensityOperator, tol: f64) -> Result<ConsistencyReport> {
    consistency_matrix_with(histories, rho, tol, &|_, _| Ok(None))
}

pub fn consistency_matrix_with(
    histories: &[History],
    rho: &DensityOperator,
    tol: f64,
    evolve: &dyn Fn(f64, f64) -> Result<Option<Operator>>,
) -> Result<ConsistencyReport> {
    for h in histories {
        if h.layout() != rho.layout() {
            return Err(Error::LayoutMismatch(h.layout().to_string()));
        }
    }
    let cs: Vec<CMatrix> = histories
        .iter()
        .map(|h| class_operator_with(h, evolve).map(|c| c.matrix().clone()))
        .collect::<Result<_>>()?;
    let n = cs.len();
    let crho: Vec<CMatrix> = cs.iter().map(|c| c * rho.matrix()).collect();
    let mut m = CMatrix::zeros(n, n);
    let mut max_off: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v: Complex64 = (&crho[i] * cs[j].adjoint()).trace();
            m[(i, j)] = v;
            if i != j {
                max_off = max_off.max(v.norm());
            }
        }
    }
    let probabilities = (0..n).map(|i| m[(i, i)].re).collect();
    Ok(ConsistencyReport {
        matrix: m,
        consistent: max_off <= tol,
        probabilities,
        max_off_diagonal: max_off,
    })
}

/// Orthonormal screen amplitudes for the two slits on three position cells
/// (columns of the 3-point discrete Fourier transform).
fn slit_waves() -> [[Complex64; 3]; 3] {
    let s = 1.0 / 3f64.sqrt();
    let w = |k: usize| Complex64::from_polar(s, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
    [
        [w(0), w(0), w(0)],
        [w(0), w(1), w(2)],
        [w(0), w(2), w(4)],
    ]
}

/// Flight from slits to screen on path(u,d) ⊗ pos(x0,x1,x2):
/// |u,x0⟩ → |u⟩φ0, |d,x0⟩ → |u⟩φ1 (both arrive on the same screen), the
/// remaining basis states fill out a unitary.
pub fn flight_unitary() -> Operator {
    let layout = two_slit_core();
    let idx = |p: &str, x: &str| layout.index(&[p, x]).expect("labels");
    let waves = slit_waves();
    let mut m = CMatrix::zeros(6, 6);
    let xs = ["x0", "x1", "x2"];
    let on_u = |m: &mut CMatrix, col: usize, phi: &[Complex64; 3]| {
        for (k, x) in xs.iter().enumerate() {
            m[(idx("u", x), col)] = phi[k];
        }
    };
    on_u(&mut m, idx("u", "x0"), &waves[0]);
    on_u(&mut m, idx("d", "x0"), &waves[1]);
    on_u(&mut m, idx("u", "x1"), &waves[2]);
    let one = Complex64::new(1.0, 0.0);
    m[(idx("d", "x0"), idx("d", "x1"))] = one;
    m[(idx("d", "x1"), idx("u", "x2"))] = one;
    m[(idx("d", "x2"), idx("d", "x2"))] = one;
    Operator::new(layout, m).expect("6x6")
}

fn two_slit_core() -> SystemLayout {
    SystemLayout::new(vec![
        Subsystem::with_basis("path", &["u", "d"]),
        Subsystem::with_basis("pos", &["x0", "x1", "x2"]),
    ])
    .expect("valid layout")
}

pub const PATH_TIME: f64 = 1.0;
pub const SCREEN_TIME: f64 = 2.0;

/// Two-slit family {path p at t=1, screen cell x at t=2}, names like "u@x1".
#[derive(Debug, Clone)]
pub struct TwoSlitFamily {
    pub names: Vec<String>,
    pub histories: Vec<History>,
    pub rho: DensityOperator,
    pub flight: Operator,
}

impl TwoSlitFamily {
    pub fn report(&self, tol: f64) -> Result<ConsistencyReport> {
        let flight = self.flight.clone();
        consistency_matrix_with(&self.histories, &self.rho, tol, &move |a, b| {
            Ok((a <= PATH_TIME && b >= SCREEN_TIME).then(|| flight.clone()))
        })
    }

    /// Probability of each path summed over screen cells, in order (u, d).
    pub fn path_probabilities(&self, report: &ConsistencyReport) -> (f64, f64) {
        let mut u = 0.0;
        let mut d = 0.0;
        for (name, p) in self.names.iter().zip(&report.probabilities) {
            if name.starts_with('u') {
                u += p;
            } else {
                d += p;
            }
        }
        (u, d)
    }
}

/// Source in (|u⟩+|d⟩)|x0⟩/√2. With `marked`, a marker qubit records the
/// path (the which-path marking unitary) before the family starts.
pub fn two_slit_family(marked: bool) -> Result<TwoSlitFamily> {
    let core = two_slit_core();
    let layout = if marked {
        SystemLayout::new(vec![Subsystem::with_basis("marker", &["0", "1"])])?.concat(&core)?
    } else {
        core.clone()
    };
    let h = crate::hilbert::re(std::f64::consts::FRAC_1_SQRT_2);
    let mut psi = if marked {
        StateVector::from_terms(
            layout.clone(),
            &[(&["0", "u", "x0"][..], h), (&["0", "d", "x0"][..], h)],
        )?
    } else {
        StateVector::from_terms(layout.clone(), &[(&["u", "x0"][..], h), (&["d", "x0"][..], h)])?
    };
    if marked {
        psi = psi.apply(&lift(&marking_unitary(), &["marker", "path"], &layout)?)?;
    }
    let flight = lift(&flight_unitary(), &["path", "pos"], &layout)?;
    let path = SystemLayout::single(core.subsystem("path")?.clone())?;
    let pos = SystemLayout::single(core.subsystem("pos")?.clone())?;
    let mut names = Vec::new();
    let mut histories = Vec::new();
    for p in ["u", "d"] {
        for x in ["x0", "x1", "x2"] {
            let pp = Operator::projector_onto(&StateVector::basis(path.clone(), &[p])?)?;
            let px = Operator::projector_onto(&StateVector::basis(pos.clone(), &[x])?)?;
            histories.push(History::new(&layout, vec![(PATH_TIME, pp), (SCREEN_TIME, px)])?);
            names.push(format!("{p}@{x}"));
        }
    }
    Ok(TwoSlitFamily {
        names,
        histories,
        rho: psi.density()?,
        flight,
    })
}
