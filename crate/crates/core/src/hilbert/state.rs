use nalgebra::DVector;
use num_complex::Complex64;

use super::{CVector, DensityOperator, Operator, SystemLayout, STRUCTURE_TOL};
use crate::error::{Error, Result};

/// Complex amplitudes over the product basis of a layout. May be unnormalized;
/// `is_normalized` records whether the norm was 1 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SystemLayout,
    amplitudes: CVector,
    normalized: bool,
}

impl StateVector {
    pub fn new(layout: SystemLayout, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let normalized = (amplitudes.norm() - 1.0).abs() <= STRUCTURE_TOL;
        Ok(Self {
            layout,
            amplitudes,
            normalized,
        })
    }

    pub fn from_vec(layout: SystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new(layout, DVector::from_vec(amplitudes))
    }

    pub fn zero(layout: SystemLayout) -> Self {
        let n = layout.dim();
        Self {
            layout,
            amplitudes: DVector::zeros(n),
            normalized: false,
        }
    }

    /// Product basis state named by one basis label per subsystem.
    pub fn basis<S: AsRef<str>>(layout: SystemLayout, labels: &[S]) -> Result<Self> {
        let idx = layout.index(labels)?;
        let mut amps = DVector::zeros(layout.dim());
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::new(layout, amps)
    }

    /// Sum of weighted product basis states, e.g. `[(["0","L"], a), (["1","R"], b)]`.
    pub fn from_terms<S: AsRef<str>>(
        layout: SystemLayout,
        terms: &[(&[S], Complex64)],
    ) -> Result<Self> {
        let mut amps = DVector::zeros(layout.dim());
        for (labels, coeff) in terms {
            amps[layout.index(labels)?] += coeff;
        }
        Self::new(layout, amps)
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn amplitude<S: AsRef<str>>(&self, labels: &[S]) -> Result<Complex64> {
        Ok(self.amplitudes[self.layout.index(labels)?])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Unit-norm copy.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.unscale(n),
            normalized: true,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.layout.clone(), self.amplitudes.map(|a| a * factor)).expect("same dimension")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        Self::new(self.layout.clone(), &self.amplitudes + &other.amplitudes)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        Self::new(self.layout.clone(), &self.amplitudes - &other.amplitudes)
    }

    /// Apply an operator defined on the full layout.
    pub fn apply(&self, op: &Operator) -> Result<Self> {
        if op.layout() != &self.layout {
            return Err(Error::LayoutMismatch(format!(
                "operator on {} applied to state on {}",
                op.layout(),
                self.layout
            )));
        }
        Self::new(self.layout.clone(), op.matrix() * &self.amplitudes)
    }

    /// Apply an operator acting on the named subsystems only.
    pub fn apply_on<S: AsRef<str>>(&self, op: &Operator, targets: &[S]) -> Result<Self> {
        self.apply(&super::lift(op, targets, &self.layout)?)
    }

    /// `|ψ⟩⟨ψ|` of the normalized state.
    pub fn density(&self) -> Result<DensityOperator> {
        DensityOperator::from_state(self)
    }

    /// Same amplitudes on a layout with identical dimensions (e.g. renamed labels).
    pub fn relabel(&self, layout: SystemLayout) -> Result<Self> {
        if layout.dims() != self.layout.dims() {
            return Err(Error::LayoutMismatch(format!(
                "cannot relabel {} as {}",
                self.layout, layout
            )));
        }
        Self::new(layout, self.amplitudes.clone())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn with_flag(mut self, normalized: bool) -> Self {
        self.normalized = normalized;
        self
    }

    pub(crate) fn check_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }
}
