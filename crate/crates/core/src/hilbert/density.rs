use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{max_abs_diff, CMatrix, Operator, StateVector, SystemLayout, STRUCTURE_TOL};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive semidefinite matrix over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: SystemLayout,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, trace and positivity within 1e−10.
    pub fn new(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        let rho = Self::new_unchecked(layout, matrix)?;
        rho.validate(STRUCTURE_TOL)?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        let n = layout.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        Ok(Self { layout, matrix })
    }

    pub fn from_state(state: &StateVector) -> Result<Self> {
        let s = state.normalized()?;
        let v = s.amplitudes();
        Ok(Self {
            layout: state.layout().clone(),
            matrix: v * v.adjoint(),
        })
    }

    /// Convex mixture `Σ w_k |ψ_k⟩⟨ψ_k|` of normalized states; weights must sum to 1.
    pub fn mixture(terms: &[(f64, StateVector)]) -> Result<Self> {
        let layout = terms
            .first()
            .map(|(_, s)| s.layout().clone())
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let n = layout.dim();
        let mut m = DMatrix::zeros(n, n);
        for (w, s) in terms {
            if s.layout() != &layout {
                return Err(Error::LayoutMismatch("mixture terms differ in layout".into()));
            }
            if *w < 0.0 {
                return Err(Error::InvalidDensity(format!("negative weight {w}")));
            }
            let v = s.normalized()?.into_amplitudes();
            m += (&v * v.adjoint()).map(|x| x * *w);
        }
        Self::new(layout, m)
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let n = layout.dim();
        Self {
            layout,
            matrix: DMatrix::identity(n, n).map(|x: Complex64| x / n as f64),
        }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    /// Eigenvalues of the hermitian part, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()).map(|x| x * 0.5);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > tol {
            return Err(Error::InvalidDensity(format!(
                "not hermitian (max deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > tol {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let min = self.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &Operator) -> Result<Self> {
        if u.layout() != &self.layout {
            return Err(Error::LayoutMismatch(format!(
                "operator on {} applied to density on {}",
                u.layout(),
                self.layout
            )));
        }
        Ok(Self {
            layout: self.layout.clone(),
            matrix: u.matrix() * &self.matrix * u.matrix().adjoint(),
        })
    }

    /// `Tr(A ρ)` for an operator on the same layout.
    pub fn expectation(&self, a: &Operator) -> Result<Complex64> {
        if a.layout() != &self.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                a.layout(),
                self.layout
            )));
        }
        Ok((a.matrix() * &self.matrix).trace())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }
}
