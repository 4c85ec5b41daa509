use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{kron, max_abs_diff, CMatrix, StateVector, SystemLayout, STRUCTURE_TOL};
use crate::error::{Error, Result};

/// Square complex matrix acting on the product basis of a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    layout: SystemLayout,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(layout: SystemLayout, matrix: CMatrix) -> Result<Self> {
        let n = layout.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if matrix.nrows() != n {
                    matrix.nrows()
                } else {
                    matrix.ncols()
                },
            });
        }
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let n = layout.dim();
        Self {
            layout,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn projector_onto(state: &StateVector) -> Result<Self> {
        let s = state.normalized()?;
        let v = s.amplitudes();
        Self::new(state.layout().clone(), v * v.adjoint())
    }

    /// Outer product `|a⟩⟨b|` (no normalization).
    pub fn outer(a: &StateVector, b: &StateVector) -> Result<Self> {
        a.check_layout(b)?;
        Self::new(a.layout().clone(), a.amplitudes() * b.amplitudes().adjoint())
    }

    /// Operator given as a matrix over a listed ordering of product basis states.
    /// `order[k]` names (one label per subsystem) the basis state of row/column `k`.
    pub fn from_basis_order<S: AsRef<str>>(
        layout: SystemLayout,
        order: &[Vec<S>],
        matrix: &CMatrix,
    ) -> Result<Self> {
        let n = layout.dim();
        if order.len() != n || matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.len().max(matrix.nrows()),
            });
        }
        let idx = order
            .iter()
            .map(|labels| layout.index(labels))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; n];
        for &i in &idx {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!(
                    "basis order lists {:?} twice",
                    layout.basis_labels(i)
                )));
            }
        }
        let mut m = DMatrix::zeros(n, n);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m[(i, j)] = matrix[(a, b)];
            }
        }
        Self::new(layout, m)
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

    pub fn adjoint(&self) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.map(|x| x * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_layout(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    /// `self ⊗ other` on the concatenated layout.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.layout.concat(&other.layout)?,
            kron(&self.matrix, &other.matrix),
        )
    }

    /// Same matrix on a layout with identical dimensions.
    pub fn relabel(&self, layout: SystemLayout) -> Result<Self> {
        if layout.dims() != self.layout.dims() {
            return Err(Error::LayoutMismatch(format!(
                "cannot relabel {} as {}",
                self.layout, layout
            )));
        }
        Ok(Self {
            layout,
            matrix: self.matrix.clone(),
        })
    }

    /// `max |U†U − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        max_abs_diff(&(self.matrix.adjoint() * &self.matrix), &DMatrix::identity(n, n))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn ensure_unitary(&self, name: &str, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                name: name.to_string(),
                deviation,
            })
        }
    }

    /// `max(max |P² − P|, max |P − P†|)`.
    pub fn projector_deviation(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        max_abs_diff(&sq, &self.matrix).max(self.hermiticity_deviation())
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.projector_deviation() <= tol
    }

    pub(crate) fn ensure_projector(&self) -> Result<()> {
        let deviation = self.projector_deviation();
        if deviation <= STRUCTURE_TOL {
            Ok(())
        } else {
            Err(Error::NotProjector { deviation })
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_layout(other)?;
        Ok(max_abs_diff(&self.matrix, &other.matrix))
    }

    fn check_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{re, real_matrix, Subsystem};

    #[test]
    fn basis_order_permutes() {
        let l = SystemLayout::new(vec![
            Subsystem::with_basis("a", &["x", "y"]),
        ])
        .unwrap();
        // listed as (y, x): matrix [[1,0],[0,2]] means y→y scaled 1, x→x scaled 2
        let op = Operator::from_basis_order(
            l,
            &[vec!["y"], vec!["x"]],
            &real_matrix(&[&[1.0, 0.0], &[0.0, 2.0]]),
        )
        .unwrap();
        assert_eq!(op.matrix()[(0, 0)], re(2.0));
        assert_eq!(op.matrix()[(1, 1)], re(1.0));
    }

    #[test]
    fn projector_checks() {
        let l = SystemLayout::qubits(&["q"]).unwrap();
        let s = StateVector::from_vec(l.clone(), vec![re(1.0), re(1.0)]).unwrap();
        let p = Operator::projector_onto(&s).unwrap();
        assert!(p.is_projector(1e-12));
        assert!(!p.is_unitary(1e-3));
        let not = Operator::new(l, real_matrix(&[&[1.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert!(!not.is_projector(1e-3));
    }
}
