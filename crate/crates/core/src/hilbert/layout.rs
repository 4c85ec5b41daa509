use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

use super::MAX_DIMENSION;

/// One tensor factor of a composite system: a label plus named basis states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subsystem {
    label: String,
    basis: Vec<String>,
}

impl Subsystem {
    /// A subsystem of dimension `dim` whose basis states are named `"0"`, `"1"`, ...
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            basis: (0..dim).map(|i| i.to_string()).collect(),
        }
    }

    pub fn with_basis<S: AsRef<str>>(label: impl Into<String>, basis: &[S]) -> Self {
        Self {
            label: label.into(),
            basis: basis.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_index(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| Error::UnknownBasisLabel {
                subsystem: self.label.clone(),
                label: name.to_string(),
            })
    }

    fn relabeled(&self, label: &str) -> Self {
        Self {
            label: label.to_string(),
            basis: self.basis.clone(),
        }
    }
}

/// Ordered list of subsystems. Global basis indices are row-major over the list,
/// so the last subsystem varies fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SystemLayout {
    subsystems: Vec<Subsystem>,
}

impl SystemLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut total: usize = 1;
        for s in &subsystems {
            if !seen.insert(s.label.clone()) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
            if s.dim() < 2 {
                return Err(Error::DimensionTooSmall {
                    label: s.label.clone(),
                    dim: s.dim(),
                });
            }
            let mut names = HashSet::new();
            if let Some(dup) = s.basis.iter().find(|b| !names.insert(b.as_str())) {
                return Err(Error::InvalidParameter(format!(
                    "subsystem `{}` repeats basis state `{dup}`",
                    s.label
                )));
            }
            total = total.saturating_mul(s.dim());
            if total > MAX_DIMENSION {
                return Err(Error::TooLarge(total));
            }
        }
        if subsystems.is_empty() {
            return Err(Error::InvalidParameter("layout needs at least one subsystem".into()));
        }
        Ok(Self { subsystems })
    }

    /// Layout of qubits with basis states `"0"` and `"1"`.
    pub fn qubits<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::new(labels.iter().map(|l| Subsystem::new(l.as_ref(), 2)).collect())
    }

    /// Single-subsystem layout.
    pub fn single(subsystem: Subsystem) -> Result<Self> {
        Self::new(vec![subsystem])
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(Subsystem::dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subsystems.iter().map(Subsystem::dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.subsystems.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subsystem(&self, label: &str) -> Result<&Subsystem> {
        Ok(&self.subsystems[self.position(label)?])
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.subsystems.len()];
        for k in (0..self.subsystems.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.subsystems[k + 1].dim();
        }
        strides
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &SystemLayout) -> Result<Self> {
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        Self::new(subsystems)
    }

    /// Sub-layout holding the named subsystems in the order given.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let subs = labels
            .iter()
            .map(|l| self.subsystem(l.as_ref()).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::new(subs)
    }

    /// Same layout with one subsystem renamed.
    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let pos = self.position(from)?;
        let mut subs = self.subsystems.clone();
        subs[pos] = subs[pos].relabeled(to);
        Self::new(subs)
    }

    /// Labels of every subsystem not listed in `labels`, in layout order.
    pub fn complement<S: AsRef<str>>(&self, labels: &[S]) -> Vec<&str> {
        self.subsystems
            .iter()
            .map(|s| s.label.as_str())
            .filter(|l| !labels.iter().any(|k| k.as_ref() == *l))
            .collect()
    }

    /// Global index of the product basis state named by one basis label per subsystem.
    pub fn index<S: AsRef<str>>(&self, basis_labels: &[S]) -> Result<usize> {
        if basis_labels.len() != self.subsystems.len() {
            return Err(Error::DimensionMismatch {
                expected: self.subsystems.len(),
                found: basis_labels.len(),
            });
        }
        let strides = self.strides();
        self.subsystems
            .iter()
            .zip(basis_labels)
            .zip(strides)
            .try_fold(0, |acc, ((s, b), stride)| Ok(acc + s.basis_index(b.as_ref())? * stride))
    }

    /// Per-subsystem digits of a global index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (k, s) in self.subsystems.iter().enumerate().rev() {
            out[k] = index % s.dim();
            index /= s.dim();
        }
        out
    }

    pub fn basis_labels(&self, index: usize) -> Vec<&str> {
        self.digits(index)
            .into_iter()
            .zip(&self.subsystems)
            .map(|(d, s)| s.basis[d].as_str())
            .collect()
    }

    /// Global offsets of every joint configuration of the subsystems at `positions`
    /// (row-major in the order of `positions`), with all other digits zero.
    pub(crate) fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for &p in positions {
            let d = self.subsystems[p].dim();
            let stride = strides[p];
            out = out
                .iter()
                .flat_map(|&base| (0..d).map(move |k| base + k * stride))
                .collect();
        }
        out
    }

    /// Resolve labels to positions, rejecting unknown and repeated labels.
    pub(crate) fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l.as_ref())?;
            if out.contains(&p) {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }
}

impl fmt::Display for SystemLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsystems
            .iter()
            .map(|s| format!("{}[{}]", s.label, s.dim()))
            .collect();
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dimension_one_and_duplicates() {
        assert!(matches!(
            SystemLayout::new(vec![Subsystem::new("a", 1)]),
            Err(Error::DimensionTooSmall { .. })
        ));
        assert_eq!(
            SystemLayout::qubits(&["a", "a"]),
            Err(Error::DuplicateLabel("a".into()))
        );
    }

    #[test]
    fn rejects_oversized_layouts() {
        let labels: Vec<String> = (0..13).map(|i| format!("q{i}")).collect();
        assert_eq!(SystemLayout::qubits(&labels), Err(Error::TooLarge(8192)));
        let labels: Vec<String> = (0..12).map(|i| format!("q{i}")).collect();
        assert_eq!(SystemLayout::qubits(&labels).unwrap().dim(), 4096);
    }

    #[test]
    fn row_major_indexing() {
        let layout = SystemLayout::new(vec![
            Subsystem::with_basis("alice", &["0", "1", "2"]),
            Subsystem::with_basis("car", &["L", "R"]),
        ])
        .unwrap();
        assert_eq!(layout.dim(), 6);
        assert_eq!(layout.strides(), vec![2, 1]);
        assert_eq!(layout.index(&["1", "R"]).unwrap(), 3);
        assert_eq!(layout.basis_labels(4), vec!["2", "L"]);
        assert_eq!(layout.offsets(&[1]), vec![0, 1]);
        assert_eq!(layout.offsets(&[1, 0]), vec![0, 2, 4, 1, 3, 5]);
    }

    #[test]
    fn unknown_basis_label_names_subsystem() {
        let layout = SystemLayout::qubits(&["m"]).unwrap();
        let err = layout.index(&["7"]).unwrap_err();
        assert!(err.to_string().contains("`m`"));
    }
}
