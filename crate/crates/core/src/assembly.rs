//! Mass, stiffness, and projection matrices on the periodic mesh.
//!
//! All operators are cyclic banded with offsets in `{-1, 0, +1}`; the wrap
//! entries (row 0 / column N-1 and row N-1 / column 0) live in the sub- and
//! super-bands under modulo indexing. Every integral is evaluated in closed
//! form from products of hat and step functions; no quadrature is involved.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::scalar::Real;

/// Square cyclic matrix with sub-, main, and super-diagonal bands.
///
/// `sub[i]` is the entry at `(i, (i+n-1) % n)`, `diag[i]` at `(i, i)`, and
/// `sup[i]` at `(i, (i+1) % n)`.
#[derive(Debug, Clone)]
pub struct CyclicBandedMatrix<T> {
    n: usize,
    sub: Vec<T>,
    diag: Vec<T>,
    sup: Vec<T>,
    label: String,
}

impl<T: Real> CyclicBandedMatrix<T> {
    /// Builds a matrix from its three bands.
    pub fn from_bands(label: impl Into<String>, sub: Vec<T>, diag: Vec<T>, sup: Vec<T>) -> Self {
        let n = diag.len();
        assert!(n >= 3, "cyclic banded matrices need dimension >= 3");
        assert_eq!(sub.len(), n);
        assert_eq!(sup.len(), n);
        Self {
            n,
            sub,
            diag,
            sup,
            label: label.into(),
        }
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Operator name used in error messages and debug dumps.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sub-diagonal band (offset -1, cyclic).
    pub fn sub(&self) -> &[T] {
        &self.sub
    }

    /// Main diagonal.
    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    /// Super-diagonal band (offset +1, cyclic).
    pub fn sup(&self) -> &[T] {
        &self.sup
    }

    /// Matrix-vector product honoring the cyclic wrap.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let left = v[(i + n - 1) % n];
            let right = v[(i + 1) % n];
            out.push(self.sub[i] * left + self.diag[i] * v[i] + self.sup[i] * right);
        }
        Ok(out)
    }

    /// Exact transpose; stays cyclic banded.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let sub = (0..n).map(|i| self.sup[(i + n - 1) % n]).collect();
        let sup = (0..n).map(|i| self.sub[(i + 1) % n]).collect();
        Self {
            n,
            sub,
            diag: self.diag.clone(),
            sup,
            label: format!("{}^T", self.label),
        }
    }

    /// Replaces the operator name.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Entry-wise expansion to a dense row-major matrix.
    pub fn to_dense(&self) -> crate::dense::Dense<T> {
        let n = self.n;
        let mut dense = crate::dense::Dense::zeros(n, n);
        for i in 0..n {
            *dense.at_mut(i, (i + n - 1) % n) += self.sub[i];
            *dense.at_mut(i, i) += self.diag[i];
            *dense.at_mut(i, (i + 1) % n) += self.sup[i];
        }
        dense
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> T {
        (0..self.n)
            .map(|i| self.sub[i].abs() + self.diag[i].abs() + self.sup[i].abs())
            .fold(T::zero(), T::max)
    }

    /// Debug dump as `row,col,value` CSV (nonzero structure only).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "row,col,value")?;
        let n = self.n;
        for i in 0..n {
            writeln!(w, "{},{},{:.16e}", i, (i + n - 1) % n, self.sub[i])?;
            writeln!(w, "{},{},{:.16e}", i, i, self.diag[i])?;
            writeln!(w, "{},{},{:.16e}", i, (i + 1) % n, self.sup[i])?;
        }
        Ok(())
    }
}

/// The assembled operators of one mesh, shared by every scheme.
///
/// Naming: `n` = nodal (piecewise linear), `e` = elemental (piecewise
/// constant); the first letter indexes rows, the second columns.
#[derive(Debug, Clone)]
pub struct OperatorSet<T> {
    /// Nodal mass matrix (hat-hat products).
    pub m_nn: CyclicBandedMatrix<T>,
    /// Nodal stiffness matrix (hat-derivative against hats); antisymmetric.
    pub d_nn: CyclicBandedMatrix<T>,
    /// Elemental mass matrix; diagonal with entries `dx_m`.
    pub m_ee: CyclicBandedMatrix<T>,
    /// Difference matrix mapping nodal values to elemental differences.
    pub d_en: CyclicBandedMatrix<T>,
    /// Transpose of `d_en`.
    pub d_ne: CyclicBandedMatrix<T>,
    /// Mixed mass matrix (step against hat), nodal rows.
    pub m_ne: CyclicBandedMatrix<T>,
    /// Transpose of `m_ne`, elemental rows.
    pub m_en: CyclicBandedMatrix<T>,
    /// Metric-free two-cell averaging; `m_ne` with the width factors removed.
    pub p_ne: CyclicBandedMatrix<T>,
    /// The mesh the operators were assembled on.
    pub mesh: Mesh<T>,
}

/// Assembles all operators for a mesh.
pub fn assemble_all<T: Real>(mesh: Mesh<T>) -> OperatorSet<T> {
    let n = mesh.n();
    let dx = mesh.elem_dx();
    let half = T::of(0.5);
    let sixth = T::of(1.0 / 6.0);
    let third = T::of(1.0 / 3.0);
    let prev = |i: usize| (i + n - 1) % n;

    // Row l couples node l to its neighbors through the two adjacent elements
    // l-1 (left) and l (right).
    let m_nn = CyclicBandedMatrix::from_bands(
        "M^nn",
        (0..n).map(|l| sixth * dx[prev(l)]).collect(),
        (0..n).map(|l| third * (dx[prev(l)] + dx[l])).collect(),
        (0..n).map(|l| sixth * dx[l]).collect(),
    );

    // Entry (l, l') integrates the derivative of hat l' against hat l, which
    // forces the antisymmetric stencil (-1/2, 0, +1/2).
    let d_nn =
        CyclicBandedMatrix::from_bands("D^nn", vec![-half; n], vec![T::zero(); n], vec![half; n]);

    let m_ee =
        CyclicBandedMatrix::from_bands("M^ee", vec![T::zero(); n], dx.to_vec(), vec![T::zero(); n]);

    // Row m differences the two nodes bounding element m.
    let d_en = CyclicBandedMatrix::from_bands(
        "D^en",
        vec![T::zero(); n],
        vec![-T::one(); n],
        vec![T::one(); n],
    );
    let d_ne = d_en.transpose().relabel("D^ne");

    let m_ne = CyclicBandedMatrix::from_bands(
        "M^ne",
        (0..n).map(|l| half * dx[prev(l)]).collect(),
        (0..n).map(|l| half * dx[l]).collect(),
        vec![T::zero(); n],
    );
    let m_en = m_ne.transpose().relabel("M^en");

    let p_ne =
        CyclicBandedMatrix::from_bands("P^ne", vec![half; n], vec![half; n], vec![T::zero(); n]);

    OperatorSet {
        m_nn,
        d_nn,
        m_ee,
        d_en,
        d_ne,
        m_ne,
        m_en,
        p_ne,
        mesh,
    }
}
