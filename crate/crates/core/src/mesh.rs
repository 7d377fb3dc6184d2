//! Periodic 1D mesh with `N` independent nodes and `N` elements.
//!
//! Node `l` sits at `x_l`; element `m` spans `[x_m, x_{m+1}]` (indices wrap
//! modulo `N`, so element `N-1` connects the last node back to the first).
//! Indexing is 0-based; wrap arithmetic uses modulo `N`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Immutable periodic mesh of the interval `[0, L]`.
#[derive(Debug, Clone)]
pub struct Mesh<T> {
    length: T,
    node_x: Vec<T>,
    elem_dx: Vec<T>,
    elem_center_x: Vec<T>,
}

impl<T: Real> Mesh<T> {
    /// Uniform periodic mesh with `n` elements of width `length / n`.
    pub fn uniform_periodic(n: usize, length: T) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 3 elements, got {n}"
            )));
        }
        if !(length > T::zero()) {
            return Err(Error::InvalidMesh(format!(
                "domain length must be positive, got {length}"
            )));
        }
        let dx = length / T::of_usize(n);
        let node_x: Vec<T> = (0..n).map(|l| T::of_usize(l) * dx).collect();
        let elem_dx = vec![dx; n];
        Self::assemble(length, node_x, elem_dx)
    }

    /// Periodic mesh from explicit element widths; the domain length is their sum.
    pub fn nonuniform_periodic(widths: &[T]) -> Result<Self> {
        if widths.len() < 3 {
            return Err(Error::InvalidMesh(format!(
                "need at least 3 elements, got {}",
                widths.len()
            )));
        }
        if let Some(&w) = widths.iter().find(|&&w| !(w > T::zero())) {
            return Err(Error::InvalidMesh(format!(
                "element width must be positive, got {w}"
            )));
        }
        let mut node_x = Vec::with_capacity(widths.len());
        let mut x = T::zero();
        for &w in widths {
            node_x.push(x);
            x += w;
        }
        Self::assemble(x, node_x, widths.to_vec())
    }

    fn assemble(length: T, node_x: Vec<T>, elem_dx: Vec<T>) -> Result<Self> {
        let n = elem_dx.len();
        let sum = elem_dx.iter().fold(T::zero(), |acc, &w| acc + w);
        if (sum - length).abs() > T::of(1e-12) * length {
            return Err(Error::InvalidMesh(format!(
                "element widths sum to {sum}, expected the domain length {length}"
            )));
        }
        if node_x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMesh(
                "node coordinates must be strictly increasing".into(),
            ));
        }
        let half = T::of(0.5);
        let elem_center_x = (0..n).map(|m| node_x[m] + half * elem_dx[m]).collect();
        Ok(Self {
            length,
            node_x,
            elem_dx,
            elem_center_x,
        })
    }

    /// Number of elements (== number of independent nodes).
    pub fn n(&self) -> usize {
        self.elem_dx.len()
    }

    /// Domain length `L`.
    pub fn length(&self) -> T {
        self.length
    }

    /// Node coordinates `x_l`.
    pub fn node_x(&self) -> &[T] {
        &self.node_x
    }

    /// Element widths `dx_m`.
    pub fn elem_dx(&self) -> &[T] {
        &self.elem_dx
    }

    /// Element centers `x_m = (x_l + x_{l+1}) / 2`.
    pub fn elem_center_x(&self) -> &[T] {
        &self.elem_center_x
    }

    /// Smallest element width; governs the CFL number.
    pub fn min_dx(&self) -> T {
        self.elem_dx
            .iter()
            .fold(T::infinity(), |acc, &w| acc.min(w))
    }

    /// Index of the node left of node `l` under periodic wrap.
    #[inline]
    pub fn prev(&self, l: usize) -> usize {
        (l + self.n() - 1) % self.n()
    }

    /// Index of the node right of node `l` under periodic wrap.
    #[inline]
    pub fn next(&self, l: usize) -> usize {
        (l + 1) % self.n()
    }
}
