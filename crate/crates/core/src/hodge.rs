//! Discrete Hodge-star operators as Galerkin projections between the nodal
//! (piecewise linear) and elemental (piecewise constant) spaces.
//!
//! Elemental vectors always hold integrated coefficients, i.e. the pointwise
//! value times the element width. Each star comes in two accuracies: a
//! projection onto the linear space (`Gp1`) or onto the constant space
//! (`Gp0`); a pair of choices closes the split system.

use crate::assembly::OperatorSet;
use crate::error::Result;
use crate::scalar::Real;
use crate::solver::{factorize, Factorization};

/// Target space of one Galerkin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarAccuracy {
    /// Projection onto the piecewise linear (nodal) space.
    Gp1,
    /// Projection onto the piecewise constant (elemental) space.
    Gp0,
}

/// A velocity-star/height-star pair with the shared factorizations.
#[derive(Debug)]
pub struct HodgePair<'a, T: Real> {
    star_u: StarAccuracy,
    star_h: StarAccuracy,
    ops: &'a OperatorSet<T>,
    f_m_nn: Factorization<T>,
    f_m_en: Factorization<T>,
    f_p_ne: Factorization<T>,
}

impl<'a, T: Real> HodgePair<'a, T> {
    /// Factorizes the three projection operators once for the whole run.
    pub fn new(
        star_u: StarAccuracy,
        star_h: StarAccuracy,
        ops: &'a OperatorSet<T>,
    ) -> Result<Self> {
        Ok(Self {
            star_u,
            star_h,
            ops,
            f_m_nn: factorize(&ops.m_nn)?,
            f_m_en: factorize(&ops.m_en)?,
            f_p_ne: factorize(&ops.p_ne)?,
        })
    }

    /// Velocity-star accuracy tag.
    pub fn star_u(&self) -> StarAccuracy {
        self.star_u
    }

    /// Height-star accuracy tag.
    pub fn star_h(&self) -> StarAccuracy {
        self.star_h
    }

    /// Operators the pair was built on.
    pub fn ops(&self) -> &OperatorSet<T> {
        self.ops
    }

    /// Shared nodal mass factorization (also useful to the mixed schemes).
    pub fn factor_m_nn(&self) -> &Factorization<T> {
        &self.f_m_nn
    }

    /// Factorization of the width-weighted averaging operator; carries a
    /// kernel on even meshes.
    pub fn factor_m_en(&self) -> &Factorization<T> {
        &self.f_m_en
    }

    /// Factorization of the metric-free averaging operator; carries a
    /// kernel on even meshes.
    pub fn factor_p_ne(&self) -> &Factorization<T> {
        &self.f_p_ne
    }

    fn solve_any(f: &Factorization<T>, rhs: &[T]) -> Result<Vec<T>> {
        if f.kernel().is_some() {
            f.solve_augmented(rhs)
        } else {
            f.solve(rhs)
        }
    }

    /// Maps an integrated elemental velocity to its nodal counterpart.
    pub fn star_u_apply(&self, u_e1: &[T]) -> Result<Vec<T>> {
        match self.star_u {
            StarAccuracy::Gp1 => self.f_m_nn.solve(&self.ops.p_ne.apply(u_e1)?),
            StarAccuracy::Gp0 => Self::solve_any(&self.f_m_en, u_e1),
        }
    }

    /// Maps a nodal height to its integrated elemental counterpart.
    pub fn star_h_apply(&self, h_n0: &[T]) -> Result<Vec<T>> {
        match self.star_h {
            StarAccuracy::Gp1 => Self::solve_any(&self.f_p_ne, &self.ops.m_nn.apply(h_n0)?),
            StarAccuracy::Gp0 => self.ops.m_en.apply(h_n0),
        }
    }

    /// Inverse of [`HodgePair::star_h_apply`]: recovers the nodal height from
    /// the integrated elemental one.
    pub fn star_h_inverse_apply(&self, h_e1: &[T]) -> Result<Vec<T>> {
        match self.star_h {
            StarAccuracy::Gp1 => self.f_m_nn.solve(&self.ops.p_ne.apply(h_e1)?),
            StarAccuracy::Gp0 => Self::solve_any(&self.f_m_en, h_e1),
        }
    }
}
