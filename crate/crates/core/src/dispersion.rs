//! Discrete dispersion relations, analytic and numeric.
//!
//! The analytic route evaluates the closed-form phase-speed ratios. The
//! numeric route builds the plane-wave symbol pencil of each scheme with
//! unit `g`, `H`, and `dx` (the ratio is scale-free), condenses out the
//! frequency-free closure rows, and extracts the frequency from the
//! determinant of the remaining 2x2 pencil. Both report the nonnegative
//! branch; the continuous relation is the constant `1`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::schemes::SchemeVariant;

/// One sampled point of a dispersion curve.
#[derive(Debug, Clone, Copy)]
pub struct DispersionSample<T> {
    /// Scheme the sample belongs to.
    pub variant: SchemeVariant,
    /// Dimensionless wave number `k dx` in `(0, pi]`.
    pub k_dx: T,
    /// Closed-form phase-speed ratio `c_d / sqrt(gH)`.
    pub analytic: T,
    /// Ratio recovered from the symbol pencil.
    pub numeric: T,
}

/// Continuous phase-speed ratio; all curves approach it as `k dx -> 0`.
pub fn cd_continuous<T: Real>() -> T {
    T::one()
}

/// Closed-form phase-speed ratio of a scheme at `k_dx`, positive branch.
///
/// The low-accuracy split scheme is singular at `k_dx == pi`; the
/// linear-linear family has an exact spurious zero there.
pub fn cd_analytic<T: Real>(variant: SchemeVariant, k_dx: T) -> Result<T> {
    if !(k_dx > T::zero()) || k_dx > T::PI() {
        return Err(Error::NumericalFailure(format!(
            "k*dx must lie in (0, pi], got {k_dx}"
        )));
    }
    let half = k_dx * T::of(0.5);
    let three = T::of(3.0);
    let two = T::of(2.0);
    Ok(match variant {
        SchemeVariant::P1P1 => {
            if k_dx == T::PI() {
                return Ok(T::zero()); // standing spurious mode
            }
            k_dx.sin() / k_dx * (three / (two + k_dx.cos()))
        }
        SchemeVariant::Gp1Gp1 => {
            if k_dx == T::PI() {
                return Ok(T::zero());
            }
            half.sin() / half * (three * half.cos() / (two + k_dx.cos()))
        }
        SchemeVariant::P1P0 | SchemeVariant::Gp1Gp0 | SchemeVariant::Gp0Gp1 => {
            half.sin() / half * (three / (two + k_dx.cos())).sqrt()
        }
        SchemeVariant::Gp0Gp0 => {
            if k_dx == T::PI() {
                return Err(Error::DispersionSingularity {
                    k_dx: k_dx.to_f64().unwrap_or(f64::NAN),
                });
            }
            half.tan() / half
        }
    })
}

/// Plane-wave symbol pencil: the system matrix is `i*omega*A + B`.
///
/// Mixed schemes give a 2x2 pencil in `(u, h)`; split schemes a 4x4 pencil
/// in `(u, h, u~, h~)` whose two closure rows carry no frequency.
#[derive(Debug, Clone)]
pub struct SymbolPencil<T> {
    /// Matrix dimension (2 or 4).
    pub dim: usize,
    /// Frequency coefficient matrix, row-major.
    pub a: Vec<Complex<T>>,
    /// Frequency-free part, row-major.
    pub b: Vec<Complex<T>>,
}

impl<T: Real> SymbolPencil<T> {
    fn zeros(dim: usize) -> Self {
        Self {
            dim,
            a: vec![Complex::new(T::zero(), T::zero()); dim * dim],
            b: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    /// Entry of the frequency coefficient matrix.
    pub fn a_at(&self, i: usize, j: usize) -> Complex<T> {
        self.a[i * self.dim + j]
    }

    /// Entry of the frequency-free matrix.
    pub fn b_at(&self, i: usize, j: usize) -> Complex<T> {
        self.b[i * self.dim + j]
    }
}

/// Builds the symbol pencil of a scheme at `k_dx` with `g = H = dx = 1`.
pub fn symbol_matrix<T: Real>(variant: SchemeVariant, k_dx: T) -> SymbolPencil<T> {
    let re = |x: T| Complex::new(x, T::zero());
    let im = |x: T| Complex::new(T::zero(), x);
    let half = k_dx * T::of(0.5);
    let third = T::of(1.0 / 3.0);
    let two = T::of(2.0);
    let mass_symbol = (two + k_dx.cos()) * third;
    let sin_full = k_dx.sin();
    let sin_half = half.sin();
    let cos_half = half.cos();

    match variant {
        SchemeVariant::P1P1 => {
            let mut p = SymbolPencil::zeros(2);
            p.a[0] = re(mass_symbol);
            p.a[3] = re(mass_symbol);
            p.b[1] = im(sin_full);
            p.b[2] = im(sin_full);
            p
        }
        SchemeVariant::P1P0 => {
            let mut p = SymbolPencil::zeros(2);
            p.a[0] = re(mass_symbol);
            p.a[3] = re(T::one());
            p.b[1] = im(two * sin_half);
            p.b[2] = im(two * sin_half);
            p
        }
        split => {
            // unknown order (u, h, u~, h~); rows: momentum, continuity,
            // velocity closure, height closure
            let (star_u, star_h) = split.hodge_tags().expect("split variant");
            let mut p = SymbolPencil::zeros(4);
            p.a[0] = re(T::one()); // d/dt of u in the momentum row
            p.a[7] = re(T::one()); // d/dt of h~ in the continuity row
            p.b[1] = im(two * sin_half); // gradient of h
            p.b[4 + 2] = im(two * sin_half); // divergence of u~
            match star_u {
                crate::hodge::StarAccuracy::Gp1 => {
                    p.b[8] = re(-cos_half);
                    p.b[8 + 2] = re(mass_symbol);
                }
                crate::hodge::StarAccuracy::Gp0 => {
                    p.b[8] = re(T::one());
                    p.b[8 + 2] = re(-cos_half);
                }
            }
            match star_h {
                crate::hodge::StarAccuracy::Gp1 => {
                    p.b[12 + 1] = re(mass_symbol);
                    p.b[12 + 3] = re(-cos_half);
                }
                crate::hodge::StarAccuracy::Gp0 => {
                    p.b[12 + 1] = re(-cos_half);
                    p.b[12 + 3] = re(T::one());
                }
            }
            p
        }
    }
}

/// Determinant coefficients of a 2x2 pencil `det(s A + B)` as a quadratic
/// `c2 s^2 + c1 s + c0` with `s = i omega`.
fn quadratic_coeffs<T: Real>(
    a: &[Complex<T>; 4],
    b: &[Complex<T>; 4],
) -> (Complex<T>, Complex<T>, Complex<T>) {
    let c2 = a[0] * a[3] - a[1] * a[2];
    let c1 = a[0] * b[3] + b[0] * a[3] - a[1] * b[2] - b[1] * a[2];
    let c0 = b[0] * b[3] - b[1] * b[2];
    (c2, c1, c0)
}

/// Phase-speed ratio from the symbol pencil, positive branch.
///
/// Frequency-free rows of split pencils are eliminated first; the reduced
/// 2x2 pencil yields a quadratic whose largest real root is reported.
pub fn cd_numeric<T: Real>(variant: SchemeVariant, k_dx: T) -> Result<T> {
    if !(k_dx > T::zero()) || k_dx > T::PI() {
        return Err(Error::NumericalFailure(format!(
            "k*dx must lie in (0, pi], got {k_dx}"
        )));
    }
    let p = symbol_matrix(variant, k_dx);
    let (a2, b2): ([Complex<T>; 4], [Complex<T>; 4]) = if p.dim == 2 {
        (
            [p.a_at(0, 0), p.a_at(0, 1), p.a_at(1, 0), p.a_at(1, 1)],
            [p.b_at(0, 0), p.b_at(0, 1), p.b_at(1, 0), p.b_at(1, 1)],
        )
    } else {
        // Closure rows 2 and 3 carry no frequency: substitute
        // u~ = s_u * u and h~ = s_h * h into the first two rows.
        let tol = T::epsilon() * T::of(1e4);
        let b22 = p.b_at(2, 2);
        let b33 = p.b_at(3, 3);
        if b22.norm() <= tol || b33.norm() <= tol {
            return Err(Error::DispersionSingularity {
                k_dx: k_dx.to_f64().unwrap_or(f64::NAN),
            });
        }
        let s_u = -p.b_at(2, 0) / b22;
        let s_h = -p.b_at(3, 1) / b33;
        let a_r = [
            p.a_at(0, 0) + p.a_at(0, 2) * s_u,
            p.a_at(0, 1) + p.a_at(0, 3) * s_h,
            p.a_at(1, 0) + p.a_at(1, 2) * s_u,
            p.a_at(1, 1) + p.a_at(1, 3) * s_h,
        ];
        let b_r = [
            p.b_at(0, 0) + p.b_at(0, 2) * s_u,
            p.b_at(0, 1) + p.b_at(0, 3) * s_h,
            p.b_at(1, 0) + p.b_at(1, 2) * s_u,
            p.b_at(1, 1) + p.b_at(1, 3) * s_h,
        ];
        (a_r, b_r)
    };

    let (c2, c1, c0) = quadratic_coeffs(&a2, &b2);
    if c2.norm() <= T::epsilon() * T::of(1e4) {
        return Err(Error::NumericalFailure("defective symbol pencil".into()));
    }
    // roots of c2 s^2 + c1 s + c0 with s = i omega
    let disc = (c1 * c1 - Complex::new(T::of(4.0), T::zero()) * c2 * c0).sqrt();
    let two_c2 = c2 * Complex::new(T::of(2.0), T::zero());
    let s1 = (-c1 + disc) / two_c2;
    let s2 = (-c1 - disc) / two_c2;
    // omega = -i s
    let omega = [s1, s2]
        .into_iter()
        .map(|s| Complex::new(s.im, -s.re))
        .map(|w| w.re)
        .fold(T::zero(), T::max);
    Ok(omega / k_dx)
}

/// Samples analytic and numeric curves on a uniform grid in `(0, pi)`.
///
/// The low-accuracy split scheme is sampled only up to `0.98 pi` because of
/// its singular short-wave limit.
pub fn sample_curve<T: Real>(
    variant: SchemeVariant,
    samples: usize,
) -> Result<Vec<DispersionSample<T>>> {
    let max_k = if variant == SchemeVariant::Gp0Gp0 {
        T::of(0.98) * T::PI()
    } else {
        T::PI() * T::of_usize(samples) / T::of_usize(samples + 1)
    };
    (1..=samples)
        .map(|j| {
            let k_dx = max_k * T::of_usize(j) / T::of_usize(samples);
            Ok(DispersionSample {
                variant,
                k_dx,
                analytic: cd_analytic(variant, k_dx)?,
                numeric: cd_numeric(variant, k_dx)?,
            })
        })
        .collect()
}
