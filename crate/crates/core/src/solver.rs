//! Direct solver for cyclic banded systems.
//!
//! The cyclic matrix is split into a non-cyclic tridiagonal part `B` plus two
//! rank-one corner corrections. `B` is factored once by banded LU with
//! partial pivoting; each solve then runs through the Woodbury identity with
//! a small capacitance system. A one-dimensional rank deficiency of the full
//! matrix shows up as a singular capacitance: the kernel vector is recovered
//! from its null direction and the bordered solve regularizes the system
//! with it. Everything is O(N) per solve.

use crate::assembly::CyclicBandedMatrix;
use crate::error::{Error, Result};
use crate::scalar::{dot, norm_2, norm_inf, Real};

/// Banded LU of a (non-cyclic) tridiagonal matrix with partial pivoting.
///
/// Pivoting between adjacent rows introduces one extra super-diagonal of
/// fill-in, so the factor stores two super bands.
#[derive(Debug, Clone)]
struct TridiagLu<T> {
    n: usize,
    low: Vec<T>,
    d: Vec<T>,
    e: Vec<T>,
    f: Vec<T>,
    swapped: Vec<bool>,
}

impl<T: Real> TridiagLu<T> {
    /// `sub` and `sup` have length `n-1`; `scale` calibrates the zero-pivot test.
    fn factor(sub: &[T], diag: &[T], sup: &[T], scale: T) -> Result<Self> {
        let n = diag.len();
        assert!(n >= 2);
        assert_eq!(sub.len(), n - 1);
        assert_eq!(sup.len(), n - 1);
        let mut d = diag.to_vec();
        let mut e = sup.to_vec();
        let mut f = vec![T::zero(); n.saturating_sub(2)];
        let mut s = sub.to_vec();
        let mut low = vec![T::zero(); n - 1];
        let mut swapped = vec![false; n - 1];
        let tol = T::epsilon() * T::of(16.0) * scale;

        for k in 0..n - 1 {
            if s[k].abs() > d[k].abs() {
                swapped[k] = true;
                core::mem::swap(&mut d[k], &mut s[k]);
                core::mem::swap(&mut e[k], &mut d[k + 1]);
                if k + 2 < n {
                    core::mem::swap(&mut f[k], &mut e[k + 1]);
                }
            }
            if d[k].abs() <= tol {
                return Err(Error::NumericalFailure(format!(
                    "tridiagonal pivot {k} vanished; acyclic part is singular"
                )));
            }
            let m = s[k] / d[k];
            low[k] = m;
            d[k + 1] -= m * e[k];
            if k + 2 < n {
                e[k + 1] -= m * f[k];
            }
        }
        if d[n - 1].abs() <= tol {
            return Err(Error::NumericalFailure(
                "last tridiagonal pivot vanished; acyclic part is singular".into(),
            ));
        }
        Ok(Self {
            n,
            low,
            d,
            e,
            f,
            swapped,
        })
    }

    fn solve(&self, rhs: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y = rhs.to_vec();
        for k in 0..n - 1 {
            if self.swapped[k] {
                y.swap(k, k + 1);
            }
            let update = self.low[k] * y[k];
            y[k + 1] -= update;
        }
        let mut x = vec![T::zero(); n];
        x[n - 1] = y[n - 1] / self.d[n - 1];
        if n >= 2 {
            x[n - 2] = (y[n - 2] - self.e[n - 2] * x[n - 1]) / self.d[n - 2];
        }
        for k in (0..n.saturating_sub(2)).rev() {
            x[k] = (y[k] - self.e[k] * x[k + 1] - self.f[k] * x[k + 2]) / self.d[k];
        }
        x
    }
}

/// Reusable factorization of a cyclic banded matrix.
///
/// If the matrix has a one-dimensional kernel (the even-`N` averaging
/// operators), `kernel()` returns the unit-normalized null vector and solves
/// must go through [`Factorization::solve_augmented`].
#[derive(Debug, Clone)]
pub struct Factorization<T: Real> {
    label: String,
    n: usize,
    lu: TridiagLu<T>,
    g0: Vec<T>,
    g1: Vec<T>,
    kernel: Option<KernelData<T>>,
    cap2: [[T; 2]; 2],
}

#[derive(Debug, Clone)]
struct KernelData<T> {
    k0: Vec<T>,
    gk: Vec<T>,
    cap3: [[T; 3]; 3],
}

/// Factors a cyclic banded matrix, detecting a rank-1 kernel if present.
pub fn factorize<T: Real>(matrix: &CyclicBandedMatrix<T>) -> Result<Factorization<T>> {
    let n = matrix.n();
    let norm_a = matrix.norm_inf().max(T::one());
    let sub_b = &matrix.sub()[1..];
    let sup_b = &matrix.sup()[..n - 1];
    let corner_tr = matrix.sub()[0];
    let corner_bl = matrix.sup()[n - 1];
    let lu = TridiagLu::factor(sub_b, matrix.diag(), sup_b, norm_a)?;

    let mut u0 = vec![T::zero(); n];
    u0[0] = corner_tr;
    let mut u1 = vec![T::zero(); n];
    u1[n - 1] = corner_bl;
    let g0 = lu.solve(&u0);
    let g1 = lu.solve(&u1);

    let cap2 = [[T::one() + g0[n - 1], g1[n - 1]], [g0[0], T::one() + g1[0]]];
    let cap_scale = cap2
        .iter()
        .flatten()
        .fold(T::one(), |acc, &v| acc.max(v.abs()));
    let tol = T::epsilon() * T::of(1e4) * cap_scale;

    let kernel = match rank_and_null_2x2(&cap2, tol) {
        (2, _) => None,
        (1, Some(w)) => {
            let mut k0: Vec<T> = (0..n).map(|i| -(g0[i] * w[0] + g1[i] * w[1])).collect();
            let norm = norm_2(&k0);
            if norm <= T::epsilon() * T::of(1e4) {
                return Err(Error::UnsupportedKernel {
                    label: matrix.label().into(),
                });
            }
            for v in &mut k0 {
                *v /= norm;
            }
            fix_sign(&mut k0);
            // verify kernel quality against the assembled matrix
            let residual = norm_inf(&matrix.apply(&k0)?);
            let quality = norm_a * T::of(1e-10).max(T::epsilon() * T::of(1e3));
            if residual > quality {
                return Err(Error::NumericalFailure(format!(
                    "kernel candidate of {} has residual {residual:e}",
                    matrix.label()
                )));
            }
            let gk = lu.solve(&k0);
            let cap3 = [
                [cap2[0][0], cap2[0][1], gk[n - 1]],
                [cap2[1][0], cap2[1][1], gk[0]],
                [dot(&k0, &g0), dot(&k0, &g1), T::one() + dot(&k0, &gk)],
            ];
            Some(KernelData { k0, gk, cap3 })
        }
        _ => {
            return Err(Error::UnsupportedKernel {
                label: matrix.label().into(),
            })
        }
    };

    Ok(Factorization {
        label: matrix.label().into(),
        n,
        lu,
        g0,
        g1,
        kernel,
        cap2,
    })
}

/// Flips a vector so its first dominant component is positive.
pub(crate) fn fix_sign<T: Real>(v: &mut [T]) {
    let max = v.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    let Some(&lead) = v.iter().find(|x| x.abs() + x.abs() >= max) else {
        return;
    };
    if lead < T::zero() {
        for x in v {
            *x = -*x;
        }
    }
}

fn rank_and_null_2x2<T: Real>(c: &[[T; 2]; 2], tol: T) -> (usize, Option<[T; 2]>) {
    let mut pi = 0;
    let mut pj = 0;
    let mut pv = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            if c[i][j].abs() > pv {
                pv = c[i][j].abs();
                pi = i;
                pj = j;
            }
        }
    }
    if pv <= tol {
        return (0, None);
    }
    let oi = 1 - pi;
    let oj = 1 - pj;
    let schur = c[oi][oj] - c[oi][pj] * c[pi][oj] / c[pi][pj];
    if schur.abs() <= tol {
        let mut w = [T::zero(); 2];
        w[pj] = -c[pi][oj];
        w[oj] = c[pi][pj];
        (1, Some(w))
    } else {
        (2, None)
    }
}

fn solve_3x3<T: Real>(a: &[[T; 3]; 3], b: [T; 3]) -> Result<[T; 3]> {
    let mut m = *a;
    let mut r = b;
    for k in 0..3 {
        let p = (k..3)
            .max_by(|&i, &j| m[i][k].abs().partial_cmp(&m[j][k].abs()).unwrap())
            .unwrap();
        if m[p][k].abs() <= T::epsilon() * T::of(64.0) {
            return Err(Error::NumericalFailure(
                "singular capacitance system".into(),
            ));
        }
        m.swap(k, p);
        r.swap(k, p);
        for i in k + 1..3 {
            let factor = m[i][k] / m[k][k];
            for j in k..3 {
                m[i][j] -= factor * m[k][j];
            }
            r[i] -= factor * r[k];
        }
    }
    let mut x = [T::zero(); 3];
    for k in (0..3).rev() {
        let mut s = r[k];
        for j in k + 1..3 {
            s -= m[k][j] * x[j];
        }
        x[k] = s / m[k][k];
    }
    Ok(x)
}

impl<T: Real> Factorization<T> {
    /// Operator name the factorization was built from.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// System dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Unit-normalized kernel vector, when a rank-1 deficiency was detected.
    pub fn kernel(&self) -> Option<&[T]> {
        self.kernel.as_ref().map(|k| k.k0.as_slice())
    }

    /// Solves `A x = rhs` for a full-rank factorization.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        if self.kernel.is_some() {
            return Err(Error::KernelPresent {
                label: self.label.clone(),
            });
        }
        let t = self.lu.solve(rhs);
        let w = solve_2x2(&self.cap2, [t[self.n - 1], t[0]])?;
        Ok((0..self.n)
            .map(|i| t[i] - self.g0[i] * w[0] - self.g1[i] * w[1])
            .collect())
    }

    /// Solves the bordered system `[[A, K0], [K0^T, 0]] [x; lambda] = [rhs; 0]`.
    ///
    /// The returned `x` satisfies `A x = rhs - lambda K0` and `K0^T x = 0`;
    /// the multiplier absorbs any component of `rhs` outside the range of `A`.
    pub fn solve_augmented(&self, rhs: &[T]) -> Result<Vec<T>> {
        self.solve_augmented_with_multiplier(rhs).map(|(x, _)| x)
    }

    /// Like [`Factorization::solve_augmented`], also returning the multiplier.
    pub fn solve_augmented_with_multiplier(&self, rhs: &[T]) -> Result<(Vec<T>, T)> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        let kernel = self.kernel.as_ref().ok_or_else(|| Error::NoKernel {
            label: self.label.clone(),
        })?;
        // Solve (A + K0 K0^T) xt = rhs; the shift makes the operator regular
        // and xt carries the multiplier as its kernel component.
        let t = self.lu.solve(rhs);
        let b = [t[self.n - 1], t[0], dot(&kernel.k0, &t)];
        let w = solve_3x3(&kernel.cap3, b)?;
        let xt: Vec<T> = (0..self.n)
            .map(|i| t[i] - self.g0[i] * w[0] - self.g1[i] * w[1] - kernel.gk[i] * w[2])
            .collect();
        let lambda = dot(&kernel.k0, &xt);
        let x = (0..self.n).map(|i| xt[i] - lambda * kernel.k0[i]).collect();
        Ok((x, lambda))
    }
}

fn solve_2x2<T: Real>(c: &[[T; 2]; 2], b: [T; 2]) -> Result<[T; 2]> {
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let scale = c
        .iter()
        .flatten()
        .fold(T::one(), |acc, &v| acc.max(v.abs()));
    if det.abs() <= T::epsilon() * T::of(64.0) * scale * scale {
        return Err(Error::NumericalFailure(
            "singular capacitance system".into(),
        ));
    }
    Ok([
        (b[0] * c[1][1] - b[1] * c[0][1]) / det,
        (c[0][0] * b[1] - c[1][0] * b[0]) / det,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::assemble_all;
    use crate::mesh::Mesh;
    use crate::scalar::norm_inf;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn ops(n: usize) -> crate::assembly::OperatorSet<f64> {
        assemble_all(Mesh::uniform_periodic(n, n as f64).unwrap())
    }

    #[test]
    fn nodal_mass_has_no_kernel() {
        for n in [3, 4, 5, 8, 16, 64] {
            let f = factorize(&ops(n).m_nn).unwrap();
            assert!(f.kernel().is_none(), "n = {n}");
        }
    }

    #[test]
    fn weak_diagonal_forces_pivoting() {
        // sub-dominant diagonal: every elimination step swaps rows and the
        // second super band fills in
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for n in [3usize, 4, 8, 17] {
            let matrix = crate::assembly::CyclicBandedMatrix::from_bands(
                "pivot-test",
                vec![1.0; n],
                vec![0.01; n],
                vec![0.7; n],
            );
            let f = factorize(&matrix).unwrap();
            let x_true: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rhs = matrix.apply(&x_true).unwrap();
            let x = f.solve(&rhs).unwrap();
            let x_ref = crate::dense::solve(&matrix.to_dense(), &rhs).unwrap();
            for i in 0..n {
                assert!((x[i] - x_true[i]).abs() < 1e-10, "n={n} i={i}");
                assert!((x[i] - x_ref[i]).abs() < 1e-12, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn averaging_odd_n_has_no_kernel() {
        let f = factorize(&ops(5).p_ne).unwrap();
        assert!(f.kernel().is_none());
    }

    #[test]
    fn averaging_even_n_kernel_is_alternating() {
        let f = factorize(&ops(4).p_ne).unwrap();
        let k0 = f.kernel().expect("kernel expected for even N");
        let expected = [0.5, -0.5, 0.5, -0.5];
        for (a, b) in k0.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "kernel {k0:?}");
        }
    }

    #[test]
    fn mixed_mass_even_n_kernel_detected_on_nonuniform_mesh() {
        let mesh = Mesh::nonuniform_periodic(&[1.0, 2.0, 0.5, 1.5, 0.75, 1.25]).unwrap();
        let ops = assemble_all(mesh);
        let f = factorize(&ops.m_en).unwrap();
        let k0 = f.kernel().expect("kernel expected");
        let residual = norm_inf(&ops.m_en.apply(k0).unwrap());
        assert!(residual <= 1e-10 * ops.m_en.norm_inf());
    }

    #[test]
    fn solve_roundtrip_odd_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ops = ops(7);
        for matrix in [&ops.m_nn, &ops.p_ne, &ops.m_en, &ops.m_ee] {
            let f = factorize(matrix).unwrap();
            let v: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let rhs = matrix.apply(&v).unwrap();
            let x = f.solve(&rhs).unwrap();
            for (a, b) in x.iter().zip(&v) {
                assert!((a - b).abs() < 1e-12, "{}", matrix.label());
            }
        }
    }

    #[test]
    fn diagonal_solve_divides_by_widths() {
        let mesh = Mesh::nonuniform_periodic(&[2.0, 4.0, 8.0]).unwrap();
        let ops = assemble_all(mesh);
        let f = factorize(&ops.m_ee).unwrap();
        let x: Vec<f64> = f.solve(&[2.0, 4.0, 8.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn constants_preserved_by_averaging_solve() {
        let ops = ops(5);
        let f = factorize(&ops.p_ne).unwrap();
        let x = f.solve(&[1.0; 5]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn solve_on_kernel_matrix_is_refused() {
        let ops = ops(4);
        let f = factorize(&ops.p_ne).unwrap();
        assert!(matches!(
            f.solve(&[1.0; 4]),
            Err(Error::KernelPresent { .. })
        ));
    }

    #[test]
    fn augmented_consistent_rhs_returns_preimage() {
        let ops = ops(4);
        let f = factorize(&ops.p_ne).unwrap();
        let k0 = f.kernel().unwrap().to_vec();
        // w orthogonal to the kernel
        let mut w = vec![0.3, 1.0, -0.7, 0.2];
        let proj = dot(&k0, &w);
        for (wi, ki) in w.iter_mut().zip(&k0) {
            *wi -= proj * ki;
        }
        let rhs = ops.p_ne.apply(&w).unwrap();
        let x = f.solve_augmented(&rhs).unwrap();
        for (a, b) in x.iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn augmented_kernel_aligned_rhs_returns_zero() {
        let ops = ops(4);
        let f = factorize(&ops.p_ne).unwrap();
        let k0 = f.kernel().unwrap().to_vec();
        let (x, lambda) = f.solve_augmented_with_multiplier(&k0).unwrap();
        assert!(norm_inf(&x) < 1e-12);
        assert!((lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn augmented_solution_is_kernel_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let ops = ops(6);
        for matrix in [&ops.p_ne, &ops.m_en] {
            let f = factorize(matrix).unwrap();
            let k0 = f.kernel().unwrap().to_vec();
            let rhs: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = f.solve_augmented(&rhs).unwrap();
            assert!(dot(&k0, &x).abs() <= 1e-10 * norm_inf(&x).max(1.0));
        }
    }

    #[test]
    fn augmented_without_kernel_is_refused() {
        let ops = ops(5);
        let f = factorize(&ops.m_nn).unwrap();
        assert!(matches!(
            f.solve_augmented(&[1.0; 5]),
            Err(Error::NoKernel { .. })
        ));
    }

    #[test]
    fn nodal_mass_factorizes_up_to_4096() {
        for n in (3..=40).chain([128, 1024, 4096]) {
            let ops = ops(n);
            let f = factorize(&ops.m_nn).unwrap();
            assert!(f.kernel().is_none(), "n = {n}");
            let rhs = ops.m_nn.apply(&vec![1.0; n]).unwrap();
            let x = f.solve(&rhs).unwrap();
            for v in x {
                assert!((v - 1.0).abs() < 1e-10, "n = {n}");
            }
        }
    }
}
