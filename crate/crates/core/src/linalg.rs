//! Dense complex linear algebra at desk scale.
//!
//! Everything here is sized for n ≤ 16: Hermitian eigendecomposition by the
//! cyclic Jacobi method, commutators, functional calculus through the
//! spectral decomposition, determinants of small real symmetric matrices and
//! a one-sided Jacobi SVD for numeric rank.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const C0: Complex64 = Complex64::new(0.0, 0.0);
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_REL_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C1;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::BadShape {
                    dim,
                    len: r.len() * dim,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Tr(self · rhs) without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<Complex64> {
        self.check_dim(rhs)?;
        let n = self.dim;
        let mut acc = C0;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    /// U† · self · U
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.adjoint().try_mul(&self.try_mul(u)?)
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

/// A complex matrix equal to its own adjoint. Hermiticity is exact: the
/// constructors mirror the upper triangle onto the lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Symmetrizes `m` as (m + m†)/2.
    pub fn symmetrized(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self(out)
    }

    /// Accepts `m` if it is Hermitian within `tol` (absolute, entrywise),
    /// then mirrors it exactly.
    pub fn try_from_complex(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let n = m.dim();
        for i in 0..n {
            for j in i..n {
                let diff = (m[(i, j)] - m[(j, i)].conj()).norm();
                if diff > tol {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        diff,
                    });
                }
            }
        }
        Ok(Self::symmetrized(&m))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diag(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// Spectral decomposition H = U · diag(λ) · U†, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors.
    pub unitary: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let u = &self.unitary;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C0;
                for (k, &l) in self.eigenvalues.iter().enumerate() {
                    acc += u[(i, k)] * l * u[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let pivots: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
        .collect();
    jacobi(h, |_| pivots.clone())
}

/// Same solver, but each sweep visits the pivots in a seeded random order.
/// Within degenerate eigenspaces this lands on a different orthonormal
/// basis, which is useful for basis-independence checks.
pub fn hermitian_eigen_shuffled(h: &HermitianMatrix, seed: u64) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
        .collect();
    jacobi(h, move |_| {
        let mut order = base.clone();
        order.shuffle(&mut rng);
        order
    })
}

fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<F>(h: &HermitianMatrix, mut pivot_order: F) -> Result<EigenDecomposition>
where
    F: FnMut(usize) -> Vec<(usize, usize)>,
{
    let n = h.dim();
    let mut a = h.as_complex().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_REL_TOL * a.frobenius_norm();

    let mut converged = false;
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_norm(&a) <= threshold {
            converged = true;
            break;
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for (p, q) in pivot_order(sweep) {
            rotate(&mut a, &mut v, p, q);
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off: off_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep solver order
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut unitary = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            unitary[(row, col)] = v[(row, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        unitary,
    })
}

/// One complex Jacobi rotation annihilating a[p][q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let c = apq.norm();
    if c == 0.0 {
        return;
    }
    let phase = apq / c;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * c);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // G = diag(1, conj(phase)) · [[cs, sn], [-sn, cs]] on the (p, q) plane
    let g_pp = Complex64::new(cs, 0.0);
    let g_pq = Complex64::new(sn, 0.0);
    let g_qp = phase.conj() * (-sn);
    let g_qq = phase.conj() * cs;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// [A, B] = AB − BA
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    Ok(&ab - &ba)
}

/// φ(H) = U · diag(φ(λ)) · U†. A non-finite φ(λ) is reported as a domain
/// error for that eigenvalue.
pub fn apply_scalar_function<F>(h: &HermitianMatrix, phi: F) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let eig = hermitian_eigen(h)?;
    apply_with_eigen(&eig, phi)
}

pub fn apply_with_eigen<F>(eig: &EigenDecomposition, phi: F) -> Result<HermitianMatrix>
where
    F: Fn(f64) -> f64,
{
    let mapped = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let y = phi(l);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::OutsideDomain(l))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let out = EigenDecomposition {
        eigenvalues: mapped,
        unitary: eig.unitary.clone(),
    };
    Ok(HermitianMatrix::symmetrized(&out.reconstruct()))
}

/// Real symmetric N×N matrix, row-major.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// No symmetry check here; [`det_real_symmetric`] and friends validate.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::BadShape {
                    dim,
                    len: r.len() * dim,
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// a·self + b·other
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(1.0, other, -1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> (usize, usize, f64) {
        let n = self.dim;
        let mut worst = (0, 0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (self[(i, j)] - self[(j, i)]).abs();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        worst
    }

    fn check_symmetric(&self, tol: f64) -> Result<()> {
        let (row, col, diff) = self.max_asymmetry();
        if diff > tol * self.max_abs().max(1.0) {
            return Err(Error::NotSymmetric { row, col, diff });
        }
        Ok(())
    }

    fn to_hermitian(&self) -> HermitianMatrix {
        let n = self.dim;
        let data = self
            .data
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        HermitianMatrix::symmetrized(&ComplexMatrix { dim: n, data })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_symmetric(SYMMETRY_TOL)?;
        Ok(hermitian_eigen(&self.to_hermitian())?.eigenvalues)
    }
}

impl Index<(usize, usize)> for SymmetricMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for SymmetricMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

pub const SYMMETRY_TOL: f64 = 1e-12;

/// Determinant as the product of eigenvalues. Near-singular inputs keep
/// their small eigenvalues accurate, which LU pivoting does not guarantee.
pub fn det_real_symmetric(m: &SymmetricMatrix) -> Result<f64> {
    if m.dim() == 0 {
        return Ok(1.0);
    }
    Ok(m.eigenvalues()?.iter().product())
}

pub fn min_eigenvalue_symmetric(m: &SymmetricMatrix) -> Result<f64> {
    Ok(m.eigenvalues()?.first().copied().unwrap_or(0.0))
}

pub fn min_eigenvalue(h: &HermitianMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(0.0))
}

/// Determinant of a general real square matrix by LU with partial pivoting.
pub fn det_general(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..n {
            let factor = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    det
}

/// Number of singular values of the stacked vectors above `tol` times the
/// largest one. Uses one-sided (Hestenes) Jacobi so small singular values
/// are not squared away as they would be through a Gram matrix.
pub fn numeric_rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    let sv = singular_values(vectors);
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}

pub fn singular_values(vectors: &[Vec<f64>]) -> Vec<f64> {
    let mut cols: Vec<Vec<f64>> = vectors.to_vec();
    let k = cols.len();
    if k == 0 {
        return Vec::new();
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _ in 0..60 {
        let mut rotated = false;
        for i in 0..k {
            for j in (i + 1)..k {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.iter().map(|c| dot(c, c).sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![C0, C1], vec![C1, C0]]).unwrap()
    }
    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![C0, -I], vec![I, C0]]).unwrap()
    }
    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&[1.0, -1.0])
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
            }
        }
        HermitianMatrix::symmetrized(&m)
    }

    #[test]
    fn eigen_of_diagonal_is_trivial() {
        let h = HermitianMatrix::from_real_diag(&[-1.0, 1.0]);
        let e = hermitian_eigen(&h).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
        assert_eq!(e.unitary, ComplexMatrix::identity(2));
    }

    #[test]
    fn eigen_of_pauli_x() {
        let h = HermitianMatrix::try_from_complex(pauli_x(), 0.0).unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=8 {
            for _ in 0..20 {
                let h = random_hermitian(n, &mut rng);
                let e = hermitian_eigen(&h).unwrap();
                let u = &e.unitary;
                let gram = &u.adjoint() * u;
                assert!((&gram - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-12);
                let rec = e.reconstruct();
                let err = (&rec - h.as_complex()).frobenius_norm() / h.frobenius_norm();
                assert!(err < 1e-11, "n={n} err={err}");
                assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn eigen_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random_hermitian(6, &mut rng);
        let a = hermitian_eigen(&h).unwrap();
        let b = hermitian_eigen(&h).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.unitary, b.unitary);
    }

    #[test]
    fn shuffled_pivots_agree_on_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = random_hermitian(5, &mut rng);
        let a = hermitian_eigen(&h).unwrap();
        let b = hermitian_eigen_shuffled(&h, 3).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn commutator_pauli_algebra() {
        let xy = commutator(&pauli_x(), &pauli_y()).unwrap();
        let expected = pauli_z().scale(c(0.0, 2.0));
        assert_eq!(xy, expected);
        let xx = commutator(&pauli_x(), &pauli_x()).unwrap();
        assert_eq!(xx, ComplexMatrix::zeros(2));
        let d1 = ComplexMatrix::from_real_diag(&[1.5, -2.0]);
        let d2 = ComplexMatrix::from_real_diag(&[0.25, 3.0]);
        assert_eq!(commutator(&d1, &d2).unwrap(), ComplexMatrix::zeros(2));
    }

    #[test]
    fn commutator_is_antisymmetric_and_traceless() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let a = random_hermitian(4, &mut rng).into_complex();
            let b = random_hermitian(4, &mut rng).into_complex();
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            for (x, y) in ab.as_slice().iter().zip(ba.as_slice()) {
                assert_eq!(*x, -*y);
            }
            let bound = 1e-12 * a.frobenius_norm() * b.frobenius_norm();
            assert!(ab.trace().norm() <= bound);
        }
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let r = commutator(&ComplexMatrix::zeros(2), &ComplexMatrix::zeros(3));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_function_cases() {
        let h = HermitianMatrix::from_real_diag(&[4.0, 9.0]);
        let r = apply_scalar_function(&h, f64::sqrt).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!((r[(1, 1)].re - 3.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(3, &mut rng);
        let id = apply_scalar_function(&h, |x| x).unwrap();
        assert!((id.as_complex() - h.as_complex()).frobenius_norm() < 1e-11);
        let sq = apply_scalar_function(&h, |x| x * x).unwrap();
        let hh = h.as_complex() * h.as_complex();
        assert!((sq.as_complex() - &hh).frobenius_norm() < 1e-11);

        let scaled = HermitianMatrix::identity(3).scale(2.5);
        let r = apply_scalar_function(&scaled, |x| x.ln()).unwrap();
        let expected = HermitianMatrix::identity(3).scale(2.5f64.ln());
        assert!((r.as_complex() - expected.as_complex()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn scalar_function_domain_error() {
        let h = HermitianMatrix::from_real_diag(&[-1.0, 2.0]);
        assert!(matches!(
            apply_scalar_function(&h, f64::sqrt),
            Err(Error::OutsideDomain(_))
        ));
    }

    fn cofactor_det(m: &[Vec<f64>]) -> f64 {
        let n = m.len();
        if n == 0 {
            return 1.0;
        }
        if n == 1 {
            return m[0][0];
        }
        let mut det = 0.0;
        for col in 0..n {
            let minor: Vec<Vec<f64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * m[0][col] * cofactor_det(&minor);
        }
        det
    }

    #[test]
    fn determinant_cases() {
        assert!((det_real_symmetric(&SymmetricMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-15);
        let d = SymmetricMatrix::from_diag(&[1.0 / 16.0, 9.0 / 16.0]);
        assert!((det_real_symmetric(&d).unwrap() - 9.0 / 256.0).abs() < 1e-16);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=5 {
            for _ in 0..20 {
                let mut rows = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in i..n {
                        let x: f64 = rng.sample(StandardNormal);
                        rows[i][j] = x;
                        rows[j][i] = x;
                    }
                }
                let m = SymmetricMatrix::from_rows(&rows).unwrap();
                let a = det_real_symmetric(&m).unwrap();
                let b = cofactor_det(&rows);
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-3), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn general_determinant_matches_cofactors() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=5 {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
                .collect();
            let (a, b) = (det_general(&rows), cofactor_det(&rows));
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
        assert_eq!(det_general(&[]), 1.0);
        assert_eq!(det_general(&[vec![0.0, 1.0], vec![-1.0, 0.0]]), 1.0);
    }

    #[test]
    fn determinant_rejects_asymmetry() {
        let m = SymmetricMatrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(matches!(
            det_real_symmetric(&m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn min_eigenvalue_cases() {
        let m = SymmetricMatrix::from_diag(&[0.8, 0.2]);
        assert!((min_eigenvalue_symmetric(&m).unwrap() - 0.2).abs() < 1e-16);
        assert_eq!(min_eigenvalue(&HermitianMatrix::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn rank_cases() {
        assert_eq!(numeric_rank(&[vec![1.0, 0.0], vec![0.0, 1.0]], 1e-10), 2);
        assert_eq!(numeric_rank(&[vec![1.0, 1.0], vec![2.0, 2.0]], 1e-10), 1);
        let v = vec![0.3, -1.2, 2.0];
        let w = vec![1.1, 0.4, -0.7];
        let s: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        assert_eq!(numeric_rank(&[v, w, s], 1e-10), 2);
        assert_eq!(numeric_rank(&[], 1e-10), 0);
        assert_eq!(numeric_rank(&[vec![0.0; 3], vec![0.0; 3]], 1e-10), 0);
    }
}
