//! Symmetrized covariance, the monotone metric and quantum covariance.
//!
//! Cov and Qov are each available along two routes:
//!
//! * from their definitions (`cov`, `qov`): trace formulas and the metric
//!   kernel applied to commutators;
//! * from the eigenframe double sums (`cov_frame`, `qov_frame`) with
//!   coefficients (λ_h+λ_j)/2 and (λ_h+λ_j)/2 − m_f̃(λ_h, λ_j).
//!
//! The two must agree; the test suites hold them to it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{commutator, det_general, ComplexMatrix, HermitianMatrix, SymmetricMatrix, I};
use crate::monotone::MonotoneFunction;
use crate::state::{check_same_dim, DensityMatrix, EigenFrame, Observable};

/// max(1, Σ_k ‖A^(k)‖_F²): the magnitude all tolerances are measured against.
pub fn instance_scale(obs: &[Observable]) -> f64 {
    obs.iter()
        .map(|a| a.matrix().frobenius_norm().powi(2))
        .sum::<f64>()
        .max(1.0)
}

/// ½(Tr(DAB) + Tr(DBA)) − Tr(DA)·Tr(DB)
pub fn cov(d: &DensityMatrix, a: &Observable, b: &Observable) -> Result<f64> {
    check_same_dim(d.dim(), a.dim())?;
    check_same_dim(d.dim(), b.dim())?;
    let dm = d.matrix().as_complex();
    let (am, bm) = (a.matrix().as_complex(), b.matrix().as_complex());
    let ab = am.try_mul(bm)?;
    let ba = bm.try_mul(am)?;
    let sym = 0.5 * (dm.trace_product(&ab)? + dm.trace_product(&ba)?);
    Ok(sym.re - d.expectation(a)? * d.expectation(b)?)
}

fn frame_index(frame: &EigenFrame, k: usize) -> Result<&ComplexMatrix> {
    frame.checked.get(k).ok_or(Error::IndexOutOfRange {
        index: k,
        len: frame.len(),
    })
}

/// Σ_{h,j} w_hj · Ǎ_hj · B̌_jh, without taking real parts.
fn weighted_sum<W>(frame: &EigenFrame, a: usize, b: usize, weight: W) -> Result<Complex64>
where
    W: Fn(usize, usize) -> f64,
{
    let (ma, mb) = (frame_index(frame, a)?, frame_index(frame, b)?);
    let n = frame.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for h in 0..n {
        for j in 0..n {
            acc += weight(h, j) * ma[(h, j)] * mb[(j, h)];
        }
    }
    Ok(acc)
}

/// The eigenframe sum Σ (λ_h+λ_j)/2 · Ǎ_hj B̌_jh as computed, imaginary
/// residue included.
pub fn cov_frame_complex(frame: &EigenFrame, a: usize, b: usize) -> Result<Complex64> {
    let l = &frame.lambdas;
    weighted_sum(frame, a, b, |h, j| 0.5 * (l[h] + l[j]))
}

pub fn cov_frame(frame: &EigenFrame, a: usize, b: usize) -> Result<f64> {
    Ok(cov_frame_complex(frame, a, b)?.re)
}

/// X̌ = U†·X·U in D's eigenbasis.
fn to_eigenbasis(d: &DensityMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.conjugate_by(&d.eigen().unitary)
}

/// 1/m_f(λ_h, λ_j) for all index pairs.
fn inverse_kernel(d: &DensityMatrix, f: &MonotoneFunction) -> Result<Vec<f64>> {
    let l = d.eigenvalues();
    let n = l.len();
    let mut out = Vec::with_capacity(n * n);
    for &x in l {
        for &y in l {
            let m = f.mean(x, y)?;
            if !(m > 0.0) || !(1.0 / m).is_finite() {
                return Err(Error::OutOfRange {
                    what: "metric kernel m_f(λ_h, λ_j)",
                    value: m,
                });
            }
            out.push(1.0 / m);
        }
    }
    Ok(out)
}

fn kernel_sum(x: &ComplexMatrix, y: &ComplexMatrix, inv: &[f64]) -> f64 {
    x.as_slice()
        .iter()
        .zip(y.as_slice())
        .zip(inv)
        .map(|((a, b), w)| (a.conj() * b).re * w)
        .sum()
}

/// ⟨X, Y⟩_{D,f} = Tr(X · (R^{1/2} f(L R⁻¹) R^{1/2})⁻¹ (Y)), evaluated in
/// D's eigenbasis where the superoperator is diagonal with entries
/// m_f(λ_h, λ_j): the result is Σ conj(X̌_hj)·Y̌_hj / m_f(λ_h, λ_j).
pub fn metric_inner(
    d: &DensityMatrix,
    f: &MonotoneFunction,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
) -> Result<f64> {
    check_same_dim(d.dim(), x.dim())?;
    check_same_dim(d.dim(), y.dim())?;
    let inv = inverse_kernel(d, f)?;
    let xc = to_eigenbasis(d, x.as_complex())?;
    let yc = to_eigenbasis(d, y.as_complex())?;
    Ok(kernel_sum(&xc, &yc, &inv))
}

/// i[D, A], Hermitian for Hermitian D and A.
pub fn commutator_tangent(d: &DensityMatrix, a: &Observable) -> Result<HermitianMatrix> {
    let c = commutator(d.matrix().as_complex(), a.matrix().as_complex())?.scale(I);
    Ok(HermitianMatrix::symmetrized(&c))
}

/// Qov_{D,f}(A, B) = (f(0)/2)·⟨i[D,A], i[D,B]⟩_{D,f}. Only defined here for
/// regular f.
pub fn qov(d: &DensityMatrix, f: &MonotoneFunction, a: &Observable, b: &Observable) -> Result<f64> {
    f.require_regular()?;
    let x = commutator_tangent(d, a)?;
    let y = commutator_tangent(d, b)?;
    Ok(0.5 * f.value_at_zero() * metric_inner(d, f, &x, &y)?)
}

/// α^(f)_hj = (λ_h+λ_j)/2 − m_f̃(λ_h, λ_j), with `tilde` = f̃.
pub fn alpha_coefficient(tilde: &MonotoneFunction, x: f64, y: f64) -> Result<f64> {
    Ok(0.5 * (x + y) - tilde.mean(x, y)?)
}

/// f(0)(x−y)²/(2·m_f(x, y)); equal to [`alpha_coefficient`] of f̃.
pub fn alpha_closed_form(f: &MonotoneFunction, x: f64, y: f64) -> Result<f64> {
    f.require_regular()?;
    let d = x - y;
    Ok(f.value_at_zero() * d * d / (2.0 * f.mean(x, y)?))
}

/// The n×n table of α^(f)_hj for the frame's eigenvalues.
pub fn alpha_table(lambdas: &[f64], f: &MonotoneFunction) -> Result<Vec<f64>> {
    let tilde = f.tilde()?;
    let mut out = Vec::with_capacity(lambdas.len() * lambdas.len());
    for &x in lambdas {
        for &y in lambdas {
            out.push(alpha_coefficient(&tilde, x, y)?);
        }
    }
    Ok(out)
}

pub fn qov_frame_complex(frame: &EigenFrame, f: &MonotoneFunction, a: usize, b: usize) -> Result<Complex64> {
    let table = alpha_table(&frame.lambdas, f)?;
    let n = frame.dim();
    weighted_sum(frame, a, b, |h, j| table[h * n + j])
}

pub fn qov_frame(frame: &EigenFrame, f: &MonotoneFunction, a: usize, b: usize) -> Result<f64> {
    Ok(qov_frame_complex(frame, f, a, b)?.re)
}

pub fn cov_matrix(d: &DensityMatrix, obs: &[Observable]) -> Result<SymmetricMatrix> {
    let n = obs.len();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = cov(d, &obs[i], &obs[j])?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// Entrywise [`qov`], sharing the commutators and kernel across entries.
pub fn qov_matrix(d: &DensityMatrix, f: &MonotoneFunction, obs: &[Observable]) -> Result<SymmetricMatrix> {
    f.require_regular()?;
    let inv = inverse_kernel(d, f)?;
    let tangents = obs
        .iter()
        .map(|a| to_eigenbasis(d, commutator_tangent(d, a)?.as_complex()))
        .collect::<Result<Vec<_>>>()?;
    let half_f0 = 0.5 * f.value_at_zero();
    let n = obs.len();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = half_f0 * kernel_sum(&tangents[i], &tangents[j], &inv);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn cov_matrix_frame(frame: &EigenFrame) -> Result<SymmetricMatrix> {
    let n = frame.len();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = cov_frame(frame, i, j)?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn qov_matrix_frame(frame: &EigenFrame, f: &MonotoneFunction) -> Result<SymmetricMatrix> {
    let table = alpha_table(&frame.lambdas, f)?;
    let dim = frame.dim();
    let n = frame.len();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = weighted_sum(frame, i, j, |h, k| table[h * dim + k])?.re;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

/// Real antisymmetric matrix [−(i/2)·Tr(D[A_h, A_j])].
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorBoundMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl CommutatorBoundMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn det(&self) -> f64 {
        det_general(&self.rows())
    }
}

pub fn robertson_matrix(d: &DensityMatrix, obs: &[Observable]) -> Result<CommutatorBoundMatrix> {
    let n = obs.len();
    let mut data = vec![0.0; n * n];
    for h in 0..n {
        for j in (h + 1)..n {
            check_same_dim(d.dim(), obs[h].dim())?;
            let c = commutator(obs[h].matrix().as_complex(), obs[j].matrix().as_complex())?;
            let t = d.matrix().as_complex().trace_product(&c)?;
            // −(i/2)·t; t is purely imaginary for Hermitian D, A, B
            let v = (Complex64::new(0.0, -0.5) * t).re;
            data[h * n + j] = v;
            data[j * n + h] = -v;
        }
    }
    if let Some(a) = obs.first() {
        check_same_dim(d.dim(), a.dim())?;
    }
    Ok(CommutatorBoundMatrix { dim: n, data })
}
