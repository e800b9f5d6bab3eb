//! States, observables and the state's eigenframe.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, numeric_rank, ComplexMatrix, EigenDecomposition, HermitianMatrix,
};

pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue a [`DensityMatrix`] may have.
pub const POSITIVITY_FLOOR: f64 = 1e-10;
/// Smallest eigenvalue forced by the near-singular generator.
pub const NEAR_SINGULAR_FLOOR: f64 = 1e-8;
pub const MIN_GENERATED_DIM: usize = 2;
pub const MAX_GENERATED_DIM: usize = 16;

/// A strictly positive Hermitian matrix of unit trace, with its
/// eigendecomposition cached.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    eigen: EigenDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let eigen = hermitian_eigen(&matrix)?;
        Self::with_eigen(matrix, eigen)
    }

    /// Uses a caller-supplied decomposition of `matrix`, e.g. one produced
    /// with shuffled Jacobi pivots.
    pub fn with_eigen(matrix: HermitianMatrix, eigen: EigenDecomposition) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = eigen.eigenvalues.first().copied().unwrap_or(0.0);
        if min < POSITIVITY_FLOOR {
            return Err(Error::InvalidState(format!(
                "min eigenvalue {min:e} below positivity floor {POSITIVITY_FLOOR:e}"
            )));
        }
        Ok(Self { matrix, eigen })
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diag(probs))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::diagonal(&vec![1.0 / n as f64; n]).expect("maximally mixed state is valid")
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    /// Tr(D·A), real for Hermitian A.
    pub fn expectation(&self, a: &Observable) -> Result<f64> {
        Ok(self
            .matrix
            .as_complex()
            .trace_product(a.matrix().as_complex())?
            .re)
    }
}

/// A Hermitian matrix standing for a physical quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable(HermitianMatrix);

impl Observable {
    pub fn new(matrix: HermitianMatrix) -> Self {
        Self(matrix)
    }

    pub fn from_complex(m: ComplexMatrix, tol: f64) -> Result<Self> {
        Ok(Self(HermitianMatrix::try_from_complex(m, tol)?))
    }

    pub fn pauli_x() -> Self {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        Self(HermitianMatrix::symmetrized(&m))
    }

    pub fn pauli_y() -> Self {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        Self(HermitianMatrix::symmetrized(&m))
    }

    pub fn pauli_z() -> Self {
        Self(HermitianMatrix::from_real_diag(&[1.0, -1.0]))
    }

    pub fn identity(n: usize) -> Self {
        Self(HermitianMatrix::identity(n))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self(self.0.add(&HermitianMatrix::identity(self.dim()).scale(c)))
    }
}

pub(crate) fn check_same_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// A₀ = A − Tr(D·A)·1
pub fn centered(d: &DensityMatrix, a: &Observable) -> Result<Observable> {
    check_same_dim(d.dim(), a.dim())?;
    let mean = d.expectation(a)?;
    Ok(a.shifted(-mean))
}

/// Eigenvalues of D together with the centered observables written in D's
/// eigenbasis: Ǎ = U†·A₀·U.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    pub lambdas: Vec<f64>,
    pub checked: Vec<ComplexMatrix>,
}

impl EigenFrame {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn len(&self) -> usize {
        self.checked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checked.is_empty()
    }

    /// The same frame under the transposed index convention Ǎ ↦ Ǎᵀ.
    pub fn transposed(&self) -> Self {
        Self {
            lambdas: self.lambdas.clone(),
            checked: self.checked.iter().map(|m| m.transpose()).collect(),
        }
    }
}

pub fn eigenframe(d: &DensityMatrix, obs: &[Observable]) -> Result<EigenFrame> {
    let u = &d.eigen().unitary;
    let checked = obs
        .iter()
        .map(|a| centered(d, a)?.matrix().as_complex().conjugate_by(u))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenFrame {
        lambdas: d.eigenvalues().to_vec(),
        checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Generic,
    Degenerate,
    NearSingular,
}

impl StateKind {
    pub const ALL: [StateKind; 3] = [StateKind::Generic, StateKind::Degenerate, StateKind::NearSingular];

    pub fn as_str(&self) -> &'static str {
        match self {
            StateKind::Generic => "generic",
            StateKind::Degenerate => "degenerate",
            StateKind::NearSingular => "near-singular",
        }
    }

    pub fn tag(&self) -> u64 {
        match self {
            StateKind::Generic => 1,
            StateKind::Degenerate => 2,
            StateKind::NearSingular => 3,
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "generic" => Ok(StateKind::Generic),
            "degenerate" => Ok(StateKind::Degenerate),
            "near-singular" => Ok(StateKind::NearSingular),
            other => Err(Error::Config(format!("unknown state kind `{other}`"))),
        }
    }
}

fn check_generated_dim(n: usize) -> Result<()> {
    if !(MIN_GENERATED_DIM..=MAX_GENERATED_DIM).contains(&n) {
        return Err(Error::OutOfRange {
            what: "generated dimension (2..=16)",
            value: n as f64,
        });
    }
    Ok(())
}

pub(crate) fn complex_gaussian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    g
}

fn from_spectrum(u: &ComplexMatrix, lambdas: &[f64]) -> HermitianMatrix {
    let e = EigenDecomposition {
        eigenvalues: lambdas.to_vec(),
        unitary: u.clone(),
    };
    let m = HermitianMatrix::symmetrized(&e.reconstruct());
    let tr = m.trace();
    m.scale(1.0 / tr)
}

/// Random faithful state, deterministic in `(n, seed, kind)`.
///
/// `Generic` draws G·G†/Tr(G·G†) with G complex Gaussian. `Degenerate`
/// replaces a uniformly chosen eigenvalue pair by its average;
/// `NearSingular` pushes the smallest eigenvalue down to 1e-8. Both
/// renormalize afterwards.
pub fn random_density(n: usize, seed: u64, kind: StateKind) -> Result<DensityMatrix> {
    check_generated_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = complex_gaussian(n, &mut rng);
        let w = HermitianMatrix::symmetrized(&(&g * &g.adjoint()));
        let generic = w.scale(1.0 / w.trace());
        let candidate = match kind {
            StateKind::Generic => generic,
            StateKind::Degenerate => {
                let e = hermitian_eigen(&generic)?;
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let mut l = e.eigenvalues.clone();
                let avg = 0.5 * (l[i] + l[j]);
                l[i] = avg;
                l[j] = avg;
                from_spectrum(&e.unitary, &l)
            }
            StateKind::NearSingular => {
                let e = hermitian_eigen(&generic)?;
                let mut l = e.eigenvalues.clone();
                l[0] = NEAR_SINGULAR_FLOOR;
                from_spectrum(&e.unitary, &l)
            }
        };
        // renormalized trace can sit an ulp or two off; rescale once more
        let candidate = candidate.scale(1.0 / candidate.trace());
        match DensityMatrix::new(candidate) {
            Ok(d) => return Ok(d),
            // a Wishart draw with a sub-floor eigenvalue: redraw
            Err(Error::InvalidState(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// (G + G†)/2 normalized to unit Frobenius norm.
pub fn random_observable(n: usize, seed: u64) -> Result<Observable> {
    check_generated_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = HermitianMatrix::symmetrized(&complex_gaussian(n, &mut rng));
    let norm = h.frobenius_norm();
    Ok(Observable(h.scale(1.0 / norm)))
}

/// Random Hermitian matrix that is diagonal in D's eigenbasis.
pub fn random_eigenbasis_diagonal(d: &DensityMatrix, seed: u64) -> Observable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diag: Vec<f64> = (0..d.dim()).map(|_| rng.sample(StandardNormal)).collect();
    let e = EigenDecomposition {
        eigenvalues: diag,
        unitary: d.eigen().unitary.clone(),
    };
    Observable(HermitianMatrix::symmetrized(&e.reconstruct()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dependence {
    pub dependent: bool,
    pub rank: usize,
}

/// Eigenvalues closer than this (relative to the larger one) are treated
/// as one eigenspace by [`offdiagonal_dependence`].
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Offdiagonal dependence: some nonzero real combination of the Ǎ^(k) is
/// diagonal, or block diagonal when D has repeated eigenvalues (that is,
/// the combination commutes with D). Each Ǎ^(k) contributes the real and
/// imaginary parts of its strict upper triangle, restricted to pairs of
/// distinct eigenvalues.
pub fn offdiagonal_dependence(frame: &EigenFrame, tol: f64) -> Dependence {
    let n = frame.dim();
    let l = &frame.lambdas;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|h| ((h + 1)..n).map(move |j| (h, j)))
        .filter(|&(h, j)| (l[h] - l[j]).abs() > DEGENERACY_TOL * l[h].max(l[j]))
        .collect();
    if pairs.is_empty() {
        return Dependence {
            dependent: !frame.is_empty(),
            rank: 0,
        };
    }
    let vectors: Vec<Vec<f64>> = frame
        .checked
        .iter()
        .map(|m| pairs.iter().flat_map(|&(h, j)| [m[(h, j)].re, m[(h, j)].im]).collect())
        .collect();
    let rank = numeric_rank(&vectors, tol);
    Dependence {
        dependent: rank < frame.len(),
        rank,
    }
}

/// Real-coefficient linear dependence of the centered family A₀^(k),
/// each flattened to 2n² reals.
pub fn linear_dependence(d: &DensityMatrix, obs: &[Observable], tol: f64) -> Result<Dependence> {
    let vectors = obs
        .iter()
        .map(|a| {
            let c = centered(d, a)?;
            Ok(c.matrix()
                .as_complex()
                .as_slice()
                .iter()
                .flat_map(|z| [z.re, z.im])
                .collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = numeric_rank(&vectors, tol);
    Ok(Dependence {
        dependent: rank < obs.len(),
        rank,
    })
}

fn validate_partition(n: usize, partition: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n];
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &i in block {
            if i >= n {
                return Err(Error::InvalidPartition(format!("index {i} out of range for n = {n}")));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
            seen[i] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("index {missing} not covered")));
    }
    Ok(())
}

/// X ↦ Σ_i P_i X P_i for the coordinate projections of `partition`
/// (0-based indices).
pub fn pinching(x: &ComplexMatrix, partition: &[Vec<usize>]) -> Result<ComplexMatrix> {
    let n = x.dim();
    validate_partition(n, partition)?;
    let mut block_of = vec![0usize; n];
    for (b, block) in partition.iter().enumerate() {
        for &i in block {
            block_of[i] = b;
        }
    }
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if block_of[i] == block_of[j] {
                out[(i, j)] = x[(i, j)];
            }
        }
    }
    Ok(out)
}

pub fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let blocks = rng.random_range(1..=n);
    let mut partition: Vec<Vec<usize>> = (0..blocks).map(|b| vec![b]).collect();
    for i in blocks..n {
        let b = rng.random_range(0..blocks);
        partition[b].push(i);
    }
    partition
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a tuple of integers into one seed; order-sensitive.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x5EED_u64, |acc, &p| mix64(acc ^ mix64(p)))
}
