//! Jacobi eigendecomposition of a random Hermitian matrix, with the
//! functional calculus built on top of it.

use qfi_core::linalg::{apply_scalar_function, hermitian_eigen, hermitian_eigen_shuffled};
use qfi_core::state::{random_observable, Observable};

fn main() -> qfi_core::Result<()> {
    let h = random_observable(5, 42)?;
    let e = hermitian_eigen(h.matrix())?;
    println!("eigenvalues: {:?}", e.eigenvalues);

    let err = (&e.reconstruct() - h.matrix().as_complex()).frobenius_norm();
    println!("‖U diag(λ) U† − H‖_F = {err:.2e}");

    let shuffled = hermitian_eigen_shuffled(h.matrix(), 7)?;
    let drift = e
        .eigenvalues
        .iter()
        .zip(&shuffled.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max eigenvalue drift under shuffled pivots: {drift:.2e}");

    // exp(σz) has eigenvalues e and 1/e
    let exp = apply_scalar_function(Observable::pauli_z().matrix(), f64::exp)?;
    println!("exp(σz) diagonal: {:.6} {:.6}", exp[(0, 0)].re, exp[(1, 1)].re);
    Ok(())
}
