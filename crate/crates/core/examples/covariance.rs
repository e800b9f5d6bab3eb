//! Cov and Qov computed two ways: directly from D and through the
//! eigenbasis coefficients α_hj.

use qfi_core::covariance::{cov_matrix, cov_matrix_frame, qov_matrix, qov_matrix_frame};
use qfi_core::linalg::det_real_symmetric;
use qfi_core::monotone::regular_catalog_members;
use qfi_core::state::{eigenframe, random_density, random_observable, StateKind};

fn main() -> qfi_core::Result<()> {
    let d = random_density(4, 3, StateKind::Generic)?;
    let obs: Vec<_> = (0..3).map(|k| random_observable(4, 10 + k)).collect::<Result<_, _>>()?;
    let frame = eigenframe(&d, &obs)?;

    let c = cov_matrix(&d, &obs)?;
    let gap = c.sub(&cov_matrix_frame(&frame)?).max_abs();
    println!("det Cov = {:.6e}   (routes differ by {gap:.1e})", det_real_symmetric(&c)?);

    for f in regular_catalog_members() {
        let q = qov_matrix(&d, &f, &obs)?;
        let gap = q.sub(&qov_matrix_frame(&frame, &f)?).max_abs();
        println!("{:<10} det Qov = {:.6e}   (routes differ by {gap:.1e})", f.name(), det_real_symmetric(&q)?);
    }
    Ok(())
}
