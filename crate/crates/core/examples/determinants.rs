//! The matrix inequalities behind the bounds: Firey/Minkowski on plain
//! PSD matrices, and the Robertson commutator bound.

use qfi_core::inequalities::{check_robertson, minkowski_firey_selftest, DEFAULT_TOL};
use qfi_core::linalg::SymmetricMatrix;
use qfi_core::state::{random_density, random_observable, StateKind};

fn main() -> qfi_core::Result<()> {
    let k = SymmetricMatrix::identity(2);
    let l = SymmetricMatrix::from_diag(&[1.0, 4.0]);
    for t in [0.0, 0.5, 1.0] {
        let r = minkowski_firey_selftest(&k, &l, t)?;
        println!("Firey, t = {t}: {:.6} ≥ {:.6}", r.lhs, r.rhs);
    }

    let d = random_density(3, 11, StateKind::Generic)?;
    for n_obs in 1..=4 {
        let obs: Vec<_> = (0..n_obs).map(|k| random_observable(3, 100 + k)).collect::<Result<_, _>>()?;
        let r = check_robertson(&d, &obs, DEFAULT_TOL)?;
        println!("Robertson, N = {n_obs}: det Cov {:.4e} ≥ {:.4e}", r.lhs, r.rhs);
    }
    Ok(())
}
