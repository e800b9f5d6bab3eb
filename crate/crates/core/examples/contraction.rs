//! Monotone metrics contract under the pinching channel.

use qfi_core::inequalities::{check_metric_contraction, DEFAULT_TOL};
use qfi_core::monotone::catalog_members;
use qfi_core::state::{random_density, random_observable, StateKind};

fn main() -> qfi_core::Result<()> {
    let d = random_density(4, 1, StateKind::Generic)?;
    let x = random_observable(4, 2)?;
    let partition = vec![vec![0, 2], vec![1], vec![3]];
    for f in catalog_members() {
        let r = check_metric_contraction(&d, x.matrix(), &f, &partition, DEFAULT_TOL)?;
        println!("{:<14} K_D(X,X) = {:>10.4}  after pinching {:>10.4}", f.name(), r.lhs, r.rhs);
    }
    Ok(())
}
