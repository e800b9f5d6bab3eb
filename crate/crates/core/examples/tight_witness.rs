//! D = diag(3/4, 1/4) with σx, σy and the SLD function: the remainder
//! bound is attained.

use qfi_core::inequalities::{check_conj1, check_firey, DEFAULT_TOL};
use qfi_core::instance::load_instance;

fn main() -> qfi_core::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/qubit_witness.json");
    let inst = load_instance(path)?;
    let sld = &inst.functions[0];

    let r = check_conj1(&inst.state, sld, &inst.observables, DEFAULT_TOL)?;
    println!("det Cov = {}", r.lhs);
    for (k, v) in &r.components {
        println!("  {k:<22} {v}");
    }
    println!("margin {:e}", r.margin);

    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let r = check_firey(&inst.state, sld, None, &inst.observables, t, DEFAULT_TOL)?;
        println!("t = {t:<4}  lhs {:.6}  rhs {:.6}  margin {:+.1e}", r.lhs, r.rhs, r.margin);
    }
    Ok(())
}
