//! The operator monotone catalogue: f(0), regularity, f̃, dominance and a
//! sampled operator-monotonicity check.

use qfi_core::monotone::{catalog, check_operator_monotone, dominates, standard_grid, MonotoneFunction};

fn main() -> qfi_core::Result<()> {
    for e in catalog() {
        let tilde = e.tilde.unwrap_or("-");
        println!("{:<14} f(0) = {:<10} {:<10} f~ = {tilde}", e.name, e.value_at_zero, e.regularity);
    }

    let sld = MonotoneFunction::parse("sld")?;
    let wy = MonotoneFunction::parse("wy")?;
    let r = dominates(&sld, &wy, &standard_grid())?;
    println!("\nsld vs wy: {:?}, min margin {:.3e}", r.ordering, r.min_margin);

    let wyd = MonotoneFunction::parse("wyd:0.3")?;
    let t = wyd.tilde()?;
    for x in [0.25, 1.0, 4.0] {
        println!("wyd:0.3  f({x}) = {:.6}  f~({x}) = {:.6}", wyd.eval(x)?, t.eval(x)?);
    }

    let rep = check_operator_monotone(&MonotoneFunction::parse("kubo-mori")?, 3, 200, 1)?;
    println!(
        "\nkubo-mori, 3x3: {} / {} pairs violate monotonicity (worst min eigenvalue {:.2e})",
        rep.failures, rep.trials, rep.worst_min_eigenvalue
    );
    Ok(())
}
