//! When does det Cov equal det Qov? Linear dependence of the centered
//! observables versus mere offdiagonal dependence.

use qfi_core::inequalities::classify_equality;
use qfi_core::monotone::MonotoneFunction;
use qfi_core::state::{random_density, random_eigenbasis_diagonal, random_observable, Observable, StateKind};

fn main() -> qfi_core::Result<()> {
    let sld = MonotoneFunction::parse("sld")?;
    let wy = MonotoneFunction::parse("wy")?;
    let d = random_density(3, 5, StateKind::Generic)?;
    let a = random_observable(3, 6)?;
    let b = random_observable(3, 7)?;

    let families: [(&str, Vec<Observable>); 3] = [
        ("independent", vec![a.clone(), b.clone()]),
        ("dependent (b = 2a + 3·I)", vec![a.clone(), a.scale(2.0).shifted(3.0)]),
        ("offdiagonally dependent", vec![a.clone(), a.add(&random_eigenbasis_diagonal(&d, 8))]),
    ];
    for (label, obs) in families {
        let e = classify_equality(&d, &sld, Some(&wy), &obs, 1e-9)?;
        println!("{label}");
        println!(
            "  det Cov {:.3e}  det Qov_sld {:.3e}  det Qov_wy {:.3e}",
            e.det_cov,
            e.det_qov_f,
            e.det_qov_g.unwrap_or(f64::NAN)
        );
        println!("  a = {}  b = {:?}  c = {}  offdiagonal = {}", e.a, e.b, e.c, e.offdiagonal.dependent);
    }
    Ok(())
}
