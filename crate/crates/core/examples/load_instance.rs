//! Load an instance file and evaluate every check on it.
//!
//!     cargo run --example load_instance -- path/to/instance.json

use qfi_core::inequalities::DEFAULT_TOL;
use qfi_core::instance::{compute, load_instance};

fn main() -> qfi_core::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/qubit_witness.json").to_string());
    let inst = load_instance(&path)?;
    let report = compute(&inst, &[0.0, 0.5, 1.0], DEFAULT_TOL)?;
    println!("n = {}, N = {}, det Cov = {}", report.n, report.num_obs, report.det_cov);
    for r in report.all_reports() {
        let f = r.digest.get("f").map(String::as_str).unwrap_or("");
        let g = r.digest.get("g").map(String::as_str).unwrap_or("");
        let t = r.digest.get("t").map(String::as_str).unwrap_or("");
        println!("{:<10} {f:<8} {g:<8} {t:<4} {:?} margin {:+.3e}", r.name, r.status, r.margin);
    }
    Ok(())
}
