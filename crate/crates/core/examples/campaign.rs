//! A small randomized campaign, printed as CSV.

use qfi_core::campaign::{run_campaign, CampaignConfig, Check};
use qfi_core::report::{render, Format};

fn main() -> qfi_core::Result<()> {
    let config = CampaignConfig {
        dims: vec![2, 3],
        num_obs: vec![2],
        instances_per_cell: 50,
        checks: vec![Check::Main, Check::Conj1, Check::Conj2],
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config, None)?;
    print!("{}", render(&report, Format::Csv)?);
    eprintln!("{} violations in {:.2}s", report.violation_count, report.runtime_seconds);
    Ok(())
}
