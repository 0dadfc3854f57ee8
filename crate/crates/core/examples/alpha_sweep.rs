//! Sensitivity of the system to the cluster HW, OS and SW failure rates.

use edgeavail::experiments::{run_alpha_sweep, Target, ALPHA_GRID};
use edgeavail::models::IntensityTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = IntensityTable::default();
    for target in [Target::Both, Target::Core5gcOnly] {
        let r = run_alpha_sweep(&t, target, &ALPHA_GRID)?;
        for row in &r.rows {
            println!("{},{:.6e}", row.scenario.config, row.unavailability);
        }
    }
    Ok(())
}
