//! The eight named redundancy configurations, from none to full.

use edgeavail::experiments::run_redundancy_configs;
use edgeavail::models::IntensityTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = run_redundancy_configs(&IntensityTable::default())?;
    for row in &r.rows {
        println!("{:<14} {:.4e}", row.scenario.config, row.unavailability);
    }
    Ok(())
}
