//! The 36 RAN/MEH redundancy rows next to their published values.

use edgeavail::experiments::{run_table3, TABLE3_PUBLISHED};
use edgeavail::models::IntensityTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = run_table3(&IntensityTable::default())?;
    println!("config,computed_e4,published_e4,ratio");
    for (row, published) in r.rows.iter().zip(TABLE3_PUBLISHED) {
        let u = row.unavailability * 1e4;
        println!("{},{u:.3},{published:.3},{:.3}", row.scenario.config, u / published);
    }
    Ok(())
}
