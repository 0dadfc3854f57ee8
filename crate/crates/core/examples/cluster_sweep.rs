//! System unavailability as the 5GC/MANO cluster size and quorum change.

use edgeavail::experiments::{run_cluster_sweep, CLUSTER_SWEEP};
use edgeavail::models::IntensityTable;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = run_cluster_sweep(&IntensityTable::default(), &CLUSTER_SWEEP)?;
    print!("{}", r.to_csv());
    let both = |c: &str| r.row(c).map(|x| x.unavailability).unwrap_or(f64::NAN);
    eprintln!(
        "(10,10)/(10,9) = {:.1}, (10,9)/(10,8) = {:.3}",
        both("both:(10,10)") / both("both:(10,9)"),
        both("both:(10,9)") / both("both:(10,8)")
    );
    Ok(())
}
