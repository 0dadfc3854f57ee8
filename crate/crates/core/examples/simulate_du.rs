//! Simulate the DU model with a few seeds and check each interval against
//! the exact solution.

use edgeavail::models::{build, ElementKind, IntensityTable};
use edgeavail::san::Net;
use edgeavail::sim::simulate;
use edgeavail::solver;
use edgeavail::statespace::{build_ctmc, DEFAULT_MAX_STATES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = Net::new(&build(ElementKind::DU, &IntensityTable::default()))?;
    let ctmc = build_ctmc(&net, "up", DEFAULT_MAX_STATES)?;
    let exact = 1.0 - solver::unavailability(&ctmc, &solver::steady_state_gth(&ctmc)?);
    println!("exact availability {exact:.8}");
    for seed in 1..=5 {
        let r = simulate(&net, "up", 1e7, 1e5, 30, seed)?;
        println!(
            "seed {seed}: {:.8} +- {:.2e} covers={} events={}",
            r.point,
            r.ci_halfwidth,
            r.contains(exact),
            r.events
        );
    }
    Ok(())
}
