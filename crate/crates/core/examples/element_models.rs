//! Unavailability of every element model at the default intensities, solved
//! exactly and cross-checked with the iterative solver.

use edgeavail::models::{build, model_unavailability, ElementKind, IntensityTable};
use edgeavail::san::Net;
use edgeavail::solver::Method;
use edgeavail::statespace::{explore, DEFAULT_MAX_STATES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = IntensityTable::default();
    println!("element,tangible,vanishing,U_gth,U_iter");
    for kind in ElementKind::ALL {
        let model = build(kind, &t);
        let g = explore(&Net::new(&model)?, DEFAULT_MAX_STATES)?;
        let gth = model_unavailability(&model, Method::Gth)?;
        let iter = model_unavailability(&model, Method::Iterative)?;
        println!(
            "{kind},{},{},{gth:.6e},{iter:.6e}",
            g.tangible_count(),
            g.vanishing_count()
        );
    }
    Ok(())
}
