//! Parse a small fault tree, evaluate it, then compare the generated 5G-MEC
//! tree with the closed form.

use edgeavail::ft::{
    build_5gmec_ft, eval_ft, parse_ft, system_unavailability, ElementUnavailabilities,
    RedundancyConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = parse_ft("or(power = 1e-4, kofn(2, disk1 = 0.01, disk2 = 0.01, disk3 = 0.01))")?;
    println!("{tree}");
    println!("U = {:.6e}", eval_ft(&tree));

    let us = ElementUnavailabilities {
        ru: 7.2e-4,
        du: 6.5e-4,
        cu: 2.1e-4,
        meh: 6.1e-4,
        core_5gc: 2.7e-4,
        mano: 2.7e-4,
    };
    for cfg in [RedundancyConfig::uniform(1), RedundancyConfig::new(2, 2, 2, 2)?] {
        let ft = eval_ft(&build_5gmec_ft(cfg, &us));
        println!("{cfg}: tree {ft:.6e} closed form {:.6e}", system_unavailability(&us, cfg));
    }
    Ok(())
}
