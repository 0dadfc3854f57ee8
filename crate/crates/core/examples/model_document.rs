//! Load a `.san` document, override a parameter and solve it.
//!
//! cargo run --example model_document -- models/meh.san lambda_VM 1e-3

use edgeavail::document::parse_model;
use edgeavail::models::model_unavailability;
use edgeavail::solver::Method;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "models/two_state.san".into());
    let mut model = parse_model(&std::fs::read_to_string(&path)?)?;
    if let (Some(name), Some(value)) = (args.next(), args.next()) {
        model.set_param(&name, value.parse()?)?;
    }
    println!("{path}: U = {:.6e}", model_unavailability(&model, Method::Gth)?);
    Ok(())
}
