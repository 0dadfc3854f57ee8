//! A single repairable unit: build the net in code, solve it, compare with
//! mu / (lambda + mu).

use edgeavail::models::model_unavailability;
use edgeavail::san::{Activity, Effect, SanModel};
use edgeavail::solver::Method;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (lambda, mu) = (1e-3, 0.5);
    let mut m = SanModel::new("unit");
    m.place("Up", 1)
        .place("Down", 0)
        .param("lambda", lambda)
        .param("mu", mu)
        .activity(
            Activity::timed("fail", "lambda".parse()?)
                .with_input("#Up >= 1".parse()?, vec![Effect::sub("Up", 1.0)])
                .with_case("1".parse()?, vec![Effect::add("Down", 1.0)]),
        )
        .activity(
            Activity::timed("repair", "mu".parse()?)
                .with_input("#Down >= 1".parse()?, vec![Effect::sub("Down", 1.0)])
                .with_case("1".parse()?, vec![Effect::add("Up", 1.0)]),
        )
        .reward("up", "#Up >= 1".parse()?);

    let u = model_unavailability(&m, Method::Gth)?;
    println!("solved    {u:.12e}");
    println!("analytic  {:.12e}", lambda / (lambda + mu));
    Ok(())
}
