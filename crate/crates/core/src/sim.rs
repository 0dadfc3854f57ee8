//! Discrete-event Monte-Carlo estimation of a steady-state reward.
//!
//! Independent of the state-space path: the simulator plays the token game
//! directly on a [`Net`]. In each tangible marking every enabled timed
//! activity is raced with its current exponential rate (resampling after each
//! event is exact for memoryless delays), the winning case is drawn by
//! probability, and instantaneous activities then fire with zero dwell until
//! the marking is tangible again.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). A single run uses stream 0
//! of the generator seeded with `seed`; replication `i` uses stream `i + 1`,
//! so replication seeds are derived reproducibly and can run in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::san::{Marking, Net, SanError};

/// Consecutive instantaneous firings allowed without time advancing.
pub const MAX_INSTANT_FIRINGS: usize = 1_000_000;

/// Fraction of the horizon discarded as warm-up when none is given.
pub const DEFAULT_WARMUP_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEstimate {
    /// Time-average reward over `(warmup, horizon]`.
    pub point: f64,
    /// Half-width of the 95% Student-t confidence interval.
    pub ci_halfwidth: f64,
    /// Number of batches (or replications).
    pub batches: usize,
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
    pub events: u64,
}

impl SimEstimate {
    pub fn lower(&self) -> f64 {
        self.point - self.ci_halfwidth
    }

    pub fn upper(&self) -> f64 {
        self.point + self.ci_halfwidth
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower() <= x && x <= self.upper()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vanishing livelock: {0} instantaneous firings without time advancing")]
    VanishingLivelock(usize),
    #[error(transparent)]
    San(#[from] SanError),
}

struct Trajectory<'a> {
    net: &'a Net,
    reward: usize,
    rng: ChaCha8Rng,
    marking: Marking,
    events: u64,
}

impl<'a> Trajectory<'a> {
    fn new(net: &'a Net, reward: usize, rng: ChaCha8Rng) -> Result<Self, SimError> {
        let mut t = Self {
            net,
            reward,
            rng,
            marking: net.initial_marking(),
            events: 0,
        };
        t.settle()?;
        Ok(t)
    }

    fn pick_case(&mut self, a: usize) -> usize {
        let u: f64 = self.rng.random();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, p) in self.net.case_probabilities(a).enumerate() {
            if p == 0.0 {
                continue;
            }
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
        last
    }

    /// Fire instantaneous activities until the marking is tangible.
    fn settle(&mut self) -> Result<(), SimError> {
        for _ in 0..MAX_INSTANT_FIRINGS {
            let inst = self.net.enabled_instantaneous(&self.marking)?;
            if inst.is_empty() {
                return Ok(());
            }
            let a = inst[self.rng.random_range(0..inst.len())];
            let case = self.pick_case(a);
            self.marking = self.net.fire(&self.marking, a, case)?;
            self.events += 1;
        }
        Err(SimError::VanishingLivelock(MAX_INSTANT_FIRINGS))
    }

    /// Run until `horizon`, calling `sink(from, to)` for every interval spent
    /// in a rewarded marking.
    fn run(&mut self, horizon: f64, mut sink: impl FnMut(f64, f64)) -> Result<(), SimError> {
        let mut now = 0.0;
        let mut rates = Vec::new();
        while now < horizon {
            rates.clear();
            let mut total = 0.0;
            for a in self.net.enabled(&self.marking)? {
                let r = self.net.rate(&self.marking, a)?;
                total += r;
                rates.push((a, r));
            }
            let next = if total > 0.0 {
                now + Exp::new(total).expect("positive rate").sample(&mut self.rng)
            } else {
                f64::INFINITY
            };
            if self.net.reward(&self.marking, self.reward)? {
                sink(now, next.min(horizon));
            }
            if next >= horizon {
                break;
            }
            let mut u = self.rng.random::<f64>() * total;
            let mut chosen = rates[rates.len() - 1].0;
            for &(a, r) in &rates {
                if u < r {
                    chosen = a;
                    break;
                }
                u -= r;
            }
            let case = self.pick_case(chosen);
            self.marking = self.net.fire(&self.marking, chosen, case)?;
            self.events += 1;
            self.settle()?;
            now = next;
        }
        Ok(())
    }
}

fn check_window(horizon: f64, warmup: f64) -> Result<(), SimError> {
    if !(horizon.is_finite() && warmup >= 0.0 && horizon > warmup) {
        return Err(SimError::InvalidArgument(format!(
            "need 0 <= warmup < horizon, got warmup {warmup}, horizon {horizon}"
        )));
    }
    Ok(())
}

/// 95% two-sided Student-t half-width for the mean of `xs`.
fn t_interval(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .expect("at least two samples")
        .inverse_cdf(0.975);
    (mean, t * (var / n).sqrt())
}

/// One long run; batch means over `batches` equal slices of
/// `(warmup, horizon]`.
pub fn simulate(
    net: &Net,
    reward: &str,
    horizon: f64,
    warmup: f64,
    batches: usize,
    seed: u64,
) -> Result<SimEstimate, SimError> {
    if batches < 2 {
        return Err(SimError::InvalidArgument(format!(
            "batches must be at least 2, got {batches}"
        )));
    }
    check_window(horizon, warmup)?;
    let r = net.reward_index(reward)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);

    let len = (horizon - warmup) / batches as f64;
    let mut up = vec![0.0; batches];
    let mut traj = Trajectory::new(net, r, rng)?;
    traj.run(horizon, |a, b| {
        let a = a.max(warmup);
        if b <= a {
            return;
        }
        let first = (((a - warmup) / len) as usize).min(batches - 1);
        let last = (((b - warmup) / len) as usize).min(batches - 1);
        for (k, slot) in up.iter_mut().enumerate().take(last + 1).skip(first) {
            let lo = warmup + k as f64 * len;
            let hi = if k == batches - 1 { horizon } else { lo + len };
            let overlap = b.min(hi) - a.max(lo);
            if overlap > 0.0 {
                *slot += overlap;
            }
        }
    })?;
    let means: Vec<f64> = up.iter().map(|u| u / len).collect();
    let (point, ci_halfwidth) = t_interval(&means);
    Ok(SimEstimate {
        point: point.clamp(0.0, 1.0),
        ci_halfwidth,
        batches,
        horizon,
        warmup,
        seed,
        events: traj.events,
    })
}

/// Independent replications on derived streams; CI across replications.
pub fn simulate_replicated(
    net: &Net,
    reward: &str,
    horizon: f64,
    warmup: f64,
    replications: usize,
    seed: u64,
) -> Result<SimEstimate, SimError> {
    if replications < 2 {
        return Err(SimError::InvalidArgument(format!(
            "replications must be at least 2, got {replications}"
        )));
    }
    check_window(horizon, warmup)?;
    let r = net.reward_index(reward)?;
    let runs: Vec<(f64, u64)> = (0..replications)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let mut up = 0.0;
            let mut traj = Trajectory::new(net, r, rng)?;
            traj.run(horizon, |a, b| {
                let a = a.max(warmup);
                if b > a {
                    up += b - a;
                }
            })?;
            Ok((up / (horizon - warmup), traj.events))
        })
        .collect::<Result<_, SimError>>()?;
    let means: Vec<f64> = runs.iter().map(|(m, _)| *m).collect();
    let (point, ci_halfwidth) = t_interval(&means);
    Ok(SimEstimate {
        point: point.clamp(0.0, 1.0),
        ci_halfwidth,
        batches: replications,
        horizon,
        warmup,
        seed,
        events: runs.iter().map(|(_, e)| e).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::san::tests::two_state;
    use crate::san::{Activity, Effect, SanModel};

    #[test]
    fn two_state_long_run() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let est = simulate(&net, "up", 1e6, 1e4, 20, 7).unwrap();
        assert!((est.point - 0.9).abs() < 0.005, "{est:?}");
        assert!(est.contains(0.9), "{est:?}");
    }

    #[test]
    fn same_seed_same_result() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let a = simulate(&net, "up", 1e4, 100.0, 10, 42).unwrap();
        let b = simulate(&net, "up", 1e4, 100.0, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.point.to_bits(), b.point.to_bits());
        let c = simulate(&net, "up", 1e4, 100.0, 10, 43).unwrap();
        assert_ne!(a.point, c.point);
    }

    #[test]
    fn replications_cover_analytic_value() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let est = simulate_replicated(&net, "up", 2e4, 200.0, 20, 3).unwrap();
        assert!(est.contains(0.9), "{est:?}");
        assert_eq!(est.batches, 20);
        let again = simulate_replicated(&net, "up", 2e4, 200.0, 20, 3).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn argument_checks() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        assert!(matches!(
            simulate(&net, "up", 100.0, 1.0, 1, 0),
            Err(SimError::InvalidArgument(_))
        ));
        assert!(matches!(
            simulate_replicated(&net, "up", 100.0, 1.0, 1, 0),
            Err(SimError::InvalidArgument(_))
        ));
        assert!(matches!(
            simulate(&net, "up", 10.0, 10.0, 5, 0),
            Err(SimError::InvalidArgument(_))
        ));
        assert!(matches!(
            simulate(&net, "nope", 100.0, 1.0, 5, 0),
            Err(SimError::San(SanError::UnknownReward(_)))
        ));
    }

    #[test]
    fn instantaneous_livelock_detected() {
        let e = |s: &str| -> Expr { s.parse().unwrap() };
        let mut m = SanModel::new("livelock");
        m.place("A", 1).place("B", 0);
        m.activity(
            Activity::instantaneous("ab")
                .with_input(e("#A >= 1"), vec![Effect::sub("A", 1.0)])
                .with_case(e("1"), vec![Effect::add("B", 1.0)]),
        )
        .activity(
            Activity::instantaneous("ba")
                .with_input(e("#B >= 1"), vec![Effect::sub("B", 1.0)])
                .with_case(e("1"), vec![Effect::add("A", 1.0)]),
        )
        .reward("up", e("#A >= 1"));
        let net = Net::new(&m).unwrap();
        assert!(matches!(
            simulate(&net, "up", 10.0, 1.0, 2, 0),
            Err(SimError::VanishingLivelock(_))
        ));
    }

    #[test]
    fn t_interval_known_values() {
        // mean 2, sample sd 1, n = 4 -> t(0.975, 3) * 0.5
        let (m, h) = t_interval(&[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        let sd = (2.0f64 / 3.0).sqrt();
        assert!((h - 3.182_446_305_284_263 * sd / 2.0).abs() < 1e-9, "{h}");
    }
}
