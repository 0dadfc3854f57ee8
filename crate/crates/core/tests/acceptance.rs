//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line with
//! the measured values, then asserts.

use std::time::{Duration, Instant};

use edgeavail::document::{parse_model, serialize_model};
use edgeavail::experiments::{
    run_alpha_sweep, run_cluster_sweep, run_table3, Target, ALPHA_GRID, TABLE3_CONFIGS,
    TABLE3_PUBLISHED,
};
use edgeavail::ft::{build_5gmec_ft, eval_ft, system_unavailability, ElementUnavailabilities, RedundancyConfig};
use edgeavail::models::{build, model_unavailability, ElementKind, IntensityTable};
use edgeavail::san::{Activity, Effect, Net, SanModel};
use edgeavail::sim::simulate;
use edgeavail::solver::{self, Method};
use edgeavail::statespace::{build_ctmc, DEFAULT_MAX_STATES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, elapsed: Duration, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({:.2?}) {detail}", elapsed);
}

fn two_state(lambda: f64, mu: f64) -> SanModel {
    let e = |s: &str| s.parse().unwrap();
    let mut m = SanModel::new("two-state");
    m.place("Up", 1)
        .place("Down", 0)
        .param("lambda", lambda)
        .param("mu", mu)
        .activity(
            Activity::timed("fail", e("lambda"))
                .with_input(e("#Up >= 1"), vec![Effect::sub("Up", 1.0)])
                .with_case(e("1"), vec![Effect::add("Down", 1.0)]),
        )
        .activity(
            Activity::timed("repair", e("mu"))
                .with_input(e("#Down >= 1"), vec![Effect::sub("Down", 1.0)])
                .with_case(e("1"), vec![Effect::add("Up", 1.0)]),
        )
        .reward("up", e("#Up >= 1"));
    m
}

const BUILT_IN: [ElementKind; 5] = [
    ElementKind::RU,
    ElementKind::DU,
    ElementKind::CU,
    ElementKind::MEH,
    ElementKind::ClusterMANO,
];

#[test]
fn criterion_1_two_state_exactness() {
    let start = Instant::now();
    let model = two_state(0.1, 0.9);
    let gth = model_unavailability(&model, Method::Gth).unwrap();
    let iter = model_unavailability(&model, Method::Iterative).unwrap();
    let elapsed = start.elapsed();
    let pass = (gth - 0.1).abs() < 1e-12 && (iter - 0.1).abs() < 1e-10 && elapsed.as_secs_f64() < 1.0;
    report(1, pass, elapsed, &format!("gth={gth:e} iter={iter:e}"));
    assert!(pass);
}

#[test]
fn criterion_2_ru_closed_form() {
    let start = Instant::now();
    let t = IntensityTable::default();
    let u = model_unavailability(&build(ElementKind::RU, &t), Method::Gth).unwrap();
    let ratios = t.lambda_RH / t.mu_RH + t.lambda_A / t.mu_A + t.lambda_FW / t.mu_FW;
    let oracle = 1.0 - 1.0 / (1.0 + ratios);
    let elapsed = start.elapsed();
    let pass = (u - oracle).abs() < 1e-9 && elapsed.as_secs_f64() < 1.0;
    report(2, pass, elapsed, &format!("gth={u:.9e} analytic={oracle:.9e}"));
    assert!(pass);
}

#[test]
fn criterion_3_solver_cross_agreement() {
    let start = Instant::now();
    let t = IntensityTable::default();
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for kind in BUILT_IN {
        let model = build(kind, &t);
        let gth = model_unavailability(&model, Method::Gth).unwrap();
        let iter = model_unavailability(&model, Method::Iterative).unwrap();
        let rel = ((gth - iter) / gth).abs();
        worst = worst.max(rel);
        detail.push_str(&format!("{kind}:{rel:.1e} "));
    }
    let elapsed = start.elapsed();
    let pass = worst < 1e-8 && elapsed.as_secs_f64() < 10.0;
    report(3, pass, elapsed, &format!("max relative difference {worst:.2e} [{}]", detail.trim()));
    assert!(pass);
}

#[test]
fn criterion_4_simulator_covers_exact_value() {
    let start = Instant::now();
    let t = IntensityTable::default();
    let mut pass = true;
    let mut detail = String::new();
    for kind in [ElementKind::DU, ElementKind::MEH] {
        let model = build(kind, &t);
        let net = Net::new(&model).unwrap();
        let ctmc = build_ctmc(&net, "up", DEFAULT_MAX_STATES).unwrap();
        let ss = solver::steady_state_gth(&ctmc).unwrap();
        let availability = 1.0 - solver::unavailability(&ctmc, &ss);
        let covered = (1..=20u64)
            .filter(|&seed| {
                simulate(&net, "up", 1e7, 1e5, 30, seed)
                    .unwrap()
                    .contains(availability)
            })
            .count();
        pass &= covered >= 18;
        detail.push_str(&format!("{kind}: {covered}/20 ", ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 300.0;
    report(4, pass, elapsed, detail.trim());
    assert!(pass);
}

#[test]
fn criterion_5_table3_reproduction() {
    let start = Instant::now();
    let r = run_table3(&IntensityTable::default()).unwrap();
    let computed: Vec<f64> = r.rows.iter().map(|x| x.unavailability * 1e4).collect();
    let within = |c: f64, p: f64| c / p <= 2.0 && p / c <= 2.0;

    let first_ok = within(computed[0], TABLE3_PUBLISHED[0]);
    let off: Vec<String> = computed
        .iter()
        .zip(TABLE3_PUBLISHED)
        .enumerate()
        .filter(|(_, (c, p))| !within(**c, *p))
        .map(|(i, (c, p))| format!("{:?}:{c:.3}/{p}", TABLE3_CONFIGS[i]))
        .collect();
    let mut inversions = Vec::new();
    for i in 0..36 {
        for j in 0..36 {
            let (pi, pj) = (TABLE3_PUBLISHED[i], TABLE3_PUBLISHED[j]);
            if pi > 1.25 * pj && computed[i] <= computed[j] {
                inversions.push(format!("{:?}<={:?}", TABLE3_CONFIGS[i], TABLE3_CONFIGS[j]));
            }
        }
    }
    inversions.sort();
    inversions.dedup();
    let elapsed = start.elapsed();
    let pass = first_ok && off.is_empty() && inversions.is_empty() && elapsed.as_secs_f64() < 30.0;
    report(
        5,
        pass,
        elapsed,
        &format!(
            "(a) first row {:.3} vs 13.222 ({}); (b) {} of 36 rows outside 2x; (c) {} ordering inversions",
            computed[0],
            if first_ok { "ok" } else { "outside 2x" },
            off.len(),
            inversions.len()
        ),
    );
    if !pass {
        println!("  rows outside 2x (computed/published, x1e-4): {}", off.join(" "));
        println!("  inversions: {}", inversions.join(" "));
    }
    assert!(pass);
}

#[test]
fn criterion_6_cluster_redundancy() {
    let start = Instant::now();
    let r = run_cluster_sweep(&IntensityTable::default(), &[(10, 10), (10, 9), (10, 8)]).unwrap();
    let u = |c: &str| r.row(c).unwrap().unavailability;
    let reduction = u("both:(10,10)") / u("both:(10,9)");
    let (a, b) = (u("both:(10,9)"), u("both:(10,8)"));
    let spread = (a - b).abs() / a.min(b);
    let elapsed = start.elapsed();
    let pass = reduction >= 50.0 && spread <= 0.2 && elapsed.as_secs_f64() < 30.0;
    report(
        6,
        pass,
        elapsed,
        &format!(
            "U(10,10)/U(10,9) = {reduction:.1} (need >= 50); U(10,9) = {a:.4e}, U(10,8) = {b:.4e}, differ by {:.0}% (need <= 20%)",
            spread * 100.0
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_failure_rate_sensitivity() {
    let start = Instant::now();
    let t = IntensityTable::default();
    let r = run_alpha_sweep(&t, Target::Both, &ALPHA_GRID).unwrap();
    let curves: Vec<Vec<f64>> = r
        .rows
        .chunks(ALPHA_GRID.len())
        .map(|c| c.iter().map(|x| x.unavailability).collect())
        .collect();
    let baseline = curves[0][2];
    let monotone = curves.iter().all(|c| c.windows(2).all(|w| w[0] <= w[1]));
    let sw_lowest = curves[2][0] < curves[0][0] && curves[2][0] < curves[1][0];
    let all_worse = curves.iter().all(|c| c[4] > baseline);
    let elapsed = start.elapsed();
    let pass = monotone && sw_lowest && all_worse && elapsed.as_secs_f64() < 60.0;
    report(
        7,
        pass,
        elapsed,
        &format!(
            "monotone={monotone}; at 0.01 H={:.4e} O={:.4e} S={:.4e} (S lowest: {sw_lowest}); at 100 all above baseline {baseline:.4e}: {all_worse}",
            curves[0][0], curves[1][0], curves[2][0]
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_fault_tree_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let (n_c, n_d, n_r, n_h) = TABLE3_CONFIGS[i % TABLE3_CONFIGS.len()];
        let cfg = RedundancyConfig::new(n_c, n_d, n_r, n_h).unwrap();
        let us = ElementUnavailabilities {
            ru: rng.random(),
            du: rng.random(),
            cu: rng.random(),
            meh: rng.random(),
            core_5gc: rng.random(),
            mano: rng.random(),
        };
        let d = (eval_ft(&build_5gmec_ft(cfg, &us)) - system_unavailability(&us, cfg)).abs();
        worst = worst.max(d);
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && elapsed.as_secs_f64() < 5.0;
    report(8, pass, elapsed, &format!("1000 draws, max difference {worst:.2e}"));
    assert!(pass);
}

#[test]
fn criterion_9_determinism_and_round_trip() {
    let start = Instant::now();
    let t = IntensityTable::default();
    let net = Net::new(&build(ElementKind::DU, &t)).unwrap();
    let a = simulate(&net, "up", 1e6, 1e4, 10, 99).unwrap();
    let b = simulate(&net, "up", 1e6, 1e4, 10, 99).unwrap();
    let same = a.point.to_bits() == b.point.to_bits()
        && a.ci_halfwidth.to_bits() == b.ci_halfwidth.to_bits()
        && a.events == b.events;

    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "san"))
        .collect();
    files.sort();
    let mut broken = Vec::new();
    for f in &files {
        let model = parse_model(&std::fs::read_to_string(f).unwrap()).unwrap();
        if parse_model(&serialize_model(&model)).unwrap() != model {
            broken.push(f.display().to_string());
        }
    }
    let elapsed = start.elapsed();
    let pass = same && broken.is_empty() && files.len() >= 5;
    report(
        9,
        pass,
        elapsed,
        &format!(
            "repeat simulation identical: {same}; {} documents, {} failed round trip",
            files.len(),
            broken.len()
        ),
    );
    assert!(pass);
}
