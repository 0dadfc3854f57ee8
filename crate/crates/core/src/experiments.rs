//! Redundancy and sensitivity sweeps over the full 5G-MEC system.
//!
//! Element unavailabilities do not depend on the redundancy configuration,
//! so each sweep solves the RU/DU/CU/MEH models once and each distinct
//! cluster setting once, then evaluates the fault-tree closed form per row.
//! Everything goes through the exact solver; results are bit-for-bit
//! reproducible and independent of the worker count.

use std::collections::HashMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use crate::ft::{system_unavailability, ElementUnavailabilities, RedundancyConfig};
use crate::models::{
    build_cluster, element_unavailability, model_unavailability, ElementKind, IntensityTable,
    ModelError,
};
use crate::solver::Method;

pub const CSV_HEADER: [&str; 13] = [
    "config", "N_C", "N_D", "N_R", "N_H", "M_5gc", "K_5gc", "M_mano", "K_mano", "alpha_H",
    "alpha_O", "alpha_S", "unavailability",
];

/// Size, quorum and failure-rate multipliers of one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusterSetting {
    pub m: u32,
    pub k: u32,
    pub alpha_h: f64,
    pub alpha_o: f64,
    pub alpha_s: f64,
}

impl ClusterSetting {
    pub const fn new(m: u32, k: u32) -> Self {
        Self {
            m,
            k,
            alpha_h: 1.0,
            alpha_o: 1.0,
            alpha_s: 1.0,
        }
    }

    pub fn with_alphas(self, alpha_h: f64, alpha_o: f64, alpha_s: f64) -> Self {
        Self {
            alpha_h,
            alpha_o,
            alpha_s,
            ..self
        }
    }

    fn key(&self) -> (u32, u32, u64, u64, u64) {
        (
            self.m,
            self.k,
            self.alpha_h.to_bits(),
            self.alpha_o.to_bits(),
            self.alpha_s.to_bits(),
        )
    }
}

/// One system configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub config: String,
    pub redundancy: RedundancyConfig,
    pub core_5gc: ClusterSetting,
    pub mano: ClusterSetting,
}

impl Scenario {
    pub fn new(config: impl Into<String>, redundancy: RedundancyConfig, core_5gc: ClusterSetting, mano: ClusterSetting) -> Self {
        Self {
            config: config.into(),
            redundancy,
            core_5gc,
            mano,
        }
    }

    /// Multipliers reported for the row: the 5GC ones unless only the MANO
    /// deviates from 1.
    fn reported_alphas(&self) -> (f64, f64, f64) {
        let c = if self.core_5gc.with_alphas(1.0, 1.0, 1.0) == self.core_5gc {
            &self.mano
        } else {
            &self.core_5gc
        };
        (c.alpha_h, c.alpha_o, c.alpha_s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub elements: ElementUnavailabilities,
    pub unavailability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub name: String,
    pub rows: Vec<SweepRow>,
    /// SHA-256 of the intensity table.
    pub table_digest: String,
    pub method: Method,
    /// Seconds since the Unix epoch at completion.
    pub timestamp: u64,
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let s = &r.scenario;
            let (ah, ao, as_) = s.reported_alphas();
            let n = s.redundancy;
            out.write_record([
                s.config.clone(),
                n.n_c.to_string(),
                n.n_d.to_string(),
                n.n_r.to_string(),
                n.n_h.to_string(),
                s.core_5gc.m.to_string(),
                s.core_5gc.k.to_string(),
                s.mano.m.to_string(),
                s.mano.k.to_string(),
                ah.to_string(),
                ao.to_string(),
                as_.to_string(),
                format!("{:.16e}", r.unavailability),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn row(&self, config: &str) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.scenario.config == config)
    }
}

/// Solve every element needed by `scenarios` (once each) and evaluate the
/// system unavailability row by row, in input order.
pub fn evaluate(name: &str, t: &IntensityTable, scenarios: Vec<Scenario>) -> Result<SweepResult, ModelError> {
    t.validate()?;
    let mut clusters: Vec<ClusterSetting> = Vec::new();
    for s in &scenarios {
        for c in [s.core_5gc, s.mano] {
            if !clusters.iter().any(|x| x.key() == c.key()) {
                clusters.push(c);
            }
        }
    }
    let mut check = t.clone();
    for c in &clusters {
        check.M = f64::from(c.m);
        check.K = f64::from(c.k);
        check.alpha_H = c.alpha_h;
        check.alpha_O = c.alpha_o;
        check.alpha_S = c.alpha_s;
        check.validate()?;
    }

    let fixed = [ElementKind::RU, ElementKind::DU, ElementKind::CU, ElementKind::MEH]
        .par_iter()
        .map(|k| element_unavailability(*k, t))
        .collect::<Result<Vec<f64>, _>>()?;
    let solved = clusters
        .par_iter()
        .map(|c| {
            let model = build_cluster(t, c.m, c.k, c.alpha_h, c.alpha_o, c.alpha_s);
            model_unavailability(&model, Method::Gth).map(|u| (c.key(), u))
        })
        .collect::<Result<HashMap<_, _>, _>>()?;

    let rows = scenarios
        .into_iter()
        .map(|scenario| {
            let elements = ElementUnavailabilities {
                ru: fixed[0],
                du: fixed[1],
                cu: fixed[2],
                meh: fixed[3],
                core_5gc: solved[&scenario.core_5gc.key()],
                mano: solved[&scenario.mano.key()],
            };
            let unavailability = system_unavailability(&elements, scenario.redundancy);
            SweepRow {
                scenario,
                elements,
                unavailability,
            }
        })
        .collect();
    Ok(SweepResult {
        name: name.to_string(),
        rows,
        table_digest: t.digest(),
        method: Method::Gth,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    })
}

/// Redundancy counts `(N_C, N_D, N_R, N_H)` of the 36 published rows, in
/// published order: four blocks of nine, each varying one element.
pub const TABLE3_CONFIGS: [(u32, u32, u32, u32); 36] = [
    (1, 1, 1, 1), (2, 1, 1, 1), (3, 1, 1, 1),
    (1, 2, 2, 2), (2, 2, 2, 2), (3, 2, 2, 2),
    (1, 3, 3, 3), (2, 3, 3, 3), (3, 3, 3, 3),
    (1, 1, 1, 1), (1, 2, 1, 1), (1, 3, 1, 1),
    (2, 1, 2, 2), (2, 2, 2, 2), (2, 3, 2, 2),
    (3, 1, 3, 3), (3, 2, 3, 3), (3, 3, 3, 3),
    (1, 1, 1, 1), (1, 1, 2, 1), (1, 1, 3, 1),
    (2, 2, 1, 2), (2, 2, 2, 2), (2, 2, 3, 2),
    (3, 3, 1, 3), (3, 3, 2, 3), (3, 3, 3, 3),
    (1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3),
    (2, 2, 2, 1), (2, 2, 2, 2), (2, 2, 2, 3),
    (3, 3, 3, 1), (3, 3, 3, 2), (3, 3, 3, 3),
];

/// Published system unavailabilities (×10⁻⁴) for [`TABLE3_CONFIGS`].
pub const TABLE3_PUBLISHED: [f64; 36] = [
    13.222, 2.593, 2.582, 3.277, 1.096, 1.095, 3.276, 1.095, 1.095,
    13.222, 4.771, 4.763, 1.096, 1.096, 1.096, 1.095, 1.095, 1.095,
    13.222, 6.041, 6.036, 1.096, 1.096, 1.096, 1.095, 1.095, 1.095,
    13.222, 1.174, 1.174, 2.583, 1.096, 1.095, 2.583, 1.095, 1.095,
];

const TABLE3_BLOCKS: [&str; 4] = ["N_C", "N_D", "N_R", "N_H"];

fn default_cluster(t: &IntensityTable) -> ClusterSetting {
    let (m, k) = t.cluster();
    ClusterSetting::new(m, k)
}

/// All 36 RAN/MEH redundancy rows; both clusters at the table's `(M, K)`.
pub fn run_table3(t: &IntensityTable) -> Result<SweepResult, ModelError> {
    let c = default_cluster(t);
    let scenarios = TABLE3_CONFIGS
        .iter()
        .enumerate()
        .map(|(i, &(n_c, n_d, n_r, n_h))| {
            let cfg = RedundancyConfig::new(n_c, n_d, n_r, n_h).expect("positive counts");
            Scenario::new(format!("vary-{}:{cfg}", TABLE3_BLOCKS[i / 9]), cfg, c, c)
        })
        .collect();
    evaluate("table3", t, scenarios)
}

/// `(M, K)` pairs of the default cluster sweep.
pub const CLUSTER_SWEEP: [(u32, u32); 6] = [(10, 10), (10, 9), (10, 8), (10, 7), (10, 6), (10, 5)];

/// Which clusters a sweep changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    Both,
    Core5gcOnly,
    ManoOnly,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Both, Target::Core5gcOnly, Target::ManoOnly];

    fn label(self) -> &'static str {
        match self {
            Target::Both => "both",
            Target::Core5gcOnly => "5GC",
            Target::ManoOnly => "MANO",
        }
    }

    fn apply(self, base: ClusterSetting, changed: ClusterSetting) -> (ClusterSetting, ClusterSetting) {
        match self {
            Target::Both => (changed, changed),
            Target::Core5gcOnly => (changed, base),
            Target::ManoOnly => (base, changed),
        }
    }
}

/// System unavailability with `N_C = N_D = N_R = N_H = 2` as each `(M, K)`
/// is applied to both clusters, then to each alone while the other keeps
/// the table's `(M, K)`.
pub fn run_cluster_sweep(t: &IntensityTable, pairs: &[(u32, u32)]) -> Result<SweepResult, ModelError> {
    let base = default_cluster(t);
    let cfg = RedundancyConfig::uniform(2);
    let mut scenarios = Vec::new();
    for target in Target::ALL {
        for &(m, k) in pairs {
            let (a, b) = target.apply(base, ClusterSetting::new(m, k));
            scenarios.push(Scenario::new(format!("{}:({m},{k})", target.label()), cfg, a, b));
        }
    }
    evaluate("cluster-sweep", t, scenarios)
}

/// The eight named configurations from no redundancy to full redundancy.
pub fn redundancy_scenarios(t: &IntensityTable) -> Vec<Scenario> {
    let one = RedundancyConfig::uniform(1);
    let two = RedundancyConfig::uniform(2);
    let ran = RedundancyConfig::new(2, 2, 2, 1).expect("positive");
    let meh = RedundancyConfig::new(1, 1, 1, 2).expect("positive");
    let (m, _) = t.cluster();
    let none = ClusterSetting::new(m, m);
    let spare = default_cluster(t);
    vec![
        Scenario::new("No-Redun", one, none, none),
        Scenario::new("RAN", ran, none, none),
        Scenario::new("MEH", meh, none, none),
        Scenario::new("5GC-and-MANO", one, spare, spare),
        Scenario::new("5GC-or-MANO", one, spare, none),
        Scenario::new("5G", ran, spare, none),
        Scenario::new("MEC", meh, none, spare),
        Scenario::new("FULL", two, spare, spare),
    ]
}

pub fn run_redundancy_configs(t: &IntensityTable) -> Result<SweepResult, ModelError> {
    evaluate("redundancy-configs", t, redundancy_scenarios(t))
}

pub const ALPHA_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

/// Three curves, one per multiplier (the other two held at 1), over
/// `values`, with full RAN/MEH redundancy and both clusters at the table's
/// `(M, K)`. Rows are grouped by curve: `alpha_H`, then `alpha_O`, then
/// `alpha_S`.
pub fn run_alpha_sweep(t: &IntensityTable, target: Target, values: &[f64]) -> Result<SweepResult, ModelError> {
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(ModelError::Invalid(format!("multiplier {bad} must be > 0")));
    }
    let base = default_cluster(t);
    let cfg = RedundancyConfig::uniform(2);
    let mut scenarios = Vec::new();
    for (i, which) in ["alpha_H", "alpha_O", "alpha_S"].iter().enumerate() {
        for &v in values {
            let mut a = [1.0; 3];
            a[i] = v;
            let (x, y) = target.apply(base, base.with_alphas(a[0], a[1], a[2]));
            scenarios.push(Scenario::new(format!("{}:{which}={v}", target.label()), cfg, x, y));
        }
    }
    evaluate("alpha-sweep", t, scenarios)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table3_shape_and_cache() {
        let t = IntensityTable::default();
        let r = run_table3(&t).unwrap();
        assert_eq!(r.rows.len(), 36);
        let first = r.rows[0].unavailability;
        for i in [9, 18, 27] {
            assert_eq!(r.rows[i].unavailability, first);
        }
        let again = run_table3(&t).unwrap();
        for (a, b) in r.rows.iter().zip(&again.rows) {
            assert_eq!(a.unavailability.to_bits(), b.unavailability.to_bits());
        }
        let ru = element_unavailability(ElementKind::RU, &t).unwrap();
        assert_eq!(r.rows[0].elements.ru, ru);
        assert!(r.rows.iter().all(|x| (0.0..=1.0).contains(&x.unavailability)));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let t = IntensityTable::default();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_redundancy_configs(&t))
            .unwrap();
        let many = run_redundancy_configs(&t).unwrap();
        assert_eq!(one.rows, many.rows);
    }

    #[test]
    fn csv_schema() {
        let t = IntensityTable::default();
        let r = run_redundancy_configs(&t).unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "No-Redun");
        assert_eq!(&first[1..9], ["1", "1", "1", "1", "10", "10", "10", "10"]);
        let u: f64 = first[12].parse().unwrap();
        assert_eq!(u, r.rows[0].unavailability);
        assert_eq!(csv.lines().count(), 9);
    }

    #[test]
    fn redundancy_ordering() {
        let r = run_redundancy_configs(&IntensityTable::default()).unwrap();
        let u = |c: &str| r.row(c).unwrap().unavailability;
        let all: Vec<f64> = r.rows.iter().map(|x| x.unavailability).collect();
        let min = all.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = all.iter().cloned().fold(0.0, f64::max);
        assert_eq!(u("FULL"), min);
        assert_eq!(u("No-Redun"), max);
        assert!(u("No-Redun") / u("RAN") < 2.0);
        assert!(u("No-Redun") / u("MEH") < 2.0);
    }

    #[test]
    fn cluster_sweep_rows() {
        let t = IntensityTable::default();
        let r = run_cluster_sweep(&t, &CLUSTER_SWEEP).unwrap();
        assert_eq!(r.rows.len(), 18);
        let both = &r.rows[..6];
        let max = both.iter().map(|x| x.unavailability).fold(0.0, f64::max);
        assert_eq!(both[0].unavailability, max);
        // the singly varied rows keep the other cluster at (10,9)
        assert_eq!(r.rows[6].scenario.mano, ClusterSetting::new(10, 9));
        assert_eq!(r.rows[12].scenario.core_5gc, ClusterSetting::new(10, 9));
        assert_eq!(r.rows[7].unavailability, r.rows[13].unavailability);
    }

    #[test]
    fn alpha_identity_is_full_redundancy() {
        let t = IntensityTable::default();
        let full = run_redundancy_configs(&t).unwrap().row("FULL").unwrap().unavailability;
        let r = run_alpha_sweep(&t, Target::Both, &[1.0]).unwrap();
        for row in &r.rows {
            assert_eq!(row.unavailability, full);
        }
        assert!(run_alpha_sweep(&t, Target::Both, &[0.0]).is_err());
    }

    #[test]
    fn invalid_cluster_is_rejected() {
        let t = IntensityTable::default();
        assert!(run_cluster_sweep(&t, &[(5, 6)]).is_err());
    }
}
