//! The five 5G-MEC element models, built from one table of intensities.
//!
//! Rates are in h⁻¹. Default mean times are converted with 1 day = 24 h,
//! 1 week = 168 h, 1 month = 730 h and 1 year = 8760 h.
//!
//! Every model declares a single reward, `up`.
//!
//! Topology choices where the element descriptions leave arcs open:
//!
//! * DU/CU: the OS hard repair (`OS_R`) lands in `SW_Ures`, since the
//!   software must restart after the OS comes back. In the MEH, `MVM_R` and
//!   `AVM_R` land in `MEP_Ures` and `APP_Ures` for the same reason.
//! * HW hard repair returns directly to the OK place.
//! * CU: an unsuccessful failover sends the failed unit to `CHW_rep` and the
//!   standby to `CHW_cov`; a repaired unit always becomes the standby.
//! * MEH: `Hyp_Ures` is entered after the hypervisor hard repair; `HYP_res`
//!   then restarts everything back to `MEH_OK`.
//! * MEH: both `MEP_rec` and `APP_rec` use the application coverage `C_APP`.
//! * Cluster: repairs have a single facility (no per-token multiplier), and
//!   every failure activity, including those on already degraded instances,
//!   is disabled while a Down token exists.

use std::fmt;

use serde::Serialize;

use crate::expr::{parse_expression, Expr};
use crate::san::{Activity, Effect, EffectOp, Net, SanError, SanModel};
use crate::solver::{self, Method, SolverError};
use crate::statespace::{build_ctmc, StateSpaceError, DEFAULT_MAX_STATES};

pub const HOUR: f64 = 1.0;
pub const MINUTE: f64 = HOUR / 60.0;
pub const SECOND: f64 = MINUTE / 60.0;
pub const DAY: f64 = 24.0;
pub const WEEK: f64 = 168.0;
pub const MONTH: f64 = 730.0;
pub const YEAR: f64 = 8760.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("invalid parameter table: {0}")]
    Invalid(String),
    #[error(transparent)]
    San(#[from] SanError),
    #[error(transparent)]
    StateSpace(#[from] StateSpaceError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Rate,
    Coverage,
    Count,
    Multiplier,
}

macro_rules! intensity_table {
    ($($field:ident : $class:ident = $default:expr;)*) => {
        /// Failure and repair intensities (h⁻¹), coverage probabilities,
        /// cluster size `M`/quorum `K`, and the cluster failure-rate
        /// multipliers.
        #[allow(non_snake_case)]
        #[derive(Debug, Clone, PartialEq, Serialize)]
        pub struct IntensityTable {
            $(pub $field: f64,)*
        }

        impl Default for IntensityTable {
            fn default() -> Self {
                Self { $($field: $default,)* }
            }
        }

        impl IntensityTable {
            const FIELDS: &'static [(&'static str, Class)] = &[$((stringify!($field), Class::$class),)*];

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $(stringify!($field) => Some(self.$field),)*
                    _ => None,
                }
            }

            fn slot(&mut self, name: &str) -> Option<&mut f64> {
                match name {
                    $(stringify!($field) => Some(&mut self.$field),)*
                    _ => None,
                }
            }
        }
    };
}

intensity_table! {
    lambda_RH: Rate = 1.0 / (17.0 * YEAR);
    mu_RH: Rate = 1.0 / (6.0 * HOUR);
    lambda_HW: Rate = 1.0 / (6.0 * MONTH);
    mu_cov: Rate = 1.0 / (30.0 * MINUTE);
    mu_HW: Rate = 1.0 / (2.0 * HOUR);
    mu_HW_fo: Rate = 1.0 / (3.0 * MINUTE);
    lambda_A: Rate = 1.0 / (104.0 * MONTH);
    mu_A: Rate = 1.0 / (6.0 * HOUR);
    lambda_FW: Rate = 1.0 / (75.0 * DAY);
    mu_FW: Rate = 1.0 / (65.0 * MINUTE);
    lambda_OS: Rate = 1.0 / (2.0 * MONTH);
    mu_OS: Rate = 1.0 / (1.0 * HOUR);
    mu_OS_r: Rate = 1.0 / (1.0 * MINUTE);
    mu_HYP_rs: Rate = 1.0 / (2.5 * MINUTE);
    lambda_HYP: Rate = 1.0 / (4.0 * MONTH);
    mu_HYP: Rate = 1.0 / (1.0 * HOUR);
    mu_HYP_r: Rate = 1.0 / (1.0 * MINUTE);
    mu_VM_rs: Rate = 1.0 / (1.5 * MINUTE);
    lambda_VM: Rate = 1.0 / (3.0 * MONTH);
    mu_VM: Rate = 1.0 / (1.0 * HOUR);
    mu_VM_r: Rate = 1.0 / (1.0 * MINUTE);
    lambda_APP: Rate = 1.0 / (2.0 * WEEK);
    mu_APP: Rate = 1.0 / (30.0 * MINUTE);
    mu_APP_r: Rate = 1.0 / (15.0 * SECOND);
    lambda_SW: Rate = 1.0 / (1.0 * MONTH);
    mu_SW: Rate = 1.0 / (30.0 * MINUTE);
    mu_SW_r: Rate = 1.0 / (30.0 * SECOND);
    C_HW: Coverage = 0.97;
    C_OS: Coverage = 0.9;
    C_HYP: Coverage = 0.9;
    C_SW: Coverage = 0.85;
    C_VM: Coverage = 0.9;
    C_APP: Coverage = 0.8;
    M: Count = 10.0;
    K: Count = 9.0;
    alpha_H: Multiplier = 1.0;
    alpha_O: Multiplier = 1.0;
    alpha_S: Multiplier = 1.0;
}

impl IntensityTable {
    pub fn names() -> impl Iterator<Item = &'static str> {
        Self::FIELDS.iter().map(|(n, _)| *n)
    }

    /// Overwrite one entry. The value is not checked; call [`validate`](Self::validate).
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ModelError> {
        *self
            .slot(name)
            .ok_or_else(|| ModelError::UnknownParameter(name.to_string()))? = value;
        Ok(())
    }

    /// Rates and multipliers finite and > 0, coverages in `[0, 1]`,
    /// `1 <= K <= M` integral.
    pub fn validate(&self) -> Result<(), ModelError> {
        for &(name, class) in Self::FIELDS {
            let v = self.get(name).unwrap_or(f64::NAN);
            let ok = match class {
                Class::Rate | Class::Multiplier => v.is_finite() && v > 0.0,
                Class::Coverage => (0.0..=1.0).contains(&v),
                Class::Count => v.is_finite() && v >= 1.0 && v.fract() == 0.0,
            };
            if !ok {
                let want = match class {
                    Class::Rate => "a finite rate > 0",
                    Class::Multiplier => "a finite multiplier > 0",
                    Class::Coverage => "a probability in [0, 1]",
                    Class::Count => "a positive integer",
                };
                return Err(ModelError::Invalid(format!("{name} = {v} must be {want}")));
            }
        }
        if self.K > self.M {
            return Err(ModelError::Invalid(format!(
                "K = {} exceeds M = {}",
                self.K, self.M
            )));
        }
        Ok(())
    }

    /// `(M, K)` as integers.
    pub fn cluster(&self) -> (u32, u32) {
        (self.M as u32, self.K as u32)
    }

    /// Hex SHA-256 over every entry, in declaration order.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for name in Self::names() {
            h.update(name.as_bytes());
            h.update(self.get(name).unwrap_or(0.0).to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ElementKind {
    RU,
    DU,
    CU,
    MEH,
    Cluster5GC,
    ClusterMANO,
}

impl ElementKind {
    pub const ALL: [ElementKind; 6] = [
        ElementKind::RU,
        ElementKind::DU,
        ElementKind::CU,
        ElementKind::MEH,
        ElementKind::Cluster5GC,
        ElementKind::ClusterMANO,
    ];
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::RU => "RU",
            ElementKind::DU => "DU",
            ElementKind::CU => "CU",
            ElementKind::MEH => "MEH",
            ElementKind::Cluster5GC => "5GC",
            ElementKind::ClusterMANO => "MANO",
        })
    }
}

fn e(s: &str) -> Expr {
    parse_expression(s).unwrap_or_else(|err| panic!("built-in expression `{s}`: {err}"))
}

fn holds(place: &str) -> Expr {
    e(&format!("#{place} >= 1"))
}

fn declare(m: &mut SanModel, t: &IntensityTable, names: &[&str]) {
    for n in names {
        m.param(n, t.get(n).expect("table entry"));
    }
}

/// Timed one-token move `from -> to`.
fn step(name: &str, rate: &str, from: &str, to: &str) -> Activity {
    Activity::timed(name, Expr::param(rate))
        .with_input(holds(from), vec![Effect::sub(from, 1.0)])
        .with_case(Expr::num(1.0), vec![Effect::add(to, 1.0)])
}

/// Recovery attempt out of `from`: with probability `coverage` the token
/// goes to `ok`, otherwise to `fail`. Timed when `rate` is given.
fn attempt(name: &str, rate: Option<&str>, from: &str, coverage: &str, ok: &str, fail: &str) -> Activity {
    let a = match rate {
        Some(r) => Activity::timed(name, Expr::param(r)),
        None => Activity::instantaneous(name),
    };
    a.with_input(holds(from), vec![Effect::sub(from, 1.0)])
        .with_case(Expr::param(coverage), vec![Effect::add(ok, 1.0)])
        .with_case(e(&format!("1 - {coverage}")), vec![Effect::add(fail, 1.0)])
}

pub fn build_ru(t: &IntensityTable) -> SanModel {
    let mut m = SanModel::new("RU: hardware, antenna and firmware failures");
    declare(
        &mut m,
        t,
        &["lambda_RH", "mu_RH", "lambda_A", "mu_A", "lambda_FW", "mu_FW"],
    );
    m.place("RU_OK", 1)
        .place("RH_failed", 0)
        .place("Ant_failed", 0)
        .place("FW_failed", 0);
    m.activity(step("RH_F", "lambda_RH", "RU_OK", "RH_failed"))
        .activity(step("RH_R", "mu_RH", "RH_failed", "RU_OK"))
        .activity(step("Ant_F", "lambda_A", "RU_OK", "Ant_failed"))
        .activity(step("Ant_R", "mu_A", "Ant_failed", "RU_OK"))
        .activity(step("FW_F", "lambda_FW", "RU_OK", "FW_failed"))
        .activity(step("FW_R", "mu_FW", "FW_failed", "RU_OK"));
    m.reward("up", holds("RU_OK"));
    m
}

/// OS and software failure/recovery cycle shared by the DU and CU.
fn os_sw_layer(m: &mut SanModel, ok: &str) {
    m.place("OS_failed", 0)
        .place("OS_Urep", 0)
        .place("SW_failed", 0)
        .place("SW_Urep", 0)
        .place("SW_Ures", 0);
    m.activity(step("OS_F", "lambda_OS", ok, "OS_failed"))
        .activity(attempt("OS_rec", Some("mu_OS_r"), "OS_failed", "C_OS", "SW_Ures", "OS_Urep"))
        .activity(step("OS_R", "mu_OS", "OS_Urep", "SW_Ures"))
        .activity(step("SW_F", "lambda_SW", ok, "SW_failed"))
        .activity(attempt("SW_rec", None, "SW_failed", "C_SW", "SW_Ures", "SW_Urep"))
        .activity(step("SW_R", "mu_SW", "SW_Urep", ok))
        .activity(step("SW_res", "mu_SW_r", "SW_Ures", ok));
}

const OS_SW_PARAMS: [&str; 7] = [
    "lambda_OS", "mu_OS", "mu_OS_r", "C_OS", "lambda_SW", "mu_SW", "mu_SW_r",
];

pub fn build_du(t: &IntensityTable) -> SanModel {
    let mut m = SanModel::new("DU: software on an OS on non-redundant COTS hardware");
    declare(&mut m, t, &["lambda_HW", "mu_HW"]);
    declare(&mut m, t, &OS_SW_PARAMS);
    declare(&mut m, t, &["C_SW"]);
    m.place("DU_OK", 1).place("HW_failed", 0);
    m.activity(step("HW_F", "lambda_HW", "DU_OK", "HW_failed"))
        .activity(step("HW_R", "mu_HW", "HW_failed", "DU_OK"));
    os_sw_layer(&mut m, "DU_OK");
    m.reward("up", holds("DU_OK"));
    m
}

pub fn build_cu(t: &IntensityTable) -> SanModel {
    let mut m = SanModel::new("CU: DU software stack on 1+1 active-standby hardware");
    declare(
        &mut m,
        t,
        &["lambda_HW", "mu_HW", "mu_HW_fo", "mu_cov", "C_HW"],
    );
    declare(&mut m, t, &OS_SW_PARAMS);
    declare(&mut m, t, &["C_SW"]);
    m.place("CU_OK", 1)
        .place("CHW2", 1)
        .place("CHW1_failed", 0)
        .place("CHW_rep", 0)
        .place("CHW_cov", 0);
    m.activity(step("CHW1_F", "lambda_HW", "CU_OK", "CHW1_failed"))
        .activity(
            Activity::timed("CHW_rec", Expr::param("mu_HW_fo"))
                .with_input(
                    e("#CHW1_failed >= 1 and #CHW2 >= 1"),
                    vec![Effect::sub("CHW1_failed", 1.0), Effect::sub("CHW2", 1.0)],
                )
                .with_case(
                    Expr::param("C_HW"),
                    vec![Effect::add("CHW_rep", 1.0), Effect::add("CU_OK", 1.0)],
                )
                .with_case(
                    e("1 - C_HW"),
                    vec![Effect::add("CHW_rep", 1.0), Effect::add("CHW_cov", 1.0)],
                ),
        )
        .activity(step("man_cov", "mu_cov", "CHW_cov", "CU_OK"))
        .activity(step("CHW2_F", "lambda_HW", "CHW2", "CHW_rep"))
        .activity(step("CHW_R", "mu_HW", "CHW_rep", "CHW2"));
    os_sw_layer(&mut m, "CU_OK");
    m.reward("up", holds("CU_OK"));
    m
}

pub fn build_meh(t: &IntensityTable) -> SanModel {
    let mut m = SanModel::new("MEH: MEP and MEC application on VMs over a type-II hypervisor");
    declare(
        &mut m,
        t,
        &[
            "lambda_HYP", "mu_HYP", "mu_HYP_r", "mu_HYP_rs", "C_HYP", "lambda_VM", "mu_VM",
            "mu_VM_r", "mu_VM_rs", "C_VM", "lambda_SW", "mu_SW", "mu_SW_r", "lambda_APP",
            "mu_APP", "mu_APP_r", "C_APP",
        ],
    );
    for p in [
        "MEH_OK", "Hyp_failed", "Hyp_Ures", "Hyp_Urep", "VM_Ures", "MVM_failed", "MVM_Urep",
        "MEP_failed", "MEP_Urep", "MEP_Ures", "AVM_failed", "AVM_Urep", "APP_failed",
        "APP_Urep", "APP_Ures",
    ] {
        m.place(p, i64::from(p == "MEH_OK"));
    }
    m.activity(step("HYP_F", "lambda_HYP", "MEH_OK", "Hyp_failed"))
        .activity(attempt("HYP_rec", Some("mu_HYP_r"), "Hyp_failed", "C_HYP", "VM_Ures", "Hyp_Urep"))
        .activity(step("HYP_R", "mu_HYP", "Hyp_Urep", "Hyp_Ures"))
        .activity(step("HYP_res", "mu_HYP_rs", "Hyp_Ures", "MEH_OK"))
        .activity(step("VM_res", "mu_VM_rs", "VM_Ures", "MEH_OK"))
        .activity(step("MVM_F", "lambda_VM", "MEH_OK", "MVM_failed"))
        .activity(attempt("MVM_rec", Some("mu_VM_r"), "MVM_failed", "C_VM", "MEP_Ures", "MVM_Urep"))
        .activity(step("MVM_R", "mu_VM", "MVM_Urep", "MEP_Ures"))
        .activity(step("MEP_F", "lambda_SW", "MEH_OK", "MEP_failed"))
        .activity(attempt("MEP_rec", None, "MEP_failed", "C_APP", "MEP_Ures", "MEP_Urep"))
        .activity(step("MEP_R", "mu_SW", "MEP_Urep", "MEH_OK"))
        .activity(step("MEP_VMres", "mu_SW_r", "MEP_Ures", "MEH_OK"))
        .activity(step("AVM_F", "lambda_VM", "MEH_OK", "AVM_failed"))
        .activity(attempt("AVM_rec", Some("mu_VM_r"), "AVM_failed", "C_VM", "APP_Ures", "AVM_Urep"))
        .activity(step("AVM_R", "mu_VM", "AVM_Urep", "APP_Ures"))
        .activity(step("APP_F", "lambda_APP", "MEH_OK", "APP_failed"))
        .activity(attempt("APP_rec", None, "APP_failed", "C_APP", "APP_Ures", "APP_Urep"))
        .activity(step("APP_R", "mu_APP", "APP_Urep", "MEH_OK"))
        .activity(step("APP_VMres", "mu_APP_r", "APP_Ures", "MEH_OK"));
    m.reward("up", holds("MEH_OK"));
    m
}

const NO_DOWN: &str = "#HW_Down == 0 and #OS_Down == 0 and #SW_Down == 0";

/// Cluster of `m` instances that is up while at least `k` work and no
/// instance failure has crashed the whole cluster.
pub fn build_cluster(
    t: &IntensityTable,
    m: u32,
    k: u32,
    alpha_h: f64,
    alpha_o: f64,
    alpha_s: f64,
) -> SanModel {
    let mut s = SanModel::new("5GC/MANO: cluster of M instances needing K working");
    declare(
        &mut s,
        t,
        &[
            "lambda_HW", "mu_HW", "mu_cov", "C_HW", "lambda_OS", "mu_OS", "mu_OS_r", "C_OS",
            "lambda_SW", "mu_SW", "mu_SW_r", "C_SW",
        ],
    );
    s.param("M", f64::from(m))
        .param("K", f64::from(k))
        .param("alpha_H", alpha_h)
        .param("alpha_O", alpha_o)
        .param("alpha_S", alpha_s);
    s.place("Working", i64::from(m));
    for p in ["HW_Fail", "HW_Down", "OS_Fail", "OS_Down", "SW_Fail", "SW_Down"] {
        s.place(p, 0);
    }

    let hw_i = "alpha_H * lambda_HW * M / K";
    let os_i = "alpha_O * lambda_OS * M / K";
    let sw_i = "(if #Working >= K then alpha_S * lambda_SW * M / #Working else alpha_S * lambda_SW * M)";
    let first = |name: &str, per: &str, cov: &str, fail: &str, down: &str| {
        Activity::timed(name, e(&format!("#Working * {per}")))
            .with_input(
                e(&format!("#Working >= 1 and {NO_DOWN}")),
                vec![Effect::sub("Working", 1.0)],
            )
            .with_case(Expr::param(cov), vec![Effect::add(fail, 1.0)])
            .with_case(e(&format!("1 - {cov}")), vec![Effect::add(down, 1.0)])
    };
    let escalate = |name: &str, per: &str, from: &str, to: &str| {
        Activity::timed(name, e(&format!("#{from} * {per}")))
            .with_input(
                e(&format!("#{from} >= 1 and {NO_DOWN}")),
                vec![Effect::sub(from, 1.0)],
            )
            .with_case(Expr::num(1.0), vec![Effect::add(to, 1.0)])
    };
    let restart = |extra: Option<Effect>| {
        let mut v: Vec<Effect> = extra.into_iter().collect();
        v.push(Effect::set("OS_Fail", Expr::num(0.0)));
        v.push(Effect::set("SW_Fail", Expr::num(0.0)));
        v.push(Effect::set("Working", e("M - #HW_Fail")));
        v
    };
    let crash_recovery = |name: &str, rate: &str, down: &str, extra: Option<Effect>| {
        Activity::timed(name, Expr::param(rate))
            .with_input(holds(down), vec![Effect::sub(down, 1.0)])
            .with_case(Expr::num(1.0), restart(extra))
    };

    s.activity(first("HW_F1", hw_i, "C_HW", "HW_Fail", "HW_Down"))
        .activity(escalate("HW_F2", hw_i, "OS_Fail", "HW_Fail"))
        .activity(escalate("HW_F3", hw_i, "SW_Fail", "HW_Fail"))
        .activity(step("HW_R", "mu_HW", "HW_Fail", "Working"))
        .activity(crash_recovery(
            "UHW_R",
            "mu_cov",
            "HW_Down",
            Some(Effect::new("HW_Fail", EffectOp::Add, Expr::num(1.0))),
        ))
        .activity(first("OS_F1", os_i, "C_OS", "OS_Fail", "OS_Down"))
        .activity(escalate("OS_F2", os_i, "SW_Fail", "OS_Fail"))
        .activity(step("OS_R", "mu_OS", "OS_Fail", "Working"))
        .activity(crash_recovery("UOS_R", "mu_OS_r", "OS_Down", None))
        .activity(first("SW_F", sw_i, "C_SW", "SW_Fail", "SW_Down"))
        .activity(step("SW_R", "mu_SW", "SW_Fail", "Working"))
        .activity(crash_recovery("USW_R", "mu_SW_r", "SW_Down", None));
    s.reward("up", e(&format!("#Working >= K and {NO_DOWN}")));
    s
}

/// The model for `kind`; clusters use the table's `(M, K)` and multipliers.
pub fn build(kind: ElementKind, t: &IntensityTable) -> SanModel {
    match kind {
        ElementKind::RU => build_ru(t),
        ElementKind::DU => build_du(t),
        ElementKind::CU => build_cu(t),
        ElementKind::MEH => build_meh(t),
        ElementKind::Cluster5GC | ElementKind::ClusterMANO => {
            let (m, k) = t.cluster();
            build_cluster(t, m, k, t.alpha_H, t.alpha_O, t.alpha_S)
        }
    }
}

/// File names and `.san` text of the shipped model documents.
pub fn shipped_documents(t: &IntensityTable) -> Vec<(&'static str, String)> {
    use crate::document::serialize_model;
    vec![
        ("ru.san", serialize_model(&build_ru(t))),
        ("du.san", serialize_model(&build_du(t))),
        ("cu.san", serialize_model(&build_cu(t))),
        ("meh.san", serialize_model(&build_meh(t))),
        ("cluster.san", serialize_model(&build(ElementKind::ClusterMANO, t))),
    ]
}

/// Steady-state unavailability of a model's `up` reward.
pub fn model_unavailability(model: &SanModel, method: Method) -> Result<f64, ModelError> {
    let net = Net::new(model)?;
    let ctmc = build_ctmc(&net, "up", DEFAULT_MAX_STATES)?;
    let ss = solver::solve(&ctmc, method, solver::DEFAULT_TOL, solver::DEFAULT_MAX_ITER)?;
    Ok(solver::unavailability(&ctmc, &ss))
}

/// build → explore → eliminate vanishing → CTMC → GTH → unavailability.
pub fn element_unavailability(kind: ElementKind, t: &IntensityTable) -> Result<f64, ModelError> {
    t.validate()?;
    model_unavailability(&build(kind, t), Method::Gth)
}
