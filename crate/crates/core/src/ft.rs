//! Fault trees over independent element unavailabilities.
//!
//! Events are assumed statistically independent: an AND gate fails only if
//! all of its children fail (redundancy, `∏Uᵢ`), an OR gate fails if any
//! child fails (series, `1 − ∏(1 − Uᵢ)`), and a k-of-n gate fails when fewer
//! than `k` children are working.
//!
//! Text format, one node per file:
//!
//! ```text
//! # 5GC and MANO in series with two redundant MEHs
//! or("5GC" = 1e-4, MANO = 1e-4, and(MEH1 = 2e-4, MEH2 = 2e-4), kofn(2, a = 0.1, b = 0.1, c = 0.1))
//! ```
//!
//! Event names are identifiers or quoted strings.

use std::fmt;

use serde::Serialize;

use crate::expr::{ExprParser, Lexer, Spanned, SyntaxError, Token};

#[derive(Debug, Clone, PartialEq)]
pub enum FtNode {
    Basic { name: String, unavailability: f64 },
    And(Vec<FtNode>),
    Or(Vec<FtNode>),
    /// Works iff at least `k` children work.
    KofN { k: usize, children: Vec<FtNode> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FtError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("gate with no children")]
    EmptyGate,
    #[error("k-of-n gate needs 1 <= k <= n, got k = {k}, n = {n}")]
    BadK { k: usize, n: usize },
    #[error("event `{name}`: unavailability {value} outside [0, 1]")]
    BadProbability { name: String, value: f64 },
    #[error("redundancy counts must be >= 1")]
    BadRedundancy,
}

impl FtNode {
    pub fn basic(name: &str, unavailability: f64) -> Self {
        FtNode::Basic {
            name: name.to_string(),
            unavailability,
        }
    }

    /// `n` identical copies of a basic event, named `name1..namen`.
    pub fn replicas(name: &str, unavailability: f64, n: usize) -> Vec<Self> {
        (1..=n)
            .map(|i| Self::basic(&format!("{name}{i}"), unavailability))
            .collect()
    }

    pub fn check(&self) -> Result<(), FtError> {
        match self {
            FtNode::Basic {
                name,
                unavailability,
            } => {
                if !(0.0..=1.0).contains(unavailability) {
                    return Err(FtError::BadProbability {
                        name: name.clone(),
                        value: *unavailability,
                    });
                }
                Ok(())
            }
            FtNode::And(c) | FtNode::Or(c) => {
                if c.is_empty() {
                    return Err(FtError::EmptyGate);
                }
                c.iter().try_for_each(FtNode::check)
            }
            FtNode::KofN { k, children } => {
                if children.is_empty() {
                    return Err(FtError::EmptyGate);
                }
                if *k < 1 || *k > children.len() {
                    return Err(FtError::BadK {
                        k: *k,
                        n: children.len(),
                    });
                }
                children.iter().try_for_each(FtNode::check)
            }
        }
    }
}

/// Failure probability of the tree, evaluated bottom-up.
pub fn eval_ft(node: &FtNode) -> f64 {
    match node {
        FtNode::Basic { unavailability, .. } => *unavailability,
        FtNode::And(c) => c.iter().map(eval_ft).product(),
        FtNode::Or(c) => 1.0 - c.iter().map(|n| 1.0 - eval_ft(n)).product::<f64>(),
        FtNode::KofN { k, children } => {
            // working[j] = P(exactly j children work)
            let mut working = vec![0.0; children.len() + 1];
            working[0] = 1.0;
            for (seen, child) in children.iter().enumerate() {
                let u = eval_ft(child);
                for j in (0..=seen + 1).rev() {
                    let up = if j > 0 { working[j - 1] * (1.0 - u) } else { 0.0 };
                    working[j] = working[j] * u + up;
                }
            }
            working[..*k].iter().sum::<f64>().clamp(0.0, 1.0)
        }
    }
}

/// Active-active redundancy counts: CUs, DUs per CU, RUs per DU, MEHs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RedundancyConfig {
    pub n_c: u32,
    pub n_d: u32,
    pub n_r: u32,
    pub n_h: u32,
}

impl RedundancyConfig {
    pub fn new(n_c: u32, n_d: u32, n_r: u32, n_h: u32) -> Result<Self, FtError> {
        if n_c == 0 || n_d == 0 || n_r == 0 || n_h == 0 {
            return Err(FtError::BadRedundancy);
        }
        Ok(Self { n_c, n_d, n_r, n_h })
    }

    pub const fn uniform(n: u32) -> Self {
        Self {
            n_c: n,
            n_d: n,
            n_r: n,
            n_h: n,
        }
    }
}

impl fmt::Display for RedundancyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.n_c, self.n_d, self.n_r, self.n_h)
    }
}

/// Unavailability of each 5G-MEC element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementUnavailabilities {
    pub ru: f64,
    pub du: f64,
    pub cu: f64,
    pub meh: f64,
    pub core_5gc: f64,
    pub mano: f64,
}

impl ElementUnavailabilities {
    pub fn uniform(u: f64) -> Self {
        Self {
            ru: u,
            du: u,
            cu: u,
            meh: u,
            core_5gc: u,
            mano: u,
        }
    }
}

/// Closed-form RAN unavailability:
/// `[1 − (1 − (1 − (1 − U_RU^N_R)(1 − U_DU))^N_D)(1 − U_CU)]^N_C`.
pub fn u_ran(u_ru: f64, u_du: f64, u_cu: f64, cfg: RedundancyConfig) -> f64 {
    let du_branch = 1.0 - (1.0 - u_ru.powi(cfg.n_r as i32)) * (1.0 - u_du);
    let cu_branch = 1.0 - (1.0 - du_branch.powi(cfg.n_d as i32)) * (1.0 - u_cu);
    cu_branch.powi(cfg.n_c as i32)
}

/// Closed-form system unavailability:
/// `1 − (1 − U_RAN)(1 − U_5GC)(1 − U_MANO)(1 − U_MEH^N_H)`.
pub fn u_sys(u_ran: f64, u_5gc: f64, u_mano: f64, u_meh: f64, n_h: u32) -> f64 {
    1.0 - (1.0 - u_ran) * (1.0 - u_5gc) * (1.0 - u_mano) * (1.0 - u_meh.powi(n_h as i32))
}

/// Both closed forms composed.
pub fn system_unavailability(u: &ElementUnavailabilities, cfg: RedundancyConfig) -> f64 {
    u_sys(
        u_ran(u.ru, u.du, u.cu, cfg),
        u.core_5gc,
        u.mano,
        u.meh,
        cfg.n_h,
    )
}

/// The explicit 5G-MEC tree:
/// `Or(5GC, MANO, And(MEH×N_H), And_N_C(Or(CU, And_N_D(Or(DU, And(RU×N_R))))))`.
pub fn build_5gmec_ft(cfg: RedundancyConfig, u: &ElementUnavailabilities) -> FtNode {
    let cu_branches = (1..=cfg.n_c)
        .map(|c| {
            let du_branches = (1..=cfg.n_d)
                .map(|d| {
                    FtNode::Or(vec![
                        FtNode::basic(&format!("DU{c}.{d}"), u.du),
                        FtNode::And(FtNode::replicas(&format!("RU{c}.{d}."), u.ru, cfg.n_r as usize)),
                    ])
                })
                .collect();
            FtNode::Or(vec![
                FtNode::basic(&format!("CU{c}"), u.cu),
                FtNode::And(du_branches),
            ])
        })
        .collect();
    FtNode::Or(vec![
        FtNode::basic("5GC", u.core_5gc),
        FtNode::basic("MANO", u.mano),
        FtNode::And(FtNode::replicas("MEH", u.meh, cfg.n_h as usize)),
        FtNode::And(cu_branches),
    ])
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "and" | "or" | "kofn")
}

impl fmt::Display for FtNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, c: &[FtNode]| -> fmt::Result {
            for (i, n) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{n}")?;
            }
            f.write_str(")")
        };
        match self {
            FtNode::Basic {
                name,
                unavailability,
            } => {
                if is_ident(name) {
                    write!(f, "{name} = {unavailability:?}")
                } else {
                    write!(f, "{name:?} = {unavailability:?}")
                }
            }
            FtNode::And(c) => {
                f.write_str("and(")?;
                list(f, c)
            }
            FtNode::Or(c) => {
                f.write_str("or(")?;
                list(f, c)
            }
            FtNode::KofN { k, children } => {
                write!(f, "kofn({k}, ")?;
                list(f, children)
            }
        }
    }
}

/// Parse the fault-tree text format.
pub fn parse_ft(text: &str) -> Result<FtNode, FtError> {
    let tokens = Lexer::new(text).tokenize().map_err(SyntaxError::lexical)?;
    let mut p = ExprParser::new(&tokens);
    let node = parse_node(&mut p)?;
    if p.peek().token != Token::Eof {
        return Err(SyntaxError::at(p.peek(), &["end of input"]).into());
    }
    node.check()?;
    Ok(node)
}

fn parse_children(p: &mut ExprParser<'_>) -> Result<Vec<FtNode>, FtError> {
    let mut out = vec![parse_node(p)?];
    while p.eat(&Token::Comma) {
        out.push(parse_node(p)?);
    }
    p.expect(&Token::RParen, "`,` or `)`")?;
    Ok(out)
}

fn parse_node(p: &mut ExprParser<'_>) -> Result<FtNode, FtError> {
    let t: &Spanned = p.advance();
    let name = match &t.token {
        Token::Ident(g) if matches!(g.as_str(), "and" | "or" | "kofn") => {
            p.expect(&Token::LParen, "`(`")?;
            return Ok(match g.as_str() {
                "and" => FtNode::And(parse_children(p)?),
                "or" => FtNode::Or(parse_children(p)?),
                _ => {
                    let kt = p.advance();
                    let k = match kt.token {
                        Token::Num(v) if v.fract() == 0.0 && (0.0..1e9).contains(&v) => v as usize,
                        _ => return Err(SyntaxError::at(kt, &["integer k"]).into()),
                    };
                    p.expect(&Token::Comma, "`,`")?;
                    FtNode::KofN {
                        k,
                        children: parse_children(p)?,
                    }
                }
            });
        }
        Token::Ident(n) | Token::Str(n) => n.clone(),
        _ => {
            return Err(SyntaxError::at(
                t,
                &["`and`", "`or`", "`kofn`", "event name"],
            )
            .into())
        }
    };
    p.expect(&Token::Assign, "`=`")?;
    let vt = p.advance();
    let unavailability = match vt.token {
        Token::Num(v) => v,
        _ => return Err(SyntaxError::at(vt, &["number"]).into()),
    };
    Ok(FtNode::Basic {
        name,
        unavailability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Probability that a tree fails, by enumerating all 2^n basic-event
    /// outcomes. Every basic event is an independent variable.
    fn brute_force(node: &FtNode) -> f64 {
        fn leaves(n: &FtNode, out: &mut Vec<f64>) {
            match n {
                FtNode::Basic { unavailability, .. } => out.push(*unavailability),
                FtNode::And(c) | FtNode::Or(c) | FtNode::KofN { children: c, .. } => {
                    c.iter().for_each(|x| leaves(x, out))
                }
            }
        }
        fn failed(n: &FtNode, state: u64, next: &mut usize) -> bool {
            match n {
                FtNode::Basic { .. } => {
                    let f = state >> *next & 1 == 1;
                    *next += 1;
                    f
                }
                FtNode::And(c) => c.iter().map(|x| failed(x, state, next)).fold(true, |a, b| a & b),
                FtNode::Or(c) => c.iter().map(|x| failed(x, state, next)).fold(false, |a, b| a | b),
                FtNode::KofN { k, children } => {
                    let up = children.iter().filter(|x| !failed(x, state, next)).count();
                    up < *k
                }
            }
        }
        let mut us = Vec::new();
        leaves(node, &mut us);
        assert!(us.len() <= 20);
        let mut total = 0.0;
        for state in 0..(1u64 << us.len()) {
            let mut next = 0;
            if failed(node, state, &mut next) {
                total += us
                    .iter()
                    .enumerate()
                    .map(|(i, u)| if state >> i & 1 == 1 { *u } else { 1.0 - u })
                    .product::<f64>();
            }
        }
        total
    }

    #[test]
    fn gates() {
        let z = FtNode::Or(FtNode::replicas("x", 0.0, 3));
        assert_eq!(eval_ft(&z), 0.0);
        let a = FtNode::And(FtNode::replicas("x", 0.5, 2));
        assert_eq!(eval_ft(&a), 0.25);
        let o = FtNode::Or(FtNode::replicas("x", 0.5, 2));
        assert_eq!(eval_ft(&o), 0.75);
    }

    #[test]
    fn nine_of_ten() {
        let node = FtNode::KofN {
            k: 9,
            children: FtNode::replicas("x", 0.1, 10),
        };
        let oracle = brute_force(&node);
        let closed = 1.0 - 0.9f64.powi(10) - 10.0 * 0.9f64.powi(9) * 0.1;
        assert!((oracle - closed).abs() < 1e-14);
        assert!((oracle - 0.2639).abs() < 1e-4);
        assert!((eval_ft(&node) - oracle).abs() < 1e-14);
    }

    #[test]
    fn kofn_extremes_match_and_or() {
        let cs = vec![
            FtNode::basic("a", 0.1),
            FtNode::basic("b", 0.3),
            FtNode::basic("c", 0.6),
        ];
        let one = FtNode::KofN {
            k: 1,
            children: cs.clone(),
        };
        let all = FtNode::KofN {
            k: 3,
            children: cs.clone(),
        };
        assert!((eval_ft(&one) - eval_ft(&FtNode::And(cs.clone()))).abs() < 1e-15);
        assert!((eval_ft(&all) - eval_ft(&FtNode::Or(cs))).abs() < 1e-15);
    }

    #[test]
    fn ran_closed_form() {
        let cfg = RedundancyConfig::uniform(1);
        assert_eq!(u_ran(0.0, 0.0, 0.0, cfg), 0.0);
        assert_eq!(u_ran(0.5, 0.5, 0.5, cfg), 0.875);
    }

    #[test]
    fn ran_decreases_with_more_rus() {
        let mut last = f64::INFINITY;
        for n_r in 1..30 {
            let cfg = RedundancyConfig::new(1, 1, n_r, 1).unwrap();
            let u = u_ran(0.3, 0.1, 0.05, cfg);
            assert!(u < last);
            last = u;
        }
        // limit: RU term vanishes, leaving DU and CU in series
        assert!((last - (1.0 - 0.9 * 0.95)).abs() < 1e-12);
    }

    #[test]
    fn sys_closed_form() {
        assert_eq!(u_sys(0.0, 0.0, 0.0, 0.0, 1), 0.0);
        assert_eq!(u_sys(0.875, 0.5, 0.5, 0.5, 1), 0.984375);
    }

    #[test]
    fn explicit_tree_all_ones() {
        let cfg = RedundancyConfig::uniform(1);
        let us = ElementUnavailabilities::uniform(0.5);
        let tree = build_5gmec_ft(cfg, &us);
        assert_eq!(eval_ft(&tree), 0.984375);
        assert_eq!(eval_ft(&build_5gmec_ft(cfg, &ElementUnavailabilities::uniform(0.0))), 0.0);
    }

    #[test]
    fn explicit_tree_matches_enumeration() {
        let us = ElementUnavailabilities {
            ru: 0.3,
            du: 0.2,
            cu: 0.25,
            meh: 0.4,
            core_5gc: 0.1,
            mano: 0.15,
        };
        for cfg in [
            RedundancyConfig::uniform(1),
            RedundancyConfig::new(2, 1, 2, 1).unwrap(),
            RedundancyConfig::new(1, 2, 2, 2).unwrap(),
        ] {
            let tree = build_5gmec_ft(cfg, &us);
            let oracle = brute_force(&tree);
            assert!((eval_ft(&tree) - oracle).abs() < 1e-13, "{cfg}");
            assert!((system_unavailability(&us, cfg) - oracle).abs() < 1e-13, "{cfg}");
        }
    }

    #[test]
    fn redundancy_must_be_positive() {
        assert_eq!(RedundancyConfig::new(0, 1, 1, 1), Err(FtError::BadRedundancy));
    }

    #[test]
    fn parse_text_tree() {
        let t = parse_ft(
            "# comment\nor(\"5GC\" = 1e-4, MANO = 0.5, and(a = 0.5, b = 0.5), kofn(2, x = 0.1, y = 0.1, z = 0.1))",
        )
        .unwrap();
        let FtNode::Or(children) = &t else {
            panic!()
        };
        assert_eq!(children.len(), 4);
        assert_eq!(parse_ft(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn malformed_trees() {
        assert!(matches!(parse_ft("and()"), Err(FtError::Syntax(_))));
        assert!(matches!(parse_ft("or(a = 2)"), Err(FtError::BadProbability { .. })));
        assert!(matches!(parse_ft("kofn(3, a = 0.1, b = 0.1)"), Err(FtError::BadK { .. })));
        assert!(matches!(parse_ft("kofn(0, a = 0.1)"), Err(FtError::BadK { .. })));
        assert!(matches!(parse_ft("or(a = 0.1) extra"), Err(FtError::Syntax(_))));
        assert!(matches!(parse_ft("or(a 0.1)"), Err(FtError::Syntax(_))));
    }

    fn arb_tree() -> impl Strategy<Value = FtNode> {
        let leaf = (0.0f64..=1.0).prop_map(|u| FtNode::basic("e", u));
        leaf.prop_recursive(3, 12, 3, |inner| {
            let kids = proptest::collection::vec(inner, 1..4);
            prop_oneof![
                kids.clone().prop_map(FtNode::And),
                kids.clone().prop_map(FtNode::Or),
                kids.prop_flat_map(|c| {
                    let n = c.len();
                    (1..=n, Just(c)).prop_map(|(k, children)| FtNode::KofN { k, children })
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn evaluation_matches_enumeration(t in arb_tree()) {
            let v = eval_ft(&t);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!((v - brute_force(&t)).abs() < 1e-12);
        }

        #[test]
        fn system_monotone_in_redundancy_and_unavailability(
            u in proptest::array::uniform6(0.0f64..0.5),
            bump in 0usize..6,
            n in proptest::array::uniform4(1u32..4),
            which in 0usize..4,
        ) {
            let us = ElementUnavailabilities {
                ru: u[0], du: u[1], cu: u[2], meh: u[3], core_5gc: u[4], mano: u[5],
            };
            let cfg = RedundancyConfig::new(n[0], n[1], n[2], n[3]).unwrap();
            let base = system_unavailability(&us, cfg);
            let mut worse = u;
            worse[bump] += 0.1;
            let ws = ElementUnavailabilities {
                ru: worse[0], du: worse[1], cu: worse[2], meh: worse[3],
                core_5gc: worse[4], mano: worse[5],
            };
            prop_assert!(system_unavailability(&ws, cfg) >= base - 1e-15);
            let mut more = n;
            more[which] += 1;
            let cfg2 = RedundancyConfig::new(more[0], more[1], more[2], more[3]).unwrap();
            prop_assert!(system_unavailability(&us, cfg2) <= base + 1e-15);
        }
    }
}
