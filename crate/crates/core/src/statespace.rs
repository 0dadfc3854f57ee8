//! Reachability graph of a [`Net`] and its reduction to a CTMC.
//!
//! Exploration is breadth-first from the initial marking, visiting enabled
//! activities in declaration order and cases in declaration order, so state
//! indices are deterministic. A marking is vanishing when any instantaneous
//! activity is enabled; vanishing states are then folded into their
//! predecessors one at a time.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::san::{Marking, Net, SanError};

/// Default exploration bound.
pub const DEFAULT_MAX_STATES: usize = 100_000;

/// A vanishing cycle whose return probability reaches `1 - VANISHING_LOOP_EPS`
/// is treated as a livelock.
pub const VANISHING_LOOP_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateSpaceError {
    #[error("state space exceeds {0} states")]
    StateSpaceExceeded(usize),
    #[error(transparent)]
    San(#[from] SanError),
    #[error("vanishing loop through state {state} {marking} with return probability {probability}")]
    VanishingLoop {
        state: usize,
        marking: String,
        probability: f64,
    },
    #[error("graph still contains vanishing state {0}")]
    NotTangible(usize),
    #[error(
        "chain is not irreducible: {} state(s) unreachable from the initial state, \
         {} state(s) cannot return to it (first: {:?})",
        unreachable.len(), cannot_return.len(),
        unreachable.first().or(cannot_return.first())
    )]
    NotIrreducible {
        unreachable: Vec<usize>,
        cannot_return: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Tangible,
    Vanishing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub marking: Marking,
    pub kind: StateKind,
}

/// Edge `from -> to`. `value` is a rate (h⁻¹) out of tangible states and a
/// probability out of vanishing ones. The label is the activity and case
/// that produced the edge; after elimination it is the timed firing that
/// started the instantaneous chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub activity: usize,
    pub case: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateGraph {
    pub states: Vec<State>,
    pub transitions: Vec<Transition>,
    pub initial: usize,
}

impl StateGraph {
    pub fn tangible_count(&self) -> usize {
        self.states
            .iter()
            .filter(|s| s.kind == StateKind::Tangible)
            .count()
    }

    pub fn vanishing_count(&self) -> usize {
        self.states.len() - self.tangible_count()
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.states.iter().position(|s| &s.marking == m)
    }

    /// Sum of outgoing edge values of state `i`, self-loops included.
    pub fn exit_total(&self, i: usize) -> f64 {
        self.transitions
            .iter()
            .filter(|t| t.from == i)
            .map(|t| t.value)
            .sum()
    }

    /// Text edge list: one `state_i -> state_j rate r label a/c` line per
    /// edge, preceded by `# state_i ...` marking lines.
    pub fn dump(&self, net: &Net) -> String {
        let mut out = String::new();
        for (i, s) in self.states.iter().enumerate() {
            let kind = match s.kind {
                StateKind::Tangible => "tangible",
                StateKind::Vanishing => "vanishing",
            };
            let _ = writeln!(out, "# state_{i} {kind} {}", net.describe(&s.marking));
        }
        for t in &self.transitions {
            let word = match self.states[t.from].kind {
                StateKind::Tangible => "rate",
                StateKind::Vanishing => "prob",
            };
            let _ = writeln!(
                out,
                "state_{} -> state_{} {word} {:e} label {}/{}",
                t.from,
                t.to,
                t.value,
                net.activity_name(t.activity),
                t.case
            );
        }
        out
    }
}

/// Breadth-first closure from the initial marking.
pub fn explore(net: &Net, max_states: usize) -> Result<StateGraph, StateSpaceError> {
    let mut index: HashMap<Marking, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut transitions = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |m: Marking,
                      states: &mut Vec<State>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, StateSpaceError> {
        if let Some(&i) = index.get(&m) {
            return Ok(i);
        }
        if states.len() >= max_states {
            return Err(StateSpaceError::StateSpaceExceeded(max_states));
        }
        let kind = if net.enabled_instantaneous(&m)?.is_empty() {
            StateKind::Tangible
        } else {
            StateKind::Vanishing
        };
        let i = states.len();
        index.insert(m.clone(), i);
        states.push(State { marking: m, kind });
        queue.push_back(i);
        Ok(i)
    };

    let initial = intern(net.initial_marking(), &mut states, &mut queue)?;
    while let Some(i) = queue.pop_front() {
        let m = states[i].marking.clone();
        let enabled = net.enabled(&m)?;
        let (firing, weight): (Vec<usize>, Box<dyn Fn(usize) -> Result<f64, SanError>>) =
            match states[i].kind {
                StateKind::Vanishing => {
                    let inst: Vec<usize> =
                        enabled.into_iter().filter(|&a| !net.is_timed(a)).collect();
                    let w = 1.0 / inst.len() as f64;
                    (inst, Box::new(move |_| Ok(w)))
                }
                StateKind::Tangible => {
                    let m = m.clone();
                    (enabled, Box::new(move |a| net.rate(&m, a)))
                }
            };
        for a in firing {
            let w = weight(a)?;
            for (case, p) in net.case_probabilities(a).enumerate() {
                if p == 0.0 {
                    continue;
                }
                let next = net.fire(&m, a, case)?;
                let to = intern(next, &mut states, &mut queue)?;
                transitions.push(Transition {
                    from: i,
                    to,
                    activity: a,
                    case,
                    value: w * p,
                });
            }
        }
    }
    Ok(StateGraph {
        states,
        transitions,
        initial,
    })
}

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    activity: usize,
    case: usize,
    w: f64,
}

/// Fold every vanishing state into its predecessors.
///
/// For a vanishing state `v` with self-loop probability `s`, each edge
/// `u -> v` of weight `w` becomes edges `u -> x` of weight `w·p(v,x)/(1-s)`.
/// Processing states one at a time handles chains and cycles of any depth;
/// total exit weight of every remaining state is preserved.
pub fn eliminate_vanishing(g: &StateGraph) -> Result<StateGraph, StateSpaceError> {
    let n = g.states.len();
    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut preds: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for t in &g.transitions {
        out[t.from].push(Edge {
            to: t.to,
            activity: t.activity,
            case: t.case,
            w: t.value,
        });
        preds[t.to].insert(t.from);
    }
    // where the initial marking's probability mass ends up
    let mut start: Vec<(usize, f64)> = vec![(g.initial, 1.0)];

    for v in 0..n {
        if g.states[v].kind != StateKind::Vanishing {
            continue;
        }
        let edges = std::mem::take(&mut out[v]);
        let self_p: f64 = edges.iter().filter(|e| e.to == v).map(|e| e.w).sum();
        if self_p >= 1.0 - VANISHING_LOOP_EPS {
            return Err(StateSpaceError::VanishingLoop {
                state: v,
                marking: format!("{:?}", g.states[v].marking.0),
                probability: self_p,
            });
        }
        let scale = 1.0 / (1.0 - self_p);
        let exits: Vec<Edge> = edges.into_iter().filter(|e| e.to != v).collect();

        for u in std::mem::take(&mut preds[v]) {
            if u == v {
                continue;
            }
            let old = std::mem::take(&mut out[u]);
            let mut new = Vec::with_capacity(old.len() + exits.len());
            for e in old {
                if e.to != v {
                    new.push(e);
                    continue;
                }
                for x in &exits {
                    new.push(Edge {
                        to: x.to,
                        activity: e.activity,
                        case: e.case,
                        w: e.w * x.w * scale,
                    });
                    preds[x.to].insert(u);
                }
            }
            out[u] = new;
        }
        for x in &exits {
            preds[x.to].remove(&v);
        }
        if start.iter().any(|&(s, _)| s == v) {
            let mut next = Vec::new();
            for (s, p) in start {
                if s == v {
                    next.extend(exits.iter().map(|x| (x.to, p * x.w * scale)));
                } else {
                    next.push((s, p));
                }
            }
            start = next;
        }
    }

    let mut remap = vec![usize::MAX; n];
    let mut states = Vec::new();
    for (i, s) in g.states.iter().enumerate() {
        if s.kind == StateKind::Tangible {
            remap[i] = states.len();
            states.push(s.clone());
        }
    }
    let mut transitions = Vec::new();
    for (u, edges) in out.into_iter().enumerate() {
        if remap[u] == usize::MAX {
            continue;
        }
        for e in edges {
            transitions.push(Transition {
                from: remap[u],
                to: remap[e.to],
                activity: e.activity,
                case: e.case,
                value: e.w,
            });
        }
    }
    let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
    for (s, p) in start {
        *mass.entry(remap[s]).or_default() += p;
    }
    let initial = mass
        .iter()
        .fold(None, |best: Option<(usize, f64)>, (&s, &p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((s, p)),
        })
        .map_or(0, |(s, _)| s);
    Ok(StateGraph {
        states,
        transitions,
        initial,
    })
}

/// Sparse CTMC generator: off-diagonal rows plus the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
}

impl Generator {
    /// Build from off-diagonal rate triples; duplicates are summed and
    /// self-loops dropped.
    pub fn from_rates(n: usize, rates: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, r) in rates {
            if i != j {
                *acc[i].entry(j).or_default() += r;
            }
        }
        let rows: Vec<Vec<(usize, f64)>> = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|&(_, r)| r != 0.0).collect())
            .collect();
        let diag = rows
            .iter()
            .map(|r| -r.iter().map(|&(_, v)| v).sum::<f64>())
            .collect();
        Self { rows, diag }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Off-diagonal entries of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.diag[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0.0, |k| self.rows[i][k].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut q = vec![vec![0.0; n]; n];
        for i in 0..n {
            q[i][i] = self.diag[i];
            for &(j, r) in &self.rows[i] {
                q[i][j] = r;
            }
        }
        q
    }

    /// Scale every rate by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&(j, v)| (j, v * factor)).collect())
                .collect(),
            diag: self.diag.iter().map(|d| d * factor).collect(),
        }
    }

    /// Columns as rows: `incoming(j)` lists `(i, q_ij)` for `i != j`.
    pub fn incoming(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::new(); self.size()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, r) in row {
                cols[j].push((i, r));
            }
        }
        cols
    }

    /// Max-norm of `pi · Q`.
    pub fn residual(&self, pi: &[f64]) -> f64 {
        let mut acc: Vec<f64> = pi.iter().zip(&self.diag).map(|(p, d)| p * d).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, r) in row {
                acc[j] += pi[i] * r;
            }
        }
        acc.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_irreducible(&self, from: usize) -> Result<(), StateSpaceError> {
        let n = self.size();
        let reach = |adj: &dyn Fn(usize) -> Vec<usize>| {
            let mut seen = vec![false; n];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(i) = stack.pop() {
                for j in adj(i) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen
        };
        let cols = self.incoming();
        let fwd = reach(&|i| self.rows[i].iter().map(|&(j, _)| j).collect());
        let bwd = reach(&|j| cols[j].iter().map(|&(i, _)| i).collect());
        let unreachable: Vec<usize> = (0..n).filter(|&i| !fwd[i]).collect();
        let cannot_return: Vec<usize> = (0..n).filter(|&i| fwd[i] && !bwd[i]).collect();
        if unreachable.is_empty() && cannot_return.is_empty() {
            Ok(())
        } else {
            Err(StateSpaceError::NotIrreducible {
                unreachable,
                cannot_return,
            })
        }
    }
}

/// An irreducible CTMC over tangible markings with a 0/1 reward per state.
#[derive(Debug, Clone, PartialEq)]
pub struct Ctmc {
    pub states: Vec<Marking>,
    pub generator: Generator,
    pub reward: Vec<f64>,
    pub initial: usize,
}

impl Ctmc {
    /// A chain given directly by its rates, for hand-built examples. Markings
    /// are one-place placeholders holding the state index.
    pub fn from_rates(
        n: usize,
        rates: &[(usize, usize, f64)],
        reward: Vec<f64>,
    ) -> Result<Self, StateSpaceError> {
        assert_eq!(reward.len(), n, "one reward per state");
        let generator = Generator::from_rates(n, rates.iter().copied());
        generator.check_irreducible(0)?;
        Ok(Self {
            states: (0..n).map(|i| Marking(vec![i as u32])).collect(),
            generator,
            reward,
            initial: 0,
        })
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    /// Same states and rewards with every rate scaled by `factor`.
    pub fn with_scaled_rates(&self, factor: f64) -> Self {
        Self {
            generator: self.generator.scaled(factor),
            ..self.clone()
        }
    }
}

/// Sum parallel edges into a generator, attach reward `reward`, and verify
/// irreducibility. `g` must be tangible-only.
pub fn to_ctmc(g: &StateGraph, net: &Net, reward: &str) -> Result<Ctmc, StateSpaceError> {
    if let Some(v) = g.states.iter().position(|s| s.kind != StateKind::Tangible) {
        return Err(StateSpaceError::NotTangible(v));
    }
    let r = net.reward_index(reward)?;
    let generator = Generator::from_rates(
        g.states.len(),
        g.transitions.iter().map(|t| (t.from, t.to, t.value)),
    );
    generator.check_irreducible(g.initial)?;
    let reward = g
        .states
        .iter()
        .map(|s| Ok(if net.reward(&s.marking, r)? { 1.0 } else { 0.0 }))
        .collect::<Result<Vec<f64>, SanError>>()?;
    Ok(Ctmc {
        states: g.states.iter().map(|s| s.marking.clone()).collect(),
        generator,
        reward,
        initial: g.initial,
    })
}

/// explore → eliminate_vanishing → to_ctmc.
pub fn build_ctmc(net: &Net, reward: &str, max_states: usize) -> Result<Ctmc, StateSpaceError> {
    let g = explore(net, max_states)?;
    let t = eliminate_vanishing(&g)?;
    to_ctmc(&t, net, reward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::san::tests::two_state;
    use crate::san::{Activity, Effect, SanModel};

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn two_state_graph() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let g = explore(&net, 100).unwrap();
        assert_eq!(g.tangible_count(), 2);
        assert_eq!(g.transitions.len(), 2);
        let c = to_ctmc(&g, &net, "up").unwrap();
        assert_eq!(c.generator.to_dense(), vec![vec![-0.1, 0.1], vec![0.9, -0.9]]);
        assert_eq!(c.reward, vec![1.0, 0.0]);
    }

    #[test]
    fn exploration_bound() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        assert_eq!(
            explore(&net, 1),
            Err(StateSpaceError::StateSpaceExceeded(1))
        );
    }

    #[test]
    fn unknown_reward() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let g = explore(&net, 10).unwrap();
        assert!(matches!(
            to_ctmc(&g, &net, "nope"),
            Err(StateSpaceError::San(SanError::UnknownReward(_)))
        ));
    }

    /// A -r-> V, V -{0.85 -> B, 0.15 -> C}; B and C return to A.
    fn split_model(r: f64) -> SanModel {
        let mut m = SanModel::new("single split");
        m.place("A", 1)
            .place("V", 0)
            .place("B", 0)
            .place("C", 0)
            .param("r", r)
            .activity(
                Activity::timed("go", e("r"))
                    .with_input(e("#A >= 1"), vec![Effect::sub("A", 1.0)])
                    .with_case(e("1"), vec![Effect::add("V", 1.0)]),
            )
            .activity(
                Activity::instantaneous("split")
                    .with_input(e("#V >= 1"), vec![Effect::sub("V", 1.0)])
                    .with_case(e("0.85"), vec![Effect::add("B", 1.0)])
                    .with_case(e("0.15"), vec![Effect::add("C", 1.0)]),
            )
            .activity(
                Activity::timed("back_b", e("1"))
                    .with_input(e("#B >= 1"), vec![Effect::sub("B", 1.0)])
                    .with_case(e("1"), vec![Effect::add("A", 1.0)]),
            )
            .activity(
                Activity::timed("back_c", e("2"))
                    .with_input(e("#C >= 1"), vec![Effect::sub("C", 1.0)])
                    .with_case(e("1"), vec![Effect::add("A", 1.0)]),
            )
            .reward("up", e("#A >= 1"));
        m
    }

    #[test]
    fn single_split_folds_into_rates() {
        let net = Net::new(&split_model(3.0)).unwrap();
        let g = explore(&net, 100).unwrap();
        assert_eq!((g.tangible_count(), g.vanishing_count()), (3, 1));
        let t = eliminate_vanishing(&g).unwrap();
        assert_eq!(t.vanishing_count(), 0);
        let a = t.index_of(&net.marking(&[("A", 1)]).unwrap()).unwrap();
        let b = t.index_of(&net.marking(&[("B", 1)]).unwrap()).unwrap();
        let c = t.index_of(&net.marking(&[("C", 1)]).unwrap()).unwrap();
        let rate = |from, to| -> f64 {
            t.transitions
                .iter()
                .filter(|x| x.from == from && x.to == to)
                .map(|x| x.value)
                .sum()
        };
        assert!((rate(a, b) - 0.85 * 3.0).abs() < 1e-15);
        assert!((rate(a, c) - 0.15 * 3.0).abs() < 1e-15);
        assert!((t.exit_total(a) - 3.0).abs() < 1e-12);
        // the folded edges keep the timed firing as their label
        assert!(t
            .transitions
            .iter()
            .filter(|x| x.from == a)
            .all(|x| net.activity_name(x.activity) == "go"));
    }

    #[test]
    fn no_vanishing_is_unchanged() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let g = explore(&net, 10).unwrap();
        assert_eq!(eliminate_vanishing(&g).unwrap(), g);
    }

    #[test]
    fn vanishing_chain_and_cycle() {
        // A -> V1; V1 -> V2 (0.5) | B (0.5); V2 -> V1 (0.5) | C (0.5)
        let mut m = SanModel::new("chain");
        m.place("A", 1).place("V1", 0).place("V2", 0).place("B", 0).place("C", 0);
        m.activity(
            Activity::timed("go", e("1"))
                .with_input(e("#A >= 1"), vec![Effect::sub("A", 1.0)])
                .with_case(e("1"), vec![Effect::add("V1", 1.0)]),
        )
        .activity(
            Activity::instantaneous("v1")
                .with_input(e("#V1 >= 1"), vec![Effect::sub("V1", 1.0)])
                .with_case(e("0.5"), vec![Effect::add("V2", 1.0)])
                .with_case(e("0.5"), vec![Effect::add("B", 1.0)]),
        )
        .activity(
            Activity::instantaneous("v2")
                .with_input(e("#V2 >= 1"), vec![Effect::sub("V2", 1.0)])
                .with_case(e("0.5"), vec![Effect::add("V1", 1.0)])
                .with_case(e("0.5"), vec![Effect::add("C", 1.0)]),
        )
        .activity(
            Activity::timed("b", e("1"))
                .with_input(e("#B >= 1"), vec![Effect::sub("B", 1.0)])
                .with_case(e("1"), vec![Effect::add("A", 1.0)]),
        )
        .activity(
            Activity::timed("c", e("1"))
                .with_input(e("#C >= 1"), vec![Effect::sub("C", 1.0)])
                .with_case(e("1"), vec![Effect::add("A", 1.0)]),
        );
        let net = Net::new(&m).unwrap();
        let g = explore(&net, 100).unwrap();
        let t = eliminate_vanishing(&g).unwrap();
        let a = t.index_of(&net.marking(&[("A", 1)]).unwrap()).unwrap();
        let b = t.index_of(&net.marking(&[("B", 1)]).unwrap()).unwrap();
        // P(reach B from V1) = 0.5 / (1 - 0.25) = 2/3
        let to_b: f64 = t
            .transitions
            .iter()
            .filter(|x| x.from == a && x.to == b)
            .map(|x| x.value)
            .sum();
        assert!((to_b - 2.0 / 3.0).abs() < 1e-12);
        assert!((t.exit_total(a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certain_vanishing_loop_is_rejected() {
        let mut m = SanModel::new("loop");
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
        );
        let net = Net::new(&m).unwrap();
        let g = explore(&net, 100).unwrap();
        assert!(matches!(
            eliminate_vanishing(&g),
            Err(StateSpaceError::VanishingLoop { .. })
        ));
    }

    #[test]
    fn absorbing_state_is_not_irreducible() {
        let mut m = two_state(0.1, 0.9);
        m.activities.truncate(1);
        let net = Net::new(&m).unwrap();
        let g = explore(&net, 10).unwrap();
        let err = to_ctmc(&g, &net, "up").unwrap_err();
        assert_eq!(
            err,
            StateSpaceError::NotIrreducible {
                unreachable: vec![],
                cannot_return: vec![1],
            }
        );
    }

    #[test]
    fn simultaneous_instantaneous_activities_split_evenly() {
        let mut m = SanModel::new("race");
        m.place("A", 1).place("V", 0).place("B", 0).place("C", 0);
        m.activity(
            Activity::timed("go", e("4"))
                .with_input(e("#A >= 1"), vec![Effect::sub("A", 1.0)])
                .with_case(e("1"), vec![Effect::add("V", 1.0)]),
        );
        for (name, to) in [("to_b", "B"), ("to_c", "C")] {
            m.activity(
                Activity::instantaneous(name)
                    .with_input(e("#V >= 1"), vec![Effect::sub("V", 1.0)])
                    .with_case(e("1"), vec![Effect::add(to, 1.0)]),
            );
            m.activity(
                Activity::timed(&format!("{name}_back"), e("1"))
                    .with_input(e(&format!("#{to} >= 1")), vec![Effect::sub(to, 1.0)])
                    .with_case(e("1"), vec![Effect::add("A", 1.0)]),
            );
        }
        let net = Net::new(&m).unwrap();
        let t = eliminate_vanishing(&explore(&net, 100).unwrap()).unwrap();
        let a = t.index_of(&net.marking(&[("A", 1)]).unwrap()).unwrap();
        let rates: Vec<f64> = t
            .transitions
            .iter()
            .filter(|x| x.from == a)
            .map(|x| x.value)
            .collect();
        assert_eq!(rates, vec![2.0, 2.0]);
    }

    #[test]
    fn dump_lists_every_edge() {
        let net = Net::new(&two_state(0.1, 0.9)).unwrap();
        let g = explore(&net, 10).unwrap();
        let text = g.dump(&net);
        assert!(text.contains("state_0 -> state_1 rate 1e-1 label fail/0"), "{text}");
        assert!(text.contains("state_1 -> state_0 rate 9e-1 label repair/0"));
    }
}
