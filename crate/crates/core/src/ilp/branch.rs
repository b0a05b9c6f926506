use super::{
    build_ilp, lift_cut, separate_min_cover, solve_lp, CoverCut, IlpInstance, LpRelaxState,
};
use crate::error::{Error, Result};
use crate::lp::LpError;
use crate::phys::{LinkSet, DEFAULT_SINR_TOLERANCE};
use crate::schedule::Schedule;
use crate::uniform::schedule_greedy_iterative;

const INTEGRALITY_TOL: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-6;
const RESTART_EVERY: usize = 500;
const MAX_ROUNDS_PER_NODE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuttingPlaneOptions {
    /// Upper limit on the number of slots in the model; defaults to `n`.
    pub slot_cap: Option<usize>,
    pub node_budget: usize,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        Self {
            slot_cap: None,
            node_budget: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuttingPlaneOutcome {
    pub schedule: Schedule,
    /// Root relaxation value after cut separation.
    pub lp_lower_bound: f64,
    pub proven_optimal: bool,
    pub cuts: Vec<CoverCut>,
    pub nodes: usize,
}

struct Node {
    fixed: Vec<Option<bool>>,
    bound: f64,
}

enum NodeResult {
    Pruned(f64),
    Branch { bound: f64, var: (usize, usize) },
}

/// Cutting-plane branch-and-bound for arbitrary power.
///
/// The iterative greedy schedule is the starting incumbent, so a schedule is
/// always returned; `proven_optimal` is set only when the search tree was
/// exhausted within the node budget.
pub fn schedule_cutting_plane(
    set: &LinkSet,
    opts: &CuttingPlaneOptions,
) -> Result<CuttingPlaneOutcome> {
    let ilp = build_ilp(set)?;
    let n = ilp.n;
    if n == 0 {
        return Ok(CuttingPlaneOutcome {
            schedule: Schedule::default(),
            lp_lower_bound: 0.0,
            proven_optimal: true,
            cuts: Vec::new(),
            nodes: 0,
        });
    }
    let slots = opts.slot_cap.unwrap_or(n).min(n);
    if slots == 0 {
        return Err(Error::InvalidParams("slot cap must be at least 1".into()));
    }
    let mut incumbent = schedule_greedy_iterative(set)?;
    let mut state = LpRelaxState::new(n, slots);
    let mut stack = vec![Node {
        fixed: vec![None; n * slots],
        bound: 0.0,
    }];
    let mut nodes = 0usize;
    let mut root_bound: Option<f64> = None;
    let mut exhausted_budget = false;

    while let Some(node) = stack.pop() {
        if nodes >= opts.node_budget {
            stack.push(node);
            exhausted_budget = true;
            break;
        }
        if prunable(node.bound, incumbent.len()) {
            continue;
        }
        nodes += 1;
        state.set_fixings(node.fixed);
        let result = process_node(set, &ilp, &mut state, &mut incumbent)?;
        let bound = match result {
            NodeResult::Pruned(b) | NodeResult::Branch { bound: b, .. } => b,
        };
        if root_bound.is_none() {
            root_bound = Some(bound);
        }
        if let NodeResult::Branch { bound, var: (i, t) } = result {
            let mut zero = state.fixings().to_vec();
            zero[i * slots + t] = Some(false);
            let mut one = state.fixings().to_vec();
            one[i * slots + t] = Some(true);
            stack.push(Node { fixed: zero, bound });
            stack.push(Node { fixed: one, bound });
        }
        if nodes.is_multiple_of(RESTART_EVERY) && !stack.is_empty() {
            // continue the dive from the most promising open node
            let best = (0..stack.len())
                .min_by(|&p, &q| stack[p].bound.total_cmp(&stack[q].bound))
                .unwrap();
            let node = stack.remove(best);
            stack.push(node);
        }
    }

    let open_bound = stack
        .iter()
        .map(|nd| nd.bound)
        .fold(f64::INFINITY, f64::min);
    // the model only rules out shorter schedules that fit in `slots`
    let proven_optimal = (!exhausted_budget || prunable(open_bound, incumbent.len()))
        && incumbent.len() <= slots + 1;
    incumbent.validate(set, DEFAULT_SINR_TOLERANCE)?;
    Ok(CuttingPlaneOutcome {
        schedule: incumbent,
        lp_lower_bound: root_bound.unwrap_or(0.0),
        proven_optimal,
        cuts: state.cuts().to_vec(),
        nodes,
    })
}

fn prunable(bound: f64, incumbent_len: usize) -> bool {
    (bound - BOUND_TOL).ceil() >= incumbent_len as f64
}

fn process_node(
    set: &LinkSet,
    ilp: &IlpInstance,
    state: &mut LpRelaxState,
    incumbent: &mut Schedule,
) -> Result<NodeResult> {
    let slots = state.slots();
    let mut last_bound = f64::INFINITY;
    for round in 0.. {
        let sol = match solve_lp(state) {
            Ok(s) => s,
            Err(LpError::Infeasible) => return Ok(NodeResult::Pruned(f64::INFINITY)),
            Err(e) => return Err(e.into()),
        };
        last_bound = sol.objective;
        if prunable(sol.objective, incumbent.len()) {
            return Ok(NodeResult::Pruned(last_bound));
        }
        let fractional = most_fractional(&sol.x);
        if fractional.is_none() {
            let members: Vec<Vec<usize>> = (0..slots)
                .map(|t| (0..ilp.n).filter(|&i| sol.x[i][t] > 0.5).collect())
                .collect();
            let mut added = false;
            let mut feasible = true;
            for (t, slot) in members.iter().enumerate() {
                if slot.is_empty() || set.check_independent_with(slot, DEFAULT_SINR_TOLERANCE)? {
                    continue;
                }
                feasible = false;
                let column: Vec<f64> = (0..ilp.n).map(|i| sol.x[i][t]).collect();
                for &i in slot {
                    if let Some(cut) = separate_min_cover(ilp, &column, i, t) {
                        added |= add_everywhere(state, ilp, &cut);
                    }
                }
            }
            if feasible {
                let found: Vec<Vec<usize>> =
                    members.into_iter().filter(|s| !s.is_empty()).collect();
                if found.len() < incumbent.len() {
                    *incumbent = Schedule::new(found);
                }
                return Ok(NodeResult::Pruned(last_bound));
            }
            if !added {
                // no separating cover within rounding noise of the checker
                return Ok(NodeResult::Pruned(last_bound));
            }
            continue;
        }

        let mut added = false;
        if round < MAX_ROUNDS_PER_NODE {
            for t in 0..slots {
                let column = sol.column(t);
                for i in 0..ilp.n {
                    if column[i] <= 1e-9 || !ilp.knapsack_violated(i, &column) {
                        continue;
                    }
                    if let Some(cut) = separate_min_cover(ilp, &column, i, t) {
                        let lifted = lift_cut(ilp, &cut);
                        for c in [cut, lifted] {
                            if c.violation(&column, sol.y[t]) > 1e-7 {
                                added |= add_everywhere(state, ilp, &c);
                            }
                        }
                    }
                }
            }
        }
        if !added {
            return Ok(NodeResult::Branch {
                bound: last_bound,
                var: fractional.unwrap(),
            });
        }
    }
    unreachable!("the round loop only exits by returning; last bound {last_bound}")
}

/// Adds the cut and its lifted form for every slot.
fn add_everywhere(state: &mut LpRelaxState, ilp: &IlpInstance, cut: &CoverCut) -> bool {
    let lifted = if cut.is_lifted() {
        None
    } else {
        Some(lift_cut(ilp, cut))
    };
    let mut added = false;
    for t in 0..state.slots() {
        added |= state.add_cut(cut.for_slot(t));
        if let Some(l) = &lifted {
            if l.is_lifted() {
                added |= state.add_cut(l.for_slot(t));
            }
        }
    }
    added
}

fn most_fractional(x: &[Vec<f64>]) -> Option<(usize, usize)> {
    let mut best = None;
    let mut best_dist = INTEGRALITY_TOL;
    for (i, row) in x.iter().enumerate() {
        for (t, &v) in row.iter().enumerate() {
            let dist = v.min(1.0 - v);
            if dist > best_dist {
                best_dist = dist;
                best = Some((i, t));
            }
        }
    }
    best
}
