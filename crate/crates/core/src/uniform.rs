//! Uniform-power scheduling: conflict-range-factor grouping with a
//! partition-and-shift pass per group, and iterative greedy extraction of
//! maximal independent sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::separation_for_signal_floor;
use crate::error::{Error, Result};
use crate::grid::GridPartition;
use crate::phys::{LinkSet, PowerMode, DEFAULT_SINR_TOLERANCE};
use crate::schedule::Schedule;

/// Relative inflation of the longest link length used as the reference `R'`,
/// keeping every conflict range factor finite.
pub const REFERENCE_INFLATION: f64 = 1e-3;

/// How many times a group's separation may be bumped after a failed check.
const MAX_SEPARATION_BUMPS: u32 = 64;

/// `1 / (1 - len / rmax)`; infinite at `len == rmax`.
pub fn conflict_range_factor(length: f64, rmax: f64) -> Result<f64> {
    if !(length > 0.0) || length > rmax {
        return Err(Error::Domain(format!(
            "conflict range factor needs 0 < len <= rmax (len {length}, rmax {rmax})"
        )));
    }
    if length == rmax {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (1.0 - length / rmax))
}

/// Smallest `i >= 1` with `factor <= 2^i`; group 1 therefore covers `[1, 2]`
/// and group `i > 1` covers `(2^(i-1), 2^i]`.
pub fn group_index(factor: f64) -> Result<u32> {
    if !factor.is_finite() || factor < 1.0 {
        return Err(Error::Domain(format!(
            "invalid conflict range factor {factor}"
        )));
    }
    let mut i = 1u32;
    while factor > 2f64.powi(i as i32) * (1.0 + 1e-12) {
        i += 1;
    }
    Ok(i)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGroup {
    pub index: u32,
    pub member_ids: Vec<usize>,
    pub factor_range: (f64, f64),
}

impl LinkGroup {
    fn range_for(index: u32) -> (f64, f64) {
        if index == 1 {
            (1.0, 2.0)
        } else {
            (2f64.powi(index as i32 - 1), 2f64.powi(index as i32))
        }
    }
}

/// Reference length `R' = (1 + 1e-3) * longest link`.
pub fn reference_length(set: &LinkSet) -> f64 {
    (1.0 + REFERENCE_INFLATION) * set.max_link_length()
}

/// Nonempty groups in increasing index order.
pub fn group_links(set: &LinkSet) -> Result<Vec<LinkGroup>> {
    set.require_mode(PowerMode::Uniform)?;
    let rref = reference_length(set);
    let mut groups: Vec<LinkGroup> = Vec::new();
    for link in set.links() {
        let index = group_index(conflict_range_factor(link.length(), rref)?)?;
        match groups.iter_mut().find(|g| g.index == index) {
            Some(g) => g.member_ids.push(link.id),
            None => groups.push(LinkGroup {
                index,
                member_ids: vec![link.id],
                factor_range: LinkGroup::range_for(index),
            }),
        }
    }
    groups.sort_by_key(|g| g.index);
    Ok(groups)
}

/// The group count in the approximation guarantee, `ceil(log2 max f)`
/// with `R'` as reference. Zero for an empty set.
pub fn group_bound(set: &LinkSet) -> Result<u32> {
    set.require_mode(PowerMode::Uniform)?;
    let rref = reference_length(set);
    set.links()
        .iter()
        .map(|l| group_index(conflict_range_factor(l.length(), rref)?))
        .try_fold(0u32, |acc, g| g.map(|g| acc.max(g)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupRun {
    pub group: LinkGroup,
    pub cap_k: u32,
    pub cell_side: f64,
    pub slots: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSchedule {
    pub runs: Vec<GroupRun>,
}

impl GroupedSchedule {
    pub fn schedule(&self) -> Schedule {
        Schedule::new(
            self.runs
                .iter()
                .flat_map(|r| r.slots.iter().cloned())
                .collect(),
        )
    }
}

fn check_solo_feasible(set: &LinkSet) -> Result<()> {
    let p = set.params();
    if p.xi == 0.0 {
        return Ok(());
    }
    for link in set.links() {
        let solo = p.pmax * p.eta * link.length().powf(-p.kappa) / p.xi;
        if !(solo > p.sigma) {
            return Err(Error::Inadmissible {
                id: link.id,
                reason: format!("solo SINR {solo} does not exceed sigma {}", p.sigma),
            });
        }
    }
    Ok(())
}

fn schedule_group(set: &LinkSet, group: &LinkGroup) -> Result<GroupRun> {
    let p = set.params();
    let longest = group
        .member_ids
        .iter()
        .map(|&id| set.links()[id].length())
        .fold(0.0, f64::max);
    let floor = p.pmax * p.eta * longest.powf(-p.kappa);
    let first = separation_for_signal_floor(p, floor)?;
    for cap_k in first..=first + MAX_SEPARATION_BUMPS {
        let grid = GridPartition::for_max_length(longest, cap_k)?;
        let slots = grid.partition_slots(set, &group.member_ids);
        let mut ok = true;
        for slot in &slots {
            if !set.check_independent_with(slot, DEFAULT_SINR_TOLERANCE)? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(GroupRun {
                group: group.clone(),
                cap_k,
                cell_side: grid.cell_side(),
                slots,
            });
        }
    }
    Err(Error::Verification(format!(
        "group {} stayed infeasible after {MAX_SEPARATION_BUMPS} separation bumps",
        group.index
    )))
}

pub fn schedule_grouped_detailed(set: &LinkSet) -> Result<GroupedSchedule> {
    set.require_mode(PowerMode::Uniform)?;
    check_solo_feasible(set)?;
    let groups = group_links(set)?;
    let runs = groups
        .par_iter()
        .map(|g| schedule_group(set, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupedSchedule { runs })
}

pub fn schedule_grouped(set: &LinkSet) -> Result<Schedule> {
    Ok(schedule_grouped_detailed(set)?.schedule())
}

/// Repeatedly extracts a maximal independent set from the residual links
/// (shortest first, ties by id) and emits it as a slot.
///
/// Works under any power mode; the arbitrary-power solver uses it as its
/// fallback incumbent.
pub fn schedule_greedy_iterative(set: &LinkSet) -> Result<Schedule> {
    let table = set.gain_table()?;
    let mut residual: Vec<usize> = set.ids().collect();
    residual.sort_by(|&a, &b| {
        let (la, lb) = (set.links()[a].length(), set.links()[b].length());
        la.total_cmp(&lb).then(a.cmp(&b))
    });
    let mut slots = Vec::new();
    while !residual.is_empty() {
        let mut slot: Vec<usize> = Vec::new();
        let try_add = |slot: &mut Vec<usize>, id: usize| {
            let pos = slot.binary_search(&id).unwrap_err();
            slot.insert(pos, id);
            if table.is_independent(slot, DEFAULT_SINR_TOLERANCE) {
                true
            } else {
                slot.remove(pos);
                false
            }
        };
        let mut rejected = Vec::new();
        for &id in &residual {
            if !try_add(&mut slot, id) {
                rejected.push(id);
            }
        }
        // augmentation pass
        rejected.retain(|&id| !try_add(&mut slot, id));
        if slot.is_empty() {
            return Err(Error::Inadmissible {
                id: residual[0],
                reason: "link cannot transmit even alone".into(),
            });
        }
        residual.retain(|id| slot.binary_search(id).is_err());
        slots.push(slot);
    }
    Ok(Schedule::new(slots))
}
