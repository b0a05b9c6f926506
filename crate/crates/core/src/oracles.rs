//! Exact optima for small instances and a subset-sum Partition decider.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::phys::{LinkSet, DEFAULT_SINR_TOLERANCE};
use crate::schedule::{FractionalEntry, FractionalSchedule, Schedule};

pub const BRUTEFORCE_CAP: usize = 16;
pub const FRACTIONAL_CAP: usize = 14;
pub const PARTITION_SUM_CAP: u64 = 1_000_000;

/// Independence flag for every subset of links, indexed by bitmask.
///
/// A mask is only evaluated when the mask without its top link is
/// independent; independence is closed under taking subsets.
pub fn independent_masks(set: &LinkSet) -> Result<Vec<bool>> {
    let n = set.len();
    if n > 24 {
        return Err(Error::OracleCap(format!(
            "{n} links is too many to enumerate"
        )));
    }
    let table = set.gain_table()?;
    let mut indep = vec![false; 1usize << n];
    indep[0] = true;
    for mask in 1u64..(1u64 << n) {
        let top = 63 - mask.leading_zeros();
        let rest = mask ^ (1u64 << top);
        indep[mask as usize] =
            indep[rest as usize] && table.mask_is_independent(mask, DEFAULT_SINR_TOLERANCE);
    }
    Ok(indep)
}

fn ids_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Minimum-length schedule by subset dynamic programming over bitmasks.
///
/// Each step removes one independent set containing the lowest remaining
/// link, so the optimum cover found is a partition.
pub fn bruteforce_optimum(set: &LinkSet) -> Result<Schedule> {
    let n = set.len();
    if n > BRUTEFORCE_CAP {
        return Err(Error::OracleCap(format!(
            "bruteforce optimum handles at most {BRUTEFORCE_CAP} links, instance has {n}"
        )));
    }
    if n == 0 {
        return Ok(Schedule::default());
    }
    let indep = independent_masks(set)?;
    let full = (1usize << n) - 1;
    let mut best = vec![u16::MAX; full + 1];
    let mut choice = vec![0u32; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let s = sub | low;
            if indep[s] {
                let cand = best[mask ^ s].saturating_add(1);
                if cand < best[mask] {
                    best[mask] = cand;
                    choice[mask] = s as u32;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut slots = Vec::with_capacity(best[full] as usize);
    let mut mask = full;
    while mask != 0 {
        let s = choice[mask] as usize;
        slots.push(ids_of(s as u64));
        mask ^= s;
    }
    let schedule = Schedule::new(slots);
    schedule.validate(set, DEFAULT_SINR_TOLERANCE)?;
    Ok(schedule)
}

/// Optimal fractional schedule: one LP column per nonempty independent set,
/// one equality row per link demand.
pub fn fractional_optimum(set: &LinkSet) -> Result<FractionalSchedule> {
    let n = set.len();
    if n > FRACTIONAL_CAP {
        return Err(Error::OracleCap(format!(
            "fractional optimum handles at most {FRACTIONAL_CAP} links, instance has {n}"
        )));
    }
    if set.links().iter().all(|l| l.demand == 0.0) {
        return Ok(FractionalSchedule::default());
    }
    let indep = independent_masks(set)?;
    let columns: Vec<u64> = (1..indep.len() as u64)
        .filter(|&m| indep[m as usize])
        .collect();
    let mut lp = LinearProgram::new(columns.len());
    for v in 0..columns.len() {
        lp.set_objective(v, 1.0);
    }
    for (e, link) in set.links().iter().enumerate() {
        let row = columns
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >> e & 1 == 1)
            .map(|(v, _)| (v, 1.0))
            .collect();
        lp.add_constraint(row, Relation::Eq, link.demand);
    }
    let sol = lp.solve()?;
    let entries = columns
        .iter()
        .zip(&sol.values)
        .filter(|(_, &g)| g > 1e-12)
        .map(|(&m, &gamma)| FractionalEntry {
            ids: ids_of(m),
            gamma,
        })
        .collect();
    Ok(FractionalSchedule { entries })
}

/// Index split of a Partition instance into two halves of equal sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionWitness {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl PartitionWitness {
    pub fn sums(&self, values: &[u64]) -> (u64, u64) {
        let s = |ix: &[usize]| ix.iter().map(|&i| values[i]).sum();
        (s(&self.first), s(&self.second))
    }
}

/// Subset-sum DP on `N/2`. `Ok(None)` when no equal split exists.
pub fn partition_decide(values: &[u64]) -> Result<Option<PartitionWitness>> {
    if values.is_empty() || values.contains(&0) {
        return Err(Error::Domain(
            "partition needs a nonempty list of positive integers".into(),
        ));
    }
    let total: u64 = values.iter().sum();
    if total > PARTITION_SUM_CAP {
        return Err(Error::OracleCap(format!(
            "partition sum {total} exceeds {PARTITION_SUM_CAP}"
        )));
    }
    if total % 2 == 1 {
        return Ok(None);
    }
    let target = (total / 2) as usize;
    // reached_by[s] = first item index that made sum s reachable
    let mut reached_by: Vec<Option<usize>> = vec![None; target + 1];
    let mut reachable = vec![false; target + 1];
    reachable[0] = true;
    for (i, &v) in values.iter().enumerate() {
        let v = v as usize;
        for s in (v..=target).rev() {
            if !reachable[s] && reachable[s - v] {
                reachable[s] = true;
                reached_by[s] = Some(i);
            }
        }
    }
    if !reachable[target] {
        return Ok(None);
    }
    let mut in_first = vec![false; values.len()];
    let mut s = target;
    while s > 0 {
        let i = reached_by[s].expect("reachable sums carry a parent");
        in_first[i] = true;
        s -= values[i] as usize;
    }
    let (first, second): (Vec<usize>, Vec<usize>) = (0..values.len()).partition(|&i| in_first[i]);
    Ok(Some(PartitionWitness { first, second }))
}
