//! Partition-and-shift scheduling under oblivious power `c * len^beta`, for
//! unit demands (one slot per selection round) and fractional demands
//! (weighted selection rounds).

use crate::constants::{derive_constants, DerivedConstants, Omega, RmaxChoice};
use crate::error::{Error, Result};
use crate::grid::{max_cell_load, GridPartition};
use crate::phys::{LinkSet, PowerMode, DEFAULT_SINR_TOLERANCE};
use crate::schedule::{FractionalEntry, FractionalSchedule, Schedule};

/// Demands at or below this are treated as exhausted.
pub const DEMAND_EPS: f64 = 1e-12;

fn oblivious_grid(set: &LinkSet, choice: RmaxChoice) -> Result<(DerivedConstants, GridPartition)> {
    set.require_mode(PowerMode::Oblivious)?;
    let constants = derive_constants(set, choice)?;
    let grid = GridPartition::for_max_length(constants.rmax, constants.cap_k)?;
    Ok((constants, grid))
}

pub fn schedule_partition(set: &LinkSet) -> Result<Schedule> {
    schedule_partition_with(set, RmaxChoice::LongestLink)
}

pub fn schedule_partition_with(set: &LinkSet, choice: RmaxChoice) -> Result<Schedule> {
    set.require_mode(PowerMode::Oblivious)?;
    if set.is_empty() {
        return Ok(Schedule::default());
    }
    let (_, grid) = oblivious_grid(set, choice)?;
    let ids: Vec<usize> = set.ids().collect();
    let slots = grid.partition_slots(set, &ids);
    for (t, slot) in slots.iter().enumerate() {
        if !set.check_independent_with(slot, DEFAULT_SINR_TOLERANCE)? {
            return Err(Error::Verification(format!(
                "partition slot {t} failed the SINR check"
            )));
        }
    }
    Ok(Schedule::new(slots))
}

/// Weighted partition-and-shift: each round visits every residue class,
/// takes the lowest live link of each matching cell, and gives the set the
/// smallest remaining demand among its members.
pub fn schedule_fractional(set: &LinkSet) -> Result<FractionalSchedule> {
    set.require_mode(PowerMode::Oblivious)?;
    if let Some(l) = set.links().iter().find(|l| !(l.demand > 0.0)) {
        return Err(Error::InvalidInstance(format!(
            "link {} has nonpositive demand {}",
            l.id, l.demand
        )));
    }
    if set.is_empty() {
        return Ok(FractionalSchedule::default());
    }
    let (_, grid) = oblivious_grid(set, RmaxChoice::LongestLink)?;
    let ids: Vec<usize> = set.ids().collect();
    let classes = grid.class_buckets(set, &ids);
    let mut remaining: Vec<f64> = set.links().iter().map(|l| l.demand).collect();
    // per class, per cell: index of the lowest live link in the bucket
    let mut cursor: Vec<Vec<usize>> = classes.iter().map(|(_, c)| vec![0; c.len()]).collect();
    let mut live = set.len();
    let mut entries = Vec::new();

    while live > 0 {
        for (class_pos, (_, cells)) in classes.iter().enumerate() {
            let picked: Vec<(usize, usize)> = cells
                .iter()
                .enumerate()
                .filter_map(|(cell_pos, bucket)| {
                    bucket
                        .get(cursor[class_pos][cell_pos])
                        .map(|&id| (cell_pos, id))
                })
                .collect();
            if picked.is_empty() {
                continue;
            }
            let gamma = picked
                .iter()
                .map(|&(_, id)| remaining[id])
                .fold(f64::INFINITY, f64::min);
            for &(cell_pos, id) in &picked {
                remaining[id] -= gamma;
                if remaining[id] <= DEMAND_EPS {
                    remaining[id] = 0.0;
                    cursor[class_pos][cell_pos] += 1;
                    live -= 1;
                }
            }
            entries.push(FractionalEntry {
                ids: picked.into_iter().map(|(_, id)| id).collect(),
                gamma,
            });
        }
    }

    for (k, e) in entries.iter().enumerate() {
        if !set.check_independent_with(&e.ids, DEFAULT_SINR_TOLERANCE)? {
            return Err(Error::Verification(format!(
                "fractional entry {k} failed the SINR check"
            )));
        }
    }
    Ok(FractionalSchedule { entries })
}

/// Upper and lower length bounds from the cell load (`B` or `D`), `K` and `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthBounds {
    pub load: f64,
    pub cap_k: u32,
    pub omega: Omega,
    /// `(K+1)^2 * load`
    pub upper: f64,
    /// `load / omega`; `None` without noise.
    pub lower: Option<f64>,
}

impl LengthBounds {
    pub fn from_parts(load: f64, cap_k: u32, omega: Omega) -> Self {
        let side = cap_k as f64 + 1.0;
        Self {
            load,
            cap_k,
            omega,
            upper: side * side * load,
            lower: omega.value().map(|w| load / w as f64),
        }
    }

    /// Guaranteed approximation ratio `(K+1)^2 * omega`.
    pub fn ratio(&self) -> Option<f64> {
        let side = self.cap_k as f64 + 1.0;
        self.omega.value().map(|w| side * side * w as f64)
    }
}

/// Bounds for the partition schedulers; `weighted` selects `D` over `B`.
pub fn length_bounds(set: &LinkSet, weighted: bool) -> Result<LengthBounds> {
    let (constants, grid) = if set.is_empty() {
        set.require_mode(PowerMode::Oblivious)?;
        let c = derive_constants(set, RmaxChoice::LongestLink)?;
        return Ok(LengthBounds::from_parts(0.0, c.cap_k, c.omega));
    } else {
        oblivious_grid(set, RmaxChoice::LongestLink)?
    };
    let load = max_cell_load(set, &grid, weighted);
    Ok(LengthBounds::from_parts(
        load,
        constants.cap_k,
        constants.omega,
    ))
}
