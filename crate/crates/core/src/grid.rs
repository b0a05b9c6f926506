//! Half-open grid partition of the plane and the residue-class shifting used
//! by the partition schedulers.
//!
//! Cell `(i, j)` is `[i*l, (i+1)*l) x [j*l, (j+1)*l)`. Links are bucketed by
//! the cell holding their sender. Two cells in the same residue class mod
//! `K+1` are at least `K` cells apart along some axis, which puts their
//! senders at distance `>= K*l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::phys::LinkSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellIndex {
    pub i: i64,
    pub j: i64,
}

/// A residue class and the nonempty cell buckets that belong to it.
pub type ClassBuckets = ((u32, u32), Vec<Vec<usize>>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPartition {
    cell_side: f64,
    cap_k: u32,
}

impl GridPartition {
    pub fn new(cell_side: f64, cap_k: u32) -> Result<Self> {
        if !(cell_side > 0.0 && cell_side.is_finite()) {
            return Err(Error::Domain(format!(
                "cell side must be positive, got {cell_side}"
            )));
        }
        Ok(Self { cell_side, cap_k })
    }

    /// Grid with `l = R / sqrt(2)`, so any link fits inside a cell diagonal.
    pub fn for_max_length(rmax: f64, cap_k: u32) -> Result<Self> {
        Self::new(rmax / std::f64::consts::SQRT_2, cap_k)
    }

    pub fn cell_side(&self) -> f64 {
        self.cell_side
    }

    pub fn cap_k(&self) -> u32 {
        self.cap_k
    }

    pub fn cell_of(&self, p: Point) -> CellIndex {
        CellIndex {
            i: (p.x / self.cell_side).floor() as i64,
            j: (p.y / self.cell_side).floor() as i64,
        }
    }

    /// `(i mod (K+1), j mod (K+1))` with a nonnegative modulus.
    pub fn residue(&self, cell: CellIndex) -> (u32, u32) {
        let m = self.cap_k as i64 + 1;
        (cell.i.rem_euclid(m) as u32, cell.j.rem_euclid(m) as u32)
    }

    /// Buckets the given links by sender cell; each bucket is sorted by id.
    pub fn bucket_ids(&self, set: &LinkSet, ids: &[usize]) -> BTreeMap<CellIndex, Vec<usize>> {
        let mut buckets: BTreeMap<CellIndex, Vec<usize>> = BTreeMap::new();
        for &id in ids {
            let cell = self.cell_of(set.links()[id].sender);
            buckets.entry(cell).or_default().push(id);
        }
        for b in buckets.values_mut() {
            b.sort_unstable();
        }
        buckets
    }

    pub fn bucket_by_cell(&self, set: &LinkSet) -> BTreeMap<CellIndex, Vec<usize>> {
        let ids: Vec<usize> = set.ids().collect();
        self.bucket_ids(set, &ids)
    }

    /// Buckets grouped by residue class, in the order of [`residue_classes`].
    pub fn class_buckets(&self, set: &LinkSet, ids: &[usize]) -> Vec<ClassBuckets> {
        let mut by_class: BTreeMap<(u32, u32), Vec<Vec<usize>>> = BTreeMap::new();
        for (cell, bucket) in self.bucket_ids(set, ids) {
            by_class.entry(self.residue(cell)).or_default().push(bucket);
        }
        residue_classes(self.cap_k)
            .into_iter()
            .filter_map(|class| by_class.remove(&class).map(|b| (class, b)))
            .collect()
    }

    /// Partition-and-shift over `ids`: for each residue class in order, keep
    /// forming slots holding the lowest remaining id of every cell in the
    /// class until the class is exhausted.
    pub fn partition_slots(&self, set: &LinkSet, ids: &[usize]) -> Vec<Vec<usize>> {
        let mut slots = Vec::new();
        for (_, cells) in self.class_buckets(set, ids) {
            let depth = cells.iter().map(Vec::len).max().unwrap_or(0);
            for round in 0..depth {
                let slot: Vec<usize> = cells.iter().filter_map(|c| c.get(round).copied()).collect();
                slots.push(slot);
            }
        }
        slots
    }
}

/// All `(r, s)` with `0 <= r, s <= K`, `r` outer.
pub fn residue_classes(cap_k: u32) -> Vec<(u32, u32)> {
    (0..=cap_k)
        .flat_map(|r| (0..=cap_k).map(move |s| (r, s)))
        .collect()
}

/// `B` (max links in a cell) when `weighted` is false, `D` (max total demand
/// in a cell) otherwise. Zero for an empty set.
pub fn max_cell_load(set: &LinkSet, grid: &GridPartition, weighted: bool) -> f64 {
    grid.bucket_by_cell(set)
        .values()
        .map(|b| {
            if weighted {
                b.iter().map(|&id| set.links()[id].demand).sum()
            } else {
                b.len() as f64
            }
        })
        .fold(0.0, f64::max)
}
