use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phys::LinkSet;

/// Ordered slots; each slot is a set of link ids transmitting together.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub slots: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn new(slots: Vec<Vec<usize>>) -> Self {
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Checks that slots are disjoint, cover `0..set.len()` exactly, and that
    /// every slot is independent under `tolerance`.
    pub fn validate(&self, set: &LinkSet, tolerance: f64) -> Result<()> {
        let mut seen = vec![false; set.len()];
        for (t, slot) in self.slots.iter().enumerate() {
            if slot.is_empty() {
                return Err(Error::Verification(format!("slot {t} is empty")));
            }
            for &id in slot {
                set.link(id)?;
                if std::mem::replace(&mut seen[id], true) {
                    return Err(Error::Verification(format!("link {id} scheduled twice")));
                }
            }
            if !set.check_independent_with(slot, tolerance)? {
                return Err(Error::Verification(format!("slot {t} is not independent")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Verification(format!(
                "link {missing} is never scheduled"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalEntry {
    pub ids: Vec<usize>,
    pub gamma: f64,
}

/// Weighted independent sets; length is the total weight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FractionalSchedule {
    pub entries: Vec<FractionalEntry>,
}

impl FractionalSchedule {
    pub fn length(&self) -> f64 {
        self.entries.iter().map(|e| e.gamma).sum()
    }

    /// Supported load `c_S(e)` for every link id below `n`.
    pub fn load(&self, n: usize) -> Vec<f64> {
        let mut load = vec![0.0; n];
        for e in &self.entries {
            for &id in &e.ids {
                if id < n {
                    load[id] += e.gamma;
                }
            }
        }
        load
    }

    /// Largest `|c_S(e) - d(e)|` over all links.
    pub fn demand_error(&self, set: &LinkSet) -> f64 {
        self.load(set.len())
            .iter()
            .zip(set.links())
            .map(|(c, l)| (c - l.demand).abs())
            .fold(0.0, f64::max)
    }

    pub fn validate(
        &self,
        set: &LinkSet,
        sinr_tolerance: f64,
        demand_tolerance: f64,
    ) -> Result<()> {
        for (k, e) in self.entries.iter().enumerate() {
            if !(e.gamma > 0.0) {
                return Err(Error::Verification(format!(
                    "entry {k} has weight {}",
                    e.gamma
                )));
            }
            if !set.check_independent_with(&e.ids, sinr_tolerance)? {
                return Err(Error::Verification(format!("entry {k} is not independent")));
            }
        }
        let load = self.load(set.len());
        for (l, c) in set.links().iter().zip(load) {
            if (c - l.demand).abs() > demand_tolerance {
                return Err(Error::Verification(format!(
                    "link {} carries {c} against demand {}",
                    l.id, l.demand
                )));
            }
        }
        Ok(())
    }
}
