//! Instance and schedule files.
//!
//! Both are JSON with a `formatVersion` field. Files are written in one
//! canonical form (sorted keys, shortest round-trip floats, two-space
//! indent, trailing newline) so that the SHA-256 of the canonical instance
//! text identifies an instance regardless of how the file was formatted.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::constants::{derive_constants, Omega, RmaxChoice};
use crate::error::{Error, Result};
use crate::gadget::GadgetConfig;
use crate::grid::{max_cell_load, GridPartition};
use crate::phys::{Link, LinkSet, PhysParams, PowerMode, DEFAULT_SINR_TOLERANCE};
use crate::schedule::{FractionalEntry, FractionalSchedule, Schedule};

pub const FORMAT_VERSION: u32 = 1;

fn unit_demand() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub id: usize,
    pub sx: f64,
    pub sy: f64,
    pub rx: f64,
    pub ry: f64,
    #[serde(default = "unit_demand")]
    pub demand: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
}

/// Where an instance came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Gadget(GadgetConfig),
    Generated {
        generator: String,
        n: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub params: PhysParams,
    pub power_mode: PowerMode,
    pub links: Vec<LinkRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl InstanceFile {
    pub fn from_link_set(set: &LinkSet, provenance: Option<Provenance>) -> Self {
        let links = set
            .links()
            .iter()
            .map(|l| LinkRecord {
                id: l.id,
                sx: l.sender.x,
                sy: l.sender.y,
                rx: l.receiver.x,
                ry: l.receiver.y,
                demand: l.demand,
                power: l.power,
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            params: *set.params(),
            power_mode: set.mode(),
            links,
            provenance,
        }
    }

    /// Validates and converts to a [`LinkSet`].
    pub fn to_link_set(&self) -> Result<LinkSet> {
        check_version(self.format_version)?;
        let links = self
            .links
            .iter()
            .map(|r| {
                let mut l = Link::new(r.id, (r.sx, r.sy), (r.rx, r.ry)).with_demand(r.demand);
                l.power = r.power;
                l
            })
            .collect();
        LinkSet::new(self.params, self.power_mode, links)
    }

    pub fn to_canonical_string(&self) -> Result<String> {
        canonical_json(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        check_version(file.format_version)?;
        Ok(file)
    }

    /// Hex SHA-256 of the canonical text.
    pub fn digest(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(
            self.to_canonical_string()?.as_bytes(),
        )))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical_string()?)?;
        Ok(())
    }
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format version {v}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

/// Sorted keys (the `serde_json` map is ordered), two-space indent, final newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleBody {
    Integral { slots: Vec<Vec<usize>> },
    Fractional { entries: Vec<FractionalEntry> },
}

impl ScheduleBody {
    pub fn length(&self) -> f64 {
        match self {
            ScheduleBody::Integral { slots } => slots.len() as f64,
            ScheduleBody::Fractional { entries } => entries.iter().map(|e| e.gamma).sum(),
        }
    }
}

impl From<Schedule> for ScheduleBody {
    fn from(s: Schedule) -> Self {
        ScheduleBody::Integral { slots: s.slots }
    }
}

impl From<FractionalSchedule> for ScheduleBody {
    fn from(s: FractionalSchedule) -> Self {
        ScheduleBody::Fractional { entries: s.entries }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AlgorithmInfo {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationStatus {
    pub verified: bool,
    pub sinr_tolerance: f64,
    /// Smallest `sinr - sigma` over all slots.
    pub min_margin: Option<f64>,
}

/// `K`, `omega`, `tau`, `B` and `D` of the instance, where defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstantsSnapshot {
    pub tau: f64,
    pub cap_k: Option<u32>,
    pub omega: Omega,
    pub max_cell_count: Option<f64>,
    pub max_cell_demand: Option<f64>,
}

impl ConstantsSnapshot {
    /// `K`, `B` and `D` describe the oblivious-power grid and need a
    /// separation constant; they are left empty otherwise.
    pub fn of(set: &LinkSet) -> Self {
        let p = set.params();
        let tau = crate::constants::interference_sum_constant(p.kappa);
        let omega = crate::constants::cell_capacity_bound(p);
        let derived = if set.is_empty() || set.mode() != PowerMode::Oblivious {
            None
        } else {
            derive_constants(set, RmaxChoice::LongestLink).ok()
        };
        let (cap_k, b, d) = match derived {
            Some(c) => match GridPartition::for_max_length(c.rmax, c.cap_k) {
                Ok(grid) => (
                    Some(c.cap_k),
                    Some(max_cell_load(set, &grid, false)),
                    Some(max_cell_load(set, &grid, true)),
                ),
                Err(_) => (Some(c.cap_k), None, None),
            },
            None => (None, None, None),
        };
        Self {
            tau,
            cap_k,
            omega,
            max_cell_count: b,
            max_cell_demand: d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScheduleFile {
    pub format_version: u32,
    pub instance_digest: String,
    pub algorithm: AlgorithmInfo,
    pub schedule: ScheduleBody,
    pub verification: VerificationStatus,
    pub constants: ConstantsSnapshot,
}

impl ScheduleFile {
    /// Verifies `body` against the instance and packages it. Fails with
    /// [`Error::Verification`] rather than produce an unverified file.
    pub fn build(
        instance: &InstanceFile,
        set: &LinkSet,
        algorithm: AlgorithmInfo,
        body: ScheduleBody,
        tolerance: f64,
    ) -> Result<Self> {
        let report = verify_body(set, &body, tolerance)?;
        if !report.passed {
            return Err(Error::Verification(report.failures.join("; ")));
        }
        Ok(Self {
            format_version: FORMAT_VERSION,
            instance_digest: instance.digest()?,
            algorithm,
            schedule: body,
            verification: VerificationStatus {
                verified: true,
                sinr_tolerance: tolerance,
                min_margin: report.min_margin(),
            },
            constants: ConstantsSnapshot::of(set),
        })
    }

    pub fn to_canonical_string(&self) -> Result<String> {
        canonical_json(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)?;
        check_version(file.format_version)?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical_string()?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SlotReport {
    pub index: usize,
    pub ids: Vec<usize>,
    pub passed: bool,
    /// Smallest `sinr - sigma` in the slot; `None` for an empty slot.
    pub min_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DemandReport {
    pub link: usize,
    pub demand: f64,
    pub scheduled: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub passed: bool,
    pub slots: Vec<SlotReport>,
    pub demands: Vec<DemandReport>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn min_margin(&self) -> Option<f64> {
        self.slots
            .iter()
            .filter_map(|s| s.min_margin)
            .fold(None, |acc: Option<f64>, m| {
                Some(acc.map_or(m, |a| a.min(m)))
            })
    }
}

/// Absolute tolerance on `|c_S(e) - d(e)|` for fractional schedules.
pub const DEMAND_TOLERANCE: f64 = 1e-9;

/// Checks a schedule body against an instance: per-slot independence with
/// margins, exact once-coverage for slots, demand exactness for entries.
pub fn verify_body(set: &LinkSet, body: &ScheduleBody, tolerance: f64) -> Result<VerifyReport> {
    let n = set.len();
    let mut failures = Vec::new();
    let groups: Vec<&[usize]> = match body {
        ScheduleBody::Integral { slots } => slots.iter().map(Vec::as_slice).collect(),
        ScheduleBody::Fractional { entries } => entries.iter().map(|e| e.ids.as_slice()).collect(),
    };
    let mut slots = Vec::with_capacity(groups.len());
    for (index, ids) in groups.iter().enumerate() {
        if let Some(&bad) = ids.iter().find(|&&id| id >= n) {
            failures.push(format!("slot {index} names unknown link {bad}"));
            slots.push(SlotReport {
                index,
                ids: ids.to_vec(),
                passed: false,
                min_margin: None,
            });
            continue;
        }
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            failures.push(format!("slot {index} lists a link twice"));
        }
        let passed = !ids.is_empty() && set.check_independent_with(ids, tolerance)?;
        if ids.is_empty() {
            failures.push(format!("slot {index} is empty"));
        } else if !passed {
            failures.push(format!("slot {index} fails the SINR check"));
        }
        slots.push(SlotReport {
            index,
            ids: ids.to_vec(),
            passed,
            min_margin: set.min_margin(ids)?,
        });
    }

    let mut demands = Vec::new();
    match body {
        ScheduleBody::Integral { slots: s } => {
            let mut count = vec![0usize; n];
            for id in s.iter().flatten().filter(|&&id| id < n) {
                count[*id] += 1;
            }
            for (id, c) in count.into_iter().enumerate() {
                if c != 1 {
                    failures.push(format!("link {id} is scheduled {c} times"));
                }
            }
        }
        ScheduleBody::Fractional { entries } => {
            for (k, e) in entries.iter().enumerate() {
                if !(e.gamma > 0.0) {
                    failures.push(format!("entry {k} has nonpositive weight {}", e.gamma));
                }
            }
            let load = FractionalSchedule {
                entries: entries.clone(),
            }
            .load(n);
            for (l, scheduled) in set.links().iter().zip(load) {
                let passed = (scheduled - l.demand).abs() <= DEMAND_TOLERANCE;
                if !passed {
                    failures.push(format!(
                        "link {} receives {scheduled} against demand {}",
                        l.id, l.demand
                    ));
                }
                demands.push(DemandReport {
                    link: l.id,
                    demand: l.demand,
                    scheduled,
                    passed,
                });
            }
        }
    }
    Ok(VerifyReport {
        passed: failures.is_empty(),
        slots,
        demands,
        failures,
    })
}

/// Verifies a schedule file against an instance file. Refuses when the
/// schedule was made for a different instance.
pub fn verify(
    instance: &InstanceFile,
    schedule: &ScheduleFile,
    tolerance: f64,
) -> Result<VerifyReport> {
    let digest = instance.digest()?;
    if digest != schedule.instance_digest {
        return Err(Error::DigestMismatch {
            expected: schedule.instance_digest.clone(),
            found: digest,
        });
    }
    let set = instance.to_link_set()?;
    verify_body(&set, &schedule.schedule, tolerance)
}

/// Default tolerance, or zero in strict mode.
pub fn sinr_tolerance(strict: bool, tolerance: Option<f64>) -> f64 {
    if strict {
        0.0
    } else {
        tolerance.unwrap_or(DEFAULT_SINR_TOLERANCE)
    }
}
