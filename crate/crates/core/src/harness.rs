//! Algorithm dispatch and the seeded ratio harness.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::constants::{derive_constants, RmaxChoice};
use crate::error::{Error, Result};
use crate::generate::{generate_with_rng, GeneratorKind, ParamSpec};
use crate::ilp::{schedule_cutting_plane, CuttingPlaneOptions};
use crate::io::ScheduleBody;
use crate::oblivious::{length_bounds, schedule_fractional, schedule_partition};
use crate::oracles::{bruteforce_optimum, fractional_optimum, BRUTEFORCE_CAP, FRACTIONAL_CAP};
use crate::phys::{LinkSet, PowerMode};
use crate::uniform::{group_bound, schedule_greedy_iterative, schedule_grouped};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    LinearPartition,
    FractionalPartition,
    UniformGrouped,
    UniformGreedy,
    IlpCover,
    Bruteforce,
    FractionalLp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::LinearPartition,
        Algorithm::FractionalPartition,
        Algorithm::UniformGrouped,
        Algorithm::UniformGreedy,
        Algorithm::IlpCover,
        Algorithm::Bruteforce,
        Algorithm::FractionalLp,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::LinearPartition => "linear-partition",
            Algorithm::FractionalPartition => "fractional-partition",
            Algorithm::UniformGrouped => "uniform-grouped",
            Algorithm::UniformGreedy => "uniform-greedy",
            Algorithm::IlpCover => "ilp-cover",
            Algorithm::Bruteforce => "bruteforce",
            Algorithm::FractionalLp => "fractional-lp",
        }
    }

    /// Power mode the algorithm is defined for; `None` when any mode works.
    pub fn required_mode(&self) -> Option<PowerMode> {
        match self {
            Algorithm::LinearPartition | Algorithm::FractionalPartition => {
                Some(PowerMode::Oblivious)
            }
            Algorithm::UniformGrouped | Algorithm::UniformGreedy => Some(PowerMode::Uniform),
            Algorithm::IlpCover => Some(PowerMode::Arbitrary),
            Algorithm::Bruteforce | Algorithm::FractionalLp => None,
        }
    }

    pub fn is_fractional(&self) -> bool {
        matches!(
            self,
            Algorithm::FractionalPartition | Algorithm::FractionalLp
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub slot_cap: Option<usize>,
    pub node_budget: Option<usize>,
}

/// A schedule plus algorithm-specific facts worth recording.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub body: ScheduleBody,
    pub details: BTreeMap<String, serde_json::Value>,
}

/// Runs one algorithm. Every scheduler checks its own slots; the result is
/// checked again when it is written to a schedule file.
pub fn run_algorithm(set: &LinkSet, algo: Algorithm, opts: &RunOptions) -> Result<RunOutput> {
    if let Some(mode) = algo.required_mode() {
        set.require_mode(mode)?;
    }
    let mut details = BTreeMap::new();
    let body = match algo {
        Algorithm::LinearPartition => schedule_partition(set)?.into(),
        Algorithm::FractionalPartition => schedule_fractional(set)?.into(),
        Algorithm::UniformGrouped => {
            details.insert("groupBound".into(), json!(group_bound(set)?));
            schedule_grouped(set)?.into()
        }
        Algorithm::UniformGreedy => schedule_greedy_iterative(set)?.into(),
        Algorithm::IlpCover => {
            let mut o = CuttingPlaneOptions {
                slot_cap: opts.slot_cap,
                ..CuttingPlaneOptions::default()
            };
            if let Some(b) = opts.node_budget {
                o.node_budget = b;
            }
            let out = schedule_cutting_plane(set, &o)?;
            details.insert("lpLowerBound".into(), json!(out.lp_lower_bound));
            details.insert("provenOptimal".into(), json!(out.proven_optimal));
            details.insert("cuts".into(), json!(out.cuts.len()));
            details.insert("nodes".into(), json!(out.nodes));
            details.insert("nodeBudget".into(), json!(o.node_budget));
            if let Some(cap) = o.slot_cap {
                details.insert("slotCap".into(), json!(cap));
            }
            out.schedule.into()
        }
        Algorithm::Bruteforce => bruteforce_optimum(set)?.into(),
        Algorithm::FractionalLp => fractional_optimum(set)?.into(),
    };
    Ok(RunOutput { body, details })
}

/// Instance source for the harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    #[serde(default)]
    pub spec: ParamSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRow {
    pub trial: usize,
    pub n: usize,
    pub length: Option<f64>,
    /// Oracle optimum (integral or fractional, matching the algorithm).
    pub optimum: Option<f64>,
    pub ratio: Option<f64>,
    /// The guaranteed ratio where one applies.
    pub bound: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HarnessSummary {
    pub trials: usize,
    pub completed: usize,
    pub failed: usize,
    pub max_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub algorithm: Algorithm,
    pub rows: Vec<TrialRow>,
    pub summary: HarnessSummary,
}

/// Guaranteed ratio of the algorithm on this instance, if the theory gives one.
fn ratio_bound(set: &LinkSet, algo: Algorithm) -> Result<Option<f64>> {
    Ok(match algo {
        Algorithm::LinearPartition | Algorithm::FractionalPartition if !set.is_empty() => {
            length_bounds(set, algo.is_fractional())?.ratio()
        }
        Algorithm::UniformGrouped => Some(group_bound(set)? as f64),
        _ => None,
    })
}

fn oracle_length(set: &LinkSet, fractional: bool) -> Result<f64> {
    if fractional {
        if set.len() > FRACTIONAL_CAP {
            return Err(Error::OracleCap(format!(
                "n = {} exceeds {FRACTIONAL_CAP}",
                set.len()
            )));
        }
        Ok(fractional_optimum(set)?.length())
    } else {
        if set.len() > BRUTEFORCE_CAP {
            return Err(Error::OracleCap(format!(
                "n = {} exceeds {BRUTEFORCE_CAP}",
                set.len()
            )));
        }
        Ok(bruteforce_optimum(set)?.len() as f64)
    }
}

fn run_trial(gen: &GeneratorSpec, algo: Algorithm, seed: u64, trial: usize) -> TrialRow {
    let mut row = TrialRow {
        trial,
        n: gen.n,
        length: None,
        optimum: None,
        ratio: None,
        bound: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let set = generate_with_rng(gen.kind, gen.n, &mut rng, &gen.spec, seed)?.to_link_set()?;
        let out = run_algorithm(&set, algo, &RunOptions::default())?;
        let length = out.body.length();
        row.length = Some(length);
        row.bound = ratio_bound(&set, algo)?;
        let optimum = oracle_length(&set, algo.is_fractional())?;
        row.optimum = Some(optimum);
        if optimum > 0.0 {
            row.ratio = Some(length / optimum);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
    }
    row
}

/// Runs `trials` seeded trials in parallel; row order is the trial index.
/// Trial `t` draws its instance from stream `t` of the ChaCha generator
/// seeded with `seed`.
pub fn ratio_harness(
    gen: &GeneratorSpec,
    algo: Algorithm,
    trials: usize,
    seed: u64,
) -> HarnessReport {
    let rows: Vec<TrialRow> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(gen, algo, seed, t))
        .collect();
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let summary = HarnessSummary {
        trials,
        completed: rows.iter().filter(|r| r.error.is_none()).count(),
        failed: rows.iter().filter(|r| r.error.is_some()).count(),
        max_ratio: ratios.iter().copied().reduce(f64::max),
        mean_ratio: if ratios.is_empty() {
            None
        } else {
            Some(ratios.iter().sum::<f64>() / ratios.len() as f64)
        },
        bound_violations: rows
            .iter()
            .filter(|r| matches!((r.ratio, r.bound), (Some(x), Some(b)) if x > b + 1e-9))
            .count(),
    };
    HarnessReport {
        algorithm: algo,
        rows,
        summary,
    }
}

/// One block of a bench configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchRun {
    pub generator: GeneratorSpec,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub runs: Vec<BenchRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BenchEntry {
    pub run: usize,
    pub generator: GeneratorSpec,
    pub report: HarnessReport,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub entries: Vec<BenchEntry>,
}

pub fn bench(config: &BenchConfig) -> BenchReport {
    let mut entries = Vec::new();
    for (run, r) in config.runs.iter().enumerate() {
        let seed = r.seed.unwrap_or(config.seed);
        for &algo in &r.algorithms {
            entries.push(BenchEntry {
                run,
                generator: r.generator.clone(),
                report: ratio_harness(&r.generator, algo, r.trials, seed),
            });
        }
    }
    BenchReport { entries }
}

impl BenchReport {
    /// One CSV line per trial.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out =
            String::from("run,generator,algorithm,trial,n,length,optimum,ratio,bound,error\n");
        for e in &self.entries {
            for r in &e.report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    e.run,
                    e.generator.kind.as_str(),
                    e.report.algorithm,
                    r.trial,
                    r.n,
                    opt(r.length),
                    opt(r.optimum),
                    opt(r.ratio),
                    opt(r.bound),
                    r.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
                ));
            }
        }
        out
    }
}

/// `(K+1)^2 * omega` for an oblivious instance, or `None` without noise.
pub fn partition_ratio_bound(set: &LinkSet) -> Result<Option<f64>> {
    let c = derive_constants(set, RmaxChoice::LongestLink)?;
    let side = c.cap_k as f64 + 1.0;
    Ok(c.omega.value().map(|w| side * side * w as f64))
}
