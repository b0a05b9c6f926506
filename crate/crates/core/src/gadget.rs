//! Reduction gadgets from Partition: `n` integer links whose senders sit at
//! radius `(P / (a i_j))^(1/kappa)` around the origin, plus two links whose
//! receivers share the origin and which therefore never share a slot.
//!
//! The receiver at the origin hears exactly `a * i_j` from integer sender `j`
//! and signal `c` from its own sender, so its SINR in a slot is at least
//! `sigma` iff the integers scheduled with it sum to at most `N/2`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::oracles::{bruteforce_optimum, partition_decide, PartitionWitness, BRUTEFORCE_CAP};
use crate::phys::{Link, LinkSet, PhysParams, PowerMode, DEFAULT_SINR_TOLERANCE};
use crate::schedule::Schedule;

/// Largest Partition input `reduction_equivalence` accepts.
pub const REDUCTION_CAP: usize = BRUTEFORCE_CAP - 2;

const MAX_HALVINGS: u32 = 200;

/// Construction data of a gadget; serialized as the instance provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetConfig {
    pub integers: Vec<u64>,
    pub big_n: u64,
    /// `a = (c / sigma) / (N / 2)`
    pub a: f64,
    /// Receiver offset of the integer links and sender offset of the two
    /// origin links.
    pub b: f64,
    /// Minimum gap between senders that `b` was derived from.
    pub f: f64,
}

#[derive(Debug, Clone)]
pub struct Gadget {
    pub set: LinkSet,
    pub config: GadgetConfig,
}

impl Gadget {
    /// Number of integer links; the origin links have ids `n` and `n + 1`.
    pub fn n(&self) -> usize {
        self.config.integers.len()
    }

    /// The two-slot schedule induced by a Partition witness.
    pub fn witness_schedule(&self, w: &PartitionWitness) -> Schedule {
        let n = self.n();
        let mut first = w.first.clone();
        first.push(n);
        let mut second = w.second.clone();
        second.push(n + 1);
        Schedule::new(vec![first, second])
    }
}

fn check_params(params: &PhysParams) -> Result<()> {
    params.validate()?;
    if params.eta != 1.0 || params.xi != 0.0 {
        return Err(Error::InvalidParams(format!(
            "gadgets need eta = 1 and xi = 0 (got eta {}, xi {})",
            params.eta, params.xi
        )));
    }
    if !(params.sigma > 1.0) {
        return Err(Error::InvalidParams(format!(
            "gadgets need sigma > 1 so the origin links conflict (got {})",
            params.sigma
        )));
    }
    Ok(())
}

fn check_integers(integers: &[u64]) -> Result<()> {
    if integers.is_empty() || integers.contains(&0) {
        return Err(Error::Domain(
            "gadgets need a nonempty list of positive integers".into(),
        ));
    }
    Ok(())
}

pub fn gadget_a(integers: &[u64], params: &PhysParams) -> f64 {
    let big_n: u64 = integers.iter().sum();
    (params.c / params.sigma) / (big_n as f64 / 2.0)
}

/// Integer-link sender positions. Repeated integers share a radius; the
/// `k`-th copy is rotated by `2 pi k / m` about the origin, `m` being the
/// largest multiplicity, so that no two senders coincide.
fn sender_positions(integers: &[u64], params: &PhysParams, a: f64) -> Vec<(Point, Point)> {
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in integers {
        *counts.entry(v).or_default() += 1;
    }
    let m = counts.values().copied().max().unwrap_or(1) as f64;
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    integers
        .iter()
        .map(|&v| {
            let k = seen.entry(v).or_default();
            let theta = 2.0 * PI * *k as f64 / m;
            *k += 1;
            let radius = (params.pmax / (a * v as f64)).powf(1.0 / params.kappa);
            let dir = if theta == 0.0 {
                (1.0, 0.0)
            } else {
                (theta.cos(), theta.sin())
            };
            (
                Point::new(radius * dir.0, radius * dir.1),
                Point::new(dir.0, dir.1),
            )
        })
        .collect()
}

/// `f = (P/a)^(1/k) * ((i_max - 1)^(-1/k) - i_max^(-1/k))`, capped by the
/// smallest actual distance between integer senders and by the smallest
/// sender radius. With `i_max = 1` only the caps apply.
pub fn sender_gap(integers: &[u64], params: &PhysParams) -> Result<f64> {
    check_integers(integers)?;
    let a = gadget_a(integers, params);
    let k = params.kappa;
    let imax = *integers.iter().max().unwrap() as f64;
    let mut f = if imax > 1.0 {
        (params.pmax / a).powf(1.0 / k) * ((imax - 1.0).powf(-1.0 / k) - imax.powf(-1.0 / k))
    } else {
        f64::INFINITY
    };
    let pos = sender_positions(integers, params, a);
    for (p, (s, _)) in pos.iter().enumerate() {
        f = f.min(s.dist(&Point::new(0.0, 0.0)));
        for (t, _) in &pos[p + 1..] {
            f = f.min(s.dist(t));
        }
    }
    Ok(f)
}

/// Gadget with offset `b`; the config records `f` for reference.
pub fn build_gadget(integers: &[u64], params: &PhysParams, b: f64) -> Result<Gadget> {
    check_params(params)?;
    check_integers(integers)?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!(
            "gadget offset b must be positive, got {b}"
        )));
    }
    let a = gadget_a(integers, params);
    let f = sender_gap(integers, params)?;
    let mut links: Vec<Link> = sender_positions(integers, params, a)
        .into_iter()
        .enumerate()
        .map(|(id, (s, dir))| {
            Link::new(id, s, Point::new(s.x + b * dir.x, s.y + b * dir.y)).with_power(params.pmax)
        })
        .collect();
    let n = links.len();
    let origin_power = params.c * b.powf(params.kappa);
    links.push(Link::new(n, (0.0, b), (0.0, 0.0)).with_power(origin_power));
    links.push(Link::new(n + 1, (0.0, -b), (0.0, 0.0)).with_power(origin_power));
    let set = LinkSet::new(*params, PowerMode::Arbitrary, links)?;
    Ok(Gadget {
        set,
        config: GadgetConfig {
            integers: integers.to_vec(),
            big_n: integers.iter().sum(),
            a,
            b,
            f,
        },
    })
}

fn holds_against(set: &LinkSet, n: usize, origin_link: usize) -> Result<bool> {
    let sigma = set.params().sigma;
    for i in 0..n {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).chain([origin_link]).collect();
        if set.sinr(i, &others)? < sigma - DEFAULT_SINR_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every integer link meets `sigma` while all other integer links and the
/// first origin link transmit. Only the integer link's own SINR is checked:
/// the origin link itself fails whenever the integers sum above `N/2`.
pub fn validate_gadget(g: &Gadget) -> Result<bool> {
    holds_against(&g.set, g.n(), g.n())
}

/// The same check against the second origin link.
pub fn validate_gadget_mirror(g: &Gadget) -> Result<bool> {
    holds_against(&g.set, g.n(), g.n() + 1)
}

/// Gadget with `b = f/4`, halved until both validations pass and the origin
/// links' power `c b^kappa` is within `pmax`.
pub fn choose_gadget(integers: &[u64], params: &PhysParams) -> Result<Gadget> {
    check_params(params)?;
    let mut b = sender_gap(integers, params)? / 4.0;
    for _ in 0..MAX_HALVINGS {
        if params.c * b.powf(params.kappa) <= params.pmax {
            let g = build_gadget(integers, params, b)?;
            if validate_gadget(&g)? && validate_gadget_mirror(&g)? {
                return Ok(g);
            }
        }
        b /= 2.0;
    }
    Err(Error::Verification(format!(
        "no valid gadget offset found for {integers:?}"
    )))
}

/// Partition has a solution iff the gadget has a two-slot schedule.
///
/// When a witness exists, its two-slot schedule is also checked directly.
pub fn reduction_equivalence(integers: &[u64], params: &PhysParams) -> Result<bool> {
    if integers.len() > REDUCTION_CAP {
        return Err(Error::OracleCap(format!(
            "reduction check handles at most {REDUCTION_CAP} integers, got {}",
            integers.len()
        )));
    }
    let g = choose_gadget(integers, params)?;
    let witness = partition_decide(integers)?;
    let optimum = bruteforce_optimum(&g.set)?;
    let two_slots = optimum.len() == 2;
    if let Some(w) = &witness {
        let s = g.witness_schedule(w);
        if s.validate(&g.set, DEFAULT_SINR_TOLERANCE).is_err() {
            return Ok(false);
        }
    }
    Ok(witness.is_some() == two_slots)
}
