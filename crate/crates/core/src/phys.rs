//! Physical interference model: parameters, links, path loss and SINR.
//!
//! [`LinkSet::check_independent`] is the ground truth for every scheduler in
//! the crate. All of them emit slots only after this checker accepts them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Absolute slack applied to `sinr >= sigma` comparisons by default.
pub const DEFAULT_SINR_TOLERANCE: f64 = 1e-9;

/// Constants of the physical model.
///
/// `kappa` is the path-loss exponent, `eta` the reference loss factor,
/// `sigma` the SINR threshold, `xi` the noise power, `c` and `beta` the
/// oblivious power law `c * len^beta`, and `pmax` the power ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    pub kappa: f64,
    pub eta: f64,
    pub sigma: f64,
    pub xi: f64,
    pub c: f64,
    pub beta: f64,
    pub pmax: f64,
}

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.kappa, self.eta, self.sigma, self.xi, self.c, self.beta, self.pmax,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.kappa <= 2.0 {
            return Err(Error::InvalidParams(format!(
                "kappa must exceed 2, got {}",
                self.kappa
            )));
        }
        if !(self.beta > 0.0 && self.beta <= self.kappa) {
            return Err(Error::InvalidParams(format!(
                "beta must lie in (0, kappa], got {}",
                self.beta
            )));
        }
        if self.sigma <= 0.0 || self.eta <= 0.0 {
            return Err(Error::InvalidParams(
                "sigma and eta must be positive".into(),
            ));
        }
        if self.xi < 0.0 {
            return Err(Error::InvalidParams("noise xi must be nonnegative".into()));
        }
        if self.c <= 0.0 || self.pmax <= 0.0 {
            return Err(Error::InvalidParams("c and pmax must be positive".into()));
        }
        Ok(())
    }

    /// Longest link the oblivious power law can drive: `(P/c)^(1/beta)`.
    pub fn oblivious_range_cap(&self) -> f64 {
        (self.pmax / self.c).powf(1.0 / self.beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMode {
    Oblivious,
    Uniform,
    Arbitrary,
}

impl PowerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PowerMode::Oblivious => "oblivious",
            PowerMode::Uniform => "uniform",
            PowerMode::Arbitrary => "arbitrary",
        }
    }
}

impl std::str::FromStr for PowerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oblivious" | "linear" => Ok(PowerMode::Oblivious),
            "uniform" => Ok(PowerMode::Uniform),
            "arbitrary" => Ok(PowerMode::Arbitrary),
            other => Err(Error::InvalidParams(format!(
                "unknown power mode {other:?}"
            ))),
        }
    }
}

/// A directed sender -> receiver link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: usize,
    pub sender: Point,
    pub receiver: Point,
    pub demand: f64,
    pub power: Option<f64>,
}

impl Link {
    /// Unit-demand link without an explicit power.
    pub fn new(id: usize, sender: impl Into<Point>, receiver: impl Into<Point>) -> Self {
        Self {
            id,
            sender: sender.into(),
            receiver: receiver.into(),
            demand: 1.0,
            power: None,
        }
    }

    pub fn with_demand(mut self, demand: f64) -> Self {
        self.demand = demand;
        self
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.power = Some(power);
        self
    }

    pub fn length(&self) -> f64 {
        self.sender.dist(&self.receiver)
    }
}

/// Path loss `eta * dist^-kappa`.
pub fn path_loss(dist: f64, params: &PhysParams) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::Domain(format!(
            "path loss needs a positive distance, got {dist}"
        )));
    }
    Ok(params.eta * dist.powf(-params.kappa))
}

/// SINR of one link together with whether some concurrent sender sits on its
/// receiver (infinite interference, reported as value 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrReading {
    pub value: f64,
    pub colocated_interferer: bool,
}

/// A validated instance: parameters, power mode and links with ids `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSet {
    params: PhysParams,
    mode: PowerMode,
    links: Vec<Link>,
}

impl LinkSet {
    pub fn new(params: PhysParams, mode: PowerMode, links: Vec<Link>) -> Result<Self> {
        params.validate()?;
        for (pos, link) in links.iter().enumerate() {
            if link.id != pos {
                return Err(Error::InvalidInstance(format!(
                    "link ids must be contiguous from 0; position {pos} holds id {}",
                    link.id
                )));
            }
            check_link(link, &params, mode)?;
        }
        Ok(Self {
            params,
            mode,
            links,
        })
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn mode(&self) -> PowerMode {
        self.mode
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn link(&self, id: usize) -> Result<&Link> {
        self.links.get(id).ok_or(Error::UnknownLink(id))
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.links.len()
    }

    /// Same links and mode with replaced demands.
    pub fn with_demands(&self, demands: &[f64]) -> Result<Self> {
        if demands.len() != self.links.len() {
            return Err(Error::InvalidInstance(
                "demand vector length mismatch".into(),
            ));
        }
        let links = self
            .links
            .iter()
            .zip(demands)
            .map(|(l, &d)| l.clone().with_demand(d))
            .collect();
        Self::new(self.params, self.mode, links)
    }

    pub fn require_mode(&self, expected: PowerMode) -> Result<()> {
        if self.mode != expected {
            return Err(Error::ModeMismatch {
                expected: expected.as_str(),
                found: self.mode.as_str(),
            });
        }
        Ok(())
    }

    pub fn tx_power(&self, id: usize) -> Result<f64> {
        tx_power(self.link(id)?, self)
    }

    /// Wanted signal strength at the link's own receiver.
    pub fn signal(&self, id: usize) -> Result<f64> {
        let link = self.link(id)?;
        Ok(tx_power(link, self)? * path_loss(link.length(), &self.params)?)
    }

    /// Power received at the receiver of `at` from the sender of `from`.
    /// Infinite when that sender sits exactly on the receiver.
    pub fn received(&self, from: usize, at: usize) -> Result<f64> {
        let d = self.link(from)?.sender.dist(&self.link(at)?.receiver);
        if d == 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.tx_power(from)? * path_loss(d, &self.params)?)
    }

    pub fn sinr(&self, id: usize, concurrent: &[usize]) -> Result<f64> {
        Ok(self.sinr_reading(id, concurrent)?.value)
    }

    pub fn sinr_reading(&self, id: usize, concurrent: &[usize]) -> Result<SinrReading> {
        if concurrent.contains(&id) {
            return Err(Error::Domain(format!(
                "link {id} listed among its own interferers"
            )));
        }
        let signal = self.signal(id)?;
        let mut interference = 0.0;
        for &j in concurrent {
            interference += self.received(j, id)?;
        }
        Ok(sinr_from_parts(signal, self.params.xi, interference))
    }

    pub fn check_independent(&self, ids: &[usize]) -> Result<bool> {
        self.check_independent_with(ids, DEFAULT_SINR_TOLERANCE)
    }

    /// `sinr >= sigma - tolerance` for every member; tolerance 0 is strict mode.
    pub fn check_independent_with(&self, ids: &[usize], tolerance: f64) -> Result<bool> {
        let ids = canonical_ids(self, ids)?;
        let threshold = self.params.sigma - tolerance;
        for (pos, &id) in ids.iter().enumerate() {
            let others: Vec<usize> = ids
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| j)
                .collect();
            if self.sinr(id, &others)? < threshold {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest `sinr - sigma` over the members, `None` for an empty set.
    pub fn min_margin(&self, ids: &[usize]) -> Result<Option<f64>> {
        let ids = canonical_ids(self, ids)?;
        let mut best: Option<f64> = None;
        for (pos, &id) in ids.iter().enumerate() {
            let others: Vec<usize> = ids
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &j)| j)
                .collect();
            let margin = self.sinr(id, &others)? - self.params.sigma;
            best = Some(best.map_or(margin, |b: f64| b.min(margin)));
        }
        Ok(best)
    }

    /// Precomputed signals and pairwise received powers for hot loops.
    pub fn gain_table(&self) -> Result<GainTable> {
        let n = self.len();
        let mut signal = Vec::with_capacity(n);
        let mut received = vec![0.0; n * n];
        for i in 0..n {
            signal.push(self.signal(i)?);
            for j in 0..n {
                if i != j {
                    received[j * n + i] = self.received(j, i)?;
                }
            }
        }
        Ok(GainTable {
            n,
            xi: self.params.xi,
            sigma: self.params.sigma,
            signal,
            received,
        })
    }

    /// Minimum distance between two distinct node positions (senders and
    /// receivers pooled). Infinite with fewer than two distinct positions.
    pub fn min_node_distance(&self) -> f64 {
        let mut nodes: Vec<Point> = Vec::with_capacity(2 * self.len());
        for l in &self.links {
            for p in [l.sender, l.receiver] {
                if !nodes.contains(&p) {
                    nodes.push(p);
                }
            }
        }
        let mut best = f64::INFINITY;
        for a in 0..nodes.len() {
            for b in a + 1..nodes.len() {
                best = best.min(nodes[a].dist(&nodes[b]));
            }
        }
        best
    }

    pub fn max_link_length(&self) -> f64 {
        self.links.iter().map(Link::length).fold(0.0, f64::max)
    }
}

/// Transmission power of `link` under the set's power mode.
pub fn tx_power(link: &Link, set: &LinkSet) -> Result<f64> {
    let p = &set.params;
    match set.mode {
        PowerMode::Oblivious => Ok(p.c * link.length().powf(p.beta)),
        PowerMode::Uniform => Ok(p.pmax),
        PowerMode::Arbitrary => link.power.ok_or_else(|| {
            Error::InvalidInstance(format!(
                "link {} has no power under arbitrary mode",
                link.id
            ))
        }),
    }
}

fn sinr_from_parts(signal: f64, xi: f64, interference: f64) -> SinrReading {
    if interference.is_infinite() {
        return SinrReading {
            value: 0.0,
            colocated_interferer: true,
        };
    }
    let denom = xi + interference;
    let value = if denom == 0.0 {
        f64::INFINITY
    } else {
        signal / denom
    };
    SinrReading {
        value,
        colocated_interferer: false,
    }
}

fn canonical_ids(set: &LinkSet, ids: &[usize]) -> Result<Vec<usize>> {
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if let Some(&last) = ids.last() {
        set.link(last)?;
    }
    Ok(ids)
}

fn check_link(link: &Link, params: &PhysParams, mode: PowerMode) -> Result<()> {
    let bad = |reason: String| Error::Inadmissible {
        id: link.id,
        reason,
    };
    if !link.sender.is_finite() || !link.receiver.is_finite() {
        return Err(bad("non-finite coordinates".into()));
    }
    if link.sender == link.receiver {
        return Err(bad("sender and receiver coincide".into()));
    }
    if !(link.demand >= 0.0) || !link.demand.is_finite() {
        return Err(bad(format!(
            "demand must be a finite value >= 0, got {}",
            link.demand
        )));
    }
    let len = link.length();
    match mode {
        PowerMode::Oblivious => {
            if len.powf(params.beta) > params.pmax / params.c {
                return Err(bad(format!(
                    "length {len} needs power above pmax (cap {})",
                    params.oblivious_range_cap()
                )));
            }
            if params.xi > 0.0 {
                let lhs = len.powf(params.kappa - params.beta);
                let rhs = params.c * params.eta / (params.sigma * params.xi);
                if !(lhs < rhs) {
                    return Err(bad(format!(
                        "len^(kappa-beta) = {lhs} must be strictly below c*eta/(sigma*xi) = {rhs}"
                    )));
                }
            }
        }
        PowerMode::Uniform => {}
        PowerMode::Arbitrary => match link.power {
            Some(p) if p > 0.0 && p <= params.pmax => {}
            Some(p) => return Err(bad(format!("power {p} outside (0, pmax]"))),
            None => return Err(bad("arbitrary mode requires a per-link power".into())),
        },
    }
    Ok(())
}

/// Dense signal/interference table. `received[j * n + i]` is the power the
/// receiver of `i` hears from the sender of `j`.
#[derive(Debug, Clone)]
pub struct GainTable {
    n: usize,
    xi: f64,
    sigma: f64,
    signal: Vec<f64>,
    received: Vec<f64>,
}

impl GainTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn signal(&self, i: usize) -> f64 {
        self.signal[i]
    }

    pub fn received(&self, from: usize, at: usize) -> f64 {
        self.received[from * self.n + at]
    }

    /// Same arithmetic and summation order as [`LinkSet::check_independent_with`].
    pub fn is_independent(&self, sorted_ids: &[usize], tolerance: f64) -> bool {
        let threshold = self.sigma - tolerance;
        sorted_ids.iter().all(|&i| {
            let mut interference = 0.0;
            for &j in sorted_ids {
                if j != i {
                    interference += self.received(j, i);
                }
            }
            sinr_from_parts(self.signal[i], self.xi, interference).value >= threshold
        })
    }

    /// Bitmask form of [`GainTable::is_independent`] for `n <= 64`.
    pub fn mask_is_independent(&self, mask: u64, tolerance: f64) -> bool {
        let ids: Vec<usize> = (0..self.n).filter(|&i| mask >> i & 1 == 1).collect();
        self.is_independent(&ids, tolerance)
    }
}
