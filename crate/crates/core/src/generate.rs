//! Seeded instance generators.
//!
//! Every generator is a pure function of `(kind, n, seed, spec)`. Links that
//! are not admissible under the requested power mode are redrawn; so are
//! whole instances that break the length-ratio condition behind the
//! per-cell lower bound. At most [`MAX_RETRIES`] redraws are spent in total.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::choose_gadget;
use crate::geometry::Point;
use crate::io::{InstanceFile, Provenance};
use crate::phys::{Link, LinkSet, PhysParams, PowerMode};

pub const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    UniformRandom,
    Clustered,
    Line,
    Gadget,
}

impl GeneratorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GeneratorKind::UniformRandom => "uniform-random",
            GeneratorKind::Clustered => "clustered",
            GeneratorKind::Line => "line",
            GeneratorKind::Gadget => "gadget",
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" => Ok(GeneratorKind::UniformRandom),
            "clustered" => Ok(GeneratorKind::Clustered),
            "line" => Ok(GeneratorKind::Line),
            "gadget" => Ok(GeneratorKind::Gadget),
            other => Err(Error::InvalidParams(format!(
                "unknown generator kind {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DemandSpec {
    Unit,
    Uniform { lo: f64, hi: f64 },
}

/// Everything a generator needs besides kind, size and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ParamSpec {
    pub params: PhysParams,
    pub mode: PowerMode,
    pub min_length: f64,
    pub max_length: f64,
    /// Side of the square holding the senders, `4 * max_length * sqrt(n)`
    /// when absent; the line kind spans `region * sqrt(n)`.
    pub region: Option<f64>,
    pub clusters: usize,
    pub cluster_radius: f64,
    pub demand: DemandSpec,
    /// Arbitrary-power links draw their power from `[lo, hi] * pmax`.
    pub power_range: (f64, f64),
    /// Partition input for the gadget kind; drawn from `1..=max_integer` when empty.
    pub integers: Vec<u64>,
    pub max_integer: u64,
}

impl Default for ParamSpec {
    fn default() -> Self {
        Self {
            params: PhysParams {
                kappa: 3.0,
                eta: 1.0,
                sigma: 1.5,
                xi: 0.01,
                c: 1.0,
                beta: 3.0,
                pmax: 1e4,
            },
            mode: PowerMode::Oblivious,
            min_length: 0.5,
            max_length: 2.0,
            region: None,
            clusters: 3,
            cluster_radius: 3.0,
            demand: DemandSpec::Unit,
            power_range: (0.1, 1.0),
            integers: Vec::new(),
            max_integer: 6,
        }
    }
}

impl ParamSpec {
    /// Noise-free parameters suitable for gadgets.
    pub fn gadget_default() -> Self {
        Self {
            params: PhysParams {
                kappa: 3.0,
                eta: 1.0,
                sigma: 2.0,
                xi: 0.0,
                c: 1.0,
                beta: 3.0,
                pmax: 1.0,
            },
            mode: PowerMode::Arbitrary,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.min_length > 0.0
            && self.min_length <= self.max_length
            && self.max_length.is_finite())
        {
            return Err(Error::InvalidParams(format!(
                "link lengths need 0 < min <= max (got {} and {})",
                self.min_length, self.max_length
            )));
        }
        if let Some(r) = self.region {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "region must be positive, got {r}"
                )));
            }
        }
        if let DemandSpec::Uniform { lo, hi } = self.demand {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "demand range [{lo}, {hi}] is invalid"
                )));
            }
        }
        let (lo, hi) = self.power_range;
        if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "power range [{lo}, {hi}] must lie in (0, 1]"
            )));
        }
        if self.clusters == 0 || !(self.cluster_radius > 0.0) {
            return Err(Error::InvalidParams(
                "clusters need a positive count and radius".into(),
            ));
        }
        if self.max_integer == 0 {
            return Err(Error::InvalidParams("max_integer must be positive".into()));
        }
        Ok(())
    }

    fn region_for(&self, n: usize) -> f64 {
        self.region
            .unwrap_or_else(|| 4.0 * self.max_length * (n.max(1) as f64).sqrt())
    }
}

pub fn generate(
    kind: GeneratorKind,
    n: usize,
    seed: u64,
    spec: &ParamSpec,
) -> Result<InstanceFile> {
    generate_with_rng(kind, n, &mut ChaCha8Rng::seed_from_u64(seed), spec, seed)
}

/// Like [`generate`] with a caller-provided stream; `seed` is only recorded.
pub fn generate_with_rng(
    kind: GeneratorKind,
    n: usize,
    rng: &mut ChaCha8Rng,
    spec: &ParamSpec,
    seed: u64,
) -> Result<InstanceFile> {
    spec.check()?;
    if kind == GeneratorKind::Gadget {
        let integers = if spec.integers.is_empty() {
            if n == 0 {
                return Err(Error::InvalidParams(
                    "a gadget needs at least one integer".into(),
                ));
            }
            (0..n)
                .map(|_| rng.gen_range(1..=spec.max_integer))
                .collect()
        } else {
            spec.integers.clone()
        };
        let g = choose_gadget(&integers, &spec.params)?;
        return Ok(InstanceFile::from_link_set(
            &g.set,
            Some(Provenance::Gadget(g.config)),
        ));
    }

    let provenance = Some(Provenance::Generated {
        generator: kind.as_str().to_string(),
        n,
        seed,
    });
    let mut region = spec.region_for(n);
    if kind == GeneratorKind::Line {
        // a segment of region * sqrt(n) keeps the mean spacing of the square
        region *= (n.max(1) as f64).sqrt();
    }
    let centers: Vec<Point> = (0..spec.clusters)
        .map(|_| Point::new(rng.gen_range(0.0..region), rng.gen_range(0.0..region)))
        .collect();
    let min_gap = min_node_gap(spec);
    let mut retries = 0usize;
    loop {
        let mut links = Vec::with_capacity(n);
        while links.len() < n {
            let id = links.len();
            let link = draw_link(kind, id, rng, spec, region, &centers);
            if admissible(&link, spec) && separated(&link, &links, min_gap) {
                links.push(link);
                continue;
            }
            retries += 1;
            if retries > MAX_RETRIES {
                return Err(exhausted());
            }
        }
        let set = LinkSet::new(spec.params, spec.mode, links)?;
        if lower_bound_condition(&set) {
            return Ok(InstanceFile::from_link_set(&set, provenance));
        }
        retries += 1;
        if retries > MAX_RETRIES {
            return Err(exhausted());
        }
    }
}

fn exhausted() -> Error {
    Error::InvalidParams(format!(
        "no admissible instance after {MAX_RETRIES} redraws; the parameters are likely unsatisfiable"
    ))
}

fn draw_link(
    kind: GeneratorKind,
    id: usize,
    rng: &mut ChaCha8Rng,
    spec: &ParamSpec,
    region: f64,
    centers: &[Point],
) -> Link {
    let len = if spec.min_length == spec.max_length {
        spec.min_length
    } else {
        rng.gen_range(spec.min_length..spec.max_length)
    };
    let (sender, dir) = match kind {
        GeneratorKind::Line => {
            let x = rng.gen_range(0.0..region);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (Point::new(x, 0.0), (sign, 0.0))
        }
        GeneratorKind::Clustered => {
            let c = centers[rng.gen_range(0..centers.len())];
            let r = spec.cluster_radius * rng.gen::<f64>().sqrt();
            let phi = rng.gen_range(0.0..2.0 * PI);
            let theta = rng.gen_range(0.0..2.0 * PI);
            (
                Point::new(c.x + r * phi.cos(), c.y + r * phi.sin()),
                (theta.cos(), theta.sin()),
            )
        }
        _ => {
            let theta = rng.gen_range(0.0..2.0 * PI);
            (
                Point::new(rng.gen_range(0.0..region), rng.gen_range(0.0..region)),
                (theta.cos(), theta.sin()),
            )
        }
    };
    let receiver = Point::new(sender.x + len * dir.0, sender.y + len * dir.1);
    let mut link = Link::new(id, sender, receiver);
    link.demand = match spec.demand {
        DemandSpec::Unit => 1.0,
        DemandSpec::Uniform { lo, hi } if lo == hi => lo,
        DemandSpec::Uniform { lo, hi } => rng.gen_range(lo..hi),
    };
    if spec.mode == PowerMode::Arbitrary {
        let (lo, hi) = spec.power_range;
        let frac = if lo == hi { lo } else { rng.gen_range(lo..hi) };
        link.power = Some(frac * spec.params.pmax);
    }
    link
}

/// Mode admission plus a strictly positive solo SINR margin.
fn admissible(link: &Link, spec: &ParamSpec) -> bool {
    let mut probe = link.clone();
    probe.id = 0;
    let Ok(set) = LinkSet::new(spec.params, spec.mode, vec![probe]) else {
        return false;
    };
    let p = &spec.params;
    p.xi == 0.0 || set.signal(0).map(|s| s / p.xi > p.sigma).unwrap_or(false)
}

/// Smallest node distance that keeps [`lower_bound_condition`] true for any
/// link lengths up to `max_length`; a tiny positive gap without noise.
fn min_node_gap(spec: &ParamSpec) -> f64 {
    let p = &spec.params;
    let tiny = 1e-9 * spec.max_length;
    if p.xi == 0.0 {
        return tiny;
    }
    let gap = spec.max_length / (p.pmax / (p.sigma * p.xi)).powf(1.0 / p.kappa);
    (gap * (1.0 + 1e-9)).max(tiny)
}

/// The new link's nodes keep at least `gap` from every existing node.
fn separated(link: &Link, links: &[Link], gap: f64) -> bool {
    links.iter().all(|l| {
        [l.sender, l.receiver]
            .iter()
            .all(|p| p.dist(&link.sender) > gap && p.dist(&link.receiver) > gap)
    })
}

/// `(R / r)^kappa < P / (sigma xi)`, with `R` the longest link and `r` the
/// closest node pair. The per-cell bound `omega` is derived under this
/// relation; instances without noise are unconstrained.
pub fn lower_bound_condition(set: &LinkSet) -> bool {
    let p = set.params();
    if p.xi == 0.0 || set.is_empty() {
        return true;
    }
    let ratio = set.max_link_length() / set.min_node_distance();
    ratio.powf(p.kappa) < p.pmax / (p.sigma * p.xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        let spec = ParamSpec::default();
        let f = generate(GeneratorKind::UniformRandom, 0, 1, &spec).unwrap();
        assert!(f.links.is_empty());
        for kind in [
            GeneratorKind::UniformRandom,
            GeneratorKind::Clustered,
            GeneratorKind::Line,
        ] {
            let a = generate(kind, 12, 99, &spec)
                .unwrap()
                .to_canonical_string()
                .unwrap();
            let b = generate(kind, 12, 99, &spec)
                .unwrap()
                .to_canonical_string()
                .unwrap();
            let c = generate(kind, 12, 100, &spec)
                .unwrap()
                .to_canonical_string()
                .unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn generated_instances_are_admissible() {
        for mode in [
            PowerMode::Oblivious,
            PowerMode::Uniform,
            PowerMode::Arbitrary,
        ] {
            let spec = ParamSpec {
                mode,
                demand: DemandSpec::Uniform { lo: 0.1, hi: 3.0 },
                ..ParamSpec::default()
            };
            for seed in 0..5 {
                let f = generate(GeneratorKind::Clustered, 15, seed, &spec).unwrap();
                let set = f.to_link_set().unwrap();
                assert_eq!(set.len(), 15);
                assert!(lower_bound_condition(&set));
                assert!(set.links().iter().all(|l| (0.1..=3.0).contains(&l.demand)));
            }
        }
        let f = generate(GeneratorKind::Line, 6, 3, &ParamSpec::default()).unwrap();
        assert!(f.links.iter().all(|l| l.sy == 0.0 && l.ry == 0.0));
    }

    #[test]
    fn gadget_kind() {
        let spec = ParamSpec {
            integers: vec![3, 1, 1, 2, 2, 1],
            ..ParamSpec::gadget_default()
        };
        let f = generate(GeneratorKind::Gadget, 6, 0, &spec).unwrap();
        assert_eq!(f.links.len(), 8);
        match &f.provenance {
            Some(Provenance::Gadget(cfg)) => {
                assert_eq!(cfg.integers, vec![3, 1, 1, 2, 2, 1]);
                assert!(cfg.b > 0.0 && cfg.b < cfg.f);
            }
            other => panic!("unexpected provenance {other:?}"),
        }
        // gadgets need a noise-free model
        let bad = ParamSpec {
            integers: vec![1, 1],
            ..ParamSpec::default()
        };
        assert!(generate(GeneratorKind::Gadget, 2, 0, &bad).is_err());
    }

    #[test]
    fn unsatisfiable_spec_is_an_error() {
        // oblivious links longer than (P/c)^(1/beta) can never be admitted
        let spec = ParamSpec {
            min_length: 50.0,
            max_length: 60.0,
            ..ParamSpec::default()
        };
        assert!(matches!(
            generate(GeneratorKind::UniformRandom, 3, 0, &spec),
            Err(Error::InvalidParams(_))
        ));
        assert!("triangle".parse::<GeneratorKind>().is_err());
        assert_eq!(
            "line".parse::<GeneratorKind>().unwrap(),
            GeneratorKind::Line
        );
    }
}
