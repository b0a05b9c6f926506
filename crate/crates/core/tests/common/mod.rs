#![allow(dead_code)]

use linksched::generate::{generate, DemandSpec, GeneratorKind, ParamSpec};
use linksched::{LinkSet, PowerMode};

pub const KINDS: [GeneratorKind; 3] = [
    GeneratorKind::UniformRandom,
    GeneratorKind::Clustered,
    GeneratorKind::Line,
];

pub fn spec(mode: PowerMode, kappa: f64, xi: f64, density: f64, demand: DemandSpec) -> ParamSpec {
    let mut spec = ParamSpec {
        mode,
        demand,
        ..ParamSpec::default()
    };
    spec.params.kappa = kappa;
    spec.params.beta = kappa;
    spec.params.xi = xi;
    spec.region = Some(density * spec.max_length);
    spec
}

/// A generated instance; `density` scales the square side by `max_length`.
pub fn instance(
    mode: PowerMode,
    kind: usize,
    n: usize,
    seed: u64,
    xi: f64,
    density: f64,
) -> LinkSet {
    let spec = spec(
        mode,
        3.0,
        xi,
        density * (n.max(1) as f64).sqrt(),
        DemandSpec::Unit,
    );
    generate(KINDS[kind % KINDS.len()], n, seed, &spec)
        .and_then(|f| f.to_link_set())
        .expect("generator settings are satisfiable")
}

pub fn weighted_instance(kind: usize, n: usize, seed: u64) -> LinkSet {
    let demand = DemandSpec::Uniform { lo: 0.1, hi: 3.0 };
    let spec = spec(
        PowerMode::Oblivious,
        4.0,
        0.01,
        (n.max(1) as f64).sqrt(),
        demand,
    );
    generate(KINDS[kind % KINDS.len()], n, seed, &spec)
        .and_then(|f| f.to_link_set())
        .expect("generator settings are satisfiable")
}
