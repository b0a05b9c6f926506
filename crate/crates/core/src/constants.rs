//! Derived constants: the lattice interference constant tau, the grid
//! separation K, the per-cell independence bound omega, and R / r.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::phys::{LinkSet, PhysParams};

/// Upper bound on the interference lattice sum, so that
/// `sum over Z^2 \ {0} of |z|^-kappa <= 4 * tau`.
pub fn interference_sum_constant(kappa: f64) -> f64 {
    let half = 2f64.powf(-kappa / 2.0);
    kappa * (1.0 + half) / (kappa - 1.0) + PI * half / (2.0 * (kappa - 2.0))
}

/// Smallest value `X` with `K/sqrt(2) - 1 >= X` guaranteeing independence,
/// for links whose wanted signal is at least `signal_floor`.
///
/// The SINR requirement is
/// `signal_floor / (xi + 4 tau signal_floor (K/sqrt2 - 1)^-kappa) >= sigma`.
pub fn separation_threshold(params: &PhysParams, signal_floor: f64) -> Result<f64> {
    let slack = 1.0 / params.sigma - params.xi / signal_floor;
    if !(slack > 0.0) {
        return Err(Error::NoSeparation { slack });
    }
    let tau = interference_sum_constant(params.kappa);
    Ok((slack / (4.0 * tau)).powf(-1.0 / params.kappa))
}

/// `K = ceil(sqrt2 * X + sqrt2)` for a given signal floor.
pub fn separation_for_signal_floor(params: &PhysParams, signal_floor: f64) -> Result<u32> {
    let x = separation_threshold(params, signal_floor)?;
    let k = (SQRT_2 * x + SQRT_2).ceil();
    if !(k.is_finite() && k <= u32::MAX as f64) {
        return Err(Error::Domain(format!("separation constant overflow ({k})")));
    }
    Ok(k as u32)
}

/// Oblivious-power separation constant K for links no longer than `rmax`.
///
/// The worst-case wanted signal is `c * eta * rmax^(beta - kappa)`; when
/// `xi = 0` the `rmax` term drops out entirely.
pub fn oblivious_separation(params: &PhysParams, rmax: f64) -> Result<u32> {
    let x = oblivious_threshold(params, rmax)?;
    let k = (SQRT_2 * x + SQRT_2).ceil();
    Ok(k as u32)
}

/// `X = ((4 tau)^-1 (sigma^-1 - xi (c eta)^-1 rmax^(kappa-beta)))^(-1/kappa)`.
pub fn oblivious_threshold(params: &PhysParams, rmax: f64) -> Result<f64> {
    let noise_term = if params.xi == 0.0 {
        0.0
    } else {
        params.xi / (params.c * params.eta) * rmax.powf(params.kappa - params.beta)
    };
    let slack = 1.0 / params.sigma - noise_term;
    if !(slack > 0.0) {
        return Err(Error::NoSeparation { slack });
    }
    let tau = interference_sum_constant(params.kappa);
    Ok((slack / (4.0 * tau)).powf(-1.0 / params.kappa))
}

/// Per-cell bound on independent set size, `ceil(2^kappa P / (sigma^2 xi) + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Omega {
    Bounded(u64),
    /// `xi = 0`: the bound does not exist.
    Unbounded,
}

impl Omega {
    pub fn value(&self) -> Option<u64> {
        match self {
            Omega::Bounded(v) => Some(*v),
            Omega::Unbounded => None,
        }
    }
}

pub fn cell_capacity_bound(params: &PhysParams) -> Omega {
    if params.xi == 0.0 {
        return Omega::Unbounded;
    }
    let v = (2f64.powf(params.kappa) * params.pmax / (params.sigma * params.sigma * params.xi)
        + 1.0)
        .ceil();
    if v.is_finite() && v < u64::MAX as f64 {
        Omega::Bounded(v as u64)
    } else {
        Omega::Unbounded
    }
}

/// Which R feeds the separation constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RmaxChoice {
    /// Longest link actually present.
    #[default]
    LongestLink,
    /// `(P/c)^(1/beta)`, the worst case over all admissible links.
    AnalyticCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub tau: f64,
    pub cap_k: u32,
    pub omega: Omega,
    pub rmax: f64,
    pub rmin: f64,
}

pub fn derive_constants(set: &LinkSet, choice: RmaxChoice) -> Result<DerivedConstants> {
    let params = set.params();
    let rmax = match choice {
        RmaxChoice::LongestLink => set.max_link_length(),
        RmaxChoice::AnalyticCap => params.oblivious_range_cap(),
    };
    Ok(DerivedConstants {
        tau: interference_sum_constant(params.kappa),
        cap_k: oblivious_separation(params, rmax)?,
        omega: cell_capacity_bound(params),
        rmax,
        rmin: set.min_node_distance(),
    })
}

/// The closing inequality of the sufficiency argument,
/// `K/sqrt2 - 1 >= ((4 tau)^-1 (sigma^-1 - xi (c eta)^-1 R^(kappa-beta)))^(-1/kappa)`.
pub fn separation_holds(params: &PhysParams, rmax: f64, cap_k: u32) -> Result<bool> {
    Ok(cap_k as f64 / SQRT_2 - 1.0 >= oblivious_threshold(params, rmax)?)
}
