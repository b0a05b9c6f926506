//! Arbitrary-power scheduling as an integer program.
//!
//! `x[i][t] = 1` when link `i` transmits in slot `t`, `y[t] = 1` when slot `t`
//! is used. The SINR requirement of link `i` becomes the knapsack row
//! `sum_j b[j][i] x[j][t] <= a[i]`, conditioned on `x[i][t]` with a big-M.
//! The relaxation replaces those rows by cover inequalities separated on
//! demand, and branch-and-bound closes the integrality gap.

mod branch;
mod cover;
mod export;
mod relax;

pub use branch::{schedule_cutting_plane, CuttingPlaneOptions, CuttingPlaneOutcome};
pub use cover::{lift_cut, separate_min_cover, CoverCut};
pub use export::write_lp_format;
pub use relax::{solve_lp, LpRelaxSolution, LpRelaxState};

use crate::error::{Error, Result};
use crate::phys::{path_loss, LinkSet, PowerMode, DEFAULT_SINR_TOLERANCE};

/// Coefficients of the knapsack form of the SINR constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpInstance {
    pub n: usize,
    /// `gains[j][i]`: path loss from the sender of `j` to the receiver of `i`.
    pub gains: Vec<Vec<f64>>,
    pub powers: Vec<f64>,
    /// `a[i] = P_i g_ii / sigma - xi`
    pub a: Vec<f64>,
    /// `b[j][i] = P_j g_ji` for `j != i`, zero on the diagonal.
    pub b: Vec<Vec<f64>>,
    /// `M_i = sum_{j != i} b[j][i]`
    pub big_m: Vec<f64>,
    /// Knapsack capacity matching the checker: `P_i g_ii / (sigma - tol) - xi`.
    /// Never below `a[i]`.
    pub capacity: Vec<f64>,
}

pub fn build_ilp(set: &LinkSet) -> Result<IlpInstance> {
    set.require_mode(PowerMode::Arbitrary)?;
    let n = set.len();
    let p = set.params();
    let mut gains = vec![vec![0.0; n]; n];
    for (j, lj) in set.links().iter().enumerate() {
        for (i, li) in set.links().iter().enumerate() {
            let d = lj.sender.dist(&li.receiver);
            gains[j][i] = if d == 0.0 {
                f64::INFINITY
            } else {
                path_loss(d, p)?
            };
        }
    }
    let powers: Vec<f64> = (0..n).map(|i| set.tx_power(i)).collect::<Result<_>>()?;
    let mut a = Vec::with_capacity(n);
    let mut capacity = Vec::with_capacity(n);
    for i in 0..n {
        let own = powers[i] * gains[i][i];
        let ai = own / p.sigma - p.xi;
        if !(ai > 0.0) {
            return Err(Error::Inadmissible {
                id: i,
                reason: format!("a_i = {ai} <= 0, the link cannot transmit even alone"),
            });
        }
        a.push(ai);
        let relaxed = p.sigma - DEFAULT_SINR_TOLERANCE;
        capacity.push(if relaxed > 0.0 {
            (own / relaxed - p.xi).max(ai)
        } else {
            f64::INFINITY
        });
    }
    let b: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { 0.0 } else { powers[j] * gains[j][i] })
                .collect()
        })
        .collect();
    let big_m = (0..n).map(|i| (0..n).map(|j| b[j][i]).sum()).collect();
    Ok(IlpInstance {
        n,
        gains,
        powers,
        a,
        b,
        big_m,
        capacity,
    })
}

impl IlpInstance {
    /// `sum_j b[j][i] x[j] > a[i] + M_i (1 - x[i]) + 1e-7` for one slot column.
    pub fn knapsack_violated(&self, i: usize, column: &[f64]) -> bool {
        let load: f64 = (0..self.n)
            .filter(|&j| j != i)
            .map(|j| self.b[j][i] * column[j])
            .sum();
        load > self.a[i] + self.big_m[i] * (1.0 - column[i]) + 1e-7
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phys::{Link, PhysParams};

    fn params() -> PhysParams {
        PhysParams {
            kappa: 3.0,
            eta: 1.0,
            sigma: 1.5,
            xi: 0.1,
            c: 1.0,
            beta: 3.0,
            pmax: 10.0,
        }
    }

    #[test]
    fn single_link_coefficients() {
        let set = LinkSet::new(
            params(),
            PowerMode::Arbitrary,
            vec![Link::new(0, (0.0, 0.0), (2.0, 0.0)).with_power(8.0)],
        )
        .unwrap();
        let ilp = build_ilp(&set).unwrap();
        assert!((ilp.a[0] - (8.0 * 0.125 / 1.5 - 0.1)).abs() < 1e-15);
        assert_eq!(ilp.b, vec![vec![0.0]]);
        assert_eq!(ilp.big_m, vec![0.0]);
    }

    #[test]
    fn symmetric_pair_and_three_link_fixture() {
        let set = LinkSet::new(
            params(),
            PowerMode::Arbitrary,
            vec![
                Link::new(0, (0.0, 0.0), (1.0, 0.0)).with_power(2.0),
                Link::new(1, (4.0, 0.0), (3.0, 0.0)).with_power(2.0),
            ],
        )
        .unwrap();
        let ilp = build_ilp(&set).unwrap();
        assert_eq!(ilp.b[0][1], ilp.b[1][0]);

        // three links, hand evaluation of P_j * eta * d^-kappa
        let set = LinkSet::new(
            params(),
            PowerMode::Arbitrary,
            vec![
                Link::new(0, (0.0, 0.0), (1.0, 0.0)).with_power(1.0),
                Link::new(1, (3.0, 0.0), (3.0, 1.0)).with_power(2.0),
                Link::new(2, (0.0, 4.0), (0.0, 5.0)).with_power(4.0),
            ],
        )
        .unwrap();
        let ilp = build_ilp(&set).unwrap();
        // sender 1 (3,0) -> receiver 0 (1,0): d = 2 -> 2/8
        assert!((ilp.b[1][0] - 0.25).abs() < 1e-15);
        // sender 2 (0,4) -> receiver 0 (1,0): d^2 = 17 -> 4 / 17^1.5
        assert!((ilp.b[2][0] - 4.0 / 17f64.powf(1.5)).abs() < 1e-15);
        // sender 0 (0,0) -> receiver 1 (3,1): d^2 = 10 -> 1 / 10^1.5
        assert!((ilp.b[0][1] - 1.0 / 10f64.powf(1.5)).abs() < 1e-15);
        // sender 2 (0,4) -> receiver 1 (3,1): d^2 = 18 -> 4 / 18^1.5
        assert!((ilp.b[2][1] - 4.0 / 18f64.powf(1.5)).abs() < 1e-15);
        // sender 0 -> receiver 2 (0,5): d = 5 -> 1/125
        assert!((ilp.b[0][2] - 1.0 / 125.0).abs() < 1e-15);
        // sender 1 (3,0) -> receiver 2 (0,5): d^2 = 34 -> 2 / 34^1.5
        assert!((ilp.b[1][2] - 2.0 / 34f64.powf(1.5)).abs() < 1e-15);
        assert!((ilp.big_m[0] - (0.25 + 4.0 / 17f64.powf(1.5))).abs() < 1e-15);
        assert!((ilp.a[2] - (4.0 / 1.5 - 0.1)).abs() < 1e-15);
    }

    #[test]
    fn unschedulable_link_is_named() {
        // a = 1 * 1/1000 / 1.5 - 0.1 < 0
        let set = LinkSet::new(
            params(),
            PowerMode::Arbitrary,
            vec![
                Link::new(0, (0.0, 0.0), (1.0, 0.0)).with_power(1.0),
                Link::new(1, (5.0, 0.0), (15.0, 0.0)).with_power(1.0),
            ],
        )
        .unwrap();
        assert!(matches!(
            build_ilp(&set),
            Err(Error::Inadmissible { id: 1, .. })
        ));
    }

    #[test]
    fn mode_is_checked() {
        let set = LinkSet::new(params(), PowerMode::Uniform, vec![]).unwrap();
        assert!(matches!(build_ilp(&set), Err(Error::ModeMismatch { .. })));
    }
}
