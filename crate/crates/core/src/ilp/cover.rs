use serde::{Deserialize, Serialize};

use super::IlpInstance;

/// Minimal-cover inequality for link `link` in slot `slot`.
///
/// With `A = sum(lifted coefficients)` the row reads
/// `sum_{j in cover} x_j + sum_k alpha_k x_k + (1 + A) x_link <= (|cover| + A) y_slot`.
/// Without lifting this is the plain cover row with the slot indicator on the
/// right: when the slot is used and `link` transmits, at most `|cover| - 1`
/// cover members may join it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverCut {
    pub link: usize,
    pub slot: usize,
    /// Sorted link ids.
    pub cover: Vec<usize>,
    /// `(link, alpha)` pairs with `alpha >= 1`, sorted by link id.
    pub lifted: Vec<(usize, u32)>,
}

impl CoverCut {
    pub fn is_lifted(&self) -> bool {
        !self.lifted.is_empty()
    }

    fn lifted_total(&self) -> f64 {
        self.lifted.iter().map(|&(_, a)| a as f64).sum()
    }

    /// Row coefficients on the links of the slot and on the slot indicator.
    pub fn row(&self) -> (Vec<(usize, f64)>, f64) {
        let extra = self.lifted_total();
        let mut coeffs: Vec<(usize, f64)> = self.cover.iter().map(|&j| (j, 1.0)).collect();
        coeffs.extend(self.lifted.iter().map(|&(k, a)| (k, a as f64)));
        coeffs.push((self.link, 1.0 + extra));
        (coeffs, self.cover.len() as f64 + extra)
    }

    /// `lhs - rhs` at a point given as one slot column of `x` and its `y`.
    pub fn violation(&self, column: &[f64], y: f64) -> f64 {
        let (coeffs, ycoef) = self.row();
        coeffs.iter().map(|&(j, a)| a * column[j]).sum::<f64>() - ycoef * y
    }

    /// Whether the row holds for a used slot holding exactly `members`.
    pub fn holds_for(&self, members: &[usize]) -> bool {
        let mut column = vec![0.0; self.max_id() + 1];
        for &m in members {
            if m < column.len() {
                column[m] = 1.0;
            }
        }
        self.violation(&column, 1.0) <= 1e-9
    }

    /// The same inequality stated for another slot.
    pub fn for_slot(&self, slot: usize) -> Self {
        Self {
            slot,
            ..self.clone()
        }
    }

    /// Checks the cover property `sum_{j in cover} b[j][link] > capacity`.
    pub fn is_cover(&self, ilp: &IlpInstance) -> bool {
        self.cover.iter().map(|&j| ilp.b[j][self.link]).sum::<f64>() > ilp.capacity[self.link]
    }

    fn max_id(&self) -> usize {
        self.cover
            .iter()
            .copied()
            .chain(self.lifted.iter().map(|&(k, _)| k))
            .chain(std::iter::once(self.link))
            .max()
            .unwrap_or(0)
    }
}

/// Greedy minimal cover for link `i` from the links active in `column`.
///
/// Active links (other than `i`) are taken in decreasing interference order
/// until their sum exceeds the capacity of `i`. `None` when `i` is inactive
/// or its active neighbours fit.
pub fn separate_min_cover(
    ilp: &IlpInstance,
    column: &[f64],
    i: usize,
    slot: usize,
) -> Option<CoverCut> {
    const ACTIVE: f64 = 1e-9;
    if column[i] <= ACTIVE {
        return None;
    }
    let mut support: Vec<usize> = (0..ilp.n)
        .filter(|&j| j != i && column[j] > ACTIVE)
        .collect();
    support.sort_by(|&p, &q| ilp.b[q][i].total_cmp(&ilp.b[p][i]).then(p.cmp(&q)));
    let mut sum = 0.0;
    let mut cover = Vec::new();
    for j in support {
        sum += ilp.b[j][i];
        cover.push(j);
        if sum > ilp.capacity[i] {
            cover.sort_unstable();
            return Some(CoverCut {
                link: i,
                slot,
                cover,
                lifted: Vec::new(),
            });
        }
    }
    None
}

/// Sequential up-lifting of a plain cover row over the remaining links, in
/// increasing interference order.
///
/// For each candidate `k`, `alpha_k = |cover| - 1 - z_k` where `z_k` is the
/// largest left-hand side the cover members and previously lifted links can
/// reach while `i` and `k` transmit together feasibly. The inner knapsack is
/// solved exactly by a DP over integer values that minimises weight.
pub fn lift_cut(ilp: &IlpInstance, cut: &CoverCut) -> CoverCut {
    let i = cut.link;
    let base = cut.cover.len() as u32 - 1;
    let mut candidates: Vec<usize> = (0..ilp.n)
        .filter(|&k| k != i && cut.cover.binary_search(&k).is_err())
        .collect();
    candidates.sort_by(|&p, &q| ilp.b[p][i].total_cmp(&ilp.b[q][i]).then(p.cmp(&q)));

    // items of the inner knapsack: (value, weight)
    let mut items: Vec<(u32, f64)> = cut.cover.iter().map(|&j| (1, ilp.b[j][i])).collect();
    let mut lifted = Vec::new();
    for k in candidates {
        let residual = ilp.capacity[i] - ilp.b[k][i];
        let alpha = if residual < 0.0 {
            base
        } else {
            base.saturating_sub(max_value_within(&items, residual))
        };
        if alpha > 0 {
            lifted.push((k, alpha));
            items.push((alpha, ilp.b[k][i]));
        }
    }
    lifted.sort_unstable();
    CoverCut {
        lifted,
        ..cut.clone()
    }
}

/// `max sum v` over subsets with `sum w <= cap`.
fn max_value_within(items: &[(u32, f64)], cap: f64) -> u32 {
    let total: usize = items.iter().map(|&(v, _)| v as usize).sum();
    let mut min_weight = vec![f64::INFINITY; total + 1];
    min_weight[0] = 0.0;
    let mut reach = 0usize;
    for &(v, w) in items {
        let v = v as usize;
        for val in (0..=reach).rev() {
            let cand = min_weight[val] + w;
            if cand < min_weight[val + v] {
                min_weight[val + v] = cand;
            }
        }
        reach += v;
    }
    (0..=total)
        .rev()
        .find(|&v| min_weight[v] <= cap)
        .unwrap_or(0) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Instance with hand-picked coefficients for link 0 and no other rows of interest.
    fn knapsack(a0: f64, b_into_0: &[f64]) -> IlpInstance {
        let n = b_into_0.len() + 1;
        let mut b = vec![vec![0.0; n]; n];
        for (j, &w) in b_into_0.iter().enumerate() {
            b[j + 1][0] = w;
        }
        IlpInstance {
            n,
            gains: vec![vec![0.0; n]; n],
            powers: vec![1.0; n],
            a: {
                let mut a = vec![1e9; n];
                a[0] = a0;
                a
            },
            big_m: (0..n).map(|i| (0..n).map(|j| b[j][i]).sum()).collect(),
            capacity: {
                let mut c = vec![1e9; n];
                c[0] = a0;
                c
            },
            b,
        }
    }

    #[test]
    fn greedy_cover_is_minimal() {
        let ilp = knapsack(10.0, &[6.0, 5.0, 4.0, 1.0]);
        let column = [1.0, 0.5, 0.5, 0.5, 0.5];
        let cut = separate_min_cover(&ilp, &column, 0, 2).unwrap();
        assert_eq!(cut.cover, vec![1, 2]);
        assert_eq!(cut.slot, 2);
        assert!(cut.is_cover(&ilp));
        // every proper subset fits
        assert!(ilp.b[1][0] <= 10.0 && ilp.b[2][0] <= 10.0);
    }

    #[test]
    fn no_cover_when_support_fits() {
        let ilp = knapsack(10.0, &[6.0, 5.0, 4.0]);
        assert!(separate_min_cover(&ilp, &[1.0, 1.0, 0.0, 1.0], 0, 0).is_none());
        assert!(separate_min_cover(&ilp, &[0.0, 1.0, 1.0, 1.0], 0, 0).is_none());
    }

    #[test]
    fn lifting_worked_example() {
        // capacity 10, cover {1,2,3} with weights 4,4,3 (sum 11 > 10).
        // link 4 (weight 7): with it, residual 3 admits one cover member -> alpha 1.
        // link 5 (weight 11): alone it overflows -> alpha = |C| - 1 = 2.
        let ilp = knapsack(10.0, &[4.0, 4.0, 3.0, 7.0, 11.0]);
        let cut = CoverCut {
            link: 0,
            slot: 0,
            cover: vec![1, 2, 3],
            lifted: vec![],
        };
        assert!(cut.is_cover(&ilp));
        let lifted = lift_cut(&ilp, &cut);
        assert_eq!(lifted.lifted, vec![(4, 1), (5, 2)]);
        let (coeffs, y) = lifted.row();
        assert_eq!(y, 6.0);
        assert!(coeffs.contains(&(0, 4.0)));
    }

    #[test]
    fn lifted_rows_hold_on_every_feasible_set() {
        let weights = [4.0, 4.0, 3.0, 7.0, 11.0, 2.5];
        let ilp = knapsack(10.0, &weights);
        let cut = CoverCut {
            link: 0,
            slot: 0,
            cover: vec![1, 2, 3],
            lifted: vec![],
        };
        let lifted = lift_cut(&ilp, &cut);
        for mask in 0u32..1 << weights.len() {
            let members: Vec<usize> = std::iter::once(0)
                .chain(
                    (0..weights.len())
                        .filter(|&j| mask >> j & 1 == 1)
                        .map(|j| j + 1),
                )
                .collect();
            let load: f64 = members[1..].iter().map(|&j| weights[j - 1]).sum();
            if load <= 10.0 {
                assert!(cut.holds_for(&members), "{members:?}");
                assert!(lifted.holds_for(&members), "{members:?}");
            }
        }
    }

    #[test]
    fn inner_knapsack_dp() {
        let items = [(1, 4.0), (1, 4.0), (1, 3.0), (2, 7.0)];
        assert_eq!(max_value_within(&items, 3.0), 1);
        assert_eq!(max_value_within(&items, 7.0), 2);
        assert_eq!(max_value_within(&items, 11.0), 3);
        assert_eq!(max_value_within(&items, 2.0), 0);
        assert_eq!(max_value_within(&items, 100.0), 5);
    }
}
