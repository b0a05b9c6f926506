use std::collections::HashSet;

use super::CoverCut;
use crate::lp::{LinearProgram, LpError, Relation};

/// LP relaxation over `x[i][t]` (link `i` in slot `t`) and `y[t]`, holding
/// the cover cuts found so far and the branching fixings of the current node.
///
/// Slot `t` may only hold links with id `>= t`: any schedule can be relabelled
/// so that slots are ordered by their smallest member, which also orders
/// `y[0] >= y[1] >= ...`.
#[derive(Debug, Clone)]
pub struct LpRelaxState {
    n: usize,
    slots: usize,
    cuts: Vec<CoverCut>,
    seen: HashSet<CoverCut>,
    fixed: Vec<Option<bool>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRelaxSolution {
    pub objective: f64,
    /// `x[i][t]`
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl LpRelaxSolution {
    /// Slot column `t` of `x`.
    pub fn column(&self, t: usize) -> Vec<f64> {
        self.x.iter().map(|row| row[t]).collect()
    }
}

impl LpRelaxState {
    pub fn new(n: usize, slots: usize) -> Self {
        Self {
            n,
            slots,
            cuts: Vec::new(),
            seen: HashSet::new(),
            fixed: vec![None; n * slots],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn cuts(&self) -> &[CoverCut] {
        &self.cuts
    }

    /// Adds a cut unless an identical one is present.
    pub fn add_cut(&mut self, cut: CoverCut) -> bool {
        if self.seen.insert(cut.clone()) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn fixings(&self) -> &[Option<bool>] {
        &self.fixed
    }

    pub fn set_fixings(&mut self, fixed: Vec<Option<bool>>) {
        assert_eq!(fixed.len(), self.n * self.slots);
        self.fixed = fixed;
    }

    pub fn fix(&mut self, i: usize, t: usize, value: bool) {
        self.fixed[i * self.slots + t] = Some(value);
    }

    /// Value forced on `x[i][t]` by branching or slot ordering.
    pub fn forced(&self, i: usize, t: usize) -> Option<bool> {
        if t > i {
            Some(false)
        } else {
            self.fixed[i * self.slots + t]
        }
    }
}

/// Rows collected with fixed variables moved to the right-hand side.
struct RowBuilder<'a> {
    state: &'a LpRelaxState,
    col: Vec<Option<usize>>,
    lp: LinearProgram,
    trivially_infeasible: bool,
}

impl<'a> RowBuilder<'a> {
    fn y(&self, t: usize) -> usize {
        self.state.n * self.state.slots + t
    }

    fn x(&self, i: usize, t: usize) -> usize {
        i * self.state.slots + t
    }

    /// `terms` are over the flattened variable space.
    fn push(&mut self, terms: &[(usize, f64)], relation: Relation, rhs: f64) {
        let mut rhs = rhs;
        let mut coeffs = Vec::with_capacity(terms.len());
        for &(v, a) in terms {
            match self.col[v] {
                Some(c) => coeffs.push((c, a)),
                None => rhs -= a * self.fixed_value(v),
            }
        }
        if coeffs.is_empty() {
            let ok = match relation {
                Relation::Le => rhs >= -1e-9,
                Relation::Ge => rhs <= 1e-9,
                Relation::Eq => rhs.abs() <= 1e-9,
            };
            self.trivially_infeasible |= !ok;
            return;
        }
        self.lp.add_constraint(coeffs, relation, rhs);
    }

    fn fixed_value(&self, v: usize) -> f64 {
        let (i, t) = (v / self.state.slots, v % self.state.slots);
        if self.state.forced(i, t) == Some(true) {
            1.0
        } else {
            0.0
        }
    }
}

/// Solves the relaxation of the current node.
pub fn solve_lp(state: &LpRelaxState) -> Result<LpRelaxSolution, LpError> {
    let (n, slots) = (state.n, state.slots);
    let total = n * slots + slots;
    let mut col = vec![None; total];
    let mut next = 0;
    for i in 0..n {
        for t in 0..slots {
            if state.forced(i, t).is_none() {
                col[i * slots + t] = Some(next);
                next += 1;
            }
        }
    }
    for t in 0..slots {
        col[n * slots + t] = Some(next);
        next += 1;
    }
    let mut rb = RowBuilder {
        state,
        col,
        lp: LinearProgram::new(next),
        trivially_infeasible: false,
    };
    for t in 0..slots {
        let c = rb.col[rb.y(t)].unwrap();
        rb.lp.set_objective(c, 1.0);
    }

    for i in 0..n {
        let row: Vec<(usize, f64)> = (0..slots).map(|t| (rb.x(i, t), 1.0)).collect();
        rb.push(&row, Relation::Eq, 1.0);
    }
    for i in 0..n {
        for t in 0..slots.min(i + 1) {
            let (x, y) = (rb.x(i, t), rb.y(t));
            rb.push(&[(x, 1.0), (y, -1.0)], Relation::Le, 0.0);
        }
    }
    for t in 0..slots {
        let y = rb.y(t);
        rb.push(&[(y, 1.0)], Relation::Le, 1.0);
        if t + 1 < slots {
            let y1 = rb.y(t + 1);
            rb.push(&[(y1, 1.0), (y, -1.0)], Relation::Le, 0.0);
        }
    }
    for cut in &state.cuts {
        let (coeffs, ycoef) = cut.row();
        let mut row: Vec<(usize, f64)> = coeffs
            .iter()
            .map(|&(j, a)| (rb.x(j, cut.slot), a))
            .collect();
        row.push((rb.y(cut.slot), -ycoef));
        rb.push(&row, Relation::Le, 0.0);
    }
    if rb.trivially_infeasible {
        return Err(LpError::Infeasible);
    }

    let sol = rb.lp.solve()?;
    let mut x = vec![vec![0.0; slots]; n];
    for (i, row) in x.iter_mut().enumerate() {
        for (t, v) in row.iter_mut().enumerate() {
            *v = match rb.col[i * slots + t] {
                Some(c) => sol.values[c].clamp(0.0, 1.0),
                None => rb.fixed_value(i * slots + t),
            };
        }
    }
    let y = (0..slots)
        .map(|t| sol.values[rb.col[n * slots + t].unwrap()])
        .collect();
    Ok(LpRelaxSolution {
        objective: sol.objective,
        x,
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn without_cuts_everything_fits_one_slot() {
        let state = LpRelaxState::new(3, 3);
        let sol = solve_lp(&state).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-9);
        for i in 0..3 {
            assert!((sol.x[i][0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pair_cut_forces_two_slots() {
        let mut state = LpRelaxState::new(2, 2);
        let cut = CoverCut {
            link: 0,
            slot: 0,
            cover: vec![1],
            lifted: vec![],
        };
        for t in 0..2 {
            assert!(state.add_cut(cut.for_slot(t)));
        }
        assert!(!state.add_cut(cut.clone()));
        let sol = solve_lp(&state).unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-9);
        assert!((sol.x[1][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fixings_are_respected() {
        let mut state = LpRelaxState::new(3, 3);
        state.fix(2, 2, true);
        let sol = solve_lp(&state).unwrap();
        assert_eq!(sol.x[2][2], 1.0);
        assert!((sol.objective - 3.0).abs() < 1e-9);

        // link 0 can only sit in slot 0
        let mut state = LpRelaxState::new(2, 2);
        state.fix(0, 0, false);
        assert_eq!(solve_lp(&state), Err(LpError::Infeasible));
    }
}
