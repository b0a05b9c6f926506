//! Dense two-phase primal simplex for small linear programs.
//!
//! Solves `minimize c.x` subject to linear rows (`<=`, `>=`, `=`) and `x >= 0`.
//! Pricing is Dantzig's rule; after a run of degenerate pivots the solver
//! switches to Bland's rule for the rest of the phase, which cannot cycle.

use thiserror::Error;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Reduced-cost tolerance.
pub const COST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_RUN_BEFORE_BLAND: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("infeasible")]
    Infeasible,
    #[error("unbounded")]
    Unbounded,
    #[error("iteration limit reached")]
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn set_objective(&mut self, var: usize, coef: f64) {
        self.objective[var] = coef;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(v, _)| v < self.num_vars));
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: usize,
    /// structural + slack/surplus + artificial columns; the rhs is stored after them
    cols: usize,
    first_artificial: usize,
    data: Vec<f64>,
    /// reduced costs, last entry is minus the objective value
    obj: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let rows = lp.constraints.len();
        let n = lp.num_vars;
        let mut slack = 0;
        let mut artificial = 0;
        let normalized: Vec<(Relation, f64, f64)> = lp
            .constraints
            .iter()
            .map(|c| {
                let (rel, sign) = if c.rhs < 0.0 {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (flipped, -1.0)
                } else {
                    (c.relation, 1.0)
                };
                match rel {
                    Relation::Le => slack += 1,
                    Relation::Ge => {
                        slack += 1;
                        artificial += 1;
                    }
                    Relation::Eq => artificial += 1,
                }
                (rel, sign, c.rhs * sign)
            })
            .collect();
        let first_artificial = n + slack;
        let cols = first_artificial + artificial;
        let stride = cols + 1;
        let mut data = vec![0.0; rows * stride];
        let mut basis = vec![0; rows];
        let (mut next_slack, mut next_art) = (n, first_artificial);
        for (r, (c, &(rel, sign, rhs))) in lp.constraints.iter().zip(&normalized).enumerate() {
            let row = &mut data[r * stride..(r + 1) * stride];
            for &(v, a) in &c.coeffs {
                row[v] += a * sign;
            }
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis[r] = next_slack;
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = 1.0;
                    basis[r] = next_art;
                    next_art += 1;
                }
            }
        }
        Self {
            rows,
            cols,
            first_artificial,
            data,
            obj: vec![0.0; stride],
            basis,
        }
    }

    fn stride(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.stride() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    /// Rebuilds the reduced-cost row for cost vector `cost` (length `cols`).
    fn price(&mut self, cost: &[f64]) {
        let stride = self.stride();
        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..self.cols].copy_from_slice(cost);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * stride..(r + 1) * stride];
                for (o, &a) in self.obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let stride = self.stride();
        let inv = 1.0 / self.at(pr, pc);
        {
            let row = &mut self.data[pr * stride..(pr + 1) * stride];
            for v in row.iter_mut() {
                *v *= inv;
            }
            row[pc] = 1.0;
        }
        let pivot_row: Vec<f64> = self.data[pr * stride..(pr + 1) * stride].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.data[r * stride + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[r * stride..(r + 1) * stride];
            for (v, &p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
                if v.abs() < 1e-13 {
                    *v = 0.0;
                }
            }
            row[pc] = 0.0;
        }
        let f = self.obj[pc];
        if f != 0.0 {
            for (v, &p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            self.obj[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations over columns `< allowed_cols`.
    fn optimize(&mut self, allowed_cols: usize, max_iter: usize) -> Result<(), LpError> {
        let mut bland = false;
        let mut degenerate_run = 0;
        for _ in 0..max_iter {
            let entering = if bland {
                (0..allowed_cols).find(|&j| self.obj[j] < -COST_TOL)
            } else {
                let mut best = None;
                let mut best_val = -COST_TOL;
                for j in 0..allowed_cols {
                    if self.obj[j] < best_val {
                        best_val = self.obj[j];
                        best = Some(j);
                    }
                }
                best
            };
            let Some(pc) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio, la)) => {
                            if ratio < lratio - 1e-12 {
                                true
                            } else if ratio <= lratio + 1e-12 {
                                if bland {
                                    self.basis[r] < self.basis[lr]
                                } else {
                                    a > la
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        leave = Some((r, ratio, a));
                    }
                }
            }
            let Some((pr, ratio, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, pc);
        }
        Err(LpError::IterationLimit)
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpSolution, LpError> {
        let max_iter = 20_000 + 50 * (self.rows + self.cols);
        if self.first_artificial < self.cols {
            let mut cost = vec![0.0; self.cols];
            cost[self.first_artificial..]
                .iter_mut()
                .for_each(|c| *c = 1.0);
            self.price(&cost);
            self.optimize(self.cols, max_iter)?;
            let infeasibility = -self.obj[self.cols];
            if infeasibility > FEAS_TOL {
                return Err(LpError::Infeasible);
            }
            // pivot remaining zero-valued artificials out of the basis
            for r in 0..self.rows {
                if self.basis[r] >= self.first_artificial {
                    let col = (0..self.first_artificial)
                        .filter(|&j| self.at(r, j).abs() > PIVOT_TOL)
                        .max_by(|&a, &b| self.at(r, a).abs().total_cmp(&self.at(r, b).abs()));
                    if let Some(j) = col {
                        self.pivot(r, j);
                    }
                }
            }
        }
        let mut cost = vec![0.0; self.cols];
        cost[..lp.num_vars].copy_from_slice(&lp.objective);
        self.price(&cost);
        self.optimize(self.first_artificial, max_iter)?;

        let mut values = vec![0.0; lp.num_vars];
        for r in 0..self.rows {
            let b = self.basis[r];
            if b < lp.num_vars {
                values[b] = self.rhs(r).max(0.0);
            }
        }
        let objective = values.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();
        Ok(LpSolution { objective, values })
    }
}
