//! Exact two-phase simplex over the rationals.
//!
//! Bland's rule is used for both entering and leaving variables, which
//! guarantees termination. Problem sizes in this crate are a few dozen rows
//! at most, so a dense tableau is fine.

use num_traits::{One, Signed, Zero};

use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

/// `maximize objective · x` subject to linear constraints; each variable is
/// either nonnegative or free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    /// All variables nonnegative, zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            constraints: Vec::new(),
            objective: vec![Q::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn maximize(&mut self, objective: Vec<Q>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        // Standard form columns: nonnegative parts of each variable, the
        // negative parts of free variables, then one slack per inequality.
        let mut col_of_pos = Vec::with_capacity(self.num_vars);
        let mut col_of_neg = vec![None; self.num_vars];
        let mut ncols = 0;
        for v in 0..self.num_vars {
            col_of_pos.push(ncols);
            ncols += 1;
            if self.free[v] {
                col_of_neg[v] = Some(ncols);
                ncols += 1;
            }
        }
        let mut slack_of = vec![None; self.constraints.len()];
        for (i, c) in self.constraints.iter().enumerate() {
            if c.relation != Relation::Eq {
                slack_of[i] = Some(ncols);
                ncols += 1;
            }
        }

        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut rhs = Vec::with_capacity(self.constraints.len());
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); ncols];
            for v in 0..self.num_vars {
                row[col_of_pos[v]] = c.coeffs[v].clone();
                if let Some(n) = col_of_neg[v] {
                    row[n] = -c.coeffs[v].clone();
                }
            }
            match (c.relation, slack_of[i]) {
                (Relation::Le, Some(s)) => row[s] = Q::one(),
                (Relation::Ge, Some(s)) => row[s] = -Q::one(),
                _ => {}
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
            }
            rows.push(row);
            rhs.push(b);
        }

        let mut cost = vec![Q::zero(); ncols];
        for v in 0..self.num_vars {
            cost[col_of_pos[v]] = self.objective[v].clone();
            if let Some(n) = col_of_neg[v] {
                cost[n] = -self.objective[v].clone();
            }
        }

        match solve_standard(rows, rhs, &cost) {
            StandardOutcome::Infeasible => LpOutcome::Infeasible,
            StandardOutcome::Unbounded => LpOutcome::Unbounded,
            StandardOutcome::Optimal(y) => {
                let x: Vec<Q> = (0..self.num_vars)
                    .map(|v| match col_of_neg[v] {
                        Some(n) => &y[col_of_pos[v]] - &y[n],
                        None => y[col_of_pos[v]].clone(),
                    })
                    .collect();
                let value = crate::linalg::dot(&self.objective, &x);
                LpOutcome::Optimal { x, value }
            }
        }
    }
}

enum StandardOutcome {
    Optimal(Vec<Q>),
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Rows of `B⁻¹ [A | b]`; the last entry of each row is the rhs.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over the current tableau, entering only columns
    /// with `allowed[c]`. Returns false on unboundedness.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool]) -> bool {
        let width = self.width();
        loop {
            let entering = (0..width).find(|&c| {
                if !allowed[c] || self.basis.contains(&c) {
                    return false;
                }
                let mut rc = cost[c].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[c].is_zero() && !cost[b].is_zero() {
                        rc -= &cost[b] * &row[c];
                    }
                }
                rc.is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[width] / &row[c];
                let better = match &leave {
                    None => true,
                    Some((j, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*j])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn solution(&self, n: usize) -> Vec<Q> {
        let width = self.width();
        let mut x = vec![Q::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[width].clone();
            }
        }
        x
    }
}

/// `maximize cost · x` s.t. `rows x = rhs`, `x ≥ 0`, with `rhs ≥ 0`.
fn solve_standard(rows: Vec<Vec<Q>>, rhs: Vec<Q>, cost: &[Q]) -> StandardOutcome {
    let m = rows.len();
    let n = cost.len();
    if m == 0 {
        return if cost.iter().any(|c| c.is_positive()) {
            StandardOutcome::Unbounded
        } else {
            StandardOutcome::Optimal(vec![Q::zero(); n])
        };
    }

    // Phase one: artificial column n + i for row i.
    let mut tab = Tableau {
        rows: rows
            .into_iter()
            .zip(rhs)
            .enumerate()
            .map(|(i, (mut row, b))| {
                row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
                row.push(b);
                row
            })
            .collect(),
        basis: (n..n + m).collect(),
    };
    let mut phase1_cost = vec![Q::zero(); n + m];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = -Q::one();
    }
    let everything = vec![true; n + m];
    let bounded = tab.optimize(&phase1_cost, &everything);
    debug_assert!(bounded, "phase one is bounded by construction");
    let width = n + m;
    let infeasibility: Q = tab
        .rows
        .iter()
        .zip(&tab.basis)
        .filter(|(_, &b)| b >= n)
        .fold(Q::zero(), |acc, (row, _)| acc + &row[width]);
    if infeasibility.is_positive() {
        return StandardOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are redundant and dropped.
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&c| !tab.rows[r][c].is_zero()) {
                Some(c) => tab.pivot(r, c),
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    let mut phase2_cost = cost.to_vec();
    phase2_cost.extend((0..m).map(|_| Q::zero()));
    let mut allowed = vec![true; n + m];
    for a in allowed.iter_mut().skip(n) {
        *a = false;
    }
    if !tab.optimize(&phase2_cost, &allowed) {
        return StandardOutcome::Unbounded;
    }
    StandardOutcome::Optimal(tab.solution(n))
}
