//! Dense revised simplex for `max c·x  s.t.  A x ≤ b` with free `x`.
//!
//! The solver works on the dual `min b·y  s.t.  Aᵀy = c, y ≥ 0`, whose basis
//! has one row per primal variable. The primal point is read off the dual
//! simplex multipliers, so primal feasibility is exactly dual optimality of
//! the reduced costs. Pricing is Dantzig's rule, switching to Bland's rule
//! after a run of degenerate pivots.

use serde::{Deserialize, Serialize};

use super::linalg::{dot, Lu, Matrix};
use crate::config::{Tolerances, LP_ITERATION_LIMIT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub objective: f64,
    pub solution: Vec<f64>,
    pub status: LpStatus,
    pub iterations: usize,
    /// Indices of the constraints tight at the returned vertex.
    pub active: Vec<usize>,
}

/// A single inequality `coeffs · x ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    /// Maximized.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

const MAX_CONSTRAINTS: usize = 20_000;
const MAX_VARIABLES: usize = 200;
const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_RUN: usize = 50;

pub fn simplex_solve(lp: &LinearProgram) -> Result<LpResult> {
    let n = lp.objective.len();
    let m = lp.constraints.len();
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::invalid(format!(
            "LP needs 1..={MAX_VARIABLES} variables, got {n}"
        )));
    }
    if m > MAX_CONSTRAINTS {
        return Err(Error::invalid(format!(
            "LP limited to {MAX_CONSTRAINTS} constraints, got {m}"
        )));
    }
    if let Some(i) = lp.constraints.iter().position(|c| c.coeffs.len() != n) {
        return Err(Error::invalid(format!("constraint {i} has wrong length")));
    }
    let mut solver = DualSimplex::new(lp);
    let mut status = solver.run(&lp.objective)?;
    if status == LpStatus::Infeasible {
        // The dual has no feasible point: the primal is unbounded unless it is
        // itself infeasible, which shows as an unbounded dual for c = 0.
        let mut probe = DualSimplex::new(lp);
        let zero = vec![0.0; n];
        status = match probe.run(&zero)? {
            LpStatus::Unbounded => LpStatus::Infeasible,
            LpStatus::IterationLimit => LpStatus::IterationLimit,
            _ => LpStatus::Unbounded,
        };
        return Ok(LpResult {
            objective: f64::NAN,
            solution: vec![],
            status,
            iterations: solver.iterations + probe.iterations,
            active: vec![],
        });
    }
    match status {
        LpStatus::Optimal => {
            let x = solver.primal_point();
            let objective = dot(&lp.objective, &x);
            let tol = Tolerances::DEFAULT.lp_feasibility;
            let active = lp
                .constraints
                .iter()
                .enumerate()
                .filter(|(_, c)| (c.rhs - dot(&c.coeffs, &x)).abs() <= tol * c.rhs.abs().max(1.0))
                .map(|(i, _)| i)
                .collect();
            Ok(LpResult {
                objective,
                solution: x,
                status,
                iterations: solver.iterations,
                active,
            })
        }
        // dual unbounded: primal infeasible
        LpStatus::Unbounded => Ok(LpResult {
            objective: f64::NAN,
            solution: vec![],
            status: LpStatus::Infeasible,
            iterations: solver.iterations,
            active: vec![],
        }),
        other => Ok(LpResult {
            objective: f64::NAN,
            solution: vec![],
            status: other,
            iterations: solver.iterations,
            active: vec![],
        }),
    }
}

struct DualSimplex<'a> {
    lp: &'a LinearProgram,
    rows: usize,
    cols: usize,
    /// Row sign flips making the equality right-hand side nonnegative.
    signs: Vec<f64>,
    basis: Vec<usize>,
    inverse: Matrix,
    values: Vec<f64>,
    iterations: usize,
    multipliers: Vec<f64>,
}

impl<'a> DualSimplex<'a> {
    fn new(lp: &'a LinearProgram) -> Self {
        let rows = lp.objective.len();
        let cols = lp.constraints.len();
        DualSimplex {
            lp,
            rows,
            cols,
            signs: vec![1.0; rows],
            basis: (cols..cols + rows).collect(),
            inverse: Matrix::identity(rows),
            values: vec![0.0; rows],
            iterations: 0,
            multipliers: vec![0.0; rows],
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.cols
    }

    /// Column j of the sign-adjusted equality system.
    fn column(&self, j: usize) -> Vec<f64> {
        if self.is_artificial(j) {
            let mut e = vec![0.0; self.rows];
            e[j - self.cols] = 1.0;
            e
        } else {
            self.lp.constraints[j]
                .coeffs
                .iter()
                .zip(&self.signs)
                .map(|(a, s)| a * s)
                .collect()
        }
    }

    fn run(&mut self, c: &[f64]) -> Result<LpStatus> {
        self.signs = c
            .iter()
            .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let rhs: Vec<f64> = c.iter().zip(&self.signs).map(|(v, s)| v * s).collect();
        self.basis = (self.cols..self.cols + self.rows).collect();
        self.inverse = Matrix::identity(self.rows);
        self.values = rhs.clone();

        // phase 1: minimize the sum of artificials
        let status = self.iterate(&rhs, true)?;
        if status == LpStatus::IterationLimit {
            return Ok(status);
        }
        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.values)
            .filter(|(&j, _)| self.is_artificial(j))
            .map(|(_, v)| v.max(0.0))
            .sum();
        let scale = rhs.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if infeasibility > 1e-9 * scale {
            return Ok(LpStatus::Infeasible);
        }
        self.drive_out_artificials();
        self.iterate(&rhs, false)
    }

    fn cost(&self, j: usize, phase_one: bool) -> f64 {
        match (phase_one, self.is_artificial(j)) {
            (true, true) => 1.0,
            (true, false) => 0.0,
            (false, true) => 0.0,
            (false, false) => self.lp.constraints[j].rhs,
        }
    }

    fn refactor(&mut self, rhs: &[f64]) -> Result<()> {
        let cols: Vec<Vec<f64>> = self.basis.iter().map(|&j| self.column(j)).collect();
        let b = Matrix::from_fn(self.rows, self.rows, |i, k| cols[k][i]);
        let lu = Lu::new(&b).map_err(|_| Error::numeric("simplex basis became singular"))?;
        self.inverse = lu.inverse();
        self.values = lu.solve(rhs);
        Ok(())
    }

    fn update_multipliers(&mut self, phase_one: bool) {
        let cb: Vec<f64> = self
            .basis
            .iter()
            .map(|&j| self.cost(j, phase_one))
            .collect();
        for i in 0..self.rows {
            self.multipliers[i] = (0..self.rows).map(|r| cb[r] * self.inverse[(r, i)]).sum();
        }
    }

    fn iterate(&mut self, rhs: &[f64], phase_one: bool) -> Result<LpStatus> {
        let mut in_basis = vec![false; self.cols + self.rows];
        for &j in &self.basis {
            in_basis[j] = true;
        }
        let mut degenerate_run = 0usize;
        let mut since_refactor = 0usize;
        loop {
            if self.iterations >= LP_ITERATION_LIMIT {
                return Ok(LpStatus::IterationLimit);
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor(rhs)?;
                since_refactor = 0;
            }
            self.update_multipliers(phase_one);
            let bland = degenerate_run >= DEGENERATE_RUN;
            // price: signed multipliers turn each column into a plain dot product
            let weighted: Vec<f64> = self
                .multipliers
                .iter()
                .zip(&self.signs)
                .map(|(p, s)| p * s)
                .collect();
            let limit = if phase_one {
                self.cols + self.rows
            } else {
                self.cols
            };
            let mut entering = None;
            let mut best = -COST_TOL;
            for j in 0..limit {
                if in_basis[j] {
                    continue;
                }
                let d = if self.is_artificial(j) {
                    self.cost(j, phase_one) - self.multipliers[j - self.cols]
                } else {
                    let con = &self.lp.constraints[j];
                    let scale = 1.0 + con.rhs.abs();
                    let d = self.cost(j, phase_one) - dot(&con.coeffs, &weighted);
                    if d >= -COST_TOL * scale {
                        continue;
                    }
                    d
                };
                if d < best {
                    best = d;
                    entering = Some(j);
                    if bland {
                        break;
                    }
                }
            }
            let Some(q) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let col = self.column(q);
            let dir = self.inverse.mul_vec(&col);
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..self.rows {
                let w = dir[r];
                let basic = self.basis[r];
                let ratio = if !phase_one && self.is_artificial(basic) {
                    if w.abs() > PIVOT_TOL {
                        0.0
                    } else {
                        continue;
                    }
                } else if w > PIVOT_TOL {
                    self.values[r].max(0.0) / w
                } else {
                    continue;
                };
                let take = match leave {
                    None => true,
                    Some(l) => {
                        if ratio < best_ratio - 1e-12 * best_ratio.max(1.0) {
                            true
                        } else if ratio <= best_ratio + 1e-12 * best_ratio.max(1.0) {
                            if bland {
                                basic < self.basis[l]
                            } else {
                                w.abs() > dir[l].abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if take {
                    leave = Some(r);
                    best_ratio = best_ratio.min(ratio);
                }
            }
            let Some(r) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            let theta = if !phase_one && self.is_artificial(self.basis[r]) {
                0.0
            } else {
                self.values[r].max(0.0) / dir[r]
            };
            degenerate_run = if theta <= 1e-14 {
                degenerate_run + 1
            } else {
                0
            };
            self.pivot(r, q, &dir, theta);
            in_basis[q] = true;
            self.iterations += 1;
            since_refactor += 1;
        }
    }

    fn pivot(&mut self, r: usize, q: usize, dir: &[f64], theta: f64) {
        for i in 0..self.rows {
            if i != r {
                self.values[i] -= theta * dir[i];
            }
        }
        self.values[r] = theta;
        let pr = dir[r];
        {
            let row = self.inverse.row_mut(r);
            row.iter_mut().for_each(|v| *v /= pr);
        }
        let pivot_row = self.inverse.row(r).to_vec();
        for i in 0..self.rows {
            if i == r || dir[i] == 0.0 {
                continue;
            }
            let f = dir[i];
            let row = self.inverse.row_mut(i);
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
        }
        self.basis[r] = q;
    }

    /// Replaces zero-level artificials by structural columns where possible.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let inv_row = self.inverse.row(r).to_vec();
            let in_basis: Vec<bool> = {
                let mut v = vec![false; self.cols];
                for &j in &self.basis {
                    if j < self.cols {
                        v[j] = true;
                    }
                }
                v
            };
            let candidate = (0..self.cols)
                .filter(|&j| !in_basis[j])
                .map(|j| (j, dot(&inv_row, &self.column(j))))
                .filter(|(_, w)| w.abs() > 1e-8)
                .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
            if let Some((j, _)) = candidate {
                let dir = self.inverse.mul_vec(&self.column(j));
                self.pivot(r, j, &dir, 0.0);
            }
        }
    }

    fn primal_point(&mut self) -> Vec<f64> {
        self.update_multipliers(false);
        self.multipliers
            .iter()
            .zip(&self.signs)
            .map(|(p, s)| p * s)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(objective: Vec<f64>, rows: &[(&[f64], f64)]) -> LinearProgram {
        LinearProgram {
            objective,
            constraints: rows
                .iter()
                .map(|(a, b)| Constraint {
                    coeffs: a.to_vec(),
                    rhs: *b,
                })
                .collect(),
        }
    }

    #[test]
    fn one_variable() {
        let r = simplex_solve(&lp(vec![1.0], &[(&[1.0], 1.0), (&[-1.0], 1.0)])).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vertex_solution() {
        let r = simplex_solve(&lp(
            vec![1.0, 1.0],
            &[
                (&[1.0, 0.0], 1.0),
                (&[0.0, 1.0], 1.0),
                (&[1.0, 1.0], 1.5),
                (&[-1.0, 0.0], 10.0),
                (&[0.0, -1.0], 10.0),
            ],
        ))
        .unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 1.5).abs() < 1e-12);
    }

    #[test]
    fn unbounded_and_infeasible() {
        let r = simplex_solve(&lp(vec![1.0], &[(&[-1.0], 1.0)])).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        let r = simplex_solve(&lp(vec![1.0], &[(&[1.0], -1.0), (&[-1.0], -1.0)])).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn negative_objective_entries() {
        // max -x - 2y on the box [-1,2]^2 -> x = y = -1
        let r = simplex_solve(&lp(
            vec![-1.0, -2.0],
            &[
                (&[1.0, 0.0], 2.0),
                (&[-1.0, 0.0], 1.0),
                (&[0.0, 1.0], 2.0),
                (&[0.0, -1.0], 1.0),
            ],
        ))
        .unwrap();
        assert!((r.objective - 3.0).abs() < 1e-12);
        assert!((r.solution[0] + 1.0).abs() < 1e-12 && (r.solution[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_dual_cubic() {
        // max P'(0) over deg <= 3 with |P| <= 1 on a grid; T_3'(0) = -3
        let grid: Vec<f64> = (0..2001).map(|i| -1.0 + 2.0 * i as f64 / 2000.0).collect();
        let mut rows = Vec::new();
        for &x in &grid {
            let t = crate::numerics::chebyshev::values(3, x);
            rows.push(Constraint {
                coeffs: t.clone(),
                rhs: 1.0,
            });
            rows.push(Constraint {
                coeffs: t.iter().map(|v| -v).collect(),
                rhs: 1.0,
            });
        }
        let obj = crate::numerics::chebyshev::derivatives(3, 1, 0.0);
        let r = simplex_solve(&LinearProgram {
            objective: obj,
            constraints: rows,
        })
        .unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 3.0).abs() < 1e-9);
    }
}
