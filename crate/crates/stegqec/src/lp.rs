//! Dense two-phase simplex for equality-constrained maximization with
//! nonnegative variables: maximize c·x subject to A x = b, x >= 0.
//!
//! Bland's rule breaks degenerate ties by lowest variable index, which
//! prevents cycling and makes solutions deterministic for golden tests.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const PIVOT_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-8;

/// An equality-form linear program.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearProgram {
    /// Objective coefficients, one per variable.
    pub objective: Vec<f64>,
    /// Equality-constraint matrix, row major.
    pub eq_matrix: Vec<Vec<f64>>,
    /// Right-hand sides, one per row.
    pub eq_rhs: Vec<f64>,
    /// Variable names for reporting.
    pub names: Vec<String>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<f64>,
        eq_matrix: Vec<Vec<f64>>,
        eq_rhs: Vec<f64>,
        names: Vec<String>,
    ) -> Result<Self> {
        let n = objective.len();
        if names.len() != n {
            return Err(Error::Dimension("one name per variable required".into()));
        }
        if eq_matrix.len() != eq_rhs.len() {
            return Err(Error::Dimension("one rhs per constraint row".into()));
        }
        if eq_matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("constraint row width mismatch".into()));
        }
        Ok(LinearProgram {
            objective,
            eq_matrix,
            eq_rhs,
            names,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.eq_rhs.len()
    }

    /// JSON serialization for debugging and fixtures.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("LP serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            index: 0,
            message: format!("bad LP JSON: {e}"),
        })
    }

    /// Residual ‖Ax−b‖∞ of a candidate solution.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.eq_matrix
            .iter()
            .zip(&self.eq_rhs)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver outcome; `x` and `objective_value` are meaningful only when
/// `status` is `Optimal`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective_value: f64,
}

struct Tableau {
    /// rows x (vars + 1); last column is the rhs.
    data: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_vars: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.data[r][self.n_vars]
    }

    /// One simplex phase: maximize `obj` (length n_vars) over the current
    /// basic feasible tableau using Bland's rule. Returns false when the
    /// objective is unbounded.
    fn run(&mut self, obj: &[f64]) -> bool {
        loop {
            // Reduced costs: c_j - c_B Binv A_j; with the tableau kept in
            // canonical form this is obj_j minus the basic-cost combination.
            let mut reduced = obj.to_vec();
            for (r, &bv) in self.basis.iter().enumerate() {
                let cb = obj[bv];
                if cb != 0.0 {
                    for j in 0..self.n_vars {
                        reduced[j] -= cb * self.data[r][j];
                    }
                }
            }
            // Bland: first improving column.
            let Some(enter) = (0..self.n_vars).find(|&j| reduced[j] > PIVOT_TOL) else {
                return true;
            };
            // Ratio test; Bland tie break by lowest basis variable index.
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.data.len() {
                let a = self.data[r][enter];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r) / a;
                    match leave {
                        None => leave = Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL && self.basis[r] < self.basis[lr])
                            {
                                leave = Some((r, ratio));
                            }
                        }
                    }
                }
            }
            let Some((pivot_row, _)) = leave else {
                return false; // unbounded direction
            };
            self.pivot(pivot_row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.data[row][col];
        for v in self.data[row].iter_mut() {
            *v /= p;
        }
        for r in 0..self.data.len() {
            if r != row {
                let f = self.data[r][col];
                if f != 0.0 {
                    let src = self.data[row].clone();
                    for (v, s) in self.data[r].iter_mut().zip(&src) {
                        *v -= f * s;
                    }
                }
            }
        }
        self.basis[row] = col;
    }

    fn extract(&self, n_original: usize) -> Vec<f64> {
        let mut x = vec![0.0; n_original];
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < n_original {
                x[bv] = self.rhs(r);
            }
        }
        x
    }
}

/// Two-phase simplex maximization.
pub fn solve_max(lp: &LinearProgram) -> Result<LpSolution> {
    if lp
        .objective
        .iter()
        .chain(lp.eq_rhs.iter())
        .chain(lp.eq_matrix.iter().flatten())
        .any(|v| !v.is_finite())
    {
        return Err(Error::Domain("non-finite coefficient in program".into()));
    }
    let n = lp.n_vars();
    let m = lp.n_rows();

    // Phase 1: artificial variables, rhs made nonnegative.
    let total = n + m;
    let mut data = Vec::with_capacity(m);
    for (i, row) in lp.eq_matrix.iter().enumerate() {
        let mut r: Vec<f64> = if lp.eq_rhs[i] < 0.0 {
            row.iter().map(|v| -v).collect()
        } else {
            row.clone()
        };
        r.resize(total + 1, 0.0);
        r[n + i] = 1.0;
        r[total] = lp.eq_rhs[i].abs();
        data.push(r);
    }
    let mut tableau = Tableau {
        data,
        basis: (n..n + m).collect(),
        n_vars: total,
    };
    let mut phase1_obj = vec![0.0; total];
    for c in phase1_obj.iter_mut().skip(n) {
        *c = -1.0;
    }
    tableau.run(&phase1_obj);
    let infeasibility: f64 = tableau
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bv)| bv >= n)
        .map(|(r, _)| tableau.rhs(r))
        .sum();
    if infeasibility > FEAS_TOL {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            x: vec![],
            objective_value: f64::NEG_INFINITY,
        });
    }
    // Drive any residual artificial basics out of the basis (they sit at
    // zero); rows with no eligible pivot are redundant constraints and are
    // dropped before phase 2, along with the artificial columns.
    for r in 0..m {
        if tableau.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tableau.data[r][j].abs() > PIVOT_TOL) {
                tableau.pivot(r, j);
            }
        }
    }
    let mut data = Vec::new();
    let mut basis = Vec::new();
    for r in 0..m {
        if tableau.basis[r] < n {
            let mut row: Vec<f64> = tableau.data[r][..n].to_vec();
            row.push(tableau.rhs(r));
            data.push(row);
            basis.push(tableau.basis[r]);
        }
    }
    let mut tableau = Tableau {
        data,
        basis,
        n_vars: n,
    };
    let bounded = tableau.run(&lp.objective);
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![],
            objective_value: f64::INFINITY,
        });
    }
    let x = tableau.extract(n);
    let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
    })
}

/// Brute-force oracle: enumerate every basis (column subset of size equal
/// to the row rank), solve, keep feasible vertices, and return the best
/// objective. Exponential; for test-sized programs only.
pub fn brute_force_vertex_max(lp: &LinearProgram) -> Option<f64> {
    let n = lp.n_vars();
    let rank = numeric_rank(&lp.eq_matrix);
    let mut best: Option<f64> = None;
    for subset in crate::code::combinations(n, rank.min(n)) {
        if let Some(x) = solve_support(lp, &subset) {
            if x.iter().all(|&v| v >= -1e-9) && lp.residual(&x) <= FEAS_TOL {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.max(obj)));
            }
        }
    }
    best
}

fn numeric_rank(rows: &[Vec<f64>]) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) =
            (rank..m).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
        else {
            break;
        };
        if a[pr][col].abs() < 1e-9 {
            continue;
        }
        a.swap(rank, pr);
        let p = a[rank][col];
        for r in rank + 1..m {
            let f = a[r][col] / p;
            if f != 0.0 {
                let src = a[rank].clone();
                for (v, s) in a[r].iter_mut().zip(&src) {
                    *v -= f * s;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Solve A_S x_S = b by Gaussian elimination with partial pivoting; returns
/// the full-length solution or None when singular/inconsistent.
fn solve_support(lp: &LinearProgram, support: &[usize]) -> Option<Vec<f64>> {
    let m = lp.n_rows();
    let k = support.len();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|r| {
            let mut row: Vec<f64> = support.iter().map(|&j| lp.eq_matrix[r][j]).collect();
            row.push(lp.eq_rhs[r]);
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..k {
        let Some(pr) =
            (row..m).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
        else {
            break;
        };
        if a[pr][col].abs() < 1e-12 {
            continue;
        }
        a.swap(row, pr);
        let p = a[row][col];
        for v in a[row].iter_mut() {
            *v /= p;
        }
        for r in 0..m {
            if r != row {
                let f = a[r][col];
                if f != 0.0 {
                    let src = a[row].clone();
                    for (v, s) in a[r].iter_mut().zip(&src) {
                        *v -= f * s;
                    }
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    // Inconsistent?
    for r in row..m {
        if a[r][k].abs() > 1e-9 && a[r][..k].iter().all(|v| v.abs() < 1e-12) {
            return None;
        }
    }
    // Unique solution requires every support column pivotal.
    if pivot_cols.len() < k {
        return None;
    }
    let mut x = vec![0.0; lp.n_vars()];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[support[col]] = a[r][k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn single_variable() {
        let lp = LinearProgram::new(vec![1.0], vec![vec![1.0]], vec![0.3], names(1)).unwrap();
        let sol = solve_max(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 0.3).abs() < 1e-12);
    }

    #[test]
    fn two_variable_line() {
        let lp =
            LinearProgram::new(vec![1.0, 1.0], vec![vec![1.0, 1.0]], vec![1.0], names(2)).unwrap();
        let sol = solve_max(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_detected() {
        // x + y = -1 with x, y >= 0 has no solution.
        let lp =
            LinearProgram::new(vec![1.0, 0.0], vec![vec![1.0, 1.0]], vec![-1.0], names(2)).unwrap();
        assert_eq!(solve_max(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // maximize x - y with x - y = free direction: x - y + 0z = 0 allows
        // growing x and... use: x - y = 1, maximize x.
        let lp =
            LinearProgram::new(vec![1.0, 0.0], vec![vec![1.0, -1.0]], vec![1.0], names(2)).unwrap();
        assert_eq!(solve_max(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn rejects_non_finite_input() {
        let lp = LinearProgram::new(vec![f64::NAN], vec![vec![1.0]], vec![1.0], names(1)).unwrap();
        assert!(solve_max(&lp).is_err());
    }

    #[test]
    fn json_round_trip() {
        let lp =
            LinearProgram::new(vec![1.0, 2.0], vec![vec![1.0, 1.0]], vec![1.0], names(2)).unwrap();
        let back = LinearProgram::from_json(&lp.to_json()).unwrap();
        assert_eq!(back.objective, lp.objective);
        assert_eq!(back.names, lp.names);
    }

    /// Bounded random feasible programs: a normalization row keeps the
    /// polytope compact, and b is generated from a feasible point.
    fn random_program(seed: u64) -> LinearProgram {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=8usize);
        let m = rng.random_range(2..=4usize);
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        a.push(vec![1.0; n]);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let b: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&x0).map(|(c, v)| c * v).sum())
            .collect();
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        LinearProgram::new(c, a, b, names(n)).unwrap()
    }

    #[test]
    fn simplex_matches_vertex_enumeration() {
        for seed in 0..100u64 {
            let lp = random_program(seed);
            let sol = solve_max(&lp).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal, "seed {seed}");
            let oracle = brute_force_vertex_max(&lp).expect("feasible by construction");
            assert!(
                (sol.objective_value - oracle).abs() < 1e-8,
                "seed {seed}: simplex {} vs oracle {}",
                sol.objective_value,
                oracle
            );
            // Feasibility certificate, independent of solver internals.
            assert!(lp.residual(&sol.x) <= FEAS_TOL);
            assert!(sol.x.iter().all(|&v| v >= -1e-9));
        }
    }

    #[test]
    fn objective_scaling_preserves_argmax() {
        for seed in 200..220u64 {
            let lp = random_program(seed);
            let sol = solve_max(&lp).unwrap();
            let mut scaled = lp.clone();
            for c in scaled.objective.iter_mut() {
                *c *= 7.5;
            }
            let sol2 = solve_max(&scaled).unwrap();
            assert!((sol2.objective_value - 7.5 * sol.objective_value).abs() < 1e-6);
            for (a, b) in sol.x.iter().zip(&sol2.x) {
                assert!((a - b).abs() < 1e-8, "optimal basis moved under scaling");
            }
        }
    }
}
