//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex with Bland's anti-cycling rule, solving
//! `min c·x  s.t.  A x = b,  x >= 0` exactly. Every answer comes with a
//! certificate that is re-verified by independent arithmetic before it is
//! returned: a strong-duality pair for optima, a Farkas ray for infeasible
//! problems.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::ratio::Ratio;
use crate::Result;

/// `min objective · x` subject to `constraints · x = rhs`, `x >= 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<Ratio>,
    pub constraints: Vec<Vec<Ratio>>,
    pub rhs: Vec<Ratio>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Outcome of a solve, carrying the exact certificate.
///
/// For `Optimal`: `primal` is feasible, `dual` is feasible for the dual
/// (`Aᵀy <= c`) and both objectives agree exactly. For `Infeasible`: `dual`
/// is a Farkas ray with `Aᵀy <= 0` and `b·y > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub primal: Vec<Ratio>,
    pub dual: Vec<Ratio>,
    pub objective: Ratio,
}

impl LpProblem {
    pub fn new(objective: Vec<Ratio>, constraints: Vec<Vec<Ratio>>, rhs: Vec<Ratio>) -> Self {
        assert_eq!(constraints.len(), rhs.len(), "one rhs entry per row");
        for row in &constraints {
            assert_eq!(row.len(), objective.len(), "row width must match objective");
        }
        LpProblem {
            objective,
            constraints,
            rhs,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    /// Solves the program. Deterministic: Bland's rule picks the smallest
    /// eligible indices, so re-solving the same problem repeats the same
    /// pivot sequence.
    pub fn solve(&self) -> Result<LpOutcome> {
        let outcome = Tableau::new(self).run()?;
        assert!(
            self.verify(&outcome),
            "simplex produced an invalid certificate (solver bug)"
        );
        Ok(outcome)
    }

    /// Re-checks the certificate with plain matrix arithmetic.
    pub fn verify(&self, outcome: &LpOutcome) -> bool {
        match outcome.status {
            LpStatus::Optimal => {
                if outcome.primal.len() != self.num_vars() || outcome.dual.len() != self.num_rows()
                {
                    return false;
                }
                if outcome.primal.iter().any(Signed::is_negative) {
                    return false;
                }
                // A x = b
                for (row, b) in self.constraints.iter().zip(&self.rhs) {
                    let ax = dot(row, &outcome.primal);
                    if &ax != b {
                        return false;
                    }
                }
                // Aᵀ y <= c
                for j in 0..self.num_vars() {
                    let aty: Ratio = self
                        .constraints
                        .iter()
                        .zip(&outcome.dual)
                        .map(|(row, y)| &row[j] * y)
                        .sum();
                    if aty > self.objective[j] {
                        return false;
                    }
                }
                // equal objectives
                let cx = dot(&self.objective, &outcome.primal);
                let by = dot(&self.rhs, &outcome.dual);
                cx == by && cx == outcome.objective
            }
            LpStatus::Infeasible => {
                if outcome.dual.len() != self.num_rows() {
                    return false;
                }
                for j in 0..self.num_vars() {
                    let aty: Ratio = self
                        .constraints
                        .iter()
                        .zip(&outcome.dual)
                        .map(|(row, y)| &row[j] * y)
                        .sum();
                    if aty.is_positive() {
                        return false;
                    }
                }
                dot(&self.rhs, &outcome.dual).is_positive()
            }
        }
    }
}

fn dot(a: &[Ratio], b: &[Ratio]) -> Ratio {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense tableau. Columns: `0..n` original variables, `n..n+m` artificials,
/// last column the rhs. The artificial block doubles as a running copy of
/// `B⁻¹`, which is where the dual vector is read off at the end.
struct Tableau {
    n: usize,
    m: usize,
    rows: Vec<Vec<Ratio>>,
    /// Reduced-cost row for the active objective, plus objective value.
    cost: Vec<Ratio>,
    basis: Vec<usize>,
    /// Sign flips applied to make the rhs nonnegative; needed to report the
    /// dual in terms of the caller's row orientation.
    row_sign: Vec<bool>,
    objective: Vec<Ratio>,
}

impl Tableau {
    fn new(p: &LpProblem) -> Self {
        let n = p.num_vars();
        let m = p.num_rows();
        let mut rows = Vec::with_capacity(m);
        let mut row_sign = vec![false; m];
        for i in 0..m {
            let flip = p.rhs[i].is_negative();
            row_sign[i] = flip;
            let mut row: Vec<Ratio> = Vec::with_capacity(n + m + 1);
            for j in 0..n {
                let a = p.constraints[i][j].clone();
                row.push(if flip { -a } else { a });
            }
            for k in 0..m {
                row.push(if k == i { Ratio::one() } else { Ratio::zero() });
            }
            let b = p.rhs[i].clone();
            row.push(if flip { -b } else { b });
            rows.push(row);
        }
        let basis: Vec<usize> = (n..n + m).collect();
        Tableau {
            n,
            m,
            rows,
            cost: vec![Ratio::zero(); n + m + 1],
            basis,
            row_sign,
            objective: p.objective.clone(),
        }
    }

    /// Recomputes the reduced-cost row `c_j - y·A_j` for the given column
    /// costs, from scratch.
    fn load_costs(&mut self, costs: &[Ratio]) {
        for j in 0..=(self.n + self.m) {
            let mut v = if j < self.n + self.m {
                costs[j].clone()
            } else {
                Ratio::zero()
            };
            for (i, row) in self.rows.iter().enumerate() {
                v -= &costs[self.basis[i]] * &row[j];
            }
            self.cost[j] = v;
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &piv;
        }
        for i in 0..self.m {
            if i != row && !self.rows[i][col].is_zero() {
                let factor = self.rows[i][col].clone();
                for j in 0..=(self.n + self.m) {
                    let delta = &factor * &self.rows[row][j];
                    self.rows[i][j] -= delta;
                }
            }
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for j in 0..=(self.n + self.m) {
                let delta = &factor * &self.rows[row][j];
                self.cost[j] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule until optimal over the allowed columns.
    /// Returns `Err(Unbounded)` if a column can decrease without bound.
    fn iterate(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<()> {
        loop {
            let rhs_col = self.n + self.m;
            let entering = (0..rhs_col).find(|&j| allowed(j) && self.cost[j].is_negative());
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Ratio)> = None;
            for i in 0..self.m {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rows[i][rhs_col] / &self.rows[i][col];
                    let better = match &leave {
                        None => true,
                        Some((best_i, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(row, col);
        }
    }

    fn run(mut self) -> Result<LpOutcome> {
        let n = self.n;
        let m = self.m;
        let rhs_col = n + m;

        // Phase 1: minimize the sum of artificials.
        let mut phase1 = vec![Ratio::zero(); n + m];
        for c in phase1.iter_mut().skip(n) {
            *c = Ratio::one();
        }
        self.load_costs(&phase1);
        self.iterate(&|_| true)?;

        let phase1_value: Ratio = (0..m)
            .filter(|&i| self.basis[i] >= n)
            .map(|i| self.rows[i][rhs_col].clone())
            .sum();
        if phase1_value.is_positive() {
            // Farkas ray from the phase-1 duals: y_i = 1 - cost[n + i],
            // then undo the row flips.
            let dual: Vec<Ratio> = (0..m)
                .map(|i| {
                    let y = Ratio::one() - &self.cost[n + i];
                    if self.row_sign[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                dual,
                objective: Ratio::zero(),
            });
        }

        // Drive leftover artificials out of the basis; rows that cannot
        // pivot are redundant and harmless (the artificial stays at zero and
        // is barred from re-entering).
        for i in 0..m {
            if self.basis[i] >= n {
                if let Some(col) = (0..n).find(|&j| !self.rows[i][j].is_zero()) {
                    self.pivot(i, col);
                }
            }
        }

        // Phase 2 over the original objective. Artificial columns are barred
        // from entering; any still basic sit in all-zero rows (the drive-out
        // loop above would have removed them otherwise), so they stay at
        // zero through every later pivot.
        let mut phase2 = vec![Ratio::zero(); n + m];
        phase2[..n].clone_from_slice(&self.objective);
        self.load_costs(&phase2);
        self.iterate(&|j| j < n)?;

        let mut primal = vec![Ratio::zero(); n];
        for i in 0..m {
            if self.basis[i] < n {
                primal[self.basis[i]] = self.rows[i][rhs_col].clone();
            }
        }
        // Dual: artificial column j tracks B⁻¹ e_j, whose reduced cost is
        // 0 - y_j in phase 2.
        let dual: Vec<Ratio> = (0..m)
            .map(|i| {
                let y = -self.cost[n + i].clone();
                if self.row_sign[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let objective = dot(&self.objective, &primal);
        Ok(LpOutcome {
            status: LpStatus::Optimal,
            primal,
            dual,
            objective,
        })
    }
}

/// Minimizes the ℓ¹-norm `Σ |x_j|` of a free-variable system `A x = b` by
/// splitting every variable into nonnegative parts. Returns the split
/// problem; variable `j` of the original corresponds to columns `2j`
/// (positive part) and `2j+1` (negative part).
pub fn l1_minimization_problem(constraints: &[Vec<Ratio>], rhs: &[Ratio]) -> LpProblem {
    let cols = constraints.first().map_or(0, Vec::len);
    let mut split_rows = Vec::with_capacity(constraints.len());
    for row in constraints {
        let mut split = Vec::with_capacity(2 * cols);
        for a in row {
            split.push(a.clone());
            split.push(-a);
        }
        split_rows.push(split);
    }
    LpProblem::new(vec![Ratio::one(); 2 * cols], split_rows, rhs.to_vec())
}

/// Recombines a split solution into signed values.
pub fn recombine_split(primal: &[Ratio]) -> Vec<Ratio> {
    primal
        .chunks(2)
        .map(|pair| &pair[0] - &pair[1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, ratio};

    #[test]
    fn trivial_feasible() {
        // min x s.t. x = 1, x >= 0
        let p = LpProblem::new(vec![ratio(1)], vec![vec![ratio(1)]], vec![ratio(1)]);
        let out = p.solve().unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.primal, vec![ratio(1)]);
        assert_eq!(out.objective, ratio(1));
        assert!(p.verify(&out));
    }

    #[test]
    fn trivial_infeasible_with_farkas() {
        // min 0 s.t. x = -1, x >= 0
        let p = LpProblem::new(vec![ratio(0)], vec![vec![ratio(1)]], vec![ratio(-1)]);
        let out = p.solve().unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(p.verify(&out));
    }

    #[test]
    fn degenerate_and_rational_data() {
        // min x + y s.t. x + y = 3/2, x - y = 1/2
        let p = LpProblem::new(
            vec![ratio(1), ratio(1)],
            vec![
                vec![ratio(1), ratio(1)],
                vec![ratio(1), ratio(-1)],
            ],
            vec![frac(3, 2), frac(1, 2)],
        );
        let out = p.solve().unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.primal, vec![ratio(1), frac(1, 2)]);
        assert_eq!(out.objective, frac(3, 2));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // x + y = 2 listed twice, minimize x.
        let p = LpProblem::new(
            vec![ratio(1), ratio(0)],
            vec![
                vec![ratio(1), ratio(1)],
                vec![ratio(1), ratio(1)],
            ],
            vec![ratio(2), ratio(2)],
        );
        let out = p.solve().unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective, ratio(0));
    }

    #[test]
    fn unbounded_is_reported() {
        // min -x s.t. x - y = 0: x can grow forever.
        let p = LpProblem::new(
            vec![ratio(-1), ratio(0)],
            vec![vec![ratio(1), ratio(-1)]],
            vec![ratio(0)],
        );
        assert_eq!(p.solve(), Err(Error::Unbounded));
    }

    #[test]
    fn l1_split_round_trip() {
        // min |x| s.t. x = -5 over a free variable.
        let p = l1_minimization_problem(&[vec![ratio(1)]], &[ratio(-5)]);
        let out = p.solve().unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective, ratio(5));
        assert_eq!(recombine_split(&out.primal), vec![ratio(-5)]);
    }

    #[test]
    fn permuted_variables_same_objective() {
        // min 2x + y + 3z s.t. x + y + z = 4, x - z = 1.
        let rows = vec![
            vec![ratio(1), ratio(1), ratio(1)],
            vec![ratio(1), ratio(0), ratio(-1)],
        ];
        let obj = vec![ratio(2), ratio(1), ratio(3)];
        let rhs = vec![ratio(4), ratio(1)];
        let base = LpProblem::new(obj.clone(), rows.clone(), rhs.clone())
            .solve()
            .unwrap();
        // permute columns (2, 0, 1)
        let perm = [2usize, 0, 1];
        let probj: Vec<Ratio> = perm.iter().map(|&j| obj[j].clone()).collect();
        let prrows: Vec<Vec<Ratio>> = rows
            .iter()
            .map(|r| perm.iter().map(|&j| r[j].clone()).collect())
            .collect();
        let permuted = LpProblem::new(probj, prrows, rhs).solve().unwrap();
        assert_eq!(base.objective, permuted.objective);
    }
}
