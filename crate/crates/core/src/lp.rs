//! Dense two-phase simplex over exact rationals.
//!
//! Solves `maximize cᵀx subject to A x = b, x ≥ 0`. Bland's rule is used for
//! both entering and leaving variables, so the method terminates on
//! degenerate problems. Problem sizes in this crate are tiny (a few dozen
//! columns), so a dense tableau is adequate.

use rug::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col] == 0 {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if *pv != 0 {
                    *v -= Rational::from(&factor * pv);
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations for the objective `cost` (length `cols`),
    /// restricted to columns for which `allowed` is true.
    fn optimize(&mut self, cost: &[Rational], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // reduced cost d_j = c_j - c_B · column_j
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if self.t[i][j] != 0 && cost[bi] != 0 {
                        d -= Rational::from(&cost[bi] * &self.t[i][j]);
                    }
                }
                if d > 0 {
                    entering = Some(j);
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let rhs = self.cols;
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if self.t[i][col] > 0 {
                    let ratio = Rational::from(&self.t[i][rhs] / &self.t[i][col]);
                    let better = match &leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }
}

/// Maximizes `c·x` subject to `a x = b`, `x ≥ 0`.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let rows = a.len();
    let n = c.len();
    assert_eq!(b.len(), rows, "rhs length must match row count");
    assert!(a.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // Phase 1: artificial variables n..n+rows.
    let cols = n + rows;
    let mut t = Vec::with_capacity(rows);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let negate = *bi < 0;
        let mut r: Vec<Rational> = Vec::with_capacity(cols + 1);
        for v in row {
            r.push(if negate {
                Rational::from(-v)
            } else {
                v.clone()
            });
        }
        for k in 0..rows {
            r.push(Rational::from(u32::from(k == i)));
        }
        r.push(if negate {
            Rational::from(-bi)
        } else {
            bi.clone()
        });
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..cols).collect(),
        cols,
    };
    let mut phase1_cost = vec![Rational::new(); cols];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = Rational::from(-1);
    }
    tab.optimize(&phase1_cost, &|_| true);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj >= n)
        .map(|(i, _)| tab.t[i][cols].clone())
        .sum();
    if infeasibility != 0 {
        return LpOutcome::Infeasible;
    }

    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| tab.t[i][j] != 0) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase 2 on original columns only.
    let mut cost = c.to_vec();
    cost.resize(cols, Rational::new());
    if !tab.optimize(&cost, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rational::new(); n];
    for (i, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            solution[bj] = tab.t[i][cols].clone();
        }
    }
    let value = solution
        .iter()
        .zip(c)
        .map(|(x, ci)| Rational::from(x * ci))
        .sum();
    LpOutcome::Optimal { value, solution }
}

/// Feasibility of `a x = b, x ≥ 0`.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    !matches!(
        maximize(a, b, &vec![Rational::new(); n]),
        LpOutcome::Infeasible
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn small_optimum() {
        // max x + y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let b = vec![q(4), q(6)];
        let c = vec![q(1), q(1), q(0), q(0)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, Rational::from((14, 5)));
                assert_eq!(solution[0], Rational::from((8, 5)));
                assert_eq!(solution[1], Rational::from((6, 5)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y >= 0
        assert_eq!(
            maximize(&[vec![q(1), q(1)]], &[q(-1)], &[q(0), q(0)]),
            LpOutcome::Infeasible
        );
        // max x s.t. x - y = 0
        assert_eq!(
            maximize(&[vec![q(1), q(-1)]], &[q(0)], &[q(1), q(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let b = vec![q(1), q(2)];
        match maximize(&a, &b, &[q(1), q(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(feasible(&a, &b));
    }
}
