use rug::{Integer, Rational};
use serde::Serialize;

use super::{LaurentError, LaurentPolynomial};
use crate::lp::{self, LpOutcome};

/// Summary of the Newton polytope `conv(supp f)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolytopeInfo {
    /// Extreme points of the convex hull, in lexicographic order.
    pub vertices: Vec<Vec<i64>>,
    /// Whether the origin lies in the topological interior of the hull.
    pub contains_origin_interior: bool,
    /// Rank of the sublattice of `ℤ^m` generated by the support.
    pub support_lattice_rank: usize,
}

/// Rank of the integer lattice spanned by `vectors`, by gcd row reduction.
pub fn lattice_rank(vectors: &[Vec<i64>]) -> usize {
    let Some(cols) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut rows: Vec<Vec<Integer>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Integer::from(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        loop {
            // smallest nonzero |entry| among the unreduced rows
            let pivot = (rank..rows.len())
                .filter(|&i| rows[i][col] != 0)
                .min_by(|&a, &b| rows[a][col].cmp_abs(&rows[b][col]));
            let Some(p) = pivot else { break };
            rows.swap(rank, p);
            let mut done = true;
            for i in rank + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = rows[i][col]
                        .clone()
                        .div_rem_floor(rows[rank][col].clone())
                        .0;
                    let pivot_row = rows[rank].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= Integer::from(&q * y);
                    }
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                rank += 1;
                break;
            }
        }
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn to_rationals(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

/// Whether the origin is a strictly positive convex combination of all
/// support points, i.e. lies in the relative interior of their hull.
///
/// LP: `λ_s = μ_s + t`, maximize `t` subject to `Σ λ_s s = 0`, `Σ λ_s = 1`.
fn origin_in_relative_interior(support: &[Vec<i64>]) -> bool {
    let m = support[0].len();
    let k = support.len();
    let mut a = vec![vec![Rational::new(); k + 1]; m + 1];
    for (j, s) in support.iter().enumerate() {
        for i in 0..m {
            a[i][j] = Rational::from(s[i]);
            a[i][k] += s[i];
        }
        a[m][j] = Rational::from(1);
    }
    a[m][k] = Rational::from(k as u64);
    let mut b = vec![Rational::new(); m + 1];
    b[m] = Rational::from(1);
    let mut c = vec![Rational::new(); k + 1];
    c[k] = Rational::from(1);
    match lp::maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => value > 0,
        LpOutcome::Infeasible | LpOutcome::Unbounded => false,
    }
}

fn is_vertex(support: &[Vec<i64>], idx: usize) -> bool {
    let others: Vec<&Vec<i64>> = support
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != idx)
        .map(|(_, s)| s)
        .collect();
    if others.is_empty() {
        return true;
    }
    let m = support[idx].len();
    let mut a = vec![vec![Rational::new(); others.len()]; m + 1];
    for (j, s) in others.iter().enumerate() {
        for i in 0..m {
            a[i][j] = Rational::from(s[i]);
        }
        a[m][j] = Rational::from(1);
    }
    let mut b = to_rationals(&support[idx]);
    b.push(Rational::from(1));
    !lp::feasible(&a, &b)
}

pub(super) fn newton_info(f: &LaurentPolynomial) -> Result<NewtonPolytopeInfo, LaurentError> {
    if f.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    let support: Vec<Vec<i64>> = f.terms().iter().map(|(e, _)| e.clone()).collect();
    let rank = lattice_rank(&support);
    let relint = origin_in_relative_interior(&support);
    let vertices = (0..support.len())
        .filter(|&i| is_vertex(&support, i))
        .map(|i| support[i].clone())
        .collect();
    Ok(NewtonPolytopeInfo {
        vertices,
        // the origin in the relative interior makes aff(supp) = span(supp),
        // so full rank upgrades relative interior to interior
        contains_origin_interior: relint && rank == f.num_vars(),
        support_lattice_rank: rank,
    })
}
