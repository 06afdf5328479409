//! Exact discrete optimal transport between two equal-size point sets under
//! uniform measures.
//!
//! With equal cardinalities and uniform weights the Monge problem reduces to
//! the linear assignment problem, which is solved exactly with a shortest
//! augmenting path method in O(n^3). Among equally cheap assignments the
//! lexicographically smallest permutation is returned, so results are
//! deterministic even on tied inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{Permutation, Point2, PointSet};

/// A square matrix of non-negative, finite transport costs.
/// `entry(i, j)` is the cost of sending source point `i` to target point `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    n: usize,
    entries: Vec<f64>, // row-major, n * n
}

impl CostMatrix {
    /// Builds an `n`-by-`n` cost matrix from row-major `entries`.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("cost matrix must be at least 1x1"));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidInput("cost matrix entries must be n*n"));
        }
        if entries.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidInput(
                "cost matrix entries must be finite and non-negative",
            ));
        }
        Ok(Self { n, entries })
    }

    /// Builds the matrix by evaluating `f(i, j)` for every cell.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// An optimal assignment: source `i` is transported to target
/// `assignment.apply(i)`, at total cost `total_cost`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub assignment: Permutation,
    pub total_cost: f64,
}

/// The p-norm of the displacement `to - from`; `p` may be `f64::INFINITY`
/// for the max norm.
fn displacement_norm(from: Point2, to: Point2, p: f64) -> f64 {
    let dx = (to.x - from.x).abs();
    let dy = (to.y - from.y).abs();
    if p == 1.0 {
        dx + dy
    } else if p == 2.0 {
        libm::sqrt(dx * dx + dy * dy)
    } else if p.is_infinite() {
        dx.max(dy)
    } else {
        // Factor out the largest component so powf stays well-scaled.
        let m = dx.max(dy);
        if m == 0.0 {
            0.0
        } else {
            m * libm::pow(libm::pow(dx / m, p) + libm::pow(dy / m, p), 1.0 / p)
        }
    }
}

/// Pairwise p-norm costs between two equal-size point sets.
///
/// Entry `(i, j)` is the p-norm of `target[j] - source[i]` (the norm itself,
/// not its p-th power). Accepts any `p >= 1`, including `f64::INFINITY`.
pub fn cost_matrix(source: &PointSet, target: &PointSet, p: f64) -> Result<CostMatrix> {
    if source.len() != target.len() {
        return Err(Error::SizeMismatch {
            left: source.len(),
            right: target.len(),
        });
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput("norm order must satisfy p >= 1"));
    }
    CostMatrix::from_fn(source.len(), |i, j| {
        displacement_norm(source[i], target[j], p)
    })
}

/// Solves the linear assignment problem exactly.
///
/// Returns the permutation minimizing the total selected cost; when several
/// permutations are optimal, the lexicographically smallest one is chosen.
pub fn solve_assignment(cost: &CostMatrix) -> TransportPlan {
    let n = cost.n();
    let (col_to_row, row_pot, col_pot) = shortest_augmenting_path(cost);

    let mut row_to_col = vec![0usize; n];
    for (j, &i) in col_to_row.iter().enumerate() {
        row_to_col[i] = j;
    }

    let assignment = lexicographic_refine(cost, row_to_col, &row_pot, &col_pot);
    let total_cost = plan_cost(cost, &assignment);
    TransportPlan {
        assignment: Permutation::new(assignment).expect("solver yields a bijection"),
        total_cost,
    }
}

/// Optimal transport between equal-size sets under uniform measures with a
/// p-norm ground cost: builds the cost matrix and solves the assignment.
pub fn optimal_transport(source: &PointSet, target: &PointSet, p: f64) -> Result<TransportPlan> {
    let cost = cost_matrix(source, target, p)?;
    Ok(solve_assignment(&cost))
}

fn plan_cost(cost: &CostMatrix, assignment: &[usize]) -> f64 {
    assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost.entry(i, j))
        .sum()
}

/// Jonker-Volgenant style shortest augmenting path solver with dual
/// potentials. Returns (column -> row matching, row potentials, column
/// potentials) with `cost - u - v >= 0` and equality on matched edges.
fn shortest_augmenting_path(cost: &CostMatrix) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = cost.n();
    const NONE: usize = usize::MAX;

    let mut u = vec![0.0f64; n]; // row potentials
    let mut v = vec![0.0f64; n + 1]; // column potentials; index n is the virtual root
    let mut col_to_row = vec![NONE; n + 1];
    let mut way = vec![n; n + 1]; // predecessor column on the alternating tree

    for i in 0..n {
        col_to_row[n] = i;
        let mut j0 = n;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];

        loop {
            used[j0] = true;
            let i0 = col_to_row[j0];
            let row = cost.row(i0);
            let u0 = u[i0];
            let mut delta = f64::INFINITY;
            let mut j1 = n;
            for j in 0..n {
                if !used[j] {
                    let slack = row[j] - u0 - v[j];
                    if slack < min_slack[j] {
                        min_slack[j] = slack;
                        way[j] = j0;
                    }
                    if min_slack[j] < delta {
                        delta = min_slack[j];
                        j1 = j;
                    }
                }
            }
            debug_assert!(delta.is_finite(), "augmenting path search stalled");
            for j in 0..=n {
                if used[j] {
                    u[col_to_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if col_to_row[j0] == NONE {
                break;
            }
        }

        // Augment: walk the alternating tree back to the virtual root.
        loop {
            let j1 = way[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }

    col_to_row.truncate(n);
    v.truncate(n);
    // Sharpen row potentials so matched edges are tight to the last bit.
    for (j, &i) in col_to_row.iter().enumerate() {
        u[i] = cost.entry(i, j) - v[j];
    }
    (col_to_row, u, v)
}

/// Replaces an optimal assignment by the lexicographically smallest one of
/// equal cost.
///
/// Every optimal assignment uses only edges with zero reduced cost relative
/// to one optimal dual (complementary slackness), so the search space is the
/// bipartite graph of tight edges. Rows are fixed in ascending order to the
/// smallest tight column that still admits a perfect matching on the rest.
fn lexicographic_refine(
    cost: &CostMatrix,
    initial: Vec<usize>,
    row_pot: &[f64],
    col_pot: &[f64],
) -> Vec<usize> {
    let n = cost.n();
    let scale = cost
        .entries
        .iter()
        .fold(1.0f64, |m, &c| if c > m { c } else { m });
    let eps = 1e-12 * scale;

    // Tight columns per row, ascending; the current matching is tight by
    // construction and is force-included against rounding.
    let mut tight: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut extra_edges = 0usize;
    for i in 0..n {
        let row = cost.row(i);
        let mut cols: Vec<usize> = (0..n)
            .filter(|&j| j == initial[i] || row[j] - row_pot[i] - col_pot[j] <= eps)
            .collect();
        cols.sort_unstable();
        extra_edges += cols.len() - 1;
        tight.push(cols);
    }
    if extra_edges == 0 {
        // Unique optimum; nothing to refine.
        return initial;
    }

    let mut row_to_col = initial.clone();
    let mut col_to_row = vec![0usize; n];
    for (i, &j) in row_to_col.iter().enumerate() {
        col_to_row[j] = i;
    }

    for i in 0..n {
        let current = row_to_col[i];
        for idx in 0..tight[i].len() {
            let j = tight[i][idx];
            if j >= current {
                break;
            }
            // Column j is matched to some unfixed row r (fixed rows own
            // columns smaller than their candidates were, and are skipped
            // because their columns never re-enter the pool).
            let r = col_to_row[j];
            if r < i {
                continue;
            }
            // Tentatively give column j to row i and try to re-seat row r
            // on the freed column via an alternating path through rows > i.
            let freed = current;
            row_to_col[i] = j;
            col_to_row[j] = i;
            let mut visited = vec![false; n];
            if rematch(&tight, &mut row_to_col, &mut col_to_row, &mut visited, r, freed, i) {
                break;
            }
            // Revert.
            row_to_col[i] = current;
            col_to_row[current] = i;
            row_to_col[r] = j;
            col_to_row[j] = r;
        }
    }

    // Guard against tolerance artifacts: keep the refinement only if it is
    // exactly as cheap as the solver's optimum (up to summation noise).
    let refined_cost = plan_cost(cost, &row_to_col);
    let original_cost = plan_cost(cost, &initial);
    if refined_cost <= original_cost + eps * n as f64 {
        row_to_col
    } else {
        initial
    }
}

/// Kuhn-style augmenting search: seat `row` on `free_col` or displace other
/// unfixed rows (index > `fixed_below`) until someone takes `free_col`.
fn rematch(
    tight: &[Vec<usize>],
    row_to_col: &mut [usize],
    col_to_row: &mut [usize],
    visited: &mut [bool],
    row: usize,
    free_col: usize,
    fixed_below: usize,
) -> bool {
    visited[row] = true;
    for &j in &tight[row] {
        if j == free_col {
            row_to_col[row] = j;
            col_to_row[j] = row;
            return true;
        }
        let owner = col_to_row[j];
        if owner <= fixed_below || visited[owner] || row_to_col[row] == j {
            continue;
        }
        if rematch(tight, row_to_col, col_to_row, visited, owner, free_col, fixed_below) {
            row_to_col[row] = j;
            col_to_row[j] = row;
            return true;
        }
    }
    false
}
