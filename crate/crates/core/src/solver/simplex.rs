//! Exact-rational solver for the fractional clique-cover LP.
//!
//! The covering problem (minimize total clique weight so that every vertex
//! collects weight at least 1) is solved through its packing dual
//! (maximize total vertex weight subject to at most 1 per clique), which
//! admits the all-slack starting basis. Pivoting follows Bland's rule, so
//! the simplex cannot cycle. The cover weights are read off the optimal
//! objective row and then re-checked: the solver only returns once it
//! holds a feasible cover and a feasible packing with equal objectives,
//! which certifies optimality of both by weak duality.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::ConfusionGraph;
use crate::solver::cliques::{maximal_cliques, DEFAULT_CLIQUE_BUDGET};
use crate::solver::rational::Rational;

/// Clique weights keyed by the clique's sorted vertex list.
pub type CliqueAssignment = BTreeMap<Vec<u32>, Rational>;

/// A fractional clique-cover instance: a clique list plus one covering
/// constraint per vertex.
#[derive(Clone, Debug)]
pub struct LpProblem {
    num_vertices: usize,
    cliques: Vec<Vec<u32>>,
}

impl LpProblem {
    /// Builds a problem over an explicit clique list, validating that each
    /// listed set really is a clique and that every vertex is covered.
    pub fn new(g: &ConfusionGraph, cliques: Vec<Vec<u32>>) -> Result<Self> {
        let n = g.num_vertices();
        let mut seen = vec![false; n];
        let mut cliques: Vec<Vec<u32>> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cliques.sort();
        cliques.dedup();
        for c in &cliques {
            if c.is_empty() {
                return Err(Error::Parameter("empty clique".into()));
            }
            if c.iter().any(|&v| v as usize >= n) {
                return Err(Error::Parameter(format!("clique {c:?} out of range")));
            }
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("repeated vertex in {c:?}")));
            }
            if !g.is_clique(c) {
                return Err(Error::Parameter(format!("{c:?} is not a clique")));
            }
            for &v in c {
                seen[v as usize] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Parameter(format!(
                "vertex {v} is not covered by any clique"
            )));
        }
        Ok(LpProblem {
            num_vertices: n,
            cliques,
        })
    }

    /// The standard formulation over the maximal cliques. Restricting to
    /// maximal cliques loses nothing: weight on a clique can always slide
    /// to a maximal superset.
    pub fn maximal(g: &ConfusionGraph) -> Result<Self> {
        let cliques = maximal_cliques(g, DEFAULT_CLIQUE_BUDGET)?;
        LpProblem::new(g, cliques)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn cliques(&self) -> &[Vec<u32>] {
        &self.cliques
    }
}

/// The optimal cover: total weight and per-clique weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub assignment: CliqueAssignment,
}

/// Checks an assignment against the problem in exact arithmetic: weights
/// nonnegative, every vertex covered with total at least 1. Keys that are
/// not cliques of the problem are rejected; cliques without a key count
/// as weight zero.
pub fn verify_feasible(p: &LpProblem, assignment: &CliqueAssignment) -> Result<bool> {
    for key in assignment.keys() {
        if p.cliques.binary_search(key).is_err() {
            return Err(Error::Parameter(format!(
                "assignment key {key:?} is not a clique of the problem"
            )));
        }
    }
    if assignment.values().any(|w| w.is_negative()) {
        return Ok(false);
    }
    let mut coverage = vec![Rational::zero(); p.num_vertices];
    for (clique, weight) in assignment {
        for &v in clique {
            coverage[v as usize] += weight;
        }
    }
    Ok(coverage.iter().all(|c| *c >= Rational::one()))
}

/// Solves the fractional clique-cover LP exactly.
pub fn solve_clique_cover_lp(p: &LpProblem) -> Result<LpSolution> {
    let m = p.cliques.len();
    let n = p.num_vertices;
    if m == 0 {
        return Err(Error::Parameter("problem has no cliques".into()));
    }

    // Dual tableau: one row per clique, columns = vertex vars, slacks, rhs.
    let rhs = n + m;
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, clique) in p.cliques.iter().enumerate() {
        let mut row = vec![Rational::zero(); n + m + 1];
        for &v in clique {
            row[v as usize] = Rational::one();
        }
        row[n + i] = Rational::one();
        row[rhs] = Rational::one();
        rows.push(row);
    }
    // objective row holds z_j - c_j; optimal once all entries >= 0
    let mut obj = vec![Rational::zero(); n + m + 1];
    for entry in obj.iter_mut().take(n) {
        *entry = -Rational::one();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Bland: entering = smallest improving column
    while let Some(entering) = (0..n + m).find(|&j| obj[j].is_negative()) {
        // leaving = min ratio, ties to the smallest basic variable
        let mut leaving: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[entering].is_positive() {
                let ratio = &row[rhs] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && basis[i] < basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            // cannot happen: every vertex variable lies in some clique
            // constraint, so the packing objective is bounded
            return Err(Error::Invariant("unbounded packing dual".into()));
        };
        pivot(&mut rows, &mut obj, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    // cover weights are the slack columns' reduced costs
    let assignment: CliqueAssignment = p
        .cliques
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), obj[n + i].clone()))
        .collect();
    let cover_value: Rational = assignment.values().sum();

    // packing solution, for the optimality certificate
    let mut packing = vec![Rational::zero(); n];
    for (i, row) in rows.iter().enumerate() {
        if basis[i] < n {
            packing[basis[i]] = row[rhs].clone();
        }
    }
    certify(p, &assignment, &cover_value, &packing, &obj[rhs])?;

    Ok(LpSolution {
        value: cover_value,
        assignment,
    })
}

fn pivot(rows: &mut [Vec<Rational>], obj: &mut [Rational], r: usize, c: usize) {
    let divisor = rows[r][c].clone();
    for entry in rows[r].iter_mut() {
        *entry /= &divisor;
    }
    let pivot_row = rows[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let factor = row[c].clone();
        for (entry, p) in row.iter_mut().zip(&pivot_row) {
            *entry -= &factor * p;
        }
    }
    if !obj[c].is_zero() {
        let factor = obj[c].clone();
        for (entry, p) in obj.iter_mut().zip(&pivot_row) {
            *entry -= &factor * p;
        }
    }
}

/// Weak-duality certificate: a feasible cover and a feasible packing with
/// equal objectives pin the optimum exactly.
fn certify(
    p: &LpProblem,
    assignment: &CliqueAssignment,
    cover_value: &Rational,
    packing: &[Rational],
    tableau_value: &Rational,
) -> Result<()> {
    if !verify_feasible(p, assignment)? {
        return Err(Error::Invariant(
            "simplex produced an infeasible cover".into(),
        ));
    }
    if packing.iter().any(|y| y.is_negative()) {
        return Err(Error::Invariant(
            "simplex produced a negative packing weight".into(),
        ));
    }
    for clique in &p.cliques {
        let total: Rational = clique.iter().map(|&v| packing[v as usize].clone()).sum();
        if total > Rational::one() {
            return Err(Error::Invariant(
                "simplex produced an overfull packing clique".into(),
            ));
        }
    }
    let packing_value: Rational = packing.iter().sum();
    if packing_value != *cover_value || packing_value != *tableau_value {
        return Err(Error::Invariant(format!(
            "optimality certificate failed: cover {cover_value} vs packing {packing_value}"
        )));
    }
    Ok(())
}
