//! Exact maximum independent set by branch and bound on bitset candidate
//! sets.
//!
//! Branching picks the candidate of highest degree within the remaining
//! candidate subgraph (smallest index on ties); pruning uses a greedy
//! clique cover of the candidates, since any independent set meets each
//! clique at most once.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::ConfusionGraph;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisResult {
    pub size: usize,
    /// A maximum independent set, sorted ascending.
    pub witness: Vec<u32>,
    pub nodes_explored: u64,
}

struct SearchState<'a> {
    graph: &'a ConfusionGraph,
    best: Vec<u32>,
    current: Vec<u32>,
    nodes: u64,
    budget: u64,
}

/// Computes the independence number together with a witness set.
///
/// Exhausting the node budget aborts the proof of optimality; the error
/// carries the best set found, which is still a valid lower bound.
pub fn max_independent_set(g: &ConfusionGraph, budget: u64) -> Result<MisResult> {
    let mut state = SearchState {
        graph: g,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        budget,
    };
    let candidates = BitSet::full(g.num_vertices());
    match branch(&mut state, candidates) {
        Ok(()) => {
            let mut witness = state.best;
            witness.sort_unstable();
            Ok(MisResult {
                size: witness.len(),
                witness,
                nodes_explored: state.nodes,
            })
        }
        Err(_) => {
            let mut best = state.best;
            best.sort_unstable();
            Err(Error::BudgetExhausted {
                nodes: state.nodes,
                best,
            })
        }
    }
}

fn branch(state: &mut SearchState<'_>, candidates: BitSet) -> Result<()> {
    state.nodes += 1;
    if state.nodes > state.budget {
        return Err(Error::BudgetExhausted {
            nodes: state.nodes,
            best: state.best.clone(),
        });
    }

    if state.current.len() + candidates.len() <= state.best.len() {
        return Ok(());
    }
    if candidates.is_empty() {
        // strictly larger by the check above
        state.best = state.current.clone();
        return Ok(());
    }
    if state.current.len() + clique_cover_bound(state.graph, &candidates) <= state.best.len() {
        return Ok(());
    }

    let v = branch_vertex(state.graph, &candidates);

    // include v
    let mut included = candidates.clone();
    included.remove(v);
    included.subtract(state.graph.neighbors(v));
    state.current.push(v as u32);
    branch(state, included)?;
    state.current.pop();

    // exclude v
    let mut excluded = candidates;
    excluded.remove(v);
    branch(state, excluded)
}

/// Highest degree within the candidate-induced subgraph; the iteration
/// order makes the smallest index win ties.
fn branch_vertex(g: &ConfusionGraph, candidates: &BitSet) -> usize {
    let mut best = usize::MAX;
    let mut best_deg = 0;
    for v in candidates.iter() {
        let deg = g.neighbors(v).intersection_len(candidates);
        if best == usize::MAX || deg > best_deg {
            best = v;
            best_deg = deg;
        }
    }
    best
}

/// Greedily partitions the candidates into cliques; the partition size
/// bounds the independence number of the candidate subgraph from above.
fn clique_cover_bound(g: &ConfusionGraph, candidates: &BitSet) -> usize {
    let mut cliques: Vec<BitSet> = Vec::new();
    for v in candidates.iter() {
        let nv = g.neighbors(v);
        match cliques.iter_mut().find(|c| c.is_subset(nv)) {
            Some(c) => c.insert(v),
            None => {
                let mut c = BitSet::new(g.num_vertices());
                c.insert(v);
                cliques.push(c);
            }
        }
    }
    cliques.len()
}
