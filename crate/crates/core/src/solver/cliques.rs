//! Clique enumeration: maximal cliques via pivoting Bron-Kerbosch, plus an
//! exhaustive all-cliques enumerator for cross-checking the LP on small
//! graphs.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::ConfusionGraph;

pub const DEFAULT_CLIQUE_BUDGET: usize = 1_000_000;

/// Enumerates the inclusion-maximal cliques, each sorted ascending, the
/// list in lexicographic order.
pub fn maximal_cliques(g: &ConfusionGraph, budget: usize) -> Result<Vec<Vec<u32>>> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut current = Vec::new();
    let candidates = BitSet::full(n);
    let excluded = BitSet::new(n);
    bron_kerbosch(g, &mut current, candidates, excluded, &mut out, budget)?;
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    g: &ConfusionGraph,
    current: &mut Vec<u32>,
    mut candidates: BitSet,
    mut excluded: BitSet,
    out: &mut Vec<Vec<u32>>,
    budget: usize,
) -> Result<()> {
    if candidates.is_empty() && excluded.is_empty() {
        if out.len() >= budget {
            return Err(Error::Capacity(format!(
                "more than {budget} maximal cliques"
            )));
        }
        let mut clique = current.clone();
        clique.sort_unstable();
        out.push(clique);
        return Ok(());
    }

    // pivot on the vertex dominating the most candidates
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| (g.neighbors(u).intersection_len(&candidates), usize::MAX - u))
        .expect("nonempty candidates or excluded");
    let mut todo = candidates.clone();
    todo.subtract(g.neighbors(pivot));

    for v in todo.iter() {
        let nv = g.neighbors(v);
        current.push(v as u32);
        bron_kerbosch(
            g,
            current,
            candidates.intersection(nv),
            excluded.intersection(nv),
            out,
            budget,
        )?;
        current.pop();
        candidates.remove(v);
        excluded.insert(v);
    }
    Ok(())
}

/// Enumerates every nonempty clique. Exponential; intended for small
/// graphs where the full clique set of the covering LP is wanted.
pub fn all_cliques(g: &ConfusionGraph, budget: usize) -> Result<Vec<Vec<u32>>> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut extendable = BitSet::full(n);
    extend_cliques(g, &mut current, &mut extendable, &mut out, budget)?;
    out.sort();
    Ok(out)
}

fn extend_cliques(
    g: &ConfusionGraph,
    current: &mut Vec<u32>,
    extendable: &mut BitSet,
    out: &mut Vec<Vec<u32>>,
    budget: usize,
) -> Result<()> {
    for v in extendable.clone().iter() {
        if out.len() >= budget {
            return Err(Error::Capacity(format!("more than {budget} cliques")));
        }
        current.push(v as u32);
        out.push(current.clone());
        let mut next = extendable.clone();
        next.intersect_with(g.neighbors(v));
        // only extend with larger indices so each clique appears once
        for w in 0..=v {
            if next.contains(w) {
                next.remove(w);
            }
        }
        extend_cliques(g, current, &mut next, out, budget)?;
        current.pop();
    }
    Ok(())
}
