//! Shared test oracles, independent of the library's solver paths.

use zec::graph::ConfusionGraph;

/// Exhaustive maximum-independent-set oracle over all vertex subsets.
pub fn mis_brute_force(g: &ConfusionGraph) -> usize {
    let n = g.num_vertices();
    assert!(n <= 20, "subset enumeration oracle capped at 20 vertices");
    let masks: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, u| acc | (1 << u)))
        .collect();
    let mut best = 0;
    for subset in 0u32..(1u32 << n) {
        if (subset.count_ones() as usize) <= best {
            continue;
        }
        if (0..n).all(|v| subset >> v & 1 == 0 || subset & masks[v] == 0) {
            best = subset.count_ones() as usize;
        }
    }
    best
}

/// Floating-point reference for the fractional clique-cover LP.
///
/// Solves the packing dual (maximize total vertex weight, at most 1 per
/// clique) with a dense f64 simplex under Dantzig's rule — a different
/// pivot rule and arithmetic than the exact solver it checks.
pub fn clique_cover_lp_float(num_vertices: usize, cliques: &[Vec<u32>]) -> f64 {
    const EPS: f64 = 1e-9;
    let m = cliques.len();
    let n = num_vertices;
    let rhs = n + m;
    let cols = n + m + 1;
    let mut rows = vec![vec![0.0f64; cols]; m];
    for (i, clique) in cliques.iter().enumerate() {
        for &v in clique {
            rows[i][v as usize] = 1.0;
        }
        rows[i][n + i] = 1.0;
        rows[i][rhs] = 1.0;
    }
    let mut obj = vec![0.0f64; cols];
    for entry in obj.iter_mut().take(n) {
        *entry = -1.0;
    }

    for _iteration in 0..100_000 {
        let mut entering = None;
        let mut most_negative = -EPS;
        for (j, &c) in obj.iter().enumerate().take(n + m) {
            if c < most_negative {
                most_negative = c;
                entering = Some(j);
            }
        }
        let Some(e) = entering else {
            return obj[rhs];
        };
        let mut leaving = None;
        let mut best_ratio = f64::INFINITY;
        for (i, row) in rows.iter().enumerate() {
            if row[e] > EPS {
                let ratio = row[rhs] / row[e];
                if ratio < best_ratio {
                    best_ratio = ratio;
                    leaving = Some(i);
                }
            }
        }
        let l = leaving.expect("packing LP is bounded");
        let divisor = rows[l][e];
        for x in rows[l].iter_mut() {
            *x /= divisor;
        }
        let pivot_row = rows[l].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != l && row[e] != 0.0 {
                let factor = row[e];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= factor * p;
                }
            }
        }
        if obj[e] != 0.0 {
            let factor = obj[e];
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                *x -= factor * p;
            }
        }
    }
    panic!("float simplex failed to converge");
}

/// Seeded Erdos-Renyi graph for oracle comparisons.
pub fn random_graph(seed: u64, n: usize, p: f64) -> ConfusionGraph {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    ConfusionGraph::from_edges(n, &edges).unwrap()
}
