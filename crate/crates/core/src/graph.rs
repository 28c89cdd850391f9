//! The nearest-neighbor-error channel, its confusion graph, strong graph
//! products, and DIMACS import/export.
//!
//! A `(d, n)` channel carries symbols from `[0, n-1]^d` and may perturb at
//! most one coordinate of a symbol by one level. Two inputs are confusable
//! exactly when some output is reachable from both, and zero-error codes
//! are independent sets of the resulting graph.

use crate::arith::{l1_distance_coords, Symbol};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Default ceiling on product vertex counts; products that would exceed it
/// fail fast instead of exhausting memory.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;

/// Support predicate of the `(d, n)` nearest-neighbor-error channel.
///
/// Transition probabilities are never materialized; only which transitions
/// have nonzero probability matters for zero-error questions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelModel {
    d: u32,
    n: u32,
}

/// Builds the `(d, n)` channel model.
pub fn build_channel(d: u32, n: u32) -> Result<ChannelModel> {
    if d == 0 || n == 0 {
        return Err(Error::Parameter(
            "channel parameters d and n must be >= 1".into(),
        ));
    }
    Ok(ChannelModel { d, n })
}

impl ChannelModel {
    #[inline]
    pub fn dim(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn levels(&self) -> u32 {
        self.n
    }

    /// True iff `y` can be received when `x` is sent.
    pub fn supports(&self, x: &Symbol, y: &Symbol) -> Result<bool> {
        self.check_symbol(x)?;
        self.check_symbol(y)?;
        Ok(l1_distance_coords(x.coords(), y.coords()) <= 1)
    }

    /// All outputs reachable from `x`: the closed unit `L_1` ball around
    /// `x`, clipped to the box `[0, n-1]^d`.
    pub fn reachable_outputs(&self, x: &Symbol) -> Result<Vec<Symbol>> {
        self.check_symbol(x)?;
        let mut out = vec![x.clone()];
        for i in 0..self.d as usize {
            let c = x.coords()[i];
            if c > 0 {
                let mut coords = x.coords().to_vec();
                coords[i] = c - 1;
                out.push(Symbol::new(coords, self.n)?);
            }
            if c + 1 < self.n {
                let mut coords = x.coords().to_vec();
                coords[i] = c + 1;
                out.push(Symbol::new(coords, self.n)?);
            }
        }
        out.sort();
        Ok(out)
    }

    fn check_symbol(&self, x: &Symbol) -> Result<()> {
        if x.dim() != self.d as usize || x.levels() != self.n {
            return Err(Error::Parameter(format!(
                "symbol does not belong to the ({}, {}) channel",
                self.d, self.n
            )));
        }
        Ok(())
    }
}

/// Provenance of a graph that arose from a `(d, n)` channel, possibly
/// raised to a strong-product power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NneOrigin {
    pub d: u32,
    pub n: u32,
    pub power: u32,
}

/// An undirected graph with dense bitset adjacency and coordinate labels.
///
/// Vertices of a `(d, n)` confusion graph are indexed mixed-radix with the
/// first coordinate most significant; product vertices use row-major
/// pairing with the right factor fastest. Graphs are immutable once built.
#[derive(Clone, Debug)]
pub struct ConfusionGraph {
    adj: Vec<BitSet>,
    labels: Vec<Vec<u32>>,
    origin: Option<NneOrigin>,
}

/// Mixed-radix index of a coordinate tuple, first coordinate most
/// significant.
pub fn symbol_index(coords: &[u32], n: u32) -> usize {
    coords
        .iter()
        .fold(0usize, |acc, &c| acc * n as usize + c as usize)
}

/// Inverse of [`symbol_index`] for `d` coordinates.
pub fn index_to_coords(mut index: usize, d: u32, n: u32) -> Vec<u32> {
    let mut coords = vec![0u32; d as usize];
    for c in coords.iter_mut().rev() {
        *c = (index % n as usize) as u32;
        index /= n as usize;
    }
    coords
}

/// Builds the confusion graph of a channel: one vertex per input symbol,
/// an edge wherever two distinct inputs share a reachable output.
pub fn build_confusion_graph(channel: &ChannelModel) -> Result<ConfusionGraph> {
    build_confusion_graph_capped(channel, DEFAULT_VERTEX_CAP)
}

pub fn build_confusion_graph_capped(
    channel: &ChannelModel,
    vertex_cap: usize,
) -> Result<ConfusionGraph> {
    let (d, n) = (channel.dim(), channel.levels());
    let count = checked_vertex_count(&[(n, d)], vertex_cap)?;

    let mut adj = vec![BitSet::new(count); count];
    let mut labels = Vec::with_capacity(count);
    for idx in 0..count {
        labels.push(index_to_coords(idx, d, n));
    }

    // Inputs that can produce a common output y are exactly the unit ball
    // around y, so every output contributes a clique of confusable inputs.
    for label in &labels {
        let y = Symbol::new(label.clone(), n)?;
        let sources: Vec<usize> = channel
            .reachable_outputs(&y)?
            .iter()
            .map(|x| symbol_index(x.coords(), n))
            .collect();
        for (a, &u) in sources.iter().enumerate() {
            for &v in &sources[a + 1..] {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
    }

    Ok(ConfusionGraph {
        adj,
        labels,
        origin: Some(NneOrigin { d, n, power: 1 }),
    })
}

fn checked_vertex_count(factors: &[(u32, u32)], cap: usize) -> Result<usize> {
    let mut count: u128 = 1;
    for &(base, exp) in factors {
        for _ in 0..exp {
            count = count.saturating_mul(u128::from(base));
        }
    }
    if count > cap as u128 {
        return Err(Error::Capacity(format!(
            "graph would have {count} vertices, above the cap of {cap}"
        )));
    }
    Ok(count as usize)
}

impl ConfusionGraph {
    /// Builds a graph from an explicit edge list; labels each vertex with
    /// its own index. Used for generic solver inputs.
    pub fn from_edges(num_vertices: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![BitSet::new(num_vertices); num_vertices];
        for &(u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::Parameter(format!(
                    "edge ({u}, {v}) outside vertex range 0..{num_vertices}"
                )));
            }
            if u == v {
                return Err(Error::Parameter(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let labels = (0..num_vertices as u32).map(|i| vec![i]).collect();
        Ok(ConfusionGraph {
            adj,
            labels,
            origin: None,
        })
    }

    pub fn complete(num_vertices: usize) -> Self {
        let mut adj = vec![BitSet::full(num_vertices); num_vertices];
        for (i, row) in adj.iter_mut().enumerate() {
            row.remove(i);
        }
        ConfusionGraph {
            adj,
            labels: (0..num_vertices as u32).map(|i| vec![i]).collect(),
            origin: None,
        }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|row| row.len()).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn label(&self, v: usize) -> &[u32] {
        &self.labels[v]
    }

    pub fn origin(&self) -> Option<NneOrigin> {
        self.origin
    }

    /// True iff no two members of `vertices` are adjacent.
    pub fn is_independent_set(&self, vertices: &[u32]) -> bool {
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if u == v || self.has_edge(u as usize, v as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff all members of `vertices` are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[u32]) -> bool {
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if u == v || !self.has_edge(u as usize, v as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// Strong product with the default vertex cap.
    pub fn strong_product(&self, other: &ConfusionGraph) -> Result<ConfusionGraph> {
        self.strong_product_capped(other, DEFAULT_VERTEX_CAP)
    }

    /// Strong product: vertex set is the pair set, and distinct pairs are
    /// adjacent iff each coordinate is equal or adjacent.
    pub fn strong_product_capped(
        &self,
        other: &ConfusionGraph,
        vertex_cap: usize,
    ) -> Result<ConfusionGraph> {
        let (ng, nh) = (self.num_vertices(), other.num_vertices());
        let count = ng
            .checked_mul(nh)
            .filter(|&c| c <= vertex_cap)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "product would have {ng} x {nh} vertices, above the cap of {vertex_cap}"
                ))
            })?;

        let mut adj = vec![BitSet::new(count); count];
        let mut labels = Vec::with_capacity(count);
        for i in 0..ng {
            for j in 0..nh {
                let mut label = self.labels[i].clone();
                label.extend_from_slice(&other.labels[j]);
                labels.push(label);
            }
        }

        for i1 in 0..ng {
            for j1 in 0..nh {
                let u = i1 * nh + j1;
                // enumerate closed-neighborhood pairs; skip the vertex itself
                let mut row = std::mem::take(&mut adj[u]);
                for i2 in ClosedNeighbors::new(self, i1) {
                    for j2 in ClosedNeighbors::new(other, j1) {
                        let v = i2 * nh + j2;
                        if v != u {
                            row.insert(v);
                        }
                    }
                }
                adj[u] = row;
            }
        }

        let origin = match (self.origin, other.origin) {
            (Some(a), Some(b)) if a.d == b.d && a.n == b.n => Some(NneOrigin {
                d: a.d,
                n: a.n,
                power: a.power + b.power,
            }),
            _ => None,
        };

        Ok(ConfusionGraph {
            adj,
            labels,
            origin,
        })
    }

    /// `k`-fold strong product of the graph with itself, left-associated.
    pub fn power(&self, k: u32) -> Result<ConfusionGraph> {
        self.power_capped(k, DEFAULT_VERTEX_CAP)
    }

    pub fn power_capped(&self, k: u32, vertex_cap: usize) -> Result<ConfusionGraph> {
        if k == 0 {
            return Err(Error::Parameter("graph power must be >= 1".into()));
        }
        let mut result = self.clone();
        for _ in 1..k {
            result = result.strong_product_capped(self, vertex_cap)?;
        }
        Ok(result)
    }

    /// DIMACS edge-list text: `p edge V E` header, then one `e i j` line
    /// per edge, 1-based, i < j, in lexicographic order.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.num_vertices(), self.num_edges());
        for u in 0..self.num_vertices() {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push_str(&format!("e {} {}\n", u + 1, v + 1));
                }
            }
        }
        out
    }

    /// Parses the DIMACS subset that [`Self::to_dimacs`] emits (plus `c`
    /// comment lines).
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut num_vertices: Option<usize> = None;
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let fields: Vec<&str> = line.split_ascii_whitespace().collect();
            match fields[0] {
                "p" => {
                    if fields.len() != 4 || fields[1] != "edge" {
                        return Err(Error::Parse(format!(
                            "line {}: expected 'p edge <V> <E>'",
                            lineno + 1
                        )));
                    }
                    num_vertices = Some(fields[2].parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad vertex count", lineno + 1))
                    })?);
                }
                "e" => {
                    if fields.len() != 3 {
                        return Err(Error::Parse(format!(
                            "line {}: expected 'e <i> <j>'",
                            lineno + 1
                        )));
                    }
                    let u: u32 = fields[1].parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad endpoint", lineno + 1))
                    })?;
                    let v: u32 = fields[2].parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad endpoint", lineno + 1))
                    })?;
                    if u == 0 || v == 0 {
                        return Err(Error::Parse(format!(
                            "line {}: DIMACS vertices are 1-based",
                            lineno + 1
                        )));
                    }
                    edges.push((u - 1, v - 1));
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: unrecognized record '{}'",
                        lineno + 1,
                        fields[0]
                    )));
                }
            }
        }
        let n = num_vertices
            .ok_or_else(|| Error::Parse("missing 'p edge' header".into()))?;
        ConfusionGraph::from_edges(n, &edges)
    }
}

/// Iterates a vertex followed by its neighbors.
struct ClosedNeighbors<'a> {
    graph: &'a ConfusionGraph,
    vertex: usize,
    state: ClosedNeighborsState<'a>,
}

enum ClosedNeighborsState<'a> {
    SelfFirst,
    Rest(crate::bitset::BitIter<'a>),
}

impl<'a> ClosedNeighbors<'a> {
    fn new(graph: &'a ConfusionGraph, vertex: usize) -> Self {
        ClosedNeighbors {
            graph,
            vertex,
            state: ClosedNeighborsState::SelfFirst,
        }
    }
}

impl Iterator for ClosedNeighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match &mut self.state {
            ClosedNeighborsState::SelfFirst => {
                self.state = ClosedNeighborsState::Rest(self.graph.adj[self.vertex].iter());
                Some(self.vertex)
            }
            ClosedNeighborsState::Rest(iter) => iter.next(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::l1_distance;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sym(coords: &[u32], n: u32) -> Symbol {
        Symbol::new(coords.to_vec(), n).unwrap()
    }

    fn nne_graph(d: u32, n: u32) -> ConfusionGraph {
        build_confusion_graph(&build_channel(d, n).unwrap()).unwrap()
    }

    /// Oracle: edge set from the direct `0 < L1 <= 2` predicate.
    fn l1_predicate_edges(d: u32, n: u32) -> Vec<(usize, usize)> {
        let count = (n as usize).pow(d);
        let mut edges = Vec::new();
        for u in 0..count {
            for v in u + 1..count {
                let cu = index_to_coords(u, d, n);
                let cv = index_to_coords(v, d, n);
                if l1_distance_coords(&cu, &cv) <= 2 {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    #[test]
    fn channel_examples() {
        let ch = build_channel(2, 3).unwrap();
        let outs = ch.reachable_outputs(&sym(&[0, 0], 3)).unwrap();
        assert_eq!(
            outs,
            vec![sym(&[0, 0], 3), sym(&[0, 1], 3), sym(&[1, 0], 3)]
        );
        assert_eq!(ch.reachable_outputs(&sym(&[1, 1], 3)).unwrap().len(), 5);

        let tiny = build_channel(1, 1).unwrap();
        assert_eq!(
            tiny.reachable_outputs(&sym(&[0], 1)).unwrap(),
            vec![sym(&[0], 1)]
        );

        assert!(build_channel(0, 3).is_err());
        assert!(build_channel(2, 0).is_err());
    }

    #[test]
    fn reachable_set_size_brackets() {
        // closed out-neighborhoods range from d+1 at a corner to 2d+1 inside
        for d in 1..=3u32 {
            for n in 2..=4u32 {
                let ch = build_channel(d, n).unwrap();
                let count = (n as usize).pow(d);
                for idx in 0..count {
                    let x = sym(&index_to_coords(idx, d, n), n);
                    let size = ch.reachable_outputs(&x).unwrap().len();
                    assert!(size > d as usize, "too small at {x:?}");
                    assert!(size <= 2 * d as usize + 1, "too large at {x:?}");
                }
            }
        }
    }

    #[test]
    fn confusion_graph_examples() {
        // frozen from the pair-count oracle below: 26 of the 36 pairs
        assert_eq!(l1_predicate_edges(2, 3).len(), 26);
        let g = nne_graph(2, 3);
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.num_edges(), 26);

        let k3 = nne_graph(1, 3);
        assert_eq!(k3.num_vertices(), 3);
        assert_eq!(k3.num_edges(), 3);

        let single = nne_graph(1, 1);
        assert_eq!(single.num_vertices(), 1);
        assert_eq!(single.num_edges(), 0);
    }

    #[test]
    fn common_output_edges_equal_l1_predicate() {
        // every (d, n) with n^d <= 4096 in this sweep, plus two long paths
        let mut cases: Vec<(u32, u32)> = Vec::new();
        for d in 1..=6u32 {
            for n in 1..=16u32 {
                if (n as u64).pow(d) <= 4096 {
                    cases.push((d, n));
                }
            }
        }
        cases.push((1, 100));
        cases.push((1, 1000));
        for (d, n) in cases {
            let g = nne_graph(d, n);
            let mut got: Vec<(usize, usize)> = Vec::new();
            for u in 0..g.num_vertices() {
                for v in g.neighbors(u).iter() {
                    if u < v {
                        got.push((u, v));
                    }
                }
            }
            assert_eq!(got, l1_predicate_edges(d, n), "mismatch at ({d}, {n})");
        }
    }

    #[test]
    fn adjacency_is_symmetric_with_zero_diagonal() {
        let g = nne_graph(2, 4);
        for u in 0..g.num_vertices() {
            assert!(!g.has_edge(u, u));
            for v in 0..g.num_vertices() {
                assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
            }
        }
    }

    #[test]
    fn strong_product_of_complete_graphs() {
        let k2 = ConfusionGraph::complete(2);
        let k4 = k2.strong_product(&k2).unwrap();
        assert_eq!(k4.num_vertices(), 4);
        assert_eq!(k4.num_edges(), 6);

        let k3 = ConfusionGraph::complete(3);
        let k9 = k3.power(2).unwrap();
        assert_eq!(k9.num_vertices(), 9);
        assert_eq!(k9.num_edges(), 36);
    }

    #[test]
    fn product_vertex_count_multiplies() {
        let g = nne_graph(2, 3);
        let h = nne_graph(1, 2);
        assert_eq!(
            g.strong_product(&h).unwrap().num_vertices(),
            g.num_vertices() * h.num_vertices()
        );
        let sq = g.power(2).unwrap();
        assert_eq!(sq.num_vertices(), 81);
        assert_eq!(sq.origin().unwrap().power, 2);
    }

    #[test]
    fn power_one_is_identity() {
        let g = nne_graph(2, 3);
        let p = g.power(1).unwrap();
        assert_eq!(p.num_vertices(), g.num_vertices());
        for u in 0..g.num_vertices() {
            for v in 0..g.num_vertices() {
                assert_eq!(p.has_edge(u, v), g.has_edge(u, v));
            }
        }
        assert!(g.power(0).is_err());
    }

    #[test]
    fn vertex_cap_enforced() {
        let g = nne_graph(2, 3);
        assert!(matches!(
            g.strong_product_capped(&g, 80),
            Err(Error::Capacity(_))
        ));
        let ch = build_channel(2, 3).unwrap();
        assert!(build_confusion_graph_capped(&ch, 8).is_err());
    }

    #[test]
    fn independent_sets_lift_to_products() {
        let g = nne_graph(2, 3);
        let a = [
            symbol_index(&[0, 0], 3) as u32,
            symbol_index(&[1, 2], 3) as u32,
        ];
        assert!(g.is_independent_set(&a));
        let sq = g.power(2).unwrap();
        let mut lifted = Vec::new();
        for &u in &a {
            for &v in &a {
                lifted.push(u * 9 + v);
            }
        }
        assert_eq!(lifted.len(), 4);
        assert!(sq.is_independent_set(&lifted));
    }

    fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> ConfusionGraph {
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

    #[test]
    fn strong_product_commutes_up_to_relabeling() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let g = random_graph(&mut rng, 5, 0.4);
            let h = random_graph(&mut rng, 4, 0.6);
            let gh = g.strong_product(&h).unwrap();
            let hg = h.strong_product(&g).unwrap();
            let (ng, nh) = (g.num_vertices(), h.num_vertices());
            for i1 in 0..ng {
                for j1 in 0..nh {
                    for i2 in 0..ng {
                        for j2 in 0..nh {
                            assert_eq!(
                                gh.has_edge(i1 * nh + j1, i2 * nh + j2),
                                hg.has_edge(j1 * ng + i1, j2 * ng + i2)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn strong_product_associates_up_to_relabeling() {
        let mut rng = StdRng::seed_from_u64(17);
        let f = random_graph(&mut rng, 3, 0.5);
        let g = random_graph(&mut rng, 4, 0.5);
        let h = random_graph(&mut rng, 3, 0.5);
        let left = f.strong_product(&g).unwrap().strong_product(&h).unwrap();
        let right = f.strong_product(&g.strong_product(&h).unwrap()).unwrap();
        // both index as ((i*|g|)+j)*|h|+k under their associativity
        assert_eq!(left.num_vertices(), right.num_vertices());
        for u in 0..left.num_vertices() {
            for v in 0..left.num_vertices() {
                assert_eq!(left.has_edge(u, v), right.has_edge(u, v));
            }
        }
    }

    #[test]
    fn dimacs_export_examples() {
        assert_eq!(nne_graph(1, 1).to_dimacs(), "p edge 1 0\n");
        let k2 = ConfusionGraph::complete(2);
        assert_eq!(k2.to_dimacs(), "p edge 2 1\ne 1 2\n");
        let g = nne_graph(2, 3);
        assert!(g.to_dimacs().starts_with("p edge 9 26\n"));
    }

    #[test]
    fn dimacs_round_trip() {
        let g = nne_graph(2, 3);
        let parsed = ConfusionGraph::from_dimacs(&g.to_dimacs()).unwrap();
        assert_eq!(parsed.num_vertices(), g.num_vertices());
        for u in 0..g.num_vertices() {
            for v in 0..g.num_vertices() {
                assert_eq!(parsed.has_edge(u, v), g.has_edge(u, v));
            }
        }
        assert!(ConfusionGraph::from_dimacs("e 1 2\n").is_err());
        assert!(ConfusionGraph::from_dimacs("p edge 2\n").is_err());
        assert!(ConfusionGraph::from_dimacs("p edge 2 1\ne 0 1\n").is_err());
    }

    #[test]
    fn labels_follow_mixed_radix_indexing() {
        let g = nne_graph(2, 3);
        assert_eq!(g.label(symbol_index(&[1, 2], 3)), &[1, 2]);
        assert_eq!(symbol_index(&[1, 2], 3), 5);
        assert_eq!(index_to_coords(5, 2, 3), vec![1, 2]);
        // the extracted window pair is independent, by direct distance
        let a = sym(&[0, 1], 3);
        let b = sym(&[2, 2], 3);
        assert!(l1_distance(&a, &b).unwrap() >= 3);
        assert!(!g.has_edge(symbol_index(&[0, 1], 3), symbol_index(&[2, 2], 3)));
    }
}
