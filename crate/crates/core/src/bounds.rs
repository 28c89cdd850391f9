//! Certified brackets on the confusion-graph capacity of `(d, n)`
//! channels.
//!
//! The closed forms: `ceil(n^d / (2d+1))` from the Lee-code window below,
//! and `(n-2)^d / (2d+1) + (n^d - (n-2)^d)` from the inner/outer clique
//! weighting above. Between them sit, on request, the exact independence
//! number and the exact LP optimum. The whole chain is compared in exact
//! arithmetic; base-2 logarithms exist only as display fields.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Number, Value};

use crate::arith::Symbol;
use crate::error::{Error, Result};
use crate::graph::{
    build_channel, build_confusion_graph_capped, symbol_index, ConfusionGraph,
    DEFAULT_VERTEX_CAP,
};
use crate::lee::{construct_pl_budgeted, extract_window_budgeted, DEFAULT_ENUM_BUDGET};
use crate::solver::{
    big_pow, ceil_div, max_independent_set, rat_int, CliqueAssignment, LpProblem, Rational,
    DEFAULT_CLIQUE_BUDGET, DEFAULT_NODE_BUDGET,
};

/// `ceil(n^d / (2d+1))`, the closed-form floor on the capacity bracket.
pub fn lower_bound_closed(d: u32, n: u32) -> Result<BigInt> {
    if d == 0 || n == 0 {
        return Err(Error::Parameter("d and n must be >= 1".into()));
    }
    Ok(ceil_div(&big_pow(n, d), &BigInt::from(2 * d + 1)))
}

/// A constructive witness meeting [`lower_bound_closed`]: the window of a
/// perfect Lee code over the smallest suitable modulus, mapped into
/// `[0, n-1]^d`.
pub fn lower_bound_witness(d: u32, n: u32) -> Result<Vec<Symbol>> {
    lower_bound_witness_budgeted(d, n, DEFAULT_ENUM_BUDGET)
}

pub fn lower_bound_witness_budgeted(d: u32, n: u32, budget: u64) -> Result<Vec<Symbol>> {
    if d == 0 || n == 0 {
        return Err(Error::Parameter("d and n must be >= 1".into()));
    }
    let m = 2 * d + 1;
    let q = n.div_ceil(m) * m;
    let code = construct_pl_budgeted(d, q, budget)?;
    let window = extract_window_budgeted(&code, n, budget)?;
    let witness = window.members_mapped().to_vec();
    if BigInt::from(witness.len()) < lower_bound_closed(d, n)? {
        return Err(Error::Invariant(format!(
            "window witness of size {} fell below the closed-form bound",
            witness.len()
        )));
    }
    Ok(witness)
}

/// A vertex annotated with how many of its coordinates touch the box
/// boundary `{0, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub vertex: Symbol,
    pub nu: u32,
    pub is_inner: bool,
}

pub fn classify_vertex(x: &Symbol) -> VertexClass {
    let n = x.levels();
    let nu = x
        .coords()
        .iter()
        .filter(|&&c| c == 0 || c == n - 1)
        .count() as u32;
    VertexClass {
        vertex: x.clone(),
        nu,
        is_inner: nu == 0,
    }
}

/// The closed unit `L_1` ball around `x`, which is a clique of the
/// confusion graph. Sorted lexicographically.
pub fn adjacency_clique(x: &Symbol) -> Result<Vec<Symbol>> {
    let channel = build_channel(x.dim() as u32, x.levels())?;
    channel.reachable_outputs(x)
}

/// The inner/outer clique weighting: `1/(2d+1)` on each inner adjacency
/// clique, `1` on each outer one. Feasible because an inner vertex lies in
/// all `2d+1` balls centered on its closed neighborhood.
///
/// Keys are vertex-index lists of the graph. For `(d, n) = (1, 2)` the two
/// adjacency cliques coincide as a set and merge into one key.
pub fn inner_outer_assignment(g: &ConfusionGraph) -> Result<CliqueAssignment> {
    let origin = g.origin().ok_or_else(|| {
        Error::Parameter("inner/outer weighting needs a channel confusion graph".into())
    })?;
    if origin.power != 1 {
        return Err(Error::Parameter(
            "inner/outer weighting applies to the base graph, not a power".into(),
        ));
    }
    let (d, n) = (origin.d, origin.n);
    if n < 2 {
        return Err(Error::Parameter(
            "inner/outer split degenerates for n < 2".into(),
        ));
    }
    let inner_weight = Rational::new(BigInt::one(), BigInt::from(2 * d + 1));
    let mut assignment = CliqueAssignment::new();
    for v in 0..g.num_vertices() {
        let x = Symbol::new(g.label(v).to_vec(), n)?;
        let weight = if classify_vertex(&x).is_inner {
            inner_weight.clone()
        } else {
            Rational::one()
        };
        let mut clique: Vec<u32> = adjacency_clique(&x)?
            .iter()
            .map(|s| symbol_index(s.coords(), n) as u32)
            .collect();
        clique.sort_unstable();
        assignment
            .entry(clique)
            .and_modify(|w| {
                if weight > *w {
                    *w = weight.clone();
                }
            })
            .or_insert(weight);
    }
    Ok(assignment)
}

/// The closed-form cap `(n-2)^d / (2d+1) + (n^d - (n-2)^d)`.
pub fn upper_bound_closed(d: u32, n: u32) -> Result<Rational> {
    if d == 0 {
        return Err(Error::Parameter("d must be >= 1".into()));
    }
    if n < 2 {
        return Err(Error::Parameter(
            "closed-form upper bound needs n >= 2".into(),
        ));
    }
    let inner = big_pow(n - 2, d);
    let total = big_pow(n, d);
    Ok(Rational::new(inner.clone(), BigInt::from(2 * d + 1)) + rat_int(total - inner))
}

///`upper/n^d - 1/(2d+1)`: the residual that the capacity expression hides
/// in its vanishing term.
pub fn asymptotic_gap(d: u32, n: u32) -> Result<Rational> {
    let upper = upper_bound_closed(d, n)?;
    Ok(upper / rat_int(big_pow(n, d)) - Rational::new(BigInt::one(), BigInt::from(2 * d + 1)))
}

/// Which optional computations a bracket should run.
#[derive(Clone, Debug)]
pub struct BracketOptions {
    pub exact_alpha: bool,
    /// Strong-product powers whose independence numbers sharpen the floor.
    pub alpha_powers: Vec<u32>,
    pub exact_lp: bool,
    pub mis_budget: u64,
    pub clique_budget: usize,
    pub vertex_cap: usize,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            exact_alpha: false,
            alpha_powers: Vec::new(),
            exact_lp: false,
            mis_budget: DEFAULT_NODE_BUDGET,
            clique_budget: DEFAULT_CLIQUE_BUDGET,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// A per-channel record bracketing the graph capacity, with every
/// certification field exact and the two log-scale fields display-only.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub d: u32,
    pub n: u32,
    pub lower_closed: BigInt,
    pub alpha_exact: Option<u64>,
    /// `(k, independent-set size)` pairs on strong powers: the exact
    /// independence number when the search completed, otherwise the best
    /// witness found (see `flags`). Either way the k-th root is a valid
    /// floor and enters the estimate.
    pub alpha_power: Vec<(u32, u64)>,
    pub lp_exact: Option<Rational>,
    pub upper_closed: Rational,
    pub capacity_lo_bits: f64,
    pub capacity_hi_bits: f64,
    /// Budget shortfalls; empty for a complete report.
    pub flags: Vec<String>,
}

impl BoundReport {
    pub fn is_complete(&self) -> bool {
        self.flags.is_empty()
    }

    pub const CSV_HEADER: &'static str = "d,n,lower_closed,alpha_exact,lp_exact_num,\
lp_exact_den,upper_num,upper_den,capacity_lo_bits,capacity_hi_bits";

    pub fn to_csv_row(&self) -> String {
        let alpha = self
            .alpha_exact
            .map(|a| a.to_string())
            .unwrap_or_default();
        let (lp_num, lp_den) = match &self.lp_exact {
            Some(r) => (r.numer().to_string(), r.denom().to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{alpha},{lp_num},{lp_den},{},{},{:.6},{:.6}",
            self.d,
            self.n,
            self.lower_closed,
            self.upper_closed.numer(),
            self.upper_closed.denom(),
            self.capacity_lo_bits,
            self.capacity_hi_bits,
        )
    }

    pub fn to_json(&self) -> Value {
        let big = |b: &BigInt| Value::Number(Number::from_string_unchecked(b.to_string()));
        let ratio = |r: &Rational| json!({ "num": big(r.numer()), "den": big(r.denom()) });
        let fixed = |x: f64| Value::Number(Number::from_string_unchecked(format!("{x:.6}")));
        json!({
            "d": self.d,
            "n": self.n,
            "lower_closed": big(&self.lower_closed),
            "alpha_exact": self.alpha_exact,
            "alpha_power": self.alpha_power,
            "lp_exact": self.lp_exact.as_ref().map(ratio),
            "upper": ratio(&self.upper_closed),
            "capacity_lo_bits": fixed(self.capacity_lo_bits),
            "capacity_hi_bits": fixed(self.capacity_hi_bits),
            "flags": self.flags,
        })
    }
}

/// Computes the bracket for one channel.
///
/// `n = 1` degenerates to a single confusable class per coordinate; its
/// bracket is pinned to 1 without consulting the closed-form cap, which is
/// meaningless there.
pub fn capacity_bracket(d: u32, n: u32, options: &BracketOptions) -> Result<BoundReport> {
    if d == 0 || n == 0 {
        return Err(Error::Parameter("d and n must be >= 1".into()));
    }
    let lower_closed = lower_bound_closed(d, n)?;
    let upper_closed = if n == 1 {
        rat_int(1)
    } else {
        upper_bound_closed(d, n)?
    };

    let mut flags = Vec::new();
    let need_graph = options.exact_alpha || options.exact_lp || !options.alpha_powers.is_empty();
    let graph = if need_graph {
        let channel = build_channel(d, n)?;
        Some(build_confusion_graph_capped(&channel, options.vertex_cap)?)
    } else {
        None
    };

    let mut alpha_exact = None;
    let mut alpha_found: Option<u64> = None;
    if options.exact_alpha {
        let g = graph.as_ref().expect("graph built above");
        match max_independent_set(g, options.mis_budget) {
            Ok(result) => {
                alpha_exact = Some(result.size as u64);
                alpha_found = Some(result.size as u64);
            }
            Err(Error::BudgetExhausted { nodes, best }) => {
                flags.push(format!(
                    "independence search stopped after {nodes} nodes; best witness {}",
                    best.len()
                ));
                alpha_found = Some(best.len() as u64);
            }
            Err(e) => return Err(e),
        }
    }

    let mut alpha_power = Vec::new();
    let mut powers = options.alpha_powers.clone();
    powers.sort_unstable();
    powers.dedup();
    for k in powers {
        if k == 0 {
            return Err(Error::Parameter("alpha power k must be >= 1".into()));
        }
        let g = graph.as_ref().expect("graph built above");
        match g
            .power_capped(k, options.vertex_cap)
            .and_then(|gk| max_independent_set(&gk, options.mis_budget))
        {
            Ok(result) => alpha_power.push((k, result.size as u64)),
            Err(Error::BudgetExhausted { nodes, best }) => {
                flags.push(format!(
                    "independence search on power {k} stopped after {nodes} nodes"
                ));
                if !best.is_empty() {
                    alpha_power.push((k, best.len() as u64));
                }
            }
            Err(Error::Capacity(msg)) => flags.push(format!("power {k} skipped: {msg}")),
            Err(e) => return Err(e),
        }
    }

    let mut lp_exact = None;
    if options.exact_lp {
        let g = graph.as_ref().expect("graph built above");
        match LpProblem::maximal(g).and_then(|p| crate::solver::solve_clique_cover_lp(&p)) {
            Ok(solution) => lp_exact = Some(solution.value),
            Err(Error::Capacity(msg)) => flags.push(format!("exact LP skipped: {msg}")),
            Err(e) => return Err(e),
        }
    }

    // exact chain: lower <= alpha <= lp <= upper
    let lower_rat = rat_int(lower_closed.clone());
    if let Some(a) = alpha_exact {
        let a = rat_int(a as i64);
        if lower_rat > a {
            return Err(Error::Invariant(format!(
                "closed-form floor exceeds the independence number at ({d}, {n})"
            )));
        }
        if let Some(lp) = &lp_exact {
            if a > *lp {
                return Err(Error::Invariant(format!(
                    "independence number exceeds the LP optimum at ({d}, {n})"
                )));
            }
        }
        if a > upper_closed {
            return Err(Error::Invariant(format!(
                "independence number exceeds the closed-form cap at ({d}, {n})"
            )));
        }
    }
    if let Some(lp) = &lp_exact {
        if lower_rat > *lp {
            return Err(Error::Invariant(format!(
                "closed-form floor exceeds the LP optimum at ({d}, {n})"
            )));
        }
        if *lp > upper_closed {
            return Err(Error::Invariant(format!(
                "LP optimum exceeds the closed-form cap at ({d}, {n})"
            )));
        }
    }

    // floor estimate: the best k-th root among witnesses, compared exactly
    let mut best: (BigInt, u32) = (lower_closed.clone(), 1);
    let mut consider = |value: BigInt, k: u32| {
        // value^(1/k) > best^(1/best_k)  <=>  value^best_k > best^k
        if value.pow(best.1) > best.0.pow(k) {
            best = (value, k);
        }
    };
    if let Some(a) = alpha_found {
        consider(BigInt::from(a), 1);
    }
    for &(k, a) in &alpha_power {
        consider(BigInt::from(a), k);
    }
    let capacity_lo_bits = log2_big(&best.0) / f64::from(best.1);
    let hi = match &lp_exact {
        Some(lp) if *lp < upper_closed => lp.clone(),
        _ => upper_closed.clone(),
    };
    let capacity_hi_bits = log2_big(hi.numer()) - log2_big(hi.denom());

    Ok(BoundReport {
        d,
        n,
        lower_closed,
        alpha_exact,
        alpha_power,
        lp_exact,
        upper_closed,
        capacity_lo_bits,
        capacity_hi_bits,
        flags,
    })
}

fn log2_big(b: &BigInt) -> f64 {
    debug_assert!(b.is_positive());
    b.to_f64().expect("bracket values fit in a double").log2()
}
