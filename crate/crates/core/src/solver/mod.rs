//! Exact combinatorial solvers: maximum independent set by branch and
//! bound, maximal clique enumeration, and an exact-rational simplex for the
//! fractional clique-cover LP.
//!
//! Everything that feeds a capacity bound is computed in exact arithmetic
//! and, where possible, certified after the fact rather than trusted.

mod cliques;
mod mis;
mod rational;
mod simplex;

pub use cliques::{all_cliques, maximal_cliques, DEFAULT_CLIQUE_BUDGET};
pub use mis::{max_independent_set, MisResult, DEFAULT_NODE_BUDGET};
pub use rational::{big_pow, ceil_div, rat, rat_int, Rational};
pub use simplex::{solve_clique_cover_lp, verify_feasible, CliqueAssignment, LpProblem, LpSolution};
