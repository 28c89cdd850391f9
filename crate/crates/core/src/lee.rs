//! Perfect Lee codes over `Z_q^d` with radius-1 spheres, and the window
//! extraction that turns such a code into a large `L_1`-separated subset of
//! `[0, n-1]^d`.
//!
//! The constructive regime is `(2d+1) | q`, where the syndrome code
//! `{ x : sum_i i * x_i = 0 (mod 2d+1) }` tiles the space: the 2d
//! single-step errors have the pairwise-distinct nonzero syndromes
//! `±1, ..., ±d`, so radius-1 spheres around codewords partition `Z_q^d`.
//! Verification never trusts the construction; it re-checks the partition
//! point by point.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{psi, Symbol, ZqVector};
use crate::error::{Error, Result};

/// Default ceiling on `q^d` for whole-space enumeration (verification,
/// brute-force shift scans).
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// Product of the distinct prime factors of `m`.
fn radical(mut m: u32) -> u32 {
    let mut rad = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            rad *= p;
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        rad *= m;
    }
    rad
}

/// Existence of a radius-1 perfect Lee code over `Z_q^d`: one exists iff
/// the product of the distinct prime factors of `2d+1` divides `q`.
pub fn exists_pl(d: u32, q: u32) -> bool {
    debug_assert!(d >= 1 && q >= 1);
    q.is_multiple_of(radical(2 * d + 1))
}

pub(crate) fn sphere_size(d: u32) -> u32 {
    2 * d + 1
}

/// A set of codewords in `Z_q^d` intended to tile the space with radius-1
/// Lee spheres. Codewords are kept sorted; serialization is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeeCode {
    d: u32,
    q: u32,
    codewords: Vec<ZqVector>,
}

#[derive(Serialize)]
struct LeeCodeRepr<'a> {
    d: u32,
    q: u32,
    codewords: Vec<&'a [u32]>,
}

impl LeeCode {
    pub fn new(d: u32, q: u32, mut codewords: Vec<ZqVector>) -> Result<Self> {
        if d == 0 || q == 0 {
            return Err(Error::Parameter("d and q must be >= 1".into()));
        }
        for cw in &codewords {
            if cw.dim() != d as usize || cw.modulus() != q {
                return Err(Error::Parameter(format!(
                    "codeword {:?} does not live in Z_{q}^{d}",
                    cw.coords()
                )));
            }
        }
        codewords.sort();
        codewords.dedup();
        Ok(LeeCode { d, q, codewords })
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[ZqVector] {
        &self.codewords
    }

    /// `{"d":…, "q":…, "codewords":[[…],…]}` with codewords in
    /// lexicographic order.
    pub fn to_json(&self) -> String {
        let repr = LeeCodeRepr {
            d: self.d,
            q: self.q,
            codewords: self.codewords.iter().map(|c| c.coords()).collect(),
        };
        serde_json::to_string(&repr).expect("code serialization cannot fail")
    }

    /// True iff this is exactly the syndrome code used by [`construct_pl`].
    /// Such codes are subgroups of `Z_q^d`, which licenses the shift-class
    /// shortcut in [`extract_window`].
    fn is_syndrome_code(&self) -> bool {
        let m = sphere_size(self.d);
        if !self.q.is_multiple_of(m) {
            return false;
        }
        let expected = space_size(self.d, self.q) / u128::from(m);
        if self.codewords.len() as u128 != expected {
            return false;
        }
        self.codewords.iter().all(|cw| syndrome(cw, m) == 0)
    }

    /// Checks that radius-1 Lee spheres around the codewords are pairwise
    /// disjoint and cover all of `Z_q^d`, by counting for every point the
    /// codewords within Lee distance 1 of it (must be exactly one).
    pub fn verify_perfect(&self) -> Result<bool> {
        self.verify_perfect_budgeted(DEFAULT_ENUM_BUDGET)
    }

    pub fn verify_perfect_budgeted(&self, budget: u64) -> Result<bool> {
        let total = space_size(self.d, self.q);
        if total > u128::from(budget) {
            return Err(Error::Capacity(format!(
                "verification would enumerate {total} points, above the budget of {budget}"
            )));
        }
        if self.codewords.len() as u128 * u128::from(sphere_size(self.d)) != total {
            return Ok(false);
        }
        let set: HashSet<&[u32]> = self.codewords.iter().map(|c| c.coords()).collect();
        // Partition the space by first coordinate; each point is judged
        // independently, so the result cannot depend on thread count.
        let ok = (0..self.q)
            .into_par_iter()
            .all(|x1| slice_covered_exactly_once(&set, self.d, self.q, x1));
        Ok(ok)
    }
}

fn space_size(d: u32, q: u32) -> u128 {
    (0..d).fold(1u128, |acc, _| acc.saturating_mul(u128::from(q)))
}

/// Syndrome `sum_i i * x_i mod m` with 1-based coordinate weights.
fn syndrome(cw: &ZqVector, m: u32) -> u32 {
    cw.coords()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &x)| {
            (acc + (j as u64 + 1) * u64::from(x % m)) % u64::from(m)
        }) as u32
}

/// Counts, for every point with first coordinate `x1`, the codewords within
/// Lee distance 1; returns false as soon as any count differs from one.
fn slice_covered_exactly_once(set: &HashSet<&[u32]>, d: u32, q: u32, x1: u32) -> bool {
    let d = d as usize;
    let mut point = vec![0u32; d];
    point[0] = x1;
    loop {
        let mut count = usize::from(set.contains(&point[..]));
        for i in 0..d {
            let orig = point[i];
            point[i] = if orig + 1 == q { 0 } else { orig + 1 };
            count += usize::from(q > 1 && set.contains(&point[..]));
            // the -1 step lands elsewhere only for q > 2
            point[i] = if orig == 0 { q - 1 } else { orig - 1 };
            count += usize::from(q > 2 && set.contains(&point[..]));
            point[i] = orig;
        }
        if count != 1 {
            return false;
        }
        // odometer over coordinates 1..d
        let mut i = d;
        loop {
            if i == 1 {
                return true;
            }
            i -= 1;
            point[i] += 1;
            if point[i] < q {
                break;
            }
            point[i] = 0;
        }
    }
}

/// Constructs and verifies the syndrome perfect Lee code over `Z_q^d`.
///
/// Only the regime `(2d+1) | q` is constructive here; existence for other
/// moduli is a separate question answered by [`exists_pl`].
pub fn construct_pl(d: u32, q: u32) -> Result<LeeCode> {
    construct_pl_budgeted(d, q, DEFAULT_ENUM_BUDGET)
}

pub fn construct_pl_budgeted(d: u32, q: u32, budget: u64) -> Result<LeeCode> {
    if d == 0 || q == 0 {
        return Err(Error::Parameter("d and q must be >= 1".into()));
    }
    let m = sphere_size(d);
    if !q.is_multiple_of(m) {
        let reason = if exists_pl(d, q) {
            format!(
                "a perfect Lee code over Z_{q}^{d} exists, but this construction needs {m} | q"
            )
        } else {
            format!("no perfect Lee code over Z_{q}^{d}: {} does not divide {q}", radical(m))
        };
        return Err(Error::UnsupportedRegime(reason));
    }
    let total = space_size(d, q);
    if total > u128::from(budget) {
        return Err(Error::Capacity(format!(
            "construction would enumerate {total} points, above the budget of {budget}"
        )));
    }

    // Free choice of coordinates 2..d; the first coordinate then runs over
    // the residue class that zeroes the syndrome.
    let d_us = d as usize;
    let mut codewords = Vec::with_capacity((total / u128::from(m)) as usize);
    let mut rest = vec![0u32; d_us - 1];
    loop {
        let tail: u64 = rest
            .iter()
            .enumerate()
            .map(|(j, &x)| (j as u64 + 2) * u64::from(x % m))
            .sum();
        let lead = psi(-(tail as i64), m);
        let mut x1 = lead;
        while x1 < q {
            let mut coords = Vec::with_capacity(d_us);
            coords.push(x1);
            coords.extend_from_slice(&rest);
            codewords.push(ZqVector::from_residues(coords, q)?);
            x1 += m;
        }
        let mut i = d_us - 1;
        loop {
            if i == 0 {
                let code = LeeCode::new(d, q, codewords)?;
                let expected = (total / u128::from(m)) as usize;
                if code.len() != expected || !code.verify_perfect_budgeted(budget)? {
                    return Err(Error::Invariant(format!(
                        "syndrome construction failed verification for d={d}, q={q}"
                    )));
                }
                return Ok(code);
            }
            i -= 1;
            rest[i] += 1;
            if rest[i] < q {
                break;
            }
            rest[i] = 0;
        }
    }
}

/// All points of `Z_q^d` at Lee distance at most `r` from `center`.
pub fn lee_sphere(center: &ZqVector, r: u32) -> Vec<ZqVector> {
    let mut points = std::collections::BTreeSet::new();
    let mut coords = vec![0i64; center.dim()];
    sphere_rec(center, r, 0, &mut coords, &mut points);
    points.into_iter().collect()
}

fn sphere_rec(
    center: &ZqVector,
    budget: u32,
    i: usize,
    offsets: &mut [i64],
    out: &mut std::collections::BTreeSet<ZqVector>,
) {
    if i == offsets.len() {
        let coords: Vec<i64> = center
            .coords()
            .iter()
            .zip(offsets.iter())
            .map(|(&c, &o)| i64::from(c) + o)
            .collect();
        out.insert(ZqVector::new(coords, center.modulus()).unwrap());
        return;
    }
    for delta in -(budget as i64)..=budget as i64 {
        offsets[i] = delta;
        sphere_rec(center, budget - delta.unsigned_abs() as u32, i + 1, offsets, out);
    }
    offsets[i] = 0;
}

/// The intersection of a shifted `n`-box with a code, together with its
/// image in `[0, n-1]^d` under coordinate-wise unshifting.
///
/// The unshift map is not order preserving when the window wraps, so both
/// canonically sorted views and the aligned pairing are kept.
#[derive(Clone, Debug)]
pub struct WindowSet {
    shift: ZqVector,
    members_in_zq: Vec<ZqVector>,
    /// Image of `members_in_zq[i]`, same index.
    aligned_mapped: Vec<Symbol>,
    /// The image as a canonically sorted set.
    members_mapped: Vec<Symbol>,
}

impl WindowSet {
    fn build(code: &LeeCode, n: u32, shift: ZqVector) -> Result<WindowSet> {
        let mut members_in_zq = window_members(code, n, &shift);
        members_in_zq.sort();
        let mut aligned_mapped = Vec::with_capacity(members_in_zq.len());
        for u in &members_in_zq {
            let coords: Vec<u32> = u
                .coords()
                .iter()
                .zip(shift.coords())
                .map(|(&ui, &xi)| psi(i64::from(ui) - i64::from(xi), code.q))
                .collect();
            aligned_mapped.push(Symbol::new(coords, n)?);
        }
        let mut members_mapped = aligned_mapped.clone();
        members_mapped.sort();
        members_mapped.dedup();
        if members_mapped.len() != members_in_zq.len() {
            return Err(Error::Invariant(
                "window unshift map failed to be one-to-one".into(),
            ));
        }
        for (i, a) in members_mapped.iter().enumerate() {
            for b in &members_mapped[i + 1..] {
                let dist = crate::arith::l1_distance(a, b)?;
                if dist < 3 {
                    return Err(Error::Invariant(format!(
                        "window members {:?} and {:?} at L1 distance {dist} < 3",
                        a.coords(),
                        b.coords()
                    )));
                }
            }
        }
        Ok(WindowSet {
            shift,
            members_in_zq,
            aligned_mapped,
            members_mapped,
        })
    }

    pub fn shift(&self) -> &ZqVector {
        &self.shift
    }

    /// The codewords inside the window, still in `Z_q^d`.
    pub fn members_in_zq(&self) -> &[ZqVector] {
        &self.members_in_zq
    }

    /// The window contents mapped into `[0, n-1]^d`; pairwise `L_1`
    /// distance at least 3 by construction.
    pub fn members_mapped(&self) -> &[Symbol] {
        &self.members_mapped
    }

    /// Each window codeword next to its image.
    pub fn pairs(&self) -> impl Iterator<Item = (&ZqVector, &Symbol)> {
        self.members_in_zq.iter().zip(&self.aligned_mapped)
    }

    pub fn size(&self) -> usize {
        self.members_in_zq.len()
    }
}

/// Codewords `u` with every coordinate in the window `{x_i, ..., x_i+n-1}`
/// (mod q).
fn window_members(code: &LeeCode, n: u32, shift: &ZqVector) -> Vec<ZqVector> {
    code.codewords
        .iter()
        .filter(|u| {
            u.coords()
                .iter()
                .zip(shift.coords())
                .all(|(&ui, &xi)| psi(i64::from(ui) - i64::from(xi), code.q) < n)
        })
        .cloned()
        .collect()
}

/// Evaluates the window at one specific shift.
pub fn window_at(code: &LeeCode, n: u32, shift: &ZqVector) -> Result<WindowSet> {
    if n == 0 || n > code.q {
        return Err(Error::Parameter(format!(
            "window size n={n} must be in [1, q={}]",
            code.q
        )));
    }
    if shift.dim() != code.d as usize || shift.modulus() != code.q {
        return Err(Error::Parameter("shift does not live in Z_q^d".into()));
    }
    WindowSet::build(code, n, shift.clone())
}

/// Finds a shift maximizing the window population and returns its window.
///
/// For a perfect code the best window holds at least `ceil(n^d / (2d+1))`
/// codewords, by averaging over all shifts. For the syndrome construction
/// the population only depends on the syndrome class of the shift, so the
/// `2d+1` representatives `(s, 0, ..., 0)` suffice; other codes are scanned
/// over all `q^d` shifts.
pub fn extract_window(code: &LeeCode, n: u32) -> Result<WindowSet> {
    extract_window_budgeted(code, n, DEFAULT_ENUM_BUDGET)
}

pub fn extract_window_budgeted(code: &LeeCode, n: u32, budget: u64) -> Result<WindowSet> {
    if n == 0 || n > code.q {
        return Err(Error::Parameter(format!(
            "window size n={n} must be in [1, q={}]",
            code.q
        )));
    }
    if !code.verify_perfect_budgeted(budget)? {
        return Err(Error::Parameter(
            "window extraction requires a perfect code".into(),
        ));
    }

    let best_shift = if code.is_syndrome_code() {
        let mut best: Option<(usize, ZqVector)> = None;
        for s in 0..sphere_size(code.d) {
            let mut coords = vec![0u32; code.d as usize];
            coords[0] = s % code.q;
            let shift = ZqVector::from_residues(coords, code.q)?;
            let size = window_members(code, n, &shift).len();
            if best.as_ref().is_none_or(|(b, _)| size > *b) {
                best = Some((size, shift));
            }
        }
        best.expect("at least one representative").1
    } else {
        let total = space_size(code.d, code.q);
        if total > u128::from(budget) {
            return Err(Error::Capacity(format!(
                "shift scan would enumerate {total} shifts, above the budget of {budget}"
            )));
        }
        let mut best: Option<(usize, ZqVector)> = None;
        let mut coords = vec![0u32; code.d as usize];
        loop {
            let shift = ZqVector::from_residues(coords.clone(), code.q)?;
            let size = window_members(code, n, &shift).len();
            if best.as_ref().is_none_or(|(b, _)| size > *b) {
                best = Some((size, shift));
            }
            let mut i = code.d as usize;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                coords[i] += 1;
                if coords[i] < code.q {
                    break;
                }
                coords[i] = 0;
            }
            if coords.iter().all(|&c| c == 0) {
                break;
            }
        }
        best.expect("at least one shift").1
    };

    let window = WindowSet::build(code, n, best_shift)?;
    let needed = space_size(code.d, n).div_ceil(u128::from(sphere_size(code.d)));
    if (window.size() as u128) < needed {
        return Err(Error::Invariant(format!(
            "window of size {} fell below the guaranteed {needed}",
            window.size()
        )));
    }
    Ok(window)
}
