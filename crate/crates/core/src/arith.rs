//! Modular and integer-lattice arithmetic: canonical residues, the Lee
//! absolute value and Lee distance on `Z_q^d`, and the plain `L_1` distance
//! on `[0, n-1]^d`.
//!
//! Everything here is a pure function on immutable values. Distances are
//! accumulated in `u64`; together with the workspace-wide overflow checks
//! this keeps the arithmetic honest for any parameters the rest of the
//! crate accepts.

use crate::error::{Error, Result};

/// Canonical representative of the coset `[a]_q`, i.e. the unique
/// `b` in `[0, q-1]` with `b ≡ a (mod q)`. In particular `psi(0, q) == 0`.
#[inline]
pub fn psi(a: i64, q: u32) -> u32 {
    debug_assert!(q >= 1, "modulus must be positive");
    a.rem_euclid(i64::from(q)) as u32
}

/// Lee absolute value of `[x]_q`: `min(psi(x), q - psi(x))`.
///
/// The result lies in `[0, q/2]`.
#[inline]
pub fn lee_abs(x: i64, q: u32) -> u32 {
    let p = psi(x, q);
    p.min(q - p)
}

/// A channel symbol: a `d`-tuple of levels in `[0, n-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    coords: Vec<u32>,
    n: u32,
}

impl Symbol {
    pub fn new(coords: Vec<u32>, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("alphabet size n must be >= 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Parameter("dimension d must be >= 1".into()));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= n) {
            return Err(Error::Parameter(format!(
                "coordinate {c} outside [0, {}]",
                n - 1
            )));
        }
        Ok(Symbol { coords, n })
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn levels(&self) -> u32 {
        self.n
    }
}

/// A vector of canonical residues in `Z_q^d`.
///
/// Coordinates are stored pre-reduced to `[0, q-1]`, so structural equality
/// coincides with equality in `Z_q^d` and the type hashes cheaply.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZqVector {
    coords: Vec<u32>,
    q: u32,
}

impl ZqVector {
    /// Reduces arbitrary integer coordinates into canonical form.
    pub fn new(coords: Vec<i64>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parameter("modulus q must be >= 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Parameter("dimension d must be >= 1".into()));
        }
        let coords = coords.into_iter().map(|c| psi(c, q)).collect();
        Ok(ZqVector { coords, q })
    }

    /// Wraps coordinates already known to be canonical residues.
    pub fn from_residues(coords: Vec<u32>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parameter("modulus q must be >= 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::Parameter("dimension d must be >= 1".into()));
        }
        if coords.iter().any(|&c| c >= q) {
            return Err(Error::Parameter(format!("residue not reduced mod {q}")));
        }
        Ok(ZqVector { coords, q })
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Coordinate-wise sum in `Z_q^d`.
    pub fn add(&self, other: &ZqVector) -> Result<ZqVector> {
        check_same_space(self, other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| psi(i64::from(a) + i64::from(b), self.q))
            .collect();
        Ok(ZqVector { coords, q: self.q })
    }
}

fn check_same_space(u: &ZqVector, v: &ZqVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::Parameter(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    if u.q != v.q {
        return Err(Error::Parameter(format!(
            "modulus mismatch: {} vs {}",
            u.q, v.q
        )));
    }
    Ok(())
}

/// Lee distance on `Z_q^d`: the sum of coordinate-wise Lee absolute values
/// of the difference.
pub fn lee_distance(u: &ZqVector, v: &ZqVector) -> Result<u64> {
    check_same_space(u, v)?;
    Ok(u.coords
        .iter()
        .zip(&v.coords)
        .map(|(&a, &b)| u64::from(lee_abs(i64::from(a) - i64::from(b), u.q)))
        .sum())
}

/// `L_1` distance on symbols, over the integers (no wraparound).
pub fn l1_distance(u: &Symbol, v: &Symbol) -> Result<u64> {
    if u.dim() != v.dim() {
        return Err(Error::Parameter(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(l1_distance_coords(&u.coords, &v.coords))
}

/// `L_1` distance on raw coordinate slices. Callers guarantee equal length.
#[inline]
pub(crate) fn l1_distance_coords(u: &[u32], v: &[u32]) -> u64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .map(|(&a, &b)| u64::from(a.abs_diff(b)))
        .sum()
}
