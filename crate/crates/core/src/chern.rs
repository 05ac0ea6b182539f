//! Chern data of sheaves on a ruled surface and the Riemann–Roch Euler
//! characteristic `χ = r(1−g) − c₁·K/2 + c₁²/2 − c₂`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{intersect, DivisorClass, SurfaceParams};

/// Rank, first Chern class and second Chern number of a sheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: DivisorClass,
    pub c2: i64,
}

impl ChernData {
    pub const fn new(rank: i64, c1: DivisorClass, c2: i64) -> Self {
        ChernData { rank, c1, c2 }
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, c1={}, c2={})", self.rank, self.c1, self.c2)
    }
}

pub fn line_bundle(d: DivisorClass) -> ChernData {
    ChernData::new(1, d, 0)
}

/// `I_Z(D)` for a zero-dimensional `Z` of length `n`.
pub fn ideal_sheaf(d: DivisorClass, n: i64) -> Result<ChernData, Error> {
    if n < 0 {
        return Err(Error::NegativeLength(n));
    }
    Ok(ChernData::new(1, d, n))
}

/// Chern data of `E ⊗ O(D)`.
pub fn twist(s: &SurfaceParams, c: ChernData, d: DivisorClass) -> ChernData {
    let r = c.rank;
    ChernData {
        rank: r,
        c1: c.c1 + r * d,
        c2: c.c2 + (r - 1) * intersect(s, c.c1, d) + r * (r - 1) / 2 * intersect(s, d, d),
    }
}

/// Chern data of the dual. Only ranks one and two are supported.
pub fn dual(c: ChernData) -> Result<ChernData, Error> {
    if c.rank > 2 {
        return Err(Error::UnsupportedRank {
            rank: c.rank,
            limit: 2,
        });
    }
    Ok(ChernData::new(c.rank, -c.c1, c.c2))
}

/// Middle term of `0 → sub → E → quot → 0` (Whitney formula).
pub fn extension_sum(s: &SurfaceParams, sub: ChernData, quot: ChernData) -> ChernData {
    ChernData {
        rank: sub.rank + quot.rank,
        c1: sub.c1 + quot.c1,
        c2: sub.c2 + quot.c2 + intersect(s, sub.c1, quot.c1),
    }
}

pub fn euler_char(s: &SurfaceParams, c: ChernData) -> Result<i64, Error> {
    let k = s.canonical();
    let doubled = intersect(s, c.c1, c.c1) - intersect(s, c.c1, k);
    if doubled.rem_euclid(2) != 0 {
        return Err(Error::InternalInconsistency(format!(
            "c1² − c1·K is odd for c1 = {}",
            c.c1
        )));
    }
    Ok(c.rank * (1 - s.genus()) + doubled / 2 - c.c2)
}
