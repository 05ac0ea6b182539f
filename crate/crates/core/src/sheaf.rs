//! Expression trees of line bundles, twisted ideal sheaves and extensions.

use serde::{Deserialize, Serialize};

use crate::chern::{extension_sum, ideal_sheaf, line_bundle, ChernData};
use crate::error::Error;
use crate::lattice::{DivisorClass, SurfaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum SheafExpr {
    LineBundle {
        divisor: DivisorClass,
    },
    /// `I_Z(D)` for a zero-dimensional `Z`. Subschemes with different labels
    /// are disjoint.
    IdealSheaf {
        divisor: DivisorClass,
        length: i64,
        generic: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<u32>,
    },
    /// Middle term of `0 → sub → E → quot → 0`. A split extension is the
    /// direct sum.
    Extension {
        sub: Box<SheafExpr>,
        quot: Box<SheafExpr>,
        nontrivial: bool,
    },
}

impl SheafExpr {
    pub fn line(divisor: DivisorClass) -> Self {
        SheafExpr::LineBundle { divisor }
    }

    /// `I_Z(D)`; an empty `Z` collapses to the line bundle `O(D)`.
    pub fn ideal(divisor: DivisorClass, length: i64, generic: bool) -> Result<Self, Error> {
        Self::labelled_ideal(divisor, length, generic, None)
    }

    pub fn labelled_ideal(
        divisor: DivisorClass,
        length: i64,
        generic: bool,
        label: Option<u32>,
    ) -> Result<Self, Error> {
        match length {
            n if n < 0 => Err(Error::NegativeLength(n)),
            0 => Ok(SheafExpr::line(divisor)),
            _ => Ok(SheafExpr::IdealSheaf {
                divisor,
                length,
                generic,
                label,
            }),
        }
    }

    pub fn extension(sub: SheafExpr, quot: SheafExpr, nontrivial: bool) -> Self {
        SheafExpr::Extension {
            sub: Box::new(sub),
            quot: Box::new(quot),
            nontrivial,
        }
    }

    /// Direct sum of the given pieces, nested to the right.
    pub fn direct_sum(mut pieces: Vec<SheafExpr>) -> Option<Self> {
        let mut acc = pieces.pop()?;
        while let Some(p) = pieces.pop() {
            acc = SheafExpr::extension(p, acc, false);
        }
        Some(acc)
    }

    pub fn rank(&self) -> i64 {
        match self {
            SheafExpr::LineBundle { .. } | SheafExpr::IdealSheaf { .. } => 1,
            SheafExpr::Extension { sub, quot, .. } => sub.rank() + quot.rank(),
        }
    }

    /// Divisor of a rank-one node.
    pub fn rank_one_divisor(&self) -> Option<DivisorClass> {
        match self {
            SheafExpr::LineBundle { divisor } | SheafExpr::IdealSheaf { divisor, .. } => {
                Some(*divisor)
            }
            SheafExpr::Extension { .. } => None,
        }
    }

    /// Length of `Z` for an ideal sheaf, zero for a line bundle.
    pub fn length(&self) -> i64 {
        match self {
            SheafExpr::IdealSheaf { length, .. } => *length,
            _ => 0,
        }
    }

    /// Rank-one leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&SheafExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SheafExpr>) {
        match self {
            SheafExpr::Extension { sub, quot, .. } => {
                sub.collect_leaves(out);
                quot.collect_leaves(out);
            }
            leaf => out.push(leaf),
        }
    }

    /// The same expression with every divisor shifted by `d`.
    pub fn twisted(&self, d: DivisorClass) -> SheafExpr {
        match self {
            SheafExpr::LineBundle { divisor } => SheafExpr::line(*divisor + d),
            SheafExpr::IdealSheaf {
                divisor,
                length,
                generic,
                label,
            } => SheafExpr::IdealSheaf {
                divisor: *divisor + d,
                length: *length,
                generic: *generic,
                label: *label,
            },
            SheafExpr::Extension {
                sub,
                quot,
                nontrivial,
            } => SheafExpr::extension(sub.twisted(d), quot.twisted(d), *nontrivial),
        }
    }
}

/// Folds the Chern calculus over the expression.
pub fn chern_of(s: &SurfaceParams, expr: &SheafExpr) -> ChernData {
    match expr {
        SheafExpr::LineBundle { divisor } => line_bundle(*divisor),
        SheafExpr::IdealSheaf {
            divisor, length, ..
        } => ideal_sheaf(*divisor, *length).unwrap_or(ChernData::new(1, *divisor, *length)),
        SheafExpr::Extension { sub, quot, .. } => {
            extension_sum(s, chern_of(s, sub), chern_of(s, quot))
        }
    }
}
