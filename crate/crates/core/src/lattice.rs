//! Numerical divisor lattice of a ruled surface.
//!
//! `Num(X)` is free of rank two on the section class `C₀` and the fiber
//! class `f`, with `C₀² = −e`, `C₀·f = 1`, `f² = 0`. Every class is stored as
//! the coefficient pair `(a, b)` of `aC₀ + bf`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The class `aC₀ + bf` in `Num(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass { a: 0, b: 0 };
    /// The section class `C₀`.
    pub const SECTION: DivisorClass = DivisorClass { a: 1, b: 0 };
    /// The fiber class `f`.
    pub const FIBER: DivisorClass = DivisorClass { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        DivisorClass { a, b }
    }

    /// `b·f`, the pullback of a degree-`b` divisor on the base curve.
    pub const fn fiber(b: i64) -> Self {
        DivisorClass { a: 0, b }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.a, -self.b)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * rhs.a, self * rhs.b)
    }
}

impl std::iter::Sum for DivisorClass {
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> DivisorClass {
        iter.fold(DivisorClass::ZERO, Add::add)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A ruled surface, up to numerical equivalence: base genus `g` and
/// invariant `e`. The shifted invariant `ē = e − 2(g − 1)` and the canonical
/// class `K = −2C₀ − ēf` are derived once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SurfaceRepr", into = "SurfaceRepr")]
pub struct SurfaceParams {
    g: i64,
    e: i64,
    ebar: i64,
    canonical: DivisorClass,
}

#[derive(Serialize, Deserialize)]
struct SurfaceRepr {
    g: i64,
    e: i64,
}

impl TryFrom<SurfaceRepr> for SurfaceParams {
    type Error = Error;
    fn try_from(r: SurfaceRepr) -> Result<Self, Error> {
        make_surface(r.g, r.e)
    }
}

impl From<SurfaceParams> for SurfaceRepr {
    fn from(s: SurfaceParams) -> Self {
        SurfaceRepr { g: s.g, e: s.e }
    }
}

impl SurfaceParams {
    pub fn genus(&self) -> i64 {
        self.g
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    /// `ē = e − 2g + 2`.
    pub fn ebar(&self) -> i64 {
        self.ebar
    }

    /// `K_X = (−2, −ē)`.
    pub fn canonical(&self) -> DivisorClass {
        self.canonical
    }

    pub fn intersect(&self, d1: DivisorClass, d2: DivisorClass) -> i64 {
        intersect(self, d1, d2)
    }

    pub fn self_intersection(&self, d: DivisorClass) -> i64 {
        intersect(self, d, d)
    }
}

/// Builds the surface with base genus `g` and invariant `e`.
pub fn make_surface(g: i64, e: i64) -> Result<SurfaceParams, Error> {
    if g < 0 || e < 0 {
        return Err(Error::InvalidSurface { g, e });
    }
    let ebar = e - 2 * g + 2;
    Ok(SurfaceParams {
        g,
        e,
        ebar,
        canonical: DivisorClass::new(-2, -ebar),
    })
}

/// Intersection pairing `(a₁C₀ + b₁f)·(a₂C₀ + b₂f) = a₁b₂ + a₂b₁ − a₁a₂e`.
pub fn intersect(s: &SurfaceParams, d1: DivisorClass, d2: DivisorClass) -> i64 {
    d1.a * d2.b + d2.a * d1.b - d1.a * d2.a * s.e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Effectivity {
    NonEffective,
    Effective,
    Unknown,
}

/// Effectivity of a numerical class together with the rule that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EffectivityVerdict {
    pub verdict: Effectivity,
    pub reason: &'static str,
}

/// Decides effectivity where the numerics allow it.
///
/// A class with a negative coefficient is never effective. A class with
/// `a, b ≥ 0` and `b > 2g − 2` always has sections, since `h⁰O_X(D)` is at
/// least `h⁰O_C(𝔟) = b + 1 − g > 0`. The remaining band `0 ≤ b ≤ 2g − 2`
/// depends on the actual divisor `𝔟` on the curve.
pub fn effectivity(s: &SurfaceParams, d: DivisorClass) -> EffectivityVerdict {
    if d.a < 0 || d.b < 0 {
        EffectivityVerdict {
            verdict: Effectivity::NonEffective,
            reason: "negative-coefficient",
        }
    } else if d.b > 2 * s.g - 2 {
        EffectivityVerdict {
            verdict: Effectivity::Effective,
            reason: "fiber-degree-above-canonical",
        }
    } else {
        EffectivityVerdict {
            verdict: Effectivity::Unknown,
            reason: "special-fiber-degree",
        }
    }
}

/// Upper bound for `h⁰O_X(aC₀ + bf)` obtained by splitting the symmetric power
/// `S^a` into line bundles of degree `b − je` and bounding each by
/// `max(0, deg + 1)`.
pub fn h0_upper(s: &SurfaceParams, d: DivisorClass) -> i64 {
    if d.a < 0 || d.b < 0 {
        return 0;
    }
    (0..=d.a).map(|j| (d.b - j * s.e + 1).max(0)).sum()
}

/// Interval containing `h⁰O_C(𝔟)` for a degree-`deg` divisor on a genus-`g`
/// curve. Outside the special range the value is forced by Riemann–Roch;
/// inside it the upper end is the Clifford bound.
pub fn curve_h0_interval(g: i64, deg: i64) -> (i64, i64) {
    if deg < 0 {
        (0, 0)
    } else if deg > 2 * g - 2 {
        (deg + 1 - g, deg + 1 - g)
    } else {
        ((deg + 1 - g).max(0), deg.div_euclid(2) + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surf(g: i64, e: i64) -> SurfaceParams {
        make_surface(g, e).unwrap()
    }

    #[test]
    fn canonical_class_examples() {
        let s = surf(0, 0);
        assert_eq!((s.ebar(), s.canonical()), (2, DivisorClass::new(-2, -2)));
        let s = surf(1, 0);
        assert_eq!((s.ebar(), s.canonical()), (0, DivisorClass::new(-2, 0)));
        let s = surf(2, 1);
        assert_eq!((s.ebar(), s.canonical()), (-1, DivisorClass::new(-2, 1)));
    }

    #[test]
    fn rejects_negative_invariants() {
        assert!(matches!(
            make_surface(-1, 0),
            Err(Error::InvalidSurface { .. })
        ));
        assert!(matches!(
            make_surface(0, -3),
            Err(Error::InvalidSurface { .. })
        ));
    }

    #[test]
    fn intersection_examples() {
        let c0 = DivisorClass::SECTION;
        let f = DivisorClass::FIBER;
        assert_eq!(intersect(&surf(0, 2), c0, c0), -2);
        for e in 0..4 {
            assert_eq!(intersect(&surf(0, e), c0, f), 1);
            assert_eq!(intersect(&surf(0, e), f, f), 0);
        }
        // (2C₀+3f)(C₀−f) = 2·(−1) + 1·3 − 2·1·1
        assert_eq!(
            intersect(
                &surf(0, 1),
                DivisorClass::new(2, 3),
                DivisorClass::new(1, -1)
            ),
            -1
        );
    }

    #[test]
    fn effectivity_examples() {
        assert_eq!(
            effectivity(&surf(0, 0), DivisorClass::new(-1, 5)).verdict,
            Effectivity::NonEffective
        );
        assert_eq!(
            effectivity(&surf(0, 3), DivisorClass::new(1, 0)).verdict,
            Effectivity::Effective
        );
        assert_eq!(
            effectivity(&surf(2, 0), DivisorClass::new(1, 2)).verdict,
            Effectivity::Unknown
        );
    }

    #[test]
    fn h0_upper_examples() {
        assert_eq!(h0_upper(&surf(0, 1), DivisorClass::new(-1, 5)), 0);
        assert_eq!(h0_upper(&surf(0, 1), DivisorClass::new(2, 1)), 3);
        assert_eq!(h0_upper(&surf(0, 0), DivisorClass::new(0, 3)), 4);
    }

    #[test]
    fn h0_upper_within_rank_r_section_bound() {
        // h⁰O_X(D_i − 𝔟f) ≤ (i+1)(r−i−b+1) for D_i − 𝔟f = (i, r−i−b)
        for e in 0..4 {
            let s = surf(0, e);
            for r in 4..10 {
                for i in 2..=r - 2 {
                    for b in 0..r {
                        let d = DivisorClass::new(i, r - i - b);
                        if d.b >= 0 {
                            assert!(h0_upper(&s, d) <= (i + 1) * (r - i - b + 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn curve_interval_examples() {
        assert_eq!(curve_h0_interval(0, -1), (0, 0));
        assert_eq!(curve_h0_interval(1, 3), (3, 3));
        assert_eq!(curve_h0_interval(2, 2), (1, 2));
    }

    fn class() -> impl Strategy<Value = DivisorClass> {
        (-20i64..20, -20i64..20).prop_map(|(a, b)| DivisorClass::new(a, b))
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_bilinear(g in 0i64..6, e in 0i64..6, d1 in class(), d2 in class(), d3 in class()) {
            let s = surf(g, e);
            prop_assert_eq!(intersect(&s, d1 + d2, d3), intersect(&s, d1, d3) + intersect(&s, d2, d3));
            prop_assert_eq!(intersect(&s, d1, d2), intersect(&s, d2, d1));
        }

        #[test]
        fn adjunction_parity(g in 0i64..6, e in 0i64..6, d in class()) {
            let s = surf(g, e);
            prop_assert_eq!((intersect(&s, d, d) - intersect(&s, d, s.canonical())).rem_euclid(2), 0);
        }

        #[test]
        fn non_effective_has_no_sections(g in 0i64..6, e in 0i64..6, d in class()) {
            let s = surf(g, e);
            if effectivity(&s, d).verdict == Effectivity::NonEffective {
                prop_assert_eq!(h0_upper(&s, d), 0);
            }
        }

        #[test]
        fn h0_upper_monotone_in_fiber_degree(e in 0i64..6, a in 0i64..8, b in -5i64..20) {
            let s = surf(0, e);
            prop_assert!(h0_upper(&s, DivisorClass::new(a, b)) <= h0_upper(&s, DivisorClass::new(a, b + 1)));
            prop_assert!(h0_upper(&s, DivisorClass::new(a, b)) <= (a + 1) * (b + 1).max(0));
        }

        #[test]
        fn h0_upper_untwisted_product(a in 0i64..8, b in -5i64..20) {
            let s = surf(0, 0);
            prop_assert_eq!(h0_upper(&s, DivisorClass::new(a, b)), (a + 1) * (b + 1).max(0));
        }
    }
}
