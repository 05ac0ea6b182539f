//! Three-valued vanishing verdicts with replayable certificates.
//!
//! Every verdict other than `Unknown` comes with a post-order trace of rule
//! applications:
//!
//! | rule | conclusion |
//! |------|------------|
//! | V1 | `h⁰O(D) = 0` for a non-effective class, `h⁰O(D) > 0` for a certified effective one |
//! | V2 | `h²O(M) = h²I_Z(M) = h⁰O(K − M)` (Serre duality) |
//! | V3 | `h⁰I_Z(D) = 0` for generic `Z` with `|Z| ≥ h⁰`-bound of `D` |
//! | V4 | the extremes of `0 → A → E → B → 0` vanish, so the middle does |
//! | V5 | `h⁰E(−L) = 0` for a nontrivial `0 → A → E → O(L) → 0` with `h⁰A(−L) = 0` |
//! | V6 | `h¹ ≥ −χ` |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chern::{euler_char, twist, ChernData};
use crate::error::Error;
use crate::lattice::{effectivity, h0_upper, DivisorClass, Effectivity, SurfaceParams};
use crate::sheaf::{chern_of, SheafExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Zero,
    NonZero,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "zero",
            Verdict::NonZero => "nonzero",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Query {
    /// `hⁱ(expr ⊗ O(twist))` for `i ∈ {0, 1, 2}`.
    Cohomology {
        degree: u8,
        expr: SheafExpr,
        twist: DivisorClass,
    },
    /// `ext¹(quot, sub)`.
    Ext1 { quot: SheafExpr, sub: SheafExpr },
    /// Sections of `I_Z(D)` that would obstruct the Cayley–Bacharach property
    /// of `(O(D), Z)`.
    CayleyBacharach {
        divisor: DivisorClass,
        length: i64,
        generic: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum TraceStep {
    V1 {
        divisor: DivisorClass,
        effectivity: Effectivity,
    },
    V2 {
        divisor: DivisorClass,
        dual: DivisorClass,
    },
    V3 {
        divisor: DivisorClass,
        length: i64,
        h0_upper: i64,
        strict: bool,
    },
    V4 {
        degree: u8,
        twist: DivisorClass,
    },
    V5 {
        quotient: DivisorClass,
        twist: DivisorClass,
    },
    /// `h¹` (or `ext¹`) is at least `correction − χ`.
    V6 {
        chern: ChernData,
        chi: i64,
        correction: i64,
    },
}

impl TraceStep {
    pub fn rule(&self) -> &'static str {
        match self {
            TraceStep::V1 { .. } => "V1",
            TraceStep::V2 { .. } => "V2",
            TraceStep::V3 { .. } => "V3",
            TraceStep::V4 { .. } => "V4",
            TraceStep::V5 { .. } => "V5",
            TraceStep::V6 { .. } => "V6",
        }
    }

    /// Re-checks the arithmetic of this single step.
    pub fn check(&self, s: &SurfaceParams) -> Result<(), String> {
        match *self {
            TraceStep::V1 {
                divisor,
                effectivity: recorded,
            } => {
                let actual = effectivity(s, divisor).verdict;
                if recorded == Effectivity::Unknown {
                    Err(format!("V1 cites an undecided class {divisor}"))
                } else if actual != recorded {
                    Err(format!(
                        "V1 records {recorded:?} for {divisor} but the class is {actual:?}"
                    ))
                } else {
                    Ok(())
                }
            }
            TraceStep::V2 { divisor, dual } => {
                if dual == s.canonical() - divisor {
                    Ok(())
                } else {
                    Err(format!("V2 dual of {divisor} is not {dual}"))
                }
            }
            TraceStep::V3 {
                divisor,
                length,
                h0_upper: recorded,
                strict,
            } => {
                let bound = h0_upper(s, divisor);
                if bound != recorded {
                    Err(format!(
                        "V3 records h0 bound {recorded} for {divisor}, actual {bound}"
                    ))
                } else if (strict && length <= bound) || (!strict && length < bound) {
                    Err(format!("V3 length {length} does not beat bound {bound}"))
                } else {
                    Ok(())
                }
            }
            TraceStep::V4 { degree, .. } => {
                if degree == 0 || degree == 2 {
                    Ok(())
                } else {
                    Err(format!("V4 applied in degree {degree}"))
                }
            }
            TraceStep::V5 { quotient, twist } => {
                if twist == -quotient {
                    Ok(())
                } else {
                    Err(format!("V5 twist {twist} is not minus {quotient}"))
                }
            }
            TraceStep::V6 {
                chern,
                chi,
                correction,
            } => match euler_char(s, chern) {
                Ok(actual) if actual != chi => {
                    Err(format!("V6 records χ = {chi} for {chern}, actual {actual}"))
                }
                Ok(_) if correction - chi <= 0 => {
                    Err(format!("V6 bound {} is not positive", correction - chi))
                }
                Ok(_) => Ok(()),
                Err(e) => Err(e.to_string()),
            },
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::V1 {
                divisor,
                effectivity,
            } => match effectivity {
                Effectivity::NonEffective => write!(f, "V1 h0 O{divisor} = 0: non-effective"),
                Effectivity::Effective => write!(f, "V1 h0 O{divisor} > 0: effective"),
                Effectivity::Unknown => write!(f, "V1 h0 O{divisor}: undecided"),
            },
            TraceStep::V2 { divisor, dual } => {
                write!(f, "V2 h2 at {divisor} equals h0 O{dual}")
            }
            TraceStep::V3 {
                divisor,
                length,
                h0_upper,
                strict,
            } => write!(
                f,
                "V3 h0 I_Z{divisor} = 0: generic length {length} {} h0 bound {h0_upper}",
                if *strict { ">" } else { ">=" }
            ),
            TraceStep::V4 { degree, twist } => write!(f, "V4 h{degree} sandwich at twist {twist}"),
            TraceStep::V5 { quotient, twist } => {
                write!(
                    f,
                    "V5 coboundary injective for quotient O{quotient} at twist {twist}"
                )
            }
            TraceStep::V6 {
                chern,
                chi,
                correction,
            } => write!(
                f,
                "V6 chi{chern} = {chi}, bound {correction} - ({chi}) = {}",
                correction - chi
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub query: Query,
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
}

impl Certificate {
    /// Deterministic multi-line text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} = {}", self.query, self.verdict);
        for step in &self.trace {
            out.push_str("\n  ");
            out.push_str(&step.to_string());
        }
        out
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Cohomology {
                degree,
                expr,
                twist,
            } => write!(f, "h{degree} {expr} ⊗ O{twist}"),
            Query::Ext1 { quot, sub } => write!(f, "ext1({quot}, {sub})"),
            Query::CayleyBacharach {
                divisor,
                length,
                generic,
            } => write!(
                f,
                "cayley-bacharach O{divisor}, |Z| = {length}{}",
                if *generic { " generic" } else { "" }
            ),
        }
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafExpr::LineBundle { divisor } => write!(f, "O{divisor}"),
            SheafExpr::IdealSheaf {
                divisor,
                length,
                label,
                ..
            } => match label {
                Some(k) => write!(f, "I_Z{k}[{length}]{divisor}"),
                None => write!(f, "I_Z[{length}]{divisor}"),
            },
            SheafExpr::Extension {
                sub,
                quot,
                nontrivial: true,
            } => write!(f, "[{sub} | {quot}]"),
            SheafExpr::Extension { sub, quot, .. } => write!(f, "({sub} + {quot})"),
        }
    }
}

fn h0_steps(
    s: &SurfaceParams,
    expr: &SheafExpr,
    tw: DivisorClass,
    trace: &mut Vec<TraceStep>,
) -> Verdict {
    let mark = trace.len();
    let verdict = match expr {
        SheafExpr::LineBundle { divisor } => {
            let d = *divisor + tw;
            match effectivity(s, d).verdict {
                Effectivity::NonEffective => {
                    trace.push(TraceStep::V1 {
                        divisor: d,
                        effectivity: Effectivity::NonEffective,
                    });
                    Verdict::Zero
                }
                Effectivity::Effective => {
                    trace.push(TraceStep::V1 {
                        divisor: d,
                        effectivity: Effectivity::Effective,
                    });
                    Verdict::NonZero
                }
                Effectivity::Unknown => Verdict::Unknown,
            }
        }
        SheafExpr::IdealSheaf {
            divisor,
            length,
            generic,
            ..
        } => {
            let d = *divisor + tw;
            let bound = h0_upper(s, d);
            if effectivity(s, d).verdict == Effectivity::NonEffective {
                // I_Z(D) ⊂ O(D)
                trace.push(TraceStep::V1 {
                    divisor: d,
                    effectivity: Effectivity::NonEffective,
                });
                Verdict::Zero
            } else if *generic && *length >= bound {
                trace.push(TraceStep::V3 {
                    divisor: d,
                    length: *length,
                    h0_upper: bound,
                    strict: false,
                });
                Verdict::Zero
            } else {
                Verdict::Unknown
            }
        }
        SheafExpr::Extension {
            sub,
            quot,
            nontrivial,
        } => {
            let coboundary = match **quot {
                SheafExpr::LineBundle { divisor } if *nontrivial && tw == -divisor => Some(divisor),
                _ => None,
            };
            if let Some(l) = coboundary {
                if h0_steps(s, sub, tw, trace) == Verdict::Zero {
                    trace.push(TraceStep::V5 {
                        quotient: l,
                        twist: tw,
                    });
                    Verdict::Zero
                } else {
                    Verdict::Unknown
                }
            } else if h0_steps(s, sub, tw, trace) == Verdict::Zero
                && h0_steps(s, quot, tw, trace) == Verdict::Zero
            {
                trace.push(TraceStep::V4 {
                    degree: 0,
                    twist: tw,
                });
                Verdict::Zero
            } else {
                Verdict::Unknown
            }
        }
    };
    if verdict == Verdict::Unknown {
        trace.truncate(mark);
    }
    verdict
}

fn h2_steps(
    s: &SurfaceParams,
    expr: &SheafExpr,
    tw: DivisorClass,
    trace: &mut Vec<TraceStep>,
) -> Verdict {
    let mark = trace.len();
    let verdict = match expr {
        SheafExpr::LineBundle { divisor } | SheafExpr::IdealSheaf { divisor, .. } => {
            let m = *divisor + tw;
            let dual = s.canonical() - m;
            let v = h0_steps(s, &SheafExpr::line(dual), DivisorClass::ZERO, trace);
            if v != Verdict::Unknown {
                trace.push(TraceStep::V2 { divisor: m, dual });
            }
            v
        }
        SheafExpr::Extension { sub, quot, .. } => {
            if h2_steps(s, sub, tw, trace) == Verdict::Zero
                && h2_steps(s, quot, tw, trace) == Verdict::Zero
            {
                trace.push(TraceStep::V4 {
                    degree: 2,
                    twist: tw,
                });
                Verdict::Zero
            } else {
                Verdict::Unknown
            }
        }
    };
    if verdict == Verdict::Unknown {
        trace.truncate(mark);
    }
    verdict
}

/// `h⁰(expr ⊗ O(D))`.
pub fn h0_verdict(s: &SurfaceParams, expr: &SheafExpr, d: DivisorClass) -> Certificate {
    let mut trace = Vec::new();
    let verdict = h0_steps(s, expr, d, &mut trace);
    Certificate {
        query: Query::Cohomology {
            degree: 0,
            expr: expr.clone(),
            twist: d,
        },
        verdict,
        trace,
    }
}

/// `h²(expr ⊗ O(D))`, reduced leaf by leaf through Serre duality.
pub fn h2_verdict(s: &SurfaceParams, expr: &SheafExpr, d: DivisorClass) -> Certificate {
    let mut trace = Vec::new();
    let verdict = h2_steps(s, expr, d, &mut trace);
    Certificate {
        query: Query::Cohomology {
            degree: 2,
            expr: expr.clone(),
            twist: d,
        },
        verdict,
        trace,
    }
}

/// `NonZero` when `χ(expr ⊗ O(D)) < 0`.
pub fn h1_positive(
    s: &SurfaceParams,
    expr: &SheafExpr,
    d: DivisorClass,
) -> Result<Certificate, Error> {
    let chern = twist(s, chern_of(s, expr), d);
    let chi = euler_char(s, chern)?;
    let (verdict, trace) = if chi < 0 {
        (
            Verdict::NonZero,
            vec![TraceStep::V6 {
                chern,
                chi,
                correction: 0,
            }],
        )
    } else {
        (Verdict::Unknown, Vec::new())
    };
    Ok(Certificate {
        query: Query::Cohomology {
            degree: 1,
            expr: expr.clone(),
            twist: d,
        },
        verdict,
        trace,
    })
}

/// The Chern data, `χ` and length correction behind [`ext1_lower`]:
/// `ext¹(I_Z(A), G) ≥ rank(G)·|Z| − χ(G(−A))`.
fn ext1_parts(
    s: &SurfaceParams,
    quot: &SheafExpr,
    sub: &SheafExpr,
) -> Result<(ChernData, i64, i64), Error> {
    let a = quot.rank_one_divisor().ok_or(Error::UnsupportedRank {
        rank: quot.rank(),
        limit: 1,
    })?;
    let chern = twist(s, chern_of(s, sub), -a);
    let chi = euler_char(s, chern)?;
    Ok((chern, chi, chern.rank * quot.length()))
}

/// Lower bound for the dimension of `Ext¹(quot, sub)` with a rank-one
/// quotient.
pub fn ext1_lower(s: &SurfaceParams, quot: &SheafExpr, sub: &SheafExpr) -> Result<i64, Error> {
    let (_, chi, correction) = ext1_parts(s, quot, sub)?;
    Ok((correction - chi).max(0))
}

/// [`ext1_lower`] as a certificate: `NonZero` when the bound is positive.
pub fn ext1_certificate(
    s: &SurfaceParams,
    quot: &SheafExpr,
    sub: &SheafExpr,
) -> Result<Certificate, Error> {
    let (chern, chi, correction) = ext1_parts(s, quot, sub)?;
    let (verdict, trace) = if correction - chi > 0 {
        (
            Verdict::NonZero,
            vec![TraceStep::V6 {
                chern,
                chi,
                correction,
            }],
        )
    } else {
        (Verdict::Unknown, Vec::new())
    };
    Ok(Certificate {
        query: Query::Ext1 {
            quot: quot.clone(),
            sub: sub.clone(),
        },
        verdict,
        trace,
    })
}

/// Cayley–Bacharach for `(O(D'), Z)`: holds when `D'` is not effective, or
/// when `Z` is generic and strictly longer than the section bound of `D'`.
/// The certificate verdict is `Zero` exactly when the property is certified.
pub fn cayley_bacharach(
    s: &SurfaceParams,
    d: DivisorClass,
    length: i64,
    generic: bool,
) -> (bool, Certificate) {
    let bound = h0_upper(s, d);
    let trace = if effectivity(s, d).verdict == Effectivity::NonEffective {
        vec![TraceStep::V1 {
            divisor: d,
            effectivity: Effectivity::NonEffective,
        }]
    } else if generic && length > bound {
        vec![TraceStep::V3 {
            divisor: d,
            length,
            h0_upper: bound,
            strict: true,
        }]
    } else {
        Vec::new()
    };
    let holds = !trace.is_empty();
    (
        holds,
        Certificate {
            query: Query::CayleyBacharach {
                divisor: d,
                length,
                generic,
            },
            verdict: if holds {
                Verdict::Zero
            } else {
                Verdict::Unknown
            },
            trace,
        },
    )
}

/// Recomputes a certificate from its query alone.
pub fn evaluate(s: &SurfaceParams, query: &Query) -> Result<Certificate, Error> {
    match query {
        Query::Cohomology {
            degree: 0,
            expr,
            twist,
        } => Ok(h0_verdict(s, expr, *twist)),
        Query::Cohomology {
            degree: 1,
            expr,
            twist,
        } => h1_positive(s, expr, *twist),
        Query::Cohomology {
            degree: 2,
            expr,
            twist,
        } => Ok(h2_verdict(s, expr, *twist)),
        Query::Cohomology { degree, .. } => Err(Error::InternalInconsistency(format!(
            "no cohomology in degree {degree} on a surface"
        ))),
        Query::Ext1 { quot, sub } => ext1_certificate(s, quot, sub),
        Query::CayleyBacharach {
            divisor,
            length,
            generic,
        } => Ok(cayley_bacharach(s, *divisor, *length, *generic).1),
    }
}

/// Checks every step locally, then recomputes the certificate and demands
/// an identical result.
pub fn replay(s: &SurfaceParams, cert: &Certificate) -> Result<(), String> {
    if cert.trace.is_empty() && cert.verdict != Verdict::Unknown {
        return Err(format!("{} verdict without a trace", cert.verdict));
    }
    for step in &cert.trace {
        step.check(s)?;
    }
    let fresh = evaluate(s, &cert.query).map_err(|e| e.to_string())?;
    if fresh.verdict != cert.verdict {
        return Err(format!(
            "recorded verdict {} but recomputation gives {}",
            cert.verdict, fresh.verdict
        ));
    }
    if fresh.trace != cert.trace {
        return Err("recorded trace differs from recomputation".to_string());
    }
    Ok(())
}

/// Simplicity and prioritariness already established for an extension base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFlags {
    pub simple: bool,
    pub prioritary: bool,
}

impl BaseFlags {
    /// Line bundles and twisted ideal sheaves are simple and prioritary.
    pub const RANK_ONE: BaseFlags = BaseFlags {
        simple: true,
        prioritary: true,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCheck {
    /// `h¹E(−L) > 0`
    Nontrivial,
    /// `h⁰E(−L) = 0`
    SimpleH0,
    /// `h²E(K − L) = 0`
    SimpleH2,
    /// `h⁰E(K − L + f) = 0`
    PrioritaryH0,
    /// `h²E(−f − L) = 0`
    PrioritaryH2,
}

impl StepCheck {
    pub fn describe(self) -> &'static str {
        match self {
            StepCheck::Nontrivial => "h1 E(-L) > 0",
            StepCheck::SimpleH0 => "h0 E(-L) = 0",
            StepCheck::SimpleH2 => "h2 E(K-L) = 0",
            StepCheck::PrioritaryH0 => "h0 E(K-L+f) = 0",
            StepCheck::PrioritaryH2 => "h2 E(-f-L) = 0",
        }
    }

    pub fn expected(self) -> Verdict {
        match self {
            StepCheck::Nontrivial => Verdict::NonZero,
            _ => Verdict::Zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub nontrivial_ok: bool,
    pub simple: bool,
    pub prioritary: bool,
    pub certificates: Vec<(StepCheck, Certificate)>,
}

/// Conditions for the middle term of a nontrivial `0 → E → E' → O(L) → 0`
/// to inherit simplicity and prioritariness from `E`.
pub fn extension_step(
    s: &SurfaceParams,
    base: &SheafExpr,
    flags: BaseFlags,
    l: DivisorClass,
) -> Result<StepResult, Error> {
    let k = s.canonical();
    let f = DivisorClass::FIBER;
    let certificates = vec![
        (StepCheck::Nontrivial, h1_positive(s, base, -l)?),
        (StepCheck::SimpleH0, h0_verdict(s, base, -l)),
        (StepCheck::SimpleH2, h2_verdict(s, base, k - l)),
        (StepCheck::PrioritaryH0, h0_verdict(s, base, k - l + f)),
        (StepCheck::PrioritaryH2, h2_verdict(s, base, -f - l)),
    ];
    let ok = |c: StepCheck| {
        certificates
            .iter()
            .any(|(check, cert)| *check == c && cert.verdict == c.expected())
    };
    Ok(StepResult {
        nontrivial_ok: ok(StepCheck::Nontrivial),
        simple: flags.simple && ok(StepCheck::SimpleH0) && ok(StepCheck::SimpleH2),
        prioritary: flags.prioritary && ok(StepCheck::PrioritaryH0) && ok(StepCheck::PrioritaryH2),
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_surface;

    fn d(a: i64, b: i64) -> DivisorClass {
        DivisorClass::new(a, b)
    }

    #[test]
    fn negative_twist_kills_sections() {
        let s = make_surface(0, 0).unwrap();
        let c = h0_verdict(&s, &SheafExpr::line(d(3, 2)), d(-4, 0));
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(c.trace[0].rule(), "V1");
        replay(&s, &c).unwrap();
    }

    #[test]
    fn generic_points_kill_sections() {
        let s = make_surface(0, 0).unwrap();
        let z = SheafExpr::ideal(d(0, 3), 4, true).unwrap();
        let c = h0_verdict(&s, &z, DivisorClass::ZERO);
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(
            c.trace,
            vec![TraceStep::V3 {
                divisor: d(0, 3),
                length: 4,
                h0_upper: 4,
                strict: false
            }]
        );
        let short = SheafExpr::ideal(d(0, 3), 3, true).unwrap();
        assert_eq!(
            h0_verdict(&s, &short, DivisorClass::ZERO).verdict,
            Verdict::Unknown
        );
        let special = SheafExpr::ideal(d(0, 3), 4, false).unwrap();
        assert_eq!(
            h0_verdict(&s, &special, DivisorClass::ZERO).verdict,
            Verdict::Unknown
        );
    }

    #[test]
    fn coboundary_rule() {
        let s = make_surface(0, 0).unwrap();
        let l = d(1, 1);
        let base = SheafExpr::line(d(-1, 0));
        let e = SheafExpr::extension(base.clone(), SheafExpr::line(l), true);
        let c = h0_verdict(&s, &e, -l);
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(c.trace.last().unwrap().rule(), "V5");
        replay(&s, &c).unwrap();
        let split = SheafExpr::extension(base, SheafExpr::line(l), false);
        assert_eq!(h0_verdict(&s, &split, -l).verdict, Verdict::Unknown);
    }

    #[test]
    fn serre_reduction() {
        let s = make_surface(0, 0).unwrap();
        let c = h2_verdict(&s, &SheafExpr::line(d(3, 2)), DivisorClass::ZERO);
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(
            c.trace,
            vec![
                TraceStep::V1 {
                    divisor: d(-5, -4),
                    effectivity: Effectivity::NonEffective
                },
                TraceStep::V2 {
                    divisor: d(3, 2),
                    dual: d(-5, -4)
                }
            ]
        );
        replay(&s, &c).unwrap();
    }

    #[test]
    fn ideal_sheaf_at_canonical_has_top_cohomology() {
        for g in 0..2 {
            let s = make_surface(g, 1).unwrap();
            let z = SheafExpr::ideal(DivisorClass::ZERO, 3, true).unwrap();
            let c = h2_verdict(&s, &z, s.canonical());
            if g == 0 {
                assert_eq!(c.verdict, Verdict::NonZero);
                replay(&s, &c).unwrap();
            } else {
                // O_C is effective of degree 0 = 2g − 2: undecided numerically.
                assert_eq!(c.verdict, Verdict::Unknown);
            }
        }
    }

    #[test]
    fn sandwich_in_top_degree() {
        let s = make_surface(1, 1).unwrap();
        let e = SheafExpr::extension(SheafExpr::line(d(1, 1)), SheafExpr::line(d(0, 3)), true);
        let c = h2_verdict(&s, &e, DivisorClass::ZERO);
        assert_eq!(c.verdict, Verdict::Zero);
        assert_eq!(c.trace.last().unwrap().rule(), "V4");
        replay(&s, &c).unwrap();
    }

    #[test]
    fn euler_bound() {
        let s = make_surface(0, 0).unwrap();
        let c = h1_positive(&s, &SheafExpr::line(DivisorClass::ZERO), DivisorClass::ZERO).unwrap();
        assert_eq!(c.verdict, Verdict::Unknown);
        assert!(c.trace.is_empty());
        // rank-two extension of the s = 2 rank-three chain at twist −D
        for g in 0..3 {
            for e in 0..3 {
                let s = make_surface(g, e).unwrap();
                let (t, z) = (-3, 40);
                let b = -t - 1;
                let e2 = SheafExpr::extension(
                    SheafExpr::line(d(0, b)),
                    SheafExpr::ideal(d(1, -b), z, true).unwrap(),
                    true,
                );
                let c = h1_positive(&s, &e2, -d(1, t)).unwrap();
                assert_eq!(c.verdict, Verdict::NonZero);
                match &c.trace[0] {
                    TraceStep::V6 { chi, .. } => assert_eq!(*chi, 2 - g - z),
                    other => panic!("unexpected step {other:?}"),
                }
                replay(&s, &c).unwrap();
            }
        }
    }

    #[test]
    fn ext1_bounds() {
        let s = make_surface(0, 0).unwrap();
        let o = SheafExpr::line(DivisorClass::ZERO);
        assert_eq!(ext1_lower(&s, &o, &o).unwrap(), 0);
        // ext¹(I_Z(C₀ + (m−b)f), O(bf)) ≥ |Z|
        for g in 0..3 {
            for e in 0..3 {
                let s = make_surface(g, e).unwrap();
                for m in 0..2 {
                    for b in 1..6 {
                        let quot = SheafExpr::ideal(d(1, m - b), 7, true).unwrap();
                        let sub = SheafExpr::line(d(0, b));
                        assert_eq!(ext1_lower(&s, &quot, &sub).unwrap(), 7);
                    }
                }
                // ext¹(I_Z(2C₀ + (d−2b−1)f), O(−C₀ + (b+1)f)) = l + 6 − 2g + 3e − 2d + 6b
                for (dd, b, l) in [(0, 3, 2), (4, 5, 0), (2, 7, 4)] {
                    let quot = SheafExpr::ideal(d(2, dd - 2 * b - 1), l, false).unwrap();
                    let sub = SheafExpr::line(d(-1, b + 1));
                    assert_eq!(
                        ext1_lower(&s, &quot, &sub).unwrap(),
                        l + 6 - 2 * g + 3 * e - 2 * dd + 6 * b
                    );
                }
            }
        }
        let rank_two = SheafExpr::extension(o.clone(), o.clone(), false);
        assert!(matches!(
            ext1_lower(&s, &rank_two, &o),
            Err(Error::UnsupportedRank { rank: 2, limit: 1 })
        ));
    }

    #[test]
    fn cayley_bacharach_cases() {
        let s = make_surface(0, 0).unwrap();
        assert!(cayley_bacharach(&s, d(-1, 7), 0, false).0);
        assert!(!cayley_bacharach(&s, DivisorClass::ZERO, 0, true).0);
        // strict: h0 bound of (0,3) is 4
        assert!(!cayley_bacharach(&s, d(0, 3), 4, true).0);
        let (ok, cert) = cayley_bacharach(&s, d(0, 3), 5, true);
        assert!(ok);
        replay(&s, &cert).unwrap();
    }

    #[test]
    fn extension_step_on_structure_sheaf() {
        let s = make_surface(0, 0).unwrap();
        let r = extension_step(
            &s,
            &SheafExpr::line(DivisorClass::ZERO),
            BaseFlags::RANK_ONE,
            DivisorClass::ZERO,
        )
        .unwrap();
        assert!(!r.nontrivial_ok);
    }

    #[test]
    fn extension_step_for_rank_three_chain() {
        for g in 0..3 {
            for e in 0..3 {
                let s = make_surface(g, e).unwrap();
                let t = -2 - 2 * g;
                let b = -t - 1;
                let e2 = SheafExpr::extension(
                    SheafExpr::line(d(0, b)),
                    SheafExpr::ideal(d(1, -b), 30, true).unwrap(),
                    true,
                );
                let r = extension_step(&s, &e2, BaseFlags::RANK_ONE, d(1, t)).unwrap();
                assert!(r.nontrivial_ok && r.simple && r.prioritary, "g={g} e={e}");
                for (_, c) in &r.certificates {
                    replay(&s, c).unwrap();
                }
            }
        }
    }

    #[test]
    fn fiber_chain_step_certifies() {
        let s = make_surface(0, 0).unwrap();
        let dd = d(1, -1);
        let e2 = SheafExpr::extension(
            SheafExpr::line(DivisorClass::ZERO),
            SheafExpr::ideal(DivisorClass::FIBER, 48, true).unwrap(),
            true,
        );
        let r = extension_step(&s, &e2, BaseFlags::RANK_ONE, dd).unwrap();
        assert!(r.nontrivial_ok && r.simple && r.prioritary);
    }

    #[test]
    fn tampered_step_fails_replay() {
        let s = make_surface(0, 0).unwrap();
        let mut c = h0_verdict(&s, &SheafExpr::line(d(3, 2)), d(-4, 0));
        if let TraceStep::V1 { divisor, .. } = &mut c.trace[0] {
            *divisor = DivisorClass::ZERO;
        }
        assert!(replay(&s, &c).is_err());
    }

    #[test]
    fn text_form_is_stable() {
        let s = make_surface(0, 0).unwrap();
        let c = h0_verdict(&s, &SheafExpr::line(d(3, 2)), d(-4, 0));
        assert_eq!(
            c.to_text(),
            "h0 O(3,2) ⊗ O(-4,0) = zero\n  V1 h0 O(-1,2) = 0: non-effective"
        );
    }
}
