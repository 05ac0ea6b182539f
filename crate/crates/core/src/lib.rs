//! Exact-integer calculus on ruled surfaces: the divisor lattice, Chern data
//! and Riemann–Roch, a certificate-producing vanishing engine, and planners
//! that instantiate the construction theorems for simple prioritary bundles.

pub mod chern;
pub mod engine;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod planners;
pub mod sheaf;

pub use chern::{dual, euler_char, extension_sum, ideal_sheaf, line_bundle, twist, ChernData};
pub use error::Error;
pub use lattice::{
    curve_h0_interval, effectivity, h0_upper, intersect, make_surface, DivisorClass, Effectivity,
    EffectivityVerdict, SurfaceParams,
};
pub use planners::{
    c2_threshold, plan, plan_rank3, plan_rank4, plan_rank_r, verify_plan, ConstructionPlan,
    PlanError, PlanRequest, TheoremTag,
};
pub use sheaf::{chern_of, SheafExpr};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/surfaces.md")]
    mod surfaces {}
    #[doc = include_str!("../../../book/src/chern.md")]
    mod chern {}
    #[doc = include_str!("../../../book/src/vanishing.md")]
    mod vanishing {}
    #[doc = include_str!("../../../book/src/planners.md")]
    mod planners {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
