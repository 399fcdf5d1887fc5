//! Exact computations for the loop W(a,b) Lie conformal algebra.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: rationals, polynomials in ∂, λ, μ, exact nullspaces.
//! * [`conformal_core`]: generators, λ-brackets, and axiom checks.
//! * [`formal_dist`]: the mode algebra, j-products and the λ-bracket obtained
//!   from formal distributions.
//! * [`conformal_modules`]: rank-one modules and the generic module checker.
//! * [`derivations`], [`central_ext`], [`module_ext`]: bounded-degree exact
//!   solvers for conformal derivations, 2-cocycles, and module extensions.
//!
//! Everything is exact; there is no floating point anywhere.

pub mod central_ext;
pub mod conformal_core;
pub mod conformal_modules;
pub mod derivations;
pub mod exactalg;
pub mod formal_dist;
pub mod module_ext;
pub mod report;

pub use conformal_core::{
    AlgebraSpec, Combination, CoreError, Element, Family, GeneratorId, IndexRange, LambdaElement,
};
pub use exactalg::{LinForm, LinSystem, Poly, Rat, SolutionSpace, Var};
pub use report::{AxiomReport, Residual, Status, Violation};
