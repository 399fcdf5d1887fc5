//! Exact arithmetic substrate: rationals, sparse polynomials in ∂, λ, μ, and
//! nullspaces of rational linear systems.

mod linsys;
mod poly;
mod rat;

pub use linsys::{complement_on, nullspace, rank, rank_on, solve_affine, LinSystem, SolutionSpace};
pub use poly::{Coeff, LinForm, Monomial, Poly, TermRecord, Var};
pub use rat::{
    as_i64, binomial, delta, factorial, format_rat, int, is_negative, parse_rat, pow_i, rat,
    serde_rat, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
    #[error("row references undeclared unknown #{0}")]
    UndeclaredUnknown(usize),
}
