//! Generators, elements, and λ-brackets of ℤ-graded Lie conformal algebras
//! presented on a free ℂ[∂]-basis, with exact checks of skew symmetry, the
//! Jacobi identity, and the grading.

mod axioms;
mod bracket;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactalg::{Coeff, Poly, Rat, Var};

pub use axioms::{check_graded, check_jacobi, check_skew, jacobi_residual, skew_residual};
pub use bracket::{clw_bracket, extend_bracket, AlgebraSpec};
pub use table::{TableAlgebra, TableFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    #[error("bracket [{left} λ {right}] is outside the table window")]
    WindowExceeded { left: GeneratorId, right: GeneratorId },
    #[error("generator {0} is not declared in the table")]
    UnknownGenerator(GeneratorId),
    #[error("malformed algebra table: {0}")]
    BadTable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    L,
    I,
}

/// A ℂ[∂]-basis element `L_i` or `I_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorId {
    pub family: Family,
    pub index: i64,
}

impl GeneratorId {
    pub fn l(index: i64) -> Self {
        GeneratorId {
            family: Family::L,
            index,
        }
    }

    pub fn i(index: i64) -> Self {
        GeneratorId {
            family: Family::I,
            index,
        }
    }

    pub fn shifted(self, by: i64) -> Self {
        GeneratorId {
            family: self.family,
            index: self.index + by,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::L => "L",
            Family::I => "I",
        };
        write!(f, "{fam}{}", self.index)
    }
}

/// Closed integer interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl IndexRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        IndexRange { lo, hi }
    }

    /// `|i| <= n`
    pub fn symmetric(n: i64) -> Self {
        IndexRange { lo: -n, hi: n }
    }

    pub fn empty() -> Self {
        IndexRange { lo: 1, hi: 0 }
    }

    pub fn contains(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Drops `k` indices from each end.
    pub fn shrink(&self, k: i64) -> Self {
        IndexRange::new(self.lo + k, self.hi - k)
    }
}

/// Finite combination `Σ p_g · g` of generators with polynomial
/// coefficients. With coefficients in ∂ only this is an algebra element;
/// with λ (and μ) present it is a λ-bracket value.
#[derive(Clone, PartialEq, Eq)]
pub struct Combination<C: Coeff = Rat> {
    terms: BTreeMap<GeneratorId, Poly<C>>,
}

/// An element `Σ p_g(∂) g`.
pub type Element = Combination<Rat>;
/// A bracket value `Σ p_g(∂, λ) g`.
pub type LambdaElement = Combination<Rat>;

impl<C: Coeff> Default for Combination<C> {
    fn default() -> Self {
        Combination {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> Combination<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(g: GeneratorId, p: Poly<C>) -> Self {
        let mut c = Self::zero();
        c.add_term(g, &p);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: GeneratorId, p: &Poly<C>) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(g).or_default();
        e.add_assign_ref(p);
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn get(&self, g: &GeneratorId) -> Poly<C> {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorId, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GeneratorId> {
        self.terms.keys()
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, p) in &o.terms {
            r.add_term(*g, p);
        }
        r
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, p) in &o.terms {
            r.add_term(*g, &p.neg_ref());
        }
        r
    }

    pub fn scale(&self, k: &Rat) -> Self {
        self.map(|p| p.scale(k))
    }

    /// Multiplies every coefficient by a known polynomial.
    pub fn mul_poly(&self, k: &Poly<Rat>) -> Self {
        self.map(|p| p.mul_known(k))
    }

    pub fn substitute(&self, v: Var, image: &Poly<Rat>) -> Self {
        self.map(|p| p.substitute(v, image))
    }

    pub fn map(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut r = Self::zero();
        for (g, p) in &self.terms {
            r.add_term(*g, &f(p));
        }
        r
    }

    pub fn uses_only(&self, vars: &[Var]) -> bool {
        self.terms.values().all(|p| p.uses_only(vars))
    }
}

impl Combination<Rat> {
    /// The bare generator `g` (coefficient 1).
    pub fn gen(g: GeneratorId) -> Self {
        Self::single(g, Poly::one())
    }

    /// Multiplies by ∂ (every coefficient times ∂).
    pub fn d_times(&self) -> Self {
        self.mul_poly(&Poly::d())
    }
}

impl<C: Coeff> fmt::Debug for Combination<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(g, p)| (g.to_string(), p)))
            .finish()
    }
}

impl fmt::Display for Combination<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, p)| format!("({p}){g}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct CombinationEntry {
    generator: GeneratorId,
    poly: Poly<Rat>,
}

impl Serialize for Combination<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<CombinationEntry> = self
            .terms
            .iter()
            .map(|(g, p)| CombinationEntry {
                generator: *g,
                poly: p.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Combination<Rat> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<CombinationEntry>::deserialize(d)?;
        let mut c = Combination::zero();
        for e in v {
            c.add_term(e.generator, &e.poly);
        }
        Ok(c)
    }
}
