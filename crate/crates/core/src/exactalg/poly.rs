//! Sparse polynomials in the fixed variables ∂, λ, μ.
//!
//! A [`Poly`] is generic over its coefficient type. Ordinary polynomials use
//! [`Rat`]; solvers use [`LinForm`] coefficients so that an unknown polynomial
//! ansatz can be pushed through the same bracket code as a concrete one, and
//! each coefficient of the final residual becomes one linear equation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{format_rat, Rat};
use super::ExactError;

/// One of the three formal variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// ∂
    D,
    /// λ
    L,
    /// μ
    M,
}

/// Exponent triple `(d, l, m)` for `∂^d λ^l μ^m`. The derived order is
/// lexicographic on `(d, l, m)`, which is the canonical term order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub d: u32,
    pub l: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { d: 0, l: 0, m: 0 };

    pub fn new(d: u32, l: u32, m: u32) -> Self {
        Monomial { d, l, m }
    }

    pub fn exp(&self, v: Var) -> u32 {
        match v {
            Var::D => self.d,
            Var::L => self.l,
            Var::M => self.m,
        }
    }

    fn with_exp(mut self, v: Var, e: u32) -> Self {
        match v {
            Var::D => self.d = e,
            Var::L => self.l = e,
            Var::M => self.m = e,
        }
        self
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.d + o.d, self.l + o.l, self.m + o.m)
    }
}

/// Coefficient ring (or ℚ-module) of a [`Poly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero_coeff() -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scaled(&self, k: &Rat) -> Self;
}

impl Coeff for Rat {
    fn zero_coeff() -> Self {
        Zero::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, k: &Rat) -> Self {
        self * k
    }
}

/// A sparse ℚ-linear form in solver unknowns, keyed by unknown index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinForm(BTreeMap<usize, Rat>);

impl LinForm {
    pub fn unknown(idx: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(idx, Rat::one());
        LinForm(m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    /// Value of the form at a concrete assignment of the unknowns.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        self.0
            .iter()
            .fold(Rat::zero(), |acc, (k, v)| acc + v * &values[*k])
    }
}

impl Coeff for LinForm {
    fn zero_coeff() -> Self {
        LinForm::default()
    }
    fn is_zero_coeff(&self) -> bool {
        self.0.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (k, v) in &other.0 {
            let e = self.0.entry(*k).or_insert_with(Rat::zero);
            *e += v;
            if Zero::is_zero(e) {
                self.0.remove(k);
            }
        }
    }
    fn scaled(&self, k: &Rat) -> Self {
        if Zero::is_zero(k) {
            return LinForm::default();
        }
        LinForm(self.0.iter().map(|(i, v)| (*i, v * k)).collect())
    }
}

/// Sparse polynomial in ∂, λ, μ with coefficients in `C`.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C = Rat> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(mon: Monomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(mon, &c);
        p
    }

    pub fn add_term(&mut self, mon: Monomial, c: &C) {
        if c.is_zero_coeff() {
            return;
        }
        match self.terms.get_mut(&mon) {
            Some(e) => {
                e.add_assign_ref(c);
                if e.is_zero_coeff() {
                    self.terms.remove(&mon);
                }
            }
            None => {
                self.terms.insert(mon, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mon: &Monomial) -> C {
        self.terms.get(mon).cloned().unwrap_or_else(C::zero_coeff)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    /// True when only variables in `allowed` occur.
    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.terms.keys().all(|m| {
            [Var::D, Var::L, Var::M]
                .iter()
                .all(|v| m.exp(*v) == 0 || allowed.contains(v))
        })
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }

    pub fn add_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(*m, c);
        }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, &c.scaled(&-Rat::one()));
        }
        r
    }

    pub fn neg_ref(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if Zero::is_zero(k) {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.scaled(k)))
                .collect(),
        }
    }

    /// Product with a polynomial over ℚ.
    pub fn mul_known(&self, k: &Poly<Rat>) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &k.terms {
                r.add_term(m1.mul(m2), &c1.scaled(c2));
            }
        }
        r
    }

    /// Simultaneous substitution of each listed variable by a polynomial
    /// over ℚ, fully expanded.
    pub fn substitute_many(&self, subs: &[(Var, &Poly<Rat>)]) -> Self {
        let mut powers: Vec<(Var, Vec<Poly<Rat>>)> = subs
            .iter()
            .map(|(v, img)| {
                let max = self.degree_in(*v).unwrap_or(0) as usize;
                let mut pw = Vec::with_capacity(max + 1);
                pw.push(Poly::one());
                for k in 1..=max {
                    let next = &pw[k - 1] * *img;
                    pw.push(next);
                }
                (*v, pw)
            })
            .collect();
        powers.sort_by_key(|(v, _)| *v);
        let mut r = Self::zero();
        for (mon, c) in &self.terms {
            let mut rest = *mon;
            let mut factor = Poly::<Rat>::one();
            for (v, pw) in &powers {
                let e = mon.exp(*v) as usize;
                rest = rest.with_exp(*v, 0);
                if e > 0 {
                    factor = &factor * &pw[e];
                }
            }
            for (fm, fc) in &factor.terms {
                r.add_term(rest.mul(fm), &c.scaled(fc));
            }
        }
        r
    }

    pub fn substitute(&self, v: Var, image: &Poly<Rat>) -> Self {
        self.substitute_many(&[(v, image)])
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut r = Poly::<D>::zero();
        for (m, c) in &self.terms {
            r.add_term(*m, &f(c));
        }
        r
    }

    /// Splits off the coefficient polynomials of each power of `v`.
    pub fn collect_in(&self, v: Var) -> BTreeMap<u32, Poly<C>> {
        let mut out: BTreeMap<u32, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(v))
                .or_default()
                .add_term(m.with_exp(v, 0), c);
        }
        out
    }
}

impl Poly<LinForm> {
    /// Evaluates every coefficient form at a concrete assignment.
    pub fn eval_unknowns(&self, values: &[Rat]) -> Poly<Rat> {
        self.map_coeffs(|f| f.eval(values))
    }
}

impl Poly<Rat> {
    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::ONE.with_exp(v, 1), Rat::one())
    }

    pub fn d() -> Self {
        Self::var(Var::D)
    }
    pub fn lambda() -> Self {
        Self::var(Var::L)
    }
    pub fn mu() -> Self {
        Self::var(Var::M)
    }

    /// Coefficient-by-coefficient builder: `c·∂^d λ^l μ^m`.
    pub fn term(c: Rat, d: u32, l: u32, m: u32) -> Self {
        Self::monomial(Monomial::new(d, l, m), c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Lifts to linear-form coefficients (constant forms are not
    /// representable, so this is only used for the zero-free case of scaling
    /// a single unknown).
    pub fn times_unknown(&self, idx: usize) -> Poly<LinForm> {
        self.map_coeffs(|c| LinForm::unknown(idx).scaled(c))
    }

    /// Evaluates at rational values, returning a rational.
    pub fn eval(&self, d: &Rat, l: &Rat, m: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (mon, c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..mon.d {
                t *= d;
            }
            for _ in 0..mon.l {
                t *= l;
            }
            for _ in 0..mon.m {
                t *= m;
            }
            acc += t;
        }
        acc
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                coeff: format_rat(c),
                d: m.d,
                l: m.l,
                m: m.m,
            })
            .collect()
    }

    pub fn from_records(recs: &[TermRecord]) -> Result<Self, ExactError> {
        let mut p = Poly::zero();
        for r in recs {
            let c = super::rat::parse_rat(&r.coeff)?;
            p.add_term(Monomial::new(r.d, r.l, r.m), &c);
        }
        Ok(p)
    }
}

/// One serialized term: `{coeff: "p/q", d, l, m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub d: u32,
    pub l: u32,
    pub m: u32,
}

impl Serialize for Poly<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly<Rat> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let recs = Vec::<TermRecord>::deserialize(d)?;
        Poly::from_records(&recs).map_err(serde::de::Error::custom)
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl fmt::Display for Poly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest powers first reads more naturally.
        for (n, (mon, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            for (sym, e) in [("∂", mon.d), ("λ", mon.l), ("μ", mon.m)] {
                match e {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{e}")),
                }
            }
            let unit = mag.is_one();
            if factors.is_empty() {
                write!(f, "{}", format_rat(&mag))?;
            } else if unit {
                write!(f, "{}", factors.join(""))?;
            } else {
                write!(f, "{}{}", format_rat(&mag), factors.join(""))?;
            }
        }
        Ok(())
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: &Poly<C>) -> Poly<C> {
        self.add_ref(o)
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, o: Poly<C>) -> Poly<C> {
        self.add_assign_ref(&o);
        self
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: &Poly<C>) -> Poly<C> {
        self.sub_ref(o)
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: Poly<C>) -> Poly<C> {
        self.sub_ref(&o)
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_ref()
    }
}

impl<'a, C: Coeff> Neg for &'a Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.neg_ref()
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<Rat>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: &Poly<Rat>) -> Poly<C> {
        self.mul_known(o)
    }
}

impl<C: Coeff> Mul<Poly<Rat>> for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: Poly<Rat>) -> Poly<C> {
        self.mul_known(&o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    fn d() -> Poly {
        Poly::d()
    }
    fn l() -> Poly {
        Poly::lambda()
    }
    fn m() -> Poly {
        Poly::mu()
    }
    fn k(n: i64) -> Poly {
        Poly::constant(int(n))
    }

    #[test]
    fn arithmetic_examples() {
        let p = &d() + &(&k(2) * &l());
        assert_eq!(&p * &d(), &d().pow(2) + &(&k(2) * &(&l() * &d())));
        assert!((&(&l() - &m()) + &(&m() - &l())).is_zero());
        assert_eq!(p.scale(&rat(1, 2)), &d().scale(&rat(1, 2)) + &l());
    }

    #[test]
    fn substitution_examples() {
        let skew = -(&d() + &l());
        let sq = l().pow(2).substitute(Var::L, &skew);
        assert_eq!(sq, &(&d().pow(2) + &(&k(2) * &(&d() * &l()))) + &l().pow(2));
        assert_eq!(l().substitute(Var::L, &(&l() + &m())), &l() + &m());
        let p = &d() + &(&k(2) * &l());
        assert_eq!(p.substitute(Var::L, &skew), -(&d() + &(&k(2) * &l())));
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        let p = &l() * &m().pow(2);
        let swapped = p.substitute_many(&[(Var::L, &m()), (Var::M, &l())]);
        assert_eq!(swapped, &m() * &l().pow(2));
    }

    #[test]
    fn display_is_readable() {
        let p = &(&d() + &(&k(2) * &l())) * &d();
        assert_eq!(p.to_string(), "∂^2 + 2∂λ");
        assert_eq!(Poly::<Rat>::zero().to_string(), "0");
        assert_eq!((-(&d() - &k(1))).to_string(), "-∂ + 1");
    }

    #[test]
    fn records_are_sorted_canonically() {
        let p = &(&l() + &d()) + &k(3);
        let recs = p.to_records();
        let keys: Vec<_> = recs.iter().map(|r| (r.d, r.l, r.m)).collect();
        assert_eq!(keys, vec![(0, 0, 0), (0, 1, 0), (1, 0, 0)]);
        assert_eq!(Poly::from_records(&recs).unwrap(), p);
    }

    #[test]
    fn linform_coefficients_track_unknowns() {
        let a = d().times_unknown(0);
        let b = l().times_unknown(1);
        let s = (&a + &b).mul_known(&(&d() + &l()));
        let vals = vec![int(2), int(-1)];
        let concrete = &(&d().scale(&int(2)) - &l()) * &(&d() + &l());
        assert_eq!(s.eval_unknowns(&vals), concrete);
    }
}
