//! 2-cocycles with values in a one-dimensional center.
//!
//! The center is ∂-torsion (`∂𝔠 = 0`), so cocycle values are polynomials in
//! λ alone, `φ_λ(p(∂)a, q(∂)b) = p(−λ)q(λ)φ_λ(a, b)`, and the skew condition
//! `φ_λ(a,b) = −φ_{−∂−λ}(b,a)` becomes `φ_λ(a,b) = −φ_{−λ}(b,a)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conformal_core::{AlgebraSpec, Family, GeneratorId, IndexRange};
use crate::exactalg::{
    delta, format_rat, int, nullspace, parse_rat, rank_on, serde_rat, solve_affine, Coeff, LinForm,
    LinSystem, Monomial, Poly, Rat, Var,
};
use crate::report::{AxiomReport, Residual, Violation};

/// Note attached to every central-extension report.
pub const TORSION_NOTE: &str =
    "center is ∂-torsion: φ_{−∂−λ} is evaluated as φ_{−λ}; cocycle values are polynomials in λ";

/// Default λ-degree bound of the solver.
pub const DEFAULT_LDEG: u32 = 5;

/// Values `φ_λ(x, y)` on ordered generator pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCocycle<C: Coeff = Rat> {
    pub values: BTreeMap<(GeneratorId, GeneratorId), Poly<C>>,
}

impl<C: Coeff> Default for TwoCocycle<C> {
    fn default() -> Self {
        TwoCocycle {
            values: BTreeMap::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CocycleEntry {
    left: GeneratorId,
    right: GeneratorId,
    value: Poly,
}

impl Serialize for TwoCocycle<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<CocycleEntry> = self
            .values
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|((l, r), p)| CocycleEntry {
                left: *l,
                right: *r,
                value: p.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoCocycle<Rat> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<CocycleEntry>::deserialize(d)?;
        let mut c = TwoCocycle::default();
        for e in v {
            c.values.insert((e.left, e.right), e.value);
        }
        Ok(c)
    }
}

impl<C: Coeff> TwoCocycle<C> {
    /// `φ_θ(x, y)`, if tabulated.
    fn at(&self, x: GeneratorId, y: GeneratorId, theta: &Poly) -> Option<Poly<C>> {
        self.values.get(&(x, y)).map(|p| p.substitute(Var::L, theta))
    }
}

/// `φ_λ(a,b) + φ_{−λ}(b,a)`.
fn skew_residual<C: Coeff>(phi: &TwoCocycle<C>, a: GeneratorId, b: GeneratorId) -> Option<Poly<C>> {
    let ab = phi.at(a, b, &Poly::lambda())?;
    let ba = phi.at(b, a, &Poly::lambda().neg_ref())?;
    Some(&ab + &ba)
}

/// `φ_{λ+μ}([a λ b], c) − φ_λ(a, [b μ c]) + φ_μ(b, [a λ c])`.
fn jacobi_residual<C: Coeff>(
    alg: &AlgebraSpec,
    phi: &TwoCocycle<C>,
    a: GeneratorId,
    b: GeneratorId,
    c: GeneratorId,
) -> Option<Poly<C>> {
    let (l, m) = (Poly::lambda(), Poly::mu());
    let lm = &l + &m;
    let mut res = Poly::<C>::zero();
    // φ_{λ+μ}(r(∂,λ) g, c) = r(−λ−μ, λ) φ_{λ+μ}(g, c)
    for (g, r) in alg.generator_bracket(a, b).ok()?.iter() {
        let coef = r.substitute(Var::D, &lm.neg_ref());
        res = &res + &(&phi.at(*g, c, &lm)? * &coef);
    }
    // φ_λ(a, s(∂,μ) g) = s(λ, μ) φ_λ(a, g)
    for (g, s) in alg.generator_bracket(b, c).ok()?.iter() {
        let coef = s.substitute_many(&[(Var::D, &l), (Var::L, &m)]);
        res = &res - &(&phi.at(a, *g, &l)? * &coef);
    }
    // φ_μ(b, t(∂,λ) g) = t(μ, λ) φ_μ(b, g)
    for (g, t) in alg.generator_bracket(a, c).ok()?.iter() {
        let coef = t.substitute(Var::D, &m);
        res = &res + &(&phi.at(b, *g, &m)? * &coef);
    }
    Some(res)
}

/// Skew symmetry on every tabulated pair and the Jacobi condition on every
/// triple of window generators whose brackets land on tabulated pairs.
pub fn check_two_cocycle(b: &Rat, phi: &TwoCocycle, window: &IndexRange) -> AxiomReport {
    let alg = AlgebraSpec::clw(b.clone());
    let gens = alg.generators_in(window);
    let mut rep = AxiomReport::new();
    for &x in &gens {
        for &y in &gens {
            if let Some(r) = skew_residual(phi, x, y) {
                rep.record((!r.is_zero()).then(|| {
                    Violation::new("cocycle-skew", vec![x.to_string(), y.to_string()], Residual::Poly(r))
                }));
            }
        }
    }
    for &x in &gens {
        for &y in &gens {
            for &z in &gens {
                if let Some(r) = jacobi_residual(&alg, phi, x, y, z) {
                    rep.record((!r.is_zero()).then(|| {
                        Violation::new(
                            "cocycle-jacobi",
                            vec![x.to_string(), y.to_string(), z.to_string()],
                            Residual::Poly(r),
                        )
                    }));
                }
            }
        }
    }
    rep
}

/// The eight coefficient functions of the classified cocycles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleFamily {
    #[serde(rename = "A", default, with = "seq_entries")]
    pub a: BTreeMap<i64, Rat>,
    #[serde(rename = "A'", default, with = "seq_entries")]
    pub a1: BTreeMap<i64, Rat>,
    #[serde(rename = "B", default, with = "seq_entries")]
    pub b: BTreeMap<i64, Rat>,
    #[serde(rename = "B'", default, with = "seq_entries")]
    pub b1: BTreeMap<i64, Rat>,
    #[serde(rename = "B''", default, with = "seq_entries")]
    pub b2: BTreeMap<i64, Rat>,
    #[serde(rename = "B'''", default, with = "seq_entries")]
    pub b3: BTreeMap<i64, Rat>,
    #[serde(rename = "C", default, with = "seq_entries")]
    pub c: BTreeMap<i64, Rat>,
    #[serde(rename = "C'", default, with = "seq_entries")]
    pub c1: BTreeMap<i64, Rat>,
}

mod seq_entries {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        m: i64,
        value: String,
    }

    pub fn serialize<S: Serializer>(v: &BTreeMap<i64, Rat>, s: S) -> Result<S::Ok, S::Error> {
        let e: Vec<Entry> = v
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(m, x)| Entry {
                m: *m,
                value: format_rat(x),
            })
            .collect();
        e.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, Rat>, D::Error> {
        let e = Vec::<Entry>::deserialize(d)?;
        e.into_iter()
            .map(|x| {
                parse_rat(&x.value)
                    .map(|v| (x.m, v))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl CocycleFamily {
    fn names() -> [&'static str; 8] {
        ["A", "A'", "B", "B'", "B''", "B'''", "C", "C'"]
    }

    fn slots(&self) -> [&BTreeMap<i64, Rat>; 8] {
        [&self.a, &self.a1, &self.b, &self.b1, &self.b2, &self.b3, &self.c, &self.c1]
    }

    fn slots_mut(&mut self) -> [&mut BTreeMap<i64, Rat>; 8] {
        [
            &mut self.a,
            &mut self.a1,
            &mut self.b,
            &mut self.b1,
            &mut self.b2,
            &mut self.b3,
            &mut self.c,
            &mut self.c1,
        ]
    }

    /// `(slot, λ-degree, pair type)` for each function; the pair type is
    /// `(LL, LI, II)` as 0, 1, 2.
    fn layout() -> [(usize, u32, usize); 8] {
        [(0, 1, 0), (1, 3, 0), (2, 0, 1), (3, 1, 1), (4, 2, 1), (5, 3, 1), (6, 0, 2), (7, 1, 2)]
    }

    /// The δ-factor in front of each function at parameter `b`.
    fn factors(b: &Rat) -> [Rat; 8] {
        [
            Rat::one(),
            Rat::one(),
            delta(b, &int(1)),
            Rat::one(),
            delta(b, &int(0)),
            delta(b, &int(-1)),
            delta(&(b * int(2)), &int(1)),
            delta(b, &int(0)),
        ]
    }
}

fn pair_type(x: GeneratorId, y: GeneratorId) -> Option<usize> {
    match (x.family, y.family) {
        (Family::L, Family::L) => Some(0),
        (Family::L, Family::I) => Some(1),
        (Family::I, Family::I) => Some(2),
        (Family::I, Family::L) => None,
    }
}

/// `φ_λ(L_i,L_j) = A(i+j)λ + A'(i+j)λ³`,
/// `φ_λ(L_i,I_j) = δ_{b,1}B + B'λ + δ_{b,0}B''λ² + δ_{b,−1}B'''λ³`,
/// `φ_λ(I_i,I_j) = δ_{2b,1}C + δ_{b,0}C'λ` (all at `i+j`), and
/// `φ_λ(I_i,L_j) = −φ_{−λ}(L_j,I_i)`, on all pairs in `window`.
pub fn family_to_cocycle(b: &Rat, fam: &CocycleFamily, window: &IndexRange) -> TwoCocycle {
    let alg = AlgebraSpec::clw(b.clone());
    let gens = alg.generators_in(window);
    let factors = CocycleFamily::factors(b);
    let slots = fam.slots();
    let mut phi = TwoCocycle::default();
    for &x in &gens {
        for &y in &gens {
            let Some(t) = pair_type(x, y) else {
                continue;
            };
            let m = x.index + y.index;
            let mut p = Poly::zero();
            for (slot, deg, ty) in CocycleFamily::layout() {
                if ty != t {
                    continue;
                }
                if let Some(v) = slots[slot].get(&m) {
                    p = &p + &Poly::term(v * &factors[slot], 0, deg, 0);
                }
            }
            phi.values.insert((x, y), p);
        }
    }
    for &x in &gens {
        for &y in &gens {
            if x.family == Family::I && y.family == Family::L {
                let v = phi.values[&(y, x)].substitute(Var::L, &Poly::lambda().neg_ref()).neg_ref();
                phi.values.insert((x, y), v);
            }
        }
    }
    phi
}

/// λ-degrees predicted by the classification for each pair type at `b`.
pub fn predicted_supports(b: &Rat) -> [BTreeSet<u32>; 3] {
    let f = CocycleFamily::factors(b);
    let mut out: [BTreeSet<u32>; 3] = Default::default();
    for (slot, deg, ty) in CocycleFamily::layout() {
        if !f[slot].is_zero() {
            out[ty].insert(deg);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PairTypeSummary {
    pub pair: &'static str,
    /// Rank of the solution space restricted to interior pairs of this type.
    pub interior_dim: usize,
    /// λ-degrees that occur, per interior index sum.
    pub support_by_sum: BTreeMap<i64, BTreeSet<u32>>,
    pub support: BTreeSet<u32>,
    pub predicted_support: BTreeSet<u32>,
    pub matches_prediction: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralReport {
    #[serde(with = "serde_rat")]
    pub b: Rat,
    pub note: &'static str,
    pub window: i64,
    pub interior_sums: IndexRange,
    pub ldeg: u32,
    pub dim_solutions: usize,
    pub dim_interior: usize,
    pub pair_types: Vec<PairTypeSummary>,
    /// Every basis element depends on the pair only through `i+j` on the interior.
    pub depends_only_on_sum: bool,
    /// Every basis element, restricted to the interior, is a classified family.
    pub families_fit: bool,
    pub basis_families: Vec<CocycleFamily>,
}

impl CentralReport {
    pub fn pattern_matches(&self) -> bool {
        self.pair_types.iter().all(|p| p.matches_prediction)
    }
}

/// Solution of the cocycle system: the unknowns for a window, split in
/// blocks of constant index sum (the conditions never mix sums).
pub struct CentralSolution {
    pub window: IndexRange,
    pub ldeg: u32,
    /// Basis of cocycles, one block-local vector per element.
    pub basis: Vec<TwoCocycle>,
}

fn unknown_cocycle(sys: &mut LinSystem, pairs: &[(GeneratorId, GeneratorId)], ldeg: u32) -> TwoCocycle<LinForm> {
    let mut phi = TwoCocycle::default();
    for &(x, y) in pairs {
        let mut p = Poly::<LinForm>::zero();
        for q in 0..=ldeg {
            let idx = sys.unknown(format!("phi({x},{y}).l{q}"));
            p = &p + &Poly::term(Rat::one(), 0, q, 0).times_unknown(idx);
        }
        phi.values.insert((x, y), p);
    }
    phi
}

/// All cocycles with values of λ-degree at most `ldeg` on the pairs of
/// `|i| <= window`.
pub fn solve_cocycles(b: &Rat, window: i64, ldeg: u32) -> CentralSolution {
    let alg = AlgebraSpec::clw(b.clone());
    let w = IndexRange::symmetric(window);
    let gens = alg.generators_in(&w);
    let mut basis = Vec::new();
    for s in -2 * window..=2 * window {
        let pairs: Vec<(GeneratorId, GeneratorId)> = gens
            .iter()
            .flat_map(|&x| gens.iter().map(move |&y| (x, y)))
            .filter(|(x, y)| x.index + y.index == s)
            .collect();
        let mut sys = LinSystem::new();
        let phi = unknown_cocycle(&mut sys, &pairs, ldeg);
        for &(x, y) in &pairs {
            let r = skew_residual(&phi, x, y).expect("tabulated pair");
            sys.require_zero(&r).expect("declared unknowns");
        }
        for &x in &gens {
            for &y in &gens {
                for &z in &gens {
                    if x.index + y.index + z.index != s {
                        continue;
                    }
                    if let Some(r) = jacobi_residual(&alg, &phi, x, y, z) {
                        sys.require_zero(&r).expect("declared unknowns");
                    }
                }
            }
        }
        let space = nullspace(&sys);
        for v in &space.basis {
            let mut c = TwoCocycle::default();
            for (k, p) in &phi.values {
                c.values.insert(*k, p.eval_unknowns(v));
            }
            basis.push(c);
        }
    }
    CentralSolution {
        window: w,
        ldeg,
        basis,
    }
}

fn coords_of(phi: &TwoCocycle, keys: &[((GeneratorId, GeneratorId), u32)]) -> Vec<Rat> {
    keys.iter()
        .map(|((x, y), q)| {
            phi.values
                .get(&(*x, *y))
                .map(|p| p.coeff(&Monomial::new(0, *q, 0)))
                .unwrap_or_else(Rat::zero)
        })
        .collect()
}

/// Fits a family to `phi` on the pairs of `window` with index sum in `sums`.
pub fn fit_family(b: &Rat, phi: &TwoCocycle, window: &IndexRange, sums: &IndexRange) -> Option<CocycleFamily> {
    let mut sys = LinSystem::new();
    let names = CocycleFamily::names();
    let mut idx = BTreeMap::new();
    for (slot, name) in names.iter().enumerate() {
        for m in sums.iter() {
            idx.insert((slot, m), sys.unknown(format!("{name}({m})")));
        }
    }
    let factors = CocycleFamily::factors(b);
    let mut rhs = Vec::new();
    for ((x, y), p) in &phi.values {
        let Some(t) = pair_type(*x, *y) else {
            continue;
        };
        let m = x.index + y.index;
        if !window.contains(x.index) || !window.contains(y.index) || !sums.contains(m) {
            continue;
        }
        let top = p.degree_in(Var::L).unwrap_or(0).max(3);
        for q in 0..=top {
            let mut row = Vec::new();
            for (slot, deg, ty) in CocycleFamily::layout() {
                if ty == t && deg == q && !factors[slot].is_zero() {
                    row.push((idx[&(slot, m)], factors[slot].clone()));
                }
            }
            let target = p.coeff(&Monomial::new(0, q, 0));
            if row.is_empty() {
                if !target.is_zero() {
                    return None;
                }
                continue;
            }
            sys.add_row(row).expect("declared unknowns");
            rhs.push(target);
        }
    }
    let x = solve_affine(&sys, &rhs)?;
    let mut fam = CocycleFamily::default();
    let slots = fam.slots_mut();
    for ((slot, m), i) in &idx {
        if !x[*i].is_zero() {
            slots[*slot].insert(*m, x[*i].clone());
        }
    }
    Some(fam)
}

/// Solves the cocycle system on `|i| <= window` and classifies the result
/// on pairs whose index sum lies in `interior_sums`.
pub fn solve_central(b: &Rat, window: i64, interior_sums: &IndexRange, ldeg: u32) -> CentralReport {
    let sol = solve_cocycles(b, window, ldeg);
    let w = IndexRange::symmetric(window);
    let alg = AlgebraSpec::clw(b.clone());
    let gens = alg.generators_in(&w);
    let interior_pairs: Vec<(GeneratorId, GeneratorId)> = gens
        .iter()
        .flat_map(|&x| gens.iter().map(move |&y| (x, y)))
        .filter(|(x, y)| interior_sums.contains(x.index + y.index) && pair_type(*x, *y).is_some())
        .collect();
    let keys_of = |t: Option<usize>| -> Vec<((GeneratorId, GeneratorId), u32)> {
        interior_pairs
            .iter()
            .filter(|(x, y)| t.is_none() || pair_type(*x, *y) == t)
            .flat_map(|p| (0..=ldeg).map(move |q| (*p, q)))
            .collect()
    };
    let vecs = |keys: &[((GeneratorId, GeneratorId), u32)]| -> Vec<Vec<Rat>> {
        sol.basis.iter().map(|c| coords_of(c, keys)).collect()
    };
    let all_keys = keys_of(None);
    let all_vecs = vecs(&all_keys);
    let all_coords: Vec<usize> = (0..all_keys.len()).collect();
    let dim_interior = rank_on(&all_vecs, &all_coords);

    let predicted = predicted_supports(b);
    let names = ["LL", "LI", "II"];
    let mut pair_types = Vec::new();
    for t in 0..3 {
        let keys = keys_of(Some(t));
        let vs = vecs(&keys);
        let coords: Vec<usize> = (0..keys.len()).collect();
        let mut support_by_sum: BTreeMap<i64, BTreeSet<u32>> = interior_sums.iter().map(|m| (m, BTreeSet::new())).collect();
        for v in &vs {
            for (k, ((x, y), q)) in keys.iter().enumerate() {
                if !v[k].is_zero() {
                    support_by_sum.entry(x.index + y.index).or_default().insert(*q);
                }
            }
        }
        let support: BTreeSet<u32> = support_by_sum.values().flatten().copied().collect();
        let matches_prediction = support_by_sum.values().all(|s| *s == predicted[t]);
        pair_types.push(PairTypeSummary {
            pair: names[t],
            interior_dim: rank_on(&vs, &coords),
            support_by_sum,
            support,
            predicted_support: predicted[t].clone(),
            matches_prediction,
        });
    }

    let zero = Poly::zero();
    let depends_only_on_sum = sol.basis.iter().all(|c| {
        let mut seen: BTreeMap<(usize, i64), &Poly> = BTreeMap::new();
        interior_pairs.iter().all(|(x, y)| {
            let t = pair_type(*x, *y).expect("filtered");
            let p = c.values.get(&(*x, *y)).unwrap_or(&zero);
            match seen.get(&(t, x.index + y.index)) {
                Some(q) => *q == p,
                None => {
                    seen.insert((t, x.index + y.index), p);
                    true
                }
            }
        })
    });

    let fits: Vec<Option<CocycleFamily>> = sol
        .basis
        .iter()
        .map(|c| fit_family(b, c, &w, interior_sums))
        .collect();
    let families_fit = fits.iter().all(|f| f.is_some());
    let basis_families = fits
        .into_iter()
        .flatten()
        .filter(|f| f.slots().iter().any(|s| !s.is_empty()))
        .collect();

    CentralReport {
        b: b.clone(),
        note: TORSION_NOTE,
        window,
        interior_sums: *interior_sums,
        ldeg,
        dim_solutions: sol.basis.len(),
        dim_interior,
        pair_types,
        depends_only_on_sum,
        families_fit,
        basis_families,
    }
}

/// A family with every coefficient function equal to `1` on `sums`, used
/// for inclusion checks.
pub fn unit_family(sums: &IndexRange) -> CocycleFamily {
    let mut f = CocycleFamily::default();
    for slot in f.slots_mut() {
        for m in sums.iter() {
            slot.insert(m, Rat::one());
        }
    }
    f
}

/// Family with a single nonzero function, handy in examples.
pub fn single_family(name: &str, m: i64, value: Rat) -> Option<CocycleFamily> {
    let pos = CocycleFamily::names().iter().position(|n| *n == name)?;
    let mut f = CocycleFamily::default();
    f.slots_mut()[pos].insert(m, value);
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn family_values() {
        let w = IndexRange::symmetric(2);
        let f = single_family("B'''", 0, int(1)).unwrap();
        let phi = family_to_cocycle(&int(-1), &f, &w);
        assert_eq!(phi.values[&(GeneratorId::l(2), GeneratorId::i(-2))], Poly::lambda().pow(3));

        let f = single_family("C", 1, int(3)).unwrap();
        let phi = family_to_cocycle(&rat(1, 2), &f, &w);
        assert_eq!(phi.values[&(GeneratorId::i(0), GeneratorId::i(1))], Poly::constant(int(3)));

        let f = single_family("B", 0, int(5)).unwrap();
        let phi = family_to_cocycle(&int(2), &f, &w);
        assert!(phi.values.values().all(|p| p.is_zero()));
    }

    #[test]
    fn even_lambda_square_is_not_skew() {
        let w = IndexRange::symmetric(1);
        let mut phi = TwoCocycle::default();
        for i in w.iter() {
            for j in w.iter() {
                phi.values.insert((GeneratorId::l(i), GeneratorId::l(j)), Poly::lambda().pow(2));
            }
        }
        let rep = check_two_cocycle(&int(0), &phi, &w);
        assert!(rep.count("cocycle-skew") > 0);
        assert!(check_two_cocycle(&int(0), &TwoCocycle::default(), &w).passed());
    }

    #[test]
    fn families_are_cocycles_away_from_the_half() {
        let w = IndexRange::symmetric(2);
        let sums = IndexRange::symmetric(4);
        for b in [int(-1), int(0), int(1), int(2)] {
            let phi = family_to_cocycle(&b, &unit_family(&sums), &w);
            let rep = check_two_cocycle(&b, &phi, &w);
            assert!(rep.passed(), "b={b}: {:?}", rep.violations.first());
        }
    }

    #[test]
    fn index_weighted_constant_is_a_cocycle_at_b_two() {
        // φ_λ(L_i, I_j) = i, φ_λ(I_j, L_i) = −i, zero elsewhere
        let w = IndexRange::symmetric(2);
        let b = int(2);
        let mut phi = family_to_cocycle(&b, &CocycleFamily::default(), &w);
        for i in w.iter() {
            for j in w.iter() {
                phi.values.insert((GeneratorId::l(i), GeneratorId::i(j)), Poly::constant(int(i)));
                phi.values.insert((GeneratorId::i(j), GeneratorId::l(i)), Poly::constant(int(-i)));
            }
        }
        assert!(check_two_cocycle(&b, &phi, &w).passed());
        assert!(fit_family(&b, &phi, &w, &IndexRange::symmetric(1)).is_none());
        assert!(!check_two_cocycle(&int(3), &phi, &w).passed());
    }

    #[test]
    fn constant_ii_value_violates_skew() {
        let w = IndexRange::symmetric(1);
        let f = single_family("C", 0, int(1)).unwrap();
        let phi = family_to_cocycle(&rat(1, 2), &f, &w);
        let rep = check_two_cocycle(&rat(1, 2), &phi, &w);
        assert!(rep.count("cocycle-skew") > 0);
    }

    #[test]
    fn small_solve_matches_prediction() {
        let r = solve_central(&int(0), 2, &IndexRange::symmetric(1), 4);
        assert!(r.depends_only_on_sum);
        assert!(r.families_fit);
        assert!(r.pattern_matches(), "{:?}", r.pair_types);
        assert_eq!(r.pair_types[0].interior_dim, 6);
    }
}
