//! Conformal linear maps, the derivation identity, inner derivations, and a
//! graded bounded-degree solver for the derivations of the loop algebra.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::conformal_core::{AlgebraSpec, Combination, CoreError, Element, Family, GeneratorId, IndexRange, LambdaElement};
use crate::exactalg::{
    complement_on, format_rat, nullspace, rank_on, serde_rat, Coeff, LinForm, LinSystem, Poly, Rat,
    Var,
};
use crate::report::{AxiomReport, Residual, Violation};

/// `g ↦ φ_λ(g)` on finitely many generators, extended by
/// `φ_λ(p(∂)g) = p(∂+λ)φ_λ(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalMap<C: Coeff = Rat> {
    pub images: BTreeMap<GeneratorId, Combination<C>>,
}

impl<C: Coeff> Default for ConformalMap<C> {
    fn default() -> Self {
        ConformalMap {
            images: BTreeMap::new(),
        }
    }
}

impl Serialize for ConformalMap<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &LambdaElement> =
            self.images.iter().map(|(g, v)| (g.to_string(), v)).collect();
        m.serialize(s)
    }
}

impl<C: Coeff> ConformalMap<C> {
    pub fn image(&self, g: &GeneratorId) -> Result<&Combination<C>, CoreError> {
        self.images.get(g).ok_or(CoreError::WindowExceeded { left: *g, right: *g })
    }

    /// `φ_λ(x)`.
    pub fn apply(&self, x: &Element) -> Result<Combination<C>, CoreError> {
        let shift = &Poly::d() + &Poly::lambda();
        let mut out = Combination::zero();
        for (g, p) in x.iter() {
            let img = self.image(g)?;
            let p = p.substitute(Var::D, &shift);
            out = out.add_ref(&img.mul_poly(&p));
        }
        Ok(out)
    }
}

pub fn apply_map(m: &ConformalMap, x: &Element) -> Result<LambdaElement, CoreError> {
    m.apply(x)
}

/// `D_λ([a μ b]) − [(D_λ a)_{λ+μ} b] − [a μ (D_λ b)]` for two generators.
pub fn derivation_residual<C: Coeff>(
    alg: &AlgebraSpec,
    m: &ConformalMap<C>,
    a: GeneratorId,
    b: GeneratorId,
) -> Result<Combination<C>, CoreError> {
    let l = Poly::lambda();
    let mu = Poly::mu();
    let lm = &l + &mu;
    let ab = alg.generator_bracket(a, b)?.substitute(Var::L, &mu);
    let lhs = m.apply(&ab)?;
    let t1 = alg.bracket_at(m.image(&a)?, &Element::gen(b), &lm)?;
    let t2 = alg.bracket_at_right(&Element::gen(a), m.image(&b)?, &mu)?;
    Ok(lhs.sub_ref(&t1).sub_ref(&t2))
}

/// Checks the derivation identity on every generator pair in `window` whose
/// bracket lands on generators the map is defined on.
pub fn is_derivation(alg: &AlgebraSpec, m: &ConformalMap, window: &IndexRange) -> AxiomReport {
    let gens = alg.generators_in(window);
    let mut rep = AxiomReport::new();
    for &a in &gens {
        for &b in &gens {
            match derivation_residual(alg, m, a, b) {
                Ok(r) => rep.record((!r.is_zero()).then(|| {
                    Violation::new("derivation", vec![a.to_string(), b.to_string()], Residual::Lambda(r))
                })),
                Err(CoreError::WindowExceeded { .. }) => {}
                Err(e) => rep.record(Some(Violation::new(
                    "derivation",
                    vec![a.to_string(), b.to_string()],
                    Residual::Note(e.to_string()),
                ))),
            }
        }
    }
    rep
}

/// `ad_x`, tabulated on the generators of `window`.
pub fn inner(alg: &AlgebraSpec, x: &Element, window: &IndexRange) -> Result<ConformalMap, CoreError> {
    let mut m = ConformalMap::default();
    for g in alg.generators_in(window) {
        m.images.insert(g, alg.bracket_at(x, &Element::gen(g), &Poly::lambda())?);
    }
    Ok(m)
}

/// Finitely supported sequence `c ↦ a_c`.
pub type SeqA = BTreeMap<i64, Rat>;

/// `L_i ↦ Σ_c a_c I_{i+c}`, `I_i ↦ 0` on `window`.
pub fn d_family(seq: &SeqA, window: &IndexRange) -> ConformalMap {
    let mut m = ConformalMap::default();
    for i in window.iter() {
        let mut img = LambdaElement::zero();
        for (c, a) in seq {
            img.add_term(GeneratorId::i(i + c), &Poly::constant(a.clone()));
        }
        m.images.insert(GeneratorId::l(i), img);
        m.images.insert(GeneratorId::i(i), LambdaElement::zero());
    }
    m
}

/// Unknown coefficient of `∂^p λ^q t` in `D_λ(s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Coord {
    source: GeneratorId,
    target: GeneratorId,
    p: u32,
    q: u32,
}

/// Degree-`c` maps with images of bounded degree, as unknowns.
struct Ansatz {
    sys: LinSystem,
    coords: BTreeMap<Coord, usize>,
    map: ConformalMap<LinForm>,
}

impl Ansatz {
    fn new(degree: i64, window: &IndexRange, pdeg: u32, ldeg: u32) -> Self {
        let mut sys = LinSystem::new();
        let mut coords = BTreeMap::new();
        let mut map = ConformalMap::default();
        for src_fam in [Family::L, Family::I] {
            for j in window.iter() {
                let source = GeneratorId { family: src_fam, index: j };
                let mut img = Combination::<LinForm>::zero();
                for tgt_fam in [Family::L, Family::I] {
                    let target = GeneratorId {
                        family: tgt_fam,
                        index: j + degree,
                    };
                    let mut poly = Poly::<LinForm>::zero();
                    for p in 0..=pdeg {
                        for q in 0..=ldeg {
                            let idx = sys.unknown(format!("D({source})[{target}].d{p}l{q}"));
                            coords.insert(Coord { source, target, p, q }, idx);
                            poly = &poly + &Poly::term(Rat::from_integer(1.into()), p, q, 0).times_unknown(idx);
                        }
                    }
                    img.add_term(target, &poly);
                }
                map.images.insert(source, img);
            }
        }
        Ansatz { sys, coords, map }
    }

    /// Coordinates of a concrete map; `None` if it leaves the ansatz.
    fn vector(&self, m: &ConformalMap) -> Option<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.sys.num_unknowns()];
        let sources: Vec<GeneratorId> = self.map.images.keys().copied().collect();
        for source in sources {
            let Some(img) = m.images.get(&source) else {
                continue;
            };
            for (target, poly) in img.iter() {
                for (mon, c) in poly.terms() {
                    if mon.m != 0 {
                        return None;
                    }
                    let idx = self.coords.get(&Coord {
                        source,
                        target: *target,
                        p: mon.d,
                        q: mon.l,
                    })?;
                    v[*idx] = c.clone();
                }
            }
        }
        Some(v)
    }

    /// The concrete map with coordinates `v`.
    fn map_of(&self, v: &[Rat]) -> ConformalMap {
        let mut m = ConformalMap::default();
        for (coord, idx) in &self.coords {
            let img = m.images.entry(coord.source).or_default();
            img.add_term(coord.target, &Poly::term(v[*idx].clone(), coord.p, coord.q, 0));
        }
        m
    }

    fn interior_coords(&self, interior: &IndexRange) -> Vec<usize> {
        self.coords
            .iter()
            .filter(|(c, _)| interior.contains(c.source.index))
            .map(|(_, i)| *i)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivationReport {
    #[serde(with = "serde_rat")]
    pub b: Rat,
    pub degree: i64,
    pub window: i64,
    pub interior: i64,
    pub pdeg: u32,
    pub ldeg: u32,
    pub dim_solutions: usize,
    pub dim_inner: usize,
    pub quotient_dim: usize,
    /// Every bounded inner derivation lies in the solution space.
    pub inner_contained: bool,
    /// Representatives of the quotient, restricted to interior generators.
    pub basis: Vec<ConformalMap>,
}

/// `ad_{∂^k g}` for `g ∈ {L_c, I_c}` and `k <= pdeg`.
fn inner_generators(alg: &AlgebraSpec, degree: i64, window: &IndexRange, pdeg: u32) -> Vec<ConformalMap> {
    let mut out = Vec::new();
    for g in [GeneratorId::l(degree), GeneratorId::i(degree)] {
        for k in 0..=pdeg {
            let x = Element::single(g, Poly::term(Rat::from_integer(1.into()), k, 0, 0));
            if let Ok(m) = inner(alg, &x, window) {
                out.push(m);
            }
        }
    }
    out
}

impl Ansatz {
    /// Coordinates spanning the combinations of `maps` that fit in the
    /// ansatz; terms of too high degree must cancel.
    fn restrict(&self, maps: &[ConformalMap]) -> Vec<Vec<Rat>> {
        let mut sys = LinSystem::new();
        let ys: Vec<usize> = (0..maps.len()).map(|k| sys.unknown(format!("y{k}"))).collect();
        let mut inside: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); maps.len()];
        let mut outside: BTreeMap<(GeneratorId, GeneratorId, u32, u32, u32), LinForm> = BTreeMap::new();
        for (k, m) in maps.iter().enumerate() {
            for (source, img) in &m.images {
                if !self.map.images.contains_key(source) {
                    continue;
                }
                for (target, poly) in img.iter() {
                    for (mon, c) in poly.terms() {
                        let coord = Coord {
                            source: *source,
                            target: *target,
                            p: mon.d,
                            q: mon.l,
                        };
                        match self.coords.get(&coord) {
                            Some(idx) if mon.m == 0 => inside[k].push((*idx, c.clone())),
                            _ => outside
                                .entry((*source, *target, mon.d, mon.l, mon.m))
                                .or_default()
                                .add_assign_ref(&LinForm::unknown(ys[k]).scaled(c)),
                        }
                    }
                }
            }
        }
        for f in outside.values() {
            sys.add_form(f).expect("declared unknowns");
        }
        let combos = nullspace(&sys);
        combos
            .basis
            .iter()
            .map(|y| {
                let mut v = vec![Rat::zero(); self.sys.num_unknowns()];
                for (k, entries) in inside.iter().enumerate() {
                    for (idx, c) in entries {
                        v[*idx] += &y[k] * c;
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves for all degree-`degree` derivations of the loop algebra with
/// images of ∂-degree at most `pdeg` and λ-degree at most `ldeg` on
/// `|j| <= window`, then measures the quotient by the bounded inner
/// derivations on the interior generators.
pub fn solve_derivations(b: &Rat, degree: i64, window: i64, interior: i64, pdeg: u32, ldeg: u32) -> DerivationReport {
    let alg = AlgebraSpec::clw(b.clone());
    let w = IndexRange::symmetric(window);
    let inner_w = IndexRange::symmetric(interior);
    let mut ans = Ansatz::new(degree, &w, pdeg, ldeg);
    let gens = alg.generators_in(&w);
    for &a in &gens {
        for &bb in &gens {
            if !w.contains(a.index + bb.index) {
                continue;
            }
            let r = derivation_residual(&alg, &ans.map, a, bb).expect("bracket inside window");
            for (_, p) in r.iter() {
                ans.sys.require_zero(p).expect("declared unknowns");
            }
        }
    }
    let space = nullspace(&ans.sys);
    let inner_vecs = ans.restrict(&inner_generators(&alg, degree, &w, pdeg));
    let inner_contained = inner_vecs
        .iter()
        .all(|v| ans.sys.residuals(v).iter().all(|r| r.is_zero()));
    let coords = ans.interior_coords(&inner_w);
    let dim_solutions = rank_on(&space.basis, &coords);
    let dim_inner = rank_on(&inner_vecs, &coords);
    let reps = complement_on(&inner_vecs, &space.basis, &coords);
    let basis = reps
        .iter()
        .map(|k| {
            let mut m = ans.map_of(&space.basis[*k]);
            m.images.retain(|g, img| inner_w.contains(g.index) && !img.is_zero());
            m
        })
        .collect();
    DerivationReport {
        b: b.clone(),
        degree,
        window,
        interior,
        pdeg,
        ldeg,
        dim_solutions,
        dim_inner,
        quotient_dim: dim_solutions - dim_inner,
        inner_contained,
        basis,
    }
}

/// Whether `m` agrees on the interior generators with some bounded inner
/// derivation of degree `degree` (exact linear solve).
pub fn is_inner_on(b: &Rat, m: &ConformalMap, degree: i64, window: i64, interior: i64, pdeg: u32, ldeg: u32) -> bool {
    let alg = AlgebraSpec::clw(b.clone());
    let w = IndexRange::symmetric(window);
    let ans = Ansatz::new(degree, &w, pdeg, ldeg);
    let Some(v) = ans.vector(m) else {
        return false;
    };
    let coords = ans.interior_coords(&IndexRange::symmetric(interior));
    let mut inner_vecs = ans.restrict(&inner_generators(&alg, degree, &w, pdeg));
    let before = rank_on(&inner_vecs, &coords);
    inner_vecs.push(v);
    rank_on(&inner_vecs, &coords) == before
}

/// Text form of a sequence for reports.
pub fn describe_seq(seq: &SeqA) -> String {
    let parts: Vec<String> = seq.iter().map(|(c, a)| format!("a_{c}={}", format_rat(a))).collect();
    parts.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn apply_examples() {
        let w = IndexRange::symmetric(2);
        let mut id = ConformalMap::default();
        id.images.insert(GeneratorId::l(0), LambdaElement::gen(GeneratorId::l(0)));
        let x = Element::gen(GeneratorId::l(0)).d_times();
        let v = apply_map(&id, &x).unwrap();
        assert_eq!(v, LambdaElement::single(GeneratorId::l(0), &Poly::d() + &Poly::lambda()));

        let alg = AlgebraSpec::clw(int(3));
        let ad = inner(&alg, &Element::gen(GeneratorId::i(0)), &w).unwrap();
        let img = ad.image(&GeneratorId::l(1)).unwrap();
        let want = &Poly::d().scale(&int(-3)) + &Poly::lambda().scale(&int(-2));
        assert_eq!(img, &LambdaElement::single(GeneratorId::i(1), want));
    }

    #[test]
    fn inner_maps_are_derivations() {
        let w = IndexRange::symmetric(2);
        let alg = AlgebraSpec::clw(int(2));
        let x = Element::gen(GeneratorId::l(1))
            .d_times()
            .add_ref(&Element::gen(GeneratorId::i(-1)).scale(&int(3)));
        let ad = inner(&alg, &x, &IndexRange::symmetric(3)).unwrap();
        assert!(is_derivation(&alg, &ad, &w).passed());
    }

    #[test]
    fn family_maps() {
        let seq: SeqA = [(0, int(1)), (2, int(-1))].into_iter().collect();
        let m = d_family(&seq, &IndexRange::symmetric(3));
        let mut want = LambdaElement::gen(GeneratorId::i(3));
        want.add_term(GeneratorId::i(5), &Poly::constant(int(-1)));
        assert_eq!(m.images[&GeneratorId::l(3)], want);

        let seq: SeqA = [(0, int(1))].into_iter().collect();
        let w = IndexRange::symmetric(2);
        let m = d_family(&seq, &IndexRange::symmetric(4));
        assert!(is_derivation(&AlgebraSpec::clw(int(0)), &m, &w).passed());
        assert!(!is_derivation(&AlgebraSpec::clw(int(1)), &m, &w).passed());
    }

    #[test]
    fn small_solve() {
        let r0 = solve_derivations(&int(0), 0, 2, 1, 1, 2);
        assert!(r0.inner_contained);
        assert_eq!(r0.quotient_dim, 1);
        let r2 = solve_derivations(&int(2), 0, 2, 1, 1, 2);
        assert_eq!(r2.quotient_dim, 0);
    }
}
