//! Conformal modules of rank one over ℂ[∂], the one-dimensional module
//! `ℂ_β`, and two-term extensions of one by the other.
//!
//! An element of any supported shape is written `P(∂)v + Q·v_β`, where `v` is
//! the free generator and `v_β` the torsion vector with
//! `∂v_β = βv_β + ρ(∂)v` (`ρ = 0` except for extensions with `ℂ_β` on top).
//! `Q` never contains ∂.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::conformal_core::{AlgebraSpec, Family, GeneratorId, IndexRange};
use crate::exactalg::{
    delta, format_rat, nullspace, pow_i, serde_rat, LinSystem, Monomial, Poly, Rat,
    SolutionSpace, Var,
};
use crate::report::{AxiomReport, Residual, Violation};

/// Parameters `(Δ, α, c, d)` of the rank-one module `M(Δ, α, c, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleParams {
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    #[serde(with = "serde_rat")]
    pub alpha: Rat,
    #[serde(with = "serde_rat")]
    pub c: Rat,
    #[serde(with = "serde_rat")]
    pub d: Rat,
}

impl ModuleParams {
    pub fn new(delta: Rat, alpha: Rat, c: Rat, d: Rat) -> Self {
        ModuleParams { delta, alpha, c, d }
    }

    /// `∂ + Δλ + α`
    pub fn linear_factor(&self) -> Poly {
        &(&Poly::d() + &Poly::lambda().scale(&self.delta)) + &Poly::constant(self.alpha.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleShape {
    Rank1,
    Onedim {
        #[serde(with = "serde_rat")]
        beta: Rat,
    },
    /// `ℂ_β` is the submodule, the rank-one module the quotient.
    ExtMc {
        #[serde(with = "serde_rat")]
        beta: Rat,
    },
    /// The rank-one module is the submodule, `ℂ_β` the quotient.
    ExtCm {
        #[serde(with = "serde_rat")]
        beta: Rat,
        rho: Poly,
    },
}

impl ModuleShape {
    fn has_free(&self) -> bool {
        !matches!(self, ModuleShape::Onedim { .. })
    }

    fn has_torsion(&self) -> bool {
        !matches!(self, ModuleShape::Rank1)
    }

    fn beta(&self) -> Rat {
        match self {
            ModuleShape::Rank1 => Rat::zero(),
            ModuleShape::Onedim { beta } | ModuleShape::ExtMc { beta } | ModuleShape::ExtCm { beta, .. } => {
                beta.clone()
            }
        }
    }

    fn rho(&self) -> Poly {
        match self {
            ModuleShape::ExtCm { rho, .. } => rho.clone(),
            _ => Poly::zero(),
        }
    }
}

/// `free·v + torsion·v_β`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ModElem {
    pub free: Poly,
    pub torsion: Poly,
}

impl ModElem {
    pub fn free(p: Poly) -> Self {
        ModElem {
            free: p,
            torsion: Poly::zero(),
        }
    }

    pub fn torsion(q: Poly) -> Self {
        ModElem {
            free: Poly::zero(),
            torsion: q,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_zero() && self.torsion.is_zero()
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        ModElem {
            free: &self.free + &o.free,
            torsion: &self.torsion + &o.torsion,
        }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        ModElem {
            free: &self.free - &o.free,
            torsion: &self.torsion - &o.torsion,
        }
    }

    pub fn mul_scalar(&self, k: &Poly) -> Self {
        ModElem {
            free: &self.free * k,
            torsion: &self.torsion * k,
        }
    }

    fn substitute(&self, v: Var, img: &Poly) -> Self {
        ModElem {
            free: self.free.substitute(v, img),
            torsion: self.torsion.substitute(v, img),
        }
    }
}

/// Basis vector of a shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisVector {
    Free,
    Torsion,
}

/// λ-action of generators on the basis vectors of a shape: `g λ v` and
/// `g λ v_β` as elements with coefficients in ∂ and λ.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleAction {
    pub shape: ModuleShape,
    pub on_free: BTreeMap<GeneratorId, ModElem>,
    pub on_torsion: BTreeMap<GeneratorId, ModElem>,
}

#[derive(Serialize, Deserialize)]
struct ActionEntry {
    generator: GeneratorId,
    vector: BasisVector,
    image: ModElem,
}

#[derive(Serialize, Deserialize)]
struct ActionFile {
    shape: ModuleShape,
    actions: Vec<ActionEntry>,
}

impl Serialize for ModuleAction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut actions = Vec::new();
        for (vector, table) in [(BasisVector::Free, &self.on_free), (BasisVector::Torsion, &self.on_torsion)] {
            for (g, e) in table {
                actions.push(ActionEntry {
                    generator: *g,
                    vector,
                    image: e.clone(),
                });
            }
        }
        ActionFile {
            shape: self.shape.clone(),
            actions,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleAction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = ActionFile::deserialize(d)?;
        let mut a = ModuleAction::new(f.shape);
        for e in f.actions {
            match e.vector {
                BasisVector::Free => a.on_free.insert(e.generator, e.image),
                BasisVector::Torsion => a.on_torsion.insert(e.generator, e.image),
            };
        }
        Ok(a)
    }
}

impl ModuleAction {
    pub fn new(shape: ModuleShape) -> Self {
        ModuleAction {
            shape,
            on_free: BTreeMap::new(),
            on_torsion: BTreeMap::new(),
        }
    }

    fn basis(&self) -> Vec<BasisVector> {
        let mut v = Vec::new();
        if self.shape.has_free() {
            v.push(BasisVector::Free);
        }
        if self.shape.has_torsion() {
            v.push(BasisVector::Torsion);
        }
        v
    }

    fn defined(&self, g: &GeneratorId) -> bool {
        let free_ok = !self.shape.has_free() || self.on_free.contains_key(g);
        let tor_ok = !self.shape.has_torsion() || self.on_torsion.contains_key(g);
        free_ok && tor_ok
    }

    /// `g_θ u` for a basis vector `u`. Missing entries act by zero.
    fn act_basis(&self, g: &GeneratorId, u: BasisVector, theta: &Poly) -> ModElem {
        let table = match u {
            BasisVector::Free => &self.on_free,
            BasisVector::Torsion => &self.on_torsion,
        };
        table
            .get(g)
            .map(|e| e.substitute(Var::L, theta))
            .unwrap_or_default()
    }

    /// `R(∂)·e`, where `∂` is the module's operator and `R` may carry λ, μ.
    pub fn apply_operator(&self, r: &Poly, e: &ModElem) -> ModElem {
        let beta = self.shape.beta();
        let rho = self.shape.rho();
        let mut free = r * &e.free;
        if !e.torsion.is_zero() {
            // ∂^k v_β = β^k v_β + Σ_{t<k} β^t ∂^{k−1−t} ρ(∂) v
            for (mon, c) in r.terms() {
                let k = mon.d as i64;
                let coef = Poly::monomial(Monomial::new(0, mon.l, mon.m), c.clone());
                let mut tail = Poly::zero();
                for t in 0..k {
                    tail = &tail + &Poly::term(pow_i(&beta, t), (k - 1 - t) as u32, 0, 0);
                }
                free = &free + &(&(&coef * &e.torsion) * &(&tail * &rho));
            }
        }
        let torsion = &r.substitute(Var::D, &Poly::constant(beta)) * &e.torsion;
        ModElem { free, torsion }
    }

    /// `g_θ e` for a general element.
    pub fn act(&self, g: &GeneratorId, theta: &Poly, e: &ModElem) -> ModElem {
        let shifted = e.free.substitute(Var::D, &(&Poly::d() + theta));
        let mut out = ModElem::default();
        if !e.free.is_zero() {
            out = self.apply_operator(&shifted, &self.act_basis(g, BasisVector::Free, theta));
        }
        if !e.torsion.is_zero() {
            out = out.add_ref(&self.act_basis(g, BasisVector::Torsion, theta).mul_scalar(&e.torsion));
        }
        out
    }

    fn basis_elem(u: BasisVector) -> ModElem {
        match u {
            BasisVector::Free => ModElem::free(Poly::one()),
            BasisVector::Torsion => ModElem::torsion(Poly::one()),
        }
    }

    /// `∂u` as an element.
    fn d_basis(&self, u: BasisVector) -> ModElem {
        self.apply_operator(&Poly::d(), &Self::basis_elem(u))
    }
}

/// Checks `a λ (∂u) = (∂+λ)(a λ u)` for every generator with a defined action
/// and `a λ (b μ u) − b μ (a λ u) = [a λ b]_{λ+μ} u` for every pair whose
/// bracket stays among defined generators.
pub fn check_module(alg: &AlgebraSpec, action: &ModuleAction, window: &IndexRange) -> AxiomReport {
    let gens: Vec<GeneratorId> = alg
        .generators_in(window)
        .into_iter()
        .filter(|g| action.defined(g))
        .collect();
    let l = Poly::lambda();
    let m = Poly::mu();
    let lm = &l + &m;
    let dl = &Poly::d() + &l;
    let mut rep = AxiomReport::new();
    for a in &gens {
        for u in action.basis() {
            let lhs = action.act(a, &l, &action.d_basis(u));
            let rhs = action.apply_operator(&dl, &action.act(a, &l, &ModuleAction::basis_elem(u)));
            let res = lhs.sub_ref(&rhs);
            rep.record((!res.is_zero()).then(|| {
                Violation::new(
                    "module-sesquilinearity",
                    vec![a.to_string(), format!("{u:?}")],
                    elem_residual(&res),
                )
            }));
        }
    }
    for a in &gens {
        for b in &gens {
            let br = match alg.generator_bracket(*a, *b) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if br.support().any(|g| !action.defined(g)) {
                continue;
            }
            for u in action.basis() {
                let e = ModuleAction::basis_elem(u);
                let t1 = action.act(a, &l, &action.act(b, &m, &e));
                let t2 = action.act(b, &m, &action.act(a, &l, &e));
                let mut t3 = ModElem::default();
                for (g, r) in br.iter() {
                    // (r(∂) g)_θ u = r(−θ) g_θ u
                    let coef = r.substitute(Var::D, &lm.neg_ref());
                    t3 = t3.add_ref(&action.act(g, &lm, &e).mul_scalar(&coef));
                }
                let res = t1.sub_ref(&t2).sub_ref(&t3);
                rep.record((!res.is_zero()).then(|| {
                    Violation::new(
                        "module-commutator",
                        vec![a.to_string(), b.to_string(), format!("{u:?}")],
                        elem_residual(&res),
                    )
                }));
            }
        }
    }
    rep
}

fn elem_residual(e: &ModElem) -> Residual {
    if e.torsion.is_zero() {
        Residual::Poly(e.free.clone())
    } else if e.free.is_zero() {
        Residual::Note(format!("({}) v_β", e.torsion))
    } else {
        Residual::Note(format!("({}) v + ({}) v_β", e.free, e.torsion))
    }
}

/// `L_i λ v = f_i(∂,λ)v`, `I_i λ v = g_i(∂,λ)v` on a window of indices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rank1Action {
    pub f: BTreeMap<i64, Poly>,
    pub g: BTreeMap<i64, Poly>,
}

impl Rank1Action {
    pub fn to_module(&self) -> ModuleAction {
        let mut a = ModuleAction::new(ModuleShape::Rank1);
        for (i, p) in &self.f {
            a.on_free.insert(GeneratorId::l(*i), ModElem::free(p.clone()));
        }
        for (i, p) in &self.g {
            a.on_free.insert(GeneratorId::i(*i), ModElem::free(p.clone()));
        }
        a
    }

    pub fn get(&self, g: &GeneratorId) -> Option<&Poly> {
        match g.family {
            Family::L => self.f.get(&g.index),
            Family::I => self.g.get(&g.index),
        }
    }
}

/// `f_i = c^i(∂+Δλ+α)`, `g_i = δ_{b,0} d c^i` for `i` in `window`.
pub fn standard_action(b: &Rat, prm: &ModuleParams, window: &IndexRange) -> Rank1Action {
    let mut act = Rank1Action::default();
    let lin = prm.linear_factor();
    let db0 = delta(b, &Rat::zero());
    for i in window.iter() {
        let ci = pow_i(&prm.c, i);
        act.f.insert(i, lin.scale(&ci));
        act.g.insert(i, Poly::constant(&db0 * &prm.d * &ci));
    }
    act
}

/// Propagates `t_i t_j = t_{i+j}` over `window` from `t_1` (window must
/// contain 0 and 1). Returns the forced values, or `None` when the relations
/// are contradictory.
pub fn propagate_multiplicative(window: &IndexRange, t1: &Rat) -> Option<BTreeMap<i64, Rat>> {
    let mut t: BTreeMap<i64, Rat> = BTreeMap::new();
    t.insert(1, t1.clone());
    // t_0 t_1 = t_1 and t_0 t_0 = t_0 fix t_0 when t_1 ≠ 0
    t.insert(0, if t1.is_zero() { Rat::zero() } else { Rat::one() });
    loop {
        let mut changed = false;
        for i in window.iter() {
            for j in window.iter() {
                let s = i + j;
                if !window.contains(s) {
                    continue;
                }
                let (ti, tj, ts) = (t.get(&i).cloned(), t.get(&j).cloned(), t.get(&s).cloned());
                match (ti, tj, ts) {
                    (Some(a), Some(b), None) => {
                        t.insert(s, a * b);
                        changed = true;
                    }
                    (Some(a), None, Some(c)) if !a.is_zero() => {
                        t.insert(j, c / a);
                        changed = true;
                    }
                    (None, Some(b), Some(c)) if !b.is_zero() => {
                        t.insert(i, c / b);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            break;
        }
    }
    for i in window.iter() {
        for j in window.iter() {
            let s = i + j;
            if !window.contains(s) {
                continue;
            }
            if let (Some(a), Some(b), Some(c)) = (t.get(&i), t.get(&j), t.get(&s)) {
                if &(a * b) != c {
                    return None;
                }
            }
        }
    }
    Some(t)
}

/// Ratio `κ` with `F(∂+λ,μ)F(∂,λ) − F(∂+μ,λ)F(∂,μ) = κ(λ−μ)F(∂,λ+μ)` for
/// `F = ∂+Δλ+α`, so that the `(L, L)` identity for `f_i = t_i F` reads
/// `κ t_i t_j = t_{i+j}`. `None` when the two sides are not proportional.
pub fn quadratic_reduction(delta_: &Rat, alpha: &Rat) -> Option<Rat> {
    let prm = ModuleParams::new(delta_.clone(), alpha.clone(), Rat::one(), Rat::zero());
    let f = prm.linear_factor();
    let (d, l, m) = (Poly::d(), Poly::lambda(), Poly::mu());
    let at = |dd: &Poly, ll: &Poly| f.substitute_many(&[(Var::D, dd), (Var::L, ll)]);
    let q1 = &(&at(&(&d + &l), &m) * &at(&d, &l)) - &(&at(&(&d + &m), &l) * &at(&d, &m));
    let q2 = &(&l - &m) * &at(&d, &(&l + &m));
    let (mon, c2) = q2.terms().next()?;
    let k = q1.coeff(mon) / c2;
    (q1 == q2.scale(&k)).then_some(k)
}

/// One rank-one solution family found by [`solve_rank1`].
#[derive(Clone, Debug, Serialize)]
pub struct Rank1Solution {
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    #[serde(with = "serde_rat")]
    pub alpha: Rat,
    #[serde(with = "serde_rat")]
    pub c: Rat,
    /// `t_i` for `f_i = t_i(∂+Δλ+α)`, as canonical strings.
    pub t: BTreeMap<i64, String>,
    /// Every `t_i` equals `c^i`.
    pub geometric: bool,
    /// Dimension of the solutions of the linear `(L, I)` identity alone.
    pub g_linear_dimension: usize,
    /// Dimension of the `g` satisfying both identities. Comparing the
    /// ∂^(2n-1) coefficients of `(I, I)` forces every `g_i` to be free of ∂,
    /// and ∂-free `g` satisfy `(I, I)` trivially, so this is a linear space.
    pub g_dimension: usize,
    pub g_basis: Vec<BTreeMap<i64, Poly>>,
    /// The `(I, I)` identity holds on the basis and on pairwise sums.
    pub quadratic_ok: bool,
    /// The generic module checker accepts `f` with every basis `g`.
    pub module_ok: bool,
}

/// Highest ∂- and λ-degree of the `g_i` ansatz in [`solve_rank1`].
pub const RANK1_G_DEGREE: u32 = 2;

/// For every `(Δ, α)` in `grid` and every nonzero `c` in `cs`: forces
/// `t_i` from `t_1 = c`, then solves the linear `(L, I)` identity for the
/// `g_i` (each of ∂- and λ-degree at most 2), keeps the ∂-free solutions
/// and checks the quadratic `(I, I)` identity on them.
pub fn solve_rank1(
    b: &Rat,
    window: &IndexRange,
    grid: &[(Rat, Rat)],
    cs: &[Rat],
) -> Vec<Rank1Solution> {
    let mut out = Vec::new();
    for (dl, al) in grid {
        let Some(kappa) = quadratic_reduction(dl, al) else {
            continue;
        };
        for c in cs {
            if c.is_zero() || !kappa.is_one() {
                continue;
            }
            let Some(t) = propagate_multiplicative(window, c) else {
                continue;
            };
            let geometric = window.iter().all(|i| t.get(&i) == Some(&pow_i(c, i)));
            let prm = ModuleParams::new(dl.clone(), al.clone(), Rat::one(), Rat::zero());
            let f: BTreeMap<i64, Poly> = window
                .iter()
                .map(|i| (i, prm.linear_factor().scale(&t[&i])))
                .collect();
            let linear = solve_g(b, &f, window, false);
            let space = solve_g(b, &f, window, true);
            let g_basis: Vec<BTreeMap<i64, Poly>> = (0..space.dimension())
                .map(|k| g_from_vector(&space, k, window))
                .collect();
            let quadratic_ok = quadratic_holds(&g_basis, window);
            let alg = AlgebraSpec::clw(b.clone());
            let module_ok = g_basis.iter().all(|g| {
                let act = Rank1Action {
                    f: f.clone(),
                    g: g.clone(),
                };
                check_module(&alg, &act.to_module(), window).passed()
            });
            out.push(Rank1Solution {
                delta: dl.clone(),
                alpha: al.clone(),
                c: c.clone(),
                t: t.iter().map(|(i, v)| (*i, format_rat(v))).collect(),
                geometric,
                g_linear_dimension: linear.dimension(),
                g_dimension: space.dimension(),
                g_basis,
                quadratic_ok,
                module_ok,
            });
        }
    }
    out
}

fn g_label(i: i64, p: u32, q: u32) -> String {
    format!("g[{i}].d{p}l{q}")
}

/// `g_j(∂+λ,μ)f_i(∂,λ) − f_i(∂+μ,λ)g_j(∂,μ) + (bλ+μ)g_{i+j}(∂,λ+μ) = 0`,
/// optionally with every ∂-coefficient of `g` forced to zero.
fn solve_g(b: &Rat, f: &BTreeMap<i64, Poly>, window: &IndexRange, d_free: bool) -> SolutionSpace {
    let mut sys = LinSystem::new();
    let mut g = BTreeMap::new();
    for i in window.iter() {
        let mut p = Poly::<crate::exactalg::LinForm>::zero();
        for dp in 0..=RANK1_G_DEGREE {
            for lq in 0..=RANK1_G_DEGREE {
                let idx = sys.unknown(g_label(i, dp, lq));
                if d_free && dp > 0 {
                    sys.add_row(vec![(idx, Rat::one())]).expect("declared unknown");
                }
                p = &p + &Poly::term(Rat::one(), dp, lq, 0).times_unknown(idx);
            }
        }
        g.insert(i, p);
    }
    let (d, l, m) = (Poly::d(), Poly::lambda(), Poly::mu());
    let bl_m = &l.scale(b) + &m;
    for i in window.iter() {
        for j in window.iter() {
            let s = i + j;
            if !window.contains(s) {
                continue;
            }
            let gj_shift = g[&j].substitute_many(&[(Var::D, &(&d + &l)), (Var::L, &m)]);
            let fi = &f[&i];
            let fi_shift = fi.substitute(Var::D, &(&d + &m));
            let gj_mu = g[&j].substitute(Var::L, &m);
            let gs = g[&s].substitute(Var::L, &(&l + &m));
            let res = &(&(&gj_shift * fi) - &(&gj_mu * &fi_shift)) + &(&gs * &bl_m);
            sys.require_zero(&res).expect("declared unknowns");
        }
    }
    nullspace(&sys)
}

fn g_from_vector(space: &SolutionSpace, k: usize, window: &IndexRange) -> BTreeMap<i64, Poly> {
    let v = &space.basis[k];
    let mut g = BTreeMap::new();
    let mut idx = 0;
    for i in window.iter() {
        let mut p = Poly::zero();
        for dp in 0..=RANK1_G_DEGREE {
            for lq in 0..=RANK1_G_DEGREE {
                p = &p + &Poly::term(v[idx].clone(), dp, lq, 0);
                idx += 1;
            }
        }
        g.insert(i, p);
    }
    g
}

/// `g_j(∂+λ,μ)g_i(∂,λ) − g_i(∂+μ,λ)g_j(∂,μ) = 0` for all `i, j`.
fn ii_identity(g: &BTreeMap<i64, Poly>, window: &IndexRange) -> bool {
    let (d, l, m) = (Poly::d(), Poly::lambda(), Poly::mu());
    window.iter().all(|i| {
        window.iter().all(|j| {
            let a = &g[&j].substitute_many(&[(Var::D, &(&d + &l)), (Var::L, &m)]) * &g[&i];
            let b = &g[&i].substitute(Var::D, &(&d + &m)) * &g[&j].substitute(Var::L, &m);
            a == b
        })
    })
}

fn quadratic_holds(basis: &[BTreeMap<i64, Poly>], window: &IndexRange) -> bool {
    if !basis.iter().all(|g| ii_identity(g, window)) {
        return false;
    }
    for x in 0..basis.len() {
        for y in x + 1..basis.len() {
            let sum: BTreeMap<i64, Poly> = window
                .iter()
                .map(|i| (i, &basis[x][&i] + &basis[y][&i]))
                .collect();
            if !ii_identity(&sum, window) {
                return false;
            }
        }
    }
    true
}

/// Values `s` for which `ℂ[∂](∂+s)v` is a submodule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmoduleSearch {
    /// Every action polynomial vanishes; any `s` works.
    All,
    Values(#[serde(serialize_with = "ser_rat_set")] BTreeSet<Rat>),
}

fn ser_rat_set<S: serde::Serializer>(v: &BTreeSet<Rat>, s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(format_rat).collect();
    strs.serialize(s)
}

/// `(∂+s)` divides `(∂+λ+s)·p(∂,λ)` exactly when `p(−s, λ) = 0`, so the
/// search collects the common rational roots `s` of every λ-coefficient of
/// every action polynomial evaluated at `∂ = −s`.
pub fn search_degree_one_submodules(b: &Rat, prm: &ModuleParams, window: &IndexRange) -> SubmoduleSearch {
    let act = standard_action(b, prm, window);
    let polys: Vec<&Poly> = act.f.values().chain(act.g.values()).collect();
    common_roots(&polys)
}

fn common_roots(polys: &[&Poly]) -> SubmoduleSearch {
    // p(∂ = −s, λ) with s written as μ, split by powers of λ
    let neg_mu = Poly::mu().neg_ref();
    let mut conds: Vec<Vec<Rat>> = Vec::new();
    for p in polys {
        for (_, c) in p.substitute(Var::D, &neg_mu).collect_in(Var::L) {
            let deg = c.degree_in(Var::M).unwrap_or(0) as usize;
            let mut coeffs = vec![Rat::zero(); deg + 1];
            for (mon, v) in c.terms() {
                coeffs[mon.m as usize] = v.clone();
            }
            conds.push(coeffs);
        }
    }
    let Some(pivot) = conds.iter().filter(|c| c.len() > 1 || !c[0].is_zero()).min_by_key(|c| c.len()) else {
        return SubmoduleSearch::All;
    };
    let roots = rational_roots(pivot);
    let eval = |c: &[Rat], x: &Rat| c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a);
    SubmoduleSearch::Values(
        roots
            .into_iter()
            .filter(|r| conds.iter().all(|c| eval(c, r).is_zero()))
            .collect(),
    )
}

/// Rational roots of `Σ coeffs[k] x^k` (not identically zero).
fn rational_roots(coeffs: &[Rat]) -> BTreeSet<Rat> {
    let mut out = BTreeSet::new();
    let mut c: Vec<Rat> = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    // factor out x^k
    let low = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
    if low > 0 {
        out.insert(Rat::zero());
    }
    let c = &c[low..];
    if c.len() <= 1 {
        return out;
    }
    let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
    let eval = |x: &Rat| c.iter().rev().fold(Rat::zero(), |acc, a| acc * x + a);
    let p_divs = divisors(&ints[0].abs());
    let q_divs = divisors(&ints[ints.len() - 1].abs());
    for p in &p_divs {
        for q in &q_divs {
            for sign in [1, -1] {
                let r = Rat::new(p * BigInt::from(sign), q.clone());
                if eval(&r).is_zero() {
                    out.insert(r);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut v = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= *n {
        if (n % &k).is_zero() {
            v.push(k.clone());
            v.push(n / &k);
        }
        k += 1;
    }
    v
}

/// Short text form of the parameters for reports.
pub fn describe_params(prm: &ModuleParams) -> String {
    format!(
        "Δ={} α={} c={} d={}",
        format_rat(&prm.delta),
        format_rat(&prm.alpha),
        format_rat(&prm.c),
        format_rat(&prm.d)
    )
}
