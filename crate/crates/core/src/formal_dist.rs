//! The loop Lie algebra of modes, its formal distributions `L_i(z)`,
//! `I_j(z)`, j-products by residues, and the λ-bracket recovered from them.
//!
//! A distribution of weight `w` is `Σ_α X_α z^{−α−w}`. A [`ModeSeries`] stores
//! the coefficient of `w^{−m−r}` for each key `m`, where `r` is the weight of
//! the family the product lands in (2 for `L`, the `I`-weight otherwise).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::conformal_core::{clw_bracket, Element, Family, GeneratorId, IndexRange, LambdaElement};
use crate::exactalg::{as_i64, binomial, factorial, format_rat, int, solve_affine, LinSystem, Poly, Rat};
use crate::report::{AxiomReport, Residual, Violation};

/// Highest ∂-power tried by [`recognize`].
pub const RECOGNIZE_DEGREE: u32 = 2;
/// Modes discarded at each edge of a window in commutation checks.
pub const DEFAULT_SLACK: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistError {
    #[error("residue of {term} selects the non-integer mode {mode}")]
    NonIntegerMode { term: String, mode: String },
    #[error("series is not a ℂ[∂]-combination of {basis}; first inconsistent key {witness}")]
    NotInSpan { basis: String, witness: i64 },
    #[error("window of {got} modes is too small; at least {need} are needed")]
    WindowTooSmall { got: usize, need: usize },
    #[error("j-products do not vanish up to j = {0}")]
    NotLocal(u32),
    #[error("Fourier label of {0} is negative or not an integer")]
    BadLabel(String),
}

/// `L_{α,i}` or `I_{α,i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mode {
    pub family: Family,
    pub alpha: i64,
    #[serde(rename = "loop")]
    pub loop_index: i64,
}

impl Mode {
    pub fn l(alpha: i64, loop_index: i64) -> Self {
        Mode {
            family: Family::L,
            alpha,
            loop_index,
        }
    }

    pub fn i(alpha: i64, loop_index: i64) -> Self {
        Mode {
            family: Family::I,
            alpha,
            loop_index,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::L => "L",
            Family::I => "I",
        };
        write!(f, "{fam}({},{})", self.alpha, self.loop_index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopParams {
    pub a: Rat,
    pub b: Rat,
}

impl LoopParams {
    pub fn new(a: Rat, b: Rat) -> Self {
        LoopParams { a, b }
    }

    /// The `I`-weight for which the distributions close under j-products.
    pub fn closing_weight(&self) -> Rat {
        &self.a - &self.b + Rat::one()
    }
}

/// `Σ_α X_{α,loop} z^{−α−weight}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub family: Family,
    pub loop_index: i64,
    pub weight: Rat,
}

impl Distribution {
    pub fn l(loop_index: i64) -> Self {
        Distribution {
            family: Family::L,
            loop_index,
            weight: int(2),
        }
    }

    pub fn i(loop_index: i64, x: &Rat) -> Self {
        Distribution {
            family: Family::I,
            loop_index,
            weight: x.clone(),
        }
    }

    /// The distribution a mode belongs to, given the `I`-weight `x`.
    pub fn of_mode(m: &Mode, x: &Rat) -> Self {
        match m.family {
            Family::L => Distribution::l(m.loop_index),
            Family::I => Distribution::i(m.loop_index, x),
        }
    }

    pub fn generator(&self) -> GeneratorId {
        GeneratorId {
            family: self.family,
            index: self.loop_index,
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(z)", self.generator())
    }
}

/// Finite rational combination of modes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeCombination {
    terms: BTreeMap<Mode, Rat>,
}

impl ModeCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(m: Mode, c: Rat) -> Self {
        let mut r = Self::zero();
        r.add_term(m, &c);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mode, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: &Mode) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Rat)> {
        self.terms.iter()
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c);
        }
        r
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, &-c);
        }
        r
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut r = Self::zero();
        for (m, c) in &self.terms {
            r.add_term(*m, &(c * k));
        }
        r
    }
}

#[derive(Serialize)]
struct ModeEntry<'a> {
    mode: &'a Mode,
    coeff: String,
}

impl Serialize for ModeCombination {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<ModeEntry> = self
            .terms
            .iter()
            .map(|(m, c)| ModeEntry {
                mode: m,
                coeff: format_rat(c),
            })
            .collect();
        v.serialize(s)
    }
}

/// Coefficients of a product distribution on a window of keys.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSeries {
    pub window: IndexRange,
    /// The weight `r` in `w^{−m−r}`.
    pub reference_weight: Rat,
    pub coeffs: BTreeMap<i64, ModeCombination>,
}

impl ModeSeries {
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn at(&self, m: i64) -> ModeCombination {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }
}

/// The bracket of two modes in the loop Lie algebra.
pub fn loop_bracket(p: &LoopParams, x: &Mode, y: &Mode) -> ModeCombination {
    let s = x.alpha + y.alpha;
    let loop_sum = x.loop_index + y.loop_index;
    let (ax, ay) = (int(x.alpha), int(y.alpha));
    match (x.family, y.family) {
        (Family::L, Family::L) => ModeCombination::single(Mode::l(s, loop_sum), &ax - &ay),
        (Family::L, Family::I) => {
            let c = -(&p.a + &p.b * &ax + &ay);
            ModeCombination::single(Mode::i(s, loop_sum), c)
        }
        (Family::I, Family::L) => {
            let c = &p.a + &p.b * &ay + &ax;
            ModeCombination::single(Mode::i(s, loop_sum), c)
        }
        (Family::I, Family::I) => ModeCombination::zero(),
    }
}

/// Bilinear extension of [`loop_bracket`].
pub fn loop_bracket_combination(
    p: &LoopParams,
    x: &ModeCombination,
    y: &ModeCombination,
) -> ModeCombination {
    let mut r = ModeCombination::zero();
    for (mx, cx) in x.iter() {
        for (my, cy) in y.iter() {
            r = r.add_ref(&loop_bracket(p, mx, my).scale(&(cx * cy)));
        }
    }
    r
}

/// Weight of the family that `[a, b]` lands in.
fn reference_weight(a: &Distribution, b: &Distribution) -> Rat {
    match (a.family, b.family) {
        (Family::L, Family::L) => int(2),
        (Family::L, Family::I) => b.weight.clone(),
        (Family::I, _) => a.weight.clone(),
    }
}

fn integer_mode(r: &Rat, term: impl Fn() -> String) -> Result<i64, DistError> {
    as_i64(r).ok_or_else(|| DistError::NonIntegerMode {
        term: term(),
        mode: format_rat(r),
    })
}

/// `a(z)_{(j)} b(w) = Res_z (z−w)^j [a(z), b(w)]`, on the keys in `out`.
///
/// Expanding `(z−w)^j = Σ_k C(j,k) z^k (−w)^{j−k}`, the residue picks the
/// single mode `α = k + 1 − weight(a)` of `a` for each `k`.
pub fn j_product(
    p: &LoopParams,
    a: &Distribution,
    b: &Distribution,
    j: u32,
    out: &IndexRange,
) -> Result<ModeSeries, DistError> {
    let r = reference_weight(a, b);
    let mut coeffs = BTreeMap::new();
    for m in out.iter() {
        let mut acc = ModeCombination::zero();
        for k in 0..=j {
            let term = || format!("{a}_({j}){b} at z^{k}");
            let alpha = integer_mode(&(int(k as i64 + 1) - &a.weight), term)?;
            let beta_r = int(m + (j - k) as i64) + &r - &b.weight;
            let beta = integer_mode(&beta_r, term)?;
            let mut c = binomial(j as u64, k as u64);
            if (j - k) % 2 == 1 {
                c = -c;
            }
            let xa = Mode {
                family: a.family,
                alpha,
                loop_index: a.loop_index,
            };
            let xb = Mode {
                family: b.family,
                alpha: beta,
                loop_index: b.loop_index,
            };
            acc = acc.add_ref(&loop_bracket(p, &xa, &xb).scale(&c));
        }
        coeffs.insert(m, acc);
    }
    Ok(ModeSeries {
        window: *out,
        reference_weight: r,
        coeffs,
    })
}

/// Smallest `N <= j_max` such that every j-product with `N <= j <= j_max`
/// vanishes on `probe`; `None` when the `j_max`-th product is nonzero.
pub fn locality_order(
    p: &LoopParams,
    a: &Distribution,
    b: &Distribution,
    j_max: u32,
    probe: &IndexRange,
) -> Result<Option<u32>, DistError> {
    let mut order = None;
    for j in (0..=j_max).rev() {
        if j_product(p, a, b, j, probe)?.is_zero() {
            order = Some(j);
        } else {
            break;
        }
    }
    Ok(order)
}

/// `Π_{t=1}^{k} (t − m − Δ)`: the factor in the key-`m` coefficient of
/// `∂^k X` for a distribution `X` of weight `Δ`.
fn derivative_factor(m: i64, delta: &Rat, k: u32) -> Rat {
    let mut f = Rat::one();
    for t in 1..=k as i64 {
        f *= int(t - m) - delta;
    }
    f
}

/// Key-`m` coefficient of `p(∂)` applied to the distribution `basis`.
pub fn expand_at(element_poly: &Poly, basis: &Distribution, m: i64) -> ModeCombination {
    let mut r = ModeCombination::zero();
    for (mon, c) in element_poly.terms() {
        let k = mon.d;
        let f = derivative_factor(m, &basis.weight, k) * c;
        let mode = Mode {
            family: basis.family,
            alpha: m - k as i64,
            loop_index: basis.loop_index,
        };
        r.add_term(mode, &f);
    }
    r
}

/// Writes `series` as `Σ_{k<=2} c_k ∂^k basis` by an exact overdetermined
/// solve. The returned element has the single generator of `basis`.
pub fn recognize(series: &ModeSeries, basis: &Distribution) -> Result<Element, DistError> {
    let need = RECOGNIZE_DEGREE as usize + 3;
    if series.coeffs.len() < need {
        return Err(DistError::WindowTooSmall {
            got: series.coeffs.len(),
            need,
        });
    }
    let mut sys = LinSystem::new();
    let cs: Vec<usize> = (0..=RECOGNIZE_DEGREE)
        .map(|k| sys.unknown(format!("c{k}")))
        .collect();
    let mut rhs = Vec::new();
    let mut solved: Option<Vec<Rat>> = None;
    for (&m, comb) in &series.coeffs {
        let expected: Vec<Mode> = (0..=RECOGNIZE_DEGREE)
            .map(|k| Mode {
                family: basis.family,
                alpha: m - k as i64,
                loop_index: basis.loop_index,
            })
            .collect();
        if comb.iter().any(|(md, _)| !expected.contains(md)) {
            return Err(DistError::NotInSpan {
                basis: basis.to_string(),
                witness: m,
            });
        }
        for (k, md) in expected.iter().enumerate() {
            let f = derivative_factor(m, &basis.weight, k as u32);
            let s = comb.coeff(md);
            if f.is_zero() {
                if s.is_zero() {
                    continue;
                }
                return Err(DistError::NotInSpan {
                    basis: basis.to_string(),
                    witness: m,
                });
            }
            sys.add_row(vec![(cs[k], f)]).expect("declared unknowns");
            rhs.push(s);
        }
        match solve_affine(&sys, &rhs) {
            Some(x) => solved = Some(x),
            None => {
                return Err(DistError::NotInSpan {
                    basis: basis.to_string(),
                    witness: m,
                })
            }
        }
    }
    let x = solved.expect("window is nonempty");
    let mut p = Poly::zero();
    for (k, idx) in cs.iter().enumerate() {
        p = &p + &Poly::term(x[*idx].clone(), k as u32, 0, 0);
    }
    Ok(Element::single(basis.generator(), p))
}

/// The distribution a product of `a` and `b` is expected to be a ℂ[∂]-multiple of.
pub fn product_basis(a: &Distribution, b: &Distribution) -> Distribution {
    let w = reference_weight(a, b);
    let idx = a.loop_index + b.loop_index;
    match (a.family, b.family) {
        (Family::L, Family::L) => Distribution::l(idx),
        _ => Distribution::i(idx, &w),
    }
}

/// Highest j-product inspected when assembling a λ-bracket.
pub const FOURIER_J_MAX: u32 = 4;

/// `Σ_j λ^j / j! · (a_{(j)} b)`, with every product recognized on `modes`.
pub fn fourier_lambda_bracket(
    p: &LoopParams,
    a: &Distribution,
    b: &Distribution,
    modes: &IndexRange,
) -> Result<LambdaElement, DistError> {
    let basis = product_basis(a, b);
    let order =
        locality_order(p, a, b, FOURIER_J_MAX, modes)?.ok_or(DistError::NotLocal(FOURIER_J_MAX))?;
    let mut out = LambdaElement::zero();
    for j in 0..order {
        let e = recognize(&j_product(p, a, b, j, modes)?, &basis)?;
        let scale = Poly::term(Rat::one() / factorial(j as u64), 0, j, 0);
        out = out.add_ref(&e.mul_poly(&scale));
    }
    Ok(out)
}

/// Per-pair outcome used by [`verify_closure`] and reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairSummary {
    pub left: GeneratorId,
    pub right: GeneratorId,
    pub locality: Option<u32>,
    pub bracket: Option<LambdaElement>,
    pub error: Option<String>,
}

pub fn pair_summary(
    p: &LoopParams,
    a: &Distribution,
    b: &Distribution,
    modes: &IndexRange,
) -> PairSummary {
    let locality = locality_order(p, a, b, FOURIER_J_MAX, modes).ok().flatten();
    let (bracket, error) = match fourier_lambda_bracket(p, a, b, modes) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    PairSummary {
        left: a.generator(),
        right: b.generator(),
        locality,
        bracket,
        error,
    }
}

fn distributions(x: &Rat, loops: &IndexRange) -> Vec<Distribution> {
    let mut v: Vec<Distribution> = loops.iter().map(Distribution::l).collect();
    v.extend(loops.iter().map(|i| Distribution::i(i, x)));
    v
}

/// Every j-product (`j <= 3`) of distributions with loop index in `loops`
/// must be a ℂ[∂]-combination of its family distribution.
pub fn verify_closure(p: &LoopParams, x: &Rat, loops: &IndexRange, modes: &IndexRange) -> AxiomReport {
    let ds = distributions(x, loops);
    let mut rep = AxiomReport::new();
    for a in &ds {
        for b in &ds {
            let basis = product_basis(a, b);
            for j in 0..=3 {
                let r = j_product(p, a, b, j, modes).and_then(|s| recognize(&s, &basis));
                rep.record(r.err().map(|e| {
                    Violation::new(
                        "closure",
                        vec![a.to_string(), b.to_string(), format!("j={j}")],
                        Residual::Note(e.to_string()),
                    )
                }));
            }
        }
    }
    rep
}

/// Checks the distribution λ-bracket against the generator bracket for all
/// pairs with loop index in `loops`.
pub fn check_fourier_consistency(
    p: &LoopParams,
    x: &Rat,
    loops: &IndexRange,
    modes: &IndexRange,
) -> AxiomReport {
    let ds = distributions(x, loops);
    let mut rep = AxiomReport::new();
    for a in &ds {
        for b in &ds {
            let inputs = vec![a.to_string(), b.to_string()];
            let want = clw_bracket(&p.b, a.generator(), b.generator());
            rep.record(match fourier_lambda_bracket(p, a, b, modes) {
                Ok(got) if got == want => None,
                Ok(got) => Some(Violation::new("fourier", inputs, Residual::Lambda(got.sub_ref(&want)))),
                Err(e) => Some(Violation::new("fourier", inputs, Residual::Note(e.to_string()))),
            });
        }
    }
    rep
}

/// Fourier label `n` of a mode: `X_α = X_{(n)}` with `n = α + weight − 1`.
pub fn fourier_label(m: &Mode, x: &Rat) -> Option<i64> {
    let d = Distribution::of_mode(m, x);
    as_i64(&(int(m.alpha - 1) + &d.weight))
}

/// `[a_{(m)}, b_{(n)}] = Σ_j C(m,j) (a_{(j)}b)_{(m+n−j)}` for one pair of
/// modes, with `m >= 0`. The right side uses the recognized j-products on
/// `modes`, re-expanded at the needed keys.
pub fn check_mode_commutation(
    p: &LoopParams,
    x_weight: &Rat,
    x: &Mode,
    y: &Mode,
    modes: &IndexRange,
) -> Result<AxiomReport, DistError> {
    let m = fourier_label(x, x_weight)
        .filter(|m| *m >= 0)
        .ok_or_else(|| DistError::BadLabel(x.to_string()))?;
    let n = fourier_label(y, x_weight).ok_or_else(|| DistError::BadLabel(y.to_string()))?;
    let a = Distribution::of_mode(x, x_weight);
    let b = Distribution::of_mode(y, x_weight);
    let basis = product_basis(&a, &b);
    let lhs = loop_bracket(p, x, y);
    let mut rhs = ModeCombination::zero();
    for j in 0..=m as u32 {
        let prod = recognize(&j_product(p, &a, &b, j, modes)?, &basis)?;
        // (a_(j) b)_(N) is the coefficient of w^{−N−1}, i.e. key N + 1 − r.
        let key = int(m + n - j as i64 + 1) - &basis.weight;
        let key = as_i64(&key).ok_or_else(|| DistError::BadLabel(y.to_string()))?;
        let c = binomial(m as u64, j as u64);
        rhs = rhs.add_ref(&expand_at(&prod.get(&basis.generator()), &basis, key).scale(&c));
    }
    let mut rep = AxiomReport::new();
    let diff = lhs.sub_ref(&rhs);
    rep.record((!diff.is_zero()).then(|| {
        Violation::new("mode-commutation", vec![x.to_string(), y.to_string()], Residual::Modes(diff))
    }));
    Ok(rep)
}

/// Runs [`check_mode_commutation`] over all family pairs and loop indices in
/// `loops`, left labels `ms`, and right modes `α` in `alphas` shrunk by
/// `slack` at each end. Products are recognized on `alphas` itself.
pub fn sweep_mode_commutation(
    p: &LoopParams,
    x_weight: &Rat,
    loops: &IndexRange,
    ms: &[i64],
    alphas: &IndexRange,
    slack: i64,
) -> AxiomReport {
    let inner = alphas.shrink(slack);
    let mut rep = AxiomReport::new();
    for fa in [Family::L, Family::I] {
        for fb in [Family::L, Family::I] {
            for i in loops.iter() {
                for j in loops.iter() {
                    for &m in ms {
                        let wa = match fa {
                            Family::L => int(2),
                            Family::I => x_weight.clone(),
                        };
                        let Some(alpha) = as_i64(&(int(m + 1) - &wa)) else {
                            rep.record(Some(Violation::new(
                                "mode-commutation",
                                vec![format!("{fa:?} label {m}")],
                                Residual::Note("non-integer mode".into()),
                            )));
                            continue;
                        };
                        let x = Mode {
                            family: fa,
                            alpha,
                            loop_index: i,
                        };
                        for beta in inner.iter() {
                            let y = Mode {
                                family: fb,
                                alpha: beta,
                                loop_index: j,
                            };
                            match check_mode_commutation(p, x_weight, &x, &y, alphas) {
                                Ok(r) => rep.merge(r),
                                Err(e) => rep.record(Some(Violation::new(
                                    "mode-commutation",
                                    vec![x.to_string(), y.to_string()],
                                    Residual::Note(e.to_string()),
                                ))),
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Skew symmetry and the Jacobi identity of the mode algebra on all modes
/// with `α` in `alphas` and loop index in `loops`.
pub fn check_mode_algebra(p: &LoopParams, alphas: &IndexRange, loops: &IndexRange) -> AxiomReport {
    let mut modes = Vec::new();
    for f in [Family::L, Family::I] {
        for a in alphas.iter() {
            for i in loops.iter() {
                modes.push(Mode {
                    family: f,
                    alpha: a,
                    loop_index: i,
                });
            }
        }
    }
    let mut rep = AxiomReport::new();
    for x in &modes {
        for y in &modes {
            let s = loop_bracket(p, x, y).add_ref(&loop_bracket(p, y, x));
            rep.record((!s.is_zero()).then(|| {
                Violation::new("mode-skew", vec![x.to_string(), y.to_string()], Residual::Modes(s))
            }));
        }
    }
    for x in &modes {
        for y in &modes {
            let xy = loop_bracket(p, x, y);
            for z in &modes {
                let one = |m: &Mode| ModeCombination::single(*m, Rat::one());
                let lhs = loop_bracket_combination(p, &one(x), &loop_bracket(p, y, z));
                let r1 = loop_bracket_combination(p, &xy, &one(z));
                let r2 = loop_bracket_combination(p, &one(y), &loop_bracket(p, x, z));
                let res = lhs.sub_ref(&r1).sub_ref(&r2);
                rep.record((!res.is_zero()).then(|| {
                    Violation::new(
                        "mode-jacobi",
                        vec![x.to_string(), y.to_string(), z.to_string()],
                        Residual::Modes(res),
                    )
                }));
            }
        }
    }
    rep
}
