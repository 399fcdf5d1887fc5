use super::{AlgebraSpec, CoreError, Element, GeneratorId, IndexRange, LambdaElement};
use crate::exactalg::{Poly, Var};
use crate::report::{AxiomReport, Residual, Violation};

/// `[x λ y] + [y λ x]|_{λ ↦ −∂−λ}` for two generators.
pub fn skew_residual(
    alg: &AlgebraSpec,
    x: GeneratorId,
    y: GeneratorId,
) -> Result<LambdaElement, CoreError> {
    let xy = alg.generator_bracket(x, y)?;
    let yx = alg.generator_bracket(y, x)?;
    let img = &Poly::d().neg_ref() - &Poly::lambda();
    Ok(xy.add_ref(&yx.substitute(Var::L, &img)))
}

/// `[a λ [b μ c]] − [[a λ b]_{λ+μ} c] − [b μ [a λ c]]` for three generators.
pub fn jacobi_residual(
    alg: &AlgebraSpec,
    a: GeneratorId,
    b: GeneratorId,
    c: GeneratorId,
) -> Result<LambdaElement, CoreError> {
    let l = Poly::lambda();
    let m = Poly::mu();
    let lm = &l + &m;
    let (ea, eb, ec) = (Element::gen(a), Element::gen(b), Element::gen(c));

    let bc = alg.bracket_at(&eb, &ec, &m)?;
    let t1 = alg.bracket_at(&ea, &bc, &l)?;
    let ab = alg.bracket_at(&ea, &eb, &l)?;
    let t2 = alg.bracket_at(&ab, &ec, &lm)?;
    let ac = alg.bracket_at(&ea, &ec, &l)?;
    let t3 = alg.bracket_at(&eb, &ac, &m)?;
    Ok(t1.sub_ref(&t2).sub_ref(&t3))
}

pub fn check_skew(alg: &AlgebraSpec, window: &IndexRange) -> AxiomReport {
    let gens = alg.generators_in(window);
    let mut rep = AxiomReport::new();
    for &x in &gens {
        for &y in &gens {
            match skew_residual(alg, x, y) {
                Ok(r) => rep.record((!r.is_zero()).then(|| {
                    Violation::new("skew", vec![x.to_string(), y.to_string()], Residual::Lambda(r))
                })),
                // Pairs whose bracket leaves a table window are not checkable.
                Err(CoreError::WindowExceeded { .. }) => {}
                Err(e) => rep.record(Some(Violation::new(
                    "skew",
                    vec![x.to_string(), y.to_string()],
                    Residual::Note(e.to_string()),
                ))),
            }
        }
    }
    rep
}

/// For table algebras only triples whose pairwise and total index sums stay
/// inside `window` are checked.
pub fn check_jacobi(alg: &AlgebraSpec, window: &IndexRange) -> AxiomReport {
    let gens = alg.generators_in(window);
    let clip = matches!(alg, AlgebraSpec::Table(_));
    let mut rep = AxiomReport::new();
    for &a in &gens {
        for &b in &gens {
            for &c in &gens {
                if clip {
                    let sums = [
                        a.index + b.index,
                        a.index + c.index,
                        b.index + c.index,
                        a.index + b.index + c.index,
                    ];
                    if !sums.iter().all(|s| window.contains(*s)) {
                        continue;
                    }
                }
                let inputs = || vec![a.to_string(), b.to_string(), c.to_string()];
                match jacobi_residual(alg, a, b, c) {
                    Ok(r) => rep.record(
                        (!r.is_zero())
                            .then(|| Violation::new("jacobi", inputs(), Residual::Lambda(r))),
                    ),
                    Err(CoreError::WindowExceeded { .. }) => {}
                    Err(e) => rep.record(Some(Violation::new(
                        "jacobi",
                        inputs(),
                        Residual::Note(e.to_string()),
                    ))),
                }
            }
        }
    }
    rep
}

/// Every generator bracket must be supported in the sum of the degrees.
pub fn check_graded(alg: &AlgebraSpec, window: &IndexRange) -> AxiomReport {
    let gens = alg.generators_in(window);
    let mut rep = AxiomReport::new();
    for &x in &gens {
        for &y in &gens {
            let v = match alg.generator_bracket(x, y) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let (dx, dy) = match (alg.degree(x), alg.degree(y)) {
                (Ok(dx), Ok(dy)) => (dx, dy),
                _ => continue,
            };
            let mut bad = LambdaElement::zero();
            for (g, p) in v.iter() {
                if alg.degree(*g).map(|dg| dg != dx + dy).unwrap_or(true) {
                    bad.add_term(*g, p);
                }
            }
            rep.record((!bad.is_zero()).then(|| {
                Violation::new("graded", vec![x.to_string(), y.to_string()], Residual::Lambda(bad))
            }));
        }
    }
    rep
}
