use num_traits::One;

use super::table::TableAlgebra;
use super::{Combination, CoreError, Element, Family, GeneratorId, LambdaElement};
use crate::exactalg::{Coeff, Poly, Rat, Var};

/// A ℤ-graded Lie conformal algebra on a free ℂ[∂]-basis of generators.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraSpec {
    /// The loop algebra with brackets depending on `b` only.
    Clw { b: Rat },
    Table(TableAlgebra),
}

impl AlgebraSpec {
    pub fn clw(b: Rat) -> Self {
        AlgebraSpec::Clw { b }
    }

    /// `[x λ y]` for two generators.
    pub fn generator_bracket(
        &self,
        x: GeneratorId,
        y: GeneratorId,
    ) -> Result<LambdaElement, CoreError> {
        match self {
            AlgebraSpec::Clw { b } => Ok(clw_bracket(b, x, y)),
            AlgebraSpec::Table(t) => t.bracket(x, y),
        }
    }

    /// Grading degree of a generator.
    pub fn degree(&self, g: GeneratorId) -> Result<i64, CoreError> {
        match self {
            AlgebraSpec::Clw { .. } => Ok(g.index),
            AlgebraSpec::Table(t) => t.degree(g),
        }
    }

    /// Generators of the algebra whose index lies in `window`.
    pub fn generators_in(&self, window: &super::IndexRange) -> Vec<GeneratorId> {
        match self {
            AlgebraSpec::Clw { .. } => {
                let mut v: Vec<GeneratorId> = window.iter().map(GeneratorId::l).collect();
                v.extend(window.iter().map(GeneratorId::i));
                v
            }
            AlgebraSpec::Table(t) => t
                .generators()
                .filter(|g| window.contains(g.index))
                .collect(),
        }
    }

    /// `[x θ y]` where `x` may carry unknowns in its coefficients. The
    /// coefficients of both sides are polynomials in ∂ (other variables are
    /// carried along as parameters).
    pub fn bracket_at<C: Coeff>(
        &self,
        x: &Combination<C>,
        y: &Element,
        theta: &Poly,
    ) -> Result<Combination<C>, CoreError> {
        let left_sub = theta.neg_ref();
        let right_sub = &Poly::d() + theta;
        let mut out = Combination::zero();
        for (g, p) in x.iter() {
            let p = p.substitute(Var::D, &left_sub);
            for (h, q) in y.iter() {
                let q = q.substitute(Var::D, &right_sub);
                let t = self.generator_bracket(*g, *h)?;
                let factor = &q;
                for (k, r) in t.iter() {
                    let r = r.substitute(Var::L, theta);
                    out.add_term(*k, &p.mul_known(&(factor * &r)));
                }
            }
        }
        Ok(out)
    }

    /// Same as [`bracket_at`](Self::bracket_at) with the unknowns on the right.
    pub fn bracket_at_right<C: Coeff>(
        &self,
        x: &Element,
        y: &Combination<C>,
        theta: &Poly,
    ) -> Result<Combination<C>, CoreError> {
        let left_sub = theta.neg_ref();
        let right_sub = &Poly::d() + theta;
        let mut out = Combination::zero();
        for (g, p) in x.iter() {
            let p = p.substitute(Var::D, &left_sub);
            for (h, q) in y.iter() {
                let q = q.substitute(Var::D, &right_sub);
                let t = self.generator_bracket(*g, *h)?;
                for (k, r) in t.iter() {
                    let r = r.substitute(Var::L, theta);
                    out.add_term(*k, &q.mul_known(&(&p * &r)));
                }
            }
        }
        Ok(out)
    }
}

/// `[x λ y]` in the loop algebra with parameter `b`. The `(I, L)` entry is
/// obtained from `(L, I)` by skew symmetry.
pub fn clw_bracket(b: &Rat, x: GeneratorId, y: GeneratorId) -> LambdaElement {
    let s = x.index + y.index;
    let d = Poly::d();
    let l = Poly::lambda();
    let one_minus_b = Rat::one() - b;
    match (x.family, y.family) {
        (Family::L, Family::L) => {
            LambdaElement::single(GeneratorId::l(s), &d + &l.scale(&Rat::from_integer(2.into())))
        }
        (Family::L, Family::I) => {
            LambdaElement::single(GeneratorId::i(s), &d + &l.scale(&one_minus_b))
        }
        (Family::I, Family::L) => {
            // −(∂ + (1−b)(−∂−λ)) = −b∂ + (1−b)λ
            let v = &d.scale(&-b.clone()) + &l.scale(&one_minus_b);
            LambdaElement::single(GeneratorId::i(s), v)
        }
        (Family::I, Family::I) => LambdaElement::zero(),
    }
}

/// Bilinear extension of the generator bracket by sesquilinearity.
pub fn extend_bracket(
    alg: &AlgebraSpec,
    x: &Element,
    y: &Element,
) -> Result<LambdaElement, CoreError> {
    alg.bracket_at(x, y, &Poly::lambda())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn d() -> Poly {
        Poly::d()
    }
    fn l() -> Poly {
        Poly::lambda()
    }

    #[test]
    fn generator_values() {
        let v = clw_bracket(&int(0), GeneratorId::l(1), GeneratorId::l(2));
        assert_eq!(v, LambdaElement::single(GeneratorId::l(3), &d() + &l().scale(&int(2))));
        let v = clw_bracket(&int(2), GeneratorId::l(0), GeneratorId::i(0));
        assert_eq!(v, LambdaElement::single(GeneratorId::i(0), &d() - &l()));
        assert!(clw_bracket(&int(1), GeneratorId::i(3), GeneratorId::i(-1)).is_zero());
    }

    #[test]
    fn sesquilinear_examples() {
        let alg = AlgebraSpec::clw(int(0));
        let l0 = Element::gen(GeneratorId::l(0));
        let v = extend_bracket(&alg, &l0.d_times(), &l0).unwrap();
        let want = LambdaElement::single(GeneratorId::l(0), &l().neg_ref() * &(&d() + &l().scale(&int(2))));
        assert_eq!(v, want);

        let i0 = Element::gen(GeneratorId::i(0));
        let v = extend_bracket(&alg, &l0, &i0.d_times()).unwrap();
        let dl = &d() + &l();
        assert_eq!(v, LambdaElement::single(GeneratorId::i(0), &dl * &dl));
    }

    #[test]
    fn mixed_combination() {
        let alg = AlgebraSpec::clw(int(1));
        let x = Element::gen(GeneratorId::l(1))
            .scale(&int(2))
            .add_ref(&Element::gen(GeneratorId::i(1)));
        let y = Element::gen(GeneratorId::l(-1));
        let v = extend_bracket(&alg, &x, &y).unwrap();
        // b = 1: [I λ L] = −∂ I
        let mut want = LambdaElement::single(GeneratorId::l(0), (&d() + &l().scale(&int(2))).scale(&int(2)));
        want.add_term(GeneratorId::i(0), &d().neg_ref());
        assert_eq!(v, want);
    }

    #[test]
    fn i_l_entry_is_skew_image() {
        let b = rat(3, 7);
        let v = clw_bracket(&b, GeneratorId::i(2), GeneratorId::l(-5));
        let w = clw_bracket(&b, GeneratorId::l(-5), GeneratorId::i(2));
        let img = &Poly::d().neg_ref() - &Poly::lambda();
        let sum = v.add_ref(&w.substitute(Var::L, &img));
        assert!(sum.is_zero());
    }
}
