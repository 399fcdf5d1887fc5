use proptest::prelude::*;

use loopconf_core::central_ext::{check_two_cocycle, family_to_cocycle, single_family};
use loopconf_core::conformal_core::{extend_bracket, jacobi_residual, skew_residual, AlgebraSpec};
use loopconf_core::conformal_modules::ModuleParams;
use loopconf_core::derivations::{inner, is_derivation};
use loopconf_core::exactalg::{nullspace, rank, rat, LinSystem, Var};
use loopconf_core::module_ext::{check_ext_cm, check_ext_mc, coboundary_cm, coboundary_mc, ExtParams};
use loopconf_core::{Element, GeneratorId, IndexRange, Poly, Rat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((small_rat(), 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(|ts| {
        ts.into_iter()
            .fold(Poly::zero(), |acc, (c, d, l, m)| &acc + &Poly::term(c, d, l, m))
    })
}

fn generator() -> impl Strategy<Value = GeneratorId> {
    (any::<bool>(), -2i64..=2).prop_map(|(is_l, i)| if is_l { GeneratorId::l(i) } else { GeneratorId::i(i) })
}

fn ext_params() -> impl Strategy<Value = ExtParams> {
    (
        prop_oneof![Just(rat(0, 1)), small_rat()],
        small_rat(),
        small_rat(),
        (1i64..=3, 1i64..=2).prop_map(|(n, d)| rat(n, d)),
        small_rat(),
        small_rat(),
    )
        .prop_map(|(b, dl, al, c, d, be)| ExtParams::new(b, ModuleParams::new(dl, al, c, d), be))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poly_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(), q in poly(), x in small_rat(), y in small_rat(), z in small_rat()) {
        prop_assert_eq!((&p * &q).eval(&x, &y, &z), p.eval(&x, &y, &z) * q.eval(&x, &y, &z));
        prop_assert_eq!((&p + &q).eval(&x, &y, &z), p.eval(&x, &y, &z) + q.eval(&x, &y, &z));
    }

    #[test]
    fn simultaneous_swap_is_an_involution(p in poly()) {
        let (l, m) = (Poly::lambda(), Poly::mu());
        let once = p.substitute_many(&[(Var::L, &m), (Var::M, &l)]);
        prop_assert_eq!(once.substitute_many(&[(Var::L, &m), (Var::M, &l)]), p);
    }

    #[test]
    fn nullspace_vectors_solve_and_count(rows in prop::collection::vec(prop::collection::vec(small_rat(), 6), 1..6)) {
        let mut sys = LinSystem::new();
        let xs: Vec<usize> = (0..6).map(|k| sys.unknown(format!("x{k}"))).collect();
        for r in &rows {
            sys.add_row(xs.iter().zip(r).map(|(&x, v)| (x, v.clone())).collect()).unwrap();
        }
        let space = nullspace(&sys);
        for v in &space.basis {
            prop_assert!(sys.residuals(v).iter().all(|e| *e == rat(0, 1)));
        }
        prop_assert_eq!(space.dimension(), 6 - rank(&rows));
        prop_assert_eq!(rank(&space.basis), space.dimension());
    }

    #[test]
    fn bracket_is_sesquilinear(b in small_rat(), x in generator(), y in generator()) {
        let alg = AlgebraSpec::clw(b);
        let (ex, ey) = (Element::gen(x), Element::gen(y));
        let base = extend_bracket(&alg, &ex, &ey).unwrap();
        let left = extend_bracket(&alg, &ex.d_times(), &ey).unwrap();
        let right = extend_bracket(&alg, &ex, &ey.d_times()).unwrap();
        prop_assert_eq!(left, base.mul_poly(&Poly::lambda().scale(&rat(-1, 1))));
        prop_assert_eq!(right, base.mul_poly(&(&Poly::d() + &Poly::lambda())));
    }

    #[test]
    fn skew_and_jacobi_hold(b in small_rat(), x in generator(), y in generator(), z in generator()) {
        let alg = AlgebraSpec::clw(b);
        prop_assert!(skew_residual(&alg, x, y).unwrap().is_zero());
        prop_assert!(jacobi_residual(&alg, x, y, z).unwrap().is_zero());
    }

    #[test]
    fn inner_maps_are_derivations(b in small_rat(), x in generator()) {
        let alg = AlgebraSpec::clw(b);
        let w = IndexRange::symmetric(2);
        let m = inner(&alg, &Element::gen(x), &IndexRange::symmetric(4)).unwrap();
        prop_assert!(is_derivation(&alg, &m, &w).passed());
    }

    #[test]
    fn ll_families_are_cocycles(b in small_rat(), m in -1i64..=1, v in small_rat(), cubic in any::<bool>()) {
        let fam = single_family(if cubic { "A'" } else { "A" }, m, v).unwrap();
        let w = IndexRange::symmetric(2);
        prop_assert!(check_two_cocycle(&b, &family_to_cocycle(&b, &fam, &w), &w).passed());
    }

    #[test]
    fn mc_coboundaries_are_cocycles(p in ext_params(), k in small_rat()) {
        let w = IndexRange::symmetric(2);
        let check = check_ext_mc(&p, &coboundary_mc(&p, &k, &w), &w);
        prop_assert!(check.passed() && check.agree());
    }

    #[test]
    fn cm_coboundaries_are_cocycles(p in ext_params(), q in poly()) {
        let q = q.substitute_many(&[(Var::L, &Poly::zero()), (Var::M, &Poly::zero())]);
        let w = IndexRange::symmetric(2);
        let check = check_ext_cm(&p, &coboundary_cm(&p, &q, &w), &w);
        prop_assert!(check.passed() && check.agree());
    }
}
