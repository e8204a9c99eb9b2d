//! Randomized exact property tests.

mod support;

use dshuffle::ratfun::{qi, LinearForm, Monomial, Polynomial, RationalFunction};
use dshuffle::series::{ihara_action, ihara_bracket, DepthSeries};
use dshuffle::words::{count_words, lie_projector, lie_projector_sum, shuffle, stuffle, WordSum};
use proptest::prelude::*;
use support::*;

fn rat(arity: usize) -> impl Strategy<Value = RationalFunction> {
    (component(arity, 2), prop::collection::vec((1..=arity, 0..arity), 0..3)).prop_map(move |(f, dens)| {
        let num = poly_of(&f, arity);
        let forms: Vec<LinearForm> = dens.into_iter().filter(|&(a, b)| b < a).map(|(a, b)| LinearForm::new(a, b).unwrap()).collect();
        RationalFunction::new(num, &forms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_equality(f in rat(2), g in rat(2)) {
        let cross = |a: &RationalFunction, b: &RationalFunction| {
            let mut p = a.num.clone();
            for (lf, &e) in &b.den {
                p = p.mul(&Polynomial::from_form(2, &lf.to_form()).pow(e));
            }
            p
        };
        let diff_zero = cross(&f, &g).add(&cross(&g, &f).scale(&qi(-1))).is_zero();
        prop_assert_eq!(f.equals(&g), diff_zero);
    }

    #[test]
    fn ring_axioms(f in rat(2), g in rat(2), h in rat(2)) {
        prop_assert!(f.add(&g).unwrap().equals(&g.add(&f).unwrap()));
        prop_assert!(f.mul(&g).unwrap().equals(&g.mul(&f).unwrap()));
        prop_assert!(f.add(&g).unwrap().add(&h).unwrap().equals(&f.add(&g.add(&h).unwrap()).unwrap()));
        prop_assert!(f.mul(&g).unwrap().mul(&h).unwrap().equals(&f.mul(&g.mul(&h).unwrap()).unwrap()));
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn residue_is_linear(f in rat(2), g in rat(2), c in -4i64..=4) {
        let along = LinearForm::new(2, 1).unwrap();
        if let (Ok(rf), Ok(rg)) = (f.residue(along), g.residue(along)) {
            let sum = f.add(&g.scale(&qi(c))).unwrap();
            if let Ok(rs) = sum.residue(along) {
                prop_assert!(rs.equals(&rf.add(&rg.scale(&qi(c))).unwrap()));
            }
        }
    }

    #[test]
    fn shuffle_counts(n in 0usize..5, r in 0usize..5) {
        let u: Vec<usize> = (1..=n).collect();
        let v: Vec<usize> = (n + 1..=n + r).collect();
        let s = shuffle(&u, &v).unwrap();
        prop_assert_eq!(s.len() as u64, count_words(n, r));
        prop_assert!(s.terms.values().all(|c| *c == qi(1)));
    }

    #[test]
    fn stuffle_counts(n in 0usize..5, r in 0usize..5) {
        let u: Vec<usize> = (1..=n).collect();
        let v: Vec<usize> = (n + 1..=n + r).collect();
        let delannoy = |a: usize, b: usize| -> u64 {
            (0..=a.min(b)).map(|k| dshuffle::ratfun::q::binom_u(a as u64, k as u64)
                * dshuffle::ratfun::q::binom_u((a + b - k) as u64, a as u64)).sum()
        };
        prop_assert_eq!(stuffle(&u, &v).unwrap().len() as u64, delannoy(n, r));
    }

    #[test]
    fn lambda_kills_shuffles(n in 1usize..4, r in 1usize..3) {
        let u: Vec<usize> = (1..=n).collect();
        let v: Vec<usize> = (n + 1..=n + r).collect();
        let s = shuffle(&u, &v).unwrap();
        prop_assert!(lie_projector_sum(&s).unwrap().is_empty());
    }

    #[test]
    fn lambda_squared(n in 1usize..6) {
        let w: Vec<usize> = (1..=n).collect();
        let l = lie_projector(&w).unwrap();
        let mut expected = WordSum::default();
        expected.add_sum(&l, &qi(n as i64));
        prop_assert_eq!(lie_projector_sum(&l).unwrap(), expected);
    }

    #[test]
    fn pre_lie_symmetry(a in component(1, 4), b in component(1, 4), c in component(1, 3)) {
        pre_lie(&a, &b, &c)?;
    }

    #[test]
    fn pre_lie_mixed_depths(a in component(1, 3), b in component(2, 2), c in component(1, 2)) {
        pre_lie_mixed(&a, &b, &c)?;
    }

    #[test]
    fn jacobi(a in component(1, 4), b in component(1, 4), c in component(1, 4)) {
        let br = ihara_bracket;
        let t1 = br(&a, 1, &br(&b, 1, &c, 1), 2);
        let t2 = br(&b, 1, &br(&c, 1, &a, 1), 2);
        let t3 = br(&c, 1, &br(&a, 1, &b, 1), 2);
        prop_assert!((t1 + t2 + t3).is_zero());
    }

    #[test]
    fn shuffle_derivation_law(f in component(1, 3), g in polar_component(1), h in component(2, 2)) {
        shuffle_derivation(&f, &g, &h)?;
    }

    #[test]
    fn stuffle_derivation_law(f in component(1, 3), g in component(2, 2), h in polar_component(1)) {
        stuffle_derivation(&f, &g, &h)?;
    }

    #[test]
    fn dihedral_bracket_depth_one(f in depth_one_even(), g in depth_one_even()) {
        dihedral_depth_one(&f, &g)?;
    }

    #[test]
    fn dihedral_bracket_depth_two(f in depth_one_even(), a in depth_one_even(), b in depth_one_even()) {
        dihedral_depth_two(&f, &a, &b)?;
    }

    #[test]
    fn action_weight_additivity(da in 0u32..5, db in 0u32..5, ca in prop::collection::vec(-3i64..=3, 12), cb in prop::collection::vec(-3i64..=3, 12)) {
        let a = poly_from(1, da, &ca).to_affine();
        let b = poly_from(2, db, &cb).to_affine();
        let s = DepthSeries::single(3, ihara_action(&a, 1, &b, 2), None, 3);
        let p = poly_of(&s.component(3), 3);
        if !p.is_zero() {
            prop_assert_eq!(p.degrees(), vec![da + db]);
        }
    }

    #[test]
    fn lambda_form_matches_families((f, sharp) in lambda_input_two()) {
        lambda_depth_two(&f, sharp)?;
    }

    #[test]
    fn lambda_form_matches_families_depth_three((f, sharp) in lambda_input_three()) {
        lambda_depth_three(&f, sharp)?;
    }

    #[test]
    fn parity_kills_odd_total_degree((depth, degree) in odd_total()) {
        parity(depth, degree)?;
    }
}

#[test]
fn monomial_listing_is_complete() {
    let ms: Vec<Monomial> = Polynomial::monomials(3, 4);
    assert_eq!(ms.len(), 15);
    assert!(ms.windows(2).all(|w| w[0] < w[1]));
}
