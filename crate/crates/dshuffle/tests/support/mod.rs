//! Strategies and property checks shared by the property suite and the
//! acceptance runner.

#![allow(dead_code)]

use dshuffle::dsh_check::{check_lambda_form, check_linearized, check_parity};
use dshuffle::ratfun::{qi, AffineRational, Form, Polynomial, RationalFunction};
use dshuffle::series::{dihedral_bracket, ihara_action, ihara_bracket, shuffle_concat, stuffle_concat};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Check = Result<(), TestCaseError>;

pub fn poly_from(arity: usize, degree: u32, coeffs: &[i64]) -> Polynomial {
    let mut p = Polynomial::zero(arity);
    for (m, &c) in Polynomial::monomials(arity, degree).into_iter().zip(coeffs) {
        p.add_term(m, qi(c));
    }
    p
}

pub fn poly_of(f: &AffineRational, arity: usize) -> Polynomial {
    RationalFunction::from_affine(f, arity).unwrap().num
}

/// A homogeneous polynomial component of the given arity with small integer coefficients.
pub fn component(arity: usize, max_degree: u32) -> impl Strategy<Value = AffineRational> {
    (0..=max_degree, prop::collection::vec(-3i64..=3, 12)).prop_map(move |(deg, cs)| poly_from(arity, deg, &cs).to_affine())
}

/// A component with a possible simple pole along `x_1` or `x_2 - x_1`.
pub fn polar_component(arity: usize) -> impl Strategy<Value = AffineRational> {
    (component(arity, 3), 0usize..3).prop_map(move |(f, k)| {
        let pole = match (k, arity) {
            (1, _) => AffineRational::form_pow(Form::var(1), -1),
            (2, a) if a >= 2 => AffineRational::form_pow(Form::diff(2, 1), -1),
            _ => AffineRational::one(),
        };
        &f * &pole
    })
}

/// `f = P / c̄_r` with `c̄_r = x_1 (x_2 − x_1) ⋯ (x_r − x_{r−1}) x_r`, of even degree,
/// made invariant under `f ↦ (−1)^{r+1} f(−x_r, …, −x_1)`.
pub fn reflexive_polar(arity: usize) -> impl Strategy<Value = AffineRational> {
    (0u32..=2, prop::collection::vec(-3i64..=3, 16)).prop_map(move |(k, cs)| {
        let p = poly_from(arity, arity as u32 + 1 + 2 * k, &cs).to_affine();
        let mut f = &p * &AffineRational::form_pow(Form::var(1), -1);
        for i in 2..=arity {
            f = &f * &AffineRational::form_pow(Form::diff(i, i - 1), -1);
        }
        f = &f * &AffineRational::form_pow(Form::var(arity), -1);
        let images: Vec<Form> = (1..=arity).map(|i| Form::var(arity + 1 - i).scale(-1)).collect();
        let flipped = f.substitute(&images).expect("linear substitution");
        let sign = if arity % 2 == 1 { qi(1) } else { qi(-1) };
        f + flipped.scale(&sign)
    })
}

/// Combinations of `x_1^{2a}` with `a ≥ −1`.
pub fn depth_one_even() -> impl Strategy<Value = AffineRational> {
    prop::collection::vec((-1i32..=4, -3i64..=3), 1..3).prop_map(|ts| {
        ts.into_iter()
            .fold(AffineRational::zero(), |acc, (a, c)| acc + AffineRational::form_pow(Form::var(1), 2 * a).scale(&qi(c)))
    })
}

pub fn pre_lie(a: &AffineRational, b: &AffineRational, c: &AffineRational) -> Check {
    let assoc = |a: &AffineRational, b: &AffineRational| {
        ihara_action(a, 1, &ihara_action(b, 1, c, 1), 2) - ihara_action(&ihara_action(a, 1, b, 1), 2, c, 1)
    };
    prop_assert!(assoc(a, b).equals(&assoc(b, a)));
    Ok(())
}

pub fn pre_lie_mixed(a: &AffineRational, b: &AffineRational, c: &AffineRational) -> Check {
    let assoc = |a: &AffineRational, r: usize, b: &AffineRational, s: usize| {
        ihara_action(a, r, &ihara_action(b, s, c, 1), s + 1) - ihara_action(&ihara_action(a, r, b, s), r + s, c, 1)
    };
    prop_assert!(assoc(a, 1, b, 2).equals(&assoc(b, 2, a, 1)));
    Ok(())
}

pub fn shuffle_derivation(f: &AffineRational, g: &AffineRational, h: &AffineRational) -> Check {
    let lhs = ihara_action(f, 1, &shuffle_concat(g, 1, h, 2), 3);
    let rhs = shuffle_concat(&ihara_action(f, 1, g, 1), 2, h, 2) + shuffle_concat(g, 1, &ihara_action(f, 1, h, 2), 3)
        - shuffle_concat(&shuffle_concat(g, 1, f, 1), 2, h, 2);
    prop_assert!(lhs.equals(&rhs));
    Ok(())
}

pub fn stuffle_derivation(f: &AffineRational, g: &AffineRational, h: &AffineRational) -> Check {
    let lhs = ihara_action(f, 1, &stuffle_concat(g, 2, h, 1), 3);
    let rhs = stuffle_concat(&ihara_action(f, 1, g, 2), 3, h, 1) + stuffle_concat(g, 2, &ihara_action(f, 1, h, 1), 2)
        - stuffle_concat(&stuffle_concat(g, 2, f, 1), 3, h, 1);
    prop_assert!(lhs.equals(&rhs));
    Ok(())
}

pub fn dihedral_depth_one(f: &AffineRational, g: &AffineRational) -> Check {
    prop_assert!(dihedral_bracket(f, 1, g, 1).equals(&ihara_bracket(f, 1, g, 1)));
    Ok(())
}

pub fn dihedral_depth_two(f: &AffineRational, a: &AffineRational, b: &AffineRational) -> Check {
    let g = ihara_bracket(a, 1, b, 1);
    prop_assert!(dihedral_bracket(f, 1, &g, 2).equals(&ihara_bracket(f, 1, &g, 2)));
    Ok(())
}

pub fn lambda_depth_two(f: &AffineRational, sharp: bool) -> Check {
    let family = check_linearized(f, 1, 1, sharp).passed;
    prop_assert_eq!(family, check_lambda_form(f, 2, sharp).unwrap().passed);
    Ok(())
}

pub fn lambda_depth_three(f: &AffineRational, sharp: bool) -> Check {
    let family = check_linearized(f, 1, 2, sharp).passed && check_linearized(f, 2, 1, sharp).passed;
    prop_assert_eq!(family, check_lambda_form(f, 3, sharp).unwrap().passed);
    Ok(())
}

/// Depth-2 inputs for the λ comparison: a bracket of depth-1 generators,
/// optionally perturbed so that both outcomes occur.
pub fn lambda_input_two() -> impl Strategy<Value = (AffineRational, bool)> {
    (depth_one_even(), depth_one_even(), component(2, 4), 0i64..2, any::<bool>())
        .prop_map(|(a, b, noise, t, sharp)| (ihara_bracket(&a, 1, &b, 1) + noise.scale(&qi(t)), sharp))
}

pub fn lambda_input_three() -> impl Strategy<Value = (AffineRational, bool)> {
    (depth_one_even(), depth_one_even(), depth_one_even(), component(3, 2), 0i64..2, any::<bool>()).prop_map(
        |(a, b, c, noise, t, sharp)| {
            (ihara_bracket(&a, 1, &ihara_bracket(&b, 1, &c, 1), 2) + noise.scale(&qi(t)), sharp)
        },
    )
}

/// `(depth, degree)` with `depth + degree` odd.
pub fn odd_total() -> impl Strategy<Value = (usize, usize)> {
    (2usize..4, 0usize..4).prop_map(|(depth, half)| (depth, 2 * half + if depth % 2 == 0 { 1 } else { 0 }))
}

pub fn parity(depth: usize, degree: usize) -> Check {
    let report = check_parity(depth, degree).unwrap();
    prop_assert!(report.passed, "{}", report);
    Ok(())
}
