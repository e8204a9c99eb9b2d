//! The linearized Ihara action computed on words in `e_0, e_1` and carried to
//! commuting variables, compared with the closed formula on reduced functions.

use std::collections::BTreeMap;

use dshuffle::ratfun::{qi, Form, Monomial, Polynomial, Q};
use dshuffle::series::{ihara_action, ihara_bracket};
use num::Zero;
use proptest::prelude::*;

type Word = Vec<u8>;
type Sum = BTreeMap<Word, Q>;

fn push(out: &mut Sum, w: Word, c: Q) {
    let e = out.entry(w).or_insert_with(Q::zero);
    *e += c;
}

/// `a ∘ (e_0^n e_1 w) = e_0^n a e_1 w + e_0^n e_1 a^* w + e_0^n e_1 (a ∘ w)` and `a ∘ e_0^n = e_0^n a`.
fn circ(a: &[u8], w: &[u8]) -> Sum {
    let mut out = Sum::new();
    let n = w.iter().take_while(|&&l| l == 0).count();
    let pre = vec![0u8; n];
    if n == w.len() {
        push(&mut out, [pre, a.to_vec()].concat(), qi(1));
        return out;
    }
    let rest = &w[n + 1..];
    push(&mut out, [&pre[..], a, &[1], rest].concat(), qi(1));
    let rev: Vec<u8> = a.iter().rev().copied().collect();
    let sign = if a.len() % 2 == 0 { qi(1) } else { qi(-1) };
    push(&mut out, [&pre[..], &[1], &rev[..], rest].concat(), sign);
    for (u, c) in circ(a, rest) {
        push(&mut out, [&pre[..], &[1], &u[..]].concat(), c);
    }
    out
}

/// `e_0^{a_0} e_1 e_0^{a_1} ⋯ e_1 e_0^{a_r} ↦ y_0^{a_0} ⋯ y_r^{a_r}`, with `y_i` stored as variable `i + 1`.
fn rho(w: &[u8], depth: usize) -> Monomial {
    let mut exps = vec![0u32; depth + 1];
    let mut k = 0;
    for &l in w {
        if l == 1 {
            k += 1;
        } else {
            exps[k] += 1;
        }
    }
    assert_eq!(k, depth);
    Monomial(exps)
}

fn rho_inverse(m: &Monomial) -> Word {
    let mut w = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if i > 0 {
            w.push(1);
        }
        w.extend(std::iter::repeat_n(0, e as usize));
    }
    w
}

/// `f(y_0..y_r) = f̄(y_1 − y_0, …, y_r − y_0)`.
fn lift(f: &Polynomial, r: usize) -> Polynomial {
    let images: Vec<Form> = (1..=r).map(|k| Form::diff(k + 1, 1)).collect();
    f.substitute(&images, r + 1)
}

/// `f̄(x_1..x_r) = f(0, x_1, …, x_r)`.
fn reduce(f: &Polynomial, r: usize) -> Polynomial {
    let mut images = vec![Form::ZERO];
    images.extend((1..=r).map(Form::var));
    f.substitute(&images, r)
}

fn word_action(f: &Polynomial, r: usize, g: &Polynomial, s: usize) -> Polynomial {
    let (fy, gy) = (lift(f, r), lift(g, s));
    let mut out = Polynomial::zero(r + s + 1);
    for (ma, ca) in &fy.terms {
        for (mw, cw) in &gy.terms {
            for (u, c) in circ(&rho_inverse(ma), &rho_inverse(mw)) {
                out.add_term(rho(&u, r + s), ca * cw * c);
            }
        }
    }
    reduce(&out, r + s)
}

fn poly(arity: usize, degree: u32, coeffs: &[i64]) -> Polynomial {
    let mut p = Polynomial::zero(arity);
    for (m, &c) in Polynomial::monomials(arity, degree).into_iter().zip(coeffs) {
        p.add_term(m, qi(c));
    }
    p
}

fn as_poly(f: &dshuffle::ratfun::AffineRational, arity: usize) -> Polynomial {
    dshuffle::ratfun::RationalFunction::from_affine(f, arity).unwrap().num
}

#[test]
fn bracket_of_x2_and_x4() {
    let x2 = poly(1, 2, &[1]);
    let x4 = poly(1, 4, &[1]);
    let words = word_action(&x2, 1, &x4, 1).add(&word_action(&x4, 1, &x2, 1).scale(&qi(-1)));
    let formula = as_poly(&ihara_bracket(&x2.to_affine(), 1, &x4.to_affine(), 1), 2);
    assert_eq!(words, formula);
    let mut expected = Polynomial::zero(2);
    for (e, c) in [([5, 1], 2), ([4, 2], -5), ([2, 4], 5), ([1, 5], -2)] {
        expected.add_term(Monomial(e.to_vec()), qi(c));
    }
    assert_eq!(formula, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn action_matches_words(
        r in 1usize..3,
        s in 1usize..3,
        df in 0u32..4,
        dg in 0u32..4,
        cf in prop::collection::vec(-3i64..=3, 10),
        cg in prop::collection::vec(-3i64..=3, 10),
    ) {
        let f = poly(r, df, &cf);
        let g = poly(s, dg, &cg);
        let formula = as_poly(&ihara_action(&f.to_affine(), r, &g.to_affine(), s), r + s);
        prop_assert_eq!(word_action(&f, r, &g, s), formula);
    }
}
