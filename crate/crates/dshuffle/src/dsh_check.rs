//! Verifiers for the equation families: shuffle (with `♯`), stuffle (with
//! divided differences), their linearized forms, the `λ` form, translation
//! invariance, dihedral symmetry, parity and the six-term relation.

use std::fmt;

use num::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratfun::q::{qi, Q};
use crate::ratfun::{AffineRational, Form};
use crate::series::{DepthSeries, YFunction};
use crate::words::{lie_projector, shuffle, stuffle, Letter, WordSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Shuffle,
    Stuffle,
    LinStuffle,
    LinShuffle,
    Lambda,
    LambdaSharp,
    Translation,
    Dihedral,
    SixTerm,
    Parity,
    Evenness,
    PoleShape,
    Residue,
    Relation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indices {
    Pair(usize, usize),
    Depth(usize),
}

/// The outcome of one equation: `passed` holds exactly when `residual` is zero.
#[derive(Clone, Debug)]
pub struct EquationReport {
    pub family: Family,
    pub indices: Indices,
    pub residual: AffineRational,
    pub passed: bool,
}

impl EquationReport {
    pub fn new(family: Family, indices: Indices, residual: AffineRational) -> Self {
        let residual = residual.normalized();
        let passed = residual.is_empty();
        EquationReport { family, indices, residual, passed }
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            family: Family,
            indices: Indices,
            residual: String,
            passed: bool,
        }
        serde_json::to_value(Out {
            family: self.family,
            indices: self.indices,
            residual: if self.passed { "0".into() } else { self.residual.dump() },
            passed: self.passed,
        })
        .expect("report serializes")
    }
}

impl fmt::Display for EquationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = match self.indices {
            Indices::Pair(p, q) => format!("({p},{q})"),
            Indices::Depth(d) => format!("d={d}"),
        };
        let verdict = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{:?} {idx}: {verdict}", self.family)
    }
}

/// A list of reports with a combined verdict.
#[derive(Clone, Debug, Default)]
pub struct ReportBundle {
    pub reports: Vec<EquationReport>,
}

impl ReportBundle {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationReport> {
        self.reports.iter().filter(|r| !r.passed)
    }

    pub fn summary(&self) -> String {
        let ok = self.reports.iter().filter(|r| r.passed).count();
        format!("{ok}/{} equations pass", self.reports.len())
    }
}

fn subst(f: &AffineRational, images: &[Form]) -> AffineRational {
    f.substitute(images).expect("substitution images are nonzero forms")
}

/// `f(x_{i_1}, …, x_{i_r})`.
pub fn eval_word(f: &AffineRational, w: &[usize]) -> AffineRational {
    let images: Vec<Form> = w.iter().map(|&i| Form::var(i)).collect();
    subst(f, &images)
}

/// `f^♯(w) = f(x_{i_1}, x_{i_1} + x_{i_2}, …, x_{i_1} + … + x_{i_r})`.
pub fn eval_word_sharp(f: &AffineRational, w: &[usize]) -> AffineRational {
    let mut acc = Form::ZERO;
    let images: Vec<Form> = w
        .iter()
        .map(|&i| {
            acc = acc.add(&Form::var(i));
            acc
        })
        .collect();
    subst(f, &images)
}

/// Evaluates `f` (or `f^♯`) on a linear combination of words.
pub fn eval_sum(f: &AffineRational, s: &WordSum, sharp: bool) -> AffineRational {
    let terms: Vec<(&Vec<usize>, &Q)> = s.terms.iter().collect();
    let parts = crate::par::map(&terms, |(w, c)| {
        let v = if sharp { eval_word_sharp(f, w) } else { eval_word(f, w) };
        v.scale(c)
    });
    parts.into_iter().fold(AffineRational::zero(), |a, b| a + b)
}

fn first_last(p: usize, q: usize) -> (Vec<usize>, Vec<usize>) {
    ((1..=p).collect(), (p + 1..=p + q).collect())
}

/// The `(p,q)` shuffle equation `f̄^♯(x_1 … x_p ш x_{p+1} … x_{p+q}) = 0`.
pub fn check_shuffle(f: &AffineRational, p: usize, q: usize) -> EquationReport {
    let (u, v) = first_last(p, q);
    let s = shuffle(&u, &v).expect("disjoint letters");
    EquationReport::new(Family::Shuffle, Indices::Pair(p, q), eval_sum(f, &s, true))
}

/// The linearized `(p,q)` equation, with or without `♯`.
pub fn check_linearized(f: &AffineRational, p: usize, q: usize, sharp: bool) -> EquationReport {
    let (u, v) = first_last(p, q);
    let s = shuffle(&u, &v).expect("disjoint letters");
    let fam = if sharp { Family::LinShuffle } else { Family::LinStuffle };
    EquationReport::new(fam, Indices::Pair(p, q), eval_sum(f, &s, sharp))
}

/// Expands a stuffle term: merged letters `{i,j}` become divided differences
/// `(φ(x_i) − φ(x_j))/(x_i − x_j)` of the component of the term's length.
fn eval_stuffle_term(phi: &AffineRational, term: &[Letter]) -> AffineRational {
    let merged: Vec<usize> = term.iter().enumerate().filter(|(_, l)| matches!(l, Letter::Merged(..))).map(|(k, _)| k).collect();
    let mut den = Vec::new();
    for &k in &merged {
        if let Letter::Merged(i, j) = term[k] {
            den.push((Form::diff(i, j), -1));
        }
    }
    let weight = AffineRational::term(Q::one(), &den);
    let mut acc = AffineRational::zero();
    for mask in 0u32..(1 << merged.len()) {
        let mut sign = Q::one();
        let images: Vec<Form> = term
            .iter()
            .enumerate()
            .map(|(k, l)| match *l {
                Letter::Single(i) => Form::var(i),
                Letter::Merged(i, j) => {
                    let pos = merged.iter().position(|&m| m == k).expect("merged letter");
                    if mask >> pos & 1 == 1 {
                        sign = -sign.clone();
                        Form::var(j)
                    } else {
                        Form::var(i)
                    }
                }
            })
            .collect();
        acc.add_assign_scaled(&subst(phi, &images), &sign);
    }
    &acc * &weight
}

/// The `(p,q)` stuffle equation `Φ(x_1 … x_p * x_{p+1} … x_{p+q}) = 0`,
/// which involves the components of depth `max(p,q) … p+q`.
pub fn check_stuffle(phi: &DepthSeries, p: usize, q: usize) -> Result<EquationReport> {
    let (u, v) = first_last(p, q);
    let terms = stuffle(&u, &v)?;
    for d in p.max(q)..=p + q {
        if d > phi.max_depth {
            return Err(Error::MissingComponent(d));
        }
    }
    let items: Vec<_> = terms.iter().collect();
    let parts = crate::par::map(&items, |(t, c)| eval_stuffle_term(&phi.component(t.len()), t).scale(c));
    let residual = parts.into_iter().fold(AffineRational::zero(), |a, b| a + b);
    Ok(EquationReport::new(Family::Stuffle, Indices::Pair(p, q), residual))
}

/// `λ_n f − n f` (or its `♯` version); zero exactly when all `(p,q)`
/// equations of that family hold in depth `n`.
pub fn check_lambda_form(f: &AffineRational, n: usize, sharp: bool) -> Result<EquationReport> {
    if n < 2 {
        return Err(Error::Precondition("the λ form needs depth at least 2".into()));
    }
    let w: Vec<usize> = (1..=n).collect();
    let lam = lie_projector(&w)?;
    let lhs = eval_sum(f, &lam, sharp);
    let rhs = if sharp { eval_word_sharp(f, &w) } else { f.clone() };
    let fam = if sharp { Family::LambdaSharp } else { Family::Lambda };
    Ok(EquationReport::new(fam, Indices::Depth(n), lhs - rhs.scale(&qi(n as i64))))
}

/// `∇ f = 0` for a function of `y_0 … y_r`.
pub fn check_translation_invariance(f: &YFunction) -> EquationReport {
    EquationReport::new(Family::Translation, Indices::Depth(f.depth), f.f.nabla(f.depth + 1))
}

/// Evenness, cyclic invariance and `f(y_0..y_r) = (−1)^{r+1} f(y_r..y_0)` of
/// the translation-invariant lift of `f̄`. The residual is the first failing one.
pub fn check_dihedral(f: &AffineRational, r: usize) -> EquationReport {
    let y = YFunction::unreduce(f, r);
    let neg: Vec<Form> = (1..=r + 1).map(|i| Form::var(i).scale(-1)).collect();
    let even = &y.f - &subst(&y.f, &neg);
    let rot: Vec<usize> = (0..=r).map(|j| (j + 1) % (r + 1)).collect();
    let cyc = &y.f - &y.at(&rot);
    let rev: Vec<usize> = (0..=r).rev().collect();
    let sign = if r % 2 == 0 { -Q::one() } else { Q::one() };
    let refl = &y.f - &y.at(&rev).scale(&sign);
    let residual = [even, cyc, refl].into_iter().find(|x| !x.is_zero()).unwrap_or_else(AffineRational::zero);
    EquationReport::new(Family::Dihedral, Indices::Depth(r), residual)
}

/// Cyclic invariance `f(y_0..y_r) = f(y_1..y_r, y_0)` of the lift of `f̄`.
pub fn check_cyclic(f: &AffineRational, r: usize) -> EquationReport {
    let y = YFunction::unreduce(f, r);
    let rot: Vec<usize> = (0..=r).map(|j| (j + 1) % (r + 1)).collect();
    EquationReport::new(Family::Dihedral, Indices::Depth(r), &y.f - &y.at(&rot))
}

/// Depth-one evenness `f(x_1) = f(−x_1)`.
pub fn check_even_depth_one(f: &AffineRational) -> EquationReport {
    EquationReport::new(Family::Evenness, Indices::Depth(1), f - &subst(f, &[Form::var(1).scale(-1)]))
}

/// The linearized solution space in depth `depth` and polynomial degree
/// `degree` must vanish when `depth + degree` is odd and `depth ≥ 2`.
pub fn check_parity(depth: usize, degree: usize) -> Result<EquationReport> {
    let basis = crate::modforms::lin_ds_nullspace(depth, (degree + depth) as i64, false)?;
    let residual = basis.into_iter().next().unwrap_or_else(AffineRational::zero);
    Ok(EquationReport::new(Family::Parity, Indices::Pair(depth, degree), residual))
}

fn even_weight(f: &DepthSeries, d: usize) -> Result<()> {
    match f.weight {
        Some(w) if w % 2 == 0 => {}
        Some(w) => return Err(Error::OddWeight(w)),
        None => return Err(Error::WeightUnset),
    }
    if d < 2 || d > f.max_depth {
        return Err(Error::MissingComponent(d));
    }
    Ok(())
}

/// The terms of the six-term relation for `f^{(d−1)} = g`:
/// `g(x_2..x_d)`, `g(x_{d−1}..x_1)`, `g(x_2−x_1, …, x_d−x_1)` and
/// `g(x_d−x_{d−1}, …, x_d−x_1)`.
fn six_term_pieces(g: &AffineRational, d: usize) -> [AffineRational; 4] {
    let v = |i: usize| Form::var(i);
    [
        subst(g, &(2..=d).map(v).collect::<Vec<_>>()),
        subst(g, &(1..d).rev().map(v).collect::<Vec<_>>()),
        subst(g, &(2..=d).map(|i| Form::diff(i, 1)).collect::<Vec<_>>()),
        subst(g, &(1..d).rev().map(|i| Form::diff(d, i)).collect::<Vec<_>>()),
    ]
}

fn reversed(f: &AffineRational, d: usize) -> AffineRational {
    subst(f, &(1..=d).rev().map(Form::var).collect::<Vec<_>>())
}

fn inv(i: usize) -> AffineRational {
    AffineRational::form_pow(Form::var(i), -1)
}

/// The six-term relation exactly as displayed for even weight:
///
/// `f(x_1..x_d) − f(x_d..x_1) = g(x_2..x_d)/x_1 − g(x_{d−1}..x_1)/x_d
///  − g(x_2−x_1, …, x_d−x_1)/x_1 − (−1)^d g(x_d−x_{d−1}, …, x_d−x_1)/x_d`
///
/// with `g = f^{(d−1)}`. Solutions of the double shuffle equations generally
/// fail it; see [`check_six_term_symmetric`] for the form they satisfy.
pub fn check_six_term(f: &DepthSeries, d: usize) -> Result<EquationReport> {
    even_weight(f, d)?;
    let fd = f.component(d);
    let [a, b, c, e] = six_term_pieces(&f.component(d - 1), d);
    let sign = if d % 2 == 0 { Q::one() } else { -Q::one() };
    let lhs = &fd - &reversed(&fd, d);
    let rhs = &(&a - &c) * &inv(1) - &(&b + &e.scale(&sign)) * &inv(d);
    Ok(EquationReport::new(Family::SixTerm, Indices::Depth(d), lhs - rhs))
}

/// The six-term relation obtained from [`check_alpha_identity`] for even
/// weight, where `f̃^{(d)} = f(x_d..x_1)`:
///
/// `f(x_1..x_d) + f(x_d..x_1) = g(x_2..x_d)/x_1 + g(x_{d−1}..x_1)/x_d
///  − g(x_2−x_1, …, x_d−x_1)/x_1 + (−1)^d g(x_d−x_{d−1}, …, x_d−x_1)/x_d`.
pub fn check_six_term_symmetric(f: &DepthSeries, d: usize) -> Result<EquationReport> {
    even_weight(f, d)?;
    let fd = f.component(d);
    let [a, b, c, e] = six_term_pieces(&f.component(d - 1), d);
    let sign = if d % 2 == 0 { Q::one() } else { -Q::one() };
    let lhs = &fd + &reversed(&fd, d);
    let rhs = &(&a - &c) * &inv(1) + &(&b + &e.scale(&sign)) * &inv(d);
    Ok(EquationReport::new(Family::SixTerm, Indices::Depth(d), lhs - rhs))
}

/// Depth `d` of `(f + f̃) ⨰ (1 − μ_−) − μ_− ⨰ f + f ∘ μ_−`, with
/// `f̃^{(k)} = (−1)^k f^{(k)}(−x_k, …, −x_1)`; valid for any weight.
pub fn check_alpha_identity(f: &DepthSeries, d: usize) -> Result<EquationReport> {
    if d < 2 || d > f.max_depth {
        return Err(Error::MissingComponent(d));
    }
    let tilde = |k: usize| {
        let neg: Vec<Form> = (1..=k).rev().map(|i| Form::var(i).scale(-1)).collect();
        let t = subst(&f.component(k), &neg);
        if k % 2 == 1 {
            -t
        } else {
            t
        }
    };
    let lhs = (&f.component(d) + &tilde(d)) - &(&f.component(d - 1) + &tilde(d - 1)) * &inv(d);
    let g = f.component(d - 1);
    let shifted = subst(&g, &(2..=d).map(Form::var).collect::<Vec<_>>());
    let rhs = &inv(1) * &shifted - crate::series::ihara_action(&g, d - 1, &inv(1), 1);
    Ok(EquationReport::new(Family::SixTerm, Indices::Depth(d), lhs - rhs))
}

/// All `(p,q)` shuffle and stuffle equations up to `max_depth`.
pub fn is_in_pdmr(phi: &DepthSeries, max_depth: usize) -> Result<ReportBundle> {
    let mut jobs = Vec::new();
    for n in 2..=max_depth {
        for p in 1..=n / 2 {
            jobs.push((n, p));
        }
    }
    let results = crate::par::map(&jobs, |&(n, p)| -> Result<[EquationReport; 2]> {
        let f = phi.get(n)?;
        Ok([check_shuffle(&f, p, n - p), check_stuffle(phi, p, n - p)?])
    });
    let mut out = ReportBundle::default();
    for r in results {
        out.reports.extend(r?);
    }
    Ok(out)
}

/// `c̄_r f̄` is a polynomial, where `c̄_r = x_1 (x_2 − x_1) ⋯ (x_r − x_{r−1}) x_r`.
pub fn check_pole_shape(f: &AffineRational, r: usize) -> EquationReport {
    let mut fs: Vec<(Form, i32)> = (1..=r).map(|i| (Form::diff(i, i - 1), 1)).collect();
    fs.push((Form::var(r), 1));
    let cf = f * &AffineRational::term(Q::one(), &fs);
    let canon = cf.canonical_in(r);
    let polar: AffineRational = {
        let mut c = canon.clone();
        c.entries.retain(|k, _| k.iter().any(|k| matches!(k, crate::ratfun::Key::Pole(..))));
        c.to_affine()
    };
    EquationReport::new(Family::PoleShape, Indices::Depth(r), polar)
}

/// The linearized double shuffle equations in depth `r`, the pole-shape
/// condition, and evenness when `r = 1`.
pub fn is_in_pls(f: &AffineRational, r: usize) -> ReportBundle {
    let mut out = ReportBundle::default();
    out.reports.push(check_pole_shape(f, r));
    if r == 1 {
        out.reports.push(check_even_depth_one(f));
    }
    let ps: Vec<usize> = (1..=r / 2).collect();
    let res = crate::par::map(&ps, |&p| [check_linearized(f, p, r - p, true), check_linearized(f, p, r - p, false)]);
    for pair in res {
        out.reports.extend(pair);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::{c_n, psi_odd, psi_series, q4, z3};
    use crate::ratfun::q;

    fn x(i: usize, e: i32) -> AffineRational {
        AffineRational::form_pow(Form::var(i), e)
    }

    #[test]
    fn shuffle_depth_two_on_psi3() {
        assert!(check_shuffle(&psi_odd(1, 2), 1, 1).passed);
        assert!(check_shuffle(&psi_odd(1, 3), 1, 2).passed);
    }

    #[test]
    fn shuffle_negative_control() {
        let f = &x(1, 1) * &x(2, 1);
        let r = check_shuffle(&f, 1, 1);
        assert!(!r.passed);
        let expected = (&x(1, 2) + &x(2, 2)) + (&x(1, 1) * &x(2, 1)).scale(&qi(2));
        assert!(r.residual.equals(&expected));
    }

    #[test]
    fn stuffle_on_psi3() {
        let s = psi_series(3, 3).unwrap();
        assert!(check_stuffle(&s, 1, 1).unwrap().passed);
        assert!(check_stuffle(&s, 1, 2).unwrap().passed);
    }

    #[test]
    fn stuffle_odd_depth_one_fails() {
        let mut s = DepthSeries::new(2, Some(2));
        s.set(1, x(1, 1));
        assert!(!check_stuffle(&s, 1, 1).unwrap().passed);
    }

    #[test]
    fn linearized_examples() {
        let c2 = c_n(2);
        assert!(check_linearized(&c2, 1, 1, false).passed);
        assert!(check_linearized(&z3(), 1, 2, false).passed);
        let r = check_linearized(&z3(), 1, 2, true);
        assert!(r.residual.equals(&AffineRational::one()));
        let q = q4();
        for p in 1..=2 {
            assert!(check_linearized(&q, p, 4 - p, true).passed);
            assert!(check_linearized(&q, p, 4 - p, false).passed);
        }
    }

    #[test]
    fn lambda_matches_families() {
        let f = Form::diff(1, 2);
        assert!(check_lambda_form(&AffineRational::form_pow(f, 1), 2, false).unwrap().passed);
        let c3 = c_n(3);
        let fam = (1..=1).all(|p| check_linearized(&c3, p, 3 - p, false).passed);
        assert_eq!(check_lambda_form(&c3, 3, false).unwrap().passed, fam);
        let p = psi_odd(2, 3);
        let fam = check_shuffle(&p, 1, 2).passed;
        assert_eq!(check_lambda_form(&p, 3, true).unwrap().passed, fam);
    }

    #[test]
    fn translation_and_dihedral() {
        let y = YFunction::unreduce(&x(1, 2), 1);
        assert!(check_translation_invariance(&y).passed);
        let bad = YFunction { depth: 1, f: x(1, 1) };
        assert!(!check_translation_invariance(&bad).passed);
        for n in 1..=5 {
            assert!(check_cyclic(&c_n(n), n).passed, "c_{n}");
            assert_eq!(check_dihedral(&c_n(n), n).passed, n % 2 == 1, "c_{n}");
        }
    }

    #[test]
    fn six_term_examples() {
        let psi0 = psi_series(0, 4).unwrap();
        for d in 2..=4 {
            assert!(check_six_term_symmetric(&psi0, d).unwrap().passed, "depth {d}");
            assert!(check_alpha_identity(&psi0, d).unwrap().passed, "depth {d}");
        }
        let r = check_six_term(&psi0, 2).unwrap();
        let expected = (&inv(1) * &inv(2)).scale(&q(-2, 3)) + (&inv(1) * &AffineRational::form_pow(Form::diff(2, 1), -1)).scale(&q(4, 3));
        assert!(r.residual.equals(&expected));
        let mut lone = DepthSeries::new(2, Some(2));
        lone.set(1, x(1, 2));
        let r = check_six_term(&lone, 2).unwrap();
        let rhs = (&(&x(2, 2) - &AffineRational::form_pow(Form::diff(2, 1), 2)) * &inv(1))
            - &(&x(1, 2) + &AffineRational::form_pow(Form::diff(2, 1), 2)) * &inv(2);
        assert!(r.residual.equals(&rhs.scale(&qi(-1))));
        let psi3 = psi_series(3, 2).unwrap();
        assert!(matches!(check_six_term(&psi3, 2), Err(Error::OddWeight(3))));
    }

    #[test]
    fn psi3_membership_low_depth() {
        let s = psi_series(3, 3).unwrap();
        assert!(is_in_pdmr(&s, 3).unwrap().passed());
    }

    #[test]
    fn pls_examples() {
        assert!(is_in_pls(&x(1, -2), 1).passed());
        assert!(!is_in_pls(&x(1, -3), 1).passed());
        assert!(is_in_pls(&x(1, 4), 1).passed());
    }
}
