//! Sums of products of powers of linear forms, the working representation of
//! every component in the crate.
//!
//! An [`AffineRational`] is a finite sum `Σ c_t ∏ F^e` with primitive linear
//! forms `F` and integer exponents of either sign. Products, substitutions and
//! Laurent coefficients act factor by factor, so the representation stays
//! compact until an exact comparison is needed. Comparisons go through the
//! [`Canonical`] iterated partial-fraction decomposition.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use smallvec::SmallVec;

use super::form::Form;
use super::q::{binom, fmt_q, qi, qpow, Q};
use crate::error::{Error, Result};

/// Sorted list of `(primitive form, exponent)` pairs with nonzero exponents.
pub type Factors = SmallVec<[(Form, i32); 6]>;

/// Multiplies `f^e` into a sorted factor list.
pub fn insert_factor(fs: &mut Factors, f: Form, e: i32) {
    if e == 0 {
        return;
    }
    match fs.binary_search_by(|(g, _)| g.cmp(&f)) {
        Ok(i) => {
            fs[i].1 += e;
            if fs[i].1 == 0 {
                fs.remove(i);
            }
        }
        Err(i) => fs.insert(i, (f, e)),
    }
}

/// A finite sum of scaled products of powers of linear forms.
#[derive(Clone, Default)]
pub struct AffineRational {
    terms: HashMap<Factors, Q>,
}

impl AffineRational {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut r = Self::zero();
        r.add_term(Factors::new(), c);
        r
    }

    /// `c ∏ f^e` for arbitrary nonzero forms, normalizing each factor.
    pub fn term(c: Q, factors: &[(Form, i32)]) -> Self {
        let mut coeff = c;
        let mut fs = Factors::new();
        for &(f, e) in factors {
            if f.is_zero() {
                assert!(e >= 0, "zero form in a denominator");
                if e > 0 {
                    return Self::zero();
                }
                continue;
            }
            let (s, p) = f.normalize();
            coeff *= qpow(&qi(s), e);
            insert_factor(&mut fs, p, e);
        }
        let mut r = Self::zero();
        r.add_term(fs, coeff);
        r
    }

    pub fn var(i: usize) -> Self {
        Self::term(Q::one(), &[(Form::var(i), 1)])
    }

    pub fn form_pow(f: Form, e: i32) -> Self {
        Self::term(Q::one(), &[(f, e)])
    }

    /// Adds `c ∏ f^e` where the factor list is already normalized.
    pub fn add_term(&mut self, fs: Factors, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(fs) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Factors, &Q)> {
        self.terms.iter()
    }

    /// Number of stored terms (not a canonical size).
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no terms are stored; see [`AffineRational::is_zero`] for the exact test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn add_assign_scaled(&mut self, o: &Self, c: &Q) {
        for (k, v) in &o.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    /// Highest variable index occurring in any factor.
    pub fn max_var(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|fs| fs.iter().filter_map(|(f, _)| f.top()))
            .max()
            .unwrap_or(0)
    }

    /// The set of total degrees of the stored terms.
    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(|fs| fs.iter().map(|x| x.1).sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Replaces `x_i` by `images[i - 1]`; variables beyond the slice are fixed.
    pub fn substitute(&self, images: &[Form]) -> Result<Self> {
        let mut r = Self::zero();
        'terms: for (fs, c) in &self.terms {
            let mut coeff = c.clone();
            let mut out = Factors::new();
            for &(f, e) in fs {
                let g = f.substitute(images);
                if g.is_zero() {
                    if e < 0 {
                        return Err(Error::ZeroDenominator);
                    }
                    continue 'terms;
                }
                let (s, p) = g.normalize();
                if s != 1 {
                    coeff *= qpow(&qi(s), e);
                }
                insert_factor(&mut out, p, e);
            }
            r.add_term(out, coeff);
        }
        Ok(r)
    }

    /// Evaluates at a rational point; `None` when a denominator vanishes.
    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let mut acc = Q::zero();
        for (fs, c) in &self.terms {
            let mut v = c.clone();
            for &(f, e) in fs {
                let x = f.eval(point);
                if x.is_zero() {
                    if e < 0 {
                        return None;
                    }
                    v = Q::zero();
                    break;
                }
                v *= qpow(&x, e);
            }
            acc += v;
        }
        Some(acc)
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut r = Self::zero();
        for (fs, c) in &self.terms {
            for (idx, &(f, e)) in fs.iter().enumerate() {
                let a = f.coeff(i);
                if a == 0 {
                    continue;
                }
                let mut out = fs.clone();
                out[idx].1 -= 1;
                if out[idx].1 == 0 {
                    out.remove(idx);
                }
                r.add_term(out, c * qi(e as i64 * a as i64));
            }
        }
        r
    }

    /// `∂_1 + … + ∂_n`.
    pub fn nabla(&self, n: usize) -> Self {
        let mut r = Self::zero();
        for i in 1..=n {
            r = r + self.partial(i);
        }
        r
    }

    /// Coefficient of `ε^{-k}` after writing `t = r + ε`, where `t` is the
    /// highest variable of `p` and `r` is the root of `p` in `t`.
    ///
    /// The result no longer involves `t`; other variables keep their names.
    pub fn laurent(&self, p: Form, k: u32) -> Self {
        let (_, p) = p.normalize();
        let t = p.top().unwrap();
        let gp = p.coeff(t) as i64;
        let gpr = p.with_coeff(t, 0);
        let mut r = Self::zero();
        for (fs, c) in &self.terms {
            let Some(&(_, e)) = fs.iter().find(|(f, _)| *f == p) else { continue };
            if e >= 0 || e.unsigned_abs() < k {
                continue;
            }
            let m = e.unsigned_abs() - k;
            let mut base = Factors::new();
            let mut others = Vec::new();
            for &(f, ei) in fs {
                if f == p {
                    continue;
                }
                let gi = f.coeff(t) as i64;
                if gi == 0 {
                    base.push((f, ei));
                    continue;
                }
                let w = Form::combine(gp, &f.with_coeff(t, 0), -gi, &gpr);
                let (s, fw) = w.normalize();
                others.push(Other { e: ei, gamma: qi(gi), shift: (qi(s) / qi(gp), fw) });
            }
            let scale = c * qpow(&qi(gp), e);
            for_each_split(&others, m, &mut |js, coeff| {
                let mut out = base.clone();
                for (o, &j) in others.iter().zip(js) {
                    insert_factor(&mut out, o.shift.1, o.e - j as i32);
                }
                r.add_term(out, &scale * coeff);
            });
        }
        r
    }

    /// Simple-pole residue along `p = 0`; see [`AffineRational::laurent`].
    pub fn residue(&self, p: Form) -> Self {
        self.laurent(p, 1)
    }

    /// Exact order of the pole along `p = 0` (zero if regular there).
    pub fn pole_order(&self, p: Form) -> u32 {
        let (_, p) = p.normalize();
        let mut k = self
            .terms
            .keys()
            .filter_map(|fs| fs.iter().find(|(f, _)| *f == p).map(|x| x.1))
            .filter(|&e| e < 0)
            .map(|e| e.unsigned_abs())
            .max()
            .unwrap_or(0);
        while k > 0 && self.laurent(p, k).is_zero() {
            k -= 1;
        }
        k
    }

    /// Iterated partial-fraction decomposition in the variables `x_1..x_n`,
    /// `n` being the highest variable present.
    pub fn canonical(&self) -> Canonical {
        self.canonical_in(self.max_var())
    }

    pub fn canonical_in(&self, nvars: usize) -> Canonical {
        let entries = crate::par::fold_terms(&self.terms, nvars);
        Canonical { nvars, entries }
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.canonical().entries.is_empty()
    }

    /// Exact equality test.
    pub fn equals(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }

    /// Rewrites in canonical partial-fraction form, collapsing cancellations.
    pub fn normalized(&self) -> Self {
        self.canonical().to_affine()
    }

    /// Deterministic textual dump of the stored terms.
    pub fn dump(&self) -> String {
        let mut items: Vec<String> = self
            .terms
            .iter()
            .map(|(fs, c)| {
                let mut s = fmt_q(c);
                for (f, e) in fs {
                    s.push_str(&format!("*({f})^{e}"));
                }
                s
            })
            .collect();
        items.sort();
        if items.is_empty() {
            "0".into()
        } else {
            items.join(" + ")
        }
    }
}

impl fmt::Debug for AffineRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

struct Other {
    e: i32,
    gamma: Q,
    shift: (Q, Form),
}

/// Enumerates exponent splits `Σ j_i = m` over the given factors together with
/// the product `∏ C(e_i, j_i) γ_i^{j_i} s_i^{e_i - j_i}`.
fn for_each_split(others: &[Other], m: u32, f: &mut dyn FnMut(&[u32], Q)) {
    fn rec(
        others: &[Other],
        idx: usize,
        left: u32,
        js: &mut Vec<u32>,
        acc: Q,
        f: &mut dyn FnMut(&[u32], Q),
    ) {
        if idx == others.len() {
            if left == 0 {
                f(js, acc);
            }
            return;
        }
        let o = &others[idx];
        let cap = if o.e >= 0 { left.min(o.e as u32) } else { left };
        for j in 0..=cap {
            let b = binom(o.e, j);
            if b.is_zero() {
                continue;
            }
            let c = &acc * b * qpow(&o.gamma, j as i32) * qpow(&o.shift.0, o.e - j as i32);
            js.push(j);
            rec(others, idx + 1, left - j, js, c, f);
            js.pop();
        }
    }
    rec(others, 0, m, &mut Vec::new(), Q::one(), f);
}

/// One level of a canonical path: `t^j` or `P^{-k}` with `P` a primitive form
/// whose highest variable is `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Pow(u32),
    Pole(Form, u32),
}

/// Iterated partial-fraction normal form.
///
/// Each entry is a path of keys, one per level from `x_n` down to `x_1`,
/// with its coefficient. Two expressions are equal iff their canonical maps
/// (over the same number of variables) coincide.
#[derive(Clone, Debug, Default)]
pub struct Canonical {
    pub nvars: usize,
    pub entries: HashMap<Vec<Key>, Q>,
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when no path contains a pole key.
    pub fn is_polynomial(&self) -> bool {
        self.entries.keys().all(|p| p.iter().all(|k| matches!(k, Key::Pow(_))))
    }

    /// Entries sorted by path, for deterministic iteration.
    pub fn sorted(&self) -> Vec<(&Vec<Key>, &Q)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Exponent vector `[e_1, …, e_n]` of a polynomial path.
    pub fn monomial_of(&self, path: &[Key]) -> Option<Vec<u32>> {
        let mut exps = vec![0; self.nvars];
        for (idx, k) in path.iter().enumerate() {
            match k {
                Key::Pow(j) => exps[self.nvars - 1 - idx] = *j,
                Key::Pole(..) => return None,
            }
        }
        Some(exps)
    }

    pub fn to_affine(&self) -> AffineRational {
        let mut r = AffineRational::zero();
        for (path, c) in &self.entries {
            let mut fs = Factors::new();
            for (idx, k) in path.iter().enumerate() {
                let level = self.nvars - idx;
                match k {
                    Key::Pow(j) => insert_factor(&mut fs, Form::var(level), *j as i32),
                    Key::Pole(p, k) => insert_factor(&mut fs, *p, -(*k as i32)),
                }
            }
            r.add_term(fs, c.clone());
        }
        r
    }
}

/// Expands one term into canonical leaves, accumulating into `out`.
pub(crate) fn expand_term(
    fs: &Factors,
    coeff: Q,
    level: usize,
    path: &mut Vec<Key>,
    out: &mut HashMap<Vec<Key>, Q>,
) {
    if level == 0 {
        debug_assert!(fs.is_empty());
        *out.entry(path.clone()).or_insert_with(Q::zero) += coeff;
        return;
    }
    let mut base = Factors::new();
    let mut tf: SmallVec<[(Form, i32); 6]> = SmallVec::new();
    for &(f, e) in fs {
        if f.coeff(level) != 0 {
            tf.push((f, e));
        } else {
            base.push((f, e));
        }
    }
    if tf.is_empty() {
        path.push(Key::Pow(0));
        expand_term(&base, coeff, level - 1, path, out);
        path.pop();
        return;
    }
    for (pi, &(p, e)) in tf.iter().enumerate() {
        if e >= 0 {
            continue;
        }
        let gp = p.coeff(level) as i64;
        let gpr = p.with_coeff(level, 0);
        let others: Vec<Other> = tf
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pi)
            .map(|(_, &(f, ei))| {
                let gi = f.coeff(level) as i64;
                let w = Form::combine(gp, &f.with_coeff(level, 0), -gi, &gpr);
                let (s, fw) = w.normalize();
                Other { e: ei, gamma: qi(gi), shift: (qi(s) / qi(gp), fw) }
            })
            .collect();
        let total = e.unsigned_abs();
        for k in 1..=total {
            let m = total - k;
            let scale = &coeff * qpow(&qi(gp), -(m as i32));
            for_each_split(&others, m, &mut |js, c| {
                let mut next = base.clone();
                for (o, &j) in others.iter().zip(js) {
                    insert_factor(&mut next, o.shift.1, o.e - j as i32);
                }
                path.push(Key::Pole(p, k));
                expand_term(&next, &scale * c, level - 1, path, out);
                path.pop();
            });
        }
    }
    let d: i32 = tf.iter().map(|x| x.1).sum();
    if d < 0 {
        return;
    }
    let tails: Vec<Other> = tf
        .iter()
        .map(|&(f, e)| {
            let g = f.with_coeff(level, 0);
            if g.is_zero() {
                Other { e, gamma: qi(f.coeff(level) as i64), shift: (Q::zero(), Form::ZERO) }
            } else {
                let (s, gn) = g.normalize();
                Other { e, gamma: qi(f.coeff(level) as i64), shift: (qi(s), gn) }
            }
        })
        .collect();
    for used in 0..=d as u32 {
        let j = d as u32 - used;
        for_each_tail(&tails, used, &mut |ks, c| {
            let mut next = base.clone();
            for (o, &kk) in tails.iter().zip(ks) {
                if kk > 0 {
                    insert_factor(&mut next, o.shift.1, kk as i32);
                }
            }
            path.push(Key::Pow(j));
            expand_term(&next, &coeff * c, level - 1, path, out);
            path.pop();
        });
    }
}

/// Enumerates `Σ k_i = m` with weight `∏ C(e_i, k_i) γ_i^{e_i - k_i} s_i^{k_i}`,
/// where `s_i = 0` forces `k_i = 0`.
fn for_each_tail(tails: &[Other], m: u32, f: &mut dyn FnMut(&[u32], Q)) {
    fn rec(
        tails: &[Other],
        idx: usize,
        left: u32,
        ks: &mut Vec<u32>,
        acc: Q,
        f: &mut dyn FnMut(&[u32], Q),
    ) {
        if idx == tails.len() {
            if left == 0 {
                f(ks, acc);
            }
            return;
        }
        let o = &tails[idx];
        let cap = if o.shift.0.is_zero() {
            0
        } else if o.e >= 0 {
            left.min(o.e as u32)
        } else {
            left
        };
        for k in 0..=cap {
            let b = binom(o.e, k);
            if b.is_zero() {
                continue;
            }
            let c = &acc * b * qpow(&o.gamma, o.e - k as i32) * qpow(&o.shift.0, k as i32);
            ks.push(k);
            rec(tails, idx + 1, left - k, ks, c, f);
            ks.pop();
        }
    }
    rec(tails, 0, m, &mut Vec::new(), Q::one(), f);
}

impl Add for AffineRational {
    type Output = AffineRational;
    fn add(mut self, o: Self) -> Self {
        for (k, v) in o.terms {
            self.add_term(k, v);
        }
        self
    }
}

impl<'a> Add<&'a AffineRational> for &'a AffineRational {
    type Output = AffineRational;
    fn add(self, o: Self) -> AffineRational {
        let mut r = self.clone();
        r.add_assign_scaled(o, &Q::one());
        r
    }
}

impl Sub for AffineRational {
    type Output = AffineRational;
    fn sub(mut self, o: Self) -> Self {
        for (k, v) in o.terms {
            self.add_term(k, -v);
        }
        self
    }
}

impl<'a> Sub<&'a AffineRational> for &'a AffineRational {
    type Output = AffineRational;
    fn sub(self, o: Self) -> AffineRational {
        let mut r = self.clone();
        r.add_assign_scaled(o, &-Q::one());
        r
    }
}

impl Neg for AffineRational {
    type Output = AffineRational;
    fn neg(self) -> Self {
        self.scale(&-Q::one())
    }
}

impl<'a> Mul<&'a AffineRational> for &'a AffineRational {
    type Output = AffineRational;
    fn mul(self, o: Self) -> AffineRational {
        let mut r = AffineRational::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &o.terms {
                let mut fs = fa.clone();
                for &(f, e) in fb {
                    insert_factor(&mut fs, f, e);
                }
                r.add_term(fs, ca * cb);
            }
        }
        r
    }
}

impl Mul for AffineRational {
    type Output = AffineRational;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::q::q;

    fn x(i: usize) -> AffineRational {
        AffineRational::var(i)
    }

    fn inv(f: Form) -> AffineRational {
        AffineRational::form_pow(f, -1)
    }

    #[test]
    fn partial_fraction_identity_is_zero() {
        // 1/(x1 (x2-x1)) = 1/(x1 x2) + 1/(x2 (x2-x1))
        let lhs = &inv(Form::var(1)) * &inv(Form::diff(2, 1));
        let rhs = &(&inv(Form::var(1)) * &inv(Form::var(2))) + &(&inv(Form::var(2)) * &inv(Form::diff(2, 1)));
        assert!(lhs.equals(&rhs));
        assert!(!lhs.is_zero());
    }

    #[test]
    fn polynomial_expansion_cancels() {
        // (x2 - x1)^3 - x2^3 + 3 x2^2 x1 - 3 x2 x1^2 + x1^3 = 0
        let a = AffineRational::form_pow(Form::diff(2, 1), 3);
        let b = AffineRational::form_pow(Form::var(2), 3);
        let c = (&(&x(2) * &x(2)) * &x(1)).scale(&qi(3));
        let d = (&(&x(1) * &x(1)) * &x(2)).scale(&qi(3));
        let e = AffineRational::form_pow(Form::var(1), 3);
        let total = ((a - b) + c - d) + e;
        assert!(total.is_zero());
    }

    #[test]
    fn divided_difference_is_polynomial() {
        let f = (AffineRational::form_pow(Form::var(2), 4) - AffineRational::form_pow(Form::var(1), 4))
            * inv(Form::diff(2, 1));
        let c = f.canonical();
        assert!(c.is_polynomial());
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn residues_and_laurent_coefficients() {
        // f = x2^2 / (x1^2 (x2 - x1)); residue along x2 = x1 is 1.
        let f = AffineRational::term(qi(1), &[(Form::var(2), 2), (Form::var(1), -2), (Form::diff(2, 1), -1)]);
        assert!(f.residue(Form::diff(2, 1)).equals(&AffineRational::one()));
        let r = f.residue(Form::var(1));
        assert!(r.equals(&AffineRational::one()), "{r:?}");
        let g = AffineRational::term(qi(1), &[(Form::var(1), -1), (Form::var(2), -1)]);
        assert!(g.residue(Form::var(1)).equals(&AffineRational::form_pow(Form::var(2), -1)));
        assert_eq!(f.pole_order(Form::var(1)), 2);
    }

    #[test]
    fn substitution_rejects_vanishing_denominators() {
        let f = inv(Form::diff(2, 1));
        assert_eq!(f.substitute(&[Form::var(1), Form::var(1)]).unwrap_err(), Error::ZeroDenominator);
        let g = x(2) - x(1);
        assert!(g.substitute(&[Form::var(1), Form::var(1)]).unwrap().is_zero());
    }

    #[test]
    fn evaluation_matches_canonical_form() {
        let f = (&inv(Form::var(1)) * &inv(Form::diff(3, 2))) + AffineRational::form_pow(Form::diff(3, 1), 2);
        let g = f.normalized();
        let pt = [q(2, 3), q(-5, 7), q(11, 2)];
        assert_eq!(f.eval(&pt), g.eval(&pt));
    }

    #[test]
    fn derivatives_follow_the_product_rule() {
        let f = &x(1) * &inv(Form::diff(2, 1));
        let d1 = f.partial(1);
        let expected = &inv(Form::diff(2, 1)) + &(&x(1) * &AffineRational::form_pow(Form::diff(2, 1), -2));
        assert!(d1.equals(&expected));
        assert!(AffineRational::form_pow(Form::diff(2, 1), 5).nabla(2).is_zero());
    }
}
