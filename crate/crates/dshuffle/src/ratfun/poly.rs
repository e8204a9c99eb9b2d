//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num::{One, Zero};

use super::form::Form;
use super::q::{qi, Q};

/// Exponent vector `(e_1, …, e_d)`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// `x_1`, then `x_2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut m = Self::one(arity);
        m.0[i - 1] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// `Σ c_m m` over monomials of a fixed arity, without zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    pub arity: usize,
    pub terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(arity: usize) -> Self {
        Polynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(arity, i), Q::one());
        p
    }

    /// The polynomial given by a linear form.
    pub fn from_form(arity: usize, f: &Form) -> Self {
        let mut p = Self::zero(arity);
        for i in 1..=arity {
            let c = f.coeff(i);
            if c != 0 {
                p.add_term(Monomial::var(arity, i), qi(c as i64));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Polynomial { arity: self.arity, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut r = Self::zero(self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Self::constant(self.arity, Q::one());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Total degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Monomial::degree).collect();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// Substitutes `x_i ↦ images[i - 1]` into a polynomial of the given target arity.
    pub fn substitute(&self, images: &[Form], arity: usize) -> Polynomial {
        let imgs: Vec<Polynomial> = images.iter().map(|f| Polynomial::from_form(arity, f)).collect();
        let mut r = Self::zero(arity);
        for (m, c) in &self.terms {
            let mut t = Self::constant(arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&imgs[i].pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    pub fn partial(&self, i: usize) -> Polynomial {
        let mut r = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[i - 1];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i - 1] -= 1;
                r.add_term(m2, c * qi(e as i64));
            }
        }
        r
    }

    /// Exact division by `x_a - x_b` (`b = 0` meaning `x_a`), if it divides.
    pub fn div_linear(&self, a: usize, b: usize) -> Option<Polynomial> {
        let mut rem = self.clone();
        let mut quo = Self::zero(self.arity);
        while let Some((m, c)) = rem.terms.iter().rev().find(|(m, _)| m.0[a - 1] > 0).map(|(m, c)| (m.clone(), c.clone())) {
            let mut qm = m.clone();
            qm.0[a - 1] -= 1;
            quo.add_term(qm.clone(), c.clone());
            rem.add_term(m, -c.clone());
            if b > 0 {
                let mut sm = qm;
                sm.0[b - 1] += 1;
                rem.add_term(sm, c);
            }
        }
        if rem.is_zero() {
            Some(quo)
        } else {
            None
        }
    }

    pub fn to_affine(&self) -> super::AffineRational {
        let mut r = super::AffineRational::zero();
        for (m, c) in &self.terms {
            let fs: Vec<(Form, i32)> =
                m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (Form::var(i + 1), e as i32)).collect();
            r = r + super::AffineRational::term(c.clone(), &fs);
        }
        r
    }

    /// All monomials of total degree `degree` in `arity` variables, in increasing order.
    pub fn monomials(arity: usize, degree: u32) -> Vec<Monomial> {
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut out = Vec::new();
        if arity == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(0, degree, &mut vec![0; arity], &mut out);
        out.sort();
        out
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                v *= num::pow(point[i].clone(), e as usize);
            }
            acc += v;
        }
        acc
    }
}
