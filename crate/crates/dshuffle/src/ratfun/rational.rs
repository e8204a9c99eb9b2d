//! Normalized rational functions with linear-form denominators.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::affine::{AffineRational, Key};
use super::form::Form;
use super::poly::{Monomial, Polynomial};
use super::q::{fmt_q, Q};
use crate::error::{Error, Result};

/// The denominator factor `x_a - x_b` with `b < a`; `b = 0` encodes `x_a`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearForm {
    pub a: usize,
    pub b: usize,
}

impl LinearForm {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if b >= a {
            return Err(Error::Precondition(format!("linear form needs b < a, got ({a},{b})")));
        }
        Ok(LinearForm { a, b })
    }

    pub fn to_form(self) -> Form {
        Form::diff(self.a, self.b)
    }

    /// Recognizes a primitive standard form.
    pub fn from_form(f: &Form) -> Option<Self> {
        f.as_standard().map(|(a, b)| LinearForm { a, b })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "x{}", self.a)
        } else {
            write!(f, "x{}-x{}", self.a, self.b)
        }
    }
}

/// `num / ∏ den` in `d` variables, kept in normal form: no denominator factor
/// divides the numerator and the zero function has an empty denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    pub arity: usize,
    pub num: Polynomial,
    pub den: BTreeMap<LinearForm, u32>,
}

impl RationalFunction {
    pub fn zero(arity: usize) -> Self {
        RationalFunction { arity, num: Polynomial::zero(arity), den: BTreeMap::new() }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunction { arity: p.arity, num: p, den: BTreeMap::new() }
    }

    /// Builds and normalizes `num / ∏ den`.
    pub fn new(num: Polynomial, den: &[LinearForm]) -> Result<Self> {
        for l in den {
            if l.a > num.arity {
                return Err(Error::ArityMismatch { expected: num.arity, found: l.a });
            }
        }
        let mut d = BTreeMap::new();
        for l in den {
            *d.entry(*l).or_insert(0) += 1;
        }
        Ok(RationalFunction { arity: num.arity, num, den: d }.normalize())
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let forms: Vec<LinearForm> = self.den.keys().copied().collect();
        for l in forms {
            while self.den.get(&l).copied().unwrap_or(0) > 0 {
                match self.num.div_linear(l.a, l.b) {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&l).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&l);
                        }
                    }
                    None => break,
                }
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_list(&self) -> Vec<LinearForm> {
        self.den.iter().flat_map(|(l, &m)| std::iter::repeat(*l).take(m as usize)).collect()
    }

    fn check_arity(&self, o: &Self) -> Result<()> {
        if self.arity != o.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: o.arity });
        }
        Ok(())
    }

    pub fn to_affine(&self) -> AffineRational {
        let mut r = AffineRational::zero();
        let den: Vec<(Form, i32)> = self.den.iter().map(|(l, &m)| (l.to_form(), -(m as i32))).collect();
        for (m, c) in &self.num.terms {
            let mut fs = den.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    fs.push((Form::var(i + 1), e as i32));
                }
            }
            r = r + AffineRational::term(c.clone(), &fs);
        }
        r
    }

    /// Converts from the working representation; every denominator must be
    /// (up to sign) of the form `x_a` or `x_a - x_b`.
    pub fn from_affine(f: &AffineRational, arity: usize) -> Result<Self> {
        let top = f.max_var();
        if top > arity {
            return Err(Error::ArityMismatch { expected: arity, found: top });
        }
        let canon = f.canonical_in(arity);
        let mut leaves = Vec::with_capacity(canon.len());
        let mut lcd: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (path, c) in canon.sorted() {
            let mut mono = Monomial::one(arity);
            let mut poles: BTreeMap<LinearForm, u32> = BTreeMap::new();
            for (idx, k) in path.iter().enumerate() {
                let level = arity - idx;
                match k {
                    Key::Pow(j) => mono.0[level - 1] += j,
                    Key::Pole(p, k) => {
                        let l = LinearForm::from_form(p).ok_or_else(|| Error::NonStandardDenominator(p.to_string()))?;
                        *poles.entry(l).or_insert(0) += k;
                    }
                }
            }
            for (l, &k) in &poles {
                let e = lcd.entry(*l).or_insert(0);
                *e = (*e).max(k);
            }
            leaves.push((mono, poles, c.clone()));
        }
        let mut num = Polynomial::zero(arity);
        for (mono, poles, c) in leaves {
            let mut t = Polynomial::zero(arity);
            t.add_term(mono, c);
            for (l, &m) in &lcd {
                let extra = m - poles.get(l).copied().unwrap_or(0);
                if extra > 0 {
                    t = t.mul(&Polynomial::from_form(arity, &l.to_form()).pow(extra));
                }
            }
            num = num.add(&t);
        }
        Ok(RationalFunction { arity, num, den: lcd }.normalize())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_arity(o)?;
        Self::from_affine(&(self.to_affine() + o.to_affine()), self.arity)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_arity(o)?;
        Self::from_affine(&(self.to_affine() - o.to_affine()), self.arity)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_arity(o)?;
        let mut den = self.den.clone();
        for (l, m) in &o.den {
            *den.entry(*l).or_insert(0) += m;
        }
        Ok(RationalFunction { arity: self.arity, num: self.num.mul(&o.num), den }.normalize())
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalFunction { arity: self.arity, num: self.num.scale(c), den: self.den.clone() }.normalize()
    }

    /// Composes with `x_i ↦ images[i - 1]`, landing in `arity` variables.
    ///
    /// Denominators that stop being standard differences raise
    /// [`Error::NonStandardDenominator`]; use [`AffineRational::substitute`]
    /// for the widened setting.
    pub fn substitute_affine(&self, images: &[Form], arity: usize) -> Result<Self> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: images.len() });
        }
        let f = self.to_affine().substitute(images)?;
        Self::from_affine(&f, arity)
    }

    /// Residue along `x_a = x_b`: the simple-pole coefficient with `x_a ↦ x_b`.
    /// Arity is preserved; `x_a` no longer occurs in the result.
    pub fn residue(&self, along: LinearForm) -> Result<Self> {
        let m = self.den.get(&along).copied().unwrap_or(0);
        if m >= 2 {
            return Err(Error::HigherOrderPole { form: along.to_string(), order: m });
        }
        if m == 0 {
            return Ok(Self::zero(self.arity));
        }
        let f = self.to_affine().residue(along.to_form());
        Self::from_affine(&f, self.arity)
    }

    pub fn equals(&self, o: &Self) -> bool {
        self == o
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        Self::from_affine(&self.to_affine().partial(i), self.arity).expect("derivative keeps denominators standard")
    }

    pub fn nabla(&self) -> Self {
        Self::from_affine(&self.to_affine().nabla(self.arity), self.arity).expect("derivative keeps denominators standard")
    }

    /// `deg(num) - |den| + d` for homogeneous functions.
    pub fn weight(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let degs = self.num.degrees();
        if degs.len() != 1 {
            return None;
        }
        let dsz: u32 = self.den.values().sum();
        Some(degs[0] as i64 - dsz as i64 + self.arity as i64)
    }

    pub fn eval(&self, point: &[Q]) -> Option<Q> {
        let mut d = Q::one();
        for (l, &m) in &self.den {
            let v = l.to_form().eval(point);
            if v.is_zero() {
                return None;
            }
            d *= num::pow(v, m as usize);
        }
        Some(self.num.eval(point) / d)
    }
}

/// Prints the numerator terms in descending graded-lex order.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in p.terms.iter().rev() {
        let mut s = fmt_q(c);
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                s.push_str(&format!("*x{}^{}", i + 1, e));
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", format_polynomial(&self.num))?;
        if !self.den.is_empty() {
            let forms: Vec<String> = self.den_list().iter().map(|l| l.to_string()).collect();
            write!(f, "/({})", forms.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::q::{q, qi};

    fn x(d: usize, i: usize) -> Polynomial {
        Polynomial::var(d, i)
    }

    fn lf(a: usize, b: usize) -> LinearForm {
        LinearForm::new(a, b).unwrap()
    }

    fn one(d: usize) -> Polynomial {
        Polynomial::constant(d, Q::one())
    }

    #[test]
    fn additive_inverse_and_common_denominator() {
        let f = RationalFunction::new(one(2), &[lf(1, 0)]).unwrap();
        assert!(f.add(&f.scale(&qi(-1))).unwrap().is_zero());
        let g = RationalFunction::new(one(2), &[lf(2, 0)]).unwrap();
        let s = f.add(&g).unwrap();
        let expected = RationalFunction::new(x(2, 1).add(&x(2, 2)), &[lf(1, 0), lf(2, 0)]).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn cancellation_in_products() {
        let f = RationalFunction::new(one(1), &[lf(1, 0)]).unwrap();
        let g = RationalFunction::polynomial(x(1, 1));
        assert_eq!(f.mul(&g).unwrap(), RationalFunction::polynomial(one(1)));
        let d = x(2, 2).add(&x(2, 1).scale(&qi(-1)));
        let h = RationalFunction::new(one(2), &[lf(2, 1)]).unwrap();
        let sq = RationalFunction::polynomial(d.mul(&d));
        assert_eq!(h.mul(&sq).unwrap(), RationalFunction::polynomial(d));
        assert!(h.scale(&qi(0)).is_zero());
    }

    #[test]
    fn sign_normalization_of_denominators() {
        // 1/(x1(x1-x2)) = -1/(x1(x2-x1))
        let a = RationalFunction::from_affine(
            &AffineRational::term(qi(1), &[(Form::var(1), -1), (Form::diff(1, 2), -1)]),
            2,
        )
        .unwrap();
        let b = RationalFunction::new(Polynomial::constant(2, qi(-1)), &[lf(1, 0), lf(2, 1)]).unwrap();
        assert!(a.equals(&b));
        assert!(!RationalFunction::polynomial(x(2, 1)).equals(&RationalFunction::polynomial(x(2, 2))));
    }

    #[test]
    fn sharp_substitution_and_shifts() {
        let f = RationalFunction::polynomial(x(2, 1).mul(&x(2, 2)));
        let sharp = f.substitute_affine(&[Form::var(1), Form::range_sum(1, 2)], 2).unwrap();
        assert_eq!(sharp, RationalFunction::polynomial(x(2, 1).mul(&x(2, 1)).add(&x(2, 1).mul(&x(2, 2)))));
        let g = RationalFunction::polynomial(x(1, 1).mul(&x(1, 1)));
        let shifted = g.substitute_affine(&[Form::diff(2, 1)], 2).unwrap();
        let d = x(2, 2).add(&x(2, 1).scale(&qi(-1)));
        assert_eq!(shifted, RationalFunction::polynomial(d.mul(&d)));
        let inv = RationalFunction::new(one(2), &[lf(2, 0)]).unwrap();
        assert!(matches!(
            inv.substitute_affine(&[Form::var(1), Form::range_sum(1, 2)], 2),
            Err(Error::NonStandardDenominator(_))
        ));
    }

    #[test]
    fn residues_of_simple_poles() {
        let f = RationalFunction::new(one(1), &[lf(1, 0)]).unwrap();
        assert_eq!(f.residue(lf(1, 0)).unwrap(), RationalFunction::polynomial(one(1)));
        let g = RationalFunction::new(one(2), &[lf(1, 0), lf(2, 0)]).unwrap();
        assert_eq!(g.residue(lf(1, 0)).unwrap(), RationalFunction::new(one(2), &[lf(2, 0)]).unwrap());
        let h = RationalFunction::new(one(1), &[lf(1, 0), lf(1, 0)]).unwrap();
        assert!(matches!(h.residue(lf(1, 0)), Err(Error::HigherOrderPole { order: 2, .. })));
    }

    #[test]
    fn derivatives_and_weight() {
        let f = RationalFunction::polynomial(x(1, 1).mul(&x(1, 1)));
        assert_eq!(f.partial_derivative(1), RationalFunction::polynomial(x(1, 1).scale(&qi(2))));
        let p6 = RationalFunction::polynomial(x(1, 1).pow(6));
        assert_eq!(p6.nabla(), RationalFunction::polynomial(x(1, 1).pow(5).scale(&qi(6))));
        assert_eq!(p6.weight(), Some(7));
        let e = RationalFunction::new(one(1), &[lf(1, 0), lf(1, 0)]).unwrap();
        assert_eq!(e.weight(), Some(-1));
    }

    #[test]
    fn display_uses_the_canonical_grammar() {
        let f = RationalFunction::new(x(3, 1).scale(&q(1, 2)).add(&x(3, 3)), &[lf(3, 1), lf(3, 0)]).unwrap();
        assert_eq!(f.to_string(), "(1/2*x1^1 + 1*x3^1)/(x3 x3-x1)");
    }
}
