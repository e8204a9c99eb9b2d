//! Vines, vineyards and their rational realizations.
//!
//! A vine is a word `g_{i_1} … g_{i_k}` in the grape generators. Its tree has
//! vertices `0..=n`: the first bunch hangs `i_1` grapes from the stalk `0`, and
//! every later bunch hangs from the highest label used so far.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::ratfun::q::{fmt_q, qi, Q};
use crate::ratfun::{AffineRational, Form, Polynomial};

/// A composition `(i_1, …, i_k)` standing for `g_{i_1} … g_{i_k}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vine {
    pub composition: Vec<u32>,
}

impl Vine {
    pub fn new(composition: Vec<u32>) -> Self {
        assert!(!composition.is_empty() && composition.iter().all(|&i| i > 0), "vines are nonempty compositions");
        Vine { composition }
    }

    pub fn grapes(&self) -> usize {
        self.composition.iter().map(|&i| i as usize).sum()
    }

    pub fn height(&self) -> usize {
        self.composition.len()
    }

    /// Edges `(stalk, grape)` of the tree.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.grapes());
        let mut top = 0;
        for &i in &self.composition {
            let stalk = top;
            for g in 1..=i as usize {
                edges.push((stalk, top + g));
            }
            top += i as usize;
        }
        edges
    }

    /// Factors of `x_T = ∏ (x_j − x_i)` over the edges.
    pub fn factors(&self) -> Vec<(Form, i32)> {
        self.edges().into_iter().map(|(i, j)| (Form::diff(j, i), 1)).collect()
    }

    /// `x_T` as a polynomial in `n` variables.
    pub fn poly(&self) -> Polynomial {
        let n = self.grapes();
        self.edges().into_iter().fold(Polynomial::constant(n, Q::one()), |acc, (i, j)| {
            acc.mul(&Polynomial::from_form(n, &Form::diff(j, i)))
        })
    }

    /// `p_v = 1/x_T`.
    pub fn rat(&self) -> AffineRational {
        let inv: Vec<(Form, i32)> = self.factors().into_iter().map(|(f, _)| (f, -1)).collect();
        AffineRational::term(Q::one(), &inv)
    }
}

impl fmt::Display for Vine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.composition.iter().map(|i| format!("g{i}")).collect();
        write!(f, "{}", s.join(""))
    }
}

/// All vines with `n` grapes, in lexicographic order of their compositions.
pub fn enumerate_vines(n: usize) -> Vec<Vine> {
    fn rec(left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vine>) {
        if left == 0 {
            out.push(Vine::new(cur.clone()));
            return;
        }
        for i in 1..=left {
            cur.push(i);
            rec(left - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n as u32, &mut Vec::new(), &mut out);
    }
    out
}

/// Linear combinations of vines, multiplied by concatenation.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Vineyard {
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl Vineyard {
    pub fn one() -> Self {
        let mut v = Vineyard::default();
        v.add(Vec::new(), Q::one());
        v
    }

    pub fn grape(i: u32) -> Self {
        let mut v = Vineyard::default();
        v.add(vec![i], Q::one());
        v
    }

    pub fn add(&mut self, w: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&self, o: &Vineyard, c: &Q) -> Vineyard {
        let mut r = self.clone();
        for (w, v) in &o.terms {
            r.add(w.clone(), v * c);
        }
        r
    }

    pub fn mul(&self, o: &Vineyard) -> Vineyard {
        let mut r = Vineyard::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                r.add(w, ca * cb);
            }
        }
        r
    }

    /// Sum of `c_v p_v` over the vines with exactly `d` grapes.
    pub fn realize(&self, d: usize) -> AffineRational {
        let mut acc = AffineRational::zero();
        for (w, c) in &self.terms {
            if !w.is_empty() && w.iter().map(|&i| i as usize).sum::<usize>() == d {
                acc = acc + Vine::new(w.clone()).rat().scale(c);
            }
        }
        acc
    }
}

impl fmt::Display for Vineyard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() { "1".to_string() } else { Vine { composition: w.clone() }.to_string() };
                format!("{}*{}", fmt_q(c), word)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Vineyard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `𝔰_n` from `Σ_{i=0}^{n-1} g_i 𝔰_{n-i} = n g_n` with `g_0 = 1`.
pub fn s_vineyard(n: usize) -> Vineyard {
    let mut s: Vec<Vineyard> = vec![Vineyard::default()];
    for m in 1..=n {
        let mut v = Vineyard::default().add_scaled(&Vineyard::grape(m as u32), &qi(m as i64));
        for i in 1..m {
            v = v.add_scaled(&Vineyard::grape(i as u32).mul(&s[m - i]), &-Q::one());
        }
        s.push(v);
    }
    s.swap_remove(n)
}
