//! Shuffle and stuffle products on words in indexed letters, and the Lie
//! projector `λ`.
//!
//! Letters are variable indices. Stuffle contractions are kept symbolic as
//! merged pairs; turning them into divided differences is the job of
//! [`crate::dsh_check`].

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ratfun::q::{fmt_q, qi, Q};

/// A word `x_{i_1} … x_{i_k}`.
pub type Word = Vec<usize>;

/// A finite linear combination of words.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct WordSum {
    pub terms: BTreeMap<Word, Q>,
}

impl WordSum {
    pub fn single(w: Word) -> Self {
        let mut s = WordSum::default();
        s.add(w, Q::one());
        s
    }

    pub fn add(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_sum(&mut self, o: &WordSum, c: &Q) {
        for (w, v) in &o.terms {
            self.add(w.clone(), v * c);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Left-concatenates a letter onto every word.
    fn prepend(&self, letter: usize) -> WordSum {
        let mut r = WordSum::default();
        for (w, c) in &self.terms {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(letter);
            v.extend_from_slice(w);
            r.add(v, c.clone());
        }
        r
    }

    /// Extends [`shuffle`] bilinearly.
    pub fn shuffle_with(&self, o: &WordSum) -> Result<WordSum> {
        let mut r = WordSum::default();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                r.add_sum(&shuffle(u, v)?, &(a * b));
            }
        }
        Ok(r)
    }
}

fn fmt_word(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(".")
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if c.is_one() { fmt_word(w) } else { format!("{}*{}", fmt_q(c), fmt_word(w)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn disjoint(u: &[usize], v: &[usize]) -> Result<()> {
    if u.iter().any(|a| v.contains(a)) {
        return Err(Error::OverlappingIndices);
    }
    Ok(())
}

fn shuffle_rec(u: &[usize], v: &[usize]) -> WordSum {
    if u.is_empty() {
        return WordSum::single(v.to_vec());
    }
    if v.is_empty() {
        return WordSum::single(u.to_vec());
    }
    let mut r = shuffle_rec(&u[1..], v).prepend(u[0]);
    r.add_sum(&shuffle_rec(u, &v[1..]).prepend(v[0]), &Q::one());
    r
}

/// All interleavings of `u` and `v`.
pub fn shuffle(u: &[usize], v: &[usize]) -> Result<WordSum> {
    disjoint(u, v)?;
    Ok(shuffle_rec(u, v))
}

/// A stuffle letter: a single index or a contraction of two indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    Single(usize),
    Merged(usize, usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Single(i) => write!(f, "x{i}"),
            Letter::Merged(i, j) => write!(f, "{{{i},{j}}}"),
        }
    }
}

/// One term of a stuffle product.
pub type StuffleTerm = Vec<Letter>;

/// The stuffle product of `u` and `v`; merged pairs keep the index from `u` first.
pub fn stuffle(u: &[usize], v: &[usize]) -> Result<BTreeMap<StuffleTerm, Q>> {
    disjoint(u, v)?;
    let mut out = BTreeMap::new();
    let mut prefix = Vec::new();
    stuffle_rec(u, v, &mut prefix, &mut out);
    Ok(out)
}

fn stuffle_rec(u: &[usize], v: &[usize], prefix: &mut Vec<Letter>, out: &mut BTreeMap<StuffleTerm, Q>) {
    if u.is_empty() || v.is_empty() {
        let mut t = prefix.clone();
        t.extend(u.iter().chain(v).map(|&i| Letter::Single(i)));
        *out.entry(t).or_insert_with(Q::zero) += qi(1);
        return;
    }
    prefix.push(Letter::Single(u[0]));
    stuffle_rec(&u[1..], v, prefix, out);
    prefix.pop();
    prefix.push(Letter::Single(v[0]));
    stuffle_rec(u, &v[1..], prefix, out);
    prefix.pop();
    prefix.push(Letter::Merged(u[0], v[0]));
    stuffle_rec(&u[1..], &v[1..], prefix, out);
    prefix.pop();
}

/// Formats a stuffle expansion as `x1.x2 + x2.x1 + {1,2}`.
pub fn format_stuffle(terms: &BTreeMap<StuffleTerm, Q>) -> String {
    terms
        .iter()
        .map(|(t, c)| {
            let w = t.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(".");
            if c.is_one() {
                w
            } else {
                format!("{}*{}", fmt_q(c), w)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `λ(x_1) = x_1`, `λ(x_1 … x_n) = x_1 λ(x_2 … x_n) − x_n λ(x_1 … x_{n-1})`.
pub fn lie_projector(w: &[usize]) -> Result<WordSum> {
    match w.len() {
        0 => Err(Error::EmptyWord),
        1 => Ok(WordSum::single(w.to_vec())),
        n => {
            let head = lie_projector(&w[1..])?.prepend(w[0]);
            let tail = lie_projector(&w[..n - 1])?.prepend(w[n - 1]);
            let mut r = head;
            r.add_sum(&tail, &-Q::one());
            Ok(r)
        }
    }
}

/// Extends [`lie_projector`] linearly.
pub fn lie_projector_sum(s: &WordSum) -> Result<WordSum> {
    let mut r = WordSum::default();
    for (w, c) in &s.terms {
        r.add_sum(&lie_projector(w)?, c);
    }
    Ok(r)
}

/// Number of interleavings of words of lengths `n` and `r`.
pub fn count_words(n: usize, r: usize) -> u64 {
    crate::ratfun::q::binom_u((n + r) as u64, n as u64)
}

/// Lazily enumerates the interleavings of `u` and `v` as index masks.
pub fn shuffles_iter<'a>(u: &'a [usize], v: &'a [usize]) -> impl Iterator<Item = Word> + 'a {
    let n = u.len() + v.len();
    let k = u.len();
    (0u64..(1u64 << n)).filter(move |m| m.count_ones() as usize == k).map(move |m| {
        let (mut a, mut b) = (0, 0);
        (0..n)
            .map(|pos| {
                if m >> pos & 1 == 1 {
                    a += 1;
                    u[a - 1]
                } else {
                    b += 1;
                    v[b - 1]
                }
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&[1], &[2]).unwrap().to_string(), "x1.x2 + x2.x1");
        assert_eq!(shuffle(&[1], &[2, 3]).unwrap().to_string(), "x1.x2.x3 + x2.x1.x3 + x2.x3.x1");
        assert_eq!(shuffle(&[], &[2, 3]).unwrap().to_string(), "x2.x3");
        assert_eq!(shuffle(&[1], &[1]).unwrap_err(), Error::OverlappingIndices);
    }

    #[test]
    fn stuffle_examples() {
        let s = stuffle(&[1], &[2]).unwrap();
        assert_eq!(format_stuffle(&s), "x1.x2 + x2.x1 + {1,2}");
        let s = stuffle(&[1], &[2, 3]).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.contains_key(&vec![Letter::Merged(1, 2), Letter::Single(3)]));
        assert!(s.contains_key(&vec![Letter::Single(2), Letter::Merged(1, 3)]));
        assert_eq!(stuffle(&[], &[4]).unwrap().len(), 1);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lie_projector(&[1, 2]).unwrap().to_string(), "x1.x2 + -1*x2.x1");
        let l3 = lie_projector(&[1, 2, 3]).unwrap();
        let mut expected = WordSum::default();
        expected.add(vec![1, 2, 3], qi(1));
        expected.add(vec![1, 3, 2], qi(-1));
        expected.add(vec![3, 1, 2], qi(-1));
        expected.add(vec![3, 2, 1], qi(1));
        assert_eq!(l3, expected);
        assert_eq!(lie_projector(&[1]).unwrap().to_string(), "x1");
        assert_eq!(lie_projector(&[]).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn counts() {
        assert_eq!(count_words(1, 1), 2);
        assert_eq!(count_words(1, 2), 3);
        assert_eq!(count_words(2, 2), 6);
        let lazy: Vec<Word> = shuffles_iter(&[1, 2], &[3, 4]).collect();
        assert_eq!(lazy.len(), 6);
        let eager = shuffle(&[1, 2], &[3, 4]).unwrap();
        for w in lazy {
            assert!(eager.terms.contains_key(&w));
        }
    }
}
