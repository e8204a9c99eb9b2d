//! Bracket decompositions of zeta elements.
//!
//! A zeta element of weight `2n + 1` is written as `ψ_{2n+1}` plus a linear
//! combination of right-nested brackets `{a_1, {a_2, …, {a_{k−1}, a_k}…}}` of
//! generators of odd weight (`ψ_{−1}, ψ_3, ψ_5, …`, or their twisted
//! counterparts `χ`). The coefficients are fixed by requiring the running sum
//! to be free of poles in every depth up to a bound.
//!
//! Unknowns are ordered by leading depth, then `{−1, {−1, N}}`-type words,
//! then words ending in `ψ_{−1}` by decreasing first entry, then the rest.
//! Free variables of the reduced system are set to zero, so the ordering
//! decides which of several Jacobi-equivalent expressions is reported.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num::{BigInt, Integer, One, Signed, Zero};
use serde_json::{json, Value};

use crate::dsh_check::{EquationReport, Family, Indices};
use crate::error::{Error, Result};
use crate::gens::GeneratorTag;
use crate::linalg::{solve, Echelon, Row};
use crate::ratfun::q::fmt_q;
use crate::ratfun::{AffineRational, Form, Key, Q};
use crate::series::{ihara_bracket_series, DepthSeries};

/// A generator at a leaf of a bracket word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    Psi(i64),
    Chi(i64),
    /// `x_1^e` in depth one.
    X(u32),
    Q4,
}

impl Leaf {
    pub fn weight(&self) -> i64 {
        match *self {
            Leaf::Psi(k) | Leaf::Chi(k) => k,
            Leaf::X(e) => e as i64 + 1,
            Leaf::Q4 => 0,
        }
    }

    pub fn leading_depth(&self) -> usize {
        match self {
            Leaf::Q4 => 4,
            _ => 1,
        }
    }

    fn is_minus_one(&self) -> bool {
        matches!(self, Leaf::Psi(-1) | Leaf::Chi(-1))
    }

    fn series(&self, max_depth: usize) -> Result<DepthSeries> {
        match *self {
            Leaf::Psi(k) => GeneratorTag::Psi(k).series(max_depth),
            Leaf::Chi(k) => GeneratorTag::Chi(k).series(max_depth),
            Leaf::Q4 => GeneratorTag::Q4.series(max_depth),
            Leaf::X(e) => {
                let mut s =
                    DepthSeries::single(1, AffineRational::form_pow(Form::var(1), e as i32), Some(e as i64 + 1), max_depth);
                s.complete = true;
                Ok(s)
            }
        }
    }

    fn to_json(self) -> Value {
        match self {
            Leaf::Psi(k) | Leaf::Chi(k) => json!(k),
            Leaf::X(e) => json!(format!("x{e}")),
            Leaf::Q4 => json!("Q4"),
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Psi(k) => write!(f, "psi{k}"),
            Leaf::Chi(k) => write!(f, "chi{k}"),
            Leaf::X(e) => write!(f, "x1^{e}"),
            Leaf::Q4 => write!(f, "Q4"),
        }
    }
}

/// The right-nested bracket `{a_1, {a_2, …, {a_{k−1}, a_k}…}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketWord(pub Vec<Leaf>);

impl BracketWord {
    pub fn psi(ks: &[i64]) -> Self {
        BracketWord(ks.iter().map(|&k| Leaf::Psi(k)).collect())
    }

    pub fn chi(ks: &[i64]) -> Self {
        BracketWord(ks.iter().map(|&k| Leaf::Chi(k)).collect())
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(Leaf::weight).sum()
    }

    pub fn leading_depth(&self) -> usize {
        self.0.iter().map(Leaf::leading_depth).sum()
    }

    pub fn contains_minus_one(&self) -> bool {
        self.0.iter().any(Leaf::is_minus_one)
    }

    fn class(&self) -> u8 {
        let w = &self.0;
        let n = w.len();
        if n == 1 {
            0
        } else if w[..n - 1].iter().all(Leaf::is_minus_one) {
            1
        } else if w[n - 1].is_minus_one() {
            2
        } else {
            3
        }
    }

    fn sort_key(&self) -> (usize, u8, std::cmp::Reverse<Vec<Leaf>>) {
        (self.leading_depth(), self.class(), std::cmp::Reverse(self.0.clone()))
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        for (i, l) in self.0.iter().enumerate() {
            if i + 1 < n {
                write!(f, "{{{l},")?;
            } else {
                write!(f, "{l}")?;
            }
        }
        write!(f, "{}", "}".repeat(n.saturating_sub(1)))
    }
}

/// `Σ c_w w` over bracket words of a common weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketExpression {
    pub weight: i64,
    pub terms: Vec<(BracketWord, Q)>,
}

impl BracketExpression {
    pub fn coefficient(&self, w: &BracketWord) -> Q {
        self.terms.iter().find(|(v, _)| v == w).map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": w.0.iter().map(|l| l.to_json()).collect::<Vec<_>>(), "coeff": fmt_q(c)}))
            .collect();
        json!({"terms": terms, "weight": self.weight})
    }
}

impl fmt::Display for BracketExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !a.is_one() {
                write!(f, "{}*", fmt_q(&a))?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Generator family for the bracket search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Psi,
    Chi,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi" => Ok(Basis::Psi),
            "chi" => Ok(Basis::Chi),
            _ => Err(Error::Parse(format!("unknown basis `{s}`"))),
        }
    }
}

fn leaf(basis: Basis, k: i64) -> Leaf {
    match basis {
        Basis::Psi => Leaf::Psi(k),
        Basis::Chi => Leaf::Chi(k),
    }
}

/// Whether the innermost pair is in the chosen orientation: `{−1, N}` after a
/// leading `−1`, `{N, −1}` otherwise, and `{a, b}` with `a < b` without `−1`.
fn canonical_inner(w: &[i64]) -> bool {
    let n = w.len();
    let (b, c) = (w[n - 2], w[n - 1]);
    if b == c {
        return false;
    }
    let after_minus_one = n >= 3 && w[n - 3] == -1;
    match (b == -1, c == -1) {
        (true, _) => after_minus_one,
        (_, true) => !after_minus_one,
        _ => b < c,
    }
}

fn compositions(total: i64, parts: usize, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let max = total + parts as i64 - 1;
    let mut k = -1;
    while k <= max {
        cur.push(k);
        compositions(total - k, parts - 1, out, cur);
        cur.pop();
        k = if k == -1 { 3 } else { k + 2 };
    }
}

/// Right-nested words of the given odd weight with leading depth at most
/// `depth_bound`, the single generator of that weight first. The χ basis
/// also contains `{x_1^{w−1}, Q_4}` once the bound reaches 5.
pub fn bracket_basis(weight: i64, depth_bound: usize, basis: Basis, require_minus_one: bool) -> Result<Vec<BracketWord>> {
    let mut out = Vec::new();
    if weight == -1 || (weight >= 3 && weight % 2 == 1) {
        out.push(BracketWord(vec![leaf(basis, weight)]));
    }
    for len in (3..=depth_bound).step_by(2) {
        let mut comps = Vec::new();
        compositions(weight, len, &mut comps, &mut Vec::new());
        for w in comps {
            if !canonical_inner(&w) || (require_minus_one && !w.contains(&-1)) {
                continue;
            }
            out.push(BracketWord(w.iter().map(|&k| leaf(basis, k)).collect()));
        }
    }
    if basis == Basis::Chi && depth_bound >= 5 && weight >= 1 && weight % 2 == 1 {
        out.push(BracketWord(vec![Leaf::X(weight as u32 - 1), Leaf::Q4]));
    }
    if out.is_empty() {
        return Err(Error::EmptyBasis);
    }
    out.sort_by_key(BracketWord::sort_key);
    Ok(out)
}

/// Memoizing evaluator of bracket words as truncated series.
pub struct Evaluator {
    max_depth: usize,
    cache: Mutex<HashMap<Vec<Leaf>, DepthSeries>>,
}

impl Evaluator {
    pub fn new(max_depth: usize) -> Self {
        Evaluator { max_depth, cache: Mutex::new(HashMap::new()) }
    }

    pub fn word(&self, w: &[Leaf]) -> Result<DepthSeries> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(w) {
            return Ok(s.clone());
        }
        let s = match w {
            [] => return Err(Error::EmptyWord),
            [l] => l.series(self.max_depth)?,
            [l, rest @ ..] => {
                let inner = self.word(rest)?;
                let mut s = ihara_bracket_series(&l.series(self.max_depth)?, &inner)?;
                s.max_depth = s.max_depth.min(self.max_depth);
                s.normalized()
            }
        };
        self.cache.lock().expect("cache lock").insert(w.to_vec(), s.clone());
        Ok(s)
    }

    pub fn expression(&self, e: &BracketExpression) -> Result<DepthSeries> {
        let parts = crate::par::map(&e.terms, |(w, _)| self.word(&w.0));
        let mut acc = DepthSeries::new(self.max_depth, Some(e.weight));
        acc.complete = true;
        for ((_, c), s) in e.terms.iter().zip(parts) {
            acc = acc.add_scaled(&s?, c);
        }
        acc.max_depth = self.max_depth;
        Ok(acc.normalized())
    }
}

/// Evaluates an expression up to `max_depth`.
pub fn evaluate(expr: &BracketExpression, max_depth: usize) -> Result<DepthSeries> {
    Evaluator::new(max_depth).expression(expr)
}

/// The pole condition imposed on the running sum in each depth `d ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `Res_{x_d=0}` of the depth-`d` component vanishes.
    ResidueAtLast,
    /// The depth-`d` component has no poles at all.
    Polynomial,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub depth_bound: usize,
    pub basis: Basis,
    pub require_minus_one: bool,
    pub condition: Condition,
    /// Fail with [`Error::NonUnique`] when the element itself is not determined.
    pub strict: bool,
}

impl SolveOptions {
    pub fn new(depth_bound: usize, basis: Basis) -> Self {
        let condition = match basis {
            Basis::Psi => Condition::ResidueAtLast,
            Basis::Chi => Condition::Polynomial,
        };
        SolveOptions { depth_bound, basis, require_minus_one: false, condition, strict: false }
    }
}

/// A solved decomposition with its evaluation.
#[derive(Clone, Debug)]
pub struct SigmaSolution {
    pub expr: BracketExpression,
    /// Dimension of the solution space of the coefficient system.
    pub kernel_dim: usize,
    /// Dimension of the space of distinct elements it describes (through the bound).
    pub ambiguity: usize,
    pub series: DepthSeries,
}

fn condition_rows(s: &DepthSeries, depth_bound: usize, cond: Condition) -> Vec<(usize, Vec<Key>, Q)> {
    let mut out = Vec::new();
    for d in 2..=depth_bound {
        let f = s.component(d);
        if f.is_empty() {
            continue;
        }
        let canon = match cond {
            Condition::ResidueAtLast => f.residue(Form::var(d)).canonical_in(d),
            Condition::Polynomial => {
                let mut c = f.canonical_in(d);
                c.entries.retain(|p, _| p.iter().any(|k| matches!(k, Key::Pole(..))));
                c
            }
        };
        for (p, c) in canon.entries {
            out.push((d, p, c));
        }
    }
    out
}

fn component_rows(s: &DepthSeries, depth_bound: usize) -> Vec<(usize, Vec<Key>, Q)> {
    (1..=depth_bound)
        .flat_map(|d| s.component(d).canonical_in(d).entries.into_iter().map(move |(p, c)| (d, p, c)))
        .collect()
}

fn assemble(columns: &[Vec<(usize, Vec<Key>, Q)>]) -> (Vec<Row>, HashMap<(usize, Vec<Key>), usize>) {
    let mut keys: HashMap<(usize, Vec<Key>), usize> = HashMap::new();
    let mut rows: Vec<Row> = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        for (d, p, c) in col {
            let n = keys.len();
            let r = *keys.entry((*d, p.clone())).or_insert(n);
            if r == rows.len() {
                rows.push(Row::new());
            }
            rows[r].insert(j, c.clone());
        }
    }
    (rows, keys)
}

/// Solves for `σ_w = ψ_w + Σ c_j b_j` with the pole condition in depths `2..=depth_bound`.
pub fn solve_sigma(weight: i64, opts: &SolveOptions) -> Result<SigmaSolution> {
    if weight < 3 || weight % 2 == 0 {
        return Err(Error::Precondition(format!("weight {weight} is not an odd integer ≥ 3")));
    }
    let n = ((weight - 1) / 2) as usize;
    if opts.depth_bound == 0 || opts.depth_bound > 2 * n {
        return Err(Error::Precondition(format!("depth bound {} outside 1..={}", opts.depth_bound, 2 * n)));
    }
    let words = bracket_basis(weight, opts.depth_bound, opts.basis, opts.require_minus_one)?;
    let ev = Evaluator::new(opts.depth_bound);
    let series: Vec<DepthSeries> =
        crate::par::map(&words, |w| ev.word(&w.0)).into_iter().collect::<Result<_>>()?;
    let unknowns = &series[1..];
    let cols: Vec<Vec<(usize, Vec<Key>, Q)>> = crate::par::map(&series, |s| condition_rows(s, opts.depth_bound, opts.condition));
    let (rows, keys) = assemble(&cols);
    let mut rhs: Vec<Q> = vec![Q::zero(); rows.len()];
    for (d, p, c) in &cols[0] {
        rhs[keys[&(*d, p.clone())]] = -c.clone();
    }
    let eqs = rows.into_iter().zip(rhs).map(|(mut r, b)| {
        r.remove(&0);
        let shifted: Row = r.into_iter().map(|(j, c)| (j - 1, c)).collect();
        (shifted, b)
    });
    let (x, kernel) = solve(eqs, unknowns.len())?;

    let kernel_series: Vec<Vec<(usize, Vec<Key>, Q)>> = kernel
        .iter()
        .map(|v| {
            let mut acc = DepthSeries::new(opts.depth_bound, Some(weight));
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add_scaled(&unknowns[j], c);
                }
            }
            component_rows(&acc, opts.depth_bound)
        })
        .collect();
    let (krows, _) = assemble(&kernel_series);
    let mut ech = Echelon::new(kernel.len());
    for r in krows {
        ech.push(r);
    }
    let ambiguity = ech.rank();
    if opts.strict && ambiguity > 0 {
        return Err(Error::NonUnique(ambiguity));
    }

    let mut terms = vec![(words[0].clone(), Q::one())];
    let mut total = series[0].clone();
    for (j, c) in x.iter().enumerate() {
        if !c.is_zero() {
            terms.push((words[j + 1].clone(), c.clone()));
            total = total.add_scaled(&unknowns[j], c);
        }
    }
    total.max_depth = opts.depth_bound;
    Ok(SigmaSolution {
        expr: BracketExpression { weight, terms },
        kernel_dim: kernel.len(),
        ambiguity,
        series: total.normalized(),
    })
}

/// Coefficient of `x_1^{n_1−1} ⋯ x_r^{n_r−1}` in the polynomial component `ξ^{(r)}`.
pub fn coefficient_of_word(xi: &DepthSeries, word: &[u32]) -> Result<Q> {
    let r = word.len();
    if r == 0 {
        return Err(Error::EmptyWord);
    }
    if r > xi.max_depth {
        return Err(Error::WordTooLong(xi.max_depth));
    }
    if word.contains(&0) {
        return Err(Error::Precondition("word entries must be positive".into()));
    }
    let canon = xi.component(r).canonical_in(r);
    if !canon.is_polynomial() {
        return Err(Error::NonPolynomial);
    }
    let target: Vec<u32> = word.iter().map(|n| n - 1).collect();
    Ok(canon
        .entries
        .iter()
        .find(|(p, _)| canon.monomial_of(p).as_deref() == Some(&target[..]))
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Q::zero))
}

/// Whether `f ≡ 0 mod p` after multiplying by the product of its denominator forms.
pub fn congruence_check(f: &AffineRational, p: u64) -> Result<bool> {
    let mut denom: HashMap<Form, i32> = HashMap::new();
    for (fs, _) in f.terms() {
        for &(form, e) in fs.iter() {
            if e < 0 {
                let m = denom.entry(form).or_insert(0);
                *m = (*m).max(-e);
            }
        }
    }
    let factors: Vec<(Form, i32)> = denom.into_iter().collect();
    let cleared = f * &AffineRational::term(Q::one(), &factors);
    let nvars = cleared.max_var();
    let canon = cleared.canonical_in(nvars);
    if !canon.is_polynomial() {
        return Err(Error::NonPolynomial);
    }
    let pb = BigInt::from(p);
    for c in canon.entries.values() {
        if c.denom().is_multiple_of(&pb) {
            return Err(Error::DenominatorDivisible(p));
        }
        if !c.numer().is_multiple_of(&pb) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn x_pow(e: i32) -> AffineRational {
    AffineRational::form_pow(Form::var(1), e)
}

/// `Σ c {x_1^{a}, x_1^{b}}` in depth two.
pub fn depth_two_brackets(terms: &[(i64, i32, i32)]) -> AffineRational {
    terms.iter().fold(AffineRational::zero(), |acc, &(c, a, b)| {
        acc + crate::series::ihara_bracket(&x_pow(a), 1, &x_pow(b), 1).scale(&Q::from_integer(c.into()))
    })
}

/// The four depth-two congruences, as `(prime, element)`.
pub fn displayed_congruences() -> Vec<(u64, AffineRational)> {
    vec![
        (2, depth_two_brackets(&[(1, -2, 4)])),
        (3, depth_two_brackets(&[(1, -2, 12), (2, 2, 8), (1, 4, 6)])),
        (5, depth_two_brackets(&[(1, -2, 10), (2, 2, 6)])),
        (7, depth_two_brackets(&[(1, -2, 14), (4, 2, 10), (5, 4, 8)])),
    ]
}

/// Compares two expressions in depths `1..=depth_bound`; the residual is the
/// difference in the lowest depth where they disagree.
pub fn relation_check(lhs: &BracketExpression, rhs: &BracketExpression, depth_bound: usize) -> Result<EquationReport> {
    let ev = Evaluator::new(depth_bound);
    let diff = ev.expression(lhs)?.sub(&ev.expression(rhs)?);
    for d in 1..=depth_bound {
        let c = diff.component(d);
        if !c.is_zero() {
            return Ok(EquationReport::new(Family::Relation, Indices::Depth(d), c));
        }
    }
    Ok(EquationReport::new(Family::Relation, Indices::Depth(depth_bound), AffineRational::zero()))
}

/// `{ψ_3,{ψ_9,ψ_{−1}}} − {ψ_9,{ψ_3,ψ_{−1}}}` and `3({ψ_7,{ψ_5,ψ_{−1}}} − {ψ_5,{ψ_7,ψ_{−1}}})`.
pub fn weight_eleven_relation() -> (BracketExpression, BracketExpression) {
    let e = |terms: Vec<(&[i64], i64)>| BracketExpression {
        weight: 11,
        terms: terms.into_iter().map(|(w, c)| (BracketWord::psi(w), Q::from_integer(c.into()))).collect(),
    };
    (e(vec![(&[3, 9, -1], 1), (&[9, 3, -1], -1)]), e(vec![(&[7, 5, -1], 3), (&[5, 7, -1], -3)]))
}
