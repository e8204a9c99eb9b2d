//! Depth-graded sequences of rational functions, the shuffle and stuffle
//! concatenation products, the linearized Ihara action and bracket, the
//! dihedral operators and the change between `y` and reduced `x` coordinates.
//!
//! Components are stored in reduced coordinates: the depth-`d` component is a
//! function of `x_1, …, x_d`. A [`YFunction`] of depth `r` uses the engine
//! variables `1, …, r+1` for `y_0, …, y_r`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ratfun::io::{from_json, to_json};
use crate::ratfun::{AffineRational, Form, RationalFunction, Q};

/// An element of `∏_{d ≥ 1} O_d`, optionally with a depth-0 constant, known
/// exactly up to `max_depth`.
#[derive(Clone, Debug, Default)]
pub struct DepthSeries {
    pub unit: Q,
    pub components: BTreeMap<usize, AffineRational>,
    pub weight: Option<i64>,
    pub max_depth: usize,
    pub complete: bool,
}

fn subst(f: &AffineRational, images: &[Form]) -> AffineRational {
    f.substitute(images).expect("structural substitution keeps denominators nonzero")
}

impl DepthSeries {
    pub fn new(max_depth: usize, weight: Option<i64>) -> Self {
        DepthSeries { unit: Q::zero(), components: BTreeMap::new(), weight, max_depth, complete: false }
    }

    /// The series `1` (unit in depth zero), exact in every depth.
    pub fn unit(max_depth: usize) -> Self {
        let mut s = Self::new(max_depth, Some(0));
        s.unit = Q::one();
        s.complete = true;
        s
    }

    /// A series concentrated in one depth.
    pub fn single(depth: usize, f: AffineRational, weight: Option<i64>, max_depth: usize) -> Self {
        let mut s = Self::new(max_depth, weight);
        s.set(depth, f);
        s.complete = true;
        s
    }

    pub fn set(&mut self, d: usize, f: AffineRational) {
        if d > self.max_depth {
            return;
        }
        if f.is_empty() {
            self.components.remove(&d);
        } else {
            self.components.insert(d, f);
        }
    }

    pub fn component(&self, d: usize) -> AffineRational {
        self.components.get(&d).cloned().unwrap_or_default()
    }

    /// Component in depth `d`, or an error when `d` exceeds the known range.
    pub fn get(&self, d: usize) -> Result<AffineRational> {
        if d > self.max_depth {
            return Err(Error::MissingComponent(d));
        }
        Ok(self.component(d))
    }

    /// Smallest depth carrying a stored term (0 for a nonzero unit).
    pub fn min_support(&self) -> usize {
        if !self.unit.is_zero() {
            return 0;
        }
        self.components.keys().next().copied().unwrap_or(usize::MAX / 4)
    }

    pub fn truncate(&self, max_depth: usize) -> Self {
        let mut s = self.clone();
        s.max_depth = s.max_depth.min(max_depth);
        s.components.retain(|&d, _| d <= max_depth);
        s
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut s = self.clone();
        s.unit = &s.unit * c;
        for f in s.components.values_mut() {
            *f = f.scale(c);
        }
        s.components.retain(|_, f| !f.is_empty());
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        self.add_scaled(o, &Q::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add_scaled(o, &-Q::one())
    }

    /// `self + c·o`, truncated to the common known range.
    pub fn add_scaled(&self, o: &Self, c: &Q) -> Self {
        let weight = if self.weight == o.weight { self.weight } else { None };
        let mut s = Self::new(self.max_depth.min(o.max_depth), weight);
        s.unit = &self.unit + &o.unit * c;
        s.complete = self.complete && o.complete;
        for d in 1..=s.max_depth {
            let mut f = self.component(d);
            if let Some(g) = o.components.get(&d) {
                f.add_assign_scaled(g, c);
            }
            s.set(d, f);
        }
        s
    }

    /// Exact test that every known component vanishes.
    pub fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.components.values().all(|f| f.is_zero())
    }

    /// Depths whose component is exactly nonzero.
    pub fn support(&self) -> Vec<usize> {
        self.components.iter().filter(|(_, f)| !f.is_zero()).map(|(&d, _)| d).collect()
    }

    /// Applies a component-wise map to every stored component.
    pub fn map_components(&self, f: impl Fn(usize, &AffineRational) -> AffineRational + Sync + Send) -> Self {
        let items: Vec<(usize, AffineRational)> = self.components.iter().map(|(&d, c)| (d, c.clone())).collect();
        let mapped = crate::par::map(&items, |(d, c)| (*d, f(*d, c)));
        let mut s = self.clone();
        s.components.clear();
        for (d, c) in mapped {
            s.set(d, c);
        }
        s
    }

    /// Replaces each component by its canonical partial-fraction form.
    pub fn normalized(&self) -> Self {
        self.map_components(|_, f| f.normalized())
    }

    /// `ξ⁺`: drops components of degree `≤ 0`, i.e. depths `≥ weight`.
    pub fn plus_truncate(&self) -> Result<Self> {
        let w = self.weight.ok_or(Error::WeightUnset)?;
        let mut s = self.clone();
        s.unit = Q::zero();
        s.components.retain(|&d, _| (d as i64) < w);
        Ok(s)
    }

    pub fn to_json(&self) -> Result<Value> {
        let mut comps = Map::new();
        for (&d, f) in &self.components {
            let rf = RationalFunction::from_affine(f, d)?;
            if !rf.is_zero() {
                comps.insert(d.to_string(), to_json(&rf));
            }
        }
        Ok(json!({"weight": self.weight, "max_depth": self.max_depth, "components": comps}))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let max_depth = v["max_depth"].as_u64().ok_or_else(|| Error::Parse("missing max_depth".into()))? as usize;
        let weight = v["weight"].as_i64();
        let mut s = Self::new(max_depth, weight);
        let comps = v["components"].as_object().ok_or_else(|| Error::Parse("missing components".into()))?;
        for (k, c) in comps {
            let d: usize = k.parse().map_err(|_| Error::Parse(format!("bad depth key `{k}`")))?;
            let rf = from_json(c)?;
            if rf.arity != d {
                return Err(Error::ArityMismatch { expected: d, found: rf.arity });
            }
            s.set(d, rf.to_affine());
        }
        Ok(s)
    }
}

/// `f̄_1(x_1..x_r) · f̄_2(x_{r+1}-x_r, …, x_{r+s}-x_r)`.
pub fn shuffle_concat(f1: &AffineRational, r: usize, f2: &AffineRational, s: usize) -> AffineRational {
    let images: Vec<Form> = (1..=s).map(|k| Form::diff(r + k, r)).collect();
    f1 * &subst(f2, &images)
}

/// `f_1(x_1..x_p) · f_2(x_{p+1}, …, x_{p+q})`.
pub fn stuffle_concat(f1: &AffineRational, p: usize, f2: &AffineRational, q: usize) -> AffineRational {
    f1 * &shift(f2, q, p)
}

/// Renames `x_k ↦ x_{k+by}` for `k = 1..=arity`.
pub fn shift(f: &AffineRational, arity: usize, by: usize) -> AffineRational {
    if by == 0 {
        return f.clone();
    }
    let images: Vec<Form> = (1..=arity).map(|k| Form::var(k + by)).collect();
    subst(f, &images)
}

fn series_product(
    a: &DepthSeries,
    b: &DepthSeries,
    op: fn(&AffineRational, usize, &AffineRational, usize) -> AffineRational,
) -> DepthSeries {
    let max_depth = (a.max_depth + b.min_support()).min(b.max_depth + a.min_support());
    let weight = a.weight.zip(b.weight).map(|(x, y)| x + y);
    let mut out = DepthSeries::new(max_depth, weight);
    out.unit = &a.unit * &b.unit;
    out.complete = a.complete && b.complete;
    let depths: Vec<usize> = (1..=max_depth).collect();
    let comps = crate::par::map(&depths, |&n| {
        let mut acc = AffineRational::zero();
        for p in 0..=n {
            let q = n - p;
            let fa = if p == 0 { None } else { a.components.get(&p) };
            let fb = if q == 0 { None } else { b.components.get(&q) };
            match (p, q) {
                (0, _) => {
                    if let Some(g) = fb {
                        acc.add_assign_scaled(g, &a.unit);
                    }
                }
                (_, 0) => {
                    if let Some(f) = fa {
                        acc.add_assign_scaled(f, &b.unit);
                    }
                }
                _ => {
                    if let (Some(f), Some(g)) = (fa, fb) {
                        acc = acc + op(f, p, g, q);
                    }
                }
            }
        }
        (n, acc)
    });
    for (n, c) in comps {
        out.set(n, c);
    }
    out
}

/// Series version of [`shuffle_concat`].
pub fn shuffle_concat_series(a: &DepthSeries, b: &DepthSeries) -> DepthSeries {
    series_product(a, b, shuffle_concat)
}

/// Series version of [`stuffle_concat`].
pub fn stuffle_concat_series(a: &DepthSeries, b: &DepthSeries) -> DepthSeries {
    series_product(a, b, stuffle_concat)
}

/// `exp_⨰(ν) = Σ_k ν^{⨰k}/k!` for `ν` without a depth-0 part.
pub fn stuffle_exp(nu: &DepthSeries) -> DepthSeries {
    let mut total = DepthSeries::unit(nu.max_depth);
    let mut power = DepthSeries::unit(nu.max_depth);
    let mut fact = Q::one();
    for k in 1..=nu.max_depth {
        power = stuffle_concat_series(&power, nu).truncate(nu.max_depth);
        fact *= Q::from_integer(k.into());
        total = total.add_scaled(&power, &fact.recip());
    }
    total.max_depth = nu.max_depth;
    total.weight = nu.weight.filter(|&w| w == 0);
    total
}

/// The linearized Ihara action `f ∘ g` on components of arities `r ≥ 1` and `s ≥ 0`.
pub fn ihara_action(f: &AffineRational, r: usize, g: &AffineRational, s: usize) -> AffineRational {
    assert!(r >= 1, "the acting component must have positive depth");
    let (even, odd) = split_degree_parity(f);
    let mut acc = AffineRational::zero();
    for i in 0..=s {
        let fi: Vec<Form> = (1..=r).map(|k| Form::diff(i + k, i)).collect();
        let gi: Vec<Form> = (1..=s).map(|k| if k <= i { Form::var(k) } else { Form::var(k + r) }).collect();
        acc = acc + &subst(f, &fi) * &subst(g, &gi);
    }
    for i in 1..=s {
        let fi: Vec<Form> = (1..=r).map(|k| Form::diff(i + r - k, i + r)).collect();
        let gi: Vec<Form> = (1..=s).map(|k| if k < i { Form::var(k) } else { Form::var(k + r) }).collect();
        let gs = subst(g, &gi);
        for (part, deg_odd) in [(&even, false), (&odd, true)] {
            if part.is_empty() {
                continue;
            }
            let sign = if deg_odd ^ (r % 2 == 1) { -Q::one() } else { Q::one() };
            acc.add_assign_scaled(&(&subst(part, &fi) * &gs), &sign);
        }
    }
    acc
}

fn split_degree_parity(f: &AffineRational) -> (AffineRational, AffineRational) {
    let mut even = AffineRational::zero();
    let mut odd = AffineRational::zero();
    for (fs, c) in f.terms() {
        let deg: i32 = fs.iter().map(|x| x.1).sum();
        if deg.rem_euclid(2) == 0 {
            even.add_term(fs.clone(), c.clone());
        } else {
            odd.add_term(fs.clone(), c.clone());
        }
    }
    (even, odd)
}

/// `{f, g} = f ∘ g − g ∘ f` on components.
pub fn ihara_bracket(f: &AffineRational, r: usize, g: &AffineRational, s: usize) -> AffineRational {
    ihara_action(f, r, g, s) - ihara_action(g, s, f, r)
}

/// Depth bound for a binary operation on truncated series.
fn action_bound(f: &DepthSeries, g: &DepthSeries) -> usize {
    (f.max_depth + g.min_support()).min(g.max_depth + f.min_support())
}

/// Series version of [`ihara_action`]; `f` must have no depth-0 part.
pub fn ihara_action_series(f: &DepthSeries, g: &DepthSeries) -> Result<DepthSeries> {
    if !f.unit.is_zero() {
        return Err(Error::Precondition("the acting series must vanish in depth 0".into()));
    }
    let max_depth = action_bound(f, g);
    let mut out = DepthSeries::new(max_depth, f.weight.zip(g.weight).map(|(a, b)| a + b));
    out.complete = f.complete && g.complete;
    let depths: Vec<usize> = (1..=max_depth).collect();
    let comps = crate::par::map(&depths, |&n| {
        let mut acc = AffineRational::zero();
        for (&i, fc) in f.components.range(1..=n) {
            let j = n - i;
            if j == 0 {
                acc.add_assign_scaled(fc, &g.unit);
            } else if let Some(gc) = g.components.get(&j) {
                acc = acc + ihara_action(fc, i, gc, j);
            }
        }
        (n, acc)
    });
    for (n, c) in comps {
        out.set(n, c);
    }
    Ok(out)
}

/// Series version of [`ihara_bracket`] for series without depth-0 parts.
pub fn ihara_bracket_series(f: &DepthSeries, g: &DepthSeries) -> Result<DepthSeries> {
    if !f.unit.is_zero() || !g.unit.is_zero() {
        return Err(Error::Precondition("bracket arguments must vanish in depth 0".into()));
    }
    let max_depth = action_bound(f, g);
    let mut out = DepthSeries::new(max_depth, f.weight.zip(g.weight).map(|(a, b)| a + b));
    out.complete = f.complete && g.complete;
    let mut jobs = Vec::new();
    for n in 2..=max_depth {
        for (&i, _) in f.components.range(1..n) {
            if g.components.contains_key(&(n - i)) {
                jobs.push((n, i));
            }
        }
    }
    let parts = crate::par::map(&jobs, |&(n, i)| {
        let (fc, gc) = (&f.components[&i], &g.components[&(n - i)]);
        (n, ihara_bracket(fc, i, gc, n - i))
    });
    let mut acc: BTreeMap<usize, AffineRational> = BTreeMap::new();
    for (n, c) in parts {
        let e = acc.entry(n).or_default();
        *e = std::mem::take(e) + c;
    }
    for (n, c) in acc {
        out.set(n, c);
    }
    Ok(out)
}

/// A function of `y_0, …, y_r`, stored with `y_j` as engine variable `j + 1`.
#[derive(Clone, Debug)]
pub struct YFunction {
    pub depth: usize,
    pub f: AffineRational,
}

impl YFunction {
    /// `f̄(y_1 − y_0, …, y_r − y_0)`.
    pub fn unreduce(fbar: &AffineRational, r: usize) -> Self {
        let images: Vec<Form> = (1..=r).map(|k| Form::diff(k + 1, 1)).collect();
        YFunction { depth: r, f: subst(fbar, &images) }
    }

    /// Exact test of `∇ f = 0`.
    pub fn is_translation_invariant(&self) -> bool {
        self.f.nabla(self.depth + 1).is_zero()
    }

    /// `f(0, x_1, …, x_r)`; fails unless `f` is translation invariant.
    pub fn reduce(&self) -> Result<AffineRational> {
        if !self.is_translation_invariant() {
            return Err(Error::NotTranslationInvariant);
        }
        Ok(self.reduce_unchecked())
    }

    fn reduce_unchecked(&self) -> AffineRational {
        let mut images = vec![Form::ZERO];
        images.extend((1..=self.depth).map(Form::var));
        subst(&self.f, &images)
    }

    /// `f(y_{i_0}, …, y_{i_r})` inside a function of `n + 1` variables `y_0..y_n`.
    pub fn at(&self, idx: &[usize]) -> AffineRational {
        let images: Vec<Form> = idx.iter().map(|&i| Form::var(i + 1)).collect();
        subst(&self.f, &images)
    }
}

/// `σ(f̄) = (−1)^r f̄(x_r − x_{r−1}, …, x_r − x_1, x_r)`.
pub fn sigma(f: &AffineRational, r: usize) -> AffineRational {
    let images: Vec<Form> = (1..=r).map(|k| Form::diff(r, r - k)).collect();
    signed(subst(f, &images), r)
}

/// `τ̄(f̄) = (−1)^r f̄(x_r, …, x_1)`.
pub fn tau(f: &AffineRational, r: usize) -> AffineRational {
    let images: Vec<Form> = (1..=r).map(|k| Form::var(r + 1 - k)).collect();
    signed(subst(f, &images), r)
}

/// `υ(f) = f(x_r, …, x_1)`, the unsigned reversal.
pub fn reverse(f: &AffineRational, r: usize) -> AffineRational {
    let images: Vec<Form> = (1..=r).map(|k| Form::var(r + 1 - k)).collect();
    subst(f, &images)
}

/// The signed cyclic rotation `f(−y_r, −y_0, …, −y_{r−1})` in reduced form,
/// `f̄(x_r, x_r − x_1, …, x_r − x_{r−1})`; it equals `σ(τ̄(f̄))`.
pub fn cyclic_rotate(f: &AffineRational, r: usize) -> AffineRational {
    let images: Vec<Form> = (1..=r).map(|k| Form::diff(r, k - 1)).collect();
    subst(f, &images)
}

fn signed(f: AffineRational, r: usize) -> AffineRational {
    if r % 2 == 1 {
        -f
    } else {
        f
    }
}

/// The dihedral form of the bracket, valid for inputs satisfying the dihedral
/// symmetries: `Σ_{i mod N} f(y_i..y_{i+r}) [g(y_{i+r+1}..y_i) − g(y_{i+r}..y_{i−1})]`.
///
/// The orientation of the difference is the one that agrees with
/// [`ihara_bracket`] as computed from the linearized action.
pub fn dihedral_bracket(f: &AffineRational, r: usize, g: &AffineRational, s: usize) -> AffineRational {
    let n = r + s + 1;
    let fy = YFunction::unreduce(f, r);
    let gy = YFunction::unreduce(g, s);
    let idx = |start: usize, len: usize| -> Vec<usize> { (0..len).map(|k| (start + k) % n).collect() };
    let mut acc = AffineRational::zero();
    for i in 0..n {
        let fv = fy.at(&idx(i, r + 1));
        let g1 = gy.at(&idx(i + r, s + 1));
        let g2 = gy.at(&idx(i + r + 1, s + 1));
        acc = acc + &fv * &(g2 - g1);
    }
    YFunction { depth: r + s, f: acc }.reduce_unchecked()
}
