//! Explicit elements: `ψ_{2n+1}` and its pieces, vines and `ψ_{-1}`, `P_n`,
//! `Q_n`, `s_d` and `ψ_0`, `c_n`, the lifts `f̃` and `ℓ(f)`, `μ_±`, the
//! `⋆`-conjugation, twisting by `ψ_0`, the `χ` elements, `z_3` and `Q_4`.

pub mod vines;

use std::fmt;

use num::One;

pub use vines::{enumerate_vines, s_vineyard, Vine, Vineyard};

use crate::error::{Error, Result};
use crate::ratfun::q::{q, qi, Q};
use crate::ratfun::{AffineRational, Form, Polynomial};
use crate::series::{ihara_bracket, reverse, stuffle_concat_series, DepthSeries, YFunction};

/// Factors of `x_{A,B} = ∏_{a ∈ A, b ∈ B} (x_a − x_b)` with `x_0 = 0`.
pub fn x_ab_factors(a: &[usize], b: &[usize]) -> Vec<(Form, i32)> {
    a.iter().flat_map(|&i| b.iter().map(move |&j| (Form::diff(i, j), 1))).collect()
}

/// `x_{A,B}` as a polynomial in `arity` variables; `1` if either set is empty.
pub fn x_ab(a: &[usize], b: &[usize], arity: usize) -> Polynomial {
    x_ab_factors(a, b)
        .into_iter()
        .fold(Polynomial::constant(arity, Q::one()), |acc, (f, _)| acc.mul(&Polynomial::from_form(arity, &f)))
}

fn range(a: usize, b: usize) -> Vec<usize> {
    if a > b {
        Vec::new()
    } else {
        (a..=b).collect()
    }
}

/// `c · num^e / (x_{A1,B1} x_{A2,B2})`.
fn frac(c: Q, num: Form, e: i32, den: [(&[usize], &[usize]); 2]) -> AffineRational {
    let mut fs = vec![(num, e)];
    for (a, b) in den {
        fs.extend(x_ab_factors(a, b).into_iter().map(|(f, _)| (f, -1)));
    }
    AffineRational::term(c, &fs)
}

/// `Σ_{i=1}^{d} (x_i − x_{i−1})^{2n} / (x_{{0..i−2},{i−1}} x_{{i+1..d},{i}})` over `lo ≤ i ≤ d`.
fn part_e(n: u32, d: usize, lo: usize) -> AffineRational {
    let e = 2 * n as i32;
    let mut acc = AffineRational::zero();
    for i in lo..=d {
        let a1 = range(0, i.saturating_sub(2));
        let a1 = if i >= 2 { a1 } else { Vec::new() };
        acc = acc + frac(Q::one(), Form::diff(i, i - 1), e, [(&a1, &[i - 1]), (&range(i + 1, d), &[i])]);
    }
    acc
}

/// `Σ_{i=1}^{d} x_d^{2n} / (x_{{1..i−1},{0}} x_{{i..d−1},{d}})`.
fn part_d(n: u32, d: usize) -> AffineRational {
    let e = 2 * n as i32;
    let mut acc = AffineRational::zero();
    for i in 1..=d {
        acc = acc + frac(Q::one(), Form::var(d), e, [(&range(1, i - 1), &[0]), (&range(i, d - 1), &[d])]);
    }
    acc
}

/// `Σ_{i=1}^{d−1} (x_1 − x_d)^{2n} / (x_{{2..i},{1}} x_{{i+1..d−1},{d}} x_d)`.
fn part_f_plus(n: u32, d: usize) -> AffineRational {
    let e = 2 * n as i32;
    let mut acc = AffineRational::zero();
    for i in 1..d {
        let t = frac(Q::one(), Form::diff(1, d), e, [(&range(2, i), &[1]), (&range(i + 1, d - 1), &[d])]);
        acc = acc + &t * &inv_xd(d);
    }
    acc
}

/// `Σ_{i=1}^{d−1} x_{d−1}^{2n} / (x_{{d,1..i−1},{0}} x_{{i..d−2},{d−1}})`.
fn part_f_minus(n: u32, d: usize) -> AffineRational {
    let e = 2 * n as i32;
    let mut acc = AffineRational::zero();
    for i in 1..d {
        let mut a1 = vec![d];
        a1.extend(range(1, i - 1));
        acc = acc + frac(Q::one(), Form::var(d - 1), e, [(&a1, &[0]), (&range(i, d.saturating_sub(2)), &[d - 1])]);
    }
    acc
}

/// `ψ_{2n+1}^{(d)}` for `n ≥ 1`.
pub fn psi_odd(n: u32, d: usize) -> AffineRational {
    let (dd, e, f) = psi_pieces_def(n, d);
    (dd + e + f).scale(&q(1, 2))
}

/// `(A, B, C)` with `ψ_{2n+1}^{(d)} = (A + B + C)/2`.
pub fn psi_pieces_abc(n: u32, d: usize) -> (AffineRational, AffineRational, AffineRational) {
    let a = part_e(n, d, 1) - part_e(n, d, 2);
    let b = part_d(n, d) - part_f_minus(n, d);
    let c = part_e(n, d, 2) + part_f_plus(n, d);
    (a, b, c)
}

/// `(D, E, F)` with `ψ_{2n+1}^{(d)} = (D + E + F)/2`.
pub fn psi_pieces_def(n: u32, d: usize) -> (AffineRational, AffineRational, AffineRational) {
    (part_d(n, d), part_e(n, d, 1), part_f_plus(n, d) - part_f_minus(n, d))
}

fn inv_xd(d: usize) -> AffineRational {
    AffineRational::form_pow(Form::var(d), -1)
}

/// `ψ_{-1}^{(d)} = Σ_{v ∈ V_d} ((−1)^{h+1}/h) / (x_v x_d)`.
pub fn psi_minus_one(d: usize) -> AffineRational {
    let mut acc = AffineRational::zero();
    for v in enumerate_vines(d) {
        let h = v.height() as i64;
        let c = q(if h % 2 == 1 { 1 } else { -1 }, h);
        acc = acc + (&v.rat() * &inv_xd(d)).scale(&c);
    }
    acc
}

/// `P_n^{(d)}`: sum of `1/(x_v x_d)` over vines of height `n` with `d` grapes.
pub fn p_n(n: usize, d: usize) -> AffineRational {
    let mut acc = AffineRational::zero();
    for v in enumerate_vines(d).into_iter().filter(|v| v.height() == n) {
        acc = acc + &v.rat() * &inv_xd(d);
    }
    acc
}

/// `Q_n^{(d)}`: the part of `P_n^{(d)}` coming from vines `g_1 w`.
pub fn q_n(n: usize, d: usize) -> AffineRational {
    let mut acc = AffineRational::zero();
    for v in enumerate_vines(d).into_iter().filter(|v| v.height() == n && v.composition[0] == 1) {
        acc = acc + &v.rat() * &inv_xd(d);
    }
    acc
}

/// `s_d = Σ_{k=0}^{d−1} (d − k) / x_{{0..d}∖{k},{k}}`.
pub fn s_d(d: usize) -> AffineRational {
    let mut acc = AffineRational::zero();
    for k in 0..d {
        let others: Vec<usize> = (0..=d).filter(|&j| j != k).collect();
        let fs: Vec<(Form, i32)> = x_ab_factors(&others, &[k]).into_iter().map(|(f, _)| (f, -1)).collect();
        acc = acc + AffineRational::term(qi((d - k) as i64), &fs);
    }
    acc
}

/// `ψ_0^{(d)} = s_d / C(d+1, 2)`.
pub fn psi_zero(d: usize) -> AffineRational {
    s_d(d).scale(&q(2, (d * (d + 1)) as i64))
}

/// `c_n = 1/(x_1 (x_2 − x_1) ⋯ (x_n − x_{n−1}) x_n)`.
pub fn c_n(n: usize) -> AffineRational {
    let mut fs: Vec<(Form, i32)> = (1..=n).map(|i| (Form::diff(i, i - 1), -1)).collect();
    fs.push((Form::var(n), -1));
    AffineRational::term(Q::one(), &fs)
}

/// `Σ_{k=0}^{r} f(y_k, y_{k+1}, …, y_{k+r})` (indices mod `r+1`) in reduced form.
pub fn rotation_sum(f: &AffineRational, r: usize) -> AffineRational {
    let y = YFunction::unreduce(f, r);
    let mut acc = AffineRational::zero();
    for k in 0..=r {
        let idx: Vec<usize> = (0..=r).map(|j| (j + k) % (r + 1)).collect();
        acc = acc + y.at(&idx);
    }
    let mut images = vec![Form::ZERO];
    images.extend((1..=r).map(Form::var));
    acc.substitute(&images).expect("rotations keep denominators nonzero")
}

/// `z_3 = (1/4) Σ (x_2 − x_1)/x_3` over the cyclic rotations of `y_0..y_3`.
pub fn z3() -> AffineRational {
    let f = AffineRational::term(Q::one(), &[(Form::diff(2, 1), 1), (Form::var(3), -1)]);
    rotation_sum(&f, 3).scale(&q(1, 4))
}

/// `Q_4 = Σ 1/(x_1 (x_3 − x_2) x_3 x_4)` over the cyclic rotations of `y_0..y_4`.
pub fn q4() -> AffineRational {
    let f = AffineRational::term(
        Q::one(),
        &[(Form::var(1), -1), (Form::diff(3, 2), -1), (Form::var(3), -1), (Form::var(4), -1)],
    );
    rotation_sum(&f, 4)
}

/// `μ_+ = (x_1^{-1}, (x_1x_2)^{-1}, …)`.
pub fn mu_plus(max_depth: usize) -> DepthSeries {
    let mut s = DepthSeries::new(max_depth, Some(0));
    for k in 1..=max_depth {
        let fs: Vec<(Form, i32)> = (1..=k).map(|i| (Form::var(i), -1)).collect();
        s.set(k, AffineRational::term(Q::one(), &fs));
    }
    s.complete = true;
    s
}

/// `μ_− = (x_1^{-1}, 0, 0, …)`.
pub fn mu_minus(max_depth: usize) -> DepthSeries {
    DepthSeries::single(1, AffineRational::form_pow(Form::var(1), -1), Some(0), max_depth)
}

/// `ν = ℓ(x^{-1})`, with `ν^{(r)} = 1/(r x_1 ⋯ x_r)`.
pub fn nu(max_depth: usize) -> DepthSeries {
    lift_ell(&AffineRational::form_pow(Form::var(1), -1), 1, max_depth).with_weight(Some(0))
}

impl DepthSeries {
    fn with_weight(mut self, w: Option<i64>) -> Self {
        self.weight = w;
        self
    }
}

/// `ρ^⋆ = (1 + μ_+) ⨰ ρ ⨰ (1 − μ_−)`.
pub fn star_conjugate(rho: &DepthSeries) -> DepthSeries {
    let d = rho.max_depth;
    let left = DepthSeries::unit(d).add(&mu_plus(d));
    let right = DepthSeries::unit(d).sub(&mu_minus(d));
    let mut out = stuffle_concat_series(&stuffle_concat_series(&left, rho), &right);
    out.weight = rho.weight;
    out
}

/// The stuffle involution `f ↦ f(x_r, …, x_1)` applied to every component.
pub fn stuffle_involution(s: &DepthSeries) -> DepthSeries {
    s.map_components(|d, f| reverse(f, d))
}

/// Ordered set partitions of `{1..d}` into `s` consecutive blocks.
fn interval_partitions(d: usize, s: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(start: usize, d: usize, s: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if s == 0 {
            if start == d + 1 {
                out.push(cur.clone());
            }
            return;
        }
        for end in start..=d {
            if d - end < s - 1 {
                break;
            }
            cur.push((start, end));
            rec(end + 1, d, s - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s >= 1 && s <= d {
        rec(1, d, s, &mut Vec::new(), &mut out);
    }
    out
}

fn marked_lift(f: &AffineRational, s: usize, max_depth: usize, marked: bool) -> DepthSeries {
    let mut out = DepthSeries::new(max_depth, None);
    for d in s..=max_depth {
        let mut acc = AffineRational::zero();
        for blocks in interval_partitions(d, s) {
            let choices: Vec<Vec<usize>> = blocks
                .iter()
                .map(|&(a, b)| if marked { (a..=b).collect() } else { vec![a] })
                .collect();
            let mut marks = vec![0usize; s];
            let mut stack = vec![0usize; s];
            loop {
                for k in 0..s {
                    marks[k] = choices[k][stack[k]];
                }
                let mut coeff = Q::one();
                let mut fs = Vec::new();
                for (k, &(a, b)) in blocks.iter().enumerate() {
                    if marked {
                        coeff /= qi((b - a + 1) as i64);
                    }
                    for j in a..=b {
                        if j != marks[k] {
                            fs.push((Form::diff(j, marks[k]), -1));
                        }
                    }
                }
                let images: Vec<Form> = marks.iter().map(|&i| Form::var(i)).collect();
                let fv = f.substitute(&images).expect("distinct marks keep denominators nonzero");
                acc = acc + &fv * &AffineRational::term(coeff, &fs);
                let mut k = s;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    stack[k] += 1;
                    if stack[k] < choices[k].len() {
                        break;
                    }
                    stack[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || (k == 0 && stack[0] == 0) {
                    break;
                }
            }
        }
        out.set(d, acc);
    }
    out.complete = true;
    out
}

/// `f̃`: sum over increasing interval partitions with `d_a = ∏ 1/x_{ℓ_k∖i_k, i_k}`.
pub fn lift_tilde(f: &AffineRational, s: usize, max_depth: usize) -> DepthSeries {
    marked_lift(f, s, max_depth, false)
}

/// `ℓ(f)`: sum over marked interval partitions with `c_α = ∏ 1/(|ℓ_k| x_{ℓ_k∖i_k, i_k})`.
pub fn lift_ell(f: &AffineRational, s: usize, max_depth: usize) -> DepthSeries {
    marked_lift(f, s, max_depth, true)
}

/// `α̃` with `α̃^{(d+k)} = (1/2k) Σ_{i=1}^{k} {ψ_0^{(i)}, α̃^{(d+k−i)}}`.
pub fn twist_by_psi0(alpha: &AffineRational, d: usize, max_depth: usize) -> DepthSeries {
    let mut out = DepthSeries::new(max_depth, None);
    let mut comps: Vec<AffineRational> = vec![AffineRational::zero(); max_depth + 1];
    if d <= max_depth {
        comps[d] = alpha.clone();
    }
    let psi0: Vec<AffineRational> = (0..=max_depth).map(|i| if i == 0 { AffineRational::zero() } else { psi_zero(i) }).collect();
    for k in 1..=max_depth.saturating_sub(d) {
        let jobs: Vec<usize> = (1..=k).collect();
        let parts = crate::par::map(&jobs, |&i| ihara_bracket(&psi0[i], i, &comps[d + k - i], d + k - i));
        let sum = parts.into_iter().fold(AffineRational::zero(), |a, b| a + b);
        comps[d + k] = sum.scale(&q(1, 2 * k as i64)).normalized();
    }
    for (i, c) in comps.into_iter().enumerate().skip(1) {
        out.set(i, c);
    }
    out.complete = true;
    out
}

/// The named elements with a fixed weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorTag {
    Psi(i64),
    Chi(i64),
    Z3,
    Q4,
    S(usize),
    C(usize),
}

impl GeneratorTag {
    pub fn weight(&self) -> i64 {
        match *self {
            GeneratorTag::Psi(k) | GeneratorTag::Chi(k) => k,
            GeneratorTag::Z3 => 3,
            GeneratorTag::Q4 => 0,
            GeneratorTag::S(_) => 0,
            GeneratorTag::C(_) => -2,
        }
    }

    /// Builds the element up to `max_depth`.
    pub fn series(&self, max_depth: usize) -> Result<DepthSeries> {
        match *self {
            GeneratorTag::Psi(k) => psi_series(k, max_depth),
            GeneratorTag::Chi(k) => chi_series(k, max_depth),
            GeneratorTag::Z3 => Ok(DepthSeries::single(3, z3(), Some(3), max_depth)),
            GeneratorTag::Q4 => Ok(DepthSeries::single(4, q4(), Some(0), max_depth)),
            GeneratorTag::S(d) => {
                let mut s = DepthSeries::single(d, s_d(d), Some(0), max_depth);
                s.complete = true;
                Ok(s)
            }
            GeneratorTag::C(n) => Ok(DepthSeries::single(n, c_n(n), Some(-2), max_depth)),
        }
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorTag::Psi(k) => write!(f, "psi{k}"),
            GeneratorTag::Chi(k) => write!(f, "chi{k}"),
            GeneratorTag::Z3 => write!(f, "z3"),
            GeneratorTag::Q4 => write!(f, "Q4"),
            GeneratorTag::S(d) => write!(f, "s{d}"),
            GeneratorTag::C(n) => write!(f, "c{n}"),
        }
    }
}

fn check_odd_weight(k: i64) -> Result<u32> {
    if k >= 3 && k % 2 == 1 {
        Ok(((k - 1) / 2) as u32)
    } else {
        Err(Error::Precondition(format!("weight {k} is not -1, 0 or an odd integer ≥ 3")))
    }
}

/// `ψ_k` for `k ∈ {−1, 0, 3, 5, 7, …}` up to `max_depth`.
pub fn psi_series(k: i64, max_depth: usize) -> Result<DepthSeries> {
    let build: Box<dyn Fn(usize) -> AffineRational + Sync + Send> = match k {
        -1 => Box::new(psi_minus_one),
        0 => Box::new(psi_zero),
        _ => {
            let n = check_odd_weight(k)?;
            Box::new(move |d| psi_odd(n, d))
        }
    };
    let depths: Vec<usize> = (1..=max_depth).collect();
    let comps = crate::par::map(&depths, |&d| (d, build(d)));
    let mut s = DepthSeries::new(max_depth, Some(k));
    for (d, c) in comps {
        s.set(d, c);
    }
    s.complete = true;
    Ok(s)
}

/// `χ_k`: the twist of `x_1^{k−1}` for `k = −1` or odd `k ≥ 3`.
pub fn chi_series(k: i64, max_depth: usize) -> Result<DepthSeries> {
    if k != -1 {
        check_odd_weight(k)?;
    }
    let alpha = AffineRational::form_pow(Form::var(1), (k - 1) as i32);
    let mut s = twist_by_psi0(&alpha, 1, max_depth);
    s.weight = Some(k);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, e: i32) -> AffineRational {
        AffineRational::form_pow(Form::var(i), e)
    }

    fn d(a: usize, b: usize, e: i32) -> AffineRational {
        AffineRational::form_pow(Form::diff(a, b), e)
    }

    #[test]
    fn x_ab_examples() {
        assert_eq!(x_ab(&[1], &[0], 2), Polynomial::var(2, 1));
        assert_eq!(x_ab(&[1, 2], &[0], 2), Polynomial::var(2, 1).mul(&Polynomial::var(2, 2)));
        assert_eq!(x_ab(&[], &[1], 2), Polynomial::constant(2, Q::one()));
    }

    #[test]
    fn psi_low_depths() {
        assert!(psi_odd(3, 1).equals(&x(1, 6)));
        let n = 1;
        let e = 2 * n;
        let closed = ((x(2, e) - d(1, 2, e)) * x(1, -1) + (d(1, 2, e) - x(1, e)) * x(2, -1) + (x(2, e) - x(1, e)) * d(1, 2, -1))
            .scale(&q(1, 2));
        assert!(psi_odd(1, 2).equals(&closed));
        assert!(psi_odd(2, 2).canonical().is_polynomial());
        assert!(!psi_odd(2, 3).canonical().is_polynomial());
    }

    #[test]
    fn piece_decompositions_agree() {
        for dd in 1..=4 {
            let (a, b, c) = psi_pieces_abc(1, dd);
            let (p, r, s) = psi_pieces_def(1, dd);
            assert!((a + b + c).equals(&(p + r + s)), "depth {dd}");
        }
    }

    #[test]
    fn psi_minus_one_low_depths() {
        assert!(psi_minus_one(1).equals(&x(1, -2)));
        let expected = &x(1, -1) * &x(2, -2) - (&(&x(1, -1) * &d(2, 1, -1)) * &x(2, -1)).scale(&q(1, 2));
        assert!(psi_minus_one(2).equals(&expected));
    }

    #[test]
    fn psi_minus_one_from_p_n() {
        for dd in 1..=5 {
            let mut acc = AffineRational::zero();
            for n in 1..=dd {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                acc = acc + p_n(n, dd).scale(&q(2 * sign, n as i64));
            }
            let alt = psi_minus_one(dd).scale(&qi(2));
            assert!(acc.equals(&alt), "depth {dd}");
        }
    }

    #[test]
    fn psi_zero_low_depths() {
        assert!(psi_zero(1).equals(&x(1, -1)));
        let expected = (&x(1, -1) * &x(2, -1)).scale(&qi(2)) + &x(1, -1) * &d(1, 2, -1);
        assert!(psi_zero(2).equals(&expected.scale(&q(1, 3))));
        for n in 1..=4 {
            assert!(Vineyard::default().add_scaled(&s_vineyard(n), &Q::one()).realize(n).equals(&s_d(n)), "s_{n}");
        }
    }

    #[test]
    fn mu_and_nu() {
        let e = crate::series::stuffle_exp(&nu(4));
        let mp = mu_plus(4);
        for k in 1..=4 {
            assert!(e.component(k).equals(&mp.component(k)));
        }
        let one = DepthSeries::unit(5);
        let prod = stuffle_concat_series(&one.add(&mu_plus(5)), &one.sub(&mu_minus(5)));
        assert!(prod.unit.is_one());
        for k in 1..=5 {
            assert!(prod.component(k).is_zero());
        }
    }

    #[test]
    fn lifts() {
        let ones = lift_tilde(&AffineRational::one(), 1, 3);
        assert!(ones.component(3).equals(&(&d(2, 1, -1) * &d(3, 1, -1))));
        assert_eq!(interval_partitions(3, 2).len(), 2);
        let l = lift_ell(&x(1, 1), 1, 2);
        assert!(l.component(2).equals(&AffineRational::constant(q(-1, 2))));
        let n = nu(3);
        assert!(n.component(3).equals(&(&(&x(1, -1) * &x(2, -1)) * &x(3, -1)).scale(&q(1, 3))));
        let a = lift_tilde(&x(1, 2), 1, 4);
        for dd in 1..=4 {
            assert!(a.component(dd).equals(&psi_pieces_abc(1, dd).0));
        }
    }

    #[test]
    fn star_conjugation_gives_b() {
        let a = lift_tilde(&x(1, 2), 1, 4);
        let b = star_conjugate(&stuffle_involution(&a));
        for dd in 1..=4 {
            assert!(b.component(dd).equals(&psi_pieces_abc(1, dd).1), "depth {dd}");
        }
    }

    #[test]
    fn constants() {
        assert!(c_n(1).equals(&x(1, -2)));
        let r = q4().residue(Form::var(3));
        assert!(r.equals(&(&(&x(1, -1) * &x(2, -1)) * &x(4, -1)).scale(&qi(-1))));
    }

    #[test]
    fn s_generators_bracket_with_n_minus_m() {
        for (m, n) in [(1, 2), (2, 1), (1, 3), (2, 3)] {
            let sm = GeneratorTag::S(m).series(5).unwrap();
            let sn = GeneratorTag::S(n).series(5).unwrap();
            let lhs = crate::series::ihara_bracket_series(&sm, &sn).unwrap();
            let rhs = GeneratorTag::S(m + n).series(5).unwrap().scale(&qi(n as i64 - m as i64));
            for d in 1..=5 {
                assert!(lhs.component(d).equals(&rhs.component(d)), "({m},{n}) depth {d}");
            }
        }
    }
}
