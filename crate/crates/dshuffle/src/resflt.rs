//! The residue maps `R_r`, the residue filtration, the total residue on
//! plus-truncated series and the `𝔰𝔩_2` operators `𝔢` and `𝔣`.
//!
//! All functions act on reduced components `f̄(x_1, …, x_r)`. On these `R_r`
//! is the residue along `x_r = 0`, with the single tabulated exception
//! `R_1 x_1^{-2} = 1` in weight `−1`.

use num::One;

use crate::dsh_check::{check_pole_shape, EquationReport, Family, Indices};
use crate::error::{Error, Result};
use crate::ratfun::q::qi;
use crate::ratfun::{AffineRational, Form, Q};
use crate::series::{ihara_action, ihara_bracket, stuffle_concat, DepthSeries};

fn x1_pow(e: i32) -> AffineRational {
    AffineRational::form_pow(Form::var(1), e)
}

fn subst(f: &AffineRational, images: &[Form]) -> AffineRational {
    f.substitute(images).expect("structural substitution keeps denominators nonzero")
}

/// The map `R_r` on a reduced component of arity `r`.
pub fn r_map(f: &AffineRational, r: usize) -> Result<AffineRational> {
    if r == 0 {
        return Ok(AffineRational::zero());
    }
    let x = Form::var(r);
    if r == 1 {
        let order = f.pole_order(x);
        if order > 2 {
            return Err(Error::HigherOrderPole { form: x.to_string(), order });
        }
        // Only the weight -1 part c x_1^{-2} contributes a double pole here.
        return Ok(f.residue(x) + f.laurent(x, 2));
    }
    let order = f.pole_order(x);
    if order >= 2 {
        return Err(Error::DoublePole(r));
    }
    Ok(f.residue(x))
}

/// `R^{[m]} = R_{r−m+1} ∘ ⋯ ∘ R_r`.
pub fn iterated_r(f: &AffineRational, r: usize, m: usize) -> Result<AffineRational> {
    let mut g = f.clone();
    for k in 0..m {
        if k >= r {
            return Ok(AffineRational::zero());
        }
        g = r_map(&g, r - k)?;
    }
    Ok(g)
}

/// The least `k` with `f ∈ ℜ_k`, i.e. `R^{[k+1]} f = 0`; never exceeds `r`.
pub fn filtration_degree(f: &AffineRational, r: usize) -> Result<usize> {
    let mut g = f.clone();
    for k in 0..r {
        g = r_map(&g, r - k)?;
        if g.is_zero() {
            return Ok(k);
        }
    }
    Ok(r)
}

/// `∇_r f = ∂_1 f + ⋯ + ∂_r f`.
pub fn nabla(f: &AffineRational, r: usize) -> AffineRational {
    f.nabla(r)
}

/// Residual of `Res_{x_{r+s}=0}(f ∘ g) = f ∘ Res_{x_s=0} g − (Res_{x_s=0} g) ⨰ f`.
pub fn res_of_action(f: &AffineRational, r: usize, g: &AffineRational, s: usize) -> Result<AffineRational> {
    if s < 2 {
        return Err(Error::Precondition("the acted-on component needs depth at least 2".into()));
    }
    let lhs = ihara_action(f, r, g, s).residue(Form::var(r + s));
    let rg = g.residue(Form::var(s));
    let rhs = ihara_action(f, r, &rg, s - 1) - stuffle_concat(&rg, s - 1, f, r);
    Ok(lhs - rhs)
}

/// Residual of `Res_{x_{r+1}=0}(f ∘ x_1^{-2}) = ∇_r f`.
pub fn res_nabla(f: &AffineRational, r: usize) -> AffineRational {
    ihara_action(f, r, &x1_pow(-2), 1).residue(Form::var(r + 1)) - nabla(f, r)
}

/// Residual of `Res_{x_{r+s}=0}(f ⨰ g) = f ⨰ Res_{x_s=0} g`.
pub fn res_of_stuffle(f: &AffineRational, r: usize, g: &AffineRational, s: usize) -> AffineRational {
    let lhs = stuffle_concat(f, r, g, s).residue(Form::var(r + s));
    lhs - stuffle_concat(f, r, &g.residue(Form::var(s)), s - 1)
}

/// Residual of `Res_{x_r=0} ∇_r f = ∇_{r−1} Res_{x_r=0} f`.
pub fn res_nabla_res(f: &AffineRational, r: usize) -> AffineRational {
    nabla(f, r).residue(Form::var(r)) - nabla(&f.residue(Form::var(r)), r - 1)
}

/// `Res^{(d)}(ξ) = Res_{x_d=0} ξ^{(d)}`, stored in depth `d − 1`.
pub fn total_residue(xi: &DepthSeries) -> DepthSeries {
    let depths: Vec<usize> = xi.components.keys().copied().filter(|&d| d >= 2).collect();
    let res = crate::par::map(&depths, |&d| (d - 1, xi.component(d).residue(Form::var(d))));
    let mut out = DepthSeries::new(xi.max_depth.saturating_sub(1), xi.weight);
    for (d, c) in res {
        if !c.is_zero() {
            out.set(d, c);
        }
    }
    out.complete = xi.complete;
    out
}

/// Whether every residue `Res_{x_d=0} ξ^{(d)}` with `d ≥ 2` vanishes.
pub fn in_kernel(xi: &DepthSeries) -> bool {
    total_residue(xi).components.is_empty()
}

/// `𝔢(f) = {x_1^{-2}, f}`, of arity `r + 1`.
pub fn sl2_e(f: &AffineRational, r: usize) -> AffineRational {
    ihara_bracket(&x1_pow(-2), 1, f, r)
}

/// `𝔣(f) = Σ_{i<r} x_i Res_{z=x_i} f(x_1, …, x_i, z, x_{i+1}, …, x_{r−1})`, of arity `r − 1`.
pub fn sl2_f(f: &AffineRational, r: usize) -> Result<AffineRational> {
    if r >= 1 && !check_pole_shape(f, r).passed {
        return Err(Error::PoleShape("poles outside x_i = x_{i-1} and x_r = 0".into()));
    }
    let mut acc = AffineRational::zero();
    for i in 1..r {
        // The dummy variable z is x_r; the output lives in x_1..x_{r-1}.
        let images: Vec<Form> = (1..=r)
            .map(|k| match k {
                k if k <= i => Form::var(k),
                k if k == i + 1 => Form::var(r),
                k => Form::var(k - 1),
            })
            .collect();
        let g = subst(f, &images).residue(Form::diff(r, i));
        acc = acc + &AffineRational::var(i) * &g;
    }
    Ok(acc)
}

/// `h_{a,b} = (1/2b){x^{2a}, {x^{-2}, x^{2b}}} + (1/2a){x^{2b}, {x^{-2}, x^{2a}}}`.
pub fn h_ab(a: u32, b: u32) -> AffineRational {
    let x = |n: u32| x1_pow(2 * n as i32);
    let inner = |n: u32| sl2_e(&x(n), 1);
    let t1 = ihara_bracket(&x(a), 1, &inner(b), 2).scale(&(Q::one() / qi(2 * b as i64)));
    let t2 = ihara_bracket(&x(b), 1, &inner(a), 2).scale(&(Q::one() / qi(2 * a as i64)));
    t1 + t2
}

/// Residual of `Res_{x_i=0} ξ^{(d)} = (x_1 ⋯ x_{i−1})^{-1} ⨰ Res_{x_1=0} ξ^{(d−i+1)}`.
pub fn residue_structure_check(xi: &DepthSeries, d: usize, i: usize) -> Result<EquationReport> {
    multi_residue_check(xi, d, i, 0)
}

/// Residual of the identity expressing `Res_{x_i=x_j} ξ^{(d)}` through
/// `ξ^{(d−i+j+1)}`, for `2 ≤ i − j < d`; `j = 0` means `x_0 = 0`.
pub fn multi_residue_check(xi: &DepthSeries, d: usize, i: usize, j: usize) -> Result<EquationReport> {
    if i > d || i <= j {
        return Err(Error::Precondition(format!("indices i={i}, j={j} out of range for depth {d}")));
    }
    let top = xi.get(d)?;
    let short_depth = d - i + j + 1;
    let short = xi.get(short_depth)?;
    let along = if j == 0 { Form::var(i) } else { Form::diff(i, j) };
    let lhs = top.residue(along);
    let images: Vec<Form> = (1..=short_depth)
        .map(|k| match k {
            k if k <= j => Form::var(k),
            k if k == j + 1 => Form::var(i),
            k => Form::var(i + k - j - 1),
        })
        .collect();
    let inner = subst(&short, &images).residue(along);
    let pre: Vec<(Form, i32)> =
        (j + 1..i).map(|k| (if j == 0 { Form::var(k) } else { Form::diff(k, j) }, -1)).collect();
    let rhs = &AffineRational::term(Q::one(), &pre) * &inner;
    Ok(EquationReport::new(Family::Residue, Indices::Pair(i, j), lhs - rhs))
}
