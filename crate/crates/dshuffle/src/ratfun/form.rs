//! Integer linear forms in the variables `x_1, …, x_N`.
//!
//! A [`Form`] stores one integer coefficient per variable. Primitive forms are
//! scaled so that the coefficients are coprime and the coefficient of the
//! highest variable present is positive; every factor stored by the engine is
//! primitive, which makes factor identity a plain equality test.

use std::fmt;

use num::integer::gcd;

use super::q::{qi, Q};

/// Largest number of variables an expression may involve.
pub const MAX_VARS: usize = 8;

/// `Σ c_i x_i` with `c_i` stored at index `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Form(pub [i32; MAX_VARS]);

fn narrow(v: i64) -> i32 {
    i32::try_from(v).expect("linear form coefficient overflow")
}

impl Form {
    pub const ZERO: Form = Form([0; MAX_VARS]);

    /// The coordinate `x_i`; `x_0` is the zero form.
    pub fn var(i: usize) -> Form {
        let mut f = Form::ZERO;
        if i > 0 {
            assert!(i <= MAX_VARS, "variable index {i} out of range");
            f.0[i - 1] = 1;
        }
        f
    }

    /// `x_a - x_b` with the convention `x_0 = 0`.
    pub fn diff(a: usize, b: usize) -> Form {
        Form::var(a).sub(&Form::var(b))
    }

    /// `x_a + … + x_b` for `a ≤ b`, empty when `a > b`.
    pub fn range_sum(a: usize, b: usize) -> Form {
        (a..=b).fold(Form::ZERO, |acc, i| acc.add(&Form::var(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coefficient of `x_i` (1-based); zero for `i = 0`.
    pub fn coeff(&self, i: usize) -> i32 {
        if i == 0 || i > MAX_VARS {
            0
        } else {
            self.0[i - 1]
        }
    }

    pub fn with_coeff(mut self, i: usize, c: i32) -> Form {
        self.0[i - 1] = c;
        self
    }

    /// Highest variable index with a nonzero coefficient.
    pub fn top(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c != 0).map(|p| p + 1)
    }

    pub fn add(&self, o: &Form) -> Form {
        let mut r = Form::ZERO;
        for i in 0..MAX_VARS {
            r.0[i] = narrow(self.0[i] as i64 + o.0[i] as i64);
        }
        r
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Form {
        let mut r = Form::ZERO;
        for i in 0..MAX_VARS {
            r.0[i] = narrow(self.0[i] as i64 * k);
        }
        r
    }

    /// `a * self + b * other`, computed without intermediate overflow.
    pub fn combine(a: i64, x: &Form, b: i64, y: &Form) -> Form {
        let mut r = Form::ZERO;
        for i in 0..MAX_VARS {
            r.0[i] = narrow(a * x.0[i] as i64 + b * y.0[i] as i64);
        }
        r
    }

    /// Splits a nonzero form as `scale * primitive`.
    pub fn normalize(&self) -> (i64, Form) {
        let top = self.top().expect("normalizing the zero form");
        let g = self.0.iter().fold(0i64, |g, &c| gcd(g, c as i64));
        let s = if self.0[top - 1] < 0 { -g } else { g };
        let mut r = Form::ZERO;
        for i in 0..MAX_VARS {
            r.0[i] = (self.0[i] as i64 / s) as i32;
        }
        (s, r)
    }

    /// Replaces every `x_i` by `images[i - 1]`; variables past the end stay put.
    pub fn substitute(&self, images: &[Form]) -> Form {
        let mut r = Form::ZERO;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let img = images.get(i).copied().unwrap_or_else(|| Form::var(i + 1));
            r = Form::combine(1, &r, c as i64, &img);
        }
        r
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = qi(0);
        for (i, &c) in self.0.iter().enumerate() {
            if c != 0 {
                acc += &point[i] * qi(c as i64);
            }
        }
        acc
    }

    /// Recognizes `x_a` (as `(a, 0)`) and `x_a - x_b` with `b < a`.
    pub fn as_standard(&self) -> Option<(usize, usize)> {
        let nz: Vec<(usize, i32)> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i + 1, c))
            .collect();
        match nz.as_slice() {
            [(a, 1)] => Some((*a, 0)),
            [(b, -1), (a, 1)] => Some((*a, *b)),
            _ => None,
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (1..=MAX_VARS).rev() {
            let c = self.coeff(i);
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}x{i}")?;
            } else {
                write!(f, "{sign}{mag}*x{i}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_standard_shapes() {
        assert_eq!(Form::diff(3, 1).to_string(), "x3-x1");
        assert_eq!(Form::var(2).to_string(), "x2");
        assert_eq!(Form::range_sum(1, 3).to_string(), "x3+x2+x1");
        assert_eq!(Form::diff(3, 1).as_standard(), Some((3, 1)));
        assert_eq!(Form::diff(1, 3).as_standard(), None);
        assert_eq!(Form::var(4).as_standard(), Some((4, 0)));
    }

    #[test]
    fn normalization_makes_top_positive_and_primitive() {
        let f = Form::diff(1, 3).scale(2);
        let (s, p) = f.normalize();
        assert_eq!(s, -2);
        assert_eq!(p, Form::diff(3, 1));
    }

    #[test]
    fn substitution_composes_images() {
        let f = Form::diff(2, 1);
        let img = [Form::var(2), Form::diff(2, 1)];
        assert_eq!(f.substitute(&img), Form::var(1).scale(-1));
    }
}
