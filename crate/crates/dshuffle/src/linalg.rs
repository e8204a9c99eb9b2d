//! Exact sparse linear algebra over ℚ: incremental reduced row echelon form,
//! nullspaces and particular solutions.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::ratfun::Q;

/// A sparse row: column index to nonzero coefficient.
pub type Row = BTreeMap<usize, Q>;

/// A fully reduced echelon basis, grown one row at a time.
///
/// Pivots are always the leftmost nonzero column of a reduced row, so the
/// resulting basis does not depend on the order in which rows arrive.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pub ncols: usize,
    rows: BTreeMap<usize, Row>,
}

fn axpy(target: &mut Row, c: &Q, src: &Row) {
    for (&j, v) in src {
        let e = target.entry(j).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &Row)> {
        self.rows.iter()
    }

    /// Reduces `row` against the current basis.
    pub fn reduce(&self, mut row: Row) -> Row {
        let cols: Vec<usize> = row.keys().copied().filter(|j| self.rows.contains_key(j)).collect();
        for j in cols {
            if let Some(c) = row.get(&j).cloned() {
                axpy(&mut row, &-c, &self.rows[&j]);
            }
        }
        row
    }

    /// Adds a row; returns `true` if the rank increased.
    pub fn push(&mut self, row: Row) -> bool {
        let mut row = self.reduce(row);
        let Some((&p, lead)) = row.iter().next() else {
            return false;
        };
        let inv = Q::one() / lead;
        for v in row.values_mut() {
            *v *= &inv;
        }
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&p).cloned() {
                axpy(other, &-c, &row);
            }
        }
        self.rows.insert(p, row);
        true
    }

    /// A basis of `{v : A v = 0}`, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|j| !self.rows.contains_key(j)) {
            let mut v = vec![Q::zero(); self.ncols];
            v[free] = Q::one();
            for (&p, row) in &self.rows {
                if let Some(c) = row.get(&free) {
                    v[p] = -c.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Nullspace of the matrix with the given sparse rows.
pub fn nullspace(rows: impl IntoIterator<Item = Row>, ncols: usize) -> Vec<Vec<Q>> {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.push(r);
    }
    e.nullspace()
}

/// Solution of `A x = b` with free variables set to zero, and the nullspace of `A`.
///
/// Each equation is given as a sparse row over the unknowns together with its
/// right-hand side.
pub fn solve(equations: impl IntoIterator<Item = (Row, Q)>, ncols: usize) -> Result<(Vec<Q>, Vec<Vec<Q>>)> {
    let mut e = Echelon::new(ncols + 1);
    for (mut r, b) in equations {
        if !b.is_zero() {
            r.insert(ncols, b);
        }
        e.push(r);
    }
    if e.rows.contains_key(&ncols) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![Q::zero(); ncols];
    for (&p, row) in &e.rows {
        if let Some(c) = row.get(&ncols) {
            x[p] = c.clone();
        }
    }
    let kernel = e.nullspace().into_iter().filter(|v| v[ncols].is_zero()).map(|mut v| {
        v.truncate(ncols);
        v
    });
    Ok((x, kernel.collect()))
}

/// Rank of a dense matrix.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.push(dense_to_row(r));
    }
    e.rank()
}

pub fn dense_to_row(v: &[Q]) -> Row {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect()
}
