//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (the default) the heavy loops run on the rayon
//! pool; without it every helper degrades to a plain iterator.

use std::collections::HashMap;

use num::Zero;

use crate::ratfun::affine::{expand_term, Factors, Key};
use crate::ratfun::q::Q;

const PAR_THRESHOLD: usize = 32;

fn merge(mut a: HashMap<Vec<Key>, Q>, b: HashMap<Vec<Key>, Q>) -> HashMap<Vec<Key>, Q> {
    let (mut big, small) = if a.len() >= b.len() { (std::mem::take(&mut a), b) } else { (b, a) };
    for (k, v) in small {
        *big.entry(k).or_insert_with(Q::zero) += v;
    }
    big
}

/// Canonical expansion of every term, merged into one map without zeros.
pub(crate) fn fold_terms(terms: &HashMap<Factors, Q>, nvars: usize) -> HashMap<Vec<Key>, Q> {
    let run = |acc: &mut HashMap<Vec<Key>, Q>, fs: &Factors, c: &Q| {
        let mut path = Vec::with_capacity(nvars);
        expand_term(fs, c.clone(), nvars, &mut path, acc);
    };
    #[cfg(feature = "parallel")]
    let mut out = if terms.len() >= PAR_THRESHOLD {
        use rayon::prelude::*;
        let items: Vec<(&Factors, &Q)> = terms.iter().collect();
        items
            .par_iter()
            .fold(HashMap::new, |mut acc, (fs, c)| {
                run(&mut acc, fs, c);
                acc
            })
            .reduce(HashMap::new, merge)
    } else {
        let mut acc = HashMap::new();
        for (fs, c) in terms {
            run(&mut acc, fs, c);
        }
        acc
    };
    #[cfg(not(feature = "parallel"))]
    let mut out = {
        let _ = (PAR_THRESHOLD, merge as fn(_, _) -> _);
        let mut acc = HashMap::new();
        for (fs, c) in terms {
            run(&mut acc, fs, c);
        }
        acc
    };
    out.retain(|_, v| !v.is_zero());
    out
}

/// Maps `f` over `items`, in parallel when enabled, preserving order.
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Configures the global worker count; a no-op for sequential builds.
pub fn set_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
    }
}

/// Runs `f` on a dedicated pool of `jobs` workers; sequential builds just call `f`.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

/// True when the crate was built with the rayon backend.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
