//! Execution mode and resource caps shared by every enumeration.
//!
//! With the `parallel` feature, [`Execution::Parallel`] fans work out over the
//! rayon global pool. Without it the parallel mode runs the same closures
//! sequentially, so results never depend on the mode.

use std::ops::Range;

use crate::error::{Error, Result};

/// How data-parallel loops are driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Sum of `f(i)` over a range.
    pub fn sum_range<F>(self, range: Range<u64>, f: F) -> u64
    where
        F: Fn(u64) -> u64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).sum()
            }
            _ => range.map(f).sum(),
        }
    }

    /// `f` applied over a range, results kept in range order.
    pub fn map_range<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    /// `f` applied over a slice, results kept in slice order.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// True iff `pred` holds on every index of the range.
    pub fn all_range<F>(self, range: Range<u64>, pred: F) -> bool
    where
        F: Fn(u64) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().all(pred)
            }
            _ => range.into_iter().all(pred),
        }
    }

    /// Reduce per-chunk states: `fold` each index into a fresh `init()` state,
    /// then combine states with `merge`.
    pub fn fold_range<S, I, F, M>(self, range: Range<u64>, init: I, fold: F, merge: M) -> S
    where
        S: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(S, u64) -> S + Sync + Send,
        M: Fn(S, S) -> S + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range
                    .into_par_iter()
                    .fold(&init, &fold)
                    .reduce(&init, &merge)
            }
            _ => {
                let _ = merge;
                range.fold(init(), fold)
            }
        }
    }
}

/// Upper bounds on brute-force work. Every exhaustive routine checks its
/// workload against one of these before starting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Group elements enumerated (`p^{2n+1}`).
    pub elements: u64,
    /// Morphisms enumerated from the parametrization.
    pub morphisms: u64,
    /// Generator-image tuples tried by the homomorphism oracle.
    pub candidates: u64,
    /// Matrices visited by exhaustive matrix scans.
    pub matrix_scan: u64,
    /// Vector tuples visited by exhaustive subspace scans.
    pub subspace_scan: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: 10_000_000,
            morphisms: 10_000_000,
            candidates: 1_000_000_000,
            matrix_scan: 100_000_000,
            subspace_scan: 10_000_000,
        }
    }
}

/// Environment variables read by [`Caps::from_env`].
pub const CAP_ENV_VARS: [&str; 5] = [
    "EXTRASPECIAL_CAP_ELEMENTS",
    "EXTRASPECIAL_CAP_MORPHISMS",
    "EXTRASPECIAL_CAP_CANDIDATES",
    "EXTRASPECIAL_CAP_MATRIX_SCAN",
    "EXTRASPECIAL_CAP_SUBSPACE_SCAN",
];

impl Caps {
    /// Defaults overridden by any of [`CAP_ENV_VARS`] that parse as integers.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        let read = |name: &str, slot: &mut u64| {
            if let Some(v) = std::env::var(name).ok().and_then(|s| s.trim().parse().ok()) {
                *slot = v;
            }
        };
        read(CAP_ENV_VARS[0], &mut caps.elements);
        read(CAP_ENV_VARS[1], &mut caps.morphisms);
        read(CAP_ENV_VARS[2], &mut caps.candidates);
        read(CAP_ENV_VARS[3], &mut caps.matrix_scan);
        read(CAP_ENV_VARS[4], &mut caps.subspace_scan);
        caps
    }
}

/// `base^exp` if it fits, otherwise `None`.
pub(crate) fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc)
}

/// Fails with [`Error::Resource`] when `required` (or an overflowed size)
/// exceeds `cap`.
pub(crate) fn ensure_within(what: &'static str, required: Option<u128>, cap: u64) -> Result<u64> {
    match required {
        Some(r) if r <= cap as u128 => Ok(r as u64),
        Some(r) => Err(Error::Resource {
            what,
            required: r,
            cap,
        }),
        None => Err(Error::Resource {
            what,
            required: u128::MAX,
            cap,
        }),
    }
}
