//! Letter typicality: membership tests and exact typical-set masses.
//!
//! A length-`n` sequence is epsilon-typical for `P` when every symbol `a`
//! satisfies `|N(a)/n - P(a)| <= epsilon * P(a)`, with `N(a)` the occurrence
//! count. The band is multiplicative, so symbols outside the support of `P`
//! must not occur at all, at any epsilon. Joint typicality applies the same
//! test to the sequence of pairs.
//!
//! Masses are computed exactly by enumerating empirical types, never by
//! sampling, and accumulate in type-index order so results are reproducible
//! run to run.

use crate::error::{Error, Result};
use crate::prob::{JointPmf, Pmf};
use crate::scalar::Real;
use crate::seq::STATE_CAP;

/// Blocklength and width of the typicality band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams<T: Real = f64> {
    epsilon: T,
    n: usize,
}

impl<T: Real> TypicalityParams<T> {
    /// Requires a finite `epsilon >= 0` and a blocklength of at least one.
    pub fn new(epsilon: T, n: usize) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= T::zero()) {
            return Err(Error::OutOfRange {
                what: "epsilon",
                value: epsilon.to_f64().unwrap_or(f64::NAN),
                range: "[0, inf)",
            });
        }
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "blocklength",
                value: 0.0,
                range: "n >= 1",
            });
        }
        Ok(Self { epsilon, n })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Whether `x` lies in the epsilon-typical set of `p`.
pub fn is_letter_typical<T: Real>(
    x: &[usize],
    p: &Pmf<T>,
    params: &TypicalityParams<T>,
) -> Result<bool> {
    let counts = count_symbols(x, p.len(), params.n)?;
    Ok(counts_typical(&counts, p.probs(), params))
}

/// Whether the pair sequence `(u, v)` lies in the epsilon-typical set of the
/// joint distribution.
pub fn jointly_typical<T: Real>(
    u: &[usize],
    v: &[usize],
    joint: &JointPmf<T>,
    params: &TypicalityParams<T>,
) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    let (nu, nv) = (joint.input_len(), joint.output_len());
    let mut counts = vec![0usize; nu * nv];
    if u.len() != params.n {
        return Err(Error::LengthMismatch {
            expected: params.n,
            found: u.len(),
        });
    }
    for (&a, &b) in u.iter().zip(v) {
        if a >= nu {
            return Err(Error::SymbolOutOfRange {
                symbol: a,
                alphabet: nu,
            });
        }
        if b >= nv {
            return Err(Error::SymbolOutOfRange {
                symbol: b,
                alphabet: nv,
            });
        }
        counts[a * nv + b] += 1;
    }
    Ok(counts_typical(&counts, joint.entries(), params))
}

/// Exact probability that an i.i.d. draw from `p` of length `params.n` lands
/// in the typical set, computed by enumerating empirical types.
pub fn typical_mass<T: Real>(p: &Pmf<T>, params: &TypicalityParams<T>) -> Result<T> {
    let k = p.len();
    let n = params.n;
    check_type_budget(n, k)?;
    let ln_fact = ln_factorials::<T>(n);
    let ln_p: Vec<T> = p
        .probs()
        .iter()
        .map(|&pi| if pi > T::zero() { pi.ln() } else { T::zero() })
        .collect();
    let mut mass = T::zero();
    let mut counts = vec![0usize; k];
    for_each_composition(n, k, &mut counts, 0, &mut |counts| {
        if !counts_typical(counts, p.probs(), params) {
            return;
        }
        // Typicality forbids positive counts off the support, so every term
        // below has a well-defined log probability.
        let mut ln_term = ln_fact[n];
        for (a, &c) in counts.iter().enumerate() {
            if c > 0 {
                ln_term = ln_term - ln_fact[c] + T::of_usize(c) * ln_p[a];
            }
        }
        mass += ln_term.exp();
    });
    Ok(mass)
}

/// Smallest positive probabilities of the output marginal and of the joint
/// table, the constants that drive the atypicality tail bounds.
pub fn mu_constants<T: Real>(joint: &JointPmf<T>) -> (T, T) {
    (
        joint.output_marginal().min_support_prob(),
        joint.min_support_prob(),
    )
}

fn count_symbols(x: &[usize], alphabet: usize, n: usize) -> Result<Vec<usize>> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let mut counts = vec![0usize; alphabet];
    for &s in x {
        if s >= alphabet {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet,
            });
        }
        counts[s] += 1;
    }
    Ok(counts)
}

fn counts_typical<T: Real>(counts: &[usize], probs: &[T], params: &TypicalityParams<T>) -> bool {
    let n = T::of_usize(params.n);
    counts.iter().zip(probs).all(|(&c, &pa)| {
        let dev = (T::of_usize(c) / n - pa).abs();
        dev <= params.epsilon * pa
    })
}

/// Natural logarithms of factorials up to `n` inclusive.
pub(crate) fn ln_factorials<T: Real>(n: usize) -> Vec<T> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    table.push(acc);
    for i in 1..=n {
        acc += T::of_usize(i).ln();
        table.push(acc);
    }
    table
}

/// Visits every way to split `total` among `counts.len()` cells, ascending in
/// the first cell, recursing on the rest. Deterministic order.
pub(crate) fn for_each_composition<F: FnMut(&[usize])>(
    total: usize,
    cells: usize,
    counts: &mut Vec<usize>,
    at: usize,
    visit: &mut F,
) {
    debug_assert_eq!(counts.len(), cells);
    if at + 1 == cells {
        counts[at] = total;
        visit(counts);
        return;
    }
    for c in 0..=total {
        counts[at] = c;
        for_each_composition(total - c, cells, counts, at + 1, visit);
    }
}

/// Number of compositions of `n` into `k` cells, refused beyond the dense
/// state cap.
pub(crate) fn check_type_budget(n: usize, k: usize) -> Result<()> {
    let mut types: u128 = 1;
    // C(n + k - 1, k - 1) built incrementally; exact because each prefix
    // product of binomial updates divides evenly.
    for i in 0..(k - 1) as u128 {
        types = types.saturating_mul(n as u128 + i + 1) / (i + 1);
        if types > STATE_CAP {
            return Err(Error::CapacityExceeded {
                states: types,
                cap: STATE_CAP,
            });
        }
    }
    Ok(())
}
