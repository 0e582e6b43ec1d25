//! Exact ensemble averages, computed by visiting every codebook the random
//! coding distribution can produce.
//!
//! Uniformly addressed codebooks are exchangeable: permuting codewords does
//! not change the induced output law. Those ensembles are enumerated by
//! codeword multiset with multinomial weights, which collapses the `|U|^(nM)`
//! ordered assignments to one visit per type. Bit-stream sources weight each
//! message differently, so their ensembles are enumerated in message order.
//! Enumerations beyond [`ENUM_CAP`] codebooks are refused.

use crate::engine::MessageSource;
use crate::error::{Error, Result};
use crate::prob::{kl_slices, product_extension, ChannelMatrix, Pmf};
use crate::scalar::Real;
use crate::seq;
use crate::typicality::ln_factorials;

/// Cap on the number of codebooks an exact enumeration may visit.
pub(crate) const ENUM_CAP: u128 = 1_000_000;

/// Average divergence `E[D(P || Q_V^n)]` over the full codebook ensemble.
/// Infinite when some positive-probability codebook escapes the target's
/// support.
pub fn exact_expected_divergence<T: Real>(
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    q_v: &Pmf<T>,
    n: usize,
    source: &MessageSource<T>,
) -> Result<T> {
    if q_v.len() != w.output_len() {
        return Err(Error::LengthMismatch {
            expected: w.output_len(),
            found: q_v.len(),
        });
    }
    let target = product_extension(q_v, n)?;
    let mut acc = T::zero();
    for_each_codebook(q_u, w, n, source, false, &mut |prob, induced| {
        acc += prob * kl_slices(induced, target.probs());
    })?;
    Ok(acc)
}

/// Mutual information `I(C; V^n)` between the sampled codebook and the
/// channel output it induces, equal to the expected divergence from the
/// ensemble-average output law.
pub fn codebook_output_mutual_information<T: Real>(
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    n: usize,
    source: &MessageSource<T>,
) -> Result<T> {
    let vn = seq::state_count(w.output_len(), n)?;
    let mut average = vec![T::zero(); vn];
    for_each_codebook(q_u, w, n, source, false, &mut |prob, induced| {
        for (a, &x) in average.iter_mut().zip(induced) {
            *a += prob * x;
        }
    })?;
    let mut acc = T::zero();
    for_each_codebook(q_u, w, n, source, false, &mut |prob, induced| {
        // The average dominates each member entrywise, so this is finite.
        acc += prob * kl_slices(induced, &average);
    })?;
    Ok(acc)
}

/// Accumulates `log2 sum_v (E[induced(v)^(1/(1+rho))])^(1+rho)` for every
/// requested `rho` in one sweep of the ensemble.
pub(crate) fn e0_blocklength_accumulate<T: Real>(
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    n: usize,
    source: &MessageSource<T>,
    rhos: &[T],
) -> Result<Vec<T>> {
    let vn = seq::state_count(w.output_len(), n)?;
    let mut acc = vec![vec![T::zero(); vn]; rhos.len()];
    for_each_codebook(q_u, w, n, source, false, &mut |prob, induced| {
        for (r, &rho) in rhos.iter().enumerate() {
            let inv = T::one() / (T::one() + rho);
            let slot = &mut acc[r];
            for (a, &x) in slot.iter_mut().zip(induced) {
                if x > T::zero() {
                    *a += prob * x.powf(inv);
                }
            }
        }
    })?;
    Ok(rhos
        .iter()
        .zip(acc)
        .map(|(&rho, slot)| {
            let one_plus = T::one() + rho;
            slot.into_iter()
                .map(|a| if a > T::zero() { a.powf(one_plus) } else { T::zero() })
                .sum::<T>()
                .log2()
        })
        .collect())
}

/// Visits `(probability, induced output law)` for every codebook with
/// positive ensemble probability. `force_ordered` exists so tests can check
/// the multiset shortcut against plain message-by-message enumeration.
pub(crate) fn for_each_codebook<T: Real>(
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    n: usize,
    source: &MessageSource<T>,
    force_ordered: bool,
    visit: &mut dyn FnMut(T, &[T]),
) -> Result<()> {
    if q_u.len() != w.input_len() {
        return Err(Error::LengthMismatch {
            expected: w.input_len(),
            found: q_u.len(),
        });
    }
    let cells = seq::state_count(q_u.len(), n)?;
    let vn = seq::state_count(w.output_len(), n)?;
    let m = source.message_count();
    let use_multiset = matches!(source, MessageSource::Uniform { .. }) && !force_ordered;
    let codebooks = if use_multiset {
        binomial_saturating(cells as u128 + m as u128 - 1, m as u128)
    } else {
        (cells as u128).saturating_pow(m.min(u32::MAX as usize) as u32)
    };
    if codebooks > ENUM_CAP {
        return Err(Error::CapacityExceeded {
            states: codebooks,
            cap: ENUM_CAP,
        });
    }
    let table = (cells as u128).saturating_mul(vn as u128);
    if table > seq::STATE_CAP {
        return Err(Error::CapacityExceeded {
            states: table,
            cap: seq::STATE_CAP,
        });
    }

    // Per-word data shared by both enumeration orders.
    let mut word_prob = Vec::with_capacity(cells);
    let mut law = Vec::with_capacity(cells);
    let mut symbols = vec![0usize; n];
    let mut buf = Vec::new();
    for cell in 0..cells {
        seq::decode_into(cell, q_u.len(), &mut symbols);
        word_prob.push(symbols.iter().map(|&s| q_u.prob(s)).product::<T>());
        let mut row = vec![T::zero(); vn];
        crate::engine::accumulate_word_law(&symbols, T::one(), w, &mut buf, &mut row);
        law.push(row);
    }

    let mut induced = vec![T::zero(); vn];
    if use_multiset {
        let ln_fact = ln_factorials::<T>(m);
        let ln_word: Vec<T> = word_prob.iter().map(|&p| p.ln()).collect();
        let mut counts = vec![0usize; cells];
        multiset_rec(
            &law,
            &ln_word,
            &ln_fact,
            m,
            &mut counts,
            0,
            m,
            &mut induced,
            visit,
        );
    } else {
        let weights = source.weights();
        let mut choice = vec![0usize; m];
        ordered_rec(
            &law,
            &word_prob,
            &weights,
            &mut choice,
            0,
            T::one(),
            &mut induced,
            visit,
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn multiset_rec<T: Real>(
    law: &[Vec<T>],
    ln_word: &[T],
    ln_fact: &[T],
    m: usize,
    counts: &mut Vec<usize>,
    at: usize,
    remaining: usize,
    induced: &mut Vec<T>,
    visit: &mut dyn FnMut(T, &[T]),
) {
    let cells = law.len();
    if at + 1 == cells {
        counts[at] = remaining;
        if remaining > 0 && ln_word[at].is_infinite() {
            return;
        }
        emit_multiset(law, ln_word, ln_fact, m, counts, induced, visit);
        return;
    }
    for c in 0..=remaining {
        if c > 0 && ln_word[at].is_infinite() {
            break;
        }
        counts[at] = c;
        multiset_rec(
            law,
            ln_word,
            ln_fact,
            m,
            counts,
            at + 1,
            remaining - c,
            induced,
            visit,
        );
    }
}

fn emit_multiset<T: Real>(
    law: &[Vec<T>],
    ln_word: &[T],
    ln_fact: &[T],
    m: usize,
    counts: &[usize],
    induced: &mut Vec<T>,
    visit: &mut dyn FnMut(T, &[T]),
) {
    let mut ln_weight = ln_fact[m];
    for (cell, &c) in counts.iter().enumerate() {
        if c > 0 {
            ln_weight = ln_weight - ln_fact[c] + T::of_usize(c) * ln_word[cell];
        }
    }
    let weight = ln_weight.exp();
    induced.iter_mut().for_each(|x| *x = T::zero());
    let inv_m = T::one() / T::of_usize(m);
    for (cell, &c) in counts.iter().enumerate() {
        if c > 0 {
            let share = T::of_usize(c) * inv_m;
            for (slot, &x) in induced.iter_mut().zip(&law[cell]) {
                *slot += share * x;
            }
        }
    }
    visit(weight, induced);
}

#[allow(clippy::too_many_arguments)]
fn ordered_rec<T: Real>(
    law: &[Vec<T>],
    word_prob: &[T],
    weights: &[T],
    choice: &mut Vec<usize>,
    msg: usize,
    prob_so_far: T,
    induced: &mut Vec<T>,
    visit: &mut dyn FnMut(T, &[T]),
) {
    if msg == choice.len() {
        induced.iter_mut().for_each(|x| *x = T::zero());
        for (w_idx, &cell) in choice.iter().enumerate() {
            let share = weights[w_idx];
            for (slot, &x) in induced.iter_mut().zip(&law[cell]) {
                *slot += share * x;
            }
        }
        visit(prob_so_far, induced);
        return;
    }
    for cell in 0..law.len() {
        let p = word_prob[cell];
        if p > T::zero() {
            choice[msg] = cell;
            ordered_rec(
                law,
                word_prob,
                weights,
                choice,
                msg + 1,
                prob_so_far * p,
                induced,
                visit,
            );
        }
    }
}

/// `C(a, b)` with saturation; prefix products divide exactly.
fn binomial_saturating(a: u128, b: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=b {
        acc = acc.saturating_mul(a - b + i) / i;
    }
    acc
}
