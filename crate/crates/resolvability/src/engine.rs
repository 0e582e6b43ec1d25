//! Codebooks, message sources, induced output laws, and the Monte Carlo
//! driver for expected-divergence experiments.
//!
//! A codebook of `M` words of length `n`, addressed by a message `W`, induces
//! the output distribution `P(v^n) = sum_w P(w) prod_t W(v_t | u_t(w))`. The
//! engine materializes that distribution densely (the output state space is
//! capped at `2^24`), measures its divergence from a product target, and
//! estimates the ensemble average over independently resampled codebooks.
//!
//! Determinism: codebook sampling is a pure function of `(seed, stream)`;
//! trial `t` of the Monte Carlo driver uses stream `t`, and aggregation runs
//! in trial order after the parallel phase, so results are identical run to
//! run regardless of thread count. Draws happen in `f64` for every scalar
//! type, so `f32` and `f64` experiments see the same codebooks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prob::{kl_divergence, mutual_information, product_extension, ChannelMatrix, JointPmf, Pmf};
use crate::scalar::Real;
use crate::seq;

pub use crate::decompose::{decompose_divergence_bound, divergence_bound_terms, BoundTerms, DivergenceDecomposition};
pub use crate::ensemble::{codebook_output_mutual_information, exact_expected_divergence};

/// Bucket words densely only while the table stays this small.
const DENSE_BUCKET_CAP: u128 = 1 << 22;

/// A fixed list of `M` codewords of length `n` over a finite input alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    alphabet: usize,
    words: Vec<Vec<usize>>,
}

impl Codebook {
    /// Validates word lengths and symbol ranges.
    pub fn new(n: usize, alphabet: usize, words: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "blocklength",
                value: 0.0,
                range: "n >= 1",
            });
        }
        if words.is_empty() {
            return Err(Error::OutOfRange {
                what: "codebook size",
                value: 0.0,
                range: "M >= 1",
            });
        }
        for word in &words {
            if word.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: word.len(),
                });
            }
            for &s in word {
                if s >= alphabet {
                    return Err(Error::SymbolOutOfRange {
                        symbol: s,
                        alphabet,
                    });
                }
            }
        }
        Ok(Self { n, alphabet, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Number of codewords `M`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }
}

/// Distribution of the message addressing the codebook.
///
/// `Uniform` draws each of `M` messages equally often. `BitStream` addresses
/// `2^bits` messages by `bits` i.i.d. biased bits, where `p` is the
/// probability of a zero bit and message `w` spells its bits in binary, so
/// `P(w) = p^z(w) (1-p)^(bits-z(w))` with `z(w)` the number of zero bits.
#[derive(Debug, Clone, PartialEq)]
pub enum MessageSource<T: Real = f64> {
    Uniform { messages: usize },
    BitStream { bits: u32, p: T },
}

impl<T: Real> MessageSource<T> {
    /// Uniform messages over `{0, .., messages - 1}`.
    pub fn uniform(messages: usize) -> Result<Self> {
        if messages == 0 {
            return Err(Error::OutOfRange {
                what: "message count",
                value: 0.0,
                range: "M >= 1",
            });
        }
        Ok(Self::Uniform { messages })
    }

    /// Biased-bit source with `bits >= 1` and zero-bit probability
    /// `p` in `(0, 1/2]`.
    pub fn bit_stream(bits: u32, p: T) -> Result<Self> {
        if bits == 0 {
            return Err(Error::OutOfRange {
                what: "bit count",
                value: 0.0,
                range: "bits >= 1",
            });
        }
        if (1u128 << bits) > seq::STATE_CAP {
            return Err(Error::CapacityExceeded {
                states: 1u128 << bits,
                cap: seq::STATE_CAP,
            });
        }
        let half = T::of(0.5);
        if !(p > T::zero() && p <= half) {
            return Err(Error::OutOfRange {
                what: "bias",
                value: p.to_f64().unwrap_or(f64::NAN),
                range: "(0, 1/2]",
            });
        }
        Ok(Self::BitStream { bits, p })
    }

    /// Number of addressable messages `M`.
    pub fn message_count(&self) -> usize {
        match self {
            Self::Uniform { messages } => *messages,
            Self::BitStream { bits, .. } => 1usize << bits,
        }
    }

    /// Code rate `log2(M) / n` in bits per channel symbol.
    pub fn rate(&self, n: usize) -> T {
        debug_assert!(n > 0);
        let bits = match self {
            Self::Uniform { messages } => T::of_usize(*messages).log2(),
            Self::BitStream { bits, .. } => T::of(f64::from(*bits)),
        };
        bits / T::of_usize(n)
    }

    /// Message probabilities indexed by message.
    pub fn weights(&self) -> Vec<T> {
        match self {
            Self::Uniform { messages } => {
                vec![T::one() / T::of_usize(*messages); *messages]
            }
            Self::BitStream { bits, p } => {
                let b = *bits as usize;
                let q = T::one() - *p;
                // by_zeros[z] = p^z q^(b-z)
                let mut by_zeros = vec![T::zero(); b + 1];
                let mut qpow = T::one();
                for _ in 0..b {
                    qpow = qpow * q;
                }
                by_zeros[0] = qpow;
                for z in 1..=b {
                    by_zeros[z] = by_zeros[z - 1] * *p / q;
                }
                (0..1usize << b)
                    .map(|w| by_zeros[b - w.count_ones() as usize])
                    .collect()
            }
        }
    }
}

/// Mean, standard error, and the per-trial divergences behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate<T: Real = f64> {
    pub mean: T,
    pub stderr: T,
    pub samples: Vec<T>,
}

/// Draws `m` codewords of length `n` i.i.d. from `q_u`. Deterministic in the
/// seed; equals stream 0 of the Monte Carlo driver under the same seed.
pub fn sample_codebook<T: Real>(q_u: &Pmf<T>, n: usize, m: usize, seed: u64) -> Result<Codebook> {
    sample_codebook_stream(q_u, n, m, seed, 0)
}

pub(crate) fn sample_codebook_stream<T: Real>(
    q_u: &Pmf<T>,
    n: usize,
    m: usize,
    seed: u64,
    stream: u64,
) -> Result<Codebook> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "blocklength",
            value: 0.0,
            range: "n >= 1",
        });
    }
    if m == 0 {
        return Err(Error::OutOfRange {
            what: "codebook size",
            value: 0.0,
            range: "M >= 1",
        });
    }
    // Cumulative distribution in f64 so all scalar types draw identically.
    let mut cum = Vec::with_capacity(q_u.len());
    let mut acc = 0.0f64;
    for &p in q_u.probs() {
        acc += p.to_f64().unwrap_or(0.0);
        cum.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let words = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let x: f64 = rng.random();
                    // Inverse CDF; the final symbol absorbs cum rounding.
                    cum.iter().position(|&c| x < c).unwrap_or(q_u.len() - 1)
                })
                .collect()
        })
        .collect();
    Codebook::new(n, q_u.len(), words)
}

/// Output distribution over `v^n` induced by addressing `codebook` with
/// messages from `source` and sending each word through `w`.
pub fn induced_output_distribution<T: Real>(
    codebook: &Codebook,
    w: &ChannelMatrix<T>,
    source: &MessageSource<T>,
) -> Result<Pmf<T>> {
    let weights = source.weights();
    induced_with_weights(codebook, w, source, &weights)
}

pub(crate) fn induced_with_weights<T: Real>(
    codebook: &Codebook,
    w: &ChannelMatrix<T>,
    source: &MessageSource<T>,
    weights: &[T],
) -> Result<Pmf<T>> {
    if codebook.alphabet() != w.input_len() {
        return Err(Error::LengthMismatch {
            expected: w.input_len(),
            found: codebook.alphabet(),
        });
    }
    if source.message_count() != codebook.len() {
        return Err(Error::LengthMismatch {
            expected: codebook.len(),
            found: source.message_count(),
        });
    }
    let n = codebook.n();
    let nv = w.output_len();
    let vn = seq::state_count(nv, n)?;
    let mut out = vec![T::zero(); vn];
    let mut buf: Vec<T> = Vec::new();
    // Messages mapped to the same codeword share one channel law, so fold
    // their weights together before the Kronecker expansion.
    for (word, mass) in bucket_words(codebook, weights) {
        accumulate_word_law(&word, mass, w, &mut buf, &mut out);
    }
    Pmf::new(out)
}

/// Groups codeword weight by distinct word, deterministically ordered by the
/// word's lexicographic index.
fn bucket_words<T: Real>(codebook: &Codebook, weights: &[T]) -> Vec<(Vec<usize>, T)> {
    let k = codebook.alphabet();
    let n = codebook.n();
    let mut dense_states: u128 = 1;
    for _ in 0..n {
        dense_states = dense_states.saturating_mul(k as u128);
    }
    if dense_states <= DENSE_BUCKET_CAP {
        let mut bucket = vec![T::zero(); dense_states as usize];
        for (word, &mass) in codebook.words().iter().zip(weights) {
            bucket[seq::seq_to_index(word, k)] += mass;
        }
        bucket
            .into_iter()
            .enumerate()
            .filter(|&(_, mass)| mass > T::zero())
            .map(|(idx, mass)| (seq::index_to_seq(idx, k, n), mass))
            .collect()
    } else {
        let mut bucket: BTreeMap<&[usize], T> = BTreeMap::new();
        for (word, &mass) in codebook.words().iter().zip(weights) {
            *bucket.entry(word.as_slice()).or_insert_with(T::zero) += mass;
        }
        bucket
            .into_iter()
            .map(|(word, mass)| (word.to_vec(), mass))
            .collect()
    }
}

/// Adds `mass * prod_t W(v_t | word_t)` into `out` for every `v^n`.
pub(crate) fn accumulate_word_law<T: Real>(
    word: &[usize],
    mass: T,
    w: &ChannelMatrix<T>,
    buf: &mut Vec<T>,
    out: &mut [T],
) {
    let nv = w.output_len();
    buf.clear();
    buf.push(mass);
    for &u in &word[..word.len() - 1] {
        let row = w.row(u).probs();
        let mut next = Vec::with_capacity(buf.len() * nv);
        for &prefix in buf.iter() {
            for &r in row {
                next.push(prefix * r);
            }
        }
        *buf = next;
    }
    let last = w.row(word[word.len() - 1]).probs();
    for (i, &prefix) in buf.iter().enumerate() {
        let base = i * nv;
        for (j, &r) in last.iter().enumerate() {
            out[base + j] += prefix * r;
        }
    }
}

/// Divergence in bits between the induced output law of a concrete codebook
/// and the product extension of `q_v`. Infinite when the target's support
/// does not cover the induced law.
pub fn divergence_to_target<T: Real>(
    codebook: &Codebook,
    w: &ChannelMatrix<T>,
    source: &MessageSource<T>,
    q_v: &Pmf<T>,
) -> Result<T> {
    if q_v.len() != w.output_len() {
        return Err(Error::LengthMismatch {
            expected: w.output_len(),
            found: q_v.len(),
        });
    }
    let induced = induced_output_distribution(codebook, w, source)?;
    let target = product_extension(q_v, codebook.n())?;
    kl_divergence(&induced, &target)
}

/// Ensemble average of `D(P || Q_V^n)` over `trials` independently sampled
/// codebooks, reported with the standard error of the mean. A single trial
/// reports a standard error of zero. Any infinite sample aborts with
/// [`Error::InfiniteDivergence`] naming the first offending trial.
pub fn monte_carlo_expected_divergence<T: Real>(
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    q_v: &Pmf<T>,
    n: usize,
    source: &MessageSource<T>,
    trials: usize,
    seed: u64,
) -> Result<McEstimate<T>> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if q_u.len() != w.input_len() {
        return Err(Error::LengthMismatch {
            expected: w.input_len(),
            found: q_u.len(),
        });
    }
    if q_v.len() != w.output_len() {
        return Err(Error::LengthMismatch {
            expected: w.output_len(),
            found: q_v.len(),
        });
    }
    let target = product_extension(q_v, n)?;
    let m = source.message_count();
    let weights = source.weights();
    let outcomes: Vec<Result<T>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let codebook = sample_codebook_stream(q_u, n, m, seed, trial)?;
            let induced = induced_with_weights(&codebook, w, source, &weights)?;
            let d = kl_divergence(&induced, &target)?;
            if !d.is_finite() {
                return Err(Error::InfiniteDivergence { trial });
            }
            Ok(d)
        })
        .collect();
    // Scan in trial order so the reported error does not depend on thread
    // scheduling.
    let mut samples = Vec::with_capacity(trials);
    for outcome in outcomes {
        samples.push(outcome?);
    }
    let count = T::of_usize(trials);
    let mean = samples.iter().copied().sum::<T>() / count;
    let stderr = if trials == 1 {
        T::zero()
    } else {
        let var = samples
            .iter()
            .map(|&x| (x - mean) * (x - mean))
            .sum::<T>()
            / (count - T::one());
        (var / count).sqrt()
    };
    Ok(McEstimate {
        mean,
        stderr,
        samples,
    })
}

/// Rate above which the ensemble average divergence can be driven to zero:
/// the mutual information of the joint, rescaled by the entropy rate of the
/// message source per addressed bit.
pub fn achievability_threshold<T: Real>(joint: &JointPmf<T>, source: &MessageSource<T>) -> T {
    let i = mutual_information(joint);
    match source {
        MessageSource::Uniform { .. } => i,
        MessageSource::BitStream { p, .. } => {
            let h = crate::prob::binary_entropy(*p).expect("bias validated at construction");
            i / h
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{entropy, joint_from, output_marginal};

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::new(v.to_vec()).unwrap()
    }

    fn bsc(flip: f64) -> ChannelMatrix {
        ChannelMatrix::binary_symmetric(flip).unwrap()
    }

    #[test]
    fn codebook_validation() {
        assert!(Codebook::new(2, 2, vec![vec![0, 1], vec![1, 1]]).is_ok());
        assert!(matches!(
            Codebook::new(2, 2, vec![vec![0]]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Codebook::new(1, 2, vec![vec![2]]),
            Err(Error::SymbolOutOfRange { .. })
        ));
        assert!(Codebook::new(1, 2, vec![]).is_err());
        assert!(Codebook::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn source_validation() {
        assert!(MessageSource::<f64>::uniform(0).is_err());
        assert!(MessageSource::<f64>::bit_stream(0, 0.3).is_err());
        assert!(MessageSource::<f64>::bit_stream(4, 0.0).is_err());
        assert!(MessageSource::<f64>::bit_stream(4, 0.6).is_err());
        assert!(MessageSource::<f64>::bit_stream(4, 0.5).is_ok());
        assert!(matches!(
            MessageSource::<f64>::bit_stream(25, 0.3),
            Err(Error::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn rates_are_exact_for_powers_of_two() {
        let src = MessageSource::<f64>::uniform(8).unwrap();
        assert_eq!(src.rate(4), 0.75);
        let src = MessageSource::<f64>::bit_stream(3, 0.5).unwrap();
        assert_eq!(src.rate(4), 0.75);
        assert_eq!(src.message_count(), 8);
    }

    #[test]
    fn bit_stream_weights_count_zero_bits() {
        let p = 0.3f64;
        let src = MessageSource::bit_stream(3, p).unwrap();
        let w = src.weights();
        assert_eq!(w.len(), 8);
        // Message 0 spells three zero bits, message 7 three one bits.
        assert!((w[0] - p.powi(3)).abs() < 1e-16);
        assert!((w[7] - (1.0 - p).powi(3)).abs() < 1e-16);
        assert!((w[5] - p * (1.0 - p) * (1.0 - p)).abs() < 1e-16);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_biased_bits_are_exactly_uniform() {
        let bs = MessageSource::<f64>::bit_stream(5, 0.5).unwrap();
        let un = MessageSource::<f64>::uniform(32).unwrap();
        assert_eq!(bs.weights(), un.weights());
    }

    #[test]
    fn sampling_is_deterministic_and_alphabet_valid() {
        let q = pmf(&[0.2, 0.5, 0.3]);
        let a = sample_codebook(&q, 5, 7, 99).unwrap();
        let b = sample_codebook(&q, 5, 7, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_codebook(&q, 5, 7, 100).unwrap();
        assert_ne!(a, c);
        assert!(a.words().iter().flatten().all(|&s| s < 3));
    }

    #[test]
    fn sampling_respects_point_mass() {
        let q = pmf(&[0.0, 1.0, 0.0]);
        let cb = sample_codebook(&q, 4, 6, 1).unwrap();
        assert!(cb.words().iter().flatten().all(|&s| s == 1));
    }

    #[test]
    fn sampling_frequencies_match_the_law() {
        // 10^5 symbol draws; each count stays within three binomial sigmas.
        let q = pmf(&[0.3, 0.7]);
        let cb = sample_codebook(&q, 10, 10_000, 2024).unwrap();
        let zeros = cb.words().iter().flatten().filter(|&&s| s == 0).count();
        let mean = 1e5 * 0.3;
        let sigma = (1e5_f64 * 0.3 * 0.7).sqrt();
        assert!(
            (zeros as f64 - mean).abs() < 3.0 * sigma,
            "zeros = {zeros}"
        );
    }

    #[test]
    fn single_word_induces_its_own_law() {
        let w = bsc(0.1);
        let cb = Codebook::new(2, 2, vec![vec![0, 1]]).unwrap();
        let src = MessageSource::uniform(1).unwrap();
        let induced = induced_output_distribution(&cb, &w, &src).unwrap();
        let expect = [0.9 * 0.1, 0.9 * 0.9, 0.1 * 0.1, 0.1 * 0.9];
        for (a, b) in induced.probs().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn repeated_words_fold_into_one_bucket() {
        let w = bsc(0.2);
        let cb = Codebook::new(1, 2, vec![vec![0], vec![0], vec![1], vec![0]]).unwrap();
        let src = MessageSource::uniform(4).unwrap();
        let induced = induced_output_distribution(&cb, &w, &src).unwrap();
        // 3/4 weight on word 0, 1/4 on word 1.
        assert!((induced.prob(0) - (0.75 * 0.8 + 0.25 * 0.2)).abs() < 1e-15);
    }

    #[test]
    fn input_ignoring_channel_induces_the_product_target() {
        let row = pmf(&[0.3, 0.7]);
        let w = ChannelMatrix::input_ignoring(2, &row).unwrap();
        let cb = sample_codebook(&Pmf::<f64>::uniform(2).unwrap(), 3, 5, 5).unwrap();
        let src = MessageSource::uniform(5).unwrap();
        let d = divergence_to_target(&cb, &w, &src, &row).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn divergence_examples() {
        // One identity-channel word against a uniform binary target: the
        // induced law is a point mass, one bit away.
        let w = ChannelMatrix::<f64>::identity(2).unwrap();
        let cb = Codebook::new(1, 2, vec![vec![0]]).unwrap();
        let src = MessageSource::uniform(1).unwrap();
        let d = divergence_to_target(&cb, &w, &src, &Pmf::uniform(2).unwrap()).unwrap();
        assert_eq!(d, 1.0);
        // Target missing the induced support: infinite, not an error.
        let bad_target = pmf(&[0.0, 1.0]);
        let d = divergence_to_target(&cb, &w, &src, &bad_target).unwrap();
        assert_eq!(d, f64::INFINITY);
    }

    #[test]
    fn bit_stream_half_matches_uniform_bit_for_bit() {
        let q = pmf(&[0.4, 0.6]);
        let w = bsc(0.1);
        let cb = sample_codebook(&q, 6, 16, 42).unwrap();
        let uni = induced_output_distribution(&cb, &w, &MessageSource::uniform(16).unwrap())
            .unwrap();
        let bs = induced_output_distribution(
            &cb,
            &w,
            &MessageSource::bit_stream(4, 0.5).unwrap(),
        )
        .unwrap();
        assert_eq!(uni.probs(), bs.probs());
    }

    #[test]
    fn monte_carlo_matches_deterministic_instances() {
        // The input-ignoring channel induces the target exactly, so every
        // sample is zero.
        let row = pmf(&[0.3, 0.7]);
        let w = ChannelMatrix::input_ignoring(2, &row).unwrap();
        let src = MessageSource::uniform(4).unwrap();
        let est = monte_carlo_expected_divergence(
            &Pmf::uniform(2).unwrap(),
            &w,
            &row,
            3,
            &src,
            50,
            7,
        )
        .unwrap();
        assert!(est.mean.abs() < 1e-12);
        assert!(est.stderr.abs() < 1e-12);
        assert_eq!(est.samples.len(), 50);

        // M = 1 over the identity channel: every codebook is one point mass,
        // always exactly one bit from the uniform target.
        let w = ChannelMatrix::<f64>::identity(2).unwrap();
        let est = monte_carlo_expected_divergence(
            &Pmf::uniform(2).unwrap(),
            &w,
            &Pmf::uniform(2).unwrap(),
            1,
            &MessageSource::uniform(1).unwrap(),
            20,
            3,
        )
        .unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_stream_indexed() {
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = bsc(0.1);
        let src = MessageSource::uniform(4).unwrap();
        let a = monte_carlo_expected_divergence(&q, &w, &Pmf::uniform(2).unwrap(), 2, &src, 30, 11)
            .unwrap();
        let b = monte_carlo_expected_divergence(&q, &w, &Pmf::uniform(2).unwrap(), 2, &src, 30, 11)
            .unwrap();
        assert_eq!(a, b);
        // Trial 0 reuses the standalone sampler's stream.
        let cb = sample_codebook(&q, 2, 4, 11).unwrap();
        let d0 = divergence_to_target(&cb, &w, &src, &Pmf::uniform(2).unwrap()).unwrap();
        assert_eq!(a.samples[0], d0);
    }

    #[test]
    fn monte_carlo_shrinks_stderr_with_more_trials() {
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = bsc(0.1);
        let src = MessageSource::uniform(2).unwrap();
        let t = Pmf::uniform(2).unwrap();
        let small = monte_carlo_expected_divergence(&q, &w, &t, 2, &src, 400, 5).unwrap();
        let large = monte_carlo_expected_divergence(&q, &w, &t, 2, &src, 1600, 5).unwrap();
        let ratio = small.stderr / large.stderr;
        // Quadrupling the trials should halve the standard error, roughly.
        assert!((1.6..2.4).contains(&ratio), "ratio = {ratio}");
    }

    #[test]
    fn monte_carlo_error_paths() {
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = bsc(0.1);
        let src = MessageSource::uniform(2).unwrap();
        let t = Pmf::uniform(2).unwrap();
        assert!(matches!(
            monte_carlo_expected_divergence(&q, &w, &t, 2, &src, 0, 5),
            Err(Error::ZeroTrials)
        ));
        // A target that misses half the output space makes every trial
        // infinite; the first trial is reported.
        let bad = pmf(&[1.0, 0.0]);
        assert!(matches!(
            monte_carlo_expected_divergence(&q, &w, &bad, 2, &src, 8, 5),
            Err(Error::InfiniteDivergence { trial: 0 })
        ));
    }

    #[test]
    fn threshold_examples() {
        let j = joint_from(&Pmf::uniform(2).unwrap(), &bsc(0.1)).unwrap();
        let src = MessageSource::uniform(4).unwrap();
        let i = achievability_threshold(&j, &src);
        assert!((i - 0.53100440641071878).abs() < 1e-15);
        let src = MessageSource::bit_stream(4, 0.11).unwrap();
        let t = achievability_threshold(&j, &src);
        assert!((t - 1.0621873491703164).abs() < 1e-12);
        // Half-biased bits carry one bit each, so the threshold is the
        // mutual information itself.
        let src = MessageSource::bit_stream(4, 0.5).unwrap();
        assert_eq!(achievability_threshold(&j, &src), i);
    }

    #[test]
    fn induced_matches_output_marginal_for_exhaustive_codebook() {
        // A codebook listing each symbol once, uniformly addressed, induces
        // the single-letter output marginal.
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = bsc(0.15);
        let cb = Codebook::new(1, 2, vec![vec![0], vec![1]]).unwrap();
        let src = MessageSource::uniform(2).unwrap();
        let induced = induced_output_distribution(&cb, &w, &src).unwrap();
        let marg = output_marginal(&q, &w).unwrap();
        for (a, b) in induced.probs().iter().zip(marg.probs()) {
            assert!((a - b).abs() < 1e-15);
        }
        // Sanity: its entropy is the single-letter output entropy.
        assert!((entropy(&induced) - entropy(&marg)).abs() < 1e-15);
    }
}
