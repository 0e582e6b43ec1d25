//! A worked end-to-end instance with closed-form answers: the systematic
//! (7,4) Hamming code driving a radius-1 ball channel.
//!
//! The channel maps a 7-bit word uniformly onto itself and its seven
//! single-bit corruptions. Because the code is perfect, those radius-1
//! balls tile the whole 128-word space, so addressing the 16 codewords
//! uniformly induces exactly the uniform output law. Every quantity here
//! is dyadic, which makes the pipeline's answers float-exact: deviation
//! and divergence are literally zero and the code input extracts exactly
//! 4 bits of mutual information.

use crate::engine::{induced_output_distribution, Codebook, MessageSource};
use crate::error::Result;
use crate::prob::{joint_from, kl_divergence, mutual_information, ChannelMatrix, Pmf};
use crate::scalar::Real;

/// Data plus parity bits per word.
pub const WORD_BITS: usize = 7;
/// Data bits per word.
pub const DATA_BITS: usize = 4;
/// Channel alphabet: all 7-bit words.
pub const ALPHABET: usize = 1 << WORD_BITS;
/// Number of codewords.
pub const CODE_SIZE: usize = 1 << DATA_BITS;

/// Packs a 4-bit message into its 7-bit codeword.
///
/// Bit layout is `[d1 d2 d3 d4 p1 p2 p3]` from the most significant bit,
/// with `p1 = d1^d2^d4`, `p2 = d1^d3^d4`, `p3 = d2^d3^d4`. The nibble's
/// own most significant bit is `d1`.
pub fn encode_nibble(nibble: usize) -> usize {
    assert!(nibble < CODE_SIZE, "nibble out of range: {nibble}");
    let d1 = nibble >> 3 & 1;
    let d2 = nibble >> 2 & 1;
    let d3 = nibble >> 1 & 1;
    let d4 = nibble & 1;
    let p1 = d1 ^ d2 ^ d4;
    let p2 = d1 ^ d3 ^ d4;
    let p3 = d2 ^ d3 ^ d4;
    d1 << 6 | d2 << 5 | d3 << 4 | d4 << 3 | p1 << 2 | p2 << 1 | p3
}

/// The 16 codewords as 7-bit symbol indices, ordered by message nibble.
pub fn codewords() -> Vec<usize> {
    (0..CODE_SIZE).map(encode_nibble).collect()
}

/// Uniform radius-1 ball channel on 7-bit words: each input goes to itself
/// or one of its seven single-bit flips, each with probability 1/8.
pub fn ball_channel<T: Real>() -> ChannelMatrix<T> {
    let eighth = T::of(0.125);
    let rows = (0..ALPHABET)
        .map(|u| {
            let mut row = vec![T::zero(); ALPHABET];
            row[u] = eighth;
            for bit in 0..WORD_BITS {
                row[u ^ (1 << bit)] = eighth;
            }
            row
        })
        .collect();
    ChannelMatrix::new(rows).expect("rows hold exactly eight eighths")
}

/// Input law on the 128-word alphabet: uniform over the 16 codewords.
pub fn code_input<T: Real>() -> Pmf<T> {
    let sixteenth = T::of(0.0625);
    let mut probs = vec![T::zero(); ALPHABET];
    for cw in codewords() {
        probs[cw] = sixteenth;
    }
    Pmf::new(probs).expect("sixteen exact sixteenths")
}

/// The code as a blocklength-1 codebook over the 128-word alphabet.
pub fn codebook() -> Codebook {
    let words = codewords().into_iter().map(|cw| vec![cw]).collect();
    Codebook::new(1, ALPHABET, words).expect("codewords lie in the alphabet")
}

/// Exactness audit of the tiling: how far the induced law sits from uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCodeReport<T: Real = f64> {
    /// Output law induced by uniform messages over the code.
    pub induced: Pmf<T>,
    /// Largest absolute deviation from the uniform law; exactly zero.
    pub max_deviation: T,
    /// Divergence from the uniform law in bits; exactly zero.
    pub divergence_bits: T,
    /// Mutual information of the ball channel under the code input, in
    /// bits; exactly the 4 data bits.
    pub mutual_information_bits: T,
}

/// Runs the code through the generic induced-law pipeline and audits the
/// result against the closed-form answers.
pub fn ball_code_report<T: Real>() -> Result<BallCodeReport<T>> {
    let w = ball_channel::<T>();
    let source = MessageSource::uniform(CODE_SIZE)?;
    let induced = induced_output_distribution(&codebook(), &w, &source)?;
    let uniform = Pmf::uniform(ALPHABET)?;
    let max_deviation = induced
        .probs()
        .iter()
        .zip(uniform.probs())
        .map(|(&a, &b)| (a - b).abs())
        .fold(T::zero(), T::max);
    let divergence_bits = kl_divergence(&induced, &uniform)?;
    let mutual_information_bits = mutual_information(&joint_from(&code_input::<T>(), &w)?);
    Ok(BallCodeReport {
        induced,
        max_deviation,
        divergence_bits,
        mutual_information_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn distance(a: usize, b: usize) -> u32 {
        ((a ^ b) as u32).count_ones()
    }

    #[test]
    fn codewords_are_distinct_and_far_apart() {
        let cws = codewords();
        assert_eq!(cws.len(), 16);
        for (i, &a) in cws.iter().enumerate() {
            assert!(a < ALPHABET);
            for &b in &cws[..i] {
                assert!(distance(a, b) >= 3, "{a:07b} vs {b:07b}");
            }
        }
    }

    #[test]
    fn code_is_linear_with_minimum_weight_three() {
        let cws = codewords();
        for &a in &cws {
            for &b in &cws {
                assert!(cws.contains(&(a ^ b)));
            }
        }
        let min_weight = cws
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| (c as u32).count_ones())
            .min()
            .unwrap();
        assert_eq!(min_weight, 3);
    }

    #[test]
    fn parity_bits_satisfy_their_equations() {
        for nibble in 0..CODE_SIZE {
            let cw = encode_nibble(nibble);
            let bit = |i: usize| cw >> (6 - i) & 1;
            let (d1, d2, d3, d4) = (bit(0), bit(1), bit(2), bit(3));
            assert_eq!(bit(4), d1 ^ d2 ^ d4);
            assert_eq!(bit(5), d1 ^ d3 ^ d4);
            assert_eq!(bit(6), d2 ^ d3 ^ d4);
            // The data nibble is readable back off the codeword.
            assert_eq!(cw >> 3, nibble);
        }
    }

    #[test]
    fn radius_one_balls_tile_the_space() {
        let cws = codewords();
        for v in 0..ALPHABET {
            let covering = cws.iter().filter(|&&c| distance(c, v) <= 1).count();
            assert_eq!(covering, 1, "word {v:07b}");
        }
    }

    #[test]
    fn ball_rows_hold_eight_exact_eighths() {
        let w = ball_channel::<f64>();
        for u in 0..ALPHABET {
            let row = w.row(u);
            let mut hits = 0;
            for v in 0..ALPHABET {
                let p = row.prob(v);
                if distance(u, v) <= 1 {
                    assert_eq!(p, 0.125);
                    hits += 1;
                } else {
                    assert_eq!(p, 0.0);
                }
            }
            assert_eq!(hits, 8);
        }
    }

    #[test]
    fn perfect_tiling_is_float_exact() {
        let report = ball_code_report::<f64>().unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert_eq!(report.divergence_bits, 0.0);
        assert!((report.mutual_information_bits - 4.0).abs() < 1e-12);
        let target = 1.0 / 128.0;
        for v in 0..ALPHABET {
            assert_eq!(report.induced.prob(v), target);
        }
    }

    #[test]
    fn single_precision_report_is_exact_too() {
        let report = ball_code_report::<f32>().unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert_eq!(report.divergence_bits, 0.0);
        assert!((report.mutual_information_bits - 4.0).abs() < 1e-5);
    }
}
