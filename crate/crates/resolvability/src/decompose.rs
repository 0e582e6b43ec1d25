//! Typical/atypical decomposition of the classical upper bound on the
//! ensemble-average divergence.
//!
//! The bound integrand for a uniformly addressed codebook is
//! `log2(Q^n(v^n | u^n) / (M Q_V^n(v^n)) + 1)`, averaged over the product
//! joint; for a biased bit-stream address it is
//! `log2(P(w) Q^n(v^n | u^n) / Q_V^n(v^n) + 1)`, averaged also over the
//! message. Splitting the average by typicality gives
//!
//! - `d1`: typical message (when applicable) and jointly typical pair,
//! - `d2`: typical message, atypical pair,
//! - `d3`: atypical message, any pair (zero for uniform messages).
//!
//! Each term comes with a closed-form ceiling: `d1_bound` decays
//! exponentially once the rate clears the mutual information plus the
//! typicality slack, and `d2_bound`/`d3_bound` pay a Hoeffding tail times
//! the worst-case integrand. The decomposition bounds the expected
//! divergence; it does not equal it, and for an input-ignoring channel the
//! gap is the whole value.
//!
//! Exact terms are computed by enumerating joint empirical types (the
//! integrand is constant on a type), so they are exact, not sampled, at a
//! cost capped by the dense-state budget.

use crate::engine::MessageSource;
use crate::error::{Error, Result};
use crate::prob::{binary_entropy, entropy, mutual_information, JointPmf};
use crate::scalar::Real;
use crate::typicality::{check_type_budget, for_each_composition, ln_factorials, mu_constants, TypicalityParams};

/// Closed-form ceilings for the three decomposition terms.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTerms<T: Real = f64> {
    pub d1_bound: T,
    pub d2_bound: T,
    pub d3_bound: T,
    /// Typicality slack `eps * (2 H(V) + R h(p))` inside the `d1` exponent;
    /// present only for bit-stream sources.
    pub delta_eps: Option<T>,
}

/// Exact decomposition terms next to their closed-form ceilings.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceDecomposition<T: Real = f64> {
    pub d1: T,
    pub d2: T,
    /// Atypical-message term; exactly zero for uniform messages.
    pub d3: T,
    /// `d1 + d2 + d3`, an upper bound on the expected divergence.
    pub total: T,
    pub d1_bound: T,
    pub d2_bound: T,
    pub d3_bound: T,
    pub delta_eps: Option<T>,
}

/// Closed-form bound terms only; never capped, usable at any blocklength.
pub fn divergence_bound_terms<T: Real>(
    joint: &JointPmf<T>,
    n: usize,
    epsilon: T,
    source: &MessageSource<T>,
) -> Result<BoundTerms<T>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "blocklength",
            value: 0.0,
            range: "n >= 1",
        });
    }
    if !(epsilon.is_finite() && epsilon >= T::zero()) {
        return Err(Error::OutOfRange {
            what: "epsilon",
            value: epsilon.to_f64().unwrap_or(f64::NAN),
            range: "[0, inf)",
        });
    }
    let i = mutual_information(joint);
    let h_v = entropy(&joint.output_marginal());
    let (mu_v, mu_uv) = mu_constants(joint);
    let rate = source.rate(n);
    let nf = T::of_usize(n);
    let log2_e = T::of(std::f64::consts::LOG2_E);
    let two = T::of(2.0);

    let (d1_bound, d3_bound, delta_eps) = match source {
        MessageSource::Uniform { .. } => {
            let exponent = rate - i - two * epsilon * h_v;
            (log2_e * (-nf * exponent).exp2(), T::zero(), None)
        }
        MessageSource::BitStream { bits, p } => {
            let h_p = binary_entropy(*p).expect("bias validated at construction");
            let delta = epsilon * (two * h_v + rate * h_p);
            let exponent = rate * h_p - i - delta;
            let d1 = log2_e * (-nf * exponent).exp2();
            // Hoeffding tail over the actual bit count, times the largest
            // value the integrand can take on the support.
            let b = T::of(f64::from(*bits));
            let tail = T::of(4.0) * (-two * b * epsilon * epsilon * *p * *p).exp();
            let sup = log2_exp2_plus_one(nf * (T::one() / mu_v).log2());
            (d1, tail * sup, Some(delta))
        }
    };
    let cells = T::of_usize(joint.input_len() * joint.output_len());
    let tail = two * cells * (-two * nf * epsilon * epsilon * mu_uv * mu_uv).exp();
    let d2_bound = tail * nf * (T::one() / mu_v + T::one()).log2();
    Ok(BoundTerms {
        d1_bound,
        d2_bound,
        d3_bound,
        delta_eps,
    })
}

/// Exact decomposition terms by joint-type enumeration, with the closed-form
/// ceilings attached. Errors with [`Error::CapacityExceeded`] when the type
/// budget is too large for exact terms; the bounds alone are always
/// available through [`divergence_bound_terms`].
pub fn decompose_divergence_bound<T: Real>(
    joint: &JointPmf<T>,
    n: usize,
    epsilon: T,
    source: &MessageSource<T>,
) -> Result<DivergenceDecomposition<T>> {
    let bounds = divergence_bound_terms(joint, n, epsilon, source)?;
    let nu = joint.input_len();
    let nv = joint.output_len();
    let cells = nu * nv;
    check_type_budget(n, cells)?;
    let params = TypicalityParams::new(epsilon, n)?;

    let q_v = joint.output_marginal();
    // Cells off the support are skipped before these logs are read.
    let ln_joint: Vec<T> = joint.entries().iter().map(|&x| x.ln()).collect();
    let mut log2_cond = vec![T::zero(); cells];
    let marg_u = joint.input_marginal();
    for u in 0..nu {
        for v in 0..nv {
            let juv = joint.prob(u, v);
            if juv > T::zero() {
                log2_cond[u * nv + v] = (juv / marg_u.prob(u)).log2();
            }
        }
    }
    let log2_out: Vec<T> = q_v
        .probs()
        .iter()
        .map(|&x| if x > T::zero() { x.log2() } else { T::zero() })
        .collect();
    let ln_fact = ln_factorials::<T>(n);

    // Messages grouped by their zero-bit count z: weight p^z q^(b-z), class
    // size C(b, z), typical when z/b sits within the band around p.
    let message_classes: Vec<(T, T, bool)> = match source {
        MessageSource::Uniform { messages } => {
            let m_log2 = T::of_usize(*messages).log2();
            vec![(T::one(), -m_log2, true)]
        }
        MessageSource::BitStream { bits, p } => {
            let b = *bits as usize;
            let q = T::one() - *p;
            let ln_fact_b = ln_factorials::<T>(b);
            let bf = T::of_usize(b);
            (0..=b)
                .map(|z| {
                    let zf = T::of_usize(z);
                    let ones = T::of_usize(b - z);
                    let class = (ln_fact_b[b] - ln_fact_b[z] - ln_fact_b[b - z]
                        + zf * p.ln()
                        + ones * q.ln())
                    .exp();
                    let weight_log2 = zf * p.log2() + ones * q.log2();
                    let typical = (zf / bf - *p).abs() <= epsilon * *p
                        && (ones / bf - q).abs() <= epsilon * q;
                    (class, weight_log2, typical)
                })
                .collect()
        }
    };

    let mut d1 = T::zero();
    let mut d2 = T::zero();
    let mut d3 = T::zero();
    let mut counts = vec![0usize; cells];
    for_each_composition(n, cells, &mut counts, 0, &mut |counts| {
        let mut ln_prob = ln_fact[n];
        let mut ratio_log2 = T::zero();
        let mut v_counts = vec![0usize; nv];
        for (cell, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if joint.entries()[cell] <= T::zero() {
                return;
            }
            let cf = T::of_usize(c);
            ln_prob = ln_prob - ln_fact[c] + cf * ln_joint[cell];
            ratio_log2 += cf * log2_cond[cell];
            v_counts[cell % nv] += c;
        }
        for (v, &c) in v_counts.iter().enumerate() {
            if c > 0 {
                ratio_log2 -= T::of_usize(c) * log2_out[v];
            }
        }
        let type_prob = ln_prob.exp();
        let pair_typical = {
            let nf = T::of_usize(n);
            counts
                .iter()
                .zip(joint.entries())
                .all(|(&c, &j)| (T::of_usize(c) / nf - j).abs() <= params.epsilon() * j)
        };
        for &(class_prob, weight_log2, message_typical) in &message_classes {
            let term = class_prob * type_prob * log2_exp2_plus_one(weight_log2 + ratio_log2);
            if !message_typical {
                d3 += term;
            } else if pair_typical {
                d1 += term;
            } else {
                d2 += term;
            }
        }
    });

    Ok(DivergenceDecomposition {
        d1,
        d2,
        d3,
        total: d1 + d2 + d3,
        d1_bound: bounds.d1_bound,
        d2_bound: bounds.d2_bound,
        d3_bound: bounds.d3_bound,
        delta_eps: bounds.delta_eps,
    })
}

/// `log2(2^x + 1)`, stable for any sign and magnitude of `x`.
fn log2_exp2_plus_one<T: Real>(x: T) -> T {
    let ln2 = T::of(std::f64::consts::LN_2);
    if x > T::zero() {
        x + (-x).exp2().ln_1p() / ln2
    } else {
        x.exp2().ln_1p() / ln2
    }
}
