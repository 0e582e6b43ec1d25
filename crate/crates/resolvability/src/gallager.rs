//! Exponent curves for the expected divergence of random codebooks.
//!
//! `e0_single_letter` evaluates, in bits,
//! `E0(rho) = log2 sum_v (sum_u Q_U(u) W(v|u)^(1/(1+rho)))^(1+rho)` for
//! `rho` in `[-1/2, 0]`; it is convex, vanishes at zero, and its one-sided
//! derivative at zero is minus the mutual information. Its blocklength
//! counterpart replaces the inner average by the ensemble average of the
//! induced output law raised to `1/(1+rho)`.
//!
//! Minimizing `E0(rho) + rho R` over the interval gives the rate-`R`
//! exponent: negative exactly when `R` exceeds the mutual information, in
//! which case `log2(1 + 2^(n E_G))` caps the blocklength curve and, after
//! dividing by `-rho`, the expected divergence itself.

use crate::engine::MessageSource;
use crate::ensemble::e0_blocklength_accumulate;
use crate::error::{Error, Result};
use crate::prob::{ChannelMatrix, JointPmf, Pmf};
use crate::scalar::Real;

/// Seed grid resolution for the exponent line search.
const SEED_POINTS: usize = 64;

/// Left end of the admissible exponent parameter interval.
fn rho_floor<T: Real>() -> T {
    T::of(-0.5)
}

fn check_rho<T: Real>(rho: T, allow_zero: bool) -> Result<()> {
    let ok = rho >= rho_floor::<T>() && (if allow_zero { rho <= T::zero() } else { rho < T::zero() });
    if !ok {
        return Err(Error::OutOfRange {
            what: "rho",
            value: rho.to_f64().unwrap_or(f64::NAN),
            range: if allow_zero { "[-1/2, 0]" } else { "[-1/2, 0)" },
        });
    }
    Ok(())
}

/// Single-letter exponent `E0(rho)` in bits for `rho` in `[-1/2, 0]`.
pub fn e0_single_letter<T: Real>(rho: T, joint: &JointPmf<T>) -> Result<T> {
    check_rho(rho, true)?;
    let q_u = joint.input_marginal();
    let inv = T::one() / (T::one() + rho);
    let one_plus = T::one() + rho;
    let mut outer = T::zero();
    for v in 0..joint.output_len() {
        let mut inner = T::zero();
        for u in 0..joint.input_len() {
            let pu = q_u.prob(u);
            if pu > T::zero() {
                let cond = joint.prob(u, v) / pu;
                if cond > T::zero() {
                    inner += pu * cond.powf(inv);
                }
            }
        }
        if inner > T::zero() {
            outer += inner.powf(one_plus);
        }
    }
    Ok(outer.log2())
}

/// Blocklength-`n` exponent of the codebook ensemble at one `rho`.
pub fn e0_blocklength<T: Real>(
    rho: T,
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    n: usize,
    source: &MessageSource<T>,
) -> Result<T> {
    check_rho(rho, true)?;
    Ok(e0_blocklength_accumulate(q_u, w, n, source, &[rho])?[0])
}

/// Blocklength exponent on a whole grid in one ensemble sweep.
pub fn e0_blocklength_grid<T: Real>(
    rhos: &[T],
    q_u: &Pmf<T>,
    w: &ChannelMatrix<T>,
    n: usize,
    source: &MessageSource<T>,
) -> Result<Vec<T>> {
    for &rho in rhos {
        check_rho(rho, true)?;
    }
    e0_blocklength_accumulate(q_u, w, n, source, rhos)
}

/// Rate exponent and the parameter that attains it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GallagerExponent<T: Real = f64> {
    /// `inf (E0(rho) + rho R)` over `[-1/2, 0)`, clamped to zero when no
    /// negative parameter helps. Negative exactly when the rate exceeds the
    /// mutual information.
    pub e_g: T,
    /// Attaining parameter; zero when the infimum is the clamp.
    pub rho_star: T,
}

/// Minimizes `E0(rho) + rho R` over the admissible interval via a seeded
/// golden-section search. The objective is convex, so the seed grid only
/// needs to bracket the minimum.
pub fn gallager_exponent<T: Real>(rate: T, joint: &JointPmf<T>) -> Result<GallagerExponent<T>> {
    if !(rate.is_finite() && rate >= T::zero()) {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate.to_f64().unwrap_or(f64::NAN),
            range: "[0, inf)",
        });
    }
    let objective = |rho: T| e0_single_letter(rho, joint).expect("rho kept in domain") + rho * rate;
    let lo = rho_floor::<T>();
    let hi = -T::of(1e-9);
    let step = (hi - lo) / T::of_usize(SEED_POINTS - 1);
    let mut best = (objective(lo), lo, 0usize);
    for i in 1..SEED_POINTS {
        let rho = lo + step * T::of_usize(i);
        let val = objective(rho);
        if val < best.0 {
            best = (val, rho, i);
        }
    }
    let a = if best.2 == 0 { lo } else { lo + step * T::of_usize(best.2 - 1) };
    let b = if best.2 + 1 == SEED_POINTS {
        hi
    } else {
        lo + step * T::of_usize(best.2 + 1)
    };
    let (rho_star, value) = golden_min(a, b, &objective);
    if value < T::zero() {
        Ok(GallagerExponent {
            e_g: value,
            rho_star,
        })
    } else {
        // Below the threshold rate the objective is positive on the whole
        // interval and its infimum is the limit at zero.
        Ok(GallagerExponent {
            e_g: T::zero(),
            rho_star: T::zero(),
        })
    }
}

/// Closed-form cap `log2(1 + 2^(n E_G(R)))` on the blocklength-`n` exponent
/// of a rate-`R` ensemble, valid wherever the rate exponent's minimizer sits
/// at the left end of the interval; see the curve checks in the tests.
pub fn e0_blocklength_bound<T: Real>(rate: T, joint: &JointPmf<T>, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "blocklength",
            value: 0.0,
            range: "n >= 1",
        });
    }
    let e_g = gallager_exponent(rate, joint)?.e_g;
    let x = T::of_usize(n) * e_g;
    // log2(1 + 2^x) for x <= 0, stable as x heads far negative.
    Ok(x.exp2().ln_1p() / T::of(std::f64::consts::LN_2))
}

/// Upper bound `log2(1 + 2^(n E_G(R))) / (-rho)` on the expected divergence,
/// for any `rho` in `[-1/2, 0)`.
pub fn divergence_bound_via_exponent<T: Real>(
    rate: T,
    joint: &JointPmf<T>,
    n: usize,
    rho: T,
) -> Result<T> {
    check_rho(rho, false)?;
    Ok(e0_blocklength_bound(rate, joint, n)? / -rho)
}

/// Sampled exponent diagram: the single-letter curve, the blocklength curve
/// of a concrete ensemble, and the chord `-rho * E[D]` whose slope is the
/// exact expected divergence.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentCurve<T: Real = f64> {
    /// Strictly increasing grid from -1/2 to 0 inclusive.
    pub rho: Vec<T>,
    pub single_letter: Vec<T>,
    pub blocklength: Vec<T>,
    pub chord: Vec<T>,
}

/// Evaluates all three curves on an even grid of `points >= 2` parameters.
/// The ensemble is derived from the joint: codewords drawn from the input
/// marginal, divergence measured against the output marginal.
pub fn exponent_curve<T: Real>(
    joint: &JointPmf<T>,
    n: usize,
    source: &MessageSource<T>,
    points: usize,
) -> Result<ExponentCurve<T>> {
    if points < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points,
        });
    }
    let lo = rho_floor::<T>();
    let step = -lo / T::of_usize(points - 1);
    let rho: Vec<T> = (0..points)
        .map(|i| {
            if i + 1 == points {
                T::zero()
            } else {
                lo + step * T::of_usize(i)
            }
        })
        .collect();
    let q_u = joint.input_marginal();
    let w = joint.conditional();
    let q_v = joint.output_marginal();
    let single_letter = rho
        .iter()
        .map(|&r| e0_single_letter(r, joint))
        .collect::<Result<Vec<_>>>()?;
    let blocklength = e0_blocklength_grid(&rho, &q_u, &w, n, source)?;
    let expected = crate::ensemble::exact_expected_divergence(&q_u, &w, &q_v, n, source)?;
    let chord = rho.iter().map(|&r| -r * expected).collect();
    Ok(ExponentCurve {
        rho,
        single_letter,
        blocklength,
        chord,
    })
}

/// Golden-section minimum of a convex function on `[a, b]`.
fn golden_min<T: Real>(mut a: T, mut b: T, f: &impl Fn(T) -> T) -> (T, T) {
    let ratio = T::of(0.618_033_988_749_894_9);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > T::SEARCH_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    let mid = (a + b) / T::of(2.0);
    (mid, f(mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::exact_expected_divergence;
    use crate::prob::{joint_from, mutual_information};

    fn bsc_joint(flip: f64) -> JointPmf {
        joint_from(
            &Pmf::uniform(2).unwrap(),
            &ChannelMatrix::binary_symmetric(flip).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_letter_frozen_values() {
        // Independent high-precision references for the BSC(0.1) ensemble.
        let j = bsc_joint(0.1);
        assert!((e0_single_letter(-0.5, &j).unwrap() - 0.35684790742167949).abs() < 1e-13);
        assert!((e0_single_letter(-0.25, &j).unwrap() - 0.15430403303258627).abs() < 1e-13);
        assert!(e0_single_letter(0.0, &j).unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_letter_domain() {
        let j = bsc_joint(0.1);
        assert!(e0_single_letter(-0.6, &j).is_err());
        assert!(e0_single_letter(0.1, &j).is_err());
        assert!(e0_single_letter(-0.5, &j).is_ok());
    }

    #[test]
    fn input_ignoring_channel_has_flat_exponent() {
        let row = Pmf::new(vec![0.3f64, 0.7]).unwrap();
        let w = ChannelMatrix::input_ignoring(2, &row).unwrap();
        let j = joint_from(&Pmf::uniform(2).unwrap(), &w).unwrap();
        for &rho in &[-0.5, -0.3, -0.1, 0.0] {
            assert!(e0_single_letter(rho, &j).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_at_zero_is_minus_mutual_information() {
        // One-sided three-point stencil at 0 using E0(0) = 0.
        let j = bsc_joint(0.1);
        let h = 1e-4;
        let f1 = e0_single_letter(-h, &j).unwrap();
        let f2 = e0_single_letter(-2.0 * h, &j).unwrap();
        let deriv = (f2 - 4.0 * f1) / (2.0 * h);
        let i = mutual_information(&j);
        assert!((deriv + i).abs() / i < 1e-3, "deriv = {deriv}");
    }

    #[test]
    fn single_letter_is_convex_on_a_grid() {
        let j = bsc_joint(0.1);
        let vals: Vec<f64> = (0..21)
            .map(|k| e0_single_letter(-0.5 + 0.025 * k as f64, &j).unwrap())
            .collect();
        for w in vals.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-10);
        }
    }

    #[test]
    fn blocklength_frozen_values() {
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = ChannelMatrix::binary_symmetric(0.1).unwrap();
        let src = MessageSource::uniform(2).unwrap();
        let v = e0_blocklength(-0.3, &q, &w, 2, &src).unwrap();
        assert!((v - 0.22637827058133647).abs() < 1e-12);
        let v = e0_blocklength(-0.5, &q, &w, 2, &src).unwrap();
        assert!((v - 0.44173220905116123).abs() < 1e-12);
        assert!(e0_blocklength(0.0, &q, &w, 2, &src).unwrap().abs() < 1e-12);
    }

    #[test]
    fn exponent_clamps_below_the_threshold_rate() {
        let j = bsc_joint(0.1);
        let i = mutual_information(&j);
        let g = gallager_exponent(i - 0.1, &j).unwrap();
        assert_eq!(g.e_g, 0.0);
        assert_eq!(g.rho_star, 0.0);
        let g = gallager_exponent(0.0, &j).unwrap();
        assert_eq!(g.e_g, 0.0);
    }

    #[test]
    fn exponent_frozen_values_above_threshold() {
        let j = bsc_joint(0.1);
        let i = mutual_information(&j);
        let g = gallager_exponent(i + 0.3, &j).unwrap();
        assert!((g.e_g - -0.062456409950376233).abs() < 1e-8);
        assert!((g.rho_star - -0.39982386550155558).abs() < 1e-5);
        // At rate 1 the minimizer sits at the interval's left end.
        let g = gallager_exponent(1.0, &j).unwrap();
        assert!((g.e_g - -0.14315209257832051).abs() < 1e-9);
        assert!((g.rho_star - -0.5).abs() < 1e-7);
    }

    #[test]
    fn exponent_is_negative_exactly_above_the_mutual_information() {
        let j = bsc_joint(0.1);
        let i = mutual_information(&j);
        assert_eq!(gallager_exponent(i - 1e-3, &j).unwrap().e_g, 0.0);
        assert!(gallager_exponent(i + 1e-3, &j).unwrap().e_g < 0.0);
    }

    #[test]
    fn blocklength_bound_examples() {
        let j = bsc_joint(0.1);
        let i = mutual_information(&j);
        // Zero exponent: the cap is exactly one bit.
        assert_eq!(e0_blocklength_bound(i - 0.1, &j, 5).unwrap(), 1.0);
        // Deep in the achievable region the cap matches its first-order
        // expansion log2(e) * 2^(n E_G).
        let e_g = gallager_exponent(1.0, &j).unwrap().e_g;
        let cap = e0_blocklength_bound(1.0, &j, 80).unwrap();
        let approx = std::f64::consts::LOG2_E * (80.0 * e_g).exp2();
        assert!((cap - approx).abs() / approx < 1e-3);
    }

    #[test]
    fn blocklength_curve_stays_under_the_cap_at_endpoint_rates() {
        // Rate 1 on BSC(0.1): the rate exponent's minimizer is the left
        // endpoint, where the per-parameter cap binds the whole grid.
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = ChannelMatrix::binary_symmetric(0.1).unwrap();
        let j = joint_from(&q, &w).unwrap();
        for n in 1..=3 {
            let src = MessageSource::uniform(1 << n).unwrap();
            let cap = e0_blocklength_bound(1.0, &j, n).unwrap();
            let rhos: Vec<f64> = (0..21).map(|k| -0.5 + 0.025 * k as f64).collect();
            let vals = e0_blocklength_grid(&rhos, &q, &w, n, &src).unwrap();
            for (rho, v) in rhos.iter().zip(&vals) {
                assert!(*v <= cap + 1e-9, "n={n} rho={rho}: {v} > {cap}");
            }
        }
    }

    #[test]
    fn chord_bounds_the_expected_divergence() {
        let q = Pmf::<f64>::uniform(2).unwrap();
        let w = ChannelMatrix::binary_symmetric(0.1).unwrap();
        let j = joint_from(&q, &w).unwrap();
        let t = Pmf::uniform(2).unwrap();
        for n in 1..=3 {
            let src = MessageSource::uniform(1 << n).unwrap();
            let d = exact_expected_divergence(&q, &w, &t, n, &src).unwrap();
            // Convexity of the blocklength exponent turns any rho into a
            // bound E[D] <= E0_n(rho) / (-rho).
            for &rho in &[-0.5, -0.25, -0.1] {
                let e0n = e0_blocklength(rho, &q, &w, n, &src).unwrap();
                assert!(d <= e0n / -rho + 1e-9, "n={n} rho={rho}");
            }
            let bound = divergence_bound_via_exponent(1.0, &j, n, -0.5).unwrap();
            assert!(d <= bound + 1e-9, "n={n}: {d} > {bound}");
        }
    }

    #[test]
    fn divergence_bound_shrinks_with_blocklength() {
        let j = bsc_joint(0.1);
        let b10 = divergence_bound_via_exponent(1.0, &j, 10, -0.5).unwrap();
        let b50 = divergence_bound_via_exponent(1.0, &j, 50, -0.5).unwrap();
        assert!(b50 < b10);
        assert!(divergence_bound_via_exponent(1.0, &j, 10, 0.0).is_err());
    }

    #[test]
    fn curve_grid_shape_and_zero_endpoint() {
        let j = bsc_joint(0.1);
        let src = MessageSource::uniform(4).unwrap();
        let curve = exponent_curve(&j, 2, &src, 11).unwrap();
        assert_eq!(curve.rho.len(), 11);
        assert_eq!(curve.rho[0], -0.5);
        assert_eq!(*curve.rho.last().unwrap(), 0.0);
        for pair in curve.rho.windows(2) {
            assert!(pair[1] > pair[0]);
        }
        assert!(curve.single_letter.last().unwrap().abs() < 1e-12);
        assert!(curve.blocklength.last().unwrap().abs() < 1e-12);
        assert!(curve.chord.last().unwrap().abs() < 1e-15);
        // Pointwise: blocklength curve dominates its chord.
        for (b, c) in curve.blocklength.iter().zip(&curve.chord) {
            assert!(b + 1e-9 >= *c);
        }
        assert!(exponent_curve(&j, 2, &src, 1).is_err());
    }
}
