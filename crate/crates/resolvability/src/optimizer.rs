//! Minimal-rate certificates: the smallest mutual information over input
//! distributions that reproduce a target output exactly.
//!
//! The feasible set `{x >= 0, x W = Q_V}` is a polytope (unit mass is
//! implied by row stochasticity), and mutual information is concave in the
//! input, so its minimum sits at a vertex. Vertices are basic solutions:
//! pick at most `|V|` channel rows, solve the resulting square-ish system,
//! and keep the nonnegative consistent solutions. Input alphabets up to 12
//! symbols are enumerated exhaustively, which makes the certificate exact;
//! larger alphabets fall back to seeded random basis restarts with
//! single-swap descent and the certificate is then best-effort.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::MessageSource;
use crate::error::{Error, Result};
use crate::prob::{binary_entropy, joint_from, mutual_information, ChannelMatrix, Pmf};
use crate::scalar::Real;

/// Largest input alphabet that is vertex-enumerated exhaustively.
const EXHAUSTIVE_INPUT_LIMIT: usize = 12;
/// Random restarts for the large-alphabet fallback.
const RESTARTS: usize = 64;
/// Seed for the fallback's basis sampling; fixed so results are stable.
const FALLBACK_SEED: u64 = 0x27182818;

/// Proof object for the minimal achievable rate against a fixed target.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCertificate<T: Real = f64> {
    /// Smallest `I(X; V)` in bits among inputs reproducing the target.
    pub min_mutual_information: T,
    /// An input attaining it; reproduces the target within tolerance.
    pub argmin_input: Pmf<T>,
    pub feasible: bool,
    /// Positive entries of the argmin; never exceeds the output alphabet.
    pub support_size: usize,
}

/// Trichotomy of a rate against the certificate threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Achievability {
    Achievable,
    Boundary,
    NotAchievable,
}

/// Verdict for one rate, with the margin that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AchievabilityReport<T: Real = f64> {
    pub verdict: Achievability,
    pub rate: T,
    /// Rate threshold after rescaling for the message source's entropy per
    /// addressed bit.
    pub threshold: T,
    /// `rate - threshold`; the verdict is `Boundary` within
    /// [`Real::BOUNDARY_BAND`] of zero.
    pub margin: T,
    pub certificate: RateCertificate<T>,
}

/// Family of weights `alpha(n)` used to stress decay claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaFamily<T: Real = f64> {
    /// `alpha(n) = n^degree`.
    Polynomial { degree: u32 },
    /// `alpha(n) = exp(gamma * n)`.
    Exponential { gamma: T },
}

impl<T: Real> AlphaFamily<T> {
    fn eval(&self, n: usize) -> T {
        match self {
            Self::Polynomial { degree } => T::of_usize(n).powi(*degree as i32),
            Self::Exponential { gamma } => (*gamma * T::of_usize(n)).exp(),
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Polynomial { degree } => format!("n^{degree}"),
            Self::Exponential { gamma } => format!("exp({gamma}*n)"),
        }
    }
}

/// Least-squares fit of `log2 mean_D` against `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit<T: Real = f64> {
    /// Fitted decay exponent: `mean_D ~= c_hat * 2^(-beta_hat * n)`.
    pub beta_hat: T,
    pub c_hat: T,
    /// Root-mean-square residual of the fit in log2 space.
    pub residual: T,
    /// Human-readable form of the weight family the fit was checked against.
    pub alpha_family: String,
    /// Whether `alpha(n) * mean_D(n)` strictly decreases over the points.
    pub alpha_product_decreasing: bool,
}

enum SubsetOutcome<T: Real> {
    /// Full-length nonnegative solution and its reproduction residual.
    Solution(Vec<T>, T),
    /// System inconsistent or sign-infeasible; carries a violation size.
    Violation(T),
    /// Chosen columns are linearly dependent.
    Dependent,
}

/// Solves `x_S W_S = target` for the rows named by `subset`.
fn solve_subset<T: Real>(w: &ChannelMatrix<T>, subset: &[usize], target: &[T]) -> SubsetOutcome<T> {
    let rows = w.output_len();
    let cols = subset.len();
    // Augmented column-major system: a[r] holds the row over subset columns
    // plus the target entry.
    let mut a: Vec<Vec<T>> = (0..rows)
        .map(|r| {
            let mut row: Vec<T> = subset.iter().map(|&u| w.prob(u, r)).collect();
            row.push(target[r]);
            row
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(cols);
    let mut used = vec![false; rows];
    for c in 0..cols {
        let mut best = (T::zero(), usize::MAX);
        for (r, row) in a.iter().enumerate() {
            if !used[r] && row[c].abs() > best.0 {
                best = (row[c].abs(), r);
            }
        }
        if best.0 <= T::of(1e-12) {
            return SubsetOutcome::Dependent;
        }
        let p = best.1;
        used[p] = true;
        pivot_rows.push(p);
        let scale = a[p][c];
        for r in 0..rows {
            if r != p && a[r][c].abs() > T::zero() {
                let factor = a[r][c] / scale;
                for j in c..=cols {
                    let delta = factor * a[p][j];
                    a[r][j] = a[r][j] - delta;
                }
            }
        }
    }
    // Unpivoted rows now have zero coefficients; any remaining right-hand
    // side is inconsistency.
    let mut violation = T::zero();
    for (r, row) in a.iter().enumerate() {
        if !used[r] {
            violation = violation.max(row[cols].abs());
        }
    }
    if violation > T::FEAS_TOL {
        return SubsetOutcome::Violation(violation);
    }
    let mut x = vec![T::zero(); w.input_len()];
    let mut worst_negative = T::zero();
    for (c, &p) in pivot_rows.iter().enumerate() {
        let val = a[p][cols] / a[p][c];
        if val < -T::FEAS_TOL {
            worst_negative = worst_negative.max(-val);
        }
        x[subset[c]] = val.max(T::zero());
    }
    if worst_negative > T::zero() {
        return SubsetOutcome::Violation(worst_negative);
    }
    // Defense in depth: confirm the clamped solution reproduces the target.
    let mut residual = T::zero();
    for v in 0..rows {
        let mut acc = T::zero();
        for (c, &u) in subset.iter().enumerate() {
            acc += x[u] * w.prob(u, v);
            let _ = c;
        }
        residual = residual.max((acc - target[v]).abs());
    }
    if residual > T::FEAS_TOL {
        return SubsetOutcome::Violation(residual);
    }
    SubsetOutcome::Solution(x, residual)
}

fn check_dims<T: Real>(w: &ChannelMatrix<T>, q_v: &Pmf<T>) -> Result<()> {
    if q_v.len() != w.output_len() {
        return Err(Error::LengthMismatch {
            expected: w.output_len(),
            found: q_v.len(),
        });
    }
    Ok(())
}

fn subset_size<T: Real>(w: &ChannelMatrix<T>) -> usize {
    w.input_len().min(w.output_len())
}

/// Visits candidate vertices; returns the smallest violation seen when no
/// vertex exists.
fn collect_vertices<T: Real>(w: &ChannelMatrix<T>, q_v: &Pmf<T>) -> (Vec<Vec<T>>, T) {
    let nu = w.input_len();
    let max_size = subset_size(w);
    let mut vertices = Vec::new();
    let mut best_violation = T::infinity();
    let mut consider = |subset: &[usize], w: &ChannelMatrix<T>| match solve_subset(
        w,
        subset,
        q_v.probs(),
    ) {
        SubsetOutcome::Solution(x, _) => vertices.push(x),
        SubsetOutcome::Violation(v) => best_violation = best_violation.min(v),
        SubsetOutcome::Dependent => {}
    };
    if nu <= EXHAUSTIVE_INPUT_LIMIT {
        for mask in 1u32..(1 << nu) {
            if (mask.count_ones() as usize) > max_size {
                continue;
            }
            let subset: Vec<usize> = (0..nu).filter(|&u| mask >> u & 1 == 1).collect();
            consider(&subset, w);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(FALLBACK_SEED);
        for _ in 0..RESTARTS {
            let subset = rand::seq::index::sample(&mut rng, nu, max_size).into_vec();
            let mut subset: Vec<usize> = subset;
            subset.sort_unstable();
            consider(&subset, w);
        }
    }
    (vertices, best_violation)
}

fn information_of<T: Real>(x: &[T], w: &ChannelMatrix<T>) -> T {
    let input = Pmf::new(x.to_vec()).expect("vertex solutions carry unit mass");
    mutual_information(&joint_from(&input, w).expect("dimensions checked"))
}

fn lexicographically_smaller<T: Real>(a: &[T], b: &[T]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// One input reproducing the target, or `None` when the polytope is empty.
/// Exact for input alphabets within the exhaustive limit.
pub fn feasible_input<T: Real>(w: &ChannelMatrix<T>, q_v: &Pmf<T>) -> Result<Option<Pmf<T>>> {
    check_dims(w, q_v)?;
    let (vertices, _) = collect_vertices(w, q_v);
    Ok(vertices
        .into_iter()
        .next()
        .map(|x| Pmf::new(x).expect("vertex solutions carry unit mass")))
}

/// Exact minimal mutual information over the feasibility polytope, with the
/// attaining vertex. Errors with [`Error::InfeasibleTarget`] when no input
/// reproduces the target.
pub fn min_rate<T: Real>(w: &ChannelMatrix<T>, q_v: &Pmf<T>) -> Result<RateCertificate<T>> {
    check_dims(w, q_v)?;
    let (mut vertices, best_violation) = collect_vertices(w, q_v);
    if w.input_len() > EXHAUSTIVE_INPUT_LIMIT {
        descend_by_swaps(w, q_v, &mut vertices);
    }
    if vertices.is_empty() {
        return Err(Error::InfeasibleTarget {
            residual: if best_violation.is_finite() {
                best_violation.to_f64().unwrap_or(f64::NAN)
            } else {
                f64::NAN
            },
        });
    }
    let mut best: Option<(T, Vec<T>)> = None;
    for x in vertices {
        let i = information_of(&x, w);
        match &best {
            None => best = Some((i, x)),
            Some((bi, bx)) => {
                if i < *bi - T::TIE_TOL
                    || ((i - *bi).abs() <= T::TIE_TOL && lexicographically_smaller(&x, bx))
                {
                    best = Some((i, x));
                }
            }
        }
    }
    let (min_i, x) = best.expect("nonempty candidate set");
    let support_size = x.iter().filter(|&&p| p > T::zero()).count();
    Ok(RateCertificate {
        min_mutual_information: min_i,
        argmin_input: Pmf::new(x).expect("vertex solutions carry unit mass"),
        feasible: true,
        support_size,
    })
}

/// Single-swap local descent for the large-alphabet fallback: replace one
/// basis row at a time while the objective improves.
fn descend_by_swaps<T: Real>(w: &ChannelMatrix<T>, q_v: &Pmf<T>, vertices: &mut Vec<Vec<T>>) {
    let nu = w.input_len();
    let Some(mut current) = vertices
        .iter()
        .min_by(|a, b| {
            information_of(a, w)
                .partial_cmp(&information_of(b, w))
                .expect("finite information")
        })
        .cloned()
    else {
        return;
    };
    let mut current_i = information_of(&current, w);
    loop {
        let basis: Vec<usize> = (0..nu).filter(|&u| current[u] > T::zero()).collect();
        let mut improved = false;
        for &out in &basis {
            for candidate in 0..nu {
                if current[candidate] > T::zero() {
                    continue;
                }
                let mut subset: Vec<usize> = basis
                    .iter()
                    .copied()
                    .filter(|&u| u != out)
                    .chain(std::iter::once(candidate))
                    .collect();
                subset.sort_unstable();
                if let SubsetOutcome::Solution(x, _) = solve_subset(w, &subset, q_v.probs()) {
                    let i = information_of(&x, w);
                    if i < current_i - T::TIE_TOL {
                        current = x;
                        current_i = i;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    vertices.push(current);
}

/// Compares a rate against the certificate threshold, rescaled for the
/// message source, with a symmetric borderline band.
pub fn achievability_report<T: Real>(
    w: &ChannelMatrix<T>,
    q_v: &Pmf<T>,
    rate: T,
    source: &MessageSource<T>,
) -> Result<AchievabilityReport<T>> {
    if !(rate.is_finite() && rate >= T::zero()) {
        return Err(Error::OutOfRange {
            what: "rate",
            value: rate.to_f64().unwrap_or(f64::NAN),
            range: "[0, inf)",
        });
    }
    let certificate = min_rate(w, q_v)?;
    let threshold = match source {
        MessageSource::Uniform { .. } => certificate.min_mutual_information,
        MessageSource::BitStream { p, .. } => {
            certificate.min_mutual_information
                / binary_entropy(*p).expect("bias validated at construction")
        }
    };
    let margin = rate - threshold;
    let verdict = if margin > T::BOUNDARY_BAND {
        Achievability::Achievable
    } else if margin < -T::BOUNDARY_BAND {
        Achievability::NotAchievable
    } else {
        Achievability::Boundary
    };
    Ok(AchievabilityReport {
        verdict,
        rate,
        threshold,
        margin,
        certificate,
    })
}

/// Fits `log2 mean_D` linearly in `n` and evaluates whether
/// `alpha(n) * mean_D` strictly decreases. Points are `(n, mean_D)`.
pub fn fit_decay<T: Real>(points: &[(usize, T)], alpha: &AlphaFamily<T>) -> Result<DecayFit<T>> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    for (index, &(_, mean)) in points.iter().enumerate() {
        if !(mean > T::zero()) {
            return Err(Error::NonpositiveMean { index });
        }
    }
    let count = T::of_usize(points.len());
    let xs: Vec<T> = points.iter().map(|&(n, _)| T::of_usize(n)).collect();
    let ys: Vec<T> = points.iter().map(|&(_, m)| m.log2()).collect();
    let mean_x = xs.iter().copied().sum::<T>() / count;
    let mean_y = ys.iter().copied().sum::<T>() / count;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx <= T::zero() {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: 1,
        });
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut sq = T::zero();
    for (&x, &y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        sq += r * r;
    }
    let residual = (sq / count).sqrt();

    let mut ordered: Vec<(usize, T)> = points.to_vec();
    ordered.sort_by_key(|&(n, _)| n);
    let mut decreasing = true;
    for pair in ordered.windows(2) {
        let prev = alpha.eval(pair[0].0) * pair[0].1;
        let next = alpha.eval(pair[1].0) * pair[1].1;
        if next >= prev {
            decreasing = false;
        }
    }
    Ok(DecayFit {
        beta_hat: -slope,
        c_hat: intercept.exp2(),
        residual,
        alpha_family: alpha.label(),
        alpha_product_decreasing: decreasing,
    })
}
