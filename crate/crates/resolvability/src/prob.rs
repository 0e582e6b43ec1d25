//! Finite probability mass functions, channels, and joint distributions.
//!
//! All information quantities are measured in bits, so logarithms are base 2
//! throughout. Quantities of the form `p * log2(p / q)` are accumulated in
//! the log domain, one term per support point, which keeps sequence-level
//! distributions with entries near the subnormal range usable.
//!
//! Constructors validate and then renormalize their input, so downstream code
//! can assume every [`Pmf`] and [`JointPmf`] it receives carries unit mass.
//! Renormalization divides by the computed sum; when the sum is exactly one,
//! as for dyadic tables, entries pass through bit for bit.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::seq;

/// Probability mass function over `{0, .., k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf<T: Real = f64> {
    probs: Vec<T>,
}

impl<T: Real> Pmf<T> {
    /// Validates entries (finite, nonnegative up to tolerance, total mass
    /// within [`Real::MASS_TOL`] of one) and renormalizes.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        let probs = validate_mass(probs)?;
        Ok(Self { probs })
    }

    /// Wraps entries that are already normalized by construction, skipping
    /// the renormalizing division so exact products survive untouched.
    pub(crate) fn from_normalized(probs: Vec<T>) -> Self {
        debug_assert!(mass_error(&probs) <= T::MASS_TOL);
        Self { probs }
    }

    /// Uniform distribution over `k` symbols.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyDistribution);
        }
        let p = T::one() / T::of_usize(k);
        Ok(Self {
            probs: vec![p; k],
        })
    }

    /// Point mass on symbol `at` within an alphabet of `k` symbols.
    pub fn point(k: usize, at: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyDistribution);
        }
        if at >= k {
            return Err(Error::SymbolOutOfRange {
                symbol: at,
                alphabet: k,
            });
        }
        let mut probs = vec![T::zero(); k];
        probs[at] = T::one();
        Ok(Self { probs })
    }

    /// Alphabet size.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// True only for the degenerate empty case, which constructors reject.
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability of symbol `i`.
    pub fn prob(&self, i: usize) -> T {
        self.probs[i]
    }

    /// All probabilities, indexed by symbol.
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Symbols with strictly positive probability, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.probs[i] > T::zero()).collect()
    }

    /// Smallest probability on the support.
    pub fn min_support_prob(&self) -> T {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > T::zero())
            .fold(T::infinity(), T::min)
    }
}

/// Discrete memoryless channel: one output distribution per input symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T: Real = f64> {
    rows: Vec<Pmf<T>>,
}

impl<T: Real> ChannelMatrix<T> {
    /// Validates each row as a [`Pmf`] and checks the rows agree on the
    /// output alphabet.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(Pmf::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Assembles a channel from prevalidated rows of equal length.
    pub fn from_rows(rows: Vec<Pmf<T>>) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDistribution)?;
        let out = first.len();
        for row in &rows {
            if row.len() != out {
                return Err(Error::LengthMismatch {
                    expected: out,
                    found: row.len(),
                });
            }
        }
        Ok(Self { rows })
    }

    /// Noiseless channel on `k` symbols.
    pub fn identity(k: usize) -> Result<Self> {
        (0..k).map(|i| Pmf::point(k, i)).collect::<Result<Vec<_>>>().and_then(Self::from_rows)
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: T) -> Result<Self> {
        if !(flip >= T::zero() && flip <= T::one()) {
            return Err(Error::OutOfRange {
                what: "crossover probability",
                value: flip.to_f64().unwrap_or(f64::NAN),
                range: "[0, 1]",
            });
        }
        let keep = T::one() - flip;
        Self::new(vec![vec![keep, flip], vec![flip, keep]])
    }

    /// Channel that ignores its input: every row equals `row`.
    pub fn input_ignoring(inputs: usize, row: &Pmf<T>) -> Result<Self> {
        if inputs == 0 {
            return Err(Error::EmptyDistribution);
        }
        Self::from_rows(vec![row.clone(); inputs])
    }

    /// Input alphabet size.
    pub fn input_len(&self) -> usize {
        self.rows.len()
    }

    /// Output alphabet size.
    pub fn output_len(&self) -> usize {
        self.rows[0].len()
    }

    /// Output distribution for input symbol `u`.
    pub fn row(&self, u: usize) -> &Pmf<T> {
        &self.rows[u]
    }

    /// Transition probability of output `v` given input `u`.
    pub fn prob(&self, u: usize, v: usize) -> T {
        self.rows[u].prob(v)
    }
}

/// Joint distribution over an input/output pair, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T: Real = f64> {
    table: Vec<T>,
    inputs: usize,
    outputs: usize,
}

impl<T: Real> JointPmf<T> {
    /// Validates a rectangular table with total mass within
    /// [`Real::MASS_TOL`] of one, then renormalizes.
    pub fn new(table: Vec<Vec<T>>) -> Result<Self> {
        let inputs = table.len();
        let first = table.first().ok_or(Error::EmptyDistribution)?;
        let outputs = first.len();
        if outputs == 0 {
            return Err(Error::EmptyDistribution);
        }
        let mut flat = Vec::with_capacity(inputs * outputs);
        for row in &table {
            if row.len() != outputs {
                return Err(Error::LengthMismatch {
                    expected: outputs,
                    found: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        let flat = validate_mass(flat)?;
        Ok(Self {
            table: flat,
            inputs,
            outputs,
        })
    }

    pub(crate) fn from_normalized(table: Vec<T>, inputs: usize, outputs: usize) -> Self {
        debug_assert_eq!(table.len(), inputs * outputs);
        debug_assert!(mass_error(&table) <= T::MASS_TOL);
        Self {
            table,
            inputs,
            outputs,
        }
    }

    /// Input alphabet size.
    pub fn input_len(&self) -> usize {
        self.inputs
    }

    /// Output alphabet size.
    pub fn output_len(&self) -> usize {
        self.outputs
    }

    /// Joint probability of the pair `(u, v)`.
    pub fn prob(&self, u: usize, v: usize) -> T {
        self.table[u * self.outputs + v]
    }

    /// Flat row-major table, pair `(u, v)` at index `u * outputs + v`.
    pub fn entries(&self) -> &[T] {
        &self.table
    }

    /// Marginal distribution of the input coordinate.
    pub fn input_marginal(&self) -> Pmf<T> {
        let sums = (0..self.inputs)
            .map(|u| (0..self.outputs).map(|v| self.prob(u, v)).sum())
            .collect();
        Pmf::from_normalized(sums)
    }

    /// Marginal distribution of the output coordinate.
    pub fn output_marginal(&self) -> Pmf<T> {
        let mut sums = vec![T::zero(); self.outputs];
        for u in 0..self.inputs {
            for v in 0..self.outputs {
                sums[v] += self.prob(u, v);
            }
        }
        Pmf::from_normalized(sums)
    }

    /// Conditional channel of output given input. Inputs with zero marginal
    /// mass get a uniform row, an arbitrary but fixed convention; they never
    /// influence quantities weighted by this joint.
    pub fn conditional(&self) -> ChannelMatrix<T> {
        let marg = self.input_marginal();
        let rows = (0..self.inputs)
            .map(|u| {
                let mass = marg.prob(u);
                if mass > T::zero() {
                    Pmf::from_normalized(
                        (0..self.outputs).map(|v| self.prob(u, v) / mass).collect(),
                    )
                } else {
                    Pmf::uniform(self.outputs).expect("outputs >= 1")
                }
            })
            .collect();
        ChannelMatrix::from_rows(rows).expect("rows share the output alphabet")
    }

    /// Smallest probability on the joint support.
    pub fn min_support_prob(&self) -> T {
        self.table
            .iter()
            .copied()
            .filter(|&p| p > T::zero())
            .fold(T::infinity(), T::min)
    }
}

fn validate_mass<T: Real>(mut probs: Vec<T>) -> Result<Vec<T>> {
    if probs.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    for (index, p) in probs.iter_mut().enumerate() {
        if !p.is_finite() {
            return Err(Error::OutOfRange {
                what: "probability entry",
                value: p.to_f64().unwrap_or(f64::NAN),
                range: "[0, 1]",
            });
        }
        if *p < T::zero() {
            if *p < -T::MASS_TOL {
                return Err(Error::NegativeEntry {
                    index,
                    value: p.to_f64().unwrap_or(f64::NAN),
                });
            }
            *p = T::zero();
        }
    }
    let sum: T = probs.iter().copied().sum();
    if (sum - T::one()).abs() > T::MASS_TOL {
        return Err(Error::MassNotOne {
            sum: sum.to_f64().unwrap_or(f64::NAN),
        });
    }
    for p in probs.iter_mut() {
        *p = *p / sum;
    }
    Ok(probs)
}

fn mass_error<T: Real>(probs: &[T]) -> T {
    let sum: T = probs.iter().copied().sum();
    (sum - T::one()).abs()
}

/// Clamps float noise on quantities that are nonnegative by theory.
fn clamp_nonneg<T: Real>(x: T) -> T {
    if x < T::zero() {
        debug_assert!(x > -T::MASS_TOL, "nonnegative quantity came out {x}");
        T::zero()
    } else {
        x
    }
}

/// Shannon entropy of `p` in bits.
pub fn entropy<T: Real>(p: &Pmf<T>) -> T {
    let mut acc = T::zero();
    for &pi in p.probs() {
        if pi > T::zero() {
            acc -= pi * pi.log2();
        }
    }
    clamp_nonneg(acc)
}

/// Binary entropy `h(p)` in bits for `p` in `(0, 1/2]`.
pub fn binary_entropy<T: Real>(p: T) -> Result<T> {
    let half = T::of(0.5);
    if !(p > T::zero() && p <= half) {
        return Err(Error::OutOfRange {
            what: "bias",
            value: p.to_f64().unwrap_or(f64::NAN),
            range: "(0, 1/2]",
        });
    }
    let q = T::one() - p;
    Ok(-(p * p.log2()) - q * q.log2())
}

/// Mutual information of the pair described by `joint`, in bits.
pub fn mutual_information<T: Real>(joint: &JointPmf<T>) -> T {
    let qu = joint.input_marginal();
    let qv = joint.output_marginal();
    let mut acc = T::zero();
    for u in 0..joint.input_len() {
        for v in 0..joint.output_len() {
            let juv = joint.prob(u, v);
            if juv > T::zero() {
                acc += juv * (juv.log2() - qu.prob(u).log2() - qv.prob(v).log2());
            }
        }
    }
    clamp_nonneg(acc)
}

/// Unnormalized informational divergence `D(p || q)` in bits. Returns
/// positive infinity when the support of `p` escapes the support of `q`.
pub fn kl_divergence<T: Real>(p: &Pmf<T>, q: &Pmf<T>) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(kl_slices(p.probs(), q.probs()))
}

/// Divergence between raw normalized slices; shared with the enumeration
/// paths that never materialize `Pmf` values.
pub(crate) fn kl_slices<T: Real>(p: &[T], q: &[T]) -> T {
    debug_assert_eq!(p.len(), q.len());
    let mut acc = T::zero();
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > T::zero() {
            if qi <= T::zero() {
                return T::infinity();
            }
            acc += pi * (pi.log2() - qi.log2());
        }
    }
    clamp_nonneg(acc)
}

/// Total variation distance `sum_i |p_i - q_i|`, between 0 and 2.
pub fn total_variation<T: Real>(p: &Pmf<T>, q: &Pmf<T>) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(&pi, &qi)| (pi - qi).abs())
        .sum())
}

/// Output distribution of channel `w` driven by `input`.
pub fn output_marginal<T: Real>(input: &Pmf<T>, w: &ChannelMatrix<T>) -> Result<Pmf<T>> {
    if input.len() != w.input_len() {
        return Err(Error::LengthMismatch {
            expected: w.input_len(),
            found: input.len(),
        });
    }
    let mut out = vec![T::zero(); w.output_len()];
    for u in 0..w.input_len() {
        let pu = input.prob(u);
        if pu > T::zero() {
            for v in 0..w.output_len() {
                out[v] += pu * w.prob(u, v);
            }
        }
    }
    Ok(Pmf::from_normalized(out))
}

/// Joint distribution of `(input, channel output)`.
pub fn joint_from<T: Real>(input: &Pmf<T>, w: &ChannelMatrix<T>) -> Result<JointPmf<T>> {
    if input.len() != w.input_len() {
        return Err(Error::LengthMismatch {
            expected: w.input_len(),
            found: input.len(),
        });
    }
    let mut table = Vec::with_capacity(w.input_len() * w.output_len());
    for u in 0..w.input_len() {
        let pu = input.prob(u);
        for v in 0..w.output_len() {
            table.push(pu * w.prob(u, v));
        }
    }
    Ok(JointPmf::from_normalized(table, w.input_len(), w.output_len()))
}

/// The `n`-fold product distribution of `p` over sequences indexed
/// lexicographically, position 0 most significant. Refuses alphabets with
/// `k^n` beyond [`seq::STATE_CAP`].
pub fn product_extension<T: Real>(p: &Pmf<T>, n: usize) -> Result<Pmf<T>> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "blocklength",
            value: 0.0,
            range: "n >= 1",
        });
    }
    let k = p.len();
    let total = seq::state_count(k, n)?;
    let mut buf = Vec::with_capacity(total);
    buf.push(T::one());
    for _ in 0..n {
        let mut next = Vec::with_capacity(buf.len() * k);
        for &prefix in &buf {
            for &ps in p.probs() {
                next.push(prefix * ps);
            }
        }
        buf = next;
    }
    Ok(Pmf::from_normalized(buf))
}
