//! JSON experiment configuration: serde shapes plus resolution into
//! validated library objects.
//!
//! A config names a channel, an input law (or asks for the optimizer's),
//! a target law (or the input's own output marginal), a message source,
//! and a sweep over blocklengths paired with message counts or rates.
//! `resolve` turns the raw shapes into a [`Plan`] and is where every
//! cross-field consistency rule lives.

use resolvability::engine::MessageSource;
use resolvability::prob::output_marginal;
use resolvability::{ChannelMatrix, Pmf};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: ChannelSpec,
    pub input: InputSpec,
    #[serde(default)]
    pub target: TargetSpec,
    pub source: SourceSpec,
    pub sweep: SweepSpec,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Rates the optimize command issues verdicts for; defaults to the
    /// sweep's own rates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rates: Vec<f64>,
}

fn default_epsilon() -> f64 {
    0.1
}

fn default_trials() -> u64 {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub rows: Vec<Vec<f64>>,
}

/// Either explicit probabilities or the string `"optimize"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Fixed { probs: Vec<f64> },
    Keyword(String),
}

/// Either explicit probabilities or the string `"induced"` (the default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Fixed { probs: Vec<f64> },
    Keyword(String),
}

impl Default for TargetSpec {
    fn default() -> Self {
        Self::Keyword("induced".to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceSpec {
    Uniform,
    Bitstream { p: f64 },
}

/// Blocklengths zipped with message counts (or rates, exclusively).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<Vec<f64>>,
}

/// One resolved sweep entry.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub n: usize,
    pub source: MessageSource<f64>,
}

/// A fully validated experiment ready for the command layer.
#[derive(Debug, Clone)]
pub struct Plan {
    pub channel: ChannelMatrix<f64>,
    /// `None` means the optimizer's argmin supplies the input.
    pub input: Option<Pmf<f64>>,
    /// `None` means the input's own output marginal is the target.
    pub target: Option<Pmf<f64>>,
    pub points: Vec<SweepPoint>,
    /// Source shape used for threshold scaling, independent of sweep size.
    pub scale_source: MessageSource<f64>,
    pub epsilon: f64,
    pub trials: u64,
    pub seed: Option<u64>,
    pub rates: Vec<f64>,
}

impl Plan {
    /// The input distribution commands should drive the channel with, or
    /// `None` when the optimizer must pick it against an explicit target.
    pub fn fixed_input(&self) -> Option<&Pmf<f64>> {
        self.input.as_ref()
    }

    /// Target for a given input, falling back to the induced marginal.
    pub fn target_for(&self, input: &Pmf<f64>) -> Pmf<f64> {
        match &self.target {
            Some(t) => t.clone(),
            None => output_marginal(input, &self.channel).expect("dimensions checked in resolve"),
        }
    }
}

/// Parses a config from JSON text with line/column diagnostics.
pub fn parse(text: &str) -> Result<ExperimentConfig, String> {
    serde_json::from_str(text).map_err(|e| format!("config: {e}"))
}

/// Validates all cross-field rules and builds the runnable plan.
pub fn resolve(cfg: &ExperimentConfig) -> Result<Plan, String> {
    let channel = ChannelMatrix::new(cfg.channel.rows.clone())
        .map_err(|e| format!("config: channel: {e}"))?;

    let input = match &cfg.input {
        InputSpec::Fixed { probs } => {
            let pmf = Pmf::new(probs.clone()).map_err(|e| format!("config: input: {e}"))?;
            if pmf.len() != channel.input_len() {
                return Err(format!(
                    "config: input has {} entries but the channel takes {} symbols",
                    pmf.len(),
                    channel.input_len()
                ));
            }
            Some(pmf)
        }
        InputSpec::Keyword(word) if word == "optimize" => None,
        InputSpec::Keyword(word) => {
            return Err(format!(
                "config: input must be {{\"probs\": [...]}} or \"optimize\", got \"{word}\""
            ));
        }
    };

    let target = match &cfg.target {
        TargetSpec::Fixed { probs } => {
            let pmf = Pmf::new(probs.clone()).map_err(|e| format!("config: target: {e}"))?;
            if pmf.len() != channel.output_len() {
                return Err(format!(
                    "config: target has {} entries but the channel emits {} symbols",
                    pmf.len(),
                    channel.output_len()
                ));
            }
            Some(pmf)
        }
        TargetSpec::Keyword(word) if word == "induced" => None,
        TargetSpec::Keyword(word) => {
            return Err(format!(
                "config: target must be {{\"probs\": [...]}} or \"induced\", got \"{word}\""
            ));
        }
    };

    if input.is_none() && target.is_none() {
        return Err(
            "config: input \"optimize\" needs an explicit target to optimize against".to_string(),
        );
    }

    if cfg.sweep.n.is_empty() {
        return Err("config: sweep.n must be nonempty".to_string());
    }
    if cfg.sweep.n.iter().any(|&n| n == 0) {
        return Err("config: sweep.n entries must be >= 1".to_string());
    }
    let messages: Vec<u64> = match (&cfg.sweep.m, &cfg.sweep.rate) {
        (Some(_), Some(_)) => {
            return Err("config: sweep takes m or rate, not both".to_string());
        }
        (None, None) => {
            return Err("config: sweep needs an m or a rate list".to_string());
        }
        (Some(m), None) => {
            if m.len() != cfg.sweep.n.len() {
                return Err(format!(
                    "config: sweep.m has {} entries for {} blocklengths",
                    m.len(),
                    cfg.sweep.n.len()
                ));
            }
            if m.iter().any(|&m| m == 0) {
                return Err("config: sweep.m entries must be >= 1".to_string());
            }
            m.clone()
        }
        (None, Some(rates)) => {
            if rates.len() != cfg.sweep.n.len() {
                return Err(format!(
                    "config: sweep.rate has {} entries for {} blocklengths",
                    rates.len(),
                    cfg.sweep.n.len()
                ));
            }
            let mut out = Vec::with_capacity(rates.len());
            for (&n, &rate) in cfg.sweep.n.iter().zip(rates) {
                if !(rate.is_finite() && rate >= 0.0) {
                    return Err(format!("config: sweep.rate entry {rate} is not a valid rate"));
                }
                let exact = (n as f64 * rate).exp2();
                let rounded = exact.round();
                if (exact - rounded).abs() > 1e-6 * exact.max(1.0) || rounded < 1.0 {
                    return Err(format!(
                        "config: rate {rate} at n = {n} asks for 2^({n}*{rate}) messages, \
                         which is not a whole number"
                    ));
                }
                out.push(rounded as u64);
            }
            out
        }
    };

    let mut points = Vec::with_capacity(cfg.sweep.n.len());
    for (&n, &m) in cfg.sweep.n.iter().zip(&messages) {
        let source = match &cfg.source {
            SourceSpec::Uniform => MessageSource::uniform(m as usize)
                .map_err(|e| format!("config: sweep point n = {n}: {e}"))?,
            SourceSpec::Bitstream { p } => {
                if !m.is_power_of_two() {
                    return Err(format!(
                        "config: bitstream sources need power-of-two message counts, got {m}"
                    ));
                }
                MessageSource::bit_stream(m.trailing_zeros(), *p)
                    .map_err(|e| format!("config: sweep point n = {n}: {e}"))?
            }
        };
        points.push(SweepPoint { n, source });
    }

    let scale_source = match &cfg.source {
        SourceSpec::Uniform => MessageSource::uniform(2).expect("two messages are valid"),
        SourceSpec::Bitstream { p } => {
            MessageSource::bit_stream(1, *p).map_err(|e| format!("config: source: {e}"))?
        }
    };

    if !(cfg.epsilon.is_finite() && cfg.epsilon >= 0.0) {
        return Err(format!("config: epsilon {} must be >= 0", cfg.epsilon));
    }
    if cfg.trials == 0 {
        return Err("config: trials must be >= 1".to_string());
    }
    for &rate in &cfg.rates {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(format!("config: rates entry {rate} is not a valid rate"));
        }
    }

    Ok(Plan {
        channel,
        input,
        target,
        points,
        scale_source,
        epsilon: cfg.epsilon,
        trials: cfg.trials,
        seed: cfg.seed,
        rates: cfg.rates.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"{
        "channel": {"rows": [[0.9, 0.1], [0.1, 0.9]]},
        "input": {"probs": [0.5, 0.5]},
        "target": "induced",
        "source": {"kind": "bitstream", "p": 0.3},
        "sweep": {"n": [2, 4], "m": [4, 16]},
        "epsilon": 0.25,
        "trials": 50,
        "seed": 9,
        "rates": [0.4, 1.0]
    }"#;

    #[test]
    fn round_trip_is_identity() {
        let first = parse(FULL).unwrap();
        let text = serde_json::to_string(&first).unwrap();
        let second = parse(&text).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn defaults_fill_in() {
        let cfg = parse(
            r#"{
                "channel": {"rows": [[1.0, 0.0], [0.0, 1.0]]},
                "input": {"probs": [0.5, 0.5]},
                "source": {"kind": "uniform"},
                "sweep": {"n": [1], "m": [2]}
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.target, TargetSpec::Keyword("induced".to_string()));
        assert_eq!(cfg.epsilon, 0.1);
        assert_eq!(cfg.trials, 200);
        assert_eq!(cfg.seed, None);
        let plan = resolve(&cfg).unwrap();
        assert!(plan.target.is_none());
        assert_eq!(plan.points.len(), 1);
    }

    #[test]
    fn rate_sweeps_need_integral_message_counts() {
        let mut cfg = parse(FULL).unwrap();
        cfg.sweep.m = None;
        cfg.sweep.rate = Some(vec![1.0, 0.5]);
        let plan = resolve(&cfg).unwrap();
        assert_eq!(plan.points[0].source.message_count(), 4);
        assert_eq!(plan.points[1].source.message_count(), 4);

        cfg.sweep.rate = Some(vec![0.7, 0.5]);
        assert!(resolve(&cfg).unwrap_err().contains("whole number"));
    }

    #[test]
    fn sweep_shape_errors() {
        let mut cfg = parse(FULL).unwrap();
        cfg.sweep.rate = Some(vec![1.0, 1.0]);
        assert!(resolve(&cfg).unwrap_err().contains("not both"));
        cfg.sweep.m = None;
        cfg.sweep.rate = None;
        assert!(resolve(&cfg).unwrap_err().contains("m or a rate"));
        cfg.sweep.m = Some(vec![4]);
        assert!(resolve(&cfg).unwrap_err().contains("2 blocklengths"));
    }

    #[test]
    fn bitstream_needs_power_of_two_messages() {
        let mut cfg = parse(FULL).unwrap();
        cfg.sweep.m = Some(vec![4, 10]);
        assert!(resolve(&cfg).unwrap_err().contains("power-of-two"));
    }

    #[test]
    fn dimension_mismatches_are_named() {
        let mut cfg = parse(FULL).unwrap();
        cfg.input = InputSpec::Fixed {
            probs: vec![0.2, 0.3, 0.5],
        };
        assert!(resolve(&cfg).unwrap_err().contains("3 entries"));

        let mut cfg = parse(FULL).unwrap();
        cfg.target = TargetSpec::Fixed {
            probs: vec![0.2, 0.3, 0.5],
        };
        assert!(resolve(&cfg).unwrap_err().contains("3 entries"));
    }

    #[test]
    fn optimize_input_needs_explicit_target() {
        let mut cfg = parse(FULL).unwrap();
        cfg.input = InputSpec::Keyword("optimize".to_string());
        assert!(resolve(&cfg).unwrap_err().contains("explicit target"));
        cfg.target = TargetSpec::Fixed {
            probs: vec![0.5, 0.5],
        };
        let plan = resolve(&cfg).unwrap();
        assert!(plan.input.is_none());
        assert!(plan.target.is_some());
    }

    #[test]
    fn unknown_keywords_are_rejected() {
        let mut cfg = parse(FULL).unwrap();
        cfg.input = InputSpec::Keyword("uniformish".to_string());
        assert!(resolve(&cfg).unwrap_err().contains("uniformish"));
        let mut cfg = parse(FULL).unwrap();
        cfg.target = TargetSpec::Keyword("exact".to_string());
        assert!(resolve(&cfg).unwrap_err().contains("exact"));
    }

    #[test]
    fn unknown_fields_fail_parsing() {
        let err = parse(r#"{"channel": {"rows": [[1.0]]}, "inputs": {}}"#).unwrap_err();
        assert!(err.contains("inputs"));
    }
}
