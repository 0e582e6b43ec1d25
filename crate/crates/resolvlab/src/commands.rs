//! The five experiment commands, each turning a [`Plan`] into deterministic
//! CSV or JSON text. Errors carry the exit-code class the binary maps to.

use resolvability::engine::{
    achievability_threshold, codebook_output_mutual_information, divergence_bound_terms,
    exact_expected_divergence, monte_carlo_expected_divergence,
};
use resolvability::gallager::{e0_blocklength, e0_blocklength_bound, gallager_exponent};
use resolvability::hamming;
use resolvability::optimizer::{achievability_report, min_rate, Achievability};
use resolvability::prob::joint_from;
use resolvability::report::{certificate_json, experiment_csv, fmt_sig, ExperimentReport};
use resolvability::{Error, Pmf};

use crate::config::Plan;

/// Command failure, classed by the process exit code it should produce.
#[derive(Debug)]
pub enum CmdError {
    /// Invalid or inconsistent configuration: exit code 2.
    Config(String),
    /// A state-space or enumeration cap was exceeded: exit code 3.
    Cap(String),
    /// The target is not reachable through the channel: exit code 4.
    Infeasible(String),
}

impl CmdError {
    pub fn message(&self) -> &str {
        match self {
            Self::Config(m) | Self::Cap(m) | Self::Infeasible(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Cap(_) => 3,
            Self::Infeasible(_) => 4,
        }
    }
}

/// Wraps a library error with sweep-point context and classifies it.
fn classify(context: &str, err: Error) -> CmdError {
    let message = format!("{context}: {err}");
    match err {
        Error::CapacityExceeded { .. } => CmdError::Cap(message),
        Error::InfeasibleTarget { .. } => CmdError::Infeasible(message),
        _ => CmdError::Config(message),
    }
}

/// The input law the sweep drives the channel with: the configured one, or
/// the optimizer's argmin against the explicit target.
fn effective_input(plan: &Plan) -> Result<Pmf<f64>, CmdError> {
    if let Some(input) = plan.fixed_input() {
        return Ok(input.clone());
    }
    let target = plan
        .target
        .as_ref()
        .expect("resolve rejects optimize without a target");
    let cert =
        min_rate(&plan.channel, target).map_err(|e| classify("optimizing the input", e))?;
    Ok(cert.argmin_input)
}

/// Closed-form ceilings and thresholds, one row per sweep point.
pub fn cmd_bounds(plan: &Plan) -> Result<String, CmdError> {
    let input = effective_input(plan)?;
    let joint =
        joint_from(&input, &plan.channel).map_err(|e| classify("building the joint", e))?;
    let mut out = String::from(
        "n,M,R,source,p,epsilon,d1_bound,d2_bound,d3_bound,delta_eps,e_g,exponent_cap,threshold\n",
    );
    for point in &plan.points {
        let context = format!("sweep point n = {}", point.n);
        let n = point.n;
        let rate = point.source.rate(n);
        let bounds = divergence_bound_terms(&joint, n, plan.epsilon, &point.source)
            .map_err(|e| classify(&context, e))?;
        let exponent =
            gallager_exponent(rate, &joint).map_err(|e| classify(&context, e))?;
        let cap = e0_blocklength_bound(rate, &joint, n).map_err(|e| classify(&context, e))?;
        let threshold = achievability_threshold(&joint, &point.source);
        let (label, p_cell) = source_cells(&point.source);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            n,
            point.source.message_count(),
            fmt_sig(rate),
            label,
            p_cell,
            fmt_sig(plan.epsilon),
            fmt_sig(bounds.d1_bound),
            fmt_sig(bounds.d2_bound),
            fmt_sig(bounds.d3_bound),
            bounds.delta_eps.map(fmt_sig).unwrap_or_default(),
            fmt_sig(exponent.e_g),
            fmt_sig(cap),
            fmt_sig(threshold),
        ));
    }
    Ok(out)
}

/// Monte Carlo sweep: sampled expected divergence next to the ceilings.
pub fn cmd_simulate(plan: &Plan, seed: u64, trials: u64) -> Result<String, CmdError> {
    let input = effective_input(plan)?;
    let target = plan.target_for(&input);
    let joint =
        joint_from(&input, &plan.channel).map_err(|e| classify("building the joint", e))?;
    let mut rows = Vec::with_capacity(plan.points.len());
    for point in &plan.points {
        let context = format!("sweep point n = {}", point.n);
        let estimate = monte_carlo_expected_divergence(
            &input,
            &plan.channel,
            &target,
            point.n,
            &point.source,
            trials as usize,
            seed,
        )
        .map_err(|e| classify(&context, e))?;
        let bounds = divergence_bound_terms(&joint, point.n, plan.epsilon, &point.source)
            .map_err(|e| classify(&context, e))?;
        let threshold = achievability_threshold(&joint, &point.source);
        rows.push(ExperimentReport::new(
            point.n,
            &point.source,
            &estimate,
            &bounds,
            threshold,
            seed,
        ));
    }
    Ok(experiment_csv(&rows))
}

/// Exact ensemble averages by full codebook enumeration.
pub fn cmd_exact(plan: &Plan) -> Result<String, CmdError> {
    let input = effective_input(plan)?;
    let target = plan.target_for(&input);
    let mut out =
        String::from("n,M,R,source,p,exact_D,codebook_mi,e0_block_neg_half,e0_block_neg_quarter\n");
    for point in &plan.points {
        let context = format!("sweep point n = {}", point.n);
        let exact = exact_expected_divergence(
            &input,
            &plan.channel,
            &target,
            point.n,
            &point.source,
        )
        .map_err(|e| classify(&context, e))?;
        let mi = codebook_output_mutual_information(&input, &plan.channel, point.n, &point.source)
            .map_err(|e| classify(&context, e))?;
        let e0_half = e0_blocklength(-0.5, &input, &plan.channel, point.n, &point.source)
            .map_err(|e| classify(&context, e))?;
        let e0_quarter = e0_blocklength(-0.25, &input, &plan.channel, point.n, &point.source)
            .map_err(|e| classify(&context, e))?;
        let (label, p_cell) = source_cells(&point.source);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            point.n,
            point.source.message_count(),
            fmt_sig(point.source.rate(point.n)),
            label,
            p_cell,
            fmt_sig(exact),
            fmt_sig(mi),
            fmt_sig(e0_half),
            fmt_sig(e0_quarter),
        ));
    }
    Ok(out)
}

/// The perfect-code showcase; self-contained, no config.
pub fn cmd_hamming() -> String {
    let report = hamming::ball_code_report::<f64>().expect("fixed finite instance");
    let mut out = String::new();
    out.push_str(&format!("alphabet={}\n", hamming::ALPHABET));
    out.push_str(&format!("codewords={}\n", hamming::CODE_SIZE));
    out.push_str(&format!("max_deviation={}\n", fmt_sig(report.max_deviation)));
    out.push_str(&format!("divergence_bits={}\n", fmt_sig(report.divergence_bits)));
    out.push_str(&format!(
        "mutual_information_bits={}\n",
        fmt_sig(report.mutual_information_bits)
    ));
    out
}

/// Minimal-rate certificate with achievability verdicts as JSON.
pub fn cmd_optimize(plan: &Plan) -> Result<String, CmdError> {
    let target = match &plan.target {
        Some(t) => t.clone(),
        None => {
            let input = plan
                .fixed_input()
                .expect("resolve rejects optimize without a target");
            plan.target_for(input)
        }
    };
    let cert = min_rate(&plan.channel, &target)
        .map_err(|e| classify("certifying the target", e))?;
    let rates: Vec<f64> = if plan.rates.is_empty() {
        plan.points.iter().map(|p| p.source.rate(p.n)).collect()
    } else {
        plan.rates.clone()
    };
    let mut verdicts = Vec::with_capacity(rates.len());
    for rate in rates {
        let report = achievability_report(&plan.channel, &target, rate, &plan.scale_source)
            .map_err(|e| classify("issuing verdicts", e))?;
        let label = match report.verdict {
            Achievability::Achievable => "achievable",
            Achievability::Boundary => "boundary",
            Achievability::NotAchievable => "not_achievable",
        };
        verdicts.push(format!(
            "{{\"rate\":{},\"threshold\":{},\"margin\":{},\"verdict\":\"{}\"}}",
            fmt_sig(report.rate),
            fmt_sig(report.threshold),
            fmt_sig(report.margin),
            label,
        ));
    }
    // Splice the verdict array into the certificate object so the output
    // stays a single JSON document.
    let base = certificate_json(&cert);
    let mut out = base[..base.len() - 1].to_string();
    out.push_str(",\"verdicts\":[");
    out.push_str(&verdicts.join(","));
    out.push_str("]}\n");
    Ok(out)
}

fn source_cells(source: &resolvability::engine::MessageSource<f64>) -> (&'static str, String) {
    match source {
        resolvability::engine::MessageSource::Uniform { .. } => ("uniform", String::new()),
        resolvability::engine::MessageSource::BitStream { p, .. } => ("bitstream", fmt_sig(*p)),
    }
}
