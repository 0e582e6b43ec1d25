//! Plain-text rendering of experiment results: CSV tables and a small JSON
//! certificate. Formatting is deterministic so downstream diffs are stable.

use crate::decompose::BoundTerms;
use crate::engine::{McEstimate, MessageSource};
use crate::gallager::ExponentCurve;
use crate::optimizer::RateCertificate;

/// Header for [`experiment_csv`] rows.
pub const EXPERIMENT_HEADER: &str =
    "n,M,R,source,p,trials,mean_D,stderr_D,d1_bound,d2_bound,d3_bound,threshold,seed";

/// Header for [`curve_csv`] rows.
pub const CURVE_HEADER: &str = "rho,e0_single,e0_block_n,chord_value";

/// One sweep point: Monte Carlo estimate next to its closed-form ceilings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub n: usize,
    pub messages: u64,
    pub rate: f64,
    /// `"uniform"` or `"bitstream"`.
    pub source: String,
    /// Bit bias; `None` renders as an empty cell.
    pub p: Option<f64>,
    pub trials: u64,
    pub mean_d: f64,
    pub stderr_d: f64,
    pub d1_bound: f64,
    pub d2_bound: f64,
    pub d3_bound: f64,
    /// Minimal rate for this source below which no codebook sequence works.
    pub threshold: f64,
    pub seed: u64,
}

impl ExperimentReport {
    /// Assembles a row from the pieces an experiment produces.
    pub fn new(
        n: usize,
        source: &MessageSource<f64>,
        estimate: &McEstimate<f64>,
        bounds: &BoundTerms<f64>,
        threshold: f64,
        seed: u64,
    ) -> Self {
        let (label, p) = match source {
            MessageSource::Uniform { .. } => ("uniform", None),
            MessageSource::BitStream { p, .. } => ("bitstream", Some(*p)),
        };
        Self {
            n,
            messages: source.message_count() as u64,
            rate: source.rate(n),
            source: label.to_string(),
            p,
            trials: estimate.samples.len() as u64,
            mean_d: estimate.mean,
            stderr_d: estimate.stderr,
            d1_bound: bounds.d1_bound,
            d2_bound: bounds.d2_bound,
            d3_bound: bounds.d3_bound,
            threshold,
            seed,
        }
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.messages,
            fmt_sig(self.rate),
            self.source,
            self.p.map(fmt_sig).unwrap_or_default(),
            self.trials,
            fmt_sig(self.mean_d),
            fmt_sig(self.stderr_d),
            fmt_sig(self.d1_bound),
            fmt_sig(self.d2_bound),
            fmt_sig(self.d3_bound),
            fmt_sig(self.threshold),
            self.seed,
        )
    }
}

/// Formats with six significant digits; switches to scientific notation
/// below `1e-4` and at or above `1e6` in magnitude.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs();
    if magnitude < 1e-4 || magnitude >= 1e6 {
        format!("{x:.5e}")
    } else {
        let decimals = 5 - magnitude.log10().floor() as i32;
        format!("{:.*}", decimals.max(0) as usize, x)
    }
}

/// Renders sweep rows as CSV with a trailing newline per line.
pub fn experiment_csv(rows: &[ExperimentReport]) -> String {
    let mut out = String::from(EXPERIMENT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    out
}

/// Renders an exponent curve as CSV, one row per grid parameter.
pub fn curve_csv(curve: &ExponentCurve<f64>) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for i in 0..curve.rho.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig(curve.rho[i]),
            fmt_sig(curve.single_letter[i]),
            fmt_sig(curve.blocklength[i]),
            fmt_sig(curve.chord[i]),
        ));
    }
    out
}

/// Renders a rate certificate as a single-line JSON object.
pub fn certificate_json(certificate: &RateCertificate<f64>) -> String {
    let pmf = certificate
        .argmin_input
        .probs()
        .iter()
        .map(|&p| fmt_sig(p))
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"min_I_bits\":{},\"input_pmf\":[{}],\"support_size\":{},\"feasible\":{}}}",
        fmt_sig(certificate.min_mutual_information),
        pmf,
        certificate.support_size,
        certificate.feasible,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Pmf;

    #[test]
    fn significant_digit_formatting_is_frozen() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(0.5), "0.500000");
        assert_eq!(fmt_sig(0.53100440641071878), "0.531004");
        assert_eq!(fmt_sig(12.3), "12.3000");
        assert_eq!(fmt_sig(123456.0), "123456");
        assert_eq!(fmt_sig(1234567.0), "1.23457e6");
        assert_eq!(fmt_sig(1.5e-7), "1.50000e-7");
        assert_eq!(fmt_sig(-3.25e-5), "-3.25000e-5");
        assert_eq!(fmt_sig(0.0001), "0.000100000");
        assert_eq!(fmt_sig(-0.25), "-0.250000");
    }

    #[test]
    fn experiment_csv_golden() {
        let rows = vec![
            ExperimentReport {
                n: 4,
                messages: 16,
                rate: 1.0,
                source: "uniform".to_string(),
                p: None,
                trials: 2000,
                mean_d: 0.25,
                stderr_d: 0.003,
                d1_bound: 1.5,
                d2_bound: 0.125,
                d3_bound: 0.0,
                threshold: 0.53100440641071878,
                seed: 7,
            },
            ExperimentReport {
                n: 8,
                messages: 256,
                rate: 1.0,
                source: "bitstream".to_string(),
                p: Some(0.3),
                trials: 2000,
                mean_d: 0.0625,
                stderr_d: 0.0004,
                d1_bound: 0.75,
                d2_bound: 0.0312,
                d3_bound: 0.002,
                threshold: 1.0621873491703164,
                seed: 7,
            },
        ];
        let expected = "n,M,R,source,p,trials,mean_D,stderr_D,d1_bound,d2_bound,d3_bound,threshold,seed\n\
            4,16,1.00000,uniform,,2000,0.250000,0.00300000,1.50000,0.125000,0,0.531004,7\n\
            8,256,1.00000,bitstream,0.300000,2000,0.0625000,0.000400000,0.750000,0.0312000,0.00200000,1.06219,7\n";
        assert_eq!(experiment_csv(&rows), expected);
    }

    #[test]
    fn curve_csv_golden() {
        let curve = ExponentCurve {
            rho: vec![-0.5, -0.25, 0.0],
            single_letter: vec![0.35684790742167949, 0.15430403303258627, 0.0],
            blocklength: vec![0.44173220905116123, 0.2, 0.0],
            chord: vec![0.3, 0.15, 0.0],
        };
        let expected = "rho,e0_single,e0_block_n,chord_value\n\
            -0.500000,0.356848,0.441732,0.300000\n\
            -0.250000,0.154304,0.200000,0.150000\n\
            0,0,0,0\n";
        assert_eq!(curve_csv(&curve), expected);
    }

    #[test]
    fn certificate_json_golden() {
        let certificate = RateCertificate {
            min_mutual_information: 0.53100440641071878,
            argmin_input: Pmf::new(vec![0.5, 0.5]).unwrap(),
            feasible: true,
            support_size: 2,
        };
        assert_eq!(
            certificate_json(&certificate),
            "{\"min_I_bits\":0.531004,\"input_pmf\":[0.500000,0.500000],\"support_size\":2,\"feasible\":true}"
        );
    }

    #[test]
    fn report_row_from_parts_matches_source_metadata() {
        let source = MessageSource::bit_stream(8, 0.3).unwrap();
        let estimate = McEstimate {
            mean: 0.1,
            stderr: 0.01,
            samples: vec![0.1; 50],
        };
        let bounds = BoundTerms {
            d1_bound: 1.0,
            d2_bound: 0.5,
            d3_bound: 0.25,
            delta_eps: Some(0.1),
        };
        let row = ExperimentReport::new(8, &source, &estimate, &bounds, 1.06, 42);
        assert_eq!(row.messages, 256);
        assert_eq!(row.source, "bitstream");
        assert_eq!(row.p, Some(0.3));
        assert!((row.rate - 1.0).abs() < 1e-15);
        assert_eq!(row.trials, 50);
        assert_eq!(row.seed, 42);
    }
}
