//! Central numeric tolerances and acceptance knobs.
//!
//! Every inequality check in this crate passes when the measured slack is
//! at least `-SLACK_ABS`. The distances involved are plain summation
//! arithmetic (no iterative solvers), so an absolute 1e-9 leaves several
//! orders of headroom over accumulated f64 rounding at the scales we run.

/// Absolute slack allowed on every inequality check.
pub const SLACK_ABS: f64 = 1e-9;

/// Relative slack for multiplicative comparisons done in log space
/// (e.g. the Harnack ratio bounds).
pub const SLACK_LOG: f64 = 1e-9;

/// Two path lengths or table distances are treated as equal when they
/// differ by at most this much (tie detection in shortest-path
/// reconstruction and arc enumeration).
pub const PATH_EQ_ABS: f64 = 1e-9;

/// Default node-count gate for the global four-point scan, applied per
/// biconnected block. The scan is O(m^4) in the block size m.
pub const DELTA_GLOBAL_BLOCK_LIMIT: usize = 400;

/// Gehring-Hayman empirical constant must vary less than this fraction
/// across truncation radii.
pub const STABILITY_GEHRING_HAYMAN: f64 = 0.20;

/// Uniformity constant stability across truncation radii.
pub const STABILITY_UNIFORMITY: f64 = 0.20;

/// Two-sided deformed-vs-visual comparison constant stability across radii.
pub const STABILITY_VISUAL: f64 = 0.20;

/// Boundary quasi-isometry constant stability across radii.
pub const STABILITY_QUASI_ISOMETRY: f64 = 0.25;

/// Upper bound on `h` accepted by the Gehring-Hayman check; the deformed
/// length comparison is only meaningful for short arc families.
pub const GH_H_LIMIT: f64 = 1.0 / 13.0;

/// Default h-short slack used when selecting arc families.
pub const DEFAULT_H: f64 = 1.0 / 14.0;

/// Product `epsilon * delta` must stay strictly below this for the
/// boundary metric machinery to apply.
pub const EPS_DELTA_LIMIT: f64 = 0.2;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knob_sanity() {
        assert!(SLACK_ABS > 0.0 && SLACK_ABS < 1e-6);
        assert!(DEFAULT_H < GH_H_LIMIT);
        assert!(EPS_DELTA_LIMIT == 0.2);
        assert!(STABILITY_QUASI_ISOMETRY >= STABILITY_UNIFORMITY);
    }
}
