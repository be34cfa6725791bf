//! Compatible histograms and Jensen–Shannon divergence.
//!
//! Two value distributions are only divergence-comparable after they share
//! bin edges; `cut2bin` forces that by binning both inputs into equi-width
//! bins spanned by a designated reference (or, symmetrically, by whichever
//! input has the narrower domain). Values outside the reference span clamp
//! into the boundary bins, so no mass is lost.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DivergenceError {
    #[error("cannot bin an empty value list")]
    EmptyInput,
    #[error("histograms need at least one bin")]
    NoBins,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `n + 1` ascending edges.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Probability weights summing to 1, or all zero for an empty input.
    pub normalized: Vec<f64>,
    pub empty: bool,
}

impl Histogram {
    fn from_counts(bin_edges: Vec<f64>, counts: Vec<u64>) -> Histogram {
        let total: u64 = counts.iter().sum();
        let normalized = if total == 0 {
            vec![0.0; counts.len()]
        } else {
            counts.iter().map(|c| *c as f64 / total as f64).collect()
        };
        Histogram {
            bin_edges,
            counts,
            normalized,
            empty: total == 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin midpoints, the support of the binned distribution.
    pub fn midpoints(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| (w[0] + w[1]) / 2.0)
            .collect()
    }

    /// Fisher–Pearson skewness of the binned distribution
    /// (midpoint-weighted third standardized moment).
    pub fn skewness(&self) -> f64 {
        if self.empty {
            return 0.0;
        }
        let mids = self.midpoints();
        let mean: f64 = mids
            .iter()
            .zip(&self.normalized)
            .map(|(m, w)| m * w)
            .sum();
        let m2: f64 = mids
            .iter()
            .zip(&self.normalized)
            .map(|(m, w)| w * (m - mean).powi(2))
            .sum();
        if m2 <= 0.0 {
            return 0.0;
        }
        let m3: f64 = mids
            .iter()
            .zip(&self.normalized)
            .map(|(m, w)| w * (m - mean).powi(3))
            .sum();
        m3 / m2.powf(1.5)
    }
}

/// Equi-width bin edges spanning the value range. A degenerate range
/// (all values equal) widens to a unit interval around the value.
pub fn equi_width_edges(values: &[f64], n_bins: usize) -> Result<Vec<f64>, DivergenceError> {
    if values.is_empty() {
        return Err(DivergenceError::EmptyInput);
    }
    if n_bins == 0 {
        return Err(DivergenceError::NoBins);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if hi <= lo {
        lo -= 0.5;
        hi = lo + 1.0;
    }
    let width = (hi - lo) / n_bins as f64;
    Ok((0..=n_bins).map(|i| lo + width * i as f64).collect())
}

/// Bin values into existing edges; out-of-range values clamp into the first
/// or last bin, so the counts always sum to the input length.
pub fn bin_into(values: &[f64], edges: &[f64]) -> Histogram {
    let n = edges.len() - 1;
    let lo = edges[0];
    let hi = edges[n];
    let width = (hi - lo) / n as f64;
    let mut counts = vec![0u64; n];
    for v in values {
        let idx = if *v <= lo {
            0
        } else if *v >= hi {
            n - 1
        } else {
            (((v - lo) / width) as usize).min(n - 1)
        };
        counts[idx] += 1;
    }
    Histogram::from_counts(edges.to_vec(), counts)
}

/// Bin two distributions onto shared equi-width edges derived from the
/// designated reference.
pub fn cut2bin(
    reference: &[f64],
    other: &[f64],
    n_bins: usize,
) -> Result<(Histogram, Histogram), DivergenceError> {
    let edges = equi_width_edges(reference, n_bins)?;
    Ok((bin_into(reference, &edges), bin_into(other, &edges)))
}

/// Symmetric variant used when neither side is a designated reference: the
/// edges come from the input with the narrower domain (ties break toward
/// the smaller minimum, so argument order never matters).
pub fn cut2bin_symmetric(
    a: &[f64],
    b: &[f64],
    n_bins: usize,
) -> Result<(Histogram, Histogram), DivergenceError> {
    if a.is_empty() || b.is_empty() {
        return Err(DivergenceError::EmptyInput);
    }
    let span = |values: &[f64]| {
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo, lo)
    };
    let (width_a, lo_a) = span(a);
    let (width_b, lo_b) = span(b);
    let a_is_reference = match width_a.partial_cmp(&width_b).expect("finite widths") {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => lo_a <= lo_b,
    };
    let edges = if a_is_reference {
        equi_width_edges(a, n_bins)?
    } else {
        equi_width_edges(b, n_bins)?
    };
    Ok((bin_into(a, &edges), bin_into(b, &edges)))
}

/// Jensen–Shannon divergence with base-2 logarithms between two probability
/// vectors over the same support; zero-weight bins contribute nothing
/// (`0 log 0 = 0`). Bounded in [0, 1].
pub fn jensen_shannon(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut divergence = 0.0;
    for (pi, qi) in p.iter().zip(q) {
        let m = (pi + qi) / 2.0;
        if *pi > 0.0 {
            divergence += 0.5 * pi * (pi / m).log2();
        }
        if *qi > 0.0 {
            divergence += 0.5 * qi * (qi / m).log2();
        }
    }
    divergence.clamp(0.0, 1.0)
}

/// Bin both value lists onto the reference's edges and return their JS
/// divergence.
pub fn compare_histograms(
    reference_values: &[f64],
    candidate_values: &[f64],
    n_bins: usize,
) -> Result<f64, DivergenceError> {
    if candidate_values.is_empty() {
        return Err(DivergenceError::EmptyInput);
    }
    let (reference, candidate) = cut2bin(reference_values, candidate_values, n_bins)?;
    Ok(jensen_shannon(&reference.normalized, &candidate.normalized))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_lists_bin_identically() {
        let values = [1.0, 2.0, 3.0, 4.0];
        let (a, b) = cut2bin(&values, &values, 2).unwrap();
        assert_eq!(a.counts, vec![2, 2]);
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_range_clamps_into_last_bin() {
        let reference = [1.0, 1.0, 2.0, 2.0];
        let other = [3.0, 3.0, 4.0, 4.0];
        let (r, o) = cut2bin(&reference, &other, 2).unwrap();
        assert_eq!(r.counts, vec![2, 2]);
        assert_eq!(o.counts, vec![0, 4]);
        assert_eq!(o.total(), 4, "clamping loses nothing");
    }

    #[test]
    fn degenerate_reference_range() {
        let (r, o) = cut2bin(&[5.0, 5.0], &[4.0, 6.0], 4).unwrap();
        assert_eq!(r.total(), 2);
        assert_eq!(o.total(), 2);
    }

    #[test]
    fn empty_reference_is_error() {
        assert_eq!(cut2bin(&[], &[1.0], 2).unwrap_err(), DivergenceError::EmptyInput);
        assert_eq!(cut2bin(&[1.0], &[1.0], 0).unwrap_err(), DivergenceError::NoBins);
    }

    #[test]
    fn symmetric_rule_is_order_independent() {
        let narrow = [0.0, 1.0, 0.5, 0.25];
        let wide = [0.0, 10.0, 5.0];
        let (a1, b1) = cut2bin_symmetric(&narrow, &wide, 4).unwrap();
        let (b2, a2) = cut2bin_symmetric(&wide, &narrow, 4).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        assert_eq!(a1.bin_edges, b1.bin_edges);
    }

    #[test]
    fn jsd_of_equal_distributions_is_zero() {
        let p = [0.25, 0.25, 0.5];
        assert_eq!(jensen_shannon(&p, &p), 0.0);
    }

    #[test]
    fn jsd_hand_value() {
        let v = jensen_shannon(&[0.5, 0.5], &[0.0, 1.0]);
        assert!((v - 0.31128).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn jsd_disjoint_is_one() {
        assert!((jensen_shannon(&[1.0, 0.0], &[0.0, 1.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compare_identical_value_lists() {
        let values = [0.2, 0.4, 0.4, 0.9];
        assert_eq!(compare_histograms(&values, &values, 10).unwrap(), 0.0);
    }

    #[test]
    fn skewness_sign() {
        // mass piled at the left with a long right tail skews right
        let mut right_tail = vec![0.0; 90];
        right_tail.extend(vec![10.0; 10]);
        let edges = equi_width_edges(&right_tail, 10).unwrap();
        let h = bin_into(&right_tail, &edges);
        assert!(h.skewness() > 0.0);
        // uniform is symmetric
        let uniform: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let hu = bin_into(&uniform, &equi_width_edges(&uniform, 10).unwrap());
        assert!(hu.skewness().abs() < 1e-9);
    }
}
