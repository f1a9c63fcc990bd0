//! Pipeline knobs. The practical defaults drive execution; the theoretical
//! values are kept for display only, since their constants are not effective.

use std::fmt;
use std::time::Duration;

use crate::graph::Rational;
use crate::regularity::CheckOptions;

#[derive(Clone, Debug)]
pub struct PipelineParams {
    /// Regularity tolerance for cylinder search and the absorption cap.
    pub epsilon: Rational,
    /// Minimum pair density of the cylinder in its color.
    pub density: Rational,
    /// Good/bad threshold; `None` means `1/(2Δ)`.
    pub delta: Option<Rational>,
    /// Cylinder width; `None` means `Δ + 2`.
    pub k: Option<usize>,
    pub min_part: usize,
    /// Cylinder part size; `None` picks `max(min_part, |U| / (3k))`.
    pub part_size: Option<usize>,
    /// Below this many vertices, solve exactly (or by singletons).
    pub small_n_threshold: usize,
    pub oracle_cap: usize,
    /// First extraction size as a fraction of what remains.
    pub ratio: Rational,
    pub piece_budget: usize,
    pub copy_node_budget: u64,
    pub embed_node_budget: u64,
    pub embed_restarts: usize,
    pub cylinder_attempts: usize,
    pub check: CheckOptions,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    /// Enforce the `n >= 2^(2k)` hypothesis of the cylinder step; smaller
    /// inputs then skip straight to extraction.
    pub theoretical_mode: bool,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            epsilon: Rational::new(2, 5),
            density: Rational::new(1, 2),
            delta: None,
            k: None,
            min_part: 8,
            part_size: None,
            small_n_threshold: 8,
            oracle_cap: 12,
            ratio: Rational::new(1, 4),
            piece_budget: 4096,
            copy_node_budget: 50_000,
            embed_node_budget: 20_000,
            embed_restarts: 4,
            cylinder_attempts: 12,
            check: CheckOptions {
                trials: 24,
                ..CheckOptions::default()
            },
            seed: 0,
            time_limit: None,
            theoretical_mode: false,
        }
    }
}

impl PipelineParams {
    pub fn with_seed(seed: u64) -> Self {
        PipelineParams {
            seed,
            ..Self::default()
        }
    }

    pub fn delta_for(&self, max_degree: usize) -> Rational {
        self.delta
            .unwrap_or_else(|| Rational::new(1, 2 * max_degree.max(1) as i64))
    }

    pub fn k_for(&self, max_degree: usize) -> usize {
        self.k.unwrap_or(max_degree + 2)
    }
}

/// The proof's parameter choices for a given Δ, as formulas. `C2` and the
/// Blow-up constant are unspecified absolute constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoreticalParams {
    pub max_degree: usize,
    pub k: usize,
    pub delta: Rational,
    /// `2^(2k)`, the smallest host the cylinder step accepts.
    pub min_n: u128,
}

impl TheoreticalParams {
    pub fn for_max_degree(max_degree: usize) -> Self {
        let k = max_degree + 2;
        TheoreticalParams {
            max_degree,
            k,
            delta: Rational::new(1, 2 * max_degree.max(1) as i64),
            min_n: 1u128.checked_shl(2 * k as u32).unwrap_or(u128::MAX),
        }
    }
}

impl fmt::Display for TheoreticalParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.max_degree;
        let k = self.k;
        writeln!(f, "Delta = {d}")?;
        writeln!(f, "eps   = 2^(-C2*{d})   (C2 a large absolute constant)")?;
        writeln!(f, "k     = Delta + 2 = {k}")?;
        writeln!(
            f,
            "eta   = 1/(2*2^{}) * (eps/2)^(2^{} * (eps/2)^-5)",
            2 * k,
            4 * k
        )?;
        writeln!(f, "delta = 1/(2*Delta) = {}", self.delta)?;
        writeln!(f, "n    >= 2^(2k) = {} for the cylinder step", self.min_n)?;
        write!(
            f,
            "cylinder cover needs eps < 1/(4*(32*{d}^2*{}*8^{d})^C_BL)",
            d + 2
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theoretical_values() {
        let t = TheoreticalParams::for_max_degree(2);
        assert_eq!(t.k, 4);
        assert_eq!(t.delta, Rational::new(1, 4));
        assert_eq!(t.min_n, 256);
        let text = t.to_string();
        assert!(text.contains("k     = Delta + 2 = 4"));
        assert!(text.contains("2^8"));
    }

    #[test]
    fn derived_defaults() {
        let p = PipelineParams::default();
        assert_eq!(p.k_for(3), 5);
        assert_eq!(p.delta_for(3), Rational::new(1, 6));
    }
}
