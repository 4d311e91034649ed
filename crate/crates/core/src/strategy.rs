//! Interchangeable reconstruction strategies, selectable by name.
//!
//! Every strategy turns monotone consistent sums into an image with exactly
//! those margins; they differ in how the image is chosen and what extra
//! guarantees come with it.

use thiserror::Error;

use crate::construction::{self, ReconstructError, StepRecord};
use crate::image::BinaryImage;
use crate::oracle::{self, OracleError, OracleLimits};
use crate::padding;
use crate::ryser::{is_consistent, Consistency};
use crate::sums::LineSums;

/// Knobs shared by all strategies.
#[derive(Clone, Copy, Debug)]
pub struct StrategyOptions {
    /// Retain the step trace where the strategy produces one.
    pub keep_trace: bool,
    /// Limits for search-backed strategies.
    pub limits: OracleLimits,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        StrategyOptions {
            keep_trace: true,
            limits: OracleLimits::default(),
        }
    }
}

/// Image produced by a strategy, with the trace when one exists.
#[derive(Clone, Debug)]
pub struct StrategyOutcome {
    pub image: BinaryImage,
    pub trace: Option<Vec<StepRecord>>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("line sums are inconsistent: {witness}")]
    Inconsistent { witness: Consistency },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Search(#[from] OracleError),
    /// The search strategy ran out of budget before covering the instance.
    #[error("search exhausted its node budget after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<ReconstructError> for StrategyError {
    fn from(err: ReconstructError) -> Self {
        match err {
            ReconstructError::Inconsistent { witness } => StrategyError::Inconsistent { witness },
            ReconstructError::MissingFullFirstLine { .. } => {
                StrategyError::Unsupported(err.to_string())
            }
            ReconstructError::Internal(reason) => StrategyError::Internal(reason),
        }
    }
}

/// A named way of reconstructing an image from line sums.
pub trait ReconstructionStrategy: Sync {
    /// Registry key, stable across releases.
    fn name(&self) -> &'static str;

    /// One-line description for CLI listings.
    fn description(&self) -> &'static str;

    fn reconstruct(
        &self,
        sums: &LineSums,
        options: &StrategyOptions,
    ) -> Result<StrategyOutcome, StrategyError>;
}

/// Direct construction when the first line is full, padding otherwise.
struct Auto;

impl ReconstructionStrategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn description(&self) -> &'static str {
        "step construction, padding the sums first when the first line is not full"
    }

    fn reconstruct(
        &self,
        sums: &LineSums,
        options: &StrategyOptions,
    ) -> Result<StrategyOutcome, StrategyError> {
        let result = padding::reconstruct_general_with(sums, options.keep_trace)?;
        Ok(StrategyOutcome {
            image: result.image,
            trace: result.trace,
        })
    }
}

/// Step construction only; rejects sums without a full first line.
struct Direct;

impl ReconstructionStrategy for Direct {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn description(&self) -> &'static str {
        "step construction; requires a full first row and column"
    }

    fn reconstruct(
        &self,
        sums: &LineSums,
        options: &StrategyOptions,
    ) -> Result<StrategyOutcome, StrategyError> {
        let result = construction::reconstruct_with(sums, options.keep_trace)?;
        Ok(StrategyOutcome {
            image: result.image,
            trace: result.trace,
        })
    }
}

/// Padding round trip, even when the direct route would apply.
struct Padded;

impl ReconstructionStrategy for Padded {
    fn name(&self) -> &'static str {
        "padded"
    }

    fn description(&self) -> &'static str {
        "always pads with a full first line, reconstructs, and strips"
    }

    fn reconstruct(
        &self,
        sums: &LineSums,
        options: &StrategyOptions,
    ) -> Result<StrategyOutcome, StrategyError> {
        let result = padding::reconstruct_padded_with(sums, options.keep_trace)?;
        Ok(StrategyOutcome {
            image: result.image,
            trace: result.trace,
        })
    }
}

/// Exhaustive search for the smallest total boundary; small instances only.
struct OracleMin;

impl ReconstructionStrategy for OracleMin {
    fn name(&self) -> &'static str {
        "oracle-min"
    }

    fn description(&self) -> &'static str {
        "exhaustive search for the minimum total boundary (small instances)"
    }

    fn reconstruct(
        &self,
        sums: &LineSums,
        options: &StrategyOptions,
    ) -> Result<StrategyOutcome, StrategyError> {
        let witness = is_consistent(sums);
        if !witness.is_consistent() {
            return Err(StrategyError::Inconsistent { witness });
        }
        let report = oracle::min_boundaries(sums, &options.limits)?;
        if !report.stats.complete {
            return Err(StrategyError::BudgetExhausted {
                nodes: report.stats.nodes,
            });
        }
        let minima = report.minima.ok_or_else(|| {
            StrategyError::Internal("consistent sums enumerated no image".into())
        })?;
        Ok(StrategyOutcome {
            image: minima.witness_total,
            trace: None,
        })
    }
}

static REGISTRY: [&dyn ReconstructionStrategy; 4] = [&Auto, &Direct, &Padded, &OracleMin];

/// All registered strategies, in listing order.
pub fn strategies() -> &'static [&'static dyn ReconstructionStrategy] {
    &REGISTRY
}

/// Looks a strategy up by its registry name.
pub fn strategy(name: &str) -> Option<&'static dyn ReconstructionStrategy> {
    strategies().iter().copied().find(|s| s.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sums(rows: &[u32], cols: &[u32]) -> LineSums {
        LineSums::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn registry_lists_all_strategies() {
        let names: Vec<&str> = strategies().iter().map(|s| s.name()).collect();
        assert_eq!(names, vec!["auto", "direct", "padded", "oracle-min"]);
        assert!(strategy("direct").is_some());
        assert!(strategy("bogus").is_none());
    }

    #[test]
    fn every_strategy_matches_margins_on_a_small_instance() {
        let input = sums(&[3, 2, 2, 1], &[4, 2, 2]);
        let options = StrategyOptions::default();
        for s in strategies() {
            let outcome = s.reconstruct(&input, &options).unwrap();
            assert!(
                outcome.image.margins().matches(&input),
                "strategy {} broke the margins",
                s.name()
            );
        }
    }

    #[test]
    fn direct_rejects_short_first_row() {
        let input = sums(&[1, 1], &[1, 1]);
        let err = strategy("direct")
            .unwrap()
            .reconstruct(&input, &StrategyOptions::default())
            .unwrap_err();
        assert!(matches!(err, StrategyError::Unsupported(_)));
    }

    #[test]
    fn oracle_min_never_exceeds_the_construction_boundary() {
        let input = sums(&[4, 2, 2, 2], &[4, 2, 2, 2]);
        let options = StrategyOptions::default();
        let construction = strategy("auto")
            .unwrap()
            .reconstruct(&input, &options)
            .unwrap();
        let best = strategy("oracle-min")
            .unwrap()
            .reconstruct(&input, &options)
            .unwrap();
        let constructed = crate::boundary::boundary(&construction.image).total();
        let minimal = crate::boundary::boundary(&best.image).total();
        assert!(minimal <= constructed);
    }

    #[test]
    fn strategies_propagate_inconsistency() {
        // Full first line but mismatched totals, so every route reports the
        // inconsistency rather than a precondition failure.
        let input = sums(&[3, 3, 2], &[3, 3, 1]);
        for s in strategies() {
            let err = s
                .reconstruct(&input, &StrategyOptions::default())
                .unwrap_err();
            assert!(
                matches!(err, StrategyError::Inconsistent { .. }),
                "strategy {} returned {err:?}",
                s.name()
            );
        }
    }
}
