//! Exhaustive ground truth for small instances.
//!
//! Enumerates every binary image with prescribed margins by filling columns
//! left to right, choosing the one-rows of each column in lexicographic
//! order and pruning with the consistency test on the sorted residual row
//! sums. Used to certify boundary minima and to cross-validate the
//! consistency decision.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::boundary::boundary;
use crate::conjugate::conjugate;
use crate::image::BinaryImage;
use crate::sums::LineSums;

/// Resource limits for an exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    /// Refuse instances with more than this many cells.
    pub max_cells: u64,
    /// Stop after this many column assignments.
    pub max_nodes: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_cells: 49,
            max_nodes: 100_000_000,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {cells} cells, above the limit of {max_cells}")]
    TooLarge { cells: u64, max_cells: u64 },
}

/// What an exhaustive search did. `complete` is false when the node budget
/// ran out; counts then cover only the explored part, never silently less.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub images: u64,
    pub nodes: u64,
    pub complete: bool,
}

/// Visits every image with exactly the given margins, in a deterministic
/// order, until the visitor breaks or the node budget runs out.
pub fn enumerate<F>(
    sums: &LineSums,
    limits: &OracleLimits,
    mut visit: F,
) -> Result<SearchStats, OracleError>
where
    F: FnMut(&BinaryImage) -> ControlFlow<()>,
{
    let cells = sums.m() as u64 * sums.n() as u64;
    if cells > limits.max_cells {
        return Err(OracleError::TooLarge {
            cells,
            max_cells: limits.max_cells,
        });
    }
    let mut search = Search {
        m: sums.m(),
        cols: sums.cols(),
        residual: sums.rows().to_vec(),
        image: BinaryImage::new(sums.m(), sums.n()),
        stats: SearchStats {
            images: 0,
            nodes: 0,
            complete: true,
        },
        budget: limits.max_nodes,
        visit: &mut visit,
    };
    if sums.row_total() == sums.col_total() {
        let _ = search.fill_column(0);
    }
    Ok(search.stats)
}

struct Search<'a, F> {
    m: usize,
    cols: &'a [u32],
    residual: Vec<u32>,
    image: BinaryImage,
    stats: SearchStats,
    budget: u64,
    visit: &'a mut F,
}

impl<F> Search<'_, F>
where
    F: FnMut(&BinaryImage) -> ControlFlow<()>,
{
    /// Fills column `j` (0-based) and recurses. Returns `Break` to stop the
    /// whole search.
    fn fill_column(&mut self, j: usize) -> ControlFlow<()> {
        if j == self.cols.len() {
            debug_assert!(self.residual.iter().all(|&r| r == 0));
            self.stats.images += 1;
            return (self.visit)(&self.image);
        }
        let want = self.cols[j] as usize;
        let candidates: Vec<usize> = (0..self.m).filter(|&i| self.residual[i] > 0).collect();
        if want > candidates.len() {
            return ControlFlow::Continue(());
        }
        let mut chosen = Vec::with_capacity(want);
        self.choose(j, want, &candidates, 0, &mut chosen)
    }

    /// Extends `chosen` with `want` more rows drawn from `candidates[from..]`
    /// in lexicographic order.
    fn choose(
        &mut self,
        j: usize,
        want: usize,
        candidates: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> ControlFlow<()> {
        if want == 0 {
            return self.apply(j, chosen);
        }
        // Not enough candidates left to finish the column.
        for k in from..=candidates.len() - want {
            chosen.push(candidates[k]);
            self.choose(j, want - 1, candidates, k + 1, chosen)?;
            chosen.pop();
        }
        ControlFlow::Continue(())
    }

    fn apply(&mut self, j: usize, chosen: &[usize]) -> ControlFlow<()> {
        if self.stats.nodes == self.budget {
            self.stats.complete = false;
            return ControlFlow::Break(());
        }
        self.stats.nodes += 1;
        for &i in chosen {
            self.residual[i] -= 1;
            self.image.set(i + 1, j + 1, true);
        }
        let result = if self.feasible(j + 1) {
            self.fill_column(j + 1)
        } else {
            ControlFlow::Continue(())
        };
        for &i in chosen {
            self.residual[i] += 1;
            self.image.set(i + 1, j + 1, false);
        }
        result
    }

    /// Consistency of the residual rows against the columns from `j` on:
    /// sort the residual non-increasingly and require every prefix of the
    /// conjugate of the remaining columns to dominate it.
    fn feasible(&self, j: usize) -> bool {
        let remaining = &self.cols[j..];
        let mut sorted = self.residual.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let b = conjugate(remaining, self.m);
        let mut conjugate_prefix = 0u64;
        let mut row_prefix = 0u64;
        for i in 0..self.m {
            conjugate_prefix += u64::from(b[i]);
            row_prefix += u64::from(sorted[i]);
            if conjugate_prefix < row_prefix {
                return false;
            }
        }
        true
    }
}

/// Boundary minima over all images with the given margins, each with the
/// first image attaining it. The three minima may come from different
/// images.
#[derive(Clone, Debug)]
pub struct BoundaryMinima {
    pub min_horizontal: u64,
    pub min_vertical: u64,
    pub min_total: u64,
    pub witness_horizontal: BinaryImage,
    pub witness_vertical: BinaryImage,
    pub witness_total: BinaryImage,
}

/// Outcome of a full boundary scan.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub stats: SearchStats,
    /// `None` exactly when no image with those margins was visited.
    pub minima: Option<BoundaryMinima>,
    /// First image satisfying both `L_h <= 4n - 4` and `L_v <= 4m - 4`.
    pub joint_witness: Option<BinaryImage>,
}

/// Scans all images with the given margins, tracking the exact boundary
/// minima and whether any single image keeps both boundary components within
/// the linear caps.
pub fn min_boundaries(sums: &LineSums, limits: &OracleLimits) -> Result<OracleReport, OracleError> {
    let horizontal_cap = (4 * sums.n() as u64).saturating_sub(4);
    let vertical_cap = (4 * sums.m() as u64).saturating_sub(4);
    let mut minima: Option<BoundaryMinima> = None;
    let mut joint_witness: Option<BinaryImage> = None;
    let stats = enumerate(sums, limits, |image| {
        let report = boundary(image);
        let total = report.total();
        match &mut minima {
            None => {
                minima = Some(BoundaryMinima {
                    min_horizontal: report.horizontal,
                    min_vertical: report.vertical,
                    min_total: total,
                    witness_horizontal: image.clone(),
                    witness_vertical: image.clone(),
                    witness_total: image.clone(),
                });
            }
            Some(best) => {
                if report.horizontal < best.min_horizontal {
                    best.min_horizontal = report.horizontal;
                    best.witness_horizontal = image.clone();
                }
                if report.vertical < best.min_vertical {
                    best.min_vertical = report.vertical;
                    best.witness_vertical = image.clone();
                }
                if total < best.min_total {
                    best.min_total = total;
                    best.witness_total = image.clone();
                }
            }
        }
        if joint_witness.is_none()
            && report.horizontal <= horizontal_cap
            && report.vertical <= vertical_cap
        {
            joint_witness = Some(image.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(OracleReport {
        stats,
        minima,
        joint_witness,
    })
}

/// Verdict of probing for an image within both linear boundary caps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureVerdict {
    /// Some image satisfies both caps.
    Witness,
    /// The enumeration completed and no image satisfies both caps.
    Refuted,
    /// No image has these margins at all.
    NoSolution,
    /// The node budget ran out before a verdict.
    Inconclusive,
}

/// Evidence report on the joint boundary caps `4n - 4` and `4m - 4`.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub verdict: ConjectureVerdict,
    pub witness: Option<BinaryImage>,
    pub stats: SearchStats,
}

/// Searches for a single image within both linear caps, stopping at the
/// first witness.
pub fn probe_conjecture(
    sums: &LineSums,
    limits: &OracleLimits,
) -> Result<ConjectureReport, OracleError> {
    let horizontal_cap = (4 * sums.n() as u64).saturating_sub(4);
    let vertical_cap = (4 * sums.m() as u64).saturating_sub(4);
    let mut witness: Option<BinaryImage> = None;
    let stats = enumerate(sums, limits, |image| {
        let report = boundary(image);
        if report.horizontal <= horizontal_cap && report.vertical <= vertical_cap {
            witness = Some(image.clone());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    let verdict = if witness.is_some() {
        ConjectureVerdict::Witness
    } else if !stats.complete {
        ConjectureVerdict::Inconclusive
    } else if stats.images == 0 {
        ConjectureVerdict::NoSolution
    } else {
        ConjectureVerdict::Refuted
    };
    Ok(ConjectureReport {
        verdict,
        witness,
        stats,
    })
}

/// True when at least one image with the given margins exists.
pub fn exists(sums: &LineSums, limits: &OracleLimits) -> Result<bool, OracleError> {
    let stats = enumerate(sums, limits, |_| ControlFlow::Break(()))?;
    Ok(stats.images > 0)
}

/// Number of images with the given margins.
pub fn count(sums: &LineSums, limits: &OracleLimits) -> Result<SearchStats, OracleError> {
    enumerate(sums, limits, |_| ControlFlow::Continue(()))
}
