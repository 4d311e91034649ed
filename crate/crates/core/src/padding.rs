//! Lifting the construction to arbitrary monotone sums.
//!
//! When the first row does not span all columns or the first column all
//! rows, a full row and column are prepended, the direct construction runs
//! on the padded sums, and the added lines are stripped again. Padding does
//! not change the imbalance `alpha`, and peeling the full lines off the
//! padded boundary bounds yields
//! `L_h <= min(2*r1 + 2*alpha, 2*r1 + 2*n - 2)` and `L_v <= 2*c1 + 2*alpha`.

use thiserror::Error;

use crate::boundary::{boundary, BoundaryReport};
use crate::conjugate::alpha;
use crate::construction::{reconstruct_with, ReconstructError, StepRecord, TRACE_COLUMN_LIMIT};
use crate::image::BinaryImage;
use crate::ryser::is_consistent;
use crate::sums::LineSums;

/// Prepends a full row and a full column: the new first row covers all
/// `n + 1` columns and the new first column all `m + 1` rows, while every
/// original sum grows by one. The result is monotone, has a full first
/// line, and keeps the imbalance `alpha` of the input.
pub fn pad(sums: &LineSums) -> LineSums {
    let mut rows = Vec::with_capacity(sums.m() + 1);
    rows.push(sums.n() as u32 + 1);
    rows.extend(sums.rows().iter().map(|&r| r + 1));
    let mut cols = Vec::with_capacity(sums.n() + 1);
    cols.push(sums.m() as u32 + 1);
    cols.extend(sums.cols().iter().map(|&c| c + 1));
    LineSums::new(rows, cols).expect("padding preserves monotonicity")
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StripError {
    #[error("cannot strip: cell ({row}, {col}) of the border is zero")]
    NotPadded { row: usize, col: usize },
    #[error("cannot strip a {m}x{n} image below one row and column")]
    TooSmall { m: usize, n: usize },
}

/// Removes the first row and first column, requiring both to be all ones.
pub fn strip(image: &BinaryImage) -> Result<BinaryImage, StripError> {
    let (m, n) = (image.m(), image.n());
    if m < 2 || n < 2 {
        return Err(StripError::TooSmall { m, n });
    }
    for j in 1..=n {
        if !image.get(1, j) {
            return Err(StripError::NotPadded { row: 1, col: j });
        }
    }
    for i in 1..=m {
        if !image.get(i, 1) {
            return Err(StripError::NotPadded { row: i, col: 1 });
        }
    }
    let mut out = BinaryImage::new(m - 1, n - 1);
    for i in 2..=m {
        for j in 2..=n {
            if image.get(i, j) {
                out.set(i - 1, j - 1, true);
            }
        }
    }
    Ok(out)
}

/// Concrete-image counterpart of [`pad`]: embeds the image with a full first
/// row and column. The horizontal boundary grows by `2 * (n + 1 - r1)` and
/// the vertical one by `2 * (m + 1 - c1)`, where `r1` and `c1` are the first
/// row and column sums of the input.
pub fn pad_embed(image: &BinaryImage) -> BinaryImage {
    let (m, n) = (image.m(), image.n());
    let mut out = BinaryImage::new(m + 1, n + 1);
    for j in 1..=n + 1 {
        out.set(1, j, true);
    }
    for i in 1..=m + 1 {
        out.set(i, 1, true);
    }
    for i in 1..=m {
        for j in 1..=n {
            if image.get(i, j) {
                out.set(i + 1, j + 1, true);
            }
        }
    }
    out
}

/// Which route [`reconstruct_general`] took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReconstructionPath {
    /// The sums already had a full first line.
    Direct,
    /// Padded, reconstructed, and stripped.
    Padded,
}

/// Boundary bounds implied by the sums, next to the measured lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub alpha: u64,
    /// `2*r1 + 2*alpha`.
    pub horizontal_alpha_bound: u64,
    /// `2*r1 + 2*n - 2`.
    pub horizontal_linear_bound: u64,
    /// `2*c1 + 2*alpha`.
    pub vertical_alpha_bound: u64,
    pub horizontal_measured: u64,
    pub vertical_measured: u64,
}

impl BoundsReport {
    pub fn horizontal_bound(&self) -> u64 {
        self.horizontal_alpha_bound.min(self.horizontal_linear_bound)
    }

    pub fn vertical_bound(&self) -> u64 {
        self.vertical_alpha_bound
    }

    pub fn holds(&self) -> bool {
        self.horizontal_measured <= self.horizontal_bound()
            && self.vertical_measured <= self.vertical_bound()
    }
}

/// Reconstruction result for arbitrary monotone consistent sums.
#[derive(Clone, Debug)]
pub struct GeneralReconstruction {
    pub image: BinaryImage,
    pub boundary: BoundaryReport,
    pub bounds: BoundsReport,
    pub path: ReconstructionPath,
    /// Step trace of the underlying run; for the padded path the recorded
    /// coordinates refer to the padded grid (every index one higher).
    pub trace: Option<Vec<StepRecord>>,
}

/// Reconstructs arbitrary monotone consistent sums: directly when the first
/// line is full, otherwise through the padding round trip. The output
/// margins equal the input exactly and the measured boundary respects the
/// bounds in the report.
pub fn reconstruct_general(sums: &LineSums) -> Result<GeneralReconstruction, ReconstructError> {
    reconstruct_general_with(sums, sums.n() <= TRACE_COLUMN_LIMIT)
}

pub fn reconstruct_general_with(
    sums: &LineSums,
    keep_trace: bool,
) -> Result<GeneralReconstruction, ReconstructError> {
    let witness = is_consistent(sums);
    if !witness.is_consistent() {
        return Err(ReconstructError::Inconsistent { witness });
    }
    let (path, image, trace) = if sums.has_full_first_line() {
        let direct = reconstruct_with(sums, keep_trace)?;
        (ReconstructionPath::Direct, direct.image, direct.trace)
    } else {
        let padded = reconstruct_via_padding(sums, keep_trace)?;
        (ReconstructionPath::Padded, padded.0, padded.1)
    };
    finish(sums, path, image, trace)
}

/// Always takes the padding route, even when the direct one would apply.
pub fn reconstruct_padded(sums: &LineSums) -> Result<GeneralReconstruction, ReconstructError> {
    reconstruct_padded_with(sums, sums.n() < TRACE_COLUMN_LIMIT)
}

pub fn reconstruct_padded_with(
    sums: &LineSums,
    keep_trace: bool,
) -> Result<GeneralReconstruction, ReconstructError> {
    let witness = is_consistent(sums);
    if !witness.is_consistent() {
        return Err(ReconstructError::Inconsistent { witness });
    }
    let (image, trace) = reconstruct_via_padding(sums, keep_trace)?;
    finish(sums, ReconstructionPath::Padded, image, trace)
}

fn reconstruct_via_padding(
    sums: &LineSums,
    keep_trace: bool,
) -> Result<(BinaryImage, Option<Vec<StepRecord>>), ReconstructError> {
    let padded = pad(sums);
    let result = reconstruct_with(&padded, keep_trace)?;
    let image = strip(&result.image).map_err(|e| {
        ReconstructError::Internal(format!("padded reconstruction lost its full border: {e}"))
    })?;
    Ok((image, result.trace))
}

fn finish(
    sums: &LineSums,
    path: ReconstructionPath,
    image: BinaryImage,
    trace: Option<Vec<StepRecord>>,
) -> Result<GeneralReconstruction, ReconstructError> {
    if !image.margins().matches(sums) {
        return Err(ReconstructError::Internal(
            "general reconstruction does not match the input sums".into(),
        ));
    }
    let imbalance = alpha(sums)
        .map_err(|e| ReconstructError::Internal(format!("alpha undefined after consistency: {e}")))?;
    let measured = boundary(&image);
    let r1 = u64::from(sums.rows()[0]);
    let c1 = u64::from(sums.cols()[0]);
    let bounds = BoundsReport {
        alpha: imbalance,
        horizontal_alpha_bound: 2 * r1 + 2 * imbalance,
        horizontal_linear_bound: 2 * r1 + 2 * sums.n() as u64 - 2,
        vertical_alpha_bound: 2 * c1 + 2 * imbalance,
        horizontal_measured: measured.horizontal,
        vertical_measured: measured.vertical,
    };
    debug_assert!(bounds.holds(), "boundary bound violated: {bounds:?}");
    Ok(GeneralReconstruction {
        image,
        boundary: measured,
        bounds,
        path,
        trace,
    })
}

/// The coarse imbalance cap `floor(m * n / 4)` valid for every consistent
/// monotone instance; instances with a full first line satisfy the tighter
/// `(m - 1) * (n - 1) / 4`.
pub fn alpha_bound_general(sums: &LineSums) -> Result<u64, ReconstructError> {
    let witness = is_consistent(sums);
    if !witness.is_consistent() {
        return Err(ReconstructError::Inconsistent { witness });
    }
    let imbalance = alpha(sums)
        .map_err(|e| ReconstructError::Internal(format!("alpha undefined after consistency: {e}")))?;
    let (m, n) = (sums.m() as u64, sums.n() as u64);
    debug_assert!(4 * imbalance <= m * n);
    if sums.has_full_first_line() {
        debug_assert!(4 * imbalance <= (m - 1) * (n - 1));
    }
    Ok(m * n / 4)
}
