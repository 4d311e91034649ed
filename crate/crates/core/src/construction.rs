//! Reconstruction with a small boundary for sums whose first row spans all
//! columns and first column all rows.
//!
//! The engine starts from the column-prefix image of the sums and repeatedly
//! freezes one column: it moves some of that column's ones from the surplus
//! run (rows where the prefix image holds too many ones) down to the deficit
//! run (rows where it holds too few), removes the column, and shrinks the
//! residual problem. When both runs are gone the remaining columns are
//! filled as plain prefixes. An `A` step picks the rows that receive the
//! ones, a `B` step the rows that give them up, in both cases so that the
//! residual row sums stay non-increasing.

use std::fmt;

use thiserror::Error;

use crate::conjugate::ConjugateProfile;
use crate::image::BinaryImage;
use crate::ryser::{is_consistent, Consistency};
use crate::sums::LineSums;

/// Trace entries are kept by default up to this many columns.
pub const TRACE_COLUMN_LIMIT: usize = 64;

/// The two ways a step can rewrite its frozen column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// The column sum lies in the surplus run; the column's ones there move
    /// to freely chosen rows of the deficit run.
    A,
    /// The column ends just above the deficit run; freely chosen surplus
    /// rows donate their ones to extend the column into it.
    B,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::A => write!(f, "A"),
            StepKind::B => write!(f, "B"),
        }
    }
}

/// Markers of a non-contiguous row selection. `t1` and `t2` bound the run of
/// equal row sums that forced the split, `t3` marks the relocated block; the
/// orientation follows the step kind (downward for `A`, upward for `B`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitMarkers {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
}

/// Full record of one step, in 1-based row/column coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// Original index of the frozen column.
    pub column: usize,
    /// Inclusive bounds of the positive-deficit run of rows.
    pub surplus_run: (usize, usize),
    /// Inclusive bounds of the negative-deficit run of rows.
    pub deficit_run: (usize, usize),
    /// Number of ones moved.
    pub moved: u32,
    /// Rows receiving the moved ones (`A`) or donating them (`B`), sorted.
    pub moved_rows: Vec<usize>,
    /// Present when `moved_rows` is not a contiguous interval.
    pub split: Option<SplitMarkers>,
}

/// A column fixed by one step: its original position and final set of ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenColumn {
    pub column: usize,
    pub one_rows: Vec<usize>,
}

/// Maximal runs of positive and negative deficit, 1-based inclusive bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeficitRegions {
    pub surplus: (usize, usize),
    pub deficit: (usize, usize),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("malformed deficit profile: first nonzero deficit at row {index} is negative")]
    LeadingDeficit { index: usize },
    #[error("malformed deficit profile: positive deficits without a negative run")]
    Unbalanced,
}

/// Locates the first maximal run of positive deficits and the first maximal
/// run of negative ones. Returns `None` when the profile is balanced.
pub fn find_regions(profile: &ConjugateProfile) -> Result<Option<DeficitRegions>, ProfileError> {
    let m = profile.len();
    let Some(first) = (1..=m).find(|&i| profile.deficit_at(i) != 0) else {
        return Ok(None);
    };
    if profile.deficit_at(first) < 0 {
        return Err(ProfileError::LeadingDeficit { index: first });
    }
    let mut surplus_end = first;
    while profile.deficit_at(surplus_end + 1) > 0 {
        surplus_end += 1;
    }
    let deficit_start = (surplus_end + 1..=m)
        .find(|&i| profile.deficit_at(i) < 0)
        .ok_or(ProfileError::Unbalanced)?;
    let mut deficit_end = deficit_start;
    while profile.deficit_at(deficit_end + 1) < 0 {
        deficit_end += 1;
    }
    Ok(Some(DeficitRegions {
        surplus: (first, surplus_end),
        deficit: (deficit_start, deficit_end),
    }))
}

/// Row sum at 1-based `i`, reading zero past the end of the grid.
fn sum_at(rows: &[u32], i: usize) -> u32 {
    debug_assert!(i >= 1);
    rows.get(i - 1).copied().unwrap_or(0)
}

/// Picks `count` rows of the deficit run `[deficit_start, deficit_end]` to
/// receive ones, keeping the residual sums non-increasing: whenever a chosen
/// row is followed by an unchosen one, its sum strictly exceeds the next.
///
/// The base block `deficit_start..` is used as is when the row sum drops
/// after it; otherwise the tail of the block that shares its value with the
/// rows below slides down to the end of that equal run.
pub fn select_receiving_rows(
    rows: &[u32],
    deficit_start: usize,
    deficit_end: usize,
    count: usize,
) -> (Vec<usize>, Option<SplitMarkers>) {
    debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
    debug_assert!(count >= 1 && deficit_start + count - 1 <= deficit_end);
    let block_end = deficit_start + count - 1;
    if sum_at(rows, block_end) > sum_at(rows, block_end + 1) {
        return ((deficit_start..=block_end).collect(), None);
    }
    let value = sum_at(rows, block_end);
    let run_first = (deficit_start..=block_end)
        .find(|&t| sum_at(rows, t) == value)
        .expect("block end carries the shared value");
    let mut run_last = block_end + 1;
    while sum_at(rows, run_last + 1) == value {
        run_last += 1;
    }
    let shifted_start = run_last + run_first - deficit_start - count + 1;
    let mut chosen: Vec<usize> = (deficit_start..run_first).collect();
    chosen.extend(shifted_start..=run_last);
    debug_assert_eq!(chosen.len(), count);
    (
        chosen,
        Some(SplitMarkers {
            t1: run_first,
            t2: run_last,
            t3: shifted_start,
        }),
    )
}

/// Picks `count` rows of the surplus run `[surplus_start, surplus_end]` to
/// donate ones, keeping the residual sums non-increasing: whenever an
/// unchosen row is followed by a chosen one, its sum strictly exceeds the
/// next.
///
/// Mirror of [`select_receiving_rows`]: the base block ending at
/// `surplus_end` is used as is when the row sum drops into it; otherwise the
/// head of the block that shares its value with the rows above slides up to
/// the start of that equal run.
pub fn select_donor_rows(
    rows: &[u32],
    surplus_start: usize,
    surplus_end: usize,
    count: usize,
) -> (Vec<usize>, Option<SplitMarkers>) {
    debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
    debug_assert!(count >= 1 && surplus_start + count - 1 <= surplus_end);
    let block_start = surplus_end - count + 1;
    if block_start == surplus_start || sum_at(rows, block_start - 1) > sum_at(rows, block_start) {
        return ((block_start..=surplus_end).collect(), None);
    }
    let value = sum_at(rows, block_start);
    let run_last = (block_start..=surplus_end)
        .rev()
        .find(|&t| sum_at(rows, t) == value)
        .expect("block start carries the shared value");
    let mut run_first = block_start - 1;
    while run_first > surplus_start && sum_at(rows, run_first - 1) == value {
        run_first -= 1;
    }
    let shifted_end = run_first + (run_last - block_start);
    let mut chosen: Vec<usize> = (run_first..=shifted_end).collect();
    chosen.extend(run_last + 1..=surplus_end);
    debug_assert_eq!(chosen.len(), count);
    (
        chosen,
        Some(SplitMarkers {
            t1: run_last,
            t2: run_first,
            t3: shifted_end,
        }),
    )
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("line sums are inconsistent: {witness}")]
    Inconsistent { witness: Consistency },
    #[error(
        "direct construction requires a full first line: r1={r1} with {n} columns, c1={c1} with {m} rows"
    )]
    MissingFullFirstLine { r1: u32, n: usize, c1: u32, m: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl fmt::Display for Consistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Consistency::Consistent => write!(f, "consistent"),
            Consistency::SumMismatch {
                row_total,
                col_total,
            } => write!(f, "row total {row_total} differs from column total {col_total}"),
            Consistency::PrefixViolation {
                k,
                conjugate_prefix,
                row_prefix,
            } => write!(
                f,
                "prefix {k}: conjugate sum {conjugate_prefix} is less than row sum {row_prefix}"
            ),
        }
    }
}

fn internal(reason: impl Into<String>) -> ReconstructError {
    ReconstructError::Internal(reason.into())
}

/// Residual reconstruction problem after some columns have been frozen.
///
/// `target_rows` are the row sums the final image still owes; the not yet
/// frozen columns are implicitly arranged as the column-prefix image of the
/// remaining sums, so the deficit profile compares that prefix image against
/// the targets.
#[derive(Clone, Debug)]
pub struct ReconState {
    target_rows: Vec<u32>,
    /// Original 1-based index and sum of each remaining column, in original
    /// order.
    remaining: Vec<(usize, u32)>,
    profile: ConjugateProfile,
    total_rows: usize,
}

/// Result of one engine step.
#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum StepOutcome {
    /// The deficit profile is balanced; remaining columns are pure prefixes.
    Done,
    Step {
        state: ReconState,
        frozen: FrozenColumn,
        record: StepRecord,
    },
}

impl ReconState {
    pub fn new(sums: &LineSums) -> Result<Self, ReconstructError> {
        if !sums.has_full_first_line() {
            return Err(ReconstructError::MissingFullFirstLine {
                r1: sums.rows()[0],
                n: sums.n(),
                c1: sums.cols()[0],
                m: sums.m(),
            });
        }
        let witness = is_consistent(sums);
        if !witness.is_consistent() {
            return Err(ReconstructError::Inconsistent { witness });
        }
        let remaining = sums
            .cols()
            .iter()
            .enumerate()
            .map(|(j, &c)| (j + 1, c))
            .collect();
        Self::from_parts(sums.rows().to_vec(), remaining, sums.m())
    }

    fn from_parts(
        target_rows: Vec<u32>,
        remaining: Vec<(usize, u32)>,
        total_rows: usize,
    ) -> Result<Self, ReconstructError> {
        if target_rows.windows(2).any(|w| w[1] > w[0]) {
            return Err(internal("residual row sums are not non-increasing"));
        }
        if remaining.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(internal("residual column sums are not non-increasing"));
        }
        let row_total: u64 = target_rows.iter().map(|&r| u64::from(r)).sum();
        let col_total: u64 = remaining.iter().map(|&(_, c)| u64::from(c)).sum();
        if row_total != col_total {
            return Err(internal(format!(
                "residual totals diverged: rows {row_total}, columns {col_total}"
            )));
        }
        if let Some(&(_, first_col)) = remaining.first() {
            if target_rows[0] as usize != remaining.len() {
                return Err(internal(format!(
                    "first residual row sum {} does not cover the {} remaining columns",
                    target_rows[0],
                    remaining.len()
                )));
            }
            if first_col as usize != total_rows {
                return Err(internal(format!(
                    "first remaining column sum {first_col} does not cover all {total_rows} rows"
                )));
            }
        }
        let col_sums: Vec<u32> = remaining.iter().map(|&(_, c)| c).collect();
        let profile = ConjugateProfile::new(&target_rows, &col_sums);
        let mut conjugate_prefix = 0u64;
        let mut row_prefix = 0u64;
        for i in 1..=target_rows.len() {
            conjugate_prefix += u64::from(profile.conjugate_at(i));
            row_prefix += u64::from(sum_at(&target_rows, i));
            if conjugate_prefix < row_prefix {
                return Err(internal(format!(
                    "residual sums lost consistency at prefix {i}"
                )));
            }
        }
        Ok(ReconState {
            target_rows,
            remaining,
            profile,
            total_rows,
        })
    }

    pub fn target_rows(&self) -> &[u32] {
        &self.target_rows
    }

    pub fn remaining(&self) -> &[(usize, u32)] {
        &self.remaining
    }

    pub fn profile(&self) -> &ConjugateProfile {
        &self.profile
    }

    /// Executes one step, freezing one column, or reports completion.
    pub fn advance(&self) -> Result<StepOutcome, ReconstructError> {
        let regions = match find_regions(&self.profile) {
            Ok(Some(regions)) => regions,
            Ok(None) => return Ok(StepOutcome::Done),
            Err(e) => return Err(internal(e.to_string())),
        };
        let (surplus_start, surplus_end) = regions.surplus;
        let (deficit_start, deficit_end) = regions.deficit;
        let surplus_len = surplus_end - surplus_start + 1;
        let deficit_len = deficit_end - deficit_start + 1;

        let (kind, position, moved_rows, split, moved);
        if surplus_len <= deficit_len {
            // A step: rightmost column whose sum lies in the surplus run.
            let Some(pos) = self
                .remaining
                .iter()
                .rposition(|&(_, c)| (surplus_start..=surplus_end).contains(&(c as usize)))
            else {
                return Err(internal("no column with sum in the surplus run"));
            };
            let column_sum = self.remaining[pos].1 as usize;
            if column_sum < surplus_start {
                return Err(internal("surplus column shorter than the run start"));
            }
            let count = column_sum - surplus_start + 1;
            if count > deficit_len {
                return Err(internal("more ones to move than deficit rows"));
            }
            let (rows, markers) =
                select_receiving_rows(&self.target_rows, deficit_start, deficit_end, count);
            kind = StepKind::A;
            position = pos;
            moved = count;
            split = markers;
            moved_rows = rows;
        } else {
            // B step: leftmost column whose sum sits just above the deficit run.
            let Some(pos) = self
                .remaining
                .iter()
                .position(|&(_, c)| (deficit_start..=deficit_end).contains(&(c as usize + 1)))
            else {
                return Err(internal("no column with sum bordering the deficit run"));
            };
            let column_sum = self.remaining[pos].1 as usize;
            let count = deficit_end - column_sum;
            if count > surplus_len {
                return Err(internal("more ones to donate than surplus rows"));
            }
            let (rows, markers) =
                select_donor_rows(&self.target_rows, surplus_start, surplus_end, count);
            kind = StepKind::B;
            position = pos;
            moved = count;
            split = markers;
            moved_rows = rows;
        }

        let (column, column_sum) = self.remaining[position];
        let one_rows: Vec<usize> = match kind {
            StepKind::A => {
                let mut rows: Vec<usize> = (1..surplus_start).collect();
                rows.extend(&moved_rows);
                rows
            }
            StepKind::B => {
                let mut rows: Vec<usize> = (1..=column_sum as usize)
                    .filter(|i| !moved_rows.contains(i))
                    .collect();
                rows.extend(column_sum as usize + 1..=deficit_end);
                rows
            }
        };
        if one_rows.len() != column_sum as usize {
            return Err(internal(format!(
                "frozen column {column} received {} ones instead of {column_sum}",
                one_rows.len()
            )));
        }

        let mut target_rows = self.target_rows.clone();
        for &i in &one_rows {
            let slot = target_rows
                .get_mut(i - 1)
                .ok_or_else(|| internal(format!("frozen one in row {i} beyond the grid")))?;
            *slot = slot
                .checked_sub(1)
                .ok_or_else(|| internal(format!("row {i} target decremented below zero")))?;
        }
        let mut remaining = self.remaining.clone();
        remaining.remove(position);

        let record = StepRecord {
            kind,
            column,
            surplus_run: regions.surplus,
            deficit_run: regions.deficit,
            moved: moved as u32,
            moved_rows,
            split,
        };
        let frozen = FrozenColumn { column, one_rows };
        let state = Self::from_parts(target_rows, remaining, self.total_rows)?;
        Ok(StepOutcome::Step {
            state,
            frozen,
            record,
        })
    }
}

/// A reconstructed image together with its step trace (when retained).
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub image: BinaryImage,
    pub trace: Option<Vec<StepRecord>>,
}

/// Runs the construction to completion. Requires monotone consistent sums
/// with a full first row and column; the result matches the sums exactly.
/// The trace is retained when the grid has at most [`TRACE_COLUMN_LIMIT`]
/// columns; use [`reconstruct_with`] to override.
pub fn reconstruct(sums: &LineSums) -> Result<Reconstruction, ReconstructError> {
    reconstruct_with(sums, sums.n() <= TRACE_COLUMN_LIMIT)
}

pub fn reconstruct_with(
    sums: &LineSums,
    keep_trace: bool,
) -> Result<Reconstruction, ReconstructError> {
    let mut state = ReconState::new(sums)?;
    let mut frozen: Vec<FrozenColumn> = Vec::new();
    let mut trace: Vec<StepRecord> = Vec::new();
    let mut finished = false;
    for _ in 0..=sums.n() {
        match state.advance()? {
            StepOutcome::Done => {
                finished = true;
                break;
            }
            StepOutcome::Step {
                state: next,
                frozen: column,
                record,
            } => {
                frozen.push(column);
                if keep_trace {
                    trace.push(record);
                }
                state = next;
            }
        }
    }
    if !finished {
        return Err(internal("construction did not settle within n steps"));
    }

    let mut image = BinaryImage::new(sums.m(), sums.n());
    for column in &frozen {
        for &i in &column.one_rows {
            image.set(i, column.column, true);
        }
    }
    for &(column, sum) in state.remaining() {
        for i in 1..=sum as usize {
            image.set(i, column, true);
        }
    }
    if !image.margins().matches(sums) {
        return Err(internal("assembled image does not match the input sums"));
    }
    Ok(Reconstruction {
        image,
        trace: keep_trace.then_some(trace),
    })
}

/// A violation found while replaying a trace against its input sums.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("trace step {step}: {reason}")]
pub struct TraceError {
    /// 1-based step number.
    pub step: usize,
    pub reason: String,
}

/// Replays a trace independently of the engine: checks region shapes, step
/// kinds, moved-row membership and descent properties, and that the implied
/// row decrements keep the residual sums non-increasing.
pub fn validate_trace(sums: &LineSums, trace: &[StepRecord]) -> Result<(), TraceError> {
    let fail = |step: usize, reason: String| Err(TraceError { step, reason });
    let m = sums.m();
    let n = sums.n();
    let mut rows = sums.rows().to_vec();
    let mut frozen = vec![false; n];
    for (index, record) in trace.iter().enumerate() {
        let step = index + 1;
        let (s1, s2) = record.surplus_run;
        let (d1, d2) = record.deficit_run;
        if !(1 <= s1 && s1 <= s2 && s2 < d1 && d1 <= d2 && d2 <= m) {
            return fail(step, format!("malformed runs {s1}..{s2}, {d1}..{d2}"));
        }
        if record.column < 1 || record.column > n {
            return fail(step, format!("column {} out of range", record.column));
        }
        if frozen[record.column - 1] {
            return fail(step, format!("column {} frozen twice", record.column));
        }
        frozen[record.column - 1] = true;
        let column_sum = sums.cols()[record.column - 1] as usize;

        let chosen = &record.moved_rows;
        if chosen.len() != record.moved as usize {
            return fail(step, "moved row count disagrees with moved".into());
        }
        if chosen.windows(2).any(|w| w[1] <= w[0]) {
            return fail(step, "moved rows not strictly increasing".into());
        }
        let in_chosen = |i: usize| chosen.binary_search(&i).is_ok();

        let one_rows: Vec<usize> = match record.kind {
            StepKind::A => {
                if s2 - s1 + 1 > d2 - d1 + 1 {
                    return fail(step, "A step with surplus run longer than deficit run".into());
                }
                if !(s1..=s2).contains(&column_sum) {
                    return fail(step, "A step column sum outside the surplus run".into());
                }
                if record.moved as usize != column_sum - s1 + 1 {
                    return fail(step, "A step moved count mismatch".into());
                }
                if chosen.iter().any(|&i| !(d1..=d2).contains(&i)) {
                    return fail(step, "A step moved rows leave the deficit run".into());
                }
                // Exit descent: a chosen row not followed by a chosen row must
                // strictly dominate its successor.
                for &i in chosen {
                    if !in_chosen(i + 1) && sum_at(&rows, i) <= sum_at(&rows, i + 1) {
                        return fail(step, format!("exit descent fails at row {i}"));
                    }
                }
                let mut ones: Vec<usize> = (1..s1).collect();
                ones.extend(chosen.iter().copied());
                ones
            }
            StepKind::B => {
                if s2 - s1 <= d2 - d1 {
                    return fail(step, "B step with surplus run not longer than deficit run".into());
                }
                if !(d1..=d2).contains(&(column_sum + 1)) {
                    return fail(step, "B step column sum not bordering the deficit run".into());
                }
                if record.moved as usize != d2 - column_sum {
                    return fail(step, "B step moved count mismatch".into());
                }
                if chosen.iter().any(|&i| !(s1..=s2).contains(&i)) {
                    return fail(step, "B step moved rows leave the surplus run".into());
                }
                // Entry descent: the row before a leading chosen row must
                // strictly dominate it.
                for &i in chosen {
                    if i > 1 && !in_chosen(i - 1) && sum_at(&rows, i - 1) <= sum_at(&rows, i) {
                        return fail(step, format!("entry descent fails before row {i}"));
                    }
                }
                let mut ones: Vec<usize> =
                    (1..=column_sum).filter(|&i| !in_chosen(i)).collect();
                ones.extend(column_sum + 1..=d2);
                ones
            }
        };
        if one_rows.len() != column_sum {
            return fail(step, "frozen column sum changed".into());
        }
        for &i in &one_rows {
            if i > m || rows[i - 1] == 0 {
                return fail(step, format!("row {i} cannot absorb another one"));
            }
            rows[i - 1] -= 1;
        }
        if rows.windows(2).any(|w| w[1] > w[0]) {
            return fail(step, "residual row sums stopped being non-increasing".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate::alpha;

    fn sums(rows: &[u32], cols: &[u32]) -> LineSums {
        LineSums::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    fn worked_example() -> LineSums {
        sums(
            &[11, 10, 8, 8, 8, 6, 6, 6, 3, 3, 3, 2],
            &[12, 10, 7, 6, 6, 6, 6, 6, 6, 6, 3],
        )
    }

    #[test]
    fn regions_of_worked_example_profile() {
        let profile = ConjugateProfile::from_sums(&worked_example());
        let regions = find_regions(&profile).unwrap().unwrap();
        assert_eq!(regions.surplus, (2, 6));
        assert_eq!(regions.deficit, (7, 12));
    }

    #[test]
    fn regions_of_single_element_runs() {
        let profile = ConjugateProfile::new(&[2, 0, 1], &[2, 1]);
        assert_eq!(profile.deficit_vector(), &[0, 1, -1]);
        let regions = find_regions(&profile).unwrap().unwrap();
        assert_eq!(regions.surplus, (2, 2));
        assert_eq!(regions.deficit, (3, 3));
    }

    #[test]
    fn regions_of_balanced_profile() {
        let profile = ConjugateProfile::new(&[2, 2], &[2, 2]);
        assert_eq!(find_regions(&profile).unwrap(), None);
    }

    #[test]
    fn leading_deficit_is_rejected() {
        let profile = ConjugateProfile::new(&[3, 1], &[2, 2]);
        assert_eq!(profile.deficit_vector(), &[-1, 1]);
        assert_eq!(
            find_regions(&profile),
            Err(ProfileError::LeadingDeficit { index: 1 })
        );
    }

    #[test]
    fn receiving_rows_contiguous_when_sum_drops() {
        // Worked example step 1: deficit run 7..12, two ones to place.
        let rows = [11, 10, 8, 8, 8, 6, 6, 6, 3, 3, 3, 2];
        let (chosen, split) = select_receiving_rows(&rows, 7, 12, 2);
        assert_eq!(chosen, vec![7, 8]);
        assert!(split.is_none());
    }

    #[test]
    fn receiving_rows_split_around_equal_run() {
        // Worked example step 2: residual rows after the first step.
        let rows = [10, 10, 8, 8, 8, 6, 5, 5, 3, 3, 3, 2];
        let (chosen, split) = select_receiving_rows(&rows, 7, 12, 4);
        assert_eq!(chosen, vec![7, 8, 10, 11]);
        assert_eq!(
            split,
            Some(SplitMarkers {
                t1: 9,
                t2: 11,
                t3: 10,
            })
        );
    }

    #[test]
    fn receiving_rows_at_grid_bottom() {
        // Worked example step 5: deficit run 11..12 reaching the last row.
        let rows = [7, 7, 7, 7, 6, 6, 2, 2, 2, 2, 2, 2];
        let (chosen, split) = select_receiving_rows(&rows, 11, 12, 2);
        assert_eq!(chosen, vec![11, 12]);
        assert!(split.is_none());
    }

    #[test]
    fn donor_rows_split_when_values_tie() {
        // Worked example step 3: surplus run 3..6, two donors.
        let rows = [9, 9, 8, 8, 8, 6, 4, 4, 3, 2, 2, 2];
        let (chosen, split) = select_donor_rows(&rows, 3, 6, 2);
        assert_eq!(chosen, vec![3, 6]);
        assert_eq!(
            split,
            Some(SplitMarkers {
                t1: 5,
                t2: 3,
                t3: 3,
            })
        );
    }

    #[test]
    fn donor_rows_split_inside_run() {
        // Worked example step 4.
        let rows = [8, 8, 8, 7, 7, 6, 3, 3, 2, 2, 2, 2];
        let (chosen, split) = select_donor_rows(&rows, 4, 6, 2);
        assert_eq!(chosen, vec![4, 6]);
        assert!(split.is_some());
    }

    #[test]
    fn donor_rows_contiguous_on_strict_descent() {
        let rows = [9, 8, 7, 6, 5, 4, 2, 1];
        let (chosen, split) = select_donor_rows(&rows, 2, 5, 2);
        assert_eq!(chosen, vec![4, 5]);
        assert!(split.is_none());
    }

    #[test]
    fn worked_example_reproduces_published_trace() {
        let input = worked_example();
        let result = reconstruct(&input).unwrap();
        let trace = result.trace.as_deref().unwrap();
        let kinds: Vec<StepKind> = trace.iter().map(|r| r.kind).collect();
        assert_eq!(
            kinds,
            vec![StepKind::A, StepKind::A, StepKind::B, StepKind::B, StepKind::A]
        );
        let columns: Vec<usize> = trace.iter().map(|r| r.column).collect();
        assert_eq!(columns, vec![11, 10, 3, 4, 9]);
        let moved: Vec<Vec<usize>> = trace.iter().map(|r| r.moved_rows.clone()).collect();
        assert_eq!(
            moved,
            vec![
                vec![7, 8],
                vec![7, 8, 10, 11],
                vec![3, 6],
                vec![4, 6],
                vec![11, 12],
            ]
        );
        assert!(result.image.margins().matches(&input));
    }

    #[test]
    fn worked_example_first_step_freezes_expected_column() {
        let state = ReconState::new(&worked_example()).unwrap();
        let StepOutcome::Step { frozen, record, .. } = state.advance().unwrap() else {
            panic!("first step must act");
        };
        assert_eq!(record.kind, StepKind::A);
        assert_eq!(frozen.column, 11);
        assert_eq!(frozen.one_rows, vec![1, 7, 8]);
    }

    #[test]
    fn worked_example_third_step_is_b_step() {
        let mut state = ReconState::new(&worked_example()).unwrap();
        for _ in 0..2 {
            let StepOutcome::Step { state: next, .. } = state.advance().unwrap() else {
                panic!("expected a step");
            };
            state = next;
        }
        let StepOutcome::Step { frozen, record, .. } = state.advance().unwrap() else {
            panic!("expected a step");
        };
        assert_eq!(record.kind, StepKind::B);
        assert_eq!(record.surplus_run, (3, 6));
        assert_eq!(record.deficit_run, (7, 9));
        assert_eq!(frozen.column, 3);
        assert_eq!(frozen.one_rows, vec![1, 2, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn balanced_profile_reconstructs_as_prefix_image() {
        let input = sums(&[2, 2], &[2, 2]);
        let result = reconstruct(&input).unwrap();
        assert_eq!(result.trace.as_deref(), Some(&[][..]));
        assert_eq!(
            result.image,
            crate::ryser::canonical_neighbour(&input).unwrap()
        );
    }

    #[test]
    fn single_cell_reconstructs() {
        let result = reconstruct(&sums(&[1], &[1])).unwrap();
        assert!(result.image.get(1, 1));
    }

    #[test]
    fn rejects_missing_full_first_line() {
        let err = reconstruct(&sums(&[1, 1], &[1, 1])).unwrap_err();
        assert!(matches!(err, ReconstructError::MissingFullFirstLine { .. }));
        let err = reconstruct(&sums(&[2, 2], &[2, 1, 1])).unwrap_err();
        assert!(matches!(err, ReconstructError::MissingFullFirstLine { .. }));
    }

    #[test]
    fn rejects_inconsistent_sums() {
        let err = reconstruct(&sums(&[3, 3, 2], &[3, 3, 1])).unwrap_err();
        assert!(matches!(err, ReconstructError::Inconsistent { .. }));
    }

    #[test]
    fn trace_skipped_above_column_limit() {
        let result = reconstruct_with(&worked_example(), false).unwrap();
        assert!(result.trace.is_none());
    }

    #[test]
    fn trace_validates_and_conserves_alpha() {
        let input = worked_example();
        let result = reconstruct(&input).unwrap();
        let trace = result.trace.as_deref().unwrap();
        validate_trace(&input, trace).unwrap();
        let total_moved: u64 = trace.iter().map(|r| u64::from(r.moved)).sum();
        assert_eq!(total_moved, alpha(&input).unwrap());
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let input = worked_example();
        let result = reconstruct(&input).unwrap();
        let mut trace = result.trace.unwrap();
        trace[0].moved_rows = vec![7, 9];
        let err = validate_trace(&input, &trace).unwrap_err();
        assert_eq!(err.step, 1);
    }

    #[test]
    fn reconstruction_is_deterministic() {
        let input = worked_example();
        let first = reconstruct(&input).unwrap();
        let second = reconstruct(&input).unwrap();
        assert_eq!(first.image, second.image);
        assert_eq!(first.trace, second.trace);
    }

    #[test]
    fn each_step_shrinks_the_deficit_by_twice_the_moved_count() {
        let total_deficit = |state: &ReconState| -> u64 {
            state
                .profile()
                .deficit_vector()
                .iter()
                .map(|d| d.unsigned_abs())
                .sum()
        };
        let mut state = ReconState::new(&worked_example()).unwrap();
        let mut columns_left = state.remaining().len();
        loop {
            let before = total_deficit(&state);
            match state.advance().unwrap() {
                StepOutcome::Done => {
                    assert_eq!(before, 0);
                    break;
                }
                StepOutcome::Step {
                    state: next,
                    record,
                    ..
                } => {
                    assert_eq!(
                        total_deficit(&next),
                        before - 2 * u64::from(record.moved),
                        "step on column {} broke conservation",
                        record.column
                    );
                    assert_eq!(next.remaining().len(), columns_left - 1);
                    columns_left -= 1;
                    state = next;
                }
            }
        }
    }

    mod properties {
        use super::*;
        use crate::boundary::boundary;
        use crate::conjugate::alpha;
        use crate::sums::Margins;
        use proptest::prelude::*;

        /// Margins of a random image whose first row and column are forced
        /// full, sorted: a consistent instance with a full first line.
        fn direct_instances() -> impl Strategy<Value = LineSums> {
            (1usize..9, 1usize..9)
                .prop_flat_map(|(m, n)| {
                    (
                        Just(m),
                        Just(n),
                        proptest::collection::vec(proptest::bool::ANY, m * n),
                    )
                })
                .prop_map(|(m, n, cells)| {
                    let mut rows = vec![0u32; m];
                    let mut cols = vec![0u32; n];
                    for (k, v) in cells.into_iter().enumerate() {
                        let (i, j) = (k / n, k % n);
                        if v || i == 0 || j == 0 {
                            rows[i] += 1;
                            cols[j] += 1;
                        }
                    }
                    Margins { rows, cols }.sorted().sums
                })
        }

        proptest! {
            #[test]
            fn construction_satisfies_sums_and_bounds(input in direct_instances()) {
                let result = reconstruct_with(&input, true).unwrap();
                prop_assert!(result.image.margins().matches(&input));

                let trace = result.trace.as_deref().unwrap();
                validate_trace(&input, trace).unwrap();
                let moved: u64 = trace.iter().map(|r| u64::from(r.moved)).sum();
                let imbalance = alpha(&input).unwrap();
                prop_assert_eq!(moved, imbalance);

                let measured = boundary(&result.image);
                let (m, n) = (input.m() as u64, input.n() as u64);
                prop_assert!(measured.horizontal <= 2 * n + 2 * imbalance);
                prop_assert!(measured.vertical <= 2 * m + 2 * imbalance);
                if n >= 2 {
                    prop_assert!(measured.horizontal <= 4 * n - 4);
                }
            }
        }
    }
}
