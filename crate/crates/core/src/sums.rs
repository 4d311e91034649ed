//! Line sums: the row/column projections a reconstruction must satisfy.

use std::fmt;

use thiserror::Error;

/// Largest supported grid side. Keeps dense grids and profile scans cheap.
pub const MAX_DIMENSION: usize = 10_000;

/// Which axis a validation error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Rows => write!(f, "rows"),
            Axis::Cols => write!(f, "cols"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("{axis} must contain at least one entry")]
    Empty { axis: Axis },
    #[error("{axis} has {len} entries, more than the supported maximum {max}")]
    TooLarge { axis: Axis, len: usize, max: usize },
    #[error("{axis} must be non-increasing: entry {index} is {value} but entry {} is {previous}", index - 1)]
    NotMonotone {
        axis: Axis,
        /// 1-based position of the first entry larger than its predecessor.
        index: usize,
        value: u32,
        previous: u32,
    },
    #[error("{axis} entry {index} is {value}, larger than the cross dimension {limit}")]
    OutOfRange {
        axis: Axis,
        /// 1-based position of the offending entry.
        index: usize,
        value: u32,
        limit: usize,
    },
}

fn check_monotone(axis: Axis, values: &[u32]) -> Result<(), ValidationError> {
    if values.is_empty() {
        return Err(ValidationError::Empty { axis });
    }
    if values.len() > MAX_DIMENSION {
        return Err(ValidationError::TooLarge {
            axis,
            len: values.len(),
            max: MAX_DIMENSION,
        });
    }
    for (i, pair) in values.windows(2).enumerate() {
        if pair[1] > pair[0] {
            return Err(ValidationError::NotMonotone {
                axis,
                index: i + 2,
                value: pair[1],
                previous: pair[0],
            });
        }
    }
    Ok(())
}

/// Monotone row and column sums.
///
/// Construction enforces the standing assumptions of the whole crate:
/// both sequences are non-empty, non-increasing, and no longer than
/// [`MAX_DIMENSION`]. Entries are *not* clamped to the cross dimension, so
/// infeasible requests like a column sum larger than the row count remain
/// representable; the consistency check classifies them as inconsistent
/// rather than rejecting them up front. Use [`LineSums::check_ranges`] for
/// the stricter per-entry range test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSums {
    rows: Vec<u32>,
    cols: Vec<u32>,
}

impl LineSums {
    pub fn new(rows: Vec<u32>, cols: Vec<u32>) -> Result<Self, ValidationError> {
        check_monotone(Axis::Rows, &rows)?;
        check_monotone(Axis::Cols, &cols)?;
        Ok(LineSums { rows, cols })
    }

    /// Number of rows (`m`).
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (`n`).
    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn row_total(&self) -> u64 {
        self.rows.iter().map(|&r| u64::from(r)).sum()
    }

    pub fn col_total(&self) -> u64 {
        self.cols.iter().map(|&c| u64::from(c)).sum()
    }

    /// Checks that every row sum fits in `n` columns and every column sum in
    /// `m` rows.
    pub fn check_ranges(&self) -> Result<(), ValidationError> {
        let (m, n) = (self.m(), self.n());
        if let Some(i) = self.rows.iter().position(|&r| r as usize > n) {
            return Err(ValidationError::OutOfRange {
                axis: Axis::Rows,
                index: i + 1,
                value: self.rows[i],
                limit: n,
            });
        }
        if let Some(j) = self.cols.iter().position(|&c| c as usize > m) {
            return Err(ValidationError::OutOfRange {
                axis: Axis::Cols,
                index: j + 1,
                value: self.cols[j],
                limit: m,
            });
        }
        Ok(())
    }

    /// True when the first row spans all columns and the first column all
    /// rows, the precondition of the direct construction.
    pub fn has_full_first_line(&self) -> bool {
        self.rows[0] as usize == self.n() && self.cols[0] as usize == self.m()
    }

    /// Swaps the roles of rows and columns.
    pub fn transposed(&self) -> LineSums {
        LineSums {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

/// Raw per-row and per-column one counts of a concrete image, in grid order.
/// Unlike [`LineSums`] these are not necessarily monotone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Margins {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl Margins {
    /// Sorts both axes non-increasingly, returning the monotone sums together
    /// with the permutation applied to each axis.
    pub fn sorted(&self) -> SortedMargins {
        let (rows, row_order) = sort_non_increasing(&self.rows);
        let (cols, col_order) = sort_non_increasing(&self.cols);
        let sums = LineSums::new(rows, cols).expect("sorted margins are monotone");
        SortedMargins {
            sums,
            row_order,
            col_order,
        }
    }

    /// True when these margins equal the given monotone sums entry for entry.
    pub fn matches(&self, sums: &LineSums) -> bool {
        self.rows == sums.rows() && self.cols == sums.cols()
    }
}

/// Result of sorting raw margins: monotone sums plus the permutations that
/// map sorted positions back to the original lines.
#[derive(Clone, Debug)]
pub struct SortedMargins {
    pub sums: LineSums,
    /// `row_order[k]` is the 1-based original row index now at sorted row k+1.
    pub row_order: Vec<usize>,
    /// `col_order[k]` is the 1-based original column index now at sorted
    /// column k+1.
    pub col_order: Vec<usize>,
}

fn sort_non_increasing(values: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let order = order.into_iter().map(|i| i + 1).collect();
    (sorted, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sums(rows: &[u32], cols: &[u32]) -> LineSums {
        LineSums::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn accepts_worked_example_sums() {
        let s = sums(
            &[11, 10, 8, 8, 8, 6, 6, 6, 3, 3, 3, 2],
            &[12, 10, 7, 6, 6, 6, 6, 6, 6, 6, 3],
        );
        assert_eq!(s.row_total(), 74);
        assert_eq!(s.col_total(), 74);
        assert!(s.check_ranges().is_ok());
        assert!(s.has_full_first_line());
    }

    #[test]
    fn accepts_single_cell() {
        let s = sums(&[1], &[1]);
        assert_eq!((s.m(), s.n()), (1, 1));
        assert!(s.check_ranges().is_ok());
    }

    #[test]
    fn rejects_increasing_rows() {
        let err = LineSums::new(vec![1, 2], vec![2, 1]).unwrap_err();
        assert_eq!(
            err,
            ValidationError::NotMonotone {
                axis: Axis::Rows,
                index: 2,
                value: 2,
                previous: 1,
            }
        );
    }

    #[test]
    fn rejects_empty_axis() {
        let err = LineSums::new(vec![], vec![1]).unwrap_err();
        assert!(matches!(err, ValidationError::Empty { axis: Axis::Rows }));
    }

    #[test]
    fn range_check_flags_oversized_column() {
        let s = sums(&[2, 2], &[3, 1]);
        let err = s.check_ranges().unwrap_err();
        assert_eq!(
            err,
            ValidationError::OutOfRange {
                axis: Axis::Cols,
                index: 1,
                value: 3,
                limit: 2,
            }
        );
    }

    #[test]
    fn zero_sums_are_permitted() {
        let s = sums(&[1, 0], &[1, 0]);
        assert!(s.check_ranges().is_ok());
        assert_eq!(s.row_total(), 1);
    }

    #[test]
    fn sorting_reports_permutations() {
        let margins = Margins {
            rows: vec![1, 3, 2],
            cols: vec![2, 2, 1, 1],
        };
        let sorted = margins.sorted();
        assert_eq!(sorted.sums.rows(), &[3, 2, 1]);
        assert_eq!(sorted.row_order, vec![2, 3, 1]);
        assert_eq!(sorted.sums.cols(), &[2, 2, 1, 1]);
        assert_eq!(sorted.col_order, vec![1, 2, 3, 4]);
    }
}
