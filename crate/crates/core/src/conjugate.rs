//! Conjugate (transpose-partition) vectors and the imbalance measure `alpha`.

use thiserror::Error;

use crate::sums::LineSums;

/// Counts, for each `i` in `1..=m`, how many entries of `cols` are at least
/// `i`. For a non-increasing `cols` this is the conjugate partition truncated
/// to `m` parts; it equals the row sums of the column-prefix image.
pub fn conjugate(cols: &[u32], m: usize) -> Vec<u32> {
    debug_assert!(cols.windows(2).all(|w| w[0] >= w[1]));
    let mut out = vec![0u32; m];
    for &c in cols {
        let reach = (c as usize).min(m);
        for entry in &mut out[..reach] {
            *entry += 1;
        }
    }
    out
}

/// The conjugate vector of the column sums together with its deficit against
/// the target row sums: `deficit[i] = conjugate[i] - rows[i]`.
///
/// Positive deficit marks rows where the column-prefix image holds surplus
/// ones, negative ones where it falls short. Indices `i` are 1-based in the
/// accessors, with an implicit zero sentinel at `m + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateProfile {
    b: Vec<u32>,
    d: Vec<i64>,
}

impl ConjugateProfile {
    pub fn new(rows: &[u32], cols: &[u32]) -> Self {
        let b = conjugate(cols, rows.len());
        let d = b
            .iter()
            .zip(rows)
            .map(|(&bi, &ri)| i64::from(bi) - i64::from(ri))
            .collect();
        ConjugateProfile { b, d }
    }

    pub fn from_sums(sums: &LineSums) -> Self {
        Self::new(sums.rows(), sums.cols())
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn conjugate_vector(&self) -> &[u32] {
        &self.b
    }

    pub fn deficit_vector(&self) -> &[i64] {
        &self.d
    }

    /// Conjugate entry at 1-based `i`; zero past the end.
    pub fn conjugate_at(&self, i: usize) -> u32 {
        debug_assert!(i >= 1);
        self.b.get(i - 1).copied().unwrap_or(0)
    }

    /// Deficit entry at 1-based `i`; zero past the end.
    pub fn deficit_at(&self, i: usize) -> i64 {
        debug_assert!(i >= 1);
        self.d.get(i - 1).copied().unwrap_or(0)
    }

    pub fn is_balanced(&self) -> bool {
        self.d.iter().all(|&di| di == 0)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AlphaError {
    #[error("alpha is undefined: row total {row_total} differs from column total {col_total}")]
    SumMismatch { row_total: u64, col_total: u64 },
    #[error("alpha is undefined: a line sum exceeds the grid ({0})")]
    OutOfRange(crate::sums::ValidationError),
}

/// Half the l1 distance between the row sums and the conjugate of the column
/// sums; equivalently the sum of the positive deficits. This is the total
/// number of ones the construction relocates.
pub fn alpha(sums: &LineSums) -> Result<u64, AlphaError> {
    let (row_total, col_total) = (sums.row_total(), sums.col_total());
    if row_total != col_total {
        return Err(AlphaError::SumMismatch {
            row_total,
            col_total,
        });
    }
    sums.check_ranges().map_err(AlphaError::OutOfRange)?;
    let profile = ConjugateProfile::from_sums(sums);
    let positive: i64 = profile.deficit_vector().iter().filter(|&&d| d > 0).sum();
    debug_assert_eq!(
        positive,
        -profile
            .deficit_vector()
            .iter()
            .filter(|&&d| d < 0)
            .sum::<i64>(),
        "deficits must balance once totals match and ranges hold"
    );
    Ok(positive as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sums(rows: &[u32], cols: &[u32]) -> LineSums {
        LineSums::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_of_worked_example_columns() {
        let b = conjugate(&[12, 10, 7, 6, 6, 6, 6, 6, 6, 6, 3], 12);
        assert_eq!(b, vec![11, 11, 11, 10, 10, 10, 3, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn conjugate_of_plateau_columns() {
        assert_eq!(conjugate(&[5, 3, 3, 3, 3], 5), vec![5, 5, 5, 1, 1]);
    }

    #[test]
    fn conjugate_of_single_cell() {
        assert_eq!(conjugate(&[1], 1), vec![1]);
    }

    #[test]
    fn deficit_of_worked_example() {
        let s = sums(
            &[11, 10, 8, 8, 8, 6, 6, 6, 3, 3, 3, 2],
            &[12, 10, 7, 6, 6, 6, 6, 6, 6, 6, 3],
        );
        let profile = ConjugateProfile::from_sums(&s);
        assert_eq!(
            profile.deficit_vector(),
            &[0, 1, 3, 2, 2, 4, -3, -4, -1, -1, -2, -1]
        );
        assert_eq!(alpha(&s).unwrap(), 12);
    }

    #[test]
    fn alpha_of_zigzag_family_instance() {
        // n = 9 instance of the alternating family: alpha = (n - 1) / 2.
        let s = sums(&[9, 8, 8, 6, 6, 4, 4, 2, 2], &[9, 8, 8, 6, 6, 4, 4, 2, 2]);
        assert_eq!(alpha(&s).unwrap(), 4);
    }

    #[test]
    fn alpha_zero_when_rows_equal_conjugate() {
        let s = sums(&[2, 2], &[2, 2]);
        assert_eq!(alpha(&s).unwrap(), 0);
    }

    #[test]
    fn alpha_rejects_sum_mismatch() {
        let s = sums(&[2, 1], &[1, 1]);
        assert_eq!(
            alpha(&s).unwrap_err(),
            AlphaError::SumMismatch {
                row_total: 3,
                col_total: 2,
            }
        );
    }

    #[test]
    fn sentinel_reads_as_zero() {
        let profile = ConjugateProfile::new(&[1, 1], &[2]);
        assert_eq!(profile.deficit_at(3), 0);
        assert_eq!(profile.conjugate_at(3), 0);
    }

    proptest! {
        // Conjugation is an involution on partition shapes: applying it twice
        // (with the grid dimensions swapped) returns the zero-padded input.
        #[test]
        fn conjugate_is_an_involution(raw in proptest::collection::vec(0u32..=8, 1..8), m in 1usize..8) {
            let mut cols = raw;
            cols.sort_unstable_by(|a, b| b.cmp(a));
            for c in &mut cols {
                *c = (*c).min(m as u32);
            }
            let n = cols.len();
            let b = conjugate(&cols, m);
            prop_assert!(b.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(b.first().copied().unwrap_or(0) as usize <= n);
            let back = conjugate(&b, n);
            prop_assert_eq!(back, cols);
        }

        // Total mass is preserved: the conjugate sums to the column total
        // whenever every column fits in m rows.
        #[test]
        fn conjugate_preserves_total(raw in proptest::collection::vec(0u32..=6, 1..7), m in 1usize..7) {
            let mut cols = raw;
            cols.sort_unstable_by(|a, b| b.cmp(a));
            for c in &mut cols {
                *c = (*c).min(m as u32);
            }
            let b = conjugate(&cols, m);
            let total: u64 = cols.iter().map(|&c| u64::from(c)).sum();
            prop_assert_eq!(b.iter().map(|&x| u64::from(x)).sum::<u64>(), total);
        }
    }
}
