//! Consistency of line sums and the column-prefix image.

use crate::conjugate::{conjugate, ConjugateProfile};
use crate::image::BinaryImage;
use crate::sums::{LineSums, ValidationError};

/// Verdict of the consistency check, with a witness on failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// Row and column totals disagree, so no image can satisfy both.
    SumMismatch { row_total: u64, col_total: u64 },
    /// The first prefix `k` where the conjugate falls short of the row sums.
    PrefixViolation {
        k: usize,
        conjugate_prefix: u64,
        row_prefix: u64,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

/// Decides whether an image with the given monotone sums exists: the totals
/// must agree and every prefix of the conjugate vector must dominate the
/// corresponding prefix of the row sums.
pub fn is_consistent(sums: &LineSums) -> Consistency {
    let (row_total, col_total) = (sums.row_total(), sums.col_total());
    if row_total != col_total {
        return Consistency::SumMismatch {
            row_total,
            col_total,
        };
    }
    let b = conjugate(sums.cols(), sums.m());
    let mut conjugate_prefix = 0u64;
    let mut row_prefix = 0u64;
    for (k, (&bi, &ri)) in b.iter().zip(sums.rows()).enumerate() {
        conjugate_prefix += u64::from(bi);
        row_prefix += u64::from(ri);
        if conjugate_prefix < row_prefix {
            return Consistency::PrefixViolation {
                k: k + 1,
                conjugate_prefix,
                row_prefix,
            };
        }
    }
    // Columns taller than the grid lose mass in the conjugate, so they fail
    // the final prefix above; reaching this point implies full conjugate mass.
    debug_assert_eq!(conjugate_prefix, col_total);
    Consistency::Consistent
}

/// The column-prefix image of the sums: column `j` holds ones exactly in rows
/// `1..=c_j`. Its column sums are the input columns and its row sums are the
/// conjugate vector, making it the unique image with those two properties.
/// It depends only on the column sums and the row count.
pub fn canonical_neighbour(sums: &LineSums) -> Result<BinaryImage, ValidationError> {
    sums.check_ranges()?;
    let mut image = BinaryImage::new(sums.m(), sums.n());
    for (j, &c) in sums.cols().iter().enumerate() {
        for i in 1..=c as usize {
            image.set(i, j + 1, true);
        }
    }
    Ok(image)
}

/// True when the column-prefix image already satisfies the row sums, which
/// happens exactly when the imbalance `alpha` is zero.
pub fn neighbour_satisfies_rows(sums: &LineSums) -> bool {
    ConjugateProfile::from_sums(sums).is_balanced()
}
