//! Boundary length of a binary image under 4-adjacency.
//!
//! The boundary is the set of adjacent cell pairs with differing values,
//! counted against the infinite zero background, so ones on the grid border
//! contribute. Pairs that share a column (vertical neighbours) form the
//! *horizontal* boundary; pairs that share a row form the *vertical*
//! boundary. Each maximal run of ones in a column contributes exactly two
//! horizontal pieces, and likewise per row for the vertical boundary.

use crate::image::BinaryImage;

/// Measured boundary lengths of an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    /// Pieces between vertically adjacent cells (same column).
    pub horizontal: u64,
    /// Pieces between horizontally adjacent cells (same row).
    pub vertical: u64,
}

impl BoundaryReport {
    pub fn total(&self) -> u64 {
        self.horizontal + self.vertical
    }
}

/// Counts both boundary components as twice the number of maximal runs of
/// ones per column (horizontal) and per row (vertical).
pub fn boundary(image: &BinaryImage) -> BoundaryReport {
    let (m, n) = (image.m(), image.n());
    let mut column_runs = 0u64;
    for j in 1..=n {
        let mut previous = false;
        for i in 1..=m {
            let cell = image.get(i, j);
            if cell && !previous {
                column_runs += 1;
            }
            previous = cell;
        }
    }
    let mut row_runs = 0u64;
    for i in 1..=m {
        let mut previous = false;
        for j in 1..=n {
            let cell = image.get(i, j);
            if cell && !previous {
                row_runs += 1;
            }
            previous = cell;
        }
    }
    BoundaryReport {
        horizontal: 2 * column_runs,
        vertical: 2 * row_runs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent reference: scan every cell and count its zero-valued
    /// 4-neighbours directly (cells beyond the grid count as zero).
    fn edge_scan(image: &BinaryImage) -> BoundaryReport {
        let (m, n) = (image.m(), image.n());
        let at = |i: i64, j: i64| -> bool {
            i >= 1 && j >= 1 && i <= m as i64 && j <= n as i64 && image.get(i as usize, j as usize)
        };
        let mut horizontal = 0u64;
        let mut vertical = 0u64;
        for i in 1..=m as i64 {
            for j in 1..=n as i64 {
                if !at(i, j) {
                    continue;
                }
                if !at(i - 1, j) {
                    horizontal += 1;
                }
                if !at(i + 1, j) {
                    horizontal += 1;
                }
                if !at(i, j - 1) {
                    vertical += 1;
                }
                if !at(i, j + 1) {
                    vertical += 1;
                }
            }
        }
        BoundaryReport {
            horizontal,
            vertical,
        }
    }

    fn column_prefix_image(m: usize, cols: &[u32]) -> BinaryImage {
        let mut img = BinaryImage::new(m, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 1..=c as usize {
                img.set(i, j + 1, true);
            }
        }
        img
    }

    #[test]
    fn single_cell_has_two_pieces_each_way() {
        let mut img = BinaryImage::new(1, 1);
        img.set(1, 1, true);
        let report = boundary(&img);
        assert_eq!(report.horizontal, 2);
        assert_eq!(report.vertical, 2);
        assert_eq!(report.total(), 4);
    }

    #[test]
    fn column_prefix_image_has_one_run_per_line() {
        // The prefix image of the worked-example columns: every nonzero
        // column is a single run, so the horizontal boundary is 2n.
        let img = column_prefix_image(12, &[12, 10, 7, 6, 6, 6, 6, 6, 6, 6, 3]);
        let report = boundary(&img);
        assert_eq!(report.horizontal, 22);
        assert_eq!(report.vertical, 24);
    }

    #[test]
    fn empty_image_has_no_boundary() {
        let report = boundary(&BinaryImage::new(3, 4));
        assert_eq!(report.total(), 0);
    }

    #[test]
    fn split_column_counts_two_runs() {
        let mut img = BinaryImage::new(4, 1);
        img.set(1, 1, true);
        img.set(3, 1, true);
        img.set(4, 1, true);
        let report = boundary(&img);
        assert_eq!(report.horizontal, 4);
        assert_eq!(report.vertical, 6);
    }

    fn arbitrary_image() -> impl Strategy<Value = BinaryImage> {
        (1usize..8, 1usize..8)
            .prop_flat_map(|(m, n)| {
                (
                    Just(m),
                    Just(n),
                    proptest::collection::vec(proptest::bool::ANY, m * n),
                )
            })
            .prop_map(|(m, n, cells)| {
                let mut img = BinaryImage::new(m, n);
                for (k, v) in cells.into_iter().enumerate() {
                    img.set(k / n + 1, k % n + 1, v);
                }
                img
            })
    }

    proptest! {
        #[test]
        fn run_count_matches_edge_scan(img in arbitrary_image()) {
            prop_assert_eq!(boundary(&img), edge_scan(&img));
        }

        #[test]
        fn boundary_lengths_are_even(img in arbitrary_image()) {
            let report = boundary(&img);
            prop_assert_eq!(report.horizontal % 2, 0);
            prop_assert_eq!(report.vertical % 2, 0);
        }

        // Embedding the image in a larger all-zero frame leaves the boundary
        // unchanged.
        #[test]
        fn zero_frame_does_not_change_boundary(img in arbitrary_image()) {
            let mut framed = BinaryImage::new(img.m() + 2, img.n() + 2);
            for i in 1..=img.m() {
                for j in 1..=img.n() {
                    framed.set(i + 1, j + 1, img.get(i, j));
                }
            }
            prop_assert_eq!(boundary(&framed), boundary(&img));
        }

        // The sorted margins of any image admit a well-defined imbalance.
        #[test]
        fn sorted_margins_have_an_imbalance(img in arbitrary_image()) {
            let sums = img.margins().sorted().sums;
            prop_assert!(crate::conjugate::alpha(&sums).is_ok());
        }
    }
}
