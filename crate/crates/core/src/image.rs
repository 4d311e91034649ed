//! Dense bit-grid images.

use std::fmt;

use crate::sums::{Margins, MAX_DIMENSION};

/// An `m x n` binary image stored as a row-major bit grid.
///
/// Coordinates follow matrix convention and are 1-based in the public
/// interface: `(i, j)` addresses row `i` (growing downward) and column `j`
/// (growing rightward), with `1 <= i <= m` and `1 <= j <= n`.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryImage {
    m: usize,
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryImage {
    /// Creates an all-zero image.
    ///
    /// # Panics
    /// Panics when a dimension is zero or exceeds [`MAX_DIMENSION`].
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "image dimensions must be positive");
        assert!(
            m <= MAX_DIMENSION && n <= MAX_DIMENSION,
            "image dimensions must not exceed {MAX_DIMENSION}"
        );
        let words_per_row = n.div_ceil(64);
        BinaryImage {
            m,
            n,
            words_per_row,
            bits: vec![0; m * words_per_row],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn index(&self, i: usize, j: usize) -> (usize, u64) {
        assert!(
            (1..=self.m).contains(&i) && (1..=self.n).contains(&j),
            "cell ({i}, {j}) outside {}x{} image",
            self.m,
            self.n
        );
        let (row, col) = (i - 1, j - 1);
        (row * self.words_per_row + col / 64, 1u64 << (col % 64))
    }

    /// Value of cell `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> bool {
        let (word, mask) = self.index(i, j);
        self.bits[word] & mask != 0
    }

    /// Sets cell `(i, j)`, 1-based.
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let (word, mask) = self.index(i, j);
        if value {
            self.bits[word] |= mask;
        } else {
            self.bits[word] &= !mask;
        }
    }

    /// Number of ones in the image.
    pub fn count_ones(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Per-row and per-column one counts, in grid order.
    pub fn margins(&self) -> Margins {
        let mut rows = vec![0u32; self.m];
        let mut cols = vec![0u32; self.n];
        for i in 1..=self.m {
            let row_words = &self.bits[(i - 1) * self.words_per_row..i * self.words_per_row];
            rows[i - 1] = row_words.iter().map(|w| w.count_ones()).sum();
            for j in 1..=self.n {
                if self.get(i, j) {
                    cols[j - 1] += 1;
                }
            }
        }
        Margins { rows, cols }
    }

    /// The reflected image with rows and columns swapped.
    pub fn transposed(&self) -> BinaryImage {
        let mut out = BinaryImage::new(self.n, self.m);
        for i in 1..=self.m {
            for j in 1..=self.n {
                if self.get(i, j) {
                    out.set(j, i, true);
                }
            }
        }
        out
    }
}

impl fmt::Display for BinaryImage {
    /// Renders `#` for ones and `.` for zeros, one grid row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m {
            for j in 1..=self.n {
                f.write_str(if self.get(i, j) { "#" } else { "." })?;
            }
            if i < self.m {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryImage({}x{})\n{}", self.m, self.n, self)
    }
}
