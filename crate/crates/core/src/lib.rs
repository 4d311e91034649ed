//! Reconstruction of binary images from monotone row and column sums, with
//! provable caps on the boundary length of the result.
//!
//! The crate decides whether sums are realisable at all ([`ryser`]), builds
//! an image whose horizontal boundary stays within `min(2*r1 + 2*alpha,
//! 2*r1 + 2n - 2)` and vertical boundary within `2*c1 + 2*alpha`
//! ([`construction`], [`padding`]), and can certify boundary minima on small
//! instances by exhaustive search ([`oracle`]). `alpha` is the imbalance
//! between the row sums and the conjugate of the column sums; it caps the
//! number of ones the construction has to move.
//!
//! The interchangeable reconstruction routes live behind the [`strategy`]
//! registry; [`families`] provides parametric instances with known optima.

pub mod boundary;
pub mod conjugate;
pub mod construction;
pub mod families;
pub mod image;
pub mod oracle;
pub mod padding;
pub mod ryser;
pub mod strategy;
pub mod sums;

pub use boundary::{boundary, BoundaryReport};
pub use conjugate::{alpha, conjugate, AlphaError, ConjugateProfile};
pub use construction::{
    reconstruct, reconstruct_with, FrozenColumn, ReconstructError, Reconstruction, StepKind,
    StepRecord,
};
pub use image::BinaryImage;
pub use oracle::{min_boundaries, probe_conjecture, OracleLimits, SearchStats};
pub use padding::{pad, reconstruct_general, strip, GeneralReconstruction, ReconstructionPath};
pub use ryser::{canonical_neighbour, is_consistent, Consistency};
pub use sums::{LineSums, Margins, ValidationError, MAX_DIMENSION};
