//! Input parsing and image rendering shared by the `tomobound` binary and
//! its integration tests.

pub mod input;
pub mod render;
