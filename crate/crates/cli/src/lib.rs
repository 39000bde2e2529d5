//! File formats, random instances and property suites for `ncat-galois`.

pub mod format;
pub mod gen;
pub mod suites;
