//! Exact-arithmetic workbench for low-dimensional categorical structures:
//! 2-characters and group 2-cocycles, projective representations as
//! homotopy fixed points, Frobenius-algebra TQFTs, semitrivialized anomalies
//! with their coherence checkers, and a typed cobordism word language.

pub mod scalar;
pub mod group;
pub mod matrix;
pub mod verdict;
pub mod character2;
pub mod projrep;
pub mod frobenius;
pub mod cobordism;
pub mod anomaly;
pub mod sampling;
pub mod formats;
