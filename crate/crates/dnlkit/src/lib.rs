//! dnlkit: dense-neighborhood toolkit.
//!
//! Trigraphs, tri-hypergraphs and tri-tournaments with red buffer edges;
//! VC-dimension certification; delta-nets by uniform sampling with explicit
//! success probabilities; metric embeddings between Hamming, spherical and
//! Euclidean clouds; epsilon-clusterings with exhaustive validators; and the
//! downstream algorithms: coloring dense triangle-free / K_t-free graphs,
//! dominating tournaments through fractional chromatic number, and
//! dominating majority digraphs.

pub mod bits;
pub mod chromatic;
pub mod cluster;
pub mod constants;
pub mod core;
pub mod gen;
pub mod rng;
pub mod lp;
pub mod metric;
pub mod nets;
pub mod tournament;
pub mod vc;
