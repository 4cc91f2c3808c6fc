//! Certified high-precision computation of the product `S_n` over harmonic
//! windows, the double integral `I_n`, the series `F(n) = (1/n) log ||log S_n||`,
//! and irrationality exponent/base diagnostics.

pub mod error;
pub mod exact;
pub mod gamma_const;
pub mod liouville;
pub mod precreal;
pub mod quad;
pub mod report;
pub mod sondow;

pub use error::{Error, Result};

/// Order-preserving map, parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}
