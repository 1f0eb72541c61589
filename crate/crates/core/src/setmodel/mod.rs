//! Symbolic set descriptions, their materialization on finite windows, and
//! difference sets.

mod bits;
mod exact;
mod materialize;
mod parse;
mod spec;
mod window;

pub(crate) use bits::Bits;
pub use exact::{ExactSet, MAX_EXACT_PERIOD};
pub use materialize::{diff_set, materialize};
pub use parse::parse;
pub use spec::{format, SetSpec};
pub use window::{Window, WindowedSet};
