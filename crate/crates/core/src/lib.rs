#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod companion;
pub mod error;
pub mod extended;
pub mod extremal;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod powersums;
pub mod radii;
pub mod solver;
pub mod squaring;

pub use error::{Error, Result, Warning};
pub use poly::{Disc, Poly, C64};
