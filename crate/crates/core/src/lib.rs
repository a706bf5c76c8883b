//! Maximal integral and good models of Frobenius spaces and Anderson
//! `t`-motives over local and global function fields, with isocrystal slopes,
//! Hodge polygons and membership tests for extension classes.
//!
//! `A = F_q[t]` throughout; `θ` is the image of `t` in the base field and
//! `j = t − θ`.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod decision;
pub mod error;
pub mod extcalc;
pub mod frobspace;
pub mod global;
pub mod isocrystal;
pub mod linalg;
pub mod motive;
pub mod tower;

pub use decision::Decision;
pub use error::{Error, Result};
