//! Average sizes of kernels of integral matrix modules over `Z/p^n`, the
//! associated ask zeta functions, and the orbit and conjugacy class counts of
//! unipotent groups that they control.

pub mod arith;
pub mod ask;
pub mod catalog;
pub mod closed_forms;
pub mod error;
pub mod grouporbits;
pub mod linalg;
pub mod matmodule;
pub mod poly;
pub mod ratfun;
pub mod structural;
pub mod ring_zpn;

pub use error::{AskError, Result};
