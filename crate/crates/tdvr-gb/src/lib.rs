//! Gröbner bases of submodules `M` of free modules `L = R·e_1 ⊕ … ⊕ R·e_r` over
//! `R = A[x_1, …, x_n]`, where `A` is a truncated discrete valuation ring
//! (`F_p[pi]/(pi^a)` or `Z/p^a`), plus a decision procedure for flatness of
//! `L/M` over `A` and the associated-graded reduction that carries the mixed-
//! characteristic case to the graded one.

pub mod assoc_graded;
pub mod chainring;
pub mod error;
pub mod freemod;
pub mod flatness;
pub mod groebner;
pub mod oracle;
pub mod parse;
pub mod report;

pub use error::{Error, Result};
