//! Exact symbolic dynamics for subshifts of finite type, and the
//! correspondence between order-1 étale difference equations over finite
//! fields and shifts carrying a Frobenius action.
//!
//! All arithmetic is exact: big integers, rationals, and explicit finite
//! fields. Floating point appears only when formatting reports.

pub mod ff;
mod matrix;
pub mod sft;
pub mod decomp;
pub mod spectral;
pub mod zeta;
pub mod bridge;
pub mod cli;
