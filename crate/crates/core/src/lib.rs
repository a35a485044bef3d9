//! ψ-unitary sparse circulant matrices over GF(2) and the quasi-cyclic
//! low-density generator-matrix (QC-LDGM) codes built from them.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2_poly`]: sparse arithmetic in `GF(2)[x]/(x^n - 1)`
//! - [`psi`]: the folding homomorphism ψ, its kernel ideals, ψ-unitarity
//! - [`cycles`]: length-4 cycle detection inside and across circulant blocks
//! - [`xi_design`]: the explicitly parameterised Ξ family and cycle-free designs
//! - [`inversion`]: closed-form fast inversion, weight bounds, statistics, timing
//! - [`qc_ldgm`]: code assembly, systematic encoding, distance and complexity figures
//! - [`spa_decoder`]: LLR sum-product decoding, channels, Monte Carlo simulation
//! - [`cli`]: the batch command surface used by the `psi-ldgm` binary
//!
//! See the `examples/` directory of this crate for one runnable program per capability.

pub mod cli;
pub mod cycles;
pub mod error;
pub mod gf2_poly;
pub mod inversion;
pub mod psi;
pub mod qc_ldgm;
pub mod spa_decoder;
pub mod xi_design;

pub use error::{Error, Result};
pub use gf2_poly::SparsePoly;
