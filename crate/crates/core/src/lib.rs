//! Operation calculus for the homotopy groups of spectral partition Lie
//! algebras and mod-p TAQ cohomology.
//!
//! The crate is organised bottom-up:
//!
//! * [`fp`]: F_p arithmetic, generalized binomials, sparse combinations.
//! * [`primal`]: the Dyer-Lashof algebra and the free Poly_R-algebra.
//! * [`dual`]: the Koszul-dual ringoids and their admissible bases.
//! * [`power`]: the power ring of unary operations in R-notation.
//! * [`lie`]: free shifted (restricted) Lie algebras on Lyndon bases.
//! * [`free`]: free algebras over the power ring and the sequence-count oracle.
//! * [`steenrod`]: Steenrod operations, Nishida and Cartan rewriting.
//! * [`bar`]: a brute-force bar complex oracle at p = 2.
//! * [`check`]: the verification sweeps shared by the tests and the CLI.

pub mod error;
pub mod fp;
pub mod free;
pub mod par;
pub mod rewrite;
pub mod word;

pub mod bar;
pub mod check;
pub mod dual;
pub mod lie;
pub mod power;
pub mod primal;
pub mod steenrod;

pub use error::{Error, Result};
pub use fp::{binom_mod_p, fp_linear_combine, Fp, LinComb, Prime};
pub use word::Letter;
