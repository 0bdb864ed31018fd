//! LOOP and WHILE: two tiny imperative languages over the naturals.
//!
//! * [`syntax`]: the AST, parser and pretty printer.
//! * [`semantics`]: fuel-bounded execution with exact step counts.
//! * [`transforms`]: desugaring, `loop` removal, a jump-based form, the
//!   single-`while` normal form and compilation of recursion schemata.
//! * [`encoding`]: Cantor pairing and a bijective numbering of programs.
//! * [`universal`]: a universal WHILE program, specialization and the
//!   diagonal program.
//! * [`complexity`]: step-count profiles and interpretation overhead.
//! * [`corpus`], [`gen`]: reference programs and seeded random programs.
//! * [`cli`]: the `loopwhile` command line.

pub mod cli;
pub mod complexity;
pub mod corpus;
pub mod encoding;
pub mod gen;
pub mod nat;
pub mod semantics;
pub mod syntax;
pub mod transforms;
pub mod universal;

pub use nat::Nat;
