//! Exact lattice computations for Beauville-Bogomolov lattices of
//! hyperkähler manifolds: lattice invariants, Noether-Lefschetz density
//! checks, rational curve classes on Hilbert schemes and generalized Kummer
//! varieties, special cubic fourfold discriminants, and bounded Mori cone
//! wall enumeration.

pub mod arith;
pub mod cli;
pub mod cubic;
pub mod curves;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod mori;
pub mod noether_lefschetz;

pub use error::{Error, Result};
