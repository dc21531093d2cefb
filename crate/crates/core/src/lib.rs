//! Exact computations of extended dimensions, L²-Betti numbers, L²-Euler
//! characteristics and Burnside-group invariants for group actions on
//! CW-complexes.
//!
//! Everything is exact rational arithmetic. The executable group families
//! are finite groups (given by multiplication tables), free abelian groups
//! Zⁿ and free groups F_k; modules over principal ideal domains serve as the
//! fully decidable model for the extended dimension function.

pub mod amenability;
pub mod betti;
pub mod burnside;
pub mod gcw;
pub mod group;
pub mod io;
pub mod linalg;
pub mod pid;
pub mod rational;

pub use rational::{ExtDim, Rat};
