//! Generalized Kronecker products and quantum-style circuit synthesis.
//!
//! This crate implements an algebra of *generalized* Kronecker products —
//! products of matrix tuples in which each block of the result is drawn from
//! a different member of a tuple — together with the machinery that makes
//! them useful for structured unitary factorization:
//!
//! * [`matrix`] — dense complex matrices, matrix tuples, left/right
//!   (generalized) Kronecker products, shuffle permutations, and the
//!   diagonalization factorization that reduces a generalized product to
//!   permutations and block-diagonal factors.
//! * [`circuit`] — a small mixed-radix register circuit IR (multiplexed
//!   unitaries, value-controlled gates, pairwise phase gates, named index
//!   permutations), with an exact dense simulator and a versioned text
//!   serialization.
//! * [`transforms`] — synthesis of shuffle, direct-sum, generalized-Kronecker,
//!   Walsh, Haar, Daubechies D4, general wavelet, and mixed-radix DFT
//!   circuits, each verified against an independently evaluated reference
//!   matrix.
//! * [`group`] — finite group families (cyclic, product, quaternionic,
//!   metacyclic, extraspecial-like 2-groups), their irreducible
//!   representations, Fourier-transform oracle matrices, and adapted-basis
//!   checks for subgroup chains.
//! * [`groupft`] — circuits computing the Fourier transform on those group
//!   families, verified exactly or up to a diagonal of phases against the
//!   oracle, with optional phase correction.
//!
//! All types are immutable plain data; every operation is a pure function of
//! its inputs, so values can be shared freely across threads.

pub mod circuit;
pub mod group;
pub mod groupft;
pub mod matrix;
pub mod transforms;

pub use matrix::{Complex64, ComplexMatrix, MatrixTuple, PhaseVector, Side};

/// Default absolute tolerance for floating-point comparisons.
///
/// Chosen so that exact algebraic identities evaluated in `f64` pass with
/// orders of magnitude to spare on the dimensions this crate targets, while
/// genuine structural mismatches (which show up at `O(1)`) fail decisively.
pub const DEFAULT_TOL: f64 = 1e-10;
