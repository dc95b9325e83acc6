//! Entropic separability criteria for N-qudit Werner-Popescu states.
//!
//! The crate evaluates the conditional sandwiched Tsallis relative entropy
//! (CSTRE) and the Abe-Rajagopal q-conditional entropy on the family
//! `ρ(x) = (1 - x) I/d^N + x |Φ⟩⟨Φ|`, and locates the mixing parameter at
//! which each criterion turns negative across the `1 : N-1` cut.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | Hermitian eigensolver, matrix powers, tensor products, partial trace/transpose |
//! | [`states`] | GHZ vector, Werner-Popescu states, closed-form spectra |
//! | [`entropies`] | Tsallis/sandwiched/conditional entropies, dense and closed form |
//! | [`separability`] | Threshold bisection, `q → ∞` limit, curve tracing, PPT oracle |
//! | [`verify`] | Self-check report used by the `verify` subcommand |
//!
//! ```
//! use tsallis_sep::entropies::{EntropyCriterion, Order};
//! use tsallis_sep::separability::{asymptotic_threshold, find_threshold};
//!
//! // Four qutrits: CSTRE at q = 2 and in the q → ∞ limit.
//! let at_two = find_threshold(3, 4, EntropyCriterion::CSTRE_B, Order::Finite(2.0)).unwrap();
//! assert!((at_two.x_star - 0.3114).abs() < 1e-3);
//! let limit = asymptotic_threshold(3, 4, EntropyCriterion::CSTRE_B).unwrap();
//! assert_eq!(limit, 1.0 / 28.0);
//! ```

#![forbid(unsafe_code)]

pub mod entropies;
pub mod error;
pub mod linalg;
pub mod separability;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
