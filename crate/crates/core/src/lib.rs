//! Injective hulls in the topos of finite right M-sets.
//!
//! The crate models finite monoids, their finite right actions and the
//! equivariant maps between them, and builds on that the topos structure
//! needed to embed any object into an injective one. Two independent hull
//! constructions are provided (growing a maximal essential subobject, and
//! collapsing an injective object by congruences) together with brute-force
//! checkers used to certify their results.

pub mod cli;
pub mod congruence;
pub mod error;
pub mod guard;
pub mod hull;
pub mod locally_finite;
pub mod monoid;
pub mod mset;
pub mod search;
pub mod topos;
mod subsets;

pub use congruence::{coequalizer, enumerate_congruences, kernel_pair, principal_congruence, quotients_up_to_iso, Congruence};
pub use error::{Error, Result};
pub use guard::SizeGuard;
pub use monoid::{FiniteMonoid, RightIdeal};
pub use mset::{epi_mono_factorize, include, product, sub_msets, EquivariantMap, Factorization, MSet, Product, SubMSet};
pub use search::{find_isomorphism, find_isomorphism_over, hom};
pub use topos::{characteristic_map, exponential, omega, singleton, subobject_of_char, Exponential, Omega, Singleton};
pub use locally_finite::{epic_endo_inverse, monic_endo_inverse, power_cycle, schroeder_bernstein, PowerCycle, SchroederBernstein};
pub use hull::{extend_along_monic, hull_uniqueness_iso, injective_hull_quotient, injective_hull_subobject, is_essential, is_essential_bruteforce, is_injective, Essentiality, HullCertificate, HullIso, HullMethod, Injectivity, InjectivityWitness, PairWitness};
