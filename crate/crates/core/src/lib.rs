//! Finite monoids given by Cayley tables, their reduced power monoids, and
//! exhaustive checks of how isomorphisms of power monoids relate to
//! isomorphisms of the underlying monoids.

pub mod census;
pub mod cli;
pub mod error;
pub mod groups;
pub mod iso;
pub mod monoid;
pub mod power;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use iso::{find_isomorphism, IsoWitness};
pub use monoid::{cyclic_monoid, idempotent_monoid, make_monoid, FiniteMonoid};
pub use power::{full_power_semigroup, reduced_power_monoid, PowerMonoid};
pub use subset::SubsetId;
