//! Finite permutation groups, normal-subgroup lattices, chief series and
//! level-by-level verifiers for inverse systems of finite groups.

pub mod actions;
pub mod builders;
pub mod chief;
pub mod construct;
pub mod corpus;
pub mod error;
pub mod group;
pub mod hom;
pub mod io;
pub mod lattice;
pub mod perm;
mod schreier;
pub mod structure;
pub mod structured;
pub mod subgroup;
pub mod towers;

pub use actions::GroupAction;
pub use construct::{direct_product, quotient_by, wreath_product, WreathProduct};
pub use error::{Error, Result};
pub use group::{Caps, ElementTable, FiniteGroup};
pub use hom::GroupHom;
pub use perm::Permutation;
pub use subgroup::{KeyRepr, Subgroup, SubgroupKey};
