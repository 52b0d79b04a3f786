//! A finite, executable model of quasi-set theory.
//!
//! Collections may contain m-atoms, which can be indistinguishable without
//! being identical, alongside classical M-atoms, natural-number labels and
//! nested qsets. The crate provides:
//!
//! - canonical [`QSet`] values with exact quasi-cardinals ([`qset`]),
//! - indistinguishability, extensional equality and quotients ([`relations`]),
//! - the axiom-backed constructions ([`algebra`]),
//! - the labelling loop for indiscernibles ([`labelling`]),
//! - microstate counting for quantum statistics ([`statistics`]),
//! - the text notation ([`notation`]) and a seeded property battery
//!   ([`suite`]).

pub mod algebra;
pub mod cardinal;
pub mod entity;
pub mod error;
pub mod labelling;
pub mod notation;
pub mod qset;
pub mod relations;
pub mod statistics;
pub mod suite;

pub use algebra::{OrderedPair, StrongSingleton};
pub use cardinal::Cardinal;
pub use entity::{Entity, MAtomId, NatLabel, Species};
pub use error::{Error, Result};
pub use labelling::LabelledWarehouse;
pub use qset::{QSet, MAX_DEPTH};
pub use relations::QuotientView;
pub use statistics::{OccupancyVector, StatKind};
