//! Finite domains, information frames and CF-approximation spaces.
//!
//! The crate builds the three kinds of structure, the functors between them
//! and the natural isomorphisms witnessing that they are equivalent, and
//! checks all of it exhaustively on small instances.

pub mod cf;
pub mod fixtures;
pub mod frame;
pub mod generators;
pub mod io;
pub mod mapping;
pub mod order;
pub mod rough;
pub mod set;
pub mod states;
pub mod verify;
pub mod witness;

pub use cf::{CfError, CfRelation};
pub use frame::{FrameError, FrameReport, InformationFrame};
pub use mapping::{ApproximableMapping, MappingError};
pub use order::{FinitePoset, MonotoneMap, OrderError};
pub use rough::{CfSpace, GaSpace, RoughError};
pub use set::{BitSet, Relation};
pub use states::{StateDomain, StateError};

/// Environment variable that raises the built-in size caps.
pub const MAX_BOUND_ENV: &str = "DFK_MAX_BOUND";

/// `default`, or the value of `DFK_MAX_BOUND` when that is larger.
pub fn raised_cap(default: usize) -> usize {
    std::env::var(MAX_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(default, |v| v.max(default))
}

/// Ids are nonempty and free of whitespace and of the characters the text
/// format uses as punctuation.
pub fn check_id(id: &str) -> bool {
    const RESERVED: [&str; 6] = [":", ";", "|-", "=>", "->", "<="];
    !id.is_empty()
        && !id
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '{' | '}' | '#' | ';'))
        && !RESERVED.contains(&id)
}
