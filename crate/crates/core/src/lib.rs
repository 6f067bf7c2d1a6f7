//! Combinatorial game values for Hex and other monotone set coloring games.
//!
//! Games live over a finite poset of outcomes. The engine interns game terms
//! per poset, decides the order relations `<=` and `<|` by memoized mutual
//! recursion, reduces games to canonical form, classifies passable and
//! monotone games, enumerates canonical passable values by depth, evaluates
//! Hex regions, and solves the minimal-virtual-connection problem on k x n
//! strips with a machine-checkable cost/benefit certificate.

pub mod error;
pub mod poset;
pub mod game;
pub mod text;
pub mod canonical;
pub mod lr;
pub mod monotone;
pub mod algebra;
pub mod enumerate;
pub mod region;
pub mod strip;
pub mod testkit;

pub use error::{Error, Result};
pub use game::{GameId, Universe};
pub use poset::Poset;
