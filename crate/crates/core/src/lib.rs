//! Combinatorial engine for trisections of closed orientable 3-manifolds.
//!
//! A trisection is tracked through its parameter shadow: the genera of the
//! three pairwise surfaces and a labeled set of binding-link components.
//! On top of that sit the stabilization calculus ([`moves`]), a common
//! stabilization planner ([`planner`]), brute-force search over the move
//! graph ([`explorer`]) and a file-based command line ([`cli`]).

pub mod catalogue;
pub mod cli;
pub mod error;
pub mod explorer;
pub mod files;
pub mod link;
pub mod moves;
pub mod planner;
pub mod profile;
pub mod script;
pub mod state;

pub use error::{Error, Result};
pub use link::{ComponentId, LinkComponentSet};
pub use profile::{is_feasible, Handlebody, Profile, Surface, SurfaceGenera};
pub use script::{Arc, ArcKind, DestabMove, MoveOp, MoveRecord, MoveScript, StabMove};
pub use state::TrisectionState;
