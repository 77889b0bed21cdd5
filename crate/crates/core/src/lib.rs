//! Finite higher-dimensional transition systems: construction, closure,
//! colimits, map search, the cubical functors, homotopy and bisimulation.

pub mod bisim;
pub mod builders;
pub mod checks;
pub mod closure;
pub mod colim;
pub mod error;
pub mod functors;
pub mod homotopy;
pub mod homsearch;
mod indexed;
pub mod io;
pub mod label;
pub mod map;
pub mod model;
pub mod validate;

pub use error::{HdtsError, Result};
pub use label::Label;
pub use map::HdtsMap;
pub use model::{ActionId, Hdts, StateId, TransitionKey};
pub use validate::{validate, validate_map, ValidationReport, Violation};
