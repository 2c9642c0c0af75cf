//! Inflection points of plane cubic curves and their monodromy.
//!
//! The crate is organized bottom-up:
//!
//! * [`forms`] ternary cubic forms, Hessians, pencils and nets;
//! * [`uniroots`] simultaneous-iteration root finding and Sylvester resultants;
//! * [`locus`] inflection and singular points of a single cubic;
//! * [`perm`] an exact permutation-group engine on nine letters;
//! * [`strata`] classification of singular cubics and discriminant crossings;
//! * [`track`] predictor-corrector continuation of the nine inflection points
//!   along loops in coefficient space;
//! * [`numerology`] integer invariant calculators;
//! * [`catalog`] the named cubics, families and loops used by the experiments.

pub mod catalog;
pub mod error;
pub mod forms;
mod linalg;
pub mod locus;
pub mod numerology;
pub mod perm;
pub mod rng;
pub mod strata;
pub mod track;
pub mod uniroots;

pub use error::{Error, Result};
pub use forms::{CubicForm, Net, Pencil, ProjPoint};
pub use linalg::Mat3;
pub use locus::{InflectionSet, LocalType, SingularSet};
pub use num_complex::Complex64 as C64;
pub use perm::{Perm, PermGroup};
pub use strata::StratumLabel;
pub use track::{Loop, MonodromyResult, Segment, TrackingConfig};
