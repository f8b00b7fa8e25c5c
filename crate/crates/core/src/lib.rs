//! Arf closures, multiplicity trees and generating sets of local Arf good
//! semigroups.

pub mod closure;
pub mod error;
pub mod generators;
pub mod numerical;
pub mod tree;

pub use closure::{arf_closure_of_good_semigroup, arf_closure_of_vectors, ClosureResult};
pub use error::{Error, Result};
pub use generators::{build_generators, check_generator_set, solve_distance_vector, GeneratorSet};
pub use numerical::{duval_closure, CharacterData, MultiplicitySequence, SVector};
pub use tree::{ExtendedLevel, SequenceCollection, SmallElementsSet, TreeMatrix, TreeViolation};
