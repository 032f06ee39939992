//! Computational tools for commensurators, admissible subgroup families and
//! the generalized completions they define.

pub mod baumslag_solitar;
pub mod completion;
pub mod ends;
pub mod error;
pub mod families;
pub mod groups;
pub mod intmat;
pub mod linalg;
pub mod modules;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod subgroups;
pub mod thompson;
pub mod truth;
pub mod words;

pub use completion::{CompletionElement, TruncatedCompletion};
pub use ends::{CosetGraphBall, VertexSet};
pub use error::{Error, Result};
pub use families::FamilyTruncation;
pub use groups::{preset, CosetTable, ElementKey, GroupContext, Oracle, Presentation};
pub use modules::FiniteModule;
pub use subgroups::{Index, SubgroupHandle};
pub use truth::Truth;
pub use words::{Letter, Word};
