//! Finite cyclic branched covers of knots and their fundamental groups.

pub mod abelian;
pub mod batch;
pub mod coset_table;
pub mod cover;
pub mod identify;
pub mod knot;
pub mod perm;
pub mod presentation;
pub mod schreier;
pub mod text;
pub mod verify;
pub mod words;

pub use abelian::{FinGenAbelianGroup, IntMatrix};
pub use batch::{analyze_batch, map_ordered, CoverJob, Execution};
pub use coset_table::{CosetTable, EnumerationLimits, Strategy};
pub use cover::{analyze, CoverError, CoverReport, Efr, OrderVerdict};
pub use knot::{builtin, linking_hom, wirtinger, KnotDiagram, KnotError, WirtingerData};
pub use perm::Permutation;
pub use presentation::{Presentation, PresentationError};
pub use words::{GeneratorIndex, Letter, Word};
