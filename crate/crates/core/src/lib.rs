//! Integral cohomology of finite permutation groups with exact sparse
//! integer linear algebra, a certificate-producing reduction engine, and the
//! torsion annihilator of `H^3` of generalized Kummer varieties built on them.

pub mod cohomology;
pub mod config;
pub mod error;
pub mod gmodule;
pub mod linalg;
pub mod perm;
pub mod pipeline;
pub mod reductions;

pub use cohomology::{Backend, Budget, CohomologyResult};
pub use config::Config;
pub use error::{Error, Result};
pub use gmodule::{parse_module, GModule};
pub use linalg::{AbGroup, SparseIntMatrix};
pub use perm::{parse_group, PermGroup, Permutation};
pub use pipeline::{annihilator, BoundReport};
pub use reductions::{CohCell, Certificate, EngineOptions, Status, Table};
