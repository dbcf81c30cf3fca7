//! Integral representations of permutation groups.

pub mod dsl;
pub mod maps;
pub mod mat;
pub mod module;

pub use dsl::parse_module;
pub use maps::{module_k, ses_k_tensor, ses_n_wedge, ses_triv_k_nn, ses_triv_m_n, ModuleMap, ShortExactSeq};
pub use mat::Mat;
pub use module::{
    dsum, dsum_labeled, induce, kummer_module, kummer_module_over, module_n, natural_module, orbit_decompose,
    permutation_module, restrict, sign_module, submodule, tensor, trivial_module, wedge2, wedge2_matrix, GModule,
    OrbitPiece, SignKind,
};
