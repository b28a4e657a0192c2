//! Exact linear algebra and polynomial kernel.

pub mod complex;
pub mod laurent;
pub mod les;
pub mod matrix;
pub mod modp;
pub mod snf;

pub use complex::{homology, induced_rank, ChainMap, CoefficientRing, GradedChainComplex, HomologySummary};
pub use laurent::{dim_t, preceq, Laurent, Preceq};
pub use les::{les_audit, LesAudit, LesDegree};
pub use matrix::SparseMatrix;
pub use modp::PrimeField;
pub use snf::{integer_kernel, smith_normal_form, smith_normal_form_with_transforms, SmithForm};
