//! Exact verification, over a prime field, of the linear algebra behind the
//! invariant theory of the binary polyhedral groups T, S and I acting on
//! binary forms: group enumeration, Clebsch-Gordan splitting of tensor
//! products, fixed-point spaces, fundamental invariants and their syzygies.

pub mod decomp;
pub mod error;
pub mod gf;
pub mod groups;
pub mod invariants;
pub mod linalg;
pub mod reps;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use groups::{build_group, GroupElement, GroupLabel, PolyhedralGroup};
pub use linalg::{Matrix, Subspace};
pub use reps::BinaryForm;
