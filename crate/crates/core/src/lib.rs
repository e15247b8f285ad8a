//! Exact verification and construction toolkit for finite-dimensional dual
//! quasi-bialgebras given by structure constants over Q or a prime field.

// Structure-constant loops index several tables by the same basis index.
#![allow(clippy::needless_range_loop)]

pub mod bosonization;
pub mod coalgebra;
pub mod dqb;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod hopfmod;
pub mod linalg;
pub mod preantipode;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod yd;

pub use coalgebra::{Coalgebra, Filtration, Functional};
pub use dqb::{DualQuasiBialgebra, GroupCocycleData};
pub use error::{Error, Result};
pub use linalg::{Matrix, Quotient, Subspace, Vector};
pub use report::{Report, Status};
pub use scalar::{Field, Scalar};
pub use tensor::SparseTensor;
