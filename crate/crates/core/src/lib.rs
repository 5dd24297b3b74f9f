//! Grassmann manifolds G_F(n, N) over the reals, complexes and quaternions, realized
//! as rank-n Hermitian idempotents in the Euclidean space of Hermitian matrices.
//!
//! * [`algebra`]: scalars, Hermitian matrices and their orthogonal basis.
//! * [`grassmann`]: frames, projections, the complement isometry and the involution.
//! * [`geometry`]: tangent spaces, geodesics, mean curvature and the Laplacian.
//! * [`morse`]: height functions, gradient flow, critical classes and Morse indices.
//! * [`homology`]: Poincaré polynomials by recursion, Schubert cells and Morse–Bott assembly.
//! * [`cli`]: the `grassmann` command-line tool.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod grassmann;
pub mod homology;
pub mod linalg;
pub mod morse;

pub use algebra::{Field, HermitianMatrix, Scalar};
pub use error::{Error, Result};
pub use grassmann::{Frame, FullFrame, ProjectionPoint};
