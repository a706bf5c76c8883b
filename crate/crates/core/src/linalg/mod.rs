//! Linear algebra: `F_p` matrices for digit windows, matrices of Laurent
//! series, and Smith forms over `K[[π]]`.

pub mod fp;
pub mod mat;
pub mod smith;

pub use fp::{FpMat, Subspace};
pub use mat::SMat;
pub use smith::smith_valuations;
