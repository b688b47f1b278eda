//! Forward and inverse 2D acoustic scattering for scatterers made of two
//! components with different physical properties.
//!
//! The forward side synthesizes far-field operators with Nyström boundary
//! integral equations ([`bie`]) and a coupled volume/boundary solver
//! ([`medium`]). The inverse side ([`factorization`]) reconstructs the first
//! component from a far-field operator modified by artificial operators on
//! a-priori known domains ([`farfield`]).

pub mod bie;
pub mod factorization;
pub mod farfield;
pub mod geometry;
pub mod kernel;
pub mod linalg;
pub mod medium;
pub mod oracle;
pub mod specfun;

pub use factorization::{IndicatorGrid, Metrics, SharpOperator, Window};
pub use farfield::{DirectionGrid, FarFieldMatrix, SolverParams};
pub use geometry::{BoundaryCondition, ContrastForm, ContrastSpec, Curve, CurveKind, Point, Scene, SceneCase, Variant};
pub use linalg::{ComplexMatrix, HermitianEigensystem, LinalgError};
pub use num_complex::Complex64;
