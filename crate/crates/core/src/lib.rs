//! Differential geometry of admissible surfaces in simply isotropic (`I3`) and
//! pseudo-isotropic (`Ip3`) space.

pub mod catalog;
pub mod connection;
pub mod expr;
pub mod geodesic;
pub mod isotropy;
pub mod jets;
pub mod linalg;
pub mod sampling;
pub mod surface;
pub mod verify;

pub use catalog::{CatalogEntry, CatalogError};
pub use connection::{coeffs_at, curvature_tensors_at, ConnectionCoeffs, ConnectionError, CurvatureTensorSample};
pub use expr::{EvalError, Expr, ParseError};
pub use geodesic::{integrate, ConnectionKind, GeodesicError, GeodesicTrace, PlaneSection};
pub use isotropy::{Motion, SpaceKind, Vec3};
pub use jets::{Jet2, Jet2Vec3, JetError};
pub use surface::{
    curvatures_at, frame_at, is_admissible, lightlike_points, normal_curvature, CurvatureReport,
    Domain, PointFrame, PrincipalClass, SurfaceError, SurfacePatch,
};
