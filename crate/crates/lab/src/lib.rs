//! Numerical companion to `theta-code-core`: Siegel upper half space
//! sampling, theta constants and their identities, Construction-A lattice
//! theta series, the theta map on enumerator polynomials, interchange
//! formats, reports and the acceptance suite.

pub mod cli;
pub mod formats;
pub mod lattice;
pub mod report;
pub mod siegel;
pub mod theta;
pub mod thetamap;
pub mod verify;
