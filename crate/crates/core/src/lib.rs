//! Blocking sets, semiovals, the r-infinity property and the Pi-property in
//! PG(2,q) and AG(2,q).

pub mod cli;
pub mod constructs;
pub mod error;
pub mod gf;
pub mod io;
pub mod mask;
pub mod plane;
pub mod props;
pub mod search;
pub mod verify;

pub use error::{Error, ErrorKind, Result};
pub use gf::{FieldElement, FieldSpec};
pub use mask::Mask;
pub use plane::{AffineFrame, Geometry, Line, LineId, Plane, Point, PointId, PointSet};
