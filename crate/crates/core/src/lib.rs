//! Scar functions on the quantized torus and propagator matrix elements for
//! hyperbolic cat maps, computed both exactly and semiclassically.

pub mod cat;
pub mod checks;
pub mod error;
pub mod exact;
pub mod sc;
pub mod scar;
pub mod symplectic;
pub mod torus;

pub use cat::{default_cat, CatMapSpec, PeriodicPoint, RationalPoint, Winding};
pub use error::{Error, Result};
pub use symplectic::{
    cayley_of, frame_from_map, to_frame_coords, wedge, HyperbolicFrame, Mat2, PhasePoint, SymMat2,
    CAUSTIC_TOL,
};
