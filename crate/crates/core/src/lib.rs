//! Symmetry-preserving finite-difference schemes on evolving lattices.
//!
//! The crate covers the linear heat equation, Burgers' equation (plain and in
//! potential form), the Korteweg-de Vries equation, and the toy equation
//! `u_xt = 0`. For each it provides the Lie point symmetry algebra, elementary
//! difference invariants on the standard stencils, invariant and standard
//! schemes built from them, a time-stepping solver that evolves the lattice
//! together with the solution, a catalog of exact discrete solutions and a
//! verification harness.
//!
//! ```
//! use invpdelta::{catalog, make_scheme, Equation, Variant};
//!
//! let fundamental = catalog(Equation::Heat)
//!     .into_iter()
//!     .find(|s| s.name == "fundamental")
//!     .unwrap();
//! let lat = fundamental.window_lattice().unwrap();
//! let scheme = make_scheme(Equation::Heat, Variant::InvariantExplicit).unwrap();
//! let stats = scheme.lattice_residuals(&lat).unwrap();
//! assert!(stats.max_scaled_e1 < 1e-10);
//! ```

pub mod equation;
pub mod error;
pub mod exact;
pub mod invariants;
pub mod lattice;
pub mod schemes;
pub mod solver;
pub mod symmetry;
pub mod verify;

pub use equation::Equation;
pub use error::{Error, Result};
pub use exact::{catalog, find_exact, generate_by_group, ExactSolution};
pub use invariants::{invariants, InvariantSet};
pub use lattice::{
    build_lattice, flat_time_layers, MeshFn, MeshFunctions, MeshPreset, MovingLattice, Point, StencilShape,
    StencilView, UInit,
};
pub use schemes::{make_scheme, ResidualStats, SchemeDef, Variant};
pub use solver::{monitor_sigma_tau, run, BoundaryPolicy, InitialData, NewtonOptions, SimConfig, Trajectory};
pub use symmetry::{builtin_algebra, group_element, GroupElement, SymmetryAlgebra, VectorField};
