//! Decision procedures for triple norm-form equations
//!
//!   (X₁² − aY₁²)(X₂² − bY₂²)(X₃² − abY₃²) = c
//!
//! over the function field of a two-dimensional regular base, where a, b, c
//! are units outside a fixed configuration of curves.
//!
//! The pipeline: restrict the coefficients to each curve of the
//! configuration ([`surface`]), compute the set of residue classes a
//! solution could leave along each curve ([`torsor`]), and assemble the
//! parity constraints those sets must satisfy simultaneously at the crossing
//! points ([`obstruction`]). An infeasible constraint system proves no
//! rational point exists; on tree-shaped configurations a feasible system
//! upgrades to an existence proof.
//!
//! [`kodaira`] classifies elliptic-fibration special fibers and extracts the
//! cycle-shaped ones as ready-made configurations; [`oracle`] replays the
//! residue analysis against brute-force norm computations over small prime
//! fields; [`fixtures`] holds the worked examples; [`config`] and [`report`]
//! are the serialization layer the command-line front end builds on.

pub mod config;
pub mod fixtures;
pub mod kernel;
pub mod oracle;
pub mod kodaira;
pub mod obstruction;
pub mod poly;
pub mod report;
pub mod surface;
pub mod torsor;
