//! Packings in Grassmannian manifolds G(m, n): how do you place N
//! n-dimensional subspaces of R^m so they are as spread out as possible?
//!
//! The library covers the full workflow around that question:
//!
//! - principal angles between subspaces and the three standard distance
//!   functions built from them (chordal, geodesic, max-angle) ([`plane`],
//!   [`packing`]);
//! - simplex and orthoplex upper bounds on the squared chordal distance, and
//!   an audit that scores a packing against them ([`bounds`]);
//! - a derivative-free pattern-search optimizer over packings, driven by an
//!   inverse-distance potential with a receding pole ([`optimizer`]);
//! - the quaternion parametrization of G(4, 2) by pairs of points on two
//!   2-spheres, and the exact matching solver it turns plane packing into
//!   ([`binocular`]);
//! - explicit record-holding constructions: packings from binary codes,
//!   conference matrices, diplo-simplex vertices, and three hand-built plane
//!   families ([`constructions`]);
//! - embedding diagnostics: the trace embedding of G(m, n) onto a sphere,
//!   multidimensional scaling to measure the dimension a packing spans, and a
//!   short tour through the packing ([`analysis`]);
//! - a plain-text interchange format for packings ([`io`]).

pub mod analysis;
pub mod binocular;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod io;
pub mod optimizer;
pub mod packing;
pub mod plane;

pub use analysis::{embed_points, embedding_dimension, tour, EmbeddingReport, Tour};
pub use binocular::{
    best_matching, lr_distances, lr_to_plane, matching_to_packing, plane_to_lr, solve_matching,
    BinocularPair, LrDistances, Matching,
};
pub use bounds::{audit, orthoplex_bound, simplex_bound, BoundReport};
pub use error::{Error, Result};
pub use optimizer::{
    optimize, pattern_search_epoch, potential, potential_gradient, OptimConfig, OptimResult,
};
pub use packing::{min_distance, min_interplane_angle, random_packing, Metric, Packing};
pub use plane::{
    chordal_distance, chordal_from_projection, complement, geodesic_distance, max_angle_distance,
    orthonormalize, principal_angles, projection_matrix, random_plane, Plane, PrincipalAngles,
    ProjectionMatrix,
};
