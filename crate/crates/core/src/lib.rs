//! Inverse semigroups of labelled spaces, filters on their idempotents,
//! tight spectra and boundary path spaces, all over finite inputs.

pub mod error;
pub mod family;
pub mod filter;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod lasso;
pub mod semigroup;
pub mod spectra;
pub mod vertex_set;

pub use error::{Error, Result};
pub use family::{AccommodatingFamily, LabelledSpace, RestrictedAlgebra, ValidationReport, Witness};
pub use filter::{FilterFamily, PrincipalFilter, Step, Tail, TransitionGraph, TransitionNode};
pub use format::{
    format_boundary_path, format_family, format_finite_type, format_transition_graph, parse_family, FamilySpec,
    GraphFile,
};
pub use graph::{Edge, EdgeSpec, GraphError, LabelledGraph, Letter, Word};
pub use lasso::Lasso;
pub use semigroup::{SElement, Triple};
pub use spectra::{
    boundary_paths, isolated_points, BoundaryListing, BoundaryPath, CoverCertificate, CoverRejection, PhiReport,
    Refutation, TightFilterDescriptor, TightSpectrum,
};
pub use vertex_set::VertexSet;
