pub mod arcs;
pub mod bimodule;
pub mod corpus;
pub mod braid;
pub mod contact_lift;
pub mod dga;
pub mod front;
pub mod homology;
pub mod lch;
pub mod moves;
pub mod pipeline;
pub mod scalar;
pub mod zigzag;

pub use bimodule::{mixed_differential, split_dgas, BimoduleError, DgBimodule, MixedWord, StackedLinkDiagram};
pub use arcs::{arc_intersection, ArcError, HalfInteger, Lamination};
pub use front::{FrontError, FrontEvent, FrontWord, Level};
pub use dga::{Augmentation, Dga, DgaError, DgaReport, PoincarePolynomial, WordSum};
pub use braid::{BraidError, BraidWord, FreeGroupWord};
pub use lch::{differential, front_dga, gradings, resolve_front, LagrangianDiagram, LchError};
pub use homology::Z2Complex;
pub use moves::{LegendrianMove, MoveError};
pub use zigzag::{apply_braid, hf_dim, ProjComplex, ZigzagAlgebra, ZigzagError};
pub use contact_lift::{compose_lifts, cocycle_residual, flow, primitive, FlowMap, HamiltonianPath, LiftConfig, LiftError, LiftedMap, PlanarHamiltonian};
pub use pipeline::{hf_matrix, intersection_matrix, is_trivial_criterion, HfMatrix, IntersectionMatrix, PipelineError, SweepReport};
