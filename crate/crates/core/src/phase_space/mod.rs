//! Model phase spaces and classical kinematics.

mod flow;
mod manifold;
mod observable;

pub use flow::{
    bracket_from_fields, circle_generator, generating_action, hamiltonian_field_components,
    hamiltonian_vector_field, integrate_flow, lagrangian_of, moment_map_defect, moment_map_s1,
    poisson_bracket, ActionResult, FlowConfig, DEFAULT_BLOWUP_BOUND, DEFAULT_STEPS, FD_STEP_FIRST,
};
pub use manifold::{
    standard_symplectic_matrix, symplectic_pairing, ComplexStructure, HermitianForm, ModelKind,
    ModelManifold, PhasePoint,
};
pub use observable::{Observable, Var};
