//! Traveling-wave solutions of complex KdV and mKdV equations, with the
//! numerical machinery to check them: Jacobi elliptic kernels, a residual
//! oracle, Miura/Galilean/PT transforms, a pseudospectral integrator and a
//! non-Hermitian Schrodinger eigensolver.

pub mod catalog;
pub mod elliptic;
pub mod equation;
pub mod error;
pub mod evolve;
pub mod lax;
pub mod profile;
pub mod residual;
pub mod transforms;
mod stencil;

pub use catalog::{
    eval_field, eval_profile, intensity, resolve, resolve_with, superpose, ComplexFieldValue,
    FamilyId, ResolvedParams, Sign, Solution, SolutionSpec, VelocityConvention,
};
pub use elliptic::{complete_k, jacobi, period, EllipticTriple, ModulusParameter, PeriodicKind};
pub use equation::EquationKind;
pub use error::{Error, Result};
pub use profile::{Grid, SampledProfile, Topology};
pub use residual::{traveling_residual, velocity_scan, ResidualReport};
pub use transforms::{
    classify, cole_hopf, galilean_shift, miura, pt_transform, MiuraBranch, SymmetryClass,
    SymmetryTag,
};
pub use evolve::{evolve, invariants, EvolutionConfig, EvolutionResult, Invariants};
pub use lax::{
    bound_states, isospectral_check, susy_pair, EigenReport, IsospectralReport, SchrodingerProblem,
    Superpotential,
};
