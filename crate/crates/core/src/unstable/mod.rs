//! Unstable modules over the Steenrod algebra, truncated above a fixed degree.

mod coaction;
mod hom;
mod module;
mod ops;

pub use coaction::{coaction, milnor_op, CoactionExpansion, MilnorMonomial};
pub use hom::{hom_u, hom_u_with, ConstraintOps, ModuleMap, UnstableHomSpace};
pub use module::{
    build_f1, orbit_quotient, quotient_by_submodule, submodule_from_bases, submodule_generated, submodule_span,
    tensor, tensor_element, tensor_power, young_invariants, Element, GradedSubspace, Letter, OrbitKind, Presentation, Provenance,
    ReducedBasis, TensorWord, TruncatedModule,
};
pub use ops::{modnil_generator_check, p0_injective_range, sqrt_extract, ModnilOutcome};
