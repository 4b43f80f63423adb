//! Builders for the standard fibrations: arrow categories with their domain
//! and codomain projections, the Grothendieck construction, the free
//! cocartesian fibration and Artin gluing.

mod arrow;
mod free;
mod gluing;
mod grothendieck;

pub use arrow::{
    arrow_category, arrow_category_guarded, codomain_fibration, domain_lift_formula,
    domain_opfibration, ArrowCategory,
};
pub use free::{free_cocartesian, free_cocartesian_guarded, FreeCocartesian};
pub use gluing::{
    artin_gluing, artin_gluing_guarded, gluing_lift_failure, verify_gluing_lift_formulas, Gluing,
    GluingLiftFailure,
};
pub use grothendieck::{grothendieck, grothendieck_guarded, Grothendieck, GrothendieckData};
