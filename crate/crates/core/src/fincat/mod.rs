//! Finite categories, functors, natural transformations and finite limits.

mod category;
mod functor;
mod limits;
mod slice;
mod sub;

pub use category::{CategoryBuilder, Cone, FinCategory, Mor, Obj};
pub use functor::{natural_iso, Functor, NatTrans};
pub use limits::{
    cospans, pullback_mediator,
    is_lex_category, is_lex_functor, is_pullback, is_terminal, pullback, pullback_cone,
    pullback_failure, pullback_preservation_failure, pushout, pushout_cone, preserves_pullbacks,
    preserves_terminal, terminal_object, terminal_objects, universal_cones, ConeResult, Cospan,
    MediatorEntry, Span,
};
pub use sub::Subcategory;
pub use slice::{
    comma, comma_guarded, is_equivalence, slice, slice_functor, slice_guarded, slice_pullback_agrees,
    slice_pullback_agrees_in, Comma, Slice,
};

use crate::error::Error;

/// Upper bound on the number of morphisms a constructed category may have.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGuard {
    pub limit: usize,
}

impl SizeGuard {
    pub const DEFAULT_LIMIT: usize = 20_000;

    pub fn new(limit: usize) -> Self {
        SizeGuard { limit }
    }

    pub fn unlimited() -> Self {
        SizeGuard { limit: usize::MAX }
    }

    pub fn check(self, count: usize) -> Result<(), Error> {
        if count > self.limit {
            Err(Error::SizeGuard {
                count,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard::new(Self::DEFAULT_LIMIT)
    }
}
