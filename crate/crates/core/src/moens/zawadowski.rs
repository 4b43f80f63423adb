use super::consequences::transport_lex_violation;
use super::{is_generalized_moens, require_lex_bicartesian, PredicateVerdict, Violation};
use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{is_pullback, Mor};

/// Naturality square of `η` at the fiber arrow `m: x -> x'` over `src u`.
pub(crate) fn unit_square_fails(p: &Fibration, u: Mor, m: Mor) -> Result<bool, Error> {
    let b = &**p.base();
    let fa = p.fiber(b.src(u))?;
    let Some(lm) = fa.local_mor(m) else {
        return Ok(false);
    };
    let eta = p.adjunction_unit(u)?;
    let t = eta.target();
    let c = &fa.cat;
    Ok(!is_pullback(
        c,
        eta.component(c.tgt(lm)),
        t.mor(lm),
        lm,
        eta.component(c.src(lm)),
    ))
}

/// Naturality square of `ε` at the fiber arrow `m: y -> y'` over `tgt u`.
pub(crate) fn counit_square_fails(p: &Fibration, u: Mor, m: Mor) -> Result<bool, Error> {
    let b = &**p.base();
    let fb = p.fiber(b.tgt(u))?;
    let Some(lm) = fb.local_mor(m) else {
        return Ok(false);
    };
    let eps = p.adjunction_counit(u)?;
    let s = eps.source();
    let c = &fb.cat;
    Ok(!is_pullback(
        c,
        eps.component(c.tgt(lm)),
        lm,
        s.mor(lm),
        eps.component(c.src(lm)),
    ))
}

fn cartesian_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let b = &**p.base();
    for u in b.morphisms() {
        let fa = p.fiber(b.src(u))?;
        for m in fa.cat.morphisms() {
            let m = fa.ambient_mor(m);
            if unit_square_fails(p, u, m)? {
                return Ok(Some(Violation::UnitNotCartesian {
                    arrow: u,
                    fiber_arrow: m,
                }));
            }
        }
        let fb = p.fiber(b.tgt(u))?;
        for m in fb.cat.morphisms() {
            let m = fb.ambient_mor(m);
            if counit_square_fails(p, u, m)? {
                return Ok(Some(Violation::CounitNotCartesian {
                    arrow: u,
                    fiber_arrow: m,
                }));
            }
        }
    }
    Ok(None)
}

/// Every `u_!` preserves pullbacks and the unit and counit of `u_! ⊣ u^*`
/// are cartesian natural transformations.
pub fn zawadowski_conditions(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_lex_bicartesian(p)?;
    let lex = PredicateVerdict::from_violation("transport_pullbacks", p, transport_lex_violation(p)?);
    let cart = PredicateVerdict::from_violation("cartesian_unit_counit", p, cartesian_violation(p)?);
    Ok(PredicateVerdict::all_of("zawadowski", vec![lex, cart]))
}

/// Zawadowski's conditions hold exactly when the fibration is generalized Moens.
pub fn zawadowski_equiv_gen_moens(p: &Fibration) -> Result<bool, Error> {
    Ok(zawadowski_conditions(p)?.holds == is_generalized_moens(p)?.holds)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{artin_gluing, codomain_fibration, grothendieck};
    use crate::fincat::Functor;
    use crate::fixtures;

    #[test]
    fn gluings_satisfy_the_conditions() {
        let d = Arc::new(fixtures::diamond());
        for f in [Functor::identity(d), fixtures::f_bad()] {
            let p = artin_gluing(&f).unwrap().fibration;
            assert!(zawadowski_conditions(&p).unwrap().holds);
            assert!(zawadowski_equiv_gen_moens(&p).unwrap());
        }
    }

    #[test]
    fn codomain_fibration_agrees() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        assert!(zawadowski_conditions(&p).unwrap().holds);
    }

    #[test]
    fn collapsing_fixture_fails_both() {
        let p = grothendieck(&fixtures::collapsing_grothendieck()).unwrap().fibration;
        let z = zawadowski_conditions(&p).unwrap();
        assert!(!z.holds);
        assert!(z.recheck(&p).unwrap());
        assert!(zawadowski_equiv_gen_moens(&p).unwrap());
    }
}
