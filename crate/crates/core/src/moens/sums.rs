use super::{
    describe, require_lex_bicartesian, satisfies_bcc, Characterizations, PredicateVerdict,
    StabilityMode, Violation,
};
use crate::error::Error;
use crate::fibration::{DepSquare, Fibration};
use crate::fincat::{pullback_cone, pullback_mediator, Mor};

fn missing(p: &Fibration, f: Mor, g: Mor) -> Error {
    let e = p.total();
    Error::MissingPullback(format!("({}, {})", e.mor_name(f), e.mor_name(g)))
}

/// The pullback of cocartesian `f` along `k` is not cocartesian.
pub(crate) fn unstable(p: &Fibration, f: Mor, k: Mor) -> Result<bool, Error> {
    let e = &**p.total();
    if !p.is_cocartesian_arrow(f) || e.tgt(k) != e.tgt(f) {
        return Ok(false);
    }
    let cone = pullback_cone(e, f, k).ok_or_else(|| missing(p, f, k))?;
    Ok(!p.is_cocartesian_arrow(cone.leg_right))
}

pub(crate) fn stability_violation(p: &Fibration, vertical_only: bool) -> Result<Option<Violation>, Error> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_cocartesian_arrow(f)) {
        for &k in e.incoming(e.tgt(f)) {
            if vertical_only && !p.is_vertical(k) {
                continue;
            }
            if unstable(p, f, k)? {
                return Ok(Some(Violation::UnstableSum {
                    cocartesian: f,
                    along: k,
                }));
            }
        }
    }
    Ok(None)
}

pub(crate) fn diagonal_fails(p: &Fibration, f: Mor) -> Result<bool, Error> {
    let e = &**p.total();
    if !p.is_cocartesian_arrow(f) {
        return Ok(false);
    }
    let id = e.id(e.src(f));
    let delta = pullback_mediator(e, f, f, id, id).ok_or_else(|| missing(p, f, f))?;
    Ok(!p.is_cocartesian_arrow(delta))
}

fn disjointness_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    for f in p.total().morphisms() {
        if diagonal_fails(p, f)? {
            return Ok(Some(Violation::DiagonalNotCocartesian { cocartesian: f }));
        }
    }
    Ok(None)
}

/// Every pullback of a cocartesian arrow is cocartesian.
pub fn has_stable_sums(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_lex_bicartesian(p)?;
    Ok(PredicateVerdict::from_violation(
        "stable_sums",
        p,
        stability_violation(p, false)?,
    ))
}

/// The fibered diagonal `δ_f: d -> d ×_e d` of every cocartesian `f` is cocartesian.
pub fn has_disjoint_sums(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_lex_bicartesian(p)?;
    Ok(PredicateVerdict::from_violation(
        "disjoint_sums",
        p,
        disjointness_violation(p)?,
    ))
}

/// Lex Beck-Chevalley with stable sums.
pub fn is_pre_moens(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_lex_bicartesian(p)?;
    let bcc = satisfies_bcc(p)?;
    let stable = PredicateVerdict::from_violation("stable_sums", p, stability_violation(p, false)?);
    Ok(PredicateVerdict::all_of("pre_moens", vec![bcc, stable]))
}

/// Lex Beck-Chevalley with stable and disjoint sums.
pub fn is_moens(p: &Fibration) -> Result<PredicateVerdict, Error> {
    let pre = is_pre_moens(p)?;
    let disjoint = if pre.holds {
        PredicateVerdict::from_violation("disjoint_sums", p, disjointness_violation(p)?)
    } else {
        PredicateVerdict::pass("disjoint_sums")
    };
    Ok(PredicateVerdict::all_of("moens", vec![pre, disjoint]))
}

/// Lex bifibration whose cocartesian arrows are stable along vertical arrows
/// and whose squares with cocartesian top and bottom and vertical sides are
/// pullbacks.
pub fn is_generalized_moens(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_lex_bicartesian(p)?;
    let stable = PredicateVerdict::from_violation("vertical_stability", p, stability_violation(p, true)?);
    let squares = PredicateVerdict::from_violation(
        "cocartesian_squares_pullback",
        p,
        cocartesian_square_violation(p),
    );
    Ok(PredicateVerdict::all_of("generalized_moens", vec![stable, squares]))
}

pub(crate) fn left_cancel_fails(p: &Fibration, f: Mor, g: Mor) -> bool {
    let e = &**p.total();
    e.tgt(f) == e.src(g)
        && p.is_cocartesian_arrow(g)
        && p.is_cocartesian_arrow(e.compose(g, f))
        && !p.is_cocartesian_arrow(f)
}

fn left_cancel_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for g in e.morphisms().filter(|&g| p.is_cocartesian_arrow(g)) {
        for &f in e.incoming(e.src(g)) {
            if left_cancel_fails(p, f, g) {
                return Some(Violation::LeftCancel { first: f, then: g });
            }
        }
    }
    None
}

pub(crate) fn not_conservative(p: &Fibration, k: Mor, f: Mor) -> bool {
    let e = &**p.total();
    e.tgt(k) == e.src(f)
        && p.is_vertical(k)
        && p.is_cocartesian_arrow(f)
        && p.is_cocartesian_arrow(e.compose(f, k))
        && !e.is_iso(k)
}

fn conservativity_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_cocartesian_arrow(f)) {
        for &k in e.incoming(e.src(f)) {
            if not_conservative(p, k, f) {
                return Some(Violation::NotConservative {
                    vertical: k,
                    cocartesian: f,
                });
            }
        }
    }
    None
}

/// Cocartesian top and bottom, vertical sides, and not a pullback.
pub(crate) fn cocartesian_square_fails(p: &Fibration, s: &DepSquare) -> bool {
    let e = &**p.total();
    s.commutes(e)
        && p.is_cocartesian_arrow(s.top)
        && p.is_cocartesian_arrow(s.bottom)
        && p.is_vertical(s.left)
        && p.is_vertical(s.right)
        && !s.is_pullback(e)
}

pub(crate) fn cocartesian_square_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for h in e.morphisms().filter(|&h| p.is_cocartesian_arrow(h)) {
        for &k in e.outgoing(e.tgt(h)) {
            if !p.is_vertical(k) {
                continue;
            }
            let kh = e.compose(k, h);
            for &f in e.outgoing(e.src(h)) {
                if !p.is_vertical(f) {
                    continue;
                }
                for &g in e.hom(e.tgt(f), e.tgt(k)) {
                    if e.compose(g, f) != kh {
                        continue;
                    }
                    let square = DepSquare {
                        top: h,
                        bottom: g,
                        left: f,
                        right: k,
                    };
                    if cocartesian_square_fails(p, &square) {
                        return Some(Violation::CocartesianSquareNotPullback { square });
                    }
                }
            }
        }
    }
    None
}

/// The four equivalent forms of disjointness, each decided on its own:
/// (i) Moens, (ii) left cancellation of cocartesian arrows, (iii) conservative
/// cocartesian transport, (iv) squares with cocartesian top and bottom and
/// vertical sides are pullbacks.
pub fn disjointness_characterizations(
    p: &Fibration,
    mode: StabilityMode,
) -> Result<Characterizations, Error> {
    match mode {
        StabilityMode::PreMoens => {
            let pre = is_pre_moens(p)?;
            if !pre.holds {
                return Err(Error::NotPreMoens(describe(&pre)));
            }
        }
        StabilityMode::VerticalStability => {
            require_lex_bicartesian(p)?;
            if stability_violation(p, true)?.is_some() {
                return Err(Error::NotPreMoens(
                    "cocartesian arrows are not stable along vertical arrows".into(),
                ));
            }
        }
    }
    let moens = is_moens(p)?;
    Ok(Characterizations {
        mode,
        verdicts: vec![
            moens,
            PredicateVerdict::from_violation("left_cancel", p, left_cancel_violation(p)),
            PredicateVerdict::from_violation("conservative_transport", p, conservativity_violation(p)),
            PredicateVerdict::from_violation(
                "cocartesian_squares_pullback",
                p,
                cocartesian_square_violation(p),
            ),
        ],
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{artin_gluing, codomain_fibration, grothendieck};
    use crate::fincat::Functor;
    use crate::fixtures;

    fn gl(f: &Functor) -> Fibration {
        artin_gluing(f).unwrap().fibration
    }

    #[test]
    fn gluing_of_identity_is_moens() {
        let d = Arc::new(fixtures::diamond());
        let p = gl(&Functor::identity(d));
        assert!(has_stable_sums(&p).unwrap().holds);
        assert!(has_disjoint_sums(&p).unwrap().holds);
        assert!(is_moens(&p).unwrap().holds);
        assert!(is_generalized_moens(&p).unwrap().holds);
        let c = disjointness_characterizations(&p, StabilityMode::PreMoens).unwrap();
        assert!(c.all_hold());
    }

    #[test]
    fn gluing_of_f_bad_is_generalized_only() {
        let p = gl(&fixtures::f_bad());
        let m = is_moens(&p).unwrap();
        assert!(!m.holds);
        assert!(m.recheck(&p).unwrap());
        assert!(is_generalized_moens(&p).unwrap().holds);
    }

    #[test]
    fn collapsing_fixture_fails_all_four() {
        let g = grothendieck(&fixtures::collapsing_grothendieck()).unwrap();
        let p = &g.fibration;
        assert!(!has_stable_sums(p).unwrap().holds);
        assert!(matches!(
            disjointness_characterizations(p, StabilityMode::PreMoens),
            Err(Error::NotPreMoens(_))
        ));
        let c = disjointness_characterizations(p, StabilityMode::VerticalStability).unwrap();
        assert!(c.none_hold(), "{:?}", c.verdicts);
        for v in &c.verdicts {
            assert!(v.recheck(p).unwrap(), "{}", v.name);
        }
        assert!(!is_generalized_moens(p).unwrap().holds);
    }

    #[test]
    fn codomain_of_a_lattice_is_moens() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        assert!(is_moens(&p).unwrap().holds);
    }

    #[test]
    fn not_lex_is_a_precondition_error() {
        let w = Arc::new(fixtures::walking_cospan().opposite());
        let p = gl(&Functor::identity(w));
        assert!(has_stable_sums(&p).unwrap_err().is_precondition());
    }
}
