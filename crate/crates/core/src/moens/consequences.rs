use serde::{Deserialize, Serialize};

use super::extensive::{omega_with, terminal_section};
use super::{describe, is_moens, PredicateVerdict, Violation};
use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{
    is_equivalence, is_pullback, preserves_terminal, pullback_cone, pullback_mediator,
    pullback_preservation_failure, slice_functor, Functor, Mor, Obj,
};

/// What a Moens fibration is guaranteed to satisfy, each decided on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoensConsequences {
    /// Gaps into pullbacks of a cocartesian leg are cocartesian.
    pub cocartesian_leg_gap: PredicateVerdict,
    /// Gaps of cocartesian arrows into pullbacks of vertical arrows are cocartesian.
    pub vertical_gap: PredicateVerdict,
    /// `u_!/d: P a/d -> P b/u_! d` is an equivalence.
    pub slice_transport: PredicateVerdict,
    /// Every `u_!` preserves pullbacks.
    pub transport_pullbacks: PredicateVerdict,
    /// `ω: E -> P z` is lex.
    pub omega_lex: PredicateVerdict,
}

impl MoensConsequences {
    pub fn verdicts(&self) -> [&PredicateVerdict; 5] {
        [
            &self.cocartesian_leg_gap,
            &self.vertical_gap,
            &self.slice_transport,
            &self.transport_pullbacks,
            &self.omega_lex,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|v| v.holds)
    }
}

fn missing(p: &Fibration, f: Mor, g: Mor) -> Error {
    let e = p.total();
    Error::MissingPullback(format!("({}, {})", e.mor_name(f), e.mor_name(g)))
}

pub(crate) fn leg_gap_fails(p: &Fibration, g: Mor, f: Mor) -> Result<bool, Error> {
    let e = &**p.total();
    if !p.is_cocartesian_arrow(g) || e.tgt(f) != e.src(g) {
        return Ok(false);
    }
    let h = e.compose(g, f);
    let gap = pullback_mediator(e, h, g, e.id(e.src(f)), f).ok_or_else(|| missing(p, h, g))?;
    Ok(!p.is_cocartesian_arrow(gap))
}

fn leg_gap_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let e = &**p.total();
    for g in e.morphisms().filter(|&g| p.is_cocartesian_arrow(g)) {
        for &f in e.incoming(e.src(g)) {
            if leg_gap_fails(p, g, f)? {
                return Ok(Some(Violation::CocartesianLegGap {
                    cocartesian: g,
                    arrow: f,
                }));
            }
        }
    }
    Ok(None)
}

pub(crate) fn vertical_gap_fails(
    p: &Fibration,
    left: Mor,
    right: Mor,
    lv: Mor,
    rv: Mor,
) -> Result<bool, Error> {
    let e = &**p.total();
    let shaped = e.src(left) == e.src(right)
        && e.tgt(left) == e.src(lv)
        && e.tgt(right) == e.src(rv)
        && e.tgt(lv) == e.tgt(rv);
    if !shaped
        || !p.is_cocartesian_arrow(left)
        || !p.is_cocartesian_arrow(right)
        || !p.is_vertical(lv)
        || !p.is_vertical(rv)
        || e.compose(lv, left) != e.compose(rv, right)
    {
        return Ok(false);
    }
    let gap = pullback_mediator(e, lv, rv, left, right).ok_or_else(|| missing(p, lv, rv))?;
    Ok(!p.is_cocartesian_arrow(gap))
}

fn vertical_gap_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let e = &**p.total();
    for d in e.objects() {
        let out: Vec<Mor> = e
            .outgoing(d)
            .iter()
            .copied()
            .filter(|&a| p.is_cocartesian_arrow(a))
            .collect();
        for &left in &out {
            for &right in &out {
                for &lv in e.outgoing(e.tgt(left)) {
                    for &rv in e.hom(e.tgt(right), e.tgt(lv)) {
                        if vertical_gap_fails(p, left, right, lv, rv)? {
                            return Ok(Some(Violation::VerticalGap {
                                left,
                                right,
                                left_vertical: lv,
                                right_vertical: rv,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub(crate) fn slice_transport_fails(p: &Fibration, u: Mor, d: Obj) -> Result<bool, Error> {
    let b = &**p.base();
    if p.over(d) != b.src(u) {
        return Ok(false);
    }
    let push = p.transport_pushforward(u)?;
    let (_, _, f) = slice_functor(&push, p.local_obj(d))?;
    Ok(!is_equivalence(&f))
}

fn slice_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let b = &**p.base();
    for u in b.morphisms() {
        for &d in p.objects_over(b.src(u)) {
            if slice_transport_fails(p, u, d)? {
                return Ok(Some(Violation::SliceTransport { arrow: u, object: d }));
            }
        }
    }
    Ok(None)
}

/// Whether `f` sends the chosen pullback of the source cospan `(l, r)` to a
/// non-pullback.
fn breaks_pullback(f: &Functor, l: Mor, r: Mor) -> Result<bool, Error> {
    let s = &**f.source();
    let cone = pullback_cone(s, l, r).ok_or_else(|| {
        Error::MissingPullback(format!("({}, {})", s.mor_name(l), s.mor_name(r)))
    })?;
    Ok(!is_pullback(
        f.target(),
        f.mor(l),
        f.mor(r),
        f.mor(cone.leg_left),
        f.mor(cone.leg_right),
    ))
}

pub(crate) fn transport_not_lex(p: &Fibration, u: Mor, left: Mor, right: Mor) -> Result<bool, Error> {
    let (e, b) = (&**p.total(), &**p.base());
    let fa = p.fiber(b.src(u))?;
    let (Some(l), Some(r)) = (fa.local_mor(left), fa.local_mor(right)) else {
        return Ok(false);
    };
    if e.tgt(left) != e.tgt(right) {
        return Ok(false);
    }
    breaks_pullback(&p.transport_pushforward(u)?, l, r)
}

pub(crate) fn transport_lex_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let b = &**p.base();
    for u in b.morphisms() {
        let push = p.transport_pushforward(u)?;
        if let Some(cs) = pullback_preservation_failure(&push)? {
            let fa = p.fiber(b.src(u))?;
            return Ok(Some(Violation::TransportNotLex {
                arrow: u,
                left: fa.ambient_mor(cs.left),
                right: fa.ambient_mor(cs.right),
            }));
        }
    }
    Ok(None)
}

pub(crate) fn omega_not_terminal(p: &Fibration) -> Result<bool, Error> {
    let ts = terminal_section(p)?;
    Ok(!preserves_terminal(&omega_with(p, &ts)?)?)
}

pub(crate) fn omega_not_pullback(p: &Fibration, left: Mor, right: Mor) -> Result<bool, Error> {
    let e = &**p.total();
    if e.tgt(left) != e.tgt(right) {
        return Ok(false);
    }
    let ts = terminal_section(p)?;
    breaks_pullback(&omega_with(p, &ts)?, left, right)
}

fn omega_violation(p: &Fibration) -> Result<Option<Violation>, Error> {
    let ts = terminal_section(p)?;
    let omega = omega_with(p, &ts)?;
    if !preserves_terminal(&omega)? {
        return Ok(Some(Violation::OmegaNotTerminal));
    }
    Ok(pullback_preservation_failure(&omega)?
        .map(|cs| Violation::OmegaNotPullback {
            left: cs.left,
            right: cs.right,
        }))
}

/// Decides the consequences of being Moens. Errors with `NotMoens` when the
/// fibration is not Moens.
pub fn moens_consequences(p: &Fibration) -> Result<MoensConsequences, Error> {
    let m = is_moens(p)?;
    if !m.holds {
        return Err(Error::NotMoens(describe(&m)));
    }
    Ok(MoensConsequences {
        cocartesian_leg_gap: PredicateVerdict::from_violation(
            "cocartesian_leg_gap",
            p,
            leg_gap_violation(p)?,
        ),
        vertical_gap: PredicateVerdict::from_violation("vertical_gap", p, vertical_gap_violation(p)?),
        slice_transport: PredicateVerdict::from_violation("slice_transport", p, slice_violation(p)?),
        transport_pullbacks: PredicateVerdict::from_violation(
            "transport_pullbacks",
            p,
            transport_lex_violation(p)?,
        ),
        omega_lex: PredicateVerdict::from_violation("omega_lex", p, omega_violation(p)?),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{artin_gluing, codomain_fibration};
    use crate::fixtures;

    #[test]
    fn gluing_of_identity() {
        let d = Arc::new(fixtures::diamond());
        let p = artin_gluing(&Functor::identity(d)).unwrap().fibration;
        let c = moens_consequences(&p).unwrap();
        assert!(c.all_hold(), "{:?}", c);
    }

    #[test]
    fn codomain_of_a_lattice() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        assert!(moens_consequences(&p).unwrap().all_hold());
    }

    #[test]
    fn not_moens_is_rejected() {
        let p = artin_gluing(&fixtures::f_bad()).unwrap().fibration;
        assert!(matches!(moens_consequences(&p), Err(Error::NotMoens(_))));
        // the transport along the failing arrow still breaks a pullback
        let v = transport_lex_violation(&p).unwrap();
        if let Some(v) = v {
            assert!(v.recheck(&p).unwrap());
        }
    }
}
