use super::{require_bicartesian, PredicateVerdict, Violation};
use crate::constructions::{artin_gluing, free_cocartesian, FreeCocartesian};
use crate::error::Error;
use crate::fibration::{cartesian_functor_failure, DepSquare, Fibration};
use crate::fincat::{is_lex_category, preserves_pullbacks, pullback_failure, Functor, Mor, Obj};

/// A square with cocartesian bottom and cartesian sides over a base pullback
/// whose top is not cocartesian.
pub(crate) fn bcc_square_fails(p: &Fibration, s: &DepSquare) -> bool {
    let e = &**p.total();
    s.commutes(e)
        && p.is_cocartesian_arrow(s.bottom)
        && p.is_cartesian_arrow(s.left)
        && p.is_cartesian_arrow(s.right)
        && !p.is_cocartesian_arrow(s.top)
        && s.base_square(p).is_pullback(p.base())
}

/// Cocartesian top and bottom and cartesian left over a base pullback, with a
/// non-cartesian right side.
pub(crate) fn dual_bcc_square_fails(p: &Fibration, s: &DepSquare) -> bool {
    let e = &**p.total();
    s.commutes(e)
        && p.is_cocartesian_arrow(s.bottom)
        && p.is_cocartesian_arrow(s.top)
        && p.is_cartesian_arrow(s.left)
        && !p.is_cartesian_arrow(s.right)
        && s.base_square(p).is_pullback(p.base())
}

fn bcc_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_cocartesian_arrow(f)) {
        for &g in e.incoming(e.tgt(f)) {
            if !p.is_cartesian_arrow(g) {
                continue;
            }
            for &g2 in e.incoming(e.src(f)) {
                if !p.is_cartesian_arrow(g2) {
                    continue;
                }
                let fg2 = e.compose(f, g2);
                for &f2 in e.hom(e.src(g2), e.src(g)) {
                    if e.compose(g, f2) != fg2 {
                        continue;
                    }
                    let square = DepSquare {
                        top: f2,
                        bottom: f,
                        left: g2,
                        right: g,
                    };
                    if bcc_square_fails(p, &square) {
                        return Some(Violation::Bcc { square });
                    }
                }
            }
        }
    }
    None
}

fn dual_bcc_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_cocartesian_arrow(f)) {
        for &g2 in e.incoming(e.src(f)) {
            if !p.is_cartesian_arrow(g2) {
                continue;
            }
            let fg2 = e.compose(f, g2);
            for &f2 in e.outgoing(e.src(g2)) {
                if !p.is_cocartesian_arrow(f2) {
                    continue;
                }
                for &g in e.hom(e.tgt(f2), e.tgt(f)) {
                    if e.compose(g, f2) != fg2 {
                        continue;
                    }
                    let square = DepSquare {
                        top: f2,
                        bottom: f,
                        left: g2,
                        right: g,
                    };
                    if dual_bcc_square_fails(p, &square) {
                        return Some(Violation::DualBcc { square });
                    }
                }
            }
        }
    }
    None
}

/// Over every base pullback, a square with cocartesian bottom and cartesian
/// sides has a cocartesian top.
pub fn satisfies_bcc(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_bicartesian(p)?;
    Ok(PredicateVerdict::from_violation("bcc", p, bcc_violation(p)))
}

/// Over every base pullback, a square with cocartesian top and bottom and
/// cartesian left side has a cartesian right side.
pub fn satisfies_dual_bcc(p: &Fibration) -> Result<PredicateVerdict, Error> {
    require_bicartesian(p)?;
    Ok(PredicateVerdict::from_violation("dual_bcc", p, dual_bcc_violation(p)))
}

/// `τ: π ↓ B -> E` with `τ(e, b, v) = tgt P_!(v, e)`, together with the unit
/// `η_X = (P_!(v, e), id_b): X -> ι τ X` and the inclusion `ι: E -> π ↓ B`.
struct Transport {
    l: FreeCocartesian,
    tau: Functor,
    iota: Functor,
    eta: Vec<Mor>,
}

impl Transport {
    fn build(p: &Fibration) -> Result<Transport, Error> {
        let (e, b) = (&**p.total(), &**p.base());
        let l = free_cocartesian(p.proj())?;
        let lc = &l.comma;
        let lift = |x: Obj| -> Result<Mor, Error> {
            let (eo, _, v) = lc.objects[x.idx()];
            p.push_lift(v, eo)
        };
        let mut obj_map = Vec::with_capacity(lc.cat.num_objects());
        for x in lc.cat.objects() {
            obj_map.push(e.tgt(lift(x)?));
        }
        let mut mor_map = Vec::with_capacity(lc.cat.num_morphisms());
        for m in lc.cat.morphisms() {
            let (alpha, beta) = lc.morphisms[m.idx()];
            let (l1, l2) = (lift(lc.cat.src(m))?, lift(lc.cat.tgt(m))?);
            mor_map.push(p.fill_cocart(l1, e.compose(l2, alpha), beta)?);
        }
        let tau = Functor::new(lc.cat.clone(), p.total().clone(), obj_map, mor_map)?;
        let iota_obj: Vec<Obj> = e.objects().map(|o| l.unit_object(p.proj(), o)).collect();
        let mut iota_mor = Vec::with_capacity(e.num_morphisms());
        for f in e.morphisms() {
            let (x, y) = (iota_obj[e.src(f).idx()], iota_obj[e.tgt(f).idx()]);
            iota_mor.push(
                lc.morphism(x, y, f, p.pi(f))
                    .ok_or_else(|| Error::NoFactorization("ι is not defined on an arrow".into()))?,
            );
        }
        let iota = Functor::new(p.total().clone(), lc.cat.clone(), iota_obj, iota_mor)?;
        let mut eta = Vec::with_capacity(lc.cat.num_objects());
        for x in lc.cat.objects() {
            let (_, bo, _) = lc.objects[x.idx()];
            let target = iota.ob(tau.ob(x));
            eta.push(
                lc.morphism(x, target, lift(x)?, b.id(bo))
                    .ok_or_else(|| Error::NoFactorization("unit is not an arrow".into()))?,
            );
        }
        Ok(Transport { l, tau, iota, eta })
    }

    /// Number of `k: τ X -> y` with `ι(k) ∘ η_X = m`.
    fn factorizations(&self, p: &Fibration, x: Obj, y: Obj, m: Mor) -> usize {
        let (e, lc) = (&**p.total(), &*self.l.comma.cat);
        e.hom(self.tau.ob(x), y)
            .iter()
            .filter(|&&k| lc.compose(self.iota.mor(k), self.eta[x.idx()]) == m)
            .count()
    }

    fn violation(&self, p: &Fibration) -> Result<Option<Violation>, Error> {
        let e = &**p.total();
        let lc = &self.l.comma;
        for x in lc.cat.objects() {
            if !self.l.fibration.is_strictly_vertical(self.eta[x.idx()]) {
                return Err(Error::Precondition("unit of τ ⊣ ι is not vertical".into()));
            }
            for y in e.objects() {
                for &m in lc.cat.hom(x, self.iota.ob(y)) {
                    if self.factorizations(p, x, y, m) != 1 {
                        let (alpha, beta) = lc.morphisms[m.idx()];
                        return Ok(Some(Violation::TransportUniversalArrow {
                            source: lc.objects[x.idx()],
                            object: y,
                            alpha,
                            beta,
                        }));
                    }
                }
            }
        }
        if let Some(m) = cartesian_functor_failure(&self.l.fibration, p, &self.tau)? {
            let (alpha, beta) = lc.morphisms[m.idx()];
            return Ok(Some(Violation::TransportNotCartesian {
                source: lc.objects[lc.cat.src(m).idx()],
                target: lc.objects[lc.cat.tgt(m).idx()],
                alpha,
                beta,
            }));
        }
        Ok(None)
    }
}

fn transport_preconditions(p: &Fibration) -> Result<Option<Violation>, Error> {
    let (e, b) = (p.total(), p.base());
    if let Some((u, x)) = p.missing_cartesian_lift() {
        return Err(Error::MissingLift {
            arrow: b.mor_name(u).to_string(),
            object: e.obj_name(x).to_string(),
        });
    }
    if let Some(cs) = pullback_failure(b) {
        return Err(Error::MissingPullback(format!(
            "({}, {}) in the base",
            b.mor_name(cs.left),
            b.mor_name(cs.right)
        )));
    }
    Ok(p
        .missing_cocartesian_lift()
        .map(|(arrow, object)| Violation::MissingLift { arrow, object }))
}

/// The Beck-Chevalley condition read as: `ι: E -> π ↓ B` has a fibered left
/// adjoint `τ` with vertical unit, and `τ` is a cartesian functor. When `π` has
/// no cocartesian lifts `τ` does not exist and the verdict fails on the
/// missing lift.
pub fn bcc_via_transport(p: &Fibration) -> Result<PredicateVerdict, Error> {
    const NAME: &str = "bcc_via_transport";
    if let Some(v) = transport_preconditions(p)? {
        return Ok(PredicateVerdict::fail(NAME, p, v));
    }
    let t = Transport::build(p)?;
    Ok(PredicateVerdict::from_violation(NAME, p, t.violation(p)?))
}

pub(crate) fn transport_violation_holds(p: &Fibration, v: &Violation) -> Result<bool, Error> {
    if transport_preconditions(p)?.is_some() {
        return Ok(false);
    }
    let t = Transport::build(p)?;
    let lc = &t.l.comma;
    Ok(match *v {
        Violation::TransportUniversalArrow {
            source: (eo, bo, vo),
            object,
            alpha,
            beta,
        } => {
            let Some(x) = lc.object(eo, bo, vo) else {
                return Ok(false);
            };
            if !p.total().contains_obj(object) {
                return Ok(false);
            }
            match lc.morphism(x, t.iota.ob(object), alpha, beta) {
                Some(m) => t.factorizations(p, x, object, m) != 1,
                None => false,
            }
        }
        Violation::TransportNotCartesian {
            source,
            target,
            alpha,
            beta,
        } => {
            let (Some(x), Some(y)) = (
                lc.object(source.0, source.1, source.2),
                lc.object(target.0, target.1, target.2),
            ) else {
                return Ok(false);
            };
            match lc.morphism(x, y, alpha, beta) {
                Some(m) => t.l.fibration.is_cartesian_arrow(m) && !p.is_cartesian_arrow(t.tau.mor(m)),
                None => false,
            }
        }
        _ => false,
    })
}

/// `F` preserves pullbacks exactly when `gl(F)` satisfies the Beck-Chevalley
/// condition. Both sides are computed independently; returns whether they agree.
pub fn gluing_bcc_iff_pb_preserving(f: &Functor) -> Result<bool, Error> {
    if !is_lex_category(f.source()) {
        return Err(Error::NotLex("source of the glued functor".into()));
    }
    if !is_lex_category(f.target()) {
        return Err(Error::NotLex("target of the glued functor".into()));
    }
    let preserves = preserves_pullbacks(f)?;
    let g = artin_gluing(f)?;
    Ok(preserves == satisfies_bcc(&g.fibration)?.holds)
}
