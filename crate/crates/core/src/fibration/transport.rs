use crate::error::Error;
use crate::fincat::{Functor, Mor, NatTrans, Obj};

use super::Fibration;

/// The transport adjunction `u_! ⊣ u^*` for one base arrow `u: a -> b`.
#[derive(Clone, Debug)]
pub struct TransportAdjunction {
    pub arrow: Mor,
    pub push: Functor,
    pub pull: Functor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

/// What went wrong in [`TransportAdjunction::check`], in ambient ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjunctionFailure {
    UnitNotNatural(Mor),
    CounitNotNatural(Mor),
    LeftTriangle(Obj),
    RightTriangle(Obj),
    /// `Ψ(Φ(g)) ≠ g` for `g: u_! x -> y`.
    HomBijectionLeft(Mor),
    /// `Φ(Ψ(k)) ≠ k` for `k: x -> u^* y`.
    HomBijectionRight(Mor),
    /// `Φ(g) ≠ u^*(g)∘η_x`.
    HomBijectionNotNatural(Mor),
}

impl Fibration {
    /// `u_!: P a -> P b` on objects via canonical lifts, on vertical arrows via
    /// the filler of `P_!(u, e')∘f` against `P_!(u, e)`.
    pub fn transport_pushforward(&self, u: Mor) -> Result<Functor, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let (fa, fb) = (self.fiber_at(b.src(u)), self.fiber_at(b.tgt(u)));
        let idb = b.id(b.tgt(u));
        let mut obj_map = Vec::with_capacity(fa.cat.num_objects());
        for x in fa.cat.objects() {
            let l = self.push_lift(u, fa.ambient_obj(x))?;
            obj_map.push(self.local_obj(e.tgt(l)));
        }
        let mut mor_map = Vec::with_capacity(fa.cat.num_morphisms());
        for m in fa.cat.morphisms() {
            let f = fa.ambient_mor(m);
            let l = self.push_lift(u, e.src(f))?;
            let l2 = self.push_lift(u, e.tgt(f))?;
            let g = self.fill_cocart(l, e.compose(l2, f), idb)?;
            mor_map.push(fb.local_mor(g).expect("filler over an identity is vertical"));
        }
        Functor::new(fa.cat.clone(), fb.cat.clone(), obj_map, mor_map)
    }

    /// `u^*: P b -> P a`, dual to [`Fibration::transport_pushforward`].
    pub fn transport_pullback(&self, u: Mor) -> Result<Functor, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let (fa, fb) = (self.fiber_at(b.src(u)), self.fiber_at(b.tgt(u)));
        let ida = b.id(b.src(u));
        let mut obj_map = Vec::with_capacity(fb.cat.num_objects());
        for y in fb.cat.objects() {
            let l = self.pull_lift(u, fb.ambient_obj(y))?;
            obj_map.push(self.local_obj(e.src(l)));
        }
        let mut mor_map = Vec::with_capacity(fb.cat.num_morphisms());
        for m in fb.cat.morphisms() {
            let g = fb.ambient_mor(m);
            let l = self.pull_lift(u, e.src(g))?;
            let l2 = self.pull_lift(u, e.tgt(g))?;
            let k = self.fill_cart(l2, e.compose(g, l), ida)?;
            mor_map.push(fa.local_mor(k).expect("filler over an identity is vertical"));
        }
        Functor::new(fb.cat.clone(), fa.cat.clone(), obj_map, mor_map)
    }

    /// `η_x = cartFill(P_!(u, x))`: the vertical arrow `x -> u^* u_! x`.
    pub fn adjunction_unit(&self, u: Mor) -> Result<NatTrans, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let push = self.transport_pushforward(u)?;
        let pull = self.transport_pullback(u)?;
        let fa = self.fiber_at(b.src(u));
        let ida = b.id(b.src(u));
        let mut comps = Vec::with_capacity(fa.cat.num_objects());
        for x in fa.cat.objects() {
            let ex = fa.ambient_obj(x);
            let l = self.push_lift(u, ex)?;
            let r = self.pull_lift(u, e.tgt(l))?;
            let eta = self.fill_cart(r, l, ida)?;
            comps.push(fa.local_mor(eta).expect("vertical"));
        }
        NatTrans::new(
            Functor::identity(fa.cat.clone()),
            push.then(&pull)?,
            comps,
        )
    }

    /// `ε_y = cocartFill(P^*(u, y))`: the vertical arrow `u_! u^* y -> y`.
    pub fn adjunction_counit(&self, u: Mor) -> Result<NatTrans, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let push = self.transport_pushforward(u)?;
        let pull = self.transport_pullback(u)?;
        let fb = self.fiber_at(b.tgt(u));
        let idb = b.id(b.tgt(u));
        let mut comps = Vec::with_capacity(fb.cat.num_objects());
        for y in fb.cat.objects() {
            let ey = fb.ambient_obj(y);
            let r = self.pull_lift(u, ey)?;
            let l = self.push_lift(u, e.src(r))?;
            let eps = self.fill_cocart(l, r, idb)?;
            comps.push(fb.local_mor(eps).expect("vertical"));
        }
        NatTrans::new(
            pull.then(&push)?,
            Functor::identity(fb.cat.clone()),
            comps,
        )
    }

    pub fn transport_adjunction(&self, u: Mor) -> Result<TransportAdjunction, Error> {
        Ok(TransportAdjunction {
            arrow: u,
            push: self.transport_pushforward(u)?,
            pull: self.transport_pullback(u)?,
            unit: self.adjunction_unit(u)?,
            counit: self.adjunction_counit(u)?,
        })
    }

    /// `Φ(g) = cartFill(P^*(u, y))` of `g∘P_!(u, x)`, for `g: u_! x -> y`.
    pub fn hom_phi(&self, u: Mor, x: Obj, g: Mor) -> Result<Mor, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let l = self.push_lift(u, x)?;
        let r = self.pull_lift(u, e.tgt(g))?;
        self.fill_cart(r, e.compose(g, l), b.id(b.src(u)))
    }

    /// `Ψ(k) = cocartFill(P_!(u, x))` of `P^*(u, y)∘k`, for `k: x -> u^* y`.
    pub fn hom_psi(&self, u: Mor, y: Obj, k: Mor) -> Result<Mor, Error> {
        let (e, b) = (&**self.total(), &**self.base());
        let l = self.push_lift(u, e.src(k))?;
        let r = self.pull_lift(u, y)?;
        self.fill_cocart(l, e.compose(r, k), b.id(b.tgt(u)))
    }

    /// First failure among naturality of `η`, `ε`, the triangle identities and
    /// the hom-bijection `Φ`/`Ψ` over every hom-pair.
    pub fn transport_adjunction_failure(
        &self,
        u: Mor,
    ) -> Result<Option<AdjunctionFailure>, Error> {
        let adj = self.transport_adjunction(u)?;
        Ok(adj.failure(self))
    }

    pub fn check_transport_adjunction(&self, u: Mor) -> Result<bool, Error> {
        Ok(self.transport_adjunction_failure(u)?.is_none())
    }
}

impl TransportAdjunction {
    pub fn failure(&self, p: &Fibration) -> Option<AdjunctionFailure> {
        let (e, b) = (&**p.total(), &**p.base());
        let u = self.arrow;
        let fa = p.fiber_at(b.src(u));
        let fb = p.fiber_at(b.tgt(u));
        if let Some(m) = self.unit.naturality_failure() {
            return Some(AdjunctionFailure::UnitNotNatural(fa.ambient_mor(m)));
        }
        if let Some(m) = self.counit.naturality_failure() {
            return Some(AdjunctionFailure::CounitNotNatural(fb.ambient_mor(m)));
        }
        // ε_{u_! x} ∘ u_!(η_x) = id
        for x in fa.cat.objects() {
            let lhs = fb.cat.compose(
                self.counit.component(self.push.ob(x)),
                self.push.mor(self.unit.component(x)),
            );
            if lhs != fb.cat.id(self.push.ob(x)) {
                return Some(AdjunctionFailure::LeftTriangle(fa.ambient_obj(x)));
            }
        }
        // u^*(ε_y) ∘ η_{u^* y} = id
        for y in fb.cat.objects() {
            let lhs = fa.cat.compose(
                self.pull.mor(self.counit.component(y)),
                self.unit.component(self.pull.ob(y)),
            );
            if lhs != fa.cat.id(self.pull.ob(y)) {
                return Some(AdjunctionFailure::RightTriangle(fb.ambient_obj(y)));
            }
        }
        for x in fa.cat.objects() {
            let ex = fa.ambient_obj(x);
            let ux = fb.ambient_obj(self.push.ob(x));
            for y in fb.cat.objects() {
                let ey = fb.ambient_obj(y);
                let uy = fa.ambient_obj(self.pull.ob(y));
                for &g in e.hom(ux, ey) {
                    if !p.is_strictly_vertical(g) {
                        continue;
                    }
                    let Ok(k) = p.hom_phi(u, ex, g) else {
                        return Some(AdjunctionFailure::HomBijectionLeft(g));
                    };
                    if p.hom_psi(u, ey, k).ok() != Some(g) {
                        return Some(AdjunctionFailure::HomBijectionLeft(g));
                    }
                    let lg = fb.local_mor(g).expect("vertical");
                    let nat = fa.cat.compose(self.pull.mor(lg), self.unit.component(x));
                    if fa.local_mor(k) != Some(nat) {
                        return Some(AdjunctionFailure::HomBijectionNotNatural(g));
                    }
                }
                for &k in e.hom(ex, uy) {
                    if !p.is_strictly_vertical(k) {
                        continue;
                    }
                    let Ok(g) = p.hom_psi(u, ey, k) else {
                        return Some(AdjunctionFailure::HomBijectionRight(k));
                    };
                    if p.hom_phi(u, ex, g).ok() != Some(k) {
                        return Some(AdjunctionFailure::HomBijectionRight(k));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{artin_gluing, codomain_fibration};
    use crate::fincat::natural_iso;
    use crate::fixtures;

    #[test]
    fn identity_transport_is_iso_to_identity() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        for b in d.objects() {
            let u = d.id(b);
            let push = p.transport_pushforward(u).unwrap();
            let fib = p.fiber(b).unwrap();
            let comps = fib
                .cat
                .objects()
                .map(|x| fib.cat.hom(x, push.ob(x))[0])
                .collect();
            let a = NatTrans::new(Functor::identity(fib.cat.clone()), push, comps).unwrap();
            assert!(natural_iso(&a));
            assert!(natural_iso(&p.adjunction_unit(u).unwrap()));
            assert!(natural_iso(&p.adjunction_counit(u).unwrap()));
        }
    }

    #[test]
    fn codomain_pushforward_is_postcomposition() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        let ar = crate::constructions::arrow_category(&d).unwrap();
        for u in d.morphisms() {
            let push = p.transport_pushforward(u).unwrap();
            let fa = p.fiber(d.src(u)).unwrap();
            let fb = p.fiber(d.tgt(u)).unwrap();
            for x in fa.cat.objects() {
                let arrow = ar.arrow_of(fa.ambient_obj(x));
                let pushed = ar.arrow_of(fb.ambient_obj(push.ob(x)));
                assert_eq!(pushed, d.compose(u, arrow));
            }
        }
    }

    #[test]
    fn adjunctions_hold_on_gluing_and_codomain() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        for u in d.morphisms() {
            assert_eq!(p.transport_adjunction_failure(u).unwrap(), None);
        }
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        for u in g.fibration.base().morphisms() {
            assert_eq!(g.fibration.transport_adjunction_failure(u).unwrap(), None);
        }
    }
}
