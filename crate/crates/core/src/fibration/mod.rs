//! Fibrations as designated functors `π: E -> B`: (co)cartesian arrows, lifts,
//! fillers, transport functors and the structure theory built on them.

mod structure;
mod transport;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::Error;
use crate::fincat::{FinCategory, Functor, Mor, Obj, Subcategory};

pub use structure::{
    cartesian_pullback_stability, cartesian_pullback_stability_failure, cocartesian_functor_failure,
    cartesian_functor_failure, is_cartesian_functor, is_cocartesian_functor, lexness_transfer,
    vertical_pullback_stability, vertical_pullback_stability_failure, vertical_retracts,
    vertical_retracts_failure, vertical_rlp, vertical_rlp_failure, zeta_functor, DepSquare,
    LexnessReport,
};
pub use transport::{AdjunctionFailure, TransportAdjunction};

/// A functor `π: E -> B` with lazily computed (co)cartesian flags and lift
/// tables, and eagerly computed strict fibers.
#[derive(Clone, Debug)]
pub struct Fibration {
    total: Arc<FinCategory>,
    base: Arc<FinCategory>,
    proj: Functor,
    fibers: Vec<Subcategory>,
    cocart: OnceLock<Vec<bool>>,
    cart: OnceLock<Vec<bool>>,
    // (u, src e) -> lowest-id cocartesian arrow
    cocart_lifts: OnceLock<HashMap<(Mor, Obj), Mor>>,
    // (u, tgt e) -> lowest-id cartesian arrow
    cart_lifts: OnceLock<HashMap<(Mor, Obj), Mor>>,
}

/// Brute-force cocartesianness with the full quantifier: for every `h` out of
/// `src f` and every `v` with `v∘πf = πh` there is exactly one `g` with
/// `πg = v` and `g∘f = h`.
pub fn cocartesian_by_search(p: &Functor, f: Mor) -> bool {
    let (e, b) = (&**p.source(), &**p.target());
    let (x, y) = (e.src(f), e.tgt(f));
    let u = p.mor(f);
    let by = p.ob(y);
    let mut counts: HashMap<(Mor, Mor), u32> = HashMap::new();
    for z in e.objects() {
        let hs = e.hom(x, z);
        if hs.is_empty() {
            continue;
        }
        counts.clear();
        for &g in e.hom(y, z) {
            *counts.entry((p.mor(g), e.compose(g, f))).or_default() += 1;
        }
        let bz = p.ob(z);
        for &h in hs {
            let ph = p.mor(h);
            for &v in b.hom(by, bz) {
                if b.compose(v, u) == ph && counts.get(&(v, h)).copied().unwrap_or(0) != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Dual of [`cocartesian_by_search`].
pub fn cartesian_by_search(p: &Functor, f: Mor) -> bool {
    let (e, b) = (&**p.source(), &**p.target());
    let (x, y) = (e.src(f), e.tgt(f));
    let u = p.mor(f);
    let bx = p.ob(x);
    let mut counts: HashMap<(Mor, Mor), u32> = HashMap::new();
    for z in e.objects() {
        let hs = e.hom(z, y);
        if hs.is_empty() {
            continue;
        }
        counts.clear();
        for &g in e.hom(z, x) {
            *counts.entry((p.mor(g), e.compose(f, g))).or_default() += 1;
        }
        let bz = p.ob(z);
        for &h in hs {
            let ph = p.mor(h);
            for &v in b.hom(bz, bx) {
                if b.compose(u, v) == ph && counts.get(&(v, h)).copied().unwrap_or(0) != 1 {
                    return false;
                }
            }
        }
    }
    true
}

impl Fibration {
    pub fn new(proj: Functor) -> Fibration {
        let total = proj.source().clone();
        let base = proj.target().clone();
        let mut objs: Vec<Vec<Obj>> = vec![Vec::new(); base.num_objects()];
        for e in total.objects() {
            objs[proj.ob(e).idx()].push(e);
        }
        let mut mors: Vec<Vec<Mor>> = vec![Vec::new(); base.num_objects()];
        for f in total.morphisms() {
            let u = proj.mor(f);
            if base.is_identity(u) {
                mors[base.src(u).idx()].push(f);
            }
        }
        let fibers = base
            .objects()
            .map(|b| Subcategory::new(&total, &objs[b.idx()], &mors[b.idx()]))
            .collect();
        Fibration {
            total,
            base,
            proj,
            fibers,
            cocart: OnceLock::new(),
            cart: OnceLock::new(),
            cocart_lifts: OnceLock::new(),
            cart_lifts: OnceLock::new(),
        }
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        &self.total
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn proj(&self) -> &Functor {
        &self.proj
    }

    #[inline]
    pub fn over(&self, e: Obj) -> Obj {
        self.proj.ob(e)
    }

    #[inline]
    pub fn pi(&self, f: Mor) -> Mor {
        self.proj.mor(f)
    }

    /// The strict fiber over `b` with its inclusion into `E`.
    pub fn fiber(&self, b: Obj) -> Result<&Subcategory, Error> {
        self.fibers
            .get(b.idx())
            .ok_or_else(|| Error::UnknownObject(b.to_string()))
    }

    pub(crate) fn fiber_at(&self, b: Obj) -> &Subcategory {
        &self.fibers[b.idx()]
    }

    /// Objects of `E` over `b`, in id order.
    pub fn objects_over(&self, b: Obj) -> &[Obj] {
        self.fibers[b.idx()].inclusion.obj_map()
    }

    fn cocart_flags(&self) -> &[bool] {
        self.cocart.get_or_init(|| {
            self.total
                .morphisms()
                .map(|f| cocartesian_by_search(&self.proj, f))
                .collect()
        })
    }

    fn cart_flags(&self) -> &[bool] {
        self.cart.get_or_init(|| {
            self.total
                .morphisms()
                .map(|f| cartesian_by_search(&self.proj, f))
                .collect()
        })
    }

    pub fn is_cocartesian_arrow(&self, f: Mor) -> bool {
        self.cocart_flags()[f.idx()]
    }

    pub fn is_cartesian_arrow(&self, f: Mor) -> bool {
        self.cart_flags()[f.idx()]
    }

    /// `π f` is an isomorphism.
    pub fn is_vertical(&self, f: Mor) -> bool {
        self.base.is_iso(self.pi(f))
    }

    /// Whether `f` lies in a strict fiber (`π f` an identity).
    pub fn is_strictly_vertical(&self, f: Mor) -> bool {
        self.base.is_identity(self.pi(f))
    }

    fn cocart_table(&self) -> &HashMap<(Mor, Obj), Mor> {
        self.cocart_lifts.get_or_init(|| {
            let flags = self.cocart_flags();
            let mut t = HashMap::new();
            for f in self.total.morphisms() {
                if flags[f.idx()] {
                    t.entry((self.pi(f), self.total.src(f))).or_insert(f);
                }
            }
            t
        })
    }

    fn cart_table(&self) -> &HashMap<(Mor, Obj), Mor> {
        self.cart_lifts.get_or_init(|| {
            let flags = self.cart_flags();
            let mut t = HashMap::new();
            for f in self.total.morphisms() {
                if flags[f.idx()] {
                    t.entry((self.pi(f), self.total.tgt(f))).or_insert(f);
                }
            }
            t
        })
    }

    /// Canonical cocartesian lift `P_!(u, e)`: the lowest-id cocartesian arrow
    /// out of `e` over `u`.
    pub fn cocartesian_lift(&self, u: Mor, e: Obj) -> Option<Mor> {
        self.cocart_table().get(&(u, e)).copied()
    }

    /// Canonical cartesian lift `P^*(u, e)` into `e`.
    pub fn cartesian_lift(&self, u: Mor, e: Obj) -> Option<Mor> {
        self.cart_table().get(&(u, e)).copied()
    }

    pub fn cocartesian_lifts(&self, u: Mor, e: Obj) -> Vec<Mor> {
        self.total
            .outgoing(e)
            .iter()
            .copied()
            .filter(|&f| self.pi(f) == u && self.is_cocartesian_arrow(f))
            .collect()
    }

    pub fn cartesian_lifts(&self, u: Mor, e: Obj) -> Vec<Mor> {
        self.total
            .incoming(e)
            .iter()
            .copied()
            .filter(|&f| self.pi(f) == u && self.is_cartesian_arrow(f))
            .collect()
    }

    pub(crate) fn push_lift(&self, u: Mor, e: Obj) -> Result<Mor, Error> {
        self.cocartesian_lift(u, e).ok_or_else(|| Error::MissingLift {
            arrow: self.base.mor_name(u).to_string(),
            object: self.total.obj_name(e).to_string(),
        })
    }

    pub(crate) fn pull_lift(&self, u: Mor, e: Obj) -> Result<Mor, Error> {
        self.cartesian_lift(u, e).ok_or_else(|| Error::MissingLift {
            arrow: self.base.mor_name(u).to_string(),
            object: self.total.obj_name(e).to_string(),
        })
    }

    /// Number of strictly vertical isos `k` with `k∘l1 = l2`, for cocartesian
    /// `l1`, `l2` out of the same object over the same arrow.
    fn connecting_isos(&self, l1: Mor, l2: Mor, cocart: bool) -> usize {
        let e = &*self.total;
        if cocart {
            e.hom(e.tgt(l1), e.tgt(l2))
                .iter()
                .filter(|&&k| {
                    self.is_strictly_vertical(k) && e.is_iso(k) && e.compose(k, l1) == l2
                })
                .count()
        } else {
            e.hom(e.src(l2), e.src(l1))
                .iter()
                .filter(|&&k| {
                    self.is_strictly_vertical(k) && e.is_iso(k) && e.compose(l1, k) == l2
                })
                .count()
        }
    }

    /// First lifting datum `(u, e)` with two cocartesian lifts not connected by
    /// exactly one vertical iso.
    pub fn cocartesian_lift_uniqueness_failure(&self) -> Option<(Mor, Mor)> {
        let mut groups: HashMap<(Mor, Obj), Vec<Mor>> = HashMap::new();
        for f in self.total.morphisms() {
            if self.is_cocartesian_arrow(f) {
                groups.entry((self.pi(f), self.total.src(f))).or_default().push(f);
            }
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        for k in keys {
            let ls = &groups[&k];
            for &l1 in ls {
                for &l2 in ls {
                    if self.connecting_isos(l1, l2, true) != 1 {
                        return Some((l1, l2));
                    }
                }
            }
        }
        None
    }

    pub fn cartesian_lift_uniqueness_failure(&self) -> Option<(Mor, Mor)> {
        let mut groups: HashMap<(Mor, Obj), Vec<Mor>> = HashMap::new();
        for f in self.total.morphisms() {
            if self.is_cartesian_arrow(f) {
                groups.entry((self.pi(f), self.total.tgt(f))).or_default().push(f);
            }
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort();
        for k in keys {
            let ls = &groups[&k];
            for &l1 in ls {
                for &l2 in ls {
                    if self.connecting_isos(l1, l2, false) != 1 {
                        return Some((l1, l2));
                    }
                }
            }
        }
        None
    }

    /// First `(u, e)` with `π e = src u` and no cocartesian lift.
    pub fn missing_cocartesian_lift(&self) -> Option<(Mor, Obj)> {
        for u in self.base.morphisms() {
            for &e in self.objects_over(self.base.src(u)) {
                if self.cocartesian_lift(u, e).is_none() {
                    return Some((u, e));
                }
            }
        }
        None
    }

    /// First `(u, e)` with `π e = tgt u` and no cartesian lift.
    pub fn missing_cartesian_lift(&self) -> Option<(Mor, Obj)> {
        for u in self.base.morphisms() {
            for &e in self.objects_over(self.base.tgt(u)) {
                if self.cartesian_lift(u, e).is_none() {
                    return Some((u, e));
                }
            }
        }
        None
    }

    pub fn is_cocartesian_fibration(&self) -> bool {
        self.missing_cocartesian_lift().is_none()
    }

    pub fn is_cartesian_fibration(&self) -> bool {
        self.missing_cartesian_lift().is_none()
    }

    pub fn is_bicartesian(&self) -> bool {
        self.is_cocartesian_fibration() && self.is_cartesian_fibration()
    }

    /// The unique `g` with `g∘f = h` and `π g = v`, for cocartesian `f`.
    pub fn fill_cocart(&self, f: Mor, h: Mor, v: Mor) -> Result<Mor, Error> {
        let (e, b) = (&*self.total, &*self.base);
        if !self.is_cocartesian_arrow(f) {
            return Err(Error::NotCocartesian(e.mor_name(f).to_string()));
        }
        if e.src(h) != e.src(f)
            || b.src(v) != self.over(e.tgt(f))
            || b.tgt(v) != self.over(e.tgt(h))
            || b.compose(v, self.pi(f)) != self.pi(h)
        {
            return Err(Error::NoFactorization(format!(
                "{} does not factor through {} over {}",
                e.mor_name(h),
                e.mor_name(f),
                b.mor_name(v)
            )));
        }
        e.hom(e.tgt(f), e.tgt(h))
            .iter()
            .copied()
            .find(|&g| self.pi(g) == v && e.compose(g, f) == h)
            .ok_or_else(|| Error::NoFactorization(e.mor_name(h).to_string()))
    }

    /// The unique `g` with `f∘g = h` and `π g = v`, for cartesian `f`.
    pub fn fill_cart(&self, f: Mor, h: Mor, v: Mor) -> Result<Mor, Error> {
        let (e, b) = (&*self.total, &*self.base);
        if !self.is_cartesian_arrow(f) {
            return Err(Error::NotCartesian(e.mor_name(f).to_string()));
        }
        if e.tgt(h) != e.tgt(f)
            || b.tgt(v) != self.over(e.src(f))
            || b.src(v) != self.over(e.src(h))
            || b.compose(self.pi(f), v) != self.pi(h)
        {
            return Err(Error::NoFactorization(format!(
                "{} does not factor through {} over {}",
                e.mor_name(h),
                e.mor_name(f),
                b.mor_name(v)
            )));
        }
        e.hom(e.src(h), e.src(f))
            .iter()
            .copied()
            .find(|&g| self.pi(g) == v && e.compose(f, g) == h)
            .ok_or_else(|| Error::NoFactorization(e.mor_name(h).to_string()))
    }

    /// `f = m∘c` with `c = P_!(π f, src f)` and `m` vertical over an identity.
    pub fn factor_cocart_vert(&self, f: Mor) -> Result<(Mor, Mor), Error> {
        let e = &*self.total;
        let c = self.push_lift(self.pi(f), e.src(f))?;
        let m = self.fill_cocart(c, f, self.base.id(self.over(e.tgt(f))))?;
        Ok((c, m))
    }

    /// `f = c∘m` with `c = P^*(π f, tgt f)` and `m` vertical over an identity.
    pub fn factor_vert_cart(&self, f: Mor) -> Result<(Mor, Mor), Error> {
        let e = &*self.total;
        let c = self.pull_lift(self.pi(f), e.tgt(f))?;
        let m = self.fill_cart(c, f, self.base.id(self.over(e.src(f))))?;
        Ok((m, c))
    }

    /// `π^op: E^op -> B^op`; cartesian and cocartesian swap.
    pub fn opposite(&self) -> Fibration {
        let e = Arc::new(self.total.opposite());
        let b = Arc::new(self.base.opposite());
        let p = Functor::new_unchecked(
            e,
            b,
            self.proj.obj_map().to_vec(),
            self.proj.mor_map().to_vec(),
        );
        Fibration::new(p)
    }

    /// Object of `E` as a local object of its fiber.
    pub(crate) fn local_obj(&self, e: Obj) -> Obj {
        self.fibers[self.over(e).idx()]
            .local_obj(e)
            .expect("object lies in its fiber")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{artin_gluing, codomain_fibration};
    use crate::fixtures;

    fn trivial() -> Fibration {
        let e = Arc::new(fixtures::diamond());
        let one = Arc::new(fixtures::one());
        let star = one.object("*").unwrap();
        Fibration::new(Functor::constant(e, one, star))
    }

    #[test]
    fn over_one_every_iso_is_the_only_cocartesian_arrow() {
        let p = trivial();
        let e = p.total().clone();
        for f in e.morphisms() {
            assert_eq!(p.is_cocartesian_arrow(f), e.is_iso(f));
        }
        assert!(p.is_bicartesian());
        assert!(p.fiber(Obj(0)).unwrap().cat.same_as(&e));
    }

    #[test]
    fn codomain_fiber_over_top_is_diamond() {
        let d = Arc::new(fixtures::diamond());
        let p = codomain_fibration(&d).unwrap();
        let top = d.object("top").unwrap();
        let fib = p.fiber(top).unwrap();
        assert_eq!(fib.cat.num_objects(), 4);
        assert_eq!(fib.cat.num_morphisms(), 9);
        assert!(p.is_bicartesian());
    }

    #[test]
    fn isos_are_cocartesian_and_cartesian() {
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        let p = &g.fibration;
        for f in p.total().morphisms() {
            if p.total().is_iso(f) {
                assert!(p.is_cocartesian_arrow(f));
                assert!(p.is_cartesian_arrow(f));
            }
        }
    }

    #[test]
    fn opposite_swaps_variance() {
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        let p = &g.fibration;
        let q = p.opposite();
        for f in p.total().morphisms() {
            assert_eq!(p.is_cocartesian_arrow(f), q.is_cartesian_arrow(f));
            assert_eq!(p.is_cartesian_arrow(f), q.is_cocartesian_arrow(f));
        }
    }

    #[test]
    fn fillers_of_trivial_factorizations() {
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        let p = &g.fibration;
        let e = p.total().clone();
        for f in e.morphisms().filter(|&f| p.is_cocartesian_arrow(f)) {
            let y = e.tgt(f);
            let idb = p.base().id(p.over(y));
            assert_eq!(p.fill_cocart(f, f, idb).unwrap(), e.id(y));
            for &k in e.outgoing(y) {
                let h = e.compose(k, f);
                assert_eq!(p.fill_cocart(f, h, p.pi(k)).unwrap(), k);
            }
        }
    }

    #[test]
    fn filler_rejects_non_cocartesian() {
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        let p = &g.fibration;
        let e = p.total().clone();
        let f = e.morphisms().find(|&f| !p.is_cocartesian_arrow(f)).unwrap();
        let v = p.base().id(p.over(e.tgt(f)));
        assert!(matches!(p.fill_cocart(f, f, v), Err(Error::NotCocartesian(_))));
    }

    #[test]
    fn factorizations_recombine() {
        let g = artin_gluing(&fixtures::f_bad()).unwrap();
        let p = &g.fibration;
        let e = p.total().clone();
        for f in e.morphisms() {
            let (c, m) = p.factor_cocart_vert(f).unwrap();
            assert_eq!(e.compose(m, c), f);
            assert!(p.is_cocartesian_arrow(c) && p.is_strictly_vertical(m));
            if p.is_cocartesian_arrow(f) {
                assert!(e.is_iso(m));
            }
            if p.is_strictly_vertical(f) {
                assert!(e.is_iso(c));
            }
            let (m, c) = p.factor_vert_cart(f).unwrap();
            assert_eq!(e.compose(c, m), f);
            assert!(p.is_cartesian_arrow(c) && p.is_strictly_vertical(m));
        }
    }

    #[test]
    fn lifts_are_essentially_unique() {
        let d = Arc::new(fixtures::iso2());
        let p = codomain_fibration(&d).unwrap();
        assert!(p.cocartesian_lift_uniqueness_failure().is_none());
        assert!(p.cartesian_lift_uniqueness_failure().is_none());
        let u = d.id(Obj(0));
        for &e in p.objects_over(Obj(0)) {
            let l = p.cocartesian_lift(u, e).unwrap();
            assert!(p.total().is_iso(l));
        }
    }

    #[test]
    fn vertical_over_iso() {
        let d = Arc::new(fixtures::iso2());
        let p = codomain_fibration(&d).unwrap();
        let i = d.morphism("i").unwrap();
        let f = p.total().morphisms().find(|&f| p.pi(f) == i).unwrap();
        assert!(p.is_vertical(f));
        assert!(!p.is_strictly_vertical(f));
    }
}
