use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{CategoryBuilder, FinCategory, Functor, Mor, Obj, SizeGuard};

/// A strictly functorial family of finite categories over a base: one fiber
/// per object, one transition functor per arrow.
#[derive(Clone, Debug)]
pub struct GrothendieckData {
    pub base: Arc<FinCategory>,
    pub fibers: Vec<Arc<FinCategory>>,
    pub transitions: Vec<Functor>,
}

impl GrothendieckData {
    /// Checks typing, `T(id) = id` and `T(v∘u) = T(v)∘T(u)` on the nose.
    pub fn new(
        base: Arc<FinCategory>,
        fibers: Vec<Arc<FinCategory>>,
        transitions: Vec<Functor>,
    ) -> Result<GrothendieckData, Error> {
        let b = &*base;
        if fibers.len() != b.num_objects() || transitions.len() != b.num_morphisms() {
            return Err(Error::FunctorialityViolation(
                "one fiber per object and one transition per arrow required".into(),
            ));
        }
        for u in b.morphisms() {
            let t = &transitions[u.idx()];
            if !t.source().same_as(&fibers[b.src(u).idx()])
                || !t.target().same_as(&fibers[b.tgt(u).idx()])
            {
                return Err(Error::FunctorialityViolation(format!(
                    "transition of {} has the wrong fibers",
                    b.mor_name(u)
                )));
            }
            t.check()?;
        }
        for o in b.objects() {
            let t = &transitions[b.id(o).idx()];
            if !t.same_as(&Functor::identity(fibers[o.idx()].clone())) {
                return Err(Error::FunctorialityViolation(format!(
                    "transition of id_{} is not the identity",
                    b.obj_name(o)
                )));
            }
        }
        for (v, u, vu) in b.composition_triples() {
            let composite = transitions[u.idx()].then(&transitions[v.idx()])?;
            if !composite.same_as(&transitions[vu.idx()]) {
                return Err(Error::FunctorialityViolation(format!(
                    "T({} ∘ {}) differs from T({}) ∘ T({})",
                    b.mor_name(v),
                    b.mor_name(u),
                    b.mor_name(v),
                    b.mor_name(u)
                )));
            }
        }
        Ok(GrothendieckData {
            base,
            fibers,
            transitions,
        })
    }
}

/// The total category `∫T` with its split projection.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub fibration: Fibration,
    /// `(b, x)` per object.
    pub objects: Vec<(Obj, Obj)>,
    /// `(u, φ: T(u) x -> y)` per morphism.
    pub morphisms: Vec<(Mor, Mor)>,
    obj_index: HashMap<(Obj, Obj), Obj>,
    mor_index: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl Grothendieck {
    pub fn object(&self, b: Obj, x: Obj) -> Option<Obj> {
        self.obj_index.get(&(b, x)).copied()
    }

    pub fn morphism(&self, src: Obj, tgt: Obj, u: Mor, phi: Mor) -> Option<Mor> {
        self.mor_index.get(&(src, tgt, u, phi)).copied()
    }

    /// The split lift `(u, id)` out of `e`.
    pub fn split_lift(&self, data: &GrothendieckData, u: Mor, e: Obj) -> Option<Mor> {
        let (b, x) = self.objects[e.idx()];
        if data.base.src(u) != b {
            return None;
        }
        let b2 = data.base.tgt(u);
        let y = data.transitions[u.idx()].ob(x);
        let fib = &data.fibers[b2.idx()];
        self.morphism(e, self.object(b2, y)?, u, fib.id(y))
    }
}

pub fn grothendieck(data: &GrothendieckData) -> Result<Grothendieck, Error> {
    grothendieck_guarded(data, SizeGuard::default())
}

pub fn grothendieck_guarded(data: &GrothendieckData, guard: SizeGuard) -> Result<Grothendieck, Error> {
    let b = &*data.base;
    let mut bld = CategoryBuilder::new();
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for o in b.objects() {
        let fib = &data.fibers[o.idx()];
        for x in fib.objects() {
            let e = bld.add_object(format!("({},{})", b.obj_name(o), fib.obj_name(x)));
            objects.push((o, x));
            obj_index.insert((o, x), e);
        }
    }
    let mut morphisms = Vec::new();
    let mut ends = Vec::new();
    let mut mor_index = HashMap::new();
    for (i, &(o, x)) in objects.iter().enumerate() {
        let src = Obj(i as u32);
        for &u in b.outgoing(o) {
            let o2 = b.tgt(u);
            let t = &data.transitions[u.idx()];
            let fib2 = &data.fibers[o2.idx()];
            let tx = t.ob(x);
            for &phi in fib2.outgoing(tx) {
                let tgt = obj_index[&(o2, fib2.tgt(phi))];
                let m = bld.add_morphism(format!("({},{})", b.mor_name(u), fib2.mor_name(phi)), src, tgt);
                if b.is_identity(u) && fib2.is_identity(phi) {
                    bld.set_identity(src, m);
                }
                morphisms.push((u, phi));
                ends.push((src, tgt));
                mor_index.insert((src, tgt, u, phi), m);
                guard.check(morphisms.len())?;
            }
        }
    }
    // (v, ψ) ∘ (u, φ) = (v∘u, ψ ∘ T(v)φ)
    let cat = bld.try_build(guard, |g, f| {
        let (u, phi) = morphisms[f.idx()];
        let (v, psi) = morphisms[g.idx()];
        let o3 = b.tgt(v);
        let fib3 = &data.fibers[o3.idx()];
        let tphi = data.transitions[v.idx()].mor(phi);
        let comp = fib3.try_compose(psi, tphi)?;
        mor_index
            .get(&(ends[f.idx()].0, ends[g.idx()].1, b.compose(v, u), comp))
            .copied()
    })?;
    cat.check_laws()?;
    let cat = Arc::new(cat);
    let proj = Functor::new_unchecked(
        cat.clone(),
        data.base.clone(),
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    );
    Ok(Grothendieck {
        fibration: Fibration::new(proj),
        objects,
        morphisms,
        obj_index,
        mor_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn collapsing_total_is_a_three_chain() {
        let data = fixtures::collapsing_grothendieck();
        let g = grothendieck(&data).unwrap();
        let e = g.fibration.total();
        assert_eq!(e.num_objects(), 3);
        assert!(e.is_thin());
        assert_eq!(e.num_morphisms(), 6);
        assert!(g.fibration.is_cocartesian_fibration());
    }

    #[test]
    fn constant_family_is_a_product() {
        let base = Arc::new(fixtures::two());
        let fiber = Arc::new(fixtures::two());
        let data = fixtures::constant_grothendieck(base, fiber);
        let g = grothendieck(&data).unwrap();
        assert_eq!(g.fibration.total().num_objects(), 4);
        assert_eq!(g.fibration.total().num_morphisms(), 9);
    }

    #[test]
    fn split_lifts_are_cocartesian() {
        let base = Arc::new(fixtures::diamond());
        let fiber = Arc::new(fixtures::two());
        let data = fixtures::constant_grothendieck(base.clone(), fiber);
        let g = grothendieck(&data).unwrap();
        let p = &g.fibration;
        for u in base.morphisms() {
            for &e in p.objects_over(base.src(u)) {
                let l = g.split_lift(&data, u, e).unwrap();
                assert!(p.is_cocartesian_arrow(l));
            }
        }
    }

    #[test]
    fn non_functorial_data_rejected() {
        let base = Arc::new(fixtures::two());
        let f0 = Arc::new(fixtures::two());
        let f1 = Arc::new(fixtures::two());
        let u = base.morphism("0<=1").unwrap();
        let z = f0.object("0").unwrap();
        let transitions = base
            .morphisms()
            .map(|m| {
                if m == u {
                    Functor::identity(f0.clone())
                } else {
                    // identity on 0 replaced by a constant functor
                    if base.src(m) == base.object("0").unwrap() {
                        Functor::constant(f0.clone(), f0.clone(), z)
                    } else {
                        Functor::identity(f1.clone())
                    }
                }
            })
            .collect();
        let r = GrothendieckData::new(base, vec![f0, f1], transitions);
        assert!(matches!(r, Err(Error::FunctorialityViolation(_))));
    }
}
