use std::sync::Arc;

use super::{FinCategory, Mor, Obj};
use crate::error::Error;

/// A functor between finite categories, stored as two lookup tables.
#[derive(Clone, Debug)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl Functor {
    /// Builds a functor and checks typing, identities and composition exhaustively.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<Functor, Error> {
        let f = Functor::new_unchecked(source, target, obj_map, mor_map);
        f.check()?;
        Ok(f)
    }

    pub fn new_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Functor {
        Functor {
            source,
            target,
            obj_map,
            mor_map,
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Functor {
        let obj_map = c.objects().collect();
        let mor_map = c.morphisms().collect();
        Functor {
            source: c.clone(),
            target: c,
            obj_map,
            mor_map,
        }
    }

    /// Constant functor at an object of the target.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, at: Obj) -> Functor {
        let obj_map = vec![at; source.num_objects()];
        let mor_map = vec![target.id(at); source.num_morphisms()];
        Functor {
            source,
            target,
            obj_map,
            mor_map,
        }
    }

    /// Builds a functor from closures over object and morphism ids.
    pub fn from_fn(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        on_obj: impl FnMut(Obj) -> Obj,
        on_mor: impl FnMut(Mor) -> Mor,
    ) -> Result<Functor, Error> {
        let obj_map = source.objects().map(on_obj).collect();
        let mor_map = source.morphisms().map(on_mor).collect();
        Functor::new(source, target, obj_map, mor_map)
    }

    pub fn check(&self) -> Result<(), Error> {
        let (s, t) = (&*self.source, &*self.target);
        if self.obj_map.len() != s.num_objects() || self.mor_map.len() != s.num_morphisms() {
            return Err(Error::NotAFunctor("map sizes do not match the source".into()));
        }
        if let Some(o) = self.obj_map.iter().find(|o| !t.contains_obj(**o)) {
            return Err(Error::NotAFunctor(format!("object image {o} outside target")));
        }
        if let Some(m) = self.mor_map.iter().find(|m| !t.contains_mor(**m)) {
            return Err(Error::NotAFunctor(format!("morphism image {m} outside target")));
        }
        for f in s.morphisms() {
            let g = self.mor(f);
            if t.src(g) != self.ob(s.src(f)) || t.tgt(g) != self.ob(s.tgt(f)) {
                return Err(Error::NotAFunctor(format!(
                    "{} is sent to {} with the wrong endpoints",
                    s.mor_name(f),
                    t.mor_name(g)
                )));
            }
        }
        for o in s.objects() {
            if self.mor(s.id(o)) != t.id(self.ob(o)) {
                return Err(Error::NotAFunctor(format!(
                    "identity of {} is not preserved",
                    s.obj_name(o)
                )));
            }
        }
        for (g, f, gf) in s.composition_triples() {
            if self.mor(gf) != t.compose(self.mor(g), self.mor(f)) {
                return Err(Error::NotAFunctor(format!(
                    "composite {} ∘ {} is not preserved",
                    s.mor_name(g),
                    s.mor_name(f)
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn ob(&self, o: Obj) -> Obj {
        self.obj_map[o.idx()]
    }

    #[inline]
    pub fn mor(&self, f: Mor) -> Mor {
        self.mor_map[f.idx()]
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj_map(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[Mor] {
        &self.mor_map
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Functor) -> Result<Functor, Error> {
        if !self.target.same_as(&g.source) {
            return Err(Error::CategoryMismatch(
                "cannot compose functors: middle categories differ".into(),
            ));
        }
        Ok(Functor {
            source: self.source.clone(),
            target: g.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| g.ob(o)).collect(),
            mor_map: self.mor_map.iter().map(|&m| g.mor(m)).collect(),
        })
    }

    /// Equality of functors between the same categories, on the nose.
    pub fn same_as(&self, other: &Functor) -> bool {
        self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
            && self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        if s.num_objects() != t.num_objects() || s.num_morphisms() != t.num_morphisms() {
            return false;
        }
        let mut seen_o = vec![false; t.num_objects()];
        for &o in &self.obj_map {
            if std::mem::replace(&mut seen_o[o.idx()], true) {
                return false;
            }
        }
        let mut seen_m = vec![false; t.num_morphisms()];
        for &m in &self.mor_map {
            if std::mem::replace(&mut seen_m[m.idx()], true) {
                return false;
            }
        }
        true
    }
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug)]
pub struct NatTrans {
    source: Functor,
    target: Functor,
    components: Vec<Mor>,
}

impl NatTrans {
    /// Checks that the functors are parallel and each component is typed correctly.
    /// Naturality is a separate check, see [`NatTrans::naturality_failure`].
    pub fn new(source: Functor, target: Functor, components: Vec<Mor>) -> Result<NatTrans, Error> {
        if !source.source.same_as(&target.source) || !source.target.same_as(&target.target) {
            return Err(Error::CategoryMismatch("functors are not parallel".into()));
        }
        let c = &*source.source;
        let d = &*source.target;
        if components.len() != c.num_objects() {
            return Err(Error::NotAFunctor("one component per object required".into()));
        }
        for o in c.objects() {
            let m = components[o.idx()];
            if !d.contains_mor(m) || d.src(m) != source.ob(o) || d.tgt(m) != target.ob(o) {
                return Err(Error::NotAFunctor(format!(
                    "component at {} has the wrong type",
                    c.obj_name(o)
                )));
            }
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    pub fn component(&self, o: Obj) -> Mor {
        self.components[o.idx()]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    /// First morphism of the domain category whose naturality square fails.
    pub fn naturality_failure(&self) -> Option<Mor> {
        let c = &*self.source.source;
        let d = &*self.source.target;
        c.morphisms().find(|&f| {
            let a = self.component(c.src(f));
            let b = self.component(c.tgt(f));
            d.compose(self.target.mor(f), a) != d.compose(b, self.source.mor(f))
        })
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_failure().is_none()
    }

    /// First object whose component is not invertible.
    pub fn non_iso_component(&self) -> Option<Obj> {
        let d = &*self.source.target;
        self.source
            .source
            .objects()
            .find(|&o| !d.is_iso(self.component(o)))
    }
}

/// All components invertible and every naturality square commutes.
pub fn natural_iso(alpha: &NatTrans) -> bool {
    alpha.is_natural() && alpha.non_iso_component().is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_functor_checks() {
        let d = Arc::new(fixtures::diamond());
        let id = Functor::identity(d.clone());
        id.check().unwrap();
        assert!(id.is_isomorphism());
        let comp = id.then(&id).unwrap();
        assert!(comp.same_as(&id));
    }

    #[test]
    fn non_functor_rejected() {
        let two = Arc::new(fixtures::two());
        let u = two.morphism("0<=1").unwrap();
        let z = two.object("0").unwrap();
        let o = two.object("1").unwrap();
        // swap the objects but keep u: endpoints break
        let err = Functor::new(
            two.clone(),
            two.clone(),
            vec![o, z],
            vec![two.id(o), two.id(z), u],
        );
        assert!(err.is_err());
    }

    #[test]
    fn identity_nat_trans_is_iso() {
        let d = Arc::new(fixtures::diamond());
        let id = Functor::identity(d.clone());
        let comps = d.objects().map(|o| d.id(o)).collect();
        let a = NatTrans::new(id.clone(), id, comps).unwrap();
        assert!(natural_iso(&a));
    }

    #[test]
    fn bottom_to_identity_is_natural_not_iso() {
        let d = Arc::new(fixtures::diamond());
        let bot = d.object("bot").unwrap();
        let k = Functor::constant(d.clone(), d.clone(), bot);
        let id = Functor::identity(d.clone());
        let comps = d.objects().map(|o| d.hom(bot, o)[0]).collect();
        let a = NatTrans::new(k, id, comps).unwrap();
        assert!(a.is_natural());
        assert!(!natural_iso(&a));
    }
}
