use std::collections::HashMap;
use std::sync::Arc;

use super::{CategoryBuilder, FinCategory, Functor, Mor, Obj, SizeGuard};

/// A subcategory given by object and morphism subsets closed under identities
/// and composition, with its inclusion functor. Names are inherited.
#[derive(Clone, Debug)]
pub struct Subcategory {
    pub cat: Arc<FinCategory>,
    pub inclusion: Functor,
    obj_index: HashMap<Obj, Obj>,
    mor_index: HashMap<Mor, Mor>,
}

impl Subcategory {
    /// Panics if the subsets are not closed; callers build closed sets.
    pub fn new(ambient: &Arc<FinCategory>, objects: &[Obj], morphisms: &[Mor]) -> Subcategory {
        let c = &**ambient;
        let mut b = CategoryBuilder::new();
        let mut obj_index = HashMap::new();
        for &o in objects {
            obj_index.insert(o, b.add_object(c.obj_name(o)));
        }
        let mut mor_index = HashMap::new();
        for &m in morphisms {
            let k = b.add_morphism(c.mor_name(m), obj_index[&c.src(m)], obj_index[&c.tgt(m)]);
            mor_index.insert(m, k);
        }
        for &o in objects {
            b.set_identity(obj_index[&o], mor_index[&c.id(o)]);
        }
        let cat = b
            .try_build(SizeGuard::unlimited(), |g, f| {
                mor_index.get(&c.compose(morphisms[g.idx()], morphisms[f.idx()])).copied()
            })
            .expect("subcategory closed under composition");
        let cat = Arc::new(cat);
        let inclusion = Functor::new_unchecked(
            cat.clone(),
            ambient.clone(),
            objects.to_vec(),
            morphisms.to_vec(),
        );
        Subcategory {
            cat,
            inclusion,
            obj_index,
            mor_index,
        }
    }

    /// Full subcategory on `objects`.
    pub fn full(ambient: &Arc<FinCategory>, objects: &[Obj]) -> Subcategory {
        let mut mors = Vec::new();
        for &x in objects {
            for &y in objects {
                mors.extend_from_slice(ambient.hom(x, y));
            }
        }
        mors.sort();
        Subcategory::new(ambient, objects, &mors)
    }

    /// Local id of an ambient object.
    pub fn local_obj(&self, o: Obj) -> Option<Obj> {
        self.obj_index.get(&o).copied()
    }

    pub fn local_mor(&self, m: Mor) -> Option<Mor> {
        self.mor_index.get(&m).copied()
    }

    pub fn ambient_obj(&self, o: Obj) -> Obj {
        self.inclusion.ob(o)
    }

    pub fn ambient_mor(&self, m: Mor) -> Mor {
        self.inclusion.mor(m)
    }

    pub fn contains_obj(&self, o: Obj) -> bool {
        self.obj_index.contains_key(&o)
    }

    pub fn contains_mor(&self, m: Mor) -> bool {
        self.mor_index.contains_key(&m)
    }
}
