use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::SizeGuard;
use crate::error::{Error, LawViolation};

/// Dense object handle, local to one [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Obj(pub u32);

/// Dense morphism handle, local to one [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mor(pub u32);

impl Obj {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// A cone over a cospan `left: a -> c <- b: right`, given by an apex and two legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub apex: Obj,
    pub leg_left: Mor,
    pub leg_right: Mor,
}

/// A finite category with an explicit, total composition table.
///
/// Object and morphism ids are dense integers; the human-readable names used
/// by the file format are kept alongside. Composition of a composable pair is
/// a single table lookup.
pub struct FinCategory {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
    in_pos: Vec<u32>,
    // comp[g][in_pos[f]] = g ∘ f for every f with tgt f = src g
    comp: Vec<Vec<Mor>>,
    hom: HashMap<(Obj, Obj), Vec<Mor>>,
    obj_lookup: HashMap<String, Obj>,
    mor_lookup: HashMap<String, Mor>,
    pullbacks: Mutex<HashMap<(Mor, Mor), Option<Cone>>>,
}

impl Clone for FinCategory {
    fn clone(&self) -> Self {
        FinCategory {
            obj_names: self.obj_names.clone(),
            mor_names: self.mor_names.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            identity: self.identity.clone(),
            outgoing: self.outgoing.clone(),
            incoming: self.incoming.clone(),
            in_pos: self.in_pos.clone(),
            comp: self.comp.clone(),
            hom: self.hom.clone(),
            obj_lookup: self.obj_lookup.clone(),
            mor_lookup: self.mor_lookup.clone(),
            pullbacks: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.obj_names.len())
            .field("morphisms", &self.mor_names.len())
            .finish()
    }
}

impl FinCategory {
    pub fn num_objects(&self) -> usize {
        self.obj_names.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> impl DoubleEndedIterator<Item = Obj> + ExactSizeIterator + Clone {
        (0..self.obj_names.len() as u32).map(Obj)
    }

    pub fn morphisms(&self) -> impl DoubleEndedIterator<Item = Mor> + ExactSizeIterator + Clone {
        (0..self.mor_names.len() as u32).map(Mor)
    }

    #[inline]
    pub fn src(&self, f: Mor) -> Obj {
        self.src[f.idx()]
    }

    #[inline]
    pub fn tgt(&self, f: Mor) -> Obj {
        self.tgt[f.idx()]
    }

    #[inline]
    pub fn id(&self, o: Obj) -> Mor {
        self.identity[o.idx()]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identity[self.src(f).idx()] == f
    }

    /// `g ∘ f`. Panics if the pair is not composable.
    #[inline]
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        debug_assert_eq!(self.tgt(f), self.src(g), "compose: {g} ∘ {f} not composable");
        self.comp[g.idx()][self.in_pos[f.idx()] as usize]
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.tgt(f) == self.src(g) {
            Some(self.compose(g, f))
        } else {
            None
        }
    }

    /// Composite of a path given in diagrammatic order reversed: `compose_all(&[h, g, f]) = h∘g∘f`.
    pub fn compose_all(&self, path: &[Mor]) -> Mor {
        let (last, rest) = path.split_last().expect("compose_all: empty path");
        rest.iter().rev().fold(*last, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn outgoing(&self, a: Obj) -> &[Mor] {
        &self.outgoing[a.idx()]
    }

    pub fn incoming(&self, a: Obj) -> &[Mor] {
        &self.incoming[a.idx()]
    }

    pub fn obj_name(&self, o: Obj) -> &str {
        &self.obj_names[o.idx()]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.mor_names[f.idx()]
    }

    pub fn obj_by_name(&self, name: &str) -> Option<Obj> {
        self.obj_lookup.get(name).copied()
    }

    pub fn mor_by_name(&self, name: &str) -> Option<Mor> {
        self.mor_lookup.get(name).copied()
    }

    pub fn object(&self, name: &str) -> Result<Obj, Error> {
        self.obj_by_name(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism(&self, name: &str) -> Result<Mor, Error> {
        self.mor_by_name(name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn contains_obj(&self, o: Obj) -> bool {
        o.idx() < self.obj_names.len()
    }

    pub fn contains_mor(&self, f: Mor) -> bool {
        f.idx() < self.mor_names.len()
    }

    /// Number of composable pairs, i.e. the size of the composition table.
    pub fn num_composable_pairs(&self) -> usize {
        self.comp.iter().map(Vec::len).sum()
    }

    /// All composable pairs `(g, f)` with their composite, in table order.
    pub fn composition_triples(&self) -> impl Iterator<Item = (Mor, Mor, Mor)> + '_ {
        self.morphisms().flat_map(move |g| {
            self.incoming(self.src(g))
                .iter()
                .map(move |&f| (g, f, self.compose(g, f)))
        })
    }

    /// True iff `f` has a two-sided inverse (exhaustive search).
    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (a, b) = (self.src(f), self.tgt(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == self.id(a) && self.compose(f, g) == self.id(b)
        })
    }

    /// True iff every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.hom.values().all(|v| v.len() <= 1)
    }

    /// The opposite category; names are kept, composition is reversed.
    pub fn opposite(&self) -> FinCategory {
        let mut b = CategoryBuilder::new();
        for o in self.objects() {
            b.add_object(self.obj_name(o).to_string());
        }
        for f in self.morphisms() {
            b.add_morphism(
                self.mor_name(f).to_string(),
                Obj(self.tgt(f).0),
                Obj(self.src(f).0),
            );
        }
        for o in self.objects() {
            b.set_identity(o, self.id(o));
        }
        b.build(SizeGuard::unlimited(), |g, f| self.compose(f, g))
            .expect("opposite of a valid category is valid")
    }

    /// Exhaustive check of the typing, unit and associativity laws.
    pub fn check_laws(&self) -> Result<(), LawViolation> {
        for o in self.objects() {
            let i = self.id(o);
            if self.src(i) != o || self.tgt(i) != o {
                return Err(LawViolation::IdentityTyping {
                    object: self.obj_name(o).to_string(),
                    morphism: self.mor_name(i).to_string(),
                });
            }
        }
        for (g, f, gf) in self.composition_triples() {
            if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) {
                return Err(self.wrong_hom(g, f, gf));
            }
        }
        for f in self.morphisms() {
            if self.compose(self.id(self.tgt(f)), f) != f {
                return Err(LawViolation::LeftUnit {
                    morphism: self.mor_name(f).to_string(),
                });
            }
            if self.compose(f, self.id(self.src(f))) != f {
                return Err(LawViolation::RightUnit {
                    morphism: self.mor_name(f).to_string(),
                });
            }
        }
        for g in self.morphisms() {
            for &f in self.incoming(self.src(g)) {
                let gf = self.compose(g, f);
                for &h in self.outgoing(self.tgt(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(LawViolation::Associativity {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn wrong_hom(&self, g: Mor, f: Mor, gf: Mor) -> LawViolation {
        LawViolation::WrongHomSet {
            g: self.mor_name(g).to_string(),
            f: self.mor_name(f).to_string(),
            result: self.mor_name(gf).to_string(),
        }
    }

    /// Structural equality: same names, typing, identities and composition table.
    pub fn same_as(&self, other: &FinCategory) -> bool {
        std::ptr::eq(self, other)
            || (self.obj_names == other.obj_names
                && self.mor_names == other.mor_names
                && self.src == other.src
                && self.tgt == other.tgt
                && self.identity == other.identity
                && self.comp == other.comp)
    }

    pub(crate) fn pullback_cache(&self) -> &Mutex<HashMap<(Mor, Mor), Option<Cone>>> {
        &self.pullbacks
    }

    /// Validates a raw description: names, identities and a composition table
    /// given as `(g, f, g∘f)` triples. Every law is checked exhaustively.
    pub fn from_table(
        objects: &[String],
        morphisms: &[(String, String, String)],
        identities: &[(String, String)],
        composition: &[(String, String, String)],
        guard: SizeGuard,
    ) -> Result<FinCategory, Error> {
        guard.check(morphisms.len())?;
        let mut b = CategoryBuilder::new();
        for o in objects {
            if b.obj_lookup.contains_key(o) {
                return Err(Error::DuplicateObject(o.clone()));
            }
            b.add_object(o.clone());
        }
        for (name, s, t) in morphisms {
            if b.mor_lookup.contains_key(name) {
                return Err(Error::DuplicateMorphism(name.clone()));
            }
            let s = b.lookup_obj(s)?;
            let t = b.lookup_obj(t)?;
            b.add_morphism(name.clone(), s, t);
        }
        for (o, m) in identities {
            let o = b.lookup_obj(o)?;
            let m = b.lookup_mor(m)?;
            if b.identity[o.idx()].is_some() {
                return Err(Error::Law(LawViolation::DuplicateIdentity {
                    object: b.obj_names[o.idx()].clone(),
                }));
            }
            b.identity[o.idx()] = Some(m);
        }
        let mut table: HashMap<(Mor, Mor), Mor> = HashMap::with_capacity(composition.len());
        for (g, f, gf) in composition {
            let (gm, fm, gfm) = (b.lookup_mor(g)?, b.lookup_mor(f)?, b.lookup_mor(gf)?);
            if b.tgt[fm.idx()] != b.src[gm.idx()] {
                return Err(Error::Law(LawViolation::NotComposable {
                    g: g.clone(),
                    f: f.clone(),
                }));
            }
            if table.insert((gm, fm), gfm).is_some() {
                return Err(Error::Law(LawViolation::DuplicateComposite {
                    g: g.clone(),
                    f: f.clone(),
                }));
            }
        }
        let cat = b.try_build(guard, |g, f| table.get(&(g, f)).copied())?;
        cat.check_laws()?;
        Ok(cat)
    }
}

/// Incremental construction of a [`FinCategory`] from objects, morphisms,
/// identities and a composition function.
#[derive(Default)]
pub struct CategoryBuilder {
    obj_names: Vec<String>,
    mor_names: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Option<Mor>>,
    obj_lookup: HashMap<String, Obj>,
    mor_lookup: HashMap<String, Mor>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Obj {
        let o = Obj(self.obj_names.len() as u32);
        let name = name.into();
        self.obj_lookup.insert(name.clone(), o);
        self.obj_names.push(name);
        self.identity.push(None);
        o
    }

    pub fn add_morphism(&mut self, name: impl Into<String>, src: Obj, tgt: Obj) -> Mor {
        let m = Mor(self.mor_names.len() as u32);
        let name = name.into();
        self.mor_lookup.insert(name.clone(), m);
        self.mor_names.push(name);
        self.src.push(src);
        self.tgt.push(tgt);
        m
    }

    /// Adds an identity morphism named `id_<object>` and registers it.
    pub fn add_identity(&mut self, o: Obj) -> Mor {
        let name = format!("id_{}", self.obj_names[o.idx()]);
        let m = self.add_morphism(name, o, o);
        self.identity[o.idx()] = Some(m);
        m
    }

    pub fn set_identity(&mut self, o: Obj, m: Mor) {
        self.identity[o.idx()] = Some(m);
    }

    pub fn num_morphisms(&self) -> usize {
        self.mor_names.len()
    }

    fn lookup_obj(&self, name: &str) -> Result<Obj, Error> {
        self.obj_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    fn lookup_mor(&self, name: &str) -> Result<Mor, Error> {
        self.mor_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    /// Builds the category, filling the table from a total composition function.
    /// Typing and unit laws are checked; associativity is left to
    /// [`FinCategory::check_laws`].
    pub fn build(
        self,
        guard: SizeGuard,
        mut compose: impl FnMut(Mor, Mor) -> Mor,
    ) -> Result<FinCategory, Error> {
        self.try_build(guard, |g, f| Some(compose(g, f)))
    }

    pub fn try_build(
        self,
        guard: SizeGuard,
        mut compose: impl FnMut(Mor, Mor) -> Option<Mor>,
    ) -> Result<FinCategory, Error> {
        guard.check(self.mor_names.len())?;
        let n_obj = self.obj_names.len();
        let n_mor = self.mor_names.len();
        let mut identity = Vec::with_capacity(n_obj);
        for (i, m) in self.identity.iter().enumerate() {
            match m {
                Some(m) => identity.push(*m),
                None => {
                    return Err(Error::Law(LawViolation::MissingIdentity {
                        object: self.obj_names[i].clone(),
                    }))
                }
            }
        }
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut incoming = vec![Vec::new(); n_obj];
        let mut in_pos = vec![0u32; n_mor];
        let mut hom: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::new();
        for i in 0..n_mor {
            let m = Mor(i as u32);
            let (s, t) = (self.src[i], self.tgt[i]);
            outgoing[s.idx()].push(m);
            in_pos[i] = incoming[t.idx()].len() as u32;
            incoming[t.idx()].push(m);
            hom.entry((s, t)).or_default().push(m);
        }
        let mut comp = Vec::with_capacity(n_mor);
        for gi in 0..n_mor {
            let g = Mor(gi as u32);
            let s = self.src[gi];
            let mut row = Vec::with_capacity(incoming[s.idx()].len());
            for &f in &incoming[s.idx()] {
                let gf = compose(g, f).ok_or_else(|| {
                    Error::Law(LawViolation::MissingComposite {
                        g: self.mor_names[gi].clone(),
                        f: self.mor_names[f.idx()].clone(),
                    })
                })?;
                if gf.idx() >= n_mor
                    || self.src[gf.idx()] != self.src[f.idx()]
                    || self.tgt[gf.idx()] != self.tgt[gi]
                {
                    return Err(Error::Law(LawViolation::WrongHomSet {
                        g: self.mor_names[gi].clone(),
                        f: self.mor_names[f.idx()].clone(),
                        result: self
                            .mor_names
                            .get(gf.idx())
                            .cloned()
                            .unwrap_or_else(|| gf.to_string()),
                    }));
                }
                row.push(gf);
            }
            comp.push(row);
        }
        Ok(FinCategory {
            obj_names: self.obj_names,
            mor_names: self.mor_names,
            src: self.src,
            tgt: self.tgt,
            identity,
            outgoing,
            incoming,
            in_pos,
            comp,
            hom,
            obj_lookup: self.obj_lookup,
            mor_lookup: self.mor_lookup,
            pullbacks: Mutex::new(HashMap::new()),
        })
    }
}
