use std::collections::HashMap;
use std::sync::Arc;

use super::limits::{is_pullback, pullback_cone};
use super::{CategoryBuilder, Cospan, FinCategory, Functor, Mor, Obj, SizeGuard};
use crate::error::Error;

/// The slice `C/a` with its domain projection.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: Arc<FinCategory>,
    pub proj: Functor,
    pub over: Obj,
    /// The arrow into `over` that each slice object stands for.
    pub arrows: Vec<Mor>,
    /// Underlying morphism of each slice morphism.
    pub underlying: Vec<Mor>,
    index: HashMap<Mor, Obj>,
    mor_index: HashMap<(Obj, Obj, Mor), Mor>,
}

impl Slice {
    pub fn object_for(&self, arrow: Mor) -> Option<Obj> {
        self.index.get(&arrow).copied()
    }

    pub fn morphism_for(&self, src: Obj, tgt: Obj, m: Mor) -> Option<Mor> {
        self.mor_index.get(&(src, tgt, m)).copied()
    }
}

/// Objects are arrows into `a`, morphisms are commuting triangles.
pub fn slice(c: &Arc<FinCategory>, a: Obj) -> Result<Slice, Error> {
    slice_guarded(c, a, SizeGuard::default())
}

pub fn slice_guarded(c: &Arc<FinCategory>, a: Obj, guard: SizeGuard) -> Result<Slice, Error> {
    if !c.contains_obj(a) {
        return Err(Error::UnknownObject(a.to_string()));
    }
    let mut b = CategoryBuilder::new();
    let arrows: Vec<Mor> = c.incoming(a).to_vec();
    let mut index = HashMap::new();
    for &f in &arrows {
        let o = b.add_object(c.mor_name(f));
        index.insert(f, o);
    }
    let mut underlying = Vec::new();
    let mut ends = Vec::new();
    let mut mor_index = HashMap::new();
    for (i, &f) in arrows.iter().enumerate() {
        let x = Obj(i as u32);
        for &m in c.outgoing(c.src(f)) {
            for &g in c.hom(c.tgt(m), a) {
                if c.compose(g, m) != f {
                    continue;
                }
                let y = index[&g];
                let name = format!("{}:{}->{}", c.mor_name(m), c.mor_name(f), c.mor_name(g));
                let k = b.add_morphism(name, x, y);
                if m == c.id(c.src(f)) {
                    b.set_identity(x, k);
                }
                underlying.push(m);
                ends.push((x, y));
                mor_index.insert((x, y, m), k);
                guard.check(underlying.len())?;
            }
        }
    }
    let cat = b.try_build(guard, |g, f| {
        let gf = c.compose(underlying[g.idx()], underlying[f.idx()]);
        mor_index.get(&(ends[f.idx()].0, ends[g.idx()].1, gf)).copied()
    })?;
    let cat = Arc::new(cat);
    let proj = Functor::new_unchecked(
        cat.clone(),
        c.clone(),
        arrows.iter().map(|&f| c.src(f)).collect(),
        underlying.clone(),
    );
    Ok(Slice {
        cat,
        proj,
        over: a,
        arrows,
        underlying,
        index,
        mor_index,
    })
}

/// The functor `F/c : C/c -> D/F c` induced by `F`, with both slices.
pub fn slice_functor(f: &Functor, c: Obj) -> Result<(Slice, Slice, Functor), Error> {
    let src = slice(f.source(), c)?;
    let tgt = slice(f.target(), f.ob(c))?;
    let d = f.target();
    let obj_map: Vec<Obj> = src
        .arrows
        .iter()
        .map(|&g| tgt.object_for(f.mor(g)).expect("image of an arrow into c"))
        .collect();
    let mor_map: Vec<Mor> = src
        .cat
        .morphisms()
        .map(|k| {
            let (x, y) = (src.cat.src(k), src.cat.tgt(k));
            let m = f.mor(src.underlying[k.idx()]);
            debug_assert_eq!(d.src(m), f.ob(src.proj.ob(x)));
            tgt.morphism_for(obj_map[x.idx()], obj_map[y.idx()], m)
                .expect("image of a triangle is a triangle")
        })
        .collect();
    let func = Functor::new(src.cat.clone(), tgt.cat.clone(), obj_map, mor_map)?;
    Ok((src, tgt, func))
}

/// The pullback of a cospan of slice morphisms, computed inside `C/a`, projects
/// to a pullback in `C`, and a pullback in `C` of the underlying cospan lifts.
pub fn slice_pullback_agrees(c: &Arc<FinCategory>, a: Obj, kappa: Cospan) -> Result<bool, Error> {
    let s = slice(c, a)?;
    slice_pullback_agrees_in(&s, c, kappa)
}

pub fn slice_pullback_agrees_in(s: &Slice, c: &FinCategory, kappa: Cospan) -> Result<bool, Error> {
    let (f, g) = (s.underlying[kappa.left.idx()], s.underlying[kappa.right.idx()]);
    pullback_cone(c, f, g).ok_or_else(|| {
        Error::MissingPullback(format!("({}, {})", c.mor_name(f), c.mor_name(g)))
    })?;
    let up = pullback_cone(&s.cat, kappa.left, kappa.right);
    Ok(match up {
        Some(cone) => is_pullback(
            c,
            f,
            g,
            s.underlying[cone.leg_left.idx()],
            s.underlying[cone.leg_right.idx()],
        ),
        // the pullback downstairs exists, so it should have lifted
        None => false,
    })
}

/// The comma category `F ↓ G` with its two projections.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCategory>,
    pub proj_left: Functor,
    pub proj_right: Functor,
    /// `(a, b, f: F a -> G b)` per object.
    pub objects: Vec<(Obj, Obj, Mor)>,
    /// `(α, β)` per morphism.
    pub morphisms: Vec<(Mor, Mor)>,
    obj_index: HashMap<(Obj, Obj, Mor), Obj>,
    mor_index: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl Comma {
    pub fn object(&self, a: Obj, b: Obj, f: Mor) -> Option<Obj> {
        self.obj_index.get(&(a, b, f)).copied()
    }

    pub fn morphism(&self, src: Obj, tgt: Obj, alpha: Mor, beta: Mor) -> Option<Mor> {
        self.mor_index.get(&(src, tgt, alpha, beta)).copied()
    }
}

pub fn comma(f: &Functor, g: &Functor) -> Result<Comma, Error> {
    comma_guarded(f, g, SizeGuard::default())
}

pub fn comma_guarded(f: &Functor, g: &Functor, guard: SizeGuard) -> Result<Comma, Error> {
    if !f.target().same_as(g.target()) {
        return Err(Error::TargetMismatch);
    }
    let (a_cat, b_cat, c) = (&**f.source(), &**g.source(), &**f.target());
    let mut bld = CategoryBuilder::new();
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for a in a_cat.objects() {
        for b in b_cat.objects() {
            for &h in c.hom(f.ob(a), g.ob(b)) {
                let name = format!("<{}|{}|{}>", a_cat.obj_name(a), b_cat.obj_name(b), c.mor_name(h));
                let o = bld.add_object(name);
                objects.push((a, b, h));
                obj_index.insert((a, b, h), o);
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut ends = Vec::new();
    let mut mor_index = HashMap::new();
    for (i, &(a, b, h)) in objects.iter().enumerate() {
        let x = Obj(i as u32);
        for &alpha in a_cat.outgoing(a) {
            let a2 = a_cat.tgt(alpha);
            let lhs_alpha = f.mor(alpha);
            for &beta in b_cat.outgoing(b) {
                let b2 = b_cat.tgt(beta);
                let gbh = c.compose(g.mor(beta), h);
                for &h2 in c.hom(f.ob(a2), g.ob(b2)) {
                    if c.compose(h2, lhs_alpha) != gbh {
                        continue;
                    }
                    let y = obj_index[&(a2, b2, h2)];
                    let name = format!(
                        "({},{}):{}->{}",
                        a_cat.mor_name(alpha),
                        b_cat.mor_name(beta),
                        bld_name(&objects, a_cat, b_cat, c, x),
                        bld_name(&objects, a_cat, b_cat, c, y)
                    );
                    let m = bld.add_morphism(name, x, y);
                    if alpha == a_cat.id(a) && beta == b_cat.id(b) {
                        bld.set_identity(x, m);
                    }
                    morphisms.push((alpha, beta));
                    ends.push((x, y));
                    mor_index.insert((x, y, alpha, beta), m);
                    guard.check(morphisms.len())?;
                }
            }
        }
    }
    let cat = bld.try_build(guard, |q, p| {
        let (a1, b1) = morphisms[p.idx()];
        let (a2, b2) = morphisms[q.idx()];
        mor_index
            .get(&(
                ends[p.idx()].0,
                ends[q.idx()].1,
                a_cat.compose(a2, a1),
                b_cat.compose(b2, b1),
            ))
            .copied()
    })?;
    let cat = Arc::new(cat);
    let proj_left = Functor::new_unchecked(
        cat.clone(),
        f.source().clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    );
    let proj_right = Functor::new_unchecked(
        cat.clone(),
        g.source().clone(),
        objects.iter().map(|o| o.1).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    );
    Ok(Comma {
        cat,
        proj_left,
        proj_right,
        objects,
        morphisms,
        obj_index,
        mor_index,
    })
}

fn bld_name(
    objects: &[(Obj, Obj, Mor)],
    a: &FinCategory,
    b: &FinCategory,
    c: &FinCategory,
    x: Obj,
) -> String {
    let (p, q, h) = objects[x.idx()];
    format!("<{}|{}|{}>", a.obj_name(p), b.obj_name(q), c.mor_name(h))
}

/// Fully faithful and essentially surjective, by exhaustion.
pub fn is_equivalence(f: &Functor) -> bool {
    let (s, t) = (&**f.source(), &**f.target());
    for x in s.objects() {
        for y in s.objects() {
            let homs = s.hom(x, y);
            if homs.len() != t.hom(f.ob(x), f.ob(y)).len() {
                return false;
            }
            let mut images: Vec<Mor> = homs.iter().map(|&m| f.mor(m)).collect();
            images.sort();
            images.dedup();
            if images.len() != homs.len() {
                return false;
            }
        }
    }
    t.objects().all(|y| {
        s.objects()
            .any(|x| t.hom(f.ob(x), y).iter().any(|&m| t.is_iso(m)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn slice_over_top_of_diamond() {
        let d = Arc::new(fixtures::diamond());
        let top = d.object("top").unwrap();
        let s = slice(&d, top).unwrap();
        assert_eq!(s.cat.num_objects(), 4);
        assert_eq!(s.cat.num_morphisms(), 9);
        s.cat.check_laws().unwrap();
        s.proj.check().unwrap();
        assert!(s.proj.is_isomorphism());
    }

    #[test]
    fn slice_of_two_over_one() {
        let t = Arc::new(fixtures::two());
        let s = slice(&t, t.object("1").unwrap()).unwrap();
        assert_eq!((s.cat.num_objects(), s.cat.num_morphisms()), (2, 3));
    }

    #[test]
    fn slice_of_finset_counts() {
        let c = Arc::new(fixtures::finset(3));
        let s = slice(&c, c.object("2").unwrap()).unwrap();
        // independent count: Σ_i |Hom(i, 2)| = Σ_i 2^i
        let expected: usize = (0..4u32).map(|i| 2usize.pow(i)).sum();
        assert_eq!(s.cat.num_objects(), expected);
        assert_eq!(expected, 15);
        s.cat.check_laws().unwrap();
    }

    #[test]
    fn comma_of_identities_counts() {
        let d = Arc::new(fixtures::diamond());
        let id = Functor::identity(d.clone());
        let cm = comma(&id, &id).unwrap();
        assert_eq!(cm.cat.num_objects(), d.num_morphisms());
        cm.cat.check_laws().unwrap();
        cm.proj_left.check().unwrap();
        cm.proj_right.check().unwrap();
    }

    #[test]
    fn comma_fbad_counts() {
        let f = fixtures::f_bad();
        let chain = f.target().clone();
        let id = Functor::identity(chain.clone());
        let cm = comma(&f, &id).unwrap();
        // objects (x, c, F x -> c): count pairs with F x ≤ c
        let expected: usize = f
            .source()
            .objects()
            .map(|x| chain.objects().filter(|&c| !chain.hom(f.ob(x), c).is_empty()).count())
            .sum();
        assert_eq!(cm.cat.num_objects(), expected);
        // the other orientation matches the hand count 1+2+3+4
        let cm2 = comma(&id, &f).unwrap();
        assert_eq!(cm2.cat.num_objects(), 10);
    }

    #[test]
    fn comma_const_top_is_diamond() {
        let k = fixtures::const_top();
        let id = Functor::identity(k.target().clone());
        let cm = comma(&k, &id).unwrap();
        // (x, y, ⊤ -> y) exists only for y = ⊤: one object per x
        assert_eq!(cm.cat.num_objects(), 4);
        assert!(cm.proj_left.is_isomorphism());
    }

    #[test]
    fn comma_target_mismatch() {
        let d = Arc::new(fixtures::diamond());
        let t = Arc::new(fixtures::two());
        let a = Functor::identity(d);
        let b = Functor::identity(t);
        assert!(matches!(comma(&a, &b), Err(Error::TargetMismatch)));
    }

    #[test]
    fn equivalence_examples() {
        let one = Arc::new(fixtures::one());
        let iso2 = Arc::new(fixtures::iso2());
        let two = Arc::new(fixtures::two());
        let p = iso2.object("p").unwrap();
        let inc = Functor::new(one.clone(), iso2.clone(), vec![p], vec![iso2.id(p)]).unwrap();
        assert!(is_equivalence(&inc));
        let z = two.object("0").unwrap();
        let inc2 = Functor::new(one, two.clone(), vec![z], vec![two.id(z)]).unwrap();
        assert!(!is_equivalence(&inc2));
        assert!(is_equivalence(&Functor::identity(two)));
    }

    #[test]
    fn slice_pullbacks_agree() {
        let d = Arc::new(fixtures::diamond());
        let top = d.object("top").unwrap();
        let s = slice(&d, top).unwrap();
        for x in s.cat.objects() {
            for &f in s.cat.incoming(x) {
                for &g in s.cat.incoming(x) {
                    let k = Cospan { left: f, right: g };
                    assert!(slice_pullback_agrees_in(&s, &d, k).unwrap());
                }
            }
        }
        let ch = Arc::new(fixtures::chain(4));
        let three = ch.object("3").unwrap();
        let s = slice(&ch, three).unwrap();
        let one = ch.object("1").unwrap();
        let two = ch.object("2").unwrap();
        let f = s
            .morphism_for(
                s.object_for(ch.hom(one, three)[0]).unwrap(),
                s.object_for(ch.hom(two, three)[0]).unwrap(),
                ch.hom(one, two)[0],
            )
            .unwrap();
        let g = s.cat.id(s.object_for(ch.hom(two, three)[0]).unwrap());
        let k = Cospan { left: f, right: g };
        assert!(slice_pullback_agrees_in(&s, &ch, k).unwrap());
        let cone = pullback_cone(&s.cat, f, g).unwrap();
        assert_eq!(s.proj.ob(cone.apex), one);
    }
}
