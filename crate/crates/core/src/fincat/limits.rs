use std::collections::{HashMap, HashSet};

use super::{Cone, FinCategory, Functor, Mor, Obj};
use crate::error::Error;

/// `left: a -> c <- b: right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cospan {
    pub left: Mor,
    pub right: Mor,
}

/// `left: c -> a`, `right: c -> b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub left: Mor,
    pub right: Mor,
}

/// One competing cone together with its mediating morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MediatorEntry {
    pub apex: Obj,
    pub leg_left: Mor,
    pub leg_right: Mor,
    pub mediator: Mor,
}

/// A (co)limit cone with its full mediator table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeResult {
    pub apex: Obj,
    pub leg_left: Mor,
    pub leg_right: Mor,
    pub universal: bool,
    pub mediators: Vec<MediatorEntry>,
}

impl ConeResult {
    pub fn cone(&self) -> Cone {
        Cone {
            apex: self.apex,
            leg_left: self.leg_left,
            leg_right: self.leg_right,
        }
    }
}

pub fn is_terminal(c: &FinCategory, z: Obj) -> bool {
    c.objects().all(|b| c.hom(b, z).len() == 1)
}

pub fn terminal_objects(c: &FinCategory) -> Vec<Obj> {
    c.objects().filter(|&z| is_terminal(c, z)).collect()
}

/// Lowest-id terminal object.
pub fn terminal_object(c: &FinCategory) -> Option<Obj> {
    c.objects().find(|&z| is_terminal(c, z))
}

// number of cones over (f, g) with apex y, for every y
fn cone_counts(c: &FinCategory, f: Mor, g: Mor) -> Vec<usize> {
    let (a, b) = (c.src(f), c.src(g));
    c.objects()
        .map(|y| {
            let mut by_image: HashMap<Mor, usize> = HashMap::new();
            for &q in c.hom(y, b) {
                *by_image.entry(c.compose(g, q)).or_default() += 1;
            }
            c.hom(y, a)
                .iter()
                .map(|&p| by_image.get(&c.compose(f, p)).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

fn cocone_counts(c: &FinCategory, f: Mor, g: Mor) -> Vec<usize> {
    let (a, b) = (c.tgt(f), c.tgt(g));
    c.objects()
        .map(|y| {
            let mut by_image: HashMap<Mor, usize> = HashMap::new();
            for &q in c.hom(b, y) {
                *by_image.entry(c.compose(q, g)).or_default() += 1;
            }
            c.hom(a, y)
                .iter()
                .map(|&p| by_image.get(&c.compose(p, f)).copied().unwrap_or(0))
                .sum()
        })
        .collect()
}

// given hom sizes already match the cone counts, universality is injectivity
fn cone_is_universal(c: &FinCategory, p: Mor, q: Mor, counts: &[usize]) -> bool {
    let x = c.src(p);
    c.objects().all(|y| {
        let homs = c.hom(y, x);
        if homs.len() != counts[y.idx()] {
            return false;
        }
        let mut seen = HashSet::with_capacity(homs.len());
        homs.iter()
            .all(|&m| seen.insert((c.compose(p, m), c.compose(q, m))))
    })
}

fn cocone_is_universal(c: &FinCategory, p: Mor, q: Mor, counts: &[usize]) -> bool {
    let x = c.tgt(p);
    c.objects().all(|y| {
        let homs = c.hom(x, y);
        if homs.len() != counts[y.idx()] {
            return false;
        }
        let mut seen = HashSet::with_capacity(homs.len());
        homs.iter()
            .all(|&m| seen.insert((c.compose(m, p), c.compose(m, q))))
    })
}

fn search_pullback(c: &FinCategory, f: Mor, g: Mor) -> Option<Cone> {
    assert_eq!(c.tgt(f), c.tgt(g), "pullback: legs must share a target");
    let counts = cone_counts(c, f, g);
    let (a, b) = (c.src(f), c.src(g));
    for x in c.objects() {
        if c.objects().any(|y| c.hom(y, x).len() != counts[y.idx()]) {
            continue;
        }
        for &p in c.hom(x, a) {
            let fp = c.compose(f, p);
            for &q in c.hom(x, b) {
                if c.compose(g, q) == fp && cone_is_universal(c, p, q, &counts) {
                    return Some(Cone {
                        apex: x,
                        leg_left: p,
                        leg_right: q,
                    });
                }
            }
        }
    }
    None
}

/// Canonical pullback cone of `left: a -> c <- b: right`: lowest apex id, then
/// lowest leg ids. Results are memoized on the category.
pub fn pullback_cone(c: &FinCategory, left: Mor, right: Mor) -> Option<Cone> {
    if let Some(hit) = c.pullback_cache().lock().unwrap().get(&(left, right)) {
        return *hit;
    }
    let cone = search_pullback(c, left, right);
    c.pullback_cache()
        .lock()
        .unwrap()
        .insert((left, right), cone);
    cone
}

/// Canonical pushout cocone of the span `left: c -> a`, `right: c -> b`.
pub fn pushout_cone(c: &FinCategory, left: Mor, right: Mor) -> Option<Cone> {
    assert_eq!(c.src(left), c.src(right), "pushout: legs must share a source");
    let counts = cocone_counts(c, left, right);
    let (a, b) = (c.tgt(left), c.tgt(right));
    for x in c.objects() {
        if c.objects().any(|y| c.hom(x, y).len() != counts[y.idx()]) {
            continue;
        }
        for &p in c.hom(a, x) {
            let pf = c.compose(p, left);
            for &q in c.hom(b, x) {
                if c.compose(q, right) == pf && cocone_is_universal(c, p, q, &counts) {
                    return Some(Cone {
                        apex: x,
                        leg_left: p,
                        leg_right: q,
                    });
                }
            }
        }
    }
    None
}

/// Pullback with the full mediator table; `None` when no terminal cone exists.
pub fn pullback(c: &FinCategory, cs: Cospan) -> Option<ConeResult> {
    let cone = pullback_cone(c, cs.left, cs.right)?;
    let (a, b) = (c.src(cs.left), c.src(cs.right));
    let mut mediators = Vec::new();
    for y in c.objects() {
        for &p in c.hom(y, a) {
            let fp = c.compose(cs.left, p);
            for &q in c.hom(y, b) {
                if c.compose(cs.right, q) != fp {
                    continue;
                }
                let m = c
                    .hom(y, cone.apex)
                    .iter()
                    .copied()
                    .find(|&m| {
                        c.compose(cone.leg_left, m) == p && c.compose(cone.leg_right, m) == q
                    })
                    .expect("universal cone has a mediator for every cone");
                mediators.push(MediatorEntry {
                    apex: y,
                    leg_left: p,
                    leg_right: q,
                    mediator: m,
                });
            }
        }
    }
    Some(ConeResult {
        apex: cone.apex,
        leg_left: cone.leg_left,
        leg_right: cone.leg_right,
        universal: true,
        mediators,
    })
}

/// Pushout with the full mediator table (mediators go out of the apex).
pub fn pushout(c: &FinCategory, sp: Span) -> Option<ConeResult> {
    let cone = pushout_cone(c, sp.left, sp.right)?;
    let (a, b) = (c.tgt(sp.left), c.tgt(sp.right));
    let mut mediators = Vec::new();
    for y in c.objects() {
        for &p in c.hom(a, y) {
            let pf = c.compose(p, sp.left);
            for &q in c.hom(b, y) {
                if c.compose(q, sp.right) != pf {
                    continue;
                }
                let m = c
                    .hom(cone.apex, y)
                    .iter()
                    .copied()
                    .find(|&m| {
                        c.compose(m, cone.leg_left) == p && c.compose(m, cone.leg_right) == q
                    })
                    .expect("universal cocone has a mediator for every cocone");
                mediators.push(MediatorEntry {
                    apex: y,
                    leg_left: p,
                    leg_right: q,
                    mediator: m,
                });
            }
        }
    }
    Some(ConeResult {
        apex: cone.apex,
        leg_left: cone.leg_left,
        leg_right: cone.leg_right,
        universal: true,
        mediators,
    })
}

/// Unique mediator from the cone `(p, q)` into the canonical pullback of `(f, g)`.
pub fn pullback_mediator(c: &FinCategory, f: Mor, g: Mor, p: Mor, q: Mor) -> Option<Mor> {
    let cone = pullback_cone(c, f, g)?;
    c.hom(c.src(p), cone.apex)
        .iter()
        .copied()
        .find(|&m| c.compose(cone.leg_left, m) == p && c.compose(cone.leg_right, m) == q)
}

/// Whether the commuting square `f∘p = g∘q` is a pullback of `(f, g)`.
/// Recognized by the mediator into the canonical pullback being invertible,
/// so iso copies of the apex count.
pub fn is_pullback(c: &FinCategory, f: Mor, g: Mor, p: Mor, q: Mor) -> bool {
    if c.src(p) != c.src(q)
        || c.tgt(p) != c.src(f)
        || c.tgt(q) != c.src(g)
        || c.compose(f, p) != c.compose(g, q)
    {
        return false;
    }
    match pullback_mediator(c, f, g, p, q) {
        Some(m) => c.is_iso(m),
        None => false,
    }
}

/// Every universal cone over `(f, g)`: the canonical one precomposed with each
/// iso into its apex, sorted by apex and legs.
pub fn universal_cones(c: &FinCategory, f: Mor, g: Mor) -> Vec<Cone> {
    let Some(cone) = pullback_cone(c, f, g) else {
        return Vec::new();
    };
    let mut out: Vec<Cone> = c
        .incoming(cone.apex)
        .iter()
        .copied()
        .filter(|&m| c.is_iso(m))
        .map(|m| Cone {
            apex: c.src(m),
            leg_left: c.compose(cone.leg_left, m),
            leg_right: c.compose(cone.leg_right, m),
        })
        .collect();
    out.sort_by_key(|k| (k.apex, k.leg_left, k.leg_right));
    out.dedup();
    out
}

/// All cospans of the category, in a fixed order.
pub fn cospans(c: &FinCategory) -> impl Iterator<Item = Cospan> + '_ {
    c.objects().flat_map(move |o| {
        let inc = c.incoming(o);
        inc.iter()
            .flat_map(move |&f| inc.iter().map(move |&g| Cospan { left: f, right: g }))
    })
}

/// First cospan without a pullback.
pub fn pullback_failure(c: &FinCategory) -> Option<Cospan> {
    cospans(c).find(|cs| pullback_cone(c, cs.left, cs.right).is_none())
}

pub fn is_lex_category(c: &FinCategory) -> bool {
    terminal_object(c).is_some() && pullback_failure(c).is_none()
}

pub fn preserves_terminal(f: &Functor) -> Result<bool, Error> {
    let src = f.source();
    let z = terminal_object(src)
        .ok_or_else(|| Error::MissingLimit("source has no terminal object".into()))?;
    Ok(is_terminal(f.target(), f.ob(z)))
}

/// First cospan of the source whose chosen pullback is not sent to a pullback.
pub fn pullback_preservation_failure(f: &Functor) -> Result<Option<Cospan>, Error> {
    let (s, t) = (&**f.source(), &**f.target());
    for cs in cospans(s) {
        let cone = pullback_cone(s, cs.left, cs.right).ok_or_else(|| {
            Error::MissingLimit(format!(
                "source lacks a pullback of ({}, {})",
                s.mor_name(cs.left),
                s.mor_name(cs.right)
            ))
        })?;
        if !is_pullback(
            t,
            f.mor(cs.left),
            f.mor(cs.right),
            f.mor(cone.leg_left),
            f.mor(cone.leg_right),
        ) {
            return Ok(Some(cs));
        }
    }
    Ok(None)
}

pub fn preserves_pullbacks(f: &Functor) -> Result<bool, Error> {
    Ok(pullback_preservation_failure(f)?.is_none())
}

pub fn is_lex_functor(f: &Functor) -> Result<bool, Error> {
    Ok(preserves_terminal(f)? && preserves_pullbacks(f)?)
}
