//! Small named categories, functors and fibration data used throughout the
//! tests, the CLI and the acceptance suite.

use std::collections::HashMap;
use std::sync::Arc;

use crate::constructions::GrothendieckData;
use crate::error::Error;
use crate::fincat::{CategoryBuilder, FinCategory, Functor, Mor, Obj, SizeGuard};

/// A poset as a thin category. `leq(i, j)` must be a partial order; morphisms are
/// named `x<=y`, identities `id_x`.
pub fn poset(names: &[String], leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    let n = names.len();
    let mut b = CategoryBuilder::new();
    for name in names {
        b.add_object(name.clone());
    }
    let mut pair = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            if leq(i, j) {
                let m = if i == j {
                    b.add_identity(Obj(i as u32))
                } else {
                    b.add_morphism(format!("{}<={}", names[i], names[j]), Obj(i as u32), Obj(j as u32))
                };
                pair.insert((i, j), m);
            }
        }
    }
    let ends: Vec<(usize, usize)> = {
        let mut v = vec![(0, 0); pair.len()];
        for (&(i, j), m) in &pair {
            v[m.idx()] = (i, j);
        }
        v
    };
    b.try_build(SizeGuard::unlimited(), |g, f| {
        pair.get(&(ends[f.idx()].0, ends[g.idx()].1)).copied()
    })
    .expect("a partial order is a category")
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// The terminal category.
pub fn one() -> FinCategory {
    poset(&names(&["*"]), |i, j| i == j)
}

/// The walking arrow `0 -> 1`.
pub fn two() -> FinCategory {
    chain(2)
}

/// The chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> FinCategory {
    let ns: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    poset(&ns, |i, j| i <= j)
}

/// The product order `chain(m) × chain(n)`, a distributive lattice with
/// objects named `i.j`.
pub fn grid(m: usize, n: usize) -> FinCategory {
    let ns: Vec<String> = (0..m * n).map(|k| format!("{}.{}", k / n, k % n)).collect();
    poset(&ns, |x, y| x / n <= y / n && x % n <= y % n)
}

/// `{bot, a, b, top}` with `a`, `b` incomparable.
pub fn diamond() -> FinCategory {
    // bot=0, a=1, b=2, top=3
    poset(&names(&["bot", "a", "b", "top"]), |i, j| {
        i == j || i == 0 || j == 3
    })
}

/// `a -> c <- b`, as the poset `a, b < c`.
pub fn walking_cospan() -> FinCategory {
    // a=0, b=1, c=2
    poset(&names(&["a", "b", "c"]), |i, j| i == j || j == 2)
}

/// Two objects, identities only.
pub fn discrete2() -> FinCategory {
    poset(&names(&["x", "y"]), |i, j| i == j)
}

/// Two objects `p`, `q` with inverse arrows `i: p -> q`, `j: q -> p`.
pub fn iso2() -> FinCategory {
    let mut b = CategoryBuilder::new();
    let p = b.add_object("p");
    let q = b.add_object("q");
    let idp = b.add_identity(p);
    let idq = b.add_identity(q);
    let i = b.add_morphism("i", p, q);
    let j = b.add_morphism("j", q, p);
    b.build(SizeGuard::unlimited(), |g, f| match (g, f) {
        (g, f) if g == idp || g == idq => f,
        (g, f) if f == idp || f == idq => g,
        (g, f) if g == j && f == i => idp,
        (g, f) if g == i && f == j => idq,
        _ => unreachable!(),
    })
    .expect("iso2 is a category")
}

/// The skeleton of finite sets `{0, 1, ..., n}` with all functions.
/// A function `i -> j` is named `i>j:` followed by its image digits.
pub fn finset(n: usize) -> FinCategory {
    finset_guarded(n, SizeGuard::unlimited()).expect("unbounded guard")
}

pub fn finset_guarded(n: usize, guard: SizeGuard) -> Result<FinCategory, Error> {
    let total: usize = (0..=n).flat_map(|i| (0..=n).map(move |j| j.pow(i as u32))).sum();
    guard.check(total)?;
    let mut b = CategoryBuilder::new();
    for i in 0..=n {
        b.add_object(i.to_string());
    }
    let mut funcs: Vec<(usize, usize, Vec<usize>)> = Vec::with_capacity(total);
    let mut index: HashMap<(usize, usize, Vec<usize>), Mor> = HashMap::new();
    for i in 0..=n {
        for j in 0..=n {
            for code in 0..j.pow(i as u32) {
                let mut images = Vec::with_capacity(i);
                let mut c = code;
                for _ in 0..i {
                    images.push(c % j);
                    c /= j;
                }
                images.reverse();
                let digits: String = images.iter().map(|d| d.to_string()).collect();
                let m = b.add_morphism(format!("{i}>{j}:{digits}"), Obj(i as u32), Obj(j as u32));
                if i == j && images.iter().enumerate().all(|(k, &v)| k == v) {
                    b.set_identity(Obj(i as u32), m);
                }
                index.insert((i, j, images.clone()), m);
                funcs.push((i, j, images));
            }
        }
    }
    b.try_build(guard, |g, f| {
        let (i, _, ref fi) = funcs[f.idx()];
        let (_, k, ref gi) = funcs[g.idx()];
        let comp: Vec<usize> = fi.iter().map(|&x| gi[x]).collect();
        index.get(&(i, k, comp)).copied()
    })
}

/// Monotone map between thin categories given on objects.
pub fn monotone(
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<Obj>,
) -> Result<Functor, Error> {
    let mut mor_map = Vec::with_capacity(source.num_morphisms());
    for f in source.morphisms() {
        let (x, y) = (obj_map[source.src(f).idx()], obj_map[source.tgt(f).idx()]);
        match target.hom(x, y).first() {
            Some(&m) => mor_map.push(m),
            None => {
                return Err(Error::NotAFunctor(format!(
                    "{} is not sent to an arrow",
                    source.mor_name(f)
                )))
            }
        }
    }
    Functor::new(source, target, obj_map, mor_map)
}

/// `Diamond -> Chain4`, `(bot, a, b, top) ↦ (0, 1, 2, 3)`: preserves the
/// terminal object but not the meet `a ∧ b`.
pub fn f_bad() -> Functor {
    let d = Arc::new(diamond());
    let c = Arc::new(chain(4));
    monotone(d, c, (0..4).map(Obj).collect()).expect("monotone")
}

/// The constant functor at `top` on `Diamond`.
pub fn const_top() -> Functor {
    let d = Arc::new(diamond());
    let top = d.object("top").unwrap();
    Functor::constant(d.clone(), d, top)
}

/// Meet of two objects of a thin category, if it exists.
pub fn meet(c: &FinCategory, x: Obj, y: Obj) -> Option<Obj> {
    let lower: Vec<Obj> = c
        .objects()
        .filter(|&w| !c.hom(w, x).is_empty() && !c.hom(w, y).is_empty())
        .collect();
    lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&w| !c.hom(w, m).is_empty()))
}

/// The down-set `↓a` of a thin category as a full subposet, with the inclusion.
pub fn down_set(c: &Arc<FinCategory>, a: Obj) -> (Arc<FinCategory>, Vec<Obj>) {
    let members: Vec<Obj> = c.objects().filter(|&x| !c.hom(x, a).is_empty()).collect();
    let ns: Vec<String> = members.iter().map(|&x| c.obj_name(x).to_string()).collect();
    let sub = poset(&ns, |i, j| !c.hom(members[i], members[j]).is_empty());
    (Arc::new(sub), members)
}

/// `x ↦ x ∧ a` as a functor `L -> ↓a`; lex whenever `L` is a lattice.
pub fn meet_map(l: &Arc<FinCategory>, a: Obj) -> Result<Functor, Error> {
    let (sub, members) = down_set(l, a);
    let pos: HashMap<Obj, Obj> = members
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, Obj(i as u32)))
        .collect();
    let mut obj_map = Vec::with_capacity(l.num_objects());
    for x in l.objects() {
        let m = meet(l, x, a).ok_or_else(|| Error::Precondition("meet does not exist".into()))?;
        obj_map.push(pos[&m]);
    }
    monotone(l.clone(), sub, obj_map)
}

/// Base `Two`, fiber `Two` over 0 and `One` over 1, transport collapses.
/// The total category is the chain `x0 < x1 < *`.
pub fn collapsing_grothendieck() -> GrothendieckData {
    let base = Arc::new(two());
    let f0 = Arc::new(two());
    let f1 = Arc::new(one());
    let star = f1.object("*").unwrap();
    let u = base.morphism("0<=1").unwrap();
    let mut transitions = Vec::new();
    for m in base.morphisms() {
        let t = if m == u {
            Functor::constant(f0.clone(), f1.clone(), star)
        } else if base.src(m) == base.object("0").unwrap() {
            Functor::identity(f0.clone())
        } else {
            Functor::identity(f1.clone())
        };
        transitions.push(t);
    }
    GrothendieckData::new(base, vec![f0, f1], transitions).expect("strictly functorial")
}

/// The constant family with fiber `fiber` over `base`.
pub fn constant_grothendieck(base: Arc<FinCategory>, fiber: Arc<FinCategory>) -> GrothendieckData {
    let fibers = vec![fiber.clone(); base.num_objects()];
    let transitions = base.morphisms().map(|_| Functor::identity(fiber.clone())).collect();
    GrothendieckData::new(base, fibers, transitions).expect("identities are functorial")
}
