use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{pushout_cone, CategoryBuilder, FinCategory, Functor, Mor, Obj, SizeGuard};

/// `B^Δ¹`: objects are the arrows of `B`, morphisms commuting squares
/// `(α, β): f -> g` with `β∘f = g∘α`.
#[derive(Clone, Debug)]
pub struct ArrowCategory {
    pub cat: Arc<FinCategory>,
    /// `∂₀`, the domain projection.
    pub dom: Functor,
    /// `∂₁`, the codomain projection.
    pub cod: Functor,
    arrows: Vec<Mor>,
    squares: Vec<(Mor, Mor)>,
    index: Vec<Obj>,
}

impl ArrowCategory {
    /// The arrow of `B` an object stands for.
    pub fn arrow_of(&self, o: Obj) -> Mor {
        self.arrows[o.idx()]
    }

    /// The object standing for an arrow of `B`.
    pub fn object_of(&self, f: Mor) -> Obj {
        self.index[f.idx()]
    }

    /// `(α, β)` of a square.
    pub fn square_of(&self, m: Mor) -> (Mor, Mor) {
        self.squares[m.idx()]
    }

    pub fn square(&self, f: Mor, g: Mor, alpha: Mor, beta: Mor) -> Option<Mor> {
        let (x, y) = (self.object_of(f), self.object_of(g));
        self.cat
            .hom(x, y)
            .iter()
            .copied()
            .find(|&m| self.squares[m.idx()] == (alpha, beta))
    }
}

pub fn arrow_category(b: &Arc<FinCategory>) -> Result<ArrowCategory, Error> {
    arrow_category_guarded(b, SizeGuard::default())
}

pub fn arrow_category_guarded(b: &Arc<FinCategory>, guard: SizeGuard) -> Result<ArrowCategory, Error> {
    let c = &**b;
    let mut bld = CategoryBuilder::new();
    let arrows: Vec<Mor> = c.morphisms().collect();
    let index: Vec<Obj> = arrows.iter().map(|&f| bld.add_object(c.mor_name(f))).collect();
    let mut squares = Vec::new();
    let mut ends = Vec::new();
    let mut lookup: HashMap<(Obj, Obj, Mor, Mor), Mor> = HashMap::new();
    for &f in &arrows {
        for &alpha in c.outgoing(c.src(f)) {
            for &beta in c.outgoing(c.tgt(f)) {
                let bf = c.compose(beta, f);
                for &g in c.hom(c.tgt(alpha), c.tgt(beta)) {
                    if c.compose(g, alpha) != bf {
                        continue;
                    }
                    let (x, y) = (index[f.idx()], index[g.idx()]);
                    let name = format!(
                        "[{},{}]:{}->{}",
                        c.mor_name(alpha),
                        c.mor_name(beta),
                        c.mor_name(f),
                        c.mor_name(g)
                    );
                    let m = bld.add_morphism(name, x, y);
                    if f == g && c.is_identity(alpha) && c.is_identity(beta) {
                        bld.set_identity(x, m);
                    }
                    lookup.insert((x, y, alpha, beta), m);
                    squares.push((alpha, beta));
                    ends.push((x, y));
                    guard.check(squares.len())?;
                }
            }
        }
    }
    let cat = bld.try_build(guard, |q, p| {
        let (a1, b1) = squares[p.idx()];
        let (a2, b2) = squares[q.idx()];
        lookup
            .get(&(ends[p.idx()].0, ends[q.idx()].1, c.compose(a2, a1), c.compose(b2, b1)))
            .copied()
    })?;
    let cat = Arc::new(cat);
    let dom = Functor::new_unchecked(
        cat.clone(),
        b.clone(),
        arrows.iter().map(|&f| c.src(f)).collect(),
        squares.iter().map(|s| s.0).collect(),
    );
    let cod = Functor::new_unchecked(
        cat.clone(),
        b.clone(),
        arrows.iter().map(|&f| c.tgt(f)).collect(),
        squares.iter().map(|s| s.1).collect(),
    );
    Ok(ArrowCategory {
        cat,
        dom,
        cod,
        arrows,
        squares,
        index,
    })
}

/// `∂₁: B^Δ¹ -> B`.
pub fn codomain_fibration(b: &Arc<FinCategory>) -> Result<Fibration, Error> {
    Ok(Fibration::new(arrow_category(b)?.cod))
}

/// `∂₀: B^Δ¹ -> B`; requires all pushouts.
pub fn domain_opfibration(b: &Arc<FinCategory>) -> Result<Fibration, Error> {
    if let Some((f, g)) = missing_pushout(b) {
        return Err(Error::MissingPushouts(format!(
            "no pushout of ({}, {})",
            b.mor_name(f),
            b.mor_name(g)
        )));
    }
    Ok(Fibration::new(arrow_category(b)?.dom))
}

fn missing_pushout(b: &FinCategory) -> Option<(Mor, Mor)> {
    for o in b.objects() {
        for &f in b.outgoing(o) {
            for &g in b.outgoing(o) {
                if pushout_cone(b, f, g).is_none() {
                    return Some((f, g));
                }
            }
        }
    }
    None
}

/// The cocartesian lift of `u: a -> a'` at `f: a -> c` for `∂₀`: the square
/// `(u, q): f -> p` with `p`, `q` the legs of the pushout of `(u, f)`.
pub fn domain_lift_formula(ar: &ArrowCategory, u: Mor, f: Mor) -> Option<Mor> {
    let b = ar.dom.target();
    let cone = pushout_cone(b, u, f)?;
    ar.square(f, cone.leg_left, u, cone.leg_right)
}
