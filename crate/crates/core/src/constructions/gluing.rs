use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{comma_guarded, is_lex_category, pullback_cone, Comma, Functor, Mor, Obj, SizeGuard};

/// The Artin gluing `gl(F) = C ↓ F -> B` of `F: B -> C`, with objects
/// `(c, b, v: c -> F b)`.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub functor: Functor,
    pub comma: Comma,
    pub fibration: Fibration,
}

/// Which closed-form lift disagreed with brute force.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingLiftFailure {
    /// `(u, object)`: the formula did not produce a cocartesian arrow.
    Cocartesian(Mor, Obj),
    /// `(u, object)`: the formula did not produce a cartesian arrow.
    Cartesian(Mor, Obj),
    /// Two cocartesian lifts not related by a unique vertical iso.
    CocartesianUniqueness(Mor, Mor),
    CartesianUniqueness(Mor, Mor),
}

impl Gluing {
    pub fn c(&self) -> &std::sync::Arc<crate::fincat::FinCategory> {
        self.functor.target()
    }

    /// Cocartesian lift of `u: b -> b'` at `(c, b, v)`: the square with top
    /// `id_c` and bottom `F u`, into `(c, b', F u ∘ v)`.
    pub fn cocartesian_lift_formula(&self, u: Mor, x: Obj) -> Option<Mor> {
        let (c, b, v) = self.comma.objects[x.idx()];
        let base = self.functor.source();
        if base.src(u) != b {
            return None;
        }
        let cc = self.c();
        let y = self
            .comma
            .object(c, base.tgt(u), cc.compose(self.functor.mor(u), v))?;
        self.comma.morphism(x, y, cc.id(c), u)
    }

    /// Cartesian lift of `u: b -> b'` at `(c, b', w)`: with `p1: p -> F b`,
    /// `p2: p -> c` the canonical pullback of `(F u, w)`, the arrow `(p2, u)` out
    /// of `(p, b, p1)`.
    pub fn cartesian_lift_formula(&self, u: Mor, x: Obj) -> Result<Mor, Error> {
        let (_, b2, w) = self.comma.objects[x.idx()];
        let base = self.functor.source();
        if base.tgt(u) != b2 {
            return Err(Error::NoFactorization("lift target is not over the codomain".into()));
        }
        let cc = self.c();
        let fu = self.functor.mor(u);
        let cone = pullback_cone(cc, fu, w).ok_or_else(|| {
            Error::MissingPullback(format!("({}, {})", cc.mor_name(fu), cc.mor_name(w)))
        })?;
        let src = self
            .comma
            .object(cone.apex, base.src(u), cone.leg_left)
            .expect("pullback leg is typed");
        self.comma
            .morphism(src, x, cone.leg_right, u)
            .ok_or_else(|| Error::NoFactorization("pullback square does not commute".into()))
    }
}

pub fn artin_gluing(f: &Functor) -> Result<Gluing, Error> {
    artin_gluing_guarded(f, SizeGuard::default())
}

pub fn artin_gluing_guarded(f: &Functor, guard: SizeGuard) -> Result<Gluing, Error> {
    let id = Functor::identity(f.target().clone());
    let comma = comma_guarded(&id, f, guard)?;
    let fibration = Fibration::new(comma.proj_right.clone());
    Ok(Gluing {
        functor: f.clone(),
        comma,
        fibration,
    })
}

/// First disagreement between the closed-form gluing lifts and brute force.
/// Requires `C` lex.
pub fn gluing_lift_failure(f: &Functor) -> Result<Option<GluingLiftFailure>, Error> {
    if !is_lex_category(f.target()) {
        return Err(Error::NotLex("target of the glued functor".into()));
    }
    let g = artin_gluing(f)?;
    let p = &g.fibration;
    let base = p.base();
    for u in base.morphisms() {
        for &x in p.objects_over(base.src(u)) {
            match g.cocartesian_lift_formula(u, x) {
                Some(l) if p.is_cocartesian_arrow(l) => {}
                _ => return Ok(Some(GluingLiftFailure::Cocartesian(u, x))),
            }
        }
        for &x in p.objects_over(base.tgt(u)) {
            match g.cartesian_lift_formula(u, x) {
                Ok(l) if p.is_cartesian_arrow(l) => {}
                _ => return Ok(Some(GluingLiftFailure::Cartesian(u, x))),
            }
        }
    }
    if let Some((a, b)) = p.cocartesian_lift_uniqueness_failure() {
        return Ok(Some(GluingLiftFailure::CocartesianUniqueness(a, b)));
    }
    if let Some((a, b)) = p.cartesian_lift_uniqueness_failure() {
        return Ok(Some(GluingLiftFailure::CartesianUniqueness(a, b)));
    }
    Ok(None)
}

pub fn verify_gluing_lift_formulas(f: &Functor) -> Result<bool, Error> {
    Ok(gluing_lift_failure(f)?.is_none())
}
