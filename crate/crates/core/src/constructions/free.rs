use crate::error::Error;
use crate::fibration::Fibration;
use crate::fincat::{comma_guarded, pullback_cone, Comma, Functor, Mor, Obj, SizeGuard};

/// The free cocartesian fibration `L(π) = π ↓ B -> B` with objects
/// `(e, b, v: π e -> b)`.
#[derive(Clone, Debug)]
pub struct FreeCocartesian {
    pub comma: Comma,
    pub fibration: Fibration,
}

impl FreeCocartesian {
    /// `ι(e) = (e, π e, id)`.
    pub fn unit_object(&self, pi: &Functor, e: Obj) -> Obj {
        let b = pi.target();
        let pe = pi.ob(e);
        self.comma.object(e, pe, b.id(pe)).expect("unit object exists")
    }

    /// Closed-form cocartesian lift of `u: b -> b'` at `(e, b, v)`: the arrow
    /// `(id_e, u)` into `(e, b', u∘v)`.
    pub fn cocartesian_lift_formula(&self, u: Mor, x: Obj) -> Option<Mor> {
        let (e, b, v) = self.comma.objects[x.idx()];
        let base = self.fibration.base();
        if base.src(u) != b {
            return None;
        }
        let e_cat = self.comma.proj_left.target();
        let y = self.comma.object(e, base.tgt(u), base.compose(u, v))?;
        self.comma.morphism(x, y, e_cat.id(e), u)
    }

    /// Cartesian lift of `u: a -> b` at `(e, b, v: π e -> b)`: with `u^*v`, `v^*u`
    /// the legs of the pullback of `(u, v)`, the arrow `(P^*(v^*u, e), u)` out of
    /// `(src P^*(v^*u, e), a, u^*v)`. Needs `π` cartesian along `v^*u`.
    pub fn cartesian_lift_formula(&self, pi: &Fibration, u: Mor, x: Obj) -> Result<Mor, Error> {
        let (e, b, v) = self.comma.objects[x.idx()];
        let base = self.fibration.base();
        if base.tgt(u) != b {
            return Err(Error::NoFactorization("lift target is not over the codomain".into()));
        }
        let cone = pullback_cone(base, u, v).ok_or_else(|| {
            Error::MissingPullback(format!("({}, {})", base.mor_name(u), base.mor_name(v)))
        })?;
        let (u_star_v, v_star_u) = (cone.leg_left, cone.leg_right);
        let lift = pi.cartesian_lift(v_star_u, e).ok_or_else(|| Error::MissingLift {
            arrow: base.mor_name(v_star_u).to_string(),
            object: pi.total().obj_name(e).to_string(),
        })?;
        let e_star = pi.total().src(lift);
        let src = self
            .comma
            .object(e_star, base.src(u), u_star_v)
            .expect("pullback leg is typed");
        self.comma
            .morphism(src, x, lift, u)
            .ok_or_else(|| Error::NoFactorization("square does not commute".into()))
    }
}

pub fn free_cocartesian(pi: &Functor) -> Result<FreeCocartesian, Error> {
    free_cocartesian_guarded(pi, SizeGuard::default())
}

pub fn free_cocartesian_guarded(pi: &Functor, guard: SizeGuard) -> Result<FreeCocartesian, Error> {
    let id = Functor::identity(pi.target().clone());
    let comma = comma_guarded(pi, &id, guard)?;
    let fibration = Fibration::new(comma.proj_right.clone());
    Ok(FreeCocartesian { comma, fibration })
}
