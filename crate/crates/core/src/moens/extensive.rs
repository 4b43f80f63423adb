use serde::{Deserialize, Serialize};

use super::sums::stability_violation;
use super::{
    describe, is_moens, require_lex_bicartesian, satisfies_bcc, Characterizations,
    PredicateVerdict, StabilityMode, Violation,
};
use crate::error::Error;
use crate::fibration::{DepSquare, Fibration};
use crate::fincat::{pullback_cone, terminal_object, Functor, Mor, Obj};

/// Fiberwise terminal objects `ζ_b` (lowest id), the base terminal `z`, the
/// canonical lifts `ν_b = P_!(!_b, ζ_b)` and their targets `ω'(b)`, all in
/// ambient ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalSection {
    pub terminal_base: Obj,
    pub zeta: Vec<Obj>,
    pub nu: Vec<Mor>,
    pub omega_prime: Vec<Obj>,
}

impl TerminalSection {
    /// `!_b: b -> z`.
    pub fn bang(&self, p: &Fibration, b: Obj) -> Mor {
        p.base().hom(b, self.terminal_base)[0]
    }

    /// `!^b_e: e -> ζ_b`, the unique arrow of the fiber over `b = π e`.
    pub fn to_zeta(&self, p: &Fibration, e: Obj) -> Mor {
        let b = p.over(e);
        p.total()
            .hom(e, self.zeta[b.idx()])
            .iter()
            .copied()
            .find(|&m| p.is_strictly_vertical(m))
            .expect("ζ_b is terminal in its fiber")
    }
}

pub fn terminal_section(p: &Fibration) -> Result<TerminalSection, Error> {
    let b = p.base();
    let z = terminal_object(b).ok_or_else(|| Error::NoTerminal("base category".into()))?;
    let mut zeta = Vec::with_capacity(b.num_objects());
    for o in b.objects() {
        let fib = p.fiber(o)?;
        let t = terminal_object(&fib.cat)
            .ok_or_else(|| Error::NoTerminal(format!("fiber over {}", b.obj_name(o))))?;
        zeta.push(fib.ambient_obj(t));
    }
    let mut nu = Vec::with_capacity(b.num_objects());
    for o in b.objects() {
        nu.push(p.push_lift(b.hom(o, z)[0], zeta[o.idx()])?);
    }
    let omega_prime = nu.iter().map(|&n| p.total().tgt(n)).collect();
    Ok(TerminalSection {
        terminal_base: z,
        zeta,
        nu,
        omega_prime,
    })
}

pub(crate) fn omega_with(p: &Fibration, ts: &TerminalSection) -> Result<Functor, Error> {
    let e = &**p.total();
    let z = ts.terminal_base;
    let fz = p.fiber(z)?;
    let idz = p.base().id(z);
    let kappa = |o: Obj| p.push_lift(ts.bang(p, p.over(o)), o);
    let mut obj_map = Vec::with_capacity(e.num_objects());
    for o in e.objects() {
        let t = e.tgt(kappa(o)?);
        obj_map.push(fz.local_obj(t).expect("lift of !_b lands over z"));
    }
    let mut mor_map = Vec::with_capacity(e.num_morphisms());
    for f in e.morphisms() {
        let (k1, k2) = (kappa(e.src(f))?, kappa(e.tgt(f))?);
        let w = p.fill_cocart(k1, e.compose(k2, f), idz)?;
        mor_map.push(fz.local_mor(w).expect("filler over id_z is in the fiber"));
    }
    Functor::new(p.total().clone(), fz.cat.clone(), obj_map, mor_map)
}

/// Terminal transport `ω: E -> P z`, `e ↦ (!_b)_! e`, on arrows by the filler
/// of `κ_{e'} ∘ f` against `κ_e`.
pub fn omega_functor(p: &Fibration) -> Result<Functor, Error> {
    let ts = terminal_section(p)?;
    omega_with(p, &ts)
}

/// Vertical sides, cocartesian bottom, and cocartesianness of the top differs
/// from pullbackness of the square.
pub(crate) fn extensivity_fails(p: &Fibration, s: &DepSquare) -> bool {
    let e = &**p.total();
    s.commutes(e)
        && p.is_cocartesian_arrow(s.bottom)
        && p.is_vertical(s.left)
        && p.is_vertical(s.right)
        && p.is_cocartesian_arrow(s.top) != s.is_pullback(e)
}

fn extensivity_violation(p: &Fibration) -> Option<Violation> {
    let e = &**p.total();
    for g in e.morphisms().filter(|&g| p.is_cocartesian_arrow(g)) {
        for &k in e.incoming(e.tgt(g)) {
            if !p.is_vertical(k) {
                continue;
            }
            for &f in e.incoming(e.src(g)) {
                if !p.is_vertical(f) {
                    continue;
                }
                let gf = e.compose(g, f);
                for &h in e.hom(e.src(f), e.src(k)) {
                    if e.compose(k, h) != gf {
                        continue;
                    }
                    let square = DepSquare {
                        top: h,
                        bottom: g,
                        left: f,
                        right: k,
                    };
                    if extensivity_fails(p, &square) {
                        return Some(Violation::Extensivity { square });
                    }
                }
            }
        }
    }
    None
}

/// A square `h: d -> e` over `ν_a: ζ_a -> ω'(a)` with left side `!^a_d` and
/// vertical right side, on which cocartesianness of `h` and pullbackness differ.
pub(crate) fn lawvere_fails(p: &Fibration, ts: &TerminalSection, s: &DepSquare) -> bool {
    let e = &**p.total();
    let a = p.over(e.src(s.left));
    s.commutes(e)
        && s.bottom == ts.nu[a.idx()]
        && s.left == ts.to_zeta(p, e.src(s.left))
        && p.is_vertical(s.right)
        && p.is_cocartesian_arrow(s.top) != s.is_pullback(e)
}

fn lawvere_violation(p: &Fibration, ts: &TerminalSection) -> Option<Violation> {
    let e = &**p.total();
    for a in p.base().objects() {
        let nu = ts.nu[a.idx()];
        for &d in p.objects_over(a) {
            let bang = ts.to_zeta(p, d);
            let lower = e.compose(nu, bang);
            for &k in e.incoming(ts.omega_prime[a.idx()]) {
                if !p.is_vertical(k) {
                    continue;
                }
                for &h in e.hom(d, e.src(k)) {
                    if e.compose(k, h) != lower {
                        continue;
                    }
                    let square = DepSquare {
                        top: h,
                        bottom: nu,
                        left: bang,
                        right: k,
                    };
                    if lawvere_fails(p, ts, &square) {
                        return Some(Violation::Lawvere { square });
                    }
                }
            }
        }
    }
    None
}

/// A non-invertible arrow of a fiber that `(!_a)_!` inverts.
pub(crate) fn reflects_fails(p: &Fibration, ts: &TerminalSection, m: Mor) -> Result<bool, Error> {
    let e = &**p.total();
    if !p.is_strictly_vertical(m) || e.is_iso(m) {
        return Ok(false);
    }
    let a = p.over(e.src(m));
    let push = p.transport_pushforward(ts.bang(p, a))?;
    let fa = p.fiber(a)?;
    let local = fa.local_mor(m).expect("strictly vertical");
    Ok(push.target().is_iso(push.mor(local)))
}

pub(crate) fn nu_pullback_fails(
    p: &Fibration,
    ts: &TerminalSection,
    a: Obj,
    k: Mor,
) -> Result<bool, Error> {
    let e = &**p.total();
    let nu = ts.nu[a.idx()];
    if !p.is_vertical(k) || e.tgt(k) != e.tgt(nu) {
        return Ok(false);
    }
    let cone = pullback_cone(e, nu, k).ok_or_else(|| {
        Error::MissingPullback(format!("({}, {})", e.mor_name(nu), e.mor_name(k)))
    })?;
    Ok(!p.is_cocartesian_arrow(cone.leg_right))
}

fn transport_violation(p: &Fibration, ts: &TerminalSection) -> Result<Option<Violation>, Error> {
    let e = &**p.total();
    for a in p.base().objects() {
        let fa = p.fiber(a)?;
        for m in fa.cat.morphisms() {
            let arrow = fa.ambient_mor(m);
            if reflects_fails(p, ts, arrow)? {
                return Ok(Some(Violation::ReflectsIsos { arrow }));
            }
        }
        for &k in e.incoming(ts.omega_prime[a.idx()]) {
            if nu_pullback_fails(p, ts, a, k)? {
                return Ok(Some(Violation::PulledBackTerminalLift { base: a, vertical: k }));
            }
        }
    }
    Ok(None)
}

/// The four equivalent forms of extensivity over a lex base: (1) Moens,
/// (2) internal extensivity, (3) Lawvere extensivity, (4) terminal transport
/// reflects isomorphisms and pulled back terminal lifts are cocartesian.
pub fn extensivity_characterizations(
    p: &Fibration,
    mode: StabilityMode,
) -> Result<Characterizations, Error> {
    require_lex_bicartesian(p)?;
    match mode {
        StabilityMode::PreMoens => {
            let bcc = satisfies_bcc(p)?;
            if !bcc.holds {
                return Err(Error::NotBC(describe(&bcc)));
            }
        }
        StabilityMode::VerticalStability => {
            if stability_violation(p, true)?.is_some() {
                return Err(Error::Precondition(
                    "cocartesian arrows are not stable along vertical arrows".into(),
                ));
            }
        }
    }
    let ts = terminal_section(p)?;
    Ok(Characterizations {
        mode,
        verdicts: vec![
            is_moens(p)?,
            PredicateVerdict::from_violation("internal_extensivity", p, extensivity_violation(p)),
            PredicateVerdict::from_violation("lawvere_extensivity", p, lawvere_violation(p, &ts)),
            PredicateVerdict::from_violation(
                "terminal_transport",
                p,
                transport_violation(p, &ts)?,
            ),
        ],
    })
}
