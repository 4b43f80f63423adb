//! The Moens correspondence, checked per instance.
//!
//! `Φ` sends a (generalized) Moens fibration `P` to `b ↦ ω'(b)`, a functor from
//! the base into the fiber over the terminal object. `Ψ` sends a functor to its
//! Artin gluing. Both round trips are materialized as honest functors and
//! natural transformations so that the evidence can be re-verified.

use serde::{Deserialize, Serialize};

use crate::constructions::{artin_gluing, Gluing};
use crate::error::Error;
use crate::fibration::{zeta_functor, Fibration};
use crate::fincat::{
    is_lex_category, is_lex_functor, natural_iso, preserves_terminal, terminal_object,
    universal_cones, Cone, Functor, Mor, NatTrans, Obj,
};
use crate::moens::{describe, is_generalized_moens, is_moens, omega_with, terminal_section};

/// Which version of the theorem is checked: lex functors and Moens fibrations,
/// or terminal-preserving functors and generalized Moens fibrations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremMode {
    Moens,
    Generalized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `Ψ(Φ(P)) ≃ P` over the base.
    PsiPhi,
    /// `Φ(Ψ(F)) ≅ F`.
    PhiPsi,
}

/// Two functors that must agree on the nose.
#[derive(Clone, Debug)]
pub struct FunctorEquation {
    pub name: String,
    pub lhs: Functor,
    pub rhs: Functor,
}

impl FunctorEquation {
    pub fn holds(&self) -> bool {
        self.lhs.same_as(&self.rhs)
    }
}

/// Evidence of one round trip.
#[derive(Clone, Debug)]
pub struct RoundTripReport {
    pub direction: Direction,
    pub mode: TheoremMode,
    /// `Φ(P)` is lex (Moens mode) or preserves the terminal (generalized mode).
    pub phi_exact: bool,
    pub functors: Vec<(String, Functor)>,
    pub isos: Vec<(String, NatTrans)>,
    pub equations: Vec<FunctorEquation>,
    pub verdict: bool,
}

impl RoundTripReport {
    fn assemble(
        direction: Direction,
        mode: TheoremMode,
        phi_exact: bool,
        functors: Vec<(String, Functor)>,
        isos: Vec<(String, NatTrans)>,
        equations: Vec<FunctorEquation>,
    ) -> RoundTripReport {
        let verdict = phi_exact
            && isos.iter().all(|(_, a)| natural_iso(a))
            && equations.iter().all(FunctorEquation::holds);
        RoundTripReport {
            direction,
            mode,
            phi_exact,
            functors,
            isos,
            equations,
            verdict,
        }
    }

    /// Re-verifies every functor, transformation and equation from scratch and
    /// compares with the stored verdict.
    pub fn recheck(&self) -> bool {
        let functors_ok = self.functors.iter().all(|(_, f)| f.check().is_ok());
        let evidence = self.phi_exact
            && self.isos.iter().all(|(_, a)| natural_iso(a))
            && self.equations.iter().all(FunctorEquation::holds);
        functors_ok && evidence == self.verdict
    }

    pub fn summary(&self) -> RoundTripSummary {
        RoundTripSummary {
            direction: self.direction,
            mode: self.mode,
            phi_exact: self.phi_exact,
            functors: self
                .functors
                .iter()
                .map(|(name, f)| FunctorSummary {
                    name: name.clone(),
                    source_objects: f.source().num_objects(),
                    target_objects: f.target().num_objects(),
                    obj_map: f.obj_map().to_vec(),
                    mor_map: f.mor_map().to_vec(),
                })
                .collect(),
            isos: self
                .isos
                .iter()
                .map(|(name, a)| IsoSummary {
                    name: name.clone(),
                    components: a.components().to_vec(),
                    natural: a.is_natural(),
                    invertible: a.non_iso_component().is_none(),
                })
                .collect(),
            equations: self
                .equations
                .iter()
                .map(|q| EquationSummary {
                    name: q.name.clone(),
                    holds: q.holds(),
                })
                .collect(),
            verdict: self.verdict,
        }
    }
}

/// Serializable digest of a [`RoundTripReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTripSummary {
    pub direction: Direction,
    pub mode: TheoremMode,
    pub phi_exact: bool,
    pub functors: Vec<FunctorSummary>,
    pub isos: Vec<IsoSummary>,
    pub equations: Vec<EquationSummary>,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorSummary {
    pub name: String,
    pub source_objects: usize,
    pub target_objects: usize,
    pub obj_map: Vec<Obj>,
    pub mor_map: Vec<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoSummary {
    pub name: String,
    pub components: Vec<Mor>,
    pub natural: bool,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSummary {
    pub name: String,
    pub holds: bool,
}

fn require_mode(p: &Fibration, mode: TheoremMode) -> Result<(), Error> {
    match mode {
        TheoremMode::Moens => {
            let v = is_moens(p)?;
            if !v.holds {
                return Err(Error::NotMoens(describe(&v)));
            }
        }
        TheoremMode::Generalized => {
            let v = is_generalized_moens(p)?;
            if !v.holds {
                return Err(Error::NotGenMoens(describe(&v)));
            }
        }
    }
    Ok(())
}

/// `Φ(P) = ω ∘ ζ` without checking that `P` is (generalized) Moens.
pub fn phi_unchecked(p: &Fibration) -> Result<Functor, Error> {
    let ts = terminal_section(p)?;
    zeta_functor(p)?.then(&omega_with(p, &ts)?)
}

/// `Φ(P): B -> P z`, `b ↦ ω'(b)`.
pub fn phi(p: &Fibration, mode: TheoremMode) -> Result<Functor, Error> {
    require_mode(p, mode)?;
    phi_unchecked(p)
}

fn phi_exact(f: &Functor, mode: TheoremMode) -> Result<bool, Error> {
    match mode {
        TheoremMode::Moens => is_lex_functor(f),
        TheoremMode::Generalized => preserves_terminal(f),
    }
}

/// `Ψ(F) = gl(F)`, after checking the hypotheses of the chosen mode.
pub fn psi(f: &Functor, mode: TheoremMode) -> Result<Gluing, Error> {
    if !is_lex_category(f.source()) {
        return Err(Error::NotLex("source category".into()));
    }
    if !is_lex_category(f.target()) {
        return Err(Error::NotLex("target category".into()));
    }
    match mode {
        TheoremMode::Moens => {
            if !is_lex_functor(f)? {
                return Err(Error::NotLex("functor".into()));
            }
        }
        TheoremMode::Generalized => {
            if !preserves_terminal(f)? {
                return Err(Error::NotTerminalPreserving("functor".into()));
            }
        }
    }
    artin_gluing(f)
}

fn not_fibered(what: &str) -> Error {
    Error::NotFibered(what.to_string())
}

/// `P ≃ Ψ(Φ(P))`: builds `φ: E -> gl(Φ P)` with `φ(e) = (ω e, π e, μ_e)` and
/// `ψ` backwards via the pullback `ζ_b ×_{ω'(b)} c`, then checks that both
/// commute with the projections and both composites are isomorphic to the
/// identities.
pub fn roundtrip_psi_phi(p: &Fibration, mode: TheoremMode) -> Result<RoundTripReport, Error> {
    require_mode(p, mode)?;
    let (e, base) = (p.total(), p.base());
    let ts = terminal_section(p)?;
    let omega = omega_with(p, &ts)?;
    let zeta = zeta_functor(p)?;
    let f = zeta.then(&omega)?;
    let exact = phi_exact(&f, mode)?;
    let g = artin_gluing(&f)?;
    let gc = &g.comma;
    let z = ts.terminal_base;
    let fz = p.fiber(z)?;
    let idz = base.id(z);

    let kappa: Vec<Mor> = e
        .objects()
        .map(|o| p.push_lift(ts.bang(p, p.over(o)), o))
        .collect::<Result<_, _>>()?;

    let mut phi_obj = Vec::with_capacity(e.num_objects());
    for o in e.objects() {
        let b = p.over(o);
        let lower = e.compose(ts.nu[b.idx()], ts.to_zeta(p, o));
        let mu = p.fill_cocart(kappa[o.idx()], lower, idz)?;
        let mu = fz.local_mor(mu).ok_or_else(|| not_fibered("μ is not vertical"))?;
        let x = gc
            .object(omega.ob(o), b, mu)
            .ok_or_else(|| not_fibered("φ(e) is not an object of the gluing"))?;
        phi_obj.push(x);
    }
    let mut phi_mor = Vec::with_capacity(e.num_morphisms());
    for m in e.morphisms() {
        let x = gc
            .morphism(phi_obj[e.src(m).idx()], phi_obj[e.tgt(m).idx()], omega.mor(m), p.pi(m))
            .ok_or_else(|| not_fibered("φ(f) is not a square"))?;
        phi_mor.push(x);
    }
    let phi_f = Functor::new(e.clone(), gc.cat.clone(), phi_obj.clone(), phi_mor)?;

    let mut legs: Vec<Cone> = Vec::with_capacity(gc.cat.num_objects());
    for x in gc.cat.objects() {
        let (_, b, w) = gc.objects[x.idx()];
        let (nu, wa) = (ts.nu[b.idx()], fz.ambient_mor(w));
        let cone = universal_cones(e, nu, wa)
            .into_iter()
            .find(|k| p.over(k.apex) == b && base.is_identity(p.pi(k.leg_left)))
            .ok_or_else(|| {
                Error::MissingPullback(format!("({}, {})", e.mor_name(nu), e.mor_name(wa)))
            })?;
        legs.push(cone);
    }
    let mut psi_mor = Vec::with_capacity(gc.cat.num_morphisms());
    for m in gc.cat.morphisms() {
        let (alpha, beta) = gc.morphisms[m.idx()];
        let (k1, k2) = (legs[gc.cat.src(m).idx()], legs[gc.cat.tgt(m).idx()]);
        let l = e.compose(zeta.mor(beta), k1.leg_left);
        let r = e.compose(fz.ambient_mor(alpha), k1.leg_right);
        let y = e
            .hom(k1.apex, k2.apex)
            .iter()
            .copied()
            .find(|&y| e.compose(k2.leg_left, y) == l && e.compose(k2.leg_right, y) == r)
            .ok_or_else(|| not_fibered("ψ(α, β) has no mediator"))?;
        psi_mor.push(y);
    }
    let psi_obj: Vec<Obj> = legs.iter().map(|k| k.apex).collect();
    let psi_f = Functor::new(gc.cat.clone(), e.clone(), psi_obj.clone(), psi_mor)?;

    let mut theta = Vec::with_capacity(e.num_objects());
    for o in e.objects() {
        let k = legs[phi_obj[o.idx()].idx()];
        let bang = ts.to_zeta(p, o);
        let m = e
            .hom(o, k.apex)
            .iter()
            .copied()
            .find(|&m| e.compose(k.leg_left, m) == bang && e.compose(k.leg_right, m) == kappa[o.idx()])
            .ok_or_else(|| not_fibered("no comparison e -> ψφe"))?;
        theta.push(m);
    }
    let theta = NatTrans::new(Functor::identity(e.clone()), phi_f.then(&psi_f)?, theta)?;

    let mut counit = Vec::with_capacity(gc.cat.num_objects());
    for x in gc.cat.objects() {
        let y = psi_obj[x.idx()];
        let (_, b, _) = gc.objects[x.idx()];
        let sigma = p.fill_cocart(kappa[y.idx()], legs[x.idx()].leg_right, idz)?;
        let sigma = fz.local_mor(sigma).ok_or_else(|| not_fibered("σ is not vertical"))?;
        let c = gc
            .morphism(phi_obj[y.idx()], x, sigma, base.id(b))
            .ok_or_else(|| not_fibered("φψX -> X is not a square"))?;
        counit.push(c);
    }
    let counit = NatTrans::new(psi_f.then(&phi_f)?, Functor::identity(gc.cat.clone()), counit)?;

    let equations = vec![
        FunctorEquation {
            name: "projection after phi".into(),
            lhs: phi_f.then(g.fibration.proj())?,
            rhs: p.proj().clone(),
        },
        FunctorEquation {
            name: "projection after psi".into(),
            lhs: psi_f.then(p.proj())?,
            rhs: g.fibration.proj().clone(),
        },
    ];
    Ok(RoundTripReport::assemble(
        Direction::PsiPhi,
        mode,
        exact,
        vec![
            ("Phi(P)".into(), f),
            ("phi".into(), phi_f),
            ("psi".into(), psi_f),
        ],
        vec![("id => psi.phi".into(), theta), ("phi.psi => id".into(), counit)],
        equations,
    ))
}

/// `Φ(Ψ(F)) ≅ F`: identifies the fiber of `gl(F)` over the terminal `z` with
/// `C` via the domain projection and its section `c ↦ (c, z, !_c)`, then
/// compares `dom ∘ Φ(gl F)` with `F`.
pub fn roundtrip_phi_psi(f: &Functor, mode: TheoremMode) -> Result<RoundTripReport, Error> {
    let g = psi(f, mode)?;
    let p = &g.fibration;
    let (gc, c, b) = (&g.comma, g.c(), f.source());
    let z = terminal_object(b).ok_or_else(|| Error::NoTerminal("base category".into()))?;
    let fz = p.fiber(z)?;
    let phi_f = phi_unchecked(p)?;
    let exact = phi_exact(&phi_f, mode)?;

    let dom = Functor::from_fn(
        fz.cat.clone(),
        c.clone(),
        |x| gc.objects[fz.ambient_obj(x).idx()].0,
        |m| gc.morphisms[fz.ambient_mor(m).idx()].0,
    )?;
    let fzz = f.ob(z);
    let mut sec_obj = Vec::with_capacity(c.num_objects());
    for o in c.objects() {
        let bang = *c
            .hom(o, fzz)
            .first()
            .ok_or_else(|| Error::NotTerminalPreserving("F z is not terminal".into()))?;
        let x = gc.object(o, z, bang).expect("(c, z, !_c) is an object of the gluing");
        sec_obj.push(fz.local_obj(x).expect("lies over z"));
    }
    let mut sec_mor = Vec::with_capacity(c.num_morphisms());
    for m in c.morphisms() {
        let (x, y) = (sec_obj[c.src(m).idx()], sec_obj[c.tgt(m).idx()]);
        let sq = gc
            .morphism(fz.ambient_obj(x), fz.ambient_obj(y), m, b.id(z))
            .ok_or_else(|| Error::NotTerminalPreserving("F z is not terminal".into()))?;
        sec_mor.push(fz.local_mor(sq).expect("vertical over z"));
    }
    let section = Functor::new(c.clone(), fz.cat.clone(), sec_obj, sec_mor)?;

    let ts = terminal_section(p)?;
    let gf = phi_f.then(&dom)?;
    let mut comps = Vec::with_capacity(b.num_objects());
    for o in b.objects() {
        let (alpha, _) = gc.morphisms[ts.nu[o.idx()].idx()];
        let (_, _, w0) = gc.objects[ts.zeta[o.idx()].idx()];
        let inv = c.inverse(alpha).ok_or_else(|| {
            Error::Precondition("the canonical lift of !_b does not have an invertible top".into())
        })?;
        comps.push(c.compose(w0, inv));
    }
    let cmp = NatTrans::new(gf, f.clone(), comps)?;

    let equations = vec![
        FunctorEquation {
            name: "dom after section".into(),
            lhs: section.then(&dom)?,
            rhs: Functor::identity(c.clone()),
        },
        FunctorEquation {
            name: "section after dom".into(),
            lhs: dom.then(&section)?,
            rhs: Functor::identity(fz.cat.clone()),
        },
    ];
    Ok(RoundTripReport::assemble(
        Direction::PhiPsi,
        mode,
        exact,
        vec![
            ("Phi(gl F)".into(), phi_f),
            ("dom".into(), dom),
            ("section".into(), section),
        ],
        vec![("dom.Phi(gl F) => F".into(), cmp)],
        equations,
    ))
}
