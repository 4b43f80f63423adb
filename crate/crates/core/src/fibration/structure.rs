use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fincat::{
    is_lex_category, is_lex_functor, is_terminal, preserves_pullbacks, pullback_cone,
    pullback_failure, terminal_object, FinCategory, Functor, Mor, Obj,
};

use super::Fibration;

/// A commuting square in the total category:
///
/// ```text
///  d' --top--> e'
///  |            |
/// left        right
///  v            v
///  d --bottom-> e
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DepSquare {
    pub top: Mor,
    pub bottom: Mor,
    pub left: Mor,
    pub right: Mor,
}

impl DepSquare {
    pub fn new(e: &FinCategory, top: Mor, bottom: Mor, left: Mor, right: Mor) -> Result<Self, Error> {
        let sq = DepSquare {
            top,
            bottom,
            left,
            right,
        };
        if sq.commutes(e) {
            Ok(sq)
        } else {
            Err(Error::Precondition("square does not commute".into()))
        }
    }

    pub fn commutes(&self, e: &FinCategory) -> bool {
        e.src(self.top) == e.src(self.left)
            && e.tgt(self.top) == e.src(self.right)
            && e.tgt(self.left) == e.src(self.bottom)
            && e.tgt(self.bottom) == e.tgt(self.right)
            && e.compose(self.right, self.top) == e.compose(self.bottom, self.left)
    }

    /// The image square in the base.
    pub fn base_square(&self, p: &Fibration) -> DepSquare {
        DepSquare {
            top: p.pi(self.top),
            bottom: p.pi(self.bottom),
            left: p.pi(self.left),
            right: p.pi(self.right),
        }
    }

    /// Whether the square is a pullback of `(bottom, right)`.
    pub fn is_pullback(&self, e: &FinCategory) -> bool {
        crate::fincat::is_pullback(e, self.bottom, self.right, self.left, self.top)
    }
}

/// Both sides of the terminal-object and pullback transfer equivalences for a
/// cartesian fibration over a lex base, plus the lexness of `ζ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexnessReport {
    /// `E` has a terminal object and `π` preserves it.
    pub terminal_total: bool,
    /// Every fiber has a terminal object and every `u^*` preserves it.
    pub terminal_fibers: bool,
    /// `E` has all pullbacks and `π` preserves them.
    pub pullbacks_total: bool,
    /// Every fiber has all pullbacks and every `u^*` preserves them.
    pub pullbacks_fibers: bool,
    /// `ζ: B -> E` is lex; evaluated when both total-side clauses hold.
    pub zeta_lex: Option<bool>,
    /// `⟨z, ζ_z⟩` is terminal in `E`; evaluated when fibers have terminals.
    pub terminal_totality: Option<bool>,
}

impl LexnessReport {
    pub fn terminal_agree(&self) -> bool {
        self.terminal_total == self.terminal_fibers
    }

    pub fn pullbacks_agree(&self) -> bool {
        self.pullbacks_total == self.pullbacks_fibers
    }

    /// Total category lex and `π` lex.
    pub fn is_lex(&self) -> bool {
        self.terminal_total && self.pullbacks_total
    }

    pub fn consistent(&self) -> bool {
        self.terminal_agree()
            && self.pullbacks_agree()
            && self.zeta_lex != Some(false)
            && self.terminal_totality != Some(false)
    }
}

/// `ζ: B -> E`, `b ↦ ζ_b` (lowest terminal of the fiber), `u ↦` the unique
/// arrow `ζ_a -> ζ_b` over `u`.
pub fn zeta_functor(p: &Fibration) -> Result<Functor, Error> {
    let (e, b) = (p.total(), p.base());
    let mut obj_map = Vec::with_capacity(b.num_objects());
    for o in b.objects() {
        let fib = p.fiber_at(o);
        let z = terminal_object(&fib.cat).ok_or_else(|| {
            Error::NoTerminal(format!("fiber over {}", b.obj_name(o)))
        })?;
        obj_map.push(fib.ambient_obj(z));
    }
    let mut mor_map = Vec::with_capacity(b.num_morphisms());
    for u in b.morphisms() {
        let (za, zb) = (obj_map[b.src(u).idx()], obj_map[b.tgt(u).idx()]);
        let over: Vec<Mor> = e
            .hom(za, zb)
            .iter()
            .copied()
            .filter(|&m| p.pi(m) == u)
            .collect();
        if over.len() != 1 {
            return Err(Error::Precondition(format!(
                "{} arrows between fiber terminals over {}",
                over.len(),
                b.mor_name(u)
            )));
        }
        mor_map.push(over[0]);
    }
    Functor::new(b.clone(), e.clone(), obj_map, mor_map)
}

fn fibers_have_terminals(p: &Fibration) -> bool {
    p.base()
        .objects()
        .all(|o| terminal_object(&p.fiber_at(o).cat).is_some())
}

/// Evaluates both sides of each transfer equivalence independently.
/// Requires a lex base and a cartesian fibration.
pub fn lexness_transfer(p: &Fibration) -> Result<LexnessReport, Error> {
    let (e, b) = (p.total(), p.base());
    if !is_lex_category(b) {
        return Err(Error::NotLex("base category".into()));
    }
    if let Some((u, x)) = p.missing_cartesian_lift() {
        return Err(Error::MissingLift {
            arrow: b.mor_name(u).to_string(),
            object: e.obj_name(x).to_string(),
        });
    }
    let terminal_total = match terminal_object(e) {
        Some(t) => is_terminal(b, p.over(t)),
        None => false,
    };
    let mut reindexings = Vec::with_capacity(b.num_morphisms());
    for u in b.morphisms() {
        reindexings.push(p.transport_pullback(u)?);
    }
    let terminal_fibers = fibers_have_terminals(p)
        && reindexings.iter().all(|r| {
            let z = terminal_object(r.source()).expect("checked above");
            is_terminal(r.target(), r.ob(z))
        });
    let pullbacks_total = pullback_failure(e).is_none() && preserves_pullbacks(p.proj())?;
    let pullbacks_fibers = b
        .objects()
        .all(|o| pullback_failure(&p.fiber_at(o).cat).is_none())
        && reindexings
            .iter()
            .all(|r| preserves_pullbacks(r).unwrap_or(false));
    let zeta_lex = if terminal_total && pullbacks_total {
        Some(match zeta_functor(p) {
            Ok(z) => is_lex_functor(&z)?,
            Err(_) => false,
        })
    } else {
        None
    };
    let terminal_totality = if fibers_have_terminals(p) {
        let z = terminal_object(b).expect("lex base");
        let fz = &p.fiber_at(z).cat;
        let zz = p.fiber_at(z).ambient_obj(terminal_object(fz).expect("checked"));
        Some(is_terminal(e, zz))
    } else {
        None
    };
    Ok(LexnessReport {
        terminal_total,
        terminal_fibers,
        pullbacks_total,
        pullbacks_fibers,
        zeta_lex,
        terminal_totality,
    })
}

/// First `(f, g)` with `f` vertical whose existing pullback along `g` has a
/// non-vertical leg.
pub fn vertical_pullback_stability_failure(p: &Fibration) -> Option<(Mor, Mor)> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_vertical(f)) {
        for &g in e.incoming(e.tgt(f)) {
            if let Some(c) = pullback_cone(e, f, g) {
                if !p.is_vertical(c.leg_right) {
                    return Some((f, g));
                }
            }
        }
    }
    None
}

pub fn vertical_pullback_stability(p: &Fibration) -> bool {
    vertical_pullback_stability_failure(p).is_none()
}

/// First `(f, g)` with `f` cartesian whose existing pullback along `g` has a
/// non-cartesian leg.
pub fn cartesian_pullback_stability_failure(p: &Fibration) -> Option<(Mor, Mor)> {
    let e = &**p.total();
    for f in e.morphisms().filter(|&f| p.is_cartesian_arrow(f)) {
        for &g in e.incoming(e.tgt(f)) {
            if let Some(c) = pullback_cone(e, f, g) {
                if !p.is_cartesian_arrow(c.leg_right) {
                    return Some((f, g));
                }
            }
        }
    }
    None
}

pub fn cartesian_pullback_stability(p: &Fibration) -> bool {
    cartesian_pullback_stability_failure(p).is_none()
}

// every square f∘g' = g∘f' with f' cocartesian has a diagonal h
fn has_rlp_against_cocartesian(p: &Fibration, f: Mor) -> bool {
    let e = &**p.total();
    let (x, y) = (e.src(f), e.tgt(f));
    for fp in e.morphisms().filter(|&m| p.is_cocartesian_arrow(m)) {
        let (xp, yp) = (e.src(fp), e.tgt(fp));
        for &g in e.hom(yp, y) {
            let gfp = e.compose(g, fp);
            for &gp in e.hom(xp, x) {
                if e.compose(f, gp) != gfp {
                    continue;
                }
                let lifted = e
                    .hom(yp, x)
                    .iter()
                    .any(|&h| e.compose(h, fp) == gp && e.compose(f, h) == g);
                if !lifted {
                    return false;
                }
            }
        }
    }
    true
}

/// First arrow where "vertical" and "right lifting against every cocartesian
/// arrow" disagree.
pub fn vertical_rlp_failure(p: &Fibration) -> Option<Mor> {
    p.total()
        .morphisms()
        .find(|&f| p.is_vertical(f) != has_rlp_against_cocartesian(p, f))
}

pub fn vertical_rlp(p: &Fibration) -> bool {
    vertical_rlp_failure(p).is_none()
}

/// First pair `(f', f)` with `f` vertical, `f'` a retract of `f`, and `f'` not
/// vertical.
pub fn vertical_retracts_failure(p: &Fibration) -> Option<(Mor, Mor)> {
    let e = &**p.total();
    let sections = |a: Obj, b: Obj| -> Vec<(Mor, Mor)> {
        let mut out = Vec::new();
        for &s in e.hom(a, b) {
            for &r in e.hom(b, a) {
                if e.compose(r, s) == e.id(a) {
                    out.push((s, r));
                }
            }
        }
        out
    };
    for fp in e.morphisms().filter(|&m| !p.is_vertical(m)) {
        let (xp, yp) = (e.src(fp), e.tgt(fp));
        for f in e.morphisms().filter(|&m| p.is_vertical(m)) {
            let (x, y) = (e.src(f), e.tgt(f));
            let sx = sections(xp, x);
            if sx.is_empty() {
                continue;
            }
            let sy = sections(yp, y);
            for &(s1, r1) in &sx {
                for &(s2, r2) in &sy {
                    if e.compose(f, s1) == e.compose(s2, fp) && e.compose(fp, r1) == e.compose(r2, f)
                    {
                        return Some((fp, f));
                    }
                }
            }
        }
    }
    None
}

pub fn vertical_retracts(p: &Fibration) -> bool {
    vertical_retracts_failure(p).is_none()
}

fn check_fibered(p: &Fibration, q: &Fibration, phi: &Functor) -> Result<(), Error> {
    if !phi.source().same_as(p.total()) || !phi.target().same_as(q.total()) {
        return Err(Error::NotFibered("functor is not between the total categories".into()));
    }
    if !p.base().same_as(q.base()) {
        return Err(Error::NotFibered("bases differ".into()));
    }
    let e = p.total();
    for f in e.morphisms() {
        if q.pi(phi.mor(f)) != p.pi(f) {
            return Err(Error::NotFibered(format!(
                "projection of the image of {} differs",
                e.mor_name(f)
            )));
        }
    }
    Ok(())
}

/// First `P`-cocartesian arrow not sent to a `Q`-cocartesian arrow.
pub fn cocartesian_functor_failure(
    p: &Fibration,
    q: &Fibration,
    phi: &Functor,
) -> Result<Option<Mor>, Error> {
    check_fibered(p, q, phi)?;
    Ok(p.total()
        .morphisms()
        .find(|&f| p.is_cocartesian_arrow(f) && !q.is_cocartesian_arrow(phi.mor(f))))
}

pub fn is_cocartesian_functor(p: &Fibration, q: &Fibration, phi: &Functor) -> Result<bool, Error> {
    Ok(cocartesian_functor_failure(p, q, phi)?.is_none())
}

pub fn cartesian_functor_failure(
    p: &Fibration,
    q: &Fibration,
    phi: &Functor,
) -> Result<Option<Mor>, Error> {
    check_fibered(p, q, phi)?;
    Ok(p.total()
        .morphisms()
        .find(|&f| p.is_cartesian_arrow(f) && !q.is_cartesian_arrow(phi.mor(f))))
}

pub fn is_cartesian_functor(p: &Fibration, q: &Fibration, phi: &Functor) -> Result<bool, Error> {
    Ok(cartesian_functor_failure(p, q, phi)?.is_none())
}
