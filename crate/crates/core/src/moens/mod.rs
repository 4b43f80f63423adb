//! The Moens predicate suite: Beck-Chevalley conditions, stable and disjoint
//! sums with their characterizations, terminal transport, generalized Moens
//! fibrations and Zawadowski's conditions.
//!
//! Every predicate is decided by exhaustion. A failing verdict carries a
//! [`Violation`] that can be re-checked against the fibration on its own.

mod bcc;
mod consequences;
mod extensive;
mod sums;
mod witness;
mod zawadowski;

use serde::{Deserialize, Serialize};

pub use bcc::{bcc_via_transport, gluing_bcc_iff_pb_preserving, satisfies_bcc, satisfies_dual_bcc};
pub use consequences::{moens_consequences, MoensConsequences};
pub use extensive::{
    extensivity_characterizations, omega_functor, terminal_section, TerminalSection,
};
pub use sums::{
    disjointness_characterizations, has_disjoint_sums, has_stable_sums, is_generalized_moens,
    is_moens, is_pre_moens,
};
pub use witness::{ArrowData, Violation, Witness};
pub(crate) use extensive::omega_with;
pub use zawadowski::{zawadowski_conditions, zawadowski_equiv_gen_moens};

use crate::error::Error;
use crate::fibration::{lexness_transfer, Fibration};
use crate::fincat::is_lex_category;

/// Hypotheses under which the characterization suites are evaluated.
///
/// `PreMoens` asks for the full hypotheses (lex Beck-Chevalley with stable
/// sums for disjointness, lex Beck-Chevalley for extensivity).
/// `VerticalStability` only asks for a lex bifibration whose cocartesian arrows
/// are stable under pullback along vertical arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityMode {
    PreMoens,
    VerticalStability,
}

/// Outcome of one predicate. `witness` is present exactly when `holds` is false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateVerdict {
    pub name: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PredicateVerdict {
    pub fn pass(name: &str) -> PredicateVerdict {
        PredicateVerdict {
            name: name.to_string(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(name: &str, p: &Fibration, violation: Violation) -> PredicateVerdict {
        PredicateVerdict {
            name: name.to_string(),
            holds: false,
            witness: Some(Witness::new(p, violation)),
        }
    }

    pub fn from_violation(name: &str, p: &Fibration, violation: Option<Violation>) -> PredicateVerdict {
        match violation {
            None => PredicateVerdict::pass(name),
            Some(v) => PredicateVerdict::fail(name, p, v),
        }
    }

    /// The first failing verdict of `parts` under a new name, or a pass.
    pub(crate) fn all_of(name: &str, parts: Vec<PredicateVerdict>) -> PredicateVerdict {
        match parts.into_iter().find(|v| !v.holds) {
            None => PredicateVerdict::pass(name),
            Some(v) => PredicateVerdict {
                name: name.to_string(),
                holds: false,
                witness: v.witness,
            },
        }
    }

    /// Whether the verdict is internally consistent: a pass has no witness and
    /// a failure's witness is a genuine violation in `p`.
    pub fn recheck(&self, p: &Fibration) -> Result<bool, Error> {
        match (&self.witness, self.holds) {
            (None, true) => Ok(true),
            (Some(w), false) => w.violation.recheck(p),
            _ => Ok(false),
        }
    }
}

/// The four verdicts of a characterization suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Characterizations {
    pub mode: StabilityMode,
    pub verdicts: Vec<PredicateVerdict>,
}

impl Characterizations {
    /// All four verdicts coincide.
    pub fn agree(&self) -> bool {
        self.verdicts.windows(2).all(|w| w[0].holds == w[1].holds)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn none_hold(&self) -> bool {
        self.verdicts.iter().all(|v| !v.holds)
    }
}

pub(crate) fn require_bicartesian(p: &Fibration) -> Result<(), Error> {
    let (e, b) = (p.total(), p.base());
    if let Some((u, x)) = p.missing_cocartesian_lift() {
        return Err(Error::NotBicartesian(format!(
            "no cocartesian lift of {} at {}",
            b.mor_name(u),
            e.obj_name(x)
        )));
    }
    if let Some((u, x)) = p.missing_cartesian_lift() {
        return Err(Error::NotBicartesian(format!(
            "no cartesian lift of {} at {}",
            b.mor_name(u),
            e.obj_name(x)
        )));
    }
    Ok(())
}

/// Lex base, bicartesian, lex fibers with lex reindexing, and (equivalently)
/// a lex total category with a lex projection.
pub(crate) fn require_lex_bicartesian(p: &Fibration) -> Result<(), Error> {
    if !is_lex_category(p.base()) {
        return Err(Error::NotLex("base category".into()));
    }
    require_bicartesian(p)?;
    let r = lexness_transfer(p)?;
    if !(r.terminal_fibers && r.pullbacks_fibers) {
        return Err(Error::NotLex("fibers or reindexing functors".into()));
    }
    if !r.is_lex() {
        return Err(Error::NotLex("total category or projection".into()));
    }
    Ok(())
}

pub(crate) fn describe(v: &PredicateVerdict) -> String {
    match &v.witness {
        Some(w) => format!("{} fails: {}", v.name, w.description),
        None => v.name.clone(),
    }
}
