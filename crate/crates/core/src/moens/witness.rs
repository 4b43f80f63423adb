use serde::{Deserialize, Serialize};

use super::{bcc, consequences, extensive, sums, zawadowski};
use crate::error::Error;
use crate::fibration::{DepSquare, Fibration};
use crate::fincat::{FinCategory, Mor, Obj};

/// An object of the free cocartesian fibration `π ↓ B`: `(e, b, v: π e -> b)`.
pub type CommaObject = (Obj, Obj, Mor);

/// A counterexample to one predicate, in ids of the fibration it was found in.
/// Squares use the [`DepSquare`] layout (`top: d' -> e'`, `bottom: d -> e`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// No cocartesian lift of the base arrow at the object.
    MissingLift { arrow: Mor, object: Obj },
    /// Cocartesian bottom, cartesian sides over a base pullback, top not cocartesian.
    Bcc { square: DepSquare },
    /// Cocartesian top and bottom, cartesian left over a base pullback, right not cartesian.
    DualBcc { square: DepSquare },
    /// `m: X -> ι y` in `π ↓ B` with `X = source` does not factor uniquely
    /// through the unit `X -> ι τ X`.
    TransportUniversalArrow {
        source: CommaObject,
        object: Obj,
        alpha: Mor,
        beta: Mor,
    },
    /// A cartesian arrow `(α, β)` of `π ↓ B` whose image under `τ` is not cartesian.
    TransportNotCartesian {
        source: CommaObject,
        target: CommaObject,
        alpha: Mor,
        beta: Mor,
    },
    /// The pullback of `cocartesian` along `along` is not cocartesian.
    UnstableSum { cocartesian: Mor, along: Mor },
    /// The fibered diagonal of `cocartesian` is not cocartesian.
    DiagonalNotCocartesian { cocartesian: Mor },
    /// `then` and `then ∘ first` cocartesian, `first` not.
    LeftCancel { first: Mor, then: Mor },
    /// `cocartesian` and `cocartesian ∘ vertical` cocartesian, `vertical` not invertible.
    NotConservative { vertical: Mor, cocartesian: Mor },
    /// Cocartesian top and bottom, vertical sides, not a pullback.
    CocartesianSquareNotPullback { square: DepSquare },
    /// Vertical sides, cocartesian bottom, and the top is cocartesian exactly
    /// when the square is not a pullback.
    Extensivity { square: DepSquare },
    /// As [`Violation::Extensivity`] for a square over `ν_a: ζ_a -> ω'(a)`.
    Lawvere { square: DepSquare },
    /// A non-invertible arrow of a fiber `P a` sent to an iso by `(!_a)_!`.
    ReflectsIsos { arrow: Mor },
    /// The pullback of `ν_a` along the vertical arrow is not cocartesian.
    PulledBackTerminalLift { base: Obj, vertical: Mor },
    /// For cocartesian `g` and `f` into its source, the gap `d -> d ×_{e'} e`
    /// of `(id, f)` is not cocartesian.
    CocartesianLegGap { cocartesian: Mor, arrow: Mor },
    /// Cocartesian `left: d -> e`, `right: d -> e'`, vertical
    /// `left_vertical: e -> e''`, `right_vertical: e' -> e''`; the gap into the
    /// pullback of the verticals is not cocartesian.
    VerticalGap {
        left: Mor,
        right: Mor,
        left_vertical: Mor,
        right_vertical: Mor,
    },
    /// `u_! ↓ d: P a / d -> P b / u_! d` is not an equivalence.
    SliceTransport { arrow: Mor, object: Obj },
    /// `u_!` sends the pullback of the fiber cospan `(left, right)` to a non-pullback.
    TransportNotLex { arrow: Mor, left: Mor, right: Mor },
    /// `ω` does not preserve the terminal object.
    OmegaNotTerminal,
    /// `ω` sends the pullback of `(left, right)` to a non-pullback.
    OmegaNotPullback { left: Mor, right: Mor },
    /// The `η` naturality square at the fiber arrow is not a pullback.
    UnitNotCartesian { arrow: Mor, fiber_arrow: Mor },
    /// The `ε` naturality square at the fiber arrow is not a pullback.
    CounitNotCartesian { arrow: Mor, fiber_arrow: Mor },
}

/// One arrow of a witness with enough data to read it without the input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowData {
    pub role: String,
    /// `total` or `base`.
    pub category: String,
    pub id: Mor,
    pub name: String,
    pub src: String,
    pub tgt: String,
    /// Name of the projected arrow, for total-category arrows.
    pub over: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    pub violation: Violation,
    pub arrows: Vec<ArrowData>,
}

impl Witness {
    pub fn new(p: &Fibration, violation: Violation) -> Witness {
        let (total, base) = violation.roles();
        let e = &**p.total();
        let b = &**p.base();
        let mut arrows: Vec<ArrowData> = total
            .into_iter()
            .map(|(role, m)| arrow_data(e, role, "total", m, Some(b.mor_name(p.pi(m)).to_string())))
            .collect();
        arrows.extend(
            base.into_iter()
                .map(|(role, u)| arrow_data(b, role, "base", u, None)),
        );
        let description = violation.describe(p);
        Witness {
            description,
            violation,
            arrows,
        }
    }
}

fn arrow_data(c: &FinCategory, role: &str, category: &str, m: Mor, over: Option<String>) -> ArrowData {
    ArrowData {
        role: role.to_string(),
        category: category.to_string(),
        id: m,
        name: c.mor_name(m).to_string(),
        src: c.obj_name(c.src(m)).to_string(),
        tgt: c.obj_name(c.tgt(m)).to_string(),
        over,
    }
}

fn square_roles(s: &DepSquare) -> Vec<(&'static str, Mor)> {
    vec![
        ("top", s.top),
        ("bottom", s.bottom),
        ("left", s.left),
        ("right", s.right),
    ]
}

impl Violation {
    /// Arrows of the total category and of the base, with their roles.
    #[allow(clippy::type_complexity)]
    fn roles(&self) -> (Vec<(&'static str, Mor)>, Vec<(&'static str, Mor)>) {
        use Violation::*;
        match *self {
            MissingLift { arrow, .. } => (vec![], vec![("lifted", arrow)]),
            Bcc { ref square }
            | DualBcc { ref square }
            | CocartesianSquareNotPullback { ref square }
            | Extensivity { ref square }
            | Lawvere { ref square } => (square_roles(square), vec![]),
            TransportUniversalArrow { alpha, beta, .. } | TransportNotCartesian { alpha, beta, .. } => {
                (vec![("alpha", alpha)], vec![("beta", beta)])
            }
            UnstableSum { cocartesian, along } => {
                (vec![("cocartesian", cocartesian), ("along", along)], vec![])
            }
            DiagonalNotCocartesian { cocartesian } => (vec![("cocartesian", cocartesian)], vec![]),
            LeftCancel { first, then } => (vec![("first", first), ("then", then)], vec![]),
            NotConservative {
                vertical,
                cocartesian,
            } => (
                vec![("vertical", vertical), ("cocartesian", cocartesian)],
                vec![],
            ),
            ReflectsIsos { arrow } => (vec![("arrow", arrow)], vec![]),
            PulledBackTerminalLift { vertical, .. } => (vec![("vertical", vertical)], vec![]),
            CocartesianLegGap { cocartesian, arrow } => {
                (vec![("cocartesian", cocartesian), ("arrow", arrow)], vec![])
            }
            VerticalGap {
                left,
                right,
                left_vertical,
                right_vertical,
            } => (
                vec![
                    ("left", left),
                    ("right", right),
                    ("left_vertical", left_vertical),
                    ("right_vertical", right_vertical),
                ],
                vec![],
            ),
            SliceTransport { arrow, .. } => (vec![], vec![("transport", arrow)]),
            TransportNotLex { arrow, left, right } => {
                (vec![("left", left), ("right", right)], vec![("transport", arrow)])
            }
            OmegaNotTerminal => (vec![], vec![]),
            OmegaNotPullback { left, right } => (vec![("left", left), ("right", right)], vec![]),
            UnitNotCartesian { arrow, fiber_arrow } | CounitNotCartesian { arrow, fiber_arrow } => {
                (vec![("fiber_arrow", fiber_arrow)], vec![("transport", arrow)])
            }
        }
    }

    fn describe(&self, p: &Fibration) -> String {
        use Violation::*;
        let e = &**p.total();
        let b = &**p.base();
        let m = |x: Mor| e.mor_name(x).to_string();
        match *self {
            MissingLift { arrow, object } => format!(
                "no cocartesian lift of {} at {}",
                b.mor_name(arrow),
                e.obj_name(object)
            ),
            Bcc { ref square } => format!("top {} of a Beck-Chevalley square is not cocartesian", m(square.top)),
            DualBcc { ref square } => format!("right side {} of a dual Beck-Chevalley square is not cartesian", m(square.right)),
            TransportUniversalArrow { object, .. } => format!(
                "unit does not classify arrows into ι({}) uniquely",
                e.obj_name(object)
            ),
            TransportNotCartesian { alpha, beta, .. } => format!(
                "τ sends the cartesian arrow ({}, {}) to a non-cartesian arrow",
                m(alpha),
                b.mor_name(beta)
            ),
            UnstableSum { cocartesian, along } => format!(
                "pullback of cocartesian {} along {} is not cocartesian",
                m(cocartesian),
                m(along)
            ),
            DiagonalNotCocartesian { cocartesian } => {
                format!("fibered diagonal of {} is not cocartesian", m(cocartesian))
            }
            LeftCancel { first, then } => format!(
                "{} and {} ∘ {} are cocartesian but {} is not",
                m(then),
                m(then),
                m(first),
                m(first)
            ),
            NotConservative {
                vertical,
                cocartesian,
            } => format!(
                "{} and {} ∘ {} are cocartesian but vertical {} is not invertible",
                m(cocartesian),
                m(cocartesian),
                m(vertical),
                m(vertical)
            ),
            CocartesianSquareNotPullback { ref square } => format!(
                "square with cocartesian {} and {} is not a pullback",
                m(square.top),
                m(square.bottom)
            ),
            Extensivity { ref square } | Lawvere { ref square } => format!(
                "{} is {}cocartesian but the square is {}a pullback",
                m(square.top),
                if p.is_cocartesian_arrow(square.top) { "" } else { "not " },
                if square.is_pullback(e) { "" } else { "not " }
            ),
            ReflectsIsos { arrow } => format!(
                "terminal transport inverts the non-invertible {}",
                m(arrow)
            ),
            PulledBackTerminalLift { base, vertical } => format!(
                "pullback of the terminal lift at {} along {} is not cocartesian",
                b.obj_name(base),
                m(vertical)
            ),
            CocartesianLegGap { cocartesian, arrow } => format!(
                "gap map of ({}, {}) is not cocartesian",
                m(cocartesian),
                m(arrow)
            ),
            VerticalGap { left, right, .. } => format!(
                "gap map of cocartesian {} and {} is not cocartesian",
                m(left),
                m(right)
            ),
            SliceTransport { arrow, object } => format!(
                "transport along {} is not an equivalence on slices over {}",
                b.mor_name(arrow),
                e.obj_name(object)
            ),
            TransportNotLex { arrow, left, right } => format!(
                "transport along {} does not preserve the pullback of ({}, {})",
                b.mor_name(arrow),
                m(left),
                m(right)
            ),
            OmegaNotTerminal => "terminal transport does not preserve the terminal object".into(),
            OmegaNotPullback { left, right } => format!(
                "terminal transport does not preserve the pullback of ({}, {})",
                m(left),
                m(right)
            ),
            UnitNotCartesian { arrow, fiber_arrow } => format!(
                "unit of transport along {} has a non-pullback naturality square at {}",
                b.mor_name(arrow),
                m(fiber_arrow)
            ),
            CounitNotCartesian { arrow, fiber_arrow } => format!(
                "counit of transport along {} has a non-pullback naturality square at {}",
                b.mor_name(arrow),
                m(fiber_arrow)
            ),
        }
    }

    /// Whether this is a genuine violation in `p`, decided afresh from the ids.
    pub fn recheck(&self, p: &Fibration) -> Result<bool, Error> {
        use Violation::*;
        let e = &**p.total();
        let b = &**p.base();
        let has_mor = |m: Mor| e.contains_mor(m);
        let square_ok = |s: &DepSquare| [s.top, s.bottom, s.left, s.right].iter().all(|&x| has_mor(x));
        Ok(match *self {
            MissingLift { arrow, object } => {
                b.contains_mor(arrow)
                    && e.contains_obj(object)
                    && b.src(arrow) == p.over(object)
                    && p.cocartesian_lift(arrow, object).is_none()
            }
            Bcc { ref square } => square_ok(square) && bcc::bcc_square_fails(p, square),
            DualBcc { ref square } => square_ok(square) && bcc::dual_bcc_square_fails(p, square),
            TransportUniversalArrow { .. } | TransportNotCartesian { .. } => {
                bcc::transport_violation_holds(p, self)?
            }
            UnstableSum { cocartesian, along } => {
                has_mor(cocartesian) && has_mor(along) && sums::unstable(p, cocartesian, along)?
            }
            DiagonalNotCocartesian { cocartesian } => {
                has_mor(cocartesian) && sums::diagonal_fails(p, cocartesian)?
            }
            LeftCancel { first, then } => {
                has_mor(first) && has_mor(then) && sums::left_cancel_fails(p, first, then)
            }
            NotConservative {
                vertical,
                cocartesian,
            } => has_mor(vertical) && has_mor(cocartesian) && sums::not_conservative(p, vertical, cocartesian),
            CocartesianSquareNotPullback { ref square } => {
                square_ok(square) && sums::cocartesian_square_fails(p, square)
            }
            Extensivity { ref square } => square_ok(square) && extensive::extensivity_fails(p, square),
            Lawvere { ref square } => {
                let ts = extensive::terminal_section(p)?;
                square_ok(square) && extensive::lawvere_fails(p, &ts, square)
            }
            ReflectsIsos { arrow } => {
                let ts = extensive::terminal_section(p)?;
                has_mor(arrow) && extensive::reflects_fails(p, &ts, arrow)?
            }
            PulledBackTerminalLift { base, vertical } => {
                let ts = extensive::terminal_section(p)?;
                b.contains_obj(base) && has_mor(vertical) && extensive::nu_pullback_fails(p, &ts, base, vertical)?
            }
            CocartesianLegGap { cocartesian, arrow } => {
                has_mor(cocartesian) && has_mor(arrow) && consequences::leg_gap_fails(p, cocartesian, arrow)?
            }
            VerticalGap {
                left,
                right,
                left_vertical,
                right_vertical,
            } => {
                [left, right, left_vertical, right_vertical].iter().all(|&x| has_mor(x))
                    && consequences::vertical_gap_fails(p, left, right, left_vertical, right_vertical)?
            }
            SliceTransport { arrow, object } => {
                b.contains_mor(arrow)
                    && e.contains_obj(object)
                    && consequences::slice_transport_fails(p, arrow, object)?
            }
            TransportNotLex { arrow, left, right } => {
                b.contains_mor(arrow)
                    && has_mor(left)
                    && has_mor(right)
                    && consequences::transport_not_lex(p, arrow, left, right)?
            }
            OmegaNotTerminal => consequences::omega_not_terminal(p)?,
            OmegaNotPullback { left, right } => {
                has_mor(left) && has_mor(right) && consequences::omega_not_pullback(p, left, right)?
            }
            UnitNotCartesian { arrow, fiber_arrow } => {
                b.contains_mor(arrow) && has_mor(fiber_arrow) && zawadowski::unit_square_fails(p, arrow, fiber_arrow)?
            }
            CounitNotCartesian { arrow, fiber_arrow } => {
                b.contains_mor(arrow)
                    && has_mor(fiber_arrow)
                    && zawadowski::counit_square_fails(p, arrow, fiber_arrow)?
            }
        })
    }
}
