use thiserror::Error;

/// A failed category law, naming the offending morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LawViolation {
    #[error("object {object} has no identity")]
    MissingIdentity { object: String },
    #[error("object {object} has more than one identity entry")]
    DuplicateIdentity { object: String },
    #[error("identity {morphism} of {object} is not an endomorphism of it")]
    IdentityTyping { object: String, morphism: String },
    #[error("composite {g} ∘ {f} is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} listed twice")]
    DuplicateComposite { g: String, f: String },
    #[error("{g} ∘ {f} listed but the pair is not composable")]
    NotComposable { g: String, f: String },
    #[error("{g} ∘ {f} = {result} lands in the wrong hom-set")]
    WrongHomSet { g: String, f: String, result: String },
    #[error("left unit law fails at {morphism}")]
    LeftUnit { morphism: String },
    #[error("right unit law fails at {morphism}")]
    RightUnit { morphism: String },
    #[error("associativity fails at ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("law violation: {0}")]
    Law(#[from] LawViolation),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown morphism {0}")]
    UnknownMorphism(String),
    #[error("duplicate object {0}")]
    DuplicateObject(String),
    #[error("duplicate morphism {0}")]
    DuplicateMorphism(String),
    #[error("size guard exceeded: {count} morphisms > limit {limit}")]
    SizeGuard { count: usize, limit: usize },
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("functors do not share a target category")]
    TargetMismatch,
    #[error("categories do not match: {0}")]
    CategoryMismatch(String),
    #[error("missing limit: {0}")]
    MissingLimit(String),
    #[error("missing pullback of {0}")]
    MissingPullback(String),
    #[error("missing pushouts: {0}")]
    MissingPushouts(String),
    #[error("no lift of {arrow} at {object}")]
    MissingLift { arrow: String, object: String },
    #[error("{0} is not cocartesian")]
    NotCocartesian(String),
    #[error("{0} is not cartesian")]
    NotCartesian(String),
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("functor is not fibered: {0}")]
    NotFibered(String),
    #[error("functoriality violation: {0}")]
    FunctorialityViolation(String),
    #[error("no terminal object: {0}")]
    NoTerminal(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("fibration is not bicartesian: {0}")]
    NotBicartesian(String),
    #[error("fibration is not pre-Moens: {0}")]
    NotPreMoens(String),
    #[error("fibration is not Beck-Chevalley: {0}")]
    NotBC(String),
    #[error("fibration is not Moens: {0}")]
    NotMoens(String),
    #[error("fibration is not generalized Moens: {0}")]
    NotGenMoens(String),
    #[error("not lex: {0}")]
    NotLex(String),
    #[error("functor does not preserve the terminal object: {0}")]
    NotTerminalPreserving(String),
}

impl Error {
    /// Whether this error reports an unmet structural precondition
    /// (as opposed to malformed input or a broken law).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::Precondition(_)
                | Error::MissingLimit(_)
                | Error::MissingPullback(_)
                | Error::MissingPushouts(_)
                | Error::MissingLift { .. }
                | Error::NotCocartesian(_)
                | Error::NotCartesian(_)
                | Error::NoFactorization(_)
                | Error::NotFibered(_)
                | Error::NoTerminal(_)
                | Error::TargetMismatch
                | Error::CategoryMismatch(_)
                | Error::NotBicartesian(_)
                | Error::NotPreMoens(_)
                | Error::NotBC(_)
                | Error::NotMoens(_)
                | Error::NotGenMoens(_)
                | Error::NotLex(_)
                | Error::NotTerminalPreserving(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
