//! JSON file formats and analysis reports.
//!
//! Every file carries `format_version` and a `kind` tag. Objects and morphisms
//! are listed in id order, so loading a file assigns the same ids the writer
//! used and witnesses in a report refer to the same arrows as the input.
//! Writing is canonical: identities are keyed by object name and composition
//! triples are sorted by the ids of `(f, g)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::constructions::GrothendieckData;
use crate::error::Error;
use crate::fibration::{lexness_transfer, Fibration, LexnessReport};
use crate::fincat::{FinCategory, Functor, SizeGuard};
use crate::moens::{
    bcc_via_transport, disjointness_characterizations, extensivity_characterizations,
    has_disjoint_sums, has_stable_sums, is_generalized_moens, is_moens, is_pre_moens,
    moens_consequences, satisfies_bcc, satisfies_dual_bcc, zawadowski_conditions,
    PredicateVerdict, StabilityMode,
};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub format_version: String,
    pub kind: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    /// `[g, f, g∘f]`.
    pub composition: Vec<[String; 3]>,
}

/// A functor between two embedded categories. `kind` is `functor` or
/// `fibration`; a fibration file is the projection of its total category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub format_version: String,
    pub kind: String,
    pub source: CategoryFile,
    pub target: CategoryFile,
    /// `[object, image]` in source id order.
    pub obj_map: Vec<[String; 2]>,
    /// `[morphism, image]` in source id order.
    pub mor_map: Vec<[String; 2]>,
}

pub type FibrationFile = FunctorFile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub arrow: String,
    pub obj_map: Vec<[String; 2]>,
    pub mor_map: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrothendieckFile {
    pub format_version: String,
    pub kind: String,
    pub base: CategoryFile,
    /// One fiber per base object, in id order.
    pub fibers: Vec<CategoryFile>,
    /// One transition per base arrow, in id order.
    pub transitions: Vec<TransitionEntry>,
}

/// Any of the file kinds, detected from the `kind` tag.
#[derive(Clone, Debug)]
pub enum Document {
    Category(FinCategory),
    Functor(Functor),
    Fibration(Fibration),
    Grothendieck(GrothendieckData),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Category(_) => "category",
            Document::Functor(_) => "functor",
            Document::Fibration(_) => "fibration",
            Document::Grothendieck(_) => "grothendieck",
        }
    }
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn check_header(version: &str, kind: &str, expected: &[&str]) -> Result<(), Error> {
    if version != FORMAT_VERSION {
        return Err(schema(format!(
            "unsupported format_version {version:?}, expected {FORMAT_VERSION:?}"
        )));
    }
    if !expected.contains(&kind) {
        return Err(schema(format!("kind {kind:?} where {expected:?} was expected")));
    }
    Ok(())
}

pub fn category_to_file(c: &FinCategory) -> CategoryFile {
    let mut triples: Vec<_> = c.composition_triples().collect();
    triples.sort_by_key(|&(g, f, _)| (f, g));
    CategoryFile {
        format_version: FORMAT_VERSION.into(),
        kind: "category".into(),
        objects: c.objects().map(|o| c.obj_name(o).to_string()).collect(),
        morphisms: c
            .morphisms()
            .map(|m| MorphismEntry {
                id: c.mor_name(m).into(),
                src: c.obj_name(c.src(m)).into(),
                tgt: c.obj_name(c.tgt(m)).into(),
            })
            .collect(),
        identities: c
            .objects()
            .map(|o| (c.obj_name(o).to_string(), c.mor_name(c.id(o)).to_string()))
            .collect(),
        composition: triples
            .into_iter()
            .map(|(g, f, gf)| {
                [
                    c.mor_name(g).to_string(),
                    c.mor_name(f).to_string(),
                    c.mor_name(gf).to_string(),
                ]
            })
            .collect(),
    }
}

pub fn category_from_file(f: &CategoryFile, guard: SizeGuard) -> Result<FinCategory, Error> {
    check_header(&f.format_version, &f.kind, &["category"])?;
    let morphisms: Vec<(String, String, String)> = f
        .morphisms
        .iter()
        .map(|m| (m.id.clone(), m.src.clone(), m.tgt.clone()))
        .collect();
    let identities: Vec<(String, String)> = f.identities.clone().into_iter().collect();
    let composition: Vec<(String, String, String)> = f
        .composition
        .iter()
        .map(|[g, h, gh]| (g.clone(), h.clone(), gh.clone()))
        .collect();
    FinCategory::from_table(&f.objects, &morphisms, &identities, &composition, guard)
}

fn maps_to_file(f: &Functor) -> (Vec<[String; 2]>, Vec<[String; 2]>) {
    let (s, t) = (f.source(), f.target());
    let obj = s
        .objects()
        .map(|o| [s.obj_name(o).to_string(), t.obj_name(f.ob(o)).to_string()])
        .collect();
    let mor = s
        .morphisms()
        .map(|m| [s.mor_name(m).to_string(), t.mor_name(f.mor(m)).to_string()])
        .collect();
    (obj, mor)
}

fn maps_from_file(
    s: Arc<FinCategory>,
    t: Arc<FinCategory>,
    obj_map: &[[String; 2]],
    mor_map: &[[String; 2]],
) -> Result<Functor, Error> {
    let mut objs = vec![None; s.num_objects()];
    for [x, y] in obj_map {
        let x = s.object(x)?;
        if objs[x.idx()].replace(t.object(y)?).is_some() {
            return Err(schema(format!("object {} mapped twice", s.obj_name(x))));
        }
    }
    let mut mors = vec![None; s.num_morphisms()];
    for [x, y] in mor_map {
        let x = s.morphism(x)?;
        if mors[x.idx()].replace(t.morphism(y)?).is_some() {
            return Err(schema(format!("morphism {} mapped twice", s.mor_name(x))));
        }
    }
    let objs = objs
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| schema(format!("object {} is not mapped", s.obj_name(crate::fincat::Obj(i as u32))))))
        .collect::<Result<Vec<_>, _>>()?;
    let mors = mors
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| schema(format!("morphism {} is not mapped", s.mor_name(crate::fincat::Mor(i as u32))))))
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(s, t, objs, mors)
}

pub fn functor_to_file(f: &Functor, kind: &str) -> FunctorFile {
    let (obj_map, mor_map) = maps_to_file(f);
    FunctorFile {
        format_version: FORMAT_VERSION.into(),
        kind: kind.into(),
        source: category_to_file(f.source()),
        target: category_to_file(f.target()),
        obj_map,
        mor_map,
    }
}

pub fn fibration_to_file(p: &Fibration) -> FibrationFile {
    functor_to_file(p.proj(), "fibration")
}

pub fn functor_from_file(f: &FunctorFile, guard: SizeGuard) -> Result<Functor, Error> {
    check_header(&f.format_version, &f.kind, &["functor", "fibration"])?;
    let s = Arc::new(category_from_file(&f.source, guard)?);
    let t = Arc::new(category_from_file(&f.target, guard)?);
    maps_from_file(s, t, &f.obj_map, &f.mor_map)
}

pub fn grothendieck_to_file(d: &GrothendieckData) -> GrothendieckFile {
    let b = &d.base;
    GrothendieckFile {
        format_version: FORMAT_VERSION.into(),
        kind: "grothendieck".into(),
        base: category_to_file(b),
        fibers: d.fibers.iter().map(|c| category_to_file(c)).collect(),
        transitions: b
            .morphisms()
            .map(|u| {
                let (obj_map, mor_map) = maps_to_file(&d.transitions[u.idx()]);
                TransitionEntry {
                    arrow: b.mor_name(u).into(),
                    obj_map,
                    mor_map,
                }
            })
            .collect(),
    }
}

pub fn grothendieck_from_file(f: &GrothendieckFile, guard: SizeGuard) -> Result<GrothendieckData, Error> {
    check_header(&f.format_version, &f.kind, &["grothendieck"])?;
    let base = Arc::new(category_from_file(&f.base, guard)?);
    if f.fibers.len() != base.num_objects() || f.transitions.len() != base.num_morphisms() {
        return Err(schema("one fiber per base object and one transition per base arrow"));
    }
    let fibers = f
        .fibers
        .iter()
        .map(|c| category_from_file(c, guard).map(Arc::new))
        .collect::<Result<Vec<_>, _>>()?;
    let mut transitions = vec![None; base.num_morphisms()];
    for t in &f.transitions {
        let u = base.morphism(&t.arrow)?;
        let (a, b) = (base.src(u), base.tgt(u));
        let func = maps_from_file(fibers[a.idx()].clone(), fibers[b.idx()].clone(), &t.obj_map, &t.mor_map)?;
        if transitions[u.idx()].replace(func).is_some() {
            return Err(schema(format!("transition of {} listed twice", t.arrow)));
        }
    }
    let transitions = transitions
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| schema("missing transition"))?;
    GrothendieckData::new(base, fibers, transitions)
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> Result<T, Error> {
    serde_json::from_value(v).map_err(|e| schema(e.to_string()))
}

/// Parses any file kind from JSON text.
pub fn parse_document(text: &str, guard: SizeGuard) -> Result<Document, Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("missing kind tag"))?
        .to_string();
    match kind.as_str() {
        "category" => Ok(Document::Category(category_from_file(&from_value(v)?, guard)?)),
        "functor" => Ok(Document::Functor(functor_from_file(&from_value(v)?, guard)?)),
        "fibration" => Ok(Document::Fibration(Fibration::new(functor_from_file(
            &from_value(v)?,
            guard,
        )?))),
        "grothendieck" => Ok(Document::Grothendieck(grothendieck_from_file(&from_value(v)?, guard)?)),
        other => Err(schema(format!("unknown kind {other:?}"))),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn document_to_json(d: &Document) -> String {
    match d {
        Document::Category(c) => to_json(&category_to_file(c)),
        Document::Functor(f) => to_json(&functor_to_file(f, "functor")),
        Document::Fibration(p) => to_json(&fibration_to_file(p)),
        Document::Grothendieck(g) => to_json(&grothendieck_to_file(g)),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Predicates the analyzer knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    Lexness,
    Bcc,
    DualBcc,
    BccTransport,
    StableSums,
    DisjointSums,
    PreMoens,
    Moens,
    GenMoens,
    Disjointness,
    Extensivity,
    Consequences,
    Zawadowski,
}

impl Predicate {
    pub const ALL: [Predicate; 13] = [
        Predicate::Lexness,
        Predicate::Bcc,
        Predicate::DualBcc,
        Predicate::BccTransport,
        Predicate::StableSums,
        Predicate::DisjointSums,
        Predicate::PreMoens,
        Predicate::Moens,
        Predicate::GenMoens,
        Predicate::Disjointness,
        Predicate::Extensivity,
        Predicate::Consequences,
        Predicate::Zawadowski,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Lexness => "lexness",
            Predicate::Bcc => "bcc",
            Predicate::DualBcc => "dual-bcc",
            Predicate::BccTransport => "bcc-transport",
            Predicate::StableSums => "stable-sums",
            Predicate::DisjointSums => "disjoint-sums",
            Predicate::PreMoens => "pre-moens",
            Predicate::Moens => "moens",
            Predicate::GenMoens => "gen-moens",
            Predicate::Disjointness => "disjointness",
            Predicate::Extensivity => "extensivity",
            Predicate::Consequences => "consequences",
            Predicate::Zawadowski => "zawadowski",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| schema(format!("unknown predicate {s:?}")))
    }
}

/// Result of running one predicate. `holds` is absent when a structural
/// precondition was not met, in which case `precondition` says which.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateOutcome {
    pub predicate: Predicate,
    pub holds: Option<bool>,
    /// For the characterization suites: whether the four verdicts coincide.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub agree: Option<bool>,
    pub verdicts: Vec<PredicateVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lexness: Option<LexnessReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precondition: Option<String>,
}

impl PredicateOutcome {
    fn verdicts(predicate: Predicate, verdicts: Vec<PredicateVerdict>) -> PredicateOutcome {
        PredicateOutcome {
            predicate,
            holds: Some(verdicts.iter().all(|v| v.holds)),
            agree: None,
            verdicts,
            lexness: None,
            precondition: None,
        }
    }
}

/// Runs one predicate. Errors that report unmet preconditions become an
/// outcome without a verdict; any other error is returned.
pub fn run_predicate(
    p: &Fibration,
    predicate: Predicate,
    mode: StabilityMode,
) -> Result<PredicateOutcome, Error> {
    let single = |r: Result<PredicateVerdict, Error>| r.map(|v| PredicateOutcome::verdicts(predicate, vec![v]));
    let res = match predicate {
        Predicate::Lexness => lexness_transfer(p).map(|r| PredicateOutcome {
            predicate,
            holds: Some(r.is_lex()),
            agree: Some(r.consistent()),
            verdicts: Vec::new(),
            lexness: Some(r),
            precondition: None,
        }),
        Predicate::Bcc => single(satisfies_bcc(p)),
        Predicate::DualBcc => single(satisfies_dual_bcc(p)),
        Predicate::BccTransport => single(bcc_via_transport(p)),
        Predicate::StableSums => single(has_stable_sums(p)),
        Predicate::DisjointSums => single(has_disjoint_sums(p)),
        Predicate::PreMoens => single(is_pre_moens(p)),
        Predicate::Moens => single(is_moens(p)),
        Predicate::GenMoens => single(is_generalized_moens(p)),
        Predicate::Disjointness | Predicate::Extensivity => {
            let c = if predicate == Predicate::Disjointness {
                disjointness_characterizations(p, mode)
            } else {
                extensivity_characterizations(p, mode)
            };
            c.map(|c| PredicateOutcome {
                agree: Some(c.agree()),
                ..PredicateOutcome::verdicts(predicate, c.verdicts)
            })
        }
        Predicate::Consequences => moens_consequences(p).map(|c| {
            PredicateOutcome::verdicts(predicate, c.verdicts().into_iter().cloned().collect())
        }),
        Predicate::Zawadowski => single(zawadowski_conditions(p)),
    };
    match res {
        Ok(o) => Ok(o),
        Err(e) if e.is_precondition() => Ok(PredicateOutcome {
            predicate,
            holds: None,
            agree: None,
            verdicts: Vec::new(),
            lexness: None,
            precondition: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// The deterministic part of an analysis report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportContent {
    pub tool: String,
    pub version: String,
    pub input_sha256: String,
    pub mode: StabilityMode,
    pub predicates: Vec<Predicate>,
    pub outcomes: Vec<PredicateOutcome>,
}

impl ReportContent {
    pub fn new(input: &[u8], mode: StabilityMode, outcomes: Vec<PredicateOutcome>) -> ReportContent {
        ReportContent {
            tool: "fibcat".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input_sha256: sha256_hex(input),
            mode,
            predicates: outcomes.iter().map(|o| o.predicate).collect(),
            outcomes,
        }
    }

    /// Some predicate ran and failed.
    pub fn any_fails(&self) -> bool {
        self.outcomes.iter().any(|o| o.holds == Some(false))
    }

    pub fn unmet_preconditions(&self) -> impl Iterator<Item = &PredicateOutcome> {
        self.outcomes.iter().filter(|o| o.holds.is_none())
    }

    /// Re-verifies every witness against the fibration.
    pub fn recheck(&self, p: &Fibration) -> Result<bool, Error> {
        for o in &self.outcomes {
            for v in &o.verdicts {
                if !v.recheck(p)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Wall-clock timings, outside the determinism contract.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub per_predicate_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub content: ReportContent,
    pub timing: Timing,
}

impl AnalysisReport {
    /// Serialized content without timing: identical across runs on the same
    /// input, flags and version.
    pub fn deterministic_json(&self) -> String {
        to_json(&self.content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::artin_gluing;
    use crate::fixtures;

    #[test]
    fn category_round_trip_is_byte_identical() {
        for c in [fixtures::diamond(), fixtures::finset(2), fixtures::iso2()] {
            let text = to_json(&category_to_file(&c));
            let d = category_from_file(&serde_json::from_str(&text).unwrap(), SizeGuard::default()).unwrap();
            assert!(d.same_as(&c));
            assert_eq!(to_json(&category_to_file(&d)), text);
        }
    }

    #[test]
    fn missing_composite_is_a_law_violation() {
        let mut f = category_to_file(&fixtures::diamond());
        let dropped = f
            .composition
            .iter()
            .position(|t| t[0] != t[2] && t[1] != t[2])
            .unwrap();
        f.composition.remove(dropped);
        let err = category_from_file(&f, SizeGuard::default()).unwrap_err();
        assert!(matches!(err, Error::Law(_)), "{err}");
    }

    #[test]
    fn malformed_text_is_a_schema_error() {
        assert!(matches!(parse_document("{ not json", SizeGuard::default()), Err(Error::Schema(_))));
        let mut f = category_to_file(&fixtures::one());
        f.format_version = "0".into();
        assert!(matches!(
            parse_document(&to_json(&f), SizeGuard::default()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn fibration_and_grothendieck_round_trip() {
        let p = artin_gluing(&fixtures::f_bad()).unwrap().fibration;
        let text = to_json(&fibration_to_file(&p));
        match parse_document(&text, SizeGuard::default()).unwrap() {
            Document::Fibration(q) => assert!(q.proj().same_as(p.proj())),
            d => panic!("parsed as {}", d.kind()),
        }
        let g = fixtures::collapsing_grothendieck();
        let text = to_json(&grothendieck_to_file(&g));
        let d = parse_document(&text, SizeGuard::default()).unwrap();
        assert_eq!(document_to_json(&d), text);
    }

    #[test]
    fn predicate_names_parse_back() {
        for p in Predicate::ALL {
            assert_eq!(p.name().parse::<Predicate>().unwrap(), p);
            assert_eq!(serde_json::to_value(p).unwrap(), Value::String(p.name().into()));
        }
    }

    #[test]
    fn failing_witnesses_recheck_from_a_report() {
        let p = artin_gluing(&fixtures::f_bad()).unwrap().fibration;
        let outcomes = [Predicate::Bcc, Predicate::Moens]
            .into_iter()
            .map(|q| run_predicate(&p, q, StabilityMode::PreMoens).unwrap())
            .collect();
        let r = ReportContent::new(b"x", StabilityMode::PreMoens, outcomes);
        assert!(r.any_fails());
        let back: ReportContent = serde_json::from_str(&to_json(&r)).unwrap();
        assert!(back.recheck(&p).unwrap());
    }
}
