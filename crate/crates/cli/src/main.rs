use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fibcat::constructions::{
    arrow_category_guarded, artin_gluing_guarded, free_cocartesian_guarded, grothendieck_guarded,
};
use fibcat::corpus::{generate, CorpusKind};
use fibcat::fibration::Fibration;
use fibcat::fincat::SizeGuard;
use fibcat::io::{
    document_to_json, fibration_to_file, parse_document, run_predicate, to_json, AnalysisReport,
    Document, Predicate, ReportContent, Timing,
};
use fibcat::moens::StabilityMode;
use fibcat::theorem::{roundtrip_phi_psi, roundtrip_psi_phi, TheoremMode};
use fibcat::Error;

const EXIT_SCHEMA: u8 = 1;
const EXIT_LAW: u8 = 2;
const EXIT_FAILS: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;
const EXIT_SIZE: u8 = 5;

/// Written files list every composable pair, so the composition table is
/// guarded too, at this many rows per allowed morphism.
const ROWS_PER_MORPHISM: usize = 100;

/// Verify finite categories, fibrations and the Moens predicates.
#[derive(Parser)]
#[command(name = "fibcat", version)]
struct Cli {
    /// Refuse to build categories with more morphisms than this.
    #[arg(long, global = true, env = "FIBCAT_MAX_MORPHISMS", default_value_t = SizeGuard::DEFAULT_LIMIT)]
    max_morphisms: usize,

    /// Worker threads for predicate batches (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a file of any kind.
    Check { path: PathBuf },
    /// Run predicates on a fibration or Grothendieck file and write a report.
    Analyze {
        path: PathBuf,
        /// Comma-separated predicate names; all of them by default.
        #[arg(long, value_delimiter = ',')]
        predicates: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::PreMoens)]
        mode: ModeArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out timings so that reports are byte-identical across runs.
        #[arg(long)]
        deterministic: bool,
    },
    /// Artin gluing of a functor file.
    Gluing {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grothendieck construction of a family file.
    Groth {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Free cocartesian fibration on a functor file.
    FreeCocart {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Codomain fibration of the arrow category of a category file.
    ArrowCat {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moens round trip on a fibration file (Ψ∘Φ) or a functor file (Φ∘Ψ).
    Roundtrip {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = TheoremArg::Moens)]
        mode: TheoremArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a corpus fixture.
    Gen {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    PreMoens,
    VerticalStability,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Moens,
    Generalized,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Poset,
    Lattice,
    Finset,
    Groth,
    Gluing,
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => error_code(e),
            Failure::Io(..) | Failure::Usage(_) => EXIT_SCHEMA,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Usage(m) => m.clone(),
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::SizeGuard { .. } => EXIT_SIZE,
        Error::Law(_) | Error::NotAFunctor(_) | Error::FunctorialityViolation(_) => EXIT_LAW,
        e if e.is_precondition() => EXIT_PRECONDITION,
        _ => EXIT_SCHEMA,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(path: &Path, guard: SizeGuard) -> Result<(Vec<u8>, Document), Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Core(Error::Schema("input is not UTF-8".into())))?;
    let doc = parse_document(&text, guard)?;
    Ok((bytes, doc))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(p.to_path_buf(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Refuses to serialize a fibration whose total category has a composition
/// table too large to write.
fn guard_output(p: &Fibration, guard: SizeGuard) -> Result<(), Failure> {
    let rows = p.total().num_composable_pairs();
    let limit = guard.limit.saturating_mul(ROWS_PER_MORPHISM);
    if rows > limit {
        eprintln!("composition table of {rows} rows exceeds {limit} ({ROWS_PER_MORPHISM} per allowed morphism)");
        return Err(Failure::Core(Error::SizeGuard { count: rows, limit }));
    }
    Ok(())
}

fn write_fibration(p: &Fibration, guard: SizeGuard, out: Option<&Path>) -> Result<(), Failure> {
    guard_output(p, guard)?;
    emit(out, &to_json(&fibration_to_file(p)))
}

fn expect_functor(doc: Document) -> Result<fibcat::fincat::Functor, Failure> {
    match doc {
        Document::Functor(f) => Ok(f),
        Document::Fibration(p) => Ok(p.proj().clone()),
        d => Err(Failure::Core(Error::Schema(format!("expected a functor file, got {}", d.kind())))),
    }
}

fn expect_fibration(doc: Document, guard: SizeGuard) -> Result<Fibration, Failure> {
    match doc {
        Document::Fibration(p) => Ok(p),
        Document::Grothendieck(d) => Ok(grothendieck_guarded(&d, guard)?.fibration),
        d => Err(Failure::Core(Error::Schema(format!("expected a fibration file, got {}", d.kind())))),
    }
}

fn describe(doc: &Document) -> String {
    match doc {
        Document::Category(c) => format!("category: {} objects, {} morphisms", c.num_objects(), c.num_morphisms()),
        Document::Functor(f) => format!(
            "functor: {} -> {} objects",
            f.source().num_objects(),
            f.target().num_objects()
        ),
        Document::Fibration(p) => format!(
            "fibration: total {} objects / {} morphisms over {} objects",
            p.total().num_objects(),
            p.total().num_morphisms(),
            p.base().num_objects()
        ),
        Document::Grothendieck(d) => format!("grothendieck data over {} objects", d.base.num_objects()),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let guard = SizeGuard::new(cli.max_morphisms);
    match cli.command {
        Command::Check { path } => {
            let (_, doc) = load(&path, guard)?;
            println!("ok: {}", describe(&doc));
            Ok(0)
        }
        Command::Analyze {
            path,
            predicates,
            mode,
            out,
            deterministic,
        } => {
            let requested: Vec<Predicate> = predicates
                .iter()
                .map(|s| s.trim().parse::<Predicate>())
                .collect::<Result<_, _>>()?;
            let explicit = !requested.is_empty();
            let list = if explicit { requested } else { Predicate::ALL.to_vec() };
            let (bytes, doc) = load(&path, guard)?;
            let p = expect_fibration(doc, guard)?;
            let mode = match mode {
                ModeArg::PreMoens => StabilityMode::PreMoens,
                ModeArg::VerticalStability => StabilityMode::VerticalStability,
            };
            let start = Instant::now();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let results: Vec<_> = pool.install(|| {
                list.par_iter()
                    .map(|&q| {
                        let t = Instant::now();
                        run_predicate(&p, q, mode).map(|o| (o, t.elapsed().as_secs_f64() * 1e3))
                    })
                    .collect()
            });
            let mut outcomes = Vec::with_capacity(results.len());
            let mut timing = Timing::default();
            for r in results {
                let (o, ms) = r?;
                timing.per_predicate_ms.insert(o.predicate.to_string(), ms);
                outcomes.push(o);
            }
            timing.total_ms = start.elapsed().as_secs_f64() * 1e3;
            let report = AnalysisReport {
                content: ReportContent::new(&bytes, mode, outcomes),
                timing,
            };
            let text = if deterministic {
                report.deterministic_json()
            } else {
                to_json(&report)
            };
            emit(out.as_deref(), &text)?;
            let unmet: Vec<_> = report.content.unmet_preconditions().collect();
            for o in &unmet {
                eprintln!(
                    "{}: precondition not met: {}",
                    o.predicate,
                    o.precondition.as_deref().unwrap_or("")
                );
            }
            for o in report.content.outcomes.iter().filter(|o| o.holds == Some(false)) {
                let why = o
                    .verdicts
                    .iter()
                    .find_map(|v| v.witness.as_ref().map(|w| w.description.clone()))
                    .unwrap_or_default();
                eprintln!("{}: fails: {why}", o.predicate);
            }
            Ok(if explicit && !unmet.is_empty() {
                EXIT_PRECONDITION
            } else if report.content.any_fails() {
                EXIT_FAILS
            } else {
                0
            })
        }
        Command::Gluing { path, out } => {
            let f = expect_functor(load(&path, guard)?.1)?;
            let g = artin_gluing_guarded(&f, guard)?;
            write_fibration(&g.fibration, guard, out.as_deref())?;
            Ok(0)
        }
        Command::Groth { path, out } => {
            let p = expect_fibration(load(&path, guard)?.1, guard)?;
            write_fibration(&p, guard, out.as_deref())?;
            Ok(0)
        }
        Command::FreeCocart { path, out } => {
            let f = expect_functor(load(&path, guard)?.1)?;
            let l = free_cocartesian_guarded(&f, guard)?;
            write_fibration(&l.fibration, guard, out.as_deref())?;
            Ok(0)
        }
        Command::ArrowCat { path, out } => {
            let c = match load(&path, guard)?.1 {
                Document::Category(c) => c,
                d => return Err(Failure::Core(Error::Schema(format!("expected a category file, got {}", d.kind())))),
            };
            let ar = arrow_category_guarded(&std::sync::Arc::new(c), guard)?;
            let p = Fibration::new(ar.cod.clone());
            write_fibration(&p, guard, out.as_deref())?;
            Ok(0)
        }
        Command::Roundtrip { path, mode, out } => {
            let mode = match mode {
                TheoremArg::Moens => TheoremMode::Moens,
                TheoremArg::Generalized => TheoremMode::Generalized,
            };
            let report = match load(&path, guard)?.1 {
                Document::Functor(f) => roundtrip_phi_psi(&f, mode)?,
                d => roundtrip_psi_phi(&expect_fibration(d, guard)?, mode)?,
            };
            emit(out.as_deref(), &to_json(&report.summary()))?;
            Ok(if report.verdict { 0 } else { EXIT_FAILS })
        }
        Command::Gen {
            kind,
            seed,
            size,
            out,
        } => {
            let kind = match kind {
                KindArg::Poset => CorpusKind::Poset,
                KindArg::Lattice => CorpusKind::Lattice,
                KindArg::Finset => CorpusKind::Finset,
                KindArg::Groth => CorpusKind::Groth,
                KindArg::Gluing => CorpusKind::Gluing,
            };
            let doc = generate(kind, size, seed, guard)?;
            emit(out.as_deref(), &document_to_json(&doc))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
