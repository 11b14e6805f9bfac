//! Batch front end for the workbench: `workbench <verb> <action> [inputs]`.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 on
//! usage, parse or format errors. Output is deterministic for a given seed.

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use workbench_core::anomaly::{
    cylinderize, eval_constrained, euler_weight, modular_defect, parse_relator, reduce_boundary, verify_anomalous_theory,
    verify_anomaly, AnomalyError, ModularData,
};
use workbench_core::character2::{from_cocycle, holonomy_obstruction, verify_cocycle, verify_two_character};
use workbench_core::cobordism::{
    eval_closed_2d, parse_word, parse_word_from, random_word, CobError, CobWord, Dimension, Object, FROBENIUS_RELATIONS,
};
use workbench_core::formats::{
    from_json, to_json, AlgebraDoc, AnomalyDoc, BoundaryDoc, CharacterDoc, CocycleDoc, FixedPointDoc, FormatError,
    GroupFile, GroupRef, MatrixDoc, ModularDoc, ProjRepDoc,
};
use workbench_core::frobenius::{center, handle_element, hom_modules, is_semisimple, verify_frobenius, verify_module};
use workbench_core::group::{conjugacy_classes, small_catalog, verify_crossed_module, verify_group, FiniteGroup};
use workbench_core::projrep::{
    extract_holonomy, from_fixed_point, to_fixed_point, twisted_regular_rep, verify_fixed_point, verify_projrep,
};
use workbench_core::sampling;
use workbench_core::scalar::{set_conductor_cap, Scalar, DEFAULT_CONDUCTOR_CAP};
use workbench_core::verdict::Verdict;

pub use report::{Format, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Exact-arithmetic workbench for low-dimensional TQFT data")]
pub struct Cli {
    /// Seed for every sampled object.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest conductor accepted in scalar literals.
    #[arg(long, global = true, default_value_t = DEFAULT_CONDUCTOR_CAP)]
    pub conductor_cap: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Check several input files concurrently; output keeps input order.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Finite groups and crossed modules.
    #[command(subcommand)]
    Group(GroupAction),
    /// Group 2-cocycles.
    #[command(subcommand)]
    Cocycle(CocycleAction),
    /// 2-characters over groups and strict 2-groups.
    #[command(subcommand)]
    Character(CharacterAction),
    /// Projective representations and homotopy fixed points.
    #[command(subcommand)]
    Projrep(ProjRepAction),
    /// Frobenius algebras and their modules.
    #[command(subcommand)]
    Frob(FrobAction),
    /// Cobordism words.
    #[command(subcommand)]
    Cob(CobAction),
    /// Anomalies, anomalous theories and boundary reductions.
    #[command(subcommand)]
    Anomaly(AnomalyAction),
    /// Modular data and projective defects.
    #[command(subcommand)]
    Modular(ModularAction),
}

#[derive(Debug, Args)]
pub struct Files {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GroupAction {
    /// Group axioms, or crossed-module axioms for files with a boundary map.
    Verify(Files),
    /// Conjugacy classes of a catalog group or group file.
    Classes { group: String },
    /// Catalog groups up to the given order.
    Catalog {
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CocycleAction {
    /// Normalization and the cocycle identity.
    Verify(Files),
    /// A random `μ_n`-valued coboundary on a group.
    Sample {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        roots: u32,
    },
    /// The 2-character `T(α)`.
    Character { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum CharacterAction {
    /// Associativity, and holonomy composition and interchange over 2-groups.
    Verify(Files),
}

#[derive(Debug, Subcommand)]
pub enum ProjRepAction {
    /// The projective relation on all pairs.
    Verify(Files),
    /// The homotopy fixed point realizing a projective representation.
    FixedPoint { file: PathBuf },
    /// Fixed-point compatibility and holonomy diagrams; realizes the
    /// projective representation when the character is a cocycle.
    VerifyFixedPoint(Files),
    /// The twisted regular representation of a cocycle.
    Regular { file: PathBuf },
    /// A random projective representation for a cocycle (trivial by default).
    Sample {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FrobAction {
    /// Frobenius axioms and module axioms.
    Verify(Files),
    /// `ε(H^g)`.
    Genus {
        #[arg(long)]
        genus: u32,
        file: PathBuf,
    },
    /// The handle element `H = Σ e_i e^i`.
    Handle { file: PathBuf },
    /// A basis of the center.
    Center { file: PathBuf },
    /// `Hom_A(R_from, R_to)` between modules of the file.
    Hom {
        file: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CobAction {
    /// Parse, typecheck and print the canonical form of a word.
    Parse {
        #[arg(long, default_value = "2")]
        dim: String,
        #[arg(long)]
        source: Option<String>,
        word: String,
    },
    /// Evaluate a word: 2d through an algebra, 1d and 2c through a boundary table.
    Eval {
        #[arg(long, default_value = "2")]
        dim: String,
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// JSON matrix for the defect cylinder.
        #[arg(long)]
        defect: Option<PathBuf>,
        #[arg(long)]
        boundary: Option<PathBuf>,
        #[arg(long)]
        source: Option<String>,
        word: String,
    },
    /// The constrained cylinder `M × [0̲,1]` of a 1d word.
    Cylinderize {
        #[arg(long)]
        source: Option<String>,
        word: String,
    },
    /// Seeded random well-typed words.
    Random {
        #[arg(long, default_value = "2")]
        dim: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long)]
        source: Option<String>,
    },
    /// The Frobenius relation word pairs evaluated through an algebra.
    Relations { algebra: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum AnomalyAction {
    /// Anomaly coherence, then the anomalous-theory diagrams when present.
    Verify(Files),
    /// Reduce a boundary table of the Euler theory to a 1d anomalous theory.
    Reduce(Files),
}

#[derive(Debug, Subcommand)]
pub enum ModularAction {
    /// The scalar a relator in S, T, s = S⁻¹, t = T⁻¹ evaluates to.
    Defect { file: PathBuf, relator: String },
    /// Built-in modular data: `toric` or `semion`.
    Fixture { name: String },
}

/// A failure that stops a command, with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        CliError { code: EXIT_FAIL, message: message.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<CobError> for CliError {
    fn from(e: CobError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<AnomalyError> for CliError {
    fn from(e: AnomalyError) -> Self {
        match e {
            AnomalyError::InconsistentBoundaryData(_) | AnomalyError::NotProjectivelyTrivial => {
                CliError::failed(e.to_string())
            }
            _ => CliError::usage(e.to_string()),
        }
    }
}

type Outcome = Result<Report, CliError>;

/// Parses `argv` (including the program name), runs the command and writes
/// the report to `out`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let prev = set_conductor_cap(cli.conductor_cap);
    let (text, code) = execute(&cli);
    set_conductor_cap(prev);
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    code
}

fn execute(cli: &Cli) -> (String, i32) {
    match &cli.verb {
        Verb::Group(GroupAction::Verify(f)) => batch(cli, f, group_verify),
        Verb::Cocycle(CocycleAction::Verify(f)) => batch(cli, f, cocycle_verify),
        Verb::Character(CharacterAction::Verify(f)) => batch(cli, f, character_verify),
        Verb::Projrep(ProjRepAction::Verify(f)) => batch(cli, f, projrep_verify),
        Verb::Projrep(ProjRepAction::VerifyFixedPoint(f)) => batch(cli, f, fixed_point_verify),
        Verb::Frob(FrobAction::Verify(f)) => batch(cli, f, frob_verify),
        Verb::Anomaly(AnomalyAction::Verify(f)) => batch(cli, f, anomaly_verify),
        Verb::Anomaly(AnomalyAction::Reduce(f)) => batch(cli, f, anomaly_reduce),
        _ => single(cli, single_command(cli)),
    }
}

fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Ok(r) if r.failed() => EXIT_FAIL,
        Ok(_) => EXIT_PASS,
        Err(e) => e.code,
    }
}

fn render(outcome: &Outcome, input: Option<&str>) -> (String, Value) {
    match outcome {
        Ok(r) => (r.render_text(input), r.to_json(input)),
        Err(e) => {
            let pre = input.map(|p| format!("{p}: ")).unwrap_or_default();
            let json = serde_json::json!({"input": input, "error": e.message, "exit": e.code});
            (format!("{pre}error: {}\n", e.message), json)
        }
    }
}

fn single(cli: &Cli, outcome: Outcome) -> (String, i32) {
    let code = exit_code(&outcome);
    let (text, json) = render(&outcome, None);
    match cli.format {
        Format::Text => (text, code),
        Format::Json => (format!("{}\n", serde_json::to_string_pretty(&json).expect("json")), code),
    }
}

/// Runs `check` on every file, concurrently with `--parallel`, and renders
/// the reports in input order. Lines are prefixed with the path when there
/// is more than one file.
fn batch(cli: &Cli, files: &Files, check: fn(&str) -> Outcome) -> (String, i32) {
    let run_one = |path: &Path| -> Outcome {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        check(&text)
    };
    let outcomes: Vec<Outcome> = if cli.parallel && files.files.len() > 1 {
        let cap = cli.conductor_cap;
        std::thread::scope(|s| {
            let handles: Vec<_> = files
                .files
                .iter()
                .map(|p| {
                    s.spawn(move || {
                        set_conductor_cap(cap);
                        run_one(p)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    } else {
        files.files.iter().map(|p| run_one(p)).collect()
    };
    let many = files.files.len() > 1;
    let mut code = EXIT_PASS;
    let mut text = String::new();
    let mut json = Vec::new();
    for (path, outcome) in files.files.iter().zip(&outcomes) {
        code = code.max(exit_code(outcome));
        let name = path.display().to_string();
        let (t, j) = render(outcome, many.then_some(name.as_str()));
        text.push_str(&t);
        json.push(j);
    }
    match cli.format {
        Format::Text => (text, code),
        Format::Json => {
            let value = if many { Value::Array(json) } else { json.pop().expect("one file") };
            (format!("{}\n", serde_json::to_string_pretty(&value).expect("json")), code)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

/// A catalog spec such as `cyclic(4)`, or a path to a group file.
fn group_arg(arg: &str) -> Result<FiniteGroup, CliError> {
    if Path::new(arg).is_file() {
        let doc: GroupRef = from_json(&read(Path::new(arg))?)?;
        return Ok(doc.build()?);
    }
    Ok(GroupRef::Catalog(arg.to_string()).build()?)
}

fn dimension(text: &str) -> Result<Dimension, CliError> {
    match text {
        "1" => Ok(Dimension::One),
        "2" => Ok(Dimension::Two),
        "2c" => Ok(Dimension::Constrained),
        _ => Err(CliError::usage(format!("unknown dimension {text:?}; expected 1, 2 or 2c"))),
    }
}

fn word_arg(text: &str, dim: Dimension, source: &Option<String>) -> Result<CobWord, CliError> {
    Ok(match source {
        None => parse_word(text, dim)?,
        Some(s) => parse_word_from(text, dim, &object_arg(s, dim)?)?,
    })
}

/// Sign strings name constrained objects when the dimension is `2c`.
fn object_arg(text: &str, dim: Dimension) -> Result<Object, CliError> {
    Ok(match (Object::parse(text)?, dim) {
        (Object::Points(v), Dimension::Constrained) => Object::Constrained(v),
        (o, _) => o,
    })
}

fn document(json: String) -> Value {
    serde_json::from_str(&json).expect("documents round-trip through JSON")
}

// ---------------------------------------------------------------------------
// Batch checks
// ---------------------------------------------------------------------------

fn group_verify(text: &str) -> Outcome {
    let mut r = Report::new();
    match from_json::<GroupFile>(text)? {
        GroupFile::Group(g) => {
            r.verdict(verify_group(&g.build()?));
        }
        GroupFile::CrossedModule(x) => {
            let x = x.build()?;
            r.labelled_verdict("base", verify_group(&x.base));
            r.labelled_verdict("fiber", verify_group(&x.fiber));
            r.verdict(verify_crossed_module(&x));
        }
    }
    Ok(r)
}

fn cocycle_verify(text: &str) -> Outcome {
    let alpha = from_json::<CocycleDoc>(text)?.build()?;
    let mut r = Report::new();
    r.verdict(verify_cocycle(&alpha));
    Ok(r)
}

fn character_verify(text: &str) -> Outcome {
    let c = from_json::<CharacterDoc>(text)?.build()?;
    let mut r = Report::new();
    r.verdict(verify_two_character(&c));
    if c.crossed_module().is_some() {
        match holonomy_obstruction(&c).map_err(|e| CliError::usage(e.to_string()))? {
            None => r.field("holonomy", "trivial on loops"),
            Some((a, g)) => {
                let x = c.crossed_module().expect("2-group");
                r.field(
                    "holonomy",
                    format!("nontrivial at (a={}, g={}); no nonzero fixed point exists", x.fiber.name(a), x.base.name(g)),
                )
            }
        };
    }
    Ok(r)
}

fn projrep_verify(text: &str) -> Outcome {
    let p = from_json::<ProjRepDoc>(text)?.build()?;
    let mut r = Report::new();
    r.verdict(verify_projrep(&p));
    Ok(r)
}

fn fixed_point_verify(text: &str) -> Outcome {
    let p = from_json::<FixedPointDoc>(text)?.build()?;
    let mut r = Report::new();
    let v = verify_fixed_point(&p);
    let ok = v.passed();
    r.verdict(v);
    if !ok {
        return Ok(r);
    }
    if p.character.is_cocycle_form() {
        let rho = from_fixed_point(&p).map_err(|e| CliError::usage(e.to_string()))?;
        r.labelled_verdict("realization", verify_projrep(&rho));
    } else if let (Some(x), true) = (p.character.crossed_module(), p.dim > 0) {
        let g = p.character.group();
        let hol = p.character.holonomy.as_ref().expect("2-group character");
        let mut v = Verdict::new("holonomy extraction", "morphisms");
        'outer: for a in x.fiber.elements() {
            for gi in g.elements() {
                let got = extract_holonomy(&p, a, gi).ok();
                let ok = got.as_ref() == Some(&hol[a][gi]);
                if !v.record(ok, || {
                    workbench_core::verdict::Failure::new(
                        "holonomy extraction",
                        vec![a, gi],
                        format!("(a={}, g={})", x.fiber.name(a), g.name(gi)),
                    )
                }) {
                    break 'outer;
                }
            }
        }
        r.verdict(v.finish());
    }
    Ok(r)
}

fn frob_verify(text: &str) -> Outcome {
    let doc = from_json::<AlgebraDoc>(text)?;
    let a = doc.build()?;
    let report = verify_frobenius(&a);
    let mut r = Report::new();
    let ok = report.verdict.passed();
    r.verdict(report.verdict);
    if ok {
        r.field("commutative", report.commutative.to_string());
        r.field("symmetric", report.symmetric.to_string());
        r.field("semisimple", is_semisimple(&a).to_string());
    }
    for (i, m) in doc.build_modules(&a)?.iter().enumerate() {
        r.labelled_verdict(&format!("module {i}"), verify_module(m));
    }
    Ok(r)
}

fn anomaly_verify(text: &str) -> Outcome {
    let doc = from_json::<AnomalyDoc>(text)?;
    let w = doc.build_anomaly()?;
    let mut r = Report::new();
    let v = verify_anomaly(&w);
    let ok = v.passed();
    r.verdict(v);
    if ok {
        if let Some(z) = doc.build_theory()? {
            r.verdict(verify_anomalous_theory(&z));
        }
    }
    Ok(r)
}

fn anomaly_reduce(text: &str) -> Outcome {
    let (lambda, bc) = from_json::<BoundaryDoc>(text)?.build()?;
    let z = reduce_boundary(&lambda, &bc)?;
    let mut r = Report::new();
    r.verdict(verify_anomaly(&z.anomaly));
    r.verdict(verify_anomalous_theory(&z));
    let values = workbench_core::anomaly::auto_model_1d()?;
    for (label, source, word) in [("circle", "", "coev ; swap ; ev"), ("strip", "", "lbnd ; rbnd")] {
        if let Some(m) = workbench_core::anomaly::find_word(&values, source, word) {
            r.matrix(Some(label), &z.maps[m]);
        }
    }
    Ok(r)
}

// ---------------------------------------------------------------------------
// Single commands
// ---------------------------------------------------------------------------

fn single_command(cli: &Cli) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut r = Report::new();
    match &cli.verb {
        Verb::Group(GroupAction::Classes { group }) => {
            let g = group_arg(group)?;
            r.field("order", g.order().to_string());
            for class in conjugacy_classes(&g) {
                let names: Vec<&str> = class.iter().map(|&x| g.name(x)).collect();
                r.value(format!("{{{}}}", names.join(", ")));
            }
        }
        Verb::Group(GroupAction::Catalog { max_order }) => {
            for (spec, g) in small_catalog(*max_order) {
                r.field(&spec, format!("order {}", g.order()));
            }
        }
        Verb::Cocycle(CocycleAction::Sample { group, roots }) => {
            let g = group_arg(group)?;
            if *roots == 0 {
                return Err(CliError::usage("--roots must be positive"));
            }
            let alpha = sampling::random_cohomologous(&mut rng, &workbench_core::character2::Cocycle::trivial(g), *roots);
            r.document(document(to_json(&CocycleDoc::from_cocycle(&alpha))));
        }
        Verb::Cocycle(CocycleAction::Character { file }) => {
            let alpha = from_json::<CocycleDoc>(&read(file)?)?.build()?;
            let v = verify_cocycle(&alpha);
            if !v.passed() {
                r.verdict(v);
                return Ok(r);
            }
            let c = from_cocycle(&alpha);
            r.document(document(to_json(&CharacterDoc::from_character(&c))));
            r.verdict(verify_two_character(&c));
        }
        Verb::Projrep(ProjRepAction::FixedPoint { file }) => {
            let p = from_json::<ProjRepDoc>(&read(file)?)?.build()?;
            let v = verify_projrep(&p);
            if !v.passed() {
                r.verdict(v);
                return Ok(r);
            }
            let fp = to_fixed_point(&p);
            r.document(document(to_json(&FixedPointDoc::from_fixed_point(&fp))));
            r.verdict(verify_fixed_point(&fp));
        }
        Verb::Projrep(ProjRepAction::Regular { file }) => {
            let alpha = from_json::<CocycleDoc>(&read(file)?)?.build()?;
            let v = verify_cocycle(&alpha);
            if !v.passed() {
                r.verdict(v);
                return Ok(r);
            }
            r.document(document(to_json(&ProjRepDoc::from_projrep(&twisted_regular_rep(&alpha)))));
        }
        Verb::Projrep(ProjRepAction::Sample { group, cocycle }) => {
            let g = group_arg(group)?;
            let twist = match cocycle {
                None => workbench_core::character2::Cocycle::trivial(g),
                Some(f) => {
                    let a = from_json::<CocycleDoc>(&read(f)?)?.build()?;
                    if a.group() != &g {
                        return Err(CliError::usage("cocycle lives on a different group"));
                    }
                    a
                }
            };
            let v = verify_cocycle(&twist);
            if !v.passed() {
                r.verdict(v);
                return Ok(r);
            }
            r.document(document(to_json(&ProjRepDoc::from_projrep(&sampling::random_projrep(&mut rng, &twist)))));
        }
        Verb::Frob(action) => frob_command(action, &mut r)?,
        Verb::Cob(action) => cob_command(action, &mut rng, &mut r)?,
        Verb::Modular(ModularAction::Defect { file, relator }) => {
            let m = from_json::<ModularDoc>(&read(file)?)?.build()?;
            let rel = parse_relator(relator)?;
            r.scalar(None, &modular_defect(&m, &rel)?);
        }
        Verb::Modular(ModularAction::Fixture { name }) => {
            let m = match name.as_str() {
                "toric" => ModularData::toric_code(),
                "semion" => ModularData::semion(),
                _ => return Err(CliError::usage(format!("unknown fixture {name:?}; expected toric or semion"))),
            };
            r.document(document(to_json(&ModularDoc::from_data(&m))));
        }
        _ => unreachable!("batch commands are dispatched in execute"),
    }
    Ok(r)
}

fn load_algebra(path: &Path) -> Result<(AlgebraDoc, workbench_core::frobenius::FrobeniusAlgebra), CliError> {
    let doc = from_json::<AlgebraDoc>(&read(path)?)?;
    let a = doc.build()?;
    let report = verify_frobenius(&a);
    if let Some(f) = report.verdict.failure {
        return Err(CliError::failed(format!("{} violated at {}", f.relation, f.message)));
    }
    Ok((doc, a))
}

fn vector_text(v: &[Scalar]) -> String {
    format!("[{}]", v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", "))
}

fn frob_command(action: &FrobAction, r: &mut Report) -> Result<(), CliError> {
    match action {
        FrobAction::Genus { genus, file } => {
            let (_, a) = load_algebra(file)?;
            let z = workbench_core::cobordism::genus_invariant(*genus, &a)?;
            r.scalar(None, &z);
        }
        FrobAction::Handle { file } => {
            let (_, a) = load_algebra(file)?;
            let h = handle_element(&a).map_err(|e| CliError::usage(e.to_string()))?;
            r.value(vector_text(&h));
        }
        FrobAction::Center { file } => {
            let (_, a) = load_algebra(file)?;
            let basis = center(&a);
            r.field("dimension", basis.len().to_string());
            for v in basis {
                r.value(vector_text(&v));
            }
        }
        FrobAction::Hom { file, from, to } => {
            let (doc, a) = load_algebra(file)?;
            let modules = doc.build_modules(&a)?;
            let get = |i: usize| {
                modules
                    .get(i)
                    .ok_or_else(|| CliError::usage(format!("module {i} not in file ({} modules)", modules.len())))
            };
            let (ra, rb) = (get(*from)?, get(*to)?);
            for (i, m) in [(*from, ra), (*to, rb)] {
                let v = verify_module(m);
                if !v.passed() {
                    r.labelled_verdict(&format!("module {i}"), v);
                    return Ok(());
                }
            }
            let basis = hom_modules(ra, rb).map_err(|e| CliError::usage(e.to_string()))?;
            r.field("dimension", basis.len().to_string());
            for (k, m) in basis.iter().enumerate() {
                r.matrix(Some(&format!("basis {k}")), m);
            }
        }
        FrobAction::Verify(_) => unreachable!("batch"),
    }
    Ok(())
}

fn cob_command(action: &CobAction, rng: &mut ChaCha8Rng, r: &mut Report) -> Result<(), CliError> {
    match action {
        CobAction::Parse { dim, source, word } => {
            let w = word_arg(word, dimension(dim)?, source)?;
            r.value(w.to_string());
            r.field("type", format!("{} -> {}", w.source, w.target));
        }
        CobAction::Eval { dim, algebra, defect, boundary, source, word } => {
            let dim = dimension(dim)?;
            let w = word_arg(word, dim, source)?;
            let m = match dim {
                Dimension::Two => {
                    let path = algebra.as_ref().ok_or_else(|| CliError::usage("2d evaluation needs --algebra"))?;
                    let (_, a) = load_algebra(path)?;
                    let d = match defect {
                        Some(p) => Some(workbench_core::formats::matrix_from_doc(&from_json::<MatrixDoc>(&read(p)?)?)?),
                        None => None,
                    };
                    eval_closed_2d(&w, &a, d.as_ref())?
                }
                Dimension::One | Dimension::Constrained => {
                    let path = boundary
                        .as_ref()
                        .ok_or_else(|| CliError::usage("1d and 2c evaluation need --boundary"))?;
                    let (lambda, bc) = from_json::<BoundaryDoc>(&read(path)?)?.build()?;
                    if dim == Dimension::One {
                        if lambda.is_zero() {
                            return Err(AnomalyError::ZeroLambda.into());
                        }
                        let factor = lambda.pow(euler_weight(&w)).expect("nonzero");
                        eval_constrained(&cylinderize(&w)?, &bc)?.scale(&factor)
                    } else {
                        eval_constrained(&w, &bc)?
                    }
                }
            };
            r.matrix(None, &m);
        }
        CobAction::Cylinderize { source, word } => {
            let w = word_arg(word, Dimension::One, source)?;
            let c = cylinderize(&w)?;
            r.value(c.to_string());
            r.field("type", format!("{} -> {}", c.source, c.target));
        }
        CobAction::Random { dim, depth, count, width, source } => {
            let dim = dimension(dim)?;
            let source = match (source, dim) {
                (Some(s), _) => object_arg(s, dim)?,
                (None, Dimension::Two) => Object::Circles(1),
                (None, Dimension::One) => Object::Points(Vec::new()),
                (None, Dimension::Constrained) => Object::Constrained(Vec::new()),
            };
            for _ in 0..*count {
                r.value(random_word(rng, dim, *depth, &source, *width).to_string());
            }
        }
        CobAction::Relations { algebra } => {
            let (_, a) = load_algebra(algebra)?;
            let mut v = Verdict::new("Frobenius relations", "word pairs");
            for (name, lhs, rhs) in FROBENIUS_RELATIONS {
                let l = parse_word(lhs, Dimension::Two)?;
                let rw = parse_word_from(rhs, Dimension::Two, &l.source)?;
                let ok = eval_closed_2d(&l, &a, None)? == eval_closed_2d(&rw, &a, None)?;
                if !v.record(ok, || {
                    workbench_core::verdict::Failure::new(name, vec![], format!("{lhs} = {rhs}"))
                }) {
                    break;
                }
            }
            r.verdict(v.finish());
        }
    }
    Ok(())
}
