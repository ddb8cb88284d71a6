//! Command-line front end.
//!
//! Exit codes: 0 for a positive answer or success, 1 for a negative answer or
//! a reported violation, 2 for input errors.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use lagsphere_core::cone::{
    enumerate_exceptional, in_cone, inflation_admissible, is_lagrangian_spherical, ConeVerdict,
    ConeViolation, LagrangianFailure, LagrangianVerdict, SphericalCertificate,
};
use lagsphere_core::oracle::{
    crosscheck_classes, enumerate, knull_coeff_bound, CrossReport, EnumQuery, Predicate,
};
use lagsphere_core::parse::ModelParseError;
use lagsphere_core::reduction::{
    cremona_reduce, eta_k, eta_lower_bound, gt_dimension, is_exceptional, is_k_null_spherical,
    is_reduced, reduce_to_binary, ruled_knull_classes, NormalForm, NormalKind,
};
use lagsphere_core::twist::{
    decompose_k, decompose_k_alpha, decompose_ruled, validate, IsometryMatrix, ValidationReport,
};
use lagsphere_core::{
    form_pairing, is_characteristic, parse_class, parse_form, FormClass, HomClass, LatticeError,
    LatticeModel, Rational, ReflectionWord,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::json::{self, class_to_json, form_to_json, rational_coeff, JsonError};

#[derive(Debug, Parser)]
#[command(name = "lagsphere", version, about = "Exact homology-lattice computations for rational and ruled 4-manifolds")]
pub struct Cli {
    /// Lattice model, e.g. `rational:6` or `ruled:h=2,n=3`.
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Degree bound for exceptional classes when the set is infinite (n >= 9).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_bound: Option<u64>,
    /// Seed for randomized steps; echoed in the output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Exceptional,
    Knull,
    Characteristic,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Exceptional,
    Knull,
    Characteristic,
}

impl From<CheckKind> for Predicate {
    fn from(k: CheckKind) -> Self {
        match k {
            CheckKind::Exceptional => Predicate::Exceptional,
            CheckKind::Knull => Predicate::Knull,
            CheckKind::Characteristic => Predicate::Characteristic,
        }
    }
}

/// Classes and forms are given as expressions (`"2H - E1 - E2"`) or as
/// `@path` to a JSON file.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full classification report for a class.
    Classify { class: String },
    /// Is the class represented by a Lagrangian sphere for the given form?
    Lagrangian {
        class: String,
        form: String,
        /// Accept a cone check that is only complete up to the degree bound.
        #[arg(long)]
        allow_bounded: bool,
    },
    /// Cremona reduction with its certificate word.
    Reduce { class: String },
    /// Factor an isometry into twists.
    Decompose {
        /// JSON matrix file.
        #[arg(long)]
        matrix: String,
        /// Preserved form; required for ruled models.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        allow_bounded: bool,
    },
    /// List classes of a given kind.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Coefficient bound for a brute-force scan.
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        square: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_pairing: Option<i64>,
        /// Lift the scan's safety limits.
        #[arg(long)]
        override_limits: bool,
    },
    /// Symplectic cone membership.
    Cone {
        #[arg(long)]
        form: String,
        /// Also test the inflation hypotheses for this class.
        #[arg(long)]
        inflation: Option<String>,
        #[arg(long)]
        allow_bounded: bool,
    },
    /// Compare library decisions with brute-force oracles.
    Crosscheck {
        #[arg(long, value_enum)]
        predicate: CheckKind,
        #[arg(long)]
        bound: u32,
        #[arg(long, allow_hyphen_values = true)]
        square: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_pairing: Option<i64>,
        /// Orbit search depth (default 2n).
        #[arg(long)]
        depth: Option<usize>,
        /// Check a random sample of this many classes.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        override_limits: bool,
    },
}

/// Input error, reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
    pub position: Option<usize>,
}

impl InputError {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            position: None,
        }
    }
}

impl From<JsonError> for InputError {
    fn from(e: JsonError) -> Self {
        Self::new("json", e.to_string())
    }
}

impl From<ModelParseError> for InputError {
    fn from(e: ModelParseError) -> Self {
        Self::new("model", e.to_string())
    }
}

impl From<LatticeError> for InputError {
    fn from(e: LatticeError) -> Self {
        Self::new("lattice", e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Yes,
    No,
}

/// A command result: the JSON record and its text rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

/// Everything a run produced, for callers that do not want a process.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> RunResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                RunResult { code, stdout: rendered, stderr: String::new() }
            } else {
                RunResult { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let json_out = cli.output == Output::Json;
    match execute(&cli) {
        Ok(mut report) => {
            if let (Some(seed), Value::Object(map)) = (cli.seed, &mut report.json) {
                map.insert("seed".into(), json!(seed));
            }
            let stdout = if json_out {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                let mut t = report.text;
                if let Some(seed) = cli.seed {
                    let _ = writeln!(t, "seed: {seed}");
                }
                t
            };
            let code = match report.status {
                Status::Yes => 0,
                Status::No => 1,
            };
            RunResult { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            if json_out {
                let mut err = json!({"kind": e.kind, "message": e.message});
                if let Some(p) = e.position {
                    err["position"] = json!(p);
                }
                let v = json!({ "error": err });
                RunResult {
                    code: 2,
                    stdout: format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
                    stderr: String::new(),
                }
            } else {
                let pos = e.position.map(|p| format!(" at position {p}")).unwrap_or_default();
                RunResult {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error ({}){pos}: {}\n", e.kind, e.message),
                }
            }
        }
    }
}

fn model_arg(cli: &Cli) -> Result<Option<LatticeModel>, InputError> {
    cli.model.as_deref().map(str::parse).transpose().map_err(InputError::from)
}

fn require_model(cli: &Cli) -> Result<LatticeModel, InputError> {
    model_arg(cli)?.ok_or_else(|| InputError::new("usage", "--model is required"))
}

fn read_file(arg: &str) -> Result<String, InputError> {
    std::fs::read_to_string(arg).map_err(|e| InputError::new("io", format!("{arg}: {e}")))
}

fn agree(from_file: LatticeModel, flag: Option<LatticeModel>) -> Result<(), InputError> {
    match flag {
        Some(m) if m != from_file => Err(InputError::new(
            "model",
            format!("file is for {from_file} but --model is {m}"),
        )),
        _ => Ok(()),
    }
}

fn read_class(arg: &str, model: Option<LatticeModel>) -> Result<HomClass, InputError> {
    if let Some(path) = arg.strip_prefix('@') {
        let x = json::parse_class_json(&read_file(path)?)?;
        agree(x.model(), model)?;
        return Ok(x);
    }
    let model = model.ok_or_else(|| InputError::new("usage", "--model is required"))?;
    parse_class(arg, model).map_err(|e| InputError {
        kind: "parse",
        message: e.to_string(),
        position: Some(e.pos),
    })
}

fn read_form(arg: &str, model: Option<LatticeModel>) -> Result<FormClass, InputError> {
    if let Some(path) = arg.strip_prefix('@') {
        let x = json::parse_form_json(&read_file(path)?)?;
        agree(x.model(), model)?;
        return Ok(x);
    }
    let model = model.ok_or_else(|| InputError::new("usage", "--model is required"))?;
    parse_form(arg, model).map_err(|e| InputError {
        kind: "parse",
        message: e.to_string(),
        position: Some(e.pos),
    })
}

fn class_value(x: &HomClass) -> Value {
    let mut v = serde_json::to_value(class_to_json(x)).expect("serializable");
    v["text"] = json!(x.to_string());
    v
}

fn form_value(x: &FormClass) -> Value {
    let mut v = serde_json::to_value(form_to_json(x)).expect("serializable");
    v["text"] = json!(x.to_string());
    v
}

fn q(v: &Rational) -> Value {
    serde_json::to_value(rational_coeff(v)).expect("serializable")
}

fn word_value(w: &ReflectionWord) -> Value {
    Value::Array(w.generators().iter().map(class_value).collect())
}

fn word_text(w: &ReflectionWord) -> String {
    if w.is_empty() {
        return "(empty)".into();
    }
    let parts: Vec<String> = w.generators().iter().map(|g| format!("R({g})")).collect();
    parts.join(" then ")
}

fn normal_form_value(nf: &NormalForm) -> Value {
    json!({
        "kind": nf.kind.name(),
        "representative": class_value(&nf.representative),
        "sign_flipped": nf.sign_flipped,
        "word": word_value(&nf.word),
        "diagnostic": nf.diagnostic,
    })
}

fn normal_form_text(out: &mut String, label: &str, nf: &NormalForm) {
    let sign = if nf.sign_flipped { "-" } else { "" };
    let _ = writeln!(out, "{label}: {} {sign}({})", nf.kind.name(), nf.representative);
    let _ = writeln!(out, "  word: {}", word_text(&nf.word));
    if let Some(d) = &nf.diagnostic {
        let _ = writeln!(out, "  note: {d}");
    }
}

fn execute(cli: &Cli) -> Result<Report, InputError> {
    let flag_model = model_arg(cli)?;
    match &cli.command {
        Command::Classify { class } => classify(&read_class(class, flag_model)?),
        Command::Lagrangian { class, form, allow_bounded } => {
            let x = read_class(class, flag_model)?;
            let tau = read_form(form, Some(x.model()))?;
            lagrangian(&x, &tau, cli.degree_bound, *allow_bounded)
        }
        Command::Reduce { class } => reduce(&read_class(class, flag_model)?),
        Command::Decompose { matrix, alpha, allow_bounded } => {
            let path = matrix.strip_prefix('@').unwrap_or(matrix);
            let m = json::parse_matrix_json(&read_file(path)?)?;
            agree(m.model(), flag_model)?;
            let alpha = alpha.as_deref().map(|a| read_form(a, Some(m.model()))).transpose()?;
            decompose(&m, alpha.as_ref(), cli.degree_bound, *allow_bounded)
        }
        Command::Enumerate { kind, bound, square, k_pairing, override_limits } => {
            let model = require_model(cli)?;
            enumerate_cmd(model, *kind, *bound, *square, *k_pairing, *override_limits, cli.degree_bound)
        }
        Command::Cone { form, inflation, allow_bounded } => {
            let tau = read_form(form, flag_model)?;
            let a = inflation.as_deref().map(|a| read_class(a, Some(tau.model()))).transpose()?;
            cone(&tau, a.as_ref(), cli.degree_bound, *allow_bounded)
        }
        Command::Crosscheck { predicate, bound, square, k_pairing, depth, sample, override_limits } => {
            let model = require_model(cli)?;
            let (sq, kp) = match predicate {
                CheckKind::Exceptional => (Some(-1), Some(-1)),
                CheckKind::Knull => (Some(-2), Some(0)),
                CheckKind::Characteristic => (None, None),
            };
            let mut query = EnumQuery::new(model, *bound).override_limits(*override_limits);
            query.square = square.or(sq);
            query.k_pairing = k_pairing.or(kp);
            crosscheck_cmd(&query, (*predicate).into(), *depth, *sample, cli.seed)
        }
    }
}

pub fn classify(x: &HomClass) -> Result<Report, InputError> {
    let model = x.model();
    let k = model.k0_form();
    let square = x.square();
    let kx = form_pairing(&k, x)?;
    let characteristic = is_characteristic(x);
    let exceptional = is_exceptional(x, &k)?;
    let knull = is_k_null_spherical(x, &k)?;
    let eta = eta_k(x, &k)?;
    let dim = gt_dimension(x, &k)?;
    let mut j = json!({
        "command": "classify",
        "class": class_value(x),
        "square": q(&Rational::from(square.clone())),
        "k0_pairing": q(&kx),
        "characteristic": characteristic,
        "exceptional": exceptional,
        "knull": knull,
        "eta_k0": q(&eta),
        "gt_dimension": q(&dim),
    });
    let mut t = String::new();
    let _ = writeln!(t, "class: {x} in {model}");
    let _ = writeln!(t, "square: {square}");
    let _ = writeln!(t, "K0 pairing: {kx}");
    let _ = writeln!(t, "characteristic: {characteristic}");
    let _ = writeln!(t, "exceptional: {exceptional}");
    let _ = writeln!(t, "knull: {knull}");
    let _ = writeln!(t, "eta_K0: {eta}");
    let _ = writeln!(t, "GT dimension: {dim}");
    if model.is_rational() {
        let reduced = is_reduced(x)?;
        j["reduced"] = json!(reduced);
        let _ = writeln!(t, "reduced: {reduced}");
        match eta_lower_bound(x) {
            Ok(b) => {
                j["eta_lower_bound"] = json!({"value": q(&b.value), "exact": b.exact});
                let exact = if b.exact { " (exact)" } else { "" };
                let _ = writeln!(t, "genus lower bound: {}{exact}", b.value);
            }
            Err(_) => j["eta_lower_bound"] = Value::Null,
        }
        let nf = cremona_reduce(x)?;
        j["normal_form"] = normal_form_value(&nf);
        normal_form_text(&mut t, "normal form", &nf);
    } else {
        j["normal_form"] = Value::Null;
    }
    Ok(Report { status: Status::Yes, json: j, text: t })
}

fn failure_text(f: &LagrangianFailure) -> (String, Value) {
    match f {
        LagrangianFailure::SquareNotMinusTwo(s) => (format!("square {s} is not -2"), json!({"square": s.to_string()})),
        LagrangianFailure::KPairingNonzero(v) => (format!("K pairing {v} is not 0"), json!({"k_pairing": q(v)})),
        LagrangianFailure::NotSpherical(kind) => (
            format!("not spherical (normal form kind {})", kind.name()),
            json!({"normal_form_kind": kind.name()}),
        ),
        LagrangianFailure::NonzeroArea(a) => (format!("nonzero area {a}"), json!({"area": q(a)})),
    }
}

pub fn lagrangian(
    x: &HomClass,
    tau: &FormClass,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<Report, InputError> {
    let model = x.model();
    let verdict = is_lagrangian_spherical(x, tau, &model.k0_form(), degree_bound, allow_bounded)?;
    let mut j = json!({
        "command": "lagrangian",
        "class": class_value(x),
        "form": form_value(tau),
        "lagrangian": verdict.is_yes(),
    });
    let mut t = String::new();
    if !model.is_rational() {
        j["cone_note"] = json!("ruled cone checked on the stated conditions only");
    }
    let status = match &verdict {
        LagrangianVerdict::Yes {
            certificate,
            characteristic,
            cone_bound,
            hamiltonian_uniqueness,
            smooth_uniqueness,
        } => {
            let _ = writeln!(t, "lagrangian: yes");
            j["characteristic"] = json!(characteristic);
            j["cone_bound"] = json!(cone_bound);
            j["hamiltonian_uniqueness"] = json!(hamiltonian_uniqueness);
            j["smooth_uniqueness"] = json!(smooth_uniqueness);
            match certificate {
                SphericalCertificate::Reduction(nf) => {
                    j["certificate"] = normal_form_value(nf);
                    normal_form_text(&mut t, "certificate", nf);
                }
                SphericalCertificate::RuledListed => {
                    j["certificate"] = json!({"kind": "ruled-listed"});
                    let _ = writeln!(t, "certificate: listed ruled twist class");
                }
            }
            let _ = writeln!(t, "characteristic: {characteristic}");
            let _ = writeln!(t, "hamiltonian uniqueness applies: {hamiltonian_uniqueness}");
            let _ = writeln!(t, "smooth uniqueness applies: {smooth_uniqueness}");
            if let Some(b) = cone_bound {
                let _ = writeln!(t, "cone checked up to degree {b}");
            }
            Status::Yes
        }
        LagrangianVerdict::No(f) => {
            let (msg, detail) = failure_text(f);
            let _ = writeln!(t, "lagrangian: no ({msg})");
            j["reason"] = json!(msg);
            j["detail"] = detail;
            Status::No
        }
    };
    Ok(Report { status, json: j, text: t })
}

pub fn reduce(x: &HomClass) -> Result<Report, InputError> {
    let nf = cremona_reduce(x)?;
    let mut j = json!({
        "command": "reduce",
        "class": class_value(x),
        "normal_form": normal_form_value(&nf),
    });
    let mut t = String::new();
    normal_form_text(&mut t, "normal form", &nf);
    if nf.kind == NormalKind::Ternary && x.model().n() >= 4 {
        let b = reduce_to_binary(x)?;
        j["binary_form"] = normal_form_value(&b);
        normal_form_text(&mut t, "binary form", &b);
    }
    Ok(Report { status: Status::Yes, json: j, text: t })
}

fn validation_value(r: &ValidationReport) -> Value {
    json!({
        "ok": r.is_ok(),
        "preserves_gram": r.preserves_gram,
        "preserves_k": r.preserves_k,
        "preserves_alpha": r.preserves_alpha,
        "violations": r.violations(),
    })
}

fn is_violation(e: &LatticeError) -> bool {
    matches!(
        e,
        LatticeError::Validation(_)
            | LatticeError::ResidualNotResolvable(_)
            | LatticeError::MinimalityBasisFailed(_)
            | LatticeError::NoTwistsAvailable
            | LatticeError::FormNotInCone
    )
}

pub fn decompose(
    m: &IsometryMatrix,
    alpha: Option<&FormClass>,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<Report, InputError> {
    let model = m.model();
    let report = validate(m, &model.k0_form(), alpha);
    let result = match (model.is_rational(), alpha) {
        (true, None) => decompose_k(m),
        (true, Some(a)) => decompose_k_alpha(m, a, degree_bound, allow_bounded),
        (false, Some(a)) => decompose_ruled(m, a),
        (false, None) => {
            return Err(InputError::new("usage", "--alpha is required for ruled models"));
        }
    };
    let mut j = json!({
        "command": "decompose",
        "matrix": serde_json::to_value(json::matrix_to_json(m)).expect("serializable"),
        "validation": validation_value(&report),
    });
    if let Some(a) = alpha {
        j["alpha"] = form_value(a);
    }
    let mut t = String::new();
    match result {
        Ok(w) => {
            j["ok"] = json!(true);
            j["length"] = json!(w.len());
            j["word"] = word_value(&w);
            let _ = writeln!(t, "word ({} twists): {}", w.len(), word_text(&w));
            Ok(Report { status: Status::Yes, json: j, text: t })
        }
        Err(e) if is_violation(&e) => {
            j["ok"] = json!(false);
            j["reason"] = json!(e.to_string());
            let _ = writeln!(t, "not decomposed: {e}");
            Ok(Report { status: Status::No, json: j, text: t })
        }
        Err(e) => Err(e.into()),
    }
}

fn list_report(
    kind: &str,
    model: LatticeModel,
    classes: &[HomClass],
    complete: bool,
    extra: Value,
) -> Report {
    let mut j = json!({
        "command": "enumerate",
        "kind": kind,
        "model": serde_json::to_value(json::ModelJson::from(model)).expect("serializable"),
        "count": classes.len(),
        "complete": complete,
        "classes": classes.iter().map(class_value).collect::<Vec<_>>(),
    });
    if let (Value::Object(map), Value::Object(more)) = (&mut j, extra) {
        map.extend(more);
    }
    let mut t = String::new();
    let done = if complete { "" } else { " (bounded)" };
    let _ = writeln!(t, "{} {kind} classes in {model}{done}", classes.len());
    for x in classes {
        let _ = writeln!(t, "  {x}");
    }
    Report { status: Status::Yes, json: j, text: t }
}

#[allow(clippy::too_many_arguments)]
pub fn enumerate_cmd(
    model: LatticeModel,
    kind: Kind,
    bound: Option<u32>,
    square: Option<i64>,
    k_pairing: Option<i64>,
    override_limits: bool,
    degree_bound: Option<u64>,
) -> Result<Report, InputError> {
    let name = match kind {
        Kind::Exceptional => "exceptional",
        Kind::Knull => "knull",
        Kind::Characteristic => "characteristic",
        Kind::Any => "any",
    };
    let scan = |bound: u32, default_sq: Option<i64>, default_k: Option<i64>, p: Option<Predicate>| {
        let mut query = EnumQuery::new(model, bound).override_limits(override_limits);
        query.square = square.or(default_sq);
        query.k_pairing = k_pairing.or(default_k);
        query.predicate = p;
        enumerate(&query).map_err(InputError::from)
    };
    let filtered = square.is_some() || k_pairing.is_some();
    match (kind, bound) {
        (Kind::Exceptional, None) if !filtered => {
            let set = enumerate_exceptional(model, &model.k0_form(), degree_bound)?;
            Ok(list_report(name, model, &set.classes, set.complete, json!({"degree_bound": set.degree_bound})))
        }
        (Kind::Knull, None) if !filtered && !model.is_rational() => {
            let mut classes = ruled_knull_classes(model);
            classes.sort();
            Ok(list_report(name, model, &classes, true, json!({})))
        }
        (Kind::Knull, None) if !filtered => {
            let b = knull_coeff_bound(model.n()).ok_or_else(|| {
                InputError::new("usage", "the K-null set is infinite for n >= 9; pass --bound")
            })?;
            let classes = scan(b, Some(-2), Some(0), Some(Predicate::Knull))?;
            Ok(list_report(name, model, &classes, true, json!({})))
        }
        (_, None) => Err(InputError::new("usage", format!("--bound is required for --kind {name}"))),
        (kind, Some(b)) => {
            let (sq, kp, p) = match kind {
                Kind::Exceptional => (Some(-1), Some(-1), Some(Predicate::Exceptional)),
                Kind::Knull => (Some(-2), Some(0), Some(Predicate::Knull)),
                Kind::Characteristic => (None, None, Some(Predicate::Characteristic)),
                Kind::Any => (None, None, None),
            };
            let classes = scan(b, sq, kp, p)?;
            Ok(list_report(name, model, &classes, false, json!({"coeff_bound": b})))
        }
    }
}

pub fn cone(
    tau: &FormClass,
    inflation: Option<&HomClass>,
    degree_bound: Option<u64>,
    allow_bounded: bool,
) -> Result<Report, InputError> {
    let model = tau.model();
    let k = model.k0_form();
    let verdict = in_cone(tau, &k, degree_bound)?;
    let mut j = json!({"command": "cone", "form": form_value(tau)});
    let mut t = String::new();
    let mut status = match &verdict {
        ConeVerdict::Yes => {
            j["in_cone"] = json!(true);
            let _ = writeln!(t, "in cone: yes");
            Status::Yes
        }
        ConeVerdict::YesUpToBound(b) => {
            j["in_cone"] = json!(true);
            j["degree_bound"] = json!(b);
            let _ = writeln!(t, "in cone: yes, checked up to degree {b}");
            Status::Yes
        }
        ConeVerdict::No(v) => {
            j["in_cone"] = json!(false);
            match v {
                ConeViolation::NonPositiveSquare(s) => {
                    j["witness"] = json!({"square": q(s)});
                    let _ = writeln!(t, "in cone: no (square {s} is not positive)");
                }
                ConeViolation::NonPositiveArea { class, area } => {
                    j["witness"] = json!({"class": class_value(class), "area": q(area)});
                    let _ = writeln!(t, "in cone: no ({class} has area {area})");
                }
            }
            Status::No
        }
    };
    if !model.is_rational() {
        j["cone_note"] = json!("ruled cone checked on the stated conditions only");
        let _ = writeln!(t, "note: ruled cone checked on the stated conditions only");
    }
    if let Some(a) = inflation {
        let ok = inflation_admissible(a, tau, &k, degree_bound, allow_bounded)?;
        j["inflation"] = json!({"class": class_value(a), "admissible": ok});
        let _ = writeln!(t, "inflation hypotheses for {a}: {ok}");
        if !ok {
            status = Status::No;
        }
    }
    Ok(Report { status, json: j, text: t })
}

fn cross_value(r: &CrossReport) -> Value {
    json!({
        "predicate": r.predicate.name(),
        "checked": r.checked,
        "confirmed": r.confirmed,
        "disagreements": r.disagreements.iter().map(|d| json!({
            "class": class_value(&d.class),
            "library": d.library,
            "oracle": d.oracle,
        })).collect::<Vec<_>>(),
    })
}

pub fn crosscheck_cmd(
    query: &EnumQuery,
    predicate: Predicate,
    depth: Option<usize>,
    sample: Option<usize>,
    seed: Option<u64>,
) -> Result<Report, InputError> {
    let mut classes = enumerate(query)?;
    let total = classes.len();
    let mut j = json!({"command": "crosscheck", "enumerated": total});
    if let Some(s) = sample {
        let seed = seed.unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        classes.shuffle(&mut rng);
        classes.truncate(s);
        classes.sort();
        j["sample"] = json!(s);
        j["seed"] = json!(seed);
    }
    let r = crosscheck_classes(query.model, &classes, predicate, depth)?;
    if let (Value::Object(map), Value::Object(more)) = (&mut j, cross_value(&r)) {
        map.extend(more);
    }
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{} check: {} classes checked of {total}, {} confirmed, {} disagreements",
        predicate.name(),
        r.checked,
        r.confirmed,
        r.disagreements.len()
    );
    for d in &r.disagreements {
        let _ = writeln!(t, "  {}: library {}, oracle {}", d.class, d.library, d.oracle);
    }
    if sample.is_some() {
        let _ = writeln!(t, "sample seed: {}", seed.unwrap_or(0));
    }
    let status = if r.disagreements.is_empty() { Status::Yes } else { Status::No };
    Ok(Report { status, json: j, text: t })
}
