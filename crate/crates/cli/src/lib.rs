//! Spec-document runner behind the `hypergamma` binary.
//!
//! - `SpecDocument`: the JSON input shared by every command
//! - `run`: dispatch of one command to the library, producing a report value
//! - reports echo their input, embed the library version and the number mode
//! - exact rationals are written as {"num","den"} string pairs

use std::fmt;

use hypergamma::gammaseries::{self as gs, Backend, EvalPoint, Factor, GammaSeries};
use hypergamma::gl2;
use hypergamma::groupmodel::{GroupModel, GroupSpec, RepSpec};
use hypergamma::haarint::{self, MatrixPolyExpr};
use hypergamma::polytope;
use hypergamma::rational::{q, qserde, qvec_serde, to_f64, RationalRecord};
use hypergamma::symfunc::{schur_eval, schur_eval_f64, ClassFunction};
use hypergamma::{DominantWeight, Error, Q, VERSION};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Largest accepted series truncation.
pub const MAX_TRUNCATION: i64 = 64;

/// Input document shared by all commands.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<RepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_qvec")]
    pub chi: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_qvec")]
    pub s: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub options: Value,
}

mod opt_qvec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Vec<Q>>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => qvec_serde::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Q>>, D::Error> {
        qvec_serde::deserialize(d).map(Some)
    }
}

/// Commands understood by `run`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dim,
    Schur,
    Degree,
    Orbits,
    Nonresonant,
    Cobase,
    Integrate,
    Fourier,
    Threej,
    SeriesExpand,
    SeriesEval,
    SeriesCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dim => "dim",
            Command::Schur => "schur",
            Command::Degree => "degree",
            Command::Orbits => "orbits",
            Command::Nonresonant => "nonresonant",
            Command::Cobase => "cobase",
            Command::Integrate => "integrate",
            Command::Fourier => "fourier",
            Command::Threej => "threej",
            Command::SeriesExpand => "series expand",
            Command::SeriesEval => "series eval",
            Command::SeriesCheck => "series check",
        }
    }
}

/// Number mode of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub mode: Mode,
    pub seed: Option<u64>,
    pub truncation: Option<i64>,
}

/// A term table for CSV export.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Result of one run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    /// `Some(false)` when an identity check failed.
    pub check_passed: Option<bool>,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.check_passed == Some(false) {
            2
        } else {
            0
        }
    }
}

/// Failures reported with exit code 1.
#[derive(Debug)]
pub enum CliError {
    /// Schema violation, with the JSON path of the offending field.
    Schema { path: String, message: String },
    Usage(String),
    Library(Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema { path, message } => write!(f, "schema error at {path}: {message}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses a spec document, reporting the path of the first schema violation.
pub fn parse_spec(text: &str) -> CliResult<SpecDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::Schema { path: e.path().to_string(), message: e.inner().to_string() })
}

/// Serializes a spec document in canonical form.
pub fn serialize_spec(spec: &SpecDocument) -> String {
    serde_json::to_string(spec).expect("spec documents serialize")
}

fn options<T: for<'de> Deserialize<'de>>(spec: &SpecDocument) -> CliResult<T> {
    let v = if spec.options.is_null() { json!({}) } else { spec.options.clone() };
    serde_path_to_error::deserialize(v).map_err(|e| CliError::Schema {
        path: format!("options.{}", e.path()),
        message: e.inner().to_string(),
    })
}

fn rat(x: &Q) -> Value {
    serde_json::to_value(RationalRecord::from(x)).expect("records serialize")
}

fn weight_value(w: &DominantWeight) -> Value {
    json!(w.parts())
}

fn weight(parts: &[i64]) -> CliResult<DominantWeight> {
    DominantWeight::new(parts.to_vec()).map_err(CliError::from)
}

fn integer_value(s: String) -> Value {
    s.parse::<i64>().map(Value::from).unwrap_or(Value::String(s))
}

fn model(spec: &SpecDocument) -> CliResult<GroupModel> {
    let group = spec.group.clone().ok_or_else(|| CliError::Schema { path: "group".into(), message: "missing field".into() })?;
    Ok(GroupModel::new(group, spec.reps.clone())?)
}

fn required<'a, T>(v: &'a Option<T>, path: &str) -> CliResult<&'a T> {
    v.as_ref().ok_or_else(|| CliError::Schema { path: path.into(), message: "missing field".into() })
}

fn class_function_value(f: &ClassFunction) -> Value {
    Value::Array(f.iter().map(|(w, c)| json!({"weight": weight_value(w), "coeff": rat(c)})).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightOpts {
    weight: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchurOpts {
    weight: Vec<i64>,
    #[serde(with = "qvec_serde")]
    point: Vec<Q>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoOpts {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CobaseOpts {
    b: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialSpec {
    #[serde(with = "qserde")]
    coeff: Q,
    trace_powers: Vec<u32>,
    #[serde(default)]
    det_power: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegrateOpts {
    n: usize,
    matrices: usize,
    terms: Vec<MonomialSpec>,
    #[serde(default)]
    c1: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    c2: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    samples: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierTerm {
    weight: Vec<i64>,
    #[serde(with = "qserde")]
    coeff: Q,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierOpts {
    terms: Vec<FourierTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThreejOpts {
    lambda: Vec<i64>,
    mu: Vec<i64>,
    nu: Vec<i64>,
}

/// A complex matrix as rows of [re, im] pairs.
type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalOpts {
    point: Vec<MatrixSpec>,
    #[serde(default)]
    branch: Option<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum CheckOpts {
    ShiftInvariance { shift: Vec<i64> },
    GaussReduction { depth: i64 },
    Terminating {},
    Deformation {},
    Batyrev { points0: Vec<Vec<i64>>, a: Vec<f64>, #[serde(default = "default_grid")] grid: usize },
    Residual { point: Vec<MatrixSpec>, #[serde(default = "default_step")] h: f64, #[serde(default = "default_tol")] tolerance: f64 },
}

fn default_grid() -> usize {
    64
}

fn default_step() -> f64 {
    1e-4
}

fn default_tol() -> f64 {
    1e-6
}

fn complex_matrix(m: &MatrixSpec, path: &str) -> CliResult<DMatrix<Complex64>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(CliError::Schema { path: path.into(), message: "matrix must be square".into() });
    }
    Ok(DMatrix::from_fn(n, n, |i, j| Complex64::new(m[i][j][0], m[i][j][1])))
}

fn eval_point(mats: &[MatrixSpec], branch: Option<[f64; 2]>) -> CliResult<EvalPoint> {
    let mats = mats
        .iter()
        .enumerate()
        .map(|(i, m)| complex_matrix(m, &format!("options.point[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(EvalPoint { mats, branch: branch.map(|b| Complex64::new(b[0], b[1])) })
}

fn complex_value(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn factor_label(f: &Factor) -> String {
    match f {
        Factor::Monomial => "monomial".into(),
        Factor::DiagonalPair { nu } => format!("s{nu}(D C^-1)"),
        Factor::Gl2Triple { lambda, mu, nu } => format!("v{lambda}{mu}{nu}"),
    }
}

fn series_setup(spec: &SpecDocument, opts: &RunOptions) -> CliResult<(GroupModel, Vec<Q>, Backend, i64)> {
    let m = model(spec)?;
    let s = required(&spec.s, "s")?.clone();
    let backend = match spec.backend {
        Some(b) => b,
        None => Backend::detect(&m).ok_or_else(|| CliError::Usage("no backend accepts this model".into()))?,
    };
    let truncation = opts.truncation.or(spec.truncation).unwrap_or(6);
    if truncation > MAX_TRUNCATION {
        return Err(CliError::Library(Error::Limit(format!("truncation {truncation} exceeds {MAX_TRUNCATION}"))));
    }
    Ok((m, s, backend, truncation))
}

fn build(spec: &SpecDocument, opts: &RunOptions) -> CliResult<GammaSeries> {
    let (m, s, backend, d) = series_setup(spec, opts)?;
    Ok(gs::build_series(&m, &s, backend, d)?)
}

fn plain(report: Value) -> Outcome {
    Outcome { report, check_passed: None, table: None }
}

/// Runs one command and wraps its result in the report envelope.
pub fn run(command: Command, spec: &SpecDocument, opts: &RunOptions) -> CliResult<Outcome> {
    let mut out = dispatch(command, spec, opts)?;
    let mut input = spec.clone();
    if let Some(seed) = opts.seed {
        input.seed = Some(seed);
    }
    if let Some(t) = opts.truncation {
        input.truncation = Some(t);
    }
    let mut envelope = json!({
        "version": VERSION,
        "command": command.name(),
        "mode": opts.mode.name(),
        "input": serde_json::to_value(&input).expect("spec documents serialize"),
        "result": out.report,
    });
    if let Some(p) = out.check_passed {
        envelope["passed"] = json!(p);
    }
    out.report = envelope;
    Ok(out)
}

fn dispatch(command: Command, spec: &SpecDocument, opts: &RunOptions) -> CliResult<Outcome> {
    match command {
        Command::Dim => {
            let o: WeightOpts = options(spec)?;
            let w = weight(&o.weight)?;
            Ok(plain(json!({"weight": weight_value(&w), "n": w.n(), "dimension": integer_value(w.dimension().to_string())})))
        }
        Command::Schur => {
            let o: SchurOpts = options(spec)?;
            let w = weight(&o.weight)?;
            let value = match opts.mode {
                Mode::Exact => rat(&schur_eval(&w, &o.point)?),
                Mode::Float => {
                    let x: Vec<f64> = o.point.iter().map(to_f64).collect();
                    json!(schur_eval_f64(&w, &x)?)
                }
            };
            Ok(plain(json!({"weight": weight_value(&w), "value": value})))
        }
        Command::Degree => {
            let _: NoOpts = options(spec)?;
            let r = polytope::degree_of_model(&model(spec)?)?;
            let degree = if r.degree.is_integer() { integer_value(r.degree.to_integer().to_string()) } else { Value::Null };
            Ok(plain(json!({
                "degree": degree,
                "degree_exact": rat(&r.degree),
                "dim_x": r.dim_x,
                "polytope_dim": r.polytope_dim,
                "active_roots": r.active_roots,
                "unsquared_integral": rat(&r.unsquared_integral),
            })))
        }
        Command::Orbits => {
            let _: NoOpts = options(spec)?;
            let m = model(spec)?;
            let p = polytope::weight_polytope(&m)?;
            let orbits = p.face_orbits(&polytope::weyl_group(&m.group));
            let nonempty = orbits.iter().filter(|o| o.dim >= 0).count();
            Ok(plain(json!({
                "orbit_count": orbits.len(),
                "orbit_count_nonempty": nonempty,
                "orbits": serde_json::to_value(&orbits).expect("orbits serialize"),
            })))
        }
        Command::Nonresonant => {
            let _: NoOpts = options(spec)?;
            let chi = required(&spec.chi, "chi")?;
            let r = polytope::nonresonant_check(&model(spec)?, chi)?;
            Ok(plain(serde_json::to_value(&r).expect("reports serialize")))
        }
        Command::Cobase => {
            let o: CobaseOpts = options(spec)?;
            let ok = polytope::toric_cobase_check(&model(spec)?, &o.b)?;
            Ok(plain(json!({"b": o.b, "is_cobase": ok})))
        }
        Command::Integrate => integrate(spec, opts),
        Command::Fourier => {
            let o: FourierOpts = options(spec)?;
            let first = o.terms.first().ok_or_else(|| CliError::Schema { path: "options.terms".into(), message: "empty".into() })?;
            let mut f = ClassFunction::zero(first.weight.len());
            for t in &o.terms {
                f.add_term(weight(&t.weight)?, t.coeff.clone());
            }
            let m = opts.truncation.or(spec.truncation).unwrap_or(8);
            if !(0..=MAX_TRUNCATION).contains(&m) {
                return Err(CliError::Library(Error::Limit(format!("truncation {m} outside 0..={MAX_TRUNCATION}"))));
            }
            let r = haarint::contour_fourier(&f, m as u64);
            Ok(plain(json!({
                "terms": class_function_value(&r.terms),
                "constant": "C",
                "constant_value": haarint::fourier_constant_f64(f.n()),
                "incomplete": r.incomplete,
                "dropped": r.dropped.iter().map(weight_value).collect::<Vec<_>>(),
            })))
        }
        Command::Threej => {
            let o: ThreejOpts = options(spec)?;
            let (l, m, n) = (weight(&o.lambda)?, weight(&o.mu)?, weight(&o.nu)?);
            let table = gl2::threej_table(&l, &m, &n).unwrap_or_default();
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|e| {
                    vec![l.to_string(), m.to_string(), n.to_string(), e.i.to_string(), e.j.to_string(), e.k.to_string(), format!("{:.17e}", e.value)]
                })
                .collect();
            let entries: Vec<Value> = table
                .iter()
                .map(|e| json!({"i": e.i, "j": e.j, "k": e.k, "value": e.value, "square": rat(&e.square)}))
                .collect();
            Ok(Outcome {
                report: json!({"admissible": gl2::triangle_check(&l, &m, &n), "entries": entries}),
                check_passed: None,
                table: Some(Table {
                    headers: ["lambda", "mu", "nu", "i", "j", "k", "value"].map(String::from).to_vec(),
                    rows,
                }),
            })
        }
        Command::SeriesExpand => {
            let _: NoOpts = options(spec)?;
            let series = build(spec, opts)?;
            let terms: Vec<Value> = series
                .terms
                .iter()
                .map(|t| {
                    let mut v = json!({
                        "alphas": t.alphas.iter().map(weight_value).collect::<Vec<_>>(),
                        "order": t.order,
                        "factor": serde_json::to_value(&t.factor).expect("factors serialize"),
                        "coeff_f64": t.coeff_f64,
                    });
                    if opts.mode == Mode::Exact {
                        v["coeff"] = serde_json::to_value(t.coeff.to_record()).expect("records serialize");
                    }
                    v
                })
                .collect();
            let rows = series
                .terms
                .iter()
                .map(|t| {
                    vec![
                        t.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "),
                        t.order.to_string(),
                        factor_label(&t.factor),
                        t.coeff.to_string(),
                        format!("{:.17e}", t.coeff_f64),
                    ]
                })
                .collect();
            Ok(Outcome {
                report: json!({"backend": series.backend, "truncation": series.truncation, "term_count": terms.len(), "terms": terms}),
                check_passed: None,
                table: Some(Table { headers: ["alphas", "order", "factor", "coeff", "coeff_f64"].map(String::from).to_vec(), rows }),
            })
        }
        Command::SeriesEval => {
            let o: EvalOpts = options(spec)?;
            let series = build(spec, opts)?;
            let p = eval_point(&o.point, o.branch)?;
            let graded = gs::graded_sums(&series, &p)?;
            let value: Complex64 = graded.values().sum();
            let tail = graded.values().next_back().map_or(0.0, |v| v.norm());
            Ok(plain(json!({
                "value": complex_value(value),
                "error": {"last_order_magnitude": tail},
                "term_count": series.terms.len(),
                "truncation": series.truncation,
            })))
        }
        Command::SeriesCheck => series_check(spec, opts),
    }
}

fn real_rows(m: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    m.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

fn integrate(spec: &SpecDocument, opts: &RunOptions) -> CliResult<Outcome> {
    let o: IntegrateOpts = options(spec)?;
    let mut expr = MatrixPolyExpr::new(o.n, o.matrices);
    for (i, t) in o.terms.iter().enumerate() {
        if t.trace_powers.len() != o.matrices {
            return Err(CliError::Schema {
                path: format!("options.terms[{i}].trace_powers"),
                message: format!("expected {} powers", o.matrices),
            });
        }
        expr = expr.term(t.coeff.clone(), &t.trace_powers, t.det_power);
    }
    let res = haarint::integrate_un(&expr)?;
    let terms: Vec<Value> = res
        .terms
        .iter()
        .map(|((w, k), c)| json!({"weight": weight_value(w), "det_c2_power": k, "coeff": rat(c)}))
        .collect();
    let mut report = json!({"terms": terms});
    if let Some(c1) = &o.c1 {
        let id: Vec<Vec<f64>> = (0..o.n).map(|i| (0..o.n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let c2 = o.c2.clone().unwrap_or(id);
        let to_d = |m: &[Vec<f64>]| DMatrix::from_fn(o.n, o.n, |i, j| Complex64::new(m[i][j], 0.0));
        let (m1, m2) = (to_d(c1), to_d(&c2));
        report["value"] = complex_value(res.eval_complex(&m1, &m2)?);
        if let Some(samples) = o.samples {
            let seed = opts.seed.or(spec.seed).unwrap_or(haarint::DEFAULT_SEED);
            let mats = [real_rows(c1), real_rows(&c2)];
            let terms = o.terms;
            let matrices = o.matrices;
            let f = move |y: &DMatrix<Complex64>| {
                let ym: Vec<Vec<Complex64>> = (0..y.nrows()).map(|i| (0..y.ncols()).map(|j| y[(i, j)]).collect()).collect();
                let traces: Vec<Complex64> = mats[..matrices]
                    .iter()
                    .map(|c| {
                        let p = hypergamma::symfunc::mat_mul(c, &ym);
                        (0..p.len()).map(|i| p[i][i]).sum()
                    })
                    .collect();
                let det = y.determinant();
                terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
                    let mut v = Complex64::new(to_f64(&t.coeff), 0.0) * det.powi(t.det_power as i32);
                    for (tr, &e) in traces.iter().zip(&t.trace_powers) {
                        v *= tr.powi(e as i32);
                    }
                    acc + v
                })
            };
            let est = haarint::monte_carlo_haar(f, o.n, samples, seed)?;
            report["monte_carlo"] = serde_json::to_value(&est).expect("estimates serialize");
        }
    }
    Ok(plain(report))
}

fn series_check(spec: &SpecDocument, opts: &RunOptions) -> CliResult<Outcome> {
    let o: CheckOpts = options(spec)?;
    let checked = |report: Value, passed: bool| Ok(Outcome { report, check_passed: Some(passed), table: None });
    match o {
        CheckOpts::ShiftInvariance { shift } => {
            let (m, s, b, d) = series_setup(spec, opts)?;
            let r = gs::shift_invariance_check(&m, &s, &shift, b, d)?;
            let passed = r.holds;
            checked(serde_json::to_value(r).expect("reports serialize"), passed)
        }
        CheckOpts::GaussReduction { depth } => {
            let m = model(spec)?;
            let s = required(&spec.s, "s")?;
            if Backend::detect(&m) != Some(Backend::DiagonalPair) || s.len() != 4 {
                return Err(CliError::Usage("gauss-reduction needs the matrix Gauss data".into()));
            }
            if s[2] != q(0) {
                return Err(CliError::Usage("gauss-reduction needs s3 = 0".into()));
            }
            let r = gs::gauss_reduction_check(m.blocks()[0], &s[0], &s[1], &s[3], depth)?;
            let passed = r.holds;
            checked(serde_json::to_value(r).expect("reports serialize"), passed)
        }
        CheckOpts::Terminating {} => {
            let (m, s, b, _) = series_setup(spec, opts)?;
            let r = gs::terminating_series_check(&m, &s, b)?;
            let passed = r.finite && (if r.tau < 0 { r.vanishes } else { r.oracle.as_ref().is_none_or(|o| o.matches) });
            checked(serde_json::to_value(r).expect("reports serialize"), passed)
        }
        CheckOpts::Deformation {} => {
            let (m, s, b, d) = series_setup(spec, opts)?;
            let r = gs::deformation_check(&m, &s, b, d)?;
            let passed = r.matches;
            checked(serde_json::to_value(r).expect("reports serialize"), passed)
        }
        CheckOpts::Batyrev { points0, a, grid } => {
            let d = opts.truncation.or(spec.truncation).unwrap_or(20);
            if d > MAX_TRUNCATION {
                return Err(CliError::Library(Error::Limit(format!("truncation {d} exceeds {MAX_TRUNCATION}"))));
            }
            let r = gs::batyrev_series_check(&points0, &a, d, grid)?;
            let passed = r.agrees;
            checked(serde_json::to_value(r).expect("reports serialize"), passed)
        }
        CheckOpts::Residual { point, h, tolerance } => {
            let series = build(spec, opts)?;
            let p = eval_point(&point, None)?;
            let r = gs::system_residual(&series, &p, h)?;
            let passed = r.pde < tolerance && r.diagnostic.is_none();
            let mut v = serde_json::to_value(r).expect("reports serialize");
            v["tolerance"] = json!(tolerance);
            checked(v, passed)
        }
    }
}

/// Writes a table as CSV.
pub fn write_csv<W: std::io::Write>(table: &Table, w: W) -> CliResult<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(&table.headers).map_err(|e| CliError::Io(e.to_string()))?;
    for r in &table.rows {
        wr.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    wr.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values serialize");
    s.push('\n');
    s
}
