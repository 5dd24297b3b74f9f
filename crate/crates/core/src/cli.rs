//! The `grassmann` command-line tool.
//!
//! Subcommands: `verify`, `poincare`, `flow`, `index`. Every option may also come
//! from a JSON file passed with `--config`, whose keys are the long flag names
//! (`max_iter` or `max-iter`). Flags win over the file; the file wins over the
//! defaults in [`Defaults`].
//!
//! Exit status: 0 on success, 1 when a check fails, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    hermitian_from_json, orthogonal_basis_on, random_hermitian, BasisLabel, Field, HermitianMatrix,
};
use crate::error::{Error, Result};
use crate::geometry::{
    laplacian_numeric, mean_curvature_closed_form, mean_curvature_numeric, minimality_residual,
    sphere_slice_center, sphere_slice_radius, tangent_basis, FiniteDifference,
};
use crate::grassmann::{
    complement, complete_frame, embed, involution, random_point, real_determinant,
};
use crate::homology::{
    morse_bott_assembly, poincare_recursive_f, poincare_recursive_g, schubert_oracle, IndexSource,
    IntPolynomial,
};
use crate::morse::{
    flow, morse_index, CriticalClass, Direction, FlowOptions, FlowReport, HeightParam, NamedParam,
    ZeroThreshold,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable naming the directory for relative `--out` paths.
pub const OUTPUT_DIR_ENV: &str = "GRASSMANN_OUTPUT_DIR";

/// Default settings shared by the CLI and the acceptance suite.
pub struct Defaults;

impl Defaults {
    pub const SEED: u64 = 0;
    pub const SAMPLES: usize = 10;
    pub const INVARIANT_TOL: f64 = 1e-10;
    pub const STOP_TOL: f64 = 1e-8;
    pub const ZERO_THRESHOLD: f64 = crate::morse::DEFAULT_ZERO_THRESHOLD;
    pub const STEP: f64 = 0.05;
    pub const H: f64 = crate::geometry::DEFAULT_H;
    pub const MAX_ITER: usize = 10_000;
    pub const MAX_DIM: usize = 16;
    pub const LAPLACIAN_TOL: f64 = 1e-3;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Pretty,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    RecursionF,
    RecursionG,
    Schubert,
    MorseBott,
}

#[derive(Debug, Parser)]
#[command(
    name = "grassmann",
    version,
    about = "Grassmann manifolds over R, C and H: invariants, Morse flows and Poincaré polynomials"
)]
pub struct Cli {
    /// JSON file with option values (keys are long flag names).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the embedding and curvature invariants on random points.
    Verify(VerifyArgs),
    /// Poincaré polynomial of G_F(n, N) for F = C or H.
    Poincare(PoincareArgs),
    /// Gradient flow of a height function from random starting points.
    Flow(FlowArgs),
    /// Morse index and nullity at a sampled point of a critical class.
    Index(IndexArgs),
}

#[derive(Debug, Default, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub field: Option<Field>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest accepted N.
    #[arg(long = "max-N")]
    pub max_dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Invariant tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Finite-difference step.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PoincareArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Height function for `morse-bott` (E11 or E12).
    #[arg(long)]
    pub param: Option<String>,
    /// Cross-validate every method for all n ≤ N ≤ max-N.
    #[arg(long)]
    pub check_all: bool,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// E11, E12 or file:<path> holding a Hermitian matrix in JSON.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long)]
    pub direction: Option<Direction>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Stop when the gradient norm falls to this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Number of independent runs; run k uses seed + k.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Worker threads for batches (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long)]
    pub class: Option<CriticalClass>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Relative zero threshold for Hessian eigenvalues.
    #[arg(long)]
    pub zero_threshold: Option<f64>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub field: Option<Field>,
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    pub seed: Option<u64>,
    #[serde(rename = "max_N", alias = "max-N")]
    pub max_dim: Option<usize>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub h: Option<f64>,
    pub method: Option<Method>,
    pub param: Option<String>,
    #[serde(alias = "check-all")]
    pub check_all: Option<bool>,
    pub direction: Option<Direction>,
    pub step: Option<f64>,
    #[serde(alias = "max-iter")]
    pub max_iter: Option<usize>,
    pub runs: Option<usize>,
    pub workers: Option<usize>,
    pub class: Option<CriticalClass>,
    #[serde(alias = "zero-threshold")]
    pub zero_threshold: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

/// Height parameter as given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamSpec {
    Named(NamedParam),
    File(PathBuf),
}

impl std::str::FromStr for ParamSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("file:") {
            Some(path) => Ok(ParamSpec::File(PathBuf::from(path))),
            None => Ok(ParamSpec::Named(s.parse()?)),
        }
    }
}

impl ParamSpec {
    fn resolve(&self, field: Field, dim: usize) -> Result<HeightParam> {
        match self {
            ParamSpec::Named(name) => HeightParam::named(*name, field, dim),
            ParamSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let m = hermitian_from_json(&text)?;
                if m.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: m.field(),
                    });
                }
                if m.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: m.dim(),
                    });
                }
                Ok(HeightParam::custom(m))
            }
        }
    }
}

impl std::fmt::Display for ParamSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamSpec::Named(name) => write!(f, "{name}"),
            ParamSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Poincare,
    Flow,
    Index,
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub field: Field,
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub samples: usize,
    pub invariant_tol: f64,
    pub stop_tol: f64,
    pub zero_threshold: f64,
    pub step: f64,
    pub h: f64,
    pub max_iter: usize,
    pub method: Method,
    pub param: ParamSpec,
    pub check_all: bool,
    pub direction: Direction,
    pub runs: usize,
    pub workers: usize,
    pub class: Option<CriticalClass>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

impl RunConfig {
    /// Merges flags, the optional config file and defaults, then validates.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let empty = SpaceArgs::default();
        let (command, space) = match &cli.command {
            Command::Verify(a) => (CommandKind::Verify, &a.space),
            Command::Poincare(a) => (CommandKind::Poincare, &a.space),
            Command::Flow(a) => (CommandKind::Flow, &a.space),
            Command::Index(a) => (CommandKind::Index, &a.space),
        };
        let check_all = matches!(&cli.command, Command::Poincare(a) if a.check_all)
            || file.check_all == Some(true);
        let space = if check_all && space.field.is_none() && space.n.is_none() {
            &empty
        } else {
            space
        };

        let mut tol = file.tol;
        let mut h = file.h;
        let mut param = file.param.clone();
        let mut zero_threshold = file.zero_threshold;
        let (
            mut samples,
            mut method,
            mut direction,
            mut step,
            mut max_iter,
            mut runs,
            mut workers,
            mut class,
        ) = (
            file.samples,
            file.method,
            file.direction,
            file.step,
            file.max_iter,
            file.runs,
            file.workers,
            file.class,
        );
        match &cli.command {
            Command::Verify(a) => {
                samples = a.samples.or(samples);
                tol = a.tol.or(tol);
                h = a.h.or(h);
            }
            Command::Poincare(a) => {
                method = a.method.or(method);
                param = a.param.clone().or(param);
            }
            Command::Flow(a) => {
                param = a.param.clone().or(param);
                direction = a.direction.or(direction);
                step = a.step.or(step);
                tol = a.tol.or(tol);
                max_iter = a.max_iter.or(max_iter);
                runs = a.runs.or(runs);
                workers = a.workers.or(workers);
            }
            Command::Index(a) => {
                param = a.param.clone().or(param);
                class = a.class.or(class);
                h = a.h.or(h);
                zero_threshold = a.zero_threshold.or(zero_threshold);
            }
        }

        let max_dim = space.max_dim.or(file.max_dim).unwrap_or(Defaults::MAX_DIM);
        let needs_space = !(command == CommandKind::Poincare && check_all);
        let field = space.field.or(file.field);
        let n = space.n.or(file.n);
        let dim = space.big_n.or(file.big_n);
        let (field, n, dim) = if needs_space {
            (
                field.ok_or_else(|| usage("missing --field"))?,
                n.ok_or_else(|| usage("missing --n"))?,
                dim.ok_or_else(|| usage("missing --N"))?,
            )
        } else {
            (field.unwrap_or(Field::C), n.unwrap_or(0), dim.unwrap_or(0))
        };
        let class_param = class.and_then(CriticalClass::param);
        let param = match param {
            Some(p) => p.parse()?,
            None => ParamSpec::Named(class_param.unwrap_or(NamedParam::E11)),
        };
        let cfg = Self {
            command,
            field,
            n,
            dim,
            seed: space.seed.or(file.seed).unwrap_or(Defaults::SEED),
            max_dim,
            samples: samples.unwrap_or(Defaults::SAMPLES),
            invariant_tol: if command == CommandKind::Verify {
                tol
            } else {
                None
            }
            .unwrap_or(Defaults::INVARIANT_TOL),
            stop_tol: if command == CommandKind::Flow {
                tol
            } else {
                None
            }
            .unwrap_or(Defaults::STOP_TOL),
            zero_threshold: zero_threshold.unwrap_or(Defaults::ZERO_THRESHOLD),
            step: step.unwrap_or(Defaults::STEP),
            h: h.unwrap_or(Defaults::H),
            max_iter: max_iter.unwrap_or(Defaults::MAX_ITER),
            method: method.unwrap_or_default(),
            param,
            check_all,
            direction: direction.unwrap_or(Direction::Descent),
            runs: runs.unwrap_or(1),
            workers: workers
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from)),
            class,
            format: if cli.json {
                Some(Format::Json)
            } else {
                cli.format
            }
            .or(file.format)
            .unwrap_or_default(),
            out: cli.out.clone().or(file.out),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol", self.invariant_tol),
            ("tol", self.stop_tol),
            ("zero-threshold", self.zero_threshold),
            ("h", self.h),
            ("step", self.step),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(usage(format!("{name} must be positive, got {v}")));
            }
        }
        let space_checked = !(self.command == CommandKind::Poincare && self.check_all);
        if space_checked {
            if self.n > self.dim {
                return Err(usage(format!(
                    "need 0 ≤ n ≤ N, got n = {}, N = {}",
                    self.n, self.dim
                )));
            }
            if self.dim == 0 || self.dim > self.max_dim {
                return Err(usage(format!(
                    "need 1 ≤ N ≤ {}, got N = {}",
                    self.max_dim, self.dim
                )));
            }
        }
        if self.runs == 0 || self.workers == 0 || self.samples == 0 {
            return Err(usage("runs, workers and samples must be positive"));
        }
        if self.format == Format::Csv && self.command != CommandKind::Flow {
            return Err(usage("csv output is only available for flow"));
        }
        FiniteDifference::new(self.h)?;
        if self.command == CommandKind::Flow {
            self.flow_options().validate()?;
        }
        Ok(())
    }

    pub fn flow_options(&self) -> FlowOptions {
        FlowOptions {
            step: self.step,
            stop_tol: self.stop_tol,
            max_iter: self.max_iter,
            direction: self.direction,
        }
    }

    fn fd(&self) -> FiniteDifference {
        FiniteDifference {
            h: self.h,
            richardson: false,
        }
    }

    /// Where the report goes; relative paths are placed under `$GRASSMANN_OUTPUT_DIR`.
    pub fn output_path(&self) -> Option<PathBuf> {
        let out = self.out.as_ref()?;
        if out.is_relative() {
            if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
                return Some(Path::new(&dir).join(out));
            }
        }
        Some(out.clone())
    }
}

/// One residual check of `verify`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, residuals: &[f64], tol: f64) -> Self {
        let max_residual =
            residuals.iter().copied().fold(
                0.0,
                |m: f64, r| if r.is_nan() { f64::NAN } else { m.max(r) },
            );
        Self {
            name: name.to_string(),
            max_residual,
            tol,
            pass: max_residual <= tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub field: Field,
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Seeds for independent samples derived from one master seed.
fn sample_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// Coordinates of the classical Veronese surface in S⁴(1/√3) read off a point of
/// G_R(1, 3): (A₁₂, A₁₃, A₂₃, (A₁₁−A₂₂)/2, (A₁₁+A₂₂−2A₃₃)/(2√3)).
fn veronese_radius_residual(a: &HermitianMatrix) -> f64 {
    let m = a.matrix();
    let e = |r, c| m[(r, c)].re;
    let coords = [
        e(0, 1),
        e(0, 2),
        e(1, 2),
        (e(0, 0) - e(1, 1)) / 2.0,
        (e(0, 0) + e(1, 1) - 2.0 * e(2, 2)) / (2.0 * 3f64.sqrt()),
    ];
    (coords.iter().map(|x| x * x).sum::<f64>() - 1.0 / 3.0).abs()
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let (field, n, dim) = (cfg.field, cfg.n, cfg.dim);
    let proper = n > 0 && n < dim;
    let tol = cfg.invariant_tol;
    let fd = cfg.fd();
    let mut r: std::collections::BTreeMap<&str, Vec<f64>> = Default::default();
    let mut push = |name: &'static str, v: f64| r.entry(name).or_default().push(v);
    for seed in sample_seeds(cfg.seed, cfg.samples) {
        let frame = random_point(field, n, dim, seed)?;
        let full = complete_frame(&frame);
        let a = embed(&frame);
        push("projection_idempotent", a.idempotence_residual());
        push("projection_hermitian", a.matrix().hermitian_residual());
        push("projection_trace", a.trace_residual());
        push("projection_norm", a.norm_residual());

        let basis = orthogonal_basis_on(field, full.columns());
        let mut off = 0.0f64;
        let mut diag = 0.0f64;
        for (i, (label, x)) in basis.iter().enumerate() {
            for (j, (_, y)) in basis.iter().enumerate().skip(i) {
                let g = x.inner(y)?;
                if i == j {
                    let expected = match label {
                        BasisLabel::Diagonal(_) => 1.0,
                        BasisLabel::Pair { .. } => 2.0,
                    };
                    diag = diag.max((g - expected).abs());
                } else {
                    off = off.max(g.abs());
                }
            }
        }
        push("ambient_basis_orthogonal", off);
        push("ambient_basis_norms", diag);

        let comp = complement(&a);
        let sum = a.matrix().add(comp.matrix())?;
        let id = HermitianMatrix::identity(field, dim);
        push(
            "complement",
            sum.distance(&id)?
                .max(comp.idempotence_residual())
                .max(comp.trace_residual()),
        );
        let inv = involution(&a);
        let sq = HermitianMatrix::new(field, inv.product(&inv)?)?;
        push("involution_square", sq.distance(&id)?);
        if field == Field::R {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            push("involution_det", (real_determinant(&inv)? - sign).abs());
        }
        let radius = a.matrix().distance(&sphere_slice_center(field, n, dim))?;
        push(
            "sphere_radius",
            (radius - sphere_slice_radius(n, dim)).abs(),
        );

        if proper {
            let tb = tangent_basis(&full);
            let g = tb.gram();
            let m = tb.len();
            let gram_res = (0..m * m)
                .map(|idx| (g[idx] - if idx / m == idx % m { 2.0 } else { 0.0 }).abs())
                .fold(0.0, f64::max);
            push("tangent_gram", gram_res);
            push(
                "tangency",
                tb.vectors
                    .iter()
                    .map(|x| x.tangency_residual(&a))
                    .fold(0.0, f64::max),
            );
            push("minimality", minimality_residual(&full)?);
            let h_closed = mean_curvature_closed_form(&full)?;
            let h_num = mean_curvature_numeric(&full, fd)?;
            push(
                "mean_curvature_numeric",
                h_num.distance(&h_closed)? / (cfg.h * cfg.h),
            );
            let p = random_hermitian(field, dim, seed ^ 0x5eed)?;
            let p = p.sub(&id.scale(p.trace() / dim as f64))?;
            let f = a.matrix().inner(&p)?;
            let lap = laplacian_numeric(&p, &full, fd)?;
            let c_n = (field.c() * dim) as f64;
            push(
                "laplacian_eigenvalue",
                (lap + c_n * f).abs() / f.abs().max(0.1),
            );
        }
        if field == Field::R && n == 1 && dim == 3 {
            push("veronese_surface", veronese_radius_residual(a.matrix()));
        }
    }
    let tol_for = |name: &str| match name {
        "ambient_basis_orthogonal" => 1e-12,
        "mean_curvature_numeric" => 10.0,
        "laplacian_eigenvalue" => Defaults::LAPLACIAN_TOL,
        _ => tol,
    };
    let order = [
        "projection_idempotent",
        "projection_hermitian",
        "projection_trace",
        "projection_norm",
        "ambient_basis_orthogonal",
        "ambient_basis_norms",
        "tangent_gram",
        "tangency",
        "minimality",
        "mean_curvature_numeric",
        "laplacian_eigenvalue",
        "complement",
        "involution_square",
        "involution_det",
        "sphere_radius",
        "veronese_surface",
    ];
    let checks: Vec<Check> = order
        .iter()
        .filter_map(|name| r.get(name).map(|v| Check::new(name, v, tol_for(name))))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        field,
        n,
        dim,
        samples: cfg.samples,
        seed: cfg.seed,
        checks,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareReport {
    pub coeffs: IntPolynomial,
    pub euler: i64,
    pub betti: Vec<crate::homology::Betti>,
}

impl PoincareReport {
    pub fn new(p: IntPolynomial) -> Result<Self> {
        Ok(Self {
            euler: p.eval(-1)?,
            betti: p.betti(),
            coeffs: p,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub field: Field,
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckAllReport {
    #[serde(rename = "max_N")]
    pub max_dim: usize,
    pub cases: usize,
    pub mismatches: Vec<Mismatch>,
    pub pass: bool,
}

fn named_param(spec: &ParamSpec) -> Result<NamedParam> {
    match spec {
        ParamSpec::Named(n) => Ok(*n),
        ParamSpec::File(_) => Err(usage("this command needs param E11 or E12")),
    }
}

pub fn poincare(
    field: Field,
    n: usize,
    dim: usize,
    method: Method,
    param: NamedParam,
) -> Result<IntPolynomial> {
    match method {
        Method::RecursionF => poincare_recursive_f(field, n, dim),
        Method::RecursionG => poincare_recursive_g(field, n, dim),
        Method::Schubert => schubert_oracle(field, n, dim),
        Method::MorseBott => morse_bott_assembly(field, n, dim, param, IndexSource::Predicted),
    }
}

pub fn cmd_poincare(cfg: &RunConfig) -> Result<PoincareReport> {
    let p = poincare(
        cfg.field,
        cfg.n,
        cfg.dim,
        cfg.method,
        named_param(&cfg.param)?,
    )?;
    PoincareReport::new(p)
}

/// Compares all methods against the recursion from E11 for every n ≤ N ≤ max.
pub fn cmd_check_all(max_dim: usize) -> Result<CheckAllReport> {
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for field in [Field::C, Field::H] {
        for dim in 0..=max_dim {
            for n in 0..=dim {
                let reference = poincare_recursive_f(field, n, dim)?;
                let mut others = vec![(Method::Schubert, schubert_oracle(field, n, dim)?)];
                if dim >= 1 {
                    others.push((
                        Method::MorseBott,
                        morse_bott_assembly(
                            field,
                            n,
                            dim,
                            NamedParam::E11,
                            IndexSource::Predicted,
                        )?,
                    ));
                }
                if n >= 2 && dim - n >= 2 {
                    others.push((Method::RecursionG, poincare_recursive_g(field, n, dim)?));
                    others.push((
                        Method::MorseBott,
                        morse_bott_assembly(
                            field,
                            n,
                            dim,
                            NamedParam::E12,
                            IndexSource::Predicted,
                        )?,
                    ));
                }
                let ok_invariants = reference.is_palindromic()
                    && reference.has_nonnegative_coeffs()
                    && reference.eval_at_one() == crate::homology::binomial(dim, n);
                if !ok_invariants {
                    mismatches.push(Mismatch {
                        field,
                        n,
                        dim,
                        method: Method::RecursionF,
                    });
                }
                for (method, p) in others {
                    cases += 1;
                    if p != reference {
                        mismatches.push(Mismatch {
                            field,
                            n,
                            dim,
                            method,
                        });
                    }
                }
            }
        }
    }
    let pass = mismatches.is_empty();
    Ok(CheckAllReport {
        max_dim,
        cases,
        mismatches,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowRun {
    pub run: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub report: FlowReport,
}

pub fn cmd_flow(cfg: &RunConfig) -> Result<Vec<FlowRun>> {
    let param = cfg.param.resolve(cfg.field, cfg.dim)?;
    let opts = cfg.flow_options();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Contract(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|run| {
                let seed = cfg.seed.wrapping_add(run as u64);
                let start = random_point(cfg.field, cfg.n, cfg.dim, seed)?;
                Ok(FlowRun {
                    run,
                    seed,
                    report: flow(&param, &start, opts)?,
                })
            })
            .collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexReport {
    pub field: Field,
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub param: NamedParam,
    pub class: CriticalClass,
    pub seed: u64,
    pub index: usize,
    pub nullity: usize,
    pub predicted_index: usize,
    pub predicted_nullity: usize,
    pub threshold: f64,
    pub unstable: bool,
    pub eigenvalues: Vec<f64>,
    pub pass: bool,
}

pub fn cmd_index(cfg: &RunConfig) -> Result<IndexReport> {
    let class = cfg.class.ok_or_else(|| usage("missing --class"))?;
    let param = named_param(&cfg.param)?;
    if class.param() != Some(param) {
        return Err(usage(format!("class {class} does not belong to {param}")));
    }
    let (field, n, dim) = (cfg.field, cfg.n, cfg.dim);
    let predicted_index = class.predicted_index(field, n, dim)?;
    let predicted_nullity = class.predicted_nullity(field, n, dim)?;
    let p = HeightParam::named(param, field, dim)?;
    let full = complete_frame(&class.sample(field, n, dim, cfg.seed)?);
    let fd = FiniteDifference {
        h: cfg.h,
        richardson: true,
    };
    let mi = morse_index(&p, &full, fd, ZeroThreshold::Relative(cfg.zero_threshold))?;
    let pass = mi.index == predicted_index && mi.nullity == predicted_nullity && !mi.unstable;
    Ok(IndexReport {
        field,
        n,
        dim,
        param,
        class,
        seed: cfg.seed,
        index: mi.index,
        nullity: mi.nullity,
        predicted_index,
        predicted_nullity,
        threshold: mi.threshold,
        unstable: mi.unstable,
        eigenvalues: mi.eigenvalues,
        pass,
    })
}

/// Rendered report and whether every check passed.
pub struct Rendered {
    pub text: String,
    pub pass: bool,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn render_verify(r: &VerifyReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut s = format!(
        "verify G_{}({}, {}), {} samples, seed {}\n",
        r.field, r.n, r.dim, r.samples, r.seed
    );
    for c in &r.checks {
        let mark = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "  [{mark}] {:<26} max {:<10.3e} tol {:.0e}",
            c.name, c.max_residual, c.tol
        );
    }
    let _ = writeln!(
        s,
        "{}",
        if r.pass {
            "all checks passed"
        } else {
            "some checks failed"
        }
    );
    Ok(s)
}

fn render_poincare(r: &PoincareReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut s = format!("P(t) = {}\neuler characteristic = {}\n", r.coeffs, r.euler);
    for b in &r.betti {
        let _ = writeln!(s, "  b_{:<3} = {}", b.degree, b.b);
    }
    Ok(s)
}

fn render_check_all(r: &CheckAllReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut s = format!("cross-checked {} cases with N ≤ {}\n", r.cases, r.max_dim);
    for m in &r.mismatches {
        let _ = writeln!(
            s,
            "  mismatch: {:?} on G_{}({}, {})",
            m.method, m.field, m.n, m.dim
        );
    }
    let _ = writeln!(
        s,
        "{}",
        if r.pass {
            "all methods agree"
        } else {
            "methods disagree"
        }
    );
    Ok(s)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn render_flow(runs: &[FlowRun], format: Format) -> Result<String> {
    match format {
        Format::Json if runs.len() == 1 => to_json(&runs[0]),
        Format::Json => to_json(&runs),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "run",
                "seed",
                "iters",
                "f_final",
                "grad_norm",
                "converged",
                "class",
                "index",
                "nullity",
            ])
            .map_err(|e| Error::Io(e.into()))?;
            for r in runs {
                let rep = &r.report;
                w.write_record([
                    r.run.to_string(),
                    r.seed.to_string(),
                    rep.iters.to_string(),
                    rep.f_final.to_string(),
                    rep.grad_norm.to_string(),
                    rep.converged.to_string(),
                    opt(rep.class),
                    opt(rep.index),
                    opt(rep.nullity),
                ])
                .map_err(|e| Error::Io(e.into()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        Format::Pretty => {
            let mut s = String::new();
            for r in runs {
                let rep = &r.report;
                let _ = writeln!(
                    s,
                    "run {} (seed {}): {} iterations, f = {:.12}, |grad| = {:.3e}, {}{}",
                    r.run,
                    r.seed,
                    rep.iters,
                    rep.f_final,
                    rep.grad_norm,
                    rep.class
                        .map_or("unclassified".to_string(), |c| c.to_string()),
                    match (rep.index, rep.nullity) {
                        (Some(i), Some(z)) => format!(", index {i}, nullity {z}"),
                        _ => String::new(),
                    }
                );
            }
            Ok(s)
        }
    }
}

fn render_index(r: &IndexReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(r);
    }
    Ok(format!(
        "{} on G_{}({}, {}) with {}: index {} (predicted {}), nullity {} (predicted {}){}\n",
        r.class,
        r.field,
        r.n,
        r.dim,
        r.param,
        r.index,
        r.predicted_index,
        r.nullity,
        r.predicted_nullity,
        if r.unstable {
            ", UNSTABLE spectrum"
        } else {
            ""
        }
    ))
}

/// Runs a resolved configuration and renders its report.
pub fn execute(cfg: &RunConfig) -> Result<Rendered> {
    match cfg.command {
        CommandKind::Verify => {
            let r = cmd_verify(cfg)?;
            Ok(Rendered {
                text: render_verify(&r, cfg.format)?,
                pass: r.pass,
            })
        }
        CommandKind::Poincare if cfg.check_all => {
            let r = cmd_check_all(cfg.max_dim)?;
            Ok(Rendered {
                text: render_check_all(&r, cfg.format)?,
                pass: r.pass,
            })
        }
        CommandKind::Poincare => {
            let r = cmd_poincare(cfg)?;
            Ok(Rendered {
                text: render_poincare(&r, cfg.format)?,
                pass: true,
            })
        }
        CommandKind::Flow => {
            let runs = cmd_flow(cfg)?;
            let pass = runs.iter().all(|r| r.report.converged);
            Ok(Rendered {
                text: render_flow(&runs, cfg.format)?,
                pass,
            })
        }
        CommandKind::Index => {
            let r = cmd_index(cfg)?;
            Ok(Rendered {
                text: render_index(&r, cfg.format)?,
                pass: r.pass,
            })
        }
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Contract(_)
            | Error::Unsupported(_)
            | Error::FieldMismatch { .. }
            | Error::DimensionMismatch { .. }
    )
}

/// Parses arguments, runs the command and writes the report; returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cfg = match RunConfig::resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let rendered = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_CHECK_FAILED
            };
        }
    };
    let written = match cfg.output_path() {
        Some(path) => std::fs::write(&path, &rendered.text),
        None => stdout.write_all(rendered.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_CHECK_FAILED;
    }
    if rendered.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
