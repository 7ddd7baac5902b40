//! `qxwit`: build, check and certify the witness `φ_{s,t}` from the command line.
//!
//! Every command writes one JSON document. Exit status: 0 for a positive
//! verdict or certificate, 1 for a negative verdict, 2 for errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use qxwit::certify::{
    exposedness_certificate, find_ppt_entangled, kernel_classify, spanning_check, ConstraintSet, ExposednessOptions,
};
use qxwit::qcore::{herm_min_eig, ComplexMatrix, MatrixJson, ProductVector, ProductVectorJson, C64};
use qxwit::witness::{
    all_families, kernel_members, kernel_vector, pairing, verify_positive, Grid, KernelFamily, KernelMember,
    WitnessFamily, DEFAULT_RESTARTS,
};
use qxwit::xstate::{block_positivity, is_ghz_diagonal, rank4_separability_check, XMatrix, XMatrixJson};

const SQRT_8: f64 = 2.828_427_124_746_190_3;

#[derive(Parser, Debug)]
#[command(
    name = "qxwit",
    version,
    about = "Exposed indecomposable positive bilinear map on 2x2 matrices"
)]
struct Cli {
    /// Parameter `s` of the map; `s·t` must equal 8.
    #[arg(long, global = true, default_value_t = SQRT_8)]
    s: f64,
    /// Parameter `t` of the map.
    #[arg(long, global = true, default_value_t = SQRT_8)]
    t: f64,
    /// Numerical tolerance for verdicts and ranks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = GridChoice::Default)]
    grid: GridChoice,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Indent the JSON and print a one-line summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridChoice {
    Small,
    Default,
    Fine,
}

impl GridChoice {
    fn grid(self) -> Grid {
        match self {
            GridChoice::Small => Grid::small(),
            GridChoice::Default => Grid::standard(),
            GridChoice::Fine => Grid::fine(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            GridChoice::Small => "small",
            GridChoice::Default => "default",
            GridChoice::Fine => "fine",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choi matrix of the map and its X-part.
    Choi,
    /// Apply the map to two 2x2 matrices given as matrix JSON files.
    Apply { x: PathBuf, y: PathBuf },
    /// Pairing of an 8x8 Hermitian matrix with the Choi matrix.
    Pairing { rho: PathBuf },
    /// Kernel product vectors: one member, or every member over the grid.
    Kernel {
        #[arg(long)]
        family: Option<KernelFamily>,
        #[arg(long, requires = "family")]
        a1: Option<f64>,
        #[arg(long, requires = "family")]
        a2: Option<f64>,
        /// Flat-family coefficients as `re0,im0,re1,im1`.
        #[arg(long, requires = "family", value_delimiter = ',')]
        coeffs: Option<Vec<f64>>,
    },
    /// Match a product vector JSON file against the kernel families.
    Classify { vector: PathBuf },
    /// Verdicts for an X-shaped matrix JSON file.
    Xstate { file: PathBuf },
    /// Numerical certificates.
    Certify {
        #[command(subcommand)]
        which: CertifyCommand,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Full spanning property over the kernel families.
    Spanning,
    /// Exposedness of the ray through the Choi matrix.
    Exposedness {
        #[arg(long, value_enum, default_value_t = Constraints::Full)]
        constraints: Constraints,
        /// See-saw restarts per pruning direction.
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// A PPT state with negative pairing.
    Detect {
        #[arg(long)]
        random_direction: bool,
    },
    /// See-saw check that the map is positive.
    Positivity {
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Constraints {
    Full,
    WithoutDualStates,
    FlatOnly,
}

impl From<Constraints> for ConstraintSet {
    fn from(c: Constraints) -> Self {
        match c {
            Constraints::Full => ConstraintSet::Full,
            Constraints::WithoutDualStates => ConstraintSet::WithoutDualStates,
            Constraints::FlatOnly => ConstraintSet::FlatOnly,
        }
    }
}

/// A finished command: its report, verdict, and a short human summary.
struct Report {
    body: Value,
    positive: bool,
    summary: String,
}

fn fail(msg: impl std::fmt::Display) -> String {
    msg.to_string()
}

fn read_json<J: DeserializeOwned, T: TryFrom<J, Error = qxwit::Error>>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let raw: J = serde_json::from_str(&text).map_err(|e| format!("malformed {}: {e}", path.display()))?;
    T::try_from(raw).map_err(|e| format!("invalid {}: {e}", path.display()))
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from(m.clone())).expect("serializable")
}

fn config_value(cli: &Cli) -> Value {
    json!({ "s": cli.s, "t": cli.t, "tol": cli.tol, "seed": cli.seed, "grid": cli.grid.name() })
}

fn run(cli: &Cli, w: &WitnessFamily) -> Result<Report, String> {
    let grid = cli.grid.grid();
    match &cli.command {
        Command::Choi => {
            let choi = w.choi();
            let min_eig = herm_min_eig(&choi).map_err(fail)?;
            Ok(Report {
                body: json!({
                    "choi": matrix_value(&choi),
                    "xpart": XMatrixJson::from(w.choi_xpart()),
                    "min_eigenvalue": min_eig,
                }),
                positive: true,
                summary: format!(
                    "Choi matrix for s = {}, t = {}; min eigenvalue {min_eig:.6}",
                    w.s(),
                    w.t()
                ),
            })
        }
        Command::Apply { x, y } => {
            let x: ComplexMatrix = read_json::<MatrixJson, _>(x)?;
            let y: ComplexMatrix = read_json::<MatrixJson, _>(y)?;
            let out = w.apply(&x, &y).map_err(fail)?;
            Ok(Report {
                body: json!({ "result": matrix_value(&out) }),
                positive: true,
                summary: "applied the map".into(),
            })
        }
        Command::Pairing { rho } => {
            let rho: ComplexMatrix = read_json::<MatrixJson, _>(rho)?;
            let value = pairing(&rho, &w.choi()).map_err(fail)?;
            let nonnegative = value >= -cli.tol;
            Ok(Report {
                body: json!({ "pairing": value, "nonnegative": nonnegative }),
                positive: nonnegative,
                summary: format!("pairing {value:.6e}"),
            })
        }
        Command::Kernel { family, a1, a2, coeffs } => {
            let members = match family {
                None => kernel_members(&grid, &all_families()),
                Some(f) if f.is_flat() => {
                    let c = coeffs.as_ref().ok_or("flat families need --coeffs re0,im0,re1,im1")?;
                    if c.len() != 4 {
                        return Err(format!("--coeffs takes 4 numbers, got {}", c.len()));
                    }
                    vec![KernelMember::flat(*f, [C64::new(c[0], c[1]), C64::new(c[2], c[3])])]
                }
                Some(f) => match (a1, a2) {
                    (Some(a1), Some(a2)) => vec![KernelMember::moduli(*f, *a1, *a2)],
                    _ => return Err(format!("family {f} needs --a1 and --a2")),
                },
            };
            let choi = w.choi();
            let mut worst = 0.0f64;
            let mut items = Vec::with_capacity(members.len());
            for m in &members {
                let v = kernel_vector(w, m).map_err(fail)?;
                let p = pairing(&v.normalized().projector(), &choi).map_err(fail)?;
                worst = worst.max(p.abs());
                items.push(json!({ "member": m, "vector": ProductVectorJson::from(v), "pairing": p }));
            }
            let in_kernel = worst <= cli.tol;
            Ok(Report {
                body: json!({ "members": items, "max_abs_pairing": worst }),
                positive: in_kernel,
                summary: format!("{} kernel vectors, max |pairing| {worst:.2e}", members.len()),
            })
        }
        Command::Classify { vector } => {
            let v: ProductVector = read_json::<ProductVectorJson, _>(vector)?;
            let c = kernel_classify(w, &v, cli.tol);
            let summary = match c.family {
                Some(f) => format!("family {f}"),
                None => format!("no family (pairing {:.3e})", c.pairing),
            };
            Ok(Report {
                positive: c.family.is_some(),
                body: serde_json::to_value(&c).map_err(fail)?,
                summary,
            })
        }
        Command::Xstate { file } => xstate_report(w, &read_json::<XMatrixJson, XMatrix>(file)?),
        Command::Certify { which } => certify(cli, w, &grid, which),
    }
}

/// Block-positivity applies when only `a₄`, `b₄` and `c` can be nonzero.
fn is_witness_shaped(x: &XMatrix) -> bool {
    x.a[..3].iter().chain(&x.b[..3]).all(|&v| v == 0.0)
}

fn xstate_report(w: &WitnessFamily, x: &XMatrix) -> Result<Report, String> {
    let ghz = is_ghz_diagonal(x);
    let separability = if x.is_diagonal() {
        None
    } else {
        match rank4_separability_check(x) {
            Ok(r) => Some(r),
            Err(qxwit::Error::DiagonalXMatrix) => None,
            Err(e) => return Err(e.to_string()),
        }
    };
    let block = if is_witness_shaped(x) {
        Some(block_positivity(x.a[3], x.b[3], &x.c).map_err(fail)?)
    } else {
        None
    };
    let (verdict, positive) = match (&block, &separability) {
        (Some(b), _) => ("block-positive", b.block_positive),
        (None, Some(s)) => ("separable", s.separable),
        (None, None) => ("ghz-diagonal", ghz),
    };
    let pairing = qxwit::witness::pairing_x(x, w);
    Ok(Report {
        body: json!({
            "verdict": verdict,
            "positive": positive,
            "separability": separability,
            "ghz_diagonal": ghz,
            "block_positivity": block,
            "pairing": pairing,
        }),
        positive,
        summary: format!("{verdict}: {positive}"),
    })
}

fn certify(cli: &Cli, w: &WitnessFamily, grid: &Grid, which: &CertifyCommand) -> Result<Report, String> {
    match which {
        CertifyCommand::Spanning => {
            let r = spanning_check(w, grid).map_err(fail)?;
            let ranks: Vec<usize> = r.subsets.iter().map(|s| s.rank).collect();
            Ok(Report {
                positive: r.spans(),
                summary: format!("ranks {ranks:?}, margin {:.3e}", r.min_margin()),
                body: serde_json::to_value(&r).map_err(fail)?,
            })
        }
        CertifyCommand::Exposedness { constraints, restarts } => {
            let options = ExposednessOptions {
                constraints: (*constraints).into(),
                restarts: *restarts,
                seed: cli.seed,
                ..Default::default()
            };
            let c = exposedness_certificate(w, grid, cli.tol, &options).map_err(fail)?;
            Ok(Report {
                positive: c.certified,
                summary: format!(
                    "surviving ray dimension {}, nullspace {}, certified {}",
                    c.surviving_ray_dim, c.nullspace_dim, c.certified
                ),
                body: serde_json::to_value(&c).map_err(fail)?,
            })
        }
        CertifyCommand::Detect { random_direction } => {
            let c = find_ppt_entangled(w, cli.seed, *random_direction).map_err(fail)?;
            Ok(Report {
                positive: true,
                summary: format!("PPT state with pairing {:.4e}", c.pairing_value),
                body: serde_json::to_value(&c).map_err(fail)?,
            })
        }
        CertifyCommand::Positivity { restarts } => {
            let r = verify_positive(w, *restarts, cli.seed).map_err(fail)?;
            let positive = r.min_value >= -cli.tol;
            Ok(Report {
                positive,
                summary: format!("minimum over product vectors {:.3e}", r.min_value),
                body: json!({
                    "min_value": r.min_value,
                    "argmin": ProductVectorJson::from(r.argmin),
                    "restarts": r.restarts,
                    "positive": positive,
                }),
            })
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("QXWIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QXWIT_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(fail)
}

fn emit(cli: &Cli, report: &Report) -> Result<(), String> {
    let mut body = report.body.clone();
    if let Value::Object(map) = &mut body {
        map.insert("config".into(), config_value(cli));
    }
    let mut text = if cli.pretty {
        serde_json::to_string_pretty(&body)
    } else {
        serde_json::to_string(&body)
    }
    .map_err(fail)?;
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(fail)?,
    }
    if cli.pretty {
        eprintln!("{}", report.summary);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let w = match WitnessFamily::new(cli.s, cli.t) {
        Ok(w) => w,
        Err(e) => Cli::command().error(ErrorKind::ValueValidation, e).exit(),
    };
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        Cli::command()
            .error(
                ErrorKind::ValueValidation,
                format!("--tol must be positive, got {}", cli.tol),
            )
            .exit();
    }
    let outcome = configure_threads()
        .and_then(|()| run(&cli, &w))
        .and_then(|r| emit(&cli, &r).map(|()| r.positive));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("qxwit: {msg}");
            ExitCode::from(2)
        }
    }
}
