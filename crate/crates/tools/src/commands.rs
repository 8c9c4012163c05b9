//! Subcommands. Each returns `Ok(true)` on success, `Ok(false)` when a
//! verification failed after its output was produced.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toric_core::oracle::{brute_minimal_nonfaces, surface_census};
use toric_core::presentation::format_relation_with;
use toric_core::{
    audit::audit_instance, blow_down, blow_down_relation, blow_up, contraction_reports, curve_class, instantiate,
    is_fano, is_splitting_fan, presentation_of, primitive_collections, realize, validate, ContractionKind, Fan,
    FamilyId, MoriCone, PrimitiveRelation, RaySet, Relation, SmoothCompleteFan,
};

use crate::formats::{emit, parse_as, read_input, FanFile, FormatError, Input, PresentationFile};
use crate::report::{self, OverrideFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Format(FormatError::Core(e)) if !is_usage(e) => 1,
            _ => 2,
        }
    }
}

fn is_usage(e: &toric_core::Error) -> bool {
    matches!(
        e,
        toric_core::Error::Parameter(_)
            | toric_core::Error::UnknownFamily(_)
            | toric_core::Error::RayIndexOutOfRange { .. }
            | toric_core::Error::Presentation(toric_core::PresentationError::Malformed(_))
    )
}

impl From<toric_core::Error> for CliError {
    fn from(e: toric_core::Error) -> Self {
        CliError::Format(FormatError::Core(e))
    }
}

pub type CliResult = Result<bool, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Presentation,
    Fan,
}

/// `a..b` (inclusive) or a single dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRange(pub usize, pub usize);

impl FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad dimension {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        report::check_dims(lo, hi)?;
        Ok(DimRange(lo, hi))
    }
}

#[derive(Debug, Parser)]
#[command(name = "toric", version, about = "Exact computations on smooth complete toric fans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Writes a catalog instance as a presentation or a realized fan.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        alpha: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Presentation)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realizes a presentation file as a fan.
    Realize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates a fan or presentation file, or audits a catalog instance.
    Verify {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input", requires = "dim")]
        family: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        alpha: Option<i64>,
    },
    /// Primitive relations as JSON.
    Pc { input: PathBuf },
    /// Mori cone generators with extremality flags as JSON.
    Mori { input: PathBuf },
    /// Contraction reports for every primitive relation as JSON.
    Contractions { input: PathBuf },
    /// Star subdivision along a cone.
    Blowup {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        cone: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse of a star subdivision; `--cone` picks the relation when needed.
    Blowdown {
        input: PathBuf,
        #[arg(long)]
        ray: usize,
        #[arg(long, value_delimiter = ',')]
        cone: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verifies every catalog instance and writes a Markdown report with a JSON sidecar.
    Census {
        #[arg(long, default_value = "5..8")]
        dims: DimRange,
        #[arg(long)]
        out: PathBuf,
        /// Replaces a catalog instance by a presentation file.
        #[arg(long = "override", value_name = "FILE")]
        overrides: Vec<PathBuf>,
    },
    /// Brute-force cross-checks.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Census of smooth complete surface fans with bounded rays.
    Surfaces {
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares primitive collections against a brute-force non-face search.
    Pc { input: PathBuf },
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate {
            family,
            dim,
            alpha,
            format,
            out,
        } => generate(&family, dim, alpha, format, out.as_deref()),
        Command::Realize { input, out } => {
            let fan = load_fan(&input)?;
            write_fan(out.as_deref(), fan.fan())
        }
        Command::Verify {
            input,
            family,
            dim,
            alpha,
        } => match (input, family) {
            (Some(path), None) => verify_file(&path),
            (None, Some(family)) => verify_family(&family, dim.expect("required by clap"), alpha),
            _ => Err(CliError::Usage("verify needs a file or --family with --dim".into())),
        },
        Command::Pc { input } => {
            let fan = load_fan(&input)?;
            let rels: Vec<RelationOut> = MoriCone::new(&fan)?
                .relations()
                .iter()
                .map(|r| RelationOut::new(&fan, r))
                .collect();
            print_json(&rels)
        }
        Command::Mori { input } => mori(&input),
        Command::Contractions { input } => contractions(&input),
        Command::Blowup { input, cone, out } => {
            let fan = load_fan(&input)?;
            let b = blow_up(&fan, RaySet::from_indices(cone))?;
            write_fan(out.as_deref(), b.fan())
        }
        Command::Blowdown { input, ray, cone, out } => {
            let fan = load_fan(&input)?;
            let b = match cone {
                Some(c) => blow_down_relation(&fan, ray, RaySet::from_indices(c))?,
                None => blow_down(&fan, ray)?,
            };
            write_fan(out.as_deref(), b.fan())
        }
        Command::Census { dims, out, overrides } => census(dims, &out, &overrides),
        Command::Oracle { which } => match which {
            OracleCommand::Surfaces { bound, out } => surfaces(bound, out.as_deref()),
            OracleCommand::Pc { input } => oracle_pc(&input),
        },
    }
}

fn family_id(s: &str) -> Result<FamilyId, CliError> {
    s.parse().map_err(|e: toric_core::Error| CliError::Usage(e.to_string()))
}

fn generate(family: &str, dim: usize, alpha: Option<i64>, format: Format, out: Option<&Path>) -> CliResult {
    let inst = instantiate(family_id(family)?, dim, alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    match format {
        Format::Presentation => {
            emit(out, &PresentationFile::from_presentation(&inst.presentation).to_json())?;
            Ok(true)
        }
        Format::Fan => write_fan(out, &realize(&inst.presentation)?),
    }
}

/// A fan file as is, or a presentation file realized.
pub fn load_fan(path: &Path) -> Result<SmoothCompleteFan, CliError> {
    let fan = match read_input(path)? {
        Input::Fan(f) => f,
        Input::Presentation(p) => realize(&p)?,
    };
    Ok(SmoothCompleteFan::new(fan)?)
}

fn write_fan(out: Option<&Path>, fan: &Fan) -> CliResult {
    emit(out, &FanFile::from_fan(fan).to_json())?;
    Ok(true)
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// A JSON array with one compact element per line.
fn json_lines<T: Serialize>(items: &[T]) -> String {
    if items.is_empty() {
        return "[]\n".into();
    }
    let lines: Vec<String> = items.iter().map(|i| format!("  {}", compact(i))).collect();
    format!("[\n{}\n]\n", lines.join(",\n"))
}

fn print_json<T: Serialize>(items: &[T]) -> CliResult {
    emit(None, &json_lines(items))?;
    Ok(true)
}

fn names(fan: &SmoothCompleteFan) -> Vec<String> {
    (0..fan.num_rays()).map(|i| fan.fan().ray_name(i)).collect()
}

fn pretty(fan: &SmoothCompleteFan, r: &PrimitiveRelation) -> String {
    let names = names(fan);
    format_relation_with(&Relation::new(r.lhs(), r.rhs.clone()), |i| names[i].as_str())
}

#[derive(Serialize)]
struct RelationOut {
    relation: String,
    lhs: Vec<String>,
    rhs: Vec<(String, i64)>,
    degree: i64,
}

impl RelationOut {
    fn new(fan: &SmoothCompleteFan, r: &PrimitiveRelation) -> Self {
        let names = names(fan);
        RelationOut {
            relation: pretty(fan, r),
            lhs: r.lhs().iter().map(|i| names[i].clone()).collect(),
            rhs: r.rhs.iter().map(|&(i, a)| (names[i].clone(), a)).collect(),
            degree: r.degree,
        }
    }
}

fn mori(input: &Path) -> CliResult {
    #[derive(Serialize)]
    struct ClassOut {
        relation: String,
        class: Vec<i64>,
        degree: i64,
        extremal: bool,
    }
    let fan = load_fan(input)?;
    let cone = MoriCone::new(&fan)?;
    let rows: Vec<ClassOut> = cone
        .relations()
        .iter()
        .enumerate()
        .map(|(i, r)| ClassOut {
            relation: pretty(&fan, r),
            class: curve_class(&fan, r).coeffs().to_vec(),
            degree: r.degree,
            extremal: cone.is_extremal(i),
        })
        .collect();
    print_json(&rows)
}

fn contractions(input: &Path) -> CliResult {
    #[derive(Serialize)]
    struct ReportOut {
        relation: String,
        kind: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        alpha: Option<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        exceptional_ray: Option<String>,
    }
    let fan = load_fan(input)?;
    let names = names(&fan);
    let rows: Vec<ReportOut> = contraction_reports(&fan)?
        .iter()
        .map(|r| {
            let (kind, alpha, ray) = match r.kind {
                ContractionKind::DivisorToCurve {
                    alpha,
                    exceptional_ray,
                } => ("divisor-to-curve", Some(alpha), Some(names[exceptional_ray].clone())),
                ContractionKind::OtherExtremal => ("other-extremal", None, None),
                ContractionKind::NonExtremal => ("non-extremal", None, None),
            };
            ReportOut {
                relation: pretty(&fan, &r.relation),
                kind,
                alpha,
                exceptional_ray: ray,
            }
        })
        .collect();
    print_json(&rows)
}

fn verify_file(path: &Path) -> CliResult {
    let fan = match read_input(path)? {
        Input::Fan(f) => f,
        Input::Presentation(p) => match realize(&p) {
            Ok(f) => f,
            Err(e) => {
                println!("FAIL {}: {e}", path.display());
                return Ok(false);
            }
        },
    };
    let report = validate(&fan)?;
    if !report.is_valid() {
        println!("FAIL {}: {report}", path.display());
        return Ok(false);
    }
    let fan = SmoothCompleteFan::new(fan)?;
    let p = presentation_of(&fan)?;
    println!(
        "ok {}: dim={} rays={} rho={} primitive_collections={} fano={} splitting={}",
        path.display(),
        fan.dim(),
        fan.num_rays(),
        fan.picard_number(),
        primitive_collections(&fan).len(),
        is_fano(&fan)?,
        is_splitting_fan(&fan)
    );
    for r in p.relations() {
        println!("  {}", p.format_relation(r));
    }
    Ok(true)
}

fn verify_family(family: &str, dim: usize, alpha: Option<i64>) -> CliResult {
    let inst = instantiate(family_id(family)?, dim, alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let a = audit_instance(&inst);
    let what = match alpha {
        Some(al) => format!("{} d={dim} alpha={al}", inst.id),
        None => format!("{} d={dim}", inst.id),
    };
    if a.passed() {
        println!(
            "ok {what}: rays={} rho={} primitive_collections={} fano={} splitting={}",
            a.num_rays, a.picard, a.num_collections, a.fano, a.splitting
        );
        Ok(true)
    } else {
        for f in &a.failures {
            println!("FAIL {what}: {}: {}", f.predicate, f.detail);
        }
        Ok(false)
    }
}

fn census(dims: DimRange, out: &Path, overrides: &[PathBuf]) -> CliResult {
    let overrides = overrides
        .iter()
        .map(|p| parse_as::<OverrideFile>(p)?.resolve())
        .collect::<Result<Vec<_>, FormatError>>()?;
    let c = report::build(dims.0, dims.1, &overrides)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| FormatError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    emit(Some(out), &report::markdown(&c))?;
    emit(Some(&out.with_extension("json")), &report::json(&c))?;
    for f in &c.failures {
        eprintln!("FAIL {f}");
    }
    println!(
        "{} {} contraction rows, {} base rows, {} failures -> {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.contraction_rows.len(),
        c.base_rows.len(),
        c.failures.len(),
        out.display()
    );
    Ok(c.passed)
}

fn surfaces(bound: i64, out: Option<&Path>) -> CliResult {
    #[derive(Serialize)]
    struct Representative {
        invariant: Vec<i64>,
        rays: Vec<Vec<i64>>,
        occurrences: usize,
    }
    if bound < 1 {
        return Err(CliError::Usage("--bound must be at least 1".into()));
    }
    let c = surface_census(bound)?;
    let reps: Vec<Representative> = c
        .fano_representatives()
        .map(|k| Representative {
            invariant: k.invariant.clone(),
            rays: k.fan.rays().iter().map(|r| r.coords().to_vec()).collect(),
            occurrences: k.occurrences,
        })
        .collect();
    let text = format!(
        "{{\n  \"bound\": {bound},\n  \"total_complete\": {},\n  \"classes\": {},\n  \"fano_classes\": {},\n  \"fano_representatives\": {}\n}}\n",
        c.total_complete,
        c.classes.len(),
        c.fano_classes(),
        json_lines(&reps).trim_end().replace("\n", "\n  ")
    );
    emit(out, &text)?;
    Ok(true)
}

fn oracle_pc(input: &Path) -> CliResult {
    #[derive(Serialize)]
    struct Agreement {
        level_wise: Vec<Vec<usize>>,
        brute_force: Vec<Vec<usize>>,
        agree: bool,
    }
    let fan = load_fan(input)?;
    let brute: Vec<Vec<usize>> = brute_minimal_nonfaces(fan.fan())?.iter().map(|s| s.to_vec()).collect();
    let fast: Vec<Vec<usize>> = primitive_collections(&fan).iter().map(|p| p.members().to_vec()).collect();
    let agree = brute == fast;
    let a = Agreement {
        level_wise: fast,
        brute_force: brute,
        agree,
    };
    emit(None, &(compact(&a) + "\n"))?;
    Ok(agree)
}
