//! Command-line front end. `run` takes the arguments and output streams
//! explicitly so that it can be driven from tests.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::census;
use crate::error::{Error, Result};
use crate::haupt::{haupt_verdict, realize, Character};
use crate::invariants::{classify_component, hyperelliptic_witness, is_primitive, spin_parity};
use crate::perm::Perm;
use crate::render::render_svg;
use crate::surface::{GridSurface, StratumSig};
use crate::targeting::{build, verify, Certificate, ComponentLabel};

#[derive(Parser, Debug)]
#[command(name = "origami-forge", version, about = "Primitive torus covers in prescribed components of strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certified primitive cover.
    Build {
        /// Zero orders, comma separated, e.g. 2,4,6.
        #[arg(long)]
        stratum: String,
        /// hyp, even, odd, nonhyp or unique.
        #[arg(long)]
        component: String,
        #[arg(long)]
        degree: usize,
        /// Write the certificate here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the surface.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Stratum, component and primitivity of a surface.
    Classify(SurfaceInput),
    /// Enumerate all origamis of one degree as NDJSON.
    Census {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Reuse the classifications already present in the output file.
        #[arg(long)]
        resume: bool,
        /// Cross-validate the census against the component table.
        #[arg(long)]
        validate: bool,
    },
    /// Realizability of a period character.
    Haupt {
        /// Character JSON file.
        #[arg(long)]
        character: PathBuf,
        #[arg(long)]
        stratum: String,
        /// Build a cover as well; needs --component.
        #[arg(long)]
        realize: bool,
        #[arg(long)]
        component: Option<String>,
    },
    /// Draw a surface as SVG.
    Render {
        #[command(flatten)]
        input: SurfaceInput,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Re-check a certificate.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SurfaceInput {
    /// Surface or certificate JSON.
    #[arg(long = "in", conflicts_with_all = ["h", "v"])]
    input: Option<PathBuf>,
    /// Horizontal permutation in cycle notation.
    #[arg(long, requires = "v")]
    h: Option<String>,
    /// Vertical permutation in cycle notation.
    #[arg(long, requires = "h")]
    v: Option<String>,
    /// Degree, when the cycles do not mention the largest square.
    #[arg(long)]
    degree: Option<usize>,
}

/// Failures that mean the request itself was wrong.
fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::InvalidPerm(_)
            | Error::DegreeMismatch(..)
            | Error::InvalidStratum(_)
            | Error::InvalidComponent { .. }
            | Error::DegreeTooSmall { .. }
            | Error::CensusGuard { .. }
            | Error::InvalidParameters(_)
    )
}

enum Outcome {
    Ok,
    Failed,
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Internal(format!("{}: {}", path.display(), e)))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Internal(e.to_string()))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_surface(input: &SurfaceInput) -> Result<GridSurface> {
    if let (Some(h), Some(v)) = (&input.h, &input.v) {
        let h = Perm::parse_cycles(h, input.degree)?;
        let v = Perm::parse_cycles(v, Some(input.degree.unwrap_or(0).max(h.degree())))?;
        let h = if h.degree() < v.degree() { Perm::parse_cycles(&h.to_cycle_string(), Some(v.degree()))? } else { h };
        return GridSurface::from_permutations(&h, &v);
    }
    let path = input.input.as_ref().ok_or_else(|| Error::Parse("give --in FILE or --h and --v".into()))?;
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    let surface = value.get("surface").unwrap_or(&value);
    GridSurface::from_json_value(surface)
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Build { stratum, component, degree, out: path, svg } => {
            let alpha = StratumSig::parse(&stratum)?;
            let comp: ComponentLabel = component.parse()?;
            let cert = build(&alpha, comp, degree)?;
            let text = format!("{}\n", cert.to_json());
            match path {
                Some(p) => write_file(&p, &text)?,
                None => emit(out, &text)?,
            }
            if let Some(p) = svg {
                let title = format!("{} {} degree {}", cert.stratum, cert.component, cert.degree);
                write_file(&p, &render_svg(&cert.surface, Some(&title)))?;
            }
            Ok(Outcome::Ok)
        }
        Command::Classify(input) => {
            let s = load_surface(&input)?;
            let st = s.stratum()?;
            let (primitive, lattice) = is_primitive(&s)?;
            let mut v = json!({
                "degree": s.degree(),
                "stratum": st,
                "genus": st.genus(),
                "component": classify_component(&s)?,
                "primitive": primitive,
                "lattice": lattice,
                "hyperelliptic": !st.is_empty() && hyperelliptic_witness(&s)?.is_some(),
            });
            if st.all_even() && !st.is_empty() {
                v["spin"] = json!(spin_parity(&s)?.parity);
            }
            emit(out, &pretty(&v))?;
            Ok(Outcome::Ok)
        }
        Command::Census { degree, out: path, jobs, resume, validate } => {
            let guard = census::guard();
            let previous = match (&path, resume) {
                (Some(p), true) if p.exists() => {
                    let f = fs::File::open(p).map_err(|e| Error::Parse(e.to_string()))?;
                    census::read_ndjson(BufReader::new(f))?
                }
                (None, true) => return Err(Error::Parse("--resume needs --out".into())),
                _ => Vec::new(),
            };
            let work = || census::enumerate_resuming(degree, guard, &previous);
            let entries = match jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::Internal(e.to_string()))?
                    .install(work)?,
                None => work()?,
            };
            let mut buf = Vec::new();
            census::write_ndjson(&entries, &mut buf)?;
            let report = validate.then(|| census::cross_validate(degree, &entries));
            match &path {
                Some(p) => {
                    fs::write(p, &buf).map_err(|e| Error::Internal(e.to_string()))?;
                    let mut summary = json!({ "degree": degree, "entries": entries.len() });
                    if let Some(r) = &report {
                        summary["cross_validation"] = serde_json::to_value(r).expect("serializable");
                    }
                    emit(out, &pretty(&summary))?;
                }
                None => {
                    out.write_all(&buf).map_err(|e| Error::Internal(e.to_string()))?;
                    if let Some(r) = &report {
                        let _ = err.write_all(pretty(r).as_bytes());
                    }
                }
            }
            Ok(if report.is_some_and(|r| !r.ok) { Outcome::Failed } else { Outcome::Ok })
        }
        Command::Haupt { character, stratum, realize: want_cover, component } => {
            let chi = Character::from_json(&read(&character)?)?;
            let alpha = StratumSig::parse(&stratum)?;
            if want_cover {
                let comp: ComponentLabel =
                    component.ok_or_else(|| Error::Parse("--realize needs --component".into()))?.parse()?;
                let r = realize(&chi, &alpha, comp)?;
                emit(out, &pretty(&r))?;
            } else {
                emit(out, &pretty(&haupt_verdict(&chi, &alpha)?))?;
            }
            Ok(Outcome::Ok)
        }
        Command::Render { input, svg } => {
            let s = load_surface(&input)?;
            let title = s.stratum().map(|st| format!("{} degree {}", st, s.degree())).ok();
            write_file(&svg, &render_svg(&s, title.as_deref()))?;
            Ok(Outcome::Ok)
        }
        Command::Verify { input } => {
            let cert = Certificate::from_json(&read(&input)?)?;
            let report = verify(&cert);
            emit(out, &pretty(&report))?;
            Ok(if report.ok { Outcome::Ok } else { Outcome::Failed })
        }
    }
}
