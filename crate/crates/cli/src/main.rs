use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use locality::bounds::{projector_bounds, subsystem_bounds, BoundMode};
use locality::certify::{expansion_sweep, holographic_certify, theorem_partition_builder, Mode, Outcome, PartitionOptions, PartitionVariant};
use locality::constructions::{
    bacon_shor, build_concat_embedding, saturation_report, small_inner_codes, surface_code, ConcatPlan, EmbeddedCode, InnerCode,
};
use locality::contours::{emit_contours, parse_rational};
use locality::correct::{is_correctable, is_dressed_cleanable, CodeClass, Region};
use locality::geometry::{extract_interactions, find_tiling, slab_mass, subdivide, AxisBox, Embedding, PointMass};
use locality::{DistanceResult, SubsystemCode};

#[derive(Parser)]
#[command(name = "locality", version, about = "Locality analysis for quantum codes embedded in R^D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Subsystem,
    Projector,
}

impl From<Class> for CodeClass {
    fn from(c: Class) -> Self {
        match c {
            Class::Subsystem => CodeClass::Subsystem,
            Class::Projector => CodeClass::Projector,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsMode {
    Asymptotic,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "thm3_2")]
    Thm32,
    #[value(name = "thm5_1_case1")]
    Thm51Case1,
    #[value(name = "thm5_1_case2")]
    Thm51Case2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    BaconShor,
    Surface,
    Steane,
    FiveOneThree,
    Repetition,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModeFlags {
    /// Counting arguments only.
    #[arg(long)]
    strict: bool,
    /// Check every grown region exactly.
    #[arg(long)]
    verified: bool,
}

impl ModeFlags {
    fn mode(&self) -> Mode {
        if self.verified {
            Mode::Verified
        } else {
            Mode::Strict
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print n, k, g, s and the gauge rank of a code file.
    Params {
        code: PathBuf,
        /// Also search for the distance up to this weight.
        #[arg(long)]
        weight_cap: Option<usize>,
        /// Plain `key=value` output instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Brute-force distance search.
    Distance {
        code: PathBuf,
        #[arg(long)]
        weight_cap: usize,
    },
    /// Interaction lengths of an embedded code and the counts at a threshold.
    Interactions {
        code: PathBuf,
        embedding: PathBuf,
        #[arg(long)]
        ell: f64,
    },
    /// Lower bounds on long-range interactions for given parameters.
    Bounds {
        #[arg(long, value_enum, default_value = "subsystem")]
        class: Class,
        #[arg(long, value_enum, default_value = "asymptotic")]
        mode: BoundsMode,
        #[arg(short = 'n')]
        n: f64,
        #[arg(short = 'k')]
        k: f64,
        #[arg(short = 'd')]
        d: f64,
        /// Embedding dimension.
        #[arg(short = 'D', long = "D")]
        dim: usize,
    },
    /// Test whether a qubit region is correctable or dressed-cleanable.
    CheckRegion {
        code: PathBuf,
        /// Region file `{"qubits": [...]}`.
        #[arg(long, conflicts_with = "qubits")]
        region: Option<PathBuf>,
        /// Comma-separated qubit indices.
        #[arg(long, value_delimiter = ',')]
        qubits: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "cleanable")]
        correctable: bool,
        #[arg(long)]
        cleanable: bool,
    },
    /// Find a grid offset with few qubits near cube faces.
    Tile {
        embedding: PathBuf,
        #[arg(long)]
        w: f64,
        #[arg(long)]
        ell: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_samples: usize,
    },
    /// Split a box into slabs of bounded mass.
    Subdivide {
        /// File `{"box": {"min": [...], "max": [...]}, "masses": [{"point": [...], "mass": m}, ...]}`.
        input: PathBuf,
        #[arg(long)]
        ell: f64,
        #[arg(long)]
        d1: f64,
    },
    /// Staircase expansion sweep; prints the certificate as JSON lines.
    Sweep {
        embedding: PathBuf,
        /// Code file; required with --verified.
        #[arg(long)]
        code: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long)]
        ell: f64,
        /// Slab threshold; defaults to l * n^((D-1)/D).
        #[arg(long)]
        tau: Option<f64>,
        #[arg(short = 'd', long = "d")]
        d: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Holographic cube induction on the qubits inside a box.
    Holographic {
        code: PathBuf,
        embedding: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        box_min: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        box_max: Vec<f64>,
        #[arg(long)]
        ell: f64,
        #[arg(short = 'd', long = "d")]
        d: usize,
        #[command(flatten)]
        mode: ModeFlags,
        #[arg(long)]
        trace: bool,
    },
    /// Build the A/B(/C) qubit division of a proof and evaluate its counts.
    Partition {
        code: PathBuf,
        embedding: PathBuf,
        #[arg(long)]
        ell: f64,
        #[arg(short = 'd', long = "d")]
        d: usize,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Cube width; defaults to w0(d, l, D).
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        seed: u64,
    },
    /// Emit a built-in code family with its embedding.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        /// Grid side for bacon-shor and surface, length for repetition.
        #[arg(long, default_value_t = 3)]
        size: usize,
        /// Lattice dimension for the small codes.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        code_out: Option<PathBuf>,
        #[arg(long)]
        embedding_out: Option<PathBuf>,
    },
    /// Concatenate two embedded codes and dilate the layout.
    Concat {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        inner_embedding: PathBuf,
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        outer_embedding: PathBuf,
        #[arg(long)]
        ell_target: f64,
        /// Outer locality; measured when omitted.
        #[arg(long)]
        ell2: Option<f64>,
        #[arg(long)]
        code_out: Option<PathBuf>,
        #[arg(long)]
        embedding_out: Option<PathBuf>,
    },
    /// Compare the longest interaction of an embedded code with l*.
    Saturation {
        code: PathBuf,
        embedding: PathBuf,
        #[arg(long, value_enum, default_value = "subsystem")]
        class: Class,
        #[arg(long, default_value_t = 4)]
        weight_cap: usize,
    },
    /// Exponent-space table of log_n l* and log_n M*.
    Contours {
        #[arg(short = 'D', long = "D")]
        dim: usize,
        #[arg(long, value_enum, default_value = "subsystem")]
        class: Class,
        /// Grid step, decimal or p/q.
        #[arg(long, default_value = "0.1")]
        grid_step: String,
        #[arg(long)]
        csv: bool,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn load_pair(code: &Path, embedding: &Path) -> Result<(SubsystemCode, Embedding)> {
    let c: SubsystemCode = read_json(code)?;
    let e: Embedding = read_json(embedding)?;
    if c.n() != e.len() {
        bail!("code has {} qubits but embedding has {} points", c.n(), e.len());
    }
    Ok((c, e))
}

fn emit_pair(ec: &EmbeddedCode, code_out: Option<&Path>, embedding_out: Option<&Path>) -> Result<()> {
    match (code_out, embedding_out) {
        (None, None) => emit(ec),
        (c, e) => {
            if let Some(p) = c {
                write_json(p, &ec.code)?;
            }
            if let Some(p) = e {
                write_json(p, &ec.embedding)?;
            }
            emit(&ec.parameters)
        }
    }
}

#[derive(Serialize)]
struct ParamsOut {
    n: usize,
    k: usize,
    g: usize,
    s: usize,
    r: usize,
    abelian: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<DistanceResult>,
}

#[derive(Deserialize)]
struct SubdivideInput {
    #[serde(rename = "box")]
    bx: AxisBox,
    masses: Vec<PointMass>,
}

#[derive(Serialize)]
struct SubdivideOut {
    slabs: Vec<AxisBox>,
    masses: Vec<u64>,
    total_mass: u64,
    count_cap: u64,
}

fn certificate_exit(outcome: &Outcome) -> ExitCode {
    match outcome {
        Outcome::StuckAt { .. } => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Params { code, weight_cap, text } => {
            let c: SubsystemCode = read_json(&code)?;
            let p = c.parameters();
            let d = match weight_cap {
                Some(cap) if p.k > 0 => Some(c.distance(cap)?),
                _ => None,
            };
            let out = ParamsOut { n: p.n, k: p.k, g: p.g, s: p.s, r: p.r, abelian: c.is_abelian(), d };
            if text {
                let mut line = format!("n={} k={} g={} s={} r={}", out.n, out.k, out.g, out.s, out.r);
                match d {
                    Some(DistanceResult::Exact(v)) => line.push_str(&format!(" d={v}")),
                    Some(DistanceResult::GreaterThan(v)) => line.push_str(&format!(" d>{v}")),
                    None => {}
                }
                println!("{line}");
            } else {
                emit(&out)?;
            }
        }
        Command::Distance { code, weight_cap } => {
            let c: SubsystemCode = read_json(&code)?;
            emit(&c.distance(weight_cap)?)?;
        }
        Command::Interactions { code, embedding, ell } => {
            let (c, e) = load_pair(&code, &embedding)?;
            let s = extract_interactions(&c, &e)?;
            let long = s.count_long(ell)?;
            emit(&serde_json::json!({
                "max_length": s.max_length(),
                "long": long,
                "pairs": s.pairs,
            }))?;
        }
        Command::Bounds { class, mode, n, k, d, dim } => {
            let mode = match mode {
                BoundsMode::Asymptotic => BoundMode::Asymptotic,
                BoundsMode::Explicit => BoundMode::Explicit,
            };
            let r = match class {
                Class::Subsystem => subsystem_bounds(n, k, d, dim, mode)?,
                Class::Projector => projector_bounds(n, k, d, dim, mode)?,
            };
            emit(&r)?;
        }
        Command::CheckRegion { code, region, qubits, correctable, cleanable } => {
            let c: SubsystemCode = read_json(&code)?;
            let r = match (region, qubits) {
                (Some(p), _) => read_json::<Region>(&p)?,
                (None, Some(q)) => Region::new(q),
                (None, None) => bail!("give --region or --qubits"),
            };
            let r = Region::checked(c.n(), r.qubits)?;
            let mut out = serde_json::Map::new();
            out.insert("qubits".into(), serde_json::to_value(&r.qubits)?);
            if correctable || !cleanable {
                out.insert("correctable".into(), is_correctable(&c, &r.qubits).into());
            }
            if cleanable || !correctable {
                out.insert("dressed_cleanable".into(), is_dressed_cleanable(&c, &r.qubits).into());
            }
            emit(&out)?;
        }
        Command::Tile { embedding, w, ell, seed, max_samples } => {
            let e: Embedding = read_json(&embedding)?;
            let pts: Vec<PointMass> = e.coordinates().iter().map(|p| PointMass::unit(p.clone())).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = find_tiling(&pts, &pts, w, ell, e.dimension(), &mut rng, max_samples)?;
            emit(&r)?;
            if !r.satisfied() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Subdivide { input, ell, d1 } => {
            let inp: SubdivideInput = read_json(&input)?;
            let slabs = subdivide(&inp.bx, &inp.masses, ell, d1)?;
            let masses = (0..slabs.len()).map(|i| slab_mass(&slabs, i, &inp.masses)).collect();
            let total = locality::geometry::mass_in(&inp.bx, &inp.masses);
            let count_cap = 1u64.max((2.0 * total as f64 / d1).floor() as u64);
            let over = slabs.len() as u64 > count_cap;
            emit(&SubdivideOut { slabs, masses, total_mass: total, count_cap })?;
            if over {
                eprintln!("slab count exceeds max(1, floor(2f/d1)) = {count_cap}");
            }
        }
        Command::Sweep { embedding, code, mode, ell, tau, d, trace } => {
            let e: Embedding = read_json(&embedding)?;
            let c: Option<SubsystemCode> = code.as_deref().map(read_json).transpose()?;
            let s = match &c {
                Some(c) => extract_interactions(c, &e)?,
                None => locality::geometry::InteractionSet { n: e.len(), pairs: Vec::new() },
            };
            let cert = expansion_sweep(c.as_ref(), &e, &s, ell, tau, d, mode.mode())?;
            print!("{}", cert.to_json_lines());
            if trace {
                eprint!("{}", cert.render());
            }
            return Ok(certificate_exit(&cert.outcome));
        }
        Command::Holographic { code, embedding, box_min, box_max, ell, d, mode, trace } => {
            let (c, e) = load_pair(&code, &embedding)?;
            let b = AxisBox::new(box_min, box_max)?;
            let cert = holographic_certify(&c, &e, &b, ell, d, mode.mode())?;
            print!("{}", cert.to_json_lines());
            if trace {
                eprint!("{}", cert.render());
            }
            return Ok(certificate_exit(&cert.outcome));
        }
        Command::Partition { code, embedding, ell, d, variant, width, seed } => {
            let (c, e) = load_pair(&code, &embedding)?;
            let variant = match variant {
                Variant::Thm32 => PartitionVariant::Thm3_2,
                Variant::Thm51Case1 => PartitionVariant::Thm5_1Case1,
                Variant::Thm51Case2 => PartitionVariant::Thm5_1Case2,
            };
            let opts = PartitionOptions { width, seed, ..Default::default() };
            let r = theorem_partition_builder(&c, &e, ell, d, variant, &opts)?;
            emit(&r)?;
            let failed = r.ab.as_ref().is_some_and(|a| !a.holds()) || r.abc.as_ref().is_some_and(|a| !a.holds());
            if failed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Construct { family, size, dim, code_out, embedding_out } => {
            let ec = match family {
                Family::BaconShor => bacon_shor(size)?,
                Family::Surface => surface_code(size)?,
                Family::Steane => small_inner_codes(InnerCode::Steane, dim)?,
                Family::FiveOneThree => small_inner_codes(InnerCode::FiveOneThree, dim)?,
                Family::Repetition => small_inner_codes(InnerCode::Repetition(size), dim)?,
            };
            emit_pair(&ec, code_out.as_deref(), embedding_out.as_deref())?;
        }
        Command::Concat { inner, inner_embedding, outer, outer_embedding, ell_target, ell2, code_out, embedding_out } => {
            let (ic, ie) = load_pair(&inner, &inner_embedding)?;
            let (oc, oe) = load_pair(&outer, &outer_embedding)?;
            let plan = ConcatPlan {
                inner: EmbeddedCode::new("inner", ic, ie)?,
                outer: EmbeddedCode::new("outer", oc, oe)?,
                ell_target,
                ell2,
            };
            let out = build_concat_embedding(&plan)?;
            if code_out.is_some() || embedding_out.is_some() {
                emit_pair(&out.embedded, code_out.as_deref(), embedding_out.as_deref())?;
            } else {
                emit(&out)?;
            }
            if !out.within_target() {
                eprintln!("longest interaction {} is not below the target {}", out.max_length, out.ell_target);
                return Ok(ExitCode::from(1));
            }
        }
        Command::Saturation { code, embedding, class, weight_cap } => {
            let (c, e) = load_pair(&code, &embedding)?;
            let ec = EmbeddedCode::new("input", c, e)?;
            emit(&saturation_report(&ec, class.into(), weight_cap)?)?;
        }
        Command::Contours { dim, class, grid_step, csv } => {
            let step = parse_rational(&grid_step).with_context(|| format!("bad grid step {grid_step:?}"))?;
            let t = emit_contours(dim, class.into(), step)?;
            if csv {
                print!("{}", t.to_csv());
            } else {
                emit(&t)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
