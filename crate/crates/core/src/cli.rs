//! The `tropjac` command line: argument parsing, input loading, report
//! assembly, and the exit-code contract.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | unreadable or malformed input |
//! | 3 | input violates an invariant |
//! | 4 | `twist` on a graph that is not a tree |
//! | 5 | degenerate divisor passed to the rubber pipeline |
//! | 6 | input outside the supported range |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::divisor::{self, DivisorError, Multidegree, PLDivisor, TargetKind};
use crate::enumerate::{self, EnumerateError};
use crate::graph::{self, GraphError, RawGraph, TropicalGraph};
use crate::lattice::LatticeError;
use crate::rubber::{self, RubberError};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Parser)]
#[command(name = "tropjac", version, about = "PL divisors, minimal monoids and rubber data on tropical curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, clap::Args)]
pub struct DivisorInput {
    /// A divisor file (`{"graph": …, "slopes": {…}}`), or a graph file when
    /// `--slopes` is given.
    pub path: PathBuf,
    /// Slopes as `{"edge-id": slope, …}`.
    #[arg(long)]
    pub slopes: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a graph file and print its statistics.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The unique slope assignment on a tree with the target multidegree.
    Twist {
        path: PathBuf,
        /// `zero`, `canonical`, or a JSON file mapping vertex ids to degrees.
        #[arg(long, default_value = "zero")]
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multidegree of a divisor.
    Degree {
        #[command(flatten)]
        input: DivisorInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All slope assignments with the target multidegree.
    Enumerate {
        path: PathBuf,
        #[arg(long, default_value = "zero")]
        target: String,
        /// Also run the brute-force search over `[-B, B]` and compare.
        #[arg(long, value_name = "B")]
        oracle: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal monoid, vertex values and diagnostics of a divisor.
    Minmonoid {
        #[command(flatten)]
        input: DivisorInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alignment test and the subdivision of the base cone.
    Align {
        #[command(flatten)]
        input: DivisorInput,
        /// Number of random base-cone points to test against the cells.
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subdivide the source graph over one cell.
    Subdivide {
        #[command(flatten)]
        input: DivisorInput,
        /// Index into the list of cells; defaults to the divisor's own order.
        #[arg(long)]
        cell: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline: alignment, cells, and rubber data per maximal cell.
    Rubber {
        #[command(flatten)]
        input: DivisorInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Obstruction ranks per maximal cell.
    Ranks {
        #[command(flatten)]
        input: DivisorInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write every stable graph of type (g, n).
    Catalog {
        #[arg(long)]
        genus: i64,
        #[arg(long)]
        legs: i64,
        /// Directory receiving one file per graph plus `index.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn invariant(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn lattice_code(e: &LatticeError) -> i32 {
    match e {
        LatticeError::AmbientTooLarge(_) => 6,
        _ => 3,
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::Parse(_) => 2,
            GraphError::OutOfSupportedRange { .. } => 6,
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DivisorError> for CliError {
    fn from(e: DivisorError) -> Self {
        let code = match &e {
            DivisorError::NotATree => 4,
            DivisorError::Lattice(l) => lattice_code(l),
            _ => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<EnumerateError> for CliError {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::Divisor(d) => d.into(),
            EnumerateError::TooManyEdges(_) => CliError {
                code: 6,
                message: e.to_string(),
            },
            _ => CliError::invariant(e.to_string()),
        }
    }
}

impl From<RubberError> for CliError {
    fn from(e: RubberError) -> Self {
        let code = match &e {
            RubberError::DegenerateDivisor => 5,
            RubberError::TooManyVertices(_) => 6,
            RubberError::Lattice(l) => lattice_code(l),
            RubberError::Graph(g) => return g.clone().into(),
            RubberError::NotTotallyOrdered => 3,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError {
            code: lattice_code(&e),
            message: e.to_string(),
        }
    }
}

/// Everything the command consumed, hashed in read order.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn note(&mut self, bytes: &[u8]) {
        self.hasher.update(bytes);
    }

    fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }

    fn graph(&mut self, path: &Path) -> Result<TropicalGraph, CliError> {
        let text = self.read(path)?;
        Ok(TropicalGraph::from_json(&text)?)
    }

    fn target(&mut self, graph: &TropicalGraph, spec: &str) -> Result<Multidegree, CliError> {
        self.note(spec.as_bytes());
        match spec {
            "zero" => Ok(divisor::target_multidegree(graph, TargetKind::Zero)?),
            "canonical" => Ok(divisor::target_multidegree(graph, TargetKind::Canonical)?),
            path => {
                let text = self.read(Path::new(path))?;
                let map: BTreeMap<String, i64> =
                    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{path}: {e}")))?;
                Ok(Multidegree::from_map(graph, &map)?)
            }
        }
    }

    fn divisor(&mut self, input: &DivisorInput) -> Result<PLDivisor, CliError> {
        let (graph, slopes) = match &input.slopes {
            Some(slopes_path) => {
                let graph = self.graph(&input.path)?;
                let text = self.read(slopes_path)?;
                let value: Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::parse(format!("{}: {e}", slopes_path.display())))?;
                let slopes = match value.get("slopes") {
                    Some(inner) if inner.is_object() => inner.clone(),
                    _ => value,
                };
                (graph, slopes)
            }
            None => {
                let text = self.read(&input.path)?;
                let value: Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::parse(format!("{}: {e}", input.path.display())))?;
                let graph = match value.get("graph") {
                    Some(Value::String(rel)) => {
                        let dir = input.path.parent().unwrap_or(Path::new("."));
                        self.graph(&dir.join(rel))?
                    }
                    Some(inline) => {
                        let raw: RawGraph = serde_json::from_value(inline.clone())
                            .map_err(|e| CliError::parse(format!("graph: {e}")))?;
                        TropicalGraph::validate(&raw)?
                    }
                    None => return Err(CliError::parse("divisor file has no \"graph\" entry")),
                };
                let slopes = value
                    .get("slopes")
                    .cloned()
                    .ok_or_else(|| CliError::parse("divisor file has no \"slopes\" entry"))?;
                (graph, slopes)
            }
        };
        let slopes: BTreeMap<String, i64> =
            serde_json::from_value(slopes).map_err(|e| CliError::parse(format!("slopes: {e}")))?;
        Ok(PLDivisor::new(&graph, &slopes)?)
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub tool_version: String,
    pub results: Value,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// What a successful run produces: the text and where it goes.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub destination: Option<PathBuf>,
}

/// Pretty JSON with object keys sorted.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("records serialize")
}

fn graph_stats(g: &TropicalGraph) -> Value {
    json!({
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "legs": g.legs().len(),
        "first_betti": g.first_betti(),
        "genus": g.genus(),
        "stable": g.is_stable(),
        "tree": g.is_tree(),
    })
}

fn cell_for(d: &PLDivisor, index: Option<usize>) -> Result<(Option<usize>, rubber::Cell), CliError> {
    match index {
        None => Ok((None, rubber::aligned_cell(d)?)),
        Some(k) => {
            let fan = rubber::rub_subdivision(d)?;
            let count = fan.cells.len();
            let cell = fan
                .cells
                .into_iter()
                .nth(k)
                .ok_or_else(|| CliError::invariant(format!("cell {k} out of range ({count} cells)")))?;
            Ok((Some(k), cell))
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let (name, results, out): (&str, Value, Option<PathBuf>) = match &cli.command {
        Command::Validate { path, format, out } => {
            let g = inputs.graph(path)?;
            log::info!("validated {} with {} vertices", path.display(), g.num_vertices());
            if *format == Format::Dot {
                return Ok(Output {
                    text: g.to_dot(),
                    destination: out.clone(),
                });
            }
            ("validate", graph_stats(&g), out.clone())
        }
        Command::Twist { path, target, out } => {
            let g = inputs.graph(path)?;
            let t = inputs.target(&g, target)?;
            let d = divisor::tree_twist(&g, &t)?;
            let results = json!({
                "target": t.to_map(&g),
                "slopes": d.slope_map(),
                "multidegree": d.multidegree().to_map(&g),
            });
            ("twist", results, out.clone())
        }
        Command::Degree { input, out } => {
            let d = inputs.divisor(input)?;
            let m = d.multidegree();
            let results = json!({
                "multidegree": m.to_map(d.graph()),
                "total": m.total(),
            });
            ("degree", results, out.clone())
        }
        Command::Enumerate {
            path,
            target,
            oracle,
            out,
        } => {
            let g = inputs.graph(path)?;
            let t = inputs.target(&g, target)?;
            let found = enumerate::enumerate_slopes(&g, &t)?;
            log::info!("{} assignments found", found.len());
            let edge_ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
            let assignments: Vec<Value> = found
                .iter()
                .map(|a| {
                    json!({
                        "slopes": edge_ids.iter().zip(&a.slopes).map(|(k, s)| (k.to_string(), *s)).collect::<BTreeMap<_, _>>(),
                        "diagnostics": to_value(&a.diagnostics),
                    })
                })
                .collect();
            let mut results = json!({
                "target": t.to_map(&g),
                "certified_bound": enumerate::certified_bound(&g, &t),
                "count": found.len(),
                "nondegenerate": found.iter().filter(|a| a.is_nondegenerate()).count(),
                "relationless": found.iter().filter(|a| a.diagnostics.relationless).count(),
                "assignments": assignments,
            });
            if let Some(bound) = oracle {
                inputs.note(&bound.to_le_bytes());
                let brute = enumerate::brute_force_slopes(&g, &t, *bound)?;
                results["oracle"] = json!({
                    "bound": bound,
                    "count": brute.len(),
                    "equal": brute == found,
                });
            }
            ("enumerate", results, out.clone())
        }
        Command::Minmonoid { input, out } => {
            let d = inputs.divisor(input)?;
            ("minmonoid", to_value(&d.to_record()), out.clone())
        }
        Command::Align {
            input,
            points,
            seed,
            out,
        } => {
            let d = inputs.divisor(input)?;
            let aligned = rubber::is_aligned(&d)?;
            let fan = rubber::rub_subdivision(&d)?;
            let mut results = json!({
                "aligned": aligned,
                "fan": to_value(&fan.to_record(d.graph())),
            });
            if *points > 0 {
                inputs.note(&(*points as u64).to_le_bytes());
                inputs.note(&seed.to_le_bytes());
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let (mut covered, mut unique) = (0, 0);
                for _ in 0..*points {
                    let (closed, open) = fan.membership_counts(&fan.sample_base_point(&mut rng));
                    covered += usize::from(closed >= 1);
                    unique += usize::from(open == 1);
                }
                results["partition_check"] = json!({
                    "points": points,
                    "seed": seed,
                    "in_some_closed_cell": covered,
                    "in_exactly_one_open_cell": unique,
                });
            }
            ("align", results, out.clone())
        }
        Command::Subdivide {
            input,
            cell,
            format,
            out,
        } => {
            let d = inputs.divisor(input)?;
            let (index, c) = cell_for(&d, *cell)?;
            let rd = rubber::subdivide_curve(&d, &c)?;
            if *format == Format::Dot {
                return Ok(Output {
                    text: rd.subdivided.to_dot(),
                    destination: out.clone(),
                });
            }
            let results = json!({
                "cell": index,
                "levels": to_value(&c.to_record(d.graph()).levels),
                "rubber": to_value(&rd.to_record(d.graph())),
            });
            ("subdivide", results, out.clone())
        }
        Command::Rubber { input, out } | Command::Ranks { input, out } => {
            let is_rubber = matches!(cli.command, Command::Rubber { .. });
            let d = inputs.divisor(input)?;
            let g = d.graph();
            let aligned = rubber::is_aligned(&d)?;
            let fan = rubber::rub_subdivision(&d)?;
            let mut cells = Vec::new();
            for (k, c) in fan.cells.iter().enumerate().filter(|(_, c)| c.is_maximal()) {
                let rd = rubber::subdivide_curve(&d, c)?;
                let ranks = rubber::obstruction_ranks(&rd, g.genus() as i64, g.legs().len() as i64);
                let mut entry = json!({
                    "cell": k,
                    "levels": to_value(&c.to_record(g).levels),
                    "ranks": to_value(&ranks),
                });
                if is_rubber {
                    entry["rubber"] = to_value(&rd.to_record(g));
                }
                cells.push(entry);
            }
            let mut results = json!({
                "aligned": aligned,
                "maximal_cells": cells.len(),
                "cells": cells,
            });
            if is_rubber {
                results["fan"] = to_value(&fan.to_record(g));
            }
            (if is_rubber { "rubber" } else { "ranks" }, results, out.clone())
        }
        Command::Catalog { genus, legs, out } => {
            inputs.note(format!("catalog g={genus} n={legs}").as_bytes());
            let graphs = graph::enumerate_stable_graphs(*genus, *legs)?;
            let mut entries = Vec::new();
            if let Some(dir) = out {
                fs::create_dir_all(dir).map_err(|e| CliError::invariant(format!("{}: {e}", dir.display())))?;
            }
            for (i, g) in graphs.iter().enumerate() {
                let text = g.to_json();
                let file = format!("g{genus}_n{legs}_{i:03}.json");
                let digest = hex::encode(Sha256::digest(text.as_bytes()));
                let mut entry = json!({
                    "file": file,
                    "digest": digest,
                    "stats": graph_stats(g),
                });
                match out {
                    Some(dir) => fs::write(dir.join(&file), &text)
                        .map_err(|e| CliError::invariant(format!("{}: {e}", dir.display())))?,
                    None => entry["graph"] = to_value(&g.to_raw()),
                }
                entries.push(entry);
            }
            let results = json!({
                "genus": genus,
                "legs": legs,
                "count": graphs.len(),
                "graphs": entries,
            });
            if let Some(dir) = out {
                fs::write(dir.join("index.json"), to_sorted_json(&results))
                    .map_err(|e| CliError::invariant(format!("{}: {e}", dir.display())))?;
            }
            ("catalog", results, None)
        }
    };
    let report = RunReport {
        command: name.to_string(),
        input_digest: inputs.digest(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        results,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    Ok(Output {
        text: to_sorted_json(&report),
        destination: out,
    })
}
