//! Command-line front end.
//!
//! Six subcommands cover the pipeline end to end: `generate` builds the
//! recursive family at a level and writes a scene document; `check`
//! re-verifies a stored scene (family constraints, prob stability);
//! `graph` derives the oriented intersection graph; `recognize` decides
//! whether a stored graph is an (oriented) abstract Burling graph;
//! `analyze` reports triangle-freeness, clique number, and chromatic
//! number; `render` draws a scene as SVG.
//!
//! Exit codes: 0 success, 1 failure (including a failed `check` and a
//! rejected `recognize`), 2 when `recognize` exhausts its search budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use burl::burling::derive_triple;
use burl::construction::{
    burling_sequence_with_cap, stability_issues, Scene, StabilityIssue, MAX_LEVEL,
};
use burl::geom::{Rect, Region};
use burl::graph::ChromaticResult;
use burl::io::{ograph_dot_annotated, scene_svg, GraphDoc, IoError, SceneDoc};
use burl::recognize::{recognize_oriented, recognize_unoriented, Verdict, DEFAULT_BUDGET};
use burl::relations::ConstraintReport;
use burl::shape::Shape;

#[derive(Parser)]
#[command(name = "burl", version, about = "Exact rectilinear Burling-family toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the level-K family and its probs; write a scene document.
    Generate {
        /// Base shape: `frame`, `gamma`, or `file:PATH` (a JSON list of
        /// rects, each ["xlo","xhi","ylo","yhi"] in "p/q" form).
        #[arg(long)]
        shape: String,
        /// Recursion level; 1 is the base scene.
        #[arg(long)]
        k: u32,
        /// Output path for the scene JSON.
        #[arg(long)]
        out: PathBuf,
        /// Lift the safety cap on K. Sizes grow doubly exponentially:
        /// level 6 already needs billions of shapes.
        #[arg(long)]
        allow_large_k: bool,
    },
    /// Re-verify a scene document; nonzero exit plus a JSON report on failure.
    Check {
        scene: PathBuf,
        /// Check only the family constraints (C1)–(C6).
        #[arg(long)]
        constraints: bool,
        /// Check only prob placement and stability.
        #[arg(long)]
        stability: bool,
    },
    /// Derive the oriented intersection graph of a scene's family.
    Graph {
        scene: PathBuf,
        /// Output path for the graph JSON.
        #[arg(long)]
        out: PathBuf,
        /// Also write Graphviz DOT annotated with size and triangle verdict.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide whether a stored graph is an abstract Burling graph.
    Recognize {
        graph: PathBuf,
        /// Require the document's arcs to be the orientation, instead of
        /// searching over all orientations of its edges.
        #[arg(long)]
        oriented: bool,
        /// Search-node budget.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Structural diagnostics of a stored graph.
    Analyze {
        graph: PathBuf,
        /// Report the chromatic number (exact, or a bracket on budget
        /// exhaustion). Default when no flag is given.
        #[arg(long)]
        chi: bool,
        /// Report triangle-freeness and clique number. Default when no
        /// flag is given.
        #[arg(long)]
        triangle_free: bool,
        /// Node budget for the coloring search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Render a scene document as SVG.
    Render {
        scene: PathBuf,
        /// Output path for the SVG.
        #[arg(long)]
        svg: PathBuf,
        /// Hatch each shape's territory.
        #[arg(long)]
        territories: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type Failure = Box<dyn std::error::Error>;

fn run(cmd: Cmd) -> Result<ExitCode, Failure> {
    match cmd {
        Cmd::Generate {
            shape,
            k,
            out,
            allow_large_k,
        } => generate(&shape, k, &out, allow_large_k),
        Cmd::Check {
            scene,
            constraints,
            stability,
        } => check(&scene, constraints, stability),
        Cmd::Graph { scene, out, dot } => graph(&scene, &out, dot.as_deref()),
        Cmd::Recognize {
            graph,
            oriented,
            budget,
        } => recognize(&graph, oriented, budget),
        Cmd::Analyze {
            graph,
            chi,
            triangle_free,
            budget,
        } => analyze(&graph, chi, triangle_free, budget),
        Cmd::Render {
            scene,
            svg,
            territories,
        } => render(&scene, &svg, territories),
    }
}

/// `println!` that tolerates a closed pipe (e.g. `burl check | head`).
fn emit(text: impl AsRef<str>) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{}", text.as_ref());
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_scene(path: &Path) -> Result<Scene, Failure> {
    Ok(SceneDoc::from_json(&read_file(path)?)?.to_scene()?)
}

fn read_graph_doc(path: &Path) -> Result<GraphDoc, Failure> {
    Ok(GraphDoc::from_json(&read_file(path)?)?)
}

fn base_shape(spec: &str) -> Result<Shape, Failure> {
    let region = match spec {
        "frame" => Region::new(vec![
            Rect::ints(0, 0, 0, 3),
            Rect::ints(3, 3, 0, 3),
            Rect::ints(0, 3, 0, 0),
            Rect::ints(0, 3, 3, 3),
        ]),
        "gamma" => Region::new(vec![Rect::ints(0, 1, 0, 3), Rect::ints(0, 3, 0, 1)]),
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let rects: Vec<Rect> = serde_json::from_str(&read_file(Path::new(path))?)?;
                Region::new(rects)
            }
            None => {
                return Err(format!(
                    "unknown shape `{other}`; expected frame, gamma, or file:PATH"
                )
                .into())
            }
        },
    };
    Ok(Shape::new("base", region)?)
}

fn generate(shape: &str, k: u32, out: &Path, allow_large_k: bool) -> Result<ExitCode, Failure> {
    let base = base_shape(shape)?;
    let cap = if allow_large_k { k.max(MAX_LEVEL) } else { MAX_LEVEL };
    let scene = burling_sequence_with_cap(base, k, cap)?;
    fs::write(out, SceneDoc::from_scene(&scene).to_json())?;
    emit(format!(
        "wrote {} (level {}, {} shapes, {} probs)",
        out.display(),
        scene.level(),
        scene.family().len(),
        scene.probs().len()
    ));
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ProbReport {
    prob: String,
    issues: Vec<StabilityIssue>,
}

#[derive(Serialize)]
struct CheckReport {
    ok: bool,
    level: u32,
    shapes: usize,
    probs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraints: Option<ConstraintReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stability: Option<Vec<ProbReport>>,
}

fn check(path: &Path, constraints: bool, stability: bool) -> Result<ExitCode, Failure> {
    // Scene-level defects (misplaced probs, a non-strong member, …) are
    // what this subcommand exists to report, so they become the JSON
    // report rather than a bare error. Parse and version errors stay
    // plain: there is no document to report on.
    let scene = match read_scene(path) {
        Ok(scene) => scene,
        Err(e) => match e.downcast::<IoError>() {
            Ok(io_err) if !matches!(*io_err, IoError::Json(_) | IoError::BadVersion { .. }) => {
                let report = serde_json::json!({ "ok": false, "document": io_err.to_string() });
                emit(serde_json::to_string_pretty(&report)?);
                return Ok(ExitCode::FAILURE);
            }
            Ok(io_err) => return Err(io_err),
            Err(e) => return Err(e),
        },
    };
    let both = !constraints && !stability;
    let mut report = CheckReport {
        ok: true,
        level: scene.level(),
        shapes: scene.family().len(),
        probs: scene.probs().len(),
        constraints: None,
        stability: None,
    };
    if constraints || both {
        let c = scene.family().check_constraints()?;
        report.ok &= c.passed();
        report.constraints = Some(c);
    }
    if stability || both {
        let mut unstable = Vec::new();
        for p in scene.probs() {
            let issues = stability_issues(&p.rect, scene.family());
            if !issues.is_empty() {
                unstable.push(ProbReport {
                    prob: p.id.clone(),
                    issues,
                });
            }
        }
        report.ok &= unstable.is_empty();
        report.stability = Some(unstable);
    }
    emit(serde_json::to_string_pretty(&report)?);
    Ok(if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn graph(scene_path: &Path, out: &Path, dot: Option<&Path>) -> Result<ExitCode, Failure> {
    let scene = read_scene(scene_path)?;
    let triple = derive_triple(scene.family())?;
    let og = triple.ograph()?;
    fs::write(
        out,
        GraphDoc::from_ograph(&og, Some(triple.prec_ids())).to_json(),
    )?;
    emit(format!(
        "wrote {} ({} vertices, {} arcs)",
        out.display(),
        og.n(),
        og.arc_count()
    ));
    if let Some(dot_path) = dot {
        let notes = vec![
            format!("{} vertices, {} arcs", og.n(), og.arc_count()),
            format!(
                "triangle-free: {}",
                og.underlying().triangle_free()
            ),
        ];
        fs::write(dot_path, ograph_dot_annotated(&og, &notes))?;
        emit(format!("wrote {}", dot_path.display()));
    }
    Ok(ExitCode::SUCCESS)
}

fn recognize(path: &Path, oriented: bool, budget: u64) -> Result<ExitCode, Failure> {
    let doc = read_graph_doc(path)?;
    let cert = if oriented {
        recognize_oriented(&doc.to_ograph()?, budget)
    } else {
        recognize_unoriented(&doc.to_graph()?, budget)
    };
    emit(serde_json::to_string_pretty(&cert)?);
    Ok(match cert.verdict {
        Verdict::Accepted => ExitCode::SUCCESS,
        Verdict::Rejected => ExitCode::FAILURE,
        Verdict::BudgetExceeded => ExitCode::from(2),
    })
}

#[derive(Serialize)]
struct Analysis {
    vertices: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    triangle_free: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    triangle: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clique_number: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chromatic: Option<ChromaticResult>,
}

fn analyze(path: &Path, chi: bool, triangle_free: bool, budget: u64) -> Result<ExitCode, Failure> {
    let g = read_graph_doc(path)?.to_graph()?;
    let both = !chi && !triangle_free;
    let mut analysis = Analysis {
        vertices: g.n(),
        edges: g.edge_count(),
        triangle_free: None,
        triangle: None,
        clique_number: None,
        chromatic: None,
    };
    if triangle_free || both {
        let witness = g.find_triangle();
        analysis.triangle_free = Some(witness.is_none());
        analysis.triangle = witness;
        analysis.clique_number = Some(g.clique_number());
    }
    if chi || both {
        analysis.chromatic = Some(g.chromatic_number(budget));
    }
    emit(serde_json::to_string_pretty(&analysis)?);
    Ok(ExitCode::SUCCESS)
}

fn render(scene_path: &Path, svg_path: &Path, territories: bool) -> Result<ExitCode, Failure> {
    let scene = read_scene(scene_path)?;
    fs::write(svg_path, scene_svg(&scene, territories))?;
    emit(format!("wrote {}", svg_path.display()));
    Ok(ExitCode::SUCCESS)
}
