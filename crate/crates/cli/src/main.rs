//! `convhide`: exact recession cones, Hausdorff distances, hidden sets and
//! classification of planar convex bodies from the command line.

mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use convhide_core::hausdorff::{hausdorff_distance_any, ray_level_bracket, truncate_at, truncation_radius};
use convhide_core::hiding::{
    biorthogonal_sequence, hidden_set_2d, packing_family, positively_hiding_approximant, verify_hidden_set,
};
use convhide_core::numeric::{format_rational, parse_rational, rat, to_f64};
use convhide_core::testgen::TestGen;
use convhide_core::{
    classify, epsilon_net, ClassifyBudget, ConvexSet, Error, Norm, Polyhedron, QVector, Rational, SetDocument,
};

use svg::{render_svg, Scene, Viewport};

#[derive(Parser)]
#[command(name = "convhide", version, about = "Exact convex geometry: recession cones, Hausdorff distances, hidden sets")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Norm for every distance.
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Sup)]
    norm: NormArg,
    /// Accuracy target, as `p/q`, an integer or a decimal.
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Tolerance of irrational brackets and bisections.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Radius doublings allowed to the classifier.
    #[arg(long, global = true)]
    budget: Option<u32>,
    /// Seed of generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Sup,
    Sum,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::Sup => Norm::Sup,
            NormArg::Sum => Norm::Sum,
        }
    }
}

/// Set arguments are `parabola`, `hyperbola`, an inline JSON document or a
/// path to one.
#[derive(Subcommand)]
enum Command {
    /// Approximatively polyhedral or infinitely hiding, with certificates.
    Classify {
        #[arg(long)]
        body: String,
    },
    /// Exact Hausdorff distance between two polyhedra, or between a seeded
    /// random pair when no sets are given.
    Hausdorff {
        first: Option<String>,
        second: Option<String>,
        /// Dimension of the generated pair.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Recession cone of a polyhedron.
    RecessionCone { set: String },
    /// Bracket of the smallest `t` with `dist(start + t direction, C) >= eps`.
    RaySearch {
        #[arg(long)]
        body: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        direction: String,
    },
    /// `A_r = (A ∩ rB̄) + rec(A)` with `dH(A_r, A) <= eps`, or at a fixed radius.
    Truncate {
        set: String,
        #[arg(long)]
        radius: Option<String>,
    },
    /// A planar hidden set with `dist(a_k, C) > k`, or a check of given points.
    HiddenSet {
        #[arg(long)]
        body: String,
        #[arg(short, default_value_t = 5)]
        n: usize,
        /// JSON file or inline array of points to verify instead.
        #[arg(long)]
        verify: Option<String>,
    },
    /// The hulls `conv(C ∪ β)` over subsets of a hidden set, pairwise distances.
    Packing {
        #[arg(long)]
        body: String,
        #[arg(short, default_value_t = 2)]
        k: usize,
    },
    /// Biorthogonal pairs with unit functionals.
    Biorthogonal {
        set: String,
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
    /// Positively hiding approximant of a bounded polyhedron.
    Approximant {
        set: String,
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
    /// Grid net `F` with `dH(conv(F) + rec(A), A) < 2 eps`.
    Net {
        set: String,
        /// Grid spacing; defaults to `eps / 2`.
        #[arg(long)]
        grid_step: Option<String>,
    },
    /// SVG figure of a planar body with optional cone and hidden set.
    Plot {
        #[arg(long)]
        body: String,
        /// Draw a hidden set of this size.
        #[arg(short)]
        n: Option<usize>,
        /// Shade the recession cone.
        #[arg(long)]
        cone: bool,
        /// `x0,x1,y0,y1`; fitted to the points by default.
        #[arg(long)]
        viewport: Option<String>,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read_text(arg: &str) -> Outcome<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Io(format!("{arg}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str) -> Outcome<T> {
    let text = read_text(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::InvalidInput(format!("{arg}: {e}"))))
}

fn load_set(arg: &str) -> Outcome<ConvexSet> {
    let doc = match arg {
        "parabola" | "hyperbola" => parse_json(&format!(r#"{{"body": {{"kind": "{arg}"}}}}"#))?,
        _ => parse_json::<SetDocument>(arg)?,
    };
    Ok(doc.into_set()?)
}

fn rational(text: &str) -> Outcome<Rational> {
    Ok(parse_rational(text)?)
}

fn vector(text: &str) -> Outcome<QVector> {
    text.split(',').map(rational).collect()
}

fn hrep(set: &ConvexSet) -> Outcome<convhide_core::HPolyhedron> {
    Ok(set.hpolyhedron()?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

fn run(cli: &Cli) -> Outcome<String> {
    let opts = &cli.opts;
    let norm: Norm = opts.norm.into();
    let eps = |default: Rational| -> Outcome<Rational> { opts.eps.as_deref().map_or(Ok(default), rational) };
    let tol = opts.tol.as_deref().map_or(Ok(rat(1, 1 << 30)), rational)?;
    Ok(match &cli.command {
        Command::Classify { body } => {
            let set = load_set(body)?;
            let mut budget = ClassifyBudget { tol, ..ClassifyBudget::default() };
            if let Some(k) = opts.budget {
                budget.doublings = k;
            }
            to_json(&classify(&set.oracle()?, &eps(rat(1, 100))?, &budget, norm)?)
        }
        Command::Hausdorff { first, second, dim } => match (first, second) {
            (Some(a), Some(b)) => {
                let (a, b) = (load_set(a)?, load_set(b)?);
                to_json(&hausdorff_distance_any(a.polyhedron()?, b.polyhedron()?, norm)?)
            }
            (None, None) => {
                let pair = TestGen::new(opts.seed).polyhedron_pair(*dim)?;
                let outcome = hausdorff_distance_any(&Polyhedron::H(pair.p.clone()), &Polyhedron::H(pair.q.clone()), norm)?;
                to_json(&json!({ "seed": opts.seed, "p": pair.p, "q": pair.q, "outcome": outcome }))
            }
            _ => return Err(Error::InvalidInput("give two sets or none".into()).into()),
        },
        Command::RecessionCone { set } => {
            let cone = load_set(set)?.polyhedron()?.recession()?;
            to_json(&json!({ "cone": cone, "hrep": cone.to_hpolyhedron() }))
        }
        Command::RaySearch { body, start, direction } => {
            let body = load_set(body)?.oracle()?;
            let (lo, hi) = ray_level_bracket(&vector(start)?, &vector(direction)?, &eps(Rational::from_integer(1.into()))?, &body, &tol, norm)?;
            to_json(&json!({ "lo": format_rational(&lo), "hi": format_rational(&hi) }))
        }
        Command::Truncate { set, radius } => {
            let a = hrep(&load_set(set)?)?;
            let cone = convhide_core::polyhedra::recession_cone(&a)?;
            let truncation = match radius {
                Some(r) => truncate_at(&a, &cone, &rational(r)?, norm)?,
                None => truncation_radius(&a, &cone, &eps(rat(1, 2))?, norm)?,
            };
            to_json(&truncation)
        }
        Command::HiddenSet { body, n, verify } => {
            let body = load_set(body)?.oracle()?;
            let witness = match verify {
                Some(points) => verify_hidden_set(&parse_json::<Vec<QVector>>(points)?, &body, &tol)?,
                None => hidden_set_2d(&body, *n, &tol)?,
            };
            to_json(&witness)
        }
        Command::Packing { body, k } => {
            let body = load_set(body)?.oracle()?;
            to_json(&packing_family(&body, &eps(Rational::from_integer(1.into()))?, *k, &tol, norm)?)
        }
        Command::Biorthogonal { set, k } => to_json(&biorthogonal_sequence(&hrep(&load_set(set)?)?, *k, norm)?),
        Command::Approximant { set, k } => {
            let body = hrep(&load_set(set)?)?;
            to_json(&positively_hiding_approximant(&body, &eps(rat(1, 2))?, *k, norm)?)
        }
        Command::Net { set, grid_step } => {
            let a = hrep(&load_set(set)?)?;
            let eps = eps(rat(1, 4))?;
            let step = grid_step.as_deref().map_or_else(|| Ok(&eps / Rational::from_integer(2.into())), rational)?;
            to_json(&epsilon_net(&a, &eps, &step, norm)?)
        }
        Command::Plot { body, n, cone, viewport } => {
            let set = load_set(body)?;
            let mut scene = Scene { body: set.clone(), cone: None, points: vec![], chords: vec![], crossings: vec![] };
            if *cone {
                scene.cone = Some(set.oracle()?.recession_cone()?);
            }
            if let Some(n) = n {
                let w = hidden_set_2d(&set.oracle()?, *n, &tol)?;
                scene.chords = w.pairs.iter().map(|c| (w.points[c.i].clone(), w.points[c.j].clone())).collect();
                scene.crossings = w.pairs.iter().map(|c| c.point.clone()).collect();
                scene.points = w.points;
            }
            let view = match viewport {
                Some(text) => {
                    let v: Vec<f64> = vector(text)?.iter().map(to_f64).collect();
                    if v.len() != 4 || v[0] >= v[1] || v[2] >= v[3] {
                        return Err(Error::InvalidInput("viewport is x0,x1,y0,y1 with x0 < x1 and y0 < y1".into()).into());
                    }
                    Viewport { x0: v[0], x1: v[1], y0: v[2], y1: v[3] }
                }
                None => Viewport::fit(&scene.points),
            };
            render_svg(&scene, &view)?
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.opts.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (status, code, message) = match failure {
                Failure::Domain(e) => (2, e.code(), e.to_string()),
                Failure::Io(message) => (1, "io_error", message),
            };
            eprintln!("{}", json!({ "code": code, "message": message }));
            ExitCode::from(status)
        }
    }
}
