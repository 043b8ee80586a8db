//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or invalid polygon,
//! 2 input error, 3 the requested point is one where the map is undefined.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use pinwheel::field::parse_rational;
use pinwheel::polygon::declared_radicand;
use pinwheel::quasi::{self, boundedness_certificate, certify_smallest};
use pinwheel::random::{default_bound, random_nice_polygon};
use pinwheel::render::Scene;
use pinwheel::verify::{failures, reports_to_json, Profile, Verifier};
use pinwheel::{Analysis, Error, Field, IndexedPoint, MapKind, NicePolygon, Point, QuadExt, Rational};

#[derive(Parser)]
#[command(name = "pinwheel", version, about = "Exact outer billiards and pinwheel maps for nice polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a polygon is nice and print its pinwheel strips and spokes.
    Validate { file: PathBuf },
    /// Forward partition of the exterior, with admissible-path names.
    Partition {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also emit the backward partition.
        #[arg(long)]
        backward: bool,
    },
    /// Tile, path and translation vector at a point.
    Classify {
        file: PathBuf,
        #[arg(long, value_name = "X,Y")]
        point: String,
    },
    /// Iterate one of the maps.
    Orbit {
        file: PathBuf,
        #[arg(long, value_name = "X,Y")]
        point: String,
        #[arg(long, value_enum, default_value = "psi")]
        map: OrbitMap,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Stop once the L∞ norm exceeds this.
        #[arg(long)]
        escape: Option<String>,
        /// Strip index (1-based) for the indexed maps; defaults to the section of the point.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the verification suite on a polygon file or on random polygons.
    Verify {
        file: Option<PathBuf>,
        /// Random polygons, as `n=K count=M`.
        #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
        random: Option<Vec<String>>,
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per sampled check; defaults to the profile's.
        #[arg(long)]
        samples: Option<usize>,
        /// Print the JSON report instead of summary lines.
        #[arg(long)]
        json: bool,
    },
    /// Quasirational data, necklace check and boundedness certificate.
    Quasi {
        file: PathBuf,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, value_name = "X,Y")]
        certify: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitMap {
    Psi,
    Psistar,
    Exit,
    Return,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InsidePolygon | Error::OnPrimaryWall | Error::UndefinedOnWall { .. } | Error::OnStripBoundary { .. } => 3,
            Error::NotConvex { .. } | Error::ParallelEdges { .. } | Error::DegenerateVertices { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_doc(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
}

fn load<F: Field>(doc: &Value) -> Result<NicePolygon<F>, Failure> {
    NicePolygon::from_json(doc).map_err(Failure::from)
}

/// Runs `body` over the field the file declares.
macro_rules! with_field {
    ($doc:expr, $body:ident ( $($arg:expr),* )) => {{
        let doc = $doc;
        match declared_radicand(&doc).map_err(Failure::from)? {
            Some(_) => $body::<QuadExt>(load(&doc)? $(, $arg)*),
            None => $body::<Rational>(load(&doc)? $(, $arg)*),
        }
    }};
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => {
            let doc = read_doc(&file)?;
            let radicand = declared_radicand(&doc).map_err(Failure::from)?;
            let result = match radicand {
                Some(_) => NicePolygon::<QuadExt>::from_json(&doc).map(|p| validate(&p)),
                None => NicePolygon::<Rational>::from_json(&doc).map(|p| validate(&p)),
            };
            match result {
                Ok(()) => Ok(0),
                Err(e @ (Error::Parse(_) | Error::FieldMismatch(_))) => Err(e.into()),
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(1)
                }
            }
        }
        Command::Partition { file, svg, json, backward } => with_field!(read_doc(&file)?, partition(svg, json, backward)),
        Command::Classify { file, point } => with_field!(read_doc(&file)?, classify(&point)),
        Command::Orbit { file, point, map, steps, escape, index, svg } => {
            with_field!(read_doc(&file)?, orbit(&point, map, steps, escape.as_deref(), index, svg))
        }
        Command::Verify { file, random, profile, seed, samples, json } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let samples = samples.unwrap_or(profile.samples());
            verify(file, random, profile, seed, samples, json)
        }
        Command::Quasi { file, m, certify, seed, samples } => with_field!(read_doc(&file)?, quasi_cmd(m, certify.as_deref(), seed, samples)),
    }
}

fn parse_point<F: Field>(text: &str) -> Result<Point<F>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(input_error(format!("expected a point as x,y, got {text:?}")));
    }
    let x = parse_rational(parts[0]).map_err(Failure::from)?;
    let y = parse_rational(parts[1]).map_err(Failure::from)?;
    Ok(Point::new(F::from_rational(x), F::from_rational(y)))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn validate<F: Field>(polygon: &NicePolygon<F>) {
    let a = Analysis::new(polygon.clone());
    let n = a.n();
    println!("nice polygon, {n} vertices{}", if polygon.was_reoriented() { " (input was counter-clockwise; reversed)" } else { "" });
    for (i, v) in polygon.vertices().iter().enumerate() {
        println!("  vertex {}: {}", i + 1, v.to_json());
    }
    println!("strips:");
    for p in a.system.pairs() {
        println!(
            "  {}: edge {}, head vertex {}, far vertex {}, V = {}",
            p.index + 1,
            p.edge + 1,
            p.head + 1,
            p.far + 1,
            p.vector.to_json()
        );
    }
    println!("spokes:");
    for s in a.system.spokes() {
        println!("  {}: {} -> {}{}", s.index + 1, s.tail + 1, s.head + 1, if s.special { ", special" } else { "" });
    }
    println!("admissible paths: {}", a.paths.paths().len());
}

fn partition<F: Field>(polygon: NicePolygon<F>, svg: Option<PathBuf>, json_out: Option<PathBuf>, backward: bool) -> Outcome {
    let a = Analysis::new(polygon);
    let n = a.n();
    let tiles: Vec<Value> = a
        .forward
        .tiles()
        .iter()
        .map(|t| {
            let mut v = t.to_json();
            v["path"] = a.path_of(t.label).map(|p| json!(p.display_name(n))).unwrap_or(Value::Null);
            v
        })
        .collect();
    let mut doc = json!({
        "schema": "pinwheel.partition/1",
        "polygon": a.polygon().to_json(),
        "bounded": a.forward.bounded_count(),
        "unbounded": a.forward.unbounded_count(),
        "forward": tiles,
    });
    if backward {
        doc["backward"] = a.backward.to_json()["tiles"].clone();
    }
    for t in a.forward.tiles() {
        let path = a.path_of(t.label).map(|p| p.display_name(n)).unwrap_or_else(|_| "-".into());
        println!("{} {:>7} {:<9} V = {}", t.label, path, if t.bounded { "bounded" } else { "unbounded" }, t.translation.to_json());
    }
    println!("{} bounded, {} unbounded", a.forward.bounded_count(), a.forward.unbounded_count());
    if let Some(path) = json_out {
        write_file(&path, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    }
    if let Some(path) = svg {
        let text = Scene::partition(&a.system, &a.forward, Some(&a.paths)).to_svg()?;
        write_file(&path, &text)?;
    }
    Ok(0)
}

fn classify<F: Field>(polygon: NicePolygon<F>, point: &str) -> Outcome {
    let p = parse_point::<F>(point)?;
    let a = Analysis::new(polygon);
    let tile = a.classify(&p)?;
    let path = a.path_of(tile.label)?;
    print_json(&json!({
        "schema": "pinwheel.classify/1",
        "point": p.to_json(),
        "label": tile.label.to_json(),
        "path": path.display_name(a.n()),
        "V": tile.translation.to_json(),
        "bounded": tile.bounded,
        "image": (&p + &tile.translation).to_json(),
    }));
    Ok(0)
}

fn orbit<F: Field>(
    polygon: NicePolygon<F>,
    point: &str,
    map: OrbitMap,
    steps: usize,
    escape: Option<&str>,
    index: Option<usize>,
    svg: Option<PathBuf>,
) -> Outcome {
    let p = parse_point::<F>(point)?;
    let escape = escape.map(|e| parse_rational(e).map(F::from_rational)).transpose().map_err(Failure::from)?;
    let a = Analysis::new(polygon);
    let kind = match map {
        OrbitMap::Psi => MapKind::Psi,
        OrbitMap::Psistar => MapKind::PsiStar,
        OrbitMap::Exit => MapKind::Exit,
        OrbitMap::Return => MapKind::StripReturn,
    };
    let start = match (kind, index) {
        (_, Some(k)) if k >= 1 && k <= a.n() => IndexedPoint::new(p, k - 1),
        (_, Some(k)) => return Err(Error::IndexOutOfRange { index: k, lo: 1, hi: a.n() }.into()),
        (MapKind::PsiStar | MapKind::StripReturn, None) => a.section(&p)?,
        _ => IndexedPoint::new(p, 0),
    };
    let record = a.orbit(&start, kind, steps, escape.as_ref());
    let mut doc = record.to_json();
    doc["schema"] = json!("pinwheel.orbit/1");
    print_json(&doc);
    if let Some(path) = svg {
        let mut scene = Scene::partition(&a.system, &a.forward, Some(&a.paths));
        scene.add_trace("orbit", record.points());
        write_file(&path, &scene.to_svg()?)?;
    }
    Ok(0)
}

fn parse_random(spec: &[String]) -> Result<(usize, usize), Failure> {
    let (mut n, mut count) = (None, None);
    for item in spec.iter().flat_map(|s| s.split_whitespace()) {
        let (k, v) = item.split_once('=').ok_or_else(|| input_error(format!("expected KEY=VALUE, got {item:?}")))?;
        let v: usize = v.parse().map_err(|_| input_error(format!("bad number in {item:?}")))?;
        match k {
            "n" => n = Some(v),
            "count" => count = Some(v),
            _ => return Err(input_error(format!("unknown key {k:?}; use n= and count="))),
        }
    }
    match (n, count) {
        (Some(n), Some(c)) => Ok((n, c)),
        _ => Err(input_error("--random needs n=K and count=M")),
    }
}

fn verify(file: Option<PathBuf>, random: Option<Vec<String>>, profile: Profile, seed: u64, samples: usize, as_json: bool) -> Outcome {
    let t0 = Instant::now();
    let reports = match (file, random) {
        (Some(path), None) => {
            let doc = read_doc(&path)?;
            match declared_radicand(&doc).map_err(Failure::from)? {
                Some(_) => Verifier::new(load::<QuadExt>(&doc)?, samples, seed).run_all(profile),
                None => Verifier::new(load::<Rational>(&doc)?, samples, seed).run_all(profile),
            }
        }
        (None, Some(spec)) => {
            let (n, count) = parse_random(&spec)?;
            let mut all = Vec::new();
            for i in 0..count as u64 {
                let polygon = random_nice_polygon(n, seed.wrapping_add(i), default_bound(n))?;
                all.extend(Verifier::new(polygon, samples, seed.wrapping_add(i)).run_all(profile));
            }
            all
        }
        _ => return Err(input_error("give exactly one of a polygon file or --random")),
    };
    if as_json {
        print_json(&reports_to_json(&reports));
    } else {
        for r in &reports {
            println!("{}", r.summary_line());
        }
        println!("{} checks, {} failed", reports.len(), failures(&reports));
    }
    eprintln!("finished in {:.1?}", t0.elapsed());
    Ok(u8::from(failures(&reports) > 0))
}

fn quasi_cmd<F: Field>(polygon: NicePolygon<F>, m: Option<i64>, certify: Option<&str>, seed: u64, samples: usize) -> Outcome {
    let verifier = Verifier::new(polygon, samples, seed);
    let system = &verifier.analysis.system;
    let data = quasi::quasi_analyze(system);
    let mut doc = json!({ "schema": "pinwheel.quasi/1", "data": data.to_json() });
    let mut code = 0;
    if let Some(m) = m {
        if m < 1 {
            return Err(input_error("--m must be at least 1"));
        }
        let report = verifier.check_necklace_invariance(m);
        code = u8::from(!report.passed());
        doc["necklace"] = report.to_json();
    }
    if let Some(text) = certify {
        let p = parse_point::<F>(text)?;
        let section = verifier.analysis.section(&p)?.k;
        let cert = match m {
            Some(m) => boundedness_certificate(system, &p, &BigInt::from(m), section)?,
            None => certify_smallest(system, &p, section, 1 << 24)?,
        };
        doc["certificate"] = cert.to_json();
    }
    print_json(&doc);
    Ok(code)
}
