//! `ultraiso`: command-line front end.
//!
//! Exit status: 0 on success, 1 for a verified negative result (failed
//! verification, obstruction, isosceles violation) whose witness goes to
//! stdout, 2 for malformed input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ultraiso::constructions::classify;
use ultraiso::geometry::decompose_sphere;
use ultraiso::isotree::{compose, factor_isometry, random_tree, verify_tree, TableMap};
use ultraiso::json::{self as uj, JsonError};
use ultraiso::oracle::{self, Oracle};
use ultraiso::tingley::{extend_sphere_isometry, extension_obstruction, ExtensionResult};
use ultraiso::{par, Domain, Exec, IsometryTree, NormValue, PointMap, Space, SpaceDescriptor, SphereLayout};

#[derive(Parser, Debug)]
#[command(name = "ultraiso", version, about = "Isometries of ultrametric normed spaces")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field, weights, value set and sphere sizes of a space.
    Space {
        #[command(subcommand)]
        command: SpaceCmd,
    },
    /// Ball decompositions.
    Geometry {
        #[command(subcommand)]
        command: GeometryCmd,
    },
    /// Isometry trees.
    Iso {
        #[command(subcommand)]
        command: IsoCmd,
    },
    /// Decide whether every centred isometry is linear.
    Classify(SpaceArgs),
    /// Extension of sphere isometries.
    Tingley {
        #[command(subcommand)]
        command: TingleyCmd,
    },
    /// Brute-force checks on small finite spaces.
    Oracle {
        #[command(subcommand)]
        command: OracleCmd,
    },
}

#[derive(Subcommand, Debug)]
enum SpaceCmd {
    Describe(WindowArgs),
}

#[derive(Subcommand, Debug)]
enum GeometryCmd {
    /// Class representatives of a sphere.
    Decompose {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        radius: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

#[derive(Subcommand, Debug)]
enum IsoCmd {
    /// Image of a point.
    Apply {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        iso: PathBuf,
        /// The point as a JSON array of coordinates.
        #[arg(long)]
        point: String,
    },
    /// Check that a tree is a bijective isometry of the domain.
    Verify {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        iso: PathBuf,
    },
    /// Factor a tree or a table of pairs into canonical tree form.
    Factor {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        iso: PathBuf,
    },
    /// `f ∘ g ∘ …` for `--iso f --iso g …`, refactored on the domain.
    Compose {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, required = true)]
        iso: Vec<PathBuf>,
    },
    Invert {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        iso: PathBuf,
    },
    /// A seeded random tree on the domain's levels.
    Random {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TingleyCmd {
    /// Extend the sphere isometry in `--spec` to `B[0, r·aᵐ]`.
    Extend {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Decide obstructions from the spaces and radii alone.
    Obstruction {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        space2: PathBuf,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        radius2: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Counts of centred, linear and affine isometries.
    Census {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every centred isometry as a list of pairs, one per line.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: u128,
    },
    /// Exhaustive isosceles check over all triples.
    Isosceles(SpaceArgs),
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long)]
    space: PathBuf,
}

/// A space plus the p-adic window `B[0, radius] / B(0, radius·p^-depth)`.
/// Finite spaces ignore both.
#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long, default_value = "1")]
    radius: String,
    #[arg(long, default_value_t = 3)]
    depth: u32,
}

enum Failure {
    Input(String),
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ultraiso::Error> for Failure {
    fn from(e: ultraiso::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A report and whether it is a negative result.
struct Report {
    body: Vec<Value>,
    negative: bool,
}

impl Report {
    fn ok(v: Value) -> Self {
        Report { body: vec![v], negative: false }
    }

    fn negative(v: Value) -> Self {
        Report { body: vec![v], negative: true }
    }
}

type Run = Result<Report, Failure>;

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_space(path: &Path) -> Result<Space, Failure> {
    let v = read_json(path)?;
    serde_path_to_error::deserialize::<_, SpaceDescriptor>(&v)
        .map_err(|e| Failure::Input(format!("{}: {}: {}", path.display(), e.path(), e.inner())))?;
    uj::space_from_json(&v, "$").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_tree(space: &Space, path: &Path) -> Result<IsometryTree, Failure> {
    let v = read_json(path)?;
    uj::tree_from_json(space, &v).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_value(s: &str, what: &str) -> Result<NormValue, Failure> {
    uj::value_from_json(&Value::from(s), what).map_err(Into::into)
}

fn domain(space: &Space, w: &WindowArgs) -> Result<Domain, Failure> {
    let top = parse_value(&w.radius, "--radius")?;
    Ok(Domain::with_depth(space, &top, w.depth)?)
}

/// Nesting depth that covers every level of the domain.
fn tree_depth(d: &Domain) -> u32 {
    d.levels().len() as u32
}

fn domain_json(d: &Domain) -> Value {
    match d.bounds() {
        None => json!({ "kind": "finite", "points": d.size() }),
        Some((top, floor)) => json!({
            "kind": "window",
            "top": uj::value_to_json(&top),
            "floor": uj::value_to_json(&floor),
            "points": d.size(),
        }),
    }
}

fn space_describe(w: &WindowArgs) -> Run {
    let space = load_space(&w.space)?;
    let levels: Vec<NormValue> = match space.finite_value_set() {
        Some(v) => v,
        None => domain(&space, w)?.levels().to_vec(),
    };
    let spheres: Vec<Value> = levels
        .iter()
        .map(|r| {
            let classes = SphereLayout::new(&space, r).map_or(0, |l| l.class_count());
            json!({ "radius": uj::value_to_json(r), "classes": classes })
        })
        .collect();
    let points = space.field().order().and_then(|q| (q as u128).checked_pow(space.dim() as u32)).map(|n| n.to_string());
    Ok(Report::ok(uj::with_schema(json!({
        "space": uj::space_to_json(&space),
        "finite": space.is_finite(),
        "points": points,
        "residue_field_order": space.field().residue_count(),
        "value_set": levels.iter().map(uj::value_to_json).collect::<Vec<_>>(),
        "spheres": spheres,
    }))))
}

fn geometry_decompose(s: &SpaceArgs, radius: &str, depth: u32) -> Run {
    let space = load_space(&s.space)?;
    let r = parse_value(radius, "--radius")?;
    Ok(Report::ok(uj::sphere_to_json(&space, &decompose_sphere(&space, &r, depth)?)))
}

fn iso_apply(s: &SpaceArgs, iso: &Path, point: &str) -> Run {
    let space = load_space(&s.space)?;
    let tree = load_tree(&space, iso)?;
    let v: Value = serde_json::from_str(point).map_err(|e| Failure::Input(format!("--point: {e}")))?;
    let x = uj::point_from_json(&space, &v, "--point")?;
    let y = tree.apply(&space, &x)?;
    Ok(Report::ok(uj::with_schema(json!({
        "x": uj::point_to_json(&space, &x),
        "image": uj::point_to_json(&space, &y),
    }))))
}

fn iso_verify(w: &WindowArgs, iso: &Path, exec: Exec) -> Run {
    let space = load_space(&w.space)?;
    let tree = load_tree(&space, iso)?;
    let d = domain(&space, w)?;
    let v = verify_tree(&space, &tree, &d, exec);
    let mut out = json!({ "passed": v.passed(), "domain": domain_json(&d) });
    match v.witness() {
        None => Ok(Report::ok(uj::with_schema(out))),
        Some(wit) => {
            out["witness"] = uj::witness_to_json(&space, wit);
            Ok(Report::negative(uj::with_schema(out)))
        }
    }
}

fn factor_on(space: &Space, map: &dyn PointMap, d: &Domain, exec: Exec) -> Run {
    if let Some(wit) = ultraiso::isotree::verify_isometry(space, map, d, exec).witness() {
        return Ok(Report::negative(uj::with_schema(json!({
            "passed": false,
            "domain": domain_json(d),
            "witness": uj::witness_to_json(space, wit),
        }))));
    }
    let tree = factor_isometry(space, map, d, tree_depth(d), exec)?;
    Ok(Report::ok(uj::tree_to_json(space, &tree)))
}

fn iso_factor(w: &WindowArgs, iso: &Path, exec: Exec) -> Run {
    let space = load_space(&w.space)?;
    let d = domain(&space, w)?;
    let v = read_json(iso)?;
    if let Some(pairs) = v.get("pairs") {
        let pairs = uj::pairs_from_json(&space, pairs, "$.pairs")
            .map_err(|e| Failure::Input(format!("{}: {e}", iso.display())))?;
        factor_on(&space, &TableMap::new(pairs), &d, exec)
    } else {
        let tree = uj::tree_from_json(&space, &v).map_err(|e| Failure::Input(format!("{}: {e}", iso.display())))?;
        factor_on(&space, &tree.as_map(&space), &d, exec)
    }
}

fn iso_compose(w: &WindowArgs, isos: &[PathBuf], exec: Exec) -> Run {
    let space = load_space(&w.space)?;
    let d = domain(&space, w)?;
    let trees = isos.iter().map(|p| load_tree(&space, p)).collect::<Result<Vec<_>, _>>()?;
    let maps: Vec<_> = trees.iter().map(|t| t.as_map(&space)).collect();
    let mut acc: Box<dyn PointMap + '_> = Box::new(maps[maps.len() - 1]);
    for m in maps[..maps.len() - 1].iter().rev() {
        acc = Box::new(Chain { outer: m, inner: acc });
    }
    factor_on(&space, &acc, &d, exec)
}

/// `outer ∘ inner`, owning the inner part.
struct Chain<'a> {
    outer: &'a dyn PointMap,
    inner: Box<dyn PointMap + 'a>,
}

impl PointMap for Chain<'_> {
    fn eval(&self, x: &ultraiso::Point) -> ultraiso::Result<ultraiso::Point> {
        compose(self.outer, &*self.inner).eval(x)
    }
}

fn iso_invert(s: &SpaceArgs, iso: &Path) -> Run {
    let space = load_space(&s.space)?;
    let tree = load_tree(&space, iso)?;
    Ok(Report::ok(uj::tree_to_json(&space, &tree.inverse(&space)?)))
}

fn iso_random(w: &WindowArgs, seed: u64) -> Run {
    let space = load_space(&w.space)?;
    let d = domain(&space, w)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tree = random_tree(&space, d.levels(), tree_depth(&d), &mut rng)?;
    Ok(Report::ok(uj::tree_to_json(&space, &tree)))
}

fn run_classify(s: &SpaceArgs, exec: Exec) -> Run {
    let space = load_space(&s.space)?;
    let r = classify(&space, exec)?;
    Ok(Report::ok(uj::classification_to_json(Some(&space), &r)))
}

fn tingley_extend(spec: &Path, m: u32, depth: u32, exec: Exec) -> Run {
    let v = read_json(spec)?;
    let input = uj::extension_input_from_json(&v).map_err(|e| Failure::Input(format!("{}: {e}", spec.display())))?;
    let (sx, sy) = (input.spec.x.clone(), input.spec.y.clone());
    match extend_sphere_isometry(input.spec, input.x0, input.alpha, m, depth, exec)? {
        ExtensionResult::Obstructed(o) => Ok(Report::negative(uj::with_schema(json!({
            "verdict": "Obstructed",
            "obstruction": uj::obstruction_to_json(&o),
        })))),
        ExtensionResult::Extended { map, verified_points } => {
            let field = sx.field();
            let mut x = map.x0.clone();
            let mut samples = Vec::new();
            for n in 0..=m {
                let y = map.eval(&x)?;
                samples.push(json!({
                    "shell": n,
                    "x": uj::point_to_json(&sx, &x),
                    "image": uj::point_to_json(&sy, &y),
                }));
                x = sx.scalar_mul(&map.alpha, &x).map_err(ultraiso::Error::from)?;
            }
            Ok(Report::ok(uj::with_schema(json!({
                "verdict": "Extended",
                "m": m,
                "depth": depth,
                "x0": uj::point_to_json(&sx, &map.x0),
                "alpha": uj::element_to_json(field, &map.alpha),
                "verified_points": verified_points,
                "samples": samples,
            }))))
        }
    }
}

fn tingley_obstruction(s: &SpaceArgs, space2: &Path, radius: &str, radius2: Option<&str>) -> Run {
    let x = load_space(&s.space)?;
    let y = load_space(space2)?;
    let r = parse_value(radius, "--radius")?;
    let r2 = match radius2 {
        Some(t) => parse_value(t, "--radius2")?,
        None => r,
    };
    match extension_obstruction(&x, &y, &r, &r2)? {
        None => Ok(Report::ok(uj::with_schema(json!({ "obstruction": null })))),
        Some(o) => Ok(Report::negative(uj::with_schema(json!({ "obstruction": uj::obstruction_to_json(&o) })))),
    }
}

fn oracle_census(s: &SpaceArgs, cap: u128, seed: u64, exec: Exec) -> Run {
    let space = load_space(&s.space)?;
    Ok(Report::ok(uj::census_to_json(&space, &oracle::census(&space, cap, seed, exec)?)))
}

fn oracle_enumerate(s: &SpaceArgs, cap: u128, exec: Exec) -> Run {
    let space = load_space(&s.space)?;
    let o = Oracle::new(&space)?;
    let maps = o.enumerate(cap, exec)?;
    let body = maps
        .iter()
        .enumerate()
        .map(|(i, f)| uj::with_schema(json!({ "index": i, "pairs": uj::pairs_to_json(&space, &o.pairs(f)) })))
        .collect();
    Ok(Report { body, negative: false })
}

fn oracle_isosceles(s: &SpaceArgs, exec: Exec) -> Run {
    let space = load_space(&s.space)?;
    let r = oracle::check_isosceles_exhaustive(&space, exec)?;
    let v = uj::isosceles_to_json(&space, &r);
    Ok(if r.passed() { Report::ok(v) } else { Report::negative(v) })
}

fn dispatch(cmd: &Command, exec: Exec) -> Run {
    match cmd {
        Command::Space { command: SpaceCmd::Describe(w) } => space_describe(w),
        Command::Geometry { command: GeometryCmd::Decompose { space, radius, depth } } => {
            geometry_decompose(space, radius, *depth)
        }
        Command::Iso { command } => match command {
            IsoCmd::Apply { space, iso, point } => iso_apply(space, iso, point),
            IsoCmd::Verify { window, iso } => iso_verify(window, iso, exec),
            IsoCmd::Factor { window, iso } => iso_factor(window, iso, exec),
            IsoCmd::Compose { window, iso } => iso_compose(window, iso, exec),
            IsoCmd::Invert { space, iso } => iso_invert(space, iso),
            IsoCmd::Random { window, seed } => iso_random(window, *seed),
        },
        Command::Classify(s) => run_classify(s, exec),
        Command::Tingley { command } => match command {
            TingleyCmd::Extend { spec, m, depth } => tingley_extend(spec, *m, *depth, exec),
            TingleyCmd::Obstruction { space, space2, radius, radius2 } => {
                tingley_obstruction(space, space2, radius, radius2.as_deref())
            }
        },
        Command::Oracle { command } => match command {
            OracleCmd::Census { space, cap, seed } => oracle_census(space, *cap, *seed, exec),
            OracleCmd::Enumerate { space, cap } => oracle_enumerate(space, *cap, exec),
            OracleCmd::Isosceles(s) => oracle_isosceles(s, exec),
        },
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Two-column `key  value` table; nested values are printed as compact JSON.
/// A top-level list of objects becomes a sequence of sub-tables.
fn human(v: &Value) -> String {
    table(v, true)
}

fn table(v: &Value, expand: bool) -> String {
    let Value::Object(m) = v else { return scalar_text(v) + "\n" };
    let width = m.keys().map(|k| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, x) in m {
        if k == "schema" {
            continue;
        }
        match x {
            Value::Array(items) if expand && items.iter().all(|i| i.is_object()) && !items.is_empty() => {
                out += &format!("{k}:\n");
                for i in items {
                    for line in table(i, false).lines() {
                        out += &format!("  {line}\n");
                    }
                    out += "\n";
                }
            }
            _ => out += &format!("{k:<width$}  {}\n", scalar_text(x)),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("ULTRAISO_THREADS") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = par::init_threads(n) {
                    eprintln!("error: ULTRAISO_THREADS: {e}");
                    return ExitCode::from(2);
                }
            }
            _ => {
                eprintln!("error: ULTRAISO_THREADS must be a positive integer, got {t:?}");
                return ExitCode::from(2);
            }
        }
    }
    match dispatch(&cli.command, Exec::default()) {
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(report) => {
            for v in &report.body {
                match cli.format {
                    Format::Json if report.body.len() == 1 => {
                        println!("{}", serde_json::to_string_pretty(v).expect("json serialises"))
                    }
                    Format::Json => println!("{v}"),
                    Format::Human => print!("{}", human(v)),
                }
            }
            ExitCode::from(u8::from(report.negative))
        }
    }
}
