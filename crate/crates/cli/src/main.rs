//! `paperband` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use paperband::catalog::{get_model, MODEL_NAMES};
use paperband::curves::curves_to_text;
use paperband::knot::{analyze, knot_summary, linking_number, GaussCode};
use paperband::report::{fmt9, Report};
use paperband::smooth::{build_mesh, check_developable, check_embedded, to_obj, MeshParams, StripMesh};
use paperband::strip::{develop, max_vertex_deviation, validate_strip};
use paperband::{
    check_layers, extract_curves, Component, CrossingDiagram, Error, FoldedState, InflationParams, Model, Tolerance,
};

#[derive(Parser, Debug)]
#[command(name = "paperband", version, about = "Folded paper Moebius bands: layers, twist, knots and smooth meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strip, gluing and layer checks (or a crossing-diagram file).
    Validate(Args),
    /// Folded state dump and develop round trip.
    Fold(Args),
    /// Linking number, determinant, bracket and verdict.
    Analyze(Args),
    /// Smooth meshes per layer gap with a developability table.
    Mesh(Args),
    /// One consolidated report per model (all catalog models by default).
    Report(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Catalog model name.
    #[arg(value_name = "MODEL")]
    name: Option<String>,
    #[arg(long, conflicts_with_all = ["name", "file"])]
    model: Option<String>,
    /// Model file (.toml) or crossing diagram (.diagram).
    #[arg(long, conflicts_with = "name")]
    file: Option<PathBuf>,
    /// Comma-separated layer gaps, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    inset: f64,
    #[arg(long, default_value_t = 0.25)]
    smoothness: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// What went wrong, by exit status.
enum Failure {
    Checks(Vec<String>),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::ModelFile(_)
            | Error::UnknownModel(_)
            | Error::InvalidCode(_)
            | Error::Io(_) => Failure::Input(e.to_string()),
            other => Failure::Checks(vec![other.to_string()]),
        }
    }
}

type Run<T> = Result<T, Failure>;

const DEFAULT_GRID: [f64; 4] = [0.05, 0.02, 0.01, 0.005];

impl Args {
    fn grid(&self, default: &[f64]) -> Run<Vec<f64>> {
        let g = if self.eps.is_empty() { default.to_vec() } else { self.eps.clone() };
        if g.iter().any(|&e| !(e > 0.0)) {
            return Err(Failure::Input(format!("layer gaps must be positive: {g:?}")));
        }
        if g.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Failure::Input(format!("layer gaps must be strictly decreasing: {g:?}")));
        }
        Ok(g)
    }

    fn mesh_params(&self, eps: f64) -> MeshParams {
        MeshParams { joint_inset: self.inset, smoothness: self.smoothness, ..MeshParams::new(eps) }
    }

    fn models(&self, all_by_default: bool) -> Run<Vec<Model>> {
        if let Some(path) = &self.file {
            return Ok(vec![Model::load(path)?]);
        }
        match self.name.as_ref().or(self.model.as_ref()) {
            Some(n) => Ok(vec![get_model(n)?]),
            None if all_by_default => MODEL_NAMES.iter().map(|n| get_model(n).map_err(Failure::from)).collect(),
            None => Err(Failure::Input("name a model or pass --file".into())),
        }
    }

    fn model(&self) -> Run<Model> {
        Ok(self.models(false)?.remove(0))
    }

    fn emit(&self, stem: &str, report: &Report) -> Run<()> {
        let (text, ext) = match self.format {
            Format::Text => (report.to_string(), "txt"),
            Format::Json => (report.to_json(), "json"),
        };
        match &self.out {
            Some(dir) => write(dir, &format!("{stem}.{ext}"), &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Run<()> {
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    std::fs::write(dir.join(name), text).map_err(Error::from)?;
    Ok(())
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn fold(m: &Model) -> Run<FoldedState> {
    Ok(m.fold(&tol())?)
}

/// Strip, gluing, fold and layer checks; the list of violations.
fn validation(m: &Model, r: &mut Report) -> Run<Vec<String>> {
    let v = validate_strip(&m.strip, &m.gluing, &tol());
    let mut problems: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
    r.push("model", &m.name)
        .num("aspect_ratio", m.strip.aspect_ratio)
        .push("faces", m.strip.faces.len())
        .push("boundary_cycles", v.boundary_cycles)
        .num("boundary_length", v.boundary_length)
        .push("strip_violations", v.violations.len());
    if !v.is_valid() {
        return Ok(problems);
    }
    let st = fold(m)?;
    let inv = st.check_invariants(&tol());
    let layers = check_layers(&st, &tol());
    r.push("plane_groups", st.plane_groups.len())
        .push("state_violations", inv.len())
        .push("layer_violations", layers.len());
    problems.extend(inv.iter().map(|x| x.to_string()));
    problems.extend(layers.iter().map(|x| x.to_string()));
    Ok(problems)
}

fn validate_diagram(path: &Path, args: &Args) -> Run<()> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let d = CrossingDiagram::from_text(&text)?;
    let b = d.component_index(Component::Boundary).ok_or_else(|| Failure::Input("diagram has no boundary".into()))?;
    let mut r = Report::new();
    r.push("file", path.display()).push("components", d.components.len()).push("crossings", d.crossings.len());
    if let Some(o) = d.component_index(Component::Boundary2).or(d.component_index(Component::Midline)) {
        let lk = linking_number(&d, b, o)?;
        r.push("linking_number", lk);
    }
    let s = knot_summary(&GaussCode::of_component(&d, b))?;
    r.push("determinant", s.determinant).push("verdict", s.verdict);
    args.emit("diagram.validate", &r)
}

fn cmd_validate(args: &Args) -> Run<()> {
    if let Some(p) = args.file.as_ref().filter(|p| p.extension().is_some_and(|e| e == "diagram")) {
        return validate_diagram(p, args);
    }
    let m = args.model()?;
    let mut r = Report::new();
    let problems = validation(&m, &mut r)?;
    args.emit(&format!("{}.validate", m.name), &r)?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(problems))
    }
}

/// Rounding noise below this prints as zero in the fold dump.
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn cmd_fold(args: &Args) -> Run<()> {
    let m = args.model()?;
    let st = fold(&m)?;
    let mut r = Report::new();
    r.push("model", &m.name).push("faces", st.face_count()).push("plane_groups", st.plane_groups.len());
    for (gi, g) in st.plane_groups.iter().enumerate() {
        let n = g.normal.map(snap);
        r.push(&format!("group.{gi}.normal"), format!("{} {} {}", fmt9(n.x), fmt9(n.y), fmt9(n.z)));
        r.push(
            &format!("group.{gi}.faces"),
            g.faces.iter().map(|f| m.strip.faces[*f].label.clone()).collect::<Vec<_>>().join(" "),
        );
    }
    for f in 0..st.face_count() {
        let key = format!("face.{}", m.strip.faces[f].label);
        let img: Vec<String> = st
            .face_image(f)
            .iter()
            .map(|p| p.map(snap))
            .map(|p| format!("({} {} {})", fmt9(p.x), fmt9(p.y), fmt9(p.z)))
            .collect();
        r.push(&format!("{key}.layer"), st.layers[f])
            .push(&format!("{key}.group"), st.group_of[f])
            .push(&format!("{key}.front_up"), st.front_up(f))
            .push(&format!("{key}.image"), img.join(" "));
    }
    let dev = develop(&st, &tol()).map(|d| max_vertex_deviation(&d, &m.strip));
    let mut problems: Vec<String> = st.check_invariants(&tol()).iter().map(|v| v.to_string()).collect();
    match dev {
        Ok(d) => {
            r.num("develop_deviation", d);
            if d > 1e-9 {
                problems.push(format!("develop round trip off by {d:e}"));
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    r.push("develop_round_trip", problems.is_empty());
    args.emit(&format!("{}.fold", m.name), &r)?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(problems))
    }
}

fn tag(eps: f64) -> String {
    format!("eps{}", fmt9(eps))
}

/// Invariant reports per layer gap, keys prefixed when there is more than one.
fn invariants(m: &Model, st: &FoldedState, grid: &[f64], args: &Args, r: &mut Report) -> Run<Vec<String>> {
    let mut problems = Vec::new();
    for &eps in grid {
        let params = InflationParams::new(eps);
        let inv = analyze(st, &params, args.seed, &tol())?;
        if let Some(dir) = &args.out {
            let curves = extract_curves(st, &params, &tol())?;
            write(dir, &format!("{}_{}.polyline", m.name, tag(eps)), &curves_to_text(&curves))?;
        }
        if inv.linking_number != m.expected.linking {
            problems
                .push(format!("linking number {} at eps {eps}, expected {}", inv.linking_number, m.expected.linking));
        }
        if inv.boundary.determinant != m.expected.determinant {
            problems.push(format!(
                "determinant {} at eps {eps}, expected {}",
                inv.boundary.determinant, m.expected.determinant
            ));
        }
        if !inv.embedded {
            problems.push(format!("curves touch at eps {eps}"));
        }
        let mut sub = inv.to_report();
        if grid.len() > 1 {
            let t = tag(eps);
            sub.entries.iter_mut().for_each(|(k, _)| *k = format!("{t}.{k}"));
        }
        r.extend(sub);
    }
    Ok(problems)
}

fn cmd_analyze(args: &Args) -> Run<()> {
    let m = args.model()?;
    let grid = args.grid(&[0.02])?;
    let st = fold(&m)?;
    let mut r = Report::new();
    r.push("model", &m.name);
    let problems = invariants(&m, &st, &grid, args, &mut r)?;
    args.emit(&format!("{}.analyze", m.name), &r)?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(problems))
    }
}

struct MeshRow {
    eps: f64,
    mesh: StripMesh,
    distortion: f64,
    defect: f64,
    embedded: bool,
}

fn meshes(st: &FoldedState, grid: &[f64], args: &Args) -> Run<Vec<MeshRow>> {
    let mut rows = Vec::new();
    for &eps in grid {
        let params = args.mesh_params(eps);
        params.validate()?;
        let mesh = build_mesh(st, &params, true, &tol())?;
        let d = check_developable(&mesh);
        let embedded = check_embedded(&mesh, tol().eps_point).embedded();
        rows.push(MeshRow { eps, distortion: d.edge_distortion, defect: d.angle_defect, embedded, mesh });
    }
    Ok(rows)
}

fn mesh_problems(rows: &[MeshRow]) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows {
        if !r.embedded {
            out.push(format!("mesh at eps {} is not embedded", r.eps));
        }
        if r.distortion >= 1e-6 || r.defect >= 1e-6 {
            out.push(format!(
                "mesh at eps {} is not developable: distortion {:e}, defect {:e}",
                r.eps, r.distortion, r.defect
            ));
        }
    }
    out
}

fn mesh_report(rows: &[MeshRow], r: &mut Report) {
    for row in rows {
        let t = tag(row.eps);
        r.num(&format!("{t}.aspect_ratio"), row.mesh.aspect_ratio())
            .num(&format!("{t}.edge_distortion"), row.distortion)
            .num(&format!("{t}.angle_defect"), row.defect)
            .push(&format!("{t}.embedded"), row.embedded)
            .num(&format!("{t}.joint_run"), row.mesh.params.run)
            .push(&format!("{t}.vertices"), row.mesh.vertices.len())
            .push(&format!("{t}.triangles"), row.mesh.triangles.len());
    }
}

fn cmd_mesh(args: &Args) -> Run<()> {
    let m = args.model()?;
    let grid = args.grid(&DEFAULT_GRID)?;
    let st = fold(&m)?;
    let rows = meshes(&st, &grid, args)?;
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    for row in &rows {
        write(&dir, &format!("{}_{}.obj", m.name, tag(row.eps)), &to_obj(&row.mesh))?;
    }
    match args.format {
        Format::Text => {
            let mut t = String::new();
            let _ =
                writeln!(t, "{:>10} {:>12} {:>12} {:>12} {:>9}", "eps", "aspect", "distortion", "defect", "embedded");
            for row in &rows {
                let _ = writeln!(
                    t,
                    "{:>10} {:>12} {:>12} {:>12} {:>9}",
                    fmt9(row.eps),
                    fmt9(row.mesh.aspect_ratio()),
                    fmt9(row.distortion),
                    fmt9(row.defect),
                    row.embedded
                );
            }
            print!("{t}");
        }
        Format::Json => {
            let mut r = Report::new();
            r.push("model", &m.name);
            mesh_report(&rows, &mut r);
            print!("{}", r.to_json());
        }
    }
    let problems = mesh_problems(&rows);
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(problems))
    }
}

fn full_report(m: &Model, args: &Args) -> Run<(Report, Vec<String>)> {
    let grid = args.grid(&[0.02])?;
    let mut r = Report::new();
    let mut problems = validation(m, &mut r)?;
    if !problems.is_empty() {
        return Ok((r, problems));
    }
    let st = fold(m)?;
    problems.extend(invariants(m, &st, &grid, args, &mut r)?);
    let rows = meshes(&st, &grid, args)?;
    problems.extend(mesh_problems(&rows));
    mesh_report(&rows, &mut r);
    r.push("checks_passed", problems.is_empty());
    Ok((r, problems))
}

fn cmd_report(args: &Args) -> Run<()> {
    let models = args.models(true)?;
    // One worker per model; results are gathered in catalog order.
    let results: Vec<Run<(Report, Vec<String>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = models.iter().map(|m| s.spawn(move || full_report(m, args))).collect();
        handles.into_iter().map(|h| h.join().expect("report worker panicked")).collect()
    });
    let mut problems = Vec::new();
    for (m, res) in models.iter().zip(results) {
        let (r, p) = res?;
        args.emit(&format!("{}.report", m.name), &r)?;
        problems.extend(p.into_iter().map(|x| format!("{}: {x}", m.name)));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(problems))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Fold(a) => cmd_fold(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Mesh(a) => cmd_mesh(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(list)) => {
            for p in list {
                eprintln!("violation: {p}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
