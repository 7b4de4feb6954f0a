use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperot::fuchsian::MetricMesh;
use hyperot::io::{
    convergence_csv, parse_obj, read_json, render_svg, write_json, write_obj, Dump, MetricSidecar, ObjMesh,
    RenderOptions, SitesFile, TargetFile,
};
use hyperot::lorentz::HPoint;
use hyperot::pipeline::{
    parametrize, parametrize_with_measure, vertex_measure, ParametrizeConfig, Parametrization,
};
use hyperot::solver::{
    cell_centroid, damped_newton, DiagramSource, IterationRecord, NewtonConfig, PlanarProblem, SolveFailure,
    TargetMeasure, TargetMode,
};
use hyperot::synth::{disk_face_areas, hex_disk, hyperbolic_face_areas, irregular_surface, regular_surface};
use hyperot::Error;

#[derive(Parser)]
#[command(name = "hyperot", version, about = "Semi-discrete optimal transport on the hyperbolic plane and on hyperbolic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power diagram of a sites file, clipped to its domain.
    Hpd {
        sites: PathBuf,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Solve for heights whose cells carry the target masses.
    Solve {
        sites: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Area-preserving parametrization of a cut-open genus g > 1 mesh.
    Parametrize {
        mesh: PathBuf,
        /// Metric sidecar; defaults to the mesh path with extension `.metric.json`.
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Depth of the tiling around the fundamental domain; chosen automatically when absent.
        #[arg(long)]
        tile_depth: Option<usize>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Render a dump as SVG in the Poincaré disk.
    Render {
        dump: PathBuf,
        /// Output file; defaults to the dump path with extension `.svg`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        render: RenderArgs,
    },
    /// Write synthetic inputs.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
}

#[derive(Subcommand)]
enum SynthKind {
    /// Hexagonal lattice of points in the disk, with its triangles.
    Hex {
        #[arg(long, default_value_t = 4)]
        rings: usize,
        #[arg(long, default_value_t = 0.2)]
        spacing: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cut-open genus g mesh (OBJ with disk positions) and its metric sidecar.
    Surface {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Subdivisions per fan triangle of the 4g-gon.
        #[arg(long, default_value_t = 4)]
        subdivision: usize,
        /// Perturb the regular 4g-gon with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.5)]
    lambda0: f64,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// euclidean-face-area, hyperbolic-face-area, uniform or file.
    #[arg(long)]
    target_mode: Option<TargetMode>,
    /// Target weights JSON; implies `--target-mode file`.
    #[arg(long)]
    target: Option<PathBuf>,
}

impl SolverArgs {
    fn config(&self) -> NewtonConfig {
        NewtonConfig { lambda0: self.lambda0, eps: self.eps, max_iters: self.max_iters, ..Default::default() }
    }

    fn mode(&self, default: TargetMode) -> TargetMode {
        self.target_mode.unwrap_or(if self.target.is_some() { TargetMode::File } else { default })
    }

    fn weights(&self) -> Result<Vec<f64>, Failure> {
        let path = self.target.as_ref().ok_or_else(|| input("target mode 'file' needs --target"))?;
        Ok(read_json::<TargetFile>(path)?.weights)
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Image size in pixels.
    #[arg(long, default_value_t = 800)]
    size: u32,
    #[arg(long)]
    no_sites: bool,
    #[arg(long)]
    no_centroids: bool,
    #[arg(long)]
    no_tiles: bool,
}

impl RenderArgs {
    fn options(&self) -> RenderOptions {
        RenderOptions { size: self.size, sites: !self.no_sites, centroids: !self.no_centroids, tiles: !self.no_tiles }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Input(_)
            | Error::InvalidTarget(_)
            | Error::InvalidPoint(_)
            | Error::OutOfDomain(_)
            | Error::Range(_)
            | Error::TooFewSites(_)
            | Error::DuplicateSite(..)
            | Error::Metric(_) => 2,
            Error::NonConvergence { .. } | Error::Stall { .. } => 4,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Hpd { sites, out, render } => hpd(&sites, &out.out_dir, &render.options()),
        Command::Solve { sites, solver, out, render } => solve(&sites, &solver, &out.out_dir, &render.options()),
        Command::Parametrize { mesh, metric, tile_depth, solver, out, render } => {
            let metric = metric.unwrap_or_else(|| mesh.with_extension("metric.json"));
            let cfg = ParametrizeConfig { newton: solver.config(), tile_depth };
            run_parametrize(&mesh, &metric, &solver, &cfg, &out.out_dir, &render.options())
        }
        Command::Render { dump, output, render } => {
            let d: Dump = read_json(&dump)?;
            write_text(&output.unwrap_or_else(|| dump.with_extension("svg")), &render_svg(&d, &render.options()))
        }
        Command::Synth { kind } => synth(kind),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn out_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))
}

fn planar_problem(file: &SitesFile) -> Result<PlanarProblem, Failure> {
    Ok(PlanarProblem::new(file.centers()?, file.domain()?)?)
}

fn hpd(sites: &Path, dir: &Path, opts: &RenderOptions) -> Result<(), Failure> {
    let file: SitesFile = read_json(sites)?;
    let problem = planar_problem(&file)?;
    let pd = problem.diagram(&file.heights()?)?;
    out_dir(dir)?;
    let dump = Dump::planar("power-diagram", &pd, &problem.domain);
    write_json(&dir.join("diagram.json"), &dump)?;
    write_text(&dir.join("diagram.svg"), &render_svg(&dump, opts))?;
    println!("{} cells", dump.cells.len());
    Ok(())
}

fn planar_target(file: &SitesFile, args: &SolverArgs, total: f64) -> Result<(TargetMeasure, f64), Failure> {
    let n = file.sites.len();
    let weights = match args.mode(TargetMode::Uniform) {
        TargetMode::Uniform => vec![1.0; n],
        TargetMode::File => args.weights()?,
        TargetMode::EuclideanFaceArea => {
            let disk: Vec<_> = file.sites.iter().map(|s| hyperot::lorentz::DiskPoint::new(s.u, s.v)).collect::<Result<_, _>>()?;
            let faces = file.faces()?;
            vertex_measure(faces, &disk_face_areas(&disk, faces), n)?
        }
        TargetMode::HyperbolicFaceArea => {
            let faces = file.faces()?;
            vertex_measure(faces, &hyperbolic_face_areas(&file.centers()?, faces), n)?
        }
    };
    if weights.len() != n {
        return Err(input(format!("{} target weights for {n} sites", weights.len())));
    }
    Ok(TargetMeasure::normalized(weights, total)?)
}

fn write_log(dir: &Path, log: &[IterationRecord]) -> Result<(), Failure> {
    write_text(&dir.join("convergence.csv"), &convergence_csv(log))
}

fn disk(p: &HPoint) -> [f64; 2] {
    let d = p.to_disk();
    [d.u, d.v]
}

fn solve(sites: &Path, args: &SolverArgs, dir: &Path, opts: &RenderOptions) -> Result<(), Failure> {
    let file: SitesFile = read_json(sites)?;
    let problem = planar_problem(&file)?;
    let (target, scale) = planar_target(&file, args, problem.total_mass())?;
    let cfg = args.config();
    cfg.validate()?;
    let initial = file.heights()?;
    let before = problem.diagram(&initial)?;
    out_dir(dir)?;
    let mut dump = Dump::planar("power-diagram", &before, &problem.domain);
    dump.centroids = Some(before.cells.iter().map(|c| cell_centroid(c).map(|p| disk(&p))).collect::<Result<_, _>>()?);
    write_text(&dir.join("before.svg"), &render_svg(&dump, opts))?;
    let solution = damped_newton(&problem, &target, &cfg, Some(&initial)).map_err(|f: SolveFailure| {
        let _ = write_log(dir, &f.log);
        Failure::from(f.error)
    })?;
    write_log(dir, &solution.log)?;
    let pd = &solution.diagram;
    let mut dump = Dump::planar("transport", pd, &problem.domain);
    dump.centroids = Some(pd.cells.iter().map(|c| cell_centroid(c).map(|p| disk(&p))).collect::<Result<_, _>>()?);
    dump.target = Some(target.masses().to_vec());
    dump.achieved = Some(pd.areas());
    dump.scale_factor = Some(scale);
    dump.iterations = Some(solution.iterations());
    dump.residual_inf = Some(solution.residual());
    write_json(&dir.join("transport.json"), &dump)?;
    write_text(&dir.join("after.svg"), &render_svg(&dump, opts))?;
    println!(
        "converged in {} iterations, residual {:.3e}, target scale factor {:.6}",
        solution.iterations(),
        solution.residual(),
        scale
    );
    Ok(())
}

fn read_surface(mesh: &Path, metric: &Path) -> Result<(ObjMesh, MetricMesh), Failure> {
    let text = std::fs::read_to_string(mesh).map_err(|e| input(format!("{}: {e}", mesh.display())))?;
    let obj = parse_obj(&text).map_err(|e| input(format!("{}: {e}", mesh.display())))?;
    if !metric.exists() {
        return Err(input(format!("metric sidecar {} not found", metric.display())));
    }
    let sidecar: MetricSidecar = read_json(metric)?;
    if sidecar.genus < 2 {
        return Err(input(format!("genus {} is not hyperbolic", sidecar.genus)));
    }
    let surface = sidecar.into_mesh(obj.faces.clone())?;
    if surface.surface_vertex.len() != obj.positions.len() {
        return Err(input(format!(
            "sidecar has {} cut vertices, mesh has {}",
            surface.surface_vertex.len(),
            obj.positions.len()
        )));
    }
    Ok((obj, surface))
}

fn run_parametrize(
    mesh_path: &Path,
    metric: &Path,
    args: &SolverArgs,
    cfg: &ParametrizeConfig,
    dir: &Path,
    opts: &RenderOptions,
) -> Result<(), Failure> {
    let (obj, mesh) = read_surface(mesh_path, metric)?;
    cfg.newton.validate()?;
    let total = 4.0 * PI * (mesh.genus as f64 - 1.0);
    let n = mesh.num_surface_vertices();
    let (result, scale) = match args.mode(TargetMode::HyperbolicFaceArea) {
        TargetMode::HyperbolicFaceArea => {
            let areas = (0..mesh.faces.len()).map(|f| mesh.face_area(f)).collect::<Result<Vec<_>, _>>()?;
            (parametrize(&mesh, None, cfg), total / areas.iter().sum::<f64>())
        }
        TargetMode::EuclideanFaceArea => {
            let areas = obj.face_areas();
            let scale = total / areas.iter().sum::<f64>();
            (parametrize(&mesh, Some(&areas), cfg), scale)
        }
        TargetMode::Uniform => (parametrize_with_measure(&mesh, vec![total / n as f64; n], cfg), 1.0),
        TargetMode::File => {
            let w = args.weights()?;
            if w.len() != n {
                return Err(input(format!("{} target weights for {n} surface vertices", w.len())));
            }
            let (t, scale) = TargetMeasure::normalized(w, total)?;
            (parametrize_with_measure(&mesh, t.masses().to_vec(), cfg), scale)
        }
    };
    out_dir(dir)?;
    let p = result.map_err(|f| {
        let _ = write_log(dir, &f.log);
        Failure::from(f.error)
    })?;
    write_log(dir, &p.log)?;
    write_parametrization(&p, &obj, &mesh, scale, dir, opts)?;
    println!(
        "genus {}, {} vertices, tiling depth {}: converged in {} iterations, max relative error {:.3e}",
        p.genus,
        n,
        p.tile_depth,
        p.log.len() - 1,
        p.max_relative_error()
    );
    Ok(())
}

fn write_parametrization(
    p: &Parametrization,
    obj: &ObjMesh,
    mesh: &MetricMesh,
    scale: f64,
    dir: &Path,
    opts: &RenderOptions,
) -> Result<(), Failure> {
    let mut dump = Dump::surface(p);
    dump.scale_factor = Some(scale);
    write_json(&dir.join("parametrization.json"), &dump)?;
    write_text(&dir.join("domain.svg"), &render_svg(&dump, &RenderOptions { tiles: false, ..*opts }))?;
    write_text(&dir.join("cover.svg"), &render_svg(&dump, opts))?;
    let texcoords = p.cut_vertex_centroids(&mesh.surface_vertex).iter().map(disk).collect();
    let out = ObjMesh { positions: obj.positions.clone(), texcoords, faces: obj.faces.clone() };
    write_text(&dir.join("parametrized.obj"), &write_obj(&out))
}

fn synth(kind: SynthKind) -> Result<(), Failure> {
    match kind {
        SynthKind::Hex { rings, spacing, output } => {
            let (points, faces) = hex_disk(rings, spacing)?;
            let file = SitesFile {
                sites: points.iter().map(|p| hyperot::io::SiteRecord { u: p.u, v: p.v, radius: 0.0 }).collect(),
                domain: None,
                faces: Some(faces),
            };
            write_json(&output, &file)?;
            println!("{} sites", file.sites.len());
        }
        SynthKind::Surface { genus, subdivision, seed, output } => {
            let s = match seed {
                Some(seed) => irregular_surface(genus, subdivision, seed)?,
                None => regular_surface(genus, subdivision)?,
            };
            let obj = ObjMesh {
                positions: s.positions.iter().map(|p| {
                    let [u, v] = disk(p);
                    [u, v, 0.0]
                }).collect(),
                texcoords: Vec::new(),
                faces: s.mesh.faces.clone(),
            };
            write_text(&output, &write_obj(&obj))?;
            write_json(&output.with_extension("metric.json"), &MetricSidecar::from_mesh(&s.mesh))?;
            println!("{} surface vertices, {} faces", s.mesh.num_surface_vertices(), s.mesh.faces.len());
        }
    }
    Ok(())
}
