//! The `klein` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a verification check
//! failed.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use klein_core::mesh::{compute_normals, euler_characteristic, self_intersections, tessellate, weld, TriangleMesh};
use klein_core::surface::{self, ParametricSurface};
use klein_core::verify::full_verify;

use crate::config::{parse_params, surface_names, ConfigError, GridConfig, OutputConfig, RunConfig};
use crate::export::{fmt_f64, write_mesh, Format};
use crate::report::{write_report, MeshSection, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// Weld tolerance as a fraction of the mesh bounding-box diagonal.
pub const WELD_RELATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "klein", version, about = "Klein bottle immersions: evaluate, verify, mesh")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct SurfaceArgs {
    /// Catalog name (see `klein list`) or `torus`.
    surface: Option<String>,
    /// Parameter overrides, `name=value,...`.
    #[arg(long)]
    params: Option<String>,
    /// JSON run configuration; flags given alongside it override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the catalog with default parameters and sources.
    List,
    /// Print the point f(u, v).
    Eval {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
    },
    /// Tessellate a surface and write a mesh file.
    Generate {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        nv: Option<usize>,
        #[arg(long)]
        margin: Option<f64>,
        /// Glue seams into a closed mesh.
        #[arg(long)]
        weld: bool,
        /// Write per-vertex normals (OBJ and PLY).
        #[arg(long)]
        normals: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every applicable check; exit 2 if one fails.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Usage(String);

impl From<ConfigError> for Usage {
    fn from(e: ConfigError) -> Self {
        Usage(e.to_string())
    }
}

fn load_config(a: &SurfaceArgs) -> Result<RunConfig, Usage> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => {
            let name = a.surface.as_deref().ok_or_else(|| Usage("missing surface name".into()))?;
            RunConfig::new(name, Default::default())?
        }
    };
    if let Some(name) = &a.surface {
        if a.config.is_some() && name != &cfg.surface.name {
            return Err(Usage(format!("surface `{name}` conflicts with `{}` in the config", cfg.surface.name)));
        }
    }
    if let Some(p) = &a.params {
        cfg.surface.params.extend(parse_params(p)?);
    }
    cfg.resolved_params()?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<File, Usage> {
    File::create(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn format_from_path(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
        "obj" => Some(Format::Obj),
        "stl" => Some(Format::Stl),
        "ply" => Some(Format::Ply),
        _ => None,
    }
}

/// Tessellates (and optionally welds) with the grid settings of `cfg`.
pub fn build_mesh(s: &ParametricSurface, grid: &GridConfig) -> Result<TriangleMesh, klein_core::error::Error> {
    let m = tessellate(s, grid.nu, grid.nv, grid.margin)?;
    if grid.weld {
        weld(&m, s, WELD_RELATIVE_TOL * m.diameter())
    } else {
        Ok(m)
    }
}

pub fn mesh_section(m: &TriangleMesh) -> MeshSection {
    MeshSection {
        provenance: m.provenance.clone(),
        topology: euler_characteristic(m),
        self_intersections: self_intersections(m, 0.0),
    }
}

fn list(out: &mut dyn Write) -> std::io::Result<()> {
    for name in surface_names() {
        let defaults = surface::default_params(name).unwrap_or_default();
        let values: Vec<f64> = defaults.iter().map(|p| p.1).collect();
        let Some(Ok(s)) = surface::build(name, &values) else { continue };
        let params: Vec<String> = defaults.iter().map(|(k, v)| format!("{k}={}", fmt_f64(*v))).collect();
        let params = if params.is_empty() { "-".to_owned() } else { params.join(",") };
        writeln!(out, "{name:<14} {params:<32} {}", s.source)?;
    }
    Ok(())
}

fn generate(cfg: RunConfig, stdout: &mut dyn Write) -> Result<i32, Usage> {
    let s = cfg.build_surface()?;
    let output = cfg.output.clone().ok_or_else(|| Usage("generate needs --out".into()))?;
    let path = output.path.clone().ok_or_else(|| Usage("generate needs --out".into()))?;
    let mut m = build_mesh(&s, &cfg.grid).map_err(|e| Usage(e.to_string()))?;
    if output.normals {
        m = compute_normals(&m);
    }
    write_mesh(&m, output.format, &mut create(&path)?).map_err(|e| Usage(e.to_string()))?;
    let section = mesh_section(&m);
    let t = &section.topology;
    writeln!(
        stdout,
        "{}: V={} E={} F={} chi={} boundary_edges={} watertight={} self_intersecting_pairs={}",
        path.display(),
        t.vertices,
        t.edges,
        t.faces,
        t.euler_characteristic,
        t.boundary_edge_count,
        t.watertight,
        section.self_intersections.intersecting_pairs
    )
    .map_err(|e| Usage(e.to_string()))?;
    if let Some(rp) = &output.report {
        let mut r = Report::new(cfg.clone(), s.descriptor());
        r.mesh = Some(section);
        write_report(&r, &mut create(rp)?).map_err(|e| Usage(e.to_string()))?;
    }
    Ok(EXIT_OK)
}

/// Runs the verifier and builds the full report. Mesh evidence uses the
/// welded `grid` of the config; it is reported but does not decide the exit
/// code.
pub fn verify_report(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let s = cfg.build_surface()?;
    let vc = cfg.verify.apply();
    let verification = full_verify(&s, &vc);
    let grid = GridConfig { weld: true, ..cfg.grid };
    let mut r = Report::new(cfg.clone(), s.descriptor());
    r.verify_config = Some(vc);
    r.verification = Some(verification);
    r.mesh = build_mesh(&s, &grid).ok().map(|m| mesh_section(&m));
    Ok(r)
}

fn verify(cfg: RunConfig, report: Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, Usage> {
    let r = verify_report(&cfg)?;
    let v = r.verification.as_ref().expect("verify always fills the verification");
    let io = |e: std::io::Error| Usage(e.to_string());
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    writeln!(stdout, "{}", v.surface_name).map_err(io)?;
    if let Some(g) = &v.regularity {
        writeln!(stdout, "  regularity      {}  min det {:e} at {:?}", mark(g.pass), g.min_det, g.argmin)
            .map_err(io)?;
    }
    if let Some(g) = &v.gluing {
        let note = if g.enforced { "" } else { " (informational)" };
        writeln!(stdout, "  gluing          {}  residual {:e}{note}", mark(g.pass), g.max_residual).map_err(io)?;
    }
    if let Some(c) = &v.closure {
        let note = if c.enforced { "" } else { " (informational)" };
        writeln!(stdout, "  closure         {}{note}", mark(c.pass)).map_err(io)?;
    }
    if let Some(t) = &v.seam_tangency {
        writeln!(
            stdout,
            "  seam tangency   {}  max angle {:e} rad at {:?}",
            mark(t.pass),
            t.max_angle_radians,
            t.location
        )
        .map_err(io)?;
    }
    for e in &v.errors {
        writeln!(stdout, "  error: {e}").map_err(io)?;
    }
    writeln!(stdout, "overall {}", mark(v.pass)).map_err(io)?;
    if let Some(path) = report {
        write_report(&r, &mut create(&path)?).map_err(|e| Usage(e.to_string()))?;
    }
    Ok(if v.pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<i32, Usage> {
    match cli.command {
        Command::List => {
            list(stdout).map_err(|e| Usage(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Eval { surface, u, v } => {
            let s = load_config(&surface)?.build_surface()?;
            let p = s.eval(u, v).map_err(|e| Usage(e.to_string()))?;
            writeln!(stdout, "{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z)).map_err(|e| Usage(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Generate { surface, nu, nv, margin, weld, normals, out, format, report } => {
            let mut cfg = load_config(&surface)?;
            cfg.grid.nu = nu.unwrap_or(cfg.grid.nu);
            cfg.grid.nv = nv.unwrap_or(cfg.grid.nv);
            cfg.grid.margin = margin.unwrap_or(cfg.grid.margin);
            cfg.grid.weld |= weld;
            let mut o = cfg.output.take().unwrap_or(OutputConfig {
                path: None,
                format: Format::Obj,
                normals: false,
                report: None,
            });
            if let Some(p) = out {
                if format.is_none() {
                    o.format = format_from_path(&p).unwrap_or(o.format);
                }
                o.path = Some(p);
            }
            o.format = format.unwrap_or(o.format);
            o.normals |= normals;
            o.report = report.or(o.report);
            cfg.output = Some(o);
            generate(cfg, stdout)
        }
        Command::Verify { surface, report } => {
            let cfg = load_config(&surface)?;
            let report = report.or_else(|| cfg.output.as_ref().and_then(|o| o.report.clone()));
            verify(cfg, report, stdout)
        }
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "klein: {msg}");
            EXIT_USAGE
        }
    }
}
