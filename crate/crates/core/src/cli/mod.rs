//! `belab` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a numerical check fails,
//! 2 for usage or input errors.

pub mod config;
pub mod oracles;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::{fit_order, order_from_differences, richardson3};
use crate::eig3d::{beta_duality_check, maxwell_trace_report, stokes_trace_report, TraceReport};
use crate::error::{Error, Result};
use crate::fem::euler_characteristic;
use crate::fem::problems::LaplaceProblem;
use crate::fields::{make_polynomial_weight, make_spheromak, make_trig_beltrami, FieldSampler, Poly, PolynomialField};
use crate::geometry::edges::EdgeTopology;
use crate::geometry::star::star_problem;
use crate::geometry::{generate_mesh, read_mesh, write_mesh, DomainSpec, SimplicialMesh, Vec3, DEFAULT_STAR_TOL};
use crate::identity::{check_curl_cross_pointwise, check_green_curl, check_lagrange_pointwise, check_weighted, IdentityReport};
use crate::linalg::roots::spheromak_eigenvalue;
use crate::linalg::{lp_max_margin, EigenResult};
use crate::probe::{beltrami_defect_min_with, P1VectorSpace, ProbeBc, ProbeOptions};
use crate::{eig2d, eig3d};

pub use oracles::Problem;
pub use report::{MeshDescriptor, ResultEntry, RunReport};

/// Solver residual and mixed-constraint tolerance for eigenpairs.
pub const EIG_CHECK_TOL: f64 = 1e-8;
/// Floor for the nonvanishing boundary traces of first eigenfields.
pub const TRACE_FLOOR: f64 = 0.05;
/// Relative identity residual treated as exact; no order is fitted below it.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(name = "belab", version, about = "Div–curl identity, eigenvalue and Beltrami probe laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a mesh and print its entity counts.
    Mesh(MeshArgs),
    /// Find a star center and margin from the facet half-spaces.
    Star(StarArgs),
    /// Evaluate an integral or pointwise identity.
    Identity(IdentityArgs),
    /// Smallest eigenvalues of a Laplace, Stokes or Maxwell pencil.
    Eig(EigArgs),
    /// Minimize the Beltrami defect under a boundary condition.
    Probe(ProbeArgs),
    /// Refinement study with a fitted convergence order.
    Converge(ConvergeArgs),
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed {s:?}: {e}"))
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Read `key = value` flags from a file; the command line wins.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "0x5EED", value_parser = parse_seed)]
    pub seed: u64,
    /// Worker cap; 1 guarantees bit-reproducible runs.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the JSON run report here (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MeshSource {
    /// ASCII mesh file.
    #[arg(long, value_name = "PATH")]
    pub mesh: Option<PathBuf>,
    /// Built-in domain: square, disk, lshape, annulus, cube, ball, shell.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
}

fn domain_spec(domain: &str, r0: Option<f64>, r1: Option<f64>) -> Result<DomainSpec> {
    let mut spec: DomainSpec = domain.parse()?;
    match &mut spec {
        DomainSpec::Annulus { r0: a, r1: b } | DomainSpec::Shell { r0: a, r1: b } => {
            *a = r0.unwrap_or(*a);
            *b = r1.unwrap_or(*b);
        }
        _ if r0.is_some() || r1.is_some() => {
            return Err(Error::InvalidInput(format!("--r0/--r1 only apply to annulus and shell, not {spec}")));
        }
        _ => {}
    }
    spec.validate()?;
    Ok(spec)
}

impl MeshSource {
    pub fn load(&self) -> Result<SimplicialMesh> {
        match (&self.mesh, &self.domain) {
            (Some(_), Some(_)) => Err(Error::InvalidInput("give either --mesh or --domain, not both".into())),
            (Some(p), None) => read_mesh(p),
            (None, Some(d)) => generate_mesh(&domain_spec(d, self.r0, self.r1)?, self.n),
            (None, None) => Err(Error::InvalidInput("a mesh is required: --mesh PATH or --domain NAME".into())),
        }
    }
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct MeshArgs {
    #[command(flatten)]
    pub source: MeshSource,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct StarArgs {
    #[command(flatten)]
    pub source: MeshSource,
    #[arg(long, default_value_t = DEFAULT_STAR_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Green,
    Weighted,
    Lagrange,
    Curlcross,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct IdentityArgs {
    #[arg(long, value_enum)]
    pub check: Check,
    /// `trig:<λ>`, `poly:<u1>,<u2>,<u3>` or `spheromak[:<λ>]`.
    #[arg(long, default_value = "trig:1.0")]
    pub field: String,
    /// Second field of the curl-of-cross-product check.
    #[arg(long, default_value = "poly:x1^2,x2*x3,x1-x3")]
    pub field_b: String,
    /// Polynomial weight of the Green check (default `|x|²/2`).
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Random samples for the pointwise checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Override the per-check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub source: MeshSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct EigArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    #[command(flatten)]
    pub source: MeshSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ProbeArgs {
    /// `tangent` (u × ν = 0) or `normal` (u·ν = 0).
    #[arg(long)]
    pub bc: ProbeBc,
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    #[arg(long, default_value_t = crate::probe::DEFAULT_RESTARTS)]
    pub restarts: usize,
    /// Start restart 0 from an interpolated field (`spheromak`).
    #[arg(long)]
    pub init: Option<String>,
    /// Trajectory of the best restart as `iter,J`.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Full probe result (field coefficients included) as JSON.
    #[arg(long, value_name = "PATH")]
    pub result: Option<PathBuf>,
    #[command(flatten)]
    pub source: MeshSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identity,
    Eig,
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub domain: String,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Coarsest n; levels double it.
    #[arg(long)]
    pub base_n: Option<usize>,
    #[arg(long, value_enum, default_value = "dirichlet")]
    pub problem: Problem,
    #[arg(long, default_value = "trig:1.0")]
    pub field: String,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Declared minimum observed order (default 2 for identities, 1.5 for eigenvalues).
    #[arg(long)]
    pub min_order: Option<f64>,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

/// Parses and runs one command line; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let echo = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, echo) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Numerical breakdowns map to 1, everything else (bad input) to 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularPivot { .. } | Error::NoSignChange { .. } | Error::UnboundedLp => 1,
        _ => 2,
    }
}

fn execute(cli: Cli, echo: String) -> Result<bool> {
    let start = Instant::now();
    let mut report = RunReport::new(echo);
    let common = match &cli.command {
        Command::Mesh(a) => {
            cmd_mesh(a, &mut report)?;
            &a.common
        }
        Command::Star(a) => {
            cmd_star(a, &mut report)?;
            &a.common
        }
        Command::Identity(a) => {
            cmd_identity(a, &mut report)?;
            &a.common
        }
        Command::Eig(a) => {
            cmd_eig(a, &mut report)?;
            &a.common
        }
        Command::Probe(a) => {
            cmd_probe(a, &mut report)?;
            &a.common
        }
        Command::Converge(a) => {
            cmd_converge(a, &mut report)?;
            &a.common
        }
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    for r in &report.results {
        let status = match (r.tolerance, r.pass) {
            (None, _) => "info",
            (Some(_), true) => "PASS",
            (Some(_), false) => "FAIL",
        };
        let oracle = r.oracle.map(|o| format!("  oracle {o:.8}")).unwrap_or_default();
        let tol = r.tolerance.map(|t| format!("  tol {t:e}")).unwrap_or_default();
        println!("{status:>4}  {:<34} {:.10e}{oracle}{tol}", r.name, r.value);
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    if let Some(p) = &common.json {
        let text = report.to_json()?;
        if p.as_os_str() == "-" {
            println!("{text}");
        } else {
            std::fs::write(p, text)?;
        }
    }
    Ok(report.all_pass())
}

fn cmd_mesh(a: &MeshArgs, report: &mut RunReport) -> Result<()> {
    if a.source.domain.is_none() {
        return Err(Error::InvalidInput("mesh needs --domain".into()));
    }
    let mesh = a.source.load()?;
    let text = crate::geometry::mesh_to_string(&mesh);
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        println!("{line}");
    }
    println!(
        "{} vertices, {} cells, {} boundary facets (dim {})",
        mesh.n_vertices(),
        mesh.n_cells(),
        mesh.n_boundary_facets(),
        mesh.dim
    );
    if let Some(out) = &a.out {
        write_mesh(&mesh, out)?;
        println!("wrote {}", out.display());
    }
    report.push(ResultEntry::info("volume", mesh.total_volume()));
    report.push(ResultEntry::at_most("normal_balance", mesh.normal_balance().norm(), 1e-10));
    report.mesh = Some(MeshDescriptor::of(&mesh));
    Ok(())
}

fn cmd_star(a: &StarArgs, report: &mut RunReport) -> Result<()> {
    let mesh = a.source.load()?;
    report.mesh = Some(MeshDescriptor::of(&mesh));
    let (x, t) = lp_max_margin(&star_problem(&mesh), f64::INFINITY)?.expect("infinite tolerance always yields a point");
    if t >= -a.tol {
        let c: Vec<String> = x.iter().map(|v| format!("{v:.12}")).collect();
        println!("center ({}) margin {t:.12e}", c.join(", "));
        for (k, v) in x.iter().enumerate() {
            report.push(ResultEntry::info(format!("center[{k}]"), *v));
        }
    } else {
        println!("not star-shaped at facet resolution");
    }
    report.push(ResultEntry::at_least("margin", t, -a.tol));
    Ok(())
}

pub fn parse_field(spec: &str, dim: usize) -> Result<Box<dyn FieldSampler>> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    let num = |default: f64| -> Result<f64> {
        if arg.is_empty() {
            Ok(default)
        } else {
            arg.trim().parse().map_err(|_| Error::InvalidInput(format!("bad number in field {spec:?}")))
        }
    };
    match kind {
        "trig" | "spheromak" if dim != 3 => Err(Error::InvalidInput(format!("{kind} field needs a 3D mesh"))),
        "trig" => Ok(Box::new(make_trig_beltrami(num(1.0)?)?)),
        "spheromak" => Ok(Box::new(make_spheromak(num(spheromak_eigenvalue())?)?)),
        "poly" => Ok(Box::new(PolynomialField::parse(dim, arg)?)),
        _ => Err(Error::InvalidInput(format!("unknown field {spec:?} (trig:<λ>, poly:<spec>, spheromak)"))),
    }
}

fn identity_results(r: &IdentityReport, tol: f64, report: &mut RunReport) {
    for t in &r.terms {
        report.push(ResultEntry::info(format!("term.{}", t.name), t.value));
    }
    report.push(ResultEntry::info("lhs", r.lhs_total));
    for (i, v) in r.rhs_totals.iter().enumerate() {
        report.push(ResultEntry::info(format!("rhs[{i}]"), *v));
    }
    report.push(ResultEntry::at_most("rel_residual", r.rel_residual, tol));
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn cmd_identity(a: &IdentityArgs, report: &mut RunReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    match a.check {
        Check::Green | Check::Weighted => {
            let mesh = a.source.load()?;
            report.mesh = Some(MeshDescriptor::of(&mesh));
            let field = parse_field(&a.field, mesh.dim)?;
            let exact = a.field.starts_with("poly");
            let r = if a.check == Check::Green {
                let phi = match &a.phi {
                    Some(p) => Poly::parse(p)?,
                    None if mesh.dim == 2 => Poly::parse("0.5*x^2 + 0.5*y^2")?,
                    None => Poly::parse("0.5*x^2 + 0.5*y^2 + 0.5*z^2")?,
                };
                let phi = make_polynomial_weight(mesh.dim, phi)?;
                check_green_curl(field.as_ref(), &phi, &mesh, a.order)?
            } else {
                check_weighted(field.as_ref(), a.alpha, &mesh, a.order)?
            };
            let widen = if r.derivative_source == "analytic" { 1.0 } else { 1e3 };
            let base = match (a.check, exact) {
                (Check::Green, true) => 1e-10,
                (Check::Green, false) => 1e-6,
                _ => 1e-4,
            };
            identity_results(&r, a.tol.unwrap_or(base * widen), report);
            if let Some(alt) = r.alt_rel_residual {
                report.push(ResultEntry::at_most("alt_rel_residual", alt, 1e-12));
            }
            report.push(ResultEntry::info("order", r.order as f64));
        }
        Check::Lagrange => {
            let n = a.samples.unwrap_or(1_000_000);
            let mut worst: f64 = 0.0;
            for _ in 0..n {
                let u = random_unit(&mut rng) * rng.random_range(0.1..10.0);
                let x = random_unit(&mut rng) * rng.random_range(0.1..10.0);
                let nu = random_unit(&mut rng);
                let scale = u.norm_squared() * x.norm();
                worst = worst.max(check_lagrange_pointwise(&u, &x, &nu) / scale);
            }
            report.push(ResultEntry::info("samples", n as f64));
            report.push(ResultEntry::at_most("max_rel_residual", worst, a.tol.unwrap_or(1e-13)));
        }
        Check::Curlcross => {
            let fa = parse_field(&a.field, 3)?;
            let fb = parse_field(&a.field_b, 3)?;
            let n = a.samples.unwrap_or(100);
            let mut worst: f64 = 0.0;
            for _ in 0..n {
                let x = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                worst = worst.max(check_curl_cross_pointwise(fa.as_ref(), fb.as_ref(), &x, 1e-4));
            }
            report.push(ResultEntry::info("samples", n as f64));
            report.push(ResultEntry::at_most("max_abs_residual", worst, a.tol.unwrap_or(1e-6)));
        }
    }
    Ok(())
}

fn solve_problem(problem: Problem, mesh: &SimplicialMesh, k: usize) -> Result<EigenResult> {
    match (problem, mesh.dim) {
        (Problem::Dirichlet, 2) => eig2d::laplace_dirichlet_eigs(mesh, k),
        (Problem::Neumann, 2) => eig2d::laplace_neumann_eigs(mesh, k),
        (Problem::Dirichlet, _) => LaplaceProblem::new(mesh, true)?.solve(k),
        (Problem::Neumann, _) => LaplaceProblem::new(mesh, false)?.solve(k),
        (Problem::Stokes, 2) => eig2d::stokes_eigs_2d(mesh, k),
        (Problem::Maxwell, 2) => eig2d::maxwell_eigs_2d(mesh, k),
        (Problem::Stokes, _) => eig3d::stokes_eigs_3d(mesh, k),
        (Problem::Maxwell, _) => eig3d::maxwell_eigs_3d(mesh, k),
    }
}

fn trace_results(t: &TraceReport, problem: Problem, report: &mut RunReport) {
    let p = "trace";
    match problem {
        Problem::Maxwell => {
            report.push(ResultEntry::at_most(format!("{p}.u_cross_nu"), t.norm_u_cross_nu, EIG_CHECK_TOL));
            report.push(ResultEntry::at_least(format!("{p}.u_dot_nu"), t.norm_u_dot_nu, TRACE_FLOOR));
            report.push(ResultEntry::at_least(format!("{p}.curlu_cross_nu"), t.norm_curlu_cross_nu, TRACE_FLOOR));
            report.push(ResultEntry::info(format!("{p}.curlu_dot_nu"), t.norm_curlu_dot_nu));
        }
        _ => {
            report.push(ResultEntry::at_most(format!("{p}.u_dot_nu"), t.norm_u_dot_nu, EIG_CHECK_TOL));
            report.push(ResultEntry::at_most(format!("{p}.u_cross_nu"), t.norm_u_cross_nu, EIG_CHECK_TOL));
            report.push(ResultEntry::at_least(format!("{p}.curlu_cross_nu"), t.norm_curlu_cross_nu, TRACE_FLOOR));
            report.push(ResultEntry::info(format!("{p}.curlu_dot_nu"), t.norm_curlu_dot_nu));
        }
    }
}

fn cmd_eig(a: &EigArgs, report: &mut RunReport) -> Result<()> {
    if a.k == 0 {
        return Err(Error::InvalidInput("--k must be at least 1".into()));
    }
    let mesh = a.source.load()?;
    report.mesh = Some(MeshDescriptor::of(&mesh));
    let euler = euler_characteristic(&mesh, &EdgeTopology::new(&mesh));
    report.notes = oracles::domain_notes(&mesh, euler);
    let r = solve_problem(a.problem, &mesh, a.k)?;
    for (i, v) in r.eigenvalues.iter().enumerate() {
        report.push(ResultEntry::info(format!("eig[{i}]"), *v));
    }
    let worst = r.solver_stats.residual_norms.iter().fold(0.0f64, |m, v| m.max(*v));
    report.push(ResultEntry::at_most("max_pair_residual", worst, EIG_CHECK_TOL));
    if !r.constraint_residuals.is_empty() {
        let c = r.constraint_residuals.iter().fold(0.0f64, |m, v| m.max(*v));
        report.push(ResultEntry::at_most("max_constraint_residual", c, EIG_CHECK_TOL));
    }
    if a.problem == Problem::Neumann && r.len() >= 2 {
        report.push(ResultEntry::at_most("constant_mode", r.eigenvalues[0].abs(), EIG_CHECK_TOL * r.eigenvalues[1]));
    }
    if let Some((spec, _)) = oracles::domain_of(&mesh) {
        if let Some(o) = oracles::eigen_oracle(a.problem, &spec) {
            if let Some(v) = r.eigenvalues.get(o.index) {
                report.push(ResultEntry::against(o.label, *v, o.value, o.rel_tol, o.provenance));
            }
        }
    }
    if mesh.dim == 3 && matches!(a.problem, Problem::Maxwell | Problem::Stokes) {
        let t = if a.problem == Problem::Maxwell { maxwell_trace_report(&r, 0, &mesh)? } else { stokes_trace_report(&r, 0, &mesh)? };
        trace_results(&t, a.problem, report);
        if a.problem == Problem::Maxwell {
            let b = beta_duality_check(&r, 0, &mesh)?;
            report.push(ResultEntry::info("beta_duality.rayleigh", b.rayleigh));
            report.push(ResultEntry::info("beta_duality.rel_error", b.rel_error));
            report.push(ResultEntry::at_most("beta_duality.v_dot_nu", b.v_dot_nu_rel, EIG_CHECK_TOL));
        }
    }
    Ok(())
}

fn cmd_probe(a: &ProbeArgs, report: &mut RunReport) -> Result<()> {
    let mesh = a.source.load()?;
    report.mesh = Some(MeshDescriptor::of(&mesh));
    let init = match a.init.as_deref() {
        None => None,
        Some(spec) => {
            let f = parse_field(spec, mesh.dim)?;
            Some(mesh.vertices.iter().map(|p| f.value(p)).collect())
        }
    };
    let opts = ProbeOptions { iters: a.iters, seed: a.common.seed, restarts: a.restarts, threads: a.common.threads, init };
    let r = beltrami_defect_min_with(&mesh, a.bc, &opts)?;
    let space = P1VectorSpace::new(&mesh, a.bc)?;
    let nodal = r.nodal();
    let rise = r.trajectory.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    report.push(ResultEntry::info("j_initial", r.trajectory[0]));
    report.push(ResultEntry::info("j_final", r.j_final));
    report.push(ResultEntry::info("iterations", (r.trajectory.len() - 1) as f64));
    report.push(ResultEntry::info("stalled", if r.stalled { 1.0 } else { 0.0 }));
    report.push(ResultEntry::info("dofs", r.n_dofs as f64));
    report.push(ResultEntry::at_most("max_increase", rise, 0.0));
    report.push(ResultEntry::at_most("bc_violation", space.bc_violation(&nodal), 1e-12));
    report.push(ResultEntry::at_most("norm_error", (space.l2_norm(&space.project(&nodal)) - 1.0).abs(), 1e-10));
    if let Some(p) = &a.csv {
        r.write_csv(std::io::BufWriter::new(std::fs::File::create(p)?))?;
    }
    if let Some(p) = &a.result {
        std::fs::write(p, serde_json::to_string(&r)?)?;
    }
    Ok(())
}

fn print_table(rows: &[(f64, f64, Option<f64>)]) {
    println!("{:>12} {:>22} {:>10}", "h", "value", "order");
    for (h, v, p) in rows {
        let p = p.map(|p| format!("{p:.3}")).unwrap_or_else(|| "-".into());
        println!("{h:>12.6} {v:>22.14e} {p:>10}");
    }
}

fn cmd_converge(a: &ConvergeArgs, report: &mut RunReport) -> Result<()> {
    if a.levels < 2 {
        return Err(Error::InvalidInput("≥ 2 levels required".into()));
    }
    let spec = domain_spec(&a.domain, a.r0, a.r1)?;
    let base = a.base_n.unwrap_or(match (a.suite, spec.dim()) {
        (Suite::Eig, 2) => 16,
        _ => 4,
    });
    let ns: Vec<usize> = (0..a.levels).map(|i| base << i).collect();
    let hs: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let mut vals = Vec::with_capacity(ns.len());
    let mut oracle = None;
    for &n in &ns {
        let mesh = generate_mesh(&spec, n)?;
        let v = match a.suite {
            Suite::Identity => {
                let field = parse_field(&a.field, mesh.dim)?;
                if spec.origin_excluded() {
                    check_weighted(field.as_ref(), a.alpha, &mesh, a.order)?.rel_residual
                } else {
                    let phi = if mesh.dim == 2 { "0.5*x^2 + 0.5*y^2" } else { "0.5*x^2 + 0.5*y^2 + 0.5*z^2" };
                    let phi = make_polynomial_weight(mesh.dim, Poly::parse(phi)?)?;
                    check_green_curl(field.as_ref(), &phi, &mesh, a.order)?.rel_residual
                }
            }
            Suite::Eig => {
                let o = oracles::eigen_oracle(a.problem, &spec);
                let idx = o.as_ref().map_or(if a.problem == Problem::Neumann { 1 } else { 0 }, |o| o.index);
                oracle = o;
                let r = solve_problem(a.problem, &mesh, idx + 1)?;
                r.eigenvalues[idx]
            }
        };
        vals.push(v);
    }
    let errs: Option<Vec<f64>> = match (a.suite, &oracle) {
        (Suite::Identity, _) => Some(vals.clone()),
        (Suite::Eig, Some(o)) => Some(vals.iter().map(|v| (v - o.value).abs()).collect()),
        (Suite::Eig, None) => None,
    };
    let mut rows: Vec<(f64, f64, Option<f64>)> = hs.iter().zip(&vals).map(|(h, v)| (*h, *v, None)).collect();
    let exact = a.suite == Suite::Identity && vals.iter().all(|v| *v <= ROUNDOFF_FLOOR);
    if let Some(e) = errs.as_ref().filter(|_| !exact) {
        for i in 1..rows.len() {
            rows[i].2 = fit_order(&hs[i - 1..=i], &e[i - 1..=i]).ok();
        }
    }
    print_table(&rows);
    for (n, v) in ns.iter().zip(&vals) {
        report.push(ResultEntry::info(format!("value[n={n}]"), *v));
    }
    if exact {
        // Quadrature is already exact on every level; there is no error left to fit.
        let worst = vals.iter().fold(0.0f64, |m, v| m.max(*v));
        report.push(ResultEntry::at_most("max_rel_residual", worst, ROUNDOFF_FLOOR));
        report.notes.push("residual at roundoff on every level; observed order not measurable".into());
        return Ok(());
    }
    let order = match &errs {
        Some(e) => fit_order(&hs, e)?,
        None => order_from_differences(&hs, &vals)?,
    };
    let min = a.min_order.unwrap_or(match a.suite {
        Suite::Identity => 2.0,
        Suite::Eig => 1.5,
    });
    report.push(ResultEntry::at_least("observed_order", order, min));
    if a.suite == Suite::Eig && ns.len() >= 3 {
        let k = ns.len();
        let (ext, p) = richardson3([hs[k - 3], hs[k - 2], hs[k - 1]], [vals[k - 3], vals[k - 2], vals[k - 1]])?;
        report.push(ResultEntry::info("richardson_order", p));
        match &oracle {
            Some(o) => report.push(ResultEntry::against("extrapolated", ext, o.value, 3e-3, o.provenance)),
            None => report.push(ResultEntry::info("extrapolated", ext)),
        }
    }
    Ok(())
}

/// Writes `text` to `path`, or to stdout for `-`.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        std::io::stdout().write_all(text.as_bytes())?;
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_accept_hex_and_decimal() {
        assert_eq!(parse_seed("0x5EED").unwrap(), crate::linalg::DEFAULT_SEED);
        assert_eq!(parse_seed("7").unwrap(), 7);
        assert!(parse_seed("seven").is_err());
    }

    #[test]
    fn radii_only_for_hollow_domains() {
        assert!(domain_spec("cube", Some(1.0), None).is_err());
        let e = domain_spec("annulus", Some(2.0), Some(1.0)).unwrap_err();
        assert!(e.to_string().contains("r0 < r1 required"));
    }
}
