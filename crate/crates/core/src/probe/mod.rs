//! Optimization probes of Beltrami uniqueness: minimize the defect `J` over
//! unit-`L²` P1 vector fields under a nodal boundary condition.
//!
//! The descent direction is the Riemannian gradient of `J` on the sphere
//! `{‖u‖_{L²} = 1}` taken in the `H¹` metric `K + M`, which keeps step
//! sizes mesh-independent; iterates are renormalized after every step and
//! steps are accepted by Armijo backtracking.

pub mod defect;
pub mod space;
pub mod vainshtein;
pub mod verify;

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{SimplicialMesh, Vec3};
use crate::linalg::ldl::LdlFactor;
use crate::linalg::sparse::{axpy, dot};
use crate::linalg::DEFAULT_SEED;

pub use defect::DefectOperator;
pub use space::{nodal_normals, P1VectorSpace, ProbeBc};
pub use vainshtein::{vainshtein_check, vainshtein_check_with, VainshteinRow};
pub use verify::{field_residuals, spheromak_verify, SpheromakReport};

pub const ARMIJO_FACTOR: f64 = 0.5;
pub const ARMIJO_SLOPE: f64 = 1e-4;
pub const MAX_BACKTRACKS: usize = 60;
pub const DEFAULT_RESTARTS: usize = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeResult {
    pub j_final: f64,
    /// Nodal vectors of the best run, flattened `(x, y, z)` per vertex,
    /// normalized to unit `L²` norm.
    pub coefficients: Vec<f64>,
    pub trajectory: Vec<f64>,
    pub bc: ProbeBc,
    pub mesh_id: String,
    pub seed: u64,
    /// Restart that produced the reported minimum.
    pub restart: usize,
    /// Final `J` of every restart.
    pub restart_finals: Vec<f64>,
    /// Set when the line search failed to find descent before `iters`.
    pub stalled: bool,
    pub n_dofs: usize,
}

impl ProbeResult {
    pub fn nodal(&self) -> Vec<Vec3> {
        self.coefficients.chunks(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        write_trajectory_csv(w, &self.trajectory)
    }
}

pub fn write_trajectory_csv<W: Write>(mut w: W, trajectory: &[f64]) -> std::io::Result<()> {
    writeln!(w, "iter,J")?;
    for (i, j) in trajectory.iter().enumerate() {
        writeln!(w, "{i},{j:e}")?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub iters: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Worker cap for concurrent restarts (1 = sequential).
    pub threads: usize,
    /// Nodal starting field for restart 0 (projected onto the constraint).
    pub init: Option<Vec<Vec3>>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self { iters: 2000, seed: DEFAULT_SEED, restarts: DEFAULT_RESTARTS, threads: 1, init: None }
    }
}

struct Run {
    j: f64,
    r: Vec<f64>,
    trajectory: Vec<f64>,
    stalled: bool,
}

struct Problem<'s, 'm> {
    space: &'s P1VectorSpace<'m>,
    op: DefectOperator,
    metric: LdlFactor,
    metric_mat: crate::linalg::SparseMat,
}

impl Problem<'_, '_> {
    fn eval(&self, r: &[f64]) -> f64 {
        self.op.value(&self.space.to_nodal(r))
    }

    fn normalize(&self, r: &mut [f64]) -> Result<()> {
        let n = self.space.l2_norm(r);
        if !(n > 0.0) {
            return Err(Error::InvalidInput("zero probe field".into()));
        }
        r.iter_mut().for_each(|v| *v /= n);
        Ok(())
    }

    fn run(&self, mut r: Vec<f64>, iters: usize) -> Result<Run> {
        self.normalize(&mut r)?;
        let m = &self.space.mass;
        let (mut j, mut grad) = self.op.value_grad(&self.space.to_nodal(&r));
        let mut trajectory = vec![j];
        let mut t = 1.0;
        let mut stalled = false;
        for _ in 0..iters {
            let e = self.space.project(&grad);
            let g = self.metric.solve_refined(&self.metric_mat, &e);
            let z = self.metric.solve_refined(&self.metric_mat, &m.mul_vec(&r));
            let mr = m.mul_vec(&r);
            let coef = dot(&mr, &g) / dot(&mr, &z);
            let mut gt = g;
            axpy(-coef, &z, &mut gt);
            let slope = dot(&e, &gt);
            if !(slope > 1e-15 * j.max(1e-300)) {
                break;
            }
            t *= 2.0;
            let mut accepted = None;
            for _ in 0..MAX_BACKTRACKS {
                let mut trial = r.clone();
                axpy(-t, &gt, &mut trial);
                self.normalize(&mut trial)?;
                let jt = self.eval(&trial);
                if jt <= j - ARMIJO_SLOPE * t * slope {
                    accepted = Some((trial, jt));
                    break;
                }
                t *= ARMIJO_FACTOR;
            }
            let Some((next, _)) = accepted else {
                stalled = true;
                break;
            };
            r = next;
            let (jn, gn) = self.op.value_grad(&self.space.to_nodal(&r));
            j = jn;
            grad = gn;
            trajectory.push(j);
        }
        Ok(Run { j, r, trajectory, stalled })
    }
}

/// Minimizes `J` with the default restart count and one worker.
pub fn beltrami_defect_min(mesh: &SimplicialMesh, bc: ProbeBc, iters: usize, seed: u64) -> Result<ProbeResult> {
    beltrami_defect_min_with(mesh, bc, &ProbeOptions { iters, seed, ..Default::default() })
}

pub fn beltrami_defect_min_with(mesh: &SimplicialMesh, bc: ProbeBc, opts: &ProbeOptions) -> Result<ProbeResult> {
    if opts.restarts == 0 {
        return Err(Error::InvalidInput("at least one restart required".into()));
    }
    let space = P1VectorSpace::new(mesh, bc)?;
    let metric_mat = space.stiffness.add_scaled(&space.mass, 1.0)?;
    let metric = LdlFactor::new(&metric_mat)?;
    let problem = Problem { space: &space, op: DefectOperator::new(mesh), metric, metric_mat };
    let n = space.n_dofs();
    let start = |k: usize| -> Vec<f64> {
        if k == 0 {
            if let Some(init) = &opts.init {
                return space.project(init);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    };

    let threads = opts.threads.max(1).min(opts.restarts);
    let mut runs: Vec<Option<Result<Run>>> = (0..opts.restarts).map(|_| None).collect();
    if threads == 1 {
        for (k, slot) in runs.iter_mut().enumerate() {
            *slot = Some(problem.run(start(k), opts.iters));
        }
    } else {
        std::thread::scope(|s| {
            for (w, chunk) in runs.chunks_mut(opts.restarts.div_ceil(threads)).enumerate() {
                let problem = &problem;
                let start = &start;
                let base = w * opts.restarts.div_ceil(threads);
                s.spawn(move || {
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(problem.run(start(base + i), opts.iters));
                    }
                });
            }
        });
    }
    let runs: Vec<Run> = runs.into_iter().map(|r| r.expect("every restart ran")).collect::<Result<_>>()?;
    let best = (0..runs.len()).min_by(|&a, &b| runs[a].j.total_cmp(&runs[b].j)).unwrap();
    let finals = runs.iter().map(|r| r.j).collect();
    let run = &runs[best];
    let nodal = space.to_nodal(&run.r);
    Ok(ProbeResult {
        j_final: run.j,
        coefficients: nodal.iter().flat_map(|v| [v.x, v.y, v.z]).collect(),
        trajectory: run.trajectory.clone(),
        bc,
        mesh_id: mesh.mesh_id().to_string(),
        seed: opts.seed,
        restart: best,
        restart_finals: finals,
        stalled: run.stalled,
        n_dofs: n,
    })
}
