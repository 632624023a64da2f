//! Trajectory engine: the velocity-field abstraction, fixed-step RK4
//! integration with an emergency step-halving guard, seed generation,
//! rejection sampling from densities, and the equivariance test harness.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64Mcg;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};

/// An evaluatable guidance field `(position, t) -> velocity`.
///
/// Evaluation must be deterministic and side-effect free; errors communicate
/// nodes, domain boundaries and other singular configurations to the
/// integrator.
pub trait VelocityField: Sync {
    fn velocity(&self, position: Vec2, t: f64) -> Result<Vec2>;
}

/// A field that also exposes the complex amplitude it derives from.
pub trait QuantumField: VelocityField {
    fn psi(&self, position: Vec2, t: f64) -> Result<Complex64>;
}

impl<F: VelocityField + ?Sized> VelocityField for &F {
    fn velocity(&self, position: Vec2, t: f64) -> Result<Vec2> {
        (**self).velocity(position, t)
    }
}

impl VelocityField for Box<dyn QuantumField + Send + Sync> {
    fn velocity(&self, position: Vec2, t: f64) -> Result<Vec2> {
        (**self).velocity(position, t)
    }
}

/// Why a trajectory stopped where it did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryStatus {
    /// Reached `t_end`.
    Completed,
    /// A stage evaluation hit a node of the wave function.
    NodeEncounter,
    /// A stage evaluation left the field's domain (barrier, t-range, tip).
    LeftDomain,
    /// Any other stage failure (non-convergence, invalid argument).
    StepFailure,
}

impl TrajectoryStatus {
    pub fn name(self) -> &'static str {
        match self {
            TrajectoryStatus::Completed => "completed",
            TrajectoryStatus::NodeEncounter => "node-encounter",
            TrajectoryStatus::LeftDomain => "left-domain",
            TrajectoryStatus::StepFailure => "step-failure",
        }
    }

    fn from_error(e: &Error) -> Self {
        match e {
            Error::NodeSingularity { .. } => TrajectoryStatus::NodeEncounter,
            Error::Domain(_) | Error::SingularPoint(_) | Error::OutOfRange(_) => {
                TrajectoryStatus::LeftDomain
            }
            _ => TrajectoryStatus::StepFailure,
        }
    }
}

impl std::fmt::Display for TrajectoryStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Time-stamped position samples plus the termination status. Samples sit on
/// the grid `t_init + k h` (the last step may be partial); early-terminated
/// trajectories are kept truncated rather than discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, Vec2)>,
    pub status: TrajectoryStatus,
}

impl Trajectory {
    pub fn last_position(&self) -> Option<Vec2> {
        self.samples.last().map(|&(_, p)| p)
    }

    pub fn path_length(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).norm())
            .sum()
    }
}

/// A failing RK4 stage: which of the four evaluations raised, and what.
#[derive(Debug, Clone)]
pub struct StepError {
    pub stage: u8,
    pub source: Error,
}

/// One classical RK4 update of `x' = v(x, t)` over `[t, t + h]`.
pub fn rk4_step<F: VelocityField + ?Sized>(
    position: Vec2,
    t: f64,
    h: f64,
    field: &F,
) -> std::result::Result<Vec2, StepError> {
    let stage = |i: u8, p: Vec2, tt: f64| {
        field
            .velocity(p, tt)
            .map_err(|source| StepError { stage: i, source })
    };
    let k1 = stage(1, position, t)?;
    let k2 = stage(2, position + k1 * (0.5 * h), t + 0.5 * h)?;
    let k3 = stage(3, position + k2 * (0.5 * h), t + 0.5 * h)?;
    let k4 = stage(4, position + k3 * h, t + h)?;
    Ok(position + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0))
}

/// Step-halving guard: how many emergency halvings a single macro step may
/// spend before the trajectory is declared terminated.
#[derive(Debug, Clone, Copy)]
pub struct StepGuard {
    pub max_halvings: u32,
}

impl Default for StepGuard {
    fn default() -> Self {
        Self { max_halvings: 20 }
    }
}

fn advance<F: VelocityField + ?Sized>(
    field: &F,
    position: Vec2,
    t: f64,
    h: f64,
    budget: &mut u32,
) -> std::result::Result<Vec2, StepError> {
    match rk4_step(position, t, h, field) {
        Ok(p) => Ok(p),
        Err(e) => {
            if *budget == 0 {
                return Err(e);
            }
            *budget -= 1;
            let mid = advance(field, position, t, 0.5 * h, budget)?;
            advance(field, mid, t + 0.5 * h, 0.5 * h, budget)
        }
    }
}

/// Integrate a trajectory from `seed` over `[t_init, t_end]` with step `h`.
///
/// Samples are recorded at every macro step; when a stage fails, the guard
/// retries the step with halved sub-steps (up to `guard.max_halvings` times)
/// before the failure is recorded in the status.
pub fn integrate<F: VelocityField + ?Sized>(
    seed: Vec2,
    t_init: f64,
    t_end: f64,
    h: f64,
    field: &F,
    guard: StepGuard,
) -> Result<Trajectory> {
    if !(t_init > 0.0) || !(t_end > t_init) {
        return Err(Error::InvalidArgument(format!(
            "integration needs t_end > t_init > 0 (got [{t_init}, {t_end}])"
        )));
    }
    if !(h > 0.0) || h > (t_end - t_init) * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "step h = {h} must be positive and at most t_end - t_init = {}",
            t_end - t_init
        )));
    }
    let mut samples = vec![(t_init, seed)];
    let mut position = seed;
    let mut status = TrajectoryStatus::Completed;
    let mut k = 0u64;
    loop {
        let t = t_init + k as f64 * h;
        if t >= t_end - 1e-12 * h {
            break;
        }
        let t_next = (t_init + (k + 1) as f64 * h).min(t_end);
        let mut budget = guard.max_halvings;
        match advance(field, position, t, t_next - t, &mut budget) {
            Ok(p) => {
                position = p;
                samples.push((t_next, p));
                k += 1;
            }
            Err(e) => {
                status = TrajectoryStatus::from_error(&e.source);
                break;
            }
        }
    }
    Ok(Trajectory { samples, status })
}

/// Ring of initial positions around a packet centre, released at `t_init`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCircle {
    pub center: Vec2,
    pub radius: f64,
    pub count: usize,
    pub t_init: f64,
}

impl InitialCircle {
    pub fn new(center: Vec2, radius: f64, count: usize, t_init: f64) -> Result<Self> {
        if !(radius > 0.0) || count < 1 || !(t_init > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "initial circle needs radius > 0, count >= 1, t_init > 0 \
                 (radius = {radius}, count = {count}, t_init = {t_init})"
            )));
        }
        Ok(Self {
            center,
            radius,
            count,
            t_init,
        })
    }
}

/// Equally spaced seeds on the circle, the first at angle 0.
pub fn circle_seeds(circle: &InitialCircle) -> Vec<Vec2> {
    (0..circle.count)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / circle.count as f64;
            circle.center + Vec2::new(angle.cos(), angle.sin()) * circle.radius
        })
        .collect()
}

/// Integrate a whole ensemble; members are independent, so they run in
/// parallel, and results are collected in seed order (thread count never
/// changes the output).
pub fn integrate_ensemble<F: VelocityField + ?Sized>(
    seeds: &[Vec2],
    t_init: f64,
    t_end: f64,
    h: f64,
    field: &F,
    guard: StepGuard,
) -> Result<Vec<Trajectory>> {
    seeds
        .par_iter()
        .map(|&seed| integrate(seed, t_init, t_end, h, field, guard))
        .collect()
}

/// An unnormalised probability density restricted to a bounding box.
pub struct DensitySpec<'a> {
    pub pdf: &'a (dyn Fn(Vec2) -> f64 + Sync),
    pub bounds: Rect,
}

/// Rejection-sample `count` points from the density; returns the samples and
/// the acceptance efficiency. The envelope is calibrated on a scan grid and
/// re-calibrated (restarting the stream) in the rare case a proposal exceeds
/// it.
pub fn rejection_sample(
    density: &DensitySpec<'_>,
    count: usize,
    seed: u64,
) -> Result<(Vec<Vec2>, f64)> {
    let b = density.bounds;
    if !(b.area() > 0.0) {
        return Err(Error::Config(format!("degenerate sampling box {b:?}")));
    }
    const SCAN: usize = 96;
    let mut peak = 0.0f64;
    let mut mean = 0.0f64;
    for i in 0..SCAN {
        for j in 0..SCAN {
            let p = Vec2::new(
                b.x_lo + (b.x_hi - b.x_lo) * (i as f64 + 0.5) / SCAN as f64,
                b.y_lo + (b.y_hi - b.y_lo) * (j as f64 + 0.5) / SCAN as f64,
            );
            let v = (density.pdf)(p);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Config(format!(
                    "density returned {v} at {p:?}; sampling needs finite non-negative values"
                )));
            }
            peak = peak.max(v);
            mean += v;
        }
    }
    mean /= (SCAN * SCAN) as f64;
    if mean * b.area() < 1e-6 {
        return Err(Error::Config(format!(
            "density mass {:.3e} in the sampling box is below 1e-6",
            mean * b.area()
        )));
    }
    let mut envelope = peak * 1.8;
    'restart: loop {
        let mut rng = Pcg64Mcg::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut proposals = 0u64;
        let cap = (count as u64).saturating_mul(20_000);
        while out.len() < count {
            proposals += 1;
            if proposals > cap {
                return Err(Error::Config(format!(
                    "rejection sampler exceeded {cap} proposals (acceptance too low)"
                )));
            }
            let p = Vec2::new(
                b.x_lo + (b.x_hi - b.x_lo) * rng.random::<f64>(),
                b.y_lo + (b.y_hi - b.y_lo) * rng.random::<f64>(),
            );
            let v = (density.pdf)(p);
            if v > envelope {
                envelope = v * 1.8;
                continue 'restart;
            }
            if rng.random::<f64>() * envelope < v {
                out.push(p);
            }
        }
        return Ok((out, count as f64 / proposals as f64));
    }
}

/// Two-sample Kolmogorov-Smirnov distance between empirical distributions.
pub fn ks_distance(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n && j < m {
        // advance both CDFs past the smaller value (ties move together)
        let v = a[i].min(b[j]);
        while i < n && a[i] <= v {
            i += 1;
        }
        while j < m && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Result of an equivariance run: per-axis KS distances between the advected
/// ensemble and direct samples of the target density, plus sampler
/// efficiencies and the number of members lost to early termination.
#[derive(Debug, Clone)]
pub struct EquivarianceReport {
    pub ks_x: f64,
    pub ks_y: f64,
    pub efficiency_initial: f64,
    pub efficiency_final: f64,
    pub advected: usize,
    pub dropped: usize,
}

/// Sample `samples` points from `density_initial` at `t_init`, advect them to
/// `t_final` along the field, and compare against direct samples of
/// `density_final` with a per-axis two-sample KS test.
#[allow(clippy::too_many_arguments)]
pub fn equivariance_test<F: VelocityField + ?Sized>(
    field: &F,
    density_initial: &DensitySpec<'_>,
    t_init: f64,
    density_final: &DensitySpec<'_>,
    t_final: f64,
    samples: usize,
    h: f64,
    seed: u64,
) -> Result<EquivarianceReport> {
    if samples < 1000 {
        return Err(Error::Config(format!(
            "equivariance test needs at least 1000 samples (got {samples})"
        )));
    }
    let (initial, efficiency_initial) = rejection_sample(density_initial, samples, seed)?;
    let (direct, efficiency_final) =
        rejection_sample(density_final, samples, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let trajectories =
        integrate_ensemble(&initial, t_init, t_final, h, field, StepGuard::default())?;
    let mut advected = Vec::with_capacity(samples);
    let mut dropped = 0usize;
    for t in &trajectories {
        if t.status == TrajectoryStatus::Completed {
            advected.push(t.last_position().unwrap());
        } else {
            dropped += 1;
        }
    }
    if dropped * 100 > samples {
        return Err(Error::Config(format!(
            "{dropped} of {samples} ensemble members terminated early; \
             the advected ensemble is no longer representative"
        )));
    }
    let ks_x = ks_distance(
        advected.iter().map(|p| p.x).collect(),
        direct.iter().map(|p| p.x).collect(),
    );
    let ks_y = ks_distance(
        advected.iter().map(|p| p.y).collect(),
        direct.iter().map(|p| p.y).collect(),
    );
    Ok(EquivarianceReport {
        ks_x,
        ks_y,
        efficiency_initial,
        efficiency_final,
        advected: advected.len(),
        dropped,
    })
}
