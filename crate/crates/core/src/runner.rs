//! Scenario execution: field construction, ensemble integration, and the
//! delimited-text trajectory / density files consumed by plotting tools.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::dynamics::{circle_seeds, integrate, QuantumField, StepGuard, Trajectory};
use crate::error::{Error, Result};
use crate::freespace::{FreePacketField, FreePropagatorField, GaussianPacket1D, GaussianPacket2D};
use crate::geometry::Vec2;
use crate::halfline::{HalflinePropagatorField, PlaneWaveField};
use crate::quadrature::{HalflinePacketField, OrderPolicy};
use crate::scenario::{DensityGridSpec, FieldKind, Scenario};
use crate::wall::{WallPacket1D, WallPacket2D, WallPacketField, WallPropagatorField};

/// Built-in scenario files shipped with the crate, one per figure class.
pub fn canned_scenarios() -> &'static [(&'static str, &'static str)] {
    macro_rules! canned {
        ($($name:literal),* $(,)?) => {
            &[$(($name, include_str!(concat!(env!("CARGO_MANIFEST_DIR"),
                "/../../scenarios/", $name, ".scn")))),*]
        };
    }
    canned![
        "fig_wall_N",
        "fig_wall_D",
        "fig_GWP_N_x4",
        "fig_GWP_N_xm4",
        "fig_GWP_D_x4",
        "fig_GWP_D_xm4",
        "fig_GWP_D_initmom",
        "fig_prop_N_x4",
        "fig_prop_N_xm4",
        "fig_prop_D_x4",
        "fig_prop_D_xm4",
        "fig_planewave_N",
        "fig_planewave_N_pi3",
        "fig_planewave_D",
    ]
}

/// Resolve a CLI argument to scenario text: a path to a file, or the name of
/// a canned scenario.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.exists() {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("reading {arg}: {e}")))?;
        return Scenario::parse(&text);
    }
    if let Some((_, text)) = canned_scenarios().iter().find(|(n, _)| *n == arg) {
        return Scenario::parse(text);
    }
    Err(Error::Config(format!(
        "`{arg}` is neither a scenario file nor a canned scenario name \
         (see the `list` subcommand)"
    )))
}

/// Build the scenario's field. The same object serves velocity evaluation
/// and |psi| sampling.
pub fn build_field(s: &Scenario) -> Result<Box<dyn QuantumField + Send + Sync>> {
    let consts = s.constants;
    Ok(match s.kind {
        FieldKind::FreePacket => {
            let p = s.packet.as_ref().unwrap();
            Box::new(FreePacketField {
                packet: GaussianPacket2D::new(p.center, p.momentum, p.sigma)?,
                consts,
            })
        }
        FieldKind::FreePropagator => Box::new(FreePropagatorField {
            source: s.source.unwrap(),
            consts,
        }),
        FieldKind::WallPacket => {
            let p = s.packet.as_ref().unwrap();
            Box::new(WallPacketField {
                packet: WallPacket2D {
                    along: GaussianPacket1D::new(p.center.x, p.momentum.x, p.sigma)?,
                    normal: WallPacket1D::new(p.center.y, p.momentum.y, p.sigma, &consts)?,
                },
                bc: s.bc,
                consts,
            })
        }
        FieldKind::WallPropagator => {
            let source = s.source.unwrap();
            if !(source.y > 0.0) {
                return Err(Error::Config(format!(
                    "wall_propagator source must sit in y > 0 (got y = {})",
                    source.y
                )));
            }
            Box::new(WallPropagatorField { source, consts })
        }
        FieldKind::HalflinePropagator => Box::new(HalflinePropagatorField {
            source: s.source.unwrap(),
            bc: s.bc,
            consts,
        }),
        FieldKind::HalflinePacket => {
            let p = s.packet.as_ref().unwrap();
            let policy = match s.order {
                Some(n) => OrderPolicy::Fixed(n),
                None => OrderPolicy::default(),
            };
            Box::new(HalflinePacketField::new(
                GaussianPacket2D::new(p.center, p.momentum, p.sigma)?,
                s.bc,
                consts,
                policy,
            )?)
        }
        FieldKind::PlaneWave | FieldKind::PlaneWaveDirichlet => {
            let w = s.wave.as_ref().unwrap();
            Box::new(PlaneWaveField {
                k0: w.k0,
                theta0: w.theta0,
                bc: s.bc,
                consts,
            })
        }
    })
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub h_override: Option<f64>,
    pub order_override: Option<usize>,
}

/// Outcome of one `run` invocation.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub trajectories: usize,
    pub status_counts: BTreeMap<&'static str, usize>,
    pub trajectory_path: PathBuf,
    pub density_path: Option<PathBuf>,
    pub wall_seconds: f64,
    pub overlap_warning: Option<f64>,
}

impl RunReport {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} trajectories in {:.2}s ->",
            self.scenario, self.trajectories, self.wall_seconds
        );
        for (status, count) in &self.status_counts {
            let _ = write!(s, " {status}={count}");
        }
        let _ = write!(s, "; wrote {}", self.trajectory_path.display());
        if let Some(d) = &self.density_path {
            let _ = write!(s, ", {}", d.display());
        }
        if let Some(mass) = self.overlap_warning {
            let _ = write!(
                s,
                "; warning: truncation box crosses the barrier \
                 (|psi0|^2 mass {mass:.3e} beyond it)"
            );
        }
        s
    }
}

fn apply_overrides(s: &Scenario, opts: &RunOptions) -> Scenario {
    let mut s = s.clone();
    if let Some(h) = opts.h_override {
        s.h = h;
    }
    if let Some(order) = opts.order_override {
        s.order = Some(order);
    }
    s
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Run the scenario end to end: integrate the seed circle, write the
/// trajectory file, and write the density grid when one is configured.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<RunReport> {
    let s = apply_overrides(scenario, opts);
    let field = build_field(&s)?;
    let overlap_warning = if s.kind == FieldKind::HalflinePacket {
        let p = s.packet.as_ref().unwrap();
        crate::quadrature::barrier_overlap(&GaussianPacket2D::new(p.center, p.momentum, p.sigma)?)
            .map(|o| o.overlap_mass)
    } else {
        None
    };
    let seeds = circle_seeds(&s.circle);
    let started = Instant::now();
    let trajectories: Vec<Trajectory> = in_pool(opts.threads, || {
        seeds
            .par_iter()
            .map(|&seed| {
                integrate(
                    seed,
                    s.circle.t_init,
                    s.t_end,
                    s.h,
                    &field,
                    StepGuard::default(),
                )
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut status_counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for t in &trajectories {
        *status_counts.entry(t.status.name()).or_default() += 1;
    }

    std::fs::create_dir_all(&opts.out_dir)
        .map_err(|e| Error::Io(format!("creating {}: {e}", opts.out_dir.display())))?;
    let trajectory_path = opts.out_dir.join(&s.trajectory_file);
    std::fs::write(&trajectory_path, render_trajectories(&trajectories))
        .map_err(|e| Error::Io(format!("writing {}: {e}", trajectory_path.display())))?;

    let density_path = match &s.density {
        Some(spec) => Some(write_density(&s, field.as_ref(), spec, opts)?),
        None => None,
    };

    Ok(RunReport {
        scenario: s.name.clone(),
        trajectories: trajectories.len(),
        status_counts,
        trajectory_path,
        density_path,
        wall_seconds: started.elapsed().as_secs_f64(),
        overlap_warning,
    })
}

/// Evaluate |psi| on the grid, row-major (rows scan y from y_lo to y_hi,
/// columns scan x). Barrier-tip cells carry a NaN sentinel.
pub fn sample_density(
    field: &(dyn QuantumField + Send + Sync),
    spec: &DensityGridSpec,
    threads: Option<usize>,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let b = spec.bounds;
    let nx = spec.nx;
    let rows: Vec<Result<Vec<f64>>> = in_pool(threads, || {
        (0..spec.ny)
            .into_par_iter()
            .map(|iy| {
                let y = b.y_lo + (b.y_hi - b.y_lo) * iy as f64 / (spec.ny - 1) as f64;
                let mut row = Vec::with_capacity(nx);
                for ix in 0..nx {
                    let x = b.x_lo + (b.x_hi - b.x_lo) * ix as f64 / (nx - 1) as f64;
                    let p = Vec2::new(x, y);
                    if p.norm() < crate::halfline::TIP_EPS {
                        row.push(f64::NAN);
                        continue;
                    }
                    row.push(field.psi(p, spec.time)?.norm());
                }
                Ok(row)
            })
            .collect()
    })?;
    let mut grid = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        grid.extend(row?);
    }
    Ok(grid)
}

/// Write the density grid next to the trajectory file and return its path.
pub fn write_density(
    s: &Scenario,
    field: &(dyn QuantumField + Send + Sync),
    spec: &DensityGridSpec,
    opts: &RunOptions,
) -> Result<PathBuf> {
    let grid = sample_density(field, spec, opts.threads)?;
    std::fs::create_dir_all(&opts.out_dir)
        .map_err(|e| Error::Io(format!("creating {}: {e}", opts.out_dir.display())))?;
    let file = s
        .density_file
        .clone()
        .unwrap_or_else(|| format!("{}_density.csv", s.name));
    let path = opts.out_dir.join(file);
    std::fs::write(&path, render_density(s, spec, &grid))
        .map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Delimited text: header row, then one line per sample with the owning
/// trajectory id and its final status. 17 significant digits make reruns
/// byte-identical.
pub fn render_trajectories(trajectories: &[Trajectory]) -> String {
    let mut out = String::from("traj_id,t,x,y,status\n");
    for (id, traj) in trajectories.iter().enumerate() {
        for &(t, p) in &traj.samples {
            let _ = writeln!(
                out,
                "{id},{},{},{},{}",
                fmt_f(t),
                fmt_f(p.x),
                fmt_f(p.y),
                traj.status.name()
            );
        }
    }
    out
}

fn field_description(s: &Scenario) -> String {
    let mut d = format!("{} bc={}", s.kind.name(), s.bc.name());
    if let Some(p) = &s.packet {
        let _ = write!(
            d,
            " center=({},{}) momentum=({},{}) sigma={}",
            fmt_f(p.center.x),
            fmt_f(p.center.y),
            fmt_f(p.momentum.x),
            fmt_f(p.momentum.y),
            fmt_f(p.sigma)
        );
    }
    if let Some(src) = &s.source {
        let _ = write!(d, " source=({},{})", fmt_f(src.x), fmt_f(src.y));
    }
    if let Some(w) = &s.wave {
        let _ = write!(d, " k0={} theta0={}", fmt_f(w.k0), fmt_f(w.theta0));
    }
    d
}

/// Four-line header (bounds, resolution, time, field description) followed
/// by the row-major values, one grid row per line.
pub fn render_density(s: &Scenario, spec: &DensityGridSpec, grid: &[f64]) -> String {
    let b = spec.bounds;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# bounds: {} {} {} {}",
        fmt_f(b.x_lo),
        fmt_f(b.x_hi),
        fmt_f(b.y_lo),
        fmt_f(b.y_hi)
    );
    let _ = writeln!(out, "# resolution: {} {}", spec.nx, spec.ny);
    let _ = writeln!(out, "# time: {}", fmt_f(spec.time));
    let _ = writeln!(out, "# field: {}", field_description(s));
    for row in grid.chunks(spec.nx) {
        let line: Vec<String> = row
            .iter()
            .map(|v| {
                if v.is_nan() {
                    "nan".to_string()
                } else {
                    fmt_f(*v)
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TrajectoryStatus;

    #[test]
    fn canned_scenarios_all_parse() {
        for (name, text) in canned_scenarios() {
            let s = Scenario::parse(text).unwrap_or_else(|e| panic!("canned scenario {name}: {e}"));
            assert_eq!(&s.name, name);
            build_field(&s).unwrap_or_else(|e| panic!("building {name}: {e}"));
        }
    }

    #[test]
    fn canned_scenarios_cover_every_field_class() {
        let mut kinds: Vec<FieldKind> = canned_scenarios()
            .iter()
            .map(|(_, text)| Scenario::parse(text).unwrap().kind)
            .collect();
        kinds.dedup();
        for kind in [
            FieldKind::WallPacket,
            FieldKind::HalflinePacket,
            FieldKind::HalflinePropagator,
            FieldKind::PlaneWave,
            FieldKind::PlaneWaveDirichlet,
        ] {
            assert!(kinds.contains(&kind), "missing canned {kind:?}");
        }
    }

    #[test]
    fn trajectory_rendering_is_stable() {
        let traj = Trajectory {
            samples: vec![(0.01, Vec2::new(1.0, 2.0)), (0.02, Vec2::new(1.5, 2.5))],
            status: TrajectoryStatus::Completed,
        };
        let text = render_trajectories(&[traj.clone(), traj]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "traj_id,t,x,y,status");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,1.0000000000000000e-2,"));
        assert!(lines[3].starts_with("1,"));
        assert!(lines[1].ends_with(",completed"));
    }
}
