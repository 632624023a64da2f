//! Declarative description of one run, with a flat `key = value` text format
//! (dotted section keys, `#` comments). A written scenario re-parses to an
//! identical value.

use std::collections::BTreeMap;

use crate::constants::PhysicalConstants;
use crate::dynamics::InitialCircle;
use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};
use crate::BoundaryCondition;

/// Which state drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    FreePacket,
    FreePropagator,
    WallPacket,
    WallPropagator,
    HalflinePropagator,
    HalflinePacket,
    PlaneWave,
    PlaneWaveDirichlet,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::FreePacket => "free_packet",
            FieldKind::FreePropagator => "free_propagator",
            FieldKind::WallPacket => "wall_packet",
            FieldKind::WallPropagator => "wall_propagator",
            FieldKind::HalflinePropagator => "halfline_propagator",
            FieldKind::HalflinePacket => "halfline_packet",
            FieldKind::PlaneWave => "plane_wave",
            FieldKind::PlaneWaveDirichlet => "plane_wave_dirichlet",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "free_packet" => FieldKind::FreePacket,
            "free_propagator" => FieldKind::FreePropagator,
            "wall_packet" => FieldKind::WallPacket,
            "wall_propagator" => FieldKind::WallPropagator,
            "halfline_propagator" => FieldKind::HalflinePropagator,
            "halfline_packet" => FieldKind::HalflinePacket,
            "plane_wave" => FieldKind::PlaneWave,
            "plane_wave_dirichlet" => FieldKind::PlaneWaveDirichlet,
            other => return Err(Error::Config(format!("unknown field.kind `{other}`"))),
        })
    }

    pub fn needs_packet(self) -> bool {
        matches!(
            self,
            FieldKind::FreePacket | FieldKind::WallPacket | FieldKind::HalflinePacket
        )
    }

    pub fn needs_source(self) -> bool {
        matches!(
            self,
            FieldKind::FreePropagator | FieldKind::WallPropagator | FieldKind::HalflinePropagator
        )
    }

    pub fn needs_wave(self) -> bool {
        matches!(self, FieldKind::PlaneWave | FieldKind::PlaneWaveDirichlet)
    }
}

/// Initial-packet parameters as written in a scenario file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketParams {
    pub center: Vec2,
    pub momentum: Vec2,
    pub sigma: f64,
}

/// Incident plane-wave parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub k0: f64,
    pub theta0: f64,
}

/// A rectangular |psi| sampling grid evaluated at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityGridSpec {
    pub bounds: Rect,
    pub nx: usize,
    pub ny: usize,
    pub time: f64,
}

impl DensityGridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Config(format!(
                "density resolution must be at least 2x2 (got {}x{})",
                self.nx, self.ny
            )));
        }
        if !(self.bounds.x_lo < self.bounds.x_hi) || !(self.bounds.y_lo < self.bounds.y_hi) {
            return Err(Error::Config(format!(
                "degenerate density bounds {:?}",
                self.bounds
            )));
        }
        Ok(())
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub kind: FieldKind,
    pub bc: BoundaryCondition,
    pub constants: PhysicalConstants,
    pub packet: Option<PacketParams>,
    pub source: Option<Vec2>,
    pub wave: Option<WaveParams>,
    /// Fixed quadrature order for the half-line packet; `None` keeps the
    /// adaptive default.
    pub order: Option<usize>,
    pub circle: InitialCircle,
    pub h: f64,
    pub t_end: f64,
    pub trajectory_file: String,
    pub density: Option<DensityGridSpec>,
    pub density_file: Option<String>,
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

impl Scenario {
    /// Parse the flat key-value format. Unknown keys are errors.
    pub fn parse(text: &str) -> Result<Scenario> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                return Err(Error::Config(format!("duplicate key `{key}`")));
            }
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Scenario> {
        fn take(map: &mut BTreeMap<String, String>, key: &str) -> Option<String> {
            map.remove(key)
        }
        fn take_f64(map: &mut BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
            take(map, key)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a number")))
                })
                .transpose()
        }
        fn take_usize(map: &mut BTreeMap<String, String>, key: &str) -> Result<Option<usize>> {
            take(map, key)
                .map(|v| {
                    v.parse::<usize>()
                        .map_err(|_| Error::Config(format!("key `{key}`: `{v}` is not a count")))
                })
                .transpose()
        }
        fn require<T>(v: Option<T>, key: &str) -> Result<T> {
            v.ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
        }

        let name = require(take(&mut map, "name"), "name")?;
        let kind = FieldKind::parse(&require(take(&mut map, "field.kind"), "field.kind")?)?;

        let bc = match take(&mut map, "bc") {
            Some(v) => v.parse::<BoundaryCondition>()?,
            None => match kind {
                FieldKind::PlaneWaveDirichlet => BoundaryCondition::Dirichlet,
                _ => BoundaryCondition::Neumann,
            },
        };
        match kind {
            FieldKind::PlaneWaveDirichlet if bc != BoundaryCondition::Dirichlet => {
                return Err(Error::Config(
                    "field.kind plane_wave_dirichlet requires bc = dirichlet".into(),
                ));
            }
            FieldKind::PlaneWave if bc != BoundaryCondition::Neumann => {
                return Err(Error::Config(
                    "field.kind plane_wave is the Neumann state; \
                     use plane_wave_dirichlet for bc = dirichlet"
                        .into(),
                ));
            }
            _ => {}
        }

        let hbar = take_f64(&mut map, "constants.hbar")?.unwrap_or(1.0);
        let mass = take_f64(&mut map, "constants.mass")?.unwrap_or(0.5);
        let constants = PhysicalConstants::new(hbar, mass)
            .map_err(|e| Error::Config(format!("constants: {e}")))?;

        let packet = {
            let cx = take_f64(&mut map, "packet.center_x")?;
            let cy = take_f64(&mut map, "packet.center_y")?;
            let px = take_f64(&mut map, "packet.momentum_x")?;
            let py = take_f64(&mut map, "packet.momentum_y")?;
            let sigma = take_f64(&mut map, "packet.sigma")?;
            match (cx, cy, sigma) {
                (None, None, None) => {
                    if px.is_some() || py.is_some() {
                        return Err(Error::Config(
                            "packet.momentum_* given without packet.center_* / packet.sigma".into(),
                        ));
                    }
                    None
                }
                (Some(cx), Some(cy), Some(sigma)) => Some(PacketParams {
                    center: Vec2::new(cx, cy),
                    momentum: Vec2::new(px.unwrap_or(0.0), py.unwrap_or(0.0)),
                    sigma,
                }),
                _ => {
                    return Err(Error::Config(
                        "incomplete packet section: need packet.center_x, packet.center_y \
                         and packet.sigma"
                            .into(),
                    ))
                }
            }
        };

        let source = {
            let sx = take_f64(&mut map, "source.x")?;
            let sy = take_f64(&mut map, "source.y")?;
            match (sx, sy) {
                (None, None) => None,
                (Some(x), Some(y)) => Some(Vec2::new(x, y)),
                _ => {
                    return Err(Error::Config(
                        "incomplete source section: need source.x and source.y".into(),
                    ))
                }
            }
        };

        let wave = {
            let k0 = take_f64(&mut map, "wave.k0")?;
            let theta0 = take_f64(&mut map, "wave.theta0")?;
            match (k0, theta0) {
                (None, None) => None,
                (Some(k0), Some(theta0)) => Some(WaveParams { k0, theta0 }),
                _ => {
                    return Err(Error::Config(
                        "incomplete wave section: need wave.k0 and wave.theta0".into(),
                    ))
                }
            }
        };

        if kind.needs_packet() && packet.is_none() {
            return Err(Error::Config(format!(
                "field.kind {} requires the packet.* section",
                kind.name()
            )));
        }
        if kind.needs_source() && source.is_none() {
            return Err(Error::Config(format!(
                "field.kind {} requires the source.* section",
                kind.name()
            )));
        }
        if kind.needs_wave() && wave.is_none() {
            return Err(Error::Config(format!(
                "field.kind {} requires the wave.* section",
                kind.name()
            )));
        }
        if !kind.needs_packet() && packet.is_some() {
            return Err(Error::Config(format!(
                "field.kind {} does not take a packet.* section",
                kind.name()
            )));
        }
        if !kind.needs_source() && source.is_some() {
            return Err(Error::Config(format!(
                "field.kind {} does not take a source.* section",
                kind.name()
            )));
        }
        if !kind.needs_wave() && wave.is_some() {
            return Err(Error::Config(format!(
                "field.kind {} does not take a wave.* section",
                kind.name()
            )));
        }

        let order = take_usize(&mut map, "quadrature.order")?;
        if order.is_some() && kind != FieldKind::HalflinePacket {
            return Err(Error::Config(
                "quadrature.order only applies to field.kind halfline_packet".into(),
            ));
        }

        let default_center = packet.map(|p| p.center).or(source).unwrap_or(Vec2::ZERO);
        let circle_center = Vec2::new(
            take_f64(&mut map, "circle.center_x")?.unwrap_or(default_center.x),
            take_f64(&mut map, "circle.center_y")?.unwrap_or(default_center.y),
        );
        let rho = require(take_f64(&mut map, "circle.rho")?, "circle.rho")?;
        let count = take_usize(&mut map, "circle.count")?.unwrap_or(16);
        let t_init = require(take_f64(&mut map, "circle.t_init")?, "circle.t_init")?;
        let circle = InitialCircle::new(circle_center, rho, count, t_init)
            .map_err(|e| Error::Config(format!("circle: {e}")))?;

        let h = take_f64(&mut map, "integration.h")?.unwrap_or(1e-3);
        let t_end = require(
            take_f64(&mut map, "integration.t_end")?,
            "integration.t_end",
        )?;
        if !(t_end > t_init) || !(h > 0.0) {
            return Err(Error::Config(format!(
                "integration needs t_end > circle.t_init and h > 0 \
                 (t_end = {t_end}, t_init = {t_init}, h = {h})"
            )));
        }

        let trajectory_file = take(&mut map, "output.trajectories")
            .unwrap_or_else(|| format!("{name}_trajectories.csv"));

        let density =
            {
                let x_lo = take_f64(&mut map, "density.x_lo")?;
                let x_hi = take_f64(&mut map, "density.x_hi")?;
                let y_lo = take_f64(&mut map, "density.y_lo")?;
                let y_hi = take_f64(&mut map, "density.y_hi")?;
                let nx = take_usize(&mut map, "density.nx")?;
                let ny = take_usize(&mut map, "density.ny")?;
                let time = take_f64(&mut map, "density.time")?;
                match (x_lo, x_hi, y_lo, y_hi, nx, ny, time) {
                    (None, None, None, None, None, None, None) => None,
                    (Some(a), Some(b), Some(c), Some(d), Some(nx), Some(ny), Some(time)) => {
                        let spec = DensityGridSpec {
                            bounds: Rect::new(a, b, c, d),
                            nx,
                            ny,
                            time,
                        };
                        spec.validate()?;
                        Some(spec)
                    }
                    _ => return Err(Error::Config(
                        "incomplete density section: need density.{x_lo,x_hi,y_lo,y_hi,nx,ny,time}"
                            .into(),
                    )),
                }
            };
        let density_file = take(&mut map, "output.density");
        let density_file = match (&density, density_file) {
            (None, Some(_)) => {
                return Err(Error::Config(
                    "output.density given without a density.* section".into(),
                ))
            }
            (None, None) => None,
            (Some(_), f) => Some(f.unwrap_or_else(|| format!("{name}_density.csv"))),
        };

        if let Some(stray) = map.keys().next() {
            return Err(Error::Config(format!("unknown key `{stray}`")));
        }

        Ok(Scenario {
            name,
            kind,
            bc,
            constants,
            packet,
            source,
            wave,
            order,
            circle,
            h,
            t_end,
            trajectory_file,
            density,
            density_file,
        })
    }

    /// Canonical text form; `parse` of the output reproduces the value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("name", self.name.clone());
        push("field.kind", self.kind.name().to_string());
        push("bc", self.bc.name().to_string());
        push("constants.hbar", fmt_f(self.constants.hbar));
        push("constants.mass", fmt_f(self.constants.mass));
        if let Some(p) = &self.packet {
            push("packet.center_x", fmt_f(p.center.x));
            push("packet.center_y", fmt_f(p.center.y));
            push("packet.momentum_x", fmt_f(p.momentum.x));
            push("packet.momentum_y", fmt_f(p.momentum.y));
            push("packet.sigma", fmt_f(p.sigma));
        }
        if let Some(s) = &self.source {
            push("source.x", fmt_f(s.x));
            push("source.y", fmt_f(s.y));
        }
        if let Some(w) = &self.wave {
            push("wave.k0", fmt_f(w.k0));
            push("wave.theta0", fmt_f(w.theta0));
        }
        if let Some(order) = self.order {
            push("quadrature.order", order.to_string());
        }
        push("circle.center_x", fmt_f(self.circle.center.x));
        push("circle.center_y", fmt_f(self.circle.center.y));
        push("circle.rho", fmt_f(self.circle.radius));
        push("circle.count", self.circle.count.to_string());
        push("circle.t_init", fmt_f(self.circle.t_init));
        push("integration.h", fmt_f(self.h));
        push("integration.t_end", fmt_f(self.t_end));
        push("output.trajectories", self.trajectory_file.clone());
        if let Some(d) = &self.density {
            push("density.x_lo", fmt_f(d.bounds.x_lo));
            push("density.x_hi", fmt_f(d.bounds.x_hi));
            push("density.y_lo", fmt_f(d.bounds.y_lo));
            push("density.y_hi", fmt_f(d.bounds.y_hi));
            push("density.nx", d.nx.to_string());
            push("density.ny", d.ny.to_string());
            push("density.time", fmt_f(d.time));
            push(
                "output.density",
                self.density_file
                    .clone()
                    .unwrap_or_else(|| format!("{}_density.csv", self.name)),
            );
        }
        out
    }
}
