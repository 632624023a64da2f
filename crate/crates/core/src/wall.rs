//! Half-plane wall at `y = 0`: image-method propagators, evolved
//! symmetrised packets, and closed-form guidance velocities for Neumann and
//! Dirichlet conditions on the wall. Motion along `x` is free, so 2D states
//! are products of a free 1D packet in `x` and a wall packet in `y`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::dynamics::{QuantumField, VelocityField};
use crate::error::{Error, Result};
use crate::freespace::{
    free_gaussian_psi_1d, free_gaussian_velocity_1d, free_propagator_1d, spreading_tau,
    GaussianPacket1D,
};
use crate::geometry::Vec2;
use crate::specfun::erf_complex;
use crate::BoundaryCondition;

/// Relative node threshold on the O(1)-normalised interference bracket.
const NODE_EPS: f64 = 1e-12;

/// Symmetrised 1D Gaussian packet on the half-line `y >= 0`: a Gaussian at
/// `center > 0` with momentum `momentum` plus (Neumann) or minus (Dirichlet)
/// its mirror image, scaled by the closed-form normalisation constant
/// `norm_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallPacket1D {
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
    /// Normalisation constant `a`, recomputed from `(momentum, width, hbar)`.
    pub norm_a: f64,
}

impl WallPacket1D {
    pub fn new(center: f64, momentum: f64, width: f64, consts: &PhysicalConstants) -> Result<Self> {
        if !(center > 0.0) || !center.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "wall packet centre must be positive (got {center})"
            )));
        }
        if !(width > 0.0) || !width.is_finite() || !momentum.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "wall packet needs width > 0 and finite momentum \
                 (width = {width}, momentum = {momentum})"
            )));
        }
        let norm_a = normalisation_constant(momentum, width, consts)?;
        Ok(Self {
            center,
            momentum,
            width,
            norm_a,
        })
    }
}

/// `a = (2 pi)^{-1/4} [1 + e^{-2 (p sigma/hbar)^2} (1 - Re erf(-2 i p sigma/hbar))]^{-1/2}`.
///
/// `erf` of a purely imaginary argument is purely imaginary, so the real
/// part is identically zero; it is still evaluated (and asserted zero) to
/// keep the formula as stated.
fn normalisation_constant(momentum: f64, width: f64, consts: &PhysicalConstants) -> Result<f64> {
    let q = momentum * width / consts.hbar;
    let decay = (-2.0 * q * q).exp();
    let re_erf = if decay > 0.0 && (2.0 * q).abs() <= 26.0 {
        let v = erf_complex(Complex64::new(0.0, -2.0 * q))?;
        debug_assert_eq!(v.re, 0.0);
        v.re
    } else {
        // decay has underflowed (or erf would overflow); the whole term is 0
        0.0
    };
    Ok((2.0 * PI).powf(-0.25) * (1.0 + decay * (1.0 - re_erf)).powf(-0.5))
}

/// Initial packet on the half line, `y >= 0`.
pub fn wall_initial_psi(
    y: f64,
    packet: &WallPacket1D,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!(
            "wall states live on y >= 0 (got {y})"
        )));
    }
    let s = packet.width;
    let g = |center: f64, p: f64| -> Complex64 {
        Complex64::new(
            -(y - center) * (y - center) / (4.0 * s * s),
            p * y / consts.hbar,
        )
        .exp()
    };
    let direct = g(packet.center, packet.momentum);
    let mirror = g(-packet.center, -packet.momentum);
    Ok(packet.norm_a / s.sqrt() * (direct + bc.epsilon() * mirror))
}

/// Image-method 1D propagator on the half line:
/// `K(y,t|z,0) = K_free(y,z,t) +/- K_free(y,-z,t)` for `y, z > 0`, `t > 0`.
pub fn wall_propagator_1d(
    y: f64,
    z: f64,
    t: f64,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    if !(y > 0.0) || !(z > 0.0) {
        return Err(Error::Domain(format!(
            "wall propagator needs y, z > 0 (got y = {y}, z = {z})"
        )));
    }
    let direct = free_propagator_1d(y, z, t, consts)?;
    let image = free_propagator_1d(y, -z, t, consts)?;
    Ok(direct + bc.epsilon() * image)
}

/// The shared factors of the evolved wall packet
/// `psi = R(t) e^{i phi(y,t)} (e^{i s/hbar} +/- e^{-i s/hbar})`.
///
/// `phi` and `s` are complex; both are evaluated in a form free of the 1/t
/// singularity so `t = 0` reproduces the initial packet exactly, and
/// `s(0, t) = 0` for all `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallPacketFactors {
    pub r: Complex64,
    pub phi: Complex64,
    pub s: Complex64,
}

pub fn wall_packet_factors(
    y: f64,
    t: f64,
    packet: &WallPacket1D,
    consts: &PhysicalConstants,
) -> WallPacketFactors {
    let sigma = packet.width;
    let tau = spreading_tau(t, sigma, consts);
    let one_plus = Complex64::new(1.0, tau);
    let (yb, p, hbar, m) = (packet.center, packet.momentum, consts.hbar, consts.mass);

    let r = packet.norm_a * Complex64::from_polar(1.0, p * yb / hbar)
        / (sigma.sqrt() * one_plus.sqrt());
    let phi = Complex64::new(
        -p * yb / hbar - p * p * t / (2.0 * m * hbar),
        (y * y + yb * yb) / (4.0 * sigma * sigma),
    ) / one_plus;
    let s = Complex64::new(p * y, -hbar * yb * y / (2.0 * sigma * sigma)) / one_plus;
    WallPacketFactors { r, phi, s }
}

/// Evolved wall packet at `y >= 0`, `t >= 0`.
pub fn wall_packet_psi(
    y: f64,
    t: f64,
    packet: &WallPacket1D,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!(
            "wall states live on y >= 0 (got {y})"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "packet evolution needs t >= 0 (got {t})"
        )));
    }
    let f = wall_packet_factors(y, t, packet, consts);
    let i = Complex64::new(0.0, 1.0);
    // combine exponents: each term is a travelling Gaussian with Re <= 0
    let z1 = i * f.phi + i * f.s / consts.hbar;
    let z2 = i * f.phi - i * f.s / consts.hbar;
    Ok(f.r * (z1.exp() + bc.epsilon() * z2.exp()))
}

/// Guidance velocity of the evolved 1D wall packet.
pub fn wall_velocity_1d(
    y: f64,
    t: f64,
    packet: &WallPacket1D,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<f64> {
    // y = 0 under Dirichlet falls through to the node error below
    if !(y >= 0.0) {
        return Err(Error::Domain(format!(
            "wall velocity needs y >= 0 (got {y})"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("velocity needs t >= 0 (got {t})")));
    }
    let sigma = packet.width;
    let tau = spreading_tau(t, sigma, consts);
    let one_plus = Complex64::new(1.0, tau);
    let alpha = consts.hbar / (2.0 * consts.mass * sigma * sigma);

    let f = wall_packet_factors(y, t, packet, consts);
    let w = Complex64::new(0.0, 1.0) * f.s / consts.hbar;
    let ratio = interference_ratio(w, bc.epsilon()).ok_or_else(|| {
        let psi_abs = wall_packet_psi(y, t, packet, bc, consts)
            .map(|p| p.norm())
            .unwrap_or(0.0);
        Error::NodeSingularity { psi_abs }
    })?;

    let spread_term = alpha * alpha * t * y / (1.0 + tau * tau);
    let coeff = Complex64::new(packet.momentum / consts.mass, -alpha * packet.center) / one_plus;
    Ok(spread_term + (coeff * ratio).re)
}

/// `(e^w - eps e^{-w}) / (e^w + eps e^{-w})`, evaluated by factoring out the
/// dominant exponential so nothing overflows; `None` at a node of the
/// denominator.
fn interference_ratio(w: Complex64, eps: f64) -> Option<Complex64> {
    let (num, den) = if w.re >= 0.0 {
        let d = (-2.0 * w).exp();
        (1.0 - eps * d, 1.0 + eps * d)
    } else {
        let d = (2.0 * w).exp();
        (d - eps, d + eps)
    };
    if den.norm() < NODE_EPS {
        None
    } else {
        Some(num / den)
    }
}

/// 2D packet against the wall: free Gaussian along `x`, wall packet along `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallPacket2D {
    pub along: GaussianPacket1D,
    pub normal: WallPacket1D,
}

/// Guidance velocity of the 2D wall packet: the `x` component is the free
/// 1D Gaussian velocity, the `y` component the wall velocity.
pub fn wall_velocity_2d(
    x: Vec2,
    t: f64,
    packet: &WallPacket2D,
    bc: BoundaryCondition,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    Ok(Vec2::new(
        free_gaussian_velocity_1d(x.x, t, &packet.along, consts)?,
        wall_velocity_1d(x.y, t, &packet.normal, bc, consts)?,
    ))
}

/// Guidance velocity of the Neumann wall propagator used as the state:
/// exactly `y/t` (independent of the source position).
pub fn wall_propagator_velocity(y: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "propagator velocity needs t > 0 (got {t})"
        )));
    }
    if !(y > 0.0) {
        return Err(Error::Domain(format!(
            "wall propagator velocity needs y > 0 (got {y})"
        )));
    }
    Ok(y / t)
}

/// Evolved 2D wall packet as an integrable velocity field.
#[derive(Debug, Clone)]
pub struct WallPacketField {
    pub packet: WallPacket2D,
    pub bc: BoundaryCondition,
    pub consts: PhysicalConstants,
}

impl VelocityField for WallPacketField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        wall_velocity_2d(x, t, &self.packet, self.bc, &self.consts)
    }
}

impl QuantumField for WallPacketField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        Ok(
            free_gaussian_psi_1d(x.x, t, &self.packet.along, &self.consts)?
                * wall_packet_psi(x.y, t, &self.packet.normal, self.bc, &self.consts)?,
        )
    }
}

/// Wall propagator (delta source) as an integrable velocity field:
/// `v = ((x - x0)/t, y/t)` on `y > 0`.
#[derive(Debug, Clone)]
pub struct WallPropagatorField {
    pub source: Vec2,
    pub consts: PhysicalConstants,
}

impl VelocityField for WallPropagatorField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "propagator velocity needs t > 0 (got {t})"
            )));
        }
        Ok(Vec2::new(
            (x.x - self.source.x) / t,
            wall_propagator_velocity(x.y, t)?,
        ))
    }
}

impl QuantumField for WallPropagatorField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        Ok(free_propagator_1d(x.x, self.source.x, t, &self.consts)?
            * wall_propagator_1d(
                x.y,
                self.source.y,
                t,
                BoundaryCondition::Neumann,
                &self.consts,
            )?)
    }
}
