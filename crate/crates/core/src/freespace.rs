//! Free-particle baseline: the free propagator, evolving Gaussian packets and
//! their guidance velocity fields. These are also the building blocks for the
//! method-of-images constructions in [`crate::wall`].

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::PhysicalConstants;
use crate::dynamics::{QuantumField, VelocityField};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Initial 1D Gaussian packet: centre `x_bar`, momentum `p_bar`, width
/// `sigma` (standard deviation of the initial position density).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket1D {
    pub center: f64,
    pub momentum: f64,
    pub width: f64,
}

impl GaussianPacket1D {
    pub fn new(center: f64, momentum: f64, width: f64) -> Result<Self> {
        if !center.is_finite() || !momentum.is_finite() || !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Gaussian packet needs finite parameters and width > 0 \
                 (center = {center}, momentum = {momentum}, width = {width})"
            )));
        }
        Ok(Self {
            center,
            momentum,
            width,
        })
    }
}

/// Isotropic 2D Gaussian packet (equal width in both directions, so the
/// evolution is an exact product of 1D packets).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket2D {
    pub center: Vec2,
    pub momentum: Vec2,
    pub width: f64,
}

impl GaussianPacket2D {
    pub fn new(center: Vec2, momentum: Vec2, width: f64) -> Result<Self> {
        if !center.is_finite() || !momentum.is_finite() || !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Gaussian packet needs finite parameters and width > 0 \
                 (center = {center:?}, momentum = {momentum:?}, width = {width})"
            )));
        }
        Ok(Self {
            center,
            momentum,
            width,
        })
    }

    pub fn axis_x(&self) -> GaussianPacket1D {
        GaussianPacket1D {
            center: self.center.x,
            momentum: self.momentum.x,
            width: self.width,
        }
    }

    pub fn axis_y(&self) -> GaussianPacket1D {
        GaussianPacket1D {
            center: self.center.y,
            momentum: self.momentum.y,
            width: self.width,
        }
    }
}

/// Dimensionless spreading parameter `tau = hbar t / (2 m sigma^2)`.
#[inline]
pub(crate) fn spreading_tau(t: f64, sigma: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * t / (2.0 * consts.mass * sigma * sigma)
}

/// Free 2D propagator `K(x, t | x0, 0) = (m / 2 pi i hbar t) e^{i m |x-x0|^2 / 2 hbar t}`.
pub fn free_propagator(x: Vec2, x0: Vec2, t: f64, consts: &PhysicalConstants) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "free propagator is singular as t -> 0+ (got t = {t})"
        )));
    }
    let pref = consts.mass / (2.0 * PI * consts.hbar * t);
    let phase = consts.mass * (x - x0).norm_sq() / (2.0 * consts.hbar * t);
    // 1/i = -i
    let (s, c) = phase.sin_cos();
    Ok(Complex64::new(0.0, -pref) * Complex64::new(c, s))
}

/// Free 1D propagator `sqrt(m / 2 pi i hbar t) e^{i m (x-x0)^2 / 2 hbar t}`.
pub fn free_propagator_1d(
    x: f64,
    x0: f64,
    t: f64,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "free propagator is singular as t -> 0+ (got t = {t})"
        )));
    }
    let pref = (consts.mass / (2.0 * PI * consts.hbar * t)).sqrt();
    // sqrt(1/i) = e^{-i pi/4}
    let root_inv_i = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let phase = consts.mass * (x - x0) * (x - x0) / (2.0 * consts.hbar * t);
    let (s, c) = phase.sin_cos();
    Ok(pref * root_inv_i * Complex64::new(c, s))
}

/// Evolved free 1D Gaussian packet at `t >= 0`.
///
/// Evaluated in the form
/// `psi = (2 pi sigma^2)^{-1/4} (1+i tau)^{-1/2} e^{i p x_bar / hbar}
///        exp{ [ -(x-x_bar)^2/4 sigma^2 + i p (x-x_bar)/hbar - i p^2 t/2 m hbar ] / (1+i tau) }`
/// which is algebraically identical to the propagated packet for `t > 0` and
/// reduces exactly to the initial packet at `t = 0`.
pub fn free_gaussian_psi_1d(
    x: f64,
    t: f64,
    packet: &GaussianPacket1D,
    consts: &PhysicalConstants,
) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "packet evolution needs t >= 0 (got {t})"
        )));
    }
    let sigma = packet.width;
    let tau = spreading_tau(t, sigma, consts);
    let one_plus = Complex64::new(1.0, tau);
    let dx = x - packet.center;
    let p = packet.momentum;
    let exponent = Complex64::new(
        -dx * dx / (4.0 * sigma * sigma),
        p * dx / consts.hbar - p * p * t / (2.0 * consts.mass * consts.hbar),
    ) / one_plus;
    let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
    let (s, c) = (p * packet.center / consts.hbar).sin_cos();
    Ok(norm / one_plus.sqrt() * Complex64::new(c, s) * exponent.exp())
}

/// Guidance velocity of the free 1D Gaussian packet,
/// `v = [p/m + (hbar t/2 m sigma^2)^2 (x - x_bar)/t] / [1 + (hbar t/2 m sigma^2)^2]`,
/// with the `t -> 0` limit (`p/m`) built in.
pub fn free_gaussian_velocity_1d(
    x: f64,
    t: f64,
    packet: &GaussianPacket1D,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("velocity needs t >= 0 (got {t})")));
    }
    let tau = spreading_tau(t, packet.width, consts);
    // tau^2 / t = alpha^2 t with alpha = hbar / 2 m sigma^2: finite at t = 0
    let alpha = consts.hbar / (2.0 * consts.mass * packet.width * packet.width);
    let spread = alpha * alpha * t * (x - packet.center);
    Ok((packet.momentum / consts.mass + spread) / (1.0 + tau * tau))
}

/// Guidance velocity of the isotropic free 2D Gaussian packet.
pub fn free_gaussian_velocity(
    x: Vec2,
    t: f64,
    packet: &GaussianPacket2D,
    consts: &PhysicalConstants,
) -> Result<Vec2> {
    Ok(Vec2::new(
        free_gaussian_velocity_1d(x.x, t, &packet.axis_x(), consts)?,
        free_gaussian_velocity_1d(x.y, t, &packet.axis_y(), consts)?,
    ))
}

/// Guidance velocity of the propagator used as the state: `v = (x - x0)/t`,
/// straight rays out of the source.
pub fn free_propagator_velocity(x: Vec2, x0: Vec2, t: f64) -> Result<Vec2> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "propagator velocity needs t > 0 (got {t})"
        )));
    }
    Ok((x - x0) / t)
}

/// Free 2D Gaussian packet as an integrable velocity field.
#[derive(Debug, Clone)]
pub struct FreePacketField {
    pub packet: GaussianPacket2D,
    pub consts: PhysicalConstants,
}

impl VelocityField for FreePacketField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        free_gaussian_velocity(x, t, &self.packet, &self.consts)
    }
}

impl QuantumField for FreePacketField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        Ok(
            free_gaussian_psi_1d(x.x, t, &self.packet.axis_x(), &self.consts)?
                * free_gaussian_psi_1d(x.y, t, &self.packet.axis_y(), &self.consts)?,
        )
    }
}

/// Free propagator as an integrable velocity field (delta source at `source`).
#[derive(Debug, Clone)]
pub struct FreePropagatorField {
    pub source: Vec2,
    pub consts: PhysicalConstants,
}

impl VelocityField for FreePropagatorField {
    fn velocity(&self, x: Vec2, t: f64) -> Result<Vec2> {
        free_propagator_velocity(x, self.source, t)
    }
}

impl QuantumField for FreePropagatorField {
    fn psi(&self, x: Vec2, t: f64) -> Result<Complex64> {
        free_propagator(x, self.source, t, &self.consts)
    }
}
